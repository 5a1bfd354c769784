from .json_serializer import KeydanceSerializer, KeydanceBase, to_json, from_json
