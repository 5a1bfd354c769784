"""
JSON serializer for keydance domain objects.

Bulk arrays never go through JSON (they are stored as tensor files); this
serializer handles manifests, sidecars, configs and reports.
"""

from typing import Any, Dict, Type, Union
from enum import Enum
from pathlib import Path
import dataclasses
import json

import numpy as np
from pydantic import BaseModel, ConfigDict

class KeydanceSerializer:
    """Canonical JSON for keydance objects."""

    @staticmethod
    def _process_value(value: Any, depth: int = 0) -> Any:
        """
        Convert a single value into something json.dumps accepts.

        Args:
            value: Value to process
            depth: Current recursion depth

        Returns:
            Processed value
        """
        if depth > 10:
            return str(value)

        if value is None or isinstance(value, (bool, str)):
            return value

        if isinstance(value, BaseModel):
            return {
                k: KeydanceSerializer._process_value(v, depth + 1)
                for k, v in value.model_dump(exclude_none=True).items()
                if not isinstance(v, np.ndarray)
            }

        if dataclasses.is_dataclass(value) and not isinstance(value, type):
            return KeydanceSerializer._process_value(dataclasses.asdict(value), depth + 1)

        if isinstance(value, Enum):
            return value.value

        if isinstance(value, Path):
            return str(value)

        if isinstance(value, np.generic):
            return value.item()

        if isinstance(value, np.ndarray):
            return value.tolist()

        if isinstance(value, (list, tuple)):
            return [KeydanceSerializer._process_value(item, depth + 1) for item in value]

        if isinstance(value, dict):
            return {
                str(k): KeydanceSerializer._process_value(v, depth + 1)
                for k, v in value.items()
            }

        return value

    @staticmethod
    def to_json_string(data: Any, indent: int = None) -> str:
        """
        Convert data to a JSON string with standardized formatting.

        Args:
            data: Dictionary (or other JSON-able value) to convert
            indent: Pretty-print indentation, None for compact output

        Returns:
            JSON string with sorted keys
        """
        return json.dumps(
            KeydanceSerializer._process_value(data),
            sort_keys=True,
            ensure_ascii=True,
            indent=indent,
            separators=(',', ': ') if indent else (',', ':')
        )

    @staticmethod
    def serialize(obj: Any) -> Dict[str, Any]:
        """Serialize object to a JSON-safe dictionary."""
        return KeydanceSerializer._process_value(obj)

    @staticmethod
    def deserialize(data: Union[str, Dict[str, Any]], model_class: Type[BaseModel]) -> BaseModel:
        """
        Deserialize data to object.

        Args:
            data: JSON string or dictionary to deserialize
            model_class: Class to deserialize into

        Returns:
            Deserialized object
        """
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError:
                raise ValueError("Invalid JSON string")

        if not isinstance(data, dict):
            raise ValueError("Data must be a dictionary or JSON string")

        known = {k: v for k, v in data.items() if k in model_class.model_fields}
        return model_class.model_validate(known)

class KeydanceBase(BaseModel):
    """Base class for keydance domain objects."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, extra='forbid')

    def serialize(self) -> Dict[str, Any]:
        """Serialize object to dictionary (array fields are left out)."""
        return KeydanceSerializer.serialize(self)

    @classmethod
    def deserialize(cls, data: Union[str, Dict[str, Any]]) -> 'KeydanceBase':
        """Deserialize dictionary to object."""
        return KeydanceSerializer.deserialize(data, cls)

def to_json(obj: Any, indent: int = None) -> str:
    """Convert object to JSON string."""
    return KeydanceSerializer.to_json_string(obj, indent=indent)

def from_json(json_str: str, model_class: Type[KeydanceBase]) -> KeydanceBase:
    """Convert JSON string to object."""
    return KeydanceSerializer.deserialize(json_str, model_class)
