from .keypose import KeyPoseEmbedding, embed_key_poses
from .local_pe import LocalPositionalEmbedding, local_positional_embedding
