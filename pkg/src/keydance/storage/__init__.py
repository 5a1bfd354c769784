"""
Tensor files, checkpoint containers, motion/music artifacts and manifests.
"""

from .tensor_file import (
    MAGIC, VERSION, DTYPE_F32,
    encode_tensor, decode_tensor, write_tensor, read_tensor
)
from .container import encode_container, decode_container, write_container, read_container
from .artifacts import (
    sidecar_path, save_motion, load_motion, save_music, load_music, load_keys, save_keys
)
from .manifest import MANIFEST_NAME, save_manifest, load_manifest, load_sample

__all__ = [
    'MAGIC', 'VERSION', 'DTYPE_F32',
    'encode_tensor', 'decode_tensor', 'write_tensor', 'read_tensor',
    'encode_container', 'decode_container', 'write_container', 'read_container',
    'sidecar_path', 'save_motion', 'load_motion', 'save_music', 'load_music', 'load_keys', 'save_keys',
    'MANIFEST_NAME', 'save_manifest', 'load_manifest', 'load_sample',
]
