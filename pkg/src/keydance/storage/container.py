"""
storage/container.py
Named-tensor containers used for checkpoints.

Layout (little-endian): magic b"MDRC", version u16, count u32, then per
entry a u16 name length, the UTF-8 name, a u32 blob length and one MDRT blob.
Entries keep their insertion order.
"""

import struct
from pathlib import Path
from typing import Dict, Mapping, Union

import numpy as np

from ..utils.exceptions import FormatError
from ..utils.logging import get_logger
from .tensor_file import decode_tensor, encode_tensor

logger = get_logger(__name__)

CONTAINER_MAGIC = b"MDRC"
CONTAINER_VERSION = 1
_HEADER = struct.Struct('<4sHI')
_NAME_LEN = struct.Struct('<H')
_BLOB_LEN = struct.Struct('<I')

def encode_container(tensors: Mapping[str, np.ndarray]) -> bytes:
    parts = [_HEADER.pack(CONTAINER_MAGIC, CONTAINER_VERSION, len(tensors))]
    for name, array in tensors.items():
        encoded_name = name.encode('utf-8')
        if len(encoded_name) > 0xFFFF:
            raise FormatError(f"tensor name too long: {name[:40]}...")
        blob = encode_tensor(array)
        parts += [_NAME_LEN.pack(len(encoded_name)), encoded_name, _BLOB_LEN.pack(len(blob)), blob]
    return b''.join(parts)

def decode_container(buffer: bytes) -> Dict[str, np.ndarray]:
    if len(buffer) < _HEADER.size:
        raise FormatError("container header truncated")
    magic, version, count = _HEADER.unpack_from(buffer, 0)
    if magic != CONTAINER_MAGIC:
        raise FormatError(f"bad container magic {magic!r}, expected {CONTAINER_MAGIC!r}")
    if version != CONTAINER_VERSION:
        raise FormatError(f"unsupported container version {version}")

    offset = _HEADER.size
    tensors: Dict[str, np.ndarray] = {}
    for _ in range(count):
        try:
            (name_len,) = _NAME_LEN.unpack_from(buffer, offset)
            offset += _NAME_LEN.size
            name = buffer[offset:offset + name_len].decode('utf-8')
            offset += name_len
            (blob_len,) = _BLOB_LEN.unpack_from(buffer, offset)
            offset += _BLOB_LEN.size
        except (struct.error, UnicodeDecodeError) as e:
            raise FormatError(f"container entry truncated or corrupt: {e}")
        if name in tensors:
            raise FormatError(f"duplicate tensor {name!r} in container")
        array, end = decode_tensor(buffer[offset:offset + blob_len])
        if end != blob_len:
            raise FormatError(f"tensor {name!r} blob length mismatch")
        tensors[name] = array
        offset += blob_len
    if offset != len(buffer):
        raise FormatError(f"{len(buffer) - offset} trailing bytes after the last container entry")
    return tensors

def write_container(path: Union[str, Path], tensors: Mapping[str, np.ndarray]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_container(tensors))
    logger.debug(f"Wrote {len(tensors)} tensors to {path}")
    return path

def read_container(path: Union[str, Path]) -> Dict[str, np.ndarray]:
    path = Path(path)
    try:
        buffer = path.read_bytes()
    except OSError as e:
        raise FormatError(f"cannot read container {path}: {e}")
    return decode_container(buffer)
