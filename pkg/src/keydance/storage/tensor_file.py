"""
storage/tensor_file.py
Binary tensor files.

Layout (little-endian):
    magic   4 bytes  b"MDRT"
    version u16      1
    dtype   u8       1 = float32
    ndim    u8
    dims    ndim × u32
    payload Π(dims) × f32, row-major
"""

import struct
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..utils.exceptions import FormatError, NumericError
from ..utils.logging import get_logger

logger = get_logger(__name__)

MAGIC = b"MDRT"
VERSION = 1
DTYPE_F32 = 1
_HEADER = struct.Struct('<4sHBB')
_DIM = struct.Struct('<I')
_MAX_DIM = 0xFFFFFFFF

PathLike = Union[str, Path]

def encode_tensor(array: np.ndarray) -> bytes:
    """Serialize an array as float32 with the MDRT header."""
    array = np.asarray(array)
    if array.ndim > 255:
        raise FormatError(f"tensor has {array.ndim} dimensions, at most 255 are supported")
    if any(d > _MAX_DIM for d in array.shape):
        raise FormatError(f"tensor dimension too large: {array.shape}")
    if not np.all(np.isfinite(array)):
        raise NumericError("refusing to write a tensor with non-finite values")
    with np.errstate(over='ignore'):
        single = np.ascontiguousarray(array, dtype='<f4')
    if not np.all(np.isfinite(single)):
        raise NumericError("tensor values overflow float32")
    header = _HEADER.pack(MAGIC, VERSION, DTYPE_F32, array.ndim)
    dims = b''.join(_DIM.pack(d) for d in array.shape)
    return header + dims + single.tobytes()

def decode_tensor(buffer: bytes, offset: int = 0) -> Tuple[np.ndarray, int]:
    """
    Parse one tensor starting at `offset`.

    Returns:
        (float64 array, offset just past the payload)

    Raises:
        FormatError: bad magic, version or dtype, or a truncated buffer
    """
    if len(buffer) - offset < _HEADER.size:
        raise FormatError("tensor header truncated")
    magic, version, dtype, ndim = _HEADER.unpack_from(buffer, offset)
    if magic != MAGIC:
        raise FormatError(f"bad tensor magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported tensor file version {version}")
    if dtype != DTYPE_F32:
        raise FormatError(f"unsupported tensor dtype code {dtype}")
    offset += _HEADER.size
    if len(buffer) - offset < ndim * _DIM.size:
        raise FormatError("tensor dimensions truncated")
    dims = tuple(_DIM.unpack_from(buffer, offset + i * _DIM.size)[0] for i in range(ndim))
    offset += ndim * _DIM.size
    size = int(np.prod(dims, dtype=np.int64)) if dims else 1
    nbytes = 4 * size
    if len(buffer) - offset < nbytes:
        raise FormatError(f"tensor payload truncated: expected {nbytes} bytes, found {len(buffer) - offset}")
    values = np.frombuffer(buffer, dtype='<f4', count=size, offset=offset)
    return values.astype(np.float64).reshape(dims), offset + nbytes

def write_tensor(path: PathLike, array: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_tensor(array))
    logger.debug(f"Wrote tensor {np.shape(array)} to {path}")
    return path

def read_tensor(path: PathLike) -> np.ndarray:
    """Read a whole file; trailing bytes after the payload are a format error."""
    path = Path(path)
    try:
        buffer = path.read_bytes()
    except OSError as e:
        raise FormatError(f"cannot read tensor file {path}: {e}")
    array, end = decode_tensor(buffer)
    if end != len(buffer):
        raise FormatError(f"{path}: {len(buffer) - end} trailing bytes after the tensor payload")
    return array
