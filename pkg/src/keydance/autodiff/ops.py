"""
autodiff/ops.py
Differentiable operations on 2-D (and scalar) tensors.

Broadcasting is limited to what the model needs: a row-vector bias and
constant per-row weights.
"""

from typing import Optional, Sequence

import numpy as np

from ..utils.exceptions import DimensionError, NumericError, ValidationError
from .tensor import Tensor, make_result

GELU_C = float(np.sqrt(2.0 / np.pi))

def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor.constant(value)

def _require_2d(op: str, *tensors: Tensor) -> None:
    for tensor in tensors:
        if tensor.data.ndim != 2:
            raise DimensionError(f"{op} expects 2-D tensors, got shape {tensor.shape}")

def _require_same_shape(op: str, a: Tensor, b: Tensor) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{op} shape mismatch: {a.shape} vs {b.shape}")

def matmul(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _require_2d('matmul', a, b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul shape mismatch: {a.shape} x {b.shape}")
    a_data, b_data = a.data, b.data

    def backward(grad):
        return grad @ b_data.T, a_data.T @ grad

    return make_result('matmul', a_data @ b_data, (a, b), backward)

def add(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _require_same_shape('add', a, b)
    return make_result('add', a.data + b.data, (a, b), lambda grad: (grad, grad))

def sub(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _require_same_shape('sub', a, b)
    return make_result('sub', a.data - b.data, (a, b), lambda grad: (grad, -grad))

def mul(a: Tensor, b: Tensor) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    _require_same_shape('mul', a, b)
    a_data, b_data = a.data, b.data
    return make_result('mul', a_data * b_data, (a, b), lambda grad: (grad * b_data, grad * a_data))

def scale(x: Tensor, factor: float) -> Tensor:
    return make_result('scale', x.data * factor, (x,), lambda grad: (grad * factor,))

def square(x: Tensor) -> Tensor:
    x_data = x.data
    return make_result('square', x_data * x_data, (x,), lambda grad: (2.0 * x_data * grad,))

def log(x: Tensor) -> Tensor:
    x_data = x.data
    if np.any(x_data <= 0):
        raise NumericError("log of a non-positive value")
    return make_result('log', np.log(x_data), (x,), lambda grad: (grad / x_data,))

def gelu(x: Tensor) -> Tensor:
    """GELU, tanh approximation."""
    x_data = x.data
    inner = GELU_C * (x_data + 0.044715 * x_data ** 3)
    t = np.tanh(inner)

    def backward(grad):
        d_inner = GELU_C * (1.0 + 3.0 * 0.044715 * x_data ** 2)
        return (grad * (0.5 * (1.0 + t) + 0.5 * x_data * (1.0 - t * t) * d_inner),)

    return make_result('gelu', 0.5 * x_data * (1.0 + t), (x,), backward)

def transpose(x: Tensor) -> Tensor:
    _require_2d('transpose', x)
    return make_result('transpose', x.data.T.copy(), (x,), lambda grad: (grad.T,))

def add_bias(x: Tensor, bias: Tensor) -> Tensor:
    """x[m×n] + bias[n] added to every row."""
    _require_2d('add_bias', x)
    if bias.data.ndim != 1 or bias.shape[0] != x.shape[1]:
        raise DimensionError(f"add_bias shape mismatch: {x.shape} + {bias.shape}")
    return make_result('add_bias', x.data + bias.data, (x, bias), lambda grad: (grad, grad.sum(axis=0)))

def scale_rows(x: Tensor, weights: np.ndarray) -> Tensor:
    """Multiply row i of x by the constant weights[i]."""
    _require_2d('scale_rows', x)
    column = np.asarray(weights, dtype=np.float64).reshape(-1, 1)
    if column.shape[0] != x.shape[0]:
        raise DimensionError(f"scale_rows needs {x.shape[0]} weights, got {column.shape[0]}")
    return make_result('scale_rows', x.data * column, (x,), lambda grad: (grad * column,))

def sum(x: Tensor) -> Tensor:
    shape = x.shape
    return make_result('sum', np.array(x.data.sum()), (x,), lambda grad: (np.full(shape, float(grad)),))

def mean(x: Tensor) -> Tensor:
    return scale(sum(x), 1.0 / x.data.size)

def softmax_rows(x: Tensor, mask: Optional[np.ndarray] = None) -> Tensor:
    """Row-wise softmax; entries where mask is False get weight exactly zero."""
    _require_2d('softmax_rows', x)
    if x.shape[1] == 0:
        raise DimensionError("softmax over an empty row")
    logits = x.data
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != x.shape:
            raise DimensionError(f"mask shape {mask.shape} does not match logits {x.shape}")
        if not np.all(mask.any(axis=1)):
            raise ValidationError("softmax row has no allowed entries")
        logits = np.where(mask, logits, -np.inf)
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)

    def backward(grad):
        return (probs * (grad - (grad * probs).sum(axis=1, keepdims=True)),)

    return make_result('softmax_rows', probs, (x,), backward)

def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, eps: float = 1e-5) -> Tensor:
    _require_2d('layer_norm', x)
    width = x.shape[1]
    if width < 2:
        raise DimensionError("layer_norm needs at least two features per row")
    if gain.shape != (width,) or bias.shape != (width,):
        raise DimensionError(f"layer_norm affine shapes {gain.shape}/{bias.shape} do not match width {width}")
    centered = x.data - x.data.mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt((centered ** 2).mean(axis=1, keepdims=True) + eps)
    normed = centered * inv_std
    gain_data = gain.data

    def backward(grad):
        d_normed = grad * gain_data
        d_x = inv_std / width * (
            width * d_normed
            - d_normed.sum(axis=1, keepdims=True)
            - normed * (d_normed * normed).sum(axis=1, keepdims=True)
        )
        return d_x, (grad * normed).sum(axis=0), grad.sum(axis=0)

    return make_result('layer_norm', normed * gain_data + bias.data, (x, gain, bias), backward)

def concat_rows(tensors: Sequence[Tensor]) -> Tensor:
    """Stack along time (axis 0)."""
    tensors = [_as_tensor(t) for t in tensors]
    _require_2d('concat_rows', *tensors)
    if len({t.shape[1] for t in tensors}) != 1:
        raise DimensionError(f"concat_rows width mismatch: {[t.shape for t in tensors]}")
    bounds = np.cumsum([0] + [t.shape[0] for t in tensors])

    def backward(grad):
        return tuple(grad[start:stop] for start, stop in zip(bounds[:-1], bounds[1:]))

    return make_result('concat_rows', np.concatenate([t.data for t in tensors], axis=0), tuple(tensors), backward)

def concat_cols(tensors: Sequence[Tensor]) -> Tensor:
    tensors = [_as_tensor(t) for t in tensors]
    _require_2d('concat_cols', *tensors)
    if len({t.shape[0] for t in tensors}) != 1:
        raise DimensionError(f"concat_cols height mismatch: {[t.shape for t in tensors]}")
    bounds = np.cumsum([0] + [t.shape[1] for t in tensors])

    def backward(grad):
        return tuple(grad[:, start:stop] for start, stop in zip(bounds[:-1], bounds[1:]))

    return make_result('concat_cols', np.concatenate([t.data for t in tensors], axis=1), tuple(tensors), backward)

def slice_rows(x: Tensor, start: int, stop: int) -> Tensor:
    _require_2d('slice_rows', x)
    if not 0 <= start <= stop <= x.shape[0]:
        raise DimensionError(f"row slice [{start}, {stop}) outside {x.shape[0]} rows")
    shape = x.shape

    def backward(grad):
        full = np.zeros(shape)
        full[start:stop] = grad
        return (full,)

    return make_result('slice_rows', x.data[start:stop].copy(), (x,), backward)

def slice_cols(x: Tensor, start: int, stop: int) -> Tensor:
    _require_2d('slice_cols', x)
    if not 0 <= start <= stop <= x.shape[1]:
        raise DimensionError(f"column slice [{start}, {stop}) outside {x.shape[1]} columns")
    shape = x.shape

    def backward(grad):
        full = np.zeros(shape)
        full[:, start:stop] = grad
        return (full,)

    return make_result('slice_cols', x.data[:, start:stop].copy(), (x,), backward)

def scatter_rows(x: Tensor, indices: Sequence[int], num_rows: int) -> Tensor:
    """Place row i of x at output row indices[i]; every other row is zero."""
    _require_2d('scatter_rows', x)
    index = np.asarray(indices, dtype=np.int64)
    if index.shape != (x.shape[0],):
        raise DimensionError(f"scatter_rows needs {x.shape[0]} indices, got {index.shape}")
    if index.size and (index.min() < 0 or index.max() >= num_rows):
        raise ValidationError(f"scatter index outside [0, {num_rows})")
    if np.unique(index).size != index.size:
        raise ValidationError("scatter indices must be unique")
    out = np.zeros((num_rows, x.shape[1]))
    out[index] = x.data
    return make_result('scatter_rows', out, (x,), lambda grad: (grad[index],))

def linear(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None) -> Tensor:
    """x[T×in] @ weight[out×in]ᵀ + bias[out]."""
    out = matmul(x, transpose(weight))
    return add_bias(out, bias) if bias is not None else out
