"""
autodiff/gradcheck.py
Central finite-difference checks of the tape's analytic gradients.
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.exceptions import DimensionError, NumericError
from ..utils.logging import get_logger
from . import ops
from .tensor import Tape, Tensor, no_grad

logger = get_logger(__name__)

ScalarFn = Callable[[], Tensor]

def _evaluate(scalar_fn: ScalarFn) -> float:
    with no_grad():
        value = scalar_fn()
    if value.data.size != 1:
        raise DimensionError(f"grad_check needs a scalar function, got shape {value.shape}")
    result = value.item()
    if not np.isfinite(result):
        raise NumericError("grad_check function value is not finite")
    return result

def grad_check(scalar_fn: ScalarFn,
               params: Sequence[Tensor],
               eps: float = 1e-5,
               num_samples: Optional[int] = None,
               seed: int = 0,
               floor: float = 1e-8) -> float:
    """
    Compare analytic gradients with central differences.

    Args:
        scalar_fn: Rebuilds the scalar from the current parameter values
        params: Leaf tensors to check (requires_grad=True)
        eps: Finite-difference step
        num_samples: Check this many random coordinates instead of all of them
        seed: Seed for the coordinate sample
        floor: Lower bound of the relative-error denominator

    Returns:
        max |analytic - numeric| / max(|analytic|, |numeric|, floor)
    """
    for param in params:
        param.zero_grad()
    with Tape() as tape:
        loss = scalar_fn()
    if not np.isfinite(loss.data).all():
        raise NumericError("grad_check function value is not finite")
    tape.backward(loss)
    analytic = [param.grad.copy() for param in params]

    coordinates: List[Tuple[int, int]] = [
        (index, flat) for index, param in enumerate(params) for flat in range(param.data.size)
    ]
    if num_samples is not None and num_samples < len(coordinates):
        rng = np.random.default_rng(seed)
        chosen = np.sort(rng.choice(len(coordinates), size=num_samples, replace=False))
        coordinates = [coordinates[i] for i in chosen]

    worst = 0.0
    for index, flat in coordinates:
        param = params[index]
        position = np.unravel_index(flat, param.shape)
        original = param.data[position]
        param.data[position] = original + eps
        plus = _evaluate(scalar_fn)
        param.data[position] = original - eps
        minus = _evaluate(scalar_fn)
        param.data[position] = original
        numeric = (plus - minus) / (2.0 * eps)
        exact = analytic[index][position]
        error = abs(exact - numeric) / max(abs(exact), abs(numeric), floor)
        worst = max(worst, error)
    return worst

def _op_cases(rng: np.random.Generator) -> Dict[str, Tuple[ScalarFn, List[Tensor]]]:
    """Small scalar functions exercising each differentiable op."""
    def leaf(*shape):
        return Tensor(rng.normal(size=shape), requires_grad=True)

    a, b = leaf(3, 4), leaf(4, 2)
    x, y = leaf(3, 4), leaf(3, 4)
    gain, bias = Tensor(1.0 + 0.1 * rng.normal(size=4), requires_grad=True), leaf(4)
    probe = rng.normal(size=(3, 4))
    pos = Tensor(rng.uniform(0.5, 2.0, size=(3, 4)), requires_grad=True)
    rows = rng.uniform(0.5, 2.0, size=3)
    labels = np.eye(4)[rng.integers(0, 4, size=3)]
    mask = np.tril(np.ones((3, 4), dtype=bool))

    def weighted(t: Tensor, weights: np.ndarray) -> Tensor:
        return ops.sum(ops.mul(t, Tensor.constant(weights)))

    return {
        'matmul': (lambda: weighted(ops.matmul(a, b), probe[:, :2]), [a, b]),
        'add_sub_mul': (lambda: weighted(ops.mul(ops.add(x, y), ops.sub(x, y)), probe), [x, y]),
        'add_bias': (lambda: weighted(ops.add_bias(x, bias), probe), [x, bias]),
        'transpose': (lambda: weighted(ops.transpose(x), probe.T), [x]),
        'square_scale_rows': (lambda: ops.sum(ops.scale_rows(ops.square(x), rows)), [x]),
        'gelu': (lambda: weighted(ops.gelu(x), probe), [x]),
        'log': (lambda: weighted(ops.log(pos), probe), [pos]),
        'softmax_rows': (lambda: weighted(ops.softmax_rows(x, mask), probe), [x]),
        'softmax_cross_entropy': (
            lambda: ops.scale(ops.sum(ops.mul(ops.log(ops.softmax_rows(x)), Tensor.constant(labels))), -1.0),
            [x],
        ),
        'layer_norm': (lambda: weighted(ops.layer_norm(x, gain, bias), probe), [x, gain, bias]),
        'concat_slice': (
            lambda: weighted(ops.concat_cols([ops.slice_cols(x, 0, 2), ops.slice_cols(y, 2, 4)]), probe),
            [x, y],
        ),
        'concat_rows': (lambda: weighted(ops.slice_rows(ops.concat_rows([x, y]), 1, 4), probe), [x, y]),
        'scatter_rows': (lambda: weighted(ops.scatter_rows(ops.slice_rows(x, 0, 2), [2, 0], 3), probe), [x]),
    }

def check_ops(seed: int = 0, eps: float = 1e-5) -> Dict[str, float]:
    """Max relative gradient error for every differentiable op."""
    rng = np.random.default_rng(seed)
    results = {}
    for name, (fn, params) in _op_cases(rng).items():
        results[name] = grad_check(fn, params, eps=eps)
        logger.debug(f"grad_check {name}: {results[name]:.3e}")
    return results
