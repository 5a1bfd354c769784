"""
test_tensor.py
Tests for the tape, no_grad and gradient accumulation.
"""

import numpy as np
import pytest

from keydance.autodiff import Tape, Tensor, backward, no_grad, active_tape, ops
from keydance.utils.exceptions import DimensionError, NumericError, UsageError

def test_ops_outside_tape_are_untracked():
    """Without an active tape nothing is recorded."""
    x = Tensor([[1.0, 2.0]], requires_grad=True)
    y = ops.square(x)
    assert y.is_leaf
    assert not y.requires_grad

def test_tape_records_and_backpropagates():
    x = Tensor([[1.0, 2.0], [3.0, 4.0]], requires_grad=True)
    with Tape() as tape:
        loss = ops.sum(ops.square(x))
    assert len(tape) == 2
    tape.backward(loss)
    np.testing.assert_allclose(x.grad, 2.0 * x.data)

def test_tape_replays_only_once():
    x = Tensor([[1.0]], requires_grad=True)
    with Tape() as tape:
        loss = ops.sum(ops.square(x))
    tape.backward(loss)
    with pytest.raises(UsageError):
        tape.backward(loss)

def test_gradients_accumulate_across_tapes():
    x = Tensor([[2.0]], requires_grad=True)
    for _ in range(2):
        with Tape() as tape:
            loss = ops.sum(ops.scale(x, 3.0))
        tape.backward(loss)
    np.testing.assert_allclose(x.grad, [[6.0]])
    x.zero_grad()
    np.testing.assert_allclose(x.grad, [[0.0]])

def test_shared_input_gradient_sums_paths():
    """x used twice: d(x*x)/dx = 2x."""
    x = Tensor([[1.5, -2.0]], requires_grad=True)
    with Tape() as tape:
        loss = ops.sum(ops.mul(x, x))
    backward(loss)
    np.testing.assert_allclose(x.grad, 2.0 * x.data)

def test_backward_needs_scalar():
    x = Tensor([[1.0, 2.0]], requires_grad=True)
    with Tape() as tape:
        out = ops.square(x)
    with pytest.raises(DimensionError):
        tape.backward(out)

def test_backward_on_untracked_value():
    with pytest.raises(UsageError):
        backward(Tensor([1.0]))

def test_no_grad_suspends_recording():
    x = Tensor([[1.0]], requires_grad=True)
    with Tape() as tape:
        with no_grad():
            assert active_tape() is None
            ops.square(x)
        assert active_tape() is tape
    assert len(tape) == 0

def test_constant_inputs_get_no_gradient():
    x = Tensor([[1.0, 2.0]], requires_grad=True)
    c = Tensor.constant([[3.0, 4.0]])
    with Tape() as tape:
        loss = ops.sum(ops.mul(x, c))
    tape.backward(loss)
    np.testing.assert_allclose(x.grad, c.data)
    assert c.grad is None

def test_non_finite_result_raises():
    x = Tensor([[1e200]])
    with pytest.raises(NumericError):
        ops.square(x)

def test_operators_delegate_to_ops():
    a = Tensor([[1.0, 2.0]])
    b = Tensor([[3.0, 5.0]])
    np.testing.assert_allclose((a + b).data, [[4.0, 7.0]])
    np.testing.assert_allclose((b - a).data, [[2.0, 3.0]])
    np.testing.assert_allclose((a * 2.0).data, [[2.0, 4.0]])
    np.testing.assert_allclose((-a).data, [[-1.0, -2.0]])

def test_item_requires_single_value():
    assert Tensor([[2.5]]).item() == 2.5
    with pytest.raises(DimensionError):
        Tensor([1.0, 2.0]).item()
