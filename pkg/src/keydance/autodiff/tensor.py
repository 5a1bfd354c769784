"""
autodiff/tensor.py
Dense float64 tensors and the tape that records operations for reverse-mode
differentiation.

Operations only record themselves while a Tape is active (``with Tape() as tape``).
Outside a tape every op runs untracked, which is what inference and the
finite-difference side of gradient checking use.
"""

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.exceptions import DimensionError, NumericError, UsageError

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]
ArrayLike = Union[np.ndarray, Sequence, float, int]

_active_tape: ContextVar[Optional['Tape']] = ContextVar('keydance_active_tape', default=None)

class Tensor:
    """A dense row-major float64 array that can take part in a recorded computation.

    Properties:
        data (np.ndarray): The values, always float64.
        requires_grad (bool): Whether gradients flow into this tensor.
        grad (Optional[np.ndarray]): Accumulated gradient, same shape as data.
        name (Optional[str]): Parameter name, set when registered on a module.
    """

    __slots__ = ('data', 'requires_grad', 'grad', 'name', '_tape')

    def __init__(self, data: ArrayLike, requires_grad: bool = False, name: Optional[str] = None):
        self.data = np.array(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.name = name
        self._tape: Optional['Tape'] = None

    @classmethod
    def constant(cls, data: ArrayLike) -> 'Tensor':
        """Wrap values that never receive gradients."""
        return cls(data, requires_grad=False)

    @classmethod
    def zeros(cls, *shape: int) -> 'Tensor':
        return cls(np.zeros(shape, dtype=np.float64))

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def is_leaf(self) -> bool:
        return self._tape is None

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def item(self) -> float:
        if self.data.size != 1:
            raise DimensionError(f"item() needs a single value, got shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def zero_grad(self) -> None:
        self.grad = np.zeros_like(self.data)

    def detach(self) -> 'Tensor':
        return Tensor.constant(self.data)

    def __repr__(self) -> str:
        label = f", name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})"

    def __add__(self, other: 'Tensor') -> 'Tensor':
        from . import ops
        return ops.add(self, other)

    def __sub__(self, other: 'Tensor') -> 'Tensor':
        from . import ops
        return ops.sub(self, other)

    def __mul__(self, other: Union['Tensor', float]) -> 'Tensor':
        from . import ops
        if isinstance(other, Tensor):
            return ops.mul(self, other)
        return ops.scale(self, float(other))

    __rmul__ = __mul__

    def __truediv__(self, other: float) -> 'Tensor':
        from . import ops
        return ops.scale(self, 1.0 / float(other))

    def __neg__(self) -> 'Tensor':
        from . import ops
        return ops.scale(self, -1.0)

    def __matmul__(self, other: 'Tensor') -> 'Tensor':
        from . import ops
        return ops.matmul(self, other)

@dataclass
class TapeRecord:
    """One recorded operation."""
    op: str
    inputs: Tuple[Tensor, ...]
    output: Tensor
    backward: BackwardFn

class Tape:
    """Ordered record of operations, replayed backwards exactly once."""

    def __init__(self):
        self.records: List[TapeRecord] = []
        self.consumed = False
        self._token = None

    def __enter__(self) -> 'Tape':
        self._token = _active_tape.set(self)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        _active_tape.reset(self._token)
        self._token = None

    def __len__(self) -> int:
        return len(self.records)

    def record(self, op: str, inputs: Tuple[Tensor, ...], output: Tensor, backward: BackwardFn) -> None:
        if self.consumed:
            raise UsageError("cannot record on a tape that was already replayed")
        output.requires_grad = True
        output._tape = self
        self.records.append(TapeRecord(op=op, inputs=inputs, output=output, backward=backward))

    def backward(self, loss: Tensor) -> None:
        """Propagate d(loss)/d(.) to every requires_grad leaf seen on this tape."""
        if self.consumed:
            raise UsageError("tape already replayed; run a new forward pass first")
        if loss._tape is not self:
            raise UsageError("loss was not recorded on this tape")
        if loss.data.size != 1:
            raise DimensionError(f"backward needs a scalar loss, got shape {loss.shape}")

        for record in self.records:
            for tensor in record.inputs:
                if tensor.requires_grad and tensor.is_leaf and tensor.grad is None:
                    tensor.grad = np.zeros_like(tensor.data)

        pending: Dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
        for record in reversed(self.records):
            upstream = pending.pop(id(record.output), None)
            if upstream is None:
                continue
            for tensor, grad in zip(record.inputs, record.backward(upstream)):
                if grad is None or not tensor.requires_grad:
                    continue
                if tensor.is_leaf:
                    tensor.grad += grad
                elif id(tensor) in pending:
                    pending[id(tensor)] = pending[id(tensor)] + grad
                else:
                    pending[id(tensor)] = grad

        self.consumed = True
        self.records.clear()

def active_tape() -> Optional[Tape]:
    return _active_tape.get()

@contextmanager
def no_grad() -> Iterator[None]:
    """Run the enclosed ops untracked even if a tape is active."""
    token = _active_tape.set(None)
    try:
        yield
    finally:
        _active_tape.reset(token)

def make_result(op: str, data: np.ndarray, inputs: Sequence[Tensor], backward: BackwardFn) -> Tensor:
    """Wrap an op's output, check it is finite and record it on the active tape."""
    if not np.all(np.isfinite(data)):
        raise NumericError(f"{op} produced non-finite values")
    out = Tensor.__new__(Tensor)
    out.data = np.asarray(data, dtype=np.float64)
    out.requires_grad = False
    out.grad = None
    out.name = None
    out._tape = None
    tape = _active_tape.get()
    if tape is not None and any(t.requires_grad for t in inputs):
        tape.record(op, tuple(inputs), out, backward)
    return out

def backward(loss: Tensor) -> None:
    """Populate grads of every requires_grad leaf that contributed to loss."""
    if loss._tape is None:
        raise UsageError("backward called on a value that was not recorded on a tape")
    loss._tape.backward(loss)
