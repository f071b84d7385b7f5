"""Dense tensors with reverse-mode automatic differentiation.

Operations record their backward closures on the active ``Tape``; calling
``backward`` replays them in exact reverse order of recording.  Tensors
are numpy-backed, float64 by default (tests run at 64-bit, training may
use 32-bit).  The tape is confined to a single thread.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from ..errors import ShapeMismatch

_active_tape: "Tape | None" = None


class Tape:
    """Ordered record of backward closures, usable as a context manager."""

    def __init__(self):
        self._backs: list[Callable[[], None]] = []
        self._prev: Tape | None = None

    def record(self, back: Callable[[], None]) -> None:
        self._backs.append(back)

    def __len__(self) -> int:
        return len(self._backs)

    def __enter__(self) -> "Tape":
        global _active_tape
        self._prev = _active_tape
        _active_tape = self
        return self

    def __exit__(self, *exc) -> None:
        global _active_tape
        _active_tape = self._prev

    def backward(self, loss: "Tensor") -> None:
        """Seed d(loss)/d(loss) = 1 and replay the record in reverse."""
        if loss.data.size != 1:
            raise ShapeMismatch(f"backward needs a scalar, got shape {loss.shape}")
        loss.grad = np.ones_like(loss.data)
        for back in reversed(self._backs):
            back()


class Tensor:
    __slots__ = ("data", "grad", "requires_grad")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        arr = np.asarray(data, dtype=dtype)
        if not np.issubdtype(arr.dtype, np.floating):
            arr = arr.astype(np.float64)
        self.data = arr
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def zero_grad(self) -> None:
        self.grad = None

    def detach(self) -> "Tensor":
        """Same values, cut off from the tape."""
        return Tensor(self.data, requires_grad=False)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, mul(other, -1.0))

    def __rsub__(self, other):
        return add(other, mul(self, -1.0))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, index):
        return take(self, index)


def as_tensor(x, dtype=None) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x, dtype=dtype)


def _accumulate(t: Tensor, grad: np.ndarray) -> None:
    grad = _unbroadcast(grad, t.data.shape)
    if t.grad is None:
        t.grad = grad.astype(t.data.dtype, copy=True)
    else:
        t.grad += grad


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to ``shape``."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _record(out: Tensor, back: Callable[[], None], *inputs: Tensor) -> Tensor:
    if _active_tape is not None and any(t.requires_grad for t in inputs):
        out.requires_grad = True
        _active_tape.record(back)
    return out


# ---------------------------------------------------------------------------
# elementwise and structural ops


def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    try:
        out = Tensor(a.data + b.data)
    except ValueError:
        raise ShapeMismatch(f"add: {a.shape} vs {b.shape}") from None

    def back():
        if out.grad is None:
            return
        if a.requires_grad:
            _accumulate(a, out.grad)
        if b.requires_grad:
            _accumulate(b, out.grad)

    return _record(out, back, a, b)


def mul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    try:
        out = Tensor(a.data * b.data)
    except ValueError:
        raise ShapeMismatch(f"mul: {a.shape} vs {b.shape}") from None

    def back():
        if out.grad is None:
            return
        if a.requires_grad:
            _accumulate(a, out.grad * b.data)
        if b.requires_grad:
            _accumulate(b, out.grad * a.data)

    return _record(out, back, a, b)


def div(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    try:
        out = Tensor(a.data / b.data)
    except ValueError:
        raise ShapeMismatch(f"div: {a.shape} vs {b.shape}") from None

    def back():
        if out.grad is None:
            return
        if a.requires_grad:
            _accumulate(a, out.grad / b.data)
        if b.requires_grad:
            _accumulate(b, -out.grad * a.data / (b.data * b.data))

    return _record(out, back, a, b)


def matmul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    if a.data.ndim < 2 or b.data.ndim < 2:
        raise ShapeMismatch(
            f"matmul needs >=2-d operands, got {a.shape} and {b.shape}"
        )
    try:
        out = Tensor(np.matmul(a.data, b.data))
    except ValueError:
        raise ShapeMismatch(f"matmul: {a.shape} @ {b.shape}") from None

    def back():
        if out.grad is None:
            return
        if a.requires_grad:
            _accumulate(a, np.matmul(out.grad, np.swapaxes(b.data, -1, -2)))
        if b.requires_grad:
            _accumulate(b, np.matmul(np.swapaxes(a.data, -1, -2), out.grad))

    return _record(out, back, a, b)


def transpose(a, axes: Sequence[int] | None = None) -> Tensor:
    a = as_tensor(a)
    out = Tensor(np.transpose(a.data, axes))
    if axes is None:
        inverse = None
    else:
        inverse = np.argsort(axes)

    def back():
        if out.grad is None or not a.requires_grad:
            return
        _accumulate(a, np.transpose(out.grad, inverse))

    return _record(out, back, a)


def reshape(a, shape: Sequence[int]) -> Tensor:
    a = as_tensor(a)
    try:
        out = Tensor(a.data.reshape(shape))
    except ValueError:
        raise ShapeMismatch(f"reshape {a.shape} -> {tuple(shape)}") from None

    def back():
        if out.grad is None or not a.requires_grad:
            return
        _accumulate(a, out.grad.reshape(a.data.shape))

    return _record(out, back, a)


def concat(tensors: Sequence, axis: int = 0) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    try:
        out = Tensor(np.concatenate([t.data for t in tensors], axis=axis))
    except ValueError:
        shapes = [t.shape for t in tensors]
        raise ShapeMismatch(f"concat axis {axis}: {shapes}") from None
    sizes = [t.data.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def back():
        if out.grad is None:
            return
        for t, start, stop in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                index = [slice(None)] * out.grad.ndim
                index[axis] = slice(start, stop)
                _accumulate(t, out.grad[tuple(index)])

    return _record(out, back, *tensors)


def take(a, index) -> Tensor:
    """Slice/index; gradients scatter-add back into place."""
    a = as_tensor(a)
    out = Tensor(a.data[index])

    def back():
        if out.grad is None or not a.requires_grad:
            return
        buf = np.zeros_like(a.data)
        np.add.at(buf, index, out.grad)
        _accumulate(a, buf)

    return _record(out, back, a)


def tensor_sum(a, axis=None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    out = Tensor(a.data.sum(axis=axis, keepdims=keepdims))

    def back():
        if out.grad is None or not a.requires_grad:
            return
        grad = out.grad
        if axis is not None and not keepdims:
            grad = np.expand_dims(grad, axis)
        _accumulate(a, np.broadcast_to(grad, a.data.shape))

    return _record(out, back, a)


def mean(a, axis=None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    if axis is None:
        count = a.data.size
    else:
        count = a.data.shape[axis]
    return mul(tensor_sum(a, axis=axis, keepdims=keepdims), 1.0 / count)


def embedding(table, ids: np.ndarray) -> Tensor:
    """Row lookup: ids of any shape gather rows of ``table``."""
    table = as_tensor(table)
    ids = np.asarray(ids)
    out = Tensor(table.data[ids])

    def back():
        if out.grad is None or not table.requires_grad:
            return
        buf = np.zeros_like(table.data)
        np.add.at(buf, ids, out.grad)
        _accumulate(table, buf)

    return _record(out, back, table)


def exp(a) -> Tensor:
    a = as_tensor(a)
    out = Tensor(np.exp(a.data))

    def back():
        if out.grad is None or not a.requires_grad:
            return
        _accumulate(a, out.grad * out.data)

    return _record(out, back, a)


def clip_min(a, floor: float) -> Tensor:
    """max(a, floor); gradient passes only where the input was kept."""
    a = as_tensor(a)
    out = Tensor(np.maximum(a.data, floor))
    kept = a.data >= floor

    def back():
        if out.grad is None or not a.requires_grad:
            return
        _accumulate(a, out.grad * kept)

    return _record(out, back, a)


# ---------------------------------------------------------------------------
# neural-network ops


def softmax(a, axis: int = -1) -> Tensor:
    a = as_tensor(a)
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    s = e / e.sum(axis=axis, keepdims=True)
    out = Tensor(s)

    def back():
        if out.grad is None or not a.requires_grad:
            return
        inner = (out.grad * s).sum(axis=axis, keepdims=True)
        _accumulate(a, (out.grad - inner) * s)

    return _record(out, back, a)


_GELU_C = math.sqrt(2.0 / math.pi)
_GELU_A = 0.044715


def gelu(a) -> Tensor:
    """tanh-approximation GELU: 0.5 x (1 + tanh(c (x + 0.044715 x^3)))."""
    a = as_tensor(a)
    x = a.data
    u = _GELU_C * (x + _GELU_A * x**3)
    t = np.tanh(u)
    out = Tensor(0.5 * x * (1.0 + t))

    def back():
        if out.grad is None or not a.requires_grad:
            return
        du = _GELU_C * (1.0 + 3.0 * _GELU_A * x**2)
        local = 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t**2) * du
        _accumulate(a, out.grad * local)

    return _record(out, back, a)


def layernorm(a, gain, bias, eps: float = 1e-5) -> Tensor:
    """Normalize over the last axis, then apply learned scale and shift."""
    a, gain, bias = as_tensor(a), as_tensor(gain), as_tensor(bias)
    dim = a.data.shape[-1]
    if gain.data.shape != (dim,) or bias.data.shape != (dim,):
        raise ShapeMismatch(
            f"layernorm affine shapes {gain.shape}/{bias.shape} vs last dim {dim}"
        )
    mu = a.data.mean(axis=-1, keepdims=True)
    var = a.data.var(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat = (a.data - mu) * inv
    out = Tensor(xhat * gain.data + bias.data)

    def back():
        if out.grad is None:
            return
        g = out.grad
        if gain.requires_grad:
            _accumulate(gain, (g * xhat).reshape(-1, dim).sum(axis=0))
        if bias.requires_grad:
            _accumulate(bias, g.reshape(-1, dim).sum(axis=0))
        if a.requires_grad:
            gg = g * gain.data
            m1 = gg.mean(axis=-1, keepdims=True)
            m2 = (gg * xhat).mean(axis=-1, keepdims=True)
            _accumulate(a, (gg - m1 - xhat * m2) * inv)

    return _record(out, back, a, gain, bias)


def dropout(a, p: float, rng: np.random.Generator, training: bool) -> Tensor:
    """Inverted dropout; identity when eval or p == 0."""
    a = as_tensor(a)
    if not training or p <= 0.0:
        return a
    keep = (rng.random(a.data.shape) >= p).astype(a.data.dtype) / (1.0 - p)
    out = Tensor(a.data * keep)

    def back():
        if out.grad is None or not a.requires_grad:
            return
        _accumulate(a, out.grad * keep)

    return _record(out, back, a)


def cross_entropy(logits, targets: np.ndarray, mask: np.ndarray | None = None) -> Tensor:
    """Mean cross-entropy over the positions where ``mask`` is nonzero.

    ``logits``: (..., V); ``targets``: integer ids shaped like the logits
    without the vocab axis.  An all-zero mask yields loss 0 with zero
    gradient.
    """
    logits = as_tensor(logits)
    targets = np.asarray(targets)
    if targets.shape != logits.data.shape[:-1]:
        raise ShapeMismatch(
            f"cross_entropy targets {targets.shape} vs logits {logits.shape}"
        )
    if mask is None:
        mask = np.ones(targets.shape, dtype=logits.data.dtype)
    else:
        mask = np.asarray(mask).astype(logits.data.dtype)
        if mask.shape != targets.shape:
            raise ShapeMismatch(
                f"cross_entropy mask {mask.shape} vs targets {targets.shape}"
            )

    count = float(mask.sum())
    shifted = logits.data - logits.data.max(axis=-1, keepdims=True)
    logz = np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    logp = shifted - logz
    picked = np.take_along_axis(logp, targets[..., None], axis=-1)[..., 0]
    if count == 0:
        out = Tensor(np.zeros((), dtype=logits.data.dtype))
    else:
        out = Tensor(-(picked * mask).sum() / count)

    def back():
        if out.grad is None or not logits.requires_grad or count == 0:
            return
        probs = np.exp(logp)
        probs_target = np.take_along_axis(probs, targets[..., None], axis=-1)
        np.put_along_axis(
            probs, targets[..., None], probs_target - 1.0, axis=-1
        )
        _accumulate(logits, probs * (mask[..., None] * (out.grad / count)))

    return _record(out, back, logits)


def mse(pred, target) -> Tensor:
    """Mean squared error over all elements."""
    pred, target = as_tensor(pred), as_tensor(target)
    if pred.data.shape != target.data.shape:
        raise ShapeMismatch(f"mse: {pred.shape} vs {target.shape}")
    diff = pred.data - target.data
    n = diff.size
    out = Tensor((diff * diff).sum() / n)

    def back():
        if out.grad is None:
            return
        g = out.grad * (2.0 / n) * diff
        if pred.requires_grad:
            _accumulate(pred, g)
        if target.requires_grad:
            _accumulate(target, -g)

    return _record(out, back, pred, target)
