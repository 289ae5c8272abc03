"""fp64 tensors with reverse-mode gradient accumulation.

Every operation records its inputs and a backward closure on the output, so
calling :func:`backward` on a scalar propagates exact gradients to all leaves
with ``requires_grad``. Everything is float64 and deterministic; there is no
implicit parallelism and no in-place mutation of tracked values.
"""

from __future__ import annotations

import builtins
from typing import Iterable, Sequence

import numpy as np

from ..errors import ShapeError


class Tensor:
    __slots__ = ("data", "requires_grad", "grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False):
        if type(data) is np.ndarray and data.dtype == np.float64:
            self.data = data
        else:
            self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None
        self._parents: tuple[Tensor, ...] = ()
        self._backward = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    def item(self) -> float:
        return float(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"

    # convenience arithmetic; the module-level functions are the primitives
    def __add__(self, other):
        return add(self, as_tensor(other))

    def __radd__(self, other):
        return add(as_tensor(other), self)

    def __sub__(self, other):
        return sub(self, as_tensor(other))

    def __rsub__(self, other):
        return sub(as_tensor(other), self)

    def __mul__(self, other):
        return mul(self, as_tensor(other))

    def __rmul__(self, other):
        return mul(as_tensor(other), self)

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, as_tensor(other))


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def zeros(shape) -> Tensor:
    return Tensor(np.zeros(shape, dtype=np.float64))


def _make(data: np.ndarray, parents: Sequence[Tensor], backward_fn) -> Tensor:
    out = Tensor(data)
    for p in parents:
        if p.requires_grad:
            out.requires_grad = True
            out._parents = tuple(parents)
            out._backward = backward_fn
            break
    return out


def _accumulate(t: Tensor, g: np.ndarray):
    if t.grad is None:
        t.grad = np.zeros_like(t.data)
    t.grad += g


def _unbroadcast(g: np.ndarray, shape) -> np.ndarray:
    """Reduce a broadcasted gradient back to the original operand shape."""
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g.reshape(shape)


def backward(t: Tensor):
    """Reverse-mode sweep from a scalar tensor; accumulates into ``.grad``."""
    if t.size != 1:
        raise ShapeError("backward", f"expected a scalar, got shape {t.shape}")
    topo: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            topo.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in visited:
                stack.append((parent, False))
    t.grad = np.ones_like(t.data)
    for node in reversed(topo):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)


# ---------------------------------------------------------------------------
# primitives


def add(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data + b.data
    except ValueError as exc:
        raise ShapeError("add", f"{a.shape} + {b.shape}") from exc

    def back(g):
        _accumulate(a, _unbroadcast(g, a.shape))
        _accumulate(b, _unbroadcast(g, b.shape))

    return _make(data, (a, b), back)


def sub(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data - b.data
    except ValueError as exc:
        raise ShapeError("sub", f"{a.shape} - {b.shape}") from exc

    def back(g):
        _accumulate(a, _unbroadcast(g, a.shape))
        _accumulate(b, _unbroadcast(-g, b.shape))

    return _make(data, (a, b), back)


def neg(a: Tensor) -> Tensor:
    def back(g):
        _accumulate(a, -g)

    return _make(-a.data, (a,), back)


def mul(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data * b.data
    except ValueError as exc:
        raise ShapeError("mul", f"{a.shape} * {b.shape}") from exc

    def back(g):
        _accumulate(a, _unbroadcast(g * b.data, a.shape))
        _accumulate(b, _unbroadcast(g * a.data, b.shape))

    return _make(data, (a, b), back)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product for (m,n)@(n,k), (m,n)@(n,) and (n,)@(n,k).

    The forward pass uses einsum rather than BLAS: BLAS kernels round a row's
    result differently depending on its position (vectorized main block vs.
    remainder rows), which would break exact node-permutation equivariance of
    the graph encoder. einsum accumulates identically for every row.
    """
    if a.data.ndim == 2 and b.data.ndim == 2:
        if a.shape[1] != b.shape[0]:
            raise ShapeError("matmul", f"{a.shape} @ {b.shape}")
        data = np.einsum("ij,jk->ik", a.data, b.data, optimize=False)

        def back(g):
            _accumulate(a, g @ b.data.T)
            _accumulate(b, a.data.T @ g)

    elif a.data.ndim == 2 and b.data.ndim == 1:
        if a.shape[1] != b.shape[0]:
            raise ShapeError("matmul", f"{a.shape} @ {b.shape}")
        data = np.einsum("ij,j->i", a.data, b.data, optimize=False)

        def back(g):
            _accumulate(a, np.outer(g, b.data))
            _accumulate(b, a.data.T @ g)

    elif a.data.ndim == 1 and b.data.ndim == 2:
        if a.shape[0] != b.shape[0]:
            raise ShapeError("matmul", f"{a.shape} @ {b.shape}")
        data = np.einsum("j,jk->k", a.data, b.data, optimize=False)

        def back(g):
            _accumulate(a, b.data @ g)
            _accumulate(b, np.outer(a.data, g))

    else:
        raise ShapeError("matmul", f"unsupported ranks {a.shape} @ {b.shape}")
    return _make(data, (a, b), back)


def dot(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 1 or b.data.ndim != 1 or a.shape != b.shape:
        raise ShapeError("dot", f"{a.shape} . {b.shape}")
    data = np.array(a.data @ b.data)

    def back(g):
        _accumulate(a, g * b.data)
        _accumulate(b, g * a.data)

    return _make(data, (a, b), back)


def transpose(a: Tensor) -> Tensor:
    if a.data.ndim != 2:
        raise ShapeError("transpose", f"expected rank 2, got {a.shape}")

    def back(g):
        _accumulate(a, g.T)

    return _make(a.data.T.copy(), (a,), back)


def reshape(a: Tensor, shape) -> Tensor:
    try:
        data = a.data.reshape(shape)
    except ValueError as exc:
        raise ShapeError("reshape", f"{a.shape} -> {shape}") from exc

    def back(g):
        _accumulate(a, g.reshape(a.shape))

    return _make(data.copy(), (a,), back)


def concat(parts: Iterable[Tensor], axis: int = 0) -> Tensor:
    parts = list(parts)
    if not parts:
        raise ShapeError("concat", "empty input list")
    try:
        data = np.concatenate([p.data for p in parts], axis=axis)
    except ValueError as exc:
        raise ShapeError("concat", str(exc)) from exc
    sizes = [p.shape[axis] for p in parts]

    def back(g):
        offset = 0
        for p, size in zip(parts, sizes):
            index = [slice(None)] * g.ndim
            index[axis] = slice(offset, offset + size)
            _accumulate(p, g[tuple(index)])
            offset += size

    return _make(data, parts, back)


def split(a: Tensor, sizes: Sequence[int], axis: int = 0) -> list[Tensor]:
    if builtins.sum(sizes) != a.shape[axis]:
        raise ShapeError("split", f"sizes {sizes} do not cover axis of length {a.shape[axis]}")
    outs = []
    offset = 0
    for size in sizes:
        index = [slice(None)] * a.data.ndim
        index[axis] = slice(offset, offset + size)
        index = tuple(index)

        def back(g, index=index):
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            a.grad[index] += g

        outs.append(_make(a.data[index].copy(), (a,), back))
        offset += size
    return outs


def softmax(a: Tensor, axis: int = -1) -> Tensor:
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=axis, keepdims=True)

    def back(g):
        inner = (g * y).sum(axis=axis, keepdims=True)
        _accumulate(a, y * (g - inner))

    return _make(y, (a,), back)


def sigmoid(a: Tensor) -> Tensor:
    y = 1.0 / (1.0 + np.exp(-a.data))

    def back(g):
        _accumulate(a, g * y * (1.0 - y))

    return _make(y, (a,), back)


def tanh(a: Tensor) -> Tensor:
    y = np.tanh(a.data)

    def back(g):
        _accumulate(a, g * (1.0 - y * y))

    return _make(y, (a,), back)


def leaky_relu(a: Tensor, slope: float = 0.2) -> Tensor:
    y = np.where(a.data >= 0, a.data, slope * a.data)

    def back(g):
        _accumulate(a, g * np.where(a.data >= 0, 1.0, slope))

    return _make(y, (a,), back)


def exp(a: Tensor) -> Tensor:
    y = np.exp(a.data)

    def back(g):
        _accumulate(a, g * y)

    return _make(y, (a,), back)


def log(a: Tensor) -> Tensor:
    def back(g):
        _accumulate(a, g / a.data)

    with np.errstate(divide="ignore", invalid="ignore"):
        data = np.log(a.data)
    return _make(data, (a,), back)


def sum(a: Tensor, axis: int | None = None, keepdims: bool = False) -> Tensor:
    data = a.data.sum(axis=axis, keepdims=keepdims)

    def back(g):
        if axis is None:
            _accumulate(a, np.broadcast_to(g, a.shape).copy() if np.ndim(g) else np.full(a.shape, g))
        else:
            gg = g if keepdims else np.expand_dims(g, axis)
            _accumulate(a, np.broadcast_to(gg, a.shape).copy())

    return _make(data, (a,), back)


def mean(a: Tensor, axis: int | None = None) -> Tensor:
    count = a.size if axis is None else a.shape[axis]
    data = a.data.mean(axis=axis)

    def back(g):
        if axis is None:
            _accumulate(a, np.full(a.shape, g / count))
        else:
            gg = np.expand_dims(g, axis)
            _accumulate(a, np.broadcast_to(gg / count, a.shape).copy())

    return _make(data, (a,), back)


def take(a: Tensor, indices, axis: int = 0) -> Tensor:
    idx = np.asarray(indices, dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= a.shape[axis]):
        raise ShapeError("take", f"index out of range for axis of length {a.shape[axis]}")
    data = np.take(a.data, idx, axis=axis)

    def back(g):
        if a.grad is None:
            a.grad = np.zeros_like(a.data)
        if axis == 0:
            np.add.at(a.grad, idx, g)
        else:
            moved = np.moveaxis(a.grad, axis, 0)
            np.add.at(moved, idx, np.moveaxis(g, axis, 0))

    return _make(data, (a,), back)


def gather_rows(a: Tensor, indices) -> Tensor:
    """Row lookup in a 2-D tensor (embedding-table access)."""
    if a.data.ndim != 2:
        raise ShapeError("gather_rows", f"expected rank 2, got {a.shape}")
    return take(a, indices, axis=0)


def minimum(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = np.minimum(a.data, b.data)
    except ValueError as exc:
        raise ShapeError("minimum", f"{a.shape} vs {b.shape}") from exc
    mask = a.data <= b.data  # ties route the gradient to the first operand

    def back(g):
        _accumulate(a, _unbroadcast(g * mask, a.shape))
        _accumulate(b, _unbroadcast(g * ~mask, b.shape))

    return _make(data, (a, b), back)


def maximum(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = np.maximum(a.data, b.data)
    except ValueError as exc:
        raise ShapeError("maximum", f"{a.shape} vs {b.shape}") from exc
    mask = a.data >= b.data

    def back(g):
        _accumulate(a, _unbroadcast(g * mask, a.shape))
        _accumulate(b, _unbroadcast(g * ~mask, b.shape))

    return _make(data, (a, b), back)
