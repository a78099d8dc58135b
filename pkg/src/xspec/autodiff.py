"""Define-by-run reverse-mode automatic differentiation over numpy arrays.

Every op builds a node holding its output array and a closure mapping the
output gradient to parent gradients. Graphs are rebuilt each training step.
Arithmetic is single precision unless ``precision(np.float64)`` is active,
which exists so finite-difference oracles can evaluate in double.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

_DTYPE = [np.float32]
_GRAD_ENABLED = [True]


class GradientError(RuntimeError):
    """Raised when backward meets an invalid graph or a non-finite value."""


@contextlib.contextmanager
def precision(dtype):
    _DTYPE.append(np.dtype(dtype).type)
    try:
        yield
    finally:
        _DTYPE.pop()


@contextlib.contextmanager
def no_grad():
    _GRAD_ENABLED.append(False)
    try:
        yield
    finally:
        _GRAD_ENABLED.pop()


def default_dtype():
    return _DTYPE[-1]


class RowGrad:
    """Gradient of a 2D table touching only a subset of rows (unique, sorted)."""

    __slots__ = ("rows", "values")

    def __init__(self, rows: np.ndarray, values: np.ndarray):
        self.rows = rows
        self.values = values

    def to_dense(self, shape) -> np.ndarray:
        out = np.zeros(shape, dtype=self.values.dtype)
        out[self.rows] = self.values
        return out


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "sparse_grad", "_parents", "_backward", "op", "__weakref__")

    __array_priority__ = 100.0

    def __init__(self, data, requires_grad: bool = False, sparse_grad: bool = False):
        dtype = default_dtype()
        arr = np.asarray(data)
        if arr.dtype != dtype:
            arr = arr.astype(dtype)
        self.data = arr
        self.grad = None
        self.requires_grad = requires_grad
        # Leaf tables fed only through `gather` may keep row-sparse grads.
        self.sparse_grad = sparse_grad
        self._parents: tuple = ()
        self._backward = None
        self.op = "leaf"

    # -- basic protocol -------------------------------------------------
    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def __len__(self):
        return len(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.shape}, op={self.op}, requires_grad={self.requires_grad})"

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def zero_grad(self):
        self.grad = None

    def dense_grad(self) -> np.ndarray | None:
        if isinstance(self.grad, RowGrad):
            return self.grad.to_dense(self.shape)
        return self.grad

    # -- operators ------------------------------------------------------
    def __add__(self, o):
        return add(self, o)

    def __radd__(self, o):
        return add(o, self)

    def __sub__(self, o):
        return sub(self, o)

    def __rsub__(self, o):
        return sub(o, self)

    def __mul__(self, o):
        return mul(self, o)

    def __rmul__(self, o):
        return mul(o, self)

    def __truediv__(self, o):
        return mul(self, reciprocal(o))

    def __rtruediv__(self, o):
        return mul(o, reciprocal(self))

    def __neg__(self):
        return neg(self)

    def __matmul__(self, o):
        return matmul(self, o)

    def __rmatmul__(self, o):
        return matmul(o, self)

    def __pow__(self, p):
        return power(self, p)

    def __getitem__(self, idx):
        return getitem(self, idx)

    def sum(self, axis=None, keepdims=False):
        return tsum(self, axis, keepdims)

    def mean(self, axis=None, keepdims=False):
        return mean(self, axis, keepdims)

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return reshape(self, shape)

    @property
    def T(self):
        return transpose(self)

    def backward(self):
        backward(self)


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _wants_grad(*ts: Tensor) -> bool:
    return _GRAD_ENABLED[-1] and any(t.requires_grad for t in ts)


def _make(data: np.ndarray, parents: tuple, backward_fn: Callable, op: str) -> Tensor:
    out = Tensor.__new__(Tensor)
    out.data = data
    out.grad = None
    out.sparse_grad = False
    out.op = op
    if _wants_grad(*parents):
        out.requires_grad = True
        out._parents = parents
        out._backward = backward_fn
    else:
        out.requires_grad = False
        out._parents = ()
        out._backward = None
    return out


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, (gs, s) in enumerate(zip(g.shape, shape)) if s == 1 and gs != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


# -- elementwise binary ---------------------------------------------------
def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    sa, sb = a.shape, b.shape
    return _make(a.data + b.data, (a, b), lambda g: (_unbroadcast(g, sa), _unbroadcast(g, sb)), "add")


def sub(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    sa, sb = a.shape, b.shape
    return _make(a.data - b.data, (a, b), lambda g: (_unbroadcast(g, sa), _unbroadcast(-g, sb)), "sub")


def mul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)

    def bw(g):
        ga = _unbroadcast(g * b.data, a.shape) if a.requires_grad else None
        gb = _unbroadcast(g * a.data, b.shape) if b.requires_grad else None
        return ga, gb

    return _make(a.data * b.data, (a, b), bw, "mul")


def neg(a) -> Tensor:
    a = as_tensor(a)
    return _make(-a.data, (a,), lambda g: (-g,), "neg")


def maximum(a, b) -> Tensor:
    """Elementwise max; ties send the gradient to the first argument."""
    a, b = as_tensor(a), as_tensor(b)
    pick_a = a.data >= b.data

    def bw(g):
        return _unbroadcast(np.where(pick_a, g, 0), a.shape), _unbroadcast(np.where(pick_a, 0, g), b.shape)

    return _make(np.maximum(a.data, b.data), (a, b), bw, "max")


def matmul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)

    def bw(g):
        ga = gb = None
        if a.requires_grad:
            if b.ndim == 1:
                ga = np.multiply.outer(g, b.data)
            else:
                ga = g @ np.swapaxes(b.data, -1, -2)
            ga = _unbroadcast(ga, a.shape)
        if b.requires_grad:
            if a.ndim == 1:
                gb = np.multiply.outer(a.data, g)
            elif b.ndim == 1:
                gb = np.swapaxes(a.data, -1, -2) @ g[..., None]
                gb = gb[..., 0]
            else:
                gb = np.swapaxes(a.data, -1, -2) @ g
            gb = _unbroadcast(gb, b.shape)
        return ga, gb

    return _make(a.data @ b.data, (a, b), bw, "matmul")


def linear(x, w, b=None) -> Tensor:
    """x @ w + b for a 2D batch; one node instead of two."""
    x, w = as_tensor(x), as_tensor(w)
    out = x.data @ w.data
    parents = (x, w)
    if b is not None:
        b = as_tensor(b)
        out += b.data
        parents = (x, w, b)

    def bw(g):
        gx = g @ w.data.T if x.requires_grad else None
        gw = x.data.T @ g if w.requires_grad else None
        if b is None:
            return gx, gw
        gb = g.sum(axis=0) if b.requires_grad else None
        return gx, gw, gb

    return _make(out, parents, bw, "linear")


# -- elementwise unary ----------------------------------------------------
def sin(a) -> Tensor:
    a = as_tensor(a)
    return _make(np.sin(a.data), (a,), lambda g: (g * np.cos(a.data),), "sin")


def cos(a) -> Tensor:
    a = as_tensor(a)
    return _make(np.cos(a.data), (a,), lambda g: (-g * np.sin(a.data),), "cos")


def exp(a) -> Tensor:
    a = as_tensor(a)
    out = np.exp(a.data)
    return _make(out, (a,), lambda g: (g * out,), "exp")


def log(a) -> Tensor:
    a = as_tensor(a)
    return _make(np.log(a.data), (a,), lambda g: (g / a.data,), "log")


def power(a, p: float) -> Tensor:
    a = as_tensor(a)
    p = float(p)
    out = np.power(a.data, p)
    return _make(out, (a,), lambda g: (g * p * np.power(a.data, p - 1.0),), "power")


def reciprocal(a) -> Tensor:
    a = as_tensor(a)
    out = 1.0 / a.data
    return _make(out, (a,), lambda g: (-g * out * out,), "reciprocal")


def sqrt(a) -> Tensor:
    return power(a, 0.5)


def relu(a) -> Tensor:
    a = as_tensor(a)
    out = np.maximum(a.data, 0)
    return _make(out, (a,), lambda g: (g * (out > 0),), "relu")


def sigmoid(a) -> Tensor:
    a = as_tensor(a)
    # exp of a non-positive argument only, so neither branch overflows
    z = np.exp(-np.abs(a.data))
    out = np.where(a.data >= 0, 1.0 / (1.0 + z), z / (1.0 + z)).astype(a.data.dtype)
    return _make(out, (a,), lambda g: (g * out * (1.0 - out),), "sigmoid")


def softplus(a) -> Tensor:
    a = as_tensor(a)
    x = a.data
    out = np.log1p(np.exp(-np.abs(x))) + np.maximum(x, 0)

    def bw(g):
        z = np.exp(-np.abs(x))
        s = np.where(x >= 0, 1.0 / (1.0 + z), z / (1.0 + z))
        return (g * s.astype(x.dtype),)

    return _make(out.astype(x.dtype), (a,), bw, "softplus")


def clip(a, lo: float, hi: float) -> Tensor:
    a = as_tensor(a)
    inside = (a.data >= lo) & (a.data <= hi)
    return _make(np.clip(a.data, lo, hi), (a,), lambda g: (g * inside,), "clip")


# -- reductions and shape ops ---------------------------------------------
def tsum(a, axis=None, keepdims=False) -> Tensor:
    a = as_tensor(a)
    shape = a.shape

    def bw(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, shape).astype(g.dtype, copy=True),)

    return _make(np.asarray(a.data.sum(axis=axis, keepdims=keepdims)), (a,), bw, "sum")


def mean(a, axis=None, keepdims=False) -> Tensor:
    a = as_tensor(a)
    if axis is None:
        n = a.size
    else:
        axes = axis if isinstance(axis, tuple) else (axis,)
        n = int(np.prod([a.shape[i] for i in axes]))
    return tsum(a, axis, keepdims) * (1.0 / n)


def cumsum(a, axis: int = -1) -> Tensor:
    a = as_tensor(a)

    def bw(g):
        return (np.flip(np.cumsum(np.flip(g, axis), axis=axis), axis),)

    return _make(np.cumsum(a.data, axis=axis), (a,), bw, "cumsum")


def reshape(a, shape) -> Tensor:
    a = as_tensor(a)
    old = a.shape
    return _make(a.data.reshape(shape), (a,), lambda g: (g.reshape(old),), "reshape")


def transpose(a, axes=None) -> Tensor:
    a = as_tensor(a)
    inv = None if axes is None else tuple(np.argsort(axes))
    return _make(np.transpose(a.data, axes), (a,), lambda g: (np.transpose(g, inv),), "transpose")


def broadcast_to(a, shape) -> Tensor:
    a = as_tensor(a)
    old = a.shape
    out = np.broadcast_to(a.data, shape)
    return _make(out, (a,), lambda g: (_unbroadcast(g, old),), "broadcast")


def expand_dims(a, axis: int) -> Tensor:
    a = as_tensor(a)
    return reshape(a, np.expand_dims(a.data, axis).shape)


def getitem(a, idx) -> Tensor:
    a = as_tensor(a)
    shape = a.shape

    def bw(g):
        out = np.zeros(shape, dtype=g.dtype)
        np.add.at(out, idx, g)
        return (out,)

    def bw_basic(g):
        out = np.zeros(shape, dtype=g.dtype)
        out[idx] = g
        return (out,)

    basic = _is_basic_index(idx)
    return _make(a.data[idx], (a,), bw_basic if basic else bw, "slice")


def _is_basic_index(idx) -> bool:
    items = idx if isinstance(idx, tuple) else (idx,)
    return all(isinstance(i, (int, slice, type(None), type(Ellipsis))) for i in items)


def concat(tensors: Sequence, axis: int = -1) -> Tensor:
    ts = [as_tensor(t) for t in tensors]
    sizes = [t.shape[axis] for t in ts]
    splits = np.cumsum(sizes)[:-1]

    def bw(g):
        return tuple(np.split(g, splits, axis=axis))

    return _make(np.concatenate([t.data for t in ts], axis=axis), tuple(ts), bw, "concat")


def stack(tensors: Sequence, axis: int = -1) -> Tensor:
    ts = [expand_dims(as_tensor(t), axis if axis >= 0 else t.ndim + axis + 1) for t in tensors]
    return concat(ts, axis=axis)


def gather(table, index: np.ndarray) -> Tensor:
    """Rows of a 2D table at integer ``index`` (any shape). Output shape index.shape + (C,)."""
    table = as_tensor(table)
    index = np.asarray(index)
    n_rows, n_ch = table.shape
    flat = index.reshape(-1)

    def bw(g):
        # bincount per channel: linear time, and a fixed summation order
        rows, vals = _row_sums(flat, g.reshape(-1, n_ch), n_rows)
        if table.sparse_grad and table._backward is None:
            return (RowGrad(rows, vals),)
        out = np.zeros((n_rows, n_ch), dtype=g.dtype)
        out[rows] = vals
        return (out,)

    return _make(table.data[index], (table,), bw, "gather")


def _row_sums(flat: np.ndarray, g: np.ndarray, n_rows: int):
    """Rows hit by ``flat`` and the per-row sums of ``g`` (len(flat), C)."""
    rows = np.flatnonzero(np.bincount(flat, minlength=n_rows))
    slot = np.zeros(n_rows, dtype=np.int64)
    slot[rows] = np.arange(len(rows))
    inv = slot[flat]
    vals = np.empty((len(rows), g.shape[1]), dtype=g.dtype)
    for c in range(g.shape[1]):
        vals[:, c] = np.bincount(inv, weights=g[:, c], minlength=len(rows))
    return rows, vals


def weighted_gather(table, index: np.ndarray, weights) -> Tensor:
    """sum_k weights[k, p] * table[index[k, p]] for a 2D table: (K, P) -> (P, C).

    One node for interpolation stencils such as trilinear corners; avoids
    materializing the (K, P, C) gather in the graph.
    """
    table, weights = as_tensor(table), as_tensor(weights)
    index = np.asarray(index)
    if index.ndim != 2 or weights.shape != index.shape:
        raise ValueError(f"index {index.shape} and weights {weights.shape} must be matching (K, P) arrays")
    n_rows, n_ch = table.shape
    picked = table.data[index]  # (K, P, C)
    out = np.einsum("kp,kpc->pc", weights.data, picked)

    def bw(g):
        gt = gw = None
        if table.requires_grad:
            contrib = (weights.data[..., None] * g[None]).reshape(-1, n_ch)
            rows, vals = _row_sums(index.reshape(-1), contrib, n_rows)
            if table.sparse_grad and table._backward is None:
                gt = RowGrad(rows, vals)
            else:
                gt = np.zeros((n_rows, n_ch), dtype=g.dtype)
                gt[rows] = vals
        if weights.requires_grad:
            gw = np.einsum("kpc,pc->kp", picked, g)
        return gt, gw

    return _make(out, (table, weights), bw, "weighted_gather")


def where(cond: np.ndarray, a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    cond = np.asarray(cond, dtype=bool)

    def bw(g):
        return _unbroadcast(np.where(cond, g, 0), a.shape), _unbroadcast(np.where(cond, 0, g), b.shape)

    return _make(np.where(cond, a.data, b.data), (a, b), bw, "where")


# -- backward ---------------------------------------------------------------
def _topological_order(root: Tensor) -> list[Tensor]:
    order: list[Tensor] = []
    state: dict[int, int] = {}  # 1 = on stack, 2 = done
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        key = id(node)
        if expanded:
            state[key] = 2
            order.append(node)
            continue
        s = state.get(key)
        if s == 2:
            continue
        if s == 1:
            raise GradientError(f"cycle in computation graph at op '{node.op}'")
        state[key] = 1
        stack.append((node, True))
        for p in node._parents:
            if p.requires_grad:
                ps = state.get(id(p))
                if ps == 1:
                    raise GradientError(f"cycle in computation graph at op '{p.op}'")
                if ps is None:
                    stack.append((p, False))
    return order


def _accumulate(store: dict, node: Tensor, g):
    key = id(node)
    prev = store.get(key)
    if prev is None:
        store[key] = g
        return
    if isinstance(prev, RowGrad) or isinstance(g, RowGrad):
        store[key] = _merge_grads(prev, g, node.shape)
    else:
        store[key] = prev + g


def _merge_grads(a, b, shape):
    if isinstance(a, RowGrad) and isinstance(b, RowGrad):
        rows = np.concatenate([a.rows, b.rows])
        vals = np.concatenate([a.values, b.values])
        order = np.argsort(rows, kind="stable")
        rows, vals = rows[order], vals[order]
        starts = np.flatnonzero(np.r_[True, rows[1:] != rows[:-1]])
        return RowGrad(rows[starts], np.add.reduceat(vals, starts, axis=0))
    dense = a if not isinstance(a, RowGrad) else b
    sparse = b if dense is a else a
    dense = dense.copy()
    dense[sparse.rows] += sparse.values
    return dense


def backward(root: Tensor) -> None:
    """Accumulate d(root)/d(leaf) into ``leaf.grad`` for every requires_grad leaf."""
    if root.size != 1:
        raise GradientError(f"backward needs a scalar root, got shape {root.shape}")
    if not root.requires_grad:
        return
    order = _topological_order(root)
    grads: dict[int, object] = {id(root): np.ones(root.shape, dtype=root.data.dtype)}
    for node in reversed(order):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        if node._backward is None:
            if node.grad is None:
                node.grad = g
            elif isinstance(node.grad, RowGrad) or isinstance(g, RowGrad):
                node.grad = _merge_grads(node.grad, g, node.shape)
            else:
                node.grad = node.grad + g
            continue
        parent_grads = node._backward(g)
        for p, pg in zip(node._parents, parent_grads):
            if pg is None or not p.requires_grad:
                continue
            vals = pg.values if isinstance(pg, RowGrad) else pg
            if not np.all(np.isfinite(vals)):
                raise GradientError(f"non-finite gradient produced by op '{node.op}'")
            _accumulate(grads, p, pg)


# -- optimizer ----------------------------------------------------------------
@dataclass
class AdamState:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step_count: int = 0
    first_moment: list = field(default_factory=list)
    second_moment: list = field(default_factory=list)

    @classmethod
    def for_params(cls, params: Iterable[Tensor], **kw) -> "AdamState":
        params = list(params)
        st = cls(**kw)
        st.first_moment = [np.zeros_like(p.data) for p in params]
        st.second_moment = [np.zeros_like(p.data) for p in params]
        return st


def adam_step(params: Sequence[Tensor], state: AdamState, lr: float | None = None) -> None:
    """In-place bias-corrected Adam update.

    Row-sparse gradients update only their rows (masked Adam, as used for
    voxel grids); untouched rows keep their moments and values.
    """
    if len(params) != len(state.first_moment):
        raise ValueError("optimizer state does not match parameter list")
    lr = state.learning_rate if lr is None else lr
    state.step_count += 1
    t = state.step_count
    b1, b2, eps = state.beta1, state.beta2, state.epsilon
    c1 = 1.0 - b1**t
    c2 = 1.0 - b2**t
    for p, m, v in zip(params, state.first_moment, state.second_moment):
        if m.shape != p.data.shape:
            raise ValueError(f"moment shape {m.shape} does not match parameter {p.data.shape}")
        g = p.grad
        if g is None:
            raise ValueError("parameter has no gradient; run backward first")
        if isinstance(g, RowGrad):
            r = g.rows
            mr = b1 * m[r] + (1 - b1) * g.values
            vr = b2 * v[r] + (1 - b2) * g.values * g.values
            m[r] = mr
            v[r] = vr
            p.data[r] -= (lr * (mr / c1) / (np.sqrt(vr / c2) + eps)).astype(p.data.dtype)
            continue
        if g.shape != p.data.shape:
            raise ValueError(f"gradient shape {g.shape} does not match parameter {p.data.shape}")
        m *= b1
        m += (1 - b1) * g
        v *= b2
        v += (1 - b2) * g * g
        p.data -= (lr * (m / c1) / (np.sqrt(v / c2) + eps)).astype(p.data.dtype)
