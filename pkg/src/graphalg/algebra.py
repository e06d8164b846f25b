"""Binary operators, monoids, and semirings.

Every kernel in this library is parameterized over a semiring
(add-monoid, multiply-op, domain, additive identity) instead of
hard-coding (+, *). The built-in table covers the combinations the
graph algorithms need; user-defined operators are accepted anywhere a
built-in one is.

Integer domains treat the maximum representable value as "plus
infinity" (and the minimum as "minus infinity"); pairwise addition
saturates there instead of wrapping, so min-plus arithmetic over
integer weights stays correct.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np


def _saturating_add(x, y):
    """Elementwise x + y that clamps at the integer domain bounds."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.dtype.kind == "f" or y.dtype.kind == "f":
        return x + y
    info = np.iinfo(np.result_type(x, y))
    up = (y > 0) & (x > info.max - y)
    down = (y < 0) & (x < info.min - y)
    out = x + y
    if up.any():
        out = np.where(up, info.max, out)
    if down.any():
        out = np.where(down, info.min, out)
    return out


def _as_domain(values, dtype):
    return np.asarray(values).astype(dtype, copy=False)


@dataclass(frozen=True)
class BinaryOp:
    """A deterministic two-argument function over a numeric domain.

    ``fn`` is the scalar form. Kernels use ``pairwise`` on whole
    arrays; it prefers ``array_fn`` (a vectorized override), then the
    numpy ``ufunc``, and falls back to mapping ``fn``.
    """

    name: str
    fn: Callable
    ufunc: Optional[np.ufunc] = None
    array_fn: Optional[Callable] = None

    def __call__(self, a, b):
        return self.fn(a, b)

    def pairwise(self, x, y, dtype=None):
        if dtype is None:
            dtype = np.result_type(np.asarray(x), np.asarray(y))
        if self.array_fn is not None:
            return _as_domain(self.array_fn(x, y), dtype)
        if self.ufunc is not None:
            return _as_domain(self.ufunc(x, y), dtype)
        mapped = np.frompyfunc(self.fn, 2, 1)(np.asarray(x), np.asarray(y))
        return _as_domain(mapped, dtype)


@dataclass(frozen=True)
class Monoid:
    """An associative, commutative BinaryOp together with its identity.

    The identity is stored as a float; ``identity_for`` maps +/-inf to
    the bounds of integer domains.
    """

    op: BinaryOp
    identity: float

    @property
    def name(self):
        return self.op.name

    def identity_for(self, dtype):
        dtype = np.dtype(dtype)
        if dtype.kind == "f":
            return dtype.type(self.identity)
        if np.isposinf(self.identity):
            return dtype.type(np.iinfo(dtype).max)
        if np.isneginf(self.identity):
            return dtype.type(np.iinfo(dtype).min)
        return dtype.type(self.identity)

    def reduce(self, values, dtype=None):
        """Fold an array down to a scalar; empty input gives the identity."""
        values = np.asarray(values)
        if dtype is None:
            dtype = values.dtype
        if values.size == 0:
            return self.identity_for(dtype)
        if self.op.ufunc is not None:
            return np.dtype(dtype).type(self.op.ufunc.reduce(values))
        acc = values[0]
        for v in values[1:]:
            acc = self.op.fn(acc, v)
        return np.dtype(dtype).type(acc)

    def segment_reduce(self, values, starts, dtype=None):
        """Reduce contiguous segments of ``values``.

        ``starts`` must mark nonempty segments (standard reduceat
        contract); callers strip empty segments first.
        """
        values = np.asarray(values)
        if dtype is None:
            dtype = values.dtype
        if len(starts) == 0:
            return np.empty(0, dtype=dtype)
        uf = self.op.ufunc
        if uf is None:
            uf = np.frompyfunc(self.op.fn, 2, 1)
        return _as_domain(uf.reduceat(values, starts), dtype)


@dataclass(frozen=True)
class Semiring:
    """Add monoid plus multiply operator over a tagged domain."""

    add: Monoid
    multiply: BinaryOp
    domain: str = "real"

    @property
    def name(self):
        return f"{self.add.name}{self.multiply.name}"


# ---------------------------------------------------------------------------
# Built-in operators (bool results are valid {0,1} domain values)
# ---------------------------------------------------------------------------

PLUS = BinaryOp("Plus", operator.add, np.add, array_fn=_saturating_add)
MINUS = BinaryOp("Minus", operator.sub, np.subtract)
TIMES = BinaryOp("Multiplies", operator.mul, np.multiply)
MIN = BinaryOp("Minimum", min, np.minimum)
MAX = BinaryOp("Maximum", max, np.maximum)
LOGICAL_OR = BinaryOp("LogicalOr", lambda a, b: bool(a) or bool(b), np.logical_or)
LOGICAL_AND = BinaryOp("LogicalAnd", lambda a, b: bool(a) and bool(b), np.logical_and)
LESS = BinaryOp("Less", lambda a, b: bool(a < b), np.less)
NOT_EQUAL = BinaryOp("NotEqualTo", lambda a, b: bool(a != b), np.not_equal)
SECOND = BinaryOp(
    "SelectSecond", lambda a, b: b,
    array_fn=lambda x, y: np.broadcast_arrays(x, y)[1].copy(),
)

_MONOIDS = {
    "Plus": Monoid(PLUS, 0.0),
    "Multiplies": Monoid(TIMES, 1.0),
    "Minimum": Monoid(MIN, np.inf),
    "Maximum": Monoid(MAX, -np.inf),
    "LogicalOr": Monoid(LOGICAL_OR, 0.0),
    "LogicalAnd": Monoid(LOGICAL_AND, 1.0),
}

_SEMIRINGS = {
    "PlusMultiplies": Semiring(_MONOIDS["Plus"], TIMES, "real"),
    "LogicalOrAnd": Semiring(_MONOIDS["LogicalOr"], LOGICAL_AND, "boolean"),
    "MinPlus": Semiring(_MONOIDS["Minimum"], PLUS, "real with +inf"),
    "MaxPlus": Semiring(_MONOIDS["Maximum"], PLUS, "real"),
    "MinMultiplies": Semiring(_MONOIDS["Minimum"], TIMES, "real"),
    # helpers used by the label-propagation and comparison patterns
    "MinimumSelectSecond": Semiring(_MONOIDS["Minimum"], SECOND, "vertex ids"),
    "PlusLess": Semiring(_MONOIDS["Plus"], LESS, "boolean"),
    "MinimumNotEqualTo": Semiring(_MONOIDS["Minimum"], NOT_EQUAL, "boolean"),
}


def builtin_monoid(name: str) -> Monoid:
    """Look up a built-in monoid by name (e.g. ``"Plus"``, ``"Minimum"``)."""
    try:
        return _MONOIDS[name]
    except KeyError:
        raise KeyError(f"unknown monoid {name!r}; choose from {sorted(_MONOIDS)}") from None


def builtin_semiring(name: str) -> Semiring:
    """Look up a built-in semiring by name (e.g. ``"MinPlus"``)."""
    try:
        return _SEMIRINGS[name]
    except KeyError:
        raise KeyError(f"unknown semiring {name!r}; choose from {sorted(_SEMIRINGS)}") from None


AddLike = Union[Semiring, Monoid]
OpLike = Union[Semiring, Monoid, BinaryOp]


def add_op_of(op: OpLike) -> BinaryOp:
    """The operator an elementwise-union ("add") operation should apply."""
    if isinstance(op, Semiring):
        return op.add.op
    if isinstance(op, Monoid):
        return op.op
    return op


def add_identity_of(op: AddLike, dtype):
    if isinstance(op, Semiring):
        return op.add.identity_for(dtype)
    return op.identity_for(dtype)


def mult_op_of(op: OpLike) -> BinaryOp:
    """The operator an elementwise-intersection ("multiply") operation applies."""
    if isinstance(op, Semiring):
        return op.multiply
    if isinstance(op, Monoid):
        return op.op
    return op
