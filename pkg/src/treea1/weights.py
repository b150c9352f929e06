"""Step weights on homogeneous trees.

A step weight assigns a positive rational to each leaf of a shape; it stands
for the function constant on every leaf.  Besides direct and randomized
construction, this module builds the two-parameter extremal family that makes
the rearrangement bound tight, and provides the exact text serialization used
by the CLI.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParameterError
from .rationals import as_fraction, format_rational
from .tree import TreeShape, make_shape


@dataclass(frozen=True)
class StepWeight:
    """Positive rational leaf values on a tree shape."""

    shape: TreeShape
    leaf_values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(as_fraction(v) for v in self.leaf_values)
        if len(values) != self.shape.leaf_count:
            raise ParameterError(
                f"expected {self.shape.leaf_count} leaf values for shape "
                f"(k={self.shape.k}, m={self.shape.m}), got {len(values)}"
            )
        for pos, v in enumerate(values):
            if v <= 0:
                raise ParameterError(f"leaf value at position {pos} must be positive, got {v}")
        object.__setattr__(self, "leaf_values", values)

    @property
    def total_integral(self) -> Fraction:
        """Integral over the whole space: mean of the leaf values."""
        return Fraction(sum(self.leaf_values), self.shape.leaf_count)


def make_step_weight(shape: TreeShape, values: Sequence) -> StepWeight:
    """Build a step weight from any sequence of exact rationals."""
    return StepWeight(shape, tuple(values))


def constant_weight(shape: TreeShape, value=1) -> StepWeight:
    return StepWeight(shape, (as_fraction(value),) * shape.leaf_count)


def scale(w: StepWeight, factor) -> StepWeight:
    """Multiply every leaf value by a positive rational."""
    s = as_fraction(factor)
    if s <= 0:
        raise ParameterError(f"scale factor must be positive, got {s}")
    return StepWeight(w.shape, tuple(v * s for v in w.leaf_values))


def refine(w: StepWeight, levels: int = 1) -> StepWeight:
    """Re-express the weight one or more levels deeper.

    Each leaf splits into k equal children carrying the same value, so the
    represented function is unchanged.
    """
    if not isinstance(levels, int) or levels < 1:
        raise ParameterError(f"refinement levels must be a positive integer, got {levels!r}")
    repeat = w.shape.k**levels
    values = tuple(v for v in w.leaf_values for _ in range(repeat))
    return StepWeight(make_shape(w.shape.k, w.shape.m + levels), values)


def random_weight(shape: TreeShape, seed: int, grid: Iterable) -> StepWeight:
    """Draw each leaf value independently and uniformly from a finite grid.

    The generator is Python's Mersenne Twister seeded with ``seed``; the grid
    is canonicalized (deduplicated, sorted) so the draw depends only on the
    set of values, not on iteration order.  Equal seeds give equal weights.
    """
    values = sorted({as_fraction(g) for g in grid})
    if not values:
        raise ParameterError("grid must contain at least one value")
    for g in values:
        if g <= 0:
            raise ParameterError(f"grid values must be positive, got {g}")
    rng = random.Random(seed)
    picks = tuple(values[rng.randrange(len(values))] for _ in range(shape.leaf_count))
    return StepWeight(shape, picks)


@dataclass(frozen=True)
class ExtremalParams:
    """Parameters of the extremal family at depth >= 2.

    The family puts the large value ``alpha`` on a set of measure ``delta``
    inside the first grandchild of the root and on one full grandchild of
    every other branch, and the small value ``eps`` elsewhere; ``alpha`` and
    ``eps`` are coupled to the target constant by alpha/eps = k*c - k + 1.
    ``delta`` must be a whole number of leaves at the chosen depth.
    """

    k: int
    c: Fraction
    eps: Fraction
    alpha: Fraction
    delta: Fraction
    depth: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise ParameterError(f"homogeneity k must be an integer >= 2, got {self.k!r}")
        if not isinstance(self.depth, int) or self.depth < 2:
            raise ParameterError(f"depth must be an integer >= 2, got {self.depth!r}")
        for name in ("c", "eps", "alpha", "delta"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.c < 1:
            raise ParameterError(f"target constant c must be >= 1, got {self.c}")
        if self.eps <= 0 or self.alpha <= 0:
            raise ParameterError("alpha and eps must be positive")
        if self.alpha != (self.k * self.c - self.k + 1) * self.eps:
            raise ParameterError(
                f"alpha/eps must equal k*c-k+1 = {self.k * self.c - self.k + 1}, "
                f"got {self.alpha}/{self.eps}"
            )
        cell = Fraction(1, self.k**2)
        if not (0 < self.delta <= cell):
            raise ParameterError(f"delta must lie in (0, 1/k^2] = (0, {cell}], got {self.delta}")
        scaled = self.delta * self.k**self.depth
        if scaled.denominator != 1:
            raise ParameterError(
                f"delta = {self.delta} is not a whole number of leaves at depth {self.depth}"
            )

    @property
    def high_leaf_count(self) -> int:
        """Number of depth-``depth`` leaves carrying alpha inside the first grandchild."""
        return int(self.delta * self.k**self.depth)

    @classmethod
    def from_constant(cls, k: int, c, delta, depth: int, eps=1) -> "ExtremalParams":
        c = as_fraction(c)
        eps = as_fraction(eps)
        return cls(k=k, c=c, eps=eps, alpha=(k * c - k + 1) * eps, delta=as_fraction(delta), depth=depth)

    @classmethod
    def from_alpha(cls, k: int, alpha, eps, delta, depth: int) -> "ExtremalParams":
        alpha = as_fraction(alpha)
        eps = as_fraction(eps)
        if eps <= 0:
            raise ParameterError("eps must be positive")
        c = (alpha / eps + k - 1) / k
        return cls(k=k, c=c, eps=eps, alpha=alpha, delta=as_fraction(delta), depth=depth)


def extremal_exact(k: int, c) -> StepWeight:
    """Depth-2 weight whose A1 constant is exactly ``c`` and whose
    rearrangement sup-ratio is exactly ``k*c - k + 1``.

    With eps normalized to 1 and alpha = k*c - k + 1, the value alpha sits on
    the first grandchild of every level-1 node and eps everywhere else.
    """
    if not isinstance(k, int) or k < 2:
        raise ParameterError(f"homogeneity k must be an integer >= 2, got {k!r}")
    c = as_fraction(c)
    if c < 1:
        raise ParameterError(f"target constant c must be >= 1, got {c}")
    alpha = k * c - k + 1
    eps = Fraction(1)
    values = [eps] * (k * k)
    for branch in range(k):
        values[branch * k] = alpha
    return StepWeight(make_shape(k, 2), tuple(values))


def extremal_family(params: ExtremalParams) -> StepWeight:
    """The delta-parameterized family at a given depth.

    Value alpha goes on the leftmost ``delta * k**depth`` leaves of the first
    grandchild of the root and on every leaf of the first grandchild of each
    remaining branch; eps fills the rest.  At delta = 1/k^2 this coincides
    leafwise with ``extremal_exact`` after refinement to the same depth.
    """
    k, depth = params.k, params.depth
    shape = make_shape(k, depth)
    grandchild = k ** (depth - 2)
    values = [params.eps] * shape.leaf_count
    for leaf in range(params.high_leaf_count):
        values[leaf] = params.alpha
    for branch in range(1, k):
        start = branch * k * grandchild
        for leaf in range(start, start + grandchild):
            values[leaf] = params.alpha
    return StepWeight(shape, tuple(values))


def family_constant_formula(k: int, alpha, eps, delta) -> Fraction:
    """Closed-form first-level average ratio of the extremal family.

    Returns (k/eps) * (alpha*delta + (1/k - delta)*eps): the average of the
    family over one level-1 branch divided by eps.  For delta strictly inside
    (0, 1/k^2) the measured A1 constant of the family is larger (the binding
    node sits one level deeper); the verification sweep reports both.
    """
    if not isinstance(k, int) or k < 2:
        raise ParameterError(f"homogeneity k must be an integer >= 2, got {k!r}")
    alpha, eps, delta = as_fraction(alpha), as_fraction(eps), as_fraction(delta)
    if alpha <= 0 or eps <= 0 or delta <= 0:
        raise ParameterError("alpha, eps and delta must be positive")
    return k * (alpha * delta + (Fraction(1, k) - delta) * eps) / eps


def weight_to_text(w: StepWeight) -> str:
    """Serialize as ``k m v_0 ... v_{k^m-1}`` with rationals as p/q, newline-terminated."""
    fields = [str(w.shape.k), str(w.shape.m)]
    fields.extend(format_rational(v) for v in w.leaf_values)
    return " ".join(fields) + "\n"


def weight_from_text(text: str) -> StepWeight:
    """Parse the serialization produced by :func:`weight_to_text` (exact round-trip)."""
    tokens = text.split()
    if len(tokens) < 3:
        raise ParameterError("weight record needs at least 'k m v_0'")
    try:
        k, m = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise ParameterError(f"bad k/m header in weight record: {tokens[:2]}") from exc
    shape = make_shape(k, m)
    values = tokens[2:]
    if len(values) != shape.leaf_count:
        raise ParameterError(
            f"weight record for k={k}, m={m} needs {shape.leaf_count} values, got {len(values)}"
        )
    return StepWeight(shape, tuple(as_fraction(v) for v in values))


def weight_hash(w: StepWeight) -> str:
    """SHA-256 of the canonical serialization; stable row identifier in reports."""
    return hashlib.sha256(weight_to_text(w).encode("ascii")).hexdigest()
