"""Measures, dual potentials, c-transforms and layer-cake extraction.

All arithmetic is on :class:`fractions.Fraction`; nothing here rounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import InfeasiblePotential, MissingLabels, RangeViolation, ValidationError
from .relations import (CostMatrix, GroundSet, IndexSet, Relation, as_fraction,
                        require_preorder, require_same_ground)

__all__ = [
    "Measure", "Potential", "LayerCakeResult", "c_transform", "check_two_var_feasible",
    "check_one_var_feasible", "relation_potential_feasible", "dual_objective",
    "layer_cake_extract", "rescale_to_unit",
]

FIRST, SECOND = "first", "second"


@dataclass(frozen=True)
class Measure:
    """Probability vector with exact rational weights summing to one."""

    ground: GroundSet
    weights: tuple

    def __post_init__(self):
        w = tuple(as_fraction(v) for v in self.weights)
        if len(w) != len(self.ground):
            raise ValidationError("length equals ground size",
                                  f"expected {len(self.ground)} weights, got {len(w)}")
        if any(v < 0 for v in w):
            raise ValidationError("nonnegative weights", "weights must be nonnegative")
        if sum(w) != 1:
            raise ValidationError("weights sum to 1", f"weights sum to {sum(w)}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_mapping(cls, ground: GroundSet, mass: Mapping) -> "Measure":
        unknown = set(mass) - set(ground.points)
        if unknown:
            raise ValidationError("known points", f"weights given for unknown points {sorted(map(str, unknown))}")
        return cls(ground, tuple(mass.get(p, 0) for p in ground.points))

    @classmethod
    def uniform_on(cls, ground: GroundSet, indices: Sequence[int]) -> "Measure":
        indices = list(indices)
        w = [Fraction(0)] * len(ground)
        share = Fraction(1, len(indices))
        for i in indices:
            w[i] += share
        return cls(ground, tuple(w))

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def mass(self, a: IndexSet) -> Fraction:
        require_same_ground(self.ground, a.ground)
        return sum((self.weights[i] for i in a), Fraction(0))

    @property
    def support(self) -> IndexSet:
        return IndexSet(self.ground, np.array([w > 0 for w in self.weights], dtype=bool))

    def expectation(self) -> Fraction:
        """Mean of the coordinate labels under this measure."""
        if self.ground.labels is None:
            raise MissingLabels()
        return sum((w * x for w, x in zip(self.weights, self.ground.labels)), Fraction(0))


@dataclass(frozen=True)
class Potential:
    ground: GroundSet
    values: tuple

    def __post_init__(self):
        v = tuple(as_fraction(x) for x in self.values)
        if len(v) != len(self.ground):
            raise ValidationError("length equals ground size",
                                  f"expected {len(self.ground)} values, got {len(v)}")
        object.__setattr__(self, "values", v)

    @classmethod
    def indicator(cls, a: IndexSet, scale=1) -> "Potential":
        scale = as_fraction(scale)
        return cls(a.ground, tuple(scale if m else Fraction(0) for m in a.membership))

    @classmethod
    def constant(cls, ground: GroundSet, value=0) -> "Potential":
        return cls(ground, (as_fraction(value),) * len(ground))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __neg__(self):
        return Potential(self.ground, tuple(-v for v in self.values))


@dataclass(frozen=True)
class LayerCakeResult:
    set: IndexSet
    value: Fraction
    threshold: Fraction


def c_transform(psi: Potential, c: CostMatrix, direction: str = FIRST) -> Potential:
    """Exact c-transform on a finite ground set.

    Parameters
    ----------
    psi : Potential
        Function being transformed.
    c : CostMatrix
        Cost, possibly asymmetric.
    direction : {"first", "second"}
        ``"first"`` gives ``x -> min_y c(x, y) - psi(y)`` (``psi`` read on the
        second coordinate); ``"second"`` gives ``y -> min_x c(x, y) - psi(x)``.

    Returns
    -------
    Potential
    """
    ground = require_same_ground(psi.ground, c.ground)
    e = c.entries
    n = len(ground)
    p = psi.values
    if direction == FIRST:
        out = tuple(min(e[x, y] - p[y] for y in range(n)) for x in range(n))
    elif direction == SECOND:
        out = tuple(min(e[x, y] - p[x] for x in range(n)) for y in range(n))
    else:
        raise ValueError(f"direction must be 'first' or 'second', not {direction!r}")
    return Potential(ground, out)


def check_two_var_feasible(phi: Potential, psi: Potential, c: CostMatrix) -> bool:
    require_same_ground(phi.ground, psi.ground, c.ground)
    e = c.entries
    return all(a + b <= e[i, j]
               for i, a in enumerate(phi.values)
               for j, b in enumerate(psi.values))


def check_one_var_feasible(phi: Potential, c: CostMatrix) -> bool:
    """``phi(i) - phi(j) <= c(i, j)`` for every ordered pair."""
    require_same_ground(phi.ground, c.ground)
    e = c.entries
    v = phi.values
    return all(a - b <= e[i, j]
               for i, a in enumerate(v)
               for j, b in enumerate(v))


def dual_objective(phi: Potential, mu: Measure, nu: Measure) -> Fraction:
    require_same_ground(phi.ground, mu.ground, nu.ground)
    return sum((f * (a - b) for f, a, b in zip(phi.values, mu.weights, nu.weights)), Fraction(0))


def _one_var_feasible_for_relation(values: Sequence[Fraction], r: Relation) -> bool:
    # for c = 1 - 1_R: values must not drop along R, and the spread is at most 1
    if values and max(values) - min(values) > 1:
        return False
    arr = np.array(values, dtype=object)
    drops = arr[:, None] > arr[None, :]
    return not bool(np.any(drops & r.incidence))


def layer_cake_extract(phi: Potential, mu: Measure, nu: Measure, r: Relation) -> LayerCakeResult:
    """Best superlevel set ``{x : t <= phi(x) <= 1}`` over the distinct values ``t`` of ``phi``.

    The objective ``mu(A_t) - nu(A_t)`` is piecewise constant in ``t``, so scanning
    the finitely many values of ``phi`` is exhaustive. Ties go to the largest ``t``.
    """
    ground = require_same_ground(phi.ground, mu.ground, nu.ground, r.ground)
    require_preorder(r)
    values = phi.values
    if any(v < 0 or v > 1 for v in values):
        raise RangeViolation()
    if not _one_var_feasible_for_relation(values, r):
        raise InfeasiblePotential()
    arr = np.array(values, dtype=object)
    best = None
    for t in sorted(set(values), reverse=True):
        members = IndexSet(ground, np.array([t <= v for v in arr], dtype=bool))
        value = mu.mass(members) - nu.mass(members)
        if best is None or value > best.value:
            best = LayerCakeResult(members, value, t)
    return best


def rescale_to_unit(phi: Potential, c: CostMatrix) -> Potential:
    """Shift a feasible potential for ``c = 1 - 1_R`` so its minimum is 0, then clamp at 1.

    Shifting leaves the objective unchanged whenever both measures have unit
    mass; for such ``c`` a feasible potential already spans at most 1, so the
    clamp only guards the contract.
    """
    ground = require_same_ground(phi.ground, c.ground)
    e = c.entries
    if not all(v == 0 or v == 1 for v in e.ravel()):
        raise ValidationError("cost of the form 1 - 1_R", "rescale_to_unit needs a zero-one cost")
    if not check_one_var_feasible(phi, c):
        raise InfeasiblePotential()
    if not phi.values:
        return phi
    low = min(phi.values)
    return Potential(ground, tuple(min(v - low, Fraction(1)) for v in phi.values))


def relation_potential_feasible(phi: Potential, r: Relation) -> bool:
    """One-variable feasibility for ``1 - 1_R`` without materialising the cost matrix."""
    require_same_ground(phi.ground, r.ground)
    return _one_var_feasible_for_relation(phi.values, r)
