"""Finite ground sets, relations, upper sets and relation-induced costs.

Relations are dense boolean matrices: entry ``(i, j)`` is true iff point ``i``
is related to point ``j``. All containers are immutable; arrays handed out are
read-only views.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GroundMismatch, MissingLabels, RelationNotPreorder, ValidationError

MAX_POINTS = 2 ** 16

__all__ = [
    "GroundSet", "Relation", "RelationFamily", "CostMatrix", "IndexSet",
    "CostReport", "FamilyReport", "as_fraction", "require_same_ground",
    "is_reflexive", "is_transitive", "preorder_witness", "require_preorder",
    "transitive_reflexive_closure", "is_upper_set", "upper_closure",
    "relation_to_cost", "validate_cost", "check_family",
]


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings exactly; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"float {value!r} is not an exact rational; pass a Fraction or 'p/q' text")
    return Fraction(value)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class GroundSet:
    """Indexed finite point set with optional exact coordinate labels."""

    points: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        points = tuple(self.points)
        object.__setattr__(self, "points", points)
        if len(set(points)) != len(points):
            raise ValidationError("unique identifiers", "point identifiers must be unique")
        if len(points) > MAX_POINTS:
            raise ValidationError("size bound", f"at most {MAX_POINTS} points are supported")
        if self.labels is not None:
            labels = tuple(as_fraction(v) for v in self.labels)
            if len(labels) != len(points):
                raise ValidationError("one label per point", "labels must match points one-to-one")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def range(cls, n: int) -> "GroundSet":
        return cls(tuple(str(i) for i in range(n)))

    @classmethod
    def from_labels(cls, labels: Sequence, ids: Optional[Sequence] = None) -> "GroundSet":
        labels = [as_fraction(v) for v in labels]
        if ids is None:
            ids = [str(v) for v in labels]
        return cls(tuple(ids), tuple(labels))

    def __len__(self) -> int:
        return len(self.points)

    def index(self, point) -> int:
        return self.points.index(point)


def require_same_ground(*grounds: GroundSet) -> GroundSet:
    first = grounds[0]
    for other in grounds[1:]:
        if other is not first and other != first:
            raise GroundMismatch()
    return first


@dataclass(frozen=True, eq=False)
class Relation:
    ground: GroundSet
    incidence: np.ndarray

    def __post_init__(self):
        inc = np.asarray(self.incidence, dtype=bool)
        n = len(self.ground)
        if inc.shape != (n, n):
            raise ValidationError("square incidence", f"incidence must be {n}x{n}, got {inc.shape}")
        object.__setattr__(self, "incidence", _frozen(inc))

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.ground == other.ground and np.array_equal(self.incidence, other.incidence)

    def __hash__(self):
        return hash((self.ground, self.incidence.tobytes()))

    def __len__(self):
        return len(self.ground)

    def __contains__(self, pair) -> bool:
        i, j = pair
        return bool(self.incidence[i, j])

    @classmethod
    def identity(cls, ground: GroundSet) -> "Relation":
        return cls(ground, np.eye(len(ground), dtype=bool))

    @classmethod
    def empty(cls, ground: GroundSet) -> "Relation":
        n = len(ground)
        return cls(ground, np.zeros((n, n), dtype=bool))

    @classmethod
    def full(cls, ground: GroundSet) -> "Relation":
        n = len(ground)
        return cls(ground, np.ones((n, n), dtype=bool))

    @classmethod
    def chain(cls, ground: GroundSet) -> "Relation":
        """Total order following the point order: ``i <= j`` iff ``i <= j`` as indices."""
        n = len(ground)
        return cls(ground, np.triu(np.ones((n, n), dtype=bool)))

    @classmethod
    def from_pairs(cls, ground: GroundSet, pairs: Iterable, *, by_id: bool = True,
                   include_diagonal: bool = False) -> "Relation":
        n = len(ground)
        inc = np.eye(n, dtype=bool) if include_diagonal else np.zeros((n, n), dtype=bool)
        lookup = {p: k for k, p in enumerate(ground.points)}
        for a, b in pairs:
            i, j = (lookup[a], lookup[b]) if by_id else (a, b)
            inc[i, j] = True
        return cls(ground, inc)

    @classmethod
    def threshold(cls, ground: GroundSet, gap, *, strict: bool = True) -> "Relation":
        """``x ~ y`` iff ``x == y`` or ``label(y) > label(x) + gap`` (``>=`` when not strict).

        Decided exactly: labels and gap are cleared to a common integer denominator.
        """
        if ground.labels is None:
            raise MissingLabels()
        gap = as_fraction(gap)
        values = list(ground.labels) + [gap]
        den = math.lcm(*(v.denominator for v in values))
        nums = [v.numerator * (den // v.denominator) for v in ground.labels]
        gap_num = gap.numerator * (den // gap.denominator)
        if max((abs(v) for v in nums), default=0) + abs(gap_num) < 2 ** 62:
            x = np.array(nums, dtype=np.int64)
        else:
            x = np.array(nums, dtype=object)
        diff = x[None, :] - x[:, None]
        inc = (diff > gap_num) if strict else (diff >= gap_num)
        inc = np.asarray(inc, dtype=bool)
        np.fill_diagonal(inc, True)
        return cls(ground, inc)

    def pairs(self, *, by_id: bool = True, include_diagonal: bool = True) -> list:
        out = []
        for i, j in zip(*np.nonzero(self.incidence)):
            if i == j and not include_diagonal:
                continue
            out.append((self.ground.points[i], self.ground.points[j]) if by_id else (int(i), int(j)))
        return out


@dataclass(frozen=True, eq=False)
class IndexSet:
    ground: GroundSet
    membership: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.membership, dtype=bool)
        if m.shape != (len(self.ground),):
            raise ValidationError("length equals ground size",
                                  f"membership must have length {len(self.ground)}")
        object.__setattr__(self, "membership", _frozen(m))

    def __eq__(self, other):
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self.ground == other.ground and np.array_equal(self.membership, other.membership)

    def __hash__(self):
        return hash((self.ground, self.membership.tobytes()))

    def __len__(self):
        return int(self.membership.sum())

    def __iter__(self):
        return (int(i) for i in np.flatnonzero(self.membership))

    def __contains__(self, i) -> bool:
        return bool(self.membership[i])

    @classmethod
    def of(cls, ground: GroundSet, members: Iterable, *, by_id: bool = True) -> "IndexSet":
        m = np.zeros(len(ground), dtype=bool)
        for p in members:
            m[ground.index(p) if by_id else p] = True
        return cls(ground, m)

    @property
    def ids(self) -> list:
        return [self.ground.points[i] for i in self]


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Nonnegative rational cost; ``entries`` is a read-only object array of Fractions."""

    ground: GroundSet
    entries: np.ndarray

    def __post_init__(self):
        n = len(self.ground)
        rows = self.entries
        arr = np.empty((n, n), dtype=object)
        if np.shape(rows) != (n, n):
            raise ValidationError("square cost", f"cost must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                v = as_fraction(rows[i][j])
                if v < 0:
                    raise ValidationError("nonnegative entries", f"negative cost at ({i}, {j})")
                arr[i, j] = v
        object.__setattr__(self, "entries", _frozen(arr))

    def __eq__(self, other):
        if not isinstance(other, CostMatrix):
            return NotImplemented
        return self.ground == other.ground and bool(np.all(self.entries == other.entries))

    def __hash__(self):
        return hash((self.ground, tuple(self.entries.ravel())))

    def __getitem__(self, ij):
        return self.entries[ij]

    def __len__(self):
        return len(self.ground)


@dataclass(frozen=True)
class CostReport:
    zero_diagonal: bool
    triangle: bool
    witness: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.zero_diagonal and self.triangle


@dataclass(frozen=True)
class FamilyReport:
    nested: bool
    union: Relation


@dataclass(frozen=True)
class RelationFamily:
    ground: GroundSet
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))


def is_reflexive(r: Relation) -> bool:
    return bool(np.all(np.diag(r.incidence)))


def _composite(inc: np.ndarray) -> np.ndarray:
    # float32 matmul runs on BLAS and counts exactly far beyond 2**16
    a = inc.astype(np.float32)
    return (a @ a) > 0


def _transitivity_violation(inc: np.ndarray):
    bad = _composite(inc) & ~inc
    if not bad.any():
        return None
    i, k = (int(v) for v in np.argwhere(bad)[0])
    j = int(np.flatnonzero(inc[i] & inc[:, k])[0])
    return (i, j, k)


def is_transitive(r: Relation) -> bool:
    return _transitivity_violation(r.incidence) is None


def preorder_witness(r: Relation):
    """First obstruction to being a preorder, or ``None``."""
    diag = np.diag(r.incidence)
    if not diag.all():
        return ("reflexive", int(np.flatnonzero(~diag)[0]))
    triple = _transitivity_violation(r.incidence)
    if triple is not None:
        return ("transitive", triple)
    return None


def require_preorder(r: Relation) -> None:
    witness = preorder_witness(r)
    if witness is not None:
        kind, where = witness
        pts = r.ground.points
        if kind == "reflexive":
            msg = f"relation is not reflexive: ({pts[where]}, {pts[where]}) missing"
        else:
            i, j, k = where
            msg = (f"relation is not transitive: ({pts[i]}, {pts[j]}) and ({pts[j]}, {pts[k]}) "
                   f"present but ({pts[i]}, {pts[k]}) missing")
        raise RelationNotPreorder(witness, msg)


def transitive_reflexive_closure(r: Relation) -> Relation:
    """Smallest preorder containing ``r`` (Warshall, one row-broadcast per pivot)."""
    inc = np.array(r.incidence, copy=True)
    np.fill_diagonal(inc, True)
    for k in range(inc.shape[0]):
        col = inc[:, k]
        if col.any():
            inc[col] |= inc[k]
    return Relation(r.ground, inc)


def is_upper_set(a: IndexSet, r: Relation) -> bool:
    """True iff ``i in a`` and ``(i, j) in r`` imply ``j in a``."""
    require_same_ground(a.ground, r.ground)
    require_preorder(r)
    reached = r.incidence[a.membership].any(axis=0)
    return not bool(np.any(reached & ~a.membership))


def upper_closure(b: IndexSet, r: Relation) -> IndexSet:
    require_same_ground(b.ground, r.ground)
    require_preorder(r)
    return IndexSet(b.ground, r.incidence[b.membership].any(axis=0))


def relation_to_cost(r: Relation) -> CostMatrix:
    one, zero = Fraction(1), Fraction(0)
    entries = np.where(r.incidence, zero, one).astype(object)
    return CostMatrix(r.ground, entries)


def validate_cost(c: CostMatrix) -> CostReport:
    """Check zero diagonal and ``c(x, z) <= c(x, y) + c(y, z)`` over all triples."""
    e = c.entries
    n = e.shape[0]
    zero_diag = all(e[i, i] == 0 for i in range(n))
    witness = None
    for y in range(n):
        # through[x, z] = c(x, y) + c(y, z)
        through = e[:, y][:, None] + e[y, :][None, :]
        bad = e > through
        if bad.any():
            x, z = (int(v) for v in np.argwhere(bad)[0])
            witness = (x, y, z)
            break
    return CostReport(zero_diagonal=zero_diag, triangle=witness is None, witness=witness)


def check_family(f: RelationFamily) -> FamilyReport:
    members = f.members
    for m in members:
        require_same_ground(f.ground, m.ground)
    n = len(f.ground)
    union = np.zeros((n, n), dtype=bool)
    nested = True
    prev = None
    for m in members:
        if prev is not None and np.any(prev & ~m.incidence):
            nested = False
        union |= m.incidence
        prev = m.incidence
    return FamilyReport(nested=nested, union=Relation(f.ground, union))
