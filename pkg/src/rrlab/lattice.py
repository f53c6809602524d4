"""Integer lattice points, norms, order signatures, cubes, and capping.

A point is a plain tuple of nonnegative integers, so points are immutable,
hashable, and lexicographically ordered for free. Every container of points
(`FiniteDomain`) carries its dimension `k` explicitly and rejects mixed
dimensions at construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator

from .errors import DimensionError, DomainError, EmptyDomainError, ValidationError

Point = tuple[int, ...]
OrderSignature = tuple[int, ...]


def as_point(coords: Iterable[int], k: int | None = None) -> Point:
    """Validate and canonicalize a coordinate sequence into a Point."""
    pt = tuple(coords)
    if len(pt) < 2:
        raise DimensionError(f"points need dimension >= 2, got {pt!r}")
    if k is not None and len(pt) != k:
        raise DimensionError(f"expected dimension {k}, got {pt!r}")
    for c in pt:
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise ValidationError(f"coordinates must be nonnegative integers, got {pt!r}")
    return pt


def max_norm(p: Point) -> int:
    """Largest coordinate of the point."""
    return max(p)


def min_coord(p: Point) -> int:
    """Smallest coordinate of the point."""
    return min(p)


def order_signature(p: Point) -> OrderSignature:
    """Dense rank vector of the point's coordinates, ranks starting at 0.

    Two points share a signature exactly when their coordinates compare
    identically position-by-position (same strict-less and same equal
    index pairs), e.g. (3, 8, 5, 3, 8) -> (0, 2, 1, 0, 2).
    """
    rank = {v: i for i, v in enumerate(sorted(set(p)))}
    return tuple(rank[v] for v in p)


def enumerate_order_types(k: int) -> list[OrderSignature]:
    """All order signatures of dimension k, sorted lexicographically.

    There is one signature per way the k coordinates can tie/compare, so the
    count is the ordered Bell number and never exceeds k**k.
    """
    if k < 2:
        raise ValidationError(f"dimension must be >= 2, got {k}")
    return sorted({order_signature(t) for t in product(range(k), repeat=k)})


@dataclass(frozen=True)
class FiniteDomain:
    """A finite set of points of common dimension, canonically sorted."""

    k: int
    points: tuple[Point, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.k < 2:
            raise DimensionError(f"dimension must be >= 2, got {self.k}")
        canon = tuple(sorted({as_point(p, self.k) for p in self.points}))
        object.__setattr__(self, "points", canon)

    @staticmethod
    def of(points: Iterable[Point], k: int | None = None) -> "FiniteDomain":
        pts = [tuple(p) for p in points]
        if k is None:
            if not pts:
                raise EmptyDomainError("cannot infer dimension of an empty domain")
            k = len(pts[0])
        return FiniteDomain(k, tuple(pts))

    @cached_property
    def _set(self) -> frozenset[Point]:
        return frozenset(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self._set

    def is_subset_of(self, other: "FiniteDomain") -> bool:
        return self._set <= other._set

    def union(self, other: "FiniteDomain") -> "FiniteDomain":
        if other.k != self.k:
            raise DimensionError(f"cannot mix dimensions {self.k} and {other.k}")
        return FiniteDomain(self.k, self.points + other.points)

    def field_values(self) -> tuple[int, ...]:
        """All coordinate values appearing anywhere in the domain."""
        return tuple(sorted({c for p in self.points for c in p}))


def cube(E: Iterable[int], k: int) -> FiniteDomain:
    """The k-th Cartesian power of the value set E."""
    values = _sorted_values(E)
    return FiniteDomain(k, tuple(product(values, repeat=k)))


def diag(E: Iterable[int], k: int) -> FiniteDomain:
    """The diagonal of the cube: one constant tuple per value of E."""
    values = _sorted_values(E)
    return FiniteDomain(k, tuple((v,) * k for v in values))


def _sorted_values(E: Iterable[int]) -> tuple[int, ...]:
    values = tuple(sorted(set(E)))
    if not values:
        raise EmptyDomainError("value set must be nonempty")
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ValidationError(f"value sets must hold nonnegative integers, got {values!r}")
    return values


def domain_max(D: FiniteDomain) -> int:
    """Largest max-norm attained in the domain."""
    if not D.points:
        raise EmptyDomainError("domain is empty")
    return max(max_norm(p) for p in D.points)


def setmax(D: FiniteDomain) -> FiniteDomain:
    """The subset of D whose points attain the domain's largest max-norm."""
    top = domain_max(D)
    return FiniteDomain(D.k, tuple(p for p in D.points if max_norm(p) == top))


def is_capped(D: FiniteDomain, E: Iterable[int]) -> bool:
    """Whether D's top layer is exactly the cube's top layer.

    Requires cube(E, k) to be contained in D; containment failure is an
    error rather than a False.
    """
    C = cube(E, D.k)
    if not C.is_subset_of(D):
        raise DomainError("cube is not contained in the domain")
    return setmax(D).points == setmax(C).points
