"""Displacements toward a value set and subset-sum instance construction.

For a sorted value set E, gamma(E, n) is the element of E nearest to n with
ties resolved to the larger element, and delta(E, n) = n - gamma(E, n). An
instance collects the displacements of the evaluation over the cube's
"value below min(x)" subset together with the displacements over the
cube's diagonal, as a deduplicated set of integers that remembers where
each value came from.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DomainError,
    EmptyDomainError,
    LogBoundError,
    NotCappedError,
    ValidationError,
)
from .evaluate import H_RHO, Evaluation, RhoFamily, sample_rho_values
from .jsonio import point_key
from .lattice import FiniteDomain, Point, cube, diag, is_capped, min_coord
from .regularity import check_regressive_regular


def gamma(E: Iterable[int], n: int) -> int:
    """Element of E closest to n, ties going to the larger element."""
    values = tuple(sorted(set(E)))
    if not values:
        raise EmptyDomainError("value set must be nonempty")
    i = bisect_left(values, n)
    if i == 0:
        return values[0]
    if i == len(values):
        return values[-1]
    below, above = values[i - 1], values[i]
    return above if above - n <= n - below else below


def delta(E: Iterable[int], n: int) -> int:
    """Displacement of n from its nearest element of E; zero iff n in E."""
    return n - gamma(E, n)


def lower_sets(e: Evaluation, E: Iterable[int], k: int) -> tuple[FiniteDomain, FiniteDomain]:
    """Cube points with value below min(x), and below min(E), respectively."""
    values = tuple(sorted(set(E)))
    C = cube(values, k)
    e_l = [x for x in C if e.value(x) < min_coord(x)]
    e_big_l = [x for x in C if e.value(x) < values[0]]
    return FiniteDomain(k, tuple(e_l)), FiniteDomain(k, tuple(e_big_l))


@dataclass(frozen=True)
class LogBoundCheck:
    """Diagnostics for the diagonal-displacement log bound."""

    ok: bool
    positives_ok: bool
    nonpositive_indices: tuple[int, ...]
    count_small_indices: int
    count_small_distinct: int
    count_ok: bool
    threshold: int  # e_0 * k^k

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "positives_ok": self.positives_ok,
            "nonpositive_indices": list(self.nonpositive_indices),
            "count_small_indices": self.count_small_indices,
            "count_small_distinct": self.count_small_distinct,
            "count_ok": self.count_ok,
            "threshold": self.threshold,
        }


def log_count_within(count: int, p: int, t: int) -> bool:
    """Exact check of count <= t*log2(p) via 2**count <= p**t."""
    return 2**count <= p**t


def is_log_bounded(
    rho_values_on_diag: Sequence[int], E: Iterable[int], k: int, t: int
) -> LogBoundCheck:
    """Check the log bound for the base family's diagonal values.

    All diagonal displacements must be strictly positive, and at most
    t*log2(p) of them may fall below e_0 * k^k. Indices are counted (the
    reading that keeps the solver's enumeration budget valid); the distinct
    value count is reported alongside. The threshold comparison avoids
    floating point entirely.
    """
    values = tuple(sorted(set(E)))
    p = len(values)
    if p < 2:
        raise ValidationError(f"value set must have at least 2 elements, got {values!r}")
    if t < 1:
        raise ValidationError(f"t must be >= 1, got {t}")
    if len(rho_values_on_diag) != p:
        raise ValidationError(
            f"expected {p} diagonal values, got {len(rho_values_on_diag)}"
        )
    threshold = values[0] * k**k
    deltas = [delta(values, v) for v in rho_values_on_diag]
    nonpositive = tuple(j for j, d in enumerate(deltas) if d <= 0)
    small = [d for d in deltas if 0 < d < threshold]
    count_ok = log_count_within(len(small), p, t)
    ok = not nonpositive and count_ok
    return LogBoundCheck(
        ok=ok,
        positives_ok=not nonpositive,
        nonpositive_indices=nonpositive,
        count_small_indices=len(small),
        count_small_distinct=len(set(small)),
        count_ok=count_ok,
        threshold=threshold,
    )


PROV_LOWER = "lower"
PROV_DIAG = "diag"


def provenance_lower(x: Point) -> str:
    return f"{PROV_LOWER}:{point_key(x)}"


def provenance_diag(j: int) -> str:
    return f"{PROV_DIAG}:{j}"


@dataclass(frozen=True)
class Element:
    """One distinct displacement value with every origin that produced it."""

    value: int
    sources: tuple[str, ...]

    @property
    def key(self) -> str:
        return self.sources[0]

    def to_dict(self) -> dict:
        return {"value": self.value, "from": list(self.sources)}


@dataclass(frozen=True)
class DisplacementInstance:
    """A displacement-set subset-sum instance (target 0, set semantics)."""

    E: tuple[int, ...]
    k: int
    t: int
    p: int
    elements: tuple[Element, ...]
    regressively_regular: bool
    diag_in_lower: bool  # whole diagonal maps below min(E)

    def values(self) -> tuple[int, ...]:
        return tuple(el.value for el in self.elements)

    def element_by_key(self, key: str) -> Element:
        for el in self.elements:
            if key in el.sources:
                return el
        raise DomainError(f"no element with provenance {key!r}")

    def to_dict(self) -> dict:
        return {
            "E": list(self.E),
            "k": self.k,
            "t": self.t,
            "p": self.p,
            "elements": [el.to_dict() for el in self.elements],
            "flags": {
                "regressively_regular": self.regressively_regular,
                "diag_in_EL": self.diag_in_lower,
            },
        }

    @staticmethod
    def from_dict(data: dict) -> "DisplacementInstance":
        try:
            E = tuple(int(v) for v in data["E"])
            k = int(data["k"])
            t = int(data["t"])
            p = int(data["p"])
            elements = tuple(
                Element(int(el["value"]), tuple(el["from"])) for el in data["elements"]
            )
            flags = data["flags"]
            return DisplacementInstance(
                E=E,
                k=k,
                t=t,
                p=p,
                elements=elements,
                regressively_regular=bool(flags["regressively_regular"]),
                diag_in_lower=bool(flags["diag_in_EL"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed instance JSON: {exc}") from exc


def build_instance(
    e: Evaluation, E: Iterable[int], k: int, t: int, rho: RhoFamily
) -> DisplacementInstance:
    """Assemble the subset-sum instance for an evaluation over a capped domain.

    Preconditions: the evaluation is the rho variant, its domain is capped
    by the cube of E, and the base family passes the log bound for this E.
    Equal displacement values arising from different origins merge into one
    element that keeps every provenance tag.
    """
    values = tuple(sorted(set(E)))
    p = len(values)
    if p < 2:
        raise ValidationError(f"value set must have at least 2 elements, got {values!r}")
    if t < 1:
        raise ValidationError(f"t must be >= 1, got {t}")
    if e.kind != H_RHO:
        raise ValidationError(f"instances are built from {H_RHO!r} evaluations, got {e.kind!r}")
    domain = e.domain()
    if not is_capped(domain, values):
        raise NotCappedError("evaluation domain is not capped by the cube")

    diag_points = diag(values, k).points
    rho_diag = sample_rho_values(rho, domain, diag_points)
    logcheck = is_log_bounded(rho_diag, values, k, t)
    if not logcheck.ok:
        raise LogBoundError(f"base family fails the log bound: {logcheck.to_dict()}")

    e_l, e_big_l = lower_sets(e, values, k)
    collected: dict[int, set[str]] = {}
    for x in e_l:
        collected.setdefault(delta(values, e.value(x)), set()).add(provenance_lower(x))
    for j, d in enumerate(diag_points):
        collected.setdefault(delta(values, e.value(d)), set()).add(provenance_diag(j))

    verdict = check_regressive_regular(e, values, k)
    min_e = values[0]
    diag_in_lower = all(e.value(d) < min_e for d in diag_points)

    if verdict.overall:
        # structural consequences of regularity; failures here are bugs
        assert e_l.points == e_big_l.points, "regular evaluations equate the two lower sets"
        rho_by_point = dict(zip(diag_points, rho_diag))
        for d in diag_points:
            in_lower = e.value(d) < min_e
            equals_rho = e.value(d) == rho_by_point[d]
            assert in_lower != equals_rho, f"diagonal dichotomy broken at {d!r}"
            assert in_lower == diag_in_lower, "diagonal dichotomy must be class-wide"
        neg_distinct = {delta(values, e.value(x)) for x in e_big_l}
        assert sum(abs(v) for v in neg_distinct) < min_e * k**k, "lower-set mass bound broken"
        assert len(neg_distinct) < k**k, "lower-set value count bound broken"

    elements = tuple(
        Element(v, tuple(sorted(collected[v]))) for v in sorted(collected)
    )
    return DisplacementInstance(
        E=values,
        k=k,
        t=t,
        p=p,
        elements=elements,
        regressively_regular=verdict.overall,
        diag_in_lower=diag_in_lower,
    )
