"""Regressive values, the regularity dichotomy, capping, and bounded search.

A function is regressively regular over a value set E when every order-type
class of the cube E^k lands in one of two cases: constant at a value below
min(E), or pointwise at least min(x). The checker classifies each realized
class and carries a concrete witness for any class breaking the dichotomy.

The search enumerates candidate value sets and capped domains inside
explicit bounds. Exhausting the bounds is a first-class outcome with a
machine-readable report, never an exception: desk-scale search cannot
confirm existence claims, only find finite witnesses.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice, product
from typing import Iterable, Iterator, Optional

from .errors import DomainError, ValidationError
from .evaluate import Evaluation, RhoFamily, eval_h_rho
from .graph import GraphTemplate
from .jsonio import point_key
from .lattice import (
    FiniteDomain,
    OrderSignature,
    Point,
    cube,
    is_capped,
    max_norm,
    min_coord,
    order_signature,
    setmax,
)
from .selection import CommitteeSpec, SelectionRule

CASE_CONSTANT_BELOW_MIN = "constant_below_min"
CASE_AT_LEAST_MIN = "at_least_min"
CASE_VIOLATION = "violation"


@dataclass(frozen=True)
class ClassOutcome:
    signature: OrderSignature
    case: str
    value: Optional[int] = None
    witness: tuple[Point, ...] = ()

    def to_dict(self) -> dict:
        out: dict = {"case": self.case}
        if self.value is not None:
            out["value"] = self.value
        if self.witness:
            out["witness"] = [list(p) for p in self.witness]
        return out


@dataclass(frozen=True)
class RegularityVerdict:
    overall: bool
    outcomes: tuple[ClassOutcome, ...]
    regressive_values: tuple[int, ...]

    def outcome_for(self, sig: OrderSignature) -> ClassOutcome:
        for o in self.outcomes:
            if o.signature == sig:
                return o
        raise DomainError(f"no outcome for signature {sig!r}")

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "classes": {point_key(o.signature): o.to_dict() for o in self.outcomes},
            "regressive_values": list(self.regressive_values),
        }


def regressive_values(e: Evaluation, X: FiniteDomain) -> tuple[int, ...]:
    """Values the evaluation takes strictly below a point's minimum, on X."""
    out = set()
    for x in X:
        v = e.value(x)  # raises DomainError outside the evaluated domain
        if v < min_coord(x):
            out.add(v)
    return tuple(sorted(out))


def check_regressive_regular(e: Evaluation, E: Iterable[int], k: int) -> RegularityVerdict:
    """Classify every order-type class of E^k realized by the evaluation."""
    values = tuple(sorted(set(E)))
    if len(values) < 2:
        raise ValidationError(f"value set must have at least 2 elements, got {values!r}")
    C = cube(values, k)
    min_e = values[0]
    classes: dict[OrderSignature, list[Point]] = {}
    for x in C:
        classes.setdefault(order_signature(x), []).append(x)
    outcomes = []
    for sig in sorted(classes):
        members = classes[sig]
        vals = [e.value(x) for x in members]
        constant = len(set(vals)) == 1
        if constant and vals[0] < min_e:
            outcomes.append(ClassOutcome(sig, CASE_CONSTANT_BELOW_MIN, value=vals[0]))
            continue
        if all(v >= min_coord(x) for v, x in zip(vals, members)):
            outcomes.append(ClassOutcome(sig, CASE_AT_LEAST_MIN))
            continue
        outcomes.append(ClassOutcome(sig, CASE_VIOLATION, witness=_violation_witness(e, members, min_e)))
    overall = all(o.case != CASE_VIOLATION for o in outcomes)
    return RegularityVerdict(
        overall=overall,
        outcomes=tuple(outcomes),
        regressive_values=regressive_values(e, C),
    )


def _violation_witness(e: Evaluation, members: list[Point], min_e: int) -> tuple[Point, ...]:
    # prefer a single point breaking both cases at once
    for x in members:
        if min_e <= e.value(x) < min_coord(x):
            return (x,)
    # otherwise the class is non-constant with a value below min(E): pick a pair
    for x in members:
        if e.value(x) < min_e:
            for y in members:
                if e.value(y) != e.value(x):
                    return tuple(sorted((x, y)))
    return ()


def restrict_capped(D: FiniteDomain, E: Iterable[int], k: int) -> FiniteDomain:
    """Replace D by its strictly-lower part plus the cube's top layer."""
    domain, _ = restrict_capped_report(D, E, k)
    return domain


def restrict_capped_report(
    D: FiniteDomain, E: Iterable[int], k: int
) -> tuple[FiniteDomain, FiniteDomain]:
    """Like `restrict_capped` but also reporting the discarded vertices.

    Discarded points are exactly those at or above max(E) that are not in
    the cube's top layer; the formula drops them even when D was already
    capped.
    """
    values = tuple(sorted(set(E)))
    C = cube(values, k)
    if not C.is_subset_of(D):
        raise DomainError("cube is not contained in the domain")
    top = values[-1]
    kept = [z for z in D if max_norm(z) < top]
    cap = setmax(C)
    result = FiniteDomain(D.k, tuple(kept) + cap.points)
    discarded = FiniteDomain(D.k, tuple(z for z in D if z not in result))
    return result, discarded


@dataclass(frozen=True)
class SearchBounds:
    """Explicit limits making the search space finite and reproducible."""

    coord_max: int
    filler_pool: int = 6
    max_extra: int = 2
    max_domain: int = 400
    max_candidates: int | None = None

    def __post_init__(self) -> None:
        if self.coord_max < 1:
            raise ValidationError(f"coord_max must be >= 1, got {self.coord_max}")
        if self.filler_pool < 0 or self.max_extra < 0:
            raise ValidationError("filler bounds must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "coord_max": self.coord_max,
            "filler_pool": self.filler_pool,
            "max_extra": self.max_extra,
            "max_domain": self.max_domain,
            "max_candidates": self.max_candidates,
        }


@dataclass(frozen=True)
class RegularityWitness:
    E: tuple[int, ...]
    domain: FiniteDomain
    evaluation: Evaluation
    verdict: RegularityVerdict

    def to_dict(self) -> dict:
        return {
            "E": list(self.E),
            "D": [list(p) for p in self.domain.points],
            "values": self.evaluation.to_dict()["values"],
            "verdict": self.verdict.to_dict(),
        }


@dataclass(frozen=True)
class SearchResult:
    witness: Optional[RegularityWitness]
    candidates_tried: int
    exhausted: bool

    @property
    def found(self) -> bool:
        return self.witness is not None


def _filler_pool(values: tuple[int, ...], k: int, size: int) -> list[Point]:
    """First `size` lexicographic points strictly below the cube's top norm."""
    if size == 0:
        return []
    top = values[-1]
    in_cube = set(cube(values, k).points)
    pool = (
        p for p in product(range(top), repeat=k) if p not in in_cube
    )
    return list(islice(pool, size))


def _candidate_domains(
    values: tuple[int, ...], k: int, bounds: SearchBounds
) -> Iterator[FiniteDomain]:
    base = cube(values, k)
    pool = _filler_pool(values, k, bounds.filler_pool)
    for extra in range(0, bounds.max_extra + 1):
        for chosen in combinations(pool, extra):
            if len(base) + extra > bounds.max_domain:
                continue
            yield FiniteDomain(k, base.points + tuple(chosen))


def _value_set_candidates(p: int, bounds: SearchBounds) -> Iterator[tuple[int, ...]]:
    yield from combinations(range(bounds.coord_max + 1), p)


def search_regular(
    template: GraphTemplate,
    rule: SelectionRule,
    spec: CommitteeSpec,
    rho: RhoFamily,
    k: int,
    p: int,
    bounds: SearchBounds,
    threads: int | None = None,
) -> SearchResult:
    """Find the first (E, capped D) whose evaluation is regressively regular.

    Candidates are ordered: value sets ascending lexicographically, then
    domains as the cube plus filler subsets by (size, lex). The first
    witness in that order wins regardless of how candidates are scheduled,
    so the result is reproducible even when fanned out over threads
    (RRLAB_THREADS, or the `threads` argument, caps the fan-out).
    """
    if k < 2 or p < 2:
        raise ValidationError(f"need k >= 2 and p >= 2, got k={k}, p={p}")
    if threads is None:
        threads = int(os.environ.get("RRLAB_THREADS", "1") or "1")

    def candidates() -> Iterator[tuple[tuple[int, ...], FiniteDomain]]:
        n = 0
        for values in _value_set_candidates(p, bounds):
            for D in _candidate_domains(values, k, bounds):
                if bounds.max_candidates is not None and n >= bounds.max_candidates:
                    return
                n += 1
                yield values, D

    def try_candidate(cand: tuple[tuple[int, ...], FiniteDomain]) -> Optional[RegularityWitness]:
        values, D = cand
        g = template.graph_on(D)
        e = eval_h_rho(g, rule, spec, rho)
        verdict = check_regressive_regular(e, values, k)
        if not verdict.overall:
            return None
        assert is_capped(D, values), "search candidates are capped by construction"
        return RegularityWitness(values, D, e, verdict)

    tried = 0
    if threads <= 1:
        for cand in candidates():
            tried += 1
            witness = try_candidate(cand)
            if witness is not None:
                return SearchResult(witness, tried, exhausted=False)
        return SearchResult(None, tried, exhausted=True)
    # chunked fan-out: results are scanned in submission order, so the
    # earliest candidate wins no matter which thread finishes first
    stream = candidates()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while True:
            chunk = list(islice(stream, 8 * threads))
            if not chunk:
                return SearchResult(None, tried, exhausted=True)
            for witness in pool.map(try_candidate, chunk):
                tried += 1
                if witness is not None:
                    return SearchResult(witness, tried, exhausted=False)
