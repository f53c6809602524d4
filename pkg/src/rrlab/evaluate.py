"""Layered evaluation of the two committee-model functions.

Both functions share one recursion: at each vertex z, collect the defined
rule outputs over z's committees, where each member y is labeled with its
own computed value if its committee-output set was nonempty and with
min(y) otherwise. A nonempty output set at z yields its minimum. They
differ only in the empty case: the max-norm variant falls back to max(z),
the rho variant to the supplied base family's value at z.

Evaluation sweeps layers of ascending max-norm instead of recursing
top-down: stack depth stays bounded and the well-foundedness of every
read is a direct assertion (a member read below must sit in a strictly
lower layer).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .errors import DomainError, RhoViolation, ValidationError
from .graph import DownwardGraph, layers, validate_downward
from .jsonio import parse_point_key, point_key
from .lattice import FiniteDomain, Point, max_norm, min_coord
from .selection import CommitteeSpec, SelectionRule, apply_selection, committees

S_HAT = "shat"
H_RHO = "hrho"


class RhoFamily:
    """Per-domain base assignment; values must never drop below min(x)."""

    def for_domain(self, D: FiniteDomain) -> Callable[[Point], int]:
        raise NotImplementedError


class MinRho(RhoFamily):
    """The smallest admissible base: x -> min(x), on every domain."""

    def for_domain(self, D: FiniteDomain) -> Callable[[Point], int]:
        return min_coord


class OffsetRho(RhoFamily):
    """x -> min(x) + c for a fixed nonnegative offset c."""

    def __init__(self, offset: int):
        if offset < 0:
            raise ValidationError(f"offset must be nonnegative, got {offset}")
        self.offset = offset

    def for_domain(self, D: FiniteDomain) -> Callable[[Point], int]:
        return lambda x: min_coord(x) + self.offset


class TableRho(RhoFamily):
    """Explicit per-point overrides, falling back to min(x)."""

    def __init__(self, overrides: Mapping[Point, int]):
        self.overrides = {tuple(p): int(v) for p, v in overrides.items()}

    def for_domain(self, D: FiniteDomain) -> Callable[[Point], int]:
        table = self.overrides
        return lambda x: table.get(x, min_coord(x))

    def to_dict(self) -> dict:
        return {point_key(p): v for p, v in sorted(self.overrides.items())}

    @staticmethod
    def from_dict(data: Mapping[str, int]) -> "TableRho":
        return TableRho({parse_point_key(key): int(v) for key, v in data.items()})


@dataclass(frozen=True)
class Evaluation:
    """Computed value map plus the emptiness flag of each vertex's output set."""

    kind: str
    k: int
    values: Mapping[Point, int]
    phi_empty: Mapping[Point, bool]

    def value(self, z: Point) -> int:
        z = tuple(z)
        if z not in self.values:
            raise DomainError(f"point not evaluated: {z!r}")
        return self.values[z]

    def is_phi_empty(self, z: Point) -> bool:
        z = tuple(z)
        if z not in self.phi_empty:
            raise DomainError(f"point not evaluated: {z!r}")
        return self.phi_empty[z]

    def domain(self) -> FiniteDomain:
        return FiniteDomain(self.k, tuple(self.values.keys()))

    def label(self, y: Point) -> int:
        """The value y reports upward: its own value, or min(y) if empty."""
        return min_coord(tuple(y)) if self.is_phi_empty(y) else self.value(y)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "values": {
                point_key(p): {"value": self.values[p], "phi_empty": self.phi_empty[p]}
                for p in sorted(self.values)
            },
        }

    @staticmethod
    def from_dict(data: dict) -> "Evaluation":
        try:
            kind = data["kind"]
            k = int(data["k"])
            values = {}
            phi_empty = {}
            for key, cell in data["values"].items():
                p = parse_point_key(key)
                values[p] = int(cell["value"])
                phi_empty[p] = bool(cell["phi_empty"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed evaluation JSON: {exc}") from exc
        if kind not in (S_HAT, H_RHO):
            raise ValidationError(f"unknown evaluation kind: {kind!r}")
        return Evaluation(kind, k, values, phi_empty)


def phi_set(
    g: DownwardGraph,
    rule: SelectionRule,
    spec: CommitteeSpec,
    z: Point,
    lower_values: Evaluation,
) -> set[int]:
    """Defined rule outputs over z's committees, labeled from lower layers."""
    z = tuple(z)
    out: set[int] = set()
    for members in committees(g, z, spec):
        labeled = tuple((y, lower_values.label(y)) for y in members)
        value = apply_selection(rule, z, labeled, r=spec.r)
        if value is not None:
            out.add(value)
    return out


def _evaluate(
    g: DownwardGraph,
    rule: SelectionRule,
    spec: CommitteeSpec,
    empty_case: Callable[[Point], int],
    kind: str,
) -> Evaluation:
    report = validate_downward(g)
    if not report.ok:
        raise ValidationError(f"graph is not downward; offending edges: {report.violations[:5]!r}")
    values: dict[Point, int] = {}
    phi_empty: dict[Point, bool] = {}
    partial = Evaluation(kind, g.k, values, phi_empty)
    for norm, level in layers(g.domain).levels:
        for z in level.points:
            for members in committees(g, z, spec):
                for y in members:
                    # downwardness was validated; a same-layer read is a bug
                    assert max_norm(y) < norm, f"same-layer read at {z!r} -> {y!r}"
            phi = phi_set(g, rule, spec, z, partial)
            if phi:
                values[z] = min(phi)
                phi_empty[z] = False
            else:
                values[z] = empty_case(z)
                phi_empty[z] = True
    return Evaluation(kind, g.k, dict(values), dict(phi_empty))


def eval_s_hat(g: DownwardGraph, rule: SelectionRule, spec: CommitteeSpec) -> Evaluation:
    """Committee-model function with max(z) as the empty-set base case."""
    return _evaluate(g, rule, spec, max_norm, S_HAT)


def eval_h_rho(
    g: DownwardGraph, rule: SelectionRule, spec: CommitteeSpec, rho: RhoFamily
) -> Evaluation:
    """Committee-model function with the rho family as the base case.

    The family's lower bound (value >= min(x)) is checked at every queried
    point and violations abort eagerly.
    """
    rho_fn = rho.for_domain(g.domain)

    def base(z: Point) -> int:
        v = rho_fn(z)
        if v < min_coord(z):
            raise RhoViolation(f"rho({z!r}) = {v} < min {min_coord(z)}")
        return v

    return _evaluate(g, rule, spec, base, H_RHO)


@dataclass(frozen=True)
class Mismatch:
    point: Point
    reason: str


@dataclass(frozen=True)
class CompareReport:
    ok: bool
    checked: int
    mismatches: tuple[Mismatch, ...]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "mismatches": [
                {"point": list(m.point), "reason": m.reason} for m in self.mismatches
            ],
        }


def compare_evaluations(
    e1: Evaluation,
    e2: Evaluation,
    rho: RhoFamily | None = None,
    domain: FiniteDomain | None = None,
) -> CompareReport:
    """Pointwise consistency check between the two function variants.

    Where the output set was nonempty both values must agree and sit below
    max(z); where it was empty, the max variant must equal max(z) and, when
    the rho family is supplied, the rho variant must equal its value.
    """
    if e1.kind != S_HAT or e2.kind != H_RHO:
        raise ValidationError(f"expected ({S_HAT}, {H_RHO}) evaluations, got ({e1.kind}, {e2.kind})")
    if set(e1.values) != set(e2.values):
        raise DomainError("evaluations cover different domains")
    rho_fn = None
    if rho is not None:
        rho_fn = rho.for_domain(domain if domain is not None else e1.domain())
    mismatches: list[Mismatch] = []
    for z in sorted(e1.values):
        empty1, empty2 = e1.phi_empty[z], e2.phi_empty[z]
        v1, v2 = e1.values[z], e2.values[z]
        if empty1 != empty2:
            mismatches.append(Mismatch(z, f"emptiness flags differ: {empty1} vs {empty2}"))
            continue
        if not empty1:
            if v1 != v2:
                mismatches.append(Mismatch(z, f"values differ: {v1} vs {v2}"))
            elif v1 >= max_norm(z):
                mismatches.append(Mismatch(z, f"nonempty value {v1} not below max {max_norm(z)}"))
        else:
            if v1 != max_norm(z):
                mismatches.append(Mismatch(z, f"empty-case value {v1} != max {max_norm(z)}"))
            if rho_fn is not None and v2 != rho_fn(z):
                mismatches.append(Mismatch(z, f"empty-case value {v2} != rho {rho_fn(z)}"))
    return CompareReport(ok=not mismatches, checked=len(e1.values), mismatches=tuple(mismatches))


@dataclass(frozen=True)
class JumpFreeResult:
    """Outcome of the one-sided inequality check at a shared point."""

    premise_holds: bool
    conclusion_holds: bool
    value_a: int
    value_b: int

    @property
    def ok(self) -> bool:
        return self.conclusion_holds if self.premise_holds else True

    @property
    def premise_failed(self) -> bool:
        return not self.premise_holds


def check_jump_free_pair(
    gA: DownwardGraph,
    gB: DownwardGraph,
    rule: SelectionRule,
    spec: CommitteeSpec,
    x: Point,
    eA: Optional[Evaluation] = None,
    eB: Optional[Evaluation] = None,
) -> JumpFreeResult:
    """Check value_A(x) >= value_B(x) under the agreement premise.

    Premise: the strictly-lower part of A's domain (below max(x)) sits
    inside B's, and the two max-variant evaluations agree there. When the
    premise fails the result is vacuously true with the flag set.
    Precomputed evaluations may be passed to avoid rework in sweeps.
    """
    x = tuple(x)
    if x not in gA.domain or x not in gB.domain:
        raise DomainError(f"point {x!r} must lie in both domains")
    if eA is None:
        eA = eval_s_hat(gA, rule, spec)
    if eB is None:
        eB = eval_s_hat(gB, rule, spec)
    cutoff = max_norm(x)
    a_x = [z for z in gA.domain if max_norm(z) < cutoff]
    premise = all(z in gB.domain for z in a_x) and all(
        eA.values[z] == eB.values[z] for z in a_x if z in gB.domain
    )
    va, vb = eA.values[x], eB.values[x]
    return JumpFreeResult(
        premise_holds=premise, conclusion_holds=va >= vb, value_a=va, value_b=vb
    )


def sample_rho_values(rho: RhoFamily, D: FiniteDomain, points: Sequence[Point]) -> list[int]:
    """Evaluate a rho family on given points with the lower bound enforced."""
    fn = rho.for_domain(D)
    out = []
    for p in points:
        v = fn(tuple(p))
        if v < min_coord(p):
            raise RhoViolation(f"rho({tuple(p)!r}) = {v} < min {min_coord(p)}")
        out.append(v)
    return out
