"""Partial selection rules and committee formation.

A selection rule is a deterministic partial map from a vertex plus an
ordered list of labeled members to one of the labels. Whenever the rule is
defined, its output MUST be one of the slot labels; returning anything else
is a hard contract violation, not a value.

Committee formation has two modes. Explicit mode takes a declared list of
member tuples per vertex (shorter tuples are padded by repeating the last
member). Exhaustive mode forms every ordered r-tuple with repetition over
the vertex's out-neighbors, guarded by a hard per-vertex tuple budget so
that exponential blowup fails loudly instead of silently.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .errors import CapExceededError, CommitteeError, ContractViolation, ValidationError
from .graph import DownwardGraph, adjacency
from .jsonio import parse_point_key, point_key
from .lattice import Point, as_point

LabeledCommittee = tuple[tuple[Point, int], ...]

DEFAULT_TUPLE_CAP = 100_000


@dataclass(frozen=True)
class CommitteeSpec:
    """Which ordered r-tuples of out-neighbors form committees."""

    r: int
    mode: str  # "explicit" | "exhaustive"
    explicit: Mapping[Point, tuple[tuple[Point, ...], ...]] | None = None
    tuple_cap: int = DEFAULT_TUPLE_CAP

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValidationError(f"committee arity must be >= 1, got {self.r}")
        if self.mode not in ("explicit", "exhaustive"):
            raise ValidationError(f"unknown committee mode: {self.mode!r}")
        if self.mode == "explicit" and self.explicit is None:
            raise ValidationError("explicit mode needs a committee map")

    @staticmethod
    def exhaustive(r: int, tuple_cap: int = DEFAULT_TUPLE_CAP) -> "CommitteeSpec":
        return CommitteeSpec(r=r, mode="exhaustive", tuple_cap=tuple_cap)

    @staticmethod
    def explicit_spec(
        r: int, committees_by_vertex: Mapping[Point, Sequence[Sequence[Point]]]
    ) -> "CommitteeSpec":
        frozen = {
            tuple(z): tuple(tuple(tuple(m) for m in c) for c in cs)
            for z, cs in committees_by_vertex.items()
        }
        return CommitteeSpec(r=r, mode="explicit", explicit=frozen)


def pad_committee(members: Sequence[Point], r: int) -> tuple[Point, ...]:
    """Extend a member tuple to length r by repeating its last member."""
    members = tuple(tuple(m) for m in members)
    if not members:
        raise CommitteeError("cannot pad an empty committee")
    if len(members) > r:
        raise CommitteeError(f"committee of {len(members)} members exceeds arity {r}")
    return members + (members[-1],) * (r - len(members))


def committees(g: DownwardGraph, z: Point, spec: CommitteeSpec) -> list[tuple[Point, ...]]:
    """The ordered member tuples feeding the selection rule at z."""
    z = tuple(z)
    adj = adjacency(g, z)
    if spec.mode == "explicit":
        declared = spec.explicit.get(z, ()) if spec.explicit else ()
        out = []
        for raw in declared:
            for m in raw:
                if m not in adj:
                    raise CommitteeError(f"committee member {m!r} is not adjacent to {z!r}")
            out.append(pad_committee(raw, spec.r))
        return out
    n = len(adj)
    if n == 0:
        return []
    total = n**spec.r
    if total > spec.tuple_cap:
        raise CapExceededError(
            f"{total} committee tuples at {z!r} exceed the cap of {spec.tuple_cap}"
        )
    return [t for t in product(adj.points, repeat=spec.r)]


class SelectionRule:
    """Deterministic partial map; `select` returns None where undefined."""

    def select(self, z: Point, labeled: LabeledCommittee) -> Optional[int]:
        raise NotImplementedError


def apply_selection(
    rule: SelectionRule, z: Point, labeled: Sequence[tuple[Point, int]], r: int | None = None
) -> Optional[int]:
    """Run the rule and enforce the selection contract.

    A defined result must equal one of the slot labels; anything else
    aborts with a diagnostic naming the vertex and committee, because every
    downstream guarantee assumes the contract.
    """
    labeled = tuple((tuple(y), int(n)) for y, n in labeled)
    if r is not None and len(labeled) != r:
        raise CommitteeError(f"expected {r} labeled slots, got {len(labeled)}")
    value = rule.select(tuple(z), labeled)
    if value is None:
        return None
    labels = {n for _, n in labeled}
    if value not in labels:
        raise ContractViolation(
            f"rule returned {value!r} outside labels {sorted(labels)} "
            f"at z={tuple(z)!r}, committee={labeled!r}"
        )
    return value


class MinRule(SelectionRule):
    """Total rule returning the smallest slot label."""

    def select(self, z: Point, labeled: LabeledCommittee) -> Optional[int]:
        return min(n for _, n in labeled)


class MaxRule(SelectionRule):
    """Total rule returning the largest slot label."""

    def select(self, z: Point, labeled: LabeledCommittee) -> Optional[int]:
        return max(n for _, n in labeled)


class IndexRule(SelectionRule):
    """Hash-driven rule: deterministically undefined or picks a slot.

    Purity comes from sha256 over a canonical encoding of (seed, z, member
    points), so runs are reproducible across processes.
    """

    def __init__(self, seed: int | str, undefined_rate: float = 0.25):
        if not 0.0 <= undefined_rate <= 1.0:
            raise ValidationError(f"undefined rate must lie in [0, 1], got {undefined_rate}")
        self.seed = seed
        self.undefined_rate = undefined_rate

    def select(self, z: Point, labeled: LabeledCommittee) -> Optional[int]:
        points = tuple(y for y, _ in labeled)
        digest = hashlib.sha256(f"{self.seed}|{z}|{points}".encode()).digest()
        u = int.from_bytes(digest[:8], "big") / 2**64
        if u < self.undefined_rate:
            return None
        slot = int.from_bytes(digest[8:12], "big") % len(labeled)
        return labeled[slot][1]


@dataclass
class TableRule(SelectionRule):
    """Explicit (vertex, labeled committee) -> label map; undefined off-table."""

    entries: dict[tuple[Point, LabeledCommittee], int] = field(default_factory=dict)

    def add(self, z: Point, labeled: Iterable[tuple[Point, int]], value: int) -> None:
        key = (tuple(z), tuple((tuple(y), int(n)) for y, n in labeled))
        self.entries[key] = int(value)

    def select(self, z: Point, labeled: LabeledCommittee) -> Optional[int]:
        return self.entries.get((z, labeled))

    def to_list(self) -> list[dict]:
        rows = []
        for (z, labeled), value in sorted(self.entries.items()):
            rows.append(
                {
                    "z": list(z),
                    "committee": [[list(y), n] for y, n in labeled],
                    "value": value,
                }
            )
        return rows

    @staticmethod
    def from_list(rows: Iterable[dict]) -> "TableRule":
        rule = TableRule()
        for row in rows:
            try:
                z = as_point(row["z"])
                labeled = [(as_point(y), int(n)) for y, n in row["committee"]]
                rule.add(z, labeled, int(row["value"]))
            except (KeyError, TypeError) as exc:
                raise ValidationError(f"malformed rule table row: {row!r}") from exc
        return rule


def explicit_committees_to_dict(spec: CommitteeSpec) -> dict:
    if spec.mode != "explicit" or spec.explicit is None:
        raise ValidationError("only explicit committee specs serialize to a vertex map")
    return {
        point_key(z): [[list(m) for m in c] for c in cs]
        for z, cs in sorted(spec.explicit.items())
    }


def explicit_committees_from_dict(r: int, data: Mapping[str, list]) -> CommitteeSpec:
    by_vertex = {}
    for key, cs in data.items():
        z = parse_point_key(key)
        by_vertex[z] = [[as_point(m) for m in c] for c in cs]
    return CommitteeSpec.explicit_spec(r, by_vertex)
