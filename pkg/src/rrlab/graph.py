"""Finite downward directed lattice digraphs.

Every edge must strictly decrease the max-norm, which makes the graphs
acyclic by construction and gives the evaluator its well-founded recursion
order. Graphs store explicit edge sets; domains are small enough that the
exact out-neighborhoods matter more than compact encodings.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .errors import DomainError, EmptyDomainError, ValidationError
from .lattice import FiniteDomain, Point, as_point, max_norm

Edge = tuple[Point, Point]


@dataclass(frozen=True)
class DownwardGraph:
    domain: FiniteDomain
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        canon = frozenset((tuple(x), tuple(y)) for x, y in self.edges)
        for x, y in canon:
            if x not in self.domain or y not in self.domain:
                raise DomainError(f"edge endpoint outside the domain: {(x, y)!r}")
        object.__setattr__(self, "edges", canon)

    @property
    def k(self) -> int:
        return self.domain.k

    @cached_property
    def _out(self) -> Mapping[Point, tuple[Point, ...]]:
        out: dict[Point, list[Point]] = {p: [] for p in self.domain}
        for x, y in self.edges:
            out[x].append(y)
        return {p: tuple(sorted(ys)) for p, ys in out.items()}

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class DownwardReport:
    ok: bool
    violations: tuple[Edge, ...]


def validate_downward(g: DownwardGraph) -> DownwardReport:
    """Check that every edge strictly decreases the max-norm."""
    bad = tuple(sorted((x, y) for x, y in g.edges if max_norm(x) <= max_norm(y)))
    return DownwardReport(ok=not bad, violations=bad)


def induced_subgraph(g: DownwardGraph, D: FiniteDomain) -> DownwardGraph:
    """Restriction of g to the vertex set D (which must lie inside g)."""
    if D.k != g.k:
        raise DomainError(f"dimension mismatch: {D.k} vs {g.k}")
    if not D.is_subset_of(g.domain):
        raise DomainError("induced vertex set is not contained in the graph")
    kept = frozenset((x, y) for x, y in g.edges if x in D and y in D)
    return DownwardGraph(D, kept)


def adjacency(g: DownwardGraph, z: Point) -> FiniteDomain:
    """Out-neighbors of z; all strictly lower in max-norm for valid graphs."""
    z = tuple(z)
    if z not in g.domain:
        raise DomainError(f"vertex not found: {z!r}")
    return FiniteDomain(g.k, g._out[z])


@dataclass(frozen=True)
class Layering:
    """Domain partitioned by max-norm, levels ascending."""

    levels: tuple[tuple[int, FiniteDomain], ...]


def layers(D: FiniteDomain) -> Layering:
    if not D.points:
        raise EmptyDomainError("cannot layer an empty domain")
    buckets: dict[int, list[Point]] = {}
    for p in D.points:
        buckets.setdefault(max_norm(p), []).append(p)
    levels = tuple(
        (norm, FiniteDomain(D.k, tuple(buckets[norm]))) for norm in sorted(buckets)
    )
    return Layering(levels)


def gen_random_downward(
    k: int, D: FiniteDomain, edge_probability: float, seed: int | str
) -> DownwardGraph:
    """Seeded random downward graph on D.

    Candidate edges are exactly the ordered norm-decreasing pairs; each is
    kept independently. The candidate iteration order is the sorted point
    order, so equal seeds give identical edge sets.
    """
    if k != D.k:
        raise DomainError(f"dimension mismatch: {k} vs {D.k}")
    if not 0.0 <= edge_probability <= 1.0:
        raise ValidationError(f"edge probability must lie in [0, 1], got {edge_probability}")
    rng = random.Random(seed)
    edges = []
    for x in D.points:
        for y in D.points:
            if max_norm(x) > max_norm(y) and rng.random() < edge_probability:
                edges.append((x, y))
    return DownwardGraph(D, frozenset(edges))


class GraphTemplate:
    """A rule assigning a downward graph to every finite domain.

    Templates stand in for one fixed (conceptually unbounded) graph: the
    presence of an edge depends only on its endpoints, never on the domain,
    so the graph on a sub-domain is the induced subgraph of the graph on
    any super-domain.
    """

    def has_edge(self, x: Point, y: Point) -> bool:
        raise NotImplementedError

    def graph_on(self, D: FiniteDomain) -> DownwardGraph:
        edges = frozenset(
            (x, y)
            for x in D.points
            for y in D.points
            if max_norm(x) > max_norm(y) and self.has_edge(x, y)
        )
        return DownwardGraph(D, edges)


class RandomGraphTemplate(GraphTemplate):
    """Hash-thresholded pseudo-random template, pure in (seed, x, y)."""

    def __init__(self, seed: int | str, density: float):
        if not 0.0 <= density <= 1.0:
            raise ValidationError(f"density must lie in [0, 1], got {density}")
        self.seed = seed
        self.density = density

    def has_edge(self, x: Point, y: Point) -> bool:
        digest = hashlib.sha256(f"{self.seed}|{x}|{y}".encode()).digest()
        u = int.from_bytes(digest[:8], "big") / 2**64
        return u < self.density


def graph_to_dict(g: DownwardGraph) -> dict:
    return {
        "k": g.k,
        "vertices": [list(p) for p in g.domain.points],
        "edges": [[list(x), list(y)] for x, y in g.sorted_edges()],
    }


def graph_from_dict(data: dict) -> DownwardGraph:
    try:
        k = int(data["k"])
        vertices = [as_point(v, k) for v in data["vertices"]]
        edges = [(as_point(x, k), as_point(y, k)) for x, y in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed graph JSON: {exc}") from exc
    return DownwardGraph(FiniteDomain(k, tuple(vertices)), frozenset(edges))
