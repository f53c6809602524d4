"""Pipeline-backed instance generators for differential tests and benches.

The planted construction realizes any wanted mix of classification cases
end to end (graph, rule, base family, evaluation, instance), instead of
fabricating instances directly: pick a constant below min(E) for each
class that should be constant, park one filler vertex (c, ..., c) per
constant strictly below the cube, and wire every member of the class to
its filler. With single-member committees and the min rule, each wired
vertex computes exactly its filler's minimum, while unwired vertices fall
back to the base family.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .displacement import DisplacementInstance, build_instance
from .errors import ValidationError
from .evaluate import Evaluation, RhoFamily, TableRho, eval_h_rho
from .graph import DownwardGraph
from .lattice import (
    FiniteDomain,
    OrderSignature,
    Point,
    cube,
    enumerate_order_types,
    order_signature,
)
from .selection import CommitteeSpec, MinRule, SelectionRule


@dataclass(frozen=True)
class PlantedPipeline:
    """Everything the planted construction produced along the way."""

    graph: DownwardGraph
    rule: SelectionRule
    spec: CommitteeSpec
    rho: RhoFamily
    evaluation: Evaluation
    instance: DisplacementInstance


def planted_pipeline(
    k: int,
    E: Sequence[int],
    t: int,
    constant_classes: Mapping[OrderSignature, int],
    diag_displacements: Sequence[int] | None,
) -> PlantedPipeline:
    """Build a full pipeline whose evaluation is regressively regular.

    `constant_classes` maps order signatures to the constant (in
    [1, min(E) - 1]) their class should take. The diagonal class may appear
    there; otherwise `diag_displacements` gives the positive displacement
    each diagonal point's base value should have.
    """
    values = tuple(sorted(set(E)))
    if len(values) < 2:
        raise ValidationError("need at least two values in E")
    e0, e_top = values[0], values[-1]
    p = len(values)
    diag_sig = (0,) * k
    for sig, c in constant_classes.items():
        if not 1 <= c < e0:
            raise ValidationError(f"class constant {c} must lie in [1, {e0 - 1}]")
        if len(sig) != k:
            raise ValidationError(f"signature {sig!r} has wrong dimension")

    C = cube(values, k)
    fillers = {c: (c,) * k for c in set(constant_classes.values())}
    domain = FiniteDomain(k, C.points + tuple(fillers.values()))
    edges = set()
    for x in C:
        sig = order_signature(x)
        if sig in constant_classes:
            edges.add((x, fillers[constant_classes[sig]]))
    graph = DownwardGraph(domain, frozenset(edges))

    rho_table: dict[Point, int] = {}
    if diag_sig in constant_classes:
        # base values on the diagonal are never consulted; keep them
        # log-valid with uniformly large displacements
        for v in values:
            rho_table[(v,) * k] = e_top + e0 * k**k
    else:
        if diag_displacements is None or len(diag_displacements) != p:
            raise ValidationError(f"need {p} diagonal displacements")
        for v, g in zip(values, diag_displacements):
            if g <= 0:
                raise ValidationError(f"diagonal displacements must be positive, got {g}")
            rho_table[(v,) * k] = e_top + g

    rule = MinRule()
    spec = CommitteeSpec.exhaustive(r=1)
    rho = TableRho(rho_table)
    evaluation = eval_h_rho(graph, rule, spec, rho)
    instance = build_instance(evaluation, values, k, t, rho)
    return PlantedPipeline(graph, rule, spec, rho, evaluation, instance)


def _log_limit(p: int, t: int) -> int:
    """Largest count c with 2**c <= p**t, capped at p."""
    c = 0
    while 2 ** (c + 1) <= p**t and c + 1 <= p:
        c += 1
    return c


def random_planted_instance(seed: int, k: int | None = None) -> DisplacementInstance:
    """Seeded random valid instance; solvability varies by construction."""
    return random_planted_pipeline(seed, k).instance


def random_planted_pipeline(seed: int, k: int | None = None) -> PlantedPipeline:
    rng = random.Random(seed)
    if k is None:
        k = 2 if rng.random() < 0.8 else 3
    p = rng.randint(2, 6) if k == 2 else rng.randint(2, 3)
    t = rng.randint(1, 2)
    e0 = rng.randint(2, 30)
    E = sorted(rng.sample(range(e0 + 1, e0 + 60), p - 1))
    E = [e0] + E

    realizable = [
        sig for sig in enumerate_order_types(k) if len(set(sig)) <= p
    ]
    diag_sig = (0,) * k
    non_diag = [sig for sig in realizable if sig != diag_sig]
    max_planted = min(len(non_diag), 4)
    chosen = rng.sample(non_diag, rng.randint(0, max_planted))
    diag_constant = rng.random() < 0.25
    if diag_constant:
        chosen.append(diag_sig)
    constants = {sig: rng.randint(1, e0 - 1) for sig in chosen}

    diag_displacements = None
    if not diag_constant:
        limit = _log_limit(p, t)
        threshold = e0 * k**k
        n_small = rng.randint(0, limit)
        smalls = []
        if n_small and constants and rng.random() < 0.5:
            # plant one exact cancellation against a random constant class
            c = rng.choice(list(constants.values()))
            smalls.append(e0 - c)
            n_small -= 1
        smalls += [rng.randint(1, threshold - 1) for _ in range(n_small)]
        bigs = [threshold + rng.randint(0, 40) for _ in range(p - len(smalls))]
        diag_displacements = smalls + bigs
        rng.shuffle(diag_displacements)

    return planted_pipeline(k, E, t, constants, diag_displacements)


def bench_instance(p: int, t: int, k: int, seed: int) -> DisplacementInstance:
    """Unsolvable instance family with provable structure for the bench.

    All negative values are multiples of 64 and all positive values are
    congruent to 1 mod 64, so a zero-sum subset would need at least 64
    positive elements; the instances carry at most 20 distinct values, so
    no solution exists and both engines must exhaust their search. Big
    diagonal displacements repeat across diagonal points, keeping the
    deduplicated value count within the brute engine's reach while the
    diagonal itself grows with p.
    """
    if k != 2:
        raise ValidationError("the bench family is built for k=2")
    rng = random.Random(seed)
    e0 = 256
    E = [e0 + 64 * j for j in range(p)]
    constants = {(0, 1): 192, (1, 0): 128}  # displacements -64 and -128

    n_small = _log_limit(p, t)
    threshold = e0 * k**k  # 1024
    small_pool = [65 + 64 * i for i in range(14)]  # 1 mod 64, below 1024
    smalls = rng.sample(small_pool, min(n_small, len(small_pool)))
    n_big_distinct = max(1, min(p - len(smalls), 20 - 2 - len(smalls)))
    bigs = [threshold + 1 + 64 * i for i in range(n_big_distinct)]  # 1 mod 64
    displacements = list(smalls)
    for j in range(p - len(smalls)):
        displacements.append(bigs[j % n_big_distinct])

    return planted_pipeline(k, E, t, constants, displacements).instance
