"""Shared randomized builders and independent oracles for the test suite.

Oracles here deliberately re-derive results from first principles
(inclusion-exclusion counts, raw pair-set order equivalence, quantifier
expansion, combination enumeration) so they share no code path with the
implementations they check.
"""

from __future__ import annotations

import random
from itertools import combinations
from math import comb

from rrlab import (
    CommitteeSpec,
    Evaluation,
    FiniteDomain,
    IndexRule,
    MaxRule,
    MinRule,
    MinRho,
    OffsetRho,
    TableRho,
    cube,
    gen_random_downward,
    min_coord,
)


def surjection_count(k: int, j: int) -> int:
    """Number of surjections from a k-set onto a j-set, by inclusion-exclusion."""
    return sum((-1) ** i * comb(j, i) * (j - i) ** k for i in range(j + 1))


def ordered_bell(k: int) -> int:
    return sum(surjection_count(k, j) for j in range(1, k + 1))


def raw_order_equivalent(x: tuple[int, ...], y: tuple[int, ...]) -> bool:
    """Order equivalence straight from the definition: equal index-pair sets."""
    lt_x = {(i, j) for i in range(len(x)) for j in range(len(x)) if x[i] < x[j]}
    lt_y = {(i, j) for i in range(len(y)) for j in range(len(y)) if y[i] < y[j]}
    eq_x = {(i, j) for i in range(len(x)) for j in range(len(x)) if x[i] == x[j]}
    eq_y = {(i, j) for i in range(len(y)) for j in range(len(y)) if y[i] == y[j]}
    return lt_x == lt_y and eq_x == eq_y


def quantifier_regularity_oracle(e: Evaluation, E: tuple[int, ...], k: int) -> bool:
    """Regularity decided by expanding both quantifiers over raw classes."""
    values = sorted(set(E))
    pts = list(cube(values, k))
    remaining = list(pts)
    classes = []
    while remaining:
        x = remaining.pop(0)
        cls = [x] + [y for y in remaining if raw_order_equivalent(x, y)]
        remaining = [y for y in remaining if not raw_order_equivalent(x, y)]
        classes.append(cls)
    for cls in classes:
        case1 = all(
            e.value(x) == e.value(y) and e.value(x) < values[0]
            for x in cls
            for y in cls
        )
        case2 = all(e.value(x) >= min_coord(x) for x in cls)
        if not (case1 or case2):
            return False
    return True


def brute_zero_subset_combinations(values) -> tuple[int, ...] | None:
    """Independent oracle for zero-sum subsets via itertools.combinations."""
    items = sorted(set(values))
    for r in range(1, len(items) + 1):
        for chosen in combinations(items, r):
            if sum(chosen) == 0:
                return chosen
    return None


def random_domain(rng: random.Random, k: int, size: int, coord_max: int) -> FiniteDomain:
    points = set()
    while len(points) < size:
        points.add(tuple(rng.randint(0, coord_max) for _ in range(k)))
    return FiniteDomain(k, tuple(points))


def random_graph(rng: random.Random, k: int = 2, max_size: int = 40, coord_max: int = 15):
    size = rng.randint(3, max_size)
    domain = random_domain(rng, k, size, coord_max)
    density = rng.uniform(0.0, 0.3)
    return gen_random_downward(k, domain, density, rng.randint(0, 10**9))


def random_rule(rng: random.Random):
    roll = rng.random()
    if roll < 0.35:
        return MinRule()
    if roll < 0.55:
        return MaxRule()
    return IndexRule(rng.randint(0, 10**9), rng.choice([0.0, 0.2, 0.5, 0.9]))


def random_rho(rng: random.Random, domain: FiniteDomain):
    roll = rng.random()
    if roll < 0.4:
        return MinRho()
    if roll < 0.7:
        return OffsetRho(rng.randint(0, 7))
    pts = list(domain)
    chosen = rng.sample(pts, min(len(pts), rng.randint(1, 6)))
    return TableRho({p: min_coord(p) + rng.randint(0, 9) for p in chosen})


def random_spec(rng: random.Random, domain_size: int) -> CommitteeSpec:
    r = 2 if (domain_size <= 30 and rng.random() < 0.5) else 1
    return CommitteeSpec.exhaustive(r)
