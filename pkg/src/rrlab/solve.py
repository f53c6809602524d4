"""Target-zero subset-sum over displacement instances.

Two engines. `brute_solve` is the independent oracle: it enumerates every
nonempty subset of the (deduplicated) value set by ascending bitmask and
returns the first zero-sum subset, capped at a configurable set size.

`structured_solve` exploits the shape of instances built from regressively
regular evaluations: the negative values are few (fewer than k^k) and
small (each magnitude below e_0), so their total magnitude stays below
e_0 * k^k; every diagonal displacement at or above that threshold can
never be cancelled and is excluded outright; what remains is an
enumeration over negative values crossed with the few small positive
diagonal values, at most 2^(k^k) * 2^(t*log2 p) subset pairs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .displacement import DisplacementInstance
from .errors import LogBoundError, SolverInputError
from .jsonio import dumps_canonical

BRUTE_CAP_DEFAULT = 25


@dataclass(frozen=True)
class Witness:
    """A nonempty zero-sum subset; keys are provenance tags when known."""

    values: tuple[int, ...]
    keys: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"values": list(self.values), "keys": list(self.keys)}


@dataclass(frozen=True)
class SolveStats:
    subsets_explored: int
    neg: int
    small: int
    big: int

    def to_dict(self) -> dict:
        return {
            "subsets_explored": self.subsets_explored,
            "neg": self.neg,
            "small": self.small,
            "big": self.big,
        }


def _brute_with_stats(values: Iterable[int], cap: int) -> tuple[Optional[tuple[int, ...]], int]:
    items = sorted(set(values))
    n = len(items)
    if n > cap:
        raise SolverInputError(f"brute-force cap is {cap} distinct values, got {n}")
    # ascending masks with incremental sums: stepping mask-1 -> mask clears
    # the trailing ones and sets bit b, so the sum shifts by items[b] minus
    # the prefix below b; O(1) memory, and the first hit is deterministic
    prefix = [0] * (n + 1)
    for i, v in enumerate(items):
        prefix[i + 1] = prefix[i] + v
    s = 0
    explored = 0
    for mask in range(1, 1 << n):
        b = (mask & -mask).bit_length() - 1
        s += items[b] - prefix[b]
        explored += 1
        if s == 0:
            chosen = tuple(items[i] for i in range(n) if mask >> i & 1)
            return chosen, explored
    return None, explored


def brute_solve(S: Iterable[int], cap: int = BRUTE_CAP_DEFAULT) -> Optional[Witness]:
    """Exhaustive oracle: first nonempty zero-sum subset in bitmask order."""
    chosen, _ = _brute_with_stats(S, cap)
    if chosen is None:
        return None
    return Witness(values=chosen)


def verify_witness(S: Iterable[int], w: Optional[Witness]) -> bool:
    """True iff w is a nonempty subset of S with zero sum."""
    if w is None or not w.values:
        return False
    pool = set(S)
    vals = w.values
    if len(set(vals)) != len(vals):
        return False
    return set(vals) <= pool and sum(vals) == 0


def structured_solve(inst: DisplacementInstance) -> tuple[Optional[Witness], SolveStats]:
    """Polynomial-count solve for instances from regular evaluations.

    Refuses instances without the regularity flag instead of silently
    falling back: the enumeration budget only exists under that hypothesis.
    The returned statistics count every (negative-subset, small-subset)
    pair examined, which never exceeds 2^neg * 2^small.
    """
    if not inst.regressively_regular:
        raise SolverInputError(
            "instance is not flagged regressively regular; use the brute engine"
        )
    threshold = inst.E[0] * inst.k**inst.k
    neg = [el for el in inst.elements if el.value < 0]
    small = [el for el in inst.elements if 0 < el.value < threshold]
    big = [el for el in inst.elements if el.value >= threshold]
    if any(el.value == 0 for el in inst.elements):
        raise SolverInputError("zero displacement in instance; displacements must be nonzero")

    total_neg = sum(-el.value for el in neg)
    if total_neg >= threshold:
        raise SolverInputError(
            f"negative mass {total_neg} reaches {threshold}; instance shape is invalid"
        )
    if not _count_within_log(len(small), inst.p, inst.t):
        raise LogBoundError(
            f"{len(small)} small positive values exceed the log bound for p={inst.p}, t={inst.t}"
        )

    neg.sort(key=lambda el: el.key)
    small.sort(key=lambda el: el.key)
    small_sums = [0] * (1 << len(small))
    for mask in range(1, 1 << len(small)):
        low = mask & -mask
        small_sums[mask] = small_sums[mask ^ low] + small[low.bit_length() - 1].value

    total_small = sum(el.value for el in small)
    explored = 0
    for neg_mask in range(1 << len(neg)):
        neg_sum = sum(neg[i].value for i in range(len(neg)) if neg_mask >> i & 1)
        target = -neg_sum
        if target == 0 or target > total_small:
            # no nonempty small subset can land on this target
            explored += 1
            continue
        for small_mask in range(1, 1 << len(small)):
            explored += 1
            if small_sums[small_mask] == target:
                chosen = [neg[i] for i in range(len(neg)) if neg_mask >> i & 1]
                chosen += [small[i] for i in range(len(small)) if small_mask >> i & 1]
                witness = Witness(
                    values=tuple(el.value for el in chosen),
                    keys=tuple(el.key for el in chosen),
                )
                return witness, SolveStats(explored, len(neg), len(small), len(big))
    return None, SolveStats(explored, len(neg), len(small), len(big))


def _count_within_log(count: int, p: int, t: int) -> bool:
    return 2**count <= p**t


@dataclass
class BenchRow:
    p: int
    reps: int
    subsets_structured: int  # max over reps
    bound: int  # 2^(k^k) * p^t
    subsets_brute: int  # max over reps
    elements: int  # max distinct values over reps
    seconds_structured: float
    seconds_brute: float
    within_bound: bool
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "reps": self.reps,
            "subsets_explored_structured": self.subsets_structured,
            "bound": self.bound,
            "subsets_explored_brute": self.subsets_brute,
            "elements": self.elements,
            "wall_time_structured_s": round(self.seconds_structured, 6),
            "wall_time_brute_s": round(self.seconds_brute, 6),
            "within_bound": self.within_bound,
            "error": self.error,
        }


BENCH_CSV_HEADER = (
    "p,reps,subsets_explored_structured,bound,subsets_explored_brute,"
    "elements,wall_time_structured_s,wall_time_brute_s,within_bound"
)


def bench_scaling(
    family: Callable[[int, int, int, int], DisplacementInstance],
    p_values: Sequence[int],
    t: int,
    k: int,
    reps: int,
    seed: int,
    brute_cap: int = BRUTE_CAP_DEFAULT,
) -> list[BenchRow]:
    """Measure both engines across instance sizes.

    `family(p, t, k, seed)` must yield a valid regressively regular
    instance; a failing generator marks its row instead of aborting the
    table. Every structured count is checked against 2^(k^k) * p^t.
    """
    rows: list[BenchRow] = []
    bound_base = 2 ** (k**k)
    for p in p_values:
        bound = bound_base * p**t
        max_structured = 0
        max_brute = 0
        max_elements = 0
        sec_structured = 0.0
        sec_brute = 0.0
        error = None
        try:
            for rep in range(reps):
                inst = family(p, t, k, seed + rep)
                start = time.perf_counter()
                _, stats = structured_solve(inst)
                sec_structured += time.perf_counter() - start
                start = time.perf_counter()
                _, brute_explored = _brute_with_stats(inst.values(), brute_cap)
                sec_brute += time.perf_counter() - start
                max_structured = max(max_structured, stats.subsets_explored)
                max_brute = max(max_brute, brute_explored)
                max_elements = max(max_elements, len(inst.values()))
        except Exception as exc:  # generator or solver failure surfaces per-row
            error = f"{type(exc).__name__}: {exc}"
        rows.append(
            BenchRow(
                p=p,
                reps=reps,
                subsets_structured=max_structured,
                bound=bound,
                subsets_brute=max_brute,
                elements=max_elements,
                seconds_structured=sec_structured,
                seconds_brute=sec_brute,
                within_bound=error is None and max_structured <= bound,
                error=error,
            )
        )
    return rows


def bench_rows_to_csv(rows: Sequence[BenchRow]) -> str:
    lines = [BENCH_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.p},{r.reps},{r.subsets_structured},{r.bound},{r.subsets_brute},"
            f"{r.elements},{r.seconds_structured:.6f},{r.seconds_brute:.6f},{r.within_bound}"
        )
    return "\n".join(lines) + "\n"


def bench_rows_to_jsonl(rows: Sequence[BenchRow]) -> str:
    return "".join(dumps_canonical(r.to_dict()) for r in rows)
