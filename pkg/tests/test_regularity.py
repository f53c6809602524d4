import random

import pytest

from rrlab import (
    CommitteeSpec,
    DomainError,
    Evaluation,
    FiniteDomain,
    IndexRule,
    MinRho,
    MinRule,
    OffsetRho,
    RandomGraphTemplate,
    SearchBounds,
    check_regressive_regular,
    cube,
    eval_h_rho,
    is_capped,
    max_norm,
    min_coord,
    order_signature,
    regressive_values,
    restrict_capped,
    restrict_capped_report,
    search_regular,
)
from rrlab.evaluate import H_RHO, S_HAT
from rrlab.regularity import CASE_AT_LEAST_MIN, CASE_CONSTANT_BELOW_MIN, CASE_VIOLATION
from util import quantifier_regularity_oracle, random_rho, random_rule

SPEC1 = CommitteeSpec.exhaustive(1)


def synthetic_eval(value_fn, domain: FiniteDomain, kind=H_RHO) -> Evaluation:
    values = {p: value_fn(p) for p in domain}
    return Evaluation(kind, domain.k, values, {p: False for p in domain})


def test_regressive_values_cases():
    C = cube({2, 5}, 2)
    const0 = synthetic_eval(lambda p: 0, C)
    assert regressive_values(const0, C) == (0,)
    min_eval = synthetic_eval(min_coord, C)
    assert regressive_values(min_eval, C) == ()
    g_eval = synthetic_eval(max_norm, C, kind=S_HAT)
    assert regressive_values(g_eval, C) == ()


def test_regressive_values_requires_evaluated_points():
    C = cube({2, 5}, 2)
    e = synthetic_eval(min_coord, C)
    with pytest.raises(DomainError):
        regressive_values(e, cube({2, 5, 7}, 2))


def test_check_regular_min_function_all_case2():
    C = cube({3, 7, 9}, 2)
    verdict = check_regressive_regular(synthetic_eval(min_coord, C), (3, 7, 9), 2)
    assert verdict.overall
    assert all(o.case == CASE_AT_LEAST_MIN for o in verdict.outcomes)
    assert verdict.regressive_values == ()


def test_check_regular_constant_below_min_all_case1():
    C = cube({3, 7, 9}, 2)
    verdict = check_regressive_regular(synthetic_eval(lambda p: 1, C), (3, 7, 9), 2)
    assert verdict.overall
    assert all(o.case == CASE_CONSTANT_BELOW_MIN for o in verdict.outcomes)
    assert verdict.regressive_values == (1,)


def test_check_regular_violation_point_witness():
    # constant per class, but one class's value lands in [min(E), min(x))
    E = (3, 7, 9)
    C = cube(E, 2)

    def f(p):
        return 4 if order_signature(p) == (0, 1) else min_coord(p)

    verdict = check_regressive_regular(synthetic_eval(f, C), E, 2)
    assert not verdict.overall
    out = verdict.outcome_for((0, 1))
    assert out.case == CASE_VIOLATION
    # the single-point witness breaks both cases at once: 3 <= 4 < min(x)
    (w,) = out.witness
    assert min_coord(w) > 4 >= 3


def test_check_regular_agrees_with_quantifier_oracle():
    rng = random.Random(77)
    for _ in range(80):
        p = rng.randint(2, 3)
        k = rng.choice([2, 2, 3])
        values = sorted(rng.sample(range(2, 12), p))
        C = cube(values, k)
        table = {pt: rng.randint(0, 12) for pt in C}
        e = synthetic_eval(lambda pt: table[pt], C)
        verdict = check_regressive_regular(e, values, k)
        assert verdict.overall == quantifier_regularity_oracle(e, tuple(values), k)


def test_verdict_regressive_count_bound():
    rng = random.Random(5)
    bound = {2: 3, 3: 13}
    for _ in range(40):
        k = rng.choice([2, 3])
        values = sorted(rng.sample(range(2, 10), 2))
        C = cube(values, k)
        const = rng.randint(0, values[0] - 1)
        verdict = check_regressive_regular(synthetic_eval(lambda p: const, C), values, k)
        if verdict.overall:
            assert len(verdict.regressive_values) <= bound[k] <= k**k


def test_restrict_capped_examples():
    C = cube({1, 3}, 2)
    assert restrict_capped(C, {1, 3}, 2).points == C.points
    D = FiniteDomain(2, C.points + ((5, 0),))
    got, discarded = restrict_capped_report(D, {1, 3}, 2)
    assert got.points == C.points
    assert discarded.points == ((5, 0),)


def test_restrict_capped_always_capped():
    rng = random.Random(17)
    for _ in range(50):
        values = sorted(rng.sample(range(1, 9), 2))
        C = cube(values, 2)
        extras = {
            (rng.randint(0, 10), rng.randint(0, 10)) for _ in range(rng.randint(0, 5))
        }
        D = FiniteDomain(2, C.points + tuple(extras))
        got = restrict_capped(D, values, 2)
        assert is_capped(got, values)
        assert C.is_subset_of(got)


def test_restrict_capped_requires_containment():
    with pytest.raises(DomainError):
        restrict_capped(FiniteDomain.of([(1, 1)]), {1, 3}, 2)


def test_cap_reduction_preserves_restriction():
    # values on the cube are identical before and after the reduction
    rng = random.Random(31)
    for _ in range(40):
        values = tuple(sorted(rng.sample(range(1, 9), rng.choice([2, 3]))))
        C = cube(values, 2)
        extras = {
            (rng.randint(0, 11), rng.randint(0, 11)) for _ in range(rng.randint(0, 6))
        }
        D = FiniteDomain(2, C.points + tuple(extras))
        template = RandomGraphTemplate(rng.randint(0, 10**6), rng.uniform(0.2, 1.0))
        rule = random_rule(rng)
        rho = random_rho(rng, D)
        before = eval_h_rho(template.graph_on(D), rule, SPEC1, rho)
        reduced = restrict_capped(D, values, 2)
        after = eval_h_rho(template.graph_on(reduced), rule, SPEC1, rho)
        for x in C:
            assert before.value(x) == after.value(x)


def test_search_trivial_everything_case2():
    # no edges anywhere: values fall back to min(x), every class is case 2
    result = search_regular(
        RandomGraphTemplate(0, 0.0),
        MinRule(),
        SPEC1,
        MinRho(),
        k=2,
        p=2,
        bounds=SearchBounds(coord_max=3, filler_pool=0, max_extra=0),
    )
    assert result.found
    assert result.witness.E == (0, 1)
    assert result.witness.domain.points == cube((0, 1), 2).points
    assert result.candidates_tried == 1


def test_search_trivial_undefined_rule():
    result = search_regular(
        RandomGraphTemplate(0, 1.0),
        IndexRule(0, 1.0),
        SPEC1,
        MinRho(),
        k=2,
        p=2,
        bounds=SearchBounds(coord_max=2, filler_pool=0, max_extra=0),
    )
    assert result.found and result.witness.E == (0, 1)


def test_search_nontrivial_witness_self_certifies():
    result = search_regular(
        RandomGraphTemplate(4, 1.0),
        MinRule(),
        SPEC1,
        OffsetRho(5),
        k=2,
        p=2,
        bounds=SearchBounds(coord_max=3, filler_pool=3, max_extra=1),
    )
    assert result.found
    w = result.witness
    assert is_capped(w.domain, w.E)
    re_verdict = check_regressive_regular(w.evaluation, w.E, 2)
    assert re_verdict.overall
    # some class is genuinely constant-below-min, not just vacuously regular
    assert any(o.case == CASE_CONSTANT_BELOW_MIN for o in w.verdict.outcomes)
    assert len(w.verdict.regressive_values) <= 3


def test_search_exhaustion_is_reported_not_raised():
    # density-1 neighborhoods with min labels break regularity on the only
    # candidate (coord_max 1 admits just E = (0, 1) with no fillers)
    result = search_regular(
        RandomGraphTemplate(0, 1.0),
        MinRule(),
        SPEC1,
        MinRho(),
        k=2,
        p=2,
        bounds=SearchBounds(coord_max=1, filler_pool=4, max_extra=2),
    )
    assert not result.found
    assert result.exhausted
    assert result.candidates_tried >= 1


def test_search_threaded_matches_sequential():
    kwargs = dict(
        template=RandomGraphTemplate(4, 1.0),
        rule=MinRule(),
        spec=SPEC1,
        rho=OffsetRho(5),
        k=2,
        p=2,
        bounds=SearchBounds(coord_max=3, filler_pool=3, max_extra=1),
    )
    seq = search_regular(**kwargs, threads=1)
    par = search_regular(**kwargs, threads=4)
    assert seq.found and par.found
    assert seq.witness.E == par.witness.E
    assert seq.witness.domain.points == par.witness.domain.points
    assert seq.candidates_tried == par.candidates_tried
