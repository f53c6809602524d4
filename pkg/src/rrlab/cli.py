"""Command-line surface: gen, eval, search, build, solve, bench.

Every command is deterministic under a fixed seed and configuration, and
output files are written atomically, so reruns are byte-identical. Exit
codes: 0 success, 2 validation failure, 3 contract violation by a supplied
rule or base family, 4 search bounds exhausted (with a report written).
"""

from __future__ import annotations

import argparse
import random
import sys

from .displacement import DisplacementInstance, build_instance
from .errors import ContractViolation, RrlabError, ValidationError
from .evaluate import (
    Evaluation,
    MinRho,
    OffsetRho,
    RhoFamily,
    TableRho,
    compare_evaluations,
    eval_h_rho,
    eval_s_hat,
)
from .families import bench_instance
from .fixtures import fig2_bundle, fixture_from_bundle
from .graph import (
    DownwardGraph,
    RandomGraphTemplate,
    gen_random_downward,
    graph_from_dict,
    graph_to_dict,
)
from .jsonio import atomic_write_text, dumps_canonical, load_json
from .lattice import FiniteDomain
from .regularity import SearchBounds, search_regular
from .selection import (
    CommitteeSpec,
    IndexRule,
    MaxRule,
    MinRule,
    SelectionRule,
    TableRule,
    explicit_committees_from_dict,
)
from .solve import (
    BRUTE_CAP_DEFAULT,
    SolveStats,
    bench_rows_to_csv,
    bench_rows_to_jsonl,
    bench_scaling,
    brute_solve,
    structured_solve,
    verify_witness,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONTRACT = 3
EXIT_EXHAUSTED = 4


def _positive_int(minimum: int, name: str):
    def parse(text: str) -> int:
        value = int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}, got {value}")
        return value

    return parse


def _parse_rho(text: str) -> RhoFamily:
    if text == "min":
        return MinRho()
    if text.startswith("offset:"):
        return OffsetRho(int(text.split(":", 1)[1]))
    if text.startswith("table:"):
        return TableRho.from_dict(load_json(text.split(":", 1)[1]))
    raise ValidationError(f"unknown rho spec: {text!r} (want min, offset:C, or table:FILE)")


def _parse_rule(text: str) -> SelectionRule:
    if text == "min":
        return MinRule()
    if text == "max":
        return MaxRule()
    if text.startswith("index:"):
        parts = text.split(":")
        seed = int(parts[1])
        rate = float(parts[2]) if len(parts) > 2 else 0.25
        return IndexRule(seed, rate)
    if text.startswith("table:"):
        return TableRule.from_list(load_json(text.split(":", 1)[1]))
    raise ValidationError(
        f"unknown rule spec: {text!r} (want min, max, index:SEED[:RATE], or table:FILE)"
    )


def _parse_committees(text: str, r: int) -> CommitteeSpec:
    if text.startswith("exhaustive"):
        parts = text.split(":")
        cap = int(parts[1]) if len(parts) > 1 else 100_000
        return CommitteeSpec.exhaustive(r, cap)
    if text.startswith("explicit:"):
        return explicit_committees_from_dict(r, load_json(text.split(":", 1)[1]))
    raise ValidationError(
        f"unknown committee spec: {text!r} (want exhaustive[:CAP] or explicit:FILE)"
    )


def _parse_value_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}") from exc


def _write_out(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def _load_graph_input(path: str) -> tuple[DownwardGraph, dict | None]:
    """Load either a bare graph file or a fixture bundle."""
    data = load_json(path)
    if isinstance(data, dict) and "graph" in data:
        return graph_from_dict(data["graph"]), data
    return graph_from_dict(data), None


def cmd_gen(args: argparse.Namespace) -> int:
    if args.fixture is not None:
        if args.fixture != "fig2":
            raise ValidationError(f"unknown fixture: {args.fixture!r}")
        _write_out(args.out, dumps_canonical(fig2_bundle()))
        return EXIT_OK
    rng = random.Random(f"{args.seed}:domain")
    span = (args.coord_max + 1) ** args.k
    if args.domain_size > span:
        raise ValidationError(
            f"cannot place {args.domain_size} distinct points in [0,{args.coord_max}]^{args.k}"
        )
    points: set[tuple[int, ...]] = set()
    while len(points) < args.domain_size:
        points.add(tuple(rng.randint(0, args.coord_max) for _ in range(args.k)))
    domain = FiniteDomain(args.k, tuple(points))
    graph = gen_random_downward(args.k, domain, args.density, f"{args.seed}:edges")
    _write_out(args.out, dumps_canonical(graph_to_dict(graph)))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    graph, bundle = _load_graph_input(args.graph)
    if bundle is not None and args.rule is None and args.committees is None:
        fx = fixture_from_bundle(bundle)
        rule, spec = fx.rule, fx.spec
    else:
        rule = _parse_rule(args.rule or "min")
        spec = _parse_committees(args.committees or "exhaustive", args.r)
    rho = _parse_rho(args.rho)

    out: dict = {}
    if args.compare or args.mode in ("shat", "both"):
        e1 = eval_s_hat(graph, rule, spec)
        out["shat"] = e1.to_dict()
    if args.compare or args.mode in ("hrho", "both"):
        e2 = eval_h_rho(graph, rule, spec, rho)
        out["hrho"] = e2.to_dict()
    if args.compare:
        report = compare_evaluations(
            Evaluation.from_dict(out["shat"]),
            Evaluation.from_dict(out["hrho"]),
            rho=rho,
            domain=graph.domain,
        )
        out["compare"] = report.to_dict()
    if len(out) == 1:
        out = next(iter(out.values()))
    _write_out(args.out, dumps_canonical(out))
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    template = RandomGraphTemplate(args.seed, args.density)
    rule = _parse_rule(args.rule or "min")
    spec = _parse_committees(args.committees or "exhaustive", args.r)
    rho = _parse_rho(args.rho)
    bounds = SearchBounds(
        coord_max=args.coord_max,
        filler_pool=args.filler_pool,
        max_extra=args.max_extra,
        max_domain=args.max_domain,
        max_candidates=args.max_candidates,
    )
    result = search_regular(template, rule, spec, rho, args.k, args.p, bounds)
    if result.found:
        payload = {
            "found": True,
            "candidates_tried": result.candidates_tried,
            **result.witness.to_dict(),
        }
        _write_out(args.out, dumps_canonical(payload))
        return EXIT_OK
    payload = {
        "found": False,
        "candidates_tried": result.candidates_tried,
        "bounds": bounds.to_dict(),
    }
    _write_out(args.out, dumps_canonical(payload))
    return EXIT_EXHAUSTED


def cmd_build(args: argparse.Namespace) -> int:
    data = load_json(args.eval)
    e_set = _parse_value_list(args.e_set) if args.e_set else None
    if isinstance(data, dict) and "hrho" in data:
        data = data["hrho"]
    if isinstance(data, dict) and "found" in data:
        # search witness: reconstruct the evaluation and default E from it
        if not data["found"]:
            raise ValidationError("search output reports no witness; nothing to build")
        k = len(data["D"][0])
        data = {"kind": "hrho", "k": k, "values": data["values"]}
        if e_set is None:
            e_set = [int(v) for v in load_json(args.eval)["E"]]
    if e_set is None:
        raise ValidationError("--e-set is required unless building from a search witness")
    evaluation = Evaluation.from_dict(data)
    rho = _parse_rho(args.rho)
    inst = build_instance(evaluation, e_set, evaluation.k, args.t, rho)
    _write_out(args.out, dumps_canonical(inst.to_dict()))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    inst = DisplacementInstance.from_dict(load_json(args.instance))
    if args.engine == "structured":
        witness, stats = structured_solve(inst)
        keys = list(witness.keys) if witness else None
    else:
        witness = brute_solve(inst.values(), cap=args.brute_cap)
        keys = None
        if witness is not None:
            keys = [
                next(el.key for el in inst.elements if el.value == v) for v in witness.values
            ]
        stats = SolveStats(0, 0, 0, 0)
    if witness is not None and not verify_witness(inst.values(), witness):
        raise RrlabError("internal error: witness failed verification")
    payload = {
        "solvable": witness is not None,
        "witness": keys,
        "stats": stats.to_dict(),
    }
    _write_out(args.out, dumps_canonical(payload))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    rows = bench_scaling(
        bench_instance,
        _parse_value_list(args.p_list),
        args.t,
        args.k,
        args.reps,
        args.seed,
        brute_cap=args.brute_cap,
    )
    _write_out(args.out, bench_rows_to_csv(rows))
    if args.data_out:
        atomic_write_text(args.data_out, bench_rows_to_jsonl(rows))
    bad = [r for r in rows if not r.within_bound or r.error]
    if bad:
        for r in bad:
            print(f"bench row p={r.p} failed: {r.error or 'count exceeded bound'}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rrlab",
        description="Downward lattice digraph workbench: evaluate committee-model "
        "functions, search for regressive regularity, build displacement "
        "subset-sum instances, and solve them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    k_type = _positive_int(2, "k")
    p_type = _positive_int(2, "p")
    t_type = _positive_int(1, "t")
    r_type = _positive_int(1, "r")

    g = sub.add_parser("gen", help="generate a seeded random downward graph or a fixture")
    g.add_argument("--k", type=k_type, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--density", type=float, default=0.2)
    g.add_argument("--domain-size", type=int, default=20)
    g.add_argument("--coord-max", type=int, default=12)
    g.add_argument("--fixture", choices=["fig2"], default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="evaluate the committee-model functions on a graph file")
    e.add_argument("--graph", required=True)
    e.add_argument("--mode", choices=["shat", "hrho", "both"], default="shat")
    e.add_argument("--rho", default="min")
    e.add_argument("--rule", default=None)
    e.add_argument("--committees", default=None)
    e.add_argument("--r", type=r_type, default=1)
    e.add_argument("--compare", action="store_true")
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("search", help="search bounded (E, D) space for a regular witness")
    s.add_argument("--k", type=k_type, default=2)
    s.add_argument("--p", type=p_type, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--rho", default="min")
    s.add_argument("--rule", default=None)
    s.add_argument("--committees", default=None)
    s.add_argument("--r", type=r_type, default=1)
    s.add_argument("--coord-max", type=int, default=4)
    s.add_argument("--filler-pool", type=int, default=4)
    s.add_argument("--max-extra", type=int, default=1)
    s.add_argument("--max-domain", type=int, default=200)
    s.add_argument("--max-candidates", type=int, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_search)

    b = sub.add_parser(
        "build", help="build a displacement instance from an hrho evaluation or search witness"
    )
    b.add_argument("--eval", required=True)
    b.add_argument("--e-set", default=None, help="comma-separated values of E")
    b.add_argument("--t", type=t_type, default=1)
    b.add_argument("--rho", default="min")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_build)

    so = sub.add_parser("solve", help="solve an instance file")
    so.add_argument("--instance", required=True)
    so.add_argument("--engine", choices=["structured", "brute"], default="structured")
    so.add_argument("--brute-cap", type=int, default=BRUTE_CAP_DEFAULT)
    so.add_argument("--out", default=None)
    so.set_defaults(func=cmd_solve)

    be = sub.add_parser("bench", help="scaling table for both engines (CSV + JSONL)")
    be.add_argument("--k", type=k_type, default=2)
    be.add_argument("--t", type=t_type, default=1)
    be.add_argument("--p-list", default="4,8,16,32")
    be.add_argument("--reps", type=int, default=1)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--brute-cap", type=int, default=BRUTE_CAP_DEFAULT)
    be.add_argument("--out", default=None)
    be.add_argument("--data-out", default=None)
    be.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except RrlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
