import json

import pytest

from rrlab import (
    CommitteeSpec,
    DownwardGraph,
    FiniteDomain,
    MinRule,
    TableRho,
    cube,
    eval_h_rho,
)
from rrlab.cli import main
from rrlab.jsonio import dumps_canonical
from rrlab.displacement import build_instance


def run(args):
    return main(args)


def read(path):
    with open(path) as handle:
        return json.load(handle)


def test_gen_fixture_fig2_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["gen", "--fixture", "fig2", "--out", str(a)]) == 0
    assert run(["gen", "--fixture", "fig2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    bundle = read(a)
    assert bundle["graph"]["k"] == 2
    assert bundle["r"] == 3


def test_gen_seeded_graph_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["gen", "--k", "2", "--seed", "5", "--density", "0.3"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_density_zero_is_edgeless(tmp_path):
    out = tmp_path / "g.json"
    assert run(["gen", "--density", "0", "--out", str(out)]) == 0
    assert read(out)["edges"] == []


def test_eval_fig2_boss_value(tmp_path):
    bundle = tmp_path / "fig2.json"
    out = tmp_path / "eval.json"
    run(["gen", "--fixture", "fig2", "--out", str(bundle)])
    assert run(["eval", "--graph", str(bundle), "--out", str(out)]) == 0
    data = read(out)
    assert data["values"]["7,11"] == {"value": 3, "phi_empty": False}


def test_eval_compare_zero_mismatches(tmp_path):
    bundle = tmp_path / "fig2.json"
    out = tmp_path / "eval.json"
    run(["gen", "--fixture", "fig2", "--out", str(bundle)])
    assert run(
        ["eval", "--graph", str(bundle), "--mode", "both", "--compare", "--out", str(out)]
    ) == 0
    data = read(out)
    assert data["compare"]["ok"] is True
    assert data["compare"]["mismatches"] == []


def test_eval_hrho_min_on_edgeless(tmp_path):
    g = tmp_path / "g.json"
    out = tmp_path / "h.json"
    run(["gen", "--density", "0", "--seed", "3", "--out", str(g)])
    assert run(
        ["eval", "--graph", str(g), "--mode", "hrho", "--rho", "min", "--out", str(out)]
    ) == 0
    data = read(out)
    for key, cell in data["values"].items():
        coords = [int(c) for c in key.split(",")]
        assert cell["value"] == min(coords)
        assert cell["phi_empty"] is True


def test_search_build_solve_pipeline(tmp_path):
    witness = tmp_path / "w.json"
    inst = tmp_path / "inst.json"
    sol = tmp_path / "sol.json"
    assert run(
        [
            "search", "--k", "2", "--p", "2", "--seed", "0", "--density", "1.0",
            "--coord-max", "3", "--filler-pool", "3", "--max-extra", "1",
            "--rho", "offset:5", "--out", str(witness),
        ]
    ) == 0
    data = read(witness)
    assert data["found"] is True
    assert run(
        ["build", "--eval", str(witness), "--t", "1", "--rho", "offset:5", "--out", str(inst)]
    ) == 0
    built = read(inst)
    assert built["flags"]["regressively_regular"] is True
    assert run(["solve", "--instance", str(inst), "--out", str(sol)]) == 0
    solved = read(sol)
    assert solved["solvable"] is False  # all-negative displacement set
    assert solved["witness"] is None


def test_search_exhausted_exit_code(tmp_path):
    out = tmp_path / "w.json"
    code = run(
        [
            "search", "--k", "2", "--p", "2", "--seed", "0", "--density", "1.0",
            "--coord-max", "1", "--filler-pool", "4", "--max-extra", "2",
            "--rho", "min", "--out", str(out),
        ]
    )
    assert code == 4
    data = read(out)
    assert data["found"] is False
    assert data["candidates_tried"] >= 1
    assert "bounds" in data


def _non_regular_instance():
    # one wired vertex gives class (1,0) the values {1, 5, 12}: a violation
    E = (5, 9, 12)
    C = cube(E, 2)
    filler = (6, 1)
    domain = FiniteDomain(2, C.points + (filler,))
    g = DownwardGraph(domain, frozenset([((9, 5), filler)]))
    rho = TableRho({(v, v): 12 + 40 + j for j, v in enumerate(E)})
    e = eval_h_rho(g, MinRule(), CommitteeSpec.exhaustive(1), rho)
    return build_instance(e, E, 2, 1, rho)


def test_solve_structured_refuses_non_regular(tmp_path):
    inst = _non_regular_instance()
    assert inst.regressively_regular is False
    path = tmp_path / "inst.json"
    path.write_text(dumps_canonical(inst.to_dict()))
    assert run(["solve", "--instance", str(path)]) == 2


def test_solve_brute_engine_handles_non_regular(tmp_path):
    inst = _non_regular_instance()
    path = tmp_path / "inst.json"
    sol = tmp_path / "sol.json"
    path.write_text(dumps_canonical(inst.to_dict()))
    assert run(["solve", "--instance", str(path), "--engine", "brute", "--out", str(sol)]) == 0
    data = read(sol)
    assert data["solvable"] in (True, False)


def test_contract_violation_exit_code(tmp_path):
    bundle_path = tmp_path / "fig2.json"
    run(["gen", "--fixture", "fig2", "--out", str(bundle_path)])
    bundle = read(bundle_path)
    bundle["rule"][0]["value"] = 99  # outside the committee's labels
    bad = tmp_path / "bad.json"
    bad.write_text(dumps_canonical(bundle))
    assert run(["eval", "--graph", str(bad), "--out", str(tmp_path / "e.json")]) == 3


def test_validation_error_exit_code(tmp_path):
    missing = tmp_path / "nope.json"
    missing.write_text("{not json")
    assert run(["eval", "--graph", str(missing), "--out", str(tmp_path / "e.json")]) == 2


def test_cli_rejects_bad_parameters():
    with pytest.raises(SystemExit) as exc:
        run(["gen", "--k", "1"])
    assert exc.value.code == 2


def test_bench_csv_and_jsonl(tmp_path):
    csv_path = tmp_path / "bench.csv"
    jsonl_path = tmp_path / "bench.jsonl"
    assert run(
        [
            "bench", "--p-list", "4,8", "--reps", "1", "--seed", "0",
            "--out", str(csv_path), "--data-out", str(jsonl_path),
        ]
    ) == 0
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 3
    rows = [json.loads(line) for line in jsonl_path.read_text().splitlines()]
    assert [r["p"] for r in rows] == [4, 8]
    assert all(r["within_bound"] for r in rows)


def test_build_from_plain_evaluation_requires_e_set(tmp_path):
    bundle = tmp_path / "fig2.json"
    ev = tmp_path / "eval.json"
    run(["gen", "--fixture", "fig2", "--out", str(bundle)])
    run(["eval", "--graph", str(bundle), "--mode", "hrho", "--out", str(ev)])
    assert run(["build", "--eval", str(ev), "--t", "1", "--out", str(tmp_path / "i.json")]) == 2
