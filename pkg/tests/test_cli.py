"""Problem loading, suite reports, exit codes, and the CLI surface."""
import json

import pytest

from geoinvex import (
    SchemaError,
    UnknownProblem,
    builtin_names,
    load_problem,
    normalized,
    run_suite,
    to_json,
    witnesses_csv,
)
from geoinvex.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_builtin_names_complete():
    assert set(builtin_names()) == {
        "example_3_2", "example_3_3", "example_3_4",
        "example_4_1_m2", "euclidean_baseline", "vvlip_demo",
    }


def test_load_problem_example_3_2_shape():
    p = load_problem("example_3_2")
    assert p.chart.name == "positive_orthant2"
    assert p.eta_name == "ex32"
    assert [s.id for s in p.suite][:2] == ["invex", "preinvex_from_u"]


def test_load_problem_unknown_raises():
    with pytest.raises(UnknownProblem):
        load_problem("no_such_problem")


def test_load_problem_config_overrides_box():
    p = load_problem(json.dumps({"problem": "example_3_2", "box": [[1, 2], [1, 2]],
                                 "suite": ["invex"]}))
    assert p.scheme.box == ((1.0, 2.0), (1.0, 2.0))
    assert [s.id for s in p.suite] == ["invex"]


def test_load_problem_custom_from_registry():
    p = load_problem(json.dumps({
        "name": "mine",
        "chart": "euclidean",
        "dim": 2,
        "field": "sq_norm",
        "eta": "euclidean_diff",
        "suite": ["invex", "quasi1"],
        "grid": 5,
        "random_pairs": 50,
    }))
    rep = run_suite(p)
    assert rep["problem"]["name"] == "mine"
    assert [c["id"] for c in rep["checks"]] == ["invex", "quasi1"]
    assert rep["exit_code"] == 0


def test_load_problem_schema_errors():
    with pytest.raises(SchemaError):
        load_problem(json.dumps({"field": "sq_norm", "bogus_key": 1}))
    with pytest.raises(SchemaError):
        load_problem(json.dumps({"chart": "euclidean"}))  # no field/objectives
    with pytest.raises(SchemaError):
        load_problem(json.dumps({"field": "no_such_field"}))
    with pytest.raises(SchemaError):
        load_problem(json.dumps({"field": "sq_norm", "suite": ["nope"]}))
    with pytest.raises(SchemaError):
        load_problem("{not json")


def test_report_structure_and_definitions():
    rep = run_suite(load_problem(json.dumps({"problem": "example_3_3"})))
    assert rep["schema"] == "geoinvex.report/1"
    assert rep["overall_status"] == "violated"
    for rec in rep["checks"]:
        assert rec["definition"]
        assert rec["status"]
        assert "wall_time_ms" in rec
    by_id = {c["id"]: c for c in rep["checks"]}
    assert by_id["invex"]["status"] == "violated"
    assert by_id["invex"]["as_expected"] is True
    assert by_id["pseudo1"]["status"] == "holds_vacuously"
    assert rep["exit_code"] == 1  # a violation is exit 1 even when expected


def test_report_json_round_trips():
    rep = run_suite(load_problem("example_3_4"))
    text = to_json(rep)
    assert json.loads(text) == rep


def test_expectation_mismatch_sets_exit_code():
    cfg = {"problem": "euclidean_baseline", "suite": ["invex"],
           "expect": {"invex": "violated"}}
    rep = run_suite(load_problem(json.dumps(cfg)))
    assert rep["checks"][0]["status"] == "holds"
    assert rep["checks"][0]["as_expected"] is False
    assert rep["exit_code"] == 1


def test_cli_list_problems(capsys):
    code, out, _ = run_cli(["--list-problems"], capsys)
    assert code == 0
    assert "euclidean_baseline" in out.split()


def test_cli_unknown_problem_exit_2(capsys):
    code, _, err = run_cli(["--problem", "no_such_problem"], capsys)
    assert code == 2
    assert "configuration error" in err


def test_cli_missing_source_exit_2(capsys):
    code, _, err = run_cli([], capsys)
    assert code == 2


def test_cli_baseline_suite_exit_0(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    wit_path = tmp_path / "witnesses.csv"
    code, _, _ = run_cli(
        ["--problem", "euclidean_baseline", "--suite", "invex,monotone,nemeth",
         "--out", str(out_path), "--witnesses", str(wit_path)],
        capsys,
    )
    assert code == 0
    rep = json.loads(out_path.read_text())
    assert [c["id"] for c in rep["checks"]] == ["invex", "monotone", "nemeth"]
    lines = wit_path.read_text().strip().splitlines()
    assert lines[0].startswith("check_id,")
    assert len(lines) == 4


def test_cli_example_3_3_exit_1(capsys):
    code, out, _ = run_cli(["--problem", "example_3_3", "--suite", "invex"], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["checks"][0]["status"] == "violated"


def test_cli_flag_overrides(capsys):
    code, out, _ = run_cli(
        ["--problem", "euclidean_baseline", "--suite", "invex",
         "--grid", "5", "--seed", "99", "--m", "3", "--box=-0.5,0.5"],
        capsys,
    )
    assert code == 0
    rep = json.loads(out)
    echo = rep["problem"]
    assert echo["scheme"]["grid_points_per_axis"] == 5
    assert echo["scheme"]["seed"] == 99
    assert echo["m"] == 3
    assert echo["scheme"]["box"] == [[-0.5, 0.5], [-0.5, 0.5]]


def test_cli_geodesic_mode_override(capsys):
    # running the geodesic from u while the chord weights stay v-oriented
    # breaks the bound for any non-constant field, so the override must
    # flip the baseline's preinvex verdict to a violation
    code, out, _ = run_cli(
        ["--problem", "euclidean_baseline", "--suite", "preinvex_eta",
         "--geodesic-mode", "from_u", "--grid", "5"],
        capsys,
    )
    assert code == 1
    rep = json.loads(out)
    assert rep["checks"][0]["status"] == "violated"


def test_cli_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"problem": "example_3_4", "suite": ["quasi1"]}))
    code, out, _ = run_cli(["--config", str(cfg)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["checks"][0]["status"] == "holds"


def test_report_determinism_modulo_volatile_fields():
    a = run_suite(load_problem("example_3_2"))
    b = run_suite(load_problem("example_3_2"))
    assert to_json(normalized(a)) == to_json(normalized(b))
    # the only fields allowed to differ are the timestamp and wall times
    a_strip, b_strip = normalized(a), normalized(b)
    assert a_strip == b_strip
    assert a["timestamp"] != "" and b["timestamp"] != ""


def test_witness_csv_has_counterexample_row():
    rep = run_suite(load_problem("example_3_2"))
    text = witnesses_csv(rep)
    row = [r for r in text.splitlines() if r.startswith("preinvex_from_u")]
    assert len(row) == 1
    assert "0.25" in row[0]
