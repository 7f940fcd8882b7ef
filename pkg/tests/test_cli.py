import json

import pytest

from octoks import cli, geometry as geo
from octoks.errors import UsageError


def test_missing_experiment_is_usage_error(capsys):
    assert cli.main([]) == 2
    capsys.readouterr()


def test_unknown_experiment_is_usage_error(capsys):
    assert cli.main(["frobnicate"]) == 2
    capsys.readouterr()


@pytest.mark.parametrize("argv", [
    ["algebra-suite", "--trials", "0"],
    ["algebra-suite", "--seed", "-3"],
    ["cauchy-theorem", "--n", "0"],
    ["neumann-series", "--terms", "-1"],
    ["neumann-series", "--axes", "1,2,3"],
    ["neumann-series", "--axes", "1,2,3,4,5,6,7,goat"],
    ["neumann-series", "--axes", "0,1,1,1,1,1,1,1"],
    ["plemelj", "--eps", "-0.5"],
    ["monogenicity-suite", "--h", "0"],
    ["ks-halfspace", "--radius", "-2"],
    ["algebra-suite", "--threads", "0"],
    ["algebra-suite", "--tolerance", "identity"],
    ["algebra-suite", "--tolerance", "identity=soft"],
    ["algebra-suite", "--tolerance", "identity=-1"],
    ["plemelj", "--mesh", "file"],
    ["plemelj", "--mesh-path", "somewhere.mesh"],
])
def test_bad_flag_values_exit_2_before_compute(argv, capsys):
    assert cli.main(argv) == 2
    err = capsys.readouterr().err
    assert "usage error" in err


def test_runtime_failure_exits_1(capsys):
    code = cli.main(["plemelj", "--mesh", "file", "--mesh-path", "/no/such/file.mesh"])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_check_failure_exits_1(capsys):
    # seed 4 draws a near-coincident sphere pair whose cancellation loses
    # enough digits to cross 1e-12, a deterministic failing report
    code = cli.main(["ks-vanishing", "--mesh", "sphere", "--pairs", "10000", "--seed", "4"])
    out = capsys.readouterr().out
    assert code == 1
    assert "ks-vanishing: FAIL" in out


def test_passing_run_prints_checks_and_exits_0(capsys):
    code = cli.main(["algebra-suite", "--trials", "500", "--seed", "7"])
    out = capsys.readouterr().out
    assert code == 0
    assert "algebra-suite: PASS" in out
    assert "[PASS] moufang" in out


def test_out_writes_json_and_csv(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main(["algebra-suite", "--trials", "300", "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["experiment"] == "algebra-suite"
    assert doc["passed"] is True
    assert doc["config"]["trials"] == 300
    assert "out" not in doc["config"]
    csv_lines = (tmp_path / "report.csv").read_text().splitlines()
    assert csv_lines[0] == "check,value,tolerance,status"
    assert len(csv_lines) == 1 + len(doc["checks"])


def test_reports_are_byte_identical_modulo_timestamp(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert cli.main(["cauchy-theorem", "--n", "2000", "--seed", "5",
                         "--out", str(p)]) == 0
    capsys.readouterr()
    docs = [json.loads(p.read_text()) for p in paths]
    for d in docs:
        d["timestamp"] = ""
    assert docs[0] == docs[1]


def test_threads_flag_caps_blas_pool(capsys):
    assert cli.main(["algebra-suite", "--trials", "300", "--threads", "1"]) == 0
    capsys.readouterr()


def test_config_file_supplies_settings(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(json.dumps({"trials": 400, "seed": 11}))
    out = tmp_path / "r.json"
    assert cli.main(["algebra-suite", "--config", str(cfg_path), "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads(out.read_text())
    assert doc["config"]["trials"] == 400
    assert doc["config"]["seed"] == 11


def test_flags_override_config_file(tmp_path):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(json.dumps({
        "mesh": "ellipsoid", "n": 123, "seed": 11,
        "tolerance": {"skew": 1e-10, "vanish": 1e-13},
    }))
    parser = cli.build_parser()
    args = parser.parse_args(["ks-skew", "--config", str(cfg_path),
                              "--seed", "5", "--tolerance", "skew=1e-9"])
    cfg = cli.resolve_config(args)
    assert cfg.mesh == "ellipsoid"
    assert cfg.n == 123
    assert cfg.seed == 5
    assert cfg.tolerances == {"skew": 1e-9, "vanish": 1e-13}


@pytest.mark.parametrize("payload", [
    "not json at all {",
    json.dumps(["a", "list"]),
    json.dumps({"banana": 1}),
    json.dumps({"experiment": "plemelj"}),
    json.dumps({"n": 2.5}),
])
def test_config_file_problems_exit_2(tmp_path, capsys, payload):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(payload)
    assert cli.main(["ks-skew", "--config", str(cfg_path)]) == 2
    capsys.readouterr()


def test_config_file_may_name_the_same_experiment(tmp_path):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(json.dumps({"experiment": "algebra-suite", "trials": 250}))
    parser = cli.build_parser()
    cfg = cli.resolve_config(parser.parse_args(["algebra-suite", "--config", str(cfg_path)]))
    assert cfg.trials == 250


def test_missing_config_file_exits_2(capsys):
    assert cli.main(["ks-skew", "--config", "/no/such/config.json"]) == 2
    capsys.readouterr()


def test_file_mesh_round_trips_through_cli(tmp_path, capsys):
    mesh = geo.make_sphere_mesh(200, seed=6)
    mesh_path = tmp_path / "ball.mesh"
    geo.save_mesh(mesh, mesh_path)
    code = cli.main(["ks-skew", "--mesh", "file", "--mesh-path", str(mesh_path),
                     "--pairs", "1000"])
    capsys.readouterr()
    assert code == 0


def test_experiment_defaults_differ_by_experiment():
    parser = cli.build_parser()
    dense = cli.resolve_config(parser.parse_args(["plemelj"]))
    pointwise = cli.resolve_config(parser.parse_args(["cauchy-reproduction"]))
    assert dense.n < pointwise.n


def test_validate_rejects_non_integer_n():
    cfg = cli.RunConfig(experiment="plemelj", n=2.5)
    with pytest.raises(UsageError):
        cfg.validate()


def test_tol_reads_overrides_with_default():
    cfg = cli.RunConfig(experiment="plemelj", tolerances={"blocks": 1e-9})
    assert cfg.tol("blocks", 1e-12) == 1e-9
    assert cfg.tol("other", 1e-12) == 1e-12
