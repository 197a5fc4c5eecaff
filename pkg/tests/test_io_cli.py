import csv
import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from drqp import QpSplitting, run, verify_identities
from drqp.cli import main
from drqp.engine import TraceRow
from drqp.io import (
    ProblemFormatError,
    parse_problem,
    parse_problem_dict,
    problem_to_json,
    result_to_json,
    write_trace,
)


def write_problem(tmp_path, name, obj):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(obj))
    return str(path)


def test_round_trip_canonical(instances):
    for name, problem in instances.items():
        back = parse_problem_dict(problem_to_json(problem))
        assert back.n == problem.n and back.m == problem.m
        assert_allclose(back.Q, problem.Q)
        assert_allclose(back.q, problem.q)
        assert_allclose(back.A, problem.A)
        assert back.B == problem.B
        assert back.C == problem.C


def test_round_trip_all_set_kinds():
    from drqp import NonnegOrthant, Product, QpProblem, SecondOrderCone, WholeSpace, Zero
    from drqp.sets import Box

    C = Product([Box([-np.inf, 0.0], [1.0, np.inf]), NonnegOrthant(1), Zero(1), SecondOrderCone(2)])
    problem = QpProblem(
        Q=np.eye(3), q=np.zeros(3), A=np.ones((6, 3)), B=WholeSpace(3), C=C
    )
    back = parse_problem_dict(problem_to_json(problem))
    assert back.C == C
    assert back.B == problem.B


def test_parse_infinite_bounds(tmp_path):
    path = write_problem(
        tmp_path,
        "p",
        {
            "n": 1,
            "m": 1,
            "Q": [[0.0]],
            "q": [0.0],
            "A": [[1.0]],
            "B": {"kind": "whole", "dim": 1},
            "C": {"kind": "box", "lower": ["-inf"], "upper": [1.0]},
        },
    )
    problem = parse_problem(path)
    assert problem.C.lower[0] == -np.inf
    assert problem.C.upper[0] == 1.0


def test_parse_errors_name_fields():
    base = {
        "n": 1,
        "m": 1,
        "Q": [[0.0]],
        "q": [0.0],
        "A": [[1.0]],
        "B": {"kind": "whole", "dim": 1},
        "C": {"kind": "whole", "dim": 1},
    }
    bad = dict(base, Q=[[-1.0]])
    with pytest.raises(ProblemFormatError, match="Q not positive semidefinite"):
        parse_problem_dict(bad)

    bad = dict(base, C={"kind": "box", "lower": [2.0], "upper": [1.0]})
    with pytest.raises(ProblemFormatError, match="'C'"):
        parse_problem_dict(bad)

    bad = dict(base)
    del bad["q"]
    with pytest.raises(ProblemFormatError, match="'.q'|'q'"):
        parse_problem_dict(bad)

    bad = dict(base, A=[[1.0, 2.0]])
    with pytest.raises(ProblemFormatError, match="'A'"):
        parse_problem_dict(bad)

    bad = dict(base, B={"kind": "mystery", "dim": 1})
    with pytest.raises(ProblemFormatError, match="kind"):
        parse_problem_dict(bad)

    bad = dict(base, B={"kind": "zero", "dim": 2})
    with pytest.raises(ProblemFormatError, match="'B'"):
        parse_problem_dict(bad)


def test_asymmetric_q_warns_and_symmetrizes():
    obj = {
        "n": 2,
        "m": 1,
        "Q": [[1.0, 0.5], [0.1, 1.0]],
        "q": [0.0, 0.0],
        "A": [[1.0, 0.0]],
        "B": {"kind": "whole", "dim": 2},
        "C": {"kind": "whole", "dim": 1},
    }
    with pytest.warns(UserWarning, match="symmetrized"):
        problem = parse_problem_dict(obj)
    assert_allclose(problem.Q, problem.Q.T)
    assert_allclose(problem.Q[0, 1], 0.3)


def test_result_json_schema(instances):
    split = QpSplitting(instances["E3"])
    result = run(split)
    report = verify_identities(split, result.certificates, 1e-5)
    payload = result_to_json(result, report)
    assert payload["status"] == "dual_infeasible"
    assert payload["objective"] is None and payload["z"] is None
    assert set(payload["certificates"]) == {"vp_z", "vp_y", "vd_z", "vd_y"}
    assert_allclose(payload["certificates"]["vd_z"], [-0.5], atol=1e-6)
    assert set(payload["identity_report"]) == {
        "Q_vd_prime",
        "A_vd_graph",
        "q_inner_vd",
        "vp_adjoint",
        "vp_support",
    }
    assert all(entry["pass"] for entry in payload["identity_report"].values())
    json.dumps(payload)  # strict-JSON serializable


def test_write_trace(tmp_path):
    path = tmp_path / "trace.csv"
    rows = [TraceRow(25, 0.5, 0.25, 0.25, -1.0), TraceRow(50, 0.4, 0.2, 0.2, -1.1)]
    write_trace(rows, str(path))
    with open(path) as fh:
        parsed = list(csv.reader(fh))
    assert parsed[0] == ["iter", "norm_ds", "norm_dx", "norm_dnu", "obj_candidate"]
    assert len(parsed) == 3

    write_trace([], str(path))
    with open(path) as fh:
        parsed = list(csv.reader(fh))
    assert parsed == [["iter", "norm_ds", "norm_dx", "norm_dnu", "obj_candidate"]]


@pytest.fixture
def instance_files(tmp_path, instances):
    return {
        name: write_problem(tmp_path, name, problem_to_json(problem))
        for name, problem in instances.items()
    }


def test_cli_exit_codes(instance_files, capsys):
    assert main(["solve", instance_files["E1"]]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "solved"
    assert abs(payload["objective"] + 1.0) <= 1e-6

    assert main(["solve", instance_files["E2"]]) == 2
    assert main(["solve", instance_files["E3"]]) == 3
    assert main(["solve", instance_files["E4"]]) == 4
    capsys.readouterr()

    assert main(["solve", instance_files["E2"], "--max-iter", "10", "--eps-inf", "1e-12"]) == 5
    capsys.readouterr()


def test_cli_usage_and_io_errors(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.json")]) == 1
    assert main(["frobnicate"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", str(bad)]) == 1
    capsys.readouterr()


def test_cli_out_flag(instance_files, tmp_path, capsys):
    out = tmp_path / "result.json"
    assert main(["solve", instance_files["E1"], "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["status"] == "solved"
    capsys.readouterr()


def test_cli_certify_populates_report(instance_files, capsys):
    code = main(["certify", instance_files["E2"]])
    assert code == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["identity_report"]
    assert all(entry["pass"] for entry in payload["identity_report"].values())

    code = main(["solve", instance_files["E2"]])
    payload = json.loads(capsys.readouterr().out)
    assert payload["identity_report"] == {}
    assert code == 2


def test_cli_trace(instance_files, tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = main(["trace", instance_files["E3"], "--out", str(out)])
    assert code == 3
    capsys.readouterr()
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert rows
    assert abs(float(rows[-1]["norm_dx"]) - np.sqrt(0.5)) <= 1e-6

    out1 = tmp_path / "trace1.csv"
    code = main(["trace", instance_files["E1"], "--out", str(out1)])
    assert code == 0
    capsys.readouterr()
    with open(out1) as fh:
        rows1 = list(csv.DictReader(fh))
    norms = [float(r["norm_ds"]) for r in rows1]
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_cli_s0_flag(instance_files, capsys):
    assert main(["solve", instance_files["E1"], "--s0", "random:7"]) == 0
    capsys.readouterr()
    assert main(["solve", instance_files["E1"], "--s0", "bogus"]) == 1
    capsys.readouterr()


def test_cli_window_and_eps_flags(instance_files, capsys):
    code = main(["solve", instance_files["E2"], "--window", "10", "--eps-solved", "1e-9"])
    assert code == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "primal_infeasible"


def test_cli_oracle_compare(instance_files, capsys):
    assert main(["oracle-compare", "E2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["vp_gap"] <= 1e-3
    assert payload["vd_gap"] <= 1e-3

    assert main(["oracle-compare", instance_files["E3"]]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["vd_gap"] <= 1e-3


def test_exit_codes_match_statuses(instance_files, capsys):
    # exit code and ResultFile.status must agree on every run
    expected = {
        "E1": ("solved", 0),
        "E2": ("primal_infeasible", 2),
        "E3": ("dual_infeasible", 3),
        "E4": ("primal_and_dual_infeasible", 4),
    }
    for name, (status, code) in expected.items():
        got = main(["solve", instance_files[name]])
        payload = json.loads(capsys.readouterr().out)
        assert got == code
        assert payload["status"] == status
