import json

import numpy as np
import pytest

from condrenyi.cli import main
from condrenyi.cq import random_cq_state
from condrenyi.errors import ParseError
from condrenyi.io import load_input, parse_csv, round_sig
from condrenyi.tightness import extremal_pair


def _write(path, obj):
    path.write_text(json.dumps(obj.to_dict() if hasattr(obj, "to_dict") else obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    p, q = extremal_pair(2, 1, 0.5)
    return {
        "p": _write(tmp_path / "p.json", p),
        "q": _write(tmp_path / "q.json", q),
        "u": _write(tmp_path / "u.json", {"nx": 2, "ny": 2, "matrix": [[0.25, 0.25], [0.25, 0.25]]}),
        "bad": str(tmp_path / "bad.json"),
        "tmp": tmp_path,
    }


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_compute_uniform(files, capsys):
    code, out = _run(capsys, ["compute", "--in", files["u"], "--alpha", "0.5"])
    assert code == 0
    assert json.loads(out)["rows"][0]["arce"] == 1


def test_compute_extremal_matches_gamma(files, capsys):
    code, out = _run(capsys, ["compute", "--in", files["p"], "--alpha", "0.5", "--format", "csv"])
    assert code == 0
    header, row = out.strip().splitlines()
    assert dict(zip(header.split(","), row.split(",")))["arce"] == "1"


def test_compute_cq(files, capsys):
    cq = random_cq_state(2, 2, np.random.default_rng(0))
    path = _write(files["tmp"] / "cq.json", cq)
    code, out = _run(capsys, ["compute", "--in", path, "--alpha", "0.3", "--alpha", "2"])
    assert code == 0 and json.loads(out)["kind"] == "cq"


def test_malformed_json_exit_2(files, capsys):
    (files["tmp"] / "bad.json").write_text("{not json")
    assert main(["compute", "--in", files["bad"]]) == 2
    assert main(["compute", "--in", str(files["tmp"] / "missing.json")]) == 2
    assert main(["compute"]) == 2
    assert main(["bogus"]) == 2


def test_invalid_distribution_exit_2(files, capsys):
    path = _write(files["tmp"] / "neg.json", {"nx": 1, "ny": 2, "matrix": [[0.5, 0.6]]})
    assert main(["compute", "--in", path]) == 2


def test_certify(files, capsys):
    code, out = _run(capsys, ["certify", "--in", files["p"], "--in2", files["q"], "--eps", "0.5", "--alpha", "0", "--alpha", "0.5"])
    assert code == 0
    certs = json.loads(out)["certificates"]
    assert all(c["holds"] and abs(c["slack"]) < 1e-10 for c in certs)
    code, out = _run(capsys, ["certify", "--in", files["u"], "--in2", files["u"], "--eps", "0.3"])
    c = json.loads(out)["certificates"][0]
    assert code == 0 and c["slack"] == c["rhs"]


def test_certify_budget_exit_3(files, capsys):
    assert main(["certify", "--in", files["p"], "--in2", files["q"], "--eps", "0.2"]) == 3


def test_certify_mixed_kinds_exit_2(files, capsys):
    cq = _write(files["tmp"] / "cq.json", random_cq_state(2, 1, np.random.default_rng(1)))
    assert main(["certify", "--in", files["p"], "--in2", cq, "--eps", "0.2"]) == 2


def test_pipeline(files, capsys):
    code, out = _run(capsys, ["pipeline", "--in", files["p"], "--in2", files["q"], "--alpha", "0.5"])
    assert code == 0
    trace = json.loads(out)
    dh = [s["delta_h"] for s in trace["steps"]]
    assert all(b >= a - 1e-12 for a, b in zip(dh, dh[1:]))
    assert dh[-1] == pytest.approx(1.0)
    code, out = _run(capsys, ["pipeline", "--in", files["u"], "--in2", files["u"], "--alpha", "0.5", "--format", "csv"])
    assert code == 0 and out.splitlines()[0] == "step,label,delta_h,tv"


def test_pipeline_needs_one_alpha(files, capsys):
    assert main(["pipeline", "--in", files["p"], "--in2", files["q"], "--alpha", "0.2", "--alpha", "0.4"]) == 2


def test_tightness_reproducible(files, capsys):
    argv = ["tightness", "--nx", "3", "--ny", "2", "--alpha", "0.5", "--eps", "0.3", "--budget", "2000", "--seed", "4"]
    c1, o1 = _run(capsys, argv)
    c2, o2 = _run(capsys, argv)
    assert c1 == c2 == 0 and o1 == o2
    res = json.loads(o1)
    assert res["best_ratio"] == pytest.approx(1, abs=1e-9) and res["max_visited_ratio"] <= 1 + 1e-9


def test_lemmas(files, capsys):
    code, out = _run(capsys, ["lemmas", "--n", "100", "--format", "csv"])
    assert code == 0 and out.count(",0\n") == 5


def test_curve_and_out_file(files, capsys):
    out = files["tmp"] / "curve.csv"
    assert main(["curve", "--nx", "3", "--alpha", "0.5", "--points", "5", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "alpha,eps,gamma" and len(lines) == 6


def test_csv_input(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("# x by y\n0.1,0.2\n0.3,0.4\n")
    assert np.allclose(load_input(path).matrix, [[0.1, 0.2], [0.3, 0.4]])
    with pytest.raises(ParseError):
        parse_csv("0.1,a\n")
    with pytest.raises(ParseError):
        parse_csv("0.5,0.2\n0.3\n")


def test_round_sig():
    assert round_sig(1 / 3) == 0.333333333333
    assert round_sig({"x": [float("inf"), 2]}) == {"x": ["inf", 2]}
