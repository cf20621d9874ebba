import csv
import io
import json
import subprocess
import sys

import pytest
from gmpy2 import mpfr, mpq

from gaplab import scalar as sc
from gaplab.cli import ParseError, main, parse_value

TWO_PIECE = {
    "period": {"rational": "1"},
    "pieces": [
        {"left": {"rational": "0"}, "right": {"rational": "3/4"}, "slope": {"rational": "1"},
         "intercept": {"rational": "1"}, "right_closed": False},
        {"left": {"rational": "3/4"}, "right": {"rational": "1"}, "slope": {"rational": "1"},
         "intercept": {"rational": "-1/2"}, "right_closed": False},
    ],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def two_piece_file(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps(TWO_PIECE))
    return path


# -- value parsing ---------------------------------------------------------

@pytest.mark.parametrize("text, expected", [("3/4", mpq(3, 4)), ("0.25", mpq(1, 4)), ("-2", mpq(-2)),
                                             ("1/3 + 1/6", mpq(1, 2))])
def test_parse_rationals_stay_exact(text, expected):
    v = parse_value(text)
    assert sc.is_exact(v) and v == expected


def test_parse_constants():
    # oracle: mpmath at 300 bits
    v = parse_value("pi/16", bits=256)
    assert v.precision == 256
    assert abs(v - mpfr("0.19634954084936207740391521145496893026232308746094411381093403701923852539288806", 256)) < 1e-70
    assert abs(parse_value("sqrt2-1", bits=256) - parse_value("sqrt2", bits=256) + 1) == 0
    assert sc.is_approx(parse_value("7*sqrt2"))


def test_parse_modes():
    assert sc.is_approx(parse_value("1/3", "approx", 128))
    with pytest.raises(ParseError):
        parse_value("pi", "exact")
    for bad in ("tau", "2**3", "1/0", "pi(", "x.y"):
        with pytest.raises(ParseError):
            parse_value(bad)


# -- gaps ------------------------------------------------------------------

def test_gaps_cosine(capsys):
    code, doc = run_json(capsys, "gaps", "--fn", "cosine", "--alpha", "1/4", "--N", "3")
    assert code == 0 and doc["mode"] == "approx"
    got = [float(sc.from_json(g)) for g in doc["gap_set"]]
    assert got == pytest.approx([0.0913, 0.1459, 1.7628], abs=5e-5)


def test_gaps_sawtooth_exact(capsys):
    code, doc = run_json(capsys, "gaps", "--fn", "sawtooth", "--alpha", "1/4", "--N", "3", "--mode", "exact")
    assert code == 0 and doc["mode"] == "exact"
    assert doc["gap_set"] == [{"rational": "1/4"}, {"rational": "1/2"}]
    assert [g["kind"] for g in doc["gaps"]] == ["interior", "interior", "extremal"]


def test_gaps_from_file(capsys, two_piece_file):
    code, doc = run_json(capsys, "gaps", "--fn", f"@{two_piece_file}", "--alpha", "pi/16", "--N", "7")
    assert code == 0
    # independent brute force gives 4 distinct lengths for this orbit
    assert doc["count"] == 4
    code, doc2 = run_json(capsys, "gaps", "--fn", str(two_piece_file), "--alpha", "pi/16", "--N", "7")
    assert doc2 == doc


def test_gaps_csv(capsys):
    code, out, _ = run(capsys, "gaps", "--fn", "sawtooth", "--alpha", "1/4", "--N", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["d_range", "lower", "upper", "length", "kind", "piece"]
    assert [r["d_range"] for r in rows] == ["1->2", "2->3", "1->3"]
    assert [r["length"] for r in rows] == ["1/4", "1/4", "1/2"]


def test_gaps_shifted_cosine(capsys):
    code, doc = run_json(capsys, "gaps", "--fn", "shifted_cosine(pi/2)", "--alpha", "1/4", "--N", "3")
    got = [float(sc.from_json(g)) for g in doc["gap_set"]]
    assert got == pytest.approx([0.2022, 0.2320, 1.5658], abs=5e-5)


def test_eval(capsys, two_piece_file):
    code, doc = run_json(capsys, "eval", "--fn", f"@{two_piece_file}", "--x", "0.8")
    assert code == 0 and doc["value"] == {"rational": "3/10"}


# -- verify ----------------------------------------------------------------

def test_verify_three_gap(capsys):
    code, doc = run_json(capsys, "verify", "three_gap", "--alpha", "sqrt2", "--N", "5000")
    assert code == 0 and doc["pass"] and doc["observed"] <= 3


def test_verify_main_construction(capsys):
    code, doc = run_json(capsys, "verify", "main_construction", "--n", "10")
    assert code == 0 and doc["pass"]
    con = doc["extra"]["construction"]
    assert con["N"] == 24 and con["epsilon"] == {"rational": "1/21"}


def test_verify_five_distance_zero_beta(capsys):
    code, _, err = run(capsys, "verify", "five_distance", "--alpha", "sqrt2", "--beta", "0", "--N", "10")
    assert code == 3 and "non-zero" in err


def test_verify_affine_and_two_piece(capsys):
    code, doc = run_json(capsys, "verify", "affine", "--m", "3", "--c", "0", "--alpha", "1/4", "--N", "3")
    assert code == 0 and doc["witness"]["gap_set"] == [{"rational": "3/4"}, {"rational": "3/2"}]
    code, doc = run_json(capsys, "verify", "two_piece_shift", "--kappa", "1/2", "--beta", "1/4",
                         "--alpha", "1/8", "--N", "8")
    assert code == 0 and doc["observed"] == 1
    code, _, _ = run(capsys, "verify", "two_piece_shift", "--kappa", "1/4", "--beta", "1/2",
                     "--alpha", "1/8", "--N", "8")
    assert code == 3


def test_verify_general_needs_injective(capsys):
    code, _, _ = run(capsys, "verify", "general", "--fn", "triangle", "--alpha", "1/3", "--N", "5")
    assert code == 3


def test_verify_unknown_statement(capsys):
    assert run(capsys, "verify", "four_gap", "--alpha", "1/3", "--N", "5")[0] == 2


def test_verify_missing_option(capsys):
    assert run(capsys, "verify", "three_gap", "--alpha", "1/3")[0] == 2


# -- construct -------------------------------------------------------------

def test_construct_main(capsys):
    code, doc = run_json(capsys, "construct", "main", "--n", "3")
    assert code == 0
    c = doc["construction"]
    assert c["epsilon"] == {"rational": "1/7"} and c["alpha"] == {"rational": "1/10"} and c["N"] == 10
    assert doc["report"]["observed"] > 3


def test_construct_c2(capsys):
    code, doc = run_json(capsys, "construct", "c2", "--fn", "cosine", "--n", "2")
    assert code == 0 and doc["report"]["observed"] == 3
    assert float(sc.from_json(doc["construction"]["alpha"])) == pytest.approx(3.141592653589793 / 6, abs=1e-15)


def test_construct_errors(capsys):
    assert run(capsys, "construct", "main", "--n", "0")[0] == 2
    assert run(capsys, "construct", "c2", "--fn", "shifted_cosine(pi/2)", "--n", "5")[0] == 3
    assert run(capsys, "construct", "c2", "--fn", "sawtooth", "--n", "5")[0] == 3


# -- sweep -----------------------------------------------------------------

def test_sweep_rows_and_summary(capsys):
    code, doc = run_json(capsys, "sweep", "two_piece_shift", "--draws", "40", "--seed", "3", "--max-N", "300")
    assert code == 0 and len(doc["draws"]) == 40
    assert doc["summary"]["pass_rate"] == 1 and doc["summary"]["max_observed"] <= 10
    code, out, _ = run(capsys, "sweep", "two_piece_shift", "--draws", "40", "--seed", "3", "--max-N", "300",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 41 and rows[-1]["draw"] == "summary"


@pytest.mark.slow
@pytest.mark.parametrize("argv, upper, lower", [
    (["general", "--draws", "1000", "--max-pieces", "4", "--max-N", "2000", "--seed", "7"], None, None),
    (["triangle", "--draws", "500", "--max-N", "5000", "--seed", "1"], 4, 2),
    (["two_piece_shift", "--draws", "300", "--seed", "3"], 10, None),
])
def test_sweep_examples(capsys, argv, upper, lower):
    code, doc = run_json(capsys, "sweep", *argv)
    s = doc["summary"]
    assert code == 0 and s["pass_rate"] == 1
    if upper is not None:
        assert s["max_observed"] <= upper
    if lower is not None:
        assert s["min_observed"] >= lower


def test_sweep_bad_draws(capsys):
    assert run(capsys, "sweep", "three_gap", "--draws", "0")[0] == 2


# -- determinism and plumbing ----------------------------------------------

@pytest.mark.parametrize("argv", [
    ["sweep", "general", "--draws", "25", "--seed", "11", "--max-N", "100"],
    ["gaps", "--fn", "cosine", "--alpha", "sqrt2", "--N", "50"],
    ["construct", "main", "--n", "5", "--format", "csv"],
])
def test_byte_identical_output(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second and first


def test_parallel_sweep_matches_serial(capsys):
    argv = ["sweep", "tightened", "--draws", "30", "--seed", "5", "--max-N", "200"]
    assert run(capsys, *argv)[1] == run(capsys, *argv, "--workers", "3")[1]


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert run(capsys, "gaps", "--fn", "sawtooth", "--alpha", "1/4", "--N", "3", "--out", str(out))[1] == ""
    assert json.loads(out.read_text())["count"] == 2


def test_env_default_bits(capsys, monkeypatch):
    monkeypatch.setenv("GAPLAB_DEFAULT_BITS", "100")
    code, doc = run_json(capsys, "gaps", "--fn", "cosine", "--alpha", "1/4", "--N", "3")
    assert {v["bits"] for v in doc["values"]} == {100}


def test_function_file_errors(capsys, tmp_path):
    assert run(capsys, "gaps", "--fn", f"@{tmp_path / 'missing.json'}", "--alpha", "1/3", "--N", "3")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"period": {"rational": "1"}, "pieces": []}))
    assert run(capsys, "gaps", "--fn", f"@{bad}", "--alpha", "1/3", "--N", "3")[0] == 3
    builtin_doc = tmp_path / "cos.json"
    builtin_doc.write_text(json.dumps({"builtin": "cosine"}))
    assert run(capsys, "gaps", "--fn", f"@{builtin_doc}", "--alpha", "1/4", "--N", "3")[0] == 0


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "gaps", "--fn", "sawtooth", "--alpha", "1/4", "--N", "three")[0] == 2
    assert run(capsys, "gaps", "--fn", "square", "--alpha", "1/4", "--N", "3")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gaplab", "verify", "three_gap", "--alpha", "1/7", "--N", "7"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["observed"] == 1
