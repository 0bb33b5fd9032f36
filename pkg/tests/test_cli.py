import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given

from hmf5 import serialize
from hmf5.cli import main
from hmf5.numberfield import parse_quad
from hmf5.qexp import delta_q
from hmf5.series import HilbertSeries
from hmf5.structure import klein_expected, phi2

from .conftest import cone_series


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _terms(doc):
    return {(t["a"], t["b"]): tuple(Fraction(c) for c in t["coeff"]) for t in doc["terms"]}


def test_expand_phi2(capsys):
    code, out, _ = run(capsys, "expand", "phi2", "--bound", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["weight"] == [2, 2] and doc["trace_bound"] == 2
    expected = {(0, 0): 1, (1, 1): 120, (-1, 1): 120, (0, 2): 720, (2, 2): 600, (-2, 2): 600, (4, 2): 120, (-4, 2): 120}
    assert _terms(doc) == {k: (Fraction(v), Fraction(0)) for k, v in expected.items()}
    assert [t["coeff"][0] for t in doc["terms"]][:2] == ["1/1", "120/1"]


def test_expand_chi5(capsys):
    code, out, _ = run(capsys, "expand", "chi5", "--bound", "1")
    assert code == 0
    assert _terms(json.loads(out)) == {(1, 1): (2, 0), (-1, 1): (-2, 0)}


def test_expand_elliptic(capsys):
    code, out, _ = run(capsys, "expand", "elliptic:Delta", "--bound", "3")
    assert code == 0
    doc = json.loads(out)
    assert [Fraction(c) for c in doc["coeffs"]] == [0, 1, -24, 252]
    assert serialize.parse_document(out) == delta_q(3)


def test_expand_csv(capsys):
    code, out, _ = run(capsys, "expand", "phi2", "--bound", "1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "a,b,x_num,x_den,y_num,y_den"
    assert lines[1:] == ["0,0,1,1,0,1", "1,1,120,1,0,1", "-1,1,120,1,0,1"]
    assert serialize.csv_to_series(out, (2, 2), 1) == phi2(1)


@pytest.mark.parametrize(
    "argv",
    [
        ("expand", "phi2", "--bound", "0"),
        ("expand", "phi2", "--bound", "25"),
        ("expand", "phi3"),
        ("expand", "elliptic:E8"),
        ("verify", "nonsense"),
        ("frobnicate",),
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_verify_ok(capsys):
    code, out, err = run(capsys, "verify", "deri2", "--bound", "1")
    assert code == 0
    assert "warning: bound raised to 6" in err
    assert "OK" in out and "FAIL" not in out


@pytest.mark.parametrize("rel", ["systeme_elliptic", "systeme2", "equadiff", "t_identity"])
def test_verify_relations(capsys, rel):
    code, out, _ = run(capsys, "verify", rel, "--bound", "8")
    assert code == 0, out


def test_verify_klein(capsys):
    code, out, err = run(capsys, "verify", "klein", "--bound", "8")
    assert code == 0
    assert "bound raised to 15" in err
    assert "klein_fit" in out


def test_verify_theta_cross_check_fails(capsys):
    # the theta-side square is 4x the weight-12 square; see the notes
    code, out, _ = run(capsys, "verify", "theta_cross_check", "--bound", "6")
    assert code == 1
    assert "FAIL" in out and "trace 2" in out


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "2i", "2i")
    assert code == 0
    doc = json.loads(out)
    assert [parse_quad(x) for x in doc["gamma"]] == [1, 0, 0, 1]
    assert doc["im_product"] == 4.0
    code, out, _ = run(capsys, "reduce", "0.3+0.2i", "-0.1+0.3i")
    assert code == 0
    assert json.loads(out)["im_product"] > 0.54146 - 1e-9


def test_reduce_errors(capsys):
    assert run(capsys, "reduce", "0.3-0.2i", "1i")[0] == 2
    assert run(capsys, "reduce", "abc", "1i")[0] == 2
    assert run(capsys, "reduce", "0.001+0.0001i", "0.3+0.0001i", "--max-iter", "1")[0] == 4


def _write(tmp_path, name, argv, capsys):
    path = tmp_path / name
    code = main(list(argv) + ["--out", str(path)])
    capsys.readouterr()
    assert code == 0
    return path


def test_decompose_klein(tmp_path, capsys):
    path = _write(tmp_path, "ct2.json", ["expand", "chi_tilde", "--power", "2", "--bound", "15"], capsys)
    code, out, _ = run(capsys, "decompose", str(path), "--basis", "symmetric_even")
    assert code == 0
    doc = json.loads(out)
    assert doc["generators"] == ["phi2", "chi5sq", "chi6"]
    got = {tuple(t["exponents"]): Fraction(t["coeff"][0]) for t in doc["terms"]}
    assert got == klein_expected()
    code, out, _ = run(capsys, "decompose", str(path))
    assert code == 0
    got = {tuple(t["exponents"]): Fraction(t["coeff"][0]) for t in json.loads(out)["terms"]}
    assert got == {(a, 2 * s, c, 0): v for (a, s, c), v in klein_expected().items()}


def test_decompose_phi2_cubed(tmp_path, capsys):
    path = _write(tmp_path, "p3.json", ["expand", "phi2", "--power", "3", "--bound", "6"], capsys)
    code, out, _ = run(capsys, "decompose", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["terms"] == [{"exponents": [3, 0, 0, 0], "coeff": ["1/1", "0/1"]}]


def test_decompose_elliptic(tmp_path, capsys):
    path = _write(tmp_path, "d.json", ["expand", "elliptic:Delta", "--bound", "6"], capsys)
    code, out, _ = run(capsys, "decompose", str(path), "--basis", "elliptic")
    assert code == 0
    terms = {tuple(t["exponents"]): Fraction(t["coeff"][0]) for t in json.loads(out)["terms"]}
    assert terms == {(3, 0): Fraction(1, 1728), (0, 2): Fraction(-1, 1728)}


def test_decompose_negative_control(tmp_path, capsys):
    bogus = HilbertSeries((4, 4), 6, {(0, 0): 1, (1, 1): 7, (-1, 1): 7, (0, 2): 3})
    path = tmp_path / "bogus.json"
    path.write_text(serialize.dumps(serialize.series_to_doc(bogus)))
    assert run(capsys, "decompose", str(path))[0] == 1
    odd = HilbertSeries((2, 4), 3, {(0, 0): 1})
    path.write_text(serialize.dumps(serialize.series_to_doc(odd)))
    assert run(capsys, "decompose", str(path))[0] == 1


def test_decompose_malformed(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"schema": 1, "weight": [2, 2], "trace_bound": 2, "terms": [{"a": 3, "b": 1, "coeff": ["1/1", "0/1"]}]}')
    assert run(capsys, "decompose", str(path))[0] == 2
    path.write_text("not json")
    assert run(capsys, "decompose", str(path))[0] == 2
    assert run(capsys, "decompose", str(tmp_path / "missing.json"))[0] == 2


def test_byte_determinism():
    cmd = [sys.executable, "-m", "hmf5", "expand", "chi6", "--bound", "5"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.endswith(b"\n")


def test_subprocess_exit_codes():
    base = [sys.executable, "-m", "hmf5"]
    assert subprocess.run(base + ["verify", "theta_cross_check"], capture_output=True).returncode == 1
    assert subprocess.run(base + ["reduce", "1-1i", "1i"], capture_output=True).returncode == 2


@given(cone_series(bound=3, weight=(4, 2)))
def test_serialize_roundtrip(f):
    text = serialize.dumps(serialize.series_to_doc(f))
    assert serialize.parse_document(text) == f
    assert serialize.dumps(serialize.series_to_doc(serialize.parse_document(text))) == text
    assert serialize.csv_to_series(serialize.series_to_csv(f), f.weight, f.bound) == f
