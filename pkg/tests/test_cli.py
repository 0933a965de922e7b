import csv
import io
import json
import subprocess
import sys


from selmer2 import cli
from selmer2.cusp import CuspReport


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_descent_json():
    code, out, _ = run("descent", "--f", "x^6+3", "--points", "(1,2);(-1,2)", "--r", "2")
    assert code == 0
    rec = json.loads(out)
    assert rec["schema_version"] == 1
    assert rec["norm_alpha"] == "16" and rec["norm_witness"] == "4"
    assert rec["class_vs_distinguished"] == "distinct"
    assert rec["verified"]["charpoly_is_f"] and rec["verified"]["ideal_verified"]


def test_orbits_and_local():
    code, out, _ = run("orbits", "--f", "x^6+3")
    assert code == 0 and json.loads(out)["charpoly_is_f"]
    code, out, _ = run("local", "--f", "x^6+3", "--places", "2,7,inf")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and lines[-1]["product_formula"]
    assert [x["a_nu"] for x in lines[:3]] == ["4", "1", "1/4"]


def test_cusp_verify_and_minimality():
    code, out, _ = run("cusp-verify", "--n", "2")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run("minimality", "--c", "162,3645,6561", "--rescale")
    rec = json.loads(out)
    assert code == 0 and rec["reduced"] == [2, 5, 1] and not rec["minimal"]


def test_ff_census_csv():
    code, out, _ = run("ff-census", "--n", "1", "--q", "3", "--f", "x^4+x+1", "--out", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0][0] == "q" and rows[1][2] == "576"


def test_enumerate_and_densities():
    code, out, _ = run("enumerate", "--n", "1", "--X", "20", "--out", "csv")
    assert code == 0 and out.startswith("# box_count=")
    code, out, _ = run("densities", "--n", "1", "--type-census", "--p", "3")
    assert code == 0 and json.loads(out)["agree"]
    code, out, _ = run("densities", "--n", "1", "--X", "40", "--properties", "distinguished2,real-roots")
    assert code == 0 and "distinguished2" in json.loads(out)["properties"]


def test_refusal_exit_code():
    code, _, err = run("enumerate", "--n", "2", "--X", "1000000000", "--budget", "100")
    assert code == 2 and json.loads(err)["certificate"]["box_count"] > 100
    code, _, err = run("local", "--f", "x^6+3", "--places", "3")
    assert code == 2 and json.loads(err)["error"] == "Refusal"
    code, _, _ = run("descent", "--f", "x^6+3", "--points", "(1,3)")
    assert code == 2


def test_usage_exit_code():
    assert run("nonsense")[0] == 64
    assert run("descent")[0] == 64
    assert run("cusp-verify")[0] == 64


def test_verification_failure_exit_code(monkeypatch):
    import selmer2.cusp as cusp

    bad = CuspReport(2, 1, False, 0, (), {}, [((1, 1),)])
    monkeypatch.setattr(cusp, "verify_cusp_lemma", lambda n, every_subset=False: bad)
    assert run("cusp-verify", "--n", "2")[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "selmer2", "cusp-verify", "--n", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["passed"]
