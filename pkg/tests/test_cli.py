import io
import json
import subprocess
import sys

import pytest

from covercraft.cli import build_parser, run
from covercraft.hypercube import read_code
from covercraft.radius_norm import covering_radius

SUBCOMMANDS = ["verify", "sample-patch", "estimate-patch", "tau", "rare", "bound", "density",
               "search", "build-recursive"]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(map(str, argv)), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    return code, json.loads(out) if out.strip() else None, err


@pytest.fixture
def files(tmp_path):
    def make(name, *words):
        p = tmp_path / name
        p.write_text("\n".join(words) + "\n")
        return p
    return make


def test_verify_radius(files):
    code, rep, _ = call_json("verify", "--radius", "--file", files("c.txt", "000", "111"), "--symmetric")
    assert code == 0 and rep["radius"] == 1 and rep["schema"] == 1


def test_verify_radius_infinite_is_string(files):
    code, rep, _ = call_json("verify", "--radius", "--asymmetric", "--file", files("c.txt", "00"))
    assert code == 0 and rep["radius"] == "inf"


def test_verify_normal_pass_and_fail(files):
    assert call("verify", "--normal", "--file", files("ok.txt", "000", "111"))[0] == 0
    code, rep, _ = call_json("verify", "--normal", "--asymmetric", "--file", files("bad.txt", "00", "11"))
    assert code == 1 and rep["normal"] is False


def test_verify_normal_radius_mismatch(files):
    code, rep, _ = call_json("verify", "--normal", "--R", 2, "--file", files("c.txt", "000", "111"))
    assert code == 1 and "radius" in rep["error"]


def test_verify_norm_report(files):
    code, rep, _ = call_json("verify", "--norm", "--file", files("c.txt", "000", "111"), "--threshold", 3)
    assert code == 0 and rep["acceptable"] == [1, 2, 3]
    code, rep, _ = call_json("verify", "--norm", "--coordinate", 1, "--file", files("d.txt", "000"))
    assert rep["norm"] == "inf"


def test_verify_patched(files):
    S = files("S.txt", "000", "111")
    T = files("T.txt", "# length: 3")
    code, rep, _ = call_json("verify", "--patched", "--file", S, "--patch", T, "--target-norm", 2)
    assert code == 1 and rep["violation_count"] == 8 and rep["violations"][0] == "000"
    full = files("F.txt", *[format(i, "03b") for i in range(8)])
    assert call("verify", "--patched", "--file", S, "--patch", full, "--target-norm", 2)[0] == 0


def test_malformed_file_exit_2(files):
    code, out, err = call("verify", "--radius", "--file", files("bad.txt", "010", "01x"))
    assert code == 2 and "line 2" in err and out == ""


def test_duplicate_word_exit_2(files):
    code, _, err = call("verify", "--radius", "--file", files("dup.txt", "01", "10", "01"))
    assert code == 2 and "line 3: duplicate word 01" in err


def test_missing_file_exit_2(tmp_path):
    assert call("verify", "--radius", "--file", tmp_path / "nope.txt")[0] == 2


def test_usage_errors_exit_2():
    assert call("verify", "--radius", "--bogus")[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("verify", "--radius", "--symmetric", "--asymmetric", "--file", "x")[0] == 2
    assert call("verify", "--radius")[0] == 2


def test_n_limit_exit_2(files):
    words = [format(i, "05b") for i in range(32)]
    code, _, err = call("verify", "--radius", "--n-limit", 4, "--file", files("big.txt", *words))
    assert code == 2 and "limit" in err


@pytest.mark.parametrize("sub", SUBCOMMANDS)
def test_help_lists_flags(sub, capsys):
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args([sub, "--help"])
    assert info.value.code == 0
    text = capsys.readouterr().out
    assert "--format" in text and "--asymmetric" in text


@pytest.mark.parametrize("which", ["direct-sum", "ads", "asds"])
def test_construct_help(which, capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["construct", which, "--help"])
    assert "--unchecked" in capsys.readouterr().out


def test_bound():
    code, rep, _ = call_json("bound", "--R", 2, "--symmetric")
    assert code == 0
    assert rep["closed_form"] == pytest.approx(15.52935005801475)
    assert rep["e_x0_plus_1"] <= rep["closed_form"]
    code, rep, _ = call_json("bound", "--R-min", 2, "--R-max", 5, "--asymmetric")
    assert [row["R"] for row in rep["rows"]] == [2, 3, 4, 5]


def test_bound_table_format():
    code, out, _ = call("bound", "--R-min", 2, "--R-max", 3, "--format", "table")
    assert code == 0 and len(out.strip().splitlines()) == 3


def test_tau_and_rare():
    code, rep, _ = call_json("tau", "--n", 9, "--N", 3, "--x", 5)
    assert rep["tau"] == pytest.approx(14.34903954941)
    code, _, err = call("tau", "--asymmetric", "--n", 9, "--N", 3, "--x", 5)
    assert code == 2 and "--R is required" in err
    code, rep, _ = call_json("tau", "--asymmetric", "--n", 10, "--N", 3, "--R", 2, "--x", 4)
    assert rep["tau"] == pytest.approx(456.268035409076)
    code, rep, _ = call_json("rare", "--n", 20, "--R", 1)
    assert code == 0 and rep["count"] <= rep["chernoff_bound"]


def test_density(files):
    code, rep, _ = call_json("density", "--asymmetric", "--file", files("c.txt", "111", "110", "001"))
    assert code == 0 and rep["density"] == 0.75
    assert call("density", "--R", 2, "--file", files("d.txt", "000", "111"))[0] == 1


def test_construct_ads_with_certificate(files, tmp_path):
    A = files("A.txt", "000", "111")
    out, cert = tmp_path / "C.txt", tmp_path / "cert.json"
    code, rep, _ = call_json("construct", "ads", "--left", A, "--right", A, "--out", out,
                             "--certificate", cert)
    assert code == 0 and rep["hypotheses_verified"] and rep["result_norm"] <= rep["norm_bound"]
    assert read_code(out).strings() == ["00000", "11111"]
    assert json.loads(cert.read_text()) == rep


def test_construct_ads_hypothesis_failure(files):
    code, rep, _ = call_json("construct", "ads", "--left", files("A.txt", "00", "10"),
                             "--right", files("B.txt", "000", "111"))
    assert code == 1 and rep["hypotheses_verified"] is False and "left operand" in rep["error"]
    code, rep, _ = call_json("construct", "ads", "--unchecked", "--left", files("A2.txt", "00", "10"),
                             "--right", files("B2.txt", "000", "111"))
    assert code == 0


def test_construct_direct_sum(files, tmp_path):
    A = files("A.txt", "000", "111")
    code, rep, _ = call_json("construct", "direct-sum", "--left", A, "--right", A)
    assert code == 0 and rep["size"] == 4 and rep["result_radius"] == 2


def test_construct_asds(files):
    S = files("S.txt", *[format(i, "03b") for i in range(8)])
    T = files("T.txt", "# length: 3")
    K = files("K.txt", "000", "111")
    code, rep, _ = call_json("construct", "asds", "--S", S, "--T", T, "--K1", K, "--K2", K,
                             "--target-norm", 1)
    assert code == 0 and rep["result_norm"] <= rep["norm_bound"] == 3


def test_sample_patch(tmp_path):
    s, t = tmp_path / "S.txt", tmp_path / "T.txt"
    code, rep, _ = call_json("sample-patch", "--n", 6, "--N", 3, "--x", 4, "--seed", 42,
                             "--out-S", s, "--out-T", t)
    assert code == 0 and rep["S_size"] == 36 and rep["valid"]
    assert len(read_code(s)) == 36 and len(read_code(t)) == rep["T_size"]
    code, _, err = call("sample-patch", "--asymmetric", "--n", 8, "--N", 3, "--x", 3, "--R", 1)
    assert code == 2 and "half-cube" in err


def test_estimate_patch_thread_independent():
    base = ["estimate-patch", "--n", 8, "--N", 3, "--x", 4, "--trials", 20, "--seed", 3]
    a = call(*base)[1]
    b = call(*base, "--threads", 4)[1]
    assert a == b


def test_search(tmp_path):
    cache, out = tmp_path / "cache.json", tmp_path / "w.txt"
    code, rep, _ = call_json("search", "--n", 4, "--R", 1, "--normal", "--cache", cache, "--out", out)
    assert code == 0 and rep["optimum"] == 4 and rep["exhaustive"]
    assert covering_radius(read_code(out)) <= 1
    assert call_json("search", "--n", 4, "--R", 1, "--normal", "--cache", cache)[1] == rep


def test_build_recursive(tmp_path):
    out, cert = tmp_path / "C.txt", tmp_path / "cert.json"
    code, rep, _ = call_json("build-recursive", "--n", 10, "--R", 2, "--x", 4, "--seed", 1,
                             "--out", out, "--certificate", cert)
    assert code == 0 and rep["normal"] and rep["radius"] <= 2
    assert covering_radius(read_code(out)) <= 2


def test_byte_identical_output():
    argv = ["build-recursive", "--asymmetric", "--n", 10, "--R", 2, "--x", 4, "--seed", 5]
    assert call(*argv)[1] == call(*argv)[1]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "covercraft", "bound", "--R", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["R"] == 3
