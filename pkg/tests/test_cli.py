import io
import json
import os
import subprocess
import sys

import pytest

from wqolen.cli import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main


def run(*args):
    out = io.StringIO()
    rc = main(list(args), out=out)
    return rc, out.getvalue()


def run_json(*args):
    rc, text = run("--json", *args)
    return rc, json.loads(text)


def test_json_schema():
    rc, rec = run_json("otype", "G2^* * G3 + N")
    assert rc == EXIT_OK
    assert set(rec) == {"op", "input", "result", "budget", "config"}
    assert rec["op"] == "otype"
    assert rec["result"]["otype"] == "w^w*3 + w"
    assert rec["budget"] == {"max_nodes": 10**7, "max_steps": 10**5, "max_bits": 4096}
    assert rec["config"]["omega"] == "x+1"


def test_global_flags_after_subcommand():
    rc, rec = run("len", "N", "--n", "3", "--json", "--g", "2*x")
    rec = json.loads(rec)
    assert rc == EXIT_OK and rec["config"]["g"] == "2*x"


def test_len_witness_roundtrips_into_check():
    rc, rec = run_json("len", "G2^*", "--n", "2", "--witness")
    assert rc == EXIT_OK and rec["result"]["length"] == 4
    seq = ", ".join(rec["result"]["witness"])
    rc, rec = run_json("len", "G2^*", "--n", "2", "--check", seq)
    assert rc == EXIT_OK
    assert rec["result"]["check"] == {
        "sequence": rec["result"]["check"]["sequence"],
        "bad": True,
        "controlled": True,
        "within_maximum": True,
    }


def test_len_forbid_and_no_memo():
    # residual G2 + N at n=2: a2, 3, 2, 1, 0, a3
    rc, rec = run_json("len", "G3 + N", "--n", "2", "--forbid", "inl(a1)")
    assert rc == EXIT_OK and rec["result"]["length"] == 6
    memo = run_json("len", "N * G2", "--n", "2")[1]["result"]["length"]
    assert run_json("len", "N * G2", "--n", "2", "--no-memo")[1]["result"]["length"] == memo


def test_derivative_commands():
    assert run_json("deriv", "w^2", "--n", "3")[1]["result"]["derivatives"] == ["w*4"]
    assert run_json("mbound", "w^2", "--n", "3")[1]["result"]["M"] == 61
    rc, rec = run_json("cnf", "1 + w + w^2*2", "--canonical")
    assert rec["result"]["cnf"] == "w^2*2" and rec["result"]["is_cnf"] is False
    assert rec["result"]["canonical_nwqo"] == "G1^* * G1^* + G1^* * G1^*"


def test_hierarchy_commands():
    assert run_json("hier", "fast", "--alpha", "3", "--x", "2", "--omega", "x")[1]["result"]["value"] == 2048
    assert run_json("hier", "fast", "--alpha", "2", "--x", "2", "--omega", "x")[1]["result"]["value"] == 8
    assert run_json("hier", "hardy", "--alpha", "w", "--x", "3")[1]["result"]["value"] == 7
    rc, rec = run_json("hbound", "w*2", "--n", "2")
    assert rc == EXIT_OK and rec["result"]["k"] == 2 and rec["result"]["numeric"] >= 6


def test_classify():
    rc, rec = run_json("classify", "--beta", "2", "--g", "x^2")
    assert rec["result"]["branch"] == 2 and rec["result"]["class"] == "F_{4}"
    rc, rec = run_json("classify", "--expr", "G3^*")
    assert rec["result"]["class"] == "F_{w^2}"
    assert run("classify", "--beta", "2", "--g", "2^x")[0] == EXIT_USAGE


def test_lcs_examples():
    rc, rec = run_json("lcs", "--q", "3", "--m", "2", "--c", "1")
    assert rec["result"]["otype"] == "w^w*3" and rec["result"]["class_index"] == "w"
    rc, rec = run_json("lcs", "--q", "2", "--m", "3", "--c", "2")
    assert rec["result"]["otype"] == "w^(w^2*2)*2"
    rc, rec = run_json("lcs", "--q", "1", "--m", "1", "--c", "1", "--n", "2")
    res = rec["result"]
    assert res["otype"] == "w" and res["class_index"] == "1"
    assert res["theorem"]["branch"] == 2 and "lifted" in res["note"]
    assert res["numeric"] == {"n": 2, "L": 2, "M": 2}


def test_pep():
    rc, rec = run_json("pep", "--p", "2", "--n", "1")
    assert rec["result"]["class_index"] == "w"
    assert rec["result"]["L"] == 0  # nothing has norm < 0
    rc, rec = run_json("pep", "--p", "1", "--n", "1", "--size", "3")
    assert rec["result"]["L"] == 3 and rec["result"]["H"] == 6
    rc, rec = run_json("pep", "--p", "5", "--n", "3", "--unbounded")
    assert rec["result"]["class_index"] == "w^w"


@pytest.mark.parametrize(
    "args",
    [
        ("otype", "Seg3"),
        ("otype", "G2 +"),
        ("mbound", "w + w^2", "--n", "1"),
        ("len", "G3 + N", "--n", "2", "--forbid", "a1"),
        ("deriv", "w", "--n", "0"),
        ("lcs", "--q", "0", "--m", "1", "--c", "1"),
        ("len", "N", "--n", "2", "--g", "x +"),
        ("nosuchcommand",),
    ],
)
def test_usage_errors(args):
    assert run(*args)[0] == EXIT_USAGE


def test_budget_exit_code():
    rc, text = run("--json", "--budget-nodes", "1000", "len", "G2^*", "--n", "9")
    assert rc == EXIT_BUDGET
    assert json.loads(text)["result"]["exceeded"] == "nodes"


def test_check_violation_exit_code():
    # with the true maximum a bad controlled sequence never exceeds it
    rc, rec = run_json("len", "G2", "--n", "1", "--check", "a1, a2")
    assert rc == EXIT_OK and rec["result"]["check"]["bad"] is True


def test_verify_command():
    rc, rec = run_json("verify", "derivatives")
    assert rc == EXIT_OK and rec["result"]["fail"] == 0 and rec["result"]["pass"] > 2000
    assert all(c["status"] in ("pass", "skip") for c in rec["result"]["checks"])


def test_deterministic_output():
    assert run("--json", "verify", "ordinals", "--seed", "3") == run("--json", "verify", "ordinals", "--seed", "3")


def test_module_entry_point():
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "wqolen", "cnf", "w + w^2"], capture_output=True, text=True, env=env
    )
    assert proc.returncode == 0 and "cnf: w^2" in proc.stdout


def test_check_violation_exit_code_when_maximum_is_wrong(monkeypatch):
    import wqolen.cli as cli

    monkeypatch.setattr(cli, "max_bad_length", lambda *a, **k: (1, ()))
    rc, rec = run_json("len", "G2", "--n", "1", "--check", "a1, a2")
    assert rc == EXIT_VIOLATION and rec["result"]["check"]["within_maximum"] is False


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET) == (0, 1, 2, 3)
