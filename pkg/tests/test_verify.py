import os
import subprocess
import sys
from collections import Counter

import pytest

from wqolen import kernel
from wqolen.verify import SUITES, run_suite


@pytest.mark.parametrize("suite", ["ordinals", "derivatives", "reflection"])
def test_fast_suites_have_no_failures(suite):
    checks = run_suite(suite, seed=2)
    counts = Counter(c.status for c in checks)
    assert counts["fail"] == 0, [c.as_dict() for c in checks if c.status == "fail"][:3]
    assert counts["pass"] > 0


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
    assert {"ordinals", "descent", "reflection", "derivatives", "hierarchies", "bridge"} <= set(SUITES)


def _kernel_flag(env_value):
    env = dict(os.environ)
    env.pop("WQOLEN_PURE_PYTHON", None)
    if env_value is not None:
        env["WQOLEN_PURE_PYTHON"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "from wqolen import kernel; print(kernel.COMPILED)"],
        capture_output=True, text=True, env=env, check=True,
    )
    return out.stdout.strip()


def test_env_var_forces_pure_python():
    assert _kernel_flag("1") == "False"


@pytest.mark.skipif(not kernel.COMPILED, reason="extension not built")
def test_compiled_kernel_is_default():
    assert _kernel_flag(None) == "True"


def test_pure_fallback_lengths_match():
    env = dict(os.environ, WQOLEN_PURE_PYTHON="1")
    code = (
        "from wqolen.nwqo import parse_nwqo, max_bad_length\n"
        "from wqolen.control import SUCC\n"
        "print(max_bad_length(parse_nwqo('G2^*'), SUCC, 3)[0], max_bad_length(parse_nwqo('N * N'), SUCC, 2)[0])"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert out.stdout.split() == ["27", "8"]
