import pytest

from wqolen import _kernel_py, kernel

try:
    from wqolen import _kernel as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

KERNELS = {"pure": _kernel_py}
if _compiled is not None:
    KERNELS["compiled"] = _compiled


@pytest.fixture(params=sorted(KERNELS))
def any_kernel(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    impl = KERNELS[request.param]
    for name in ("leq", "norm", "avoiding", "longest_bad"):
        monkeypatch.setattr(kernel, name, getattr(impl, name))
    return request.param


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
