import pytest

from heckeconst import _pykernels, hecke

try:
    from heckeconst import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python")]
if _ckernels is not None:
    BACKENDS.append(pytest.param(_ckernels, id="cython"))


@pytest.fixture(params=BACKENDS, scope="module")
def backend(request):
    return request.param


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("HECKECONST_CACHE_DIR", str(d))
    hecke.clear_memo()
    yield d
    hecke.clear_memo()


RESULTS = {}


@pytest.fixture
def criterion():
    """Record one acceptance criterion's verdict for the terminal summary."""

    def record(name, ok, detail=""):
        RESULTS[name] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    seen = list(RESULTS)
    for name in sorted(seen, key=lambda s: (int(s.split()[0]), seen.index(s))):
        ok, detail = RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
