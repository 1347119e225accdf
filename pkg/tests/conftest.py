import numpy as np
import pytest

from sigverify.ingest import RawSignature


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def make_signature(x, y, t=None, p=None, pen_down=None, id="s", **meta):
    x = np.asarray(x, float)
    if t is None:
        t = np.arange(len(x)) * 10.0
    return RawSignature(id, x, np.asarray(y, float), np.asarray(t, float), p=p, pen_down=pen_down, **meta)


@pytest.fixture
def wavy_signature():
    u = np.linspace(0, 1, 120)
    return make_signature(
        np.sin(2 * np.pi * u) * 300 + 40 * u,
        np.cos(3 * np.pi * u) * 200,
        t=u * 1190.0,
        p=400 + 300 * np.sin(np.pi * u),
    )


_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL/SKIP line for an acceptance criterion."""
    def record(key: str, ok, detail: str):
        # ok=None marks a skipped criterion
        status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        _ACCEPTANCE[key] = f"{key} {status}: {detail}"
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split("#")[1])):
            terminalreporter.write_line(_ACCEPTANCE[key])
