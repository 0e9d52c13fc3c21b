import contextlib

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def record(name):
        detail = []
        try:
            yield detail
        except pytest.skip.Exception:
            _ACCEPTANCE.append(("N/A ", name, "; ".join(detail)))
            raise
        except BaseException:
            _ACCEPTANCE.append(("FAIL", name, "; ".join(detail)))
            raise
        _ACCEPTANCE.append(("PASS", name, "; ".join(detail)))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in sorted(_ACCEPTANCE, key=lambda r: int(r[1].split()[0])):
        terminalreporter.write_line(f"[{status}] {name}" + (f"  ({detail})" if detail else ""))
