import numpy as np
import pytest

from qchain.ensembles import EnsembleSpec, sample
from qchain.spectra import hamiltonian_spectrum

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}
_CONFIG: list[pytest.Config] = []


def pytest_configure(config):
    _CONFIG.append(config)


class SpectraCache:
    """Session-wide spectra keyed by (family, n, seed), extended on demand."""

    def __init__(self):
        self._store: dict[tuple, list[np.ndarray]] = {}

    def get(self, family: str, n: int, samples: int, seed: int = 0) -> list[np.ndarray]:
        key = (family, n, seed)
        have = self._store.setdefault(key, [])
        spec = EnsembleSpec(family, n, seed)
        for k in range(len(have), samples):
            have.append(hamiltonian_spectrum(sample(spec, k)).values)
        return have[:samples]


@pytest.fixture(scope="session")
def spectra_cache():
    return SpectraCache()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    """Log one acceptance line immediately and keep it for the final summary."""
    _ACCEPTANCE[number] = (passed, detail)
    line = f"[acceptance {number:2d}] {'PASS' if passed else 'FAIL'}  {detail}"
    # the terminal reporter writes to the real terminal even while output is captured
    reporter = _CONFIG[-1].pluginmanager.get_plugin("terminalreporter") if _CONFIG else None
    if reporter is None:
        print(line)
        return
    reporter.ensure_newline()
    reporter.write_line(line)


@pytest.fixture
def acceptance():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"{k:2d} {'PASS' if ok else 'FAIL'}  {detail}")
    passed = sum(ok for ok, _ in _ACCEPTANCE.values())
    terminalreporter.write_line(f"{passed}/{len(_ACCEPTANCE)} criteria passed")
