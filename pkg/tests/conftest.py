import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fdma_mimo.config import RadarConfig, SynthesisMode
from fdma_mimo.waveforms import CarrierMode, assign_carriers, random_array

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def make_config(T=4, R=4, N=12, P=6, seed=0, mode=SynthesisMode.SIMPLIFIED, aperture=None,
                carriers=CarrierMode.PERMUTATION, bandwidth=5e6) -> RadarConfig:
    """Random-array config used throughout the tests."""
    rng = np.random.default_rng(seed)
    Z = aperture if aperture is not None else T * R / 2
    tx, rx = random_array(T, R, Z, rng.integers(2**32))
    f = assign_carriers(T, bandwidth, carriers, rng.integers(2**32))
    return RadarConfig(T, R, P, N / bandwidth, bandwidth, 10e9, tuple(tx), tuple(rx), tuple(f), Z, mode)


@pytest.fixture
def small_config():
    return make_config()


CRITERIA: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    CRITERIA[number] = (bool(ok), detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
