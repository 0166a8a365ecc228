import numpy as np
import pytest

import hazevid
from hazevid import Frame


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_frame(rng, h=32, w=32, index=0, lo=0, hi=256):
    return Frame(rng.integers(lo, hi, (h, w, 3), dtype=np.uint8), index)


def uniform_frame(value, h=32, w=32, index=0):
    if np.isscalar(value):
        value = (value, value, value)
    return Frame(np.broadcast_to(np.array(value, dtype=np.uint8), (h, w, 3)), index)


@pytest.fixture(params=hazevid.available_backends())
def backend(request):
    prev = hazevid.set_backend(request.param)
    yield request.param
    hazevid.set_backend(prev)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
