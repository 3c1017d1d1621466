import sys

import numpy as np
import pytest

from dfgate import encodings
from dfgate.encodings import EncodingKind


@pytest.fixture(scope="session")
def layout4():
    return encodings.default_layout(EncodingKind.FOUR)


@pytest.fixture(scope="session")
def layout3():
    return encodings.default_layout(EncodingKind.THREE)


def random_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (z + z.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in module.REPORT:
            terminalreporter.write_line(line)
