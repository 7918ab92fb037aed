import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twistlab import CSeq  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def gaussian_cseq(rng, dim, support=None):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    if support is not None:
        mask = np.zeros(dim, bool)
        mask[rng.choice(dim, size=support, replace=False)] = True
        v[~mask] = 0
    return CSeq.from_dense(v, dim)


def unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))
