import numpy as np
import pytest

import wavestrata as ws

RHO = np.sqrt(3.0)


@pytest.fixture(scope="session")
def params32():
    return ws.make_params(RHO, 32)


@pytest.fixture(scope="session")
def params8():
    return ws.make_params(RHO, 8)


@pytest.fixture(scope="session")
def profile6():
    return ws.EnergyProfile(6)


@pytest.fixture(scope="session")
def profile3():
    return ws.EnergyProfile(3)


@pytest.fixture(scope="session")
def deuflhard():
    return ws.get_filter("deuflhard")


@pytest.fixture(scope="session")
def mollified():
    return ws.get_filter("mollified_impulse")


def random_state(rng, M, real_field=True, scale=1.0):
    """Random spectral coefficient vector, conjugate-symmetric when real_field."""
    u = scale * (rng.normal(size=2 * M) + 1j * rng.normal(size=2 * M))
    if real_field:
        phys = ws.to_physical(u).real
        u = ws.from_physical(phys.astype(complex))
    return u


def convolve_direct(u, v):
    """O(M^2) double-sum oracle for the aliased convolution."""
    n = u.shape[0]
    M = n // 2
    out = np.zeros(n, dtype=complex)
    for jp in range(-M, M):
        acc = 0j
        for j1 in range(-M, M):
            j2 = (jp - j1 + M) % n - M
            acc += u[j1 + M] * v[j2 + M]
        out[jp + M] = acc
    return out
