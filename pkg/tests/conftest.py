import numpy as np
import pytest

import kdvessel as kv


def make_zero_vessel(n=2):
    """Vessel with B identically zero: X stays at the identity.

    Wavenumbers chosen so the spectrum avoids the lambda = -i used in the
    intertwining tests.
    """
    k = 1.2 + 0.7 * np.arange(n)
    return kv.FiniteVessel(
        n=n,
        A=np.diag(-1j * k**2),
        B_eval=lambda x, t: np.zeros((n, 2), dtype=complex),
        X_eval=lambda x, t: np.eye(n, dtype=complex),
        X0=np.eye(n, dtype=complex),
        kind="soliton",
    )


@pytest.fixture(scope="session")
def zero_vessel():
    return make_zero_vessel()


@pytest.fixture(scope="session")
def one_soliton():
    """The k=1, b=sqrt(2) (c=1) workhorse."""
    spec = kv.SolitonSpec(k=np.array([1.0]), b=np.array([np.sqrt(2.0)], dtype=complex))
    return spec, kv.build_soliton(spec, self_check=False)


@pytest.fixture(scope="session")
def three_soliton():
    spec = kv.SolitonSpec.from_c([1.0, 2.0, 3.0], [1.0, 1.0, 1.0])
    return spec, kv.build_soliton(spec, self_check=False)


@pytest.fixture(scope="session")
def discrete_12():
    spec = kv.DiscreteSpectrum(k=np.array([1.0, 2.0]), b=np.array([1.0, 1.0], dtype=complex))
    return spec, kv.build_discrete_vessel(spec, self_check=False)


@pytest.fixture(scope="session")
def quadrature_gauss():
    spec = kv.gauss_legendre_spectrum(1.5, 32, lambda s: 0.8 * np.exp(-(s**2)))
    return spec, kv.build_quadrature_vessel(spec, self_check=False)
