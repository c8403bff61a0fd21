"""Vessels with oscillatory generators: truncated discrete spectra and
quadrature discretizations of the continuous spectrum.

Both families share one trigonometric structure.  With phases
theta_n = k_n x - k_n^3 t and couplings c_n (plain amplitudes b_n for the
discrete family, sqrt(w_i) b(i s_i^2) for the quadrature family):

    A = diag(+i k_n^2)
    B(x,t) row n = c_n * (sin(theta_n)/k_n,  +i cos(theta_n))
    X(x,t)       = I + [ Kker(k_n, k_m; x, t) c_n conj(c_m) ]

with the divided-difference kernel

    Kker(a, b) = [ sin(theta_a)/a * cos(theta_b)
                   - cos(theta_a) * sin(theta_b)/b ] / (a^2 - b^2).

The second column of B carries +i cos: the translation condition
0 = (B sigma1)' + A B sigma2 + B gamma holds only for this sign (with it,
all vessel conditions check out to machine precision).

The kernel is computed everywhere through the equivalent cancellation-free
form

    Kker(a, b) = [ sin(D m)/D - sin(theta_a + theta_b)/(a + b) ] / (2 a b),
    D = a - b,  m = x - (a^2 + a b + b^2) t,

whose D -> 0 limit reproduces the diagonal value
theta'/(2k^2) - sin(2 theta)/(4 k^3) with theta' = x - 3 k^2 t exactly, so
diagonal, near-degenerate and well-separated entries all come from one
formula.

Truncation caveat: the infinite-dimensional fixed-vector identity
X(x,0) v = v for v_n = c_n sin(k_n x)/k_n does NOT survive truncation.
X(x,0) - I is the Gram matrix int_0^x w(y) w(y)* dy of
w_n(y) = c_n sin(k_n y)/k_n, a positive-semidefinite perturbation that is
nonzero whenever x != 0, so X(x,0) v = v + (Gram) v != v; already the 1x1
case X = 1 + |c|^2 (x/(2k^2) - sin(2kx)/(4k^3)) refutes the identity.
:func:`fixed_vector_residual` measures the violation rather than assuming
it away.  The odd-profile sum :func:`beta_odd` likewise matches the vessel
beta only in the weak-coupling limit: beta_of_state = -beta_odd + O(|b|^4).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import core
from .exceptions import InvalidSpecError

__all__ = [
    "DiscreteSpectrum",
    "QuadratureSpectrum",
    "gauss_legendre_spectrum",
    "build_discrete_vessel",
    "build_quadrature_vessel",
    "fixed_vector_residual",
    "beta_odd",
    "q_odd_continuum",
]


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Truncated discrete spectrum k_n with complex amplitudes b_n.

    ``flavor`` is "periodic" (requires k_n = 2 pi N_n / period for integers
    N_n) or "almost_periodic".  ``tail_bound`` reports max |b_n|^2 |k_n|,
    the summability proxy of the truncated tail.
    """

    k: np.ndarray
    b: np.ndarray
    flavor: str = "almost_periodic"
    period: Optional[float] = None

    def __post_init__(self):
        k = np.atleast_1d(np.asarray(self.k, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=complex))
        if k.shape != b.shape or k.ndim != 1:
            raise InvalidSpecError("k and b must be 1-D sequences of equal length")
        if np.any(k == 0):
            raise InvalidSpecError("wavenumbers must be nonzero")
        k2 = k**2
        if k.size > 1:
            gaps = np.abs(k2[:, None] - k2[None, :]) + np.diag(np.full(k.size, np.inf))
            if gaps.min() <= 1e-12 * k2.max():
                raise InvalidSpecError(
                    "squared wavenumbers must be pairwise distinct (kernel denominator)"
                )
        if self.flavor == "periodic":
            if self.period is None or self.period <= 0:
                raise InvalidSpecError("periodic flavor requires a positive period")
            ratios = k * self.period / (2.0 * np.pi)
            if np.any(np.abs(ratios - np.round(ratios)) > 1e-12 * np.maximum(1.0, np.abs(ratios))):
                raise InvalidSpecError(
                    "periodic flavor requires k_n = 2 pi N_n / period with integer N_n"
                )
        elif self.flavor != "almost_periodic":
            raise InvalidSpecError("flavor must be 'periodic' or 'almost_periodic'")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "b", b)
        self.k.setflags(write=False)
        self.b.setflags(write=False)

    @property
    def n(self) -> int:
        return self.k.size

    @property
    def tail_bound(self) -> float:
        return float(np.max(np.abs(self.b) ** 2 * np.abs(self.k)))


@dataclass(frozen=True)
class QuadratureSpectrum:
    """Quadrature rule on the continuous spectrum s in (0, s_max].

    ``density`` maps the node value s to the complex spectral density
    b(i s^2).  Nodes must be strictly increasing and positive, weights
    positive.
    """

    nodes: np.ndarray
    weights: np.ndarray
    density: Callable[[np.ndarray], np.ndarray] = field(compare=False)

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.nodes, dtype=float))
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if s.shape != w.shape or s.ndim != 1:
            raise InvalidSpecError("nodes and weights must be 1-D of equal length")
        if np.any(s <= 0) or np.any(np.diff(s) <= 0):
            raise InvalidSpecError("nodes must be positive and strictly increasing")
        if np.any(w <= 0):
            raise InvalidSpecError("weights must be positive")
        object.__setattr__(self, "nodes", s)
        object.__setattr__(self, "weights", w)
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return self.nodes.size

    def couplings(self) -> np.ndarray:
        """sqrt(w_i) b(i s_i^2): the L2 inner product folded into B."""
        return np.sqrt(self.weights) * np.asarray(
            self.density(self.nodes), dtype=complex
        )


def gauss_legendre_spectrum(
    s_max: float, n_nodes: int, density: Callable[[np.ndarray], np.ndarray]
) -> QuadratureSpectrum:
    """Gauss-Legendre rule on [0, s_max]."""
    if s_max <= 0 or n_nodes < 1:
        raise InvalidSpecError("s_max must be positive and n_nodes >= 1")
    xi, w = np.polynomial.legendre.leggauss(n_nodes)
    half = 0.5 * s_max
    return QuadratureSpectrum(nodes=half * (xi + 1.0), weights=half * w, density=density)


def trig_kernel(k: np.ndarray, x, t) -> np.ndarray:
    """Divided-difference kernel matrix Kker(k_n, k_m; x, t).

    Cancellation-free: the D -> 0 limit is exact (np.sinc), so the same
    expression serves diagonal, near-degenerate and separated pairs.
    """
    a = k[:, None]
    b = k[None, :]
    m = x - (a * a + a * b + b * b) * t
    d = a - b
    diff_term = m * np.sinc(d * m / np.pi)  # sin(d m)/d, exact at d = 0
    theta_a = a * x - a**3 * t
    theta_b = b * x - b**3 * t
    sum_term = np.sin(theta_a + theta_b) / (a + b)
    return (diff_term - sum_term) / (2.0 * a * b)


def _build_trig_vessel(
    k: np.ndarray, c: np.ndarray, kind: str, metadata: dict,
    self_check: bool, check_seed: int,
) -> core.FiniteVessel:
    n = k.size
    A = np.diag(1j * k**2)
    C = np.outer(c, c.conj())

    def B_eval(x, t):
        th = k * x - k**3 * t
        # +i cos: forced by the translation condition (see module docstring)
        return np.column_stack([c * np.sin(th) / k, 1j * c * np.cos(th)])

    def X_eval(x, t):
        return np.eye(n, dtype=complex) + trig_kernel(k, x, t) * C

    vessel = core.FiniteVessel(
        n=n, A=A, B_eval=B_eval, X_eval=X_eval,
        X0=np.eye(n, dtype=complex), kind=kind, metadata=metadata,
    )
    if self_check:
        rng = np.random.default_rng(check_seed)
        for _ in range(50):
            xs = rng.uniform(-2.0, 2.0)
            ts = rng.uniform(-0.5, 0.5)
            res = core.lyapunov_residual(vessel, xs, ts)
            if res > 1e-12:
                raise InvalidSpecError(
                    f"{kind} self-check failed: Lyapunov residual {res:.3e} at ({xs}, {ts})"
                )
    return vessel


def build_discrete_vessel(
    spec: DiscreteSpectrum, self_check: bool = True, check_seed: int = 0
) -> core.FiniteVessel:
    """Trigonometric vessel on the truncated discrete spectrum; X0 = I."""
    return _build_trig_vessel(
        spec.k, spec.b, "discrete",
        {"spec": spec, "generators": spec.k, "couplings": spec.b,
         "tail_bound": spec.tail_bound},
        self_check, check_seed,
    )


def build_quadrature_vessel(
    spec: QuadratureSpectrum, self_check: bool = True, check_seed: int = 0
) -> core.FiniteVessel:
    """Nystrom discretization of the continuous-spectrum vessel; X0 = I.

    Folding sqrt(weights) into B is a diagonal congruence, so X stays
    Hermitian and the vessel identities hold node-wise exactly.
    """
    c = spec.couplings()
    return _build_trig_vessel(
        spec.nodes, c, "quadrature",
        {"spec": spec, "generators": spec.nodes, "couplings": c},
        self_check, check_seed,
    )


def fixed_vector_residual(vessel: core.FiniteVessel, x: float) -> float:
    """|| X(x,0) v - v || / ||v|| for the odd seed v_n = c_n sin(k_n x)/k_n.

    v is exactly the first column of B(x, 0) (quadrature weights already
    folded in).  Returns 0 for v = 0 by convention.  The idealized
    infinite-dimensional identity X v = v fails for every truncation (see
    module docstring); this measures the violation.
    """
    if vessel.kind not in ("discrete", "quadrature"):
        raise InvalidSpecError("fixed_vector_residual applies to discrete/quadrature vessels")
    v = vessel.B(x, 0.0)[:, 0]
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    X = vessel.X(x, 0.0)
    return float(np.linalg.norm(X @ v - v) / nv)


def beta_odd(spec: DiscreteSpectrum, x):
    """Odd-profile partial sum sum_n |b_n|^2 sin^2(k_n x) / k_n^2 at t = 0.

    This is the truncated mode-sum profile; the vessel's own beta satisfies
    beta_of_state(x, 0) = -beta_odd(x) + O(|b|^4) (weak coupling), not the
    idealized equality.  Broadcasts over x.
    """
    x = np.asarray(x, dtype=float)
    k = spec.k.reshape(spec.k.shape + (1,) * x.ndim)
    w = (np.abs(spec.b) ** 2).reshape(spec.b.shape + (1,) * x.ndim)
    out = np.sum(w * np.sin(k * x) ** 2 / k**2, axis=0)
    return out if out.ndim else float(out)


def q_odd_continuum(spec: QuadratureSpectrum, x):
    """Quadrature value of q(x) = 2 int |b(i s^2)|^2 sin(2 s x)/s ds at t = 0.

    Term-wise this is 2 d/dx of the continuum analogue of beta_odd, since
    d/dx sin^2(s x)/s^2 = sin(2 s x)/s.  Broadcasts over x.
    """
    x = np.asarray(x, dtype=float)
    dens = np.abs(np.asarray(spec.density(spec.nodes), dtype=complex)) ** 2
    s = spec.nodes.reshape(spec.nodes.shape + (1,) * x.ndim)
    wgt = (spec.weights * dens).reshape(spec.nodes.shape + (1,) * x.ndim)
    out = 2.0 * np.sum(wgt * np.sin(2.0 * s * x) / s, axis=0)
    return out if out.ndim else float(out)
