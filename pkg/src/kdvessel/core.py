"""Finite-dimensional operator vessels for the KdV equation.

A vessel is a collection (A, B(x,t), X(x,t); sigma1, sigma2, gamma) acting
between C^n and C^2.  The constant 2x2 parameter matrices fix the
Sturm-Liouville flavour of the construction; the operators are subject to
coupled algebraic and differential conditions:

    translation:   0 = d/dx (B sigma1) + A B sigma2 + B gamma
                   d/dx X = B sigma2 B*
    evolution:     d/dt B = i A d/dx B
                   d/dt X = i A B sigma2 B* - i B sigma2 B* A* + i B gamma B*
    Lyapunov:      A X + X A* + B sigma1 B* = 0
    linkage:       gamma_* = gamma + sigma2 B* X^-1 B sigma1
                                   - sigma1 B* X^-1 B sigma2
    normalization: tr(sigma1 B* X^-1 B) = 0

Everything a vessel produces -- the tau function det(X0^-1 X(x,t)), the
integrated potential beta = -(B* X^-1 B)_{11} and the KdV field q = 2 beta'
-- is derived from these operators.  This module holds the parameter
matrices, the vessel data model, state evaluation, and residual checks for
every condition above, plus the generic "integrate B then accumulate X"
construction from admissible initial data.

Sign convention: the Lyapunov condition is used in the homogeneous form
A X + X A* + B sigma1 B* = 0, which is the form the closed-form
constructions satisfy identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .exceptions import (
    ClassificationError,
    EvaluationError,
    InvalidSpecError,
    NumericalConsistencyError,
)

__all__ = [
    "SLParameters",
    "sl_parameters",
    "FiniteVessel",
    "EvaluatedState",
    "ResidualReport",
    "evaluate",
    "linkage_gamma_star",
    "beta_of_state",
    "tau",
    "log_tau",
    "lyapunov_residual",
    "normalization_residual",
    "evolution_residuals",
    "inertia",
    "inertia_label",
    "integrate_standard_construction",
]

# The three constant parameter matrices.  Bit-exact by construction; treat
# as read-only.
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA2 = np.array([[1.0, 0.0], [0.0, 0.0]])
GAMMA = np.array([[0.0, 0.0], [0.0, 1j]])
for _m in (SIGMA1, SIGMA2, GAMMA):
    _m.setflags(write=False)


@dataclass(frozen=True)
class SLParameters:
    """The constant 2x2 parameter matrices of the Sturm-Liouville class."""

    sigma1: np.ndarray
    sigma2: np.ndarray
    gamma: np.ndarray


def sl_parameters() -> SLParameters:
    """Return the Sturm-Liouville parameter matrices (shared, read-only)."""
    return SLParameters(SIGMA1, SIGMA2, GAMMA)


def _fro(m) -> float:
    return float(np.linalg.norm(m))


@dataclass(frozen=True)
class FiniteVessel:
    """A finite-dimensional vessel realization.

    ``B_eval(x, t)`` returns the n x 2 coupling, ``X_eval(x, t)`` the n x n
    Hermitian Gram operator.  ``X0`` is the reference operator for the tau
    function.  ``kind`` tags the construction family
    (soliton | discrete | quadrature | tabulated).

    Instances are immutable and safe to share between threads; the
    evaluators must be pure functions of (x, t).
    """

    n: int
    A: np.ndarray
    B_eval: Callable[[float, float], np.ndarray]
    X_eval: Callable[[float, float], np.ndarray]
    X0: np.ndarray
    kind: str
    # construction metadata: generator wavenumbers / folded couplings /
    # grids for tabulated vessels
    metadata: Optional[dict] = field(default=None, compare=False)
    spectrum: np.ndarray = field(init=False, compare=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        if A.shape != (self.n, self.n):
            raise InvalidSpecError(f"A must be {self.n}x{self.n}, got {A.shape}")
        X0 = np.asarray(self.X0, dtype=complex)
        if _fro(X0 - X0.conj().T) > 1e-12 * (1.0 + _fro(X0)):
            raise InvalidSpecError("X0 must be Hermitian")
        if abs(np.linalg.det(X0)) == 0.0:
            raise InvalidSpecError("X0 must be invertible")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "X0", X0)
        object.__setattr__(self, "spectrum", np.linalg.eigvals(A))

    def B(self, x: float, t: float) -> np.ndarray:
        B = np.asarray(self.B_eval(x, t), dtype=complex)
        if not np.all(np.isfinite(B)):
            raise EvaluationError("coupling B overflowed; use log-domain routines", x=x, t=t)
        return B

    def X(self, x: float, t: float) -> np.ndarray:
        X = np.asarray(self.X_eval(x, t), dtype=complex)
        if not np.all(np.isfinite(X)):
            raise EvaluationError("Gram operator X overflowed; use log-domain routines", x=x, t=t)
        return X


@dataclass(frozen=True)
class EvaluatedState:
    """B, X, X^-1 and the derived scalars at a fixed (x, t), cached for reuse."""

    x: float
    t: float
    B: np.ndarray
    X: np.ndarray
    Xinv: np.ndarray
    gamma_star: np.ndarray
    beta: float
    tau: float

    @property
    def beta_prime(self) -> float:
        """d beta/dx recovered from the linkage: gamma_*[0,0] = -i(beta' - beta^2)."""
        val = self.beta**2 + 1j * self.gamma_star[0, 0]
        if abs(val.imag) > 1e-9 * (1.0 + abs(val.real)):
            raise NumericalConsistencyError(
                f"beta' has imaginary residue {val.imag:.3e}"
            )
        return float(val.real)


@dataclass(frozen=True)
class ResidualReport:
    """Frobenius norms of the vessel-condition residuals at one (x, t)."""

    r_DB: float
    r_DX: float
    r_DBt: float
    r_DXt: float
    r_lyapunov: float
    r_normalization: float
    h: float

    def as_dict(self) -> dict:
        return {
            "r_DB": self.r_DB,
            "r_DX": self.r_DX,
            "r_DBt": self.r_DBt,
            "r_DXt": self.r_DXt,
            "r_lyapunov": self.r_lyapunov,
            "r_normalization": self.r_normalization,
            "h": self.h,
        }

    def max_differential(self) -> float:
        return max(self.r_DB, self.r_DX, self.r_DBt, self.r_DXt)


def linkage_gamma_star(B: np.ndarray, Xinv: np.ndarray) -> np.ndarray:
    """Output parameter matrix gamma_* from the linkage condition.

    Returns gamma + sigma2 M sigma1 - sigma1 M sigma2 with M = B* X^-1 B.
    The result has the shape [[-i(beta'-beta^2), -beta], [beta, i]] for the
    real scalars beta, beta' encoded by the vessel.
    """
    M = B.conj().T @ Xinv @ B
    return GAMMA + SIGMA2 @ M @ SIGMA1 - SIGMA1 @ M @ SIGMA2


def beta_of_state(B: np.ndarray, Xinv: np.ndarray, imag_tol: float = 1e-10) -> float:
    """Integrated potential beta = -(B* X^-1 B)_{11} = -tau'/tau."""
    val = -(B[:, 0].conj() @ Xinv @ B[:, 0])
    if abs(val.imag) > imag_tol * (1.0 + abs(val.real)):
        raise NumericalConsistencyError(
            f"beta has imaginary residue {val.imag:.3e} above tolerance {imag_tol:.1e}"
        )
    return float(val.real)


def evaluate(
    vessel: FiniteVessel,
    x: float,
    t: float,
    hermit_tol: float = 1e-12,
    inverse_tol: float = 1e-10,
    imag_tol: float = 1e-10,
) -> EvaluatedState:
    """Evaluate a vessel at (x, t) and derive gamma_*, beta and tau.

    X is symmetrized to (X + X*)/2 before inversion; the discarded
    asymmetry must stay below ``hermit_tol`` relative to 1 + ||X||.
    Raises EvaluationError if X is singular (or too ill-conditioned for
    ``Xinv X = I`` to hold within ``inverse_tol``).
    """
    B = vessel.B(x, t)
    X = vessel.X(x, t)
    scale = 1.0 + _fro(X)
    asym = _fro(X - X.conj().T)
    if asym > hermit_tol * scale:
        raise NumericalConsistencyError(
            f"X asymmetry {asym:.3e} exceeds {hermit_tol:.1e}*(1+||X||) at ({x}, {t})"
        )
    X = 0.5 * (X + X.conj().T)
    try:
        Xinv = np.linalg.inv(X)
    except np.linalg.LinAlgError as exc:
        raise EvaluationError(f"singular Gram operator: {exc}", x=x, t=t) from exc
    defect = _fro(Xinv @ X - np.eye(vessel.n))
    if defect > inverse_tol * np.sqrt(vessel.n):
        raise EvaluationError(
            f"Gram operator too ill-conditioned (inverse defect {defect:.3e})", x=x, t=t
        )
    gs = linkage_gamma_star(B, Xinv)
    beta = beta_of_state(B, Xinv, imag_tol=imag_tol)
    tau_c = np.linalg.det(np.linalg.solve(vessel.X0, X))
    if abs(tau_c.imag) > imag_tol * max(1.0, abs(tau_c.real)):
        raise NumericalConsistencyError(
            f"tau has relative imaginary residue {tau_c.imag:.3e} at ({x}, {t})"
        )
    return EvaluatedState(
        x=x, t=t, B=B, X=X, Xinv=Xinv, gamma_star=gs, beta=beta, tau=float(tau_c.real)
    )


def tau(vessel: FiniteVessel, x: float, t: float, imag_tol: float = 1e-10) -> float:
    """Tau function det(X0^-1 X(x, t)).

    Raises EvaluationError when the entries of X (or the determinant)
    overflow; use :func:`log_tau` (or the scaled soliton routines) there.
    """
    X = vessel.X(x, t)
    val = np.linalg.det(np.linalg.solve(vessel.X0, X))
    if not np.isfinite(val):
        raise EvaluationError(
            "tau overflowed; use log_tau / the log-domain route", x=x, t=t
        )
    if abs(val.imag) > imag_tol * max(1.0, abs(val.real)):
        raise NumericalConsistencyError(
            f"tau has relative imaginary residue {val.imag:.3e} at ({x}, {t})"
        )
    return float(val.real)


def log_tau(vessel: FiniteVessel, x: float, t: float) -> tuple[float, float]:
    """(log|tau|, sign) via a sign-tracked LU determinant of X0^-1 X.

    Works whenever the entries of X are representable; soliton vessels in
    the deep-overflow regime provide their own scaled variant.
    """
    X = vessel.X(x, t)
    sign, logabs = np.linalg.slogdet(np.linalg.solve(vessel.X0, X))
    return float(logabs), float(np.real(sign))


def lyapunov_residual(vessel: FiniteVessel, x: float, t: float) -> float:
    """|| A X + X A* + B sigma1 B* ||_F / (1 + ||X||_F)."""
    B = vessel.B(x, t)
    X = vessel.X(x, t)
    res = vessel.A @ X + X @ vessel.A.conj().T + B @ SIGMA1 @ B.conj().T
    return _fro(res) / (1.0 + _fro(X))


def normalization_residual(vessel: FiniteVessel, x: float, t: float) -> float:
    """|tr(sigma1 B* X^-1 B)|; vanishes whenever tr(A + A*) = 0.

    Computed through a direct solve so ill-conditioned (but nonsingular)
    states remain checkable.
    """
    B = vessel.B(x, t)
    X = vessel.X(x, t)
    X = 0.5 * (X + X.conj().T)
    try:
        M = B.conj().T @ np.linalg.solve(X, B)
    except np.linalg.LinAlgError as exc:
        raise EvaluationError(f"singular Gram operator: {exc}", x=x, t=t) from exc
    return abs(np.trace(SIGMA1 @ M))


def evolution_residuals(
    vessel: FiniteVessel, x: float, t: float, h: float = 1e-3
) -> ResidualReport:
    """Centered-difference residuals of all four differential vessel conditions.

    Uses the 5-point stencil (x +- h, t), (x, t +- h), (x, t).  The x
    derivative inside the t-evolution of B is taken with the same step.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    A = vessel.A
    B = vessel.B(x, t)
    Bxp, Bxm = vessel.B(x + h, t), vessel.B(x - h, t)
    Btp, Btm = vessel.B(x, t + h), vessel.B(x, t - h)
    Xxp, Xxm = vessel.X(x + h, t), vessel.X(x - h, t)
    Xtp, Xtm = vessel.X(x, t + h), vessel.X(x, t - h)

    dBx = (Bxp - Bxm) / (2.0 * h)
    dXx = (Xxp - Xxm) / (2.0 * h)
    dBt = (Btp - Btm) / (2.0 * h)
    dXt = (Xtp - Xtm) / (2.0 * h)

    BH = B.conj().T
    r_db = _fro(dBx @ SIGMA1 + A @ B @ SIGMA2 + B @ GAMMA)
    r_dx = _fro(dXx - B @ SIGMA2 @ BH)
    r_dbt = _fro(dBt - 1j * A @ dBx)
    rhs_t = (
        1j * A @ B @ SIGMA2 @ BH
        - 1j * B @ SIGMA2 @ BH @ A.conj().T
        + 1j * B @ GAMMA @ BH
    )
    r_dxt = _fro(dXt - rhs_t)
    return ResidualReport(
        r_DB=r_db,
        r_DX=r_dx,
        r_DBt=r_dbt,
        r_DXt=r_dxt,
        r_lyapunov=lyapunov_residual(vessel, x, t),
        r_normalization=normalization_residual(vessel, x, t),
        h=h,
    )


def inertia(X: np.ndarray, hermit_tol: float = 1e-10, zero_tol: float = 1e-12):
    """(positive_count, negative_count) of a Hermitian operator's eigenvalues.

    Eigenvalues with |lambda| < zero_tol * ||X|| are rejected: a
    (near-)singular operator has no robust inertia classification.
    """
    X = np.asarray(X, dtype=complex)
    if _fro(X - X.conj().T) > hermit_tol * (1.0 + _fro(X)):
        raise NumericalConsistencyError("inertia requires a Hermitian operator")
    eigs = np.linalg.eigvalsh(0.5 * (X + X.conj().T))
    scale = max(np.max(np.abs(eigs)), np.finfo(float).tiny)
    if np.any(np.abs(eigs) < zero_tol * scale):
        raise ClassificationError(
            f"near-zero eigenvalue below {zero_tol:.1e}*||X||; inertia undefined"
        )
    return int(np.sum(eigs > 0)), int(np.sum(eigs < 0))


def inertia_label(X: np.ndarray) -> str:
    """'dissipative' for positive-definite X, else 'pontryagin(kappa)'."""
    _, nneg = inertia(X)
    return "dissipative" if nneg == 0 else f"pontryagin({nneg})"


def _translation_rhs(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # d/dx B = -(A B sigma2 + B gamma) sigma1, using sigma1^-1 = sigma1
    return -(A @ B @ SIGMA2 + B @ GAMMA) @ SIGMA1


def integrate_standard_construction(
    A: np.ndarray,
    B0: np.ndarray,
    X0: np.ndarray,
    x0: float,
    grid: np.ndarray,
    t0: float = 0.0,
    lyapunov_tol: float = 1e-8,
) -> FiniteVessel:
    """Build a tabulated vessel from admissible initial data.

    Solves the translation condition for B with a classical fixed-step
    4th-order one-step integrator, accumulating X(x) = X0 + int B sigma2 B*
    along the way, outward from x0 over the given grid.  The initial data
    must satisfy the Lyapunov condition A X0 + X0 A* + B0 sigma1 B0* = 0
    within 1e-10; the residual is then monitored across the whole grid and
    must stay below ``lyapunov_tol``.

    The returned vessel evaluates only at grid points (x matched to
    1e-9 relative tolerance) and at the fixed time slice t0.
    """
    A = np.asarray(A, dtype=complex)
    B0 = np.asarray(B0, dtype=complex)
    X0 = np.asarray(X0, dtype=complex)
    n = A.shape[0]
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise InvalidSpecError("grid must be a strictly increasing 1-D array")
    i0 = int(np.argmin(np.abs(grid - x0)))
    if abs(grid[i0] - x0) > 1e-12 * max(1.0, abs(x0)):
        raise InvalidSpecError("grid must contain the base point x0")
    pre = _fro(A @ X0 + X0 @ A.conj().T + B0 @ SIGMA1 @ B0.conj().T)
    if pre > 1e-10 * (1.0 + _fro(X0)):
        raise InvalidSpecError(
            f"initial data violates the Lyapunov condition (residual {pre:.3e})"
        )

    def rk4_step(B, X, h):
        def f(Bc):
            return _translation_rhs(A, Bc), Bc @ SIGMA2 @ Bc.conj().T

        kB1, kX1 = f(B)
        kB2, kX2 = f(B + 0.5 * h * kB1)
        kB3, kX3 = f(B + 0.5 * h * kB2)
        kB4, kX4 = f(B + h * kB3)
        Bn = B + (h / 6.0) * (kB1 + 2 * kB2 + 2 * kB3 + kB4)
        Xn = X + (h / 6.0) * (kX1 + 2 * kX2 + 2 * kX3 + kX4)
        return Bn, Xn

    Bs = np.empty((grid.size, n, 2), dtype=complex)
    Xs = np.empty((grid.size, n, n), dtype=complex)
    Bs[i0], Xs[i0] = B0, X0
    for i in range(i0 + 1, grid.size):
        Bs[i], Xs[i] = rk4_step(Bs[i - 1], Xs[i - 1], grid[i] - grid[i - 1])
    for i in range(i0 - 1, -1, -1):
        Bs[i], Xs[i] = rk4_step(Bs[i + 1], Xs[i + 1], grid[i] - grid[i + 1])

    for i, xg in enumerate(grid):
        res = _fro(A @ Xs[i] + Xs[i] @ A.conj().T + Bs[i] @ SIGMA1 @ Bs[i].conj().T)
        if not np.isfinite(res) or res > lyapunov_tol * (1.0 + _fro(Xs[i])):
            raise EvaluationError(
                f"Lyapunov residual {res:.3e} above {lyapunov_tol:.1e} during construction",
                x=float(xg),
                t=t0,
            )

    def lookup(x, t):
        if abs(t - t0) > 1e-12 * max(1.0, abs(t0)):
            raise EvaluationError("tabulated vessel is a fixed-time slice", x=x, t=t)
        i = int(np.argmin(np.abs(grid - x)))
        if abs(grid[i] - x) > 1e-9 * max(1.0, abs(x)):
            raise EvaluationError("x is not a tabulation grid point", x=x, t=t)
        return i

    return FiniteVessel(
        n=n,
        A=A,
        B_eval=lambda x, t: Bs[lookup(x, t)],
        X_eval=lambda x, t: Xs[lookup(x, t)],
        X0=X0,
        kind="tabulated",
        metadata={"x_grid": grid, "t0": t0, "B_table": Bs, "X_table": Xs},
    )
