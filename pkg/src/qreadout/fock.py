"""Truncated Fock-space brute force used to cross-check the Gaussian formulas.

Everything here is real-valued: two-mode squeezed vacuum kets and pure-loss
Kraus operators have real matrix elements in the number basis, so symmetric
eigensolvers suffice.  The module is deliberately restricted to one- and
two-mode states and pure loss; it exists to validate the closed-form
Gaussian results at small photon numbers, not to be fast or general.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .gaussian import NumericalError, minimize_unit_interval

#: per-mode truncation is never allowed past this photon number
N_MAX_CAP = 200
#: discarded probability weight above which results are rejected
TRUNC_LOSS_MAX = 1e-10
#: target truncation quality when auto-growing n_max
TRUNC_LOSS_TARGET = 1e-12


@dataclass(frozen=True)
class FockDensity:
    """Real symmetric density matrix on a truncated 1- or 2-mode Fock space."""

    n_max: int
    n_modes: int
    matrix: np.ndarray
    trunc_loss: float

    def __post_init__(self):
        if self.n_modes not in (1, 2):
            raise ValueError("only 1- and 2-mode Fock densities are supported")
        d = (self.n_max + 1) ** self.n_modes
        if self.matrix.shape != (d, d):
            raise ValueError(f"matrix must have shape ({d}, {d})")
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def trace(self) -> float:
        return float(np.trace(self.matrix))


def _auto_n_max(ratio: float) -> int:
    """Smallest n_max with ratio**(n_max+1) below the truncation target."""
    if ratio <= 0.0:
        return 1
    n = math.ceil(math.log(TRUNC_LOSS_TARGET) / math.log(ratio)) - 1
    return min(max(n, 1), N_MAX_CAP)


def tmsv_fock(n_s: float, n_max: int | None = None) -> FockDensity:
    """Two-mode squeezed vacuum as a truncated rank-1 density matrix.

    Ket coefficients are ``tanh(xi)^n / cosh(xi)`` on ``|n, n>`` with
    ``n_s = sinh(xi)^2``.  The ket is not renormalized; the discarded weight
    is recorded as ``trunc_loss``.
    """
    if n_s < 0.0:
        raise ValueError("mean photon number n_s must be non-negative")
    lam = n_s / (1.0 + n_s)  # tanh(xi)^2
    if n_max is None:
        n_max = _auto_n_max(lam)
    if n_max > N_MAX_CAP:
        raise ValueError(f"n_max {n_max} exceeds the dimension cap {N_MAX_CAP}")
    d = n_max + 1
    coeffs = np.sqrt(1.0 - lam) * np.sqrt(lam) ** np.arange(d)
    ket = np.zeros(d * d)
    ket[np.arange(d) * d + np.arange(d)] = coeffs
    trunc_loss = float(1.0 - np.sum(coeffs**2))
    return FockDensity(n_max, 2, np.outer(ket, ket), trunc_loss)


def coherent_fock(alpha: float, n_max: int | None = None) -> FockDensity:
    """Single-mode coherent state with real amplitude ``alpha``, truncated."""
    mean = alpha * alpha
    if n_max is None:
        # Poisson tail; crude but safe bound grown from the mean
        n_max = 20
        while n_max < N_MAX_CAP and _poisson_tail(mean, n_max) > TRUNC_LOSS_TARGET:
            n_max = min(2 * n_max, N_MAX_CAP)
    d = n_max + 1
    n = np.arange(d)
    if alpha == 0.0:
        ket = np.zeros(d)
        ket[0] = 1.0
    else:
        log_c = -0.5 * mean + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0)
        ket = np.sign(alpha) ** n * np.exp(log_c)
    trunc_loss = float(1.0 - np.sum(ket**2))
    return FockDensity(n_max, 1, np.outer(ket, ket), trunc_loss)


def _poisson_tail(mean: float, n_max: int) -> float:
    n = np.arange(n_max + 1)
    log_p = -mean + n * (math.log(mean) if mean > 0 else 0.0) - gammaln(n + 1.0)
    return float(1.0 - np.sum(np.exp(log_p)))


def _loss_kraus(n_max: int, r: float) -> np.ndarray:
    """Stack of pure-loss Kraus operators E_k, shape (n_max+1, d, d)."""
    d = n_max + 1
    kraus = np.zeros((d, d, d))
    for k in range(d):
        for n in range(k, d):
            log_binom = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
            # 0**0 == 1 covers the r = 0 and r = 1 endpoints
            amp = math.exp(0.5 * log_binom) * r ** ((n - k) / 2.0) * (1.0 - r) ** (k / 2.0)
            kraus[k, n - k, n] = amp
    return kraus


def apply_pure_loss_fock(rho: FockDensity, mode: int, r: float) -> FockDensity:
    """Attenuator with transmissivity ``r`` applied to one mode via Kraus sum."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("reflectivity must lie in [0, 1]")
    if not 0 <= mode < rho.n_modes:
        raise ValueError("mode index out of range")
    d = rho.dim
    kraus = _loss_kraus(rho.n_max, r)
    if rho.n_modes == 1:
        out = np.einsum("kab,be,kde->ad", kraus, rho.matrix, kraus, optimize=True)
    else:
        rho4 = rho.matrix.reshape(d, d, d, d)
        if mode == 0:
            out4 = np.einsum("kab,bcef,kde->acdf", kraus, rho4, kraus, optimize=True)
        else:
            out4 = np.einsum("kab,cbfe,kde->cafd", kraus, rho4, kraus, optimize=True)
        out = out4.reshape(d * d, d * d)
    out = 0.5 * (out + out.T)
    return FockDensity(rho.n_max, rho.n_modes, out, rho.trunc_loss)


def mean_photons(rho: FockDensity, mode: int) -> float:
    """Mean photon number of one mode (diagnostic for the loss channel)."""
    d = rho.dim
    diag = np.real(np.diag(rho.matrix))
    if rho.n_modes == 1:
        return float(np.sum(diag * np.arange(d)))
    occ = diag.reshape(d, d)
    n = np.arange(d)
    return float(np.sum(occ * (n[:, None] if mode == 0 else n[None, :])))


def _checked_eigh(mat: np.ndarray):
    w, v = np.linalg.eigh(0.5 * (mat + mat.T))
    if np.min(w) < -1e-10:
        raise NumericalError(f"matrix has negative eigenvalue {np.min(w):.3e}")
    w = np.where(w < 1e-14, 0.0, w)
    return w, v


def frac_power(mat: np.ndarray, p: float) -> np.ndarray:
    """Fractional matrix power of a symmetric PSD matrix, eigenvalues clamped."""
    if not 0.0 < p < 1.0:
        raise ValueError("power must lie in (0, 1)")
    w, v = _checked_eigh(np.asarray(mat, dtype=float))
    return (v * w**p) @ v.T


def _check_truncation(*rhos: FockDensity):
    for rho in rhos:
        if rho.trunc_loss >= TRUNC_LOSS_MAX:
            raise NumericalError(
                f"truncation too coarse: trunc_loss {rho.trunc_loss:.3e}"
            )


class ChernoffPairFock:
    """Cached eigendecompositions for repeated Tr(rho0^t rho1^(1-t))."""

    def __init__(self, rho0: FockDensity, rho1: FockDensity):
        if rho0.matrix.shape != rho1.matrix.shape:
            raise ValueError("density matrices must have matching dimensions")
        _check_truncation(rho0, rho1)
        self.w0, v0 = _checked_eigh(rho0.matrix)
        self.w1, v1 = _checked_eigh(rho1.matrix)
        self.cross = (v0.T @ v1) ** 2

    def q_t(self, t: float) -> float:
        if not 0.0 < t < 1.0:
            raise ValueError("t must lie in the open interval (0, 1)")
        return float(self.w0**t @ self.cross @ self.w1 ** (1.0 - t))


def chernoff_overlap_fock(rho0: FockDensity, rho1: FockDensity, t: float) -> float:
    """Tr(rho0^t rho1^(1-t)) by brute force."""
    return ChernoffPairFock(rho0, rho1).q_t(t)


def qcb_fock(rho0: FockDensity, rho1: FockDensity):
    """(Q_min, t_star) by brute force, same grid-plus-refine protocol as the
    Gaussian engine."""
    pair = ChernoffPairFock(rho0, rho1)
    t_star, q_min = minimize_unit_interval(pair.q_t)
    return q_min, t_star


def fidelity_fock(rho0: FockDensity, rho1: FockDensity) -> float:
    """Squared Uhlmann fidelity (Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)))^2."""
    if rho0.matrix.shape != rho1.matrix.shape:
        raise ValueError("density matrices must have matching dimensions")
    _check_truncation(rho0, rho1)
    w0, v0 = _checked_eigh(rho0.matrix)
    sqrt0 = (v0 * np.sqrt(w0)) @ v0.T
    inner = sqrt0 @ rho1.matrix @ sqrt0
    w = np.linalg.eigvalsh(0.5 * (inner + inner.T))
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
