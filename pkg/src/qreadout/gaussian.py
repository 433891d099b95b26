"""Gaussian-state engine for one- and two-mode bosonic states.

Conventions used throughout the package:

* quadrature ordering ``(q1, p1, q2, p2, ...)``,
* vacuum covariance = identity, so a thermal state with ``nbar`` mean
  photons has covariance ``(2*nbar + 1) * I`` and a coherent state with
  amplitude ``alpha`` has mean ``(2*Re(alpha), 2*Im(alpha))``.

All states are immutable; channel application returns new states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-9
#: symplectic eigenvalues within this of 1 are treated as exactly pure
PURITY_CLAMP = 1e-12
#: the Chernoff exponent t is searched on [T_CLAMP, 1 - T_CLAMP]
T_CLAMP = 1e-4

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or hit an unphysical value."""


def symplectic_form(n_modes: int) -> np.ndarray:
    """The 2n x 2n symplectic form in (q1, p1, q2, p2, ...) ordering."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), j)


@dataclass(frozen=True)
class GaussianState:
    """An n-mode Gaussian state as mean vector plus covariance matrix."""

    n_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        d = 2 * self.n_modes
        if self.n_modes < 1:
            raise ValueError("n_modes must be a positive integer")
        if mean.shape != (d,):
            raise ValueError(f"mean must have shape ({d},), got {mean.shape}")
        if cov.shape != (d, d):
            raise ValueError(f"cov must have shape ({d}, {d}), got {cov.shape}")
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
            raise ValueError("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        nus = _symplectic_eigenvalues(cov)
        if np.min(nus) < 1.0 - PHYSICALITY_TOL:
            raise ValueError(
                f"unphysical covariance: min symplectic eigenvalue {np.min(nus):.3e} < 1"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        self.mean.setflags(write=False)
        self.cov.setflags(write=False)


@dataclass(frozen=True)
class BosonicChannel:
    """One-mode phase-insensitive Gaussian channel (amplitude scale, added noise).

    Acts on a mode as ``mean -> scale * mean`` and ``V -> scale^2 V + added_noise I``.
    """

    scale: float
    added_noise: float

    def __post_init__(self):
        if self.scale < 0.0:
            raise ValueError("scale must be non-negative")
        if self.added_noise < abs(1.0 - self.scale**2) - 1e-12:
            raise ValueError(
                "channel is not completely positive: "
                f"added_noise {self.added_noise} < |1 - scale^2| = {abs(1 - self.scale**2)}"
            )

    def compose(self, first: "BosonicChannel") -> "BosonicChannel":
        """The channel 'self after first'."""
        return BosonicChannel(
            scale=self.scale * first.scale,
            added_noise=self.scale**2 * first.added_noise + self.added_noise,
        )


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues of a state, one per mode, descending."""

    eigenvalues: tuple

    def is_pure(self, tol: float = PHYSICALITY_TOL) -> bool:
        return all(abs(nu - 1.0) < tol for nu in self.eigenvalues)


def vacuum_state(n_modes: int) -> GaussianState:
    return GaussianState(n_modes, np.zeros(2 * n_modes), np.eye(2 * n_modes))


def coherent_state(alpha: complex) -> GaussianState:
    """Single-mode coherent state with complex amplitude ``alpha``."""
    mean = np.array([2.0 * alpha.real, 2.0 * alpha.imag]) if isinstance(alpha, complex) \
        else np.array([2.0 * float(alpha), 0.0])
    return GaussianState(1, mean, np.eye(2))


def tmsv_state(n_s: float) -> GaussianState:
    """Two-mode squeezed vacuum with ``n_s`` mean photons per mode.

    Signal is mode 0, idler mode 1.  The state is pure with diagonal
    blocks ``(2 n_s + 1) I`` and off-diagonal blocks ``2 sqrt(n_s (n_s+1)) Z``.
    """
    if n_s < 0.0:
        raise ValueError("mean photon number n_s must be non-negative")
    mu = 2.0 * n_s + 1.0
    c = 2.0 * math.sqrt(n_s * (n_s + 1.0))
    z = np.diag([1.0, -1.0])
    cov = np.block([[mu * np.eye(2), c * z], [c * z, mu * np.eye(2)]])
    return GaussianState(2, np.zeros(4), cov)


def pure_loss(r: float) -> BosonicChannel:
    """Attenuator with transmissivity (reflectivity) ``r``."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("reflectivity must lie in [0, 1]")
    return BosonicChannel(scale=math.sqrt(r), added_noise=1.0 - r)


def thermal_loss(r: float, nbar: float) -> BosonicChannel:
    """Attenuator mixing with a thermal environment of ``nbar`` mean photons."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("reflectivity must lie in [0, 1]")
    if nbar < 0.0:
        raise ValueError("thermal photon number must be non-negative")
    return BosonicChannel(scale=math.sqrt(r), added_noise=(1.0 - r) * (2.0 * nbar + 1.0))


def add_noise(eps: float) -> BosonicChannel:
    """Additive isotropic Gaussian noise of variance ``eps`` (vacuum units)."""
    if eps < 0.0:
        raise ValueError("noise variance must be non-negative")
    return BosonicChannel(scale=1.0, added_noise=eps)


def apply_channel(state: GaussianState, mode: int, ch: BosonicChannel) -> GaussianState:
    """Apply a one-mode channel to the given mode of a state."""
    if not 0 <= mode < state.n_modes:
        raise ValueError(f"mode {mode} out of range for {state.n_modes}-mode state")
    d = 2 * state.n_modes
    scaler = np.ones(d)
    scaler[2 * mode : 2 * mode + 2] = ch.scale
    mean = state.mean * scaler
    cov = state.cov * np.outer(scaler, scaler)
    cov[2 * mode, 2 * mode] += ch.added_noise
    cov[2 * mode + 1, 2 * mode + 1] += ch.added_noise
    return GaussianState(state.n_modes, mean, cov)


def _symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Absolute eigenvalues of i Omega V, one per mode, descending."""
    n = cov.shape[0] // 2
    m = symplectic_form(n) @ cov
    nus = np.sort(np.abs(np.linalg.eigvals(m)))[::-1]
    return nus[::2].real


def symplectic_eigenvalues(state: GaussianState) -> SymplecticSpectrum:
    return SymplecticSpectrum(tuple(_symplectic_eigenvalues(state.cov)))


def _sym_sqrt(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    if np.min(w) < -1e-10:
        raise NumericalError("matrix is not positive semidefinite")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T

def williamson(cov: np.ndarray):
    """Williamson decomposition ``cov = S diag(nu_k I2) S^T`` with S symplectic.

    Returns ``(nus, S)`` where ``nus`` has one entry per mode in the block
    order produced by the decomposition (not sorted).
    """
    n = cov.shape[0] // 2
    vh = _sym_sqrt(cov)
    k = vh @ symplectic_form(n) @ vh
    k = 0.5 * (k - k.T)
    t, o = schur(k)
    nus = np.empty(n)
    for i in range(n):
        s = t[2 * i, 2 * i + 1]
        if s < 0.0:
            o[:, [2 * i, 2 * i + 1]] = o[:, [2 * i + 1, 2 * i]]
            s = -s
        nus[i] = s
    d_inv_half = np.repeat(1.0 / np.sqrt(nus), 2)
    s_mat = vh @ o * d_inv_half
    return nus, s_mat


def _log_overlap(mean_a, cov_a, mean_b, cov_b) -> float:
    n = cov_a.shape[0] // 2
    v = cov_a + cov_b
    sign, logdet = np.linalg.slogdet(v)
    if sign <= 0:
        raise NumericalError("singular covariance sum in overlap")
    delta = mean_a - mean_b
    quad = float(delta @ np.linalg.solve(v, delta))
    return n * math.log(2.0) - 0.5 * logdet - 0.5 * quad


def gaussian_overlap(a: GaussianState, b: GaussianState) -> float:
    """Tr(rho_a rho_b) for two Gaussian states."""
    if a.n_modes != b.n_modes:
        raise ValueError("states must have the same number of modes")
    return math.exp(_log_overlap(a.mean, a.cov, b.mean, b.cov))


def _clamp_nu(nu: float) -> float:
    if nu < 1.0 + PURITY_CLAMP:
        return 1.0
    return nu


def _log_lambda(nu: float, p: float) -> float:
    """log of the per-mode trace factor 2^p / ((nu+1)^p - (nu-1)^p)."""
    nu = _clamp_nu(nu)
    if nu == 1.0:
        return 0.0
    return p * math.log(2.0) - math.log((nu + 1.0) ** p - (nu - 1.0) ** p)


def _nu_power(nu: float, p: float) -> float:
    """Symplectic eigenvalue of the normalized fractional power rho^p."""
    nu = _clamp_nu(nu)
    if nu == 1.0:
        return 1.0
    a = (nu + 1.0) ** p
    b = (nu - 1.0) ** p
    return (a + b) / (a - b)


class _ChernoffPair:
    """Cached Williamson data for repeated evaluation of Tr(rho_a^t rho_b^(1-t))."""

    def __init__(self, a: GaussianState, b: GaussianState):
        if a.n_modes != b.n_modes:
            raise ValueError("states must have the same number of modes")
        self.mean_a, self.mean_b = a.mean, b.mean
        self.nus_a, self.s_a = williamson(a.cov)
        self.nus_b, self.s_b = williamson(b.cov)
        if np.min(self.nus_a) < 1.0 - PHYSICALITY_TOL or \
                np.min(self.nus_b) < 1.0 - PHYSICALITY_TOL:
            raise NumericalError("unphysical symplectic spectrum")

    def _transformed_cov(self, nus, s_mat, p):
        d = np.repeat([_nu_power(nu, p) for nu in nus], 2)
        cov = (s_mat * d) @ s_mat.T
        return 0.5 * (cov + cov.T)

    def log_q(self, t: float) -> float:
        if not 0.0 < t < 1.0:
            raise ValueError("t must lie in the open interval (0, 1)")
        log_l = sum(_log_lambda(nu, t) for nu in self.nus_a)
        log_l += sum(_log_lambda(nu, 1.0 - t) for nu in self.nus_b)
        cov_a = self._transformed_cov(self.nus_a, self.s_a, t)
        cov_b = self._transformed_cov(self.nus_b, self.s_b, 1.0 - t)
        return log_l + _log_overlap(self.mean_a, cov_a, self.mean_b, cov_b)


def qcb_overlap_t(a: GaussianState, b: GaussianState, t: float) -> float:
    """Tr(rho_a^t rho_b^(1-t)) for t in (0, 1)."""
    return math.exp(_ChernoffPair(a, b).log_q(t))


def minimize_unit_interval(f, n_grid: int = 21, tol: float = 1e-6):
    """Minimize f over [T_CLAMP, 1 - T_CLAMP]: coarse grid then golden section.

    Returns ``(t_min, f(t_min))``.  Shared by the Gaussian and Fock Chernoff
    minimizations so both use the identical protocol.
    """
    ts = np.linspace(T_CLAMP, 1.0 - T_CLAMP, n_grid)
    vals = [f(t) for t in ts]
    i = int(np.argmin(vals))
    best_t, best_v = float(ts[i]), vals[i]
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, n_grid - 1)]
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        if fc < best_v:
            best_t, best_v = c, fc
        if fd < best_v:
            best_t, best_v = d, fd
    t_star = 0.5 * (a + b)
    v_star = f(t_star)
    if v_star < best_v:
        best_t, best_v = t_star, v_star
    return best_t, best_v


def log_qcb(a: GaussianState, b: GaussianState):
    """(log Q_min, t_star) of the Chernoff quantity inf_t Tr(rho_a^t rho_b^(1-t))."""
    pair = _ChernoffPair(a, b)
    t_star, log_q = minimize_unit_interval(pair.log_q)
    return log_q, t_star


def qcb(a: GaussianState, b: GaussianState):
    """(Q_min, t_star) of the Chernoff quantity inf_t Tr(rho_a^t rho_b^(1-t))."""
    log_q, t_star = log_qcb(a, b)
    return math.exp(log_q), t_star


def gaussian_fidelity_1mode(a: GaussianState, b: GaussianState) -> float:
    """Squared Uhlmann fidelity of two single-mode Gaussian states.

    Closed form in vacuum-unit covariances:
    ``F = 2 exp(-delta^T (Va+Vb)^{-1} delta / 2) / (sqrt(D + L) - sqrt(L))``
    with ``D = det(Va+Vb)`` and ``L = (det Va - 1)(det Vb - 1)``.
    """
    if a.n_modes != 1 or b.n_modes != 1:
        raise ValueError("fidelity closed form requires single-mode states")
    v = a.cov + b.cov
    det_v = float(np.linalg.det(v))
    if det_v <= 0:
        raise NumericalError("singular covariance sum in fidelity")
    lam = (float(np.linalg.det(a.cov)) - 1.0) * (float(np.linalg.det(b.cov)) - 1.0)
    lam = max(lam, 0.0)
    delta = a.mean - b.mean
    quad = float(delta @ np.linalg.solve(v, delta))
    return 2.0 * math.exp(-0.5 * quad) / (math.sqrt(det_v + lam) - math.sqrt(lam))
