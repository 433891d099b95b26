"""Sub-optimal readout receiver: continuous-variable Bell measurement
followed by a chi-square decision test.

Each of the M signal/idler pairs is mixed on a balanced beam splitter and
both output quadratures are homodyned.  Under either bit value the two
Bell quadratures ``q- = (q_R - q_I)/sqrt(2)`` and ``p+ = (p_R + p_I)/sqrt(2)``
are zero-mean Gaussian with a common variance, smaller for the better
reflectivity.  Pooling all 2M squared outcomes normalized by the bit-1
variance gives a statistic that is chi-square with 2M degrees of freedom
under bit 1; the test accepts bit 1 below the (1 - phi) quantile, so its
type-I error is exactly the significance level phi and the type-II error
has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammainc

from .bounds import MemorySpec, binary_entropy, classical_bound_for
from .gaussian import NumericalError, add_noise, apply_channel, thermal_loss, tmsv_state

MIN_TRIALS = 10**4
_MC_CHUNK = 4096


@dataclass(frozen=True)
class ReceiverConfig:
    """Test configuration: copies, significance level, Monte Carlo settings."""

    M: int
    phi: float
    trials: int = 10**5
    seed: int = 0

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("number of copies M must be >= 1")
        if not 0.0 < self.phi < 1.0:
            raise ValueError("significance level phi must lie in (0, 1)")


@dataclass(frozen=True)
class EprVariancePair:
    """Bell-quadrature variances under the two bit hypotheses."""

    v0: float
    v1: float

    def __post_init__(self):
        if self.v0 <= 0.0 or self.v1 <= 0.0:
            raise ValueError("variances must be positive")


def epr_variance(r: float, n_s: float, nbar: float = 0.0, eps: float = 0.0) -> float:
    """Variance of the Bell quadratures after the full decoherent pipeline."""
    state = tmsv_state(n_s)
    if eps > 0.0:
        state = apply_channel(state, 0, add_noise(eps))
    state = apply_channel(state, 0, thermal_loss(r, nbar))
    if eps > 0.0:
        state = apply_channel(state, 0, add_noise(eps))
        state = apply_channel(state, 1, add_noise(2.0 * eps))
    a = state.cov[0, 0]
    b = state.cov[2, 2]
    c = state.cov[0, 2]
    return 0.5 * (a + b - 2.0 * c)


def variance_pair(memory: MemorySpec, n_s: float) -> EprVariancePair:
    return EprVariancePair(
        v0=epr_variance(memory.r0, n_s, memory.nbar, memory.eps),
        v1=epr_variance(memory.r1, n_s, memory.nbar, memory.eps),
    )


def chi2_cdf(x: float, k: int) -> float:
    """Chi-square CDF with k degrees of freedom."""
    if k < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if x < 0.0:
        raise ValueError("chi-square statistic must be non-negative")
    return float(gammainc(0.5 * k, 0.5 * x))


def chi2_quantile(p: float, k: int) -> float:
    """Inverse chi-square CDF by monotone root finding, |cdf - p| <= 1e-10."""
    if not 0.0 < p < 1.0:
        raise ValueError("probability must lie in (0, 1)")
    hi = max(4.0 * k, 16.0)
    for _ in range(200):
        if chi2_cdf(hi, k) > p:
            break
        hi *= 2.0
    else:
        raise NumericalError("chi-square quantile bracket did not close")
    return float(brentq(lambda x: chi2_cdf(x, k) - p, 0.0, hi, xtol=1e-10))


def bell_error_prob(M: int, phi: float, v0: float, v1: float) -> float:
    """Equal-prior error probability of the chi-square test on M copies.

    The statistic is the sum of the 2M squared Bell outcomes divided by the
    smaller variance v1; bit 1 is accepted at or below the (1 - phi)
    quantile of chi2_{2M}.
    """
    if M < 1:
        raise ValueError("number of copies M must be >= 1")
    if not 0.0 < phi < 1.0:
        raise ValueError("significance level phi must lie in (0, 1)")
    if v0 < v1:
        v0, v1 = v1, v0
    x_phi = chi2_quantile(1.0 - phi, 2 * M)
    type2 = chi2_cdf(x_phi * v1 / v0, 2 * M)
    return 0.5 * (phi + type2)


@dataclass(frozen=True)
class McResult:
    p_err: float
    std_err: float
    low_trials: bool


def mc_error_prob(M: int, phi: float, v0: float, v1: float,
                  trials: int, seed: int) -> McResult:
    """Monte Carlo estimate of the same test, with binomial standard error.

    Deterministic for a fixed seed; trials below MIN_TRIALS are flagged.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if v0 < v1:
        v0, v1 = v1, v0
    x_phi = chi2_quantile(1.0 - phi, 2 * M)
    rng = np.random.default_rng(seed)
    err_counts = [0, 0]
    for hyp, v in ((0, v0), (1, v1)):
        done = 0
        while done < trials:
            n = min(_MC_CHUNK, trials - done)
            samples = rng.normal(0.0, math.sqrt(v), size=(n, 2 * M))
            stat = np.sum(samples**2, axis=1) / v1
            decide_one = stat <= x_phi
            wrong = decide_one if hyp == 0 else ~decide_one
            err_counts[hyp] += int(np.count_nonzero(wrong))
            done += n
    p0 = err_counts[0] / trials
    p1 = err_counts[1] / trials
    p_err = 0.5 * (p0 + p1)
    var = 0.25 * (p0 * (1.0 - p0) + p1 * (1.0 - p1)) / trials
    return McResult(p_err, math.sqrt(var), trials < MIN_TRIALS)


@dataclass(frozen=True)
class BellSurfacePoint:
    M: int
    phi: float
    p_err: float
    G: float


@dataclass(frozen=True)
class BellOptimum:
    G_best: float
    M_best: int
    phi_best: float
    p_err_best: float
    C: float
    surface: tuple


def default_m_grid(N: float) -> list[int]:
    """Copy counts from 1 to ~10 N, log-spaced (n_s = N/M >= 0.1)."""
    top = max(int(10 * N), 4)
    grid = sorted({int(round(top ** (i / 23))) for i in range(24)})
    return [m for m in grid if m >= 1]


def default_phi_grid() -> list[float]:
    return list(np.geomspace(1e-4, 0.5, 25))


def optimize_bell_gain(memory: MemorySpec, N: float,
                       m_grid=None, phi_grid=None) -> BellOptimum:
    """Maximize the receiver's information gain over copy count and level.

    The classical reference C follows the memory's bandwidth policy, same
    as the bound reports.
    """
    if m_grid is None:
        m_grid = default_m_grid(N)
    if phi_grid is None:
        phi_grid = default_phi_grid()
    if not m_grid or not phi_grid:
        raise ValueError("optimization grids must be non-empty")
    c = classical_bound_for(memory, N)
    h_c = binary_entropy(c)
    surface = []
    best = None
    for m in m_grid:
        pair = variance_pair(memory, N / m)
        for phi in phi_grid:
            p_err = bell_error_prob(m, phi, pair.v0, pair.v1)
            g = h_c - binary_entropy(min(p_err, 0.5))
            point = BellSurfacePoint(m, phi, p_err, g)
            surface.append(point)
            if best is None or g > best.G:
                best = point
    return BellOptimum(
        G_best=best.G, M_best=best.M, phi_best=best.phi,
        p_err_best=best.p_err, C=c, surface=tuple(surface),
    )
