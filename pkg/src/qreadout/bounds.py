"""Readout bounds for a binary-reflectivity memory cell.

Classical lower bound on the discrimination error, quantum Chernoff upper
bound for the entangled (two-mode squeezed) transmitter, the threshold
energy above which the quantum side provably wins, information gain per
cell, minimum-bandwidth search, and the Shannon error-correction overhead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .gaussian import (
    GaussianState,
    NumericalError,
    add_noise,
    apply_channel,
    coherent_state,
    gaussian_fidelity_1mode,
    log_qcb,
    thermal_loss,
    tmsv_state,
)

#: default cap for the minimum-bandwidth search
M_SEARCH_CAP = 10**6
#: default doubling budget for the infinite-bandwidth limit
MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class MemorySpec:
    """Cell model: two reflectivities plus background/internal noise.

    ``m_star`` caps the bandwidth available to classical transmitters when
    noise is present (None = unbounded).  Reflectivities are normalized to
    r0 <= r1; ``swapped`` records whether the inputs were exchanged.
    """

    r0: float
    r1: float
    nbar: float = 0.0
    eps: float = 0.0
    m_star: int | None = None
    swapped: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name in ("r0", "r1"):
            r = getattr(self, name)
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.nbar < 0.0 or self.eps < 0.0:
            raise ValueError("noise parameters must be non-negative")
        if self.m_star is not None and self.m_star < 1:
            raise ValueError("classical bandwidth cap m_star must be >= 1")
        if self.r0 > self.r1:
            lo, hi = self.r1, self.r0
            object.__setattr__(self, "r0", lo)
            object.__setattr__(self, "r1", hi)
            object.__setattr__(self, "swapped", True)

    @property
    def noisy(self) -> bool:
        return self.nbar > 0.0 or self.eps > 0.0


@dataclass(frozen=True)
class TransmitterSpec:
    """Entangled transmitter: M signal/idler pairs carrying N photons total."""

    M: int
    N: float

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("bandwidth M must be a positive integer")
        if self.N <= 0.0:
            raise ValueError("signal energy N must be positive")

    @property
    def n_s(self) -> float:
        return self.N / self.M


@dataclass(frozen=True)
class BoundReport:
    """Bounds at one parameter point.

    ``conclusive`` means the quantum upper bound beats the classical lower
    bound (Q < C), which certifies a quantum advantage; Q >= C proves
    nothing either way.  ``G`` is emitted raw and may be negative.
    """

    r0: float
    r1: float
    N: float
    M: int | None  # None = infinite-bandwidth limit
    C: float
    Q: float
    G: float
    t_star: float
    conclusive: bool
    nbar: float = 0.0
    eps: float = 0.0
    m_star: int | None = None

    def as_dict(self) -> dict:
        return {
            "r0": self.r0,
            "r1": self.r1,
            "N": self.N,
            "M": self.M,
            "C": self.C,
            "Q": self.Q,
            "G": self.G,
            "t_star": self.t_star,
            "conclusive": self.conclusive,
            "nbar": self.nbar,
            "eps": self.eps,
            "m_star": self.m_star,
        }


def binary_entropy(p: float) -> float:
    """Binary Shannon entropy in bits, with 0 log 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability must lie in [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def classical_bound(N: float, r0: float, r1: float) -> float:
    """Error-probability floor for any classical transmitter of energy N."""
    if N < 0.0:
        raise ValueError("signal energy must be non-negative")
    x = N * (math.sqrt(r1) - math.sqrt(r0)) ** 2
    return 0.5 * (1.0 - math.sqrt(-math.expm1(-x)))


def signal_channel(memory: MemorySpec, bit: int):
    """The composed per-signal-mode channel for the given bit value."""
    r = memory.r1 if bit else memory.r0
    inner = thermal_loss(r, memory.nbar)
    pre = add_noise(memory.eps)
    return pre.compose(inner.compose(pre))


def _classical_fidelity(memory: MemorySpec, n_s: float) -> float:
    """Fidelity of the two single-mode outputs of a coherent probe."""
    outputs = []
    for bit in (0, 1):
        state = coherent_state(math.sqrt(n_s))
        ch = signal_channel(memory, bit)
        outputs.append(apply_channel(state, 0, ch))
    return gaussian_fidelity_1mode(outputs[0], outputs[1])


def classical_bound_decoherent(m_c: int, N: float, memory: MemorySpec) -> float:
    """Classical error floor at bandwidth m_c under thermal/additive noise.

    Reduces exactly to ``classical_bound`` when nbar = eps = 0.
    """
    if m_c < 1:
        raise ValueError("classical bandwidth must be >= 1")
    fid = _classical_fidelity(memory, N / m_c)
    fid = min(fid, 1.0)
    if fid >= 1.0:
        return 0.5
    # F^M via the log to survive m_c ~ 1e6
    f_pow = math.exp(m_c * math.log(fid))
    return 0.5 * (1.0 - math.sqrt(1.0 - f_pow))


def classical_bound_for(memory: MemorySpec, N: float) -> float:
    """Classical bound under the memory's bandwidth policy.

    Noiseless memories use the bandwidth-independent closed form.  Noisy
    memories give the classical side its best allowed bandwidth m_star;
    with no cap the bound degrades to its M -> infinity limit (1/2 when the
    two outputs coincide, else 0).
    """
    if not memory.noisy:
        return classical_bound(N, memory.r0, memory.r1)
    if memory.m_star is not None:
        return classical_bound_decoherent(memory.m_star, N, memory)
    return 0.5 if memory.r0 == memory.r1 else 0.0


def epr_output(memory: MemorySpec, bit: int, n_s: float) -> GaussianState:
    """Per-copy signal/idler output state for the given bit value."""
    state = tmsv_state(n_s)
    state = apply_channel(state, 0, signal_channel(memory, bit))
    if memory.eps > 0.0:
        state = apply_channel(state, 1, add_noise(2.0 * memory.eps))
    return state


def log_epr_qcb(tx: TransmitterSpec, memory: MemorySpec):
    """(log Q, t_star) of the Chernoff error bound for the EPR transmitter."""
    if memory.r0 == memory.r1:
        # identical channels: Q_min = 1 exactly, no rounding residue
        return math.log(0.5), 0.5
    theta0 = epr_output(memory, 0, tx.n_s)
    theta1 = epr_output(memory, 1, tx.n_s)
    log_q_min, t_star = log_qcb(theta0, theta1)
    # Q_min may come out a hair above 1 at r0 == r1 from rounding
    log_q_min = min(log_q_min, 0.0)
    return math.log(0.5) + tx.M * log_q_min, t_star


def epr_qcb(tx: TransmitterSpec, memory: MemorySpec):
    """(Q, t_star): quantum Chernoff error bound for the EPR transmitter."""
    log_q, t_star = log_epr_qcb(tx, memory)
    return math.exp(log_q), t_star


def threshold_energy(r0: float, r1: float) -> float:
    """Signal energy above which some EPR transmitter beats every classical one."""
    for name, r in (("r0", r0), ("r1", r1)):
        if not 0.0 <= r <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    denom = (math.sqrt(1.0 - r0) - math.sqrt(1.0 - r1)) ** 2
    if denom == 0.0:
        raise ValueError("threshold energy is undefined for r0 == r1")
    return 2.0 * math.log(2.0) / denom


def info_gain(tx: TransmitterSpec, memory: MemorySpec) -> float:
    """Guaranteed bits-per-cell advantage H(C) - H(Q) (may be negative)."""
    return bound_report(memory, tx.N, M=tx.M).G


def bound_report(memory: MemorySpec, N: float, M: int | None = None,
                 minf: bool = False) -> BoundReport:
    """Full bound report at one parameter point.

    Either a finite bandwidth ``M`` or the infinite-bandwidth limit
    (``minf=True``) must be selected.
    """
    c = classical_bound_for(memory, N)
    if minf:
        q, t_star = qcb_infinite_bandwidth(N, memory)
        m_out = None
    else:
        if M is None:
            raise ValueError("either M or minf must be given")
        q, t_star = epr_qcb(TransmitterSpec(M, N), memory)
        m_out = M
    g = binary_entropy(c) - binary_entropy(q)
    return BoundReport(
        r0=memory.r0, r1=memory.r1, N=N, M=m_out,
        C=c, Q=q, G=g, t_star=t_star, conclusive=q < c,
        nbar=memory.nbar, eps=memory.eps, m_star=memory.m_star,
    )


@dataclass(frozen=True)
class BandwidthSearch:
    """Outcome of the minimum-bandwidth search.

    ``found=False`` means the search was inconclusive up to the cap, never
    that no such bandwidth exists.
    """

    found: bool
    m_bar: int | None
    Q: float | None
    C: float


def find_min_bandwidth(N: float, memory: MemorySpec,
                       m_cap: int = M_SEARCH_CAP) -> BandwidthSearch:
    """Smallest bandwidth whose Chernoff bound beats the classical floor.

    Doubling search followed by bisection; capped at ``m_cap``.
    """
    if N <= 0.0:
        raise ValueError("signal energy N must be positive")
    c = classical_bound_for(memory, N)

    def log_q(m):
        return log_epr_qcb(TransmitterSpec(m, N), memory)[0]

    log_c = math.log(c) if c > 0.0 else -math.inf
    m = 1
    if log_q(1) < log_c:
        return BandwidthSearch(True, 1, math.exp(log_q(1)), c)
    while m < m_cap:
        m_next = min(2 * m, m_cap)
        if log_q(m_next) < log_c:
            # bisect for the smallest winning M in (m, m_next]
            lo, hi = m, m_next
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if log_q(mid) < log_c:
                    hi = mid
                else:
                    lo = mid
            return BandwidthSearch(True, hi, math.exp(log_q(hi)), c)
        if m_next == m_cap:
            break
        m = m_next
    return BandwidthSearch(False, None, None, c)


def qcb_infinite_bandwidth(N: float, memory: MemorySpec,
                           rel_tol: float = 1e-8,
                           max_doublings: int = MAX_DOUBLINGS):
    """(Q_inf, t_star): broadband limit of the Chernoff bound by doubling M.

    The raw sequence log Q(M) converges like 1/M, so successive doublings
    are Richardson-extrapolated; iteration stops when either the raw or the
    extrapolated exponent is stable to ``rel_tol``.
    """
    if N <= 0.0:
        raise ValueError("signal energy N must be positive")
    if memory.r0 == memory.r1:
        return 0.5, 0.5
    m = 1
    prev_log = None
    prev_extrap = None
    t_star = 0.5
    for _ in range(max_doublings):
        log_q, t_star = log_epr_qcb(TransmitterSpec(m, N), memory)
        if prev_log is not None:
            if abs(log_q - prev_log) <= rel_tol * max(1.0, abs(log_q)):
                return math.exp(log_q), t_star
            extrap = 2.0 * log_q - prev_log
            if prev_extrap is not None and \
                    abs(extrap - prev_extrap) <= rel_tol * max(1.0, abs(extrap)):
                return math.exp(extrap), t_star
            prev_extrap = extrap
        prev_log = log_q
        m *= 2
    raise NumericalError(
        f"infinite-bandwidth limit did not converge after {max_doublings} doublings"
    )


def ecc_overhead(p_err: float) -> float:
    """Cells per reliably-stored bit at Shannon capacity, 1 / (1 - H(p)).

    Returns infinity for p_err >= 1/2 (zero capacity).
    """
    if p_err < 0.0 or p_err > 0.5:
        raise ValueError("error probability must lie in [0, 1/2]")
    if p_err >= 0.5:
        return math.inf
    cap = 1.0 - binary_entropy(p_err)
    if cap <= 0.0:
        return math.inf
    return 1.0 / cap
