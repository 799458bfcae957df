"""Stochastic-resonance analysis of threshold decoding over a lossy bosonic line.

Three communication schemes share one physical pipeline: a displaced squeezed
vacuum mode crosses a beamsplitter of transmissivity eta, picks up additive
Gaussian displacement noise of variance sigma^2 (injected either before or
after the loss), and is read out by a quadrature measurement compared against
a threshold.  This module composes the resulting signal means and total
variances for

* direct classical signaling (one bit in one quadrature, levels -+sqrt(eta)*alpha_q),
* two-quadrature signaling with an entangled two-mode squeezed resource
  (independent bits in q and p, jointly squeezed noise), and
* channel discrimination (one amplitude, two candidate transmissivities).

On top of the success-probability curves it provides the stochastic-resonance
machinery: the critical noise variance where d P_s / d sigma^2 = 0, and the
interval (or rectangle) of thresholds for which added noise can never help.
Adding noise improves decoding exactly when the threshold lies outside that
region.

Solver notes.  The critical-variance condition for the symmetric schemes is

    sigma*^2 = 4 m theta / ln R - K,   R = w (theta + m) / ((1 - w) (theta - m)),

with m the signal level, K the noise-floor term, and w the prior.  Its zero
in theta is found on the residual h(theta) = ln R - 4 m theta / K, solved in
the variable u = ln(theta - m).  In u the function is pole-free, strictly
decreasing, and asymptotically linear on both sides, so bisection after a
geometric bracket expansion is unconditionally safe; sigma*^2 at the returned
root follows from the exact identity sigma*^2 = -K^2 h / (K h + 4 m theta),
which is what the residual fields report.  For strong signals the root can
sit within one float ulp of the signal level itself (the interval boundary
collapses onto m); the solver then returns the correctly rounded boundary m
and the residual identity still applies.  Discrimination uses the same
change of variable around each signal level and, where no closed form
exists (nonzero squeezing, or sender-side noise whose variance scales
differently under the two hypotheses), falls back to a sign test of the
one-sided derivative at sigma^2 = 0+ bisected over theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .errors import DomainError, NoCriticalPointError, SolverError
from .rootfind import bisect, golden_max
from .threshold import (
    ORIENT_ABOVE,
    ORIENT_BELOW,
    BinaryThresholdSpec,
    ThresholdChannel,
    build_channel,
    success_probability,
)

__all__ = [
    "SITE_SENDER",
    "SITE_RECEIVER",
    "ClassicalScenario",
    "EAScenario",
    "DiscriminationScenario",
    "ForbiddenInterval",
    "ForbiddenRectangle",
    "SweepSeries",
    "classical_total_variance",
    "classical_channel",
    "success_classical",
    "critical_sigma2_classical",
    "forbidden_interval_classical",
    "ea_total_variance",
    "success_ea",
    "forbidden_rectangle",
    "success_discrimination",
    "critical_sigma2_discrimination",
    "forbidden_interval_discrimination",
    "sweep_success",
]

# Where the displacement noise enters relative to the lossy beamsplitter.
SITE_SENDER = "sender"
SITE_RECEIVER = "receiver"
_SITES = (SITE_SENDER, SITE_RECEIVER)

# Threshold roots are solved to this residual in sigma*^2 (closed-form paths).
ROOT_RESIDUAL_TOL = 1e-10
# Non-monotonicity margin for sweeps: the curve must beat its sigma-start
# value by more than this to count as a resonance.
SWEEP_MARGIN = 1e-12

_FD_STEP = 1e-6  # one-sided derivative probe at sigma^2 = 0+
_THETA_WIDTH_TOL = 1e-6  # theta bracket width for derivative-sign bisection


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


def _check_prior(name: str, value: float) -> None:
    _check_finite(name, value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


def _check_site(site: str) -> None:
    if site not in _SITES:
        raise DomainError(f"noise_site must be one of {_SITES}, got {site!r}")


@dataclass(frozen=True)
class ClassicalScenario:
    """Direct one-quadrature signaling scheme.

    eta is the line transmissivity, alpha_q the displacement amplitude of
    the encoded levels, r the squeezing of the transmitted mode, prior0 the
    probability of bit 0, and noise_site fixes whether the added Gaussian
    displacement noise acts before (sender) or after (receiver) the loss.

    eta = 1 is allowed (lossless line); alpha_q = 0 is allowed for curve
    evaluation but carries no signal, so the critical-noise solvers reject
    it.
    """

    eta: float
    alpha_q: float
    r: float = 0.0
    prior0: float = 0.5
    noise_site: str = SITE_RECEIVER

    def __post_init__(self) -> None:
        _check_finite("eta", self.eta)
        if not 0.0 < self.eta <= 1.0:
            raise DomainError(f"eta must lie in (0, 1], got {self.eta!r}")
        _check_finite("alpha_q", self.alpha_q)
        if self.alpha_q < 0.0:
            raise DomainError(f"alpha_q must be >= 0, got {self.alpha_q!r}")
        _check_finite("r", self.r)
        if self.r < 0.0:
            raise DomainError(f"r must be >= 0, got {self.r!r}")
        _check_prior("prior0", self.prior0)
        _check_site(self.noise_site)


@dataclass(frozen=True)
class EAScenario:
    """Two-quadrature signaling backed by a two-mode squeezed resource.

    One bit rides in each quadrature with its own amplitude, prior, and
    threshold.  The shared resource squeezing r suppresses the noise floor
    of both quadratures at once, with the loss-side vacuum contributing the
    (1 + eta) weighting handled in ea_total_variance.
    """

    eta: float
    r: float
    prior_q: float
    prior_p: float
    alpha_q: float
    alpha_p: float
    theta_q: float
    theta_p: float
    noise_site: str = SITE_RECEIVER

    def __post_init__(self) -> None:
        _check_finite("eta", self.eta)
        if not 0.0 < self.eta <= 1.0:
            raise DomainError(f"eta must lie in (0, 1], got {self.eta!r}")
        _check_finite("r", self.r)
        if self.r < 0.0:
            raise DomainError(f"r must be >= 0, got {self.r!r}")
        _check_prior("prior_q", self.prior_q)
        _check_prior("prior_p", self.prior_p)
        for name in ("alpha_q", "alpha_p"):
            v = getattr(self, name)
            _check_finite(name, v)
            if v < 0.0:
                raise DomainError(f"{name} must be >= 0, got {v!r}")
        _check_finite("theta_q", self.theta_q)
        _check_finite("theta_p", self.theta_p)
        _check_site(self.noise_site)


@dataclass(frozen=True)
class DiscriminationScenario:
    """Binary discrimination between two line transmissivities.

    The sender always displaces by +alpha_q; hypothesis x in {0, 1} routes
    the mode through transmissivity eta0 or eta1, with the convention
    eta0 > eta1.  Decoding declares hypothesis 1 when the measured
    quadrature falls at or below the threshold.
    """

    eta0: float
    eta1: float
    alpha_q: float
    r: float = 0.0
    prior0: float = 0.5
    noise_site: str = SITE_RECEIVER

    def __post_init__(self) -> None:
        for name in ("eta0", "eta1"):
            v = getattr(self, name)
            _check_finite(name, v)
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {v!r}")
        if not self.eta0 > self.eta1:
            raise DomainError(
                f"eta0 must exceed eta1, got eta0={self.eta0!r}, eta1={self.eta1!r}"
            )
        _check_finite("alpha_q", self.alpha_q)
        if self.alpha_q < 0.0:
            raise DomainError(f"alpha_q must be >= 0, got {self.alpha_q!r}")
        _check_finite("r", self.r)
        if self.r < 0.0:
            raise DomainError(f"r must be >= 0, got {self.r!r}")
        _check_prior("prior0", self.prior0)
        _check_site(self.noise_site)


@dataclass(frozen=True)
class ForbiddenInterval:
    """Threshold interval on which added noise cannot improve decoding.

    lo and hi are the two boundary thresholds; residual_lo / residual_hi
    report |sigma*^2| at the returned roots (closed-form solves) or the
    final theta bracket width (derivative-sign solves).
    """

    lo: float
    hi: float
    residual_lo: float
    residual_hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"interval requires lo < hi, got [{self.lo!r}, {self.hi!r}]")
        if self.residual_lo < 0.0 or self.residual_hi < 0.0:
            raise DomainError("residuals must be non-negative")

    def contains(self, theta: float) -> bool:
        return self.lo <= theta <= self.hi


@dataclass(frozen=True)
class ForbiddenRectangle:
    """Per-quadrature forbidden intervals for the two-quadrature scheme.

    Noise helps the joint success probability exactly when at least one
    quadrature's threshold falls outside its interval.
    """

    q_interval: ForbiddenInterval
    p_interval: ForbiddenInterval

    def contains(self, theta_q: float, theta_p: float) -> bool:
        return self.q_interval.contains(theta_q) and self.p_interval.contains(theta_p)


@dataclass(frozen=True)
class SweepSeries:
    """A success-probability curve over a noise grid, with its resonance flag.

    nonmonotonic is True when the curve's maximum beats its value at the
    first grid point by more than SWEEP_MARGIN, i.e. some added noise level
    on the grid outperforms the grid start.
    """

    sigmas: tuple
    values: tuple
    nonmonotonic: bool


# ---------------------------------------------------------------------------
# Variance composition


def _noise_floor_classical(eta: float, r: float) -> float:
    # Twice the noiseless output variance: loss vacuum + squeezed signal.
    return (1.0 - eta) + eta * math.exp(-2.0 * r)


def _noise_floor_ea(eta: float, r: float) -> float:
    # The resource mode squeezes signal and idler jointly, so the squeezed
    # weight is (1 + eta) instead of eta.
    return (1.0 - eta) + (1.0 + eta) * math.exp(-2.0 * r)


def _effective_sigma2(sigma2: float, eta: float, site: str) -> float:
    if sigma2 < 0.0:
        raise DomainError(f"sigma2 must be >= 0, got {sigma2!r}")
    return eta * sigma2 if site == SITE_SENDER else sigma2


def classical_total_variance(s: ClassicalScenario, sigma2: float) -> float:
    """Total variance of the measured quadrature in the classical scheme.

    Returns (1 - eta + eta e^{-2r} + sigma_eff^2)/2 where sender-side noise
    is attenuated by the line, sigma_eff^2 = eta sigma^2, and receiver-side
    noise enters unattenuated.
    """
    eff = _effective_sigma2(sigma2, s.eta, s.noise_site)
    return 0.5 * (_noise_floor_classical(s.eta, s.r) + eff)


def ea_total_variance(s: EAScenario, sigma2: float) -> float:
    """Per-quadrature total variance in the two-quadrature scheme."""
    eff = _effective_sigma2(sigma2, s.eta, s.noise_site)
    return 0.5 * (_noise_floor_ea(s.eta, s.r) + eff)


# ---------------------------------------------------------------------------
# Success probabilities


def classical_channel(
    s: ClassicalScenario, theta: float, sigma2: float
) -> ThresholdChannel:
    """Induced binary channel of the classical scheme at one noise level."""
    _check_finite("theta", theta)
    m = math.sqrt(s.eta) * s.alpha_q
    v = classical_total_variance(s, sigma2)
    spec = BinaryThresholdSpec(
        mean0=-m,
        mean1=+m,
        var0=v,
        var1=v,
        theta=theta,
        prior0=s.prior0,
        orientation=ORIENT_ABOVE,
    )
    return build_channel(spec)


def success_classical(s: ClassicalScenario, theta: float, sigma2: float) -> float:
    """Success probability of the classical scheme."""
    return success_probability(classical_channel(s, theta, sigma2), s.prior0)


def _ea_quadrature_success(
    m: float, prior: float, theta: float, variance: float
) -> float:
    spec = BinaryThresholdSpec(
        mean0=-m,
        mean1=+m,
        var0=variance,
        var1=variance,
        theta=theta,
        prior0=prior,
        orientation=ORIENT_ABOVE,
    )
    return success_probability(build_channel(spec), prior)


def success_ea(s: EAScenario, sigma2_q: float, sigma2_p: float) -> float:
    """Joint success probability of the two-quadrature scheme.

    The two bits are decoded independently, so the joint probability is the
    product of the per-quadrature success probabilities, each evaluated with
    its own threshold, prior, amplitude, and noise variance.
    """
    root_eta = math.sqrt(s.eta)
    ps_q = _ea_quadrature_success(
        root_eta * s.alpha_q, s.prior_q, s.theta_q, ea_total_variance(s, sigma2_q)
    )
    ps_p = _ea_quadrature_success(
        root_eta * s.alpha_p, s.prior_p, s.theta_p, ea_total_variance(s, sigma2_p)
    )
    return ps_q * ps_p


def _discrimination_variances(s: DiscriminationScenario, sigma2: float) -> tuple:
    if sigma2 < 0.0:
        raise DomainError(f"sigma2 must be >= 0, got {sigma2!r}")
    out = []
    for eta in (s.eta0, s.eta1):
        eff = eta * sigma2 if s.noise_site == SITE_SENDER else sigma2
        out.append(0.5 * (_noise_floor_classical(eta, s.r) + eff))
    return tuple(out)


def success_discrimination(
    s: DiscriminationScenario, theta: float, sigma2: float
) -> float:
    """Success probability of threshold-decoded transmissivity discrimination.

    Conditional means are sqrt(eta_x) alpha_q and the conditional variances
    carry each hypothesis's own loss (and, for sender-side injection, its
    own attenuation of the added noise).  Hypothesis 1 is declared when the
    outcome falls at or below the threshold.
    """
    _check_finite("theta", theta)
    v0, v1 = _discrimination_variances(s, sigma2)
    spec = BinaryThresholdSpec(
        mean0=math.sqrt(s.eta0) * s.alpha_q,
        mean1=math.sqrt(s.eta1) * s.alpha_q,
        var0=v0,
        var1=v1,
        theta=theta,
        prior0=s.prior0,
        orientation=ORIENT_BELOW,
    )
    return success_probability(build_channel(spec), s.prior0)


# ---------------------------------------------------------------------------
# Critical noise variances (closed forms)


def _check_solvable_prior(prior0: float) -> None:
    if prior0 in (0.0, 1.0):
        raise NoCriticalPointError(
            "degenerate prior: success probability has no interior optimum in sigma^2"
        )


def critical_sigma2_classical(s: ClassicalScenario, theta: float) -> float:
    """Noise variance at which d P_s / d sigma^2 = 0 for the classical scheme.

    Returns sigma*^2 = 4 m theta / ln R - K (receiver-site value; sender-site
    noise reaches the detector attenuated by eta, so the critical injected
    variance is that value divided by eta).  A negative return means the
    stationary point lies at negative variance, i.e. P_s is monotone in the
    physical range.  Thresholds at or between the signal levels admit no
    stationary point at all and raise NoCriticalPointError.
    """
    _check_finite("theta", theta)
    _check_solvable_prior(s.prior0)
    m = math.sqrt(s.eta) * s.alpha_q
    if m == 0.0:
        raise NoCriticalPointError("zero signal amplitude: no critical noise level")
    num = s.prior0 * (theta + m)
    den = (1.0 - s.prior0) * (theta - m)
    if den == 0.0 or num == 0.0:
        raise NoCriticalPointError("threshold at a signal level")
    ratio = num / den
    if ratio <= 0.0:
        raise NoCriticalPointError(
            "threshold between the signal levels: no stationary point"
        )
    log_ratio = math.log(ratio)
    if log_ratio == 0.0:
        raise NoCriticalPointError("degenerate threshold: log ratio vanishes")
    k = _noise_floor_classical(s.eta, s.r)
    value = 4.0 * m * theta / log_ratio - k
    if s.noise_site == SITE_SENDER:
        value /= s.eta
    return value


def critical_sigma2_discrimination(s: DiscriminationScenario, theta: float) -> float:
    """Critical noise variance for the discrimination scheme.

    Receiver-site noise with r = 0 admits the closed form
    -1 + B / ln R with B = alpha^2 (eta0 - eta1) - 2 alpha theta (sqrt(eta0)
    - sqrt(eta1)); as in the classical case a negative value flags
    monotonicity.  Any squeezing, or sender-site noise (which scales
    differently under the two hypotheses), has no algebraic stationary
    condition; those paths locate the interior maximum numerically to 1e-10
    in sigma^2 and return -1.0 when the curve already falls at 0+.
    """
    _check_finite("theta", theta)
    _check_solvable_prior(s.prior0)
    if s.alpha_q == 0.0:
        raise NoCriticalPointError("zero signal amplitude: no critical noise level")
    if s.r > 0.0 or s.noise_site == SITE_SENDER:
        return _critical_sigma2_numeric(
            lambda sig2: success_discrimination(s, theta, sig2)
        )
    a0 = math.sqrt(s.eta0) * s.alpha_q
    a1 = math.sqrt(s.eta1) * s.alpha_q
    num = s.prior0 * (theta - a0)
    den = (1.0 - s.prior0) * (theta - a1)
    if den == 0.0 or num == 0.0:
        raise NoCriticalPointError("threshold at a signal level")
    ratio = num / den
    if ratio <= 0.0:
        raise NoCriticalPointError(
            "threshold between the signal levels: no stationary point"
        )
    log_ratio = math.log(ratio)
    if log_ratio == 0.0:
        raise NoCriticalPointError("degenerate threshold: log ratio vanishes")
    b = s.alpha_q * s.alpha_q * (s.eta0 - s.eta1) - 2.0 * s.alpha_q * theta * (
        math.sqrt(s.eta0) - math.sqrt(s.eta1)
    )
    return -1.0 + b / log_ratio


def _forward_derivative_at_zero(f: Callable[[float], float]) -> float:
    # Three-point one-sided difference at sigma^2 = 0 (second-order accurate;
    # the Richardson combination of the h and 2h forward differences).
    h = _FD_STEP
    f0 = f(0.0)
    return (4.0 * f(h) - f(2.0 * h) - 3.0 * f0) / (2.0 * h)


def _critical_sigma2_numeric(ps: Callable[[float], float]) -> float:
    """Interior argmax of a success curve over sigma^2, or -1.0 if none."""
    if _forward_derivative_at_zero(ps) <= 0.0:
        return -1.0
    # Walk a geometric grid until the curve turns over, then refine.
    a = 0.0
    b = 1e-3
    fb = ps(b)
    if fb <= ps(0.0):
        return golden_max(ps, 0.0, b, xtol=1e-10)
    while True:
        c = 2.0 * b
        if c > 1e6:
            raise SolverError("no interior maximum found below sigma^2 = 1e6")
        fc = ps(c)
        if fc < fb:
            break
        a, b, fb = b, c, fc
    return golden_max(ps, a, c, xtol=1e-10)


# ---------------------------------------------------------------------------
# Forbidden-interval solvers

_OFFSET_START = 1e-6  # initial distance from the signal level, in theta


def _expand_bracket_up(
    h: Callable[[float], float], u0: float, f0: float, u_cap: float
) -> tuple:
    # h(u0) > 0, h decreasing toward -inf: double the step until sign flips.
    step = math.log(2.0)
    u_lo, u_hi = u0, u0 + step
    while True:
        if u_hi > u_cap:
            raise SolverError(
                "forbidden-interval bracketing failed: no sign change below the "
                "search bound"
            )
        f_hi = h(u_hi)
        if f_hi <= 0.0:
            return u_lo, u_hi
        u_lo = u_hi
        step *= 2.0
        u_hi = u_lo + step


def _expand_bracket_down(h: Callable[[float], float], u0: float) -> tuple:
    # h(u0) < 0, h -> +inf as u -> -inf (linearly): double the step downward.
    step = math.log(2.0)
    u_hi, u_lo = u0, u0 - step
    while True:
        f_lo = h(u_lo)
        if f_lo >= 0.0:
            return u_lo, u_hi
        u_hi = u_lo
        step *= 2.0
        u_lo = u_hi - step
        if u_lo < -1e9:  # unreachable for finite parameters; hard stop
            raise SolverError("forbidden-interval bracketing failed (underflow)")


def _symmetric_upper_root(m: float, k: float, prior0: float, u_cap: float) -> tuple:
    """Upper interval boundary for signal levels -+m and noise floor k.

    Solves h(u) = ln(w (theta+m)) - ln((1-w)(theta-m)) - 4 m theta / k = 0
    with theta = m + e^u.  Returns (theta, |sigma*^2| residual).  When the
    root lies below float resolution the boundary collapses onto m itself;
    the residual identity still evaluates (to ~0) and is reported as is.
    """
    lpr = math.log(prior0) - math.log1p(-prior0)

    def h(u: float) -> float:
        t = math.exp(u)
        return math.log(2.0 * m + t) + lpr - u - 4.0 * m * (m + t) / k

    u0 = math.log(_OFFSET_START)
    f0 = h(u0)
    if f0 > 0.0:
        u_lo, u_hi = _expand_bracket_up(h, u0, f0, u_cap)
    elif f0 < 0.0:
        u_lo, u_hi = _expand_bracket_down(h, u0)
    else:
        u_lo = u_hi = u0
    u_root = u0 if u_lo == u_hi else bisect(h, u_lo, u_hi, xtol=1e-14, maxit=300)
    t = math.exp(u_root)
    h_val = h(u_root)
    residual = abs(-k * k * h_val / (k * h_val + 4.0 * m * (m + t)))
    return m + t, residual


def _symmetric_interval(
    m: float, k: float, prior0: float, alpha: float
) -> ForbiddenInterval:
    _check_solvable_prior(prior0)
    if m == 0.0:
        raise NoCriticalPointError("zero signal amplitude: no forbidden interval")
    u_cap = math.log(1e6 * max(alpha, 1.0))
    hi, res_hi = _symmetric_upper_root(m, k, prior0, u_cap)
    # Mirror symmetry: the lower boundary at prior w is the negated upper
    # boundary at prior 1 - w (exact identity of the stationary condition).
    lo_mirror, res_lo = _symmetric_upper_root(m, k, 1.0 - prior0, u_cap)
    return ForbiddenInterval(
        lo=-lo_mirror, hi=hi, residual_lo=res_lo, residual_hi=res_hi
    )


def forbidden_interval_classical(s: ClassicalScenario) -> ForbiddenInterval:
    """Threshold interval of guaranteed monotone noise response (classical).

    Boundaries satisfy sigma*^2(theta) = 0 to within ROOT_RESIDUAL_TOL and
    bracket the signal levels: lo <= -sqrt(eta) alpha_q < sqrt(eta) alpha_q
    <= hi.  The interval does not depend on the noise-injection site since
    sender and receiver curves differ only by the reparametrization
    sigma^2 -> eta sigma^2.
    """
    m = math.sqrt(s.eta) * s.alpha_q
    k = _noise_floor_classical(s.eta, s.r)
    return _symmetric_interval(m, k, s.prior0, s.alpha_q)


def forbidden_rectangle(s: EAScenario) -> ForbiddenRectangle:
    """Per-quadrature forbidden intervals for the two-quadrature scheme.

    Each quadrature solves the same boundary equation as the classical
    scheme with the entangled noise floor 1 - eta + (1 + eta) e^{-2r} in
    place of the classical one.  The joint success probability responds
    non-monotonically to (sigma_q, sigma_p) noise exactly when at least one
    threshold is outside its interval.
    """
    root_eta = math.sqrt(s.eta)
    k = _noise_floor_ea(s.eta, s.r)
    q_int = _symmetric_interval(root_eta * s.alpha_q, k, s.prior_q, s.alpha_q)
    p_int = _symmetric_interval(root_eta * s.alpha_p, k, s.prior_p, s.alpha_p)
    return ForbiddenRectangle(q_interval=q_int, p_interval=p_int)


def _discrimination_upper_root(
    s: DiscriminationScenario, a0: float, a1: float, u_cap: float
) -> tuple:
    # Solve h(u) = ln R - B = 0 with theta = a0 + e^u (theta > a0 branch).
    lpr = math.log(s.prior0) - math.log1p(-s.prior0)
    gap = a0 - a1
    droot = math.sqrt(s.eta0) - math.sqrt(s.eta1)
    b_const = s.alpha_q * s.alpha_q * (s.eta0 - s.eta1)

    def b_of(theta: float) -> float:
        return b_const - 2.0 * s.alpha_q * theta * droot

    def h(u: float) -> float:
        t = math.exp(u)
        return lpr + u - math.log(gap + t) - b_of(a0 + t)

    u0 = math.log(_OFFSET_START)
    f0 = h(u0)
    if f0 < 0.0:
        u_lo, u_hi = _expand_bracket_up(lambda u: -h(u), u0, -f0, u_cap)
    elif f0 > 0.0:
        u_lo, u_hi = _expand_bracket_down(lambda u: -h(u), u0)
    else:
        u_lo = u_hi = u0
    u_root = u0 if u_lo == u_hi else bisect(h, u_lo, u_hi, xtol=1e-14, maxit=300)
    t = math.exp(u_root)
    theta = a0 + t
    h_val = h(u_root)
    residual = abs(-h_val / (b_of(theta) + h_val))
    return theta, residual


def _discrimination_lower_root(
    s: DiscriminationScenario, a0: float, a1: float, u_cap: float
) -> tuple:
    # Solve the same stationary condition with theta = a1 - e^u (theta < a1).
    lpr = math.log(s.prior0) - math.log1p(-s.prior0)
    gap = a0 - a1
    droot = math.sqrt(s.eta0) - math.sqrt(s.eta1)
    b_const = s.alpha_q * s.alpha_q * (s.eta0 - s.eta1)

    def b_of(theta: float) -> float:
        return b_const - 2.0 * s.alpha_q * theta * droot

    def h(u: float) -> float:
        t = math.exp(u)
        return lpr + math.log(gap + t) - u - b_of(a1 - t)

    u0 = math.log(_OFFSET_START)
    f0 = h(u0)
    if f0 > 0.0:
        u_lo, u_hi = _expand_bracket_up(h, u0, f0, u_cap)
    elif f0 < 0.0:
        u_lo, u_hi = _expand_bracket_down(h, u0)
    else:
        u_lo = u_hi = u0
    u_root = u0 if u_lo == u_hi else bisect(h, u_lo, u_hi, xtol=1e-14, maxit=300)
    t = math.exp(u_root)
    theta = a1 - t
    h_val = h(u_root)
    residual = abs(-h_val / (b_of(theta) + h_val))
    return theta, residual


def _interval_by_onset_sign(s: DiscriminationScenario) -> ForbiddenInterval:
    # No closed form: classify each theta by the sign of d P_s / d sigma^2
    # at 0+ and bisect the sign change over theta on each side.
    a0 = math.sqrt(s.eta0) * s.alpha_q
    a1 = math.sqrt(s.eta1) * s.alpha_q
    cap = 1e6 * max(s.alpha_q, 1.0)

    def onset(theta: float) -> float:
        return _forward_derivative_at_zero(
            lambda sig2: success_discrimination(s, theta, sig2)
        )

    def edge(start: float, direction: float) -> tuple:
        if onset(start) > 0.0:
            return start, 0.0  # boundary collapsed onto the signal level
        step = 0.125
        inner = start
        while True:
            outer = inner + direction * step
            if abs(outer) > cap:
                raise SolverError(
                    "forbidden-interval bracketing failed: no derivative sign "
                    "change below the search bound"
                )
            if onset(outer) > 0.0:
                break
            inner = outer
            step *= 2.0
        lo, hi = (inner, outer) if direction > 0 else (outer, inner)
        root = bisect(onset, lo, hi, xtol=_THETA_WIDTH_TOL, maxit=200)
        return root, _THETA_WIDTH_TOL

    hi, res_hi = edge(a0, +1.0)
    lo, res_lo = edge(a1, -1.0)
    return ForbiddenInterval(lo=lo, hi=hi, residual_lo=res_lo, residual_hi=res_hi)


def forbidden_interval_discrimination(s: DiscriminationScenario) -> ForbiddenInterval:
    """Threshold interval of monotone noise response for discrimination.

    Boundaries obey lo <= sqrt(eta1) alpha_q < sqrt(eta0) alpha_q <= hi.
    Receiver-site noise with r = 0 solves the stationary-condition roots to
    ROOT_RESIDUAL_TOL; squeezed or sender-site scenarios classify membership
    by the derivative sign at sigma^2 = 0+ and bisect the boundary in theta
    to width 1e-6 (reported in the residual fields).
    """
    _check_solvable_prior(s.prior0)
    if s.alpha_q == 0.0:
        raise NoCriticalPointError("zero signal amplitude: no forbidden interval")
    if s.r > 0.0 or s.noise_site == SITE_SENDER:
        return _interval_by_onset_sign(s)
    a0 = math.sqrt(s.eta0) * s.alpha_q
    a1 = math.sqrt(s.eta1) * s.alpha_q
    u_cap = math.log(1e6 * max(s.alpha_q, 1.0))
    hi, res_hi = _discrimination_upper_root(s, a0, a1, u_cap)
    lo, res_lo = _discrimination_lower_root(s, a0, a1, u_cap)
    return ForbiddenInterval(lo=lo, hi=hi, residual_lo=res_lo, residual_hi=res_hi)


# ---------------------------------------------------------------------------
# Sweeps

Scenario = Union[ClassicalScenario, EAScenario, DiscriminationScenario]


def sweep_success(
    scenario: Scenario,
    theta: float | None,
    sigma_grid: Sequence[float],
) -> SweepSeries:
    """Success probability over a grid of noise standard deviations.

    Grid entries are sigma values (the curve's natural axis); each is
    squared before entering the variance composition.  For the
    two-quadrature scheme theta must be None (the scenario carries its own
    thresholds) and the same sigma drives both quadratures.  The
    nonmonotonic flag records whether any grid point beats the first one by
    more than SWEEP_MARGIN.
    """
    sigmas = [float(x) for x in sigma_grid]
    if not sigmas:
        raise DomainError("sigma_grid must be non-empty")
    for x in sigmas:
        if not math.isfinite(x) or x < 0.0:
            raise DomainError(f"sigma_grid entries must be finite and >= 0, got {x!r}")
    if any(b <= a for a, b in zip(sigmas, sigmas[1:])):
        raise DomainError("sigma_grid must be strictly increasing")

    if isinstance(scenario, EAScenario):
        if theta is not None:
            raise DomainError(
                "the two-quadrature scheme reads thresholds from the scenario; "
                "pass theta=None"
            )
        values = [success_ea(scenario, x * x, x * x) for x in sigmas]
    elif isinstance(scenario, ClassicalScenario):
        if theta is None:
            raise DomainError("theta is required for the classical scheme")
        values = [success_classical(scenario, theta, x * x) for x in sigmas]
    elif isinstance(scenario, DiscriminationScenario):
        if theta is None:
            raise DomainError("theta is required for the discrimination scheme")
        values = [success_discrimination(scenario, theta, x * x) for x in sigmas]
    else:
        raise DomainError(f"unsupported scenario type: {type(scenario).__name__}")

    flag = (max(values) - values[0]) > SWEEP_MARGIN
    return SweepSeries(sigmas=tuple(sigmas), values=tuple(values), nonmonotonic=flag)
