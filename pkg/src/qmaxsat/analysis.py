"""Closed-form success probabilities, iteration bounds and dummy-qubit tuning.

All quantities depend on a formula only through its density histogram.
With ``mu`` always-true dummy clauses the root order is ``m_ext = m + mu``
and assignment ``k`` rotates the auxiliary qubit by the angle
``theta_k = (d_k + mu) * pi / (2 * m_ext)``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

from .oracle import DensityProfile

LEMMA_LOWER = 1.0 - math.pi ** 2 / 32.0
LEMMA_UPPER = math.sin(7.0 * math.pi / 16.0)
UNDERFLOW_TINY = 1e-300


class DegenerateProfile(ValueError):
    """Every assignment has zero rotation, so the post-selected ratios are 0/0."""


@dataclass(frozen=True)
class PowerSum:
    """``sum_k sin^p(theta_k)`` held as a logarithm."""

    log_value: float
    underflow: bool  # some terms fell below UNDERFLOW_TINY relative to the largest and were dropped

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


@dataclass(frozen=True)
class ConvergencePoint:
    r: int
    pr_ax_one: float
    pr_cmax: float
    underflow: bool = False


@dataclass(frozen=True)
class TuningResult:
    pr_max: float
    omega: float
    mu_required: int


@dataclass(frozen=True)
class LemmaCheck:
    value: float
    lower: float
    upper: float
    within: bool


def _levels(profile: DensityProfile, mu: int) -> tuple[int, list[tuple[float, int]]]:
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    m_ext = profile.m + mu
    return m_ext, [(math.sin((d + mu) * math.pi / (2 * m_ext)), c)
                   for d, c in profile.histogram.items()]


def power_sum(profile: DensityProfile, mu: int, power: int) -> PowerSum:
    """Log-space compensated sum of ``sin^power`` over all assignments."""
    _, levels = _levels(profile, mu)
    logs = []
    for s, count in levels:
        if power == 0:
            logs.append(math.log(count))
        elif s > 0.0:
            logs.append(math.log(count) + power * math.log(s))
    if not logs:
        return PowerSum(-math.inf, False)
    top = max(logs)
    scaled = [math.exp(x - top) for x in logs]
    kept = [x for x in scaled if x >= UNDERFLOW_TINY]
    return PowerSum(top + math.log(math.fsum(kept)), len(kept) < len(scaled))


def pr_first(profile: DensityProfile, mu: int = 0) -> float:
    """Probability of reading aux=1 after the first M_x application."""
    _, levels = _levels(profile, mu)
    return math.fsum(c * s * s for s, c in levels) / profile.N


def _denominator(profile: DensityProfile, mu: int, r: int) -> PowerSum:
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    den = power_sum(profile, mu, 2 * (r - 1))
    if den.log_value == -math.inf:
        raise DegenerateProfile("all rotation angles are zero; no aux=1 mass survives")
    return den


def pr_ax_one_at(profile: DensityProfile, mu: int, r: int) -> float:
    """P(aux=1 at iteration r | aux=1 at iterations 1..r-1)."""
    if r == 1:
        return pr_first(profile, mu)
    return _pr_ax_one(profile, mu, r)[0]


def _pr_ax_one(profile, mu, r):
    den = _denominator(profile, mu, r)
    num = power_sum(profile, mu, 2 * r)
    if num.log_value == -math.inf:
        return 0.0, den.underflow
    return min(1.0, math.exp(num.log_value - den.log_value)), num.underflow or den.underflow


def pr_cmax_at(profile: DensityProfile, mu: int, r: int) -> float:
    """P(aux=1 at iteration r and the state is maximal | r-1 earlier successes).

    The maximal class is weighted by its size, so several optimal
    assignments all count as success.
    """
    den = _denominator(profile, mu, r)
    m_ext = profile.m + mu
    d_max = max(profile.histogram)
    s = math.sin((d_max + mu) * math.pi / (2 * m_ext))
    if s == 0.0:
        return 0.0
    count = profile.histogram[d_max]
    if r == 1:
        return count * s * s / profile.N
    return min(1.0, math.exp(math.log(count) + 2 * r * math.log(s) - den.log_value))


def success_probability(profile: DensityProfile, mu: int, r: int) -> float:
    """P(readout is maximal | r successful post-selections)."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    total = power_sum(profile, mu, 2 * r)
    if total.log_value == -math.inf:
        raise DegenerateProfile("all rotation angles are zero; no aux=1 mass survives")
    m_ext = profile.m + mu
    d_max = max(profile.histogram)
    s = math.sin((d_max + mu) * math.pi / (2 * m_ext))
    lift = 2 * r * math.log(s) if r else 0.0
    return min(1.0, math.exp(math.log(profile.histogram[d_max]) + lift - total.log_value))


def completion_probability(profile: DensityProfile, mu: int, r: int) -> float:
    """P(r aux=1 outcomes in a row from a fresh start), i.e. sum_k sin^(2r) / N."""
    return power_sum(profile, mu, 2 * r).value / profile.N


def gap_at(profile: DensityProfile, mu: int, r: int) -> float:
    return abs(pr_ax_one_at(profile, mu, r) - pr_cmax_at(profile, mu, r))


def convergence_curve(profile: DensityProfile, mu: int, r_max: int) -> list[ConvergencePoint]:
    if r_max < 1:
        raise ValueError(f"r_max must be >= 1, got {r_max}")
    points = [ConvergencePoint(1, pr_first(profile, mu), pr_cmax_at(profile, mu, 1))]
    for r in range(2, r_max + 1):
        ax, flag = _pr_ax_one(profile, mu, r)
        points.append(ConvergencePoint(r, ax, pr_cmax_at(profile, mu, r), flag))
    return points


def curve_csv(points: list[ConvergencePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "pr_ax_one", "pr_cmax"])
    for p in points:
        w.writerow([p.r, repr(p.pr_ax_one), repr(p.pr_cmax)])
    return buf.getvalue()


def required_iterations(m: int, lam: float = 2.0) -> int:
    """Smallest r with cos^(2r)(pi / 2m) <= 10^-lam.

    This is the worst case d_max = m, d_nm = m - 1. The looser
    lam * (2m/pi)^2 estimate is :func:`iteration_lower_bound`.
    """
    if m < 2:
        raise ValueError(f"required_iterations needs m >= 2, got {m}")
    if lam <= 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    exact = -lam * math.log(10.0) / (2.0 * math.log(math.cos(math.pi / (2 * m))))
    return math.ceil(exact - 1e-9)


def iteration_lower_bound(m: int, lam: float = 2.0) -> float:
    return lam * (2.0 * m / math.pi) ** 2


def required_dummies(m: int, pr_max: float = 0.99) -> TuningResult:
    """Dummy clauses needed so a 7/8-dense formula reaches ``pr_max`` at iteration 1."""
    if not 0.0 < pr_max < 1.0:
        raise ValueError(f"pr_max must lie in (0, 1), got {pr_max}")
    omega = (2.0 / math.pi) * math.asin(math.sqrt(pr_max))
    bound = m * (omega - 7.0 / 8.0) / (1.0 - omega)
    mu = max(0, math.ceil(bound - 1e-9))
    return TuningResult(pr_max, omega, mu)


def lemma1_bounds(profile: DensityProfile) -> LemmaCheck:
    value = pr_first(profile, 0)
    return LemmaCheck(value, LEMMA_LOWER, LEMMA_UPPER, LEMMA_LOWER <= value <= LEMMA_UPPER)


def auto_iterations(m_ext: int, lam: float = 2.0) -> int:
    """Iteration count for the root order actually in use; a single wire needs one step."""
    return 1 if m_ext < 2 else required_iterations(m_ext, lam)


def as_dict(obj) -> dict:
    return asdict(obj)
