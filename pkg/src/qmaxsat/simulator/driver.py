"""Seeded run of the full amplify / post-select / restart / read-out loop.

Randomness comes from ``numpy.random.Generator(PCG64(seed))``, whose stream
is stable across platforms. Each attempt draws a block of ``r`` uniforms up
front so the compiled and fallback kernels consume the same stream. Two
further draws pick the clause-register outcome and then the assignment.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .. import kernels
from ..analysis import auto_iterations
from ..formula import Formula, bits_to_str, popcount
from ..oracle import DEFAULT_ENUM_CAP, DensityProfile, density_profile
from .structured import PartialNegation

STOP_RULES = ("fixed", "epsilon-gap")


@dataclass(frozen=True)
class RunConfig:
    mu: int = 0
    r: int | None = None          # None: derived from lam and m + mu
    lam: float = 2.0
    epsilon: float | None = None  # gap threshold for the epsilon-gap rule
    stop_rule: str = "fixed"
    max_restarts: int = 100
    seed: int = 0
    backend: str | None = None

    def resolved_r(self, m: int) -> int:
        r = self.r if self.r is not None else auto_iterations(m + self.mu, self.lam)
        if r < 1:
            raise ValueError(f"r must be >= 1, got {r}")
        return r

    def resolved_epsilon(self) -> float:
        return self.epsilon if self.epsilon is not None else 10.0 ** (-self.lam)


@dataclass(frozen=True)
class RunReport:
    seed: int
    status: str                    # "ok" or "exhausted"
    r_target: int
    mu: int
    m_ext: int
    stop_rule: str
    iterations_completed: int      # successes in the final attempt
    total_iterations: int          # M_x applications over all attempts
    restarts: int
    aux_outcomes: str              # every aux reading in order, e.g. "1101111"
    measured_truth_vector: str | None   # clause bits c0 c1 ... c_{m-1}
    measured_assignment: str | None     # variable bits x0 x1 ... x_{n-1}
    assignment_index: int | None
    achieved_density: int | None
    satisfiable_verdict: bool | None
    backend: str
    elapsed: float = 0.0
    oracle_d_max: int | None = None
    optimal: bool | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self, include_timing: bool = True) -> dict:
        d = asdict(self)
        if not include_timing:
            d.pop("elapsed")
        return d

    def with_oracle(self, d_max: int) -> "RunReport":
        return replace(self, oracle_d_max=d_max,
                       optimal=None if not self.ok else self.achieved_density == d_max)


def _clause_class(f: Formula, tv: int) -> np.ndarray:
    """Mask of assignments whose truth vector equals ``tv``."""
    k = np.arange(1 << f.n, dtype=np.int64)
    mask = np.ones(k.shape, dtype=bool)
    for j, c in enumerate(f.clauses):
        sat = np.zeros(k.shape, dtype=bool)
        for lit in c.literals:
            sat |= (((k >> lit.var) & 1) ^ int(lit.negated)).astype(bool)
        mask &= sat == bool((tv >> j) & 1)
    return mask


def _draw(weights: np.ndarray, u: float) -> int:
    cdf = np.cumsum(weights)
    return int(min(np.searchsorted(cdf, u * cdf[-1], side="right"), weights.size - 1))


def readout(f: Formula, probs: np.ndarray, rng: np.random.Generator) -> tuple[int, int]:
    """Measure the clause register, then the assignment register.

    The clause outcome ``T`` has probability ``sum_{k: C_k = T} |a_k|^2``;
    sampling ``k`` by ``|a_k|^2`` and keeping only ``C_k`` gives exactly
    that law. The assignment is then drawn from the collapsed class.
    """
    tv = f.truth_vector(_draw(probs, rng.random()))
    cls = _clause_class(f, tv)
    weights = np.where(cls, probs, 0.0)
    if weights.sum() <= 0.0:
        weights = cls.astype(float)
    return tv, _draw(weights, rng.random())


def run_amplification(f: Formula, cfg: RunConfig = RunConfig(),
                      profile: DensityProfile | None = None,
                      cap: int = DEFAULT_ENUM_CAP) -> RunReport:
    if cfg.stop_rule not in STOP_RULES:
        raise ValueError(f"stop_rule must be one of {STOP_RULES}, got {cfg.stop_rule!r}")
    if cfg.mu < 0 or cfg.max_restarts < 0:
        raise ValueError("mu and max_restarts must be >= 0")
    t0 = time.perf_counter()
    if profile is None:
        profile = density_profile(f, cap)
    kern = kernels.get(cfg.backend)
    backend = cfg.backend or kernels.BACKEND
    r = cfg.resolved_r(f.m)
    m_ext = f.m + cfg.mu
    dens = profile.densities + cfg.mu
    _, c1 = PartialNegation(m_ext).coefficients(dens)
    c1r, c1i = np.ascontiguousarray(c1.real), np.ascontiguousarray(c1.imag)
    max_mask = (dens == dens.max()).astype(np.uint8)
    eps = cfg.resolved_epsilon() if cfg.stop_rule == "epsilon-gap" else -1.0
    amp0 = 1.0 / math.sqrt(profile.N)

    rng = np.random.default_rng(cfg.seed)
    outcomes: list[str] = []
    total = restarts = 0
    while True:
        ar = np.full(profile.N, amp0)
        ai = np.zeros(profile.N)
        u = rng.random(r)
        successes, failed, _ = kern.amplify_attempt(ar, ai, c1r, c1i, u, max_mask, eps)
        outcomes.append("1" * successes + ("0" if failed else ""))
        total += successes + int(failed)
        if not failed:
            break
        restarts += 1
        if restarts > cfg.max_restarts:
            return RunReport(cfg.seed, "exhausted", r, cfg.mu, m_ext, cfg.stop_rule, successes,
                             total, restarts, "".join(outcomes), None, None, None, None, None,
                             backend, time.perf_counter() - t0)

    tv, k = readout(f, ar * ar + ai * ai, rng)
    density = popcount(tv)
    return RunReport(cfg.seed, "ok", r, cfg.mu, m_ext, cfg.stop_rule, successes, total, restarts,
                     "".join(outcomes), bits_to_str(tv, f.m), bits_to_str(k, f.n), k, density,
                     density == f.m, backend, time.perf_counter() - t0)


def run_trials(f: Formula, cfg: RunConfig, trials: int, workers: int | None = None,
               profile: DensityProfile | None = None) -> list[RunReport]:
    """Independent runs with seeds ``cfg.seed + i``, returned in trial order."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if profile is None:
        profile = density_profile(f)
    cfgs = [replace(cfg, seed=cfg.seed + i) for i in range(trials)]
    if workers == 1 or trials == 1:
        return [run_amplification(f, c, profile) for c in cfgs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: run_amplification(f, c, profile), cfgs))
