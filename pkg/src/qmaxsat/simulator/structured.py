"""Exact simulation that keeps one (aux=0, aux=1) amplitude pair per assignment.

The clause register is a deterministic function of the assignment register,
so the joint state ``sum_k |A_k>|C_k>(a_k|0> + b_k|1>)`` is fully described
by the pairs ``(a_k, b_k)`` and the cached densities ``d_k``. Dummy clauses
are not materialised; they add ``mu`` to every density and set the root
order to ``m + mu``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..formula import Formula
from ..oracle import DEFAULT_ENUM_CAP, DensityProfile, density_profile

NORM_TOL = 1e-12
X = np.array([[0, 1], [1, 0]], dtype=complex)


class DegenerateMeasurement(RuntimeError):
    """A forced measurement outcome has (numerically) zero probability."""


@dataclass(frozen=True)
class PartialNegation:
    """The ``m_ext``-th root of X, built from the principal root ``t = e^{i pi / m_ext}`` of -1."""

    m_ext: int

    def __post_init__(self):
        if self.m_ext < 1:
            raise ValueError(f"root order must be >= 1, got {self.m_ext}")

    @property
    def t(self) -> complex:
        return complex(np.exp(1j * math.pi / self.m_ext))

    def t_pow(self, d):
        return np.exp(1j * np.pi * np.asarray(d, dtype=float) / self.m_ext)

    def coefficients(self, d):
        """``((1 + t^d) / 2, (1 - t^d) / 2)``, elementwise over ``d``."""
        td = self.t_pow(d)
        return (1 + td) / 2, (1 - td) / 2

    def matrix(self, d: int = 1) -> np.ndarray:
        """``V^d``; ``matrix(m_ext)`` is X up to rounding."""
        c0, c1 = self.coefficients(d)
        return np.array([[c0, c1], [c1, c0]], dtype=complex)


@dataclass
class StructuredState:
    formula: Formula
    mu: int
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    densities: np.ndarray = field(repr=False)  # already shifted by mu

    @property
    def m_ext(self) -> int:
        return self.formula.m + self.mu

    @property
    def N(self) -> int:
        return self.a.shape[0]

    @property
    def gate(self) -> PartialNegation:
        return PartialNegation(self.m_ext)

    @property
    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.a) ** 2) + np.sum(np.abs(self.b) ** 2)))

    def probabilities(self) -> tuple[np.ndarray, np.ndarray]:
        return np.abs(self.a) ** 2, np.abs(self.b) ** 2

    def copy(self) -> "StructuredState":
        return replace(self, a=self.a.copy(), b=self.b.copy())

    def to_csv(self) -> str:
        """Amplitude dump: ``k, density, re_a, im_a, re_b, im_b`` (density excludes dummies)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "density", "re_a", "im_a", "re_b", "im_b"])
        for k in range(self.N):
            w.writerow([k, int(self.densities[k]) - self.mu, repr(self.a[k].real), repr(self.a[k].imag),
                        repr(self.b[k].real), repr(self.b[k].imag)])
        return buf.getvalue()


def prepare(f: Formula, mu: int = 0, cap: int = DEFAULT_ENUM_CAP,
            profile: DensityProfile | None = None) -> StructuredState:
    """State after the Hadamard layer and clause evaluation, aux in |0>."""
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    if profile is None:
        profile = density_profile(f, cap)
    N = profile.N
    a = np.full(N, 1.0 / math.sqrt(N), dtype=complex)
    b = np.zeros(N, dtype=complex)
    return StructuredState(f, mu, a, b, profile.densities + mu)


def apply_mx(s: StructuredState) -> StructuredState:
    """Apply ``V^{d_k}`` to every pair: one controlled-V per satisfied clause and per dummy."""
    c0, c1 = s.gate.coefficients(s.densities)
    return replace(s, a=c0 * s.a + c1 * s.b, b=c1 * s.a + c0 * s.b)


def _renormalized(v: np.ndarray, p: float) -> np.ndarray:
    out = v / math.sqrt(p)
    nrm = float(np.sum(np.abs(out) ** 2))
    if abs(nrm - 1.0) > NORM_TOL:
        out = out / math.sqrt(nrm)
    return out


def measure_aux(s: StructuredState, rng: np.random.Generator | None = None,
                forced: int | None = None) -> tuple[int, StructuredState, float]:
    """Measure aux, collapse, and reset it to |0> with an X gate.

    The outcome is 1 iff ``rng.random() < prob_one`` unless ``forced`` is given.
    Returns ``(outcome, post_state, prob_one)``.
    """
    p1 = min(1.0, max(0.0, float(np.sum(np.abs(s.b) ** 2))))
    if forced is None:
        if rng is None:
            raise ValueError("need either an rng or a forced outcome")
        outcome = 1 if rng.random() < p1 else 0
    else:
        outcome = int(forced)
    p = p1 if outcome == 1 else 1.0 - p1
    if p < 1e-15:
        raise DegenerateMeasurement(f"outcome {outcome} has probability {p:.3g}")
    survivor = s.b if outcome == 1 else s.a
    return outcome, replace(s, a=_renormalized(survivor, p), b=np.zeros_like(s.b)), p1


def forced_iterations(s: StructuredState, r: int) -> tuple[StructuredState, list[float]]:
    """``r`` rounds of M_x followed by a post-selected aux=1; returns the state and each prob_one."""
    probs = []
    for _ in range(r):
        _, s, p1 = measure_aux(apply_mx(s), forced=1)
        probs.append(p1)
    return s, probs
