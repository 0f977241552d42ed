"""Gate-level dense state-vector engine used to cross-check the structured shortcut.

Qubit ``i`` is bit ``i`` of the basis index. Layout: variables
``0..n-1``, clause targets ``n..n+m-1``, dummy wires ``n+m..n+m+mu-1``,
auxiliary qubit last.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..formula import Formula, truth_vector
from ..oracle import CapExceeded
from .structured import (X, DegenerateMeasurement, PartialNegation, StructuredState,
                         apply_mx, measure_aux, prepare)

DEFAULT_NAIVE_CAP = 24
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass
class FullState:
    n: int
    m: int
    mu: int
    amps: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.n + self.m + self.mu + 1

    @property
    def aux(self) -> int:
        return self.q - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    @classmethod
    def zeros(cls, n: int, m: int, mu: int = 0, cap: int = DEFAULT_NAIVE_CAP) -> "FullState":
        q = n + m + mu + 1
        if q > cap:
            raise CapExceeded(f"{q} qubits exceed the naive-engine cap of {cap}")
        amps = np.zeros(1 << q, dtype=complex)
        amps[0] = 1.0
        return cls(n, m, mu, amps)


def _check_qubits(q: int, *qubits: int) -> None:
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"qubit indices collide: {qubits}")
    for x in qubits:
        if not 0 <= x < q:
            raise ValueError(f"qubit index {x} out of range for {q} qubits")


def apply_1q(state: FullState, U: np.ndarray, qubit: int) -> FullState:
    _check_qubits(state.q, qubit)
    v = state.amps.reshape(-1, 2, 1 << qubit)
    out = np.einsum("ij,ajb->aib", U, v).reshape(-1)
    return FullState(state.n, state.m, state.mu, out)


def apply_controlled_1q(state: FullState, U: np.ndarray, control: int, target: int) -> FullState:
    _check_qubits(state.q, control, target)
    idx = np.arange(state.amps.size)
    lo = idx[(((idx >> control) & 1) == 1) & (((idx >> target) & 1) == 0)]
    hi = lo | (1 << target)
    amps = state.amps.copy()
    a0, a1 = amps[lo], amps[hi]
    amps[lo] = U[0, 0] * a0 + U[0, 1] * a1
    amps[hi] = U[1, 0] * a0 + U[1, 1] * a1
    return FullState(state.n, state.m, state.mu, amps)


def apply_gt4(state: FullState, controls, conditions, target: int) -> FullState:
    """Generalized Toffoli: flip ``target`` where every control ``x_a`` has ``x_a ^ delta_a == 1``."""
    controls, conditions = tuple(controls), tuple(conditions)
    if len(controls) != 3 or len(conditions) != 3:
        raise ValueError("GT4 takes exactly 3 controls and 3 conditions")
    _check_qubits(state.q, *controls, target)
    idx = np.arange(state.amps.size)
    fire = ((idx >> target) & 1) == 0
    for c, delta in zip(controls, conditions):
        fire &= (((idx >> c) & 1) ^ int(delta)) == 1
    lo = idx[fire]
    hi = lo | (1 << target)
    amps = state.amps.copy()
    amps[lo], amps[hi] = state.amps[hi], state.amps[lo]
    return FullState(state.n, state.m, state.mu, amps)


def clause_layer(state: FullState, f: Formula) -> FullState:
    """One GT4 per clause, clause ``j`` targeting qubit ``n + j``."""
    for j, c in enumerate(f.clauses):
        state = apply_gt4(state, c.variables, c.conditions, f.n + j)
    return state


def initial_state(f: Formula, mu: int = 0, cap: int = DEFAULT_NAIVE_CAP) -> FullState:
    """|0>^n |1>^m |1>^mu |0>."""
    state = FullState.zeros(f.n, f.m, mu, cap)
    for qb in range(f.n, f.n + f.m + mu):
        state = apply_1q(state, X, qb)
    return state


def apply_mx_full(state: FullState) -> FullState:
    V = PartialNegation(state.m + state.mu).matrix(1)
    for wire in range(state.n, state.n + state.m + state.mu):
        state = apply_controlled_1q(state, V, wire, state.aux)
    return state


def measure_aux_full(state: FullState, outcome: int = 1) -> tuple[FullState, float]:
    """Project aux onto ``outcome``, renormalise, reset aux to |0>. Returns ``(state, prob_one)``."""
    idx = np.arange(state.amps.size)
    on = ((idx >> state.aux) & 1) == 1
    p1 = min(1.0, float(np.sum(np.abs(state.amps[on]) ** 2)))
    p = p1 if outcome == 1 else 1.0 - p1
    if p < 1e-15:
        raise DegenerateMeasurement(f"outcome {outcome} has probability {p:.3g}")
    amps = np.where(on if outcome == 1 else ~on, state.amps, 0) / math.sqrt(p)
    post = FullState(state.n, state.m, state.mu, amps)
    if outcome == 1:
        post = apply_1q(post, X, post.aux)
    return post, p1


@dataclass
class NaiveResult:
    prepared: FullState                       # after Hadamards and the clause layer
    before_measure: list[FullState]           # after each M_x
    after_reset: list[FullState]              # after each post-selection + X reset
    prob_ones: list[float]


def naive_run(f: Formula, mu: int = 0, r_successes: int = 1,
              cap: int = DEFAULT_NAIVE_CAP) -> NaiveResult:
    state = initial_state(f, mu, cap)
    for qb in range(f.n):
        state = apply_1q(state, H, qb)
    state = clause_layer(state, f)
    result = NaiveResult(state, [], [], [])
    for _ in range(r_successes):
        state = apply_mx_full(state)
        result.before_measure.append(state)
        state, p1 = measure_aux_full(state, 1)
        result.after_reset.append(state)
        result.prob_ones.append(p1)
    return result


def gt4_cascade(f: Formula, assignment: int) -> int:
    """Clause register produced by the GT4 layer on the basis input ``|A>|1..1>``, as a truth vector."""
    state = FullState.zeros(f.n, f.m, 0, cap=max(DEFAULT_NAIVE_CAP, f.n + f.m + 1))
    for i in range(f.n):
        if (assignment >> i) & 1:
            state = apply_1q(state, X, i)
    for j in range(f.m):
        state = apply_1q(state, X, f.n + j)
    state = clause_layer(state, f)
    (hit,) = np.flatnonzero(np.abs(state.amps) > 0.5)
    return int(hit >> f.n) & ((1 << f.m) - 1)


def embed(s: StructuredState) -> np.ndarray:
    """Dense amplitudes over the naive layout equivalent to a structured state."""
    f = s.formula
    q = f.n + f.m + s.mu + 1
    amps = np.zeros(1 << q, dtype=complex)
    dummies = ((1 << s.mu) - 1) << (f.n + f.m)
    aux = 1 << (q - 1)
    for k in range(s.N):
        base = k | (truth_vector(f, k) << f.n) | dummies
        amps[base] = s.a[k]
        amps[base | aux] = s.b[k]
    return amps


@dataclass(frozen=True)
class EquivalenceReport:
    n: int
    m: int
    mu: int
    r: int
    max_prob_deviation: float
    max_amp_deviation: float
    max_prob_one_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.max_prob_deviation, self.max_prob_one_deviation) <= self.tolerance

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "mu": self.mu, "r": self.r,
                "max_prob_deviation": self.max_prob_deviation,
                "max_amp_deviation": self.max_amp_deviation,
                "max_prob_one_deviation": self.max_prob_one_deviation,
                "tolerance": self.tolerance, "passed": self.passed}


def compare_engines(f: Formula, mu: int = 0, r: int = 1, cap: int = DEFAULT_NAIVE_CAP,
                    tolerance: float = 1e-9) -> EquivalenceReport:
    """Run both engines through ``r`` forced successes and compare every basis probability."""
    naive = naive_run(f, mu, r, cap)
    s = prepare(f, mu)
    snapshots = [(naive.prepared, s)]
    p_dev = 0.0
    for step in range(r):
        s = apply_mx(s)
        snapshots.append((naive.before_measure[step], s))
        _, s, p1 = measure_aux(s, forced=1)
        snapshots.append((naive.after_reset[step], s))
        p_dev = max(p_dev, abs(p1 - naive.prob_ones[step]))
    prob_dev = amp_dev = 0.0
    for full, st in snapshots:
        ref = embed(st)
        prob_dev = max(prob_dev, float(np.max(np.abs(np.abs(full.amps) ** 2 - np.abs(ref) ** 2))))
        amp_dev = max(amp_dev, float(np.max(np.abs(full.amps - ref))))
    return EquivalenceReport(f.n, f.m, mu, r, prob_dev, amp_dev, p_dev, tolerance)
