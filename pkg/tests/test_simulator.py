import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmaxsat import analysis as A
from qmaxsat.formula import (Clause, Formula, generate_complete, generate_random, max_clauses,
                             parse_dimacs, truth_vector)
from qmaxsat.oracle import CapExceeded, density_profile
from qmaxsat.simulator import (DegenerateMeasurement, FullState, PartialNegation, RunConfig,
                               apply_gt4, apply_mx, compare_engines, forced_iterations,
                               gt4_cascade, measure_aux, naive_run, prepare, run_amplification,
                               run_trials)
from qmaxsat.simulator.naive import H, apply_1q
from qmaxsat.simulator.structured import X

SINGLE = Formula(3, (Clause.of(1, 2, 3),))


# -- partial negation -------------------------------------------------------

@pytest.mark.parametrize("m_ext", [1, 2, 3, 7, 50])
def test_root_of_x(m_ext):
    V = PartialNegation(m_ext)
    assert abs(V.t) == pytest.approx(1.0)
    assert V.t ** m_ext == pytest.approx(-1, abs=1e-12)
    assert np.allclose(np.linalg.matrix_power(V.matrix(1), m_ext), X, atol=1e-10)
    assert np.allclose(V.matrix(m_ext), X, atol=1e-10)
    for d in range(-3, 2 * m_ext + 1):
        M = V.matrix(d)
        assert np.allclose(M @ M.conj().T, np.eye(2), atol=1e-12)


# -- structured engine ------------------------------------------------------

def test_prepare(two_clause):
    s = prepare(two_clause)
    assert s.N == 8 and np.allclose(s.a, 1 / math.sqrt(8)) and not s.b.any()
    assert s.norm == pytest.approx(1.0)
    s1 = prepare(two_clause, 1)
    assert sorted(s1.densities.tolist()) == [2, 2] + [3] * 6
    assert s1.m_ext == 3


def test_apply_mx_examples(two_clause):
    s = apply_mx(prepare(two_clause))
    full = np.flatnonzero(s.densities == 2)
    assert np.allclose(s.a[full], 0, atol=1e-15) and np.allclose(s.b[full], 1 / math.sqrt(8))
    half = np.flatnonzero(s.densities == 1)
    assert np.allclose(np.abs(s.b[half]) ** 2 * 8, math.sin(math.pi / 4) ** 2)
    t = apply_mx(prepare(SINGLE))
    assert t.a[0] == pytest.approx(1 / math.sqrt(8)) and t.b[0] == 0  # assignment 000: density 0


def test_measure_aux_probabilities(two_clause):
    assert measure_aux(apply_mx(prepare(two_clause)), forced=1)[2] == pytest.approx(0.875, abs=1e-12)
    assert measure_aux(apply_mx(prepare(two_clause, 1)), forced=1)[2] == pytest.approx(0.9375, abs=1e-12)
    p = measure_aux(apply_mx(prepare(generate_complete(3))), forced=1)[2]
    assert p == pytest.approx(math.sin(7 * math.pi / 16) ** 2, abs=1e-12)


def test_measure_aux_collapse(two_clause):
    s = apply_mx(prepare(two_clause))
    out, post, p1 = measure_aux(s, forced=0)
    assert out == 0 and post.norm == pytest.approx(1.0) and not post.b.any()
    assert np.allclose(np.abs(post.a) ** 2, np.abs(s.a) ** 2 / (1 - p1))
    with pytest.raises(DegenerateMeasurement):
        measure_aux(prepare(two_clause), forced=1)
    with pytest.raises(ValueError):
        measure_aux(s)


def test_measure_aux_sampling_is_seeded(two_clause):
    s = apply_mx(prepare(two_clause))
    a = [measure_aux(s, np.random.default_rng(5))[0] for _ in range(3)]
    b = [measure_aux(s, np.random.default_rng(5))[0] for _ in range(3)]
    assert a == b


@settings(max_examples=40, deadline=None)
@given(n=st.integers(3, 6), data=st.data())
def test_structured_statistics_match_closed_form(n, data):
    m = data.draw(st.integers(1, min(20, max_clauses(n))))
    f = generate_random(n, m, data.draw(st.integers(0, 2**32)))
    mu = data.draw(st.integers(0, 3))
    r = data.draw(st.integers(1, 12))
    p = density_profile(f)
    s, probs = forced_iterations(prepare(f, mu, profile=p), r - 1)
    s = apply_mx(s)
    is_max = s.densities == s.densities.max()
    p1 = float(np.sum(np.abs(s.b) ** 2))
    assert p1 == pytest.approx(A.pr_ax_one_at(p, mu, r), abs=1e-9)
    assert float(np.sum(np.abs(s.b[is_max]) ** 2)) == pytest.approx(A.pr_cmax_at(p, mu, r), abs=1e-9)
    for j, pj in enumerate(probs, 1):
        assert pj == pytest.approx(A.pr_ax_one_at(p, mu, j), abs=1e-9)
    assert s.norm == pytest.approx(1.0, abs=1e-9)


def test_sin_power_law(two_clause):
    s, _ = forced_iterations(prepare(two_clause), 5)
    w = np.abs(s.a) ** 2
    theta = s.densities * math.pi / (2 * s.m_ext)
    ratio = (np.sin(theta) / np.sin(theta.max())) ** 10
    assert np.allclose(w / w.max(), ratio, atol=1e-12)


def test_amplitude_csv(two_clause):
    rows = prepare(two_clause, 1).to_csv().splitlines()
    assert rows[0] == "k,density,re_a,im_a,re_b,im_b"
    assert rows[1].startswith("0,1,")


# -- naive engine -----------------------------------------------------------

def basis(n_qubits, index):
    st_ = FullState.zeros(n_qubits - 1, 0, 0)
    st_.amps[:] = 0
    st_.amps[index] = 1
    return st_


def test_gt4_flips_on_condition_pattern():
    for x in range(8):
        out = apply_gt4(basis(4, x), (0, 1, 2), (1, 0, 1), 3)
        flipped = int(np.flatnonzero(out.amps)[0]) >> 3
        assert flipped == (x == 0b010)  # x0=0, x1=1, x2=0


def test_gt4_is_an_involution():
    rng = np.random.default_rng(0)
    st_ = FullState.zeros(4, 0, 0)
    st_.amps[:] = rng.normal(size=32) + 1j * rng.normal(size=32)
    st_.amps /= np.linalg.norm(st_.amps)
    twice = apply_gt4(apply_gt4(st_, (0, 2, 4), (1, 1, 0), 3), (0, 2, 4), (1, 1, 0), 3)
    assert np.allclose(twice.amps, st_.amps)
    with pytest.raises(ValueError):
        apply_gt4(st_, (0, 0, 1), (1, 1, 1), 3)
    with pytest.raises(ValueError):
        apply_gt4(st_, (0, 1, 2), (1, 1, 1), 9)


def test_gt4_encodes_clause():
    for c in [Clause.of(1, 2, 3), Clause.of(-1, 2, -3), Clause.of(-1, -2, -3)]:
        f = Formula(3, (c,))
        for a in range(8):
            assert gt4_cascade(f, a) == truth_vector(f, a)
        flips = [a for a in range(8) if gt4_cascade(f, a) == 0]
        assert len(flips) == 1


def test_gt4_cascade_four_variable_example(gt_example):
    a = 0b1101  # (x0, x1, x2, x3) = (1, 0, 1, 1)
    assert gt4_cascade(gt_example, a) == truth_vector(gt_example, a) == 0b101
    for a in range(16):
        assert gt4_cascade(gt_example, a) == truth_vector(gt_example, a)


def test_hadamard_layer():
    st_ = apply_1q(apply_1q(FullState.zeros(2, 0, 0), H, 0), H, 1)
    assert np.allclose(np.abs(st_.amps[:4]) ** 2, 0.25)


def test_naive_matches_first_probability(two_clause):
    res = naive_run(two_clause, 0, 1)
    assert res.prob_ones[0] == pytest.approx(0.875, abs=1e-12)
    assert compare_engines(two_clause, 0, 3).passed


def test_naive_cap(two_clause):
    with pytest.raises(CapExceeded):
        naive_run(two_clause, 0, 1, cap=5)


# -- driver -----------------------------------------------------------------

def test_run_is_deterministic(two_clause):
    a = run_amplification(two_clause, RunConfig(seed=11))
    b = run_amplification(two_clause, RunConfig(seed=11))
    assert a.to_dict(False) == b.to_dict(False)
    assert a.achieved_density == a.measured_truth_vector.count("1")
    assert a.satisfiable_verdict == (a.achieved_density == two_clause.m)
    assert a.aux_outcomes.count("0") == a.restarts
    assert a.aux_outcomes.endswith("1" * a.iterations_completed)
    json.dumps(a.to_dict())


def test_run_finds_satisfying_assignment(four_clause):
    sat = {0b100, 0b110, 0b101, 0b011}
    for seed in range(20):
        rep = run_amplification(four_clause, RunConfig(seed=seed, max_restarts=1000))
        assert rep.ok
        if rep.satisfiable_verdict:
            assert rep.assignment_index in sat
    hits = sum(run_amplification(four_clause, RunConfig(seed=s, max_restarts=1000)).satisfiable_verdict
               for s in range(200))
    p = A.success_probability(density_profile(four_clause), 0, A.required_iterations(4, 2))
    assert abs(hits / 200 - p) <= 3 * math.sqrt(p * (1 - p) / 200) + 1e-9


def test_run_complete_formula_density_is_fixed():
    f = generate_complete(3)
    for seed in range(5):
        rep = run_amplification(f, RunConfig(seed=seed, max_restarts=5000))
        assert rep.ok and rep.achieved_density == 7 and rep.satisfiable_verdict is False


def test_readout_after_five_successes(two_clause):
    # joint probability at iteration 5 (aux=1 and maximal) vs the readout law after 5 successes
    p = density_profile(two_clause)
    s, _ = forced_iterations(prepare(two_clause), 4)
    s5 = apply_mx(s)
    assert float(np.sum(np.abs(s5.b[s5.densities == 2]) ** 2)) == pytest.approx(6 / (6 + 2 / 16), abs=1e-12)
    s, _ = forced_iterations(prepare(two_clause), 5)
    cond = float(np.sum(np.abs(s.a[s.densities == 2]) ** 2))
    assert cond == pytest.approx(6 / (6 + 2 / 32), abs=1e-12)
    assert cond == pytest.approx(A.success_probability(p, 0, 5), abs=1e-12)
    reps = run_trials(two_clause, RunConfig(r=5, seed=0, max_restarts=1000), 4000, profile=p)
    freq = np.mean([rep.achieved_density == 2 for rep in reps])
    assert abs(freq - cond) <= 3 * math.sqrt(cond * (1 - cond) / 4000)


def test_first_outcome_frequency_via_driver(two_clause):
    reps = run_trials(two_clause, RunConfig(r=1, max_restarts=0, seed=123), 4000)
    freq = np.mean([rep.aux_outcomes[0] == "1" for rep in reps])
    assert abs(freq - 0.875) <= 3 * math.sqrt(0.875 * 0.125 / 4000)
    failed = [rep for rep in reps if not rep.ok]
    assert failed and all(rep.status == "exhausted" and rep.measured_truth_vector is None for rep in failed)


def test_epsilon_gap_stops_early(two_clause):
    p = density_profile(two_clause)
    eps = 0.05
    first = next(r for r in range(1, 100) if A.gap_at(p, 0, r) <= eps)
    rep = run_amplification(two_clause, RunConfig(r=50, stop_rule="epsilon-gap", epsilon=eps, seed=4,
                                            max_restarts=1000))
    assert rep.ok and rep.iterations_completed == first < 50


def test_trials_are_ordered_and_seeded(two_clause):
    reps = run_trials(two_clause, RunConfig(seed=40), 8, workers=4)
    assert [rep.seed for rep in reps] == list(range(40, 48))
    serial = run_trials(two_clause, RunConfig(seed=40), 8, workers=1)
    assert [r.to_dict(False) for r in reps] == [r.to_dict(False) for r in serial]


def test_bad_config(two_clause):
    with pytest.raises(ValueError):
        run_amplification(two_clause, RunConfig(stop_rule="nope"))
    with pytest.raises(ValueError):
        run_amplification(two_clause, RunConfig(r=0))
