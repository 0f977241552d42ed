import numpy as np
import pytest

from qmaxsat import kernels
from qmaxsat.formula import generate_random
from qmaxsat.simulator import RunConfig, run_amplification

needs_ext = pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="compiled kernels not built")


def test_backend_selection():
    assert kernels.BACKEND in kernels.BACKENDS
    assert kernels.get() is kernels.BACKENDS[kernels.BACKEND]
    with pytest.raises(ValueError):
        kernels.get("fortran")


@needs_ext
@pytest.mark.parametrize("n, m, seed", [(3, 5, 0), (6, 40, 1), (9, 60, 2)])
def test_densities_agree(n, m, seed):
    vars_, neg = generate_random(n, m, seed).clause_arrays()
    a = kernels.get("cython").clause_densities(n, vars_, neg)
    b = kernels.get("python").clause_densities(n, vars_, neg)
    assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("eps", [-1.0, 1e-3])
def test_attempt_is_bit_identical(eps):
    rng = np.random.default_rng(3)
    N = 32
    ar0, ai0 = rng.normal(size=N), rng.normal(size=N)
    norm = np.sqrt(np.sum(ar0**2 + ai0**2))
    ar0, ai0 = ar0 / norm, ai0 / norm
    d = rng.integers(0, 9, size=N)
    c1 = (1 - np.exp(1j * np.pi * d / 8)) / 2
    c1r, c1i = np.ascontiguousarray(c1.real), np.ascontiguousarray(c1.imag)
    u = rng.random(200) * 0.9
    mask = (d == d.max()).astype(np.uint8)
    results = []
    for name in ("cython", "python"):
        ar, ai = ar0.copy(), ai0.copy()
        out = kernels.get(name).amplify_attempt(ar, ai, c1r, c1i, u, mask, eps)
        results.append((out, ar.tobytes(), ai.tobytes()))
    assert results[0] == results[1]


@needs_ext
def test_runs_identical_across_backends():
    f = generate_random(5, 14, 9)
    for seed in range(10):
        a = run_amplification(f, RunConfig(mu=2, seed=seed, backend="cython", max_restarts=10**4))
        b = run_amplification(f, RunConfig(mu=2, seed=seed, backend="python", max_restarts=10**4))
        assert a.to_dict(False) | {"backend": 0} == b.to_dict(False) | {"backend": 0}
