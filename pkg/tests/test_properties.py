import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from dilatedbasis.dilation1d import DilationSystemSpec, dual_chain_norms
from dilatedbasis.polydisk import coefficient_series, convolution_residual
from dilatedbasis.symbol import SparseSymbol, chain_index, omega_decompose, omega_parseval_check, series_inverse

PRIME_SETS = st.sampled_from([(2,), (3,), (2, 3), (2, 5, 7), (3, 11)])
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@given(st.integers(1, 10**12), PRIME_SETS)
def test_omega_round_trip(n, primes):
    d = omega_decompose(n, primes)
    assert all(d.omega % p for p in primes)
    assert chain_index(d.omega, d.alpha, primes) == n


@given(st.dictionaries(st.integers(1, 10**6), finite, min_size=1, max_size=40), PRIME_SETS)
def test_parseval(f, primes):
    total = sum(v * v for v in f.values())
    assert omega_parseval_check(f, primes) <= 1e-12 * max(total, 1e-300)


small = st.floats(-2, 2, allow_nan=False).filter(lambda x: abs(x) > 1e-3)


@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=5), small)
def test_series_inverse_convolves_to_delta(tail, a0):
    a = np.array([a0, *tail])
    # keep the truncated product well scaled so the test measures the recurrence, not overflow
    b = series_inverse(a, 12)
    if not np.all(np.isfinite(b)) or np.max(np.abs(b)) > 1e8:
        return
    conv = np.convolve(a, b)[:13]
    target = np.zeros(13)
    target[0] = 1
    assert np.max(np.abs(conv - target)) <= 1e-9 * max(1.0, np.max(np.abs(b)) * np.max(np.abs(a)))


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.floats(-0.4, 0.4, allow_nan=False)), max_size=4),
    st.floats(0.5, 2, allow_nan=False),
)
def test_multivariate_inverse_residual(terms, a0):
    t = {(0, 0): a0}
    for i, j, v in terms:
        if (i, j) != (0, 0) and v != 0:
            t[(i, j)] = v
    A = SparseSymbol(t)
    tab = coefficient_series(A, 8, mode="full")
    assert convolution_residual(A, tab) <= 1e-10 * max(1.0, max(abs(x) for x in tab.shell_sums))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=4), st.floats(0.5, 3, allow_nan=False))
def test_dual_norms_nondecreasing(tail, a0):
    spec = DilationSystemSpec([a0, *tail]) if tail[-1] != 0 else DilationSystemSpec([a0])
    n = dual_chain_norms(spec, 50)
    finite_part = n.norm_sq[np.isfinite(n.norm_sq)]
    assert np.all(np.diff(finite_part) >= 0)
    assert n.norm_sq[0] == abs(1 / a0) ** 2 or np.isclose(n.norm_sq[0], abs(1 / a0) ** 2, rtol=1e-14)
