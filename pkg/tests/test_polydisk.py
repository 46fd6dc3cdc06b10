import itertools
import math

import numpy as np
import pytest
from scipy.special import comb

from dilatedbasis.errors import InputError, SizeLimit, ZeroConstantTerm
from dilatedbasis.polydisk import (
    autocorrelation,
    biorthogonality_suite,
    coefficient_series,
    convolution_residual,
    dual_functional,
    e_star_symbol,
    gram_section_polydisk,
    h2_verdict,
    is_e_star,
    operator_norm,
    pairing,
    partial_sum_matrix,
    partial_sum_norms,
    rank_one_matrix,
    riesz_basis_verdict,
    shell_sums,
    system_vector,
    uniform_e_star,
)
from dilatedbasis.symbol import SparseSymbol


def multinomial_b(c, sigma):
    """Taylor coefficient of 1 / (1 - sum c_k w_k): multinomial(|sigma|; sigma) prod c^sigma."""
    n = sum(sigma)
    coef = math.factorial(n)
    for s in sigma:
        coef //= math.factorial(s)
    return coef * math.prod(ck**s for ck, s in zip(c, sigma))


def brute_gram(A, box):
    """<v(alpha), v(beta)> by expanding A w^alpha into a dense coefficient array."""
    shape = tuple(b + d + 1 for b, d in zip(box, A.degrees))
    idx = list(itertools.product(*(range(b + 1) for b in box)))
    vecs = []
    for alpha in idx:
        arr = np.zeros(shape, dtype=complex)
        for k, v in A.terms.items():
            arr[tuple(a + kk for a, kk in zip(alpha, k))] += v
        vecs.append(arr.ravel())
    V = np.array(vecs)
    return V @ V.conj().T


# -- coefficient series ---------------------------------------------------------------


def test_e_star_constructor():
    A = e_star_symbol([0.25, 0.75])
    assert A.terms == {(0, 0): 1, (1, 0): -0.25, (0, 1): -0.75}
    assert A([1, 1]) == 0
    assert is_e_star(A) and not is_e_star(SparseSymbol({(0,): 1, (1,): -0.5}))
    with pytest.raises(InputError):
        e_star_symbol([0.5, 0.6])
    with pytest.raises(InputError):
        e_star_symbol([1.5, -0.5])


def test_series_trivial_cases():
    t = coefficient_series(SparseSymbol({(0,): 1, (1,): -1}), 10)
    assert all(t[(k,)] == 1 for k in range(11))
    t = coefficient_series(SparseSymbol({(0, 0): 2}), 3)
    assert t[(0, 0)] == 0.5 and t[(1, 2)] == 0
    with pytest.raises(ZeroConstantTerm):
        coefficient_series(SparseSymbol({(1, 0): 1}), 3)


@pytest.mark.parametrize("c", [(0.5, 0.5), (0.2, 0.3, 0.5), (0.25,) * 4])
def test_series_matches_multinomial(c):
    N = 8 if len(c) < 4 else 6
    t = coefficient_series(e_star_symbol(c), N, mode="full")
    worst = 0.0
    for n in range(N + 1):
        for sigma, b in t.shell_items(n):
            worst = max(worst, abs(b - multinomial_b(c, sigma)))
    assert worst <= 1e-14


def test_series_e_star_example():
    assert coefficient_series(uniform_e_star(2), 2)[(1, 1)] == pytest.approx(0.5)


def test_series_general_symbol_residual():
    A = SparseSymbol({(0, 0): 2 + 1j, (1, 0): -0.5, (0, 2): 0.3j, (1, 1): 0.25})
    t = coefficient_series(A, 10, mode="full")
    assert convolution_residual(A, t) <= 1e-12


def test_streaming_agrees_with_full():
    A = uniform_e_star(3)
    full = coefficient_series(A, 40, mode="full")
    stream = coefficient_series(A, 40, mode="streaming")
    assert np.allclose(full.shell_sums, stream.shell_sums, rtol=1e-14)
    assert sum(s is not None for s in stream.shells) == 1
    with pytest.raises(KeyError):
        stream[(1, 1, 1)]


def test_shell_sums_central_binomial():
    sh = shell_sums(uniform_e_star(2), 200)
    n = np.arange(201)
    assert np.allclose(sh.s, comb(2 * n, n, exact=False) / 4.0**n, rtol=1e-12)
    assert sh.s[2] == pytest.approx(0.375)
    assert sh.slope == pytest.approx(-0.5, abs=0.02)
    assert h2_verdict(sh).verdict == "non-member"


def test_h2_member_for_outer_symbol():
    sh = shell_sums(SparseSymbol({(0, 0): 1, (1, 0): -0.25, (0, 1): -0.25}), 120)
    assert h2_verdict(sh).verdict == "member"


# -- duals ------------------------------------------------------------------------------


def test_dual_hand_example():
    A = SparseSymbol({(0, 0): 1, (1, 0): -0.5, (0, 1): -0.5})
    phi = dual_functional(A, (1, 0))
    assert phi.terms == {(-1, 0): 1, (0, 0): 0.5}
    assert pairing(phi.terms, system_vector(A, (0, 0))) == 0
    assert pairing(phi.terms, system_vector(A, (1, 0))) == 1
    phi0 = dual_functional(A, (0, 0))
    assert pairing(phi0.terms, system_vector(A, (0, 0))) == 1


def test_pairing_is_unconjugated():
    assert pairing({(1,): 1j}, {(-1,): 1j}) == -1


def test_biorthogonality_e_star_m3():
    assert biorthogonality_suite(uniform_e_star(3), (2, 2, 2)) <= 1e-12


def test_dual_norm_formula():
    A = uniform_e_star(2)
    phi = dual_functional(A, (3, 2))
    want = math.sqrt(sum(multinomial_b((0.5, 0.5), s) ** 2 for s in itertools.product(range(4), range(3))))
    assert phi.norm == pytest.approx(want, rel=1e-14)


# -- Riesz / Gram ------------------------------------------------------------------------


def test_autocorrelation_hermitian():
    A = SparseSymbol({(0, 0): 1, (1, 0): 0.3j, (0, 1): -0.2})
    R = autocorrelation(A)
    for g, v in R.items():
        assert R[tuple(-x for x in g)] == pytest.approx(np.conj(v))


@pytest.mark.parametrize(
    "A, box",
    [
        (SparseSymbol({(0,): 1, (1,): -0.5}), (6,)),
        (SparseSymbol({(0, 0): 1, (1, 1): -0.5}), (3, 3)),
        (SparseSymbol({(0, 0): 1, (1, 0): 0.3j, (0, 2): -0.2}), (2, 3)),
        (uniform_e_star(3), (2, 2, 2)),
    ],
)
def test_gram_matches_brute_force(A, box):
    g = gram_section_polydisk(A, box)
    assert np.allclose(g.entries, brute_gram(A, box), atol=1e-14)


def test_gram_example_and_limit():
    g = gram_section_polydisk(SparseSymbol({(0,): 1, (1,): -0.5}), (1,))
    assert np.allclose(g.entries, [[1.25, -0.5], [-0.5, 1.25]])
    with pytest.raises(SizeLimit):
        gram_section_polydisk(uniform_e_star(4), (10, 10, 10, 10))


@pytest.mark.parametrize(
    "A, verdict",
    [
        (SparseSymbol({(0,): 1, (1,): -0.5}), "yes"),
        (SparseSymbol({(0, 0): 1, (1, 1): -0.5}), "yes"),
        (SparseSymbol({(0,): 1, (1,): -1}), "no"),
        (uniform_e_star(2), "no"),
        (SparseSymbol({(0, 0): 1, (1, 0): -2}), "no"),  # zero inside the polydisk
    ],
)
def test_riesz_verdicts(A, verdict):
    assert riesz_basis_verdict(A).riesz == verdict


# -- partial sums --------------------------------------------------------------------------


def test_sigma_zero_is_rank_one():
    A = uniform_e_star(2)
    rep = partial_sum_norms(A, [(0, 0)])[0]
    assert rep.norm == pytest.approx(math.sqrt(1.5), abs=1e-6)
    assert rep.rank_one_norm == pytest.approx(math.sqrt(1.5))


def test_rank_one_norm_identity():
    A = SparseSymbol({(0, 0): 1, (1, 0): -0.3, (0, 1): 0.2j})
    tau, box = (2, 1), (4, 3)
    nrm, _ = operator_norm(rank_one_matrix(A, tau, box), tol=1e-10)
    assert nrm == pytest.approx(dual_functional(A, tau).norm * A.l2_norm(), rel=1e-6)


def test_partial_sum_is_identity_on_span():
    A = SparseSymbol({(0, 0): 1, (1, 0): -0.3, (0, 1): 0.2})
    tau, box = (2, 2), (3, 3)
    M = partial_sum_matrix(A, tau, box).toarray()
    shape = (4, 4)
    for alpha in itertools.product(range(3), range(3)):
        f = np.zeros(16)
        for k, v in system_vector(A, alpha).items():
            f[np.ravel_multi_index(k, shape)] = v.real
        assert np.allclose(M @ f, f, atol=1e-12)
    with pytest.raises(InputError):
        partial_sum_matrix(A, tau, (2, 2))


def test_partial_sums_bounded_for_riesz_symbol():
    A = SparseSymbol({(0, 0): 1, (1, 1): -0.5})
    norms = [r.norm for r in partial_sum_norms(A, [(n, n) for n in range(1, 6)])]
    assert max(norms) < 3
