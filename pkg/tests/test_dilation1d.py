import math

import numpy as np
import pytest

from dilatedbasis.dilation1d import (
    DilationSystemSpec,
    basis_verdict,
    dual_chain_norms,
    exponent_fit,
    gram_section,
    incompleteness_witness,
    minimality_duals,
)
from dilatedbasis.errors import (
    BoundedSequence,
    InputError,
    NoInnerRoot,
    SizeLimit,
    ZeroConstantTerm,
)


def power(base, mu):
    c = np.array([1.0])
    for _ in range(mu):
        c = np.convolve(c, base)
    return c


def sine_gram(coeffs, p, N, grid=None):
    """Gram matrix of u_n = sum a_j sqrt(2/pi) sin(p^j n x) by trapezoid quadrature.

    The rule with K points on [0, 2 pi) is exact for trigonometric
    polynomials of degree < K, which covers every product here.
    """
    top = N * p ** (len(coeffs) - 1)
    K = grid or 4 * top + 8
    x = 2 * np.pi * np.arange(K) / K
    U = np.zeros((N, K), dtype=complex)
    for n in range(1, N + 1):
        for j, a in enumerate(coeffs):
            U[n - 1] += a * math.sqrt(2 / math.pi) * np.sin(p**j * n * x)
    # <f, g> = int_0^pi f conj(g) = 1/2 int_0^2pi for products of sines
    return (U @ U.conj().T) * (2 * np.pi / K) / 2


# -- input validation ------------------------------------------------------------


def test_spec_preconditions():
    with pytest.raises(ZeroConstantTerm):
        DilationSystemSpec([0, 1])
    with pytest.raises(InputError):
        DilationSystemSpec([1, 0])
    with pytest.raises(InputError):
        DilationSystemSpec([1, -1], p=4)
    assert DilationSystemSpec([2, -1], p=3).vector(2) == {2: 2, 6: -1}


# -- verdicts -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "coeffs, basis, complete",
    [
        ([2, -1], "yes", "yes"),
        ([1, -1], "no", "yes"),
        ([1, -2], "no", "no"),
        (np.convolve(power([1, -1], 2), [2, -1]), "no", "yes"),
        (np.convolve([1, -1], [3, -1]), "no", "yes"),
        (np.convolve([1, -2], [3, -1]), "no", "no"),
    ],
)
def test_basis_verdicts(coeffs, basis, complete):
    v = basis_verdict(DilationSystemSpec(coeffs)).as_dict()
    assert (v["basis"], v["complete"], v["minimal"]) == (basis, complete, "yes")


# -- Gram sections ------------------------------------------------------------------


@pytest.mark.parametrize("coeffs, p", [([2, -1], 2), ([1, -1], 3), ([1, 0.5j, -0.25], 2)])
def test_gram_matches_quadrature(coeffs, p):
    g = gram_section(DilationSystemSpec(coeffs, p), 12)
    assert g.hermitian
    assert np.allclose(g.entries, sine_gram(coeffs, p, 12), atol=1e-12)


def test_gram_sparsity_pattern():
    g = gram_section(DilationSystemSpec([1, -1, 0.5], 3), 40).entries
    for n in range(1, 41):
        for k in range(1, 41):
            ratio = max(n, k) / min(n, k)
            on_chain = ratio == int(ratio) and round(math.log(int(ratio), 3)) == math.log(int(ratio), 3)
            if not on_chain:
                assert g[n - 1, k - 1] == 0


def test_condition_bounded_for_outer_symbol():
    # (max |a| / min |a|)^2 on the circle = (3 / 1)^2 for a = 2 - z
    for N in (16, 64, 256):
        assert gram_section(DilationSystemSpec([2, -1]), N).condition <= 9 + 1e-9


def test_lambda_min_decreasing_on_circle_zero():
    lam = [gram_section(DilationSystemSpec([1, -1]), N).eig_min for N in (16, 32, 64, 128, 256)]
    assert all(b < a for a, b in zip(lam, lam[1:]))
    assert lam[-1] > 0


def test_gram_size_limit():
    with pytest.raises(SizeLimit):
        gram_section(DilationSystemSpec([2, -1]), 5000)


# -- witness ------------------------------------------------------------------------


@pytest.mark.parametrize("r", [0.3, 0.5, 0.9])
def test_witness_bound_holds(r):
    spec = DilationSystemSpec(np.convolve([1, -1 / r], [3, -1]))
    w = incompleteness_witness(spec, N=30, n_test=64)
    assert w.root == pytest.approx(r)
    assert w.max_residual <= w.residual_bound
    norm = math.sqrt(sum(abs(v) ** 2 for v in w.coefficients.values()))
    assert norm == pytest.approx(1.0)


def test_witness_examples():
    w = incompleteness_witness(DilationSystemSpec([1, -2]), N=30)
    assert w.max_residual <= 1e-8
    assert w.residual_bound <= 2.0**-30 * 10
    with pytest.raises(NoInnerRoot):
        incompleteness_witness(DilationSystemSpec([2, -1]))


# -- dual norms ---------------------------------------------------------------------


def test_dual_norm_closed_forms():
    n1 = dual_chain_norms(DilationSystemSpec([1, -1]), 200)
    assert np.allclose(n1.norm_sq, np.arange(1, 202), rtol=1e-12)
    n2 = dual_chain_norms(DilationSystemSpec(power([1, -1], 2)), 200)
    t = np.arange(201)
    closed = (t + 1) * (t + 2) * (2 * t + 3) / 6
    assert np.allclose(n2.norm_sq, closed, rtol=1e-12)
    assert n2.norm_sq[3] == 30


def test_dual_norms_geometric_for_outer_root():
    n = dual_chain_norms(DilationSystemSpec([2, -1]), 10)
    # b(s) = 2^-(s+1), so ||Phi_10||^2 = (1/4) (1 - 4^-11) / (1 - 1/4)
    assert n.norm_sq[10] == pytest.approx((1 - 4.0**-11) / 3, rel=1e-14)
    assert np.all(np.diff(n.norm_sq) >= 0)


def test_dual_norms_reject_bad_chain():
    with pytest.raises(InputError):
        dual_chain_norms(DilationSystemSpec([1, -1]), 5, omega=6)


@pytest.mark.parametrize("mu", [1, 2])
def test_exponent_fit(mu):
    n = dual_chain_norms(DilationSystemSpec(power([1, -1], mu)), 10_000)
    fit = exponent_fit(n)
    assert abs(fit.exponent - (mu - 0.5)) <= 0.05
    assert fit.ci_low <= fit.exponent <= fit.ci_high


def test_exponent_fit_bounded():
    with pytest.raises(BoundedSequence):
        exponent_fit(dual_chain_norms(DilationSystemSpec([2, -1]), 10_000))


# -- minimality -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "coeffs", [[1, -2], [1, -1], [2, -1], power([1, -1], 3), np.convolve([1, -2], [3, 1j])]
)
def test_biorthogonal_duals(coeffs):
    d = minimality_duals(DilationSystemSpec(coeffs), 64)
    assert d.max_residual <= 1e-10


def test_dual_hand_example():
    # a = 1 - z, k = 2: Phi = e_1 + e_2 (b = 1, 1)
    d = minimality_duals(DilationSystemSpec([1, -1]), 4)
    assert d.duals[2] == {1: 1, 2: 1}
    assert d.max_residual == 0
    with pytest.raises(InputError):
        minimality_duals(DilationSystemSpec([1, -1]), 8, trunc=4)


def test_duals_geometric_for_outer_root():
    d = minimality_duals(DilationSystemSpec([2, -1]), 16)
    assert d.duals[16] == pytest.approx({2**i: 0.5 ** (4 - i + 1) for i in range(5)})
