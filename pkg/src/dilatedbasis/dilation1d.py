"""Single-prime dilation systems ``u_n = sum_j a_j e_{p**j n}`` in l^2(N).

Everything here lives in the orthonormal sine model described in
:mod:`dilatedbasis.symbol`: ``u_n = a(T) e_n`` with ``T e_n = e_{pn}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import BoundedSequence, InputError, NoInnerRoot, SizeLimit, ZeroConstantTerm
from .symbol import (
    RootClassification,
    UnivariatePolynomial,
    classify_roots,
    is_prime,
    omega_decompose,
    series_inverse,
)

MAX_GRAM_SIZE = 4096


@dataclass
class DilationSystemSpec:
    coeffs: np.ndarray
    p: int = 2
    label: str = ""

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if self.coeffs.ndim != 1 or len(self.coeffs) == 0:
            raise InputError("coefficients must be a nonempty sequence")
        if self.coeffs[0] == 0:
            raise ZeroConstantTerm("a_0 must be nonzero")
        if self.coeffs[-1] == 0:
            raise InputError("a_m must be nonzero")
        if not is_prime(int(self.p)):
            raise InputError(f"dilation factor {self.p} is not prime")
        self.p = int(self.p)

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def polynomial(self) -> UnivariatePolynomial:
        return UnivariatePolynomial(self.coeffs)

    def vector(self, n: int) -> dict:
        """Coefficients of ``u_n`` in the orthonormal sine basis."""
        return {n * self.p**j: complex(a) for j, a in enumerate(self.coeffs)}


@dataclass
class GramSection:
    size: int
    entries: np.ndarray
    hermitian: bool
    eig_min: float
    eig_max: float

    @property
    def condition(self) -> float:
        return self.eig_max / self.eig_min if self.eig_min > 0 else math.inf


def gram_section(spec: DilationSystemSpec, N: int, max_size: int = MAX_GRAM_SIZE) -> GramSection:
    """Gram matrix of ``u_1, ..., u_N`` (exact finite sums, no quadrature)."""
    if N < 1:
        raise InputError("N must be >= 1")
    if N > max_size:
        raise SizeLimit(f"Gram section of size {N} exceeds limit {max_size}")
    a, p = spec.coeffs, spec.p
    G = np.zeros((N, N), dtype=complex)
    for n in range(1, N + 1):
        for j, aj in enumerate(a):
            top = n * p**j
            for jj, ajj in enumerate(a):
                q, r = divmod(top, p**jj)
                if r == 0 and q <= N:
                    G[n - 1, q - 1] += aj * np.conj(ajj)
    return _section(G)


def _section(G) -> GramSection:
    herm = bool(np.allclose(G, G.conj().T, rtol=0, atol=1e-14 * max(1.0, np.abs(G).max())))
    ev = np.linalg.eigvalsh(G)
    return GramSection(G.shape[0], G, herm, float(ev[0]), float(ev[-1]))


@dataclass
class Verdict:
    basis: bool
    complete: bool | None
    minimal: bool
    reasons: list
    classification: RootClassification

    def as_dict(self):
        yn = {True: "yes", False: "no", None: "unknown"}
        return {
            "basis": yn[self.basis],
            "complete": yn[self.complete],
            "minimal": yn[self.minimal],
            "reasons": list(self.reasons),
            "classification": self.classification.as_dict(),
        }


def basis_verdict(spec: DilationSystemSpec, tol: float = 1e-8) -> Verdict:
    """Basis / completeness / minimality read off the zero set of ``a``.

    * basis iff no zeros in the closed unit disk;
    * a zero inside the disk makes the system incomplete;
    * with no zeros inside, the system is complete;
    * the system is always minimal.
    """
    cls = classify_roots(spec.polynomial, tol)
    inner, circle, outer = cls.F_minus, cls.F_zero, cls.F_plus
    reasons = []
    basis = not inner and not circle
    if basis:
        reasons.append("all zeros lie outside the closed unit disk: a(T) is invertible")
    if inner:
        reasons.append(f"{len(inner)} zero(s) inside the unit disk: kernel witness exists")
        complete = False
    else:
        complete = True
        if circle:
            reasons.append(
                f"{len(circle)} zero(s) on the unit circle (kappa*={cls.kappa_star}): "
                "complete but dual norms are unbounded"
                if cls.star
                else f"{len(circle)} zero(s) on the unit circle and {len(outer)} outside: "
                "the outer factor is invertible and the remainder is complete"
            )
    reasons.append("minimal: biorthogonal duals exist because a_0 != 0")
    return Verdict(basis, complete, True, reasons, cls)


@dataclass
class Witness:
    root: complex
    omega: int
    N: int
    coefficients: dict  # index -> value, unit norm
    max_residual: float
    residual_bound: float
    n_test: int


def incompleteness_witness(
    spec: DilationSystemSpec, which_root: int = 0, N: int = 30, n_test: int = 64, tol=1e-8
) -> Witness:
    """A unit vector orthogonal to every ``u_n`` (up to truncation).

    Uses the truncated reproducing kernel of the chain ``omega = 1`` at an
    inner zero ``alpha0``: coefficient ``conj(alpha0)**j`` at index ``p**j``.
    ``<u_{p^k}, g>`` is then proportional to ``alpha0**k a(alpha0) = 0``.
    """
    cls = classify_roots(spec.polynomial, tol)
    inner = cls.F_minus
    if not inner:
        raise NoInnerRoot("no zeros inside the unit disk; the system is complete")
    if not 0 <= which_root < len(inner):
        raise InputError(f"which_root must be in [0, {len(inner)})")
    alpha0 = inner[which_root].location
    p = spec.p
    vals = np.conj(alpha0) ** np.arange(N)
    vals = vals / np.linalg.norm(vals)
    g = {p**j: complex(v) for j, v in enumerate(vals)}

    worst = 0.0
    for n in range(1, n_test + 1):
        s = sum(c * np.conj(g.get(i, 0.0)) for i, c in spec.vector(n).items())
        worst = max(worst, abs(s))
    r = abs(alpha0)
    bound = r**N / math.sqrt(1 - r * r) * np.max(np.abs(spec.coeffs)) * (spec.m + 1)
    return Witness(complex(alpha0), 1, N, g, float(worst), float(bound), n_test)


@dataclass
class ExponentFit:
    exponent: float
    ci_low: float
    ci_high: float
    stderr: float
    tau_window: tuple


@dataclass
class DualChainNorms:
    tau: np.ndarray
    norm_sq: np.ndarray
    omega: int = 1
    fit: ExponentFit | None = None
    notes: list = field(default_factory=list)

    @property
    def norm(self):
        return np.sqrt(self.norm_sq)

    @property
    def tau_max(self) -> int:
        return int(self.tau[-1])


def dual_chain_norms(spec: DilationSystemSpec, tau_max: int, omega: int = 1) -> DualChainNorms:
    """``||Phi_tau||^2 = sum_{sigma <= tau} |b(sigma)|^2`` along one chain.

    ``b`` are the Taylor coefficients of ``1/a``. The value does not depend on
    the chain in the l^2 model; ``omega`` is recorded and checked only.
    """
    if tau_max < 0:
        raise InputError("tau_max must be >= 0")
    if omega_decompose(omega, (spec.p,)).omega != omega:
        raise InputError(f"omega={omega} is divisible by p={spec.p}")
    b = series_inverse(spec.coeffs, tau_max)
    norm_sq = np.cumsum(np.abs(b) ** 2)
    return DualChainNorms(np.arange(tau_max + 1), norm_sq, omega)


def exponent_fit(norms: DualChainNorms, tau_range=(100, 10_000), plateau_rtol=1e-6) -> ExponentFit:
    """Log-log slope of ``||Phi_tau||`` against ``tau`` on the upper half of the range.

    "Upper half" is taken on the log scale: ``tau in [sqrt(lo*hi), hi]``.
    The confidence interval is the 95% t-interval of the regression slope.
    """
    lo, hi = tau_range
    if hi > norms.tau_max:
        raise InputError(f"norms computed only up to tau={norms.tau_max}")
    start = int(math.ceil(math.sqrt(lo * hi)))
    tau = np.unique(np.geomspace(start, hi, 200).astype(int))
    y = norms.norm[tau]
    if (y[-1] - y[0]) <= plateau_rtol * y[-1]:
        raise BoundedSequence(f"dual norms plateau at {y[-1]:.12g}")
    res = stats.linregress(np.log(tau), np.log(y))
    q = stats.t.ppf(0.975, len(tau) - 2)
    fit = ExponentFit(
        float(res.slope),
        float(res.slope - q * res.stderr),
        float(res.slope + q * res.stderr),
        float(res.stderr),
        (start, hi),
    )
    norms.fit = fit
    return fit


@dataclass
class MinimalityDuals:
    duals: dict  # k -> {index: coefficient}
    residuals: np.ndarray  # |<u_n, Phi_k> - delta_kn|, rows k, cols n
    n_max: int

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if self.residuals.size else 0.0


def minimality_duals(spec: DilationSystemSpec, n_max: int, trunc: int | None = None) -> MinimalityDuals:
    """Biorthogonal duals ``Phi_k`` for ``k <= n_max`` and their residuals.

    For ``k = omega * p**tau`` the dual is supported on ``omega * p**i``,
    ``i <= tau``, with coefficient ``conj(b(tau - i))``. Because each dual
    lives on indices ``<= k``, truncating the ambient space at ``n_max`` is
    exact; ``trunc`` may only enlarge it.
    """
    if spec.coeffs[0] == 0:
        raise ZeroConstantTerm("a_0 = 0")
    trunc = n_max if trunc is None else trunc
    if trunc < n_max:
        raise InputError("trunc must be >= n_max")
    p = spec.p
    tau_top = int(math.floor(math.log(n_max, p) + 1e-12)) if n_max >= 1 else 0
    b = series_inverse(spec.coeffs, tau_top)
    duals = {}
    for k in range(1, n_max + 1):
        dec = omega_decompose(k, (p,))
        tau = dec.alpha[0]
        duals[k] = {dec.omega * p**i: complex(np.conj(b[tau - i])) for i in range(tau + 1)}

    U = np.zeros((n_max, trunc), dtype=complex)
    for n in range(1, n_max + 1):
        for i, c in spec.vector(n).items():
            if i <= trunc:
                U[n - 1, i - 1] = c
    D = np.zeros((n_max, trunc), dtype=complex)
    for k, d in duals.items():
        for i, c in d.items():
            D[k - 1, i - 1] = c
    pairing = D.conj() @ U.T  # rows k, cols n: sum_i u_n(i) conj(Phi_k(i))
    res = np.abs(pairing - np.eye(n_max))
    return MinimalityDuals(duals, res, n_max)
