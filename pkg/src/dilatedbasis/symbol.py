"""Polynomial symbols, root classification and prime-power bookkeeping.

Coefficient model
-----------------
The orthonormal sines ``e_n = sqrt(2/pi) sin(nx)`` identify ``L^2[0, pi]``
with ``l^2(N)``. The dilation ``f(x) -> f(p x)`` sends ``e_n`` to ``e_{pn}``,
so every chain ``{omega * p**alpha}`` with ``omega`` free of the primes is an
invariant copy of ``H^2`` of the (poly)disk, on which dilation by ``p_j`` is
multiplication by ``w_j``.
"""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    BoundaryWarning,
    DegenerateInput,
    InconsistentClassification,
    InputError,
    NotOuter,
)
from .roots import cluster_roots, derivative_test, find_roots

MultiIndex = tuple  # tuple[int, ...] of nonnegative exponents


def leq(sigma, tau):
    """Componentwise partial order on multi-indices."""
    return all(s <= t for s, t in zip(sigma, tau))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@dataclass
class UnivariatePolynomial:
    """``a(z) = sum_j coeffs[j] z**j``."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if self.coeffs.ndim != 1 or len(self.coeffs) == 0:
            raise DegenerateInput("coefficient sequence must be a nonempty 1-D array")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __mul__(self, other):
        return UnivariatePolynomial(np.convolve(self.coeffs, other.coeffs))

    @classmethod
    def from_roots(cls, roots, multiplicities=None, lead=1.0):
        """``lead * prod (z - r)**mu``."""
        out = np.array([lead], dtype=complex)
        multiplicities = multiplicities or [1] * len(roots)
        for r, mu in zip(roots, multiplicities):
            for _ in range(mu):
                out = np.convolve(out, [-r, 1.0])
        return cls(out)

    def validate(self):
        if self.degree < 1:
            raise DegenerateInput("analysis needs degree >= 1")
        if self.coeffs[0] == 0:
            raise DegenerateInput("a_0 = 0")
        if self.coeffs[-1] == 0:
            raise DegenerateInput("a_m = 0")


@dataclass
class Root:
    location: complex
    multiplicity: int
    modulus_margin: float  # |alpha| - 1
    part: str  # "F_minus" | "F_zero" | "F_plus"


@dataclass
class RootClassification:
    roots: list
    tolerance_used: float
    degree: int
    kappa_star: int | None = None
    delta: float | None = None
    warnings: list = field(default_factory=list)

    def part(self, name):
        return [r for r in self.roots if r.part == name]

    @property
    def F_minus(self):
        return self.part("F_minus")

    @property
    def F_zero(self):
        return self.part("F_zero")

    @property
    def F_plus(self):
        return self.part("F_plus")

    @property
    def star(self) -> bool:
        """All zeros on the unit circle."""
        return not self.F_minus and not self.F_plus

    def as_dict(self):
        return {
            "roots": [
                {
                    "re": r.location.real,
                    "im": r.location.imag,
                    "multiplicity": r.multiplicity,
                    "modulus_margin": r.modulus_margin,
                    "part": r.part,
                }
                for r in self.roots
            ],
            "kappa_star": self.kappa_star,
            "delta": self.delta,
            "tolerance_used": self.tolerance_used,
            "warnings": list(self.warnings),
        }


def classify_roots(poly, tol=1e-8, cluster_radius=1e-6) -> RootClassification:
    """Split the zeros of ``a`` into inside / on / outside the unit circle.

    Multiplicities come from clustering (see :func:`roots.cluster_roots`);
    each cluster is checked against derivative magnitudes. Roots just
    outside the tolerance band (within ``10 * tol`` of the circle) produce a
    :class:`BoundaryWarning`.
    """
    if not isinstance(poly, UnivariatePolynomial):
        poly = UnivariatePolynomial(poly)
    poly.validate()
    if tol <= 0:
        raise InputError("tol must be positive")
    coeffs = poly.coeffs / np.max(np.abs(poly.coeffs))
    raw = find_roots(coeffs)
    clusters = cluster_roots(coeffs, raw, radius=cluster_radius)

    roots, notes = [], []
    for c in clusters:
        if c.multiplicity > 1 and not derivative_test(coeffs, c.location, c.multiplicity):
            notes.append(f"multiplicity check failed at {c.location:.6g} (mu={c.multiplicity})")
        margin = abs(c.location) - 1.0
        if abs(margin) <= tol:
            part = "F_zero"
        elif margin < 0:
            part = "F_minus"
        else:
            part = "F_plus"
        if tol < abs(margin) <= 10 * tol:
            msg = f"root {c.location:.12g} lies within 10*tol of the unit circle"
            notes.append(msg)
            warnings.warn(msg, BoundaryWarning, stacklevel=2)
        roots.append(Root(complex(c.location), c.multiplicity, float(margin), part))
    roots.sort(key=lambda r: (abs(r.location), np.angle(r.location)))

    cls = RootClassification(roots, tol, poly.degree, warnings=notes)
    if sum(r.multiplicity for r in roots) != poly.degree:
        raise InconsistentClassification("multiplicities do not add up to the degree")
    if cls.star:
        cls.kappa_star = max(r.multiplicity - 1 for r in cls.F_zero)
    if cls.F_plus:
        cls.delta = (min(abs(r.location) for r in cls.F_plus) - 1.0) / 2.0
    return cls


def factor_by_modulus(poly, cls: RootClassification):
    """Return ``(a_minus, a_zero, a_plus)`` whose product is ``poly``.

    Each factor is ``prod (z - alpha)**mu`` over its part of the zero set.
    The leading coefficient ``a_m`` rides on ``a_plus``, or on ``a_zero``
    when there are no outer roots, or on ``a_minus`` when all roots are inner.
    """
    if not isinstance(poly, UnivariatePolynomial):
        poly = UnivariatePolynomial(poly)
    if cls.degree != poly.degree or sum(r.multiplicity for r in cls.roots) != poly.degree:
        raise InconsistentClassification("classification does not match polynomial degree")
    lead = poly.coeffs[-1]
    holder = "F_plus" if cls.F_plus else ("F_zero" if cls.F_zero else "F_minus")
    out = []
    for name in ("F_minus", "F_zero", "F_plus"):
        part = cls.part(name)
        out.append(
            UnivariatePolynomial.from_roots(
                [r.location for r in part],
                [r.multiplicity for r in part],
                lead=lead if name == holder else 1.0,
            )
        )
    return tuple(out)


def series_inverse(coeffs, N):
    """First ``N + 1`` Taylor coefficients of ``1 / sum coeffs[j] z**j``."""
    c = np.asarray(coeffs, dtype=complex)
    if c[0] == 0:
        raise DegenerateInput("constant term must be nonzero")
    b = np.zeros(N + 1, dtype=complex)
    b[0] = 1.0 / c[0]
    d = len(c) - 1
    rev = c[1:][::-1]
    for n in range(1, N + 1):
        k = min(n, d)
        # sum_{j=1..k} c_j b_{n-j}
        b[n] = -np.dot(rev[d - k :], b[n - k : n]) / c[0]
    return b


def neumann_inverse(a_plus, N):
    """Coefficients of ``1 / a_plus`` through order ``N``.

    Stands in for the resolvent contour integral of ``(a_plus(T))^{-1}``; on
    the coefficient model the two agree, and the series needs no quadrature.
    Coefficients decay like ``(min |alpha|)**(-j)`` over the roots of
    ``a_plus``.
    """
    if not isinstance(a_plus, UnivariatePolynomial):
        a_plus = UnivariatePolynomial(a_plus)
    c = a_plus.coeffs
    if len(c) > 1 and np.any(c[1:] != 0):
        trimmed = np.trim_zeros(c, "b")
        if trimmed[0] == 0:
            raise NotOuter("a_plus vanishes at the origin")
        if len(trimmed) > 1:
            rts = find_roots(trimmed)
            if np.min(np.abs(rts)) <= 1.0:
                raise NotOuter(f"a_plus has a root of modulus {np.min(np.abs(rts)):.6g} <= 1")
        c = trimmed
    elif c[0] == 0:
        raise NotOuter("a_plus is identically zero")
    return series_inverse(c, N)


def decay_rate(a_plus) -> float:
    """Geometric decay rate ``1 / min |alpha|`` of the coefficients of ``1/a_plus``."""
    c = np.trim_zeros(np.asarray(getattr(a_plus, "coeffs", a_plus), dtype=complex), "b")
    if len(c) < 2:
        return 0.0
    return float(1.0 / np.min(np.abs(find_roots(c))))


# ---------------------------------------------------------------------------
# prime-power chains


@dataclass(frozen=True)
class OmegaDecomposition:
    omega: int
    alpha: tuple

    def reconstruct(self, primes) -> int:
        return self.omega * math.prod(p**a for p, a in zip(primes, self.alpha))


def _check_primes(primes):
    primes = tuple(int(p) for p in primes)
    if len(set(primes)) != len(primes):
        raise InputError("primes must be distinct")
    bad = [p for p in primes if not is_prime(p)]
    if bad:
        raise InputError(f"not prime: {bad}")
    return primes


def omega_decompose(n: int, primes) -> OmegaDecomposition:
    """Write ``n = omega * prod p_j**alpha_j`` with ``omega`` free of the ``p_j``."""
    if n < 1:
        raise InputError("n must be a positive integer")
    alpha = []
    for p in primes:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        alpha.append(k)
    return OmegaDecomposition(n, tuple(alpha))


def chain_index(omega: int, alpha, primes) -> int:
    """Inverse of :func:`omega_decompose`; dilation by ``p_j`` bumps ``alpha_j``."""
    return omega * math.prod(p**a for p, a in zip(primes, alpha))


def omega_parseval_check(f: Mapping[int, complex], primes) -> float:
    """``| ||f||^2 - sum_omega ||Q(omega) f||^2 |`` for finitely supported ``f``."""
    primes = _check_primes(primes)
    total = math.fsum(abs(v) ** 2 for v in f.values())
    by_chain = defaultdict(list)
    for n, v in f.items():
        by_chain[omega_decompose(n, primes).omega].append(abs(v) ** 2)
    chains = math.fsum(math.fsum(vals) for vals in by_chain.values())
    return abs(total - chains)


def chain_norms(f: Mapping[int, complex], primes) -> dict:
    """``||Q(omega) f||^2`` per chain."""
    out = defaultdict(float)
    for n, v in f.items():
        out[omega_decompose(n, primes).omega] += abs(v) ** 2
    return dict(out)


# ---------------------------------------------------------------------------
# multivariate symbols


@dataclass
class SparseSymbol:
    """``A(w) = sum_{alpha in K} a(alpha) w**alpha`` on the polydisk."""

    terms: dict
    arity: int | None = None
    primes: tuple | None = None

    def __post_init__(self):
        terms = {}
        for k, v in dict(self.terms).items():
            k = (int(k),) if np.isscalar(k) else tuple(int(x) for x in k)
            if any(x < 0 for x in k):
                raise InputError(f"negative exponent in {k}")
            v = complex(v)
            if v != 0:
                terms[k] = terms.get(k, 0j) + v
        if not terms:
            raise DegenerateInput("symbol has no nonzero terms")
        arities = {len(k) for k in terms}
        if len(arities) != 1:
            raise InputError("inconsistent multi-index lengths")
        arity = arities.pop()
        if self.arity is not None and self.arity != arity:
            raise InputError(f"declared arity {self.arity} but exponents have length {arity}")
        self.terms = terms
        self.arity = arity
        if self.primes is not None:
            self.primes = _check_primes(self.primes)
            if len(self.primes) != arity:
                raise InputError("need one prime per variable")

    @classmethod
    def from_dense(cls, coeffs):
        """Univariate symbol from an ascending coefficient list."""
        return cls({(j,): c for j, c in enumerate(coeffs)})

    @property
    def constant(self) -> complex:
        return self.terms.get((0,) * self.arity, 0j)

    @property
    def support(self):
        return sorted(self.terms)

    @property
    def degrees(self) -> tuple:
        """Per-variable degree."""
        return tuple(max(k[j] for k in self.terms) for j in range(self.arity))

    @property
    def total_degree(self) -> int:
        return max(sum(k) for k in self.terms)

    @property
    def scale(self) -> float:
        return max(abs(v) for v in self.terms.values())

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.terms.values())

    def l2_norm(self) -> float:
        return math.sqrt(math.fsum(abs(v) ** 2 for v in self.terms.values()))

    def __call__(self, w):
        """Evaluate at points ``w`` of shape ``(..., arity)``."""
        w = np.asarray(w, dtype=complex)
        out = np.zeros(w.shape[:-1], dtype=complex)
        for k, v in self.terms.items():
            out = out + v * np.prod(w ** np.asarray(k), axis=-1)
        return out

    def on_torus(self, t):
        """``A(e^{it})`` for real angles ``t`` of shape ``(..., arity)``."""
        return self(np.exp(1j * np.asarray(t, dtype=float)))

    def to_json(self):
        return [[list(k), v.real, v.imag] for k, v in sorted(self.terms.items())]


@dataclass
class SymbolBuild:
    symbols: dict  # omega -> SparseSymbol
    multi_class: bool
    warnings: list

    @property
    def symbol(self) -> SparseSymbol:
        if self.multi_class:
            raise InputError("frequencies fall into several omega classes")
        return next(iter(self.symbols.values()))


def build_symbol(S_spec: Mapping[int, complex], primes: Sequence[int]) -> SymbolBuild:
    """Group the frequencies of ``S(x) = sum_j a_j exp(ijx)`` by chain.

    Each frequency ``j = omega * p**alpha`` contributes ``a_j w**alpha`` to
    the symbol of its chain ``omega``.
    """
    primes = _check_primes(primes)
    if not S_spec:
        raise DegenerateInput("empty frequency map")
    classes = defaultdict(dict)
    for freq, coef in S_spec.items():
        if int(freq) != freq or freq < 1:
            raise InputError(f"frequency {freq!r} is not a positive integer")
        dec = omega_decompose(int(freq), primes)
        classes[dec.omega][dec.alpha] = coef
    symbols = {w: SparseSymbol(t, primes=primes) for w, t in sorted(classes.items())}
    notes = []
    if len(symbols) > 1:
        notes.append(f"frequencies span omega classes {sorted(symbols)}")
    return SymbolBuild(symbols, len(symbols) > 1, notes)
