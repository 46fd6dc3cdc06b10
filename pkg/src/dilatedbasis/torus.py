"""Weighted L^2 on the torus: weights, A2 scans, the integral test and Q_M.

Angles live in ``[-pi, pi)^m``. Fourier coefficients follow
``P_hat(gamma) = (2 pi)^{-m} int P(t) exp(-i gamma.t) dt``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import linalg
from scipy.stats import qmc

from .errors import GramNotPositive, InputError, QuadratureDiverging, SizeLimit, WrongWeightKind
from .polydisk import autocorrelation, is_e_star
from .symbol import SparseSymbol, _check_primes

MAX_GRAM_SIZE = 10**4


def _wrap(t):
    return (np.asarray(t, dtype=float) + np.pi) % (2 * np.pi) - np.pi


@dataclass
class TorusWeight:
    """Either ``|A(e^{it})|^2`` (exact Fourier coefficients) or the local model
    ``(sum t_j)^2 + (sum t_j^2)^2`` on the fundamental domain."""

    kind: str  # "symbol" | "model"
    arity: int
    coefficients: dict | None = None  # gamma -> P_hat(gamma), symbol kind only
    symbol: SparseSymbol | None = None
    e_star_weights: np.ndarray | None = None
    quad_nodes: int = 64

    def __post_init__(self):
        if self.kind not in ("symbol", "model"):
            raise InputError(f"unknown weight kind {self.kind!r}")
        if self.kind == "symbol" and not self.coefficients:
            raise InputError("symbol weights need Fourier coefficients")

    # evaluation -----------------------------------------------------------

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "model":
            t = _wrap(t)
            return np.sum(t, axis=-1) ** 2 + np.sum(t * t, axis=-1) ** 2
        if self.symbol is not None:
            # |A|^2 keeps relative accuracy near the zeros of P
            return np.abs(self.symbol.on_torus(t)) ** 2
        return self.fourier_sum(t)

    def fourier_sum(self, t):
        """``sum_gamma P_hat(gamma) exp(i gamma.t)`` (symbol kind)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape[:-1])
        for g, v in self.coefficients.items():
            out = out + (v * np.exp(1j * (t @ np.asarray(g, dtype=float)))).real
        return out

    def scaled(self, c: float) -> "TorusWeight":
        if self.kind != "symbol":
            raise WrongWeightKind("only symbol-derived weights can be rescaled exactly")
        sym = None
        if self.symbol is not None:
            r = math.sqrt(c)
            sym = SparseSymbol({k: r * v for k, v in self.symbol.terms.items()}, self.arity)
        return TorusWeight(
            "symbol",
            self.arity,
            {g: c * v for g, v in self.coefficients.items()},
            sym,
            self.e_star_weights,
        )

    @property
    def degrees(self):
        """Per-axis trigonometric degree (symbol kind)."""
        return tuple(max(abs(g[j]) for g in self.coefficients) for j in range(self.arity))

    # Fourier side --------------------------------------------------------------

    def fourier(self, gammas) -> tuple[np.ndarray, float]:
        """``P_hat`` at integer frequencies ``gammas`` (shape ``(k, m)``).

        Returns ``(values, quadrature_error)``; the error is zero for symbol
        weights and a Gauss-Legendre node-doubling estimate for the model.
        """
        gammas = np.asarray(gammas, dtype=int).reshape(-1, self.arity)
        if self.kind == "symbol":
            vals = np.array([self.coefficients.get(tuple(g), 0j) for g in gammas], dtype=complex)
            return vals, 0.0
        v1 = self._model_fourier(gammas, self.quad_nodes)
        v2 = self._model_fourier(gammas, 2 * self.quad_nodes)
        return v2, float(np.max(np.abs(v2 - v1))) if len(v1) else 0.0

    def _model_fourier(self, gammas, nodes):
        # P = sum_{i,j} t_i t_j + sum_{i,j} t_i^2 t_j^2, and each monomial
        # factorises over axes
        x, w = np.polynomial.legendre.leggauss(nodes)
        # split [-pi, pi] at 0 so each panel is smooth
        xs = np.concatenate([(x - 1) * np.pi / 2, (x + 1) * np.pi / 2])
        ws = np.concatenate([w, w]) * np.pi / 2
        kmax = int(np.max(np.abs(gammas))) if len(gammas) else 0
        freqs = np.arange(-kmax, kmax + 1)
        # mom[k, n] = (1/2pi) int t^k exp(-i n t) dt, k = 0..4
        mom = np.array(
            [(ws * xs**k) @ np.exp(-1j * np.outer(xs, freqs)) / (2 * np.pi) for k in range(5)]
        )
        m = self.arity
        out = np.zeros(len(gammas), dtype=complex)
        idx = gammas + kmax
        for i in range(m):
            for j in range(m):
                for power in (1, 2):
                    ks = np.zeros(m, dtype=int)
                    ks[i] += power
                    ks[j] += power
                    term = np.ones(len(gammas), dtype=complex)
                    for ax in range(m):
                        term *= mom[ks[ax], idx[:, ax]]
                    out += term
        return out

    def box_average(self, lo, hi) -> float:
        """Exact average of ``P`` over the box ``[lo, hi]`` (symbol kind) or by
        tensor Gauss rule (model kind, exact for its degree-4 polynomial)."""
        lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
        if self.kind == "symbol":
            mid, half = (lo + hi) / 2, (hi - lo) / 2
            total = 0.0
            for g, v in self.coefficients.items():
                g = np.asarray(g, dtype=float)
                total += (v * np.exp(1j * g @ mid) * np.prod(np.sinc(g * half / np.pi))).real
            return float(total)
        x, w = np.polynomial.legendre.leggauss(3)
        grids = np.meshgrid(*[(lo[i] + hi[i]) / 2 + x * (hi[i] - lo[i]) / 2 for i in range(self.arity)], indexing="ij")
        W = np.prod(np.meshgrid(*([w / 2] * self.arity), indexing="ij"), axis=0)
        pts = np.stack(grids, axis=-1)
        if np.any(lo < -np.pi) or np.any(hi > np.pi):
            # wrapped boxes are not polynomial pieces; fall back to a fine midpoint rule
            return float(np.mean(self(_midpoints(lo, hi, 16))))
        return float(np.sum(W * self(pts)))


def _midpoints(lo, hi, k):
    axes = [lo[i] + (np.arange(k) + 0.5) * (hi[i] - lo[i]) / k for i in range(len(lo))]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))


def weight_from_symbol(A: SparseSymbol) -> TorusWeight:
    """``P(t) = |A(e^{it})|^2`` with ``P_hat(gamma) = sum_a a(a + gamma) conj(a(a))``."""
    coeffs = {g: v for g, v in autocorrelation(A).items() if v != 0}
    ew = None
    if is_e_star(A):
        m = A.arity
        ew = np.array([-A.terms[tuple(int(i == k) for i in range(m))].real for k in range(m)])
    return TorusWeight("symbol", A.arity, coeffs, A, ew)


def model_weight(m: int) -> TorusWeight:
    if m < 1:
        raise InputError("m must be >= 1")
    return TorusWeight("model", m)


def constant_weight(m: int, c: float = 1.0) -> TorusWeight:
    if c <= 0:
        raise InputError("constant weight must be positive")
    return weight_from_symbol(SparseSymbol({(0,) * m: math.sqrt(c)}))


# ---------------------------------------------------------------------------
# local profile of the (E*) weight near its zero


@dataclass
class WeightProfile:
    r_max: float
    ratio_min: float
    ratio_max: float
    n_samples: int
    radii: np.ndarray
    ratios: np.ndarray

    @property
    def spread(self) -> float:
        return self.ratio_max / self.ratio_min


def profile_ratio(weight: TorusWeight, t):
    """``P(t) / (|t|^4 + l(t)^2)`` with ``l(t) = sum c_k t_k``; 1 at ``t = 0``."""
    if weight.e_star_weights is None:
        raise WrongWeightKind("profile needs a weight derived from an (E*) symbol")
    t = np.atleast_2d(np.asarray(t, dtype=float))
    r2 = np.sum(t * t, axis=-1)
    ell = t @ weight.e_star_weights
    den = r2 * r2 + ell * ell
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, weight(t) / den, 1.0)
    return out


def weight_profile_check(weight: TorusWeight, r_max=0.1, samples=4096, seed=0) -> WeightProfile:
    """Ratio statistics of ``P / (r^4 + l^2)`` over quasi-random points of
    ``{0 < |t| <= r_max}``."""
    if weight.e_star_weights is None:
        raise WrongWeightKind("profile needs a weight derived from an (E*) symbol")
    m = weight.arity
    sob = qmc.Sobol(m, scramble=True, seed=seed)
    pts = (2 * sob.random(2 ** int(math.ceil(math.log2(samples * 2 ** m / max(1, _ball_fraction(m)))))) - 1) * r_max
    r = np.linalg.norm(pts, axis=1)
    pts = pts[(r <= r_max) & (r > 0)][:samples]
    ratios = profile_ratio(weight, pts)
    return WeightProfile(
        r_max, float(ratios.min()), float(ratios.max()), len(pts), np.linalg.norm(pts, axis=1), ratios
    )


def _ball_fraction(m):
    """Volume fraction of the unit ball in its bounding cube, times 2**m."""
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


# ---------------------------------------------------------------------------
# averages of 1/P


def _line_integrals(weight: TorusWeight, axis: int, a: float, b: float, outer: np.ndarray):
    """``int_a^b dt / P`` along ``axis`` for each outer point (other angles).

    With ``z = exp(i t)`` the integrand is ``z^(d-1) / (i Q(z))`` for a degree
    ``2d`` polynomial ``Q``; partial fractions give a closed form in logs that
    stays on the principal branch as long as ``b - a < 2 pi``.
    """
    m = weight.arity
    d = weight.degrees[axis]
    others = [j for j in range(m) if j != axis]
    n = len(outer)
    if d == 0:
        pts = np.zeros((n, m))
        pts[:, others] = outer
        return (b - a) / weight(pts)
    # c_k(t') for k = -d..d
    c = np.zeros((n, 2 * d + 1), dtype=complex)
    for g, v in weight.coefficients.items():
        gp = np.asarray([g[j] for j in others], dtype=float)
        c[:, g[axis] + d] += v * np.exp(1j * (outer @ gp))
    # Q(z) = sum_j c[:, j] z^j (ascending); roots via batched companion matrices
    lead = c[:, -1]
    comp = np.zeros((n, 2 * d, 2 * d), dtype=complex)
    comp[:, 1:, :-1] = np.eye(2 * d - 1)
    comp[:, :, -1] = -c[:, :-1] / lead[:, None]
    roots = np.linalg.eigvals(comp)
    # Q'(z_k)
    dcoef = c[:, 1:] * np.arange(1, 2 * d + 1)
    dQ = np.zeros_like(roots)
    for j in range(2 * d - 1, -1, -1):
        dQ = dQ * roots + dcoef[:, j : j + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = roots ** (d - 1) / dQ
        val = (np.sum(rho * _log_jumps(roots, a, b), axis=1) / 1j).real
    val = np.where(np.isfinite(val) & (val > 0), val, np.inf)
    return val


def _log_jumps(roots, a, b):
    """``log(e^{ib} - z) - log(e^{ia} - z)`` along the arc, for each root ``z``."""
    za, zb = np.exp(1j * a), np.exp(1j * b)
    inside = np.abs(roots) < 1
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(
            inside,
            1j * (b - a) + np.log(1 - roots / zb) - np.log(1 - roots / za),
            np.log(1 - zb / roots) - np.log(1 - za / roots),
        )


def _symbol_line_integrals(A: SparseSymbol, axis: int, a: float, b: float, outer: np.ndarray):
    """Same as :func:`_line_integrals` but factoring through the roots of ``A``.

    With ``z = exp(i t_axis)``, ``|A|^2 = A(z) conj(A)(1/z)``, whose roots are
    the roots ``zeta`` of ``A`` and their reflections ``1/conj(zeta)``. The
    small gap ``zeta - 1/conj(zeta)`` is formed from ``|zeta|^2 - 1`` directly,
    which keeps full accuracy when a root approaches the circle.
    """
    m = A.arity
    others = [j for j in range(m) if j != axis]
    n = len(outer)
    kmin = min(k[axis] for k in A.terms)
    d = max(k[axis] for k in A.terms) - kmin
    if d == 0:
        pts = np.zeros((n, m))
        pts[:, others] = outer
        return (b - a) / np.abs(A.on_torus(pts)) ** 2
    c = np.zeros((n, d + 1), dtype=complex)
    for k, v in A.terms.items():
        gp = np.asarray([k[j] for j in others], dtype=float)
        c[:, k[axis] - kmin] += v * np.exp(1j * (outer @ gp))
    with np.errstate(divide="ignore", invalid="ignore"):
        if d == 1:
            zeta = (-c[:, 0] / c[:, 1])[:, None]
        else:
            comp = np.zeros((n, d, d), dtype=complex)
            comp[:, 1:, :-1] = np.eye(d - 1)
            comp[:, :, -1] = -c[:, :-1] / c[:, -1:]
            zeta = np.linalg.eigvals(comp)
        eta = 1 / np.conj(zeta)
        Z = np.concatenate([zeta, eta], axis=1)
        diff = Z[:, :, None] - Z[:, None, :]
        r = np.abs(zeta)
        gap = (r - 1) * (r + 1) / np.conj(zeta)  # zeta - eta
        j = np.arange(d)
        diff[:, j, d + j] = gap
        diff[:, d + j, j] = -gap
        i2 = np.arange(2 * d)
        diff[:, i2, i2] = 1
        lead = c[:, -1] * np.conj(c[:, 0])
        rho = Z ** (d - 1) / (lead[:, None] * np.prod(diff, axis=2))
        val = (np.sum(rho * _log_jumps(Z, a, b), axis=1) / 1j).real
    return np.where(np.isfinite(val) & (val > 0), val, np.inf)


@dataclass
class InverseAverage:
    value: float
    status: str  # "converged" | "diverging" | "cap"
    history: list
    cells: int


def inverse_average(
    weight: TorusWeight,
    lo,
    hi,
    rtol=0.01,
    max_cells=1_000_000,
    max_generations=60,
    line_axis="auto",
    monotone=False,
) -> InverseAverage:
    """Average of ``1/P`` over the box ``[lo, hi]``.

    Adaptive dyadic subdivision with a per-cell midpoint rule; each cell's
    error indicator compares its midpoint value with the sum over its
    ``2^k`` children. Every generation refines the cells carrying the top
    half of the total indicator. Stops when the estimate changes by less
    than ``rtol``, declares divergence when it doubles across two
    generations twice in a row, and gives up at ``max_cells``.

    For symbol weights with ``m >= 2`` one axis is integrated exactly (see
    :func:`_line_integrals`) and the subdivision runs over the others.
    ``monotone=True`` reports the running maximum of the generation
    estimates, for boxes known to contain a zero of ``P``.
    """
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    m = weight.arity
    vol = float(np.prod(hi - lo))
    if line_axis == "auto":
        line_axis = None
        if weight.kind == "symbol" and m >= 2:
            degs = weight.degrees
            pos = [j for j in range(m) if degs[j] > 0]
            if pos:
                line_axis = min(pos, key=lambda j: degs[j])
    if line_axis is not None:
        others = [j for j in range(m) if j != line_axis]
        a, b = lo[line_axis], hi[line_axis]

        if weight.symbol is not None:

            def f(x):
                return _symbol_line_integrals(weight.symbol, line_axis, a, b, x)

        else:

            def f(x):
                return _line_integrals(weight, line_axis, a, b, x)

        olo, ohi = lo[others], hi[others]
    else:

        def f(x):
            with np.errstate(divide="ignore"):
                return 1.0 / weight(x)

        olo, ohi = lo, hi
    k = len(olo)
    offsets = np.array(np.meshgrid(*([[-0.5, 0.5]] * k), indexing="ij")).reshape(k, -1).T

    def fine_values(centers, half):
        # children midpoints of each cell: center + offsets * half
        pts = (centers[:, None, :] + offsets[None, :, :] * half[:, None, :]).reshape(-1, k)
        vals = f(pts).reshape(len(centers), -1)
        cvol = np.prod(half, axis=1)  # child volume = prod(2 * half / 2)
        return vals.sum(axis=1) * cvol

    # root cells: the 2^k children of the box, so the box centre is a vertex
    root_c = (olo + ohi) / 2
    root_h = (ohi - olo) / 2
    centers = root_c + offsets * root_h
    half = np.tile(root_h / 2, (len(centers), 1))
    coarse = f(centers) * np.prod(2 * half, axis=1)
    fine = fine_values(centers, half)

    history = []
    status = "cap"
    for gen in range(max_generations):
        est = math.fsum(fine) / vol
        history.append(est)
        if not np.isfinite(est):
            status = "diverging"
            break
        if gen >= 1 and abs(history[-1] - history[-2]) <= rtol * abs(history[-1]):
            status = "converged"
            break
        if gen >= 3 and history[-1] >= 2 * history[-3] and history[-2] >= 2 * history[-4]:
            status = "diverging"
            break
        err = np.abs(fine - coarse)
        order = np.argsort(-err)
        cum = np.cumsum(err[order])
        nmark = int(np.searchsorted(cum, 0.5 * cum[-1]) + 1)
        if len(centers) + nmark * (2**k - 1) > max_cells:
            break
        mark = order[:nmark]
        keep = np.ones(len(centers), dtype=bool)
        keep[mark] = False
        new_c = (centers[mark][:, None, :] + offsets[None] * half[mark][:, None, :]).reshape(-1, k)
        new_h = np.repeat(half[mark] / 2, 2**k, axis=0)
        new_coarse = f(new_c) * np.prod(2 * new_h, axis=1)
        new_fine = fine_values(new_c, new_h)
        centers = np.vstack([centers[keep], new_c])
        half = np.vstack([half[keep], new_h])
        coarse = np.concatenate([coarse[keep], new_coarse])
        fine = np.concatenate([fine[keep], new_fine])
    value = max(history) if monotone else history[-1]
    return InverseAverage(float(value), status, history, len(centers))


# ---------------------------------------------------------------------------
# A2 scans


@dataclass
class RectangleRecord:
    center: tuple
    half_width: float
    avg_P: float
    avg_inv: float
    product: float
    status: str
    contains_zero: bool


@dataclass
class A2Report:
    scales: list  # s with h_s = 2^-s
    sup: list
    status: list  # per scale: "converged" | "diverging" | "cap"
    rectangles: list = field(default_factory=list)

    def growth(self):
        """Ratios ``sup[s+1] / sup[s]``."""
        return [b / a for a, b in zip(self.sup, self.sup[1:])]


def find_zero_centers(weight: TorusWeight, grid=24, tol=1e-10) -> list:
    """Grid points where ``P`` vanishes to ``tol`` relative to its max."""
    m = weight.arity
    G = max(4, min(grid, int(3e5 ** (1.0 / m))))
    G -= G % 2  # even grids contain the origin and the antipodal points
    ang = 2 * np.pi * (np.arange(G) - G // 2) / G
    pts = np.stack(np.meshgrid(*([ang] * m), indexing="ij"), axis=-1).reshape(-1, m)
    vals = weight(pts)
    top = max(float(vals.max()), 1e-300)
    return [tuple(float(x) for x in p) for p in pts[vals <= tol * top]]


def a2_estimate(
    weight: TorusWeight,
    centers=None,
    scale_ladder=range(1, 9),
    n_random_centers=2,
    rtol=0.01,
    max_cells=1_000_000,
    seed=0,
) -> A2Report:
    """Lower estimates of ``sup_R avg_R(P) avg_R(1/P)`` per scale.

    Cubes of half-width ``h_s = 2^-s`` are centred at the zeros of ``P`` found
    on a grid (or the given ``centers``) plus scrambled-Sobol centres. The
    scan only ever bounds the A2 constant from below.
    """
    m = weight.arity
    zero_centers = find_zero_centers(weight) if centers is None else [tuple(c) for c in centers]
    extra = []
    if n_random_centers:
        sob = qmc.Sobol(m, scramble=True, seed=seed)
        extra = [tuple(p) for p in (2 * sob.random(2 ** int(math.ceil(math.log2(n_random_centers)))) - 1)[:n_random_centers] * np.pi]
    all_centers = [(c, True) for c in zero_centers] + [(c, False) for c in extra]
    if not all_centers:
        all_centers = [((0.0,) * m, False)]

    report = A2Report([], [], [])
    for s in scale_ladder:
        h = 2.0 ** (-s)
        best, scale_status = 0.0, "converged"
        for c, is_zero in all_centers:
            lo, hi = np.asarray(c) - h, np.asarray(c) + h
            avgP = weight.box_average(lo, hi)
            inv = inverse_average(weight, lo, hi, rtol=rtol, max_cells=max_cells, monotone=is_zero)
            prod = avgP * inv.value
            report.rectangles.append(
                RectangleRecord(tuple(c), h, avgP, inv.value, prod, inv.status, is_zero)
            )
            if inv.status == "diverging":
                scale_status = "diverging"
                warnings.warn(
                    f"avg(1/P) diverging on cube centre {c}, h={h:g}", QuadratureDiverging, stacklevel=2
                )
            elif inv.status == "cap" and scale_status != "diverging":
                scale_status = "cap"
            if math.isfinite(prod):
                best = max(best, prod)
            else:
                best = math.inf
        report.scales.append(s)
        report.sup.append(best)
        report.status.append(scale_status)
    return report


# ---------------------------------------------------------------------------
# the integral test  int_{|z| <= delta} dz / (z_0^2 + z_1^4 + ... + z_{m-1}^4)


def reduced_integral(m: int, delta: float) -> float:
    """Closed form of ``int_0^delta int_0^1 rho^(m-4) / (1 + eta^2) d eta d rho``."""
    if m <= 3:
        return math.inf
    return math.pi / 4 * delta ** (m - 3) / (m - 3)


def sphere_area(k: int) -> float:
    """Surface area of the unit sphere in ``R^k``."""
    return 2 * math.pi ** (k / 2) / math.gamma(k / 2)


def _zeta0_integral(q, rho, delta, eps):
    """``int dz0 / (z0^2 + q)`` over ``eps^2 <= z0^2 + rho^2 <= delta^2``."""
    sq = np.sqrt(q)
    U = np.sqrt(np.maximum(delta**2 - rho**2, 0.0))
    L = np.sqrt(np.maximum(eps**2 - rho**2, 0.0))
    return 2 * (np.arctan(U / sq) - np.arctan(L / sq)) / sq


def direct_integral(m: int, delta: float, J: int, samples=2000, seed=0) -> float:
    """Stratified Monte Carlo over the cut-off ball ``delta 2^-J <= |z| <= delta``.

    ``z_0`` is integrated in closed form; the remaining ``m - 1`` coordinates
    are sampled uniformly in dyadic radial shells, each with its own seed.
    """
    if m < 2:
        raise InputError("m must be >= 2")
    k = m - 1
    eps = delta * 2.0 ** (-J)
    edges = [delta * 2.0 ** (-j) for j in range(J + 1)] + [0.0]
    unit_vol = math.pi ** (k / 2) / math.gamma(k / 2 + 1)
    total = []
    for j in range(J + 1):
        r1, r0 = edges[j], edges[j + 1]
        rng = np.random.default_rng([seed, j])
        u = rng.random(samples)
        rad = (r0**k + u * (r1**k - r0**k)) ** (1.0 / k)
        dirs = rng.standard_normal((samples, k))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        pts = dirs * rad[:, None]
        q = np.sum(pts**4, axis=1)
        g = _zeta0_integral(q, rad, delta, eps)
        vol = unit_vol * (r1**k - r0**k)
        total.append(vol * np.mean(g))
    return math.fsum(total)


@dataclass
class IntegralTest:
    m: int
    delta: float
    reduced_closed_form: float
    cutoffs: list  # J with inner radius delta 2^-J
    raw_estimates: list
    direct_estimates: list  # raw / (2 |S^{m-2}|)
    status: str  # "converged" | "diverging" | "unsettled"
    verdict: str  # "finite" | "divergent"

    @property
    def direct_estimate(self) -> float:
        return self.direct_estimates[-1]

    @property
    def ratio(self) -> float:
        return self.direct_estimate / self.reduced_closed_form


def integral_test(m: int, delta: float = 0.5, cutoffs=(4, 8, 16, 32), samples=2000, seed=0) -> IntegralTest:
    """Compare the reduced closed form with a direct estimate of the full integral.

    The direct estimate is reported per unit solid angle of the
    ``(m-1)``-dimensional directions and per sign of ``z_0``, i.e. divided
    by ``2 |S^{m-2}|``, which is the constant the polar reduction drops.
    """
    if m < 2:
        raise InputError("m must be >= 2")
    if not 0 < delta <= 1:
        raise InputError("delta must lie in (0, 1]")
    raw = [direct_integral(m, delta, J, samples, seed) for J in cutoffs]
    norm = 2 * sphere_area(m - 1)
    direct = [r / norm for r in raw]
    status = "unsettled"
    if len(direct) >= 3 and all(
        direct[i] >= 2 * direct[i - 2] for i in range(2, len(direct))
    ):
        status = "diverging"
    elif len(direct) >= 3 and all(
        abs(direct[i] - direct[i - 1]) <= 0.2 * direct[i] for i in range(len(direct) - 2, len(direct))
    ):
        status = "converged"
    red = reduced_integral(m, delta)
    return IntegralTest(
        m, delta, red, list(cutoffs), raw, direct, status, "finite" if m >= 4 else "divergent"
    )


# ---------------------------------------------------------------------------
# projections in weighted L^2


@dataclass
class LinearForm:
    """``M(alpha) = sum mu_j alpha_j``, thresholded at zero."""

    weights: tuple
    kind: str  # "prime" | "rational"
    primes: tuple | None = None

    @classmethod
    def from_primes(cls, primes):
        primes = _check_primes(primes)
        return cls(tuple(math.log(p) for p in primes), "prime", primes)

    @classmethod
    def rational(cls, weights):
        return cls(tuple(Fraction(w) for w in weights), "rational")

    @classmethod
    def first_coordinate(cls, m):
        """The comparison form ``M0(y) = y_1``."""
        return cls.rational([1] + [0] * (m - 1))

    def nonnegative(self, alpha) -> bool:
        """``M(alpha) >= 0``, decided exactly."""
        if self.kind == "prime":
            pos = math.prod(p**a for p, a in zip(self.primes, alpha) if a > 0)
            neg = math.prod(p ** (-a) for p, a in zip(self.primes, alpha) if a < 0)
            return pos >= neg
        return sum(w * a for w, a in zip(self.weights, alpha)) >= 0


@dataclass
class OperatorNormReport:
    label: str
    rows: list = field(default_factory=list)  # dicts with N/tau, norm, size, ...
    notes: list = field(default_factory=list)


def _gram(weight: TorusWeight, idx: np.ndarray):
    """``H[b, a] = P_hat(b - a)`` so that ``||sum x_a e_a||_P^2 = x^H H x``.

    ``P_hat`` is tabulated once on the difference box and gathered, so the
    Toeplitz structure is exact by construction.
    """
    n, m = idx.shape
    if n > MAX_GRAM_SIZE:
        raise SizeLimit(f"Gram matrix of size {n} exceeds limit {MAX_GRAM_SIZE}")
    span = idx.max(axis=0) - idx.min(axis=0)
    shape = tuple(2 * span + 1)
    grid = np.stack(np.meshgrid(*[np.arange(-s, s + 1) for s in span], indexing="ij"), axis=-1)
    gam = grid.reshape(-1, m)
    if weight.kind == "symbol":
        table = np.zeros(len(gam), dtype=complex)
        strides = np.cumprod((1,) + shape[:0:-1])[::-1]
        for g, v in weight.coefficients.items():
            g = np.asarray(g)
            if np.all(np.abs(g) <= span):
                table[int((g + span) @ strides)] = v
        qerr = 0.0
    else:
        table, qerr = weight.fourier(gam)
    if np.all(table.imag == 0):
        table = table.real
    flat = np.zeros((n, n), dtype=np.int64)
    stride = 1
    for j in range(m - 1, -1, -1):
        flat += (idx[:, None, j] - idx[None, :, j] + span[j]) * stride
        stride *= shape[j]
    H = table[flat]
    del flat
    return H, qerr


class _FactoredGram:
    """Cholesky-factored weighted Gram matrix with projection norms."""

    def __init__(self, H):
        self.H = H
        try:
            self.cho = linalg.cho_factor(H, lower=True)
        except linalg.LinAlgError as exc:
            ev = np.linalg.eigvalsh(H)
            raise GramNotPositive(f"Gram matrix not positive definite (min eig {ev[0]:.3e})") from exc
        piv = np.abs(np.diag(self.cho[0])) ** 2
        self.min_pivot = float(piv.min())
        if self.min_pivot <= 1e-14 * float(np.max(np.abs(np.diag(H)))):
            raise GramNotPositive(f"Gram matrix numerically singular (pivot {self.min_pivot:.3e})")

    def projection_norm(self, mask) -> float:
        """Norm of the coordinate projection onto ``mask`` in the ``H`` inner product.

        With ``S`` the kept indices, ``||Q||^2 = lambda_max(H[S,S] (H^-1)[S,S])``;
        a nontrivial idempotent has the same norm as its complement, so the
        smaller side is used.
        """
        mask = np.asarray(mask, dtype=bool)
        k = int(mask.sum())
        if k == 0:
            return 0.0
        if k == len(mask):
            return 1.0
        if k > len(mask) - k:
            mask = ~mask
        S = np.flatnonzero(mask)
        E = np.zeros((len(mask), len(S)), dtype=self.H.dtype)
        E[S, np.arange(len(S))] = 1
        Hinv_SS = linalg.cho_solve(self.cho, E)[S]
        Hinv_SS = (Hinv_SS + Hinv_SS.conj().T) / 2
        H_SS = self.H[np.ix_(S, S)]
        R = linalg.cholesky(H_SS, lower=True)
        lam = linalg.eigvalsh(R.conj().T @ Hinv_SS @ R)[-1]
        return math.sqrt(max(float(lam), 1.0))


def qm_projection_norm(weight: TorusWeight, form: LinearForm, N_values: Sequence[int]) -> OperatorNormReport:
    """Norms of ``Q_M: e_alpha -> [M(alpha) >= 0] e_alpha`` on the box ``|alpha_j| <= N``."""
    m = weight.arity
    if len(form.weights) != m:
        raise InputError("form and weight arities differ")
    rep = OperatorNormReport(f"Q_M ({form.kind})")
    for N in N_values:
        grids = np.meshgrid(*([np.arange(-N, N + 1)] * m), indexing="ij")
        idx = np.stack(grids, axis=-1).reshape(-1, m)
        H, qerr = _gram(weight, idx)
        F = _FactoredGram(H)
        mask = np.array([form.nonnegative(a) for a in map(tuple, idx)])
        rep.rows.append(
            {
                "N": int(N),
                "norm": F.projection_norm(mask),
                "size": len(idx),
                "min_pivot": F.min_pivot,
                "quad_error": qerr,
            }
        )
    return rep


def weighted_partial_sum_norms(weight: TorusWeight, tau_list, N: int) -> OperatorNormReport:
    """Norms of the coordinate projections onto ``{alpha <= tau}`` in the span
    of ``w^alpha``, ``0 <= alpha_j <= N``, measured in ``L^2(P)``."""
    m = weight.arity
    grids = np.meshgrid(*([np.arange(N + 1)] * m), indexing="ij")
    idx = np.stack(grids, axis=-1).reshape(-1, m)
    H, qerr = _gram(weight, idx)
    F = _FactoredGram(H)
    rep = OperatorNormReport("weighted partial sums")
    for tau in tau_list:
        tau = tuple(int(x) for x in tau)
        if len(tau) != m or max(tau) > N:
            raise InputError(f"tau={tau} does not fit the box [0, {N}]^{m}")
        mask = np.all(idx <= np.asarray(tau), axis=1)
        rep.rows.append(
            {
                "tau": list(tau),
                "norm": F.projection_norm(mask),
                "size": len(idx),
                "min_pivot": F.min_pivot,
                "quad_error": qerr,
            }
        )
    return rep


__all__ = [
    "A2Report",
    "IntegralTest",
    "LinearForm",
    "OperatorNormReport",
    "TorusWeight",
    "WeightProfile",
    "a2_estimate",
    "find_zero_centers",
    "constant_weight",
    "direct_integral",
    "integral_test",
    "inverse_average",
    "model_weight",
    "profile_ratio",
    "qm_projection_norm",
    "reduced_integral",
    "weight_from_symbol",
    "weight_profile_check",
    "weighted_partial_sum_norms",
]
