"""Multi-frequency systems ``v(alpha) = A(w) w**alpha`` in H^2 of the polydisk.

Functions in H^2 are represented by their Taylor coefficients, so every inner
product here is an exact finite sum.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, sparse, stats

from .dilation1d import GramSection, _section
from .errors import InputError, NonExhausted, SizeLimit, ZeroConstantTerm
from .symbol import SparseSymbol

MAX_BOX_SIZE = 4096
MAX_OPERATOR_BOX = 60_000
# dense slabs above this many entries (summed over shells) force streaming
FULL_MODE_LIMIT = 20_000_000


def e_star_symbol(c) -> SparseSymbol:
    """``A(w) = 1 - sum_k c_k w_k`` with ``c_k > 0`` summing to one."""
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or len(c) == 0 or np.any(c <= 0):
        raise InputError("weights must be a nonempty vector of positive numbers")
    if abs(c.sum() - 1.0) > 1e-12:
        raise InputError(f"weights sum to {c.sum()!r}, not 1")
    m = len(c)
    terms = {(0,) * m: 1.0}
    for k, ck in enumerate(c):
        e = [0] * m
        e[k] = 1
        terms[tuple(e)] = -ck
    return SparseSymbol(terms)


def uniform_e_star(m: int) -> SparseSymbol:
    return e_star_symbol(np.full(m, 1.0 / m))


# ---------------------------------------------------------------------------
# Taylor coefficients of 1/A
#
# Shell n (all sigma with |sigma| = n) is stored as a dense array indexed by
# the first m-1 exponents; the last one is implied. Entries whose leading
# exponents sum past n are kept at zero.


def _shell_shape(n, m):
    return (n + 1,) * (m - 1)


def _accumulate(cur, prev, coef, beta, n, d, m):
    """``cur += coef * (prev shifted by beta)`` restricted to live entries."""
    bp = beta[: m - 1]
    size = n - d + 1  # prev has side length n - d + 1
    if m <= 2:
        tgt = tuple(slice(b, b + size) for b in bp)
        cur[tgt] += coef * prev
        return
    # walk the first exponent so each step touches only its simplex slice
    b0, rest = bp[0], bp[1:]
    for i0 in range(size):
        L = size - i0  # remaining exponents of prev[i0] sum to <= n - d - i0
        src = (i0,) + (slice(0, L),) * (m - 2)
        tgt = (i0 + b0,) + tuple(slice(b, b + L) for b in rest)
        cur[tgt] += coef * prev[src]


def _shell_energy(slab, n, m):
    if m <= 2:
        return float(np.vdot(slab, slab).real)
    total = 0.0
    for i0 in range(n + 1):
        L = n - i0 + 1
        part = slab[(i0,) + (slice(0, L),) * (m - 2)]
        total += float(np.vdot(part, part).real)
    return total


@dataclass
class CoefficientTable:
    """Taylor coefficients ``b(sigma)`` of ``1/A`` up to total degree ``N``."""

    arity: int
    N: int
    shells: list  # slab per shell, None where dropped (streaming)
    shell_sums: np.ndarray  # s_n = sum_{|sigma| = n} |b(sigma)|^2
    mode: str

    def __getitem__(self, sigma):
        sigma = tuple(sigma)
        if len(sigma) != self.arity:
            raise KeyError(sigma)
        n = sum(sigma)
        if n > self.N or any(s < 0 for s in sigma):
            raise KeyError(sigma)
        slab = self.shells[n]
        if slab is None:
            raise KeyError(f"shell {n} was not retained (streaming mode)")
        return complex(slab[sigma[: self.arity - 1]])

    def get(self, sigma, default=0j):
        try:
            return self[sigma]
        except KeyError:
            return default

    def shell_items(self, n):
        """``(sigma, b(sigma))`` for every ``|sigma| = n``."""
        m = self.arity
        slab = self.shells[n]
        if slab is None:
            raise KeyError(f"shell {n} was not retained")
        for head in itertools.product(range(n + 1), repeat=m - 1):
            if sum(head) <= n:
                yield head + (n - sum(head),), complex(slab[head])


def coefficient_series(A: SparseSymbol, N: int, mode: str = "auto") -> CoefficientTable:
    """Solve ``sum_{beta in K} a(beta) b(sigma - beta) = delta(sigma, 0)`` shell by shell.

    ``mode="streaming"`` keeps only the last ``deg(A)`` shells (one shell for
    affine symbols such as the (E*) family) and records the shell sums.
    ``mode="auto"`` streams when the full table would be too large.
    """
    a0 = A.constant
    if a0 == 0:
        raise ZeroConstantTerm("A(0) = 0: 1/A has no Taylor expansion at the origin")
    if N < 0:
        raise InputError("N must be >= 0")
    m = A.arity
    D = A.total_degree
    if mode == "auto":
        full_size = sum(math.prod(_shell_shape(n, m)) for n in range(N + 1))
        mode = "full" if full_size <= FULL_MODE_LIMIT else "streaming"
    if mode not in ("full", "streaming"):
        raise InputError(f"unknown mode {mode!r}")

    dtype = float if A.is_real else complex
    terms = [(k, v.real if dtype is float else v) for k, v in A.terms.items() if any(k)]
    by_degree = {}
    for k, v in terms:
        by_degree.setdefault(sum(k), []).append((k, -v / (a0.real if dtype is float else a0)))

    shells = []
    sums = np.zeros(N + 1)
    for n in range(N + 1):
        cur = np.zeros(_shell_shape(n, m), dtype=dtype)
        if n == 0:
            cur[()] = 1.0 / (a0.real if dtype is float else a0)
        for d, group in by_degree.items():
            if d > n:
                continue
            prev = shells[n - d]
            for beta, coef in group:
                _accumulate(cur, prev, coef, beta, n, d, m)
        sums[n] = _shell_energy(cur, n, m)
        shells.append(cur)
        if mode == "streaming" and n - D >= 0:
            shells[n - D] = None
    return CoefficientTable(m, N, shells, sums, mode)


def convolution_residual(A: SparseSymbol, table: CoefficientTable) -> float:
    """``max_sigma |sum_beta a(beta) b(sigma - beta) - delta(sigma, 0)|`` over the table."""
    worst = 0.0
    for n in range(table.N + 1):
        for sigma, _ in table.shell_items(n):
            acc = 0j
            for beta, a in A.terms.items():
                diff = tuple(s - b for s, b in zip(sigma, beta))
                if min(diff) >= 0:
                    acc += a * table[diff]
            worst = max(worst, abs(acc - (1.0 if n == 0 else 0.0)))
    return worst


# ---------------------------------------------------------------------------
# biorthogonal duals


def pairing(f: dict, g: dict) -> complex:
    """Unconjugated torus pairing: sum of ``f[gamma] g[-gamma]``."""
    if len(g) < len(f):
        f, g = g, f
    acc = 0j
    for gamma, c in f.items():
        other = g.get(tuple(-x for x in gamma))
        if other is not None:
            acc += c * other
    return acc


def system_vector(A: SparseSymbol, alpha) -> dict:
    """Taylor coefficients of ``v(alpha) = A(w) w**alpha``."""
    return {tuple(k + a for k, a in zip(kappa, alpha)): v for kappa, v in A.terms.items()}


@dataclass
class DualFunctional:
    tau: tuple
    terms: dict  # exponent sigma - tau (<= 0) -> b(sigma)

    @property
    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(v) ** 2 for v in self.terms.values()))


def _box(tau):
    return itertools.product(*(range(t + 1) for t in tau))


def dual_functional(A: SparseSymbol, tau, table: CoefficientTable | None = None) -> DualFunctional:
    """``Phi_tau(w) = sum_{sigma <= tau} b(sigma) w**(sigma - tau)``; a finite sum."""
    tau = tuple(int(t) for t in tau)
    if len(tau) != A.arity or min(tau) < 0:
        raise InputError(f"tau={tau} is not a multi-index of length {A.arity}")
    if table is None or table.N < sum(tau):
        table = coefficient_series(A, sum(tau), mode="full")
    terms = {}
    for sigma in _box(tau):
        terms[tuple(s - t for s, t in zip(sigma, tau))] = table[sigma]
    return DualFunctional(tau, terms)


def biorthogonality_suite(A: SparseSymbol, tau_box) -> float:
    """Largest ``|<Phi_tau, v(alpha)> - delta(alpha, tau)|`` over ``alpha, tau <= tau_box``."""
    tau_box = tuple(tau_box)
    table = coefficient_series(A, sum(tau_box), mode="full")
    duals = [dual_functional(A, tau, table) for tau in _box(tau_box)]
    worst = 0.0
    for alpha in _box(tau_box):
        v = system_vector(A, alpha)
        for phi in duals:
            val = pairing(phi.terms, v)
            worst = max(worst, abs(val - (1.0 if phi.tau == alpha else 0.0)))
    return worst


# ---------------------------------------------------------------------------
# shell sums and H^2 membership of 1/A


@dataclass
class ShellSums:
    s: np.ndarray
    fit_window: tuple
    slope: float
    intercept: float

    @property
    def n(self):
        return np.arange(len(self.s))

    @property
    def partial(self):
        return np.cumsum(self.s)


def shell_sums(A: SparseSymbol, N: int, mode="streaming", fit_window=None) -> ShellSums:
    """``s_n = sum_{|sigma| = n} |b(sigma)|^2`` and its log-log slope over ``[N/4, N]``."""
    table = coefficient_series(A, N, mode=mode)
    lo, hi = fit_window or (max(1, N // 4), N)
    return _fit_shells(table.shell_sums, (lo, hi))


def _fit_shells(s, window):
    lo, hi = window
    n = np.arange(lo, hi + 1)
    vals = s[lo : hi + 1]
    if np.all(vals <= 1e-300):
        return ShellSums(s, window, -math.inf, -math.inf)
    res = stats.linregress(np.log(n), np.log(np.maximum(vals, 1e-300)))
    return ShellSums(s, window, float(res.slope), float(res.intercept))


@dataclass
class H2Verdict:
    verdict: str  # "member" | "non-member" | "inconclusive"
    slope: float
    partial_sum: float
    tail_estimate: float
    tail_ratio: float
    log_growth_rate: float
    log_growth_r2: float
    reasons: list = field(default_factory=list)


def h2_verdict(
    shells: ShellSums, margin=0.1, tail_tol=0.05, divergence_threshold=1e12
) -> H2Verdict:
    """Decide whether ``sum_n s_n`` (= ``||1/A||^2_{H^2}``) converges.

    * member: slope below ``-1 - margin`` and the power-law tail past ``N`` is
      under ``tail_tol`` of the total;
    * non-member: slope at least ``-1 + margin``, partial sums past
      ``divergence_threshold``, or (slope within ``margin`` of ``-1``) partial
      sums growing linearly in ``log n`` (R^2 > 0.99) fast enough that
      doubling ``n`` adds more than ``tail_tol`` of the total;
    * inconclusive otherwise.
    """
    lo, hi = shells.fit_window
    partial = shells.partial
    total = float(partial[hi])
    slope = shells.slope
    reasons = []

    if slope < -1:
        C = math.exp(shells.intercept) if math.isfinite(shells.intercept) else 0.0
        tail = C * hi ** (slope + 1) / (-slope - 1) if C > 0 else 0.0
    else:
        tail = math.inf
    tail_ratio = tail / (total + tail) if math.isfinite(tail) else 1.0

    n = np.arange(lo, hi + 1)
    if np.ptp(partial[lo : hi + 1]) > 0:
        lg = stats.linregress(np.log(n), partial[lo : hi + 1])
        rate, r2 = float(lg.slope), float(lg.rvalue**2)
    else:
        rate, r2 = 0.0, 0.0

    if slope < -1 - margin and tail_ratio < tail_tol:
        verdict = "member"
        reasons.append(f"shell sums decay like n^{slope:.3f}; tail/total = {tail_ratio:.3g}")
    elif slope >= -1 + margin:
        verdict = "non-member"
        reasons.append(f"shell sums decay like n^{slope:.3f}, too slow to be summable")
    elif total > divergence_threshold:
        verdict = "non-member"
        reasons.append(f"partial sums exceed {divergence_threshold:g}")
    elif abs(slope + 1) <= margin and r2 > 0.99 and rate * math.log(2) > tail_tol * total:
        verdict = "non-member"
        reasons.append(
            f"partial sums grow like {rate:.4g} log n (R^2={r2:.5f}): logarithmic divergence"
        )
    else:
        verdict = "inconclusive"
        reasons.append(f"slope {slope:.3f} within margin of -1")
    return H2Verdict(verdict, slope, total, tail, tail_ratio, rate, r2, reasons)


# ---------------------------------------------------------------------------
# Riesz basis criterion: no zeros of A on the closed polydisk


@dataclass
class RieszVerdict:
    riesz: str  # "yes" | "no" | "uncertain"
    min_modulus: float
    argmin: np.ndarray  # point w of the closed polydisk
    gram: GramSection | None = None
    reasons: list = field(default_factory=list)


def riesz_basis_verdict(
    A: SparseSymbol,
    grid_density: int = 16,
    margin=1e-6,
    zero_tol=1e-10,
    n_starts: int = 8,
    gram_box=None,
    seed: int = 0,
) -> RieszVerdict:
    """Estimate ``min |A|`` over the closed polydisk.

    Torus grid plus a coarse radial grid, then bounded local refinement from
    the best ``n_starts`` points. ``yes`` needs the minimum above
    ``margin * scale``; ``no`` needs a point with ``|A| < zero_tol * scale``.
    The search is heuristic, hence the ``uncertain`` branch.
    """
    m = A.arity
    scale = A.scale
    G = max(2, min(grid_density, int(2e5 ** (1.0 / m))))
    ang = 2 * np.pi * np.arange(G) / G
    T = np.stack(np.meshgrid(*([ang] * m), indexing="ij"), axis=-1).reshape(-1, m)
    pts_r = np.ones_like(T)
    radial_ang = ang[:: max(1, G // 6)]
    R = np.stack(
        np.meshgrid(*([np.array([0.0, 0.5, 0.9])] * m), indexing="ij"), axis=-1
    ).reshape(-1, m)
    TA = np.stack(np.meshgrid(*([radial_ang] * m), indexing="ij"), axis=-1).reshape(-1, m)
    rr = np.repeat(R, len(TA), axis=0)
    tt = np.tile(TA, (len(R), 1))
    r_all = np.vstack([pts_r, rr])
    t_all = np.vstack([T, tt])
    vals = np.abs(A(r_all * np.exp(1j * t_all)))

    best = int(np.argmin(vals))
    best_val, best_w = float(vals[best]), r_all[best] * np.exp(1j * t_all[best])

    def obj(x):
        r, t = x[:m], x[m:]
        return float(np.abs(A(r * np.exp(1j * t))) ** 2)

    if best_val >= zero_tol * scale:
        order = np.argsort(vals)[:n_starts]
        bounds = [(0.0, 1.0)] * m + [(None, None)] * m
        for i in order:
            x0 = np.concatenate([r_all[i], t_all[i]])
            res = optimize.minimize(obj, x0, method="L-BFGS-B", bounds=bounds)
            v = math.sqrt(max(res.fun, 0.0))
            if v < best_val:
                best_val = v
                best_w = res.x[:m] * np.exp(1j * res.x[m:])

    reasons = []
    if best_val > margin * scale:
        verdict = "yes"
        reasons.append(f"min |A| over the closed polydisk ~ {best_val:.6g} > 0")
    elif best_val < zero_tol * scale:
        verdict = "no"
        where = "on the torus" if np.allclose(np.abs(best_w), 1) else "inside the polydisk"
        reasons.append(f"A vanishes (|A| = {best_val:.3g}) at a point {where}")
    else:
        verdict = "uncertain"
        reasons.append(f"min |A| ~ {best_val:.3g} between zero and margin thresholds")

    gram = None
    if gram_box is None:
        side = max(1, int(round(64 ** (1.0 / m))) - 1)
        gram_box = (side,) * m
    try:
        gram = gram_section_polydisk(A, gram_box)
    except SizeLimit:
        pass
    return RieszVerdict(verdict, best_val, np.asarray(best_w), gram, reasons)


# ---------------------------------------------------------------------------
# Gram sections of {v(alpha)} in H^2


def autocorrelation(A: SparseSymbol) -> dict:
    """``R(gamma) = sum_kappa a(kappa + gamma) conj(a(kappa))``."""
    out = {}
    for k1, v1 in A.terms.items():
        for k2, v2 in A.terms.items():
            g = tuple(x - y for x, y in zip(k1, k2))
            out[g] = out.get(g, 0j) + v1 * np.conj(v2)
    return out


def gram_section_polydisk(A: SparseSymbol, tau_box, max_size=MAX_BOX_SIZE) -> GramSection:
    """``G(alpha, beta) = <v(alpha), v(beta)>`` for ``alpha, beta <= tau_box``.

    Since ``v(alpha) = A w**alpha`` never leaves the nonnegative orthant, the
    section is exactly the multilevel Toeplitz matrix of ``|A|^2``.
    """
    tau_box = tuple(tau_box)
    if len(tau_box) != A.arity:
        raise InputError("box arity mismatch")
    idx = np.array(list(_box(tau_box)), dtype=int).reshape(-1, A.arity)
    if len(idx) > max_size:
        raise SizeLimit(f"section with {len(idx)} rows exceeds limit {max_size}")
    R = autocorrelation(A)
    diff = idx[None, :, :] - idx[:, None, :]  # beta - alpha
    G = np.zeros((len(idx), len(idx)), dtype=complex)
    for g, v in R.items():
        mask = np.all(diff == np.asarray(g), axis=-1)
        G[mask] = v
    return _section(G)


# ---------------------------------------------------------------------------
# partial sum operators Sigma(tau) f = sum_{alpha <= tau} <Phi_alpha, f> v(alpha)


@dataclass
class PartialSumReport:
    tau: tuple
    box: tuple
    norm: float
    enlarged_norm: float
    stable: bool
    rank_one_norm: float  # ||P_tau|| = ||Phi_tau|| * ||v(tau)||
    iterations: int


def partial_sum_matrix(A: SparseSymbol, tau, box, table=None):
    """Sparse matrix of ``Sigma(tau)`` on Taylor coefficients indexed by ``box``."""
    tau, box = tuple(tau), tuple(box)
    degs = A.degrees
    if any(b < t + d for b, t, d in zip(box, tau, degs)):
        raise InputError(f"box {box} must contain tau + deg(A) = {tuple(t + d for t, d in zip(tau, degs))}")
    shape = tuple(b + 1 for b in box)
    size = math.prod(shape)
    if size > MAX_OPERATOR_BOX:
        raise SizeLimit(f"box with {size} coefficients exceeds limit {MAX_OPERATOR_BOX}")
    if table is None or table.N < sum(tau):
        table = coefficient_series(A, sum(tau), mode="full")

    alphas = np.array(list(_box(tau)), dtype=int).reshape(-1, A.arity)
    tau_shape = tuple(t + 1 for t in tau)
    # D: box coefficient gamma -> c_alpha = sum_{gamma <= alpha} b(alpha - gamma) f(gamma)
    rows, cols, vals = [], [], []
    bvals = np.array([table[s] for s in map(tuple, alphas)])
    for i, alpha in enumerate(alphas):
        sig = alphas[np.all(alphas <= alpha, axis=1)]  # sigma <= alpha
        gamma = alpha - sig
        rows.append(np.full(len(sig), i))
        cols.append(np.ravel_multi_index(gamma.T, shape))
        vals.append(bvals[np.ravel_multi_index(sig.T, tau_shape)])
    Dm = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(len(alphas), size),
    )
    # V: alpha -> v(alpha) = sum_kappa a(kappa) w^(alpha + kappa)
    rows, cols, vals = [], [], []
    for kappa, a in A.terms.items():
        tgt = alphas + np.asarray(kappa)
        rows.append(np.ravel_multi_index(tgt.T, shape))
        cols.append(np.arange(len(alphas)))
        vals.append(np.full(len(alphas), a))
    Vm = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, len(alphas)),
    )
    return (Vm @ Dm).tocsr()


def operator_norm(M, tol=1e-6, maxiter=20_000, seed=0):
    """Largest singular value by power iteration on ``M^H M``.

    Returns ``(norm, iterations)``.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(M.shape[1]) + 1j * rng.standard_normal(M.shape[1])
    x /= np.linalg.norm(x)
    MH = M.conj().T.tocsr() if sparse.issparse(M) else M.conj().T
    lam_old = 0.0
    for it in range(1, maxiter + 1):
        y = MH @ (M @ x)
        lam = float(np.vdot(x, y).real)
        ny = np.linalg.norm(y)
        if ny == 0:
            return 0.0, it
        x = y / ny
        if abs(lam - lam_old) <= tol * 1e-3 * lam:
            break
        lam_old = lam
    return math.sqrt(lam), it


def partial_sum_norms(A: SparseSymbol, tau_list, box=None, slack=2, tol=1e-6, stability=0.02):
    """Operator norms of ``Sigma(tau)`` on H^2 for each ``tau`` in ``tau_list``.

    The section box defaults to ``tau + deg(A) + slack``; each norm is
    recomputed on a box enlarged by 2 per coordinate and flagged with a
    :class:`NonExhausted` warning when the two differ by more than
    ``stability``.
    """
    if A.constant == 0:
        raise ZeroConstantTerm("A(0) = 0")
    tau_list = [tuple(int(x) for x in t) for t in tau_list]
    top = max(sum(t) for t in tau_list)
    table = coefficient_series(A, top, mode="full")
    degs = A.degrees
    out = []
    for tau in tau_list:
        bx = tuple(box) if box is not None else tuple(t + d + slack for t, d in zip(tau, degs))
        M = partial_sum_matrix(A, tau, bx, table)
        nrm, its = operator_norm(M, tol)
        big = tuple(b + 2 for b in bx)
        nrm2, _ = operator_norm(partial_sum_matrix(A, tau, big, table), tol)
        stable = abs(nrm2 - nrm) <= stability * nrm
        if not stable:
            warnings.warn(f"Sigma{tau}: norm moved {nrm:.6g} -> {nrm2:.6g}", NonExhausted, stacklevel=2)
        phi = dual_functional(A, tau, table)
        rank_one = phi.norm * A.l2_norm()
        out.append(PartialSumReport(tau, bx, nrm, nrm2, stable, rank_one, its))
    return out


def rank_one_matrix(A: SparseSymbol, tau, box, table=None):
    """Sparse matrix of ``P_tau f = <Phi_tau, f> v(tau)``."""
    tau, box = tuple(tau), tuple(box)
    shape = tuple(b + 1 for b in box)
    phi = dual_functional(A, tau, table)
    cols = [np.ravel_multi_index(tuple(-g for g in gamma), shape) for gamma in phi.terms]
    row_vec = sparse.csr_matrix(
        (list(phi.terms.values()), ([0] * len(cols), cols)), shape=(1, math.prod(shape))
    )
    v = system_vector(A, tau)
    rows = [np.ravel_multi_index(k, shape) for k in v]
    col_vec = sparse.csr_matrix((list(v.values()), (rows, [0] * len(rows))), shape=(math.prod(shape), 1))
    return (col_vec @ row_vec).tocsr()


def sup_dual_norm(table: CoefficientTable) -> float:
    """``sup_tau ||Phi_tau||`` over ``|tau| <= N``; equals the total partial shell sum."""
    return math.sqrt(float(np.sum(table.shell_sums)))


def is_e_star(A: SparseSymbol) -> bool:
    m = A.arity
    if A.constant != 1 or len(A.terms) != m + 1:
        return False
    lin = [A.terms.get(tuple(int(i == k) for i in range(m))) for k in range(m)]
    if any(v is None or v.imag != 0 or v.real >= 0 for v in lin):
        return False
    return abs(sum(-v.real for v in lin) - 1) <= 1e-12


__all__ = [
    "CoefficientTable",
    "DualFunctional",
    "H2Verdict",
    "PartialSumReport",
    "RieszVerdict",
    "ShellSums",
    "autocorrelation",
    "biorthogonality_suite",
    "coefficient_series",
    "convolution_residual",
    "dual_functional",
    "e_star_symbol",
    "gram_section_polydisk",
    "h2_verdict",
    "operator_norm",
    "pairing",
    "partial_sum_matrix",
    "partial_sum_norms",
    "rank_one_matrix",
    "riesz_basis_verdict",
    "shell_sums",
    "sup_dual_norm",
    "system_vector",
    "uniform_e_star",
]
