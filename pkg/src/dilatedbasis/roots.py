"""Polynomial root finding.

Simultaneous Aberth-Ehrlich iteration with companion-matrix eigenvalues as a
fallback, plus numerical multiplicity detection by clustering.

Coefficients are always given in ascending order, ``coeffs[j]`` multiplying
``z**j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegenerateInput, NonConvergence

MAX_DEGREE = 64


def horner(coeffs, z):
    """Evaluate the polynomial and its derivative at ``z`` (array-friendly)."""
    z = np.asarray(z, dtype=complex)
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def taylor_coefficients(coeffs, z0):
    """Coefficients of ``a(z0 + h)`` in powers of ``h``, i.e. ``a^(k)(z0)/k!``."""
    c = np.array(coeffs, dtype=complex)
    n = len(c)
    out = np.empty(n, dtype=complex)
    # repeated synthetic division by (z - z0)
    for k in range(n):
        acc = 0j
        for j in range(n - 1, k - 1, -1):
            acc = acc * z0 + c[j]
            c[j] = acc
        out[k] = c[k]
    return out


def _initial_guesses(coeffs, rng=None, radius_scale=1.0):
    m = len(coeffs) - 1
    # geometric mean of root moduli is |a_0/a_m|^(1/m)
    radius = abs(coeffs[0] / coeffs[-1]) ** (1.0 / m) * radius_scale
    offset = 0.4 if rng is None else rng.uniform(0, 2 * np.pi)
    angles = 2 * np.pi * np.arange(m) / m + offset
    return radius * np.exp(1j * angles)


def aberth(coeffs, z0=None, maxiter=500, tol=1e-15):
    """Run the Aberth-Ehrlich iteration.

    Returns ``(roots, converged)``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    m = len(coeffs) - 1
    z = _initial_guesses(coeffs) if z0 is None else np.array(z0, dtype=complex)
    for _ in range(maxiter):
        p, dp = horner(coeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w = np.where(p == 0, 0.0, w)
        if not np.all(np.isfinite(w)):
            return z, False
        z = z - w
        if np.all(np.abs(w) <= tol * (1.0 + np.abs(z))):
            return z, True
    # linear convergence near multiple roots: accept if residuals are tiny
    return z, bool(np.all(_residuals(coeffs, z) <= 1e-10))


def _residuals(coeffs, z):
    scale = np.max(np.abs(coeffs))
    p, _ = horner(coeffs, z)
    return np.abs(p) / (scale * (1.0 + np.abs(z)) ** (len(coeffs) - 1))


def find_roots(coeffs, residual_tol=1e-8, seed=0):
    """All roots of ``sum coeffs[j] z**j``.

    Tries Aberth-Ehrlich from the standard circle, then from randomly rotated
    and rescaled circles, then companion-matrix eigenvalues. The first
    candidate whose scaled residuals are all below ``residual_tol`` wins.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim != 1 or len(coeffs) < 2:
        raise DegenerateInput("need a polynomial of degree >= 1")
    if coeffs[0] == 0 or coeffs[-1] == 0:
        raise DegenerateInput("constant and leading coefficients must be nonzero")
    if len(coeffs) - 1 > MAX_DEGREE:
        raise DegenerateInput(f"degree {len(coeffs) - 1} exceeds supported maximum {MAX_DEGREE}")
    coeffs = coeffs / np.max(np.abs(coeffs))
    if len(coeffs) == 2:
        return np.array([-coeffs[0] / coeffs[1]])

    rng = np.random.default_rng(seed)
    starts = [None] + [
        _initial_guesses(coeffs, rng, radius_scale=s) for s in (1.0, 0.5, 2.0, 1.3)
    ]
    best = None
    for z0 in starts:
        z, ok = aberth(coeffs, z0)
        res = _residuals(coeffs, z)
        if ok and np.all(res <= residual_tol):
            return z
        if best is None or np.max(res) < np.max(_residuals(coeffs, best)):
            best = z
    z = np.roots(coeffs[::-1])
    z, _ = aberth(coeffs, z, maxiter=50)
    if np.all(_residuals(coeffs, z) <= residual_tol):
        return z
    raise NonConvergence(
        f"root iteration failed; best max residual {np.max(_residuals(coeffs, best)):.3e}"
    )


def refine_multiple_root(coeffs, z0, mu, steps=30):
    """Newton on the (mu-1)-th derivative, where a mu-fold root is simple."""
    d = P.polyder(np.asarray(coeffs, dtype=complex), mu - 1)
    dd = P.polyder(d)
    z = complex(z0)
    for _ in range(steps):
        den = P.polyval(z, dd)
        if den == 0:
            break
        step = P.polyval(z, d) / den
        z -= step
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return z


@dataclass
class RootCluster:
    location: complex
    multiplicity: int
    members: np.ndarray


def derivative_test(coeffs, z0, mu, low_rel=1e-4, high_rel=1e-8):
    """Check that ``z0`` looks like a root of multiplicity exactly ``mu``.

    Taylor coefficients of order below ``mu`` must be small and the one of
    order ``mu`` must not be, both relative to ``sum |a_j| |z0|**j``.
    """
    t = taylor_coefficients(coeffs, z0)
    scale = np.sum(np.abs(coeffs) * np.abs(z0) ** np.arange(len(coeffs)))
    low_ok = bool(np.all(np.abs(t[:mu]) <= low_rel * scale))
    if mu >= len(t):
        return low_ok
    return low_ok and bool(abs(t[mu]) > high_rel * scale)


def cluster_roots(coeffs, roots, radius=1e-6, merge_radius=1e-2):
    """Group numerically computed roots into clusters with multiplicities.

    Roots within ``radius`` of each other are linked first; clusters whose
    centroids are within ``merge_radius`` are then merged when the merged
    centroid passes the derivative test for the combined multiplicity.
    Multiple roots split into ~eps**(1/mu) rings, so the second pass is what
    recovers triple and higher roots.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    coeffs = coeffs / np.max(np.abs(coeffs))
    roots = np.asarray(roots, dtype=complex)
    groups = [[i] for i in range(len(roots))]

    def centroid(g):
        c = roots[g].mean()
        return refine_multiple_root(coeffs, c, len(g)) if len(g) > 1 else c

    # single linkage at the base radius
    changed = True
    while changed:
        changed = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                d = np.min(np.abs(roots[groups[i]][:, None] - roots[groups[j]][None, :]))
                if d <= radius:
                    groups[i] = groups[i] + groups.pop(j)
                    changed = True
                    break
            if changed:
                break

    def near(g, h):
        d = abs(centroid(g) - centroid(h))
        return d <= merge_radius * (1 + abs(centroid(g)))

    # whole neighbourhoods first: a mu-fold root may have split into
    # several small clusters, none of which passes on its own
    merged_groups = []
    pending = list(groups)
    while pending:
        comp = [pending.pop(0)]
        grew = True
        while grew:
            grew = False
            for h in list(pending):
                if any(near(g, h) for g in comp):
                    comp.append(h)
                    pending.remove(h)
                    grew = True
        flat = [i for g in comp for i in g]
        if len(comp) > 1 and derivative_test(
            coeffs, centroid(flat), len(flat), low_rel=1e-9, high_rel=1e-9
        ):
            merged_groups.append(flat)
        else:
            merged_groups.extend(comp)
    groups = merged_groups

    changed = True
    while changed:
        changed = False
        pairs = []
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if near(groups[i], groups[j]):
                    pairs.append((abs(centroid(groups[i]) - centroid(groups[j])), i, j))
        for _, i, j in sorted(pairs):
            merged = groups[i] + groups[j]
            if derivative_test(coeffs, centroid(merged), len(merged), low_rel=1e-9, high_rel=1e-9):
                groups[i] = merged
                groups.pop(j)
                changed = True
                break

    return [RootCluster(complex(centroid(g)), len(g), roots[g]) for g in groups]
