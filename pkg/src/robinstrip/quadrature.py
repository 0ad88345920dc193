"""Quadrature helpers shared across the package.

Everything here is deterministic: fixed node counts, fixed panel splits,
no randomness.  The adaptive Simpson rule refines by doubling the panel
count until two consecutive levels agree to a relative tolerance.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConvergenceError


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def composite_gl(lo: float, hi: float, knots=(), points_per_panel: int = 64,
                 max_panel_width: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights on [lo, hi].

    The interval is split at every interior knot (so integrand kinks or
    coefficient jumps land on panel boundaries) and long panels are further
    subdivided to at most ``max_panel_width``.
    """
    if hi <= lo:
        return np.empty(0), np.empty(0)
    xs, ws = gauss_legendre(points_per_panel)
    edges = sorted({lo, hi, *(k for k in knots if lo < k < hi)})
    X, W = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nsub = 1
        if max_panel_width is not None and max_panel_width > 0:
            nsub = max(1, int(np.ceil((b - a) / max_panel_width)))
        for j in range(nsub):
            aa = a + (b - a) * j / nsub
            bb = a + (b - a) * (j + 1) / nsub
            X.append(0.5 * (bb - aa) * xs + 0.5 * (bb + aa))
            W.append(0.5 * (bb - aa) * ws)
    return np.concatenate(X), np.concatenate(W)


def adaptive_simpson(f, lo: float, hi: float, base_points: int = 64,
                     rel_tol: float = 1e-8, max_doublings: int = 16) -> float:
    """Integrate a smooth callable by composite Simpson with doubling.

    Starts from ``base_points`` panels and doubles until two consecutive
    levels agree to ``rel_tol`` (relative, with an absolute floor for
    near-zero integrals).  Raises ConvergenceError if the budget runs out.
    """
    if hi <= lo:
        return 0.0

    def simpson(npanels: int) -> float:
        x = np.linspace(lo, hi, 2 * npanels + 1)
        y = np.asarray(f(x), dtype=float)
        h = (hi - lo) / (2 * npanels)
        return (h / 3.0) * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())

    npanels = max(1, int(base_points) // 2)
    prev = simpson(npanels)
    for _ in range(max_doublings):
        npanels *= 2
        cur = simpson(npanels)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300) + 1e-300:
            return cur
        prev = cur
    raise ConvergenceError(
        f"Simpson rule did not reach relative tolerance {rel_tol:g} "
        f"within {max_doublings} doublings on [{lo:g}, {hi:g}]"
    )
