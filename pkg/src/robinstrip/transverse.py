"""Cross-sectional Robin eigenproblem on the interval (0, d).

For a constant coupling ``alpha > 0`` the transversal modes of the strip are

    chi_n(y) = N * ((alpha/k) sin(k y) + cos(k y)),    k = sqrt(E_n),

where E_n is the n-th root of the dispersion function

    f(E) = 2 alpha sqrt(E) cos(sqrt(E) d) + (alpha^2 - E) sin(sqrt(E) d)

and N normalizes chi_n to unit L2 norm.  The boundary conditions are
-chi'(0) + alpha chi(0) = 0 and chi'(d) + alpha chi(d) = 0.

The dispersion function factorizes over half-interval problems,

    f = 2 (k cos(kd/2) + alpha sin(kd/2)) (alpha cos(kd/2) - k sin(kd/2)),

so its roots split into an even family (k tan(kd/2) = alpha) and an odd
family (tan(kd/2) = -k/alpha); the test suite uses independent bisection on
the factors as an oracle.  E_n lies strictly between the Neumann and
Dirichlet values ((n-1) pi/d)^2 and (n pi/d)^2, which makes bisection in
k = sqrt(E) unconditionally convergent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BracketError, ConfigError, ContractError, NumericalError
from .quadrature import composite_gl

# Relative bisection tolerance on k = sqrt(E).
_K_REL_TOL = 1e-13
# Above this alpha*d the dispersion is evaluated rescaled by 1/(1+alpha^2)
# to keep magnitudes representable.
_LARGE_ALPHA_D = 1e8
# Below this |k_a - k_b|*d the closed-form overlap loses digits to
# cancellation and quadrature takes over.
_NEAR_DEGENERATE_KD = 1e-6


@dataclass(frozen=True)
class RobinCrossSection:
    """Constant-coupling cross section: width d, Robin coupling alpha."""

    alpha: float
    d: float

    def __post_init__(self):
        if not (self.alpha > 0.0) or not np.isfinite(self.alpha):
            raise ConfigError(f"alpha must be positive and finite, got {self.alpha!r}")
        if not (self.d > 0.0) or not np.isfinite(self.d):
            raise ConfigError(f"d must be positive and finite, got {self.d!r}")


@dataclass(frozen=True)
class TransversalMode:
    """One normalized transversal eigenfunction chi_n with its energy."""

    n: int
    energy: float
    k: float
    norm_const: float
    cross_section: RobinCrossSection


def dispersion(E, cs: RobinCrossSection):
    """Dispersion function f(E; alpha).  Vectorized over E.

    f(0) = 0 identically, but E = 0 is not an eigenvalue; root searches
    start from a small positive k.  For alpha*d beyond 1e8 the value is
    rescaled by 1/(1 + alpha^2) so the (alpha^2 - E) term cannot overflow
    the comparison logic; the root set is unchanged.
    """
    E = np.asarray(E, dtype=float)
    if np.any(E < 0):
        raise ContractError("dispersion requires E >= 0")
    k = np.sqrt(E)
    f = 2.0 * cs.alpha * k * np.cos(k * cs.d) + (cs.alpha**2 - E) * np.sin(k * cs.d)
    if cs.alpha * cs.d > _LARGE_ALPHA_D:
        f = f / (1.0 + cs.alpha**2)
    return f if f.ndim else float(f)


def _bisect_k(cs: RobinCrossSection, lo: float, hi: float) -> float:
    """Bisection for a root of dispersion(k^2) with a guaranteed sign change."""
    flo = dispersion(lo * lo, cs)
    fhi = dispersion(hi * hi, cs)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(
            f"no sign change of the dispersion on k in ({lo:g}, {hi:g}) "
            f"for alpha={cs.alpha:g}, d={cs.d:g}"
        )
    while hi - lo > _K_REL_TOL * hi:
        mid = 0.5 * (lo + hi)
        fm = dispersion(mid * mid, cs)
        if fm == 0.0:
            return mid
        if fm * flo > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def transversal_eigenvalues(cs: RobinCrossSection, n_max: int) -> np.ndarray:
    """The n_max lowest transversal energies E_1 < E_2 < ... < E_{n_max}."""
    if n_max < 1:
        raise ContractError("n_max must be >= 1")
    out = np.empty(n_max)
    for n in range(1, n_max + 1):
        lo = (n - 1) * np.pi / cs.d if n > 1 else 1e-12 / cs.d
        hi = n * np.pi / cs.d
        out[n - 1] = _bisect_k(cs, lo, hi) ** 2
    return out


def _profile_norm_sq(alpha: float, d: float, k: float) -> float:
    """Closed form of int_0^d ((alpha/k) sin(ky) + cos(ky))^2 dy."""
    A = alpha / k
    return (
        0.5 * d * (A * A + 1.0)
        + (1.0 - A * A) * np.sin(2.0 * k * d) / (4.0 * k)
        + A * np.sin(k * d) ** 2 / k
    )


def _profile_norm_sq_quad(alpha: float, d: float, k: float) -> float:
    """Same integral by composite Gauss-Legendre, for the build-time check."""
    npanels = max(1, int(np.ceil(k * d / (2.0 * np.pi)))) + 1
    y, w = composite_gl(0.0, d, knots=[d * j / npanels for j in range(1, npanels)],
                        points_per_panel=64)
    u = (alpha / k) * np.sin(k * y) + np.cos(k * y)
    return float(np.sum(w * u * u))


def transversal_mode(cs: RobinCrossSection, n: int) -> TransversalMode:
    """The n-th normalized mode; the closed-form normalization is
    cross-checked against quadrature on every construction."""
    if n < 1:
        raise ContractError("mode index n must be >= 1")
    E = float(transversal_eigenvalues(cs, n)[n - 1])
    k = np.sqrt(E)
    I = _profile_norm_sq(cs.alpha, cs.d, k)
    I_quad = _profile_norm_sq_quad(cs.alpha, cs.d, k)
    if abs(I - I_quad) > 1e-12 * max(abs(I), 1.0):
        raise NumericalError(
            f"normalization cross-check failed for alpha={cs.alpha:g}, "
            f"d={cs.d:g}, n={n}: closed form {I!r} vs quadrature {I_quad!r}"
        )
    return TransversalMode(n=n, energy=E, k=float(k), norm_const=float(1.0 / np.sqrt(I)),
                           cross_section=cs)


def mode_eval(mode: TransversalMode, y):
    """chi_n(y).  Accepts scalars or arrays; y must lie in [0, d]."""
    y = np.asarray(y, dtype=float)
    d = mode.cross_section.d
    if np.any(y < -1e-12 * d) or np.any(y > d * (1.0 + 1e-12)):
        raise ContractError(f"y out of range [0, {d:g}]")
    alpha = mode.cross_section.alpha
    k = mode.k
    val = mode.norm_const * ((alpha / k) * np.sin(k * y) + np.cos(k * y))
    return val if val.ndim else float(val)


def mode_eval_derivative(mode: TransversalMode, y):
    """chi_n'(y), used for derivative matching and quadratic forms."""
    y = np.asarray(y, dtype=float)
    alpha = mode.cross_section.alpha
    k = mode.k
    val = mode.norm_const * (alpha * np.cos(k * y) - k * np.sin(k * y))
    return val if val.ndim else float(val)


def overlap(ma: TransversalMode, mb: TransversalMode) -> float:
    """int_0^d chi_a(y) chi_b(y) dy.

    Closed form via product-to-sum antiderivatives; the difference
    frequency uses the half-angle form 1 - cos(t) = 2 sin^2(t/2) so no
    digits cancel.  Nearly equal wavenumbers (|k_a - k_b| d <= 1e-6) fall
    back to composite Gauss-Legendre, which covers the removable 0/0.
    """
    if ma.cross_section.d != mb.cross_section.d:
        raise ContractError("overlap requires modes on the same strip width")
    d = ma.cross_section.d
    ka, kb = ma.k, mb.k
    Aa = ma.cross_section.alpha / ka
    Ab = mb.cross_section.alpha / kb
    dk, sk = ka - kb, ka + kb
    if abs(dk) * d <= _NEAR_DEGENERATE_KD:
        npanels = max(1, int(np.ceil(sk * d / (2.0 * np.pi)))) + 1
        y, w = composite_gl(0.0, d, knots=[d * j / npanels for j in range(1, npanels)],
                            points_per_panel=64)
        u = Aa * np.sin(ka * y) + np.cos(ka * y)
        v = Ab * np.sin(kb * y) + np.cos(kb * y)
        I = float(np.sum(w * u * v))
    else:
        cd = np.sin(dk * d) / dk
        cs_ = np.sin(sk * d) / sk
        sd = 2.0 * np.sin(0.5 * dk * d) ** 2 / dk
        ss = 2.0 * np.sin(0.5 * sk * d) ** 2 / sk
        I_ss = 0.5 * (cd - cs_)
        I_cc = 0.5 * (cd + cs_)
        I_sc = 0.5 * (ss + sd)
        I_cs = 0.5 * (ss - sd)
        I = Aa * Ab * I_ss + Aa * I_sc + Ab * I_cs + I_cc
    return ma.norm_const * mb.norm_const * I


def overlap_matrix(inner: RobinCrossSection, outer: RobinCrossSection, N: int) -> np.ndarray:
    """O[m, n] = overlap(chi_{n+1}(inner), chi_{m+1}(outer)).

    chi_n is even/odd about y = d/2 for n odd/even, so opposite-parity
    products integrate to exactly zero; those entries are set to 0.0
    without evaluating anything (checkerboard sparsity).
    """
    modes_in = [transversal_mode(inner, n) for n in range(1, N + 1)]
    modes_out = [transversal_mode(outer, m) for m in range(1, N + 1)]
    O = np.zeros((N, N))
    for m in range(N):
        for n in range(N):
            if (m + n) % 2 == 0:
                O[m, n] = overlap(modes_in[n], modes_out[m])
    return O
