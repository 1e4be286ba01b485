"""Limiting distribution of the scaled longest-increasing-subsequence length.

For a uniform random permutation, (L_n - 2 sqrt(n)) / n^{1/6} converges to the
Tracy-Widom (beta = 2) law, whose CDF has the Painlevé II representation

    F(t) = exp( - integral_t^inf (z - t) * q(z)^2 dz ),

where q solves q'' = 2 q^3 + z q on the real line with q(z) ~ -Ai(z) as
z -> +inf (the Hastings-McLeod branch, which then also satisfies
q(z) ~ -sqrt(-z/2) as z -> -inf).  This module evaluates the Airy function
from scratch, solves the ODE, and exposes the CDF and quantile function.

Numerical route: the ODE is integrated downward from ``z_hi`` with an
adaptive 4/5-order Runge-Kutta scheme started at q = -Ai, q' = -Ai'.  In
double precision that trajectory necessarily drifts off the wanted branch
well before z = -10 — the branch is a separatrix, and the transverse mode
grows like exp((2 sqrt(2)/3) |z|^{3/2}) — so the downward sweep serves for
branch selection and as an initial guess, and is then polished by a
collocation boundary-value solve pinning q(z_hi) = -Ai(z_hi) and q(z_lo) to
the left asymptote.  The polished solution satisfies both boundary behaviors
to ~1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_bvp, solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

__all__ = [
    "AIRY_DOMAIN",
    "airy",
    "airy_prime",
    "Painleve2Solution",
    "solve_painleve2",
    "TwDistribution",
    "default_tw",
    "tw_cdf",
    "tw_quantile",
]

AIRY_DOMAIN = (-15.0, 15.0)

# Switchover between the Maclaurin series and the Poincaré asymptotic
# expansions.  At |z| = 6.8 the series loses about e^12 * eps ~ 3e-11 to
# cancellation between its largest terms and the O(1)-or-smaller result,
# while the optimally truncated asymptotic series is good to ~1e-11; both
# branches therefore stay inside the 1e-10 absolute-error budget.  Pushing
# the switchover past ~7.5 would let series cancellation exceed the budget.
_AIRY_SWITCH = 6.8

# Ai(0) = 3^{-2/3} / Gamma(2/3) and Ai'(0) = -3^{-1/3} / Gamma(1/3).
_AI0 = 0.35502805388781723926
_AIP0 = -0.25881940379280679840


def _airy_series(z: float) -> tuple[float, float]:
    """(Ai, Ai') by Maclaurin series: Ai = Ai(0) f + Ai'(0) g.

    f and g are the two standard solutions of w'' = z w with
    (f, f')(0) = (1, 0) and (g, g')(0) = (0, 1); each series term follows
    from its predecessor by a rational-in-k ratio times z^3.
    """
    z3 = z * z * z
    # f = 1 + z^3/(2*3) + z^6/(2*3*5*6) + ...
    f = term = 1.0
    for k in range(1, 90):
        term *= z3 / ((3 * k - 1) * (3 * k))
        f += term
        if abs(term) < 1e-20:
            break
    # g = z + z^4/(3*4) + z^7/(3*4*6*7) + ...
    g = term = z
    for k in range(1, 90):
        term *= z3 / ((3 * k) * (3 * k + 1))
        g += term
        if abs(term) < 1e-20:
            break
    # f' = z^2/2 + z^5/30 + ...; ratio (k+1) z^3 / (k (3k+2)(3k+3))
    fp = term = 0.5 * z * z
    for k in range(1, 90):
        term *= z3 * (k + 1) / (k * (3 * k + 2) * (3 * k + 3))
        fp += term
        if abs(term) < 1e-20:
            break
    # g' = 1 + z^3/3 + z^6/72 + ...; ratio z^3 / ((3k+1)(3k+3))
    gp = term = 1.0
    for k in range(0, 90):
        term *= z3 / ((3 * k + 1) * (3 * k + 3))
        gp += term
        if abs(term) < 1e-20:
            break
    return _AI0 * f + _AIP0 * g, _AI0 * fp + _AIP0 * gp


def _asymptotic_coeffs(max_terms: int) -> tuple[list[float], list[float]]:
    """Coefficients u_k (for Ai) and v_k (for Ai') of the Poincaré expansions."""
    u = [1.0]
    v = [1.0]
    for k in range(1, max_terms):
        u.append(
            u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        )
        v.append(u[-1] * (6 * k + 1) / (1 - 6 * k))
    return u, v


_U_COEF, _V_COEF = _asymptotic_coeffs(40)


def _airy_asymptotic_pos(z: float) -> tuple[float, float]:
    """(Ai, Ai') for large positive z: decaying exponential expansion.

    Ai ~ e^{-zeta}/(2 sqrt(pi) z^{1/4}) * sum (-1)^k u_k zeta^{-k} with
    zeta = (2/3) z^{3/2}; Ai' has the same form with v_k and prefactor
    -z^{1/4} e^{-zeta}/(2 sqrt(pi)).  Truncated at the smallest term.
    """
    zeta = (2.0 / 3.0) * z * math.sqrt(z)
    s_val = s_der = 0.0
    power = 1.0
    prev = math.inf
    for k in range(len(_U_COEF)):
        contrib = _U_COEF[k] * power
        if abs(contrib) > prev:
            break
        sign = 1.0 if k % 2 == 0 else -1.0
        s_val += sign * contrib
        s_der += sign * _V_COEF[k] * power
        prev = abs(contrib)
        power /= zeta
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref * s_val / z**0.25, -pref * z**0.25 * s_der


def _airy_asymptotic_neg(z: float) -> tuple[float, float]:
    """(Ai, Ai') for large negative z: oscillatory expansion.

    With x = -z, zeta = (2/3) x^{3/2}, and the u/v series split by parity:
    Ai  =  ( sin(zeta+pi/4) P - cos(zeta+pi/4) Q ) / (sqrt(pi) x^{1/4})
    Ai' = -( cos(zeta+pi/4) R + sin(zeta+pi/4) S ) * x^{1/4} / sqrt(pi)
    where P/Q (R/S) are the even/odd-k parts of sum (-1)^{floor(k/2)} u_k
    zeta^{-k} (v_k respectively), truncated at the smallest same-parity term.
    """
    x = -z
    zeta = (2.0 / 3.0) * x * math.sqrt(x)
    p = q = r = s = 0.0
    power = 1.0
    for k in range(len(_U_COEF)):
        contrib = _U_COEF[k] * power
        if k >= 2 and abs(contrib) > abs(_U_COEF[k - 2] * power * zeta * zeta):
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * contrib
            r += sign * _V_COEF[k] * power
        else:
            q += sign * contrib
            s += sign * _V_COEF[k] * power
        power /= zeta
    ang = zeta + 0.25 * math.pi
    sin_a, cos_a = math.sin(ang), math.cos(ang)
    ai = (sin_a * p - cos_a * q) / (math.sqrt(math.pi) * x**0.25)
    aip = -(cos_a * r + sin_a * s) * x**0.25 / math.sqrt(math.pi)
    return ai, aip


def _airy_pair(z: float) -> tuple[float, float]:
    lo, hi = AIRY_DOMAIN
    if not lo <= z <= hi:
        raise ValueError(f"airy argument {z} outside supported domain [{lo}, {hi}]")
    if abs(z) <= _AIRY_SWITCH:
        return _airy_series(z)
    if z > 0:
        return _airy_asymptotic_pos(z)
    return _airy_asymptotic_neg(z)


def airy(z: float) -> float:
    """Airy function Ai(z) on [-15, 15], absolute error <= 1e-10.

    Maclaurin series for |z| <= 6.8 and Poincaré asymptotic expansions
    beyond; see ``_AIRY_SWITCH`` for the error budget behind the switchover.
    """
    return _airy_pair(float(z))[0]


def airy_prime(z: float) -> float:
    """Derivative Ai'(z) on [-15, 15]; same method and budget as :func:`airy`."""
    return _airy_pair(float(z))[1]


@dataclass(frozen=True)
class Painleve2Solution:
    """Solution of q'' = 2 q^3 + z q on a descending grid [z_hi ... z_lo].

    On the Hastings-McLeod branch q is negative throughout, matches -Ai(z)
    at the right end, and approaches -sqrt(-z/2) at the left end.
    """

    grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray

    @property
    def z_hi(self) -> float:
        return float(self.grid[0])

    @property
    def z_lo(self) -> float:
        return float(self.grid[-1])


def _pii_rhs_vec(z, y):
    return np.vstack((y[1], 2.0 * y[0] ** 3 + z * y[0]))


def _left_asymptote(z: float) -> float:
    return -math.sqrt(-z / 2.0) * (1.0 + 1.0 / (8.0 * z**3))


def solve_painleve2(
    z_hi: float = 6.0, z_lo: float = -10.0, tol: float = 1e-10
) -> Painleve2Solution:
    """Hastings-McLeod solution of q'' = 2 q^3 + z q on [z_lo, z_hi].

    Stage 1 integrates downward from ``z_hi`` with adaptive RK45 (local
    error <= ``tol``) from q = -Ai(z_hi), q' = -Ai'(z_hi), stopping if |q|
    exceeds 1e6.  A double-precision sweep always leaves the branch
    eventually, so for deep windows the stop is expected: the sweep serves
    to select the branch and seed stage 2, a collocation solve with the two
    branch-defining boundary conditions, which restores the left asymptote
    to ~1e-9.  Raises RuntimeError naming the start point if the sweep blows
    up before any usable branch segment exists or the collocation fails.
    """
    if not z_lo < z_hi:
        raise ValueError(f"need z_lo < z_hi, got [{z_lo}, {z_hi}]")
    if tol <= 0:
        raise ValueError("tol must be positive")

    q0, qp0 = -airy(z_hi), -airy_prime(z_hi)

    def blow_up(z, y):
        return abs(y[0]) - 1e6

    blow_up.terminal = True

    ivp_tol = min(max(tol, 1e-13), 1e-6)
    sweep = solve_ivp(
        lambda z, y: [y[1], 2.0 * y[0] ** 3 + z * y[0]],
        (z_hi, z_lo),
        [q0, qp0],
        method="RK45",
        rtol=ivp_tol,
        atol=ivp_tol,
        dense_output=True,
        events=blow_up,
    )
    z_reached = float(sweep.t[-1])
    blew_up = sweep.status == 1
    if blew_up and z_reached > min(-3.0, z_hi - 1.0):
        raise RuntimeError(
            f"downward sweep from unstable start point z_hi={z_hi} blew up "
            f"(|q| > 1e6) already at z={z_reached:.3f}; no usable branch segment"
        )

    if z_lo > -4.5:
        # window too shallow for the left asymptote to be meaningful;
        # the downward sweep alone is accurate here
        if blew_up:
            raise RuntimeError(
                f"downward sweep from unstable start point z_hi={z_hi} blew up "
                f"(|q| > 1e6) at z={z_reached:.3f} before reaching z_lo={z_lo}"
            )
        grid_desc = np.linspace(z_hi, z_lo, 2001)
        vals = sweep.sol(grid_desc)
        solution = Painleve2Solution(grid=grid_desc, q=vals[0], q_prime=vals[1])
    else:
        def bc(ya, yb):
            return np.array([ya[0] - _left_asymptote(z_lo), yb[0] - q0])

        mesh = np.linspace(z_lo, z_hi, 401)
        guess = np.empty((2, mesh.size))
        ivp_trust = max(-4.0, z_reached + 0.5)
        for i, z in enumerate(mesh):
            if z >= ivp_trust:
                guess[:, i] = sweep.sol(z)
            else:
                guess[0, i] = _left_asymptote(z)
                guess[1, i] = 0.5 / math.sqrt(-2.0 * z)
        bvp = solve_bvp(
            _pii_rhs_vec, bc, mesh, guess, tol=max(tol / 100.0, 1e-12),
            max_nodes=200000,
        )
        if bvp.status != 0:
            raise RuntimeError(
                f"collocation refinement failed (start point z_hi={z_hi}): "
                f"{bvp.message}"
            )
        grid_desc = np.linspace(z_hi, z_lo, 4001)
        vals = bvp.sol(grid_desc)
        solution = Painleve2Solution(grid=grid_desc, q=vals[0], q_prime=vals[1])

    if np.any(solution.q >= 0.0):
        raise RuntimeError(
            f"solution left the negative branch (start point z_hi={z_hi})"
        )
    return solution


def _ai_sq_tail(x: float) -> float:
    """integral_x^inf Ai(z)^2 dz = Ai'(x)^2 - x Ai(x)^2 (closed form)."""
    ai, aip = _airy_pair(x)
    return aip * aip - x * ai * ai


def _z_ai_sq_tail(x: float) -> float:
    """integral_x^inf z Ai(z)^2 dz = (x Ai'^2 - x^2 Ai^2 - Ai Ai') / 3."""
    ai, aip = _airy_pair(x)
    return (x * aip * aip - x * x * ai * ai - ai * aip) / 3.0


class TwDistribution:
    """Tracy-Widom (beta = 2) distribution: CDF and quantiles.

    Built from a Painlevé II solution and immutable afterwards, so one
    instance can be shared freely across threads.  CDF values come from
    cubic-spline quadrature of (z - t) q(z)^2 on the solved grid plus an
    analytic tail beyond its right end (q ~ -Ai there, and the integrals of
    Ai^2 and z Ai^2 have closed forms in Ai and Ai').  The six tail
    probabilities used by two-sided tests at levels 0.001 / 0.01 / 0.05 have
    their quantiles precomputed at construction.
    """

    CACHED_PROBABILITIES = (0.0005, 0.005, 0.025, 0.975, 0.995, 0.9995)

    def __init__(self, solution: Optional[Painleve2Solution] = None) -> None:
        if solution is None:
            solution = solve_painleve2()
        self.solution = solution
        z_asc = solution.grid[::-1].copy()
        q_asc = solution.q[::-1].copy()
        self._z_lo = float(z_asc[0])
        self._z_hi = float(z_asc[-1])
        self._spline_q2 = CubicSpline(z_asc, q_asc * q_asc)
        self._spline_zq2 = CubicSpline(z_asc, z_asc * q_asc * q_asc)
        self._tail_i0 = _ai_sq_tail(self._z_hi)
        self._tail_i1 = _z_ai_sq_tail(self._z_hi)
        self.cached_quantiles: dict[float, float] = {
            p: self._quantile_uncached(p) for p in self.CACHED_PROBABILITIES
        }

    @property
    def z_lo(self) -> float:
        return self._z_lo

    @property
    def z_hi(self) -> float:
        return self._z_hi

    def cdf(self, t: float) -> float:
        """F(t) = exp(-integral_t^inf (z - t) q^2 dz); absolute error ~1e-9."""
        t = float(t)
        if not self._z_lo <= t <= self._z_hi:
            raise ValueError(f"t={t} outside solved range [{self._z_lo}, {self._z_hi}]")
        core = self._spline_zq2.integrate(t, self._z_hi) - t * self._spline_q2.integrate(
            t, self._z_hi
        )
        tail = self._tail_i1 - t * self._tail_i0
        return float(math.exp(-(core + tail)))

    def _quantile_uncached(self, p: float) -> float:
        return float(
            brentq(lambda t: self.cdf(t) - p, self._z_lo, self._z_hi, xtol=1e-10)
        )

    def quantile(self, p: float) -> float:
        """t with |F(t) - p| < 1e-6, by bracketed root-finding on the CDF."""
        p = float(p)
        if not 1e-6 < p < 1.0 - 1e-6:
            raise ValueError(f"quantile probability {p} outside (1e-6, 1-1e-6)")
        cached = self.cached_quantiles.get(p)
        if cached is not None:
            return cached
        return self._quantile_uncached(p)


_DEFAULT_TW: Optional[TwDistribution] = None


def default_tw() -> TwDistribution:
    """Shared distribution built from the default ODE solve (lazy, cached)."""
    global _DEFAULT_TW
    if _DEFAULT_TW is None:
        _DEFAULT_TW = TwDistribution()
    return _DEFAULT_TW


def tw_cdf(t: float) -> float:
    """CDF of the shared default distribution at t (within the solved range)."""
    return default_tw().cdf(t)


def tw_quantile(p: float) -> float:
    """Quantile of the shared default distribution at p in (1e-6, 1-1e-6)."""
    return default_tw().quantile(p)
