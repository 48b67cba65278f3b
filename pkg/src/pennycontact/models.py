"""Pole-removal coefficient systems for the two inclusion geometries.

A flat rigid disc (radius b) or flat rigid annulus (radii c < b) wedged
into a penny-shaped crack of radius a leads, after Mellin transformation,
to infinite linear systems for the pole-removal coefficients A and B.
This module assembles and solves those systems, either by truncation to a
dense block ("reduction method", geometric convergence in the truncation
order) or, for the disc, by exact recurrence relations in powers of
lambda = b/a.

The loading enters only through the indentation parameter
delta_star = 2*delta / (a * theta1 * sqrt(pi)), so every coefficient is
linear in delta_star.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import (
    PoleError,
    SQRT_PI,
    gauss_2f1,
    l_minus,
    l_plus_reciprocal,
)

__all__ = [
    "SingularSystemError",
    "DiscProblem",
    "AnnulusProblem",
    "CoefficientSetDisc",
    "CoefficientSetAnnulus",
    "RecurrenceTable",
    "omega1_disc",
    "omega_tilde",
    "omega_annulus_flat",
    "recurrence_table",
    "solve_disc_reduction",
    "solve_disc_recurrence",
    "solve_annulus_reduction",
    "system_residual",
    "disc_system_residual",
    "annulus_system_residual",
]

DEFAULT_TRUNCATION = 60
DEFAULT_ORDER = 120

_SERIES_RTOL = 1e-16
_SERIES_MAX_TERMS = 100_000
_POLE_TOL = 1e-9

# omega-tilde branch crossover: series below, hypergeometric above.
_OMEGA_SWITCH_T2 = 0.75


class SingularSystemError(RuntimeError):
    """The truncated system could not be solved."""


@dataclass(frozen=True)
class DiscProblem:
    """Flat disc inclusion in a penny-shaped crack.

    lam is the radius ratio b/a in (0, 1); delta_star the nondimensional
    indentation 2*delta/(a*theta1*sqrt(pi)).  theta1 = (1 - nu)/G and the
    crack radius are carried only so the field evaluators can
    redimensionalize; the defaults give fully nondimensional output.
    """

    lam: float
    delta_star: float
    theta1: float = 1.0
    a_radius: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lam must lie in (0, 1), got {self.lam!r}")
        if self.delta_star < 0.0:
            raise ValueError(f"delta_star must be >= 0, got {self.delta_star!r}")
        if self.theta1 <= 0.0 or self.a_radius <= 0.0:
            raise ValueError("theta1 and a_radius must be positive")

    @property
    def delta_over_a(self) -> float:
        """delta/a implied by delta_star and theta1."""
        return 0.5 * self.delta_star * self.theta1 * SQRT_PI


@dataclass(frozen=True)
class AnnulusProblem:
    """Flat annular inclusion, inner/outer radius ratios lam0 < lam1.

    lam0 = 0 is accepted and degenerates exactly to the disc system.
    """

    lam0: float
    lam1: float
    delta_star: float
    theta1: float = 1.0
    a_radius: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.lam0 < 1.0:
            raise ValueError(f"lam0 must lie in [0, 1), got {self.lam0!r}")
        if not 0.0 < self.lam1 < 1.0:
            raise ValueError(f"lam1 must lie in (0, 1), got {self.lam1!r}")
        if self.lam0 >= self.lam1:
            raise ValueError(
                f"need lam0 < lam1, got lam0={self.lam0!r}, lam1={self.lam1!r}"
            )
        if self.delta_star < 0.0:
            raise ValueError(f"delta_star must be >= 0, got {self.delta_star!r}")
        if self.theta1 <= 0.0 or self.a_radius <= 0.0:
            raise ValueError("theta1 and a_radius must be positive")

    @property
    def radius_ratio(self) -> float:
        """Inner-to-outer contact ratio lam0/lam1."""
        return self.lam0 / self.lam1


@dataclass(frozen=True)
class CoefficientSetDisc:
    """Solved pole-removal coefficients for the disc model.

    A_plus[n] decays like lam**(2n+1) and B_minus[n] like lam**(2n).
    """

    A_plus: np.ndarray
    B_minus: np.ndarray
    truncation_N: int


@dataclass(frozen=True)
class CoefficientSetAnnulus:
    """Solved pole-removal coefficients for the annulus model."""

    A_plus: np.ndarray
    A_minus: np.ndarray
    B_plus: np.ndarray
    B_minus: np.ndarray
    truncation_N: int


@dataclass(frozen=True)
class RecurrenceTable:
    """Triangular lambda-power coefficients a[n, k], b[n, k] for the disc.

    Row seeds: a[n, 0] = -delta_star/(2 pi (n + 1/2)) and b[n, 0] = 0.
    """

    a: np.ndarray
    b: np.ndarray
    order_K: int


# ----------------------------------------------------------------------
# right-hand-side functions
# ----------------------------------------------------------------------


def omega1_disc(side: str, s: float, delta_star: float = 1.0) -> float:
    """Forcing function of the disc system for the flat inclusion.

    The minus branch is -delta_star/s; the plus branch carries the
    kernel-factor correction, whose growth softens the tail to
    O(|s|**-1/2) along the negative axis.
    """
    if s == 0.0:
        raise PoleError("omega1 is singular at s = 0")
    if side == "minus":
        return -delta_star / s
    if side == "plus":
        inv = l_plus_reciprocal(complex(s)).real
        return delta_star * (SQRT_PI * inv - 1.0) / s
    raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


def _omega_tilde_series(side: str, s: float, ratio: float) -> float:
    """Partial-fraction series for the annulus correction term."""
    t2 = ratio * ratio
    total = 0.0
    if side == "plus":
        # poles at s = 2n + 2
        coef = 0.5 * SQRT_PI * ratio * ratio  # Gamma(3/2)/1! * ratio^2
        n = 0
        while n < _SERIES_MAX_TERMS:
            den = s - 2.0 * n - 2.0
            if abs(den) < _POLE_TOL:
                raise PoleError(f"omega-tilde+ pole at s = {2 * n + 2}")
            term = coef / den
            total += term
            if abs(term) < _SERIES_RTOL * max(abs(total), 1e-300):
                return (2.0 / math.pi) * total
            coef *= (n + 1.5) / (n + 2.0) * t2
            n += 1
    elif side == "minus":
        # poles at s = -2n - 1
        coef = SQRT_PI * ratio  # Gamma(1/2)/0! * ratio
        n = 0
        while n < _SERIES_MAX_TERMS:
            den = s + 2.0 * n + 1.0
            if abs(den) < _POLE_TOL:
                raise PoleError(f"omega-tilde- pole at s = {-(2 * n + 1)}")
            term = coef / den
            total += term
            if abs(term) < _SERIES_RTOL * max(abs(total), 1e-300):
                return total / math.pi
            coef *= (n + 0.5) / (n + 1.0) * t2
            n += 1
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    raise RuntimeError("omega-tilde series did not converge")


def _omega_tilde_hypergeometric(side: str, s: float, ratio: float) -> float:
    """Closed hypergeometric form of the annulus correction term."""
    t2 = ratio * ratio
    if side == "plus":
        if s == 0.0:
            raise PoleError("omega-tilde+ closed form is singular at s = 0")
        value = gauss_2f1(-s / 2.0, 0.5, 1.0 - s / 2.0, t2)
        return 2.0 * (value - 1.0) / (SQRT_PI * s)
    if side == "minus":
        if s == -1.0:
            raise PoleError("omega-tilde- closed form is singular at s = -1")
        value = gauss_2f1((s + 1.0) / 2.0, 0.5, (s + 3.0) / 2.0, t2)
        return ratio * value / (SQRT_PI * (s + 1.0))
    raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


def omega_tilde(side: str, s: float, ratio: float, method: str = "auto") -> float:
    """Annulus correction term, by series or equivalent hypergeometric form.

    ratio = lam0/lam1; both routes agree to roundoff and the automatic
    branch picks the series for small ratio.
    """
    if not 0.0 <= ratio < 1.0:
        raise ValueError(f"ratio must lie in [0, 1), got {ratio!r}")
    if ratio == 0.0:
        return 0.0
    if method == "series":
        return _omega_tilde_series(side, s, ratio)
    if method == "hypergeometric":
        return _omega_tilde_hypergeometric(side, s, ratio)
    if method == "auto":
        if ratio * ratio > _OMEGA_SWITCH_T2:
            return _omega_tilde_hypergeometric(side, s, ratio)
        return _omega_tilde_series(side, s, ratio)
    raise ValueError(f"unknown method {method!r}")


def omega_annulus_flat(
    which: int,
    side: str,
    s: float,
    problem: AnnulusProblem,
    method: str = "auto",
) -> float:
    """Forcing functions of the annulus system for a flat inclusion.

    which selects the pair (1 for the outer-edge functions, 2 for the
    inner ones); side picks the half-plane limit.  At lam0 = 0 the
    residual terms vanish and omega_1^- reduces to the disc forcing.
    """
    if s == 0.0:
        raise PoleError("omega is singular at s = 0")
    t = problem.radius_ratio
    scale = 0.5 * problem.delta_star * SQRT_PI  # delta / (a theta1)
    if which == 1:
        wt = omega_tilde("plus", s, t, method)
        if side == "plus":
            inv = l_plus_reciprocal(complex(s)).real
            return scale * ((2.0 / s) * (inv - 1.0 / SQRT_PI) - wt)
        if side == "minus":
            inv = l_plus_reciprocal(complex(s)).real
            pow_ts = 0.0 if t == 0.0 else t**s
            return scale * (
                -2.0 / (s * SQRT_PI) + (2.0 / s) * inv * pow_ts - wt
            )
    elif which == 2:
        wt = omega_tilde("minus", s, t, method)
        lm = l_minus(complex(s)).real
        if side == "minus":
            return scale * (lm / s - wt)
        if side == "plus":
            if t == 0.0:
                raise ValueError("omega_2^+ is unbounded in the disc limit")
            return scale * (t ** (-s) * lm / s - wt)
    else:
        raise ValueError(f"which must be 1 or 2, got {which!r}")
    raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


# ----------------------------------------------------------------------
# disc model: reduction and recurrence solvers
# ----------------------------------------------------------------------


def _solve_dense(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        out = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"truncated system is singular (cond ~ {np.linalg.cond(matrix):.3e})"
        ) from exc
    if not np.all(np.isfinite(out)):
        raise SingularSystemError(
            f"solution overflowed (cond ~ {np.linalg.cond(matrix):.3e})"
        )
    return out


def solve_disc_reduction(p: DiscProblem, N: int = DEFAULT_TRUNCATION) -> CoefficientSetDisc:
    """Solve the truncated 2N x 2N disc system by a direct dense solve.

    Unknowns are interleaved (B-_0, A+_0, B-_1, A+_1, ...) which keeps
    the matrix close to the identity for small lam.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N!r}")
    lam = p.lam
    n = np.arange(N)
    nm = n[:, None] + n[None, :] + 0.5
    lam_even = lam ** (2.0 * n)
    lam_odd = lam ** (2.0 * n + 1.0)

    matrix = np.eye(2 * N)
    matrix[0::2, 1::2] -= (2.0 / math.pi) * lam_even[:, None] / nm
    matrix[1::2, 0::2] -= (0.5 / math.pi) * lam_odd[:, None] / nm
    rhs = np.zeros(2 * N)
    forcing = np.array(
        [omega1_disc("minus", 2.0 * k + 1.0, p.delta_star) for k in range(N)]
    )
    rhs[1::2] = (lam_odd / math.pi) * forcing

    x = _solve_dense(matrix, rhs)
    return CoefficientSetDisc(A_plus=x[1::2], B_minus=x[0::2], truncation_N=N)


def recurrence_table(
    delta_star: float, n_rows: int, order_K: int = DEFAULT_ORDER
) -> RecurrenceTable:
    """Fill the triangular lambda-power table for the disc coefficients.

    Matching powers of lambda in the system gives, for k >= 1,

        a[n, k] = (1/(2 pi)) sum_{m <= k//2}    b[m, k-2m]   / (n+m+1/2)
        b[n, k] = (2/pi)     sum_{m <= (k-1)//2} a[m, k-2m-1] / (n+m+1/2)

    seeded by a[n, 0] = -delta_star/(2 pi (n+1/2)), b[n, 0] = 0.  Within
    each order the b row is filled first; the m = k//2 term of the a sum
    vanishes with b[., 0] and is kept only for symmetry with the general
    formula.
    """
    if n_rows < 1 or order_K < 1:
        raise ValueError("n_rows and order_K must be >= 1")
    a = np.zeros((n_rows, order_K))
    b = np.zeros((n_rows, order_K))
    half = np.arange(n_rows) + 0.5
    a[:, 0] = -delta_star / (2.0 * math.pi * half)
    for k in range(1, order_K):
        for m in range((k - 1) // 2 + 1):
            b[:, k] += (2.0 / math.pi) * a[m, k - 2 * m - 1] / (half + m)
        for m in range(k // 2 + 1):
            a[:, k] += (0.5 / math.pi) * b[m, k - 2 * m] / (half + m)
    return RecurrenceTable(a=a, b=b, order_K=order_K)


def solve_disc_recurrence(
    p: DiscProblem, N: int = DEFAULT_TRUNCATION, K: int = DEFAULT_ORDER
) -> tuple[RecurrenceTable, CoefficientSetDisc]:
    """Solve the disc system through the lambda-power recurrences.

    The table is truncated at order K, so the coefficients carry an
    O(lam**K) tail error; rows beyond those requested are filled as far
    as the recurrences need them.
    """
    if N < 1 or K < 1:
        raise ValueError("N and K must be >= 1")
    rows = max(N, K // 2 + 1)
    table = recurrence_table(p.delta_star, rows, K)
    powers = p.lam ** np.arange(K)
    a_sum = table.a[:N] @ powers
    b_sum = table.b[:N] @ powers
    n = np.arange(N)
    coeffs = CoefficientSetDisc(
        A_plus=p.lam ** (2 * n + 1) * a_sum,
        B_minus=p.lam ** (2 * n) * b_sum,
        truncation_N=N,
    )
    return table, coeffs


def disc_system_residual(p: DiscProblem, c: CoefficientSetDisc) -> float:
    """Max defect of the truncated disc equations at the given coefficients."""
    N = c.truncation_N
    lam = p.lam
    n = np.arange(N)
    nm = n[:, None] + n[None, :] + 0.5
    forcing = np.array(
        [omega1_disc("minus", 2.0 * k + 1.0, p.delta_star) for k in range(N)]
    )
    res_b = c.B_minus - (2.0 / math.pi) * lam ** (2 * n) * (c.A_plus / nm).sum(axis=1)
    res_a = (
        c.A_plus
        - (0.5 / math.pi) * lam ** (2 * n + 1) * (c.B_minus / nm).sum(axis=1)
        - lam ** (2 * n + 1) / math.pi * forcing
    )
    return float(max(np.abs(res_b).max(), np.abs(res_a).max()))


# ----------------------------------------------------------------------
# annulus model
# ----------------------------------------------------------------------


def _annulus_forcings(p: AnnulusProblem, N: int):
    w1m = np.array(
        [omega_annulus_flat(1, "minus", 2.0 * k + 1.0, p) for k in range(N)]
    )
    w1p = np.array(
        [omega_annulus_flat(1, "plus", -(2.0 * k + 1.0), p) for k in range(N)]
    )
    w2m = np.array(
        [omega_annulus_flat(2, "minus", 2.0 * k + 2.0, p) for k in range(N)]
    )
    return w1m, w1p, w2m


def solve_annulus_reduction(
    p: AnnulusProblem, N: int = DEFAULT_TRUNCATION
) -> CoefficientSetAnnulus:
    """Solve the truncated 4N x 4N annulus system by a direct dense solve.

    Unknowns are interleaved per index n as (B-_n, A+_n, A-_n, B+_n).
    At lam0 = 0 the A- and B+ rows reduce to the identity and the
    remaining block coincides with the disc system.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N!r}")
    lam1 = p.lam1
    t = p.radius_ratio
    n = np.arange(N)
    nm_half = n[:, None] + n[None, :] + 0.5
    nm_neg = n[:, None] - n[None, :] - 0.5
    nm_three = n[:, None] + n[None, :] + 1.5
    nm_pos = n[:, None] - n[None, :] + 0.5

    lam1_even = lam1 ** (2.0 * n)
    lam1_odd = lam1 ** (2.0 * n + 1.0)
    t_odd = t ** (2.0 * n + 1.0)
    t_even2 = t ** (2.0 * n + 2.0)

    matrix = np.eye(4 * N)
    matrix[0::4, 1::4] -= (2.0 / math.pi) * lam1_even[:, None] / nm_half
    matrix[1::4, 0::4] -= (0.5 / math.pi) * lam1_odd[:, None] / nm_half
    matrix[1::4, 3::4] -= (0.5 / math.pi) * lam1_odd[:, None] / nm_neg
    matrix[2::4, 3::4] += (0.5 / math.pi) * t_odd[:, None] / nm_three
    matrix[2::4, 0::4] += (0.5 / math.pi) * t_odd[:, None] / nm_pos
    matrix[3::4, 2::4] += (2.0 / math.pi) * t_even2[:, None] / nm_three

    w1m, w1p, w2m = _annulus_forcings(p, N)
    rhs = np.zeros(4 * N)
    rhs[1::4] = lam1_odd / math.pi * w1m
    rhs[2::4] = t_odd / math.pi * w1p
    rhs[3::4] = 4.0 * t_even2 / math.pi * w2m

    x = _solve_dense(matrix, rhs)
    return CoefficientSetAnnulus(
        A_plus=x[1::4],
        A_minus=x[2::4],
        B_plus=x[3::4],
        B_minus=x[0::4],
        truncation_N=N,
    )


def annulus_system_residual(p: AnnulusProblem, c: CoefficientSetAnnulus) -> float:
    """Max defect of the truncated annulus equations at the coefficients."""
    N = c.truncation_N
    lam1 = p.lam1
    t = p.radius_ratio
    n = np.arange(N)
    nm_half = n[:, None] + n[None, :] + 0.5
    nm_neg = n[:, None] - n[None, :] - 0.5
    nm_three = n[:, None] + n[None, :] + 1.5
    nm_pos = n[:, None] - n[None, :] + 0.5
    w1m, w1p, w2m = _annulus_forcings(p, N)

    res_bm = c.B_minus - (2.0 / math.pi) * lam1 ** (2 * n) * (
        c.A_plus / nm_half
    ).sum(axis=1)
    res_ap = (
        c.A_plus
        - (0.5 / math.pi)
        * lam1 ** (2 * n + 1)
        * ((c.B_minus / nm_half).sum(axis=1) + (c.B_plus / nm_neg).sum(axis=1))
        - lam1 ** (2 * n + 1) / math.pi * w1m
    )
    res_am = (
        c.A_minus
        + (0.5 / math.pi)
        * t ** (2 * n + 1)
        * ((c.B_plus / nm_three).sum(axis=1) + (c.B_minus / nm_pos).sum(axis=1))
        - t ** (2 * n + 1) / math.pi * w1p
    )
    res_bp = (
        c.B_plus
        + (2.0 / math.pi) * t ** (2 * n + 2) * (c.A_minus / nm_three).sum(axis=1)
        - 4.0 * t ** (2 * n + 2) / math.pi * w2m
    )
    return float(
        max(
            np.abs(res_bm).max(),
            np.abs(res_ap).max(),
            np.abs(res_am).max(),
            np.abs(res_bp).max(),
        )
    )


def system_residual(problem, coefficients) -> float:
    """Back-substitution residual for either model's coefficient set."""
    if isinstance(coefficients, CoefficientSetDisc):
        return disc_system_residual(problem, coefficients)
    if isinstance(coefficients, CoefficientSetAnnulus):
        return annulus_system_residual(problem, coefficients)
    raise TypeError(f"unsupported coefficient set {type(coefficients)!r}")
