"""Field evaluators for the disc model: stress, intensity factor, displacement.

All positions are nondimensional (r scaled by the crack radius a or the
inclusion radius b); stress values are reported as theta1 * sigma_z and
displacements as u_z / a, so with the default theta1 = 1, a_radius = 1
of DiscProblem everything is a pure number.  Each quantity has two
series representations, one converging fast away from the relevant
edge and one that makes the square-root edge behavior explicit; the
public evaluators switch between them and both forms are exposed for
cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import CoefficientSetDisc, DiscProblem
from .specfun import SQRT_PI, f_m, f_m_limit, gauss_2f1

__all__ = [
    "FieldSample",
    "SifResult",
    "SIF_SERIES_COEFFS",
    "stress_contact",
    "stress_contact_series",
    "stress_contact_edge",
    "stress_outer",
    "stress_outer_series",
    "stress_outer_edge",
    "sif_exact",
    "sif_asymptotic",
    "displacement",
    "continuity_defects",
]

# Representation switch points; the overlap windows [0.6, 0.95] (contact,
# in r/b) and [1.05, 1.4] (outer, in r/a) keep both series well inside
# their fast regions.
_CONTACT_SWITCH = 0.8
_OUTER_SWITCH = 1.25

# Normalized small-lambda expansion of the intensity factor: coefficient
# of lambda**(j+1) is SIF_SERIES_COEFFS[j], the whole series carrying a
# 4/pi**(3/2) prefactor.
SIF_SERIES_COEFFS = (
    1.0,
    4.0 / math.pi**2,
    16.0 / math.pi**4 + 1.0 / 3.0,
    (4.0 / math.pi**2) * (16.0 / math.pi**4 + 5.0 / 9.0),
    256.0 / math.pi**8 + 112.0 / (9.0 * math.pi**4) + 1.0 / 5.0,
)


@dataclass(frozen=True)
class FieldSample:
    """One sampled point of a nondimensional field curve."""

    r_over_a: float
    value: float


@dataclass(frozen=True)
class SifResult:
    """Crack-tip intensity factor in exact and small-lambda form.

    k1_exact follows the sign that makes the normalized value positive
    for positive indentation; coefficient_sum records the raw signed sum
    it was computed from.
    """

    k1_exact: float
    k1_asymptotic: float
    normalized: float
    normalized_asymptotic: float
    coefficient_sum: float


def _edge_weights(count: int) -> np.ndarray:
    """Triangular matrix T[m, j] = (-m)_j / (1/2)_j, zero above the diagonal."""
    T = np.ones((count, count))
    for j in range(1, count):
        T[:, j] = T[:, j - 1] * (j - 1.0 - np.arange(count)) / (j - 0.5)
    return np.tril(T)


def _hyp_column(coeffs: np.ndarray, x: float) -> float:
    """sum_m coeffs[m] * 2F1(3/2, 1/2-m; 3/2-m; x) / (m - 1/2)."""
    total = 0.0
    for m, c in enumerate(coeffs):
        if c == 0.0:
            continue
        total += c * gauss_2f1(1.5, 0.5 - m, 1.5 - m, x) / (m - 0.5)
    return total


def stress_contact_series(p: DiscProblem, c: CoefficientSetDisc, r_over_b: float) -> float:
    """Contact stress under the disc via the hypergeometric series."""
    _check_unit_interval(r_over_b)
    x2 = r_over_b * r_over_b
    lead = -p.delta_star / (p.lam * math.sqrt(math.pi * (1.0 - x2)))
    tail = -_hyp_column(c.B_minus, x2) / (2.0 * p.lam * SQRT_PI)
    return p.theta1 * (lead + tail)


def stress_contact_edge(p: DiscProblem, c: CoefficientSetDisc, r_over_b: float) -> float:
    """Contact stress via the finite double sum with the explicit edge factor."""
    _check_unit_interval(r_over_b)
    u = 1.0 - r_over_b * r_over_b
    T = _edge_weights(len(c.B_minus))
    poly = float(c.B_minus @ (T @ u ** np.arange(len(c.B_minus))))
    return p.theta1 * (-p.delta_star + poly) / (p.lam * math.sqrt(math.pi * u))


def stress_contact(p: DiscProblem, c: CoefficientSetDisc, r_over_b: float) -> float:
    """Nondimensional normal stress theta1*sigma_z under the inclusion.

    Valid for 0 <= r/b < 1; the representation switches at r/b = 0.8.
    """
    _check_unit_interval(r_over_b)
    if r_over_b <= _CONTACT_SWITCH:
        return stress_contact_series(p, c, r_over_b)
    return stress_contact_edge(p, c, r_over_b)


def stress_outer_series(p: DiscProblem, c: CoefficientSetDisc, r_over_a: float) -> float:
    """Stress outside the crack via the hypergeometric series."""
    _check_outside_crack(r_over_a)
    x2 = 1.0 / (r_over_a * r_over_a)
    return p.theta1 * _hyp_column(c.A_plus, x2) * x2**1.5 / SQRT_PI


def stress_outer_edge(p: DiscProblem, c: CoefficientSetDisc, r_over_a: float) -> float:
    """Stress outside the crack with the near-tip edge factor pulled out."""
    _check_outside_crack(r_over_a)
    x2 = 1.0 / (r_over_a * r_over_a)
    u = 1.0 - x2
    T = _edge_weights(len(c.A_plus))
    poly = float(c.A_plus @ (T @ u ** np.arange(len(c.A_plus))))
    return -2.0 * p.theta1 * x2**1.5 * poly / math.sqrt(math.pi * u)


def stress_outer(p: DiscProblem, c: CoefficientSetDisc, r_over_a: float) -> float:
    """Nondimensional normal stress theta1*sigma_z on r > a.

    The edge form is used up to r/a = 1.25 and the plain series beyond.
    """
    _check_outside_crack(r_over_a)
    if r_over_a < _OUTER_SWITCH:
        return stress_outer_edge(p, c, r_over_a)
    return stress_outer_series(p, c, r_over_a)


def sif_asymptotic(lam: float, n_terms: int = 5) -> float:
    """Normalized intensity factor from the small-lambda expansion.

    Returns theta1 * K_I / (sqrt(a) * delta0) summed to lambda**n_terms;
    coefficients beyond the fifth power are not available.
    """
    if not 1 <= n_terms <= len(SIF_SERIES_COEFFS):
        raise ValueError(
            f"n_terms must be in 1..{len(SIF_SERIES_COEFFS)}, got {n_terms!r}"
        )
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"lam must lie in [0, 1), got {lam!r}")
    acc = 0.0
    for j in range(n_terms - 1, -1, -1):
        acc = acc * lam + SIF_SERIES_COEFFS[j]
    return (4.0 / math.pi**1.5) * lam * acc


def sif_exact(p: DiscProblem, c: CoefficientSetDisc) -> SifResult:
    """Crack-tip intensity factor from the solved coefficients.

    The raw coefficient sum is negative for positive indentation, so
    k1_exact = -2 sqrt(a) * sum comes out positive, matching the sign of
    the asymptotic expansion.
    """
    coefficient_sum = float(np.sum(c.A_plus))
    k1_exact = -2.0 * math.sqrt(p.a_radius) * coefficient_sum
    delta0 = p.delta_over_a
    norm_asym = sif_asymptotic(p.lam, len(SIF_SERIES_COEFFS))
    if delta0 == 0.0:
        normalized = 0.0
        k1_asym = 0.0
    else:
        normalized = p.theta1 * k1_exact / (math.sqrt(p.a_radius) * delta0)
        k1_asym = norm_asym * math.sqrt(p.a_radius) * delta0 / p.theta1
    return SifResult(
        k1_exact=k1_exact,
        k1_asymptotic=k1_asym,
        normalized=normalized,
        normalized_asymptotic=norm_asym,
        coefficient_sum=coefficient_sum,
    )


def displacement(p: DiscProblem, c: CoefficientSetDisc, r_over_a: float) -> float:
    """Crack-face displacement u_z/a on the open annulus lam < r/a < 1."""
    if not p.lam < r_over_a < 1.0:
        raise ValueError(
            f"r_over_a must lie in ({p.lam}, 1), got {r_over_a!r}"
        )
    r = r_over_a
    lam = p.lam
    b_arg = (lam / r) ** 2
    a_arg = r * r
    g_b = sum(
        B / (2 * m + 1) * f_m(m, b_arg) for m, B in enumerate(c.B_minus) if B
    )
    g_a = sum(
        A / (2 * m + 1) * f_m(m, a_arg) for m, A in enumerate(c.A_plus) if A
    )
    value = (
        (p.delta_star / SQRT_PI) * math.asin(lam / r)
        - (lam / (SQRT_PI * r)) * g_b
        + (2.0 / SQRT_PI) * g_a
    )
    return p.theta1 * value


def continuity_defects(p: DiscProblem, c: CoefficientSetDisc) -> tuple[float, float]:
    """Displacement mismatches at the inclusion edge and the crack tip.

    Both limits are evaluated from the closed forms built on the
    boundary values of the hypergeometric family (f_m_limit), not by
    sampling the displacement nearby.  Exact solutions cancel both
    defects identically; truncated ones leave an O(lam**2N) remainder.
    """
    lam = p.lam
    count = len(c.A_plus)
    # (2/sqrt(pi)) * f_m(1-) / (2m+1) telescopes to Gamma(m+1/2)/m!
    gam = np.array(
        [2.0 / SQRT_PI * f_m_limit(m) / (2 * m + 1) for m in range(count)]
    )
    f_lam = np.array([f_m(m, lam * lam) for m in range(count)])
    two_m1 = 2.0 * np.arange(count) + 1.0

    delta0 = p.delta_over_a
    chi_b = (
        -delta0 / p.theta1
        + 0.5 * float(c.B_minus @ gam)
        - (2.0 / SQRT_PI) * float(c.A_plus @ (f_lam / two_m1))
    )
    defect_b = abs(p.theta1 * chi_b + delta0)

    chi_a = (
        -(p.delta_star / SQRT_PI) * math.asin(lam)
        + (lam / SQRT_PI) * float(c.B_minus @ (f_lam / two_m1))
        - float(c.A_plus @ gam)
    )
    defect_a = abs(p.theta1 * chi_a)
    return defect_b, defect_a


def _check_unit_interval(r_over_b: float) -> None:
    if not 0.0 <= r_over_b < 1.0:
        raise ValueError(f"r_over_b must lie in [0, 1), got {r_over_b!r}")


def _check_outside_crack(r_over_a: float) -> None:
    if not r_over_a > 1.0:
        raise ValueError(f"r_over_a must exceed 1, got {r_over_a!r}")
