"""Numerical invariant suite behind the `verify` subcommand.

Every check evaluates one invariant of the solvers, field evaluators or
factorization machinery and reports the measured defect next to its
threshold.  The thresholds are the library's accuracy contract; a run
with default parameters must pass every check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import factorization as fz
from . import fields, models, specfun

__all__ = ["CheckResult", "VerificationReport", "run_verification"]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single invariant check (pass iff measured <= threshold)."""

    name: str
    measured: float
    threshold: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.measured <= self.threshold

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, measured, threshold, detail=""):
        self.checks.append(
            CheckResult(
                name=name,
                measured=float(measured),
                threshold=float(threshold),
                detail=detail,
            )
        )

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _strip_samples(count=100, seed=7121):
    rng = np.random.default_rng(seed)
    re = rng.uniform(0.02, 0.98, count)
    im = rng.uniform(-20.0, 20.0, count)
    return [complex(a, b) for a, b in zip(re, im)]


def _check_specfun(report: VerificationReport) -> None:
    samples = _strip_samples()
    fact = max(
        abs(
            specfun.kernel_L(s)
            - specfun.l_plus(s) / (2.0 * specfun.l_minus(s))
        )
        / abs(specfun.kernel_L(s))
        for s in samples
    )
    report.add("specfun.kernel_factorization_identity", fact, 1e-11)

    tangent = max(
        abs(specfun.l_plus(s) * specfun.l_minus(s) - specfun.tan_half_pi(s))
        for s in samples
    )
    report.add("specfun.kernel_tangent_identity", tangent, 1e-10)

    t = 1.0e6
    plus = abs(specfun.l_plus(complex(-t)) * math.sqrt(t / 2.0) - 1.0)
    minus = abs(specfun.l_minus(complex(t)) / math.sqrt(t / 2.0) - 1.0)
    report.add("specfun.kernel_asymptotic_order", max(plus, minus), 0.01)

    xs = np.linspace(0.02, 0.98, 25)
    refl = max(
        abs(
            specfun.gamma(float(x))
            * specfun.gamma(float(1.0 - x))
            * math.sin(math.pi * x)
            / math.pi
            - 1.0
        )
        for x in xs
    )
    report.add("specfun.gamma_reflection", refl, 1e-12)

    arcsine = 0.0
    for x in np.linspace(0.01, 0.99, 50):
        got = specfun.gauss_2f1(0.5, 0.5, 1.5, float(x) ** 2)
        want = math.asin(x) / x
        arcsine = max(arcsine, abs(got - want) / abs(want))
    report.add("specfun.arcsine_identity", arcsine, 1e-11)


def _check_models(report: VerificationReport, delta_star: float, n_trunc: int, order_k: int) -> None:
    agreement = 0.0
    for lam in (0.1, 0.3, 0.5, 0.7):
        p = models.DiscProblem(lam=lam, delta_star=delta_star)
        red = models.solve_disc_reduction(p, n_trunc)
        _, rec = models.solve_disc_recurrence(p, n_trunc, order_k)
        agreement = max(agreement, np.abs(red.A_plus - rec.A_plus).max())
    report.add("models.disc_method_agreement", agreement, 1e-9)

    lam = 0.7
    p = models.DiscProblem(lam=lam, delta_star=delta_star)
    a_vals = [models.solve_disc_reduction(p, n).A_plus[0] for n in (10, 20, 40)]
    ratio = abs(a_vals[1] - a_vals[2]) / abs(a_vals[0] - a_vals[1])
    report.add(
        "models.disc_truncation_convergence",
        ratio,
        lam**2 + 0.05,
        "|A0(2N)-A0(4N)| / |A0(N)-A0(2N)| at lam=0.7",
    )

    c = models.solve_disc_reduction(p, n_trunc)
    report.add("models.disc_sign_pattern", float(c.A_plus.max()), 0.0)

    table = models.recurrence_table(delta_star, 10, 4)
    half = np.arange(10) + 0.5
    seed_defect = np.abs(
        table.a[:, 0] + delta_star / (2.0 * math.pi * half)
    ).max() / abs(delta_star / (2.0 * math.pi * 9.5))
    seed_defect = max(seed_defect, np.abs(table.b[:, 0]).max())
    report.add("models.recurrence_seed_rows", seed_defect, 1e-15)

    pd = models.DiscProblem(lam=0.5, delta_star=delta_star)
    pa = models.AnnulusProblem(lam0=0.0, lam1=0.5, delta_star=delta_star)
    cd = models.solve_disc_reduction(pd, n_trunc)
    ca = models.solve_annulus_reduction(pa, n_trunc)
    degeneration = max(
        np.abs(ca.A_plus - cd.A_plus).max(),
        np.abs(ca.A_minus).max(),
        np.abs(ca.B_plus).max(),
    )
    report.add("models.annulus_degeneration", degeneration, 1e-12)

    report.add(
        "models.disc_system_residual",
        models.disc_system_residual(pd, cd),
        1e-12,
    )
    pa2 = models.AnnulusProblem(lam0=0.2, lam1=0.5, delta_star=delta_star)
    ca2 = models.solve_annulus_reduction(pa2, n_trunc)
    report.add(
        "models.annulus_system_residual",
        models.annulus_system_residual(pa2, ca2),
        1e-12,
    )

    tilde = 0.0
    for side in ("plus", "minus"):
        for s in (3.0, 5.5, -6.3):
            a = models.omega_tilde(side, s, 0.5, "series")
            b = models.omega_tilde(side, s, 0.5, "hypergeometric")
            tilde = max(tilde, abs(a - b) / max(1.0, abs(a)))
    report.add("models.omega_tilde_dual_form", tilde, 1e-11)


def _check_fields(report: VerificationReport, delta_star: float, n_trunc: int) -> None:
    contact_dual = 0.0
    outer_dual = 0.0
    negativity = -math.inf
    for lam in (0.3, 0.5, 0.7):
        p = models.DiscProblem(lam=lam, delta_star=delta_star)
        c = models.solve_disc_reduction(p, n_trunc)
        for x in np.linspace(0.6, 0.95, 6):
            a = fields.stress_contact_series(p, c, float(x))
            b = fields.stress_contact_edge(p, c, float(x))
            contact_dual = max(contact_dual, abs(a - b) / abs(a))
        for r in np.linspace(1.05, 1.4, 6):
            a = fields.stress_outer_series(p, c, float(r))
            b = fields.stress_outer_edge(p, c, float(r))
            outer_dual = max(outer_dual, abs(a - b) / abs(a))
        if lam in (0.3, 0.5):
            for x in np.linspace(0.0, 0.99, 30):
                negativity = max(negativity, fields.stress_contact(p, c, float(x)))
    report.add("fields.stress_contact_dual_representation", contact_dual, 1e-9)
    report.add("fields.stress_outer_dual_representation", outer_dual, 1e-9)
    report.add("fields.contact_stress_negative", negativity, 0.0)

    p = models.DiscProblem(lam=0.5, delta_star=delta_star)
    c = models.solve_disc_reduction(p, n_trunc)
    scaled = [
        fields.stress_contact(p, c, 1.0 - eps) * math.sqrt(1.0 - (1.0 - eps) ** 2)
        for eps in (1e-4, 1e-8)
    ]
    report.add(
        "fields.contact_edge_square_root",
        abs(scaled[0] / scaled[1] - 1.0),
        1e-3,
        "sqrt-scaled contact stress approaches a finite nonzero limit",
    )
    scaled = [
        fields.stress_outer(p, c, 1.0 + eps)
        * math.sqrt(1.0 - 1.0 / (1.0 + eps) ** 2)
        for eps in (1e-4, 1e-8)
    ]
    report.add(
        "fields.outer_edge_square_root",
        abs(scaled[0] / scaled[1] - 1.0),
        1e-3,
    )

    res = fields.sif_exact(p, c)
    r = 1.0 + 1e-6
    estimate = math.sqrt(2.0 * math.pi * (r - 1.0)) * fields.stress_outer(p, c, r)
    report.add(
        "fields.sif_near_tip_consistency",
        abs(estimate - res.k1_exact) / abs(res.k1_exact),
        0.01,
    )

    worst = 0.0
    for lam in (0.3, 0.5, 0.7):
        pp = models.DiscProblem(lam=lam, delta_star=delta_star)
        cc = models.solve_disc_reduction(pp, n_trunc)
        worst = max(worst, *fields.continuity_defects(pp, cc))
    report.add("fields.continuity_defects", worst, 1e-9)

    lam = 0.7
    pp = models.DiscProblem(lam=lam, delta_star=delta_star)
    defects = {
        n: fields.continuity_defects(pp, models.solve_disc_reduction(pp, n))
        for n in (8, 16)
    }
    ratio = max(
        defects[16][0] / defects[8][0], defects[16][1] / defects[8][1]
    )
    report.add(
        "fields.continuity_defect_decay", ratio, lam**2 + 0.05,
        "defect(2N)/defect(N) at lam=0.7, N=8",
    )


def _check_factorization(
    report: VerificationReport, lam: float, lam0: float, lam1: float, n_trunc: int
) -> None:
    samples = fz.contour_samples(20)
    disc_cols = fz.solve_factor_columns_disc(lam, n_trunc)
    det_p = det_m = 0.0
    for s in samples:
        det_p = max(
            det_p, abs(np.linalg.det(fz.eval_X_disc("plus", s, disc_cols)) + 0.5)
        )
        det_m = max(
            det_m,
            abs(
                np.linalg.det(fz.eval_X_disc("minus", s, disc_cols))
                - 1.0 / (2.0 * lam)
            ),
        )
    report.add("factorization.disc_det_plus", det_p, 1e-9)
    report.add("factorization.disc_det_minus", det_m, 1e-9)

    rng = np.random.default_rng(314)
    dets = []
    for _ in range(50):
        s = complex(rng.uniform(-0.4, 0.49), rng.uniform(-30.0, 30.0))
        dets.append(np.linalg.det(fz.eval_X_disc("plus", s, disc_cols)))
    dets = np.abs(np.array(dets))
    report.add(
        "factorization.disc_det_constancy",
        float(np.var(dets) / np.mean(dets) ** 2),
        1e-16,
    )

    for n in (30, n_trunc):
        cols_n = fz.solve_factor_columns_disc(lam, n)
        report.add(
            f"factorization.disc_boundary_residual_N{n}",
            fz.boundary_residual_disc(cols_n, samples),
            1e-8,
            "identically satisfied; measures rounding only",
        )

    ann_cols = fz.solve_factor_columns_annulus(lam0, lam1, n_trunc)
    det_p = det_m = 0.0
    for s in samples:
        det_p = max(
            det_p,
            abs(
                np.linalg.det(fz.eval_X_annulus("plus", s, ann_cols))
                - 1.0 / (2.0 * lam0)
            ),
        )
        det_m = max(
            det_m,
            abs(
                np.linalg.det(fz.eval_X_annulus("minus", s, ann_cols))
                - 1.0 / (4.0 * lam1)
            ),
        )
    report.add("factorization.annulus_det_plus", det_p, 1e-8)
    report.add("factorization.annulus_det_minus", det_m, 1e-8)
    report.add(
        "factorization.annulus_boundary_residual",
        fz.boundary_residual_annulus(ann_cols, samples),
        1e-7,
    )

    index_defect = 0
    fit_defect = 0.0
    for side in ("plus", "minus"):
        index_defect = max(
            index_defect,
            max(abs(k) for k in fz.partial_index_estimate(side, disc_cols)),
            max(abs(k) for k in fz.partial_index_estimate(side, ann_cols)),
        )
        fit_defect = max(
            fit_defect,
            fz.order_fit_distance(side, disc_cols),
            fz.order_fit_distance(side, ann_cols),
        )
    report.add("factorization.partial_indices_zero", float(index_defect), 0.0)
    report.add("factorization.order_fit_distance", fit_defect, 0.1)

    residual = max(
        max(fz.factor_system_residual(c) for c in disc_cols),
        max(fz.factor_system_residual(c) for c in ann_cols),
    )
    report.add("factorization.column_system_residual", residual, 1e-12)


def run_verification(
    lam: float = 0.5,
    lam0: float = 0.2,
    lam1: float = 0.5,
    delta_over_a: float = 0.05,
    n_trunc: int = models.DEFAULT_TRUNCATION,
    order_k: int = models.DEFAULT_ORDER,
) -> VerificationReport:
    """Run every invariant check and collect a structured report."""
    delta_star = 2.0 * delta_over_a / specfun.SQRT_PI
    report = VerificationReport()
    _check_specfun(report)
    _check_models(report, delta_star, n_trunc, order_k)
    _check_fields(report, delta_star, n_trunc)
    _check_factorization(report, lam, lam0, lam1, n_trunc)
    return report
