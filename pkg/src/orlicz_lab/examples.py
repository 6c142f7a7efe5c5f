"""Worked examples recomputed from the library, with their expected values."""
from __future__ import annotations

import math

import numpy as np

from .compactness import indicator_counterexample, synthetic_vp_family, valle_poussin_construct, valle_poussin_verify
from .multipliers import multiplier_norm_estimate
from .norms import L1, LorentzP1, Lp, norm
from .orlicz import QuadLog, PhiR, Power, conjugate, delta0_verdict, delta2_verdict, simonenko_ratio
from .stepfn import StepFunction


def _row(name, expected, computed, ok):
    return {"example": name, "expected": expected, "computed": computed, "ok": bool(ok)}


def reproduce() -> list[dict]:
    rows = []
    psi = conjugate(QuadLog())
    for v in (0.5, 2.0, 10.0):
        exact = v * v / 2 if v <= 1 else math.exp(v - 1) - 0.5
        got = float(psi.value(v))
        rows.append(_row(f"quad_log conjugate at v={v:g}", exact, got,
                         abs(got - exact) <= 1e-6 * exact))
    d2 = delta2_verdict(QuadLog())
    rows.append(_row("quad_log satisfies delta2", True, d2.holds, d2.holds))
    d0 = delta0_verdict(psi)
    rows.append(_row("conjugate of quad_log satisfies delta0", True, d0.holds, d0.holds))
    r = simonenko_ratio(PhiR(1.0), 1e8)
    exact = 1 + 1e8 / ((1 + 1e8) * math.log1p(1e8))
    rows.append(_row("phi_r(1) Simonenko ratio at 1e8", exact, float(r), abs(r - exact) <= 1e-9))
    p2 = Power(2.0)
    rows.append(_row("L1 norm of indicator of mass 0.25", 0.25,
                     norm(StepFunction.indicator(0.25), L1()), True))
    got = norm(StepFunction.indicator(0.25), LorentzP1(2.0))
    rows.append(_row("LorentzP1(2) norm of indicator of mass 0.25", 0.5, got, abs(got - 0.5) <= 1e-12))
    rep = multiplier_norm_estimate(StepFunction.indicator(0.25), Lp(2.0), L1())
    rows.append(_row("multiplier of indicator(0.25) from L2 to L1", 0.5, rep.norm_estimate,
                     abs(rep.norm_estimate - 0.5) <= 1e-9))
    u, fam = synthetic_vp_family(12)
    vp = valle_poussin_verify(valle_poussin_construct(u), fam, L1())
    rows.append(_row("de la Vallee Poussin bound", math.pi ** 2 / 6, vp.bound,
                     vp.bound <= math.pi ** 2 / 6 + 1e-9 and vp.superlinear_ok))
    rem = indicator_counterexample(L1(), p2, 10)
    rows.append(_row("indicator train: vp bound finite, no equi-integrability",
                     rem.expected_bound, rem.vp_bound,
                     rem.vp_bound == rem.expected_bound and not rem.equi_profile.decays_to_zero
                     and bool(np.allclose(rem.equi_profile.suprema, rem.unit_norm))))
    return rows
