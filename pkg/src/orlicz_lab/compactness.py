"""Quantitative probes of compactness criteria on finite families.

Profiles are sampled suprema over a family; the limits they stand for
cannot be certified from finite data, so verdicts are thresholded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError
from .norms import NormSpec, l1_norm, lorentz_p1_norm, norm
from .orlicz.functions import OrliczFunction, VallePoussinSum
from .stepfn import (
    BlockSet,
    StepFunction,
    are_disjoint,
    compose,
    indicator_train,
    restrict,
    truncate_above,
)

PI2_6 = math.pi ** 2 / 6


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


def _trend(x) -> str:
    d = np.diff(np.asarray(x, dtype=float))
    if d.size == 0 or np.all(d == 0):
        return "constant"
    if np.all(d <= 0):
        return "nonincreasing"
    if np.all(d >= 0):
        return "nondecreasing"
    return "mixed"


@dataclass(frozen=True)
class DecayProfile:
    """Sampled curve ``parameter -> sup over the family``.

    ``decays_to_zero`` holds when the last value is below ``tol`` or the
    curve is nonincreasing and ends below ``rel_drop`` times its start.
    """

    parameters: tuple[float, ...]
    suprema: tuple[float, ...]
    decays_to_zero: bool
    final: float
    trend: str
    argmax: tuple[int, ...] = ()
    kind: str = ""
    tol: float = 1e-6
    rel_drop: float = 1e-3

    def to_dict(self):
        return {"kind": self.kind, "parameters": list(self.parameters),
                "suprema": list(self.suprema), "decays_to_zero": self.decays_to_zero,
                "final": self.final, "trend": self.trend, "argmax": list(self.argmax),
                "tol": self.tol, "rel_drop": self.rel_drop}


def make_profile(parameters, suprema, *, argmax=(), kind="", tol=1e-6, rel_drop=1e-3) -> DecayProfile:
    sup = [float(x) for x in suprema]
    if len(sup) != len(parameters):
        raise InputError("parameters and suprema differ in length")
    if any(x < 0 for x in sup):
        raise InputError("suprema must be nonnegative")
    if not sup:
        raise InputError("empty profile")
    trend = _trend(sup)
    decays = sup[-1] < tol or (
        trend in ("nonincreasing", "constant") and len(sup) > 1 and sup[0] > 0
        and sup[-1] < rel_drop * sup[0])
    return DecayProfile(tuple(float(p) for p in parameters), tuple(sup), bool(decays),
                        sup[-1], trend, tuple(int(i) for i in argmax), kind, tol, rel_drop)


def _sup(values):
    values = list(values)
    if not values:
        return 0.0, -1
    i = int(np.argmax(values))
    return float(values[i]), i


def equi_integrability_profile(family: Sequence[StepFunction], spec: NormSpec,
                               sets: Sequence[BlockSet], *, tol=1e-6, rel_drop=1e-3) -> DecayProfile:
    """``n -> sup_f ||f 1_{A_n}||`` for nested decreasing ``A_n``."""
    sets = list(sets)
    for a, b in zip(sets, sets[1:]):
        if not b <= a:
            raise InputError("block sets must be nested decreasing")
    sups, arg = [], []
    for A in sets:
        s, i = _sup(norm(restrict(f, A, strict=False), spec) for f in family)
        sups.append(s)
        arg.append(i)
    return make_profile(range(1, len(sets) + 1), sups, argmax=arg, kind="equi_integrability",
                        tol=tol, rel_drop=rel_drop)


def tail_profile(family: Sequence[StepFunction], spec: NormSpec, gammas, *,
                 tol=1e-6, rel_drop=1e-3) -> DecayProfile:
    """``gamma -> sup_f ||f 1{|f| > gamma}||``."""
    g = np.asarray(gammas, dtype=float)
    if g.ndim != 1 or g.size == 0 or np.any(g < 0) or np.any(np.diff(g) <= 0):
        raise InputError("gammas must be nonnegative and increasing")
    sups, arg = [], []
    for gamma in g:
        s, i = _sup(norm(truncate_above(f, gamma), spec) for f in family)
        sups.append(s)
        arg.append(i)
    return make_profile(g, sups, argmax=arg, kind="tail", tol=tol, rel_drop=rel_drop)


def tail_sets(family: Sequence[StepFunction], count: int | None = None) -> list[BlockSet]:
    """Nested sets dropping the family's cells one at a time, in order of first appearance."""
    keys: list = []
    for f in family:
        for k in f.keys:
            if k not in keys:
                keys.append(k)
    n = len(keys) if count is None else min(count, len(keys))
    return [BlockSet(frozenset(keys[j:])) for j in range(n)]


def halving_sets(family: Sequence[StepFunction], count: int) -> list[BlockSet]:
    """Nested sets keeping the last half, quarter, ... of the cells (ending empty)."""
    keys: list = []
    for f in family:
        for k in f.keys:
            if k not in keys:
                keys.append(k)
    out, m = [], len(keys)
    for _ in range(count):
        out.append(BlockSet(frozenset(keys[len(keys) - m:])))
        m //= 2
    return out


# ---------------------------------------------------------------------------
# de la Vallee Poussin
# ---------------------------------------------------------------------------


def valle_poussin_construct(thresholds) -> VallePoussinSum:
    """``phi(u) = sum_n (u - u_n)_+`` over the finitely many thresholds given."""
    t = list(thresholds)
    if len(t) < 2:
        raise InputError("need at least 2 thresholds")
    return VallePoussinSum(t)


def thresholds_from_tail_profile(family: Sequence[StepFunction], spec: NormSpec,
                                 n_max: int) -> list[float]:
    """Thresholds with ``sup_f ||f 1{|f| > u_n}|| <= 1/n**2`` and ``u_{n+1} >= 2 u_n``.

    Candidate levels are the block values, where the tail norm jumps; the
    smallest admissible one is taken, then pushed up by the spacing rule.
    """
    if n_max < 2:
        raise InputError("n_max must be at least 2")
    levels = sorted({0.0} | {abs(float(v)) for f in family for v in f.values})
    tails = [_sup(norm(truncate_above(f, u), spec) for f in family)[0] for u in levels]
    pos = [u for u in levels if u > 0]
    floor = 0.5 * pos[0] if pos else 1.0
    out = [0.0]
    for n in range(2, n_max + 1):
        level = next(u for u, s in zip(levels, tails) if s <= 1.0 / n ** 2 * (1 + 1e-12))
        u = max(level, floor if n == 2 else 2.0 * out[-1])
        out.append(float(u))
    return out


@dataclass(frozen=True)
class VallePoussinReport:
    """Bound on ``sup_f ||phi(|f|)||`` and the superlinearity certificate.

    Unpacks as ``(bound, superlinear_ok)``.
    """

    bound: float
    superlinear_ok: bool
    pi2_over_6: float
    tail_norms: tuple[float, ...]
    slopes: tuple[float, ...]
    thresholds: tuple[float, ...]
    series_bound: float

    def __iter__(self):
        return iter((self.bound, self.superlinear_ok))

    def to_dict(self):
        return {"bound": self.bound, "superlinear_ok": self.superlinear_ok,
                "pi2_over_6": self.pi2_over_6, "tail_norms": list(self.tail_norms),
                "slopes": list(self.slopes), "thresholds": list(self.thresholds),
                "series_bound": self.series_bound}


def valle_poussin_verify(phi: VallePoussinSum, family: Sequence[StepFunction], spec: NormSpec,
                         recheck: bool = True, slack: float = 1e-12) -> VallePoussinReport:
    """Evaluate ``sup_f ||phi(|f|)||`` and re-verify the construction.

    ``recheck`` demands ``sup_f ||f 1{|f| > u_n}|| <= 1/n**2`` at every
    threshold (``n = 1`` being the bound ``||f|| <= 1``).  The slope test
    checks ``phi(u_n)/u_n >= n - 2`` at each positive threshold; the last
    one is the certificate for the truncated series.
    """
    if not isinstance(phi, VallePoussinSum):
        raise InputError("valle_poussin_verify needs a valle_poussin_sum function")
    u = phi.thresholds
    tails = tuple(_sup(norm(truncate_above(f, float(un)), spec) for f in family)[0] for un in u)
    if recheck:
        for n, (un, tn) in enumerate(zip(u, tails), start=1):
            if tn > (1.0 / n ** 2) * (1 + slack) + slack:
                raise InputError(
                    f"tail norm {tn:.6g} at u_{n} = {un:g} exceeds 1/{n}^2; thresholds do not fit the family")
    slopes = tuple(float(phi.value(float(un)) / un) if un > 0 else math.nan for un in u)
    ok = all(s >= n - 2 - 1e-12 for n, s in enumerate(slopes, start=1) if not math.isnan(s))
    bound = _sup(norm(compose(f, phi), spec) for f in family)[0]
    return VallePoussinReport(bound=bound, superlinear_ok=bool(ok), pi2_over_6=PI2_6,
                               tail_norms=tails, slopes=slopes,
                               thresholds=tuple(float(x) for x in u),
                               series_bound=float(sum(tails)))


def synthetic_vp_family(n_max: int = 12) -> tuple[list[float], list[StepFunction]]:
    """Family whose L1 tails at ``u_n = 2**(n-2)`` are exactly ``1/n**2`` (``n = 2..n_max``).

    Block ``n`` sits at value ``u_{n+1}`` (so it leaves the tail exactly
    past ``u_{n+1}``) with mass ``1/n**2 - 1/(n+1)**2``; the last block
    carries ``1/n_max**2``; a low block of mass ``3/4`` makes ``||f||_1 = 1``.
    The second member splits every cell in two, the third is a scaled copy.
    """
    if n_max < 2:
        raise InputError("n_max must be at least 2")
    u = [0.0] + [2.0 ** (n - 2) for n in range(2, n_max + 2)]  # u[n-1] = u_n
    vals, wts = [0.5], [0.75 / 0.5]
    for n in range(2, n_max + 1):
        mass = 1.0 / n ** 2 - (1.0 / (n + 1) ** 2 if n < n_max else 0.0)
        v = u[n]  # u_{n+1}
        vals.append(v)
        wts.append(mass / v)
    base = StepFunction(vals, wts)
    halves = StepFunction(np.repeat(vals, 2), np.repeat(np.asarray(wts) / 2, 2),
                          [("h", i) for i in range(2 * len(vals))])
    scaled = StepFunction(np.asarray(vals) * 0.5, wts, [("s", i) for i in range(len(vals))])
    return u[:n_max], [base, halves, scaled]


# ---------------------------------------------------------------------------
# counterexample
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleReport:
    vp_bound: float
    expected_bound: float
    unit_norm: float
    equi_profile: DecayProfile

    def __iter__(self):
        return iter((self.vp_bound, self.equi_profile))

    def to_dict(self):
        return {"vp_bound": self.vp_bound, "expected_bound": self.expected_bound,
                "unit_norm": self.unit_norm, "equi_profile": self.equi_profile.to_dict(),
                "vp_condition_holds": math.isfinite(self.vp_bound),
                "equi_integrable": self.equi_profile.decays_to_zero}


def indicator_counterexample(spec: NormSpec, phi: OrliczFunction, n: int = 10) -> CounterexampleReport:
    """Indicators of ``n`` disjoint unit cells: ``sup ||phi(f)||`` is finite, restricted norms do not decay."""
    if n < 1:
        raise InputError("n must be at least 1")
    fam = indicator_train(n)
    vp = _sup(norm(compose(f, phi), spec) for f in fam)[0]
    unit = norm(StepFunction.indicator(1.0), spec)
    prof = equi_integrability_profile(fam, spec, tail_sets(fam))
    return CounterexampleReport(vp_bound=vp, expected_bound=float(phi.value(1.0)) * unit,
                        unit_norm=unit, equi_profile=prof)


# ---------------------------------------------------------------------------
# l1 lower constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class L1EquivalenceReport:
    """``c ||a||_1 <= ||sum a_k f_k|| <= C ||a||_1`` estimated over trial vectors."""

    lower_constant: float
    upper_constant: float
    achieving_vector: tuple[float, ...]
    trials: int
    n_vectors: int
    all_ones_ratio: float
    seed: int

    def to_dict(self):
        return {"lower_constant": self.lower_constant, "upper_constant": self.upper_constant,
                "achieving_vector": list(self.achieving_vector), "trials": self.trials,
                "n_vectors": self.n_vectors, "all_ones_ratio": self.all_ones_ratio,
                "seed": self.seed}


def disjoint_l1_lower_constant(family: Sequence[StepFunction], spec: NormSpec,
                               trials: int = 1000, seed: int = 0) -> L1EquivalenceReport:
    """Minimum of ``||sum a_k f_k|| / ||a||_1`` over basis vectors, all-ones and random simplex points.

    Members are normalized in ``spec`` first.  On disjoint supports the
    norm only sees ``|a_k|``, so nonnegative vectors suffice.
    """
    fam = [f for f in family]
    if not fam:
        raise InputError("empty family")
    if not are_disjoint(fam):
        raise InputError("family members are not disjointly supported")
    normed = []
    for f in fam:
        nf = norm(f, spec)
        if nf == 0:
            raise InputError("family contains a zero function")
        normed.append(f if abs(nf - 1.0) <= 1e-12 else f / nf)
    vals = np.concatenate([f.values for f in normed])
    wts = np.concatenate([f.weights for f in normed])
    keys = [k for f in normed for k in f.keys]
    owner = np.concatenate([np.full(len(f), i) for i, f in enumerate(normed)])
    n = len(normed)

    def ratio(a):
        g = StepFunction(vals * a[owner], wts, keys) if vals.size else StepFunction.zero()
        return norm(g, spec) / float(np.sum(np.abs(a)))

    vecs = list(np.eye(n)) + [np.ones(n)]
    rng = np.random.default_rng(seed)
    if trials > 0:
        vecs += list(rng.dirichlet(np.ones(n), size=trials))
    ratios = np.array([ratio(a) for a in vecs])
    i = int(np.argmin(ratios))
    a_star = vecs[i] / np.sum(vecs[i])
    return L1EquivalenceReport(lower_constant=float(ratios[i]), upper_constant=float(ratios.max()),
                               achieving_vector=tuple(a_star.tolist()), trials=int(trials),
                               n_vectors=len(vecs), all_ones_ratio=float(ratios[n]), seed=int(seed))


# ---------------------------------------------------------------------------
# case split for L^{p,1} cap L^1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseSplitReport:
    case: int
    delta: float
    l1_norms: tuple[float, ...]
    lorentz_norms: tuple[float, ...]
    ks: tuple[float, ...] = ()
    truncation_norms: tuple[float, ...] = ()
    claim_nonstrict: tuple[bool, ...] = ()
    claim_strict: tuple[bool, ...] = ()
    violations: tuple[dict, ...] = ()
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self):
        return {"case": self.case, "delta": self.delta, "l1_norms": list(self.l1_norms),
                "lorentz_norms": list(self.lorentz_norms), "ks": list(self.ks),
                "truncation_norms": list(self.truncation_norms),
                "claim_nonstrict": list(self.claim_nonstrict),
                "claim_strict": list(self.claim_strict),
                "violations": [dict(v) for v in self.violations], "notes": list(self.notes)}


def l1_lower_bound(p: float, k0: float) -> float:
    """``1 / (2**p k0**(p-1))``: the L1 mass forced on members failing the half-norm claim at ``k0``."""
    return 1.0 / (2.0 ** p * k0 ** (p - 1.0))


def lorentz_l1_case_split(family: Sequence[StepFunction], p: float = 2.0, ks=None,
                         decay_ratio: float = 0.1) -> CaseSplitReport:
    """Classify a disjoint normalized family in ``L^{p,1} cap L^1``.

    Case 1: the L1 norms stay away from zero; ``delta`` is their minimum.
    Case 2: the L1 norms decrease to below ``decay_ratio`` of the first.
    Then for each level ``k`` the largest ``||f 1{f > k}||_{p,1}`` is
    compared with 1/2 (both ``>=`` and ``>``); every member below 1/2 at
    ``k`` must carry ``||f||_1 >= 1/(2**p k**(p-1))``, which is verified.
    """
    fam = list(family)
    if not fam:
        raise InputError("empty family")
    if not are_disjoint(fam):
        raise InputError("family members are not disjointly supported")
    l1 = tuple(l1_norm(f) for f in fam)
    lor = tuple(lorentz_p1_norm(f, p) for f in fam)
    notes = []
    if not all(abs(max(a, b) - 1.0) <= 1e-9 for a, b in zip(l1, lor)):
        notes.append("members are not normalized in L^{p,1} cap L^1")
    decreasing = all(b <= a for a, b in zip(l1, l1[1:]))
    case2 = len(l1) > 1 and decreasing and min(l1) < decay_ratio * max(l1)
    if not case2:
        return CaseSplitReport(case=1, delta=float(min(l1)), l1_norms=l1, lorentz_norms=lor,
                               notes=tuple(notes))
    if ks is None:
        top = max(f.max_abs for f in fam)
        ks = [2.0 ** j for j in range(0, max(1, int(math.ceil(math.log2(max(top, 1.0))))) + 1)]
    ks = tuple(float(k) for k in ks)
    trunc, ns, st, viol = [], [], [], []
    for k in ks:
        per = [lorentz_p1_norm(truncate_above(abs(f), k), p) for f in fam]
        m = max(per)
        trunc.append(m)
        ns.append(m >= 0.5)
        st.append(m > 0.5)
        bound = l1_lower_bound(p, k)
        for i, (f, tn) in enumerate(zip(fam, per)):
            if tn < 0.5:
                low_part = StepFunction(np.where(np.abs(f.values) <= k, np.abs(f.values), 0.0),
                                        f.weights, f.keys)
                low = lorentz_p1_norm(low_part, p)
                mass = float(np.sum(np.minimum(np.abs(f.values), k) * f.weights))
                viol.append({"k": k, "member": i, "truncation_norm": tn,
                             "low_part_norm": low, "l1_norm": l1[i],
                             "integral_min_f_k": mass, "bound": bound,
                             "bound_holds": bool(l1[i] >= bound * (1 - 1e-12))})
    return CaseSplitReport(case=2, delta=float(min(l1)), l1_norms=l1, lorentz_norms=lor, ks=ks,
                           truncation_norms=tuple(trunc), claim_nonstrict=tuple(ns),
                           claim_strict=tuple(st), violations=tuple(viol), notes=tuple(notes))
