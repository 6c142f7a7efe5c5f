"""Pointwise multiplier norms and their order-continuity profile.

The supremum over the unit ball of ``X`` is replaced by a structured
candidate set (single cells, level sets, random functions on the cells of
``f``), so estimates are certified lower bounds.  When ``X == Y`` the
multiplier norm of a step function is ``max |f|`` and is reported as the
matching upper bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .compactness import DecayProfile, make_profile
from .errors import InputError
from .norms import NormSpec, norm
from .stepfn import BlockSet, StepFunction, product, restrict


@dataclass(frozen=True)
class MultiplierReport:
    norm_estimate: float
    achieving_g: StepFunction
    n_candidates: int
    status: str  # "lower_bound" or "exact"
    upper_bound: float | None = None
    achieving_kind: str = ""

    def to_dict(self):
        return {"norm_estimate": self.norm_estimate,
                "achieving_g": self.achieving_g.to_json(),
                "n_candidates": self.n_candidates, "status": self.status,
                "upper_bound": self.upper_bound, "achieving_kind": self.achieving_kind}


@dataclass(frozen=True)
class Candidate:
    g: StepFunction
    x_norm: float
    kind: str


def make_candidates(f: StepFunction, X: NormSpec, probes: int = 32, seed: int = 0) -> list[Candidate]:
    """Unit-norm test functions on the cells of ``f``.

    Single-cell indicators, indicators of the level sets ``{|f| >= c}``,
    ``|f|`` itself and ``probes`` random nonnegative functions (seeded).
    """
    if probes < 0:
        raise InputError("probe count must be nonnegative")
    keys, w = f.keys, f.weights
    raw: list[tuple[StepFunction, str]] = []
    for k, wk in zip(keys, w):
        raw.append((StepFunction([1.0], [wk], (k,)), "cell"))
    a = np.abs(f.values)
    for c in sorted(set(a[a > 0].tolist()), reverse=True):
        m = a >= c
        raw.append((StepFunction(np.ones(int(m.sum())), w[m], tuple(k for k, s in zip(keys, m) if s)),
                    "level_set"))
    if np.any(a > 0):
        raw.append((StepFunction(a, w, keys), "modulus"))
    if len(keys):
        rng = np.random.default_rng(seed)
        for _ in range(probes):
            raw.append((StepFunction(rng.uniform(0.0, 1.0, len(keys)), w, keys), "random"))
    out = []
    for g, kind in raw:
        n = norm(g, X)
        if not n > 0:
            raise InputError("a candidate has zero X-norm")
        g = g / n
        out.append(Candidate(g, norm(g, X), kind))
    return out


def multiplier_norm_estimate(f: StepFunction, X: NormSpec, Y: NormSpec, probes: int = 32,
                             seed: int = 0, candidates: Sequence[Candidate] | None = None
                             ) -> MultiplierReport:
    """Lower bound on ``sup_{||g||_X <= 1} ||f g||_Y`` over the candidate set.

    Passing ``candidates`` shares one probe set between several calls.
    """
    cands = list(candidates) if candidates is not None else make_candidates(f, X, probes, seed)
    upper = f.max_abs if X == Y else None
    if not cands or f.is_zero():
        g = cands[0].g if cands else StepFunction.zero()
        status = "exact" if upper is not None else "lower_bound"
        return MultiplierReport(0.0, g, len(cands), status, upper, cands[0].kind if cands else "")
    best, arg = -1.0, 0
    for i, c in enumerate(cands):
        val = norm(product(f, c.g), Y) / c.x_norm
        if val > best:
            best, arg = val, i
    status = "lower_bound"
    if upper is not None and abs(best - upper) <= 1e-9 * max(1.0, upper):
        status = "exact"
    return MultiplierReport(float(best), cands[arg].g, len(cands), status, upper, cands[arg].kind)


def multiplier_oc_profile(f: StepFunction, X: NormSpec, Y: NormSpec, sets: Sequence[BlockSet],
                          probes: int = 32, seed: int = 0, *, tol=1e-6, rel_drop=1e-3) -> DecayProfile:
    """``n -> ||f 1_{A_n}||_{M(X, Y)}`` estimated with one shared candidate set."""
    sets = list(sets)
    for a, b in zip(sets, sets[1:]):
        if not b <= a:
            raise InputError("block sets must be nested decreasing")
    cands = make_candidates(f, X, probes, seed)
    vals = [multiplier_norm_estimate(restrict(f, A, strict=False), X, Y, candidates=cands).norm_estimate
            for A in sets]
    return make_profile(range(1, len(sets) + 1), vals, kind="multiplier_order_continuity",
                        tol=tol, rel_drop=rel_drop)


def default_tail_sets(f: StepFunction) -> list[BlockSet]:
    """Drop ``f``'s cells one by one, ending with the empty set."""
    keys = list(f.keys)
    return [BlockSet(frozenset(keys[j:])) for j in range(len(keys) + 1)]
