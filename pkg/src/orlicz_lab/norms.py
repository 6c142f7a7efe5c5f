"""Lattice norms on step functions.

Every norm is computed exactly from the blocks except the Luxemburg norm,
which is a bracketed root search in ``ln lambda`` on the modular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np

from .errors import BracketError, InputError
from .orlicz.functions import OrliczFunction
from .stepfn import StepFunction, rearrangement

# ---------------------------------------------------------------------------
# modular and Luxemburg norm
# ---------------------------------------------------------------------------


def _log_modular(phi: OrliczFunction, log_abs: np.ndarray, log_w: np.ndarray, x: float) -> float:
    """``ln I_phi(f / e**x)`` for the nonzero blocks of ``f``."""
    s = log_abs - x
    if math.isfinite(phi.log_u_max) and np.any(s > phi.log_u_max):
        return math.inf  # beyond a tabulated domain phi counts as infinite
    terms = np.asarray(phi.log_value(s), dtype=float) + log_w
    return float(np.logaddexp.reduce(terms)) if terms.size else -math.inf


def modular(phi: OrliczFunction, f: StepFunction) -> float:
    """``I_phi(f) = sum phi(|v_i|) w_i`` (``inf`` on overflow)."""
    a = np.abs(f.values)
    nz = a > 0
    if not nz.any():
        return 0.0
    if not math.isfinite(phi.log_u_max) or np.all(np.log(a[nz]) <= phi.log_u_max):
        with np.errstate(over="ignore"):
            direct = float(np.sum(np.asarray(phi.value(a[nz])) * f.weights[nz]))
        if math.isfinite(direct):
            return direct
    lm = _log_modular(phi, np.log(a[nz]), np.log(f.weights[nz]), 0.0)
    return math.inf if lm > 709.0 else math.exp(lm)


def luxemburg_norm(phi: OrliczFunction, f: StepFunction, rel_tol: float = 1e-12,
                   max_steps: int = 4000) -> float:
    """``inf{lam > 0 : I_phi(f/lam) <= 1}`` by a bracketed root search on ``ln lam``.

    The bracket starts at ``lam = sum |v_i| w_i`` and is widened by
    doubling/halving.  The returned value always satisfies
    ``I_phi(f/lam) <= 1`` and is within relative ``rel_tol`` of the infimum.
    """
    if not rel_tol > 0:
        raise InputError("rel_tol must be positive")
    a = np.abs(f.values)
    nz = a > 0
    if not nz.any():
        return 0.0
    la, lw = np.log(a[nz]), np.log(f.weights[nz])
    g = lambda x: _log_modular(phi, la, lw, x)  # noqa: E731
    x0 = math.log(float(np.sum(a[nz] * f.weights[nz])))
    step = math.log(2.0)
    hi = x0
    for _ in range(max_steps):
        if g(hi) <= 0.0:
            break
        hi += step
    else:
        raise BracketError(f"no upper bracket for the Luxemburg norm of {phi.name}")
    lo = hi - step
    for _ in range(max_steps):
        if g(lo) > 0.0:
            break
        hi, lo = lo, lo - step
    else:
        raise BracketError(f"no lower bracket for the Luxemburg norm of {phi.name}")
    # Illinois regula falsi on the bracket; g is smooth and decreasing in x
    glo, ghi = g(lo), g(hi)
    side = 0
    for _ in range(max_steps):
        if hi - lo <= rel_tol:
            break
        if math.isfinite(glo) and ghi < glo:
            x = hi - ghi * (hi - lo) / (ghi - glo)
        else:
            x = 0.5 * (lo + hi)
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
            if x in (lo, hi):
                break
        gx = g(x)
        if gx <= 0.0:
            hi, ghi = x, gx
            if side == -1:
                glo *= 0.5
            side = -1
        else:
            lo, glo = x, gx
            if side == 1:
                ghi *= 0.5
            side = 1
        # near the root, probe just across it to close the bracket
        if hi - lo > rel_tol and abs(gx) < 1e-3:
            y = x - 0.5 * rel_tol if gx <= 0.0 else x + 0.5 * rel_tol
            if lo < y < hi:
                gy = g(y)
                if gy <= 0.0:
                    hi, ghi = y, gy
                else:
                    lo, glo = y, gy
    lam = math.exp(hi)
    # rounding in exp and in ln u - x can leave lam a hair too small;
    # step up by geometrically growing multiples of the machine epsilon
    nudge = 2.0 ** -52
    for _ in range(64):
        if modular(phi, f / lam) <= 1.0:
            return lam
        lam *= 1.0 + nudge
        nudge *= 2.0
    raise BracketError("Luxemburg bisection could not certify I(f/lam) <= 1")


# ---------------------------------------------------------------------------
# plain norms
# ---------------------------------------------------------------------------


def l1_norm(f: StepFunction) -> float:
    return float(np.sum(np.abs(f.values) * f.weights))


def lp_norm(f: StepFunction, p: float) -> float:
    if not p >= 1:
        raise InputError("lp_norm needs p >= 1")
    if p == 1:
        return l1_norm(f)
    m = f.max_abs
    if m == 0:
        return 0.0
    return m * float(np.sum((np.abs(f.values) / m) ** p * f.weights)) ** (1.0 / p)


def lorentz_p1_norm(f: StepFunction, p: float) -> float:
    """``sum_k f*_k (t_k**(1/p) - t_{k-1}**(1/p))`` over the rearranged blocks."""
    if not p > 1:
        raise InputError("Lorentz L^{p,1} needs p > 1")
    r = rearrangement(f)
    if len(r) == 0:
        return 0.0
    t = np.cumsum(r.weights)
    T = t ** (1.0 / p)
    return float(np.sum(r.values * np.diff(np.concatenate([[0.0], T]))))


# ---------------------------------------------------------------------------
# Lambda_w weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerWeight:
    """``w_p(t) = (1/p) t**(1/p - 1)`` on ``(0, 1]``; ``W(t) = t**(1/p)``."""

    p: float = 2.0
    kind: ClassVar[str] = "power"

    def __post_init__(self):
        if not self.p >= 1:
            raise InputError("power weight needs p >= 1")

    def W(self, t):
        return np.asarray(t, dtype=float) ** (1.0 / self.p)

    def w(self, t):
        t = np.asarray(t, dtype=float)
        return t ** (1.0 / self.p - 1.0) / self.p

    def to_dict(self):
        return {"kind": self.kind, "p": self.p}


@dataclass(frozen=True)
class LogWeight:
    """``w(t) = (1 - ln t)/2`` on ``(0, 1]``; ``W(t) = t (2 - ln t)/2``."""

    kind: ClassVar[str] = "log"

    def W(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(t > 0, t * (2.0 - np.log(np.where(t > 0, t, 1.0))) / 2.0, 0.0)

    def w(self, t):
        return (1.0 - np.log(np.asarray(t, dtype=float))) / 2.0

    def to_dict(self):
        return {"kind": self.kind}


def weight_from_dict(d) -> Any:
    if isinstance(d, (PowerWeight, LogWeight)):
        return d
    kind = d.get("kind", "power")
    if kind == "power":
        return PowerWeight(float(d.get("p", 2.0)))
    if kind == "log":
        return LogWeight()
    raise InputError(f"unknown Lambda_w weight kind {kind!r}")


def lambda_w_norm(f: StepFunction, weight=PowerWeight(2.0)) -> float:
    """``int_0^1 f*(t) w(t) dt`` using the antiderivative ``W``."""
    r = rearrangement(f)
    if len(r) == 0:
        return 0.0
    t = np.cumsum(r.weights)
    if t[-1] > 1.0 + 1e-12:
        raise InputError(f"Lambda_w lives on [0, 1]; support has measure {t[-1]:.6g}")
    t = np.minimum(t, 1.0)
    Wt = np.asarray(weight.W(t), dtype=float)
    return float(np.sum(r.values * np.diff(np.concatenate([[0.0], Wt]))))


# ---------------------------------------------------------------------------
# NormSpec
# ---------------------------------------------------------------------------


class NormSpec:
    """Tagged descriptor of a lattice norm; call :func:`norm` to evaluate."""

    tag: ClassVar[str] = ""
    rearrangement_invariant: ClassVar[bool] = True

    def evaluate(self, f: StepFunction) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class L1(NormSpec):
    tag: ClassVar[str] = "L1"

    def evaluate(self, f):
        return l1_norm(f)

    def to_dict(self):
        return {"tag": self.tag}


@dataclass(frozen=True)
class Lp(NormSpec):
    p: float = 2.0
    tag: ClassVar[str] = "Lp"

    def __post_init__(self):
        if not self.p >= 1:
            raise InputError("Lp needs p >= 1")

    def evaluate(self, f):
        return lp_norm(f, self.p)

    def to_dict(self):
        return {"tag": self.tag, "p": self.p}


@dataclass(frozen=True)
class Orlicz(NormSpec):
    phi: OrliczFunction = None
    rel_tol: float = 1e-12
    tag: ClassVar[str] = "Orlicz"

    def __post_init__(self):
        if not isinstance(self.phi, OrliczFunction):
            raise InputError("Orlicz norm needs an OrliczFunction")

    def evaluate(self, f):
        return luxemburg_norm(self.phi, f, self.rel_tol)

    def to_dict(self):
        return {"tag": self.tag, "phi": self.phi.descriptor()}


@dataclass(frozen=True)
class LorentzP1(NormSpec):
    p: float = 2.0
    tag: ClassVar[str] = "LorentzP1"

    def __post_init__(self):
        if not self.p > 1:
            raise InputError("LorentzP1 needs p > 1")

    def evaluate(self, f):
        return lorentz_p1_norm(f, self.p)

    def to_dict(self):
        return {"tag": self.tag, "p": self.p}


@dataclass(frozen=True)
class LambdaW(NormSpec):
    weight: Any = PowerWeight(2.0)
    tag: ClassVar[str] = "LambdaW"

    def __post_init__(self):
        object.__setattr__(self, "weight", weight_from_dict(self.weight))

    def evaluate(self, f):
        return lambda_w_norm(f, self.weight)

    def to_dict(self):
        return {"tag": self.tag, "weight": self.weight.to_dict()}


@dataclass(frozen=True)
class Intersection(NormSpec):
    """``max(first, second)``."""

    first: NormSpec = None
    second: NormSpec = None
    tag: ClassVar[str] = "Intersection"

    def __post_init__(self):
        if not isinstance(self.first, NormSpec) or not isinstance(self.second, NormSpec):
            raise InputError("Intersection needs two NormSpecs")

    def evaluate(self, f):
        return max(self.first.evaluate(f), self.second.evaluate(f))

    def to_dict(self):
        return {"tag": self.tag, "first": self.first.to_dict(), "second": self.second.to_dict()}


def norm(f: StepFunction, spec: NormSpec) -> float:
    if not isinstance(spec, NormSpec):
        raise InputError(f"not a NormSpec: {spec!r}")
    return spec.evaluate(f)


def normalized(f: StepFunction, spec: NormSpec) -> StepFunction:
    """``f / ||f||``; the zero function is rejected."""
    n = norm(f, spec)
    if n == 0:
        raise InputError("cannot normalize a function of norm zero")
    return f / n


def fundamental_function(spec: NormSpec, t: float) -> float:
    """``||1_A||`` for ``m(A) = t``."""
    if t <= 0:
        return 0.0
    return norm(StepFunction.indicator(t), spec)


def spec_from_dict(d) -> NormSpec:
    """Inverse of ``NormSpec.to_dict``; Orlicz entries use function descriptors."""
    if isinstance(d, NormSpec):
        return d
    if not isinstance(d, dict) or "tag" not in d:
        raise InputError(f"norm spec record needs a 'tag': {d!r}")
    tag = d["tag"]
    try:
        if tag == "L1":
            return L1()
        if tag == "Lp":
            return Lp(float(d.get("p", 2.0)))
        if tag == "LorentzP1":
            return LorentzP1(float(d.get("p", 2.0)))
        if tag == "LambdaW":
            return LambdaW(weight_from_dict(d.get("weight", {})))
        if tag == "Intersection":
            return Intersection(spec_from_dict(d["first"]), spec_from_dict(d["second"]))
        if tag == "Orlicz":
            from .io import function_from_descriptor

            return Orlicz(function_from_descriptor(d["phi"]))
    except KeyError as exc:
        raise InputError(f"norm spec {tag} is missing field {exc}") from None
    raise InputError(f"unknown norm tag {tag!r}")
