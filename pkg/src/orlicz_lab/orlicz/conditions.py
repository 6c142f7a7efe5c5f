"""Delta-condition verdicts and the linear-near-zero test.

Limits at infinity cannot be decided from samples.  Every verdict here is
numeric evidence and carries the probe data it was computed from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, InputError
from .functions import LN10, OrliczFunction

PROBE_MIN = 1e-8
PROBE_MAX = 1e12
PROBE_COUNT = 64
MIN_PROBES = 8
MIN_DECADES = 6.0
EVIDENCE = "numeric evidence"


def default_probes(phi: OrliczFunction | None = None, lam: float = 2.0,
                   n: int = PROBE_COUNT, u_min: float = PROBE_MIN,
                   u_max: float = PROBE_MAX) -> np.ndarray:
    """Log-spaced probes on ``[u_min, u_max]``, clipped so ``lam * u`` stays in the domain."""
    top = math.log(u_max)
    if phi is not None and math.isfinite(phi.log_u_max):
        top = min(top, phi.log_u_max - math.log(lam))
    lo = math.log(u_min)
    if top <= lo:
        raise InputError("probe range is empty for this function")
    return np.exp(np.linspace(lo, top, n))


def _check_probes(u):
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size < MIN_PROBES:
        raise InputError(f"need at least {MIN_PROBES} probe points")
    if np.any(u <= 0) or np.any(np.diff(u) <= 0):
        raise InputError("probes must be positive and increasing")
    if math.log10(u[-1] / u[0]) < MIN_DECADES - 1e-9:
        raise InputError(f"probes must span at least {MIN_DECADES:g} decades")
    return u


def _json_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass(frozen=True)
class DeltaVerdict:
    """Outcome of a Delta-condition probe.

    ``witness`` holds the evaluated ``(u, ratio)`` pairs; ratios too large
    for a float are stored as ``inf`` with the exact value kept in
    ``log_ratios``.
    """

    condition: str
    holds: bool
    witness: tuple[tuple[float, float], ...]
    log_ratios: tuple[float, ...]
    threshold_used: float
    lambda_used: float
    max_ratio: float
    label: str = EVIDENCE
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def probes(self):
        return np.array([w[0] for w in self.witness])

    @property
    def ratios(self):
        return np.array([w[1] for w in self.witness])

    def to_dict(self):
        return {
            "condition": self.condition,
            "holds": bool(self.holds),
            "label": self.label,
            "threshold_used": _json_float(self.threshold_used),
            "lambda_used": _json_float(self.lambda_used),
            "max_ratio": _json_float(self.max_ratio),
            "probe_us": [_json_float(w[0]) for w in self.witness],
            "ratios": [_json_float(w[1]) for w in self.witness],
            "log_ratios": [_json_float(x) for x in self.log_ratios],
            "notes": list(self.notes),
        }


def _log_ratios(phi, u, lam):
    s = np.log(u)
    lo = np.asarray(phi.log_value(s), dtype=float)
    hi = np.asarray(phi.log_value(s + math.log(lam)), dtype=float)
    if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
        raise DomainError("phi evaluation failed on the probes")
    return lo, hi


def delta2_verdict(phi: OrliczFunction, u_probe=None, C_cap: float = 1e3,
                   condition: str = "delta2_inf") -> DeltaVerdict:
    """Probe ``phi(2u) <= C phi(u)``.

    Holds iff every ratio is at most ``C_cap`` and the tail does not
    diverge (last ratio at most 1.05 times the median of the last three).
    ``condition="delta2_inf"`` ignores probes where ``phi(u) = 0``;
    ``"delta2_all"`` counts them as infinite ratios.
    """
    if condition not in ("delta2_inf", "delta2_all"):
        raise InputError(f"unknown condition {condition!r}")
    if not C_cap > 0:
        raise InputError("C_cap must be positive")
    u = _check_probes(default_probes(phi) if u_probe is None else u_probe)
    lo, hi = _log_ratios(phi, u, 2.0)
    notes = []
    zero = np.isneginf(lo)
    if condition == "delta2_inf" and zero.any():
        notes.append(f"{int(zero.sum())} probes with phi(u) = 0 skipped")
        u, lo, hi = u[~zero], lo[~zero], hi[~zero]
        if u.size < 3:
            raise DomainError("phi vanishes on almost all probes")
    with np.errstate(invalid="ignore"):
        lr = np.where(np.isneginf(lo) & np.isneginf(hi), 0.0, hi - lo)
    ratios = np.exp(np.minimum(lr, 709.0))
    ratios = np.where(lr > 709.0, np.inf, ratios)
    tail = ratios[-3:]
    holds = bool(np.all(ratios <= C_cap) and tail[-1] <= 1.05 * np.median(tail))
    return DeltaVerdict(
        condition=condition, holds=holds,
        witness=tuple(zip(u.tolist(), ratios.tolist())),
        log_ratios=tuple(lr.tolist()), threshold_used=float(C_cap),
        lambda_used=2.0, max_ratio=float(np.max(ratios)), notes=tuple(notes),
    )


def delta0_verdict(phi: OrliczFunction, lam: float = 2.0, u_probe=None,
                   divergence_threshold: float = 1e6) -> DeltaVerdict:
    """Probe ``phi(lam u) / phi(u) -> inf``.

    Holds iff the last three ratios increase strictly and the final one
    exceeds ``divergence_threshold``.  Ratios are formed in log space.
    """
    if not lam > 1:
        raise InputError("lambda must exceed 1")
    u = _check_probes(default_probes(phi, lam) if u_probe is None else u_probe)
    lo, hi = _log_ratios(phi, u, lam)
    notes = []
    zero = np.isneginf(lo)
    if zero.any():
        notes.append(f"{int(zero.sum())} probes with phi(u) = 0 skipped")
        u, lo, hi = u[~zero], lo[~zero], hi[~zero]
        if u.size < 3:
            raise DomainError("phi vanishes on almost all probes")
    lr = hi - lo
    ratios = np.where(lr > 709.0, np.inf, np.exp(np.minimum(lr, 709.0)))
    last = lr[-3:]
    holds = bool(np.all(np.diff(last) > 0) and last[-1] > math.log(divergence_threshold))
    return DeltaVerdict(
        condition="delta0", holds=holds,
        witness=tuple(zip(u.tolist(), ratios.tolist())),
        log_ratios=tuple(lr.tolist()), threshold_used=float(divergence_threshold),
        lambda_used=float(lam), max_ratio=float(np.max(ratios)), notes=tuple(notes),
    )


@dataclass(frozen=True)
class LinearNearZero:
    holds: bool
    c: float
    C: float
    d: float
    cap: float
    probe_us: tuple[float, ...]

    def __iter__(self):
        return iter((self.holds, self.c, self.C, self.d))

    def to_dict(self):
        return {"holds": self.holds, "c": self.c, "C": self.C, "d": self.d,
                "cap": self.cap, "probe_us": list(self.probe_us)}


def linear_near_zero_criterion(phi: OrliczFunction, u0: float = 1.0, n_probe: int = 64,
                               cap: float = 100.0, decades: float = 6.0) -> LinearNearZero:
    """Test ``c u <= phi(d u) <= C u`` on ``[u0 * 10**-decades, u0]`` with ``d = 1``.

    Unpacks as ``(holds, c, C, d)``.
    """
    if not u0 > 0:
        raise InputError("u0 must be positive")
    if n_probe < 2:
        raise InputError("need at least 2 probes")
    lo = math.log(u0) - decades * LN10
    s = np.linspace(lo, math.log(u0), n_probe)
    lq = np.asarray(phi.log_value(s), dtype=float) - s
    if np.any(np.isneginf(lq)):
        raise DomainError("phi vanishes at a positive argument; no linear bound from below")
    c, C = float(np.exp(lq.min())), float(np.exp(lq.max()))
    return LinearNearZero(holds=bool(C / c <= cap), c=c, C=C, d=1.0, cap=float(cap),
                          probe_us=tuple(np.exp(s).tolist()))
