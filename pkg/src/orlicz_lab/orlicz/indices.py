"""Matuszewska-Orlicz and Simonenko indices at infinity.

Both indices are limits as ``u -> inf`` and converge logarithmically for
the catalog entries (the Simonenko ratio of ``u ln u`` is ``1 + 1/ln u``),
so the estimators look at a window near the top of the evaluable range,
far beyond ``1e12``.  Closed-form entries are evaluated up to
``ln u = TOP_LOG_U``; tabulated ones up to their last node.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, InputError, NumericError
from .conditions import MIN_DECADES, _json_float
from .functions import LN10, OrliczFunction, TabulatedConvex

TOP_LOG_U = 5000.0
DEFAULT_TS = (0.125, 0.25, 0.5, 2.0, 4.0, 8.0)
INFINITY_THRESHOLD = 50.0
WINDOW_POINTS = 64
# bottom of the range for closed forms, used only to size the window
_CATALOG_BOTTOM = math.log(1e-8)


@dataclass(frozen=True)
class IndexWindow:
    """Window ``[top - width, top]`` in ``s = ln u`` where tails are sampled."""

    top: float
    width: float
    bottom: float

    @property
    def lo(self):
        return self.top - self.width


def index_window(phi: OrliczFunction, max_decades: float = 3.0) -> IndexWindow:
    if isinstance(phi, TabulatedConvex):
        s, _ = phi.log_nodes
        bottom, top = float(s[0]), float(s[-1])
    else:
        bottom, top = _CATALOG_BOTTOM, TOP_LOG_U
    width = min(max_decades * LN10, max(LN10, (top - bottom) / 4.0))
    width = min(width, top - bottom)
    if width <= 0:
        raise InputError("function range too short for index estimation")
    return IndexWindow(top=top, width=width, bottom=bottom)


@dataclass(frozen=True)
class IndexReport:
    """Estimates of ``a <= alpha <= beta <= b`` at infinity.

    Entries are ``None`` when the corresponding estimator was not run and
    ``inf`` when flagged infinite (estimate above the threshold and still
    increasing along the window).  ``estimates`` keeps the raw finite
    numbers behind every flag.
    """

    a_inf: float | None = None
    alpha_inf: float | None = None
    beta_inf: float | None = None
    b_inf: float | None = None
    probe_ts: tuple[float, ...] = ()
    probe_us: tuple[tuple[float, ...], ...] = ()
    M_values: tuple[tuple[float, ...], ...] = ()
    simonenko_us: tuple[float, ...] = ()
    simonenko_ratios: tuple[float, ...] = ()
    estimates: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    infinity_threshold: float = INFINITY_THRESHOLD
    label: str = "numeric evidence"

    def merged(self, other: "IndexReport") -> "IndexReport":
        pick = lambda a, b: a if a is not None else b  # noqa: E731
        return IndexReport(
            a_inf=pick(self.a_inf, other.a_inf),
            alpha_inf=pick(self.alpha_inf, other.alpha_inf),
            beta_inf=pick(self.beta_inf, other.beta_inf),
            b_inf=pick(self.b_inf, other.b_inf),
            probe_ts=self.probe_ts or other.probe_ts,
            probe_us=self.probe_us or other.probe_us,
            M_values=self.M_values or other.M_values,
            simonenko_us=self.simonenko_us or other.simonenko_us,
            simonenko_ratios=self.simonenko_ratios or other.simonenko_ratios,
            estimates={**other.estimates, **self.estimates},
            flags={**other.flags, **self.flags},
            diagnostics={**other.diagnostics, **self.diagnostics},
            infinity_threshold=self.infinity_threshold,
        )

    def ordered(self, slack: float = 1e-6) -> bool:
        """``a <= alpha <= beta <= b`` up to ``slack`` among finite entries."""
        vals = [x for x in (self.a_inf, self.alpha_inf, self.beta_inf, self.b_inf)
                if x is not None]
        return all(x <= y + slack for x, y in zip(vals, vals[1:]))

    def to_dict(self):
        def conv(obj):
            if isinstance(obj, dict):
                return {k: conv(v) for k, v in obj.items()}
            if isinstance(obj, (list, tuple)):
                return [conv(v) for v in obj]
            if isinstance(obj, (bool, np.bool_)):
                return bool(obj)
            if isinstance(obj, (int, float, np.floating)):
                return _json_float(obj)
            return obj

        return conv({
            "a_inf": self.a_inf, "alpha_inf": self.alpha_inf,
            "beta_inf": self.beta_inf, "b_inf": self.b_inf,
            "probe_ts": self.probe_ts, "probe_us": self.probe_us,
            "M_values": self.M_values, "simonenko_us": self.simonenko_us,
            "simonenko_ratios": self.simonenko_ratios,
            "estimates": self.estimates, "flags": self.flags,
            "diagnostics": self.diagnostics,
            "infinity_threshold": self.infinity_threshold, "label": self.label,
        })


def _fit_through_origin(x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(np.dot(x, y) / np.dot(x, x))


def _check_ts(t_grid):
    t = np.asarray(sorted(t_grid), dtype=float)
    if np.any(t <= 0) or np.any(t == 1.0):
        raise InputError("t grid must be positive and exclude 1")
    small, large = t[t < 1], t[t > 1]
    if small.size == 0 or large.size == 0:
        raise InputError("t grid needs points in (0, 1) and in (1, inf)")
    return t, small[:3], large[-3:]


def _trending_up(x):
    """Nondecreasing at the start, middle and end of the tail half."""
    x = np.asarray(x, dtype=float)
    x = x[x.size // 2:]
    return bool(x[-1] >= x[x.size // 2] >= x[0])


def matuszewska_indices(phi: OrliczFunction, t_grid=DEFAULT_TS, u_grid=None, *,
                        infinity_threshold: float = INFINITY_THRESHOLD,
                        n_points: int = WINDOW_POINTS) -> IndexReport:
    """Estimate ``alpha`` and ``beta`` from ``M(t) = limsup phi(tu)/phi(u)``.

    For each ``t``, ``M(t)`` is the largest ratio over a window of ``u``
    near the top of the range (or over the tail half of ``u_grid``).
    ``alpha`` and ``beta`` are least-squares slopes through the origin of
    ``ln M`` against ``ln t`` on the three smallest and three largest
    ``t``.  An index is flagged infinite when it exceeds the threshold and
    the pointwise slopes are still increasing toward the end of the window.
    """
    ts, small, large = _check_ts(t_grid)
    windows = []
    if u_grid is None:
        w = index_window(phi)
        for t in ts:
            lt = math.log(t)
            top = w.top - max(0.0, lt)
            lo = max(top - w.width, w.bottom - min(0.0, lt))
            if lo >= top:
                raise InputError(f"no room for t = {t:g} in the function's range")
            windows.append(np.linspace(lo, top, n_points))
    else:
        u = np.asarray(u_grid, dtype=float)
        if u.ndim != 1 or np.any(u <= 0) or np.any(np.diff(u) <= 0):
            raise InputError("u grid must be positive and strictly increasing")
        if math.log10(u[-1] / u[0]) < MIN_DECADES - 1e-9:
            raise InputError(f"u grid must span at least {MIN_DECADES:g} decades")
        s_all = np.log(u[u.size // 2:])
        for t in ts:
            s = s_all
            if math.isfinite(phi.log_u_max):
                s = s[s + math.log(t) <= phi.log_u_max]
            if s.size < 3:
                raise InputError(f"fewer than 3 usable u points for t = {t:g}")
            windows.append(s)
    logM, pointwise = [], []
    for t, s in zip(ts, windows):
        lr = np.asarray(phi.log_value(s + math.log(t)) - phi.log_value(s), dtype=float)
        if np.any(~np.isfinite(lr)):
            raise DomainError(f"phi vanishes or overflows in the window for t = {t:g}")
        logM.append(float(lr.max()))
        pointwise.append(lr)
    logM = np.array(logM)
    lts = np.log(ts)

    def side(sel):
        idx = np.flatnonzero(np.isin(ts, sel))
        if idx.size < 3:
            raise NumericError("degenerate fit: fewer than 3 usable t points")
        est = _fit_through_origin(lts[idx], logM[idx])
        n = min(len(pointwise[i]) for i in idx)
        pw = np.array([_fit_through_origin(lts[idx], [pointwise[i][j] for i in idx])
                       for j in range(n)])
        up = _trending_up(pw)
        flag = up and bool(pw[-1] > infinity_threshold)
        return est, flag, up, pw

    a_est, a_flag, a_up, a_pw = side(small)
    b_est, b_flag, b_up, b_pw = side(large)
    return IndexReport(
        alpha_inf=math.inf if a_flag else a_est,
        beta_inf=math.inf if b_flag else b_est,
        probe_ts=tuple(ts.tolist()),
        probe_us=tuple(tuple(np.exp(np.minimum(s, 709.0)).tolist()) for s in windows),
        M_values=tuple((float(np.exp(min(m, 709.0))) if m <= 709.0 else math.inf,)
                       for m in logM),
        estimates={"alpha": a_est, "beta": b_est, "log_M": logM.tolist(),
                   "alpha_terminal": float(a_pw[-1]), "beta_terminal": float(b_pw[-1]),
                   "log_u_windows": [[float(s[0]), float(s[-1])] for s in windows]},
        flags={"alpha_infinite": a_flag, "beta_infinite": b_flag},
        diagnostics={"alpha_trending_up": a_up, "beta_trending_up": b_up},
        infinity_threshold=infinity_threshold,
    )


def simonenko_ratio(phi: OrliczFunction, u):
    """``u phi'(u+) / phi(u)``."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise DomainError("the Simonenko ratio needs u > 0")
    s = np.log(u)
    if np.any(np.isneginf(phi.log_value(s))):
        raise DomainError("phi(u) = 0: Simonenko ratio undefined")
    out = 1.0 + np.asarray(phi.kappa(s), dtype=float)
    return float(out) if out.ndim == 0 else out


def _simonenko_samples(phi, u_grid, margin, n_points):
    """(log u, ratio) samples on the Simonenko window, in increasing u."""
    if u_grid is not None:
        u = np.asarray(u_grid, dtype=float)
        if u.ndim != 1 or np.any(u <= 0) or np.any(np.diff(u) <= 0):
            raise InputError("u grid must be positive and strictly increasing")
        if math.log10(u[-1] / u[0]) < MIN_DECADES - 1e-9:
            raise InputError(f"u grid must span at least {MIN_DECADES:g} decades")
        s = np.log(u[u.size // 2:])
        return s, 1.0 + np.asarray(phi.kappa(s), dtype=float)
    w = index_window(phi)
    lo = max(w.lo - margin, w.bottom)
    if isinstance(phi, TabulatedConvex):
        # both one-sided ratios at every node: the exact inf/sup of the interpolant
        s_n, l_n = phi.log_nodes
        ls = phi.log_slopes
        sel = np.flatnonzero(s_n >= lo)
        sel = sel[sel >= 1]
        if sel.size < 3:
            raise InputError("fewer than 3 nodes in the Simonenko window")
        left = np.exp(s_n[sel] + ls[sel] - l_n[sel])
        right_idx = np.minimum(sel + 1, s_n.size - 1)
        right = np.exp(s_n[sel] + ls[right_idx] - l_n[sel])
        right[sel == s_n.size - 1] = left[sel == s_n.size - 1]
        s = np.repeat(s_n[sel], 2)
        r = np.empty(2 * sel.size)
        r[0::2], r[1::2] = left, right
        return s, r
    s = np.linspace(lo, w.top, n_points)
    return s, 1.0 + np.asarray(phi.kappa(s), dtype=float)


def simonenko_indices(phi: OrliczFunction, u_grid=None, *,
                      infinity_threshold: float = INFINITY_THRESHOLD,
                      margin: float = math.log(max(DEFAULT_TS)),
                      n_points: int = 2 * WINDOW_POINTS) -> IndexReport:
    """Estimate ``a`` (liminf) and ``b`` (limsup) of ``u phi'(u)/phi(u)``.

    The default window extends the Matuszewska window by ``margin`` so
    that every ratio the Matuszewska estimator integrates over is
    sampled here; this keeps ``a <= alpha`` and ``beta <= b``.
    """
    s, r = _simonenko_samples(phi, u_grid, margin, n_points)
    if np.any(~np.isfinite(r)):
        raise DomainError("phi vanishes in the Simonenko window")
    up = _trending_up(r)
    flag = bool(r[-1] > infinity_threshold and up)
    a_est, b_est = float(r.min()), float(r.max())
    return IndexReport(
        a_inf=math.inf if flag else a_est,
        b_inf=math.inf if flag else b_est,
        simonenko_us=tuple(np.exp(np.minimum(s, 709.0)).tolist()),
        simonenko_ratios=tuple(r.tolist()),
        estimates={"a": a_est, "b": b_est, "ratio_terminal": float(r[-1]),
                   "log_u_window": [float(s[0]), float(s[-1])]},
        flags={"a_infinite": flag, "b_infinite": flag},
        diagnostics={"simonenko_trending_up": up,
                     "simonenko_trending_down": _trending_up(-r)},
        infinity_threshold=infinity_threshold,
    )


def growth_indices(phi: OrliczFunction, t_grid=DEFAULT_TS, u_grid=None, **kwargs) -> IndexReport:
    """All four indices in one report."""
    return simonenko_indices(phi, u_grid, **kwargs).merged(
        matuszewska_indices(phi, t_grid, u_grid, **kwargs))


def _inv(x):
    return 0.0 if math.isinf(x) else 1.0 / x


def index_duality_residual(phi: OrliczFunction, grid=None, phistar=None):
    """``(|1/alpha + 1/beta* - 1|, |1/a + 1/b* - 1|)`` with ``1/inf = 0``."""
    from .conjugate import conjugate

    psi = phistar if phistar is not None else conjugate(phi, grid)
    rp, rs = growth_indices(phi), growth_indices(psi)
    return (abs(_inv(rp.alpha_inf) + _inv(rs.beta_inf) - 1.0),
            abs(_inv(rp.a_inf) + _inv(rs.b_inf) - 1.0))


def simonenko_ratio_criterion(phi: OrliczFunction, u_grid=None, tol: float = 1e-2) -> bool:
    """``|ratio - 1| < tol`` at the last three window points with non-increasing deviation."""
    s, r = _simonenko_samples(phi, u_grid, 0.0, 2 * WINDOW_POINTS)
    if isinstance(phi, TabulatedConvex) and u_grid is None:
        r = r[1::2]  # right-derivative ratios only
    dev = np.abs(r[-3:] - 1.0)
    return bool(np.all(dev < tol) and np.all(np.diff(dev) <= 0))
