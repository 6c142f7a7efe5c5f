"""Discrete Legendre-Fenchel conjugation in log coordinates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from .functions import LN10, OrliczFunction, TabulatedConvex


@dataclass(frozen=True)
class ConjugationGrid:
    """Sampling grid in ``s = ln u`` used to conjugate closed-form entries.

    A fine log-uniform segment covers the probe range; a coarser
    segment uniform in ``s`` continues far into the tail so that
    conjugates of slowly growing functions reach large ``v``.
    """

    u_min: float = 1e-8
    u_max: float = 1e12
    per_decade: int = 4000
    far_log_u: float = 5000.0
    far_step: float = 0.01

    def __post_init__(self):
        if not (0 < self.u_min < self.u_max) or self.per_decade < 1 or not self.far_step > 0:
            raise InputError("invalid conjugation grid")

    def log_nodes(self, breakpoints=()) -> np.ndarray:
        lo, hi = math.log(self.u_min), math.log(self.u_max)
        n_fine = int(round((hi - lo) / LN10 * self.per_decade)) + 1
        parts = [np.linspace(lo, hi, n_fine)]
        if self.far_log_u > hi:
            n_far = int(math.ceil((self.far_log_u - hi) / self.far_step))
            parts.append(hi + self.far_step * np.arange(1, n_far + 1))
        kinks = [math.log(b) for b in breakpoints if b > 0]
        parts.append(np.asarray(kinks, dtype=float))
        return np.unique(np.concatenate(parts))


DEFAULT_GRID = ConjugationGrid()


def _strictly_increasing_mask(x):
    """Keep the first of each run of non-increasing values."""
    if x.size == 0:
        return np.zeros(0, dtype=bool)
    prev = np.maximum.accumulate(np.concatenate([[-np.inf], x[:-1]]))
    return x > prev


def _catalog_conjugate_nodes(phi: OrliczFunction, s):
    # phi*(phi'(u)) = u phi'(u) - phi(u) = phi(u) kappa(u), exact at each node
    log_v = np.asarray(phi.log_derivative(s), dtype=float)
    with np.errstate(divide="ignore"):
        log_val = phi.log_value(s) + np.log(phi.kappa(s))
    ok = np.isfinite(log_v)
    log_v, log_val = log_v[ok], log_val[ok]
    keep = _strictly_increasing_mask(log_v)
    if not keep.any():
        return log_v[keep], log_val[keep]
    # on a flat stretch of phi' every node gives the same value; take the largest
    return log_v[keep], np.maximum.reduceat(log_val, np.flatnonzero(keep))


def _tabulated_conjugate_nodes(phi: TabulatedConvex):
    s, l = phi.log_nodes
    ls = phi.log_slopes
    # segment k ends at node k; at v = sigma_k the maximiser is node k
    with np.errstate(divide="ignore", invalid="ignore"):
        log_val = s + ls + np.log(-np.expm1(np.minimum(l - s - ls, 0.0)))
    log_val = np.where(np.isneginf(ls), -np.inf, log_val)
    ok = np.isfinite(ls)
    log_v, log_val = ls[ok], log_val[ok]
    # collinear nodes share a slope; keep the last (largest u)
    keep = np.append(np.diff(log_v) > 0, True)
    return log_v[keep], log_val[keep]


def _dual_exponent(p: float):
    """``p/(p-1)``, or a linear head when ``p`` is numerically 1."""
    if not p > 1.0 + 1e-9:
        return "linear"
    q = p / (p - 1.0)
    return q if math.isfinite(q) else "linear"


def legendre_sweep(phi: TabulatedConvex, v) -> np.ndarray:
    """``ln max_k (u_k v - phi_k)`` over the nodes of a tabulated function.

    The maximising node is nondecreasing in ``v`` (it is the number of
    chord slopes ``<= v``), so one ``searchsorted`` over the sorted chord
    slopes matches all queries at once.
    """
    v = np.asarray(v, dtype=float)
    if np.any(v < 0) or np.any(np.isnan(v)):
        raise InputError("conjugate arguments must be nonnegative")
    s, l = phi.log_nodes
    ls = phi.log_slopes
    with np.errstate(divide="ignore"):
        x = np.log(v)
    k = np.searchsorted(ls, x, side="right") - 1
    kk = np.clip(k, 0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = s[kk] + x + np.log(-np.expm1(np.minimum(l[kk] - s[kk] - x, 0.0)))
        q = phi.head_exponent
        if q > 1.0:
            # sup over the power-law head phi_0 (u/u_0)**q
            log_c = l[0] - q * s[0]
            head = math.log(q - 1.0) + log_c + q / (q - 1.0) * (x - log_c - math.log(q))
            out = np.where(k < 0, head, out)
            k = np.where(k < 0, 0, k)
    return np.where((k < 0) | (v == 0), -np.inf, out)


def conjugate(phi: OrliczFunction, grid=None, *, v_grid=None, check=False) -> TabulatedConvex:
    """Numeric conjugate ``phi*(v) = sup_u [u v - phi(u)]``.

    Parameters
    ----------
    phi : OrliczFunction
        Must be coercive, otherwise ``phi*`` is infinite for large ``v``.
    grid : ConjugationGrid or array_like of u, optional
        Sampling of ``phi`` for closed-form entries.  Ignored for tabulated
        input, whose own nodes are used.
    v_grid : array_like, optional
        Output nodes.  By default the nodes are the slopes ``phi'(u_k)``
        where the conjugate is known exactly; with ``v_grid`` the result
        interpolates the discrete supremum over the sampled ``u``.

    Returns
    -------
    TabulatedConvex
        Convex, nondecreasing, zero at zero.
    """
    if not phi.coercive:
        raise InputError(f"{phi.name} is not coercive: its conjugate is infinite for large v")
    if isinstance(phi, TabulatedConvex):
        tab = phi
        log_v, log_val = _tabulated_conjugate_nodes(phi)
        head = _dual_exponent(phi.head_exponent)
    else:
        if grid is None:
            grid = DEFAULT_GRID
        if isinstance(grid, ConjugationGrid):
            s = grid.log_nodes(phi.breakpoints)
        else:
            u = np.asarray(grid, dtype=float)
            if u.ndim != 1 or u.size == 0:
                raise InputError("conjugation grid must be a non-empty 1-d sequence")
            if np.any(u <= 0) or np.any(np.diff(u) <= 0):
                raise InputError("conjugation grid must be positive and strictly increasing")
            s = np.log(u)
        tab = None
        log_v, log_val = _catalog_conjugate_nodes(phi, s)
        # phi ~ u**p below the grid gives phi* ~ v**(p/(p-1)) below its first node
        head = _dual_exponent(1.0 + float(phi.kappa(s[0])))
    if v_grid is not None:
        v = np.asarray(v_grid, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise InputError("v grid must be a non-empty 1-d sequence")
        if np.any(v <= 0) or np.any(np.diff(v) <= 0):
            raise InputError("v grid must be positive and strictly increasing")
        if tab is None:
            # discrete sup over the sampled u
            tab = TabulatedConvex(s, phi.log_value(s), coercive=True, check=False)
        log_val = legendre_sweep(tab, v)
        log_v = np.log(v)
        head = "linear"
    if log_v.size == 0:
        raise InputError("conjugate has no nodes (grid too small)")
    label = getattr(phi, "label", None) if isinstance(phi, TabulatedConvex) else None
    name = label or phi.name
    return TabulatedConvex(log_v, log_val, coercive=True, check=check,
                           label=f"conjugate:{name}", head=head)


def fenchel_young_gap(phi: OrliczFunction, phistar: OrliczFunction, u, v):
    """``phi(u) + phi*(v) - u v``; nonnegative up to rounding when ``phistar`` is the conjugate."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    out = phi.value(u) + phistar.value(v) - u * v
    return float(out) if np.ndim(out) == 0 else out
