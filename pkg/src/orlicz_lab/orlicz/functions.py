"""Orlicz functions: closed-form catalog entries and tabulated convex samples.

All functions expose log coordinates: ``log_value(s) = ln phi(e**s)`` and
``log_derivative(s) = ln phi'(e**s +)``.  Growth questions at infinity are
asked far beyond the float range of ``u`` itself (``s`` of several
thousand), so everything downstream of this module works on ``s``.

``kappa(s) = u phi'(u) / phi(u) - 1`` is exposed separately because the
conjugate value ``u phi'(u) - phi(u) = phi(u) kappa(u)`` is otherwise a
catastrophic cancellation for nearly linear functions.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import DomainError, ExtrapolationError, InputError

LN10 = math.log(10.0)
LN2 = math.log(2.0)

# Relative slack for convexity / monotonicity checks on tabulated data.
CONVEXITY_RTOL = 1e-9


def _as_array(x):
    return np.asarray(x, dtype=float)


def _scalar_or_array(out, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


class OrliczFunction:
    """Convex nondecreasing ``phi`` on ``[0, inf)`` with ``phi(0) = 0``.

    Subclasses implement :meth:`log_value` and either :meth:`kappa` or
    :meth:`log_derivative`; the other one is derived.
    """

    name: str = "orlicz"
    coercive: bool = True
    # ln of the largest admissible u (inf for closed forms).
    log_u_max: float = math.inf
    extrapolate: bool = False

    # -- log-coordinate primitives -------------------------------------
    def log_value(self, s):
        raise NotImplementedError

    def kappa(self, s):
        s = _as_array(s)
        with np.errstate(invalid="ignore", over="ignore"):
            return np.expm1(s + self.log_derivative(s) - self.log_value(s))

    def log_derivative(self, s):
        s = _as_array(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.log_value(s) - s + np.log1p(self.kappa(s))

    # -- linear coordinates ---------------------------------------------
    def _check_u(self, u):
        u = _as_array(u)
        if np.any(np.isnan(u)) or np.any(u < 0):
            raise DomainError("Orlicz functions are defined on u >= 0")
        if not self.extrapolate and np.any(u > math.exp(min(self.log_u_max, 709.0)) * (1 + 1e-12)):
            if math.isfinite(self.log_u_max):
                raise ExtrapolationError(
                    f"u beyond the tabulated range (max {math.exp(self.log_u_max):.6g})"
                )
        return u

    def value(self, u):
        u = self._check_u(u)
        out = np.zeros_like(u)
        pos = u > 0
        with np.errstate(divide="ignore", over="ignore"):
            # an ulp past the last node (float round trips) counts as the node
            out[pos] = np.exp(self.log_value(np.minimum(np.log(u[pos]), self.log_u_max)))
        return _scalar_or_array(out, u)

    def derivative(self, u):
        """Right derivative ``phi'(u+)``."""
        u = self._check_u(u)
        out = np.full_like(u, self.derivative_at_zero())
        pos = u > 0
        with np.errstate(divide="ignore", over="ignore"):
            out[pos] = np.exp(self.log_derivative(np.log(u[pos])))
        return _scalar_or_array(out, u)

    def derivative_at_zero(self) -> float:
        return 0.0

    def __call__(self, u):
        return self.value(u)

    # -- metadata -------------------------------------------------------
    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Kinks (or curvature jumps) that sampling grids must contain."""
        return ()

    def descriptor(self) -> dict[str, Any]:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor()!r})"


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def _log_log1p_exp(s):
    """``ln(ln(1 + e**s))`` without overflow for large ``s``."""
    L = np.logaddexp(0.0, s)
    with np.errstate(divide="ignore"):
        return np.where(s < -700.0, s, np.log(L)), L


class CatalogEntry(OrliczFunction):
    """A named closed-form Orlicz function with real parameters."""

    params: dict[str, Any]

    def descriptor(self):
        return {"name": self.name, "params": dict(self.params)}

    def __eq__(self, other):
        return isinstance(other, CatalogEntry) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(self.descriptor()))


class Power(CatalogEntry):
    """``c u**p``; self-conjugate at ``p = 2, c = 1/2``."""

    name = "power"

    def __init__(self, p: float = 2.0, c: float = 1.0):
        if not p > 1:
            raise InputError(f"power needs p > 1, got {p}")
        if not c > 0:
            raise InputError(f"power needs c > 0, got {c}")
        self.p, self.c = float(p), float(c)
        self.params = {"p": self.p, "c": self.c}

    def log_value(self, s):
        return math.log(self.c) + self.p * _as_array(s)

    def kappa(self, s):
        return np.full_like(_as_array(s), self.p - 1.0)

    def value(self, u):
        u = self._check_u(u)
        return _scalar_or_array(self.c * u**self.p, u)


class QuadLog(CatalogEntry):
    """``u**2/2`` on ``[0, 1]`` and ``u ln u + 1/2`` beyond."""

    name = "example55"

    def __init__(self):
        self.params = {}

    @property
    def breakpoints(self):
        return (1.0,)

    def log_value(self, s):
        s = _as_array(s)
        em = np.exp(-np.abs(s))
        with np.errstate(divide="ignore", invalid="ignore"):
            big = s + np.log(np.maximum(s, 0.0) + 0.5 * em)
        return np.where(s <= 0, 2 * s - LN2, big)

    def kappa(self, s):
        s = _as_array(s)
        em = np.exp(-np.abs(s))
        with np.errstate(divide="ignore", invalid="ignore"):
            big = (1.0 - 0.5 * em) / (np.maximum(s, 0.0) + 0.5 * em)
        return np.where(s < 0, 1.0, big)

    def value(self, u):
        u = self._check_u(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(u <= 1, 0.5 * u * u, u * np.log(np.maximum(u, 1.0)) + 0.5)
        return _scalar_or_array(out, u)

    def derivative(self, u):
        u = self._check_u(u)
        out = np.where(u < 1, u, np.log(np.maximum(u, 1.0)) + 1.0)
        return _scalar_or_array(out, u)


class PhiR(CatalogEntry):
    """``u ln**r (1 + u)``, ``r > 0``."""

    name = "phi_r"

    def __init__(self, r: float = 1.0):
        if not r > 0:
            raise InputError(f"phi_r needs r > 0, got {r}")
        self.r = float(r)
        self.params = {"r": self.r}

    def log_value(self, s):
        s = _as_array(s)
        lnL, _ = _log_log1p_exp(s)
        return s + self.r * lnL

    def kappa(self, s):
        s = _as_array(s)
        _, L = _log_log1p_exp(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.exp(-np.logaddexp(0.0, -s))  # u / (1 + u)
            out = self.r * frac / L
        return np.where(s < -700.0, self.r, out)

    def value(self, u):
        u = self._check_u(u)
        return _scalar_or_array(u * np.log1p(u) ** self.r, u)


class PhiA(CatalogEntry):
    """``u sqrt(1 + a ln(1 + u))``, ``a > 0``."""

    name = "phi_a"

    def __init__(self, a: float = 1.0):
        if not a > 0:
            raise InputError(f"phi_a needs a > 0, got {a}")
        self.a = float(a)
        self.params = {"a": self.a}

    def log_value(self, s):
        s = _as_array(s)
        _, L = _log_log1p_exp(s)
        return s + 0.5 * np.log1p(self.a * L)

    def kappa(self, s):
        s = _as_array(s)
        _, L = _log_log1p_exp(s)
        frac = np.exp(-np.logaddexp(0.0, -s))
        return self.a * frac / (2.0 * (1.0 + self.a * L))

    def derivative_at_zero(self):
        return 1.0

    def value(self, u):
        u = self._check_u(u)
        return _scalar_or_array(u * np.sqrt(1.0 + self.a * np.log1p(u)), u)


class PhiB(CatalogEntry):
    """``u exp(sqrt(1 + b ln+ u))``, ``b > 0``.

    Linear (slope ``e``) on ``[0, 1]``, kink at ``u = 1``.
    """

    name = "phi_b"

    def __init__(self, b: float = 1.0):
        if not b > 0:
            raise InputError(f"phi_b needs b > 0, got {b}")
        self.b = float(b)
        self.params = {"b": self.b}

    @property
    def breakpoints(self):
        return (1.0,)

    def log_value(self, s):
        s = _as_array(s)
        return s + np.sqrt(1.0 + self.b * np.maximum(s, 0.0))

    def kappa(self, s):
        s = _as_array(s)
        return np.where(s < 0, 0.0, self.b / (2.0 * np.sqrt(1.0 + self.b * np.maximum(s, 0.0))))

    def derivative_at_zero(self):
        return math.e

    def value(self, u):
        u = self._check_u(u)
        with np.errstate(divide="ignore"):
            lnp = np.log(np.maximum(u, 1.0))
        return _scalar_or_array(u * np.exp(np.sqrt(1.0 + self.b * lnp)), u)


class LinearSpliced(CatalogEntry):
    """``u`` on ``[0, 1]``, ``u**2`` beyond; linear near zero, kink at 1."""

    name = "linear_spliced"

    def __init__(self):
        self.params = {}

    @property
    def breakpoints(self):
        return (1.0,)

    def log_value(self, s):
        s = _as_array(s)
        return np.where(s <= 0, s, 2 * s)

    def kappa(self, s):
        s = _as_array(s)
        return np.where(s < 0, 0.0, 1.0)

    def derivative_at_zero(self):
        return 1.0

    def value(self, u):
        u = self._check_u(u)
        return _scalar_or_array(np.where(u <= 1, u, u * u), u)

    def derivative(self, u):
        u = self._check_u(u)
        return _scalar_or_array(np.where(u < 1, 1.0, 2.0 * u), u)


class VallePoussinSum(CatalogEntry):
    """Finite truncation of ``sum_n (u - u_n)_+``.

    Thresholds must start at 0 and at least double from the second one on.
    The truncated sum is eventually linear, hence not coercive: slopes
    are certified only up to the last threshold.
    """

    name = "valle_poussin_sum"
    coercive = False

    def __init__(self, thresholds):
        t = np.asarray(thresholds, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise InputError("valle_poussin_sum needs at least 2 thresholds")
        if t[0] != 0.0:
            raise InputError("valle_poussin_sum needs u_1 = 0")
        if np.any(np.diff(t) < 0) or np.any(t < 0):
            raise InputError("thresholds must be nonnegative and nondecreasing")
        # u_{n+1} >= 2 u_n for n >= 2 (1-based)
        if np.any(t[2:] < 2.0 * t[1:-1]):
            raise InputError("threshold spacing rule u_{n+1} >= 2 u_n violated")
        self.thresholds = t
        self.params = {"thresholds": [float(x) for x in t]}

    @property
    def breakpoints(self):
        return tuple(float(x) for x in self.thresholds if x > 0)

    def log_value(self, s):
        s = _as_array(s)
        t = self.thresholds
        # phi(u) = u * sum_n (1 - u_n / u)_+
        with np.errstate(over="ignore"):
            w = np.exp(-s)[..., None] * t
        inner = np.clip(1.0 - w, 0.0, None).sum(axis=-1)
        with np.errstate(divide="ignore"):
            return s + np.log(inner)

    def kappa(self, s):
        s = _as_array(s)
        u_shape = s.shape
        with np.errstate(over="ignore"):
            w = np.exp(-s)[..., None] * self.thresholds
        active = (w <= 1.0).sum(axis=-1)
        inner = np.clip(1.0 - w, 0.0, None).sum(axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (active / inner - 1.0).reshape(u_shape)

    def derivative_at_zero(self):
        return float(np.sum(self.thresholds == 0.0))

    def value(self, u):
        u = self._check_u(u)
        out = np.clip(u[..., None] - self.thresholds, 0.0, None).sum(axis=-1)
        return _scalar_or_array(out, u)

    def derivative(self, u):
        u = self._check_u(u)
        out = (u[..., None] >= self.thresholds).sum(axis=-1).astype(float)
        return _scalar_or_array(out, u)


CATALOG: dict[str, type[CatalogEntry]] = {
    cls.name: cls
    for cls in (Power, QuadLog, PhiR, PhiA, PhiB, LinearSpliced, VallePoussinSum)
}
ALIASES = {"quad_log": "example55"}


def make_catalog(name: str, **params) -> CatalogEntry:
    try:
        cls = CATALOG[ALIASES.get(name, name)]
    except KeyError:
        raise InputError(f"unknown catalog entry {name!r}; known: {sorted(CATALOG)}") from None
    try:
        return cls(**params)
    except TypeError as exc:
        raise InputError(f"bad parameters for {name}: {exc}") from None


# ---------------------------------------------------------------------------
# tabulated
# ---------------------------------------------------------------------------


def log_chord_slopes(s, l):
    """ln of the chord slopes between consecutive log-nodes.

    ``s`` must be strictly increasing; ``l`` may contain ``-inf`` (zero
    values).  Returns ``-inf`` for flat chords and ``nan`` where the
    values decrease.
    """
    s, l = _as_array(s), _as_array(l)
    ds = np.diff(s)
    with np.errstate(divide="ignore", invalid="ignore"):
        dl = l[:-1] - l[1:]
        num = l[1:] + np.log(-np.expm1(dl))
        den = s[1:] + np.log(-np.expm1(-ds))
        out = num - den
    out = np.where(np.isneginf(l[1:]), -np.inf, out)
    return out


class TabulatedConvex(OrliczFunction):
    """Piecewise-linear interpolant of convex samples, stored in logs.

    The origin ``(0, 0)`` is an implicit node, so the domain is
    ``[0, u_max]`` (``[0, inf)`` with ``extrapolate=True``, continuing with
    the last chord slope).

    Parameters
    ----------
    log_u, log_phi : array_like
        Node coordinates ``ln u_k`` (strictly increasing, finite) and
        ``ln phi(u_k)`` (nondecreasing; ``-inf`` encodes a zero value).
    coercive : bool
        Caller's claim that ``phi(u)/u -> inf``; conjugation requires it.
    check : bool
        Verify monotonicity and convexity (relative slack 1e-9).
    head : "linear", "power" or float
        Below the first node: the chord from the origin, or the power law
        ``phi_0 (u/u_0)**q``.  ``"power"`` fits ``q`` through the first two
        nodes; a float gives ``q`` directly.  The head stays convex as long
        as ``q`` does not exceed the log-slope of the first segment.
    """

    name = "tabulated"

    def __init__(self, log_u, log_phi, *, coercive=True, extrapolate=False,
                 check=True, label=None, head="linear"):
        s = np.array(log_u, dtype=float)
        l = np.array(log_phi, dtype=float)
        if s.ndim != 1 or s.shape != l.shape:
            raise InputError("log_u and log_phi must be 1-d arrays of equal length")
        if s.size < 1:
            raise InputError("tabulated function needs at least one node")
        if not np.all(np.isfinite(s)) or np.any(np.diff(s) <= 0):
            raise InputError("u nodes must be finite, positive and strictly increasing")
        if np.any(np.isnan(l)) or np.any(np.isposinf(l)):
            raise InputError("phi values must be finite")
        ls = np.concatenate([[l[0] - s[0]], log_chord_slopes(s, l)])
        if check:
            if np.any(np.diff(l) < -CONVEXITY_RTOL * np.maximum(1.0, np.abs(l[1:]))):
                raise InputError("tabulated phi must be nondecreasing")
            finite = ls[np.isfinite(ls)]
            if np.any(np.isnan(ls)) or np.any(np.diff(finite) < math.log1p(-CONVEXITY_RTOL)):
                raise InputError("tabulated phi is not convex (chord slopes decrease)")
            if np.any(np.isneginf(ls)) and np.any(np.diff(np.isneginf(ls).astype(int)) > 0):
                raise InputError("tabulated phi is not convex (flat after increasing)")
        ls = np.where(np.isnan(ls), -np.inf, ls)
        q0 = 1.0
        if isinstance(head, str):
            if head not in ("linear", "power"):
                raise InputError("head must be 'linear', 'power' or an exponent")
            if head == "power" and s.size >= 2 and np.all(np.isfinite(l[:2])):
                q0 = max(1.0, float((l[1] - l[0]) / (s[1] - s[0])))
        else:
            q0 = float(head)
            if not q0 >= 1.0 or not math.isfinite(q0):
                raise InputError("head exponent must be finite and >= 1")
            if not np.isfinite(l[0]):
                q0 = 1.0
            elif s.size >= 2 and np.isfinite(l[1]):
                q0 = min(q0, max(1.0, float((l[1] - l[0]) / (s[1] - s[0]))))
        if q0 > 1.0:
            ls[0] = math.log(q0) + l[0] - s[0]  # left derivative at the first node
        self._q0 = q0
        self.head = q0 if q0 > 1.0 else "linear"
        # float noise may make chords dip by an ulp; keep them monotone
        self._ls = np.maximum.accumulate(ls)
        self._s, self._l = s, l
        s.flags.writeable = False
        l.flags.writeable = False
        self.coercive = bool(coercive)
        self.extrapolate = bool(extrapolate)
        self.log_u_max = math.inf if extrapolate else float(s[-1])
        self.label = label

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_samples(cls, u, phi, *, coercive=True, extrapolate=False,
                     check_coverage=True, grid_min=1e-6, grid_max=1e6, label=None):
        """Build from linear ``(u, phi(u))`` pairs.

        A leading ``u = 0`` node must carry ``phi = 0`` and is dropped (the
        origin is implicit).  With ``check_coverage`` the grid must have at
        least three points and reach ``grid_min`` and ``grid_max``.
        """
        u = np.asarray(u, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if u.ndim != 1 or u.shape != phi.shape:
            raise InputError("u and phi must be 1-d arrays of equal length")
        if check_coverage and u.size < 3:
            raise InputError("tabulated grids need at least 3 points")
        if np.any(phi < 0):
            raise InputError("phi must be nonnegative")
        if u.size and u[0] == 0.0:
            if phi[0] != 0.0:
                raise InputError("phi(0) must be 0")
            u, phi = u[1:], phi[1:]
        if np.any(u <= 0):
            raise InputError("u grid must be strictly increasing and start at u >= 0")
        if check_coverage and (u[0] > grid_min * (1 + 1e-9) or u[-1] < grid_max * (1 - 1e-9)):
            raise InputError(
                f"tabulated grid must cover [{grid_min:g}, {grid_max:g}]; "
                f"got [{u[0]:g}, {u[-1]:g}] (pass check_coverage=False to override)"
            )
        with np.errstate(divide="ignore"):
            return cls(np.log(u), np.log(phi), coercive=coercive,
                       extrapolate=extrapolate, label=label)

    @classmethod
    def from_csv(cls, path, **kwargs):
        """Two-column CSV ``u,phi`` (an optional header row is skipped)."""
        rows = []
        with open(path, newline="", encoding="utf-8") as handle:
            for row in csv.reader(handle):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if rows:
                        raise InputError(f"malformed CSV row {row!r} in {path}") from None
        if not rows:
            raise InputError(f"no data rows in {path}")
        u, phi = np.array(rows).T
        kwargs.setdefault("label", Path(path).name)
        return cls.from_samples(u, phi, **kwargs)

    def to_csv(self, path):
        u, phi = self.nodes()
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["u", "phi"])
            writer.writerow([0.0, 0.0])
            for a, b in zip(u, phi):
                writer.writerow([repr(float(a)), repr(float(b))])

    # -- data -----------------------------------------------------------
    @property
    def log_nodes(self):
        return self._s, self._l

    @property
    def log_slopes(self):
        """ln of chord slopes; entry k ends at node k (entry 0 starts at 0)."""
        return self._ls

    def nodes(self):
        with np.errstate(over="ignore"):
            return np.exp(self._s), np.exp(self._l)

    def __len__(self):
        return self._s.size

    # -- evaluation -----------------------------------------------------
    def log_value(self, x):
        x = _as_array(x)
        s, l, ls = self._s, self._l, self._ls
        n = s.size
        if np.any(np.isnan(x)):
            raise DomainError("nan argument")
        if not self.extrapolate and np.any(x > s[-1]):
            raise ExtrapolationError(
                f"ln u = {float(np.max(x)):.6g} beyond tabulated range {s[-1]:.6g}"
            )
        idx = np.searchsorted(s, x, side="right")
        i = np.clip(idx - 1, 0, n - 1)
        j = np.clip(idx, 0, n - 1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            # interior: phi = (1-w) phi_i + w phi_j with w = (u-u_i)/(u_j-u_i)
            gap = np.log(-np.expm1(s[i] - s[j]))
            log_w = (x - s[j]) + np.log(-np.expm1(s[i] - x)) - gap
            log_1mw = np.log(-np.expm1(x - s[j])) - gap
            inner = np.logaddexp(l[i] + log_1mw, l[j] + log_w)
            head = l[0] + self._q0 * (x - s[0])
            tail = np.logaddexp(l[-1], ls[-1] + s[-1] + np.log(np.expm1(x - s[-1])))
        out = np.where(idx == 0, head, np.where(idx >= n, tail, inner))
        out = np.where(x == s[-1], l[-1], out)
        on_node = (idx > 0) & (x == s[i])
        out = np.where(on_node, l[i], out)
        return out

    def log_derivative(self, x):
        x = _as_array(x)
        s, ls = self._s, self._ls
        if not self.extrapolate and np.any(x >= s[-1]):
            raise ExtrapolationError(
                "right derivative at or beyond the last node needs extrapolation"
            )
        idx = np.searchsorted(s, x, side="right")
        out = ls[np.minimum(idx, s.size - 1)]
        if self._q0 > 1.0:
            out = np.where(idx == 0, ls[0] + (self._q0 - 1.0) * (x - s[0]), out)
        return out

    def derivative_at_zero(self):
        return 0.0 if self._q0 > 1.0 else float(np.exp(self._ls[0]))

    @property
    def head_exponent(self) -> float:
        return self._q0

    def descriptor(self):
        d = {
            "name": self.name,
            "log_u": [float(v) for v in self._s],
            "log_phi": [float(v) if np.isfinite(v) else "-inf" for v in self._l],
            "coercive": self.coercive,
            "extrapolate": self.extrapolate,
            "head": self.head,
        }
        if self.label is not None:
            d["label"] = self.label
        return d

    def __repr__(self):
        lo, hi = math.exp(self._s[0]), self._s[-1]
        return (f"TabulatedConvex(n={self._s.size}, u_min={lo:.3g}, "
                f"ln u_max={hi:.6g}, label={self.label!r})")


# ---------------------------------------------------------------------------
# public ops
# ---------------------------------------------------------------------------


def evaluate(phi: OrliczFunction, u):
    """``phi(u)``: closed form for catalog entries, linear interpolation for tables."""
    return phi.value(u)


def right_derivative(phi: OrliczFunction, u):
    """``phi'(u+)``; for tables the slope of the segment starting at ``u``."""
    return phi.derivative(u)
