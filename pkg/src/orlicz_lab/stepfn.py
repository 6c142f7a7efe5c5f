"""Step functions on a nonatomic measure space.

A :class:`StepFunction` is a finite list of blocks ``(value, weight)``
living on pairwise disjoint cells of finite measure; everything else is
an implicit zero remainder of infinite measure.  Cells carry hashable
``keys`` so that several functions can share cells (products,
restrictions, families on common blocks) or avoid each other
(disjoint families).  Only measures matter for rearrangement-invariant
computations, so no coordinates are stored.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import InputError


def _freeze(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Finite weighted blocks; ``keys`` name the cells (default: positions)."""

    values: np.ndarray
    weights: np.ndarray
    keys: tuple = None

    def __post_init__(self):
        v, w = _freeze(self.values), _freeze(self.weights)
        if v.ndim != 1 or v.shape != w.shape:
            raise InputError("values and weights must be 1-d and of equal length")
        if not np.all(np.isfinite(v)):
            raise InputError("block values must be finite")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InputError("block weights must be positive and finite")
        keys = tuple(range(v.size)) if self.keys is None else tuple(self.keys)
        if len(keys) != v.size:
            raise InputError("one key per block required")
        if len(set(keys)) != len(keys):
            raise InputError("block keys must be distinct (cells are disjoint)")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "keys", keys)

    # -- construction ---------------------------------------------------
    @classmethod
    def from_blocks(cls, blocks: Iterable[Sequence[float]], keys=None) -> "StepFunction":
        blocks = list(blocks)
        if not blocks:
            return cls.zero()
        v, w = zip(*((b[0], b[1]) for b in blocks))
        return cls(v, w, keys)

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls(np.zeros(0), np.zeros(0), ())

    @classmethod
    def indicator(cls, weight: float, key: Hashable = 0) -> "StepFunction":
        return cls([1.0], [weight], (key,))

    # -- views ----------------------------------------------------------
    def __len__(self):
        return self.values.size

    @property
    def blocks(self) -> list[tuple[float, float]]:
        return list(zip(self.values.tolist(), self.weights.tolist()))

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @property
    def support_weight(self) -> float:
        return float(self.weights[self.values != 0].sum())

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self) else 0.0

    def is_zero(self) -> bool:
        return not np.any(self.values != 0)

    def key_index(self) -> dict:
        return {k: i for i, k in enumerate(self.keys)}

    def __eq__(self, other):
        return (isinstance(other, StepFunction) and self.keys == other.keys
                and np.array_equal(self.values, other.values)
                and np.array_equal(self.weights, other.weights))

    def __hash__(self):
        return hash((self.keys, self.values.tobytes(), self.weights.tobytes()))

    def __repr__(self):
        return f"StepFunction({self.blocks!r})"

    # -- arithmetic -----------------------------------------------------
    def __mul__(self, c):
        if isinstance(c, StepFunction):
            return product(self, c)
        return StepFunction(self.values * float(c), self.weights, self.keys)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return StepFunction(self.values / float(c), self.weights, self.keys)

    def __neg__(self):
        return self * -1.0

    def __abs__(self):
        return StepFunction(np.abs(self.values), self.weights, self.keys)

    def __add__(self, other):
        return combine([self, other], [1.0, 1.0])

    def __sub__(self, other):
        return combine([self, other], [1.0, -1.0])

    def map_values(self, fn: Callable[[np.ndarray], np.ndarray]) -> "StepFunction":
        return StepFunction(fn(self.values), self.weights, self.keys)

    # -- serialization ------------------------------------------------
    def to_json(self) -> list:
        positional = self.keys == tuple(range(len(self)))
        if positional:
            return [[float(v), float(w)] for v, w in self.blocks]
        return [[float(v), float(w), _key_json(k)] for v, w, k in
                zip(self.values, self.weights, self.keys)]

    @classmethod
    def from_json(cls, data) -> "StepFunction":
        if isinstance(data, dict):
            data = data.get("blocks", data)
        if not isinstance(data, list):
            raise InputError("step function JSON must be an array of [value, weight] rows")
        rows = []
        for row in data:
            if isinstance(row, dict):
                rows.append((row["value"], row["weight"], row.get("key")))
            elif isinstance(row, (list, tuple)) and len(row) in (2, 3):
                rows.append((row[0], row[1], row[2] if len(row) == 3 else None))
            else:
                raise InputError(f"bad step function row {row!r}")
        if not rows:
            return cls.zero()
        keys = [r[2] for r in rows]
        keys = None if all(k is None for k in keys) else [_key_from_json(k) for k in keys]
        try:
            return cls([float(r[0]) for r in rows], [float(r[1]) for r in rows], keys)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad step function data: {exc}") from None

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["value", "weight"])
            for v, w in self.blocks:
                writer.writerow([repr(v), repr(w)])

    @classmethod
    def from_csv(cls, path) -> "StepFunction":
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
        return cls.from_blocks(rows)


def _key_json(k):
    return list(map(_key_json, k)) if isinstance(k, tuple) else k


def _key_from_json(k):
    return tuple(map(_key_from_json, k)) if isinstance(k, list) else k


@dataclass(frozen=True)
class BlockSet:
    """A measurable set made of whole cells, plus optional remainder measure."""

    keys: frozenset = field(default_factory=frozenset)
    extra_weight: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "keys", frozenset(self.keys))
        if not self.extra_weight >= 0:
            raise InputError("extra weight must be nonnegative")

    @classmethod
    def of(cls, *keys, extra_weight=0.0):
        return cls(frozenset(keys), extra_weight)

    @classmethod
    def all_of(cls, f: StepFunction):
        return cls(frozenset(f.keys))

    def measure(self, f: StepFunction) -> float:
        idx = f.key_index()
        return float(sum(f.weights[idx[k]] for k in self.keys if k in idx)) + self.extra_weight

    def __le__(self, other: "BlockSet"):
        return self.keys <= other.keys and self.extra_weight <= other.extra_weight

    def __contains__(self, key):
        return key in self.keys

    def __len__(self):
        return len(self.keys)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def normalize(f: StepFunction) -> StepFunction:
    """Canonical form: zero-valued blocks dropped, order kept."""
    nz = f.values != 0
    if nz.all():
        return f
    return StepFunction(f.values[nz], f.weights[nz], tuple(k for k, m in zip(f.keys, nz) if m))


def distribution(f: StepFunction, lam: float) -> float:
    """``d_f(lam) = m{|f| > lam}`` (strict, hence right-continuous)."""
    if lam < 0:
        raise InputError("lambda must be nonnegative")
    return float(f.weights[np.abs(f.values) > lam].sum())


def rearrangement(f: StepFunction) -> StepFunction:
    """Nonincreasing rearrangement ``f*`` as blocks on ``[0, m(supp f))``.

    Blocks are sorted by decreasing ``|value|`` (stable) and equal values
    merged; the result has positional keys and strictly decreasing values.
    """
    a = np.abs(f.values)
    nz = a > 0
    a, w = a[nz], f.weights[nz]
    if a.size == 0:
        return StepFunction.zero()
    order = np.argsort(-a, kind="stable")
    a, w = a[order], w[order]
    start = np.flatnonzero(np.concatenate([[True], a[1:] != a[:-1]]))
    return StepFunction(a[start], np.add.reduceat(w, start))


def truncate_above(f: StepFunction, gamma: float) -> StepFunction:
    """``f 1{|f| > gamma}``."""
    if gamma < 0:
        raise InputError("gamma must be nonnegative")
    keep = np.abs(f.values) > gamma
    return StepFunction(f.values[keep], f.weights[keep],
                        tuple(k for k, m in zip(f.keys, keep) if m))


def restrict(f: StepFunction, A: BlockSet, strict: bool = True) -> StepFunction:
    """``f 1_A``.  With ``strict``, every key of ``A`` must be a cell of ``f``."""
    idx = f.key_index()
    if strict:
        missing = [k for k in A.keys if k not in idx]
        if missing:
            raise InputError(f"block set refers to cells not in f: {missing[:5]!r}")
    keep = np.array([k in A.keys for k in f.keys], dtype=bool)
    return StepFunction(f.values[keep], f.weights[keep],
                        tuple(k for k, m in zip(f.keys, keep) if m))


def split(f: StepFunction, parts: int, key=None) -> StepFunction:
    """Cut one cell (or all, when ``key`` is None) into ``parts`` equal cells keyed ``(k, j)``."""
    if parts < 1:
        raise InputError("parts must be at least 1")
    vals, wts, keys = [], [], []
    for v, w, k in zip(f.values, f.weights, f.keys):
        if key is None or k == key:
            vals += [v] * parts
            wts += [w / parts] * parts
            keys += [(k, j) for j in range(parts)]
        else:
            vals.append(v)
            wts.append(w)
            keys.append(k)
    if key is not None and key not in f.keys:
        raise InputError(f"no cell {key!r} in f")
    return StepFunction(vals, wts, keys)


def _union(fs: Sequence[StepFunction]):
    weights: dict = {}
    order: list = []
    for f in fs:
        for k, w in zip(f.keys, f.weights):
            if k in weights:
                if not np.isclose(weights[k], w, rtol=1e-12, atol=0):
                    raise InputError(f"cell {k!r} has inconsistent weights {weights[k]} and {w}")
            else:
                weights[k] = float(w)
                order.append(k)
    return order, weights


def combine(fs: Sequence[StepFunction], coeffs: Sequence[float]) -> StepFunction:
    """``sum_i c_i f_i`` over the union of cells (shared cells must agree in measure)."""
    if len(fs) != len(coeffs):
        raise InputError("one coefficient per function required")
    order, weights = _union(fs)
    pos = {k: i for i, k in enumerate(order)}
    vals = np.zeros(len(order))
    for f, c in zip(fs, coeffs):
        for k, v in zip(f.keys, f.values):
            vals[pos[k]] += float(c) * v
    return StepFunction(vals, [weights[k] for k in order], order)


def product(f: StepFunction, g: StepFunction) -> StepFunction:
    """Pointwise product; cells present in only one factor vanish."""
    gi = g.key_index()
    vals, wts, keys = [], [], []
    for v, w, k in zip(f.values, f.weights, f.keys):
        if k in gi:
            j = gi[k]
            if not np.isclose(g.weights[j], w, rtol=1e-12, atol=0):
                raise InputError(f"cell {k!r} has inconsistent weights")
            vals.append(v * g.values[j])
            wts.append(w)
            keys.append(k)
    return StepFunction(vals, wts, keys) if keys else StepFunction.zero()


def compose(f: StepFunction, fn) -> StepFunction:
    """``fn(|f|)`` cellwise; ``fn`` is an Orlicz function or a vectorized callable."""
    a = np.abs(f.values)
    out = fn.value(a) if hasattr(fn, "value") else fn(a)
    return StepFunction(np.asarray(out, dtype=float).reshape(a.shape), f.weights, f.keys)


def dominated(f: StepFunction, g: StepFunction) -> bool:
    """``|f| <= |g|`` everywhere (cells of ``f`` missing from ``g`` count as ``g = 0``)."""
    gi = g.key_index()
    for v, k in zip(f.values, f.keys):
        gv = abs(g.values[gi[k]]) if k in gi else 0.0
        if abs(v) > gv:
            return False
    return True


def are_disjoint(fs: Sequence[StepFunction]) -> bool:
    """Supports (nonzero cells) pairwise disjoint."""
    seen: set = set()
    for f in fs:
        ks = {k for k, v in zip(f.keys, f.values) if v != 0}
        if ks & seen:
            return False
        seen |= ks
    return True


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _geometric(base, n, what):
    if isinstance(base, (list, tuple, np.ndarray)):
        seq = [float(x) for x in base]
        if len(seq) < n:
            raise InputError(f"need {n} {what} values, got {len(seq)}")
        return seq[:n]
    return [float(base) ** k for k in range(1, n + 1)]


def indicator_train(n: int, weight: float = 1.0) -> list[StepFunction]:
    """Indicators of ``n`` disjoint cells of measure ``weight`` (cells ``[k, k+1)``)."""
    return [StepFunction([1.0], [weight], (k,)) for k in range(n)]


def spike_train(n: int, h=2.0, w=0.25) -> list[StepFunction]:
    """Member ``k`` (from 1) is ``h_k`` on a cell of measure ``w_k``.

    ``h`` and ``w`` are either ratios (``h_k = h**k``) or explicit lists.
    """
    hs, ws = _geometric(h, n, "height"), _geometric(w, n, "weight")
    return [StepFunction([hk], [wk], (k,)) for k, (hk, wk) in enumerate(zip(hs, ws))]


def mixed(n: int, h=2.0, w=0.25, flat_value=1.0, flat_weight=1.0) -> list[StepFunction]:
    """Spike plus flat part per member, on cells ``(k, "spike")`` and ``(k, "flat")``."""
    hs, ws = _geometric(h, n, "height"), _geometric(w, n, "weight")
    fv = [float(flat_value)] * n if np.isscalar(flat_value) else list(flat_value)
    fw = [float(flat_weight)] * n if np.isscalar(flat_weight) else list(flat_weight)
    return [StepFunction([hk, fv[k]], [wk, fw[k]], ((k, "spike"), (k, "flat")))
            for k, (hk, wk) in enumerate(zip(hs, ws))]


GENERATORS: dict[str, Callable[..., list[StepFunction]]] = {
    "indicator_train": indicator_train,
    "spike_train": spike_train,
    "mixed": mixed,
}


def disjoint_family(name: str, n: int, **params: Any) -> list[StepFunction]:
    """``n`` functions with pairwise disjoint cells from a named generator."""
    if n < 1:
        raise InputError("family size must be at least 1")
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise InputError(f"unknown generator {name!r}; known: {sorted(GENERATORS)}") from None
    try:
        return gen(n, **params)
    except TypeError as exc:
        raise InputError(f"bad generator parameters for {name}: {exc}") from None


def random_step(rng: np.random.Generator, n_blocks: int = 5, *, signed: bool = True,
                max_value: float = 10.0, max_weight: float = 2.0, integer_values=False) -> StepFunction:
    """A random step function with positional keys."""
    vals = rng.uniform(-max_value if signed else 0.0, max_value, n_blocks)
    if integer_values:
        vals = np.round(vals)
    wts = rng.uniform(0.05, max_weight, n_blocks)
    return StepFunction(vals, wts)


def random_shared(n: int, n_blocks: int = 8, seed: int = 0, signed: bool = True) -> list[StepFunction]:
    """``n`` random functions on one common set of cells ``0..n_blocks-1``."""
    rng = np.random.default_rng(seed)
    wts = rng.uniform(0.05, 1.0, n_blocks)
    lo = -1.0 if signed else 0.0
    return [StepFunction(rng.uniform(lo, 1.0, n_blocks) * 5.0, wts) for _ in range(n)]


def family_to_json(fs: Sequence[StepFunction]) -> list:
    return [f.to_json() for f in fs]


def family_from_json(data) -> list[StepFunction]:
    if isinstance(data, dict) and "generator" in data:
        params = dict(data.get("params", {}))
        return disjoint_family(data["generator"], int(data.get("n", params.pop("n", 1))), **params)
    if isinstance(data, dict) and "members" in data:
        data = data["members"]
    if not isinstance(data, list):
        raise InputError("family JSON must be a list of step functions or a generator record")
    return [StepFunction.from_json(m) for m in data]


def load_json(path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
