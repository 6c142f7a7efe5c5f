"""Descriptor parsing and JSON helpers shared by the library and the CLI.

Textual descriptors accept three forms: a path to a ``.json``/``.csv``
file, a JSON literal, or a shorthand ``name:key=value,key=value`` where
list values are separated by ``|``.  Examples::

    power:p=2
    conjugate:example55
    valle_poussin_sum:thresholds=0|1|2|4
    Orlicz:phi_r:r=1
    LorentzP1:p=2&L1            (intersection)
    spike_train:n=4,h=2,w=0.25
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import InputError
from .orlicz.conjugate import conjugate
from .orlicz.functions import ALIASES, CATALOG, OrliczFunction, TabulatedConvex, make_catalog

# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite floats become the strings ``inf``/``-inf``/``nan``."""
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _read_json_text(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _load_path_or_literal(text: str):
    """Return ('json', data), ('csv', path) or ('shorthand', text)."""
    t = text.strip()
    if t[:1] in "[{":
        return "json", _read_json_text(t)
    p = Path(t)
    if p.suffix.lower() in (".json", ".csv"):
        if not p.is_file():
            raise InputError(f"no such file: {t}")
        if p.suffix.lower() == ".csv":
            return "csv", p
        return "json", _read_json_text(p.read_text(encoding="utf-8"))
    return "shorthand", t


def _parse_value(v: str):
    if "|" in v:
        return [_parse_value(x) for x in v.split("|") if x != ""]
    try:
        x = float(v)
    except ValueError:
        return v
    return int(x) if x.is_integer() and "." not in v and "e" not in v.lower() else x


def parse_params(text: str) -> dict:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise InputError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _parse_value(v.strip())
    return out


# ---------------------------------------------------------------------------
# Orlicz functions
# ---------------------------------------------------------------------------


def function_from_descriptor(d) -> OrliczFunction:
    """Build an Orlicz function from a descriptor record or text."""
    if isinstance(d, OrliczFunction):
        return d
    if isinstance(d, str):
        return parse_function(d)
    if not isinstance(d, dict) or "name" not in d:
        raise InputError(f"function descriptor needs a 'name': {d!r}")
    name = d["name"]
    if name == "conjugate":
        inner = d.get("of")
        if inner is None:
            raise InputError("conjugate descriptor needs 'of'")
        return conjugate(function_from_descriptor(inner))
    if name == "tabulated":
        kw = dict(coercive=bool(d.get("coercive", True)),
                  extrapolate=bool(d.get("extrapolate", False)), label=d.get("label"))
        if "log_u" in d:
            lp = [-math.inf if x == "-inf" else float(x) for x in d["log_phi"]]
            return TabulatedConvex(d["log_u"], lp, head=d.get("head", "linear"), **kw)
        if "u" in d and "phi" in d:
            return TabulatedConvex.from_samples(
                d["u"], d["phi"], check_coverage=bool(d.get("check_coverage", True)), **kw)
        raise InputError("tabulated descriptor needs (u, phi) or (log_u, log_phi)")
    params = d.get("params", {}) or {}
    if not isinstance(params, dict):
        raise InputError("params must be a mapping")
    return make_catalog(name, **params)


def parse_function(text: str) -> OrliczFunction:
    kind, data = _load_path_or_literal(text)
    if kind == "json":
        return function_from_descriptor(data)
    if kind == "csv":
        return TabulatedConvex.from_csv(data)
    if data.startswith("conjugate:"):
        return conjugate(parse_function(data[len("conjugate:"):]))
    name, _, rest = data.partition(":")
    if name not in CATALOG and name not in ALIASES:
        raise InputError(f"unknown function {name!r}; known: {sorted(CATALOG)} or conjugate:<f>")
    return make_catalog(name, **parse_params(rest))


# ---------------------------------------------------------------------------
# norm specs, step functions, families
# ---------------------------------------------------------------------------


def parse_spec(text: str):
    from .norms import L1, LambdaW, LorentzP1, Lp, Orlicz, Intersection, spec_from_dict

    kind, data = _load_path_or_literal(text)
    if kind == "json":
        return spec_from_dict(data)
    if kind == "csv":
        raise InputError("norm specs are not CSV")
    if "&" in data:
        first, second = data.split("&", 1)
        return Intersection(parse_spec(first), parse_spec(second))
    tag, _, rest = data.partition(":")
    key = tag.lower()
    if key == "orlicz":
        return Orlicz(parse_function(rest))
    params = parse_params(rest)
    if key == "l1":
        return L1()
    if key == "lp":
        return Lp(float(params.get("p", 2.0)))
    if key in ("lorentzp1", "lorentz"):
        return LorentzP1(float(params.get("p", 2.0)))
    if key in ("lambdaw", "lambda"):
        return LambdaW(params or {"kind": "power", "p": 2.0})
    raise InputError(f"unknown norm {tag!r}")


def parse_step_function(text: str):
    from .stepfn import StepFunction

    kind, data = _load_path_or_literal(text)
    if kind == "json":
        return StepFunction.from_json(data)
    if kind == "csv":
        return StepFunction.from_csv(data)
    raise InputError("step functions are given as a JSON array or a .json/.csv file")


def parse_family(text: str, seed: int | None = None):
    from .stepfn import disjoint_family, family_from_json, random_shared

    kind, data = _load_path_or_literal(text)
    if kind == "json":
        return family_from_json(data)
    if kind == "csv":
        raise InputError("families are given as JSON or a generator shorthand")
    name, _, rest = data.partition(":")
    params = parse_params(rest)
    n = int(params.pop("n", 1))
    if name == "random_shared":
        if seed is not None:
            params.setdefault("seed", seed)
        return random_shared(n, **params)
    return disjoint_family(name, n, **params)
