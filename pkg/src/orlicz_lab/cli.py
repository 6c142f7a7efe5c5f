"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import io as _stdio
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .compactness import (
    indicator_counterexample,
    disjoint_l1_lower_constant,
    equi_integrability_profile,
    halving_sets,
    tail_profile,
    thresholds_from_tail_profile,
    valle_poussin_construct,
    valle_poussin_verify,
)
from .errors import InputError, NumericError
from .multipliers import default_tail_sets, multiplier_norm_estimate, multiplier_oc_profile
from .norms import norm
from .orlicz import (
    delta0_verdict,
    delta2_verdict,
    growth_indices,
    index_duality_residual,
    simonenko_ratio_criterion,
)
from .orlicz.conjugate import conjugate
from .orlicz.functions import TabulatedConvex

FORMATS = ("json", "csv")
MODES = ("equi", "tail", "vp", "l1const", "remark33", "counterexample")

CATALOG_LISTING = [
    {"name": "power", "params": {"p": "p > 1", "c": "c > 0 (default 1)"},
     "formula": "c u^p", "conjugate": "(p-1) c (u/(c p))^{p/(p-1)}"},
    {"name": "example55", "aliases": ["quad_log"], "params": {},
     "formula": "u^2/2 for u <= 1; u ln u + 1/2 for u > 1",
     "conjugate": "u^2/2 for u <= 1; e^{u-1} - 1/2 for u > 1"},
    {"name": "phi_r", "params": {"r": "r > 0"}, "formula": "u ln^r(1 + u)", "conjugate": None},
    {"name": "phi_a", "params": {"a": "a > 0"}, "formula": "u sqrt(1 + a ln(1 + u))",
     "conjugate": None},
    {"name": "phi_b", "params": {"b": "b > 0"}, "formula": "u exp(sqrt(1 + b ln+ u))",
     "conjugate": None},
    {"name": "linear_spliced", "params": {}, "formula": "u for u <= 1; u^2 for u > 1",
     "conjugate": "0 for u <= 1; u - 1 for 1 < u <= 2; u^2/4 for u > 2"},
    {"name": "valle_poussin_sum", "params": {"thresholds": "0 = u_1 <= u_2, u_{n+1} >= 2 u_n"},
     "formula": "sum_n (u - u_n)_+", "conjugate": None},
]


@dataclass
class RunConfig:
    command: str
    function: str | None = None
    spec: str | None = None
    target_spec: str | None = None
    family: str | None = None
    mode: str | None = None
    format: str = "json"
    seed: int = 0
    tol: float | None = None
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.format not in FORMATS:
            raise InputError(f"format must be one of {FORMATS}")
        if self.out is not None:
            parent = Path(self.out).resolve().parent
            if not parent.is_dir():
                raise InputError(f"output directory does not exist: {parent}")


def _require(value, flag):
    if value is None:
        raise InputError(f"{flag} is required for this command")
    return value


def _csv_text(header, rows) -> str:
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([io.jsonable(x) for x in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands; each returns (json payload, csv text)
# ---------------------------------------------------------------------------


def cmd_catalog(cfg: RunConfig):
    rows = [(e["name"], e["formula"], e["conjugate"] or "") for e in CATALOG_LISTING]
    return CATALOG_LISTING, _csv_text(["name", "formula", "conjugate"], rows)


def cmd_indices(cfg: RunConfig):
    phi = io.parse_function(_require(cfg.function, "--function"))
    tol = 1e-2 if cfg.tol is None else cfg.tol
    rep = growth_indices(phi)
    desc = ({"name": phi.name, "label": phi.label, "nodes": len(phi)}
            if isinstance(phi, TabulatedConvex) else phi.descriptor())
    payload = {"function": desc,
               "indices": rep.to_dict(),
               "ordered": rep.ordered(),
               "simonenko_ratio_criterion": simonenko_ratio_criterion(phi, tol=tol),
               "delta2": delta2_verdict(phi).to_dict(),
               "delta0": delta0_verdict(phi).to_dict()}
    if phi.coercive:
        psi = conjugate(phi)
        mat, sim = index_duality_residual(phi, phistar=psi)
        payload["duality_residual"] = {"matuszewska": mat, "simonenko": sim}
    rows = [(k, getattr(rep, k), rep.flags.get(f"{n}_infinite", False))
            for k, n in (("a_inf", "a"), ("alpha_inf", "alpha"),
                         ("beta_inf", "beta"), ("b_inf", "b"))]
    if "duality_residual" in payload:
        rows += [("residual_matuszewska", payload["duality_residual"]["matuszewska"], ""),
                 ("residual_simonenko", payload["duality_residual"]["simonenko"], "")]
    return payload, _csv_text(["quantity", "value", "flagged_infinite"], rows)


def cmd_norm(cfg: RunConfig):
    f = io.parse_step_function(_require(cfg.function, "--function"))
    spec = io.parse_spec(_require(cfg.spec, "--spec"))
    if cfg.tol is not None and hasattr(spec, "rel_tol"):
        from .norms import Orlicz

        spec = Orlicz(spec.phi, rel_tol=cfg.tol)
    value = norm(f, spec)
    precision = int(cfg.extra.get("precision", 12))
    value = float(f"{value:.{precision}g}")
    payload = {"value": value, "spec": spec.to_dict(), "function": f.to_json()}
    return payload, _csv_text(["function_id", "spec_id", "value"],
                              [(cfg.function, spec.tag, value)])


def cmd_compactness(cfg: RunConfig):
    fam = io.parse_family(_require(cfg.family, "--family"), seed=cfg.seed)
    spec = io.parse_spec(_require(cfg.spec, "--spec"))
    mode = _require(cfg.mode, "--mode")
    tol = 1e-6 if cfg.tol is None else cfg.tol
    if mode == "equi":
        count = int(cfg.extra.get("count") or max(2, math.ceil(math.log2(max(2, len(fam) * 8))) + 2))
        prof = equi_integrability_profile(fam, spec, halving_sets(fam, count), tol=tol)
        payload = {"mode": mode, "profile": prof.to_dict()}
        rows = zip(prof.parameters, prof.suprema)
        return payload, _csv_text(["n", "supremum"], rows)
    if mode == "tail":
        levels = sorted({0.0} | {abs(float(v)) for f in fam for v in f.values})
        prof = tail_profile(fam, spec, levels, tol=tol)
        return {"mode": mode, "profile": prof.to_dict()}, \
            _csv_text(["gamma", "supremum"], zip(prof.parameters, prof.suprema))
    if mode == "vp":
        n_max = int(cfg.extra.get("n_max") or 12)
        u = thresholds_from_tail_profile(fam, spec, n_max)
        phi = valle_poussin_construct(u)
        rep = valle_poussin_verify(phi, fam, spec)
        payload = {"mode": mode, "thresholds": u, "report": rep.to_dict()}
        rows = [(n, un, tn, s) for n, (un, tn, s) in
                enumerate(zip(rep.thresholds, rep.tail_norms, rep.slopes), start=1)]
        return payload, _csv_text(["n", "u_n", "tail_norm", "slope"], rows)
    if mode == "l1const":
        trials = int(cfg.extra.get("trials") or 1000)
        rep = disjoint_l1_lower_constant(fam, spec, trials=trials, seed=cfg.seed)
        return {"mode": mode, "report": rep.to_dict()}, _csv_text(
            ["lower_constant", "upper_constant", "all_ones_ratio", "n_vectors"],
            [(rep.lower_constant, rep.upper_constant, rep.all_ones_ratio, rep.n_vectors)])
    if mode in ("remark33", "counterexample"):
        phi = io.parse_function(cfg.function or "power:p=2")
        rep = indicator_counterexample(spec, phi, len(fam))
        prof = rep.equi_profile
        return {"mode": mode, "report": rep.to_dict()}, _csv_text(
            ["n", "supremum", "vp_bound"], [(p, s, rep.vp_bound) for p, s in
                                            zip(prof.parameters, prof.suprema)])
    raise InputError(f"unknown mode {mode!r}; choose from {MODES}")


def cmd_multiplier(cfg: RunConfig):
    f = io.parse_step_function(_require(cfg.function, "--function"))
    X = io.parse_spec(_require(cfg.spec, "--spec"))
    Y = io.parse_spec(cfg.target_spec) if cfg.target_spec else X
    probes = int(cfg.extra.get("probes") or 32)
    rep = multiplier_norm_estimate(f, X, Y, probes=probes, seed=cfg.seed)
    prof = multiplier_oc_profile(f, X, Y, default_tail_sets(f), probes=probes, seed=cfg.seed,
                                 tol=1e-6 if cfg.tol is None else cfg.tol)
    payload = {"estimate": rep.to_dict(), "oc_profile": prof.to_dict(),
               "X": X.to_dict(), "Y": Y.to_dict()}
    return payload, _csv_text(["n", "estimate"], zip(prof.parameters, prof.suprema))


def cmd_examples(cfg: RunConfig):
    from .examples import reproduce

    results = reproduce()
    return results, _csv_text(["example", "expected", "computed", "ok"],
                              [(r["example"], r["expected"], r["computed"], r["ok"])
                               for r in results])


COMMANDS = {
    "catalog": cmd_catalog,
    "indices": cmd_indices,
    "norm": cmd_norm,
    "compactness": cmd_compactness,
    "multiplier": cmd_multiplier,
    "examples": cmd_examples,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="tolerance override")

    parser = argparse.ArgumentParser(prog="orlicz-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list catalog Orlicz functions")
    p = sub.add_parser("indices", parents=[common], help="growth indices and Delta verdicts")
    p.add_argument("--function", required=True, help="descriptor, JSON or CSV file")
    p = sub.add_parser("norm", parents=[common], help="norm of a step function")
    p.add_argument("--function", required=True, help="step function JSON/CSV")
    p.add_argument("--spec", required=True, help="norm spec shorthand or JSON")
    p.add_argument("--precision", type=int, default=12)
    p = sub.add_parser("compactness", parents=[common], help="compactness probes on a family")
    p.add_argument("--family", required=True, help="family JSON or generator shorthand")
    p.add_argument("--spec", required=True)
    p.add_argument("--mode", required=True, choices=MODES)
    p.add_argument("--function", help="Orlicz function for the counterexample mode (default power:p=2)")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--count", type=int, default=None, help="number of nested sets (equi)")
    p = sub.add_parser("multiplier", parents=[common], help="multiplier norm and OC profile")
    p.add_argument("--function", required=True, help="multiplier f (step function)")
    p.add_argument("--spec", required=True, help="domain norm X")
    p.add_argument("--target-spec", help="target norm Y (default X)")
    p.add_argument("--probes", type=int, default=None)
    sub.add_parser("examples", parents=[common], help="reproduce the worked examples")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    extra = {k: getattr(ns, k, None) for k in ("precision", "trials", "n_max", "count", "probes")}
    return RunConfig(command=ns.command, function=getattr(ns, "function", None),
                     spec=getattr(ns, "spec", None), target_spec=getattr(ns, "target_spec", None),
                     family=getattr(ns, "family", None), mode=getattr(ns, "mode", None),
                     format=ns.format, seed=ns.seed, tol=ns.tol, out=ns.out,
                     extra={k: v for k, v in extra.items() if v is not None})


def run(cfg: RunConfig) -> str:
    payload, csv_text = COMMANDS[cfg.command](cfg)
    return io.dumps(payload) if cfg.format == "json" else csv_text


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text = run(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, OverflowError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
