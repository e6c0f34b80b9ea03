"""Command-line front end: build, eval, verify, sweep, size, and table1.

Multivariate builds read a JSON parameter document (--params); individual
flags override document fields.  Network files use the versioned JSON
schema of the net module; sweep and table1 emit CSV.

Exit codes: 0 on success, 1 on a bound failure (the report path is
printed), 2 on usage errors such as missing files or unknown verbs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import builders, verify
from .net import deserialize, evaluate_array, metrics, serialize
from .polynd import PolyND
from .targets import TargetSpec, catalog_ids

__all__ = ["main", "run"]

TARGET_ALIASES = {"square": "quadratic"}


class UsageError(Exception):
    pass


def _jsonable(obj):
    """Best-effort conversion of report payloads to JSON-compatible data."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


def _load_doc(path):
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"parameter document not found: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {path}: {exc}")


def _load_net(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return deserialize(fh.read())
    except FileNotFoundError:
        raise UsageError(f"network file not found: {path}")


def _parse_floats(text):
    return [float(v) for v in text.split(",") if v != ""]


def _parse_values(args):
    """Sweep values from --values "a,b,c" or --range lo:hi[:step]."""
    if args.values:
        vals = [int(float(v)) for v in args.values.split(",")]
    elif args.range:
        parts = [int(v) for v in args.range.split(":")]
        if len(parts) == 2:
            lo, hi, step = parts[0], parts[1], 1
        elif len(parts) == 3:
            lo, hi, step = parts
        else:
            raise UsageError("--range wants lo:hi or lo:hi:step")
        vals = list(range(lo, hi + 1, step))
    else:
        raise UsageError("provide --values or --range")
    if not vals:
        raise UsageError("empty sweep value list")
    return vals


def _target_from(args, doc):
    """TargetSpec from a parameter document and/or flags."""
    tdoc = dict(doc.get("target", {}))
    if getattr(args, "target", None):
        tdoc["catalog_id"] = args.target
    if getattr(args, "d", None) is not None:
        tdoc["dimension"] = args.d
    if getattr(args, "domain", None):
        tdoc["domain"] = args.domain
    if not tdoc.get("catalog_id"):
        return None
    cid = TARGET_ALIASES.get(tdoc["catalog_id"], tdoc["catalog_id"])
    tdoc["catalog_id"] = cid
    return TargetSpec.from_document(tdoc)


def _merged_params(args, doc, names):
    p = {k: v for k, v in doc.items() if k != "target"}
    for name in names:
        v = getattr(args, name, None)
        if v is not None:
            p[name] = v
    return p


def _build(theorem, p, target):
    """Dispatch one build; p holds scalar parameters."""
    if theorem == "poly":
        return builders.build_poly1d(p["coeffs"], int(p["H"]))
    if theorem == "polyNd":
        coeffs = {tuple(int(i) for i in json.loads(k) if True): float(v)
                  for k, v in p["coeffs_nd"].items()} \
            if isinstance(p.get("coeffs_nd"), dict) else None
        if coeffs is None:
            raise UsageError("polyNd needs a coeffs_nd document "
                             "{\"[j1, j2]\": value}")
        d = len(next(iter(coeffs)))
        poly = PolyND(d, coeffs, max(sum(j) for j in coeffs))
        return builders.build_polyNd(poly, int(p["H"]))
    if target is None and theorem not in ("trig",):
        raise UsageError(f"theorem {theorem!r} needs a --target")
    if theorem == "smooth":
        return builders.build_smooth1d(target, int(p["N"]))
    if theorem == "analytic-cube":
        return builders.build_analytic_cube(target, int(p["N"]),
                                            float(p["delta"]), d=target.d)
    if theorem == "ellipse":
        return builders.build_analytic_ellipse(target, int(p["N"]),
                                               float(p["rho"]), d=target.d)
    if theorem == "hermite":
        beta = tuple(p.get("beta", [1.0] * target.d))
        return builders.build_hermite_gauss(target, int(p["N"]),
                                            d=target.d, beta=beta)
    if theorem == "trig":
        return builders.build_trig(int(p["k"]), int(p["N2"]),
                                   kind=p.get("kind", "cos"))
    if theorem == "lp":
        return builders.build_lp(target, int(p["N1"]), int(p["N2"]),
                                 r=int(p.get("r", 2)), d=target.d)
    raise UsageError(f"unknown theorem {theorem!r}; known: "
                     f"{list(builders.THEOREM_IDS)}")


def _write_report(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2)
    return path


# ---------------------------------------------------------------------------
# verbs


def _cmd_build(args):
    doc = _load_doc(args.params)
    p = _merged_params(args, doc, ("H", "N", "N1", "N2", "k", "delta",
                                   "rho", "r", "kind"))
    if args.coeffs:
        p["coeffs"] = _parse_floats(args.coeffs)
    target = _target_from(args, doc)
    try:
        rep = _build(args.theorem, p, target)
    except KeyError as exc:
        raise UsageError(f"missing build parameter: {exc}")
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(serialize(rep.net))
    report_path = args.output + ".report.json"
    _write_report(report_path, {
        "theorem": args.theorem,
        "inputs": rep.inputs,
        "bound": rep.theoretical_bound,
        "bound_formula_id": rep.bound_formula_id,
        "expected_metrics": rep.expected_metrics,
        "metrics": metrics(rep.net),
        "meta": rep.meta,
        "target": target.to_document() if target is not None else None,
    })
    print(f"wrote {args.output} and {report_path}")
    return 0


def _cmd_eval(args):
    net = _load_net(args.net)
    pts = []
    for arg in args.points:
        coords = _parse_floats(arg)
        if len(coords) != net.input_dim:
            raise UsageError(f"point {arg!r} has {len(coords)} coordinates; "
                             f"network expects {net.input_dim}")
        pts.append(coords)
    vals = evaluate_array(net, np.asarray(pts))
    for v in vals:
        print(repr(float(v)))
    return 0


def _cmd_size(args):
    net = _load_net(args.net)
    m = metrics(net)
    print(f"width {m.width} depth {m.depth} height {m.height} "
          f"neurons {m.neuron_count} params {m.param_count}")
    return 0


def _target_callable(args, doc, d):
    spec = _target_from(args, doc)
    if spec is None:
        raise UsageError("verify needs a --target")
    if spec.d != d:
        spec = TargetSpec.catalog(spec.catalog_id, d=d, domain=spec.domain,
                                  **dict(spec.params))
    return spec


def _cmd_verify(args):
    net = _load_net(args.net)
    build_doc = {}
    try:
        with open(args.net + ".report.json", "r", encoding="utf-8") as fh:
            build_doc = json.load(fh)
    except (FileNotFoundError, json.JSONDecodeError):
        pass
    doc = _load_doc(args.params)
    target = _target_callable(args, doc, net.input_dim)
    bound = args.bound if args.bound is not None \
        else build_doc.get("bound", math.inf)
    domain = args.domain or target.domain
    if args.norm == "sup":
        report = verify.sup_error(net, target, domain, bound=bound)
    elif args.norm == "lp":
        report = verify.lp_error(net, target, args.p, domain, bound=bound)
    elif args.norm == "gauss":
        support = args.support
        if support is None:
            support = build_doc.get("meta", {}).get("support")
        if support is None:
            raise UsageError("gauss norm needs --support (or a build report "
                             "recording it)")
        report = verify.gauss_l2_error(net, target, float(support),
                                       bound=bound)
    else:
        raise UsageError(f"unknown norm {args.norm!r}")
    out = args.output or (args.net + ".verify.json")
    _write_report(out, report.to_document())
    status = "pass" if report.passed else "FAIL"
    print(f"{status}: measured {report.measured:.6e} vs bound "
          f"{report.bound:.6e} ({out})")
    return 0 if report.passed else 1


def _cmd_sweep(args):
    doc = _load_doc(args.params)
    fixed = _merged_params(args, doc, ("H", "N", "N1", "N2", "k", "delta",
                                       "rho", "r", "kind", "p"))
    if args.coeffs:
        fixed["coeffs"] = _parse_floats(args.coeffs)
    target = _target_from(args, doc)
    if target is not None:
        fixed["target"] = target
        fixed["d"] = target.d
    values = _parse_values(args)
    param = (args.param, values) if args.param else values
    try:
        table = verify.sweep(args.theorem, param, fixed, csv_path=args.output)
    except KeyError as exc:
        raise UsageError(f"sweep setup failed: {exc}")
    ok = all(r.measured <= r.bound * (1.0 + verify.PASS_SLACK)
             for r in table.rows)
    print(f"{'pass' if ok else 'FAIL'}: {len(table.rows)} rows "
          f"-> {args.output}")
    return 0 if ok else 1


DEFAULT_TABLE1 = [
    {"row": "poly", "coeffs": [0.0, 0.0, 1.0], "H": 6},
    {"row": "poly", "coeffs": [0.0, 0.0, 1.0], "H": 10},
] + [
    {"row": "analytic-cube",
     "target": {"catalog_id": "geometric-product", "dimension": 1},
     "N": N, "delta": 0.5}
    for N in (4, 6, 8, 10)
]


def _cmd_table1(args):
    if args.config:
        configs = _load_doc(args.config)
        if not isinstance(configs, list):
            raise UsageError("table1 config must be a JSON list of rows")
        for cfg in configs:
            if "target" in cfg:
                cfg["target"] = TargetSpec.from_document(cfg["target"])
    else:
        configs = [dict(c) for c in DEFAULT_TABLE1]
        for cfg in configs:
            if "target" in cfg:
                cfg["target"] = TargetSpec.from_document(cfg["target"])
    table = verify.table1_report(configs, csv_path=args.output)
    print(f"wrote {args.output} ({len(table.rows)} rows)")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    p = _Parser(prog="relu3d",
                description="Constructive intra-linked ReLU approximation "
                            "networks: build, evaluate, and verify.")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for any randomized inputs (default 0)")
    sub = p.add_subparsers(dest="verb", required=True)

    b = sub.add_parser("build", help="build a network and its report")
    b.add_argument("--theorem", required=True,
                   choices=list(builders.THEOREM_IDS))
    b.add_argument("--params", help="JSON parameter document")
    b.add_argument("--coeffs", help="comma-separated polynomial coefficients")
    b.add_argument("--target", help=f"catalog target id "
                                    f"(one of {catalog_ids()})")
    b.add_argument("--domain", help="target domain name")
    b.add_argument("--d", type=int, help="input dimension")
    for flag, typ in (("H", int), ("N", int), ("N1", int), ("N2", int),
                      ("k", int), ("r", int), ("delta", float),
                      ("rho", float)):
        b.add_argument(f"--{flag}", type=typ)
    b.add_argument("--kind", choices=("cos", "sin"))
    b.add_argument("-o", "--output", required=True, help="network file")
    b.set_defaults(fn=_cmd_build)

    e = sub.add_parser("eval", help="evaluate a network file at points")
    e.add_argument("net")
    e.add_argument("points", nargs="+",
                   help="points, one comma-separated coordinate list each")
    e.set_defaults(fn=_cmd_eval)

    v = sub.add_parser("verify", help="measure a network against a target")
    v.add_argument("net")
    v.add_argument("--target", help="catalog target id")
    v.add_argument("--params", help="JSON parameter document")
    v.add_argument("--norm", default="sup", choices=("sup", "lp", "gauss"))
    v.add_argument("--p", type=float, default=2.0, help="L^p exponent")
    v.add_argument("--domain", help="domain name or use the target's")
    v.add_argument("--d", type=int)
    v.add_argument("--bound", type=float,
                   help="override the bound from the build report")
    v.add_argument("--support", type=float,
                   help="compact support half-width for the gauss norm")
    v.add_argument("-o", "--output", help="report path")
    v.set_defaults(fn=_cmd_verify)

    s = sub.add_parser("sweep", help="sweep a parameter and emit CSV")
    s.add_argument("--theorem", required=True,
                   choices=list(builders.THEOREM_IDS))
    s.add_argument("--param", help="name of the swept parameter")
    s.add_argument("--values", help="comma-separated sweep values")
    s.add_argument("--range", help="lo:hi[:step] integer sweep range")
    s.add_argument("--params", help="JSON parameter document")
    s.add_argument("--coeffs")
    s.add_argument("--target")
    s.add_argument("--domain")
    s.add_argument("--d", type=int)
    for flag, typ in (("H", int), ("N", int), ("N1", int), ("N2", int),
                      ("k", int), ("r", int), ("delta", float),
                      ("rho", float), ("p", float)):
        s.add_argument(f"--{flag}", type=typ)
    s.add_argument("--kind", choices=("cos", "sin"))
    s.add_argument("-o", "--output", default="sweep.csv")
    s.set_defaults(fn=_cmd_sweep)

    z = sub.add_parser("size", help="print the size metrics of a network")
    z.add_argument("net")
    z.set_defaults(fn=_cmd_size)

    t = sub.add_parser("table1", help="size/error comparison report CSV")
    t.add_argument("--config", help="JSON list of row configs")
    t.add_argument("-o", "--output", default="table1.csv")
    t.set_defaults(fn=_cmd_table1)
    return p


def run(argv):
    """Parse and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
