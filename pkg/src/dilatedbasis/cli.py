"""Command-line front end.

Every run is described by a JSON config (``schema: 1``). Flags fill in the
same config, so ``--config`` with the echoed config of an earlier run
reproduces it exactly.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 size limit.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
import time
import warnings
from importlib import metadata

import jsonschema
import numpy as np

from . import dilation1d as d1
from . import polydisk as pd
from . import torus as tw
from .errors import BoundedSequence, InputError, NumericalError, SizeLimit
from .output import dump_json, emit_csv, emit_plotdata
from .symbol import SparseSymbol

COMMANDS = (
    "analyze1d",
    "duals",
    "witness",
    "series",
    "riesz",
    "sigma-norms",
    "a2",
    "integral",
    "qm",
    "weighted-sections",
)

_num = {"type": "number"}
_int = {"type": "integer"}
_intlist = {"type": "array", "items": _int}
_complex = {"oneOf": [_num, {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}]}


def _obj(props, required=()):
    return {"type": "object", "properties": props, "additionalProperties": False, "required": list(required)}


CONFIG_SCHEMA = _obj(
    {
        "schema": {"const": 1},
        "command": {"enum": list(COMMANDS)},
        "symbol": _obj(
            {
                "coeffs": {"type": "array", "items": _complex, "minItems": 1},
                "terms": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "prefixItems": [_intlist, _num, _num],
                        "minItems": 3,
                        "maxItems": 3,
                    },
                    "minItems": 1,
                },
                "estar": {"type": "array", "items": _num, "minItems": 1},
            }
        ),
        "p": _int,
        "primes": _intlist,
        "tolerances": _obj(
            {"root_tol": _num, "residual_tol": _num, "slope_margin": _num, "rtol": _num}
        ),
        "cutoffs": _obj(
            {
                "N": _int,
                "N_list": _intlist,
                "tau_max": _int,
                "tau_range": {"type": "array", "items": _int, "minItems": 2, "maxItems": 2},
                "n_test": _int,
                "box": _intlist,
                "tau_list": {"type": "array", "items": _intlist},
                "scales": _intlist,
                "grid_density": _int,
                "cells": _int,
                "refinements": _intlist,
                "samples": _int,
            }
        ),
        "params": _obj(
            {
                "which_root": _int,
                "m": _int,
                "delta": _num,
                "weight": {"enum": ["symbol", "model", "constant"]},
                "form": {"enum": ["primes", "rational"]},
                "rational": {"type": "array", "items": _num},
                "random_centers": _int,
            }
        ),
        "seed": _int,
        "output": _obj(
            {"path": {"type": ["string", "null"]}, "format": {"enum": ["json", "csv", "plot"]}}
        ),
    },
    required=("schema", "command"),
)

BASE_DEFAULTS = {
    "schema": 1,
    "p": 2,
    "tolerances": {"root_tol": 1e-8, "residual_tol": 1e-10, "slope_margin": 0.1, "rtol": 0.01},
    "seed": 0,
    "output": {"path": None, "format": "json"},
}

# cutoffs / params filled in per command when absent
COMMAND_DEFAULTS = {
    "analyze1d": {"cutoffs": {"N_list": [16, 32, 64, 128, 256]}},
    "duals": {"cutoffs": {"tau_max": 10_000, "tau_range": [100, 10_000]}},
    "witness": {"cutoffs": {"N": 30, "n_test": 64}, "params": {"which_root": 0}},
    "series": {"cutoffs": {"N": 64}},
    "riesz": {"cutoffs": {"grid_density": 16}},
    "sigma-norms": {"cutoffs": {"tau_list": [[0], [1], [2], [3]]}},
    "a2": {
        "cutoffs": {"scales": [1, 2, 3, 4, 5, 6, 7, 8], "cells": 1_000_000},
        "params": {"weight": "symbol", "random_centers": 2},
    },
    "integral": {
        "cutoffs": {"refinements": [4, 8, 16, 32], "samples": 2000},
        "params": {"m": 4, "delta": 0.5},
    },
    "qm": {"cutoffs": {"N_list": [1, 2, 3, 4, 5]}, "params": {"weight": "symbol", "form": "primes"}},
    "weighted-sections": {"cutoffs": {"tau_list": [[1], [2], [4], [8]]}, "params": {"weight": "symbol"}},
}


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _fill(cfg, defaults):
    """Add keys from ``defaults`` that ``cfg`` lacks (recursively)."""
    for k, v in defaults.items():
        if k not in cfg:
            cfg[k] = copy.deepcopy(v)
        elif isinstance(v, dict) and isinstance(cfg[k], dict):
            _fill(cfg[k], v)
    return cfg


def resolve_config(cfg: dict) -> dict:
    """Validate, then record every default the run will use."""
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(f"config: {exc.message}") from exc
    cfg = _fill(copy.deepcopy(cfg), BASE_DEFAULTS)
    cmd = cfg["command"]
    cfg = _fill(cfg, COMMAND_DEFAULTS[cmd])
    if "primes" not in cfg and cmd in ("qm",):
        cfg["primes"] = [2, 3]
    sym = cfg.get("symbol", {})
    if cmd == "sigma-norms" and "estar" in sym and cfg["cutoffs"]["tau_list"] == [[0], [1], [2], [3]]:
        m = len(sym["estar"])
        cfg["cutoffs"]["tau_list"] = [[n] * m for n in range(4)]
    if cmd == "weighted-sections" and "N" not in cfg["cutoffs"]:
        cfg["cutoffs"]["N"] = 2 * max(max(t) for t in cfg["cutoffs"]["tau_list"])
    jsonschema.validate(cfg, CONFIG_SCHEMA)
    return cfg


# ---------------------------------------------------------------------------
# symbol plumbing


def _as_complex(x):
    return complex(x[0], x[1]) if isinstance(x, list) else complex(x)


def symbol_from_config(cfg) -> SparseSymbol:
    sym = cfg.get("symbol")
    if not sym or len(sym) != 1:
        raise InputError("give exactly one of symbol.coeffs, symbol.terms, symbol.estar")
    if "coeffs" in sym:
        return SparseSymbol.from_dense([_as_complex(c) for c in sym["coeffs"]])
    if "terms" in sym:
        return SparseSymbol({tuple(e): complex(re, im) for e, re, im in sym["terms"]})
    return pd.e_star_symbol(sym["estar"])


def spec1d_from_config(cfg) -> d1.DilationSystemSpec:
    sym = cfg.get("symbol", {})
    if "coeffs" in sym:
        coeffs = [_as_complex(c) for c in sym["coeffs"]]
    else:
        A = symbol_from_config(cfg)
        if A.arity != 1:
            raise InputError("this command needs a univariate symbol")
        coeffs = [A.terms.get((j,), 0j) for j in range(A.degrees[0] + 1)]
    return d1.DilationSystemSpec(coeffs, cfg["p"])


def weight_from_config(cfg) -> tw.TorusWeight:
    kind = cfg["params"]["weight"]
    if kind == "symbol":
        return tw.weight_from_symbol(symbol_from_config(cfg))
    m = cfg["params"].get("m")
    if m is None:
        if cfg.get("symbol"):
            m = symbol_from_config(cfg).arity
        else:
            m = len(cfg["primes"]) if "primes" in cfg else 1
    return tw.model_weight(m) if kind == "model" else tw.constant_weight(m)


# ---------------------------------------------------------------------------
# commands; each returns (csv records, structured results, plot series)


def cmd_analyze1d(cfg):
    spec = spec1d_from_config(cfg)
    v = d1.basis_verdict(spec, cfg["tolerances"]["root_tol"])
    gram = []
    for N in cfg["cutoffs"]["N_list"]:
        g = d1.gram_section(spec, N)
        gram.append({"N": N, "eig_min": g.eig_min, "eig_max": g.eig_max, "condition": g.condition})
    vd = v.as_dict()
    rec = {
        "basis": vd["basis"],
        "complete": vd["complete"],
        "minimal": vd["minimal"],
        "kappa_star": v.classification.kappa_star,
        "delta": v.classification.delta,
    }
    series = {"lambda_min": ([g["N"] for g in gram], [g["eig_min"] for g in gram])}
    return [rec], {"verdict": vd, "gram": gram}, series


def cmd_duals(cfg):
    spec = spec1d_from_config(cfg)
    c = cfg["cutoffs"]
    norms = d1.dual_chain_norms(spec, c["tau_max"])
    fit = None
    try:
        fit = d1.exponent_fit(norms, tuple(c["tau_range"]))
    except BoundedSequence as exc:
        fit_info = {"bounded": True, "limit": float(norms.norm_sq[-1]), "reason": str(exc)}
    else:
        fit_info = {
            "bounded": False,
            "exponent": fit.exponent,
            "ci": [fit.ci_low, fit.ci_high],
            "window": list(fit.tau_window),
        }
    recs = [
        {"tau": int(t), "norm_sq": float(s), "norm": float(math.sqrt(s))}
        for t, s in zip(norms.tau, norms.norm_sq)
    ]
    tau = norms.tau[1:]
    series = {"log_norm_vs_log_tau": (np.log(tau), np.log(norms.norm[1:]))}
    return recs, {"fit": fit_info}, series


def cmd_witness(cfg):
    spec = spec1d_from_config(cfg)
    c = cfg["cutoffs"]
    w = d1.incompleteness_witness(
        spec, cfg["params"]["which_root"], c["N"], c["n_test"], cfg["tolerances"]["root_tol"]
    )
    recs = [{"index": i, "value": v} for i, v in sorted(w.coefficients.items())]
    res = {
        "root": w.root,
        "max_residual": w.max_residual,
        "residual_bound": w.residual_bound,
        "n_test": w.n_test,
        "within_bound": w.max_residual <= w.residual_bound,
    }
    return recs, res, {"witness_modulus": ([r["index"] for r in recs], [abs(r["value"]) for r in recs])}


def cmd_series(cfg):
    A = symbol_from_config(cfg)
    N = cfg["cutoffs"]["N"]
    sh = pd.shell_sums(A, N)
    v = pd.h2_verdict(sh, margin=cfg["tolerances"]["slope_margin"])
    recs = [{"n": int(n), "s_n": float(s), "partial_sum": float(p)} for n, s, p in zip(sh.n, sh.s, sh.partial)]
    res = {
        "verdict": v.verdict,
        "slope": v.slope,
        "fit_window": list(sh.fit_window),
        "tail_ratio": v.tail_ratio,
        "log_growth_rate": v.log_growth_rate,
        "log_growth_r2": v.log_growth_r2,
        "reasons": v.reasons,
    }
    n = sh.n[1:]
    keep = sh.s[1:] > 0
    return recs, res, {"log_s_vs_log_n": (np.log(n[keep]), np.log(sh.s[1:][keep]))}


def cmd_riesz(cfg):
    A = symbol_from_config(cfg)
    v = pd.riesz_basis_verdict(A, cfg["cutoffs"]["grid_density"], seed=cfg["seed"])
    g = v.gram
    rec = {
        "riesz": v.riesz,
        "min_modulus": v.min_modulus,
        "gram_condition": g.condition if g else math.nan,
        "gram_eig_min": g.eig_min if g else math.nan,
    }
    res = {"argmin": v.argmin, "reasons": v.reasons, "gram_size": g.size if g else 0}
    return [rec], res, {}


def cmd_sigma_norms(cfg):
    A = symbol_from_config(cfg)
    reps = pd.partial_sum_norms(A, cfg["cutoffs"]["tau_list"], box=cfg["cutoffs"].get("box"))
    recs = [
        {
            "tau": list(r.tau),
            "norm": r.norm,
            "enlarged_norm": r.enlarged_norm,
            "stable": r.stable,
            "rank_one_norm": r.rank_one_norm,
        }
        for r in reps
    ]
    x = [max(r.tau) for r in reps]
    return recs, {}, {"sigma_norm_vs_n": (x, [r.norm for r in reps])}


def cmd_a2(cfg):
    W = weight_from_config(cfg)
    c = cfg["cutoffs"]
    rep = tw.a2_estimate(
        W,
        scale_ladder=c["scales"],
        n_random_centers=cfg["params"]["random_centers"],
        rtol=cfg["tolerances"]["rtol"],
        max_cells=c["cells"],
        seed=cfg["seed"],
    )
    recs = [{"scale": s, "sup_estimate": v, "status": st} for s, v, st in zip(rep.scales, rep.sup, rep.status)]
    rects = [
        {
            "center": r.center,
            "half_width": r.half_width,
            "avg_P": r.avg_P,
            "avg_inv_P": r.avg_inv,
            "status": r.status,
        }
        for r in rep.rectangles
    ]
    fin = [(s, v) for s, v in zip(rep.scales, rep.sup) if math.isfinite(v) and v > 0]
    series = {"log_sup_vs_scale": ([s for s, _ in fin], [math.log(v) for _, v in fin])}
    return recs, {"rectangles": rects, "growth": rep.growth()}, series


def cmd_integral(cfg):
    p, c = cfg["params"], cfg["cutoffs"]
    it = tw.integral_test(p["m"], p["delta"], tuple(c["refinements"]), c["samples"], cfg["seed"])
    rec = {
        "m": it.m,
        "delta": it.delta,
        "reduced": it.reduced_closed_form,
        "direct_estimate": it.direct_estimate,
        "raw_estimate": it.raw_estimates[-1],
        "status": it.status,
        "verdict": it.verdict,
    }
    res = {"cutoffs": it.cutoffs, "direct_estimates": it.direct_estimates, "raw_estimates": it.raw_estimates}
    return [rec], res, {"direct_vs_cutoff": (it.cutoffs, it.direct_estimates)}


def _form(cfg, m):
    p = cfg["params"]
    if p["form"] == "rational":
        return tw.LinearForm.rational(p.get("rational") or [1] + [0] * (m - 1))
    return tw.LinearForm.from_primes(cfg["primes"])


def cmd_qm(cfg):
    W = weight_from_config(cfg)
    rep = tw.qm_projection_norm(W, _form(cfg, W.arity), cfg["cutoffs"]["N_list"])
    return rep.rows, {"label": rep.label}, {"qm_norm_vs_N": ([r["N"] for r in rep.rows], [r["norm"] for r in rep.rows])}


def cmd_weighted_sections(cfg):
    W = weight_from_config(cfg)
    rep = tw.weighted_partial_sum_norms(W, cfg["cutoffs"]["tau_list"], cfg["cutoffs"]["N"])
    x = [max(r["tau"]) for r in rep.rows]
    return rep.rows, {"label": rep.label}, {"weighted_norm_vs_n": (x, [r["norm"] for r in rep.rows])}


DISPATCH = {
    "analyze1d": cmd_analyze1d,
    "duals": cmd_duals,
    "witness": cmd_witness,
    "series": cmd_series,
    "riesz": cmd_riesz,
    "sigma-norms": cmd_sigma_norms,
    "a2": cmd_a2,
    "integral": cmd_integral,
    "qm": cmd_qm,
    "weighted-sections": cmd_weighted_sections,
}


def version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        from . import __version__

        return __version__


def run(cfg: dict):
    """Run one resolved config; returns ``(envelope, records, series)``."""
    cfg = resolve_config(cfg)
    t0 = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        recs, results, series = DISPATCH[cfg["command"]](cfg)
    env = {
        "config": cfg,
        "version": version(),
        "command": cfg["command"],
        "threads": os.environ.get("DILATED_BASIS_THREADS"),
        "wall_clock_s": time.perf_counter() - t0,
        "records": recs,
        "results": results,
        "warnings": [{"category": w.category.__name__, "message": str(w.message)} for w in caught],
    }
    return env, recs, series


# ---------------------------------------------------------------------------
# argument parsing


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _coeffs(text):
    out = []
    for x in text.split(","):
        z = complex(x.strip().replace("i", "j"))
        out.append(z.real if z.imag == 0 else [z.real, z.imag])
    return out


def _tau_list(text):
    return [_ints(t) for t in text.split(";") if t.strip()]


# flag -> (config path, converter)
FLAGS = {
    "--coeffs": (("symbol", "coeffs"), _coeffs, "dense ascending coefficients, e.g. 2,-1 or 1,0.5+1j"),
    "--terms": (("symbol", "terms"), json.loads, "JSON list of [exponents, re, im]"),
    "--estar": (("symbol", "estar"), _floats, "weights c_k of A = 1 - sum c_k w_k"),
    "--estar-m": (("symbol", "estar"), lambda s: [1.0 / int(s)] * int(s), "uniform (E*) symbol in m variables"),
    "--p": (("p",), int, "dilation prime (1D commands)"),
    "--primes": (("primes",), _ints, "comma-separated primes"),
    "--root-tol": (("tolerances", "root_tol"), float, "unit-circle tolerance"),
    "--residual-tol": (("tolerances", "residual_tol"), float, "residual tolerance"),
    "--slope-margin": (("tolerances", "slope_margin"), float, "H2 slope margin"),
    "--rtol": (("tolerances", "rtol"), float, "quadrature relative tolerance"),
    "--N": (("cutoffs", "N"), int, "cutoff / truncation / box size"),
    "--N-list": (("cutoffs", "N_list"), _ints, "list of section sizes"),
    "--tau-max": (("cutoffs", "tau_max"), int, "largest chain index"),
    "--tau-range": (("cutoffs", "tau_range"), _ints, "fit range lo,hi"),
    "--n-test": (("cutoffs", "n_test"), int, "number of u_n tested"),
    "--box": (("cutoffs", "box"), _ints, "section box"),
    "--tau-list": (("cutoffs", "tau_list"), _tau_list, "multi-indices separated by ';'"),
    "--scales": (("cutoffs", "scales"), _ints, "scale ladder s (h = 2^-s)"),
    "--grid-density": (("cutoffs", "grid_density"), int, "grid points per angle"),
    "--cells": (("cutoffs", "cells"), int, "quadrature cell cap"),
    "--refinements": (("cutoffs", "refinements"), _ints, "inner cut-off exponents J"),
    "--samples": (("cutoffs", "samples"), int, "Monte Carlo samples per stratum"),
    "--which-root": (("params", "which_root"), int, "index into the inner zeros"),
    "--m": (("params", "m"), int, "dimension"),
    "--delta": (("params", "delta"), float, "ball radius"),
    "--weight": (("params", "weight"), str, "symbol | model | constant"),
    "--form": (("params", "form"), str, "primes | rational"),
    "--rational": (("params", "rational"), _floats, "rational form weights"),
    "--random-centers": (("params", "random_centers"), int, "quasi-random rectangle centres"),
    "--seed": (("seed",), int, "random seed"),
    "--output": (("output", "path"), str, "output file (default stdout)"),
    "--format": (("output", "format"), str, "json | csv | plot"),
}


def build_parser():
    ap = argparse.ArgumentParser(prog="dilated-basis", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, help=DISPATCH[cmd].__name__.replace("cmd_", "").replace("_", " "))
        sp.add_argument("--config", help="JSON config file (schema 1); flags override it")
        for flag, (_, _, hlp) in FLAGS.items():
            sp.add_argument(flag, dest=flag[2:].replace("-", "_"), default=None, help=hlp)
    return ap


def config_from_args(args) -> dict:
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise InputError("config must be a JSON object")
        cfg.setdefault("schema", 1)
        if cfg.get("command", args.command) != args.command:
            raise InputError(f"config is for {cfg['command']!r}, not {args.command!r}")
    cfg["command"] = args.command
    over = {}
    for flag, (path, conv, _) in FLAGS.items():
        val = getattr(args, flag[2:].replace("-", "_"))
        if val is None:
            continue
        try:
            val = conv(val)
        except (ValueError, json.JSONDecodeError) as exc:
            raise InputError(f"{flag}: {exc}") from exc
        node = over
        for key in path[:-1]:
            node = node.setdefault(key, {})
        node[path[-1]] = val
    if "symbol" in over:
        cfg.pop("symbol", None)
    cfg = _merge(cfg, over)
    cfg.setdefault("schema", 1)
    return cfg


def _emit(env, recs, series, cfg):
    fmt, path = cfg["output"]["format"], cfg["output"]["path"]
    if fmt == "json":
        text = dump_json(env)
        if path:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    elif fmt == "csv":
        if path:
            emit_csv(recs, path)
        else:
            import tempfile

            with tempfile.TemporaryDirectory() as d:
                p = emit_csv(recs, os.path.join(d, "out.csv"))
                sys.stdout.write(p.read_text(encoding="utf-8"))
    else:
        if not series:
            raise InputError(f"{cfg['command']} has no plot series")
        if path:
            emit_plotdata(series, path)
        else:
            import tempfile

            with tempfile.TemporaryDirectory() as d:
                p = emit_plotdata(series, os.path.join(d, "out.dat"))
                sys.stdout.write(p.read_text(encoding="utf-8"))


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
        env, recs, series = run(cfg)
        _emit(env, recs, series, env["config"])
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except SizeLimit as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
