"""Command-line surface: single-shot JSON commands and a CSV/JSON sweep runner.

Exit codes: 0 success, 2 validation error, 3 not-found, 4 numerical failure.
Errors are emitted as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import json
import os
import sys
import tempfile
from multiprocessing import Pool
from pathlib import Path

from . import cvd as cvd_mod
from .errors import DomainError, NeumannWidthsError, NotFound
from .kernels import EvalPolicy, NeumannParams
from .oracles import supnorm_square_conv
from .sk_spline import verify_cy2n
from .thresholds import min_guaranteed_n, min_guaranteed_n_beta, verdict
from .widths import exact_width

SWEEP_COLUMNS = ["q", "beta", "n", "theta_n", "y0", "width", "gamma_n",
                 "sandwich_lo", "sandwich_hi", "nq_flag", "cy2n_holds",
                 "oracle_delta"]
_SCHEMA_VERSION = 1

ENV_WORKERS = "NEUMANN_WIDTHS_WORKERS"
ENV_CACHE_DIR = "NEUMANN_WIDTHS_CACHE_DIR"


def _emit_error(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}) + "\n")


def _policy_from_args(args) -> EvalPolicy:
    return EvalPolicy(abs_tol=args.abs_tol, max_terms=args.max_terms)


def _add_policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--abs-tol", type=float, default=1e-14, dest="abs_tol")
    p.add_argument("--max-terms", type=int, default=1_000_000, dest="max_terms")


def cmd_width(args) -> int:
    params = NeumannParams(args.q, args.beta)
    report = exact_width(params, args.n, _policy_from_args(args))
    out = {
        "q": report.q, "beta": report.beta, "n": report.n,
        "theta_n": report.theta, "y0": report.y0, "width": report.width,
        "gamma_n": report.gamma_n, "sandwich_lo": report.sandwich_lo,
        "sandwich_hi": report.sandwich_hi, "residual": report.residual,
        "branch": report.branch.value,
    }
    if args.verify:
        max_abs, argmax = supnorm_square_conv(params, args.n)
        out["verify"] = {"supnorm": max_abs, "argmax": argmax,
                         "delta": abs(max_abs - report.width)}
    print(json.dumps(out))
    return 0


def cmd_threshold(args) -> int:
    if args.beta is not None:
        res = min_guaranteed_n_beta(args.q, args.beta, n_cap=args.cap)
    else:
        res = min_guaranteed_n(args.q, n_cap=args.cap)
    out = {"q": args.q, "n": res.n, "later_failures": list(res.later_failures)}
    if args.beta is not None:
        out["beta"] = args.beta
    if args.trace and res.n >= 2:
        trace = []
        for n in range(2, res.n + 1):
            v = verdict(args.q, n)
            trace.append({"n": n,
                          "tail": {"holds": v.tail.holds, "lhs": v.tail.lhs,
                                   "rhs": v.tail.rhs},
                          "budget": {"holds": v.budget.holds, "lhs": v.budget.lhs,
                                     "rhs": v.budget.rhs}})
        out["trace"] = trace
    print(json.dumps(out))
    return 0


def cmd_verify_cy2n(args) -> int:
    params = NeumannParams(args.q, args.beta)
    res = verify_cy2n(params, args.n, y=args.y, policy=_policy_from_args(args))
    print(json.dumps({
        "q": args.q, "beta": args.beta, "n": args.n,
        "holds": res.holds, "epsilon": res.epsilon,
        "pattern": list(res.pattern), "signs": list(res.signs),
        "zero_tol": res.zero_tol,
    }))
    return 0


def cmd_cvd(args) -> int:
    params = NeumannParams(args.q, args.beta)
    kernel = cvd_mod.neumann_evaluator(params)
    kernel_pair = cvd_mod.neumann_pair_evaluator(params)
    out = {"q": args.q, "beta": args.beta, "epsilon": args.epsilon}

    if args.witness_search:
        seeds = list(cvd_mod.builtin_witnesses()) if args.q == cvd_mod.WITNESS_Q else []
        neg, pos = cvd_mod.cvd_witness(kernel, args.l, args.search_budget,
                                       rng_seed=args.seed, seeds=seeds)
        out["witnesses"] = {"negative": neg.to_json_dict(), "positive": pos.to_json_dict()}
        for label, nodes in (("negative", neg), ("positive", pos)):
            res = cvd_mod.det_D(kernel, nodes, epsilon=args.epsilon,
                                kernel_pair=kernel_pair)
            out[f"det_{label}"] = {"value": res.value,
                                   "error_estimate": res.error_estimate,
                                   "significant": res.significant}
        print(json.dumps(out))
        return 0

    if args.vectors is not None:
        if args.known_vectors:
            raise DomainError("--known-vectors and --vectors are mutually exclusive")
        data = json.loads(Path(args.vectors).read_text(encoding="utf-8"))
        pairs = [("custom", cvd_mod.NodeVectors.from_json_dict(data))]
    else:  # built-in q = 0.21 witness pair
        neg, pos = cvd_mod.builtin_witnesses()
        pairs = [("negative_nodes", neg), ("positive_nodes", pos)]
    dets = {}
    for label, nodes in pairs:
        res = cvd_mod.det_D(kernel, nodes, epsilon=args.epsilon,
                            kernel_pair=kernel_pair)
        dets[label] = {"nodes": nodes.to_json_dict(), "value": res.value,
                       "error_estimate": res.error_estimate,
                       "significant": res.significant,
                       "used_extended": res.used_extended}
    out["determinants"] = dets
    print(json.dumps(out))
    return 0


# ---- sweep -------------------------------------------------------------

def _job_key(job: dict) -> str:
    return hashlib.sha256(
        json.dumps(job, sort_keys=True).encode("utf-8")).hexdigest()


def _cache_path(cache_dir: Path, key: str) -> Path:
    return cache_dir / key[:2] / (key[2:] + ".json")


def _cache_store(cache_dir: Path, key: str, row: dict) -> None:
    path = _cache_path(cache_dir, key)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(row, f, sort_keys=True)
        os.replace(tmp, path)  # atomic insert
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sweep_job(job: dict) -> dict:
    """One sweep row; must stay importable at module level for worker pools."""
    params = NeumannParams(job["q"], job["beta"])
    n = job["n"]
    policy = EvalPolicy(job["abs_tol"], job["max_terms"])
    report = exact_width(params, n, policy)
    row = {
        "q": job["q"], "beta": job["beta"], "n": n,
        "theta_n": report.theta, "y0": report.y0, "width": report.width,
        "gamma_n": report.gamma_n, "sandwich_lo": report.sandwich_lo,
        "sandwich_hi": report.sandwich_hi,
    }
    try:
        row["nq_flag"] = n >= min_guaranteed_n_beta(job["q"], job["beta"],
                                                    n_cap=job["nq_cap"]).n
    except NotFound:
        row["nq_flag"] = None
    try:
        row["cy2n_holds"] = verify_cy2n(params, n, policy=policy).holds
    except NeumannWidthsError:
        row["cy2n_holds"] = None
    if job["verify"]:
        max_abs, _ = supnorm_square_conv(params, n, grid_points=job["oracle_grid"],
                                         refine_tol=job["oracle_refine_tol"])
        row["oracle_delta"] = abs(max_abs - report.width)
    else:
        row["oracle_delta"] = None
    return row


def _load_sweep_config(path: str) -> dict:
    cfg = json.loads(Path(path).read_text(encoding="utf-8"))
    for key in ("q_list", "beta_list"):
        if key not in cfg or not cfg[key]:
            raise DomainError(f"sweep config must set a nonempty {key}")
    for q in cfg["q_list"]:
        if not 0.0 < q < 1.0:
            raise DomainError(f"sweep q values must lie in (0, 1), got {q}")
    if "n_list" in cfg:
        n_values = [int(n) for n in cfg["n_list"]]
    elif "n_range" in cfg:
        r = cfg["n_range"]
        if len(r) == 2:
            n_values = list(range(int(r[0]), int(r[1]) + 1))
        elif len(r) == 3:
            n_values = list(range(int(r[0]), int(r[1]) + 1, int(r[2])))
        else:
            raise DomainError("n_range must be [start, stop] or [start, stop, step]")
    else:
        raise DomainError("sweep config must set n_list or n_range")
    if not n_values:
        raise DomainError("sweep n values are empty")
    policy = cfg.get("policy", {})
    cfg["_jobs"] = [
        {"q": float(q), "beta": float(b), "n": int(n),
         "abs_tol": float(policy.get("abs_tol", 1e-14)),
         "max_terms": int(policy.get("max_terms", 1_000_000)),
         "verify": bool(cfg.get("verify", True)),
         "oracle_grid": int(cfg.get("oracle_grid", 4096)),
         "oracle_refine_tol": float(cfg.get("oracle_refine_tol", 1e-13)),
         "nq_cap": int(cfg.get("nq_cap", 200_000)),
         "schema": _SCHEMA_VERSION}
        for q in cfg["q_list"] for b in cfg["beta_list"] for n in n_values]
    return cfg


def _format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def cmd_sweep(args) -> int:
    cfg = _load_sweep_config(args.config)
    jobs = cfg["_jobs"]
    out_path = Path(cfg.get("output", "sweep_out.csv"))
    fmt = cfg.get("format", "csv").lower()
    if fmt not in ("csv", "json"):
        raise DomainError(f"format must be csv or json, got {fmt}")
    workers = int(os.environ.get(ENV_WORKERS, cfg.get("workers", 1)))
    cache_dir = Path(os.environ.get(ENV_CACHE_DIR, cfg.get("cache_dir", ".nw-cache")))
    stamp = not (args.no_timestamp or cfg.get("no_timestamp", False))

    keys = [_job_key(j) for j in jobs]
    cached: dict[int, dict] = {}
    pending: list[int] = []
    for i, key in enumerate(keys):
        path = _cache_path(cache_dir, key)
        if path.exists():
            cached[i] = json.loads(path.read_text(encoding="utf-8"))
        else:
            pending.append(i)

    rows: dict[int, dict] = dict(cached)

    def run_pending():
        if not pending:
            return
        if workers > 1:
            with Pool(processes=workers) as pool:
                for i, row in zip(pending,
                                  pool.imap(_sweep_job, [jobs[i] for i in pending])):
                    rows[i] = row
                    _cache_store(cache_dir, keys[i], row)
        else:
            for i in pending:
                rows[i] = _sweep_job(jobs[i])
                _cache_store(cache_dir, keys[i], row=rows[i])

    interrupted = False
    try:
        run_pending()
    except KeyboardInterrupt:
        interrupted = True

    ordered = [rows[i] for i in sorted(rows)]
    out_path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with out_path.open("w", newline="", encoding="utf-8") as f:
            if stamp:
                now = datetime.datetime.now(datetime.timezone.utc)
                f.write(f"# generated-at {now.isoformat(timespec='seconds')}\n")
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(SWEEP_COLUMNS)
            for row in ordered:
                writer.writerow([_format_cell(row[c]) for c in SWEEP_COLUMNS])
    else:
        doc = {"rows": ordered}
        if stamp:
            now = datetime.datetime.now(datetime.timezone.utc)
            doc["generated_at"] = now.isoformat(timespec="seconds")
        out_path.write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")
    if interrupted:
        sys.stderr.write(f"interrupted: flushed {len(ordered)} of {len(jobs)} rows\n")
        return 130
    print(str(out_path))
    return 0


# ---- entry point --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="neumann-widths",
                                  description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("width", help="exact width and asymptotic decomposition")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true",
                   help="also run the grid sup-norm oracle and report the delta")
    _add_policy_flags(p)
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("threshold", help="smallest index with guaranteed equalities")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("verify-cy2n", help="alternating midpoint sign condition")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", type=float, default=None,
                   help="shift; defaults to the peak shift y0")
    _add_policy_flags(p)
    p.set_defaults(func=cmd_verify_cy2n)

    p = sub.add_parser("cvd", help="variation-diminishing determinant test")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--epsilon", type=int, default=1, choices=(1, -1))
    p.add_argument("--known-vectors", action="store_true", dest="known_vectors",
                   help="use the built-in q=0.21 witness pair (default when no "
                        "--vectors file is given)")
    p.add_argument("--vectors", type=str, default=None,
                   help="JSON file of node vectors as rational multiples of pi")
    p.add_argument("--witness-search", action="store_true")
    p.add_argument("--search-budget", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_cvd)

    p = sub.add_parser("sweep", help="parameter sweep to CSV/JSON with caching")
    p.add_argument("--config", type=str, required=True)
    p.add_argument("--no-timestamp", action="store_true", dest="no_timestamp")
    p.set_defaults(func=cmd_sweep)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        _emit_error("validation", str(exc))
        return 2
    except NotFound as exc:
        _emit_error("not-found", str(exc))
        return 3
    except NeumannWidthsError as exc:
        _emit_error("numerical", str(exc))
        return 4
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        _emit_error("validation", f"{type(exc).__name__}: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
