"""
Command-line front end.

Every subcommand reads an optional JSON experiment config (``--config``) and
lets scalar fields be overridden inline. Output goes to the path given by
``--out`` or to stdout. Exit status: 0 success, 1 invalid input, 2 compare
tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from typing import Iterator, TextIO

import numpy as np

from . import __version__
from .compare import compare
from .config import ConfigError, ExperimentConfig, load_json, parse_angle, parse_matrix, parse_params, parse_vector
from .decompose import check_isometry, grover_family_params, lift_coin, pair_from_params, random_pair_params
from .limits import exact_state
from .numerics import DomainError, NumericalError, Tolerance, ValidationError
from .spectral import classify_lemma2, has_pm1_eigenvalues
from .walk import measure, trajectory

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE = 0, 1, 2
FMT = "%.17g"


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input (exit 1); 2 is reserved for tolerance failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


@contextmanager
def _sink(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_json(obj, path: str | None) -> None:
    with _sink(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


def _g(v: float) -> str:
    return FMT % v


def distribution_csv(dist) -> str:
    buf = io.StringIO()
    buf.write("position,probability\n")
    for x, m in zip(dist.positions, dist.masses):
        buf.write(f"{int(x)},{_g(m)}\n")
    return buf.getvalue()


def _overrides(args) -> tuple[dict, dict]:
    ov = {}
    for name in ("model", "steps", "delta"):
        v = getattr(args, name, None)
        if v is not None:
            ov[name] = v
    for name in ("initial", "coin", "params", "pair"):
        v = getattr(args, name, None)
        if v is not None:
            try:
                ov[name] = json.loads(v)
            except json.JSONDecodeError:
                if name == "coin":
                    ov[name] = v  # bare preset name
                else:
                    raise ConfigError(name, f"not valid JSON: {v!r}") from None
    cmp = {}
    for name in ("bin_width", "epsilon", "max_l1", "max_mass_error"):
        v = getattr(args, name, None)
        if v is not None:
            cmp[name] = v
    return ov, cmp


def load_config(args) -> ExperimentConfig:
    doc = load_json(args.config) if args.config else {}
    ov, cmp = _overrides(args)
    if cmp:
        doc = {**doc, "compare": {**(doc.get("compare") or {}), **cmp}}
    return ExperimentConfig.from_dict(doc, ov)


# subcommands


def cmd_simulate(args) -> int:
    cfg = load_config(args)
    state = None
    traj_fh = open(args.trajectory, "w", newline="") if args.trajectory else None
    try:
        if traj_fh:
            traj_fh.write("step,position,probability\n")
        for t, state in enumerate(trajectory(cfg.sim_model, cfg.initial_state(), cfg.coin, cfg.steps, cfg.tol)):
            if traj_fh:
                d = measure(state)
                for x, m in zip(d.positions, d.masses):
                    traj_fh.write(f"{t},{int(x)},{_g(m)}\n")
    finally:
        if traj_fh:
            traj_fh.close()
    with _sink(args.out) as fh:
        fh.write(distribution_csv(measure(state)))
    return EXIT_OK


def cmd_limit(args) -> int:
    cfg = load_config(args)
    lim = cfg.limit()
    header = lim.header()
    header["model"] = cfg.model
    r = lim.support
    xs = np.linspace(-r, r, args.samples + 2)[1:-1]
    dens = lim.density(xs)
    if args.header:
        _write_json(header, args.header)
    else:
        print(json.dumps(header), file=sys.stderr)
    with _sink(args.out) as fh:
        fh.write("x,density\n")
        for x, f in zip(xs, dens):
            fh.write(f"{_g(x)},{_g(f)}\n")
    return EXIT_OK


def run_compare(cfg: ExperimentConfig) -> dict:
    if cfg.steps < 1:
        raise ConfigError("steps", "compare needs steps >= 1")
    lim = cfg.limit()
    states = list(itertools.islice(
        trajectory(cfg.sim_model, cfg.initial_state(), cfg.coin, cfg.steps + 1, cfg.tol), cfg.steps, None
    ))
    rep = compare(measure(states[0]), measure(states[1]), cfg.steps, lim, cfg.bin_width, cfg.epsilon)
    out = rep.as_dict()
    out["model"] = cfg.model
    out["limit"] = lim.header()
    out["max_l1"] = cfg.max_l1
    out["max_mass_error"] = cfg.max_mass_error
    out["passed"] = rep.passed(cfg.max_l1, cfg.max_mass_error)
    return out


def cmd_compare(args) -> int:
    cfg = load_config(args)
    if cfg.steps < 100:
        print(f"warning: steps={cfg.steps} is small; limit comparisons are meaningful for n >= 100", file=sys.stderr)
    report = run_compare(cfg)
    _write_json(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_TOLERANCE


def cmd_classify(args) -> int:
    if args.random is not None:
        p = random_pair_params(np.random.default_rng(args.random))
    elif args.grover_family is not None:
        p = grover_family_params(parse_angle(args.grover_family, "--grover-family"))
    elif args.params is not None:
        try:
            doc = json.loads(args.params)
        except json.JSONDecodeError:
            raise ConfigError("params", "not valid JSON") from None
        p = parse_params(doc)
    elif args.config:
        doc = load_json(args.config)
        if "params" not in doc:
            raise ConfigError("params", "config has no 'params' entry")
        p = parse_params(doc["params"])
    else:
        raise ConfigError("params", "give --params, --config, --grover-family or --random")
    tag = classify_lemma2(p)
    has, d_plus, d_minus = has_pm1_eigenvalues(lift_coin(pair_from_params(p)), tol=args.eig_tol)
    report = {
        "params": {
            "delta": p.delta,
            "alpha": [p.alpha.real, p.alpha.imag],
            "beta": [p.beta.real, p.beta.imag],
            "e": p.e,
            "f": p.f,
        },
        "case": tag.value,
        "pm1_on_grid": has,
        "max_distance_to_plus1": d_plus,
        "max_distance_to_minus1": d_minus,
        "grid_points": 64,
        "consistent": (tag.value != "none") == has,
    }
    _write_json(report, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    if args.config:
        doc = load_json(args.config).get("pair")
        if doc is None:
            raise ConfigError("pair", "config has no 'pair' entry")
    else:
        doc = {}
    for name in ("m_r", "m_i"):
        v = getattr(args, name)
        if v is not None:
            try:
                doc[name] = json.loads(v)
            except json.JSONDecodeError:
                doc[name] = v
    if "m_r" not in doc or "m_i" not in doc:
        raise ConfigError("pair", "need both m_r and m_i")
    m_r = parse_matrix(doc["m_r"], "pair.m_r", size=2)
    m_i = parse_matrix(doc["m_i"], "pair.m_i", size=2)
    diag = check_isometry(m_r, m_i, Tolerance(eq_tol=args.eq_tol))
    out = diag.as_dict()
    out["failed"] = diag.failures()
    _write_json(out, args.out)
    return EXIT_OK


def cmd_exact(args) -> int:
    if args.config:
        doc = load_json(args.config)
    else:
        doc = {}
    ov, _ = _overrides(args)
    doc = {**doc, **ov}
    for k in ("delta", "initial"):
        if k not in doc:
            raise ConfigError(k, "missing")
    delta = parse_angle(doc["delta"], "delta")
    phi = parse_vector(doc["initial"], "initial", sizes=(4,))
    n = doc.get("steps", 0)
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ConfigError("steps", "expected a non-negative integer")
    state = exact_state(n, delta, phi)
    with _sink(args.out) as fh:
        fh.write("position,re1,im1,re2,im2,re3,im3,re4,im4,probability\n")
        for x, v in zip(state.positions, state.amplitudes):
            vals = ",".join(f"{_g(z.real)},{_g(z.imag)}" for z in v)
            fh.write(f"{int(x)},{vals},{_g(float(np.sum(np.abs(v) ** 2)))}\n")
    return EXIT_OK


def _sweep_one(task: tuple[str, dict]) -> dict:
    command, doc = task
    try:
        cfg = ExperimentConfig.from_dict(doc)
        if command == "compare":
            rep = run_compare(cfg)
            keep = ("l1", "sup", "localization_mass", "predicted_A", "mass_error", "passed")
            return {"status": "ok", **{k: rep[k] for k in keep}}
        lim = cfg.limit()
        return {"status": "ok", **{k: v for k, v in lim.header().items() if isinstance(v, (int, float))}}
    except (ValidationError, DomainError, NumericalError) as exc:
        return {"status": "error", "error": str(exc)}


def cmd_sweep(args) -> int:
    doc = load_json(args.config)
    command = doc.get("command", "compare")
    if command not in ("compare", "limit"):
        raise ConfigError("command", "expected 'compare' or 'limit'")
    base = doc.get("base")
    vary = doc.get("vary")
    if not isinstance(base, dict):
        raise ConfigError("base", "expected an object")
    if not isinstance(vary, dict) or not vary or not all(isinstance(v, list) and v for v in vary.values()):
        raise ConfigError("vary", "expected an object mapping field names to non-empty lists")
    keys = list(vary)
    combos = list(itertools.product(*(vary[k] for k in keys)))
    tasks = [(command, {**base, **dict(zip(keys, c))}) for c in combos]
    if args.jobs == 1:
        rows = [_sweep_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    fields = keys + sorted({k for r in rows for k in r} - {"status", "error"}) + ["status", "error"]
    failed = False
    with _sink(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for c, r in zip(combos, rows):
            failed |= r["status"] != "ok" or r.get("passed") is False
            cells = [json.dumps(v) if not isinstance(v, (int, float, str)) else v for v in c]
            for k in fields[len(keys):]:
                v = r.get(k, "")
                cells.append(_g(v) if isinstance(v, float) else v)
            w.writerow(cells)
    return EXIT_TOLERANCE if failed else EXIT_OK


# argument parsing


def _experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", "-c", help="JSON experiment config")
    p.add_argument("--model", help="lqw2 | dqw | lqw4 | grover-family")
    p.add_argument("--delta", help="angle, radians or e.g. '0.75pi'")
    p.add_argument("--steps", "-n", type=int)
    p.add_argument("--initial", "--phi", dest="initial", help="JSON list of complex entries")
    p.add_argument("--coin", help="preset name or JSON matrix")
    p.add_argument("--params", help="JSON pair parameters")
    p.add_argument("--pair", help='JSON {"m_r": ..., "m_i": ...}')
    p.add_argument("--out", "-o", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dqwalk", description="Decomposed and linear quantum walks on the line.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="evolve a walk and write its distribution")
    _experiment_args(p)
    p.add_argument("--trajectory", help="also write every step's distribution here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("limit", help="write limit-law parameters and density samples")
    _experiment_args(p)
    p.add_argument("--header", help="path for the JSON header (default stderr)")
    p.add_argument("--samples", type=int, default=401)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("compare", help="compare a simulation with its limit law")
    _experiment_args(p)
    p.add_argument("--bin-width", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--max-l1", type=float)
    p.add_argument("--max-mass-error", type=float)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("classify", help="eigenvalue +-1 classification of a coin pair")
    p.add_argument("--config", "-c")
    p.add_argument("--params", help="JSON pair parameters")
    p.add_argument("--grover-family", metavar="DELTA", help="use the Grover-family pair at DELTA")
    p.add_argument("--random", type=int, metavar="SEED", help="draw generic parameters")
    p.add_argument("--eig-tol", type=float, default=1e-8)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", help="isometry check of a coin pair")
    p.add_argument("--config", "-c")
    p.add_argument("--m-r", dest="m_r", help="preset name or JSON 2x2 matrix")
    p.add_argument("--m-i", dest="m_i", help="preset name or JSON 2x2 matrix")
    p.add_argument("--eq-tol", type=float, default=1e-12)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("exact", help="closed-form state at the four special angles")
    p.add_argument("--config", "-c")
    p.add_argument("--delta")
    p.add_argument("--steps", "-n", type=int)
    p.add_argument("--initial", "--phi", dest="initial")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("sweep", help="run a grid of experiments in parallel")
    p.add_argument("--config", "-c", required=True, help='JSON {"command", "base", "vary"}')
    p.add_argument("--jobs", "-j", type=int, default=None)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
