"""Batch command line: ``dfgate verify | search | noise | split | spectrum``.

Exit codes: 0 pass, 1 quantitative failure, 2 usage or I/O error.
``DFGATE_THREADS`` caps the number of worker processes.
"""
import argparse
import csv
import enum
import io
import json
import os
import platform
import sys
import tempfile
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, encodings, invariants, noise, optimizer, pulses, spin
from .encodings import EncodingKind

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VERIFY_TOL = 1e-10
SEARCH_TOL = 1e-3
SPLIT_TOL = 1e-12
CSV_HEADER = ("strength", "mean_fp", "stderr_fp", "mean_leakage", "p_e_bound")


class UsageError(Exception):
    pass


def worker_count(requested=None):
    """Requested workers (default: all cores), capped by ``DFGATE_THREADS``."""
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("DFGATE_THREADS")
    if cap:
        try:
            cap = int(cap)
        except ValueError:
            raise UsageError(f"DFGATE_THREADS must be an integer, got {cap!r}") from None
        if cap < 1:
            raise UsageError("DFGATE_THREADS must be at least 1")
        n = min(n, cap)
    return max(1, n)


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def load_params(source):
    if source == "builtin":
        return pulses.CZ_PARAMETERS
    data = load_json(source)
    if not isinstance(data, dict):
        raise UsageError(f"{source}: expected a JSON object of named phases")
    try:
        return pulses.PulseParameters.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{source}: {exc}") from None


def parse_grid(text):
    """``lo:hi:count`` with inclusive endpoints."""
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"grid must look like lo:hi:count, got {text!r}") from None
    if count < 1 or lo < 0 or hi < lo:
        raise UsageError("grid needs count >= 1 and 0 <= lo <= hi")
    if count == 1:
        return (lo,)
    return tuple(float(v) for v in np.linspace(lo, hi, count))


def atomic_write(path, text):
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def check_writable(path):
    """Fail before a long run rather than after it."""
    if path is None:
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise UsageError(f"cannot write {path}: directory missing or not writable")


def _plain(obj):
    """JSON-friendly copy of configs (enums to values, tuples to lists)."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def write_manifest(output, command, config, seed):
    manifest = {
        "command": command,
        "config": _plain(config),
        "seed": seed,
        "build": {"dfgate": __version__, "numpy": np.__version__,
                  "python": platform.python_version()},
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    path = Path(f"{output}.manifest.json")
    atomic_write(path, json.dumps(manifest, indent=2) + "\n")
    return path


def _emit_json(result, output, command, config, seed):
    text = json.dumps(_plain(result), indent=2) + "\n"
    if output:
        atomic_write(output, text)
        write_manifest(output, command, config, seed)
    else:
        sys.stdout.write(text)


# verify ---------------------------------------------------------------------

def verify_report(params, encoding="both"):
    """Invariants, leakage, timing and ring ratio of a parameter set."""
    report = {
        "params": params.as_dict(),
        "gate_time": pulses.gate_time(params),
        "alpha": pulses.compile_sequence(params).alpha,
    }
    checks = []
    u_local = pulses.local_gate(params)
    if encoding in ("4", "both"):
        layout = encodings.default_layout(EncodingKind.FOUR)
        b = encodings.pair_basis(layout).columns
        block = b.conj().T @ spin.apply_on_sites(u_local, layout.gate_sites, b, layout.n)
        report["fm4"] = invariants.fm_objective(block)
        report["leakage4"] = encodings.leakage_from_block(block, 4)
        checks += [report["fm4"], report["leakage4"]]
    if encoding in ("3", "both"):
        layout = encodings.default_layout(EncodingKind.THREE)
        pb = encodings.pair_basis(layout)
        moved = spin.apply_on_sites(u_local, layout.gate_sites, pb.columns, layout.n)
        report["leakage3"] = encodings.leakage_from_block(pb.columns.conj().T @ moved, pb.k)
        checks.append(report["leakage3"])
        blocks = {}
        for label in encodings.GAUGE_LABELS:
            gb = encodings.gauge_block_basis(layout, label).columns
            m = gb.conj().T @ spin.apply_on_sites(u_local, layout.gate_sites, gb, layout.n)
            blocks[f"{label[0]},{label[1]}"] = {
                "fm": invariants.fm_objective(m),
                "leakage": encodings.leakage_from_block(m, 4),
            }
            checks += [blocks[f"{label[0]},{label[1]}"]["fm"],
                       blocks[f"{label[0]},{label[1]}"]["leakage"]]
        report["blocks3"] = blocks
    report["pass"] = bool(max(checks) < VERIFY_TOL)
    return report


def cmd_verify(args):
    params = load_params(args.params)
    rep = verify_report(params, args.encoding)
    if "fm4" in rep:
        print(f"fm4      {rep['fm4']:.3e}")
        print(f"L4       {rep['leakage4']:.3e}")
    if "leakage3" in rep:
        print(f"L3       {rep['leakage3']:.3e}")
        for label, v in rep["blocks3"].items():
            print(f"block({label:>5}) fm {v['fm']:.3e}  L {v['leakage']:.3e}")
    print(f"T        {rep['gate_time']:.6f}")
    print(f"alpha    {rep['alpha']:.6f}")
    print("PASS" if rep["pass"] else "FAIL")
    if args.output:
        _emit_json(rep, args.output, "verify",
                   {"params": params.as_dict(), "encoding": args.encoding}, None)
    return EXIT_OK if rep["pass"] else EXIT_FAIL


# noise ----------------------------------------------------------------------

def sweep_csv(points, window):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow([f"{v:.12g}" for v in (p.strength, p.mean_fp, p.stderr_fp,
                                            p.mean_leakage, p.p_e_bound)])
    try:
        c = noise.quadratic_fit(points, window)
    except ValueError:
        c = float("nan")
    buf.write(f"# fit c={c:.12g} window={window[0]:.12g},{window[1]:.12g}\n")
    return buf.getvalue()


def cmd_noise(args):
    check_writable(args.output)
    params = load_params(args.params)
    try:
        config = noise.NoiseConfig(args.kind, parse_grid(args.grid), args.samples, args.seed,
                                   EncodingKind(int(args.encoding)), args.coupling_model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    points = noise.noise_sweep(config, params, workers=worker_count(args.workers))
    text = sweep_csv(points, config.fit_window)
    if args.output:
        atomic_write(args.output, text)
        resolved = asdict(config)
        resolved.update(params=params.as_dict(), fit_window=config.fit_window)
        write_manifest(args.output, "noise", resolved, config.seed)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# search ---------------------------------------------------------------------

def cmd_search(args):
    raw = load_json(args.config) if args.config else {}
    if not isinstance(raw, dict):
        raise UsageError("search config must be a JSON object")
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.restarts is not None:
        raw["restarts"] = args.restarts
    try:
        config = optimizer.SearchConfig.from_dict(raw)
        template = optimizer.parse_template(args.template)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    check_writable(args.output)
    results = optimizer.search(template, config, workers=worker_count(args.workers))
    best = results[0]
    out = {
        "template": [t.value for t in template],
        "best": best.as_dict(),
        "restarts": [r.as_dict() for r in sorted(results, key=lambda r: r.restart)],
    }
    print(f"best fm {best.fm:.3e}  leakage {best.leakage:.3e}  (restart {best.restart})",
          file=sys.stderr)
    _emit_json(out, args.output, "search",
               {"template": out["template"], **config.as_dict()}, config.seed)
    ok = best.fm < SEARCH_TOL and best.leakage < SEARCH_TOL
    return EXIT_OK if ok else EXIT_FAIL


# split ----------------------------------------------------------------------

def cmd_split(args):
    params = load_params(args.params)
    if args.n < 0:
        raise UsageError("n must be non-negative")
    a_n = pulses.alpha_n(params, args.n)
    print(f"alpha(n={args.n}) {a_n:.6f}")
    try:
        t_a, t_b = pulses.alpha_split(args.alpha_a, args.alpha_b, args.n, params)
    except pulses.InfeasibleSplitError as exc:
        print(f"infeasible split: {exc}", file=sys.stderr)
        return EXIT_FAIL
    box_n = params.theta_box + pulses.TWO_PI * args.n
    r1 = abs(t_a + t_b - box_n)
    r2 = abs(args.alpha_a * t_a + args.alpha_b * t_b - params.theta_ring)
    single = spin.evolve(pulses.local_hamiltonian("symmetric", a_n), box_n)
    double = (spin.evolve(pulses.local_hamiltonian("symmetric", args.alpha_a), t_a)
              @ spin.evolve(pulses.local_hamiltonian("symmetric", args.alpha_b), t_b))
    du = float(np.linalg.norm(single - double))
    print(f"t_a {t_a:.6f}")
    print(f"t_b {t_b:.6f}")
    print(f"added time {t_a + t_b - params.theta_box:.6f}")
    print(f"constraint residuals {r1:.1e} {r2:.1e}; unitary mismatch {du:.1e}")
    ok = max(r1, r2) < SPLIT_TOL and du < 1e-10
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


# spectrum -------------------------------------------------------------------

def spectrum_report(j_sc=1.0):
    h = spin.supercoherent_hamiltonian(j_sc, (1, 2, 3, 4), 4)
    evals = np.linalg.eigvalsh(h)
    levels = []
    for e in evals:
        if levels and abs(e - levels[-1][0]) < 1e-9 * max(1.0, abs(j_sc)):
            levels[-1][1] += 1
        else:
            levels.append([float(e), 1])
    ground = levels[0][0]
    residual = max(float(np.linalg.norm(h @ v - ground * v))
                   for v in encodings.four_qubit_states())
    return {
        "j_sc": j_sc,
        "levels": [{"energy": e, "multiplicity": m} for e, m in levels],
        "gap": levels[1][0] - ground if len(levels) > 1 else 0.0,
        "logical_residual": residual,
    }


def cmd_spectrum(args):
    rep = spectrum_report(args.jsc)
    for lvl in rep["levels"]:
        print(f"E = {lvl['energy']:+.6f}  x{lvl['multiplicity']}")
    print(f"gap {rep['gap']:.6f}")
    print(f"logical ground-state residual {rep['logical_residual']:.1e}")
    if args.output:
        _emit_json(rep, args.output, "spectrum", {"jsc": args.jsc}, None)
    return EXIT_OK if rep["logical_residual"] < 1e-12 * max(1.0, abs(args.jsc)) else EXIT_FAIL


# entry point ----------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="dfgate", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a parameter set realises CZ without leakage")
    p.add_argument("--params", default="builtin", help="'builtin' or a JSON file of phases")
    p.add_argument("--encoding", choices=("3", "4", "both"), default="both")
    p.add_argument("--output", help="write the report as JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("noise", help="Monte-Carlo noise sweep to CSV")
    p.add_argument("--kind", choices=[k.value for k in noise.NoiseKind], required=True)
    p.add_argument("--encoding", choices=("3", "4"), default="4")
    p.add_argument("--grid", required=True, help="lo:hi:count, inclusive")
    p.add_argument("--samples", type=int, default=250)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coupling-model", choices=noise.COUPLING_MODELS, default="six")
    p.add_argument("--params", default="builtin")
    p.add_argument("--workers", type=int)
    p.add_argument("--output", help="CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("search", help="GA + Nelder-Mead search over a pulse template")
    p.add_argument("--template", default=",".join(t.value for t in pulses.CZ_TEMPLATE))
    p.add_argument("--config", help="JSON file of search settings")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--output", help="JSON path (stdout if omitted)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("split", help="split the symmetric ring pulse into two ring ratios")
    p.add_argument("--alpha-a", type=float, required=True)
    p.add_argument("--alpha-b", type=float, required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--params", default="builtin")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("spectrum", help="spectrum of the supercoherent Hamiltonian")
    p.add_argument("--jsc", type=float, default=1.0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dfgate {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
