"""Command-line interface: ``cnoidal <subcommand> [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input
(domain, constraint or configuration error), 3 numerical blow-up during a
simulation.  Options may also come from a ``key=value`` file given with
``--config``; keys are the long option names (``t-end`` or ``t_end``) and
flags on the command line win over the file.
"""
import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from cnoidal.errors import (
    CnoidalError,
    ConfigError,
    ConstraintError,
    DegenerateError,
    StabilityError,
)
from cnoidal.model import PhysicalParams, ProfileCoeffs, SystemKind, WaveParams
from cnoidal.simulate import SpectralConfig, run_propagation, write_csv
from cnoidal.solutions import (
    CnoidalSolution,
    RSign,
    cnoidal_params,
    evaluate_fields,
    evaluate_profiles,
    family_indices,
    feasible_solutions,
    semi_trivial_family,
)
from cnoidal.verify import (
    ode_window,
    parse_tolerances,
    tolerances,
    verify_coefficients,
    verify_ode,
    verify_pde,
    verify_ratio,
)

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_UNSTABLE, EXIT_INTERNAL = 0, 1, 2, 3, 70

FIGURE_MODULUS = 0.5
# (mu0, mu1, a, b, c), sigma for each system's published illustration
FIGURE_SETS = {
    SystemKind.KDV_KDV: ((1.0, 0.25, 1.0, -1.0, 1.5), 2.0),
    SystemKind.BBM_BBM: ((1.0, 1.0, 1.0, -1.0, 2.5), 1.0),
    SystemKind.KDV_BBM: ((1.0, 0.25, 1.0, -1.0, 1.5), 1.5),
    SystemKind.BBM_KDV: ((1.0, 0.25, 1.0, -1.0, 1.5), 0.5),
}

DEFAULTS = {
    "system": "kdv-kdv", "m": FIGURE_MODULUS, "sign": "auto", "format": "json",
    "n": 201, "t": 0.0, "modes": 256, "dt": 1e-3, "t_end": 1.0, "dealias": True,
    "outputs": 10, "workers": 4,
}
FLOAT_KEYS = {"mu0", "mu1", "a", "b", "c", "sigma", "m", "t", "dt", "t_end"}
INT_KEYS = {"n", "modes", "family", "outputs", "workers"}
BOOL_KEYS = {"dealias", "pde", "convergence"}


@dataclass(frozen=True)
class RunConfig:
    system: SystemKind
    phys: PhysicalParams
    sigma: float
    m: float
    r_sign: object  # RSign, or None for "whichever sign is feasible"
    tolerances: dict
    output: str = None
    format: str = "json"


# ---------------------------------------------------------------------------
# configuration


def read_config_file(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{num}: expected key=value, got {raw!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _coerce(key, value):
    if not isinstance(value, str):
        return value
    try:
        if key in FLOAT_KEYS:
            return float(value)
        if key in INT_KEYS:
            return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {value!r}") from None
    if key in BOOL_KEYS:
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key} must be a boolean, got {value!r}")
    return value


def merged_options(ns):
    """Defaults, then the config file, then explicit flags."""
    opts = dict(DEFAULTS)
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "handler")}
    if flags.get("config"):
        opts.update(read_config_file(flags["config"]))
    opts.update(flags)
    return {k: _coerce(k, v) for k, v in opts.items()}


def _pairs(items, what):
    out = {}
    for item in items or ():
        for part in filter(None, (p.strip() for p in str(item).split(","))):
            key, sep, value = part.partition("=")
            if not sep:
                raise ConfigError(f"{what} entries look like name=value, got {part!r}")
            try:
                out[key.strip()] = float(value)
            except ValueError:
                raise ConfigError(f"{what} {key.strip()!r} is not a number: {value!r}") from None
    return out


def run_config(opts):
    kind = SystemKind.parse(opts["system"])
    fig, fig_sigma = FIGURE_SETS[kind]
    values = dict(zip(("mu0", "mu1", "a", "b", "c"), fig))
    values.update({k: opts[k] for k in values if opts.get(k) is not None})
    phys = PhysicalParams(**values)
    sigma = opts.get("sigma")
    sign = str(opts.get("sign", "auto")).strip().lower()
    tol = tolerances()
    if opts.get("tol"):
        text = opts["tol"] if isinstance(opts["tol"], str) else ",".join(opts["tol"])
        tol.update(parse_tolerances(text))
    fmt = opts.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {fmt!r}")
    return RunConfig(kind, phys, fig_sigma if sigma is None else sigma, opts["m"],
                     None if sign in ("auto", "both") else RSign.parse(sign),
                     tol, opts.get("output"), fmt)


def cnoidal_solutions(cfg):
    if cfg.r_sign is None:
        return feasible_solutions(cfg.system, cfg.phys, cfg.sigma, cfg.m)
    return [cnoidal_params(cfg.system, cfg.phys, cfg.sigma, cfg.m, cfg.r_sign)]


def _free_params(opts):
    free = _pairs(opts.get("free"), "--free")
    for key in ("sigma", "m"):
        if opts.get(key) is not None:
            free.setdefault(key, opts[key])
    return free


def solution_from_record(record, phys):
    """Rebuild a cnoidal solution from one ``params`` JSON record."""
    try:
        kind = SystemKind.parse(record["system"])
        wave = WaveParams(B=record["B"], omega=record["omega"], sigma=record["sigma"],
                          lam=record["lambda"], m=record["m"])
        d, h = record["d"], record["h"]
        prof = ProfileCoeffs(d0=d[0], d1=d[1], d2=d[2], h0=h[0], h1=h[1], h2=h[2])
        R = record["R"]
    except (KeyError, IndexError, TypeError) as exc:
        raise ConfigError(f"malformed parameter record: {exc!r}") from None
    return CnoidalSolution(kind, phys, wave, prof, R)


# ---------------------------------------------------------------------------
# output


def _num(x):
    x = float(x)
    return format(x, ".17g") if math.isfinite(x) else "null"


def dumps(obj):
    """JSON with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class _Sink:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        if self.path and self.path != "-":
            self.stream = open(self.path, "w", encoding="utf-8", newline="")
        else:
            self.stream = sys.stdout
        return self.stream

    def __exit__(self, *exc):
        if self.stream is not sys.stdout:
            self.stream.close()


def _csv_writer(stream):
    return csv.writer(stream, lineterminator="\n")


def _csv_cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return _num(x)
    return x


def param_record(sol, tol):
    try:
        ratio_ok = verify_ratio(sol, tol["ratio"]).passed
    except DegenerateError:
        ratio_ok = False
    w, p = sol.wave, sol.prof
    return {"system": sol.kind.value, "B": w.B, "omega": w.omega, "sigma": w.sigma,
            "lambda": w.lam, "m": w.m, "R": sol.R, "d": list(p.d), "h": list(p.h),
            "ratio_check": bool(ratio_ok)}


# ---------------------------------------------------------------------------
# subcommands


def cmd_params(opts):
    cfg = run_config(opts)
    records = [param_record(s, cfg.tolerances) for s in cnoidal_solutions(cfg)]
    with _Sink(cfg.output) as out:
        if cfg.format == "csv":
            keys = ["system", "B", "omega", "sigma", "lambda", "m", "R",
                    "d0", "d1", "d2", "h0", "h1", "h2", "ratio_check"]
            w = _csv_writer(out)
            w.writerow(keys)
            for r in records:
                flat = dict(r, **dict(zip(("d0", "d1", "d2"), r["d"])),
                            **dict(zip(("h0", "h1", "h2"), r["h"])))
                w.writerow([_csv_cell(flat[k]) for k in keys])
        else:
            for r in records:
                out.write(dumps(r) + "\n")
    return EXIT_OK


def _perturbed(sol, deltas):
    prof_keys = {"d0", "d1", "d2", "h0", "h1", "h2"}
    wave_keys = {"B": "B", "omega": "omega", "lambda": "lam", "lam": "lam"}
    unknown = set(deltas) - prof_keys - set(wave_keys)
    if unknown:
        raise ConfigError(f"cannot perturb {sorted(unknown)}; choose from "
                          f"{sorted(prof_keys | set(wave_keys))}")
    prof = replace(sol.prof, **{k: getattr(sol.prof, k) + v
                                for k, v in deltas.items() if k in prof_keys})
    wave = replace(sol.wave, **{wave_keys[k]: getattr(sol.wave, wave_keys[k]) + v
                                for k, v in deltas.items() if k in wave_keys})
    return replace(sol, prof=prof, wave=wave)


def verification_battery(sol, tol, pde=False):
    """Reports for one solution; the ratio law is skipped where it does not apply."""
    reports = [verify_coefficients(sol, tol["coefficients"]), verify_ode(sol, tol=tol["ode"])]
    if isinstance(sol, CnoidalSolution):
        try:
            reports.append(verify_ratio(sol, tol["ratio"]))
        except DegenerateError:
            pass
    if pde:
        reports.append(verify_pde(sol, tol=tol["pde"], slope_min=tol["slope"]))
    return reports


def _selected_solutions(opts, cfg):
    if opts.get("from_json"):
        path = opts["from_json"]
        try:
            text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        except OSError as exc:
            raise ConfigError(f"cannot read {path!r}: {exc.strerror}") from None
        sols = []
        for line in filter(None, (ln.strip() for ln in text.splitlines())):
            try:
                sols.append(solution_from_record(json.loads(line), cfg.phys))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: not a JSON record ({exc.msg})") from None
        return sols
    if opts.get("family") is not None:
        return [semi_trivial_family(cfg.system, cfg.phys, opts["family"], _free_params(opts))]
    return cnoidal_solutions(cfg)


def cmd_verify(opts):
    cfg = run_config(opts)
    deltas = _pairs(opts.get("perturb"), "--perturb")
    ok = True
    with _Sink(cfg.output) as out:
        writer = None
        for idx, sol in enumerate(_selected_solutions(opts, cfg)):
            if deltas:
                sol = _perturbed(sol, deltas)
            for rep in verification_battery(sol, cfg.tolerances, opts.get("pde", False)):
                ok &= rep.passed
                row = dict(rep.to_dict(), solution=idx, system=sol.kind.value)
                if cfg.format == "csv":
                    if writer is None:
                        writer = _csv_writer(out)
                        writer.writerow(["solution", "system", "check", "passed", "max_abs",
                                         "rms", "tolerance", "worst_location", "slope"])
                    writer.writerow([_csv_cell(row.get(k, "")) for k in
                                     ("solution", "system", "check", "passed", "max_abs",
                                      "rms", "tolerance", "worst_location", "slope")])
                else:
                    out.write(dumps(row) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


SAMPLE_COLUMNS = ("xi", "f", "g", "u_re", "u_im", "v")


def sample_rows(sol, n, t=0.0):
    """Profiles and fields on ``n`` points spanning one period (or the solitary core)."""
    if n < 2:
        raise ConfigError(f"need at least 2 samples, got {n}")
    lo, hi = ode_window(sol)
    xi = np.linspace(lo, hi, n)
    f, g = evaluate_profiles(sol, xi)
    u, v = evaluate_fields(sol, xi + sol.wave.sigma * t, t)
    return np.column_stack([xi, f, g, u.real, u.imag, v])


def _write_samples(stream, rows):
    w = _csv_writer(stream)
    w.writerow(SAMPLE_COLUMNS)
    for row in rows:
        w.writerow([_num(x) for x in row])


def cmd_sample(opts):
    cfg = run_config(opts)
    sols = _selected_solutions(opts, cfg)
    with _Sink(cfg.output) as out:
        _write_samples(out, sample_rows(sols[0], opts["n"], opts["t"]))
    return EXIT_OK


def figure_solution(kind):
    fig, sigma = FIGURE_SETS[kind]
    sols = feasible_solutions(kind, PhysicalParams(*fig), sigma, FIGURE_MODULUS)
    if len(sols) != 1:
        raise RuntimeError(f"figure set for {kind.label} has {len(sols)} feasible branches")
    return sols[0]


def cmd_figures(opts):
    outdir = opts.get("outdir") or "."
    os.makedirs(outdir, exist_ok=True)
    tol = tolerances()
    for kind in SystemKind:
        try:
            sol = figure_solution(kind)
        except CnoidalError as exc:
            raise RuntimeError(f"hard-coded figure set for {kind.label} is invalid: {exc}") from exc
        if not all(r.passed for r in verification_battery(sol, tol)):
            raise RuntimeError(f"hard-coded figure set for {kind.label} fails verification")
        path = os.path.join(outdir, f"figure_{kind.value.replace('-', '_')}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _write_samples(fh, sample_rows(sol, opts["n"]))
        print(path)
    return EXIT_OK


def catalog_entries(kind, phys, free, tol):
    entries = []
    for family in family_indices(kind):
        try:
            sol = semi_trivial_family(kind, phys, family, free)
        except ConstraintError as exc:
            entries.append({"family": family, "status": "constraint", "error": str(exc)})
            continue
        ode = verify_ode(sol, tol=tol["ode"])
        entries.append({"family": family, "status": "ok", "description": sol.description,
                        "free": sol.free, "derived": sol.derived,
                        "d": list(sol.prof.d), "h": list(sol.prof.h),
                        "ode_max": ode.max_abs, "passed": ode.passed})
    return entries


def cmd_catalog(opts):
    cfg = run_config(opts)
    entries = catalog_entries(cfg.system, cfg.phys, _free_params(opts), cfg.tolerances)
    with _Sink(cfg.output) as out:
        if cfg.format == "csv":
            w = _csv_writer(out)
            w.writerow(["family", "status", "description", "ode_max", "passed", "error"])
            for e in entries:
                w.writerow([_csv_cell(e.get(k, "")) for k in
                            ("family", "status", "description", "ode_max", "passed", "error")])
        else:
            for e in entries:
                out.write(dumps(dict(system=cfg.system.value, **e)) + "\n")
    return EXIT_OK if all(e.get("passed", True) for e in entries) else EXIT_FAIL


def cmd_simulate(opts):
    cfg = run_config(opts)
    sol = _selected_solutions(opts, cfg)[0]
    base = dict(n_modes=opts["modes"], dt=opts["dt"], t_end=opts["t_end"],
                dealias=opts["dealias"], n_outputs=opts["outputs"])
    report = run_propagation(sol, SpectralConfig.for_solution(sol, **base))
    with _Sink(cfg.output) as out:
        write_csv(report, out)
    print(f"method={report.method} linf_error_u={_num(report.linf_error_u)} "
          f"linf_error_v={_num(report.linf_error_v)} "
          f"conserved_drift={_num(report.conserved_drift)}", file=sys.stderr)
    if opts.get("convergence"):
        errors = [max(report.linf_error_u, report.linf_error_v)]
        for k in (2, 4):
            rep = run_propagation(sol, SpectralConfig.for_solution(
                sol, **dict(base, dt=opts["dt"] / k)))
            errors.append(max(rep.linf_error_u, rep.linf_error_v))
        slopes = [math.log2(a / b) if b > 0 else math.inf for a, b in zip(errors, errors[1:])]
        print("dt-halving slopes: " + " ".join(f"{s:.3f}" for s in slopes), file=sys.stderr)
    return EXIT_OK


def _sweep_values(opts):
    if opts.get("values"):
        try:
            return [float(v) for v in str(opts["values"]).split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"--values must be comma-separated numbers, got {opts['values']!r}") from None
    lo, hi, n = opts.get("start"), opts.get("stop"), int(opts.get("num") or 5)
    if lo is None or hi is None:
        raise ConfigError("sweep needs --values or both --start and --stop")
    return list(np.linspace(float(lo), float(hi), n))


def _sweep_point(cfg, name, value, pde):
    try:
        point = replace(cfg, **{name: value}) if name in ("sigma", "m") else replace(
            cfg, phys=replace(cfg.phys, **{name: value}))
        sols = cnoidal_solutions(point)
    except CnoidalError as exc:
        return [{name: value, "status": "invalid", "error": str(exc)}]
    rows = []
    for sol in sols:
        reps = verification_battery(sol, cfg.tolerances, pde)
        row = {name: value, "status": "ok", "R": sol.R,
               "passed": all(r.passed for r in reps)}
        row.update({r.check: r.max_abs for r in reps})
        rows.append(row)
    return rows


def cmd_sweep(opts):
    cfg = run_config(opts)
    name = opts.get("param") or "sigma"
    if name not in ("sigma", "m", "mu0", "mu1", "a", "b", "c"):
        raise ConfigError(f"cannot sweep {name!r}")
    values = _sweep_values(opts)
    with ThreadPoolExecutor(max_workers=max(1, opts["workers"])) as pool:
        chunks = list(pool.map(lambda v: _sweep_point(cfg, name, v, opts.get("pde", False)),
                               values))
    rows = [r for chunk in chunks for r in chunk]
    cols = [name, "status", "R", "coefficients", "ode", "ratio", "pde", "passed", "error"]
    with _Sink(cfg.output) as out:
        if cfg.format == "json":
            for r in rows:
                out.write(dumps(r) + "\n")
        else:
            w = _csv_writer(out)
            w.writerow(cols)
            for r in rows:
                w.writerow([_csv_cell(r.get(k, "")) for k in cols])
    return EXIT_OK if all(r.get("passed", True) for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def _common(p):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="key=value file; flags override it")
    p.add_argument("--system", default=S, help="kdv-kdv, bbm-bbm, kdv-bbm or bbm-kdv")
    for name in ("mu0", "mu1", "a", "b", "c"):
        p.add_argument(f"--{name}", type=float, default=S)
    p.add_argument("--sigma", type=float, default=S, help="wave speed")
    p.add_argument("--m", type=float, default=S, help="elliptic modulus in [0, 1]")
    p.add_argument("--sign", default=S, help="R branch: +1, -1 or auto (feasible one)")
    p.add_argument("--tol", action="append", default=S, help="tolerance override name=value")
    p.add_argument("--output", "-o", default=S, help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=S)


def _source(p):
    S = argparse.SUPPRESS
    p.add_argument("--family", type=int, default=S, help="semi-trivial family instead of cnoidal")
    p.add_argument("--free", action="append", default=S,
                   help="free parameters of the family, name=value")
    p.add_argument("--from-json", dest="from_json", default=S,
                   help="parameter records written by 'params' ('-' for stdin)")


def build_parser():
    parser = argparse.ArgumentParser(prog="cnoidal", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS

    p = sub.add_parser("params", help="closed-form parameter vector as JSON")
    _common(p)
    p.set_defaults(handler=cmd_params)

    p = sub.add_parser("verify", help="coefficient, ODE, ratio and optional PDE checks")
    _common(p)
    _source(p)
    p.add_argument("--pde", action="store_true", default=S)
    p.add_argument("--perturb", action="append", default=S,
                   help="add a delta to a coefficient, e.g. d2=1e-3")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("sample", help="profiles and fields over one period as CSV")
    _common(p)
    _source(p)
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--t", type=float, default=S)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("figures", help="CSV data for the four illustration parameter sets")
    p.add_argument("--outdir", default=S)
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--config", default=S)
    p.set_defaults(handler=cmd_figures)

    p = sub.add_parser("catalog", help="trivial and semi-trivial families")
    _common(p)
    p.add_argument("--free", action="append", default=S)
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser("simulate", help="spectral propagation of an exact solution")
    _common(p)
    _source(p)
    p.add_argument("--modes", type=int, default=S)
    p.add_argument("--dt", type=float, default=S)
    p.add_argument("--t-end", dest="t_end", type=float, default=S)
    p.add_argument("--no-dealias", dest="dealias", action="store_false", default=S)
    p.add_argument("--outputs", type=int, default=S, help="number of output times")
    p.add_argument("--convergence", action="store_true", default=S,
                   help="also run dt/2 and dt/4 and report the observed order")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", help="verification battery over a parameter range")
    _common(p)
    p.add_argument("--param", default=S)
    p.add_argument("--values", default=S)
    p.add_argument("--start", type=float, default=S)
    p.add_argument("--stop", type=float, default=S)
    p.add_argument("--num", type=int, default=S)
    p.add_argument("--pde", action="store_true", default=S)
    p.add_argument("--workers", type=int, default=S)
    p.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    handler = ns.handler
    try:
        return handler(merged_options(ns))
    except StabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except CnoidalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
