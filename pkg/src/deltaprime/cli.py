"""Command-line front end.

Every subcommand writes one data artifact (two for ``inverse``), never plots.
Parameters come from an optional JSON ``--config`` file, and explicit flags
override the file. Failures print a single JSON line on stderr and exit
with a code that identifies the error class.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import inverse, moments, transfer, transparency
from .errors import DeltaPrimeError, DomainError
from .potential import RegularizationParams

OUTPUT_DIR_ENV = "DELTAPRIME_OUTPUT_DIR"
EXIT_USAGE = 2
EXIT_IO = 7

SUBCOMMANDS = ("scan", "roots", "inverse", "moments", "boundstate", "classify")

HEADERS = {
    "scan": ["lambda", "epsilon", "k", "T2", "R2", "det_residual"],
    "roots": ["set", "lambda", "root_index", "root_value", "residual", "chi", "g"],
    "inverse": ["lambda", "T2"],
    "moments": ["epsilon", "j", "value", "role"],
    "boundstate": ["chi", "g", "kappa", "energy", "bound"],
    "classify": ["mu", "nu", "tau", "surface", "constraint_residual"],
}


class UsageError(DeltaPrimeError):
    code = "usage_error"
    exit_status = EXIT_USAGE


def fmt(value) -> str:
    """Byte-stable text form: 17 significant digits for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % (value + 0.0)  # folds -0.0 into 0
    return str(value)


def atomic_write(path: Path, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the artifact the usual umask-derived mode
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        # json has no inf/nan; keep the record parseable
        return f if math.isfinite(f) else fmt(f)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def render_json(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n"


def render(header, rows, output_format: str) -> str:
    rows = [list(r) for r in rows]
    if output_format == "json":
        return render_json([dict(zip(header, r)) for r in rows])
    return render_csv(header, rows)


def parse_grid(text: str) -> np.ndarray:
    """``lo:hi:step`` (inclusive of ``hi`` within rounding) or a comma list."""
    text = str(text).strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} must be lo:hi:step")
        lo, hi, step = parts
        if not step > 0 or hi < lo:
            raise UsageError(f"grid {text!r} needs step > 0 and hi >= lo")
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return lo + step * np.arange(n)
    return np.array([float(p) for p in text.split(",") if p.strip()])


def _floats(text, n: Optional[int] = None, name: str = "value") -> list[float]:
    if isinstance(text, (list, tuple)):
        vals = [float(v) for v in text]
    else:
        vals = [float(v) for v in str(text).split(",") if v.strip()]
    if n is not None and len(vals) != n:
        raise UsageError(f"{name} needs {n} comma-separated numbers")
    return vals


def _output_path(value: Optional[str], default_name: str) -> Path:
    if value:
        return Path(value)
    base = os.environ.get(OUTPUT_DIR_ENV)
    return Path(base) / default_name if base else Path(default_name)


def _params(cfg: dict) -> RegularizationParams:
    missing = [k for k in ("mu", "nu", "tau") if cfg.get(k) is None]
    if missing:
        raise UsageError(f"missing parameter(s): {', '.join(missing)}")
    return RegularizationParams(
        mu=float(cfg["mu"]),
        nu=float(cfg["nu"]),
        tau=float(cfg["tau"]),
        a=tuple(_floats(cfg.get("a") or "0,0,0", 3, "a")),
        c=tuple(_floats(cfg.get("c") or "1,1,1,1", 4, "c")),
        varsigma=float(cfg.get("varsigma") or 1.0),
        epsilon=float(_floats(cfg.get("epsilon") or "1e-3")[0]),
    )


def _free(cfg: dict) -> dict:
    return {k: float(cfg[k]) for k in ("c0", "c1", "c2", "c3") if cfg.get(k) is not None}


def cmd_scan(cfg: dict) -> list[Path]:
    params = _params(cfg)
    lams = parse_grid(cfg.get("lambda_grid") or "1")
    eps_values = _floats(cfg.get("epsilon") or [params.epsilon])
    eta = float(cfg.get("eta") or 0.0)
    k = float(cfg.get("k") or 1.0)
    if not k > 0:
        raise DomainError("k must be positive")
    rows = []
    for eps in eps_values:
        p = RegularizationParams(params.mu, params.nu, params.tau, params.a, params.c, params.varsigma, eps)
        for lam in lams:
            m = transfer.transfer_matrix(p, float(lam), eta, k * k)
            res = transfer.scattering(m, k)
            rows.append([float(lam), eps, k, res.T2, res.R2, abs(m.det - 1.0)])
    path = _output_path(cfg.get("output"), f"scan.{cfg['format']}")
    atomic_write(path, render(HEADERS["scan"], rows, cfg["format"]))
    return [path]


def cmd_roots(cfg: dict) -> list[Path]:
    s = transparency.TransparencySet.parse(cfg.get("set") or "T0")
    vs = float(cfg.get("varsigma") or 1.0)
    eta = float(cfg.get("eta") or 0.0)
    max_roots = int(cfg.get("max_roots") or 2)
    search_max = float(cfg.get("search_max") or 1e3)
    exps = tuple(_floats(cfg["exponents"], 3, "exponents")) if cfg.get("exponents") else s.canonical_exponents
    free = _free(cfg)
    rows = []
    for lam in parse_grid(cfg.get("lambda_grid") or "1:40:1"):
        lam = float(lam)
        if lam == 0:
            continue
        if s.solves_constant:
            found = [(r, vs) for r in transparency.solve_roots(s, lam, vs, search_max, max_roots)]
        else:
            try:
                v = transparency.varsigma_for(s, lam)
            except DeltaPrimeError:
                continue
            found = [(transparency.TransparencyRoot(s, lam, v, None, 1, transparency.residual(s, lam, v)), v)]
        for root, v in found:
            c = transparency.coupled_constants(s, lam, v, root.root_value, free)
            rows.append([
                s.value,
                lam,
                root.root_index,
                root.root_value,
                root.residual,
                transparency.chi(s, lam, v, root.root_value),
                transparency.g_value(s, lam, eta, v, root.root_value, c, exps),
            ])
    path = _output_path(cfg.get("output"), f"roots.{cfg['format']}")
    atomic_write(path, render(HEADERS["roots"], rows, cfg["format"]))
    return [path]


def cmd_inverse(cfg: dict) -> list[Path]:
    if cfg.get("lambda") is None:
        raise UsageError("inverse needs --lambda")
    target = float(cfg["lambda"])
    exps = _floats(cfg["exponents"], 3, "exponents") if cfg.get("exponents") else None
    d = inverse.design(
        target,
        cfg.get("set") or "T0",
        varsigma=float(cfg.get("varsigma") or 1.0),
        eta=float(cfg.get("eta") or 0.0),
        free=_free(cfg),
        exponents=exps,
        epsilon=float(_floats(cfg.get("epsilon") or "1e-4")[0]),
        root_index=int(cfg.get("root_index") or 1),
    )
    k = float(cfg.get("k") or 1.0)
    window = tuple(_floats(cfg["window"], 2, "window")) if cfg.get("window") else None
    report = inverse.verify_resonance(d, k, window, int(cfg.get("samples") or inverse.DEFAULT_SAMPLES))
    conn = inverse.predicted_connection(d)
    record = d.to_record()
    record.update(
        {
            "k": k,
            "chi": conn.chi,
            "g": conn.g,
            "peak_lambda": report.peak_lambda,
            "peak_T2": report.peak_T2,
            "limit_T2": report.limit_T2,
            "envelope_T2": report.envelope_T2,
        }
    )
    base = _output_path(cfg.get("output"), "inverse")
    json_path = base.with_suffix(".json")
    csv_path = base.with_suffix(".csv")
    atomic_write(json_path, render_json(record))
    atomic_write(csv_path, render_csv(HEADERS["inverse"], report.scan))
    return [json_path, csv_path]


def cmd_moments(cfg: dict) -> list[Path]:
    params = _params(cfg)
    role = cfg.get("role") or "delta_prime"
    orders = [int(j) for j in _floats(cfg.get("j") or "0,1,2")]
    ladder = _floats(cfg.get("epsilon_ladder") or ",".join(str(e) for e in moments.DEFAULT_LADDER))
    rows = []
    for eps in ladder:
        p = RegularizationParams(params.mu, params.nu, params.tau, params.a, params.c, params.varsigma, eps)
        for j in orders:
            rep = moments.moment(p, role, j)
            rows.append([eps, j, rep.value, rep.role])
    path = _output_path(cfg.get("output"), f"moments.{cfg['format']}")
    atomic_write(path, render(HEADERS["moments"], rows, cfg["format"]))
    return [path]


def cmd_boundstate(cfg: dict) -> list[Path]:
    if cfg.get("chi") is None or cfg.get("g") is None:
        raise UsageError("boundstate needs --chi and --g")
    conn = transfer.ConnectionMatrix(float(cfg["chi"]), float(cfg["g"]))
    kappa = -conn.g / (conn.chi + 1.0 / conn.chi)
    state = transfer.bound_state(conn)
    row = [conn.chi, conn.g, kappa, -kappa * kappa if state else None, state is not None]
    fmt_ = cfg["format"] if cfg.get("format_given") else "json"
    path = _output_path(cfg.get("output"), f"boundstate.{fmt_}")
    text = render_json(dict(zip(HEADERS["boundstate"], row))) if fmt_ == "json" else render_csv(HEADERS["boundstate"], [row])
    atomic_write(path, text)
    return [path]


def cmd_classify(cfg: dict) -> list[Path]:
    missing = [k for k in ("mu", "nu", "tau") if cfg.get(k) is None]
    if missing:
        raise UsageError(f"missing parameter(s): {', '.join(missing)}")
    mu, nu, tau = float(cfg["mu"]), float(cfg["nu"]), float(cfg["tau"])
    a = _floats(cfg["a"], 3, "a") if cfg.get("a") else None
    c = _floats(cfg["c"], 4, "c") if cfg.get("c") else None
    res = moments.classify(mu, nu, tau, a, c, float(cfg.get("varsigma") or 1.0))
    row = [mu, nu, tau, res.surface, res.constraint_residual]
    fmt_ = cfg["format"] if cfg.get("format_given") else "json"
    path = _output_path(cfg.get("output"), f"classify.{fmt_}")
    text = render_json(dict(zip(HEADERS["classify"], row))) if fmt_ == "json" else render_csv(HEADERS["classify"], [row])
    atomic_write(path, text)
    return [path]


COMMANDS = {
    "scan": cmd_scan,
    "roots": cmd_roots,
    "inverse": cmd_inverse,
    "moments": cmd_moments,
    "boundstate": cmd_boundstate,
    "classify": cmd_classify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deltaprime", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="JSON file with parameters; flags override it")
        p.add_argument("--output", help="artifact path (default: $%s/<name> or ./<name>)" % OUTPUT_DIR_ENV)
        p.add_argument("--format", choices=("csv", "json"), help="artifact format")

    def family(p):
        p.add_argument("--mu", type=float)
        p.add_argument("--nu", type=float)
        p.add_argument("--tau", type=float)
        p.add_argument("--a", help="a1,a2,a3")
        p.add_argument("--c", help="c0,c1,c2,c3")
        p.add_argument("--varsigma", type=float)

    def free_constants(p):
        for name in ("c0", "c1", "c2", "c3"):
            p.add_argument(f"--{name}", type=float, help=f"free {name} where the set leaves it open")

    p = sub.add_parser("scan", help="transmission over a lambda grid")
    common(p)
    family(p)
    p.add_argument("--epsilon", help="one value or a comma list")
    p.add_argument("--lambda-grid", dest="lambda_grid", help="lo:hi:step or comma list")
    p.add_argument("--eta", type=float)
    p.add_argument("--k", type=float)

    p = sub.add_parser("roots", help="roots of a reduced transparency equation")
    common(p)
    p.add_argument("--set")
    p.add_argument("--varsigma", type=float)
    p.add_argument("--lambda-grid", dest="lambda_grid")
    p.add_argument("--max-roots", dest="max_roots", type=int)
    p.add_argument("--search-max", dest="search_max", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--exponents", help="mu,nu,tau used for g")
    free_constants(p)

    p = sub.add_parser("inverse", help="design a potential transparent at --lambda")
    common(p)
    p.add_argument("--lambda", dest="lambda", type=float)
    p.add_argument("--set")
    p.add_argument("--varsigma", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--epsilon")
    p.add_argument("--k", type=float)
    p.add_argument("--root-index", dest="root_index", type=int)
    p.add_argument("--window", help="lo,hi for the lambda scan")
    p.add_argument("--samples", type=int)
    p.add_argument("--exponents", help="mu,nu,tau")
    free_constants(p)

    p = sub.add_parser("moments", help="moments of the rescaled profile")
    common(p)
    family(p)
    p.add_argument("--role", choices=("delta", "delta_prime"))
    p.add_argument("--j", help="comma list of orders")
    p.add_argument("--epsilon-ladder", dest="epsilon_ladder", help="comma list")

    p = sub.add_parser("boundstate", help="bound state of a connection matrix")
    common(p)
    p.add_argument("--chi", type=float)
    p.add_argument("--g", type=float)

    p = sub.add_parser("classify", help="locate an exponent triple on the surfaces")
    common(p)
    p.add_argument("--mu", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--a")
    p.add_argument("--c")
    p.add_argument("--varsigma", type=float)
    return parser


def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge the config file with flags; explicit flags win."""
    cfg = load_config(args.config)
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "subcommand")}
    cfg["format_given"] = "format" in flags or "format" in cfg
    cfg.update(flags)
    cfg["format"] = cfg.get("format") or "csv"
    if cfg["format"] not in ("csv", "json"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    for key, value in cfg.items():
        if isinstance(value, float) and not math.isfinite(value):
            raise UsageError(f"parameter {key} must be finite")
    return cfg


def error_record(exc: BaseException) -> tuple[dict, int]:
    if isinstance(exc, DeltaPrimeError):
        return {"error": exc.code, "message": str(exc)}, exc.exit_status
    if isinstance(exc, OSError):
        return {"error": "io_error", "message": str(exc)}, EXIT_IO
    if isinstance(exc, ValueError):
        return {"error": "domain_error", "message": str(exc)}, DomainError.exit_status
    return {"error": "internal_error", "message": f"{type(exc).__name__}: {exc}"}, 1


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the subcommand and return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        paths = COMMANDS[args.subcommand](cfg)
    except Exception as exc:  # every failure becomes one JSON line
        record, status = error_record(exc)
        record["exit_status"] = status
        stderr.write(json.dumps(record, sort_keys=True) + "\n")
        return status
    for path in paths:
        stdout.write(f"{path}\n")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
