"""Command-line driver: sweep, figure, threshold, minloc, verify.

Exit codes: 0 ok, 1 verification failure (or sweep residual above 1e-5),
2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from qfi_teleport.analytic import ad_min_location, ad_threshold, pd_threshold
from qfi_teleport.channels import ChannelKind
from qfi_teleport.errors import ConfigError, DegenerateDenominator, QfiTeleportError
from qfi_teleport.qstate import ResourceParams
from qfi_teleport.sweep import (
    SweepConfig,
    figure_data,
    figure_to_csv,
    parse_number,
    records_to_csv,
    records_to_json,
    run_sweep,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("qfi_teleport")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors already; route the message through ConfigError
    def error(self, message):
        raise ConfigError(message)


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IoFailure(f"cannot write {path}: {exc}") from exc


class _IoFailure(Exception):
    pass


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _IoFailure(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


_SWEEP_FLAGS = {
    "channel": "channel",
    "d_grid": "d_grid",
    "mu_grid": "mu_grid",
    "theta_grid": "theta_grid",
    "phi_grid": "phi_grid",
    "c": "c",
    "qubits": "qubits",
    "method": "method",
    "out": "out",
    "format": "format",
}


def cmd_sweep(args) -> int:
    data = _load_config(args.config) if args.config else {}
    for attr, key in _SWEEP_FLAGS.items():
        value = getattr(args, attr)
        if value is not None:
            data[key] = value
    cfg = SweepConfig.from_dict(data).validate()
    records, summary = run_sweep(cfg, workers=args.workers)
    if cfg.format == "json":
        text = records_to_json(records, summary, cfg)
    else:
        text = records_to_csv(records)
    _write(text, cfg.out)
    if summary["max_residual"] is not None:
        log.info("max |analytic - numeric| = %.3e over %d rows", summary["max_residual"], summary["rows"])
    if not summary["passed"]:
        print(f"sweep check failed: {json.dumps(summary)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_figure(args) -> int:
    rows = figure_data(args.id, args.channel, args.sign, points=args.points, workers=args.workers)
    _write(figure_to_csv(rows), args.out)
    return EXIT_OK


def _resource(text: str) -> ResourceParams:
    try:
        return ResourceParams.parse(text)
    except (ValueError, QfiTeleportError) as exc:
        raise ConfigError(f"--c: {exc}") from exc


def cmd_threshold(args) -> int:
    c = _resource(args.c)
    kind = ChannelKind.parse(args.channel)
    D, phi = parse_number(args.d), parse_number(args.phi)
    try:
        if kind is ChannelKind.PHASE_DAMPING:
            res = pd_threshold(c, D, phi)
        elif kind is ChannelKind.AMPLITUDE_DAMPING:
            res = ad_threshold(c, D, phi)
        else:
            raise ConfigError("threshold: depolarizing has no memory threshold (see de_optimal_location)")
    except DegenerateDenominator as exc:
        raise ConfigError(str(exc)) from exc
    out = {"channel": kind.value, "c": list(c.as_tuple()), "D": D, "phi": phi, **res.as_dict()}
    _write(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_minloc(args) -> int:
    c3, mu = parse_number(args.c3), parse_number(args.mu)
    d_min = ad_min_location(c3, mu)
    _write(json.dumps({"c3": c3, "mu": mu, "d_min": d_min}, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from qfi_teleport.verification import verify

    report = verify(args.level, fault=args.inject_fault)
    for line in report["summary"]:
        print(line, file=sys.stderr)
    status = "PASSED" if report["passed"] else "FAILED"
    print(f"verify {args.level}: {status} in {report['runtime_s']:.1f}s", file=sys.stderr)
    text = json.dumps(report, indent=2, default=float) + "\n"
    if args.out:
        _write(text, args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qfi-teleport", description="QFI of teleported qubits through noisy memory channels.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="evaluate QFI over a parameter grid")
    s.add_argument("--config", help="JSON config file; flags override its fields")
    s.add_argument("--channel", help="comma list of ad, pd, de")
    s.add_argument("--d-grid", dest="d_grid", help="start:stop:count, inclusive")
    s.add_argument("--mu-grid", dest="mu_grid")
    s.add_argument("--theta-grid", dest="theta_grid", help="accepts pi multiples, e.g. 0:pi:9")
    s.add_argument("--phi-grid", dest="phi_grid", help="values must lie in [0, 2pi)")
    s.add_argument("--c", help="resource correlations c1,c2,c3")
    s.add_argument("--qubits", help="1, 2 or 1,2")
    s.add_argument("--method", help="comma list of analytic, spectral, bloch")
    s.add_argument("--out")
    s.add_argument("--format", choices=["csv", "json"])
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("figure", help="single and two-qubit QFI surfaces over (D, mu)")
    f.add_argument("--id", type=int, required=True, choices=[1, 2])
    f.add_argument("--channel", required=True)
    f.add_argument("--sign", required=True, choices=["+", "-"])
    f.add_argument("--points", type=int, default=41)
    f.add_argument("--out")
    f.add_argument("--workers", type=int, default=1)
    f.set_defaults(func=cmd_figure)

    t = sub.add_parser("threshold", help="memory threshold mu* for ad or pd")
    t.add_argument("--channel", required=True, choices=["ad", "pd", "de"])
    t.add_argument("--c", required=True)
    t.add_argument("--d", required=True)
    t.add_argument("--phi", default="0")
    t.add_argument("--out")
    t.set_defaults(func=cmd_threshold)

    m = sub.add_parser("minloc", help="D minimizing amplitude-damping F_theta(pi/2)")
    m.add_argument("--c3", required=True)
    m.add_argument("--mu", required=True)
    m.add_argument("--out")
    m.set_defaults(func=cmd_minloc)

    v = sub.add_parser("verify", help="run invariant checks")
    v.add_argument("--level", choices=["quick", "full"], default="quick")
    v.add_argument("--out")
    v.add_argument("--inject-fault", dest="inject_fault", choices=["kraus-weight"], help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except _IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, QfiTeleportError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
