"""Grid sweeps and figure surfaces with deterministic CSV/JSON output."""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import logging
import math
import re
from dataclasses import dataclass, field

import numpy as np

from qfi_teleport.analytic import closed_form_qfi
from qfi_teleport.channels import ChannelConfig, ChannelKind
from qfi_teleport.errors import ConfigError, OutOfRange
from qfi_teleport.qfi import Method, qfi_teleported
from qfi_teleport.qstate import TWO_PI, ProbeParams, ResourceParams

log = logging.getLogger(__name__)

CSV_HEADER = ["kind", "D", "mu", "theta", "phi", "qubits", "f_theta", "f_phi", "method", "residual"]
FIGURE_HEADER = ["D", "mu", "f_single", "f_double"]
RESIDUAL_LIMIT = 1e-5
FIGURE_POINTS = 41

_PI_TERM = re.compile(r"^(?:(?P<num>[0-9.eE+-]+)\*?)?pi(?:/(?P<den>[0-9.eE+-]+))?$")


def fmt(x: float) -> str:
    """17 significant digits, scientific; locale independent."""
    return format(float(x), ".16e")


def parse_number(text: str) -> float:
    """A float, or a multiple of pi such as ``pi/2``, ``2pi`` or ``1.5*pi/4``."""
    s = text.strip().lower().replace(" ", "")
    try:
        return float(s)
    except ValueError:
        pass
    m = _PI_TERM.match(s)
    if not m:
        raise ConfigError(f"cannot parse number {text!r}")
    num = float(m["num"]) if m["num"] not in (None, "", "+", "-") else (-1.0 if m["num"] == "-" else 1.0)
    den = float(m["den"]) if m["den"] else 1.0
    return num * math.pi / den


@dataclass(frozen=True)
class Grid:
    """Inclusive, uniformly spaced, count-based axis."""

    start: float
    stop: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = str(text).split(":")
        if len(parts) == 1:
            v = parse_number(parts[0])
            return cls(v, v, 1)
        if len(parts) != 3:
            raise ConfigError(f"grid {text!r} must look like start:stop:count")
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"grid count {parts[2]!r} is not an integer") from None
        return cls(parse_number(parts[0]), parse_number(parts[1]), count)

    def __str__(self):
        return f"{self.start!r}:{self.stop!r}:{self.count}"

    def values(self) -> list[float]:
        if self.count == 1:
            return [float(self.start)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.count)]

    def check(self, name: str, lo: float, hi: float, hi_open: bool = False) -> None:
        if self.count < 1:
            raise ConfigError(f"{name}: count must be >= 1, got {self.count}")
        for v in (self.start, self.stop):
            bad = v < lo or v > hi or (hi_open and v >= hi)
            if bad:
                bracket = ")" if hi_open else "]"
                raise ConfigError(f"{name}: value {v!r} outside [{lo}, {hi}{bracket}")


def _split(value) -> list[str]:
    if isinstance(value, str):
        return [v for v in value.replace(" ", "").split(",") if v]
    return [str(v) for v in value]


@dataclass
class SweepConfig:
    kinds: list[ChannelKind] = field(default_factory=lambda: [ChannelKind.DEPOLARIZING])
    d_grid: Grid = Grid(0.0, 1.0, 11)
    mu_grid: Grid = Grid(0.0, 1.0, 11)
    theta_grid: Grid = Grid(math.pi / 2, math.pi / 2, 1)
    phi_grid: Grid = Grid(0.0, 0.0, 1)
    c: ResourceParams = ResourceParams(1.0, 1.0, -1.0)
    qubits: list[int] = field(default_factory=lambda: [1])
    methods: list[Method] = field(default_factory=lambda: [Method.ANALYTIC, Method.SPECTRAL])
    out: str | None = None
    format: str = "csv"

    def validate(self) -> "SweepConfig":
        self.d_grid.check("d-grid", 0.0, 1.0)
        self.mu_grid.check("mu-grid", 0.0, 1.0)
        self.theta_grid.check("theta-grid", 0.0, math.pi)
        self.phi_grid.check("phi-grid", 0.0, TWO_PI, hi_open=True)
        if not self.kinds:
            raise ConfigError("channel: at least one kind is required")
        if not self.methods:
            raise ConfigError("method: at least one method is required")
        for q in self.qubits:
            if q not in (1, 2):
                raise ConfigError(f"qubits: {q!r} must be 1 or 2")
        if 2 in self.qubits and (Method.BLOCH in self.methods):
            raise ConfigError("method: bloch applies to qubits=1 only")
        if 2 in self.qubits and Method.ANALYTIC in self.methods and 1 not in self.qubits:
            raise ConfigError("method: no closed form exists for qubits=2; use spectral")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: {self.format!r} must be csv or json")
        if not self.c.is_physical():
            raise ConfigError(f"c: unphysical resource {self.c.as_tuple()} (X-state is not PSD)")
        return self

    def to_dict(self) -> dict:
        return {
            "channel": [k.value for k in self.kinds],
            "d_grid": str(self.d_grid),
            "mu_grid": str(self.mu_grid),
            "theta_grid": str(self.theta_grid),
            "phi_grid": str(self.phi_grid),
            "c": list(self.c.as_tuple()),
            "qubits": list(self.qubits),
            "method": [m.value for m in self.methods],
            "out": self.out,
            "format": self.format,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {"channel", "d_grid", "mu_grid", "theta_grid", "phi_grid", "c", "qubits", "method", "out", "format"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        cfg = cls()
        try:
            if "channel" in data:
                cfg.kinds = [ChannelKind.parse(k) for k in _split(data["channel"])]
            for key in ("d_grid", "mu_grid", "theta_grid", "phi_grid"):
                if key in data:
                    setattr(cfg, key, Grid.parse(data[key]))
            if "c" in data:
                c = data["c"]
                cfg.c = ResourceParams.parse(c) if isinstance(c, str) else ResourceParams(*map(float, c))
            if "qubits" in data:
                cfg.qubits = [int(q) for q in _split(data["qubits"])]
            if "method" in data:
                cfg.methods = [Method(m) for m in _split(data["method"])]
            if "out" in data:
                cfg.out = data["out"]
            if "format" in data:
                cfg.format = data["format"]
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc
        return cfg


@dataclass(frozen=True)
class SweepRecord:
    kind: str
    D: float
    mu: float
    theta: float
    phi: float
    qubits: int
    f_theta: float
    f_phi: float
    method: str
    residual: float | None = None

    def row(self) -> list[str]:
        return [
            self.kind,
            fmt(self.D),
            fmt(self.mu),
            fmt(self.theta),
            fmt(self.phi),
            str(self.qubits),
            fmt(self.f_theta),
            fmt(self.f_phi),
            self.method,
            "" if self.residual is None else fmt(self.residual),
        ]

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in CSV_HEADER}


def _sweep_task(task) -> list[SweepRecord]:
    kind, D, mu, thetas, phis, qubits, methods, c = task
    cfg = ChannelConfig(kind, D, mu)
    records = []
    for theta in thetas:
        for phi in phis:
            at = ProbeParams(theta, phi)
            for q in qubits:
                analytic = None
                if q == 1 and Method.ANALYTIC in methods:
                    analytic = closed_form_qfi(kind, D, mu, c, at)
                for m in methods:
                    if m is Method.ANALYTIC:
                        if analytic is None:
                            continue
                        res = analytic
                    else:
                        res = qfi_teleported(cfg, c, at, q, method=m)
                    residual = None
                    if analytic is not None and m is not Method.ANALYTIC:
                        residual = max(abs(res.f_theta - analytic.f_theta), abs(res.f_phi - analytic.f_phi))
                    records.append(
                        SweepRecord(kind.value, D, mu, theta, phi, q, res.f_theta, res.f_phi, m.value, residual)
                    )
    return records


def _run_tasks(fn, tasks: list, workers: int) -> list:
    """Map ``fn`` over ``tasks``; results come back in task order for any worker count."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def run_sweep(cfg: SweepConfig, workers: int = 1) -> tuple[list[SweepRecord], dict]:
    """Evaluate every grid point for every requested method.

    Records are ordered by (kind, D index, mu index, theta index, phi index,
    qubits, method). The summary's ``passed`` is False when any numeric
    result deviates from the closed form by more than 1e-5.
    """
    cfg.validate()
    kinds = sorted(set(cfg.kinds), key=lambda k: k.value)
    methods = sorted(set(cfg.methods), key=lambda m: m.value)
    qubits = sorted(set(cfg.qubits))
    thetas, phis = cfg.theta_grid.values(), cfg.phi_grid.values()
    tasks = [
        (kind, D, mu, thetas, phis, qubits, methods, cfg.c)
        for kind in kinds
        for D in cfg.d_grid.values()
        for mu in cfg.mu_grid.values()
    ]
    records = [r for chunk in _run_tasks(_sweep_task, tasks, workers) for r in chunk]
    residuals = [r.residual for r in records if r.residual is not None]
    max_res = max(residuals) if residuals else None
    out_of_bounds = [r for r in records if not (0.0 <= r.f_theta <= 1 + 1e-8 and 0.0 <= r.f_phi <= 1 + 1e-8)]
    summary = {
        "rows": len(records),
        "max_residual": max_res,
        "residual_limit": RESIDUAL_LIMIT,
        "out_of_bounds": len(out_of_bounds),
        "passed": (max_res is None or max_res <= RESIDUAL_LIMIT) and not out_of_bounds,
    }
    return records, summary


def records_to_csv(records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def records_to_json(records: list[SweepRecord], summary: dict, cfg: SweepConfig | None = None) -> str:
    doc = {"records": [r.as_dict() for r in records], "summary": summary}
    if cfg is not None:
        doc["config"] = cfg.to_dict()
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _figure_task(task) -> tuple[float, float, float, float]:
    figure_id, kind, D, mu, c = task
    at = ProbeParams(math.pi / 2, 0.0)
    cfg = ChannelConfig(kind, D, mu)
    single = qfi_teleported(cfg, c, at, 1)
    double = qfi_teleported(cfg, c, at, 2)
    if figure_id == 1:
        return D, mu, single.f_theta, double.f_theta
    return D, mu, single.f_phi, double.f_phi


def figure_data(
    figure_id: int, kind, sign: str, points: int = FIGURE_POINTS, workers: int = 1
) -> list[tuple[float, float, float, float]]:
    """Single- and two-qubit QFI surfaces over (D, mu) at theta = pi/2, phi = 0.

    Figure 1 is F_theta, figure 2 is F_phi; ``sign`` picks c1 = c2 = +1 or -1
    with c3 = -1.
    """
    if figure_id not in (1, 2):
        raise ConfigError(f"figure id {figure_id!r} must be 1 or 2")
    if sign not in ("+", "-"):
        raise ConfigError(f"sign {sign!r} must be + or -")
    if points < 1:
        raise ConfigError("points must be >= 1")
    try:
        kind = ChannelKind.parse(kind)
    except OutOfRange as exc:
        raise ConfigError(str(exc)) from exc
    s = 1.0 if sign == "+" else -1.0
    c = ResourceParams(s, s, -1.0)
    axis = Grid(0.0, 1.0, points).values()
    tasks = [(figure_id, kind, D, mu, c) for D in axis for mu in axis]
    return _run_tasks(_figure_task, tasks, workers)


def figure_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIGURE_HEADER)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()
