"""Invariant and acceptance checks, runnable as a quick smoke suite or at full size.

Each check returns a CheckResult; nothing here raises on a failed check.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from qfi_teleport.analytic import (
    HALF_PI,
    ad_f_theta_equator,
    ad_min_location,
    closed_form_qfi,
    de_lambda,
    golden_minimize,
    pd_threshold,
)
from qfi_teleport.channels import (
    ChannelConfig,
    ChannelKind,
    KrausSet,
    apply_memory_channel,
    completeness_residual,
    kraus_correlated,
    kraus_uncorrelated,
)
from qfi_teleport.errors import InvalidState
from qfi_teleport.qfi import Param, qfi_spectral, qfi_teleported, teleported_family_single
from qfi_teleport.qmath import eigh, validate_density
from qfi_teleport.qstate import TWO_PI, ProbeParams, ResourceParams, x_state
from qfi_teleport.sweep import Grid, SweepConfig, figure_data, figure_to_csv
from qfi_teleport.teleport import teleport_double, teleport_single

log = logging.getLogger(__name__)

KINDS = tuple(ChannelKind)
EQUIVALENCE_RESOURCES = ((1.0, 1.0, -1.0), (-1.0, -1.0, -1.0), (0.8, 0.6, -0.7))
BELL_RESOURCES = ((-1.0, -1.0, -1.0), (1.0, 1.0, -1.0), (1.0, -1.0, 1.0), (-1.0, 1.0, 1.0))
FAULTS = ("kraus-weight",)

# grid sizes per level
_SIZES = {
    "quick": {"equiv": (3, 3, 3, 4), "recovery": (3, 4), "unit": 3, "order": 5, "cptp": 5, "probes": 5, "figure": 5},
    "full": {"equiv": (11, 11, 9, 8), "recovery": (9, 8), "unit": 11, "order": 21, "cptp": 21, "probes": 20, "figure": 41},
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        shown = {k: v for k, v in self.detail.items() if not isinstance(v, (list, dict))}
        return f"[{status}] {self.name} ({self.seconds:.2f}s) {shown}"

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "seconds": self.seconds, "detail": self.detail}


def _axis(lo, hi, n):
    return Grid(lo, hi, n).values()


def _phi_axis(n):
    return [TWO_PI * k / n for k in range(n)]


def _unit_grid(n):
    return [(D, mu) for D in _axis(0.0, 1.0, n) for mu in _axis(0.0, 1.0, n)]


def check_equivalence(level: str = "full") -> CheckResult:
    """Closed forms against the spectral pipeline on the (D, mu, theta, phi) grid."""
    nd, nm, nt, npf = _SIZES[level]["equiv"]
    tol = 1e-6
    start = time.perf_counter()
    per_kind = {}
    worst_point = None
    worst = 0.0
    for kind in KINDS:
        kind_worst = 0.0
        for cvals in EQUIVALENCE_RESOURCES:
            c = ResourceParams(*cvals)
            for D in _axis(0, 1, nd):
                for mu in _axis(0, 1, nm):
                    cfg = ChannelConfig(kind, D, mu)
                    for theta in _axis(0, math.pi, nt):
                        for phi in _phi_axis(npf):
                            at = ProbeParams(theta, phi)
                            a = closed_form_qfi(kind, D, mu, c, at)
                            n = qfi_teleported(cfg, c, at)
                            err = max(abs(a.f_theta - n.f_theta), abs(a.f_phi - n.f_phi))
                            if err > kind_worst:
                                kind_worst = err
                            if err > worst:
                                worst = err
                                worst_point = [kind.value, list(cvals), D, mu, theta, phi]
        per_kind[kind.value] = kind_worst
    elapsed = time.perf_counter() - start
    budget = 60.0 if level == "full" else None
    passed = worst <= tol and (budget is None or elapsed <= budget)
    detail = {
        "max_residual": worst,
        "tolerance": tol,
        "runtime_s": elapsed,
        "budget_s": budget,
        "per_kind": per_kind,
        "worst_point": worst_point,
        "grid": [nd, nm, nt, npf],
    }
    return CheckResult("analytic_numeric_equivalence", passed, detail)


def check_memory_recovery(level: str = "full") -> CheckResult:
    """At mu = 1 a Bell resource teleports perfectly: F_theta = 1, F_phi = sin^2 theta."""
    nt, npf = _SIZES[level]["recovery"]
    tol = 1e-6
    worst = 0.0
    where = None
    for kind in KINDS:
        # correlated damping moves |00> population, so only c3 = -1 Bell
        # resources are protected for amplitude damping
        resources = BELL_RESOURCES[:2] if kind is ChannelKind.AMPLITUDE_DAMPING else BELL_RESOURCES
        for cvals in resources:
            c = ResourceParams(*cvals)
            for D in _axis(0, 1, 3):
                cfg = ChannelConfig(kind, D, 1.0)
                for theta in _axis(0, math.pi, nt):
                    for phi in _phi_axis(npf):
                        at = ProbeParams(theta, phi)
                        want = (1.0, math.sin(theta) ** 2)
                        for res in (closed_form_qfi(kind, D, 1.0, c, at), qfi_teleported(cfg, c, at)):
                            err = max(abs(res.f_theta - want[0]), abs(res.f_phi - want[1]))
                            if err > worst:
                                worst, where = err, [kind.value, list(cvals), D, theta, phi, res.method.value]
    return CheckResult("memory_recovery", worst <= tol, {"max_error": worst, "tolerance": tol, "worst_point": where})


def check_pd_immunity(level: str = "full") -> CheckResult:
    """Phase damping leaves F_theta at the equator equal to c3^2."""
    n = _SIZES[level]["unit"]
    tol = 1e-9
    worst_closed = worst_numeric = 0.0
    at = ProbeParams(HALF_PI, 0.0)
    kind = ChannelKind.PHASE_DAMPING
    for cvals in EQUIVALENCE_RESOURCES + ((0.3, -0.2, 0.5),):
        c = ResourceParams(*cvals)
        for D, mu in _unit_grid(n):
            want = c.c3**2
            worst_closed = max(worst_closed, abs(closed_form_qfi(kind, D, mu, c, at).f_theta - want))
            fam = teleported_family_single(ChannelConfig(kind, D, mu), c)
            worst_numeric = max(worst_numeric, abs(qfi_spectral(fam, Param.THETA, at) - want))
    passed = worst_closed <= tol and worst_numeric <= tol
    return CheckResult(
        "pd_immunity",
        passed,
        {"closed_form_error": worst_closed, "numeric_error": worst_numeric, "tolerance": tol},
    )


def check_pd_threshold(level: str = "full") -> CheckResult:
    c = ResourceParams(1.0, 1.0, 0.5)
    D, phi = 0.5, 0.0
    kind = ChannelKind.PHASE_DAMPING
    res = pd_threshold(c, D, phi)

    def gap(mu):
        f0 = closed_form_qfi(kind, D, mu, c, ProbeParams(0.0, phi)).f_theta
        f90 = closed_form_qfi(kind, D, mu, c, ProbeParams(HALF_PI, phi)).f_theta
        return f0 - f90

    at_star = gap(res.mu_star)
    below, above = gap(res.mu_star - 0.01), gap(res.mu_star + 0.01)
    value_err = abs(res.mu_star - 1.0 / 3.0)
    passed = value_err <= 1e-12 and abs(at_star) <= 1e-9 and below * above < 0
    detail = {
        "mu_star": res.mu_star,
        "value_error": value_err,
        "gap_at_mu_star": at_star,
        "gap_below": below,
        "gap_above": above,
        "location_above": list(res.location_above or ()),
        "location_below": list(res.location_below or ()),
    }
    return CheckResult("pd_threshold", passed, detail)


def check_ad_min_location(level: str = "full") -> CheckResult:
    """Minimize F_theta(pi/2) over D numerically and compare with the formula.

    Two routes: golden section on the closed form, and on the spectral
    pipeline with a coarser finite-difference step (see ledger).
    """
    tol = 1e-6
    cases = [(c3, mu) for c3 in (0.25, 0.5, 0.75) for mu in (0.0, 0.3, 0.7)] + [(-1.0, 0.0)]
    if level == "quick":
        cases = [(0.5, 0.3), (-1.0, 0.0)]
    kind = ChannelKind.AMPLITUDE_DAMPING
    at = ProbeParams(HALF_PI, 0.0)
    rows = []
    worst = 0.0
    for c3, mu in cases:
        want = c3 / (1.0 + c3) if c3 >= 0 else 0.5
        # the equator value depends on c3 alone; (0, 0, c3) is always physical
        c = ResourceParams(0.0, 0.0, c3)

        def numeric(D, mu=mu, c=c):
            fam = teleported_family_single(ChannelConfig(kind, D, mu), c)
            return qfi_spectral(fam, Param.THETA, at, h=1e-3)

        closed = golden_minimize(lambda D: ad_f_theta_equator(c3, D, mu), 0.0, 1.0)
        pipeline = golden_minimize(numeric, 0.0, 1.0, tol=1e-9, scan=41)
        formula = ad_min_location(c3, mu)
        err = max(abs(closed - want), abs(pipeline - want), abs(formula - want))
        worst = max(worst, err)
        rows.append({"c3": c3, "mu": mu, "expected": want, "closed_form": closed, "pipeline": pipeline, "formula": formula})
    return CheckResult("ad_min_location", worst <= tol, {"max_error": worst, "tolerance": tol, "cases": rows})


def check_de_closed_form(level: str = "full") -> CheckResult:
    n = _SIZES[level]["unit"]
    tol = 1e-9
    kind = ChannelKind.DEPOLARIZING
    at = ProbeParams(HALF_PI, 0.0)
    worst = 0.0
    for cvals in EQUIVALENCE_RESOURCES:
        c = ResourceParams(*cvals)
        for D, mu in _unit_grid(n):
            want = de_lambda(D, mu) ** 2 * c.c3**2 / 81.0
            fam = teleported_family_single(ChannelConfig(kind, D, mu), c)
            got = qfi_spectral(fam, Param.THETA, at)
            worst = max(worst, abs(got - want), abs(closed_form_qfi(kind, D, mu, c, at).f_theta - want))
    # monotonicity, Bell resources
    d_axis = _axis(0.0, 0.75, n)
    mu_axis = _axis(0.0, 1.0, n)
    decreasing_in_d = nondecreasing_in_mu = True
    for cvals in BELL_RESOURCES:
        c = ResourceParams(*cvals)
        table = [
            [qfi_spectral(teleported_family_single(ChannelConfig(kind, D, mu), c), Param.THETA, at) for mu in mu_axis]
            for D in d_axis
        ]
        for j, mu in enumerate(mu_axis):
            col = [table[i][j] for i in range(len(d_axis))]
            # at mu = 1 the state is unaffected, so the column is flat
            if mu < 1.0 and any(b >= a for a, b in zip(col, col[1:])):
                decreasing_in_d = False
        for i in range(len(d_axis)):
            row = table[i]
            if any(b < a - 1e-9 for a, b in zip(row, row[1:])):
                nondecreasing_in_mu = False
    passed = worst <= tol and decreasing_in_d and nondecreasing_in_mu
    detail = {
        "max_error": worst,
        "tolerance": tol,
        "decreasing_in_D": decreasing_in_d,
        "nondecreasing_in_mu": nondecreasing_in_mu,
    }
    return CheckResult("de_closed_form", passed, detail)


def check_single_vs_double(level: str = "full") -> CheckResult:
    """F_theta(single) >= F_theta(double) and F_phi(single) <= F_phi(double).

    Known to fail under the two-copy teleportation model; the violations are
    reported, not hidden.
    """
    n = _SIZES[level]["order"]
    tol = 1e-8
    at = ProbeParams(HALF_PI, 0.0)
    violations = {"theta": 0, "phi": 0}
    worst = {"theta": 0.0, "phi": 0.0}
    examples = []
    total = 0
    for kind in KINDS:
        for s in (1.0, -1.0):
            c = ResourceParams(s, s, -1.0)
            for D, mu in _unit_grid(n):
                cfg = ChannelConfig(kind, D, mu)
                one = qfi_teleported(cfg, c, at, 1)
                two = qfi_teleported(cfg, c, at, 2)
                total += 1
                dt = two.f_theta - one.f_theta
                dp = one.f_phi - two.f_phi
                for key, d in (("theta", dt), ("phi", dp)):
                    if d > tol:
                        violations[key] += 1
                        if d > worst[key]:
                            worst[key] = d
                        if len(examples) < 6 and not any(e["kind"] == kind.value and e["param"] == key for e in examples):
                            examples.append(
                                {"kind": kind.value, "c1": s, "D": D, "mu": mu, "param": key,
                                 "single": one.get(Param(key)), "double": two.get(Param(key))}
                            )
    passed = violations["theta"] == 0 and violations["phi"] == 0
    detail = {
        "points": total,
        "theta_violations": violations["theta"],
        "phi_violations": violations["phi"],
        "worst_theta_excess": worst["theta"],
        "worst_phi_excess": worst["phi"],
        "examples": examples,
    }
    return CheckResult("single_vs_double_ordering", passed, detail)


def _corrupt(ks: KrausSet, factor: float = 1.01) -> KrausSet:
    ops = list(ks.operators)
    ops[0] = ops[0] * math.sqrt(factor)
    return KrausSet(tuple(ops), ks.branch)


def _random_x_state(rng) -> np.ndarray:
    # rejection sample inside the tetrahedron of valid X-states
    while True:
        c = ResourceParams(*rng.uniform(-1.0, 1.0, 3))
        if c.is_physical():
            return x_state(c)


def _off_x_norm(rho) -> float:
    mask = np.ones((4, 4), dtype=bool)
    for i in range(4):
        mask[i, i] = mask[i, 3 - i] = False
    return float(np.max(np.abs(rho[mask])))


def check_cptp(level: str = "full", fault: str | None = None, seed: int = 7) -> CheckResult:
    n = _SIZES[level]["cptp"]
    tol = 1e-12
    rng = np.random.default_rng(seed)
    worst_complete = 0.0
    worst_trace = worst_x = 0.0
    min_eig = 1.0
    where = None
    for kind in KINDS:
        for D, mu in _unit_grid(n):
            u, cor = kraus_uncorrelated(kind, D), kraus_correlated(kind, D)
            if fault == "kraus-weight":
                u = _corrupt(u)
            r = completeness_residual(u, cor, mu)
            if r > worst_complete:
                worst_complete, where = r, [kind.value, D, mu]
            rho = _random_x_state(rng)
            out = (1.0 - mu) * u.apply(rho) + mu * cor.apply(rho)
            worst_trace = max(worst_trace, float(abs(np.trace(out).real - 1.0)))
            worst_x = max(worst_x, _off_x_norm(out))
            min_eig = min(min_eig, float(np.linalg.eigvalsh(out)[0]))
    passed = worst_complete <= tol and worst_trace <= 1e-12 and worst_x <= 1e-12 and min_eig >= -1e-12
    detail = {
        "completeness_residual": worst_complete,
        "worst_point": where,
        "trace_error": worst_trace,
        "off_x_magnitude": worst_x,
        "min_eigenvalue": min_eig,
        "fault": fault,
    }
    return CheckResult("cptp", passed, detail)


def _random_pure(rng, dim) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def check_perfect_teleportation(level: str = "full", seed: int = 11) -> CheckResult:
    count = _SIZES[level]["probes"]
    tol = 1e-12
    rng = np.random.default_rng(seed)
    worst = 0.0
    for kind in KINDS:
        for mu in (0.0, 0.5, 1.0):
            res = apply_memory_channel(x_state(ResourceParams(-1.0, -1.0, -1.0)), ChannelConfig(kind, 0.0, mu))
            for _ in range(count):
                p1 = _random_pure(rng, 2)
                worst = max(worst, float(np.max(np.abs(teleport_single(res, p1) - p1))))
                p2 = np.kron(_random_pure(rng, 2), _random_pure(rng, 2))
                worst = max(worst, float(np.max(np.abs(teleport_double(res, p2) - p2))))
                p3 = _random_pure(rng, 4)
                worst = max(worst, float(np.max(np.abs(teleport_double(res, p3) - p3))))
    return CheckResult("perfect_teleportation", worst <= tol, {"max_error": worst, "tolerance": tol, "probes": count})


def check_determinism(level: str = "full") -> CheckResult:
    points = _SIZES[level]["figure"]
    one = figure_to_csv(figure_data(1, "de", "+", points=points, workers=1))
    two = figure_to_csv(figure_data(1, "de", "+", points=points, workers=2))
    return CheckResult(
        "determinism",
        one == two,
        {"points": points, "bytes": len(one), "identical": one == two},
    )


def check_eigh(level: str = "full", seed: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_ortho = 0.0
    trials = 20 if level == "quick" else 200
    for _ in range(trials):
        n = int(rng.integers(2, 5))
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = a + a.conj().T
        dec = eigh(h)
        worst = max(worst, float(np.max(np.abs(dec.reconstruct() - h))))
        v = dec.eigenvectors
        worst_ortho = max(worst_ortho, float(np.max(np.abs(v.conj().T @ v - np.eye(n)))))
    return CheckResult(
        "eigh_reconstruction",
        worst <= 1e-10 and worst_ortho <= 1e-10,
        {"reconstruction_error": worst, "orthonormality_error": worst_ortho, "trials": trials},
    )


def check_qfi_bounds(level: str = "full", seed: int = 5) -> CheckResult:
    """Teleported QFI stays within [0, 1], and the channel keeps states valid."""
    rng = np.random.default_rng(seed)
    trials = 30 if level == "quick" else 300
    lo, hi = 0.0, 0.0
    invalid = 0
    for _ in range(trials):
        kind = KINDS[int(rng.integers(3))]
        D, mu = rng.uniform(0, 1, 2)
        cvals = rng.uniform(-1, 1, 3)
        c = ResourceParams(*cvals)
        if not c.is_physical():
            log.info("skipping unphysical resource %s", cvals)
            continue
        cfg = ChannelConfig(kind, D, mu)
        try:
            noisy = apply_memory_channel(x_state(c), cfg)
        except InvalidState:
            invalid += 1
            continue
        if not validate_density(noisy).passed:
            invalid += 1
        at = ProbeParams(rng.uniform(0, math.pi), rng.uniform(0, TWO_PI))
        for q in (1, 2):
            r = qfi_teleported(cfg, c, at, q)
            lo = min(lo, r.f_theta, r.f_phi)
            hi = max(hi, r.f_theta, r.f_phi)
    passed = lo >= 0.0 and hi <= 1.0 + 1e-8 and invalid == 0
    return CheckResult("qfi_bounds", passed, {"min": lo, "max": hi, "invalid_states": invalid, "trials": trials})


def check_config_roundtrip(level: str = "full") -> CheckResult:
    cfg = SweepConfig.from_dict(
        {"channel": "ad,pd", "d_grid": "0:1:3", "phi_grid": "0:pi:2", "c": "0.8,0.6,-0.7", "qubits": "1,2",
         "method": "spectral"}
    )
    once = cfg.to_dict()
    twice = SweepConfig.from_dict(json.loads(json.dumps(once))).to_dict()
    return CheckResult("config_roundtrip", once == twice, {"config": once})


CHECKS = {
    "eigh_reconstruction": check_eigh,
    "cptp": check_cptp,
    "perfect_teleportation": check_perfect_teleportation,
    "analytic_numeric_equivalence": check_equivalence,
    "memory_recovery": check_memory_recovery,
    "pd_immunity": check_pd_immunity,
    "pd_threshold": check_pd_threshold,
    "ad_min_location": check_ad_min_location,
    "de_closed_form": check_de_closed_form,
    "single_vs_double_ordering": check_single_vs_double,
    "qfi_bounds": check_qfi_bounds,
    "config_roundtrip": check_config_roundtrip,
    "determinism": check_determinism,
}


def run_check(name: str, level: str = "full", **kwargs) -> CheckResult:
    start = time.perf_counter()
    try:
        result = CHECKS[name](level, **kwargs)
    except Exception as exc:  # a crashing check is a failed check
        log.exception("check %s crashed", name)
        result = CheckResult(name, False, {"error": f"{type(exc).__name__}: {exc}"})
    result.seconds = time.perf_counter() - start
    return result


def verify(level: str = "quick", fault: str | None = None) -> dict:
    """Run every check at ``level`` and return a JSON-ready report."""
    if level not in _SIZES:
        raise ValueError(f"level must be quick or full, got {level!r}")
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    start = time.perf_counter()
    results = []
    for name in CHECKS:
        kwargs = {"fault": fault} if name == "cptp" else {}
        results.append(run_check(name, level, **kwargs))
    return {
        "level": level,
        "fault": fault,
        "passed": all(r.passed for r in results),
        "runtime_s": time.perf_counter() - start,
        "checks": [r.as_dict() for r in results],
        "summary": [CheckResult(**{k: v for k, v in r.as_dict().items()}).line() for r in results],
    }
