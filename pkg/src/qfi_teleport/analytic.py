"""Closed-form teleported QFI, memory thresholds and extremum locations.

The teleported single-qubit Bloch vectors are

    amplitude damping  r = (1/2)((B c1 - A c2) cos(phi) sin(theta),
                                 (B c2 - A c1) sin(phi) sin(theta),  M cos(theta))
    phase damping      r = (Delta c1 cos(phi) sin(theta), Delta c2 sin(phi) sin(theta),
                            -c3 cos(theta))
    depolarizing       r = (Lambda / 9)(c1 cos(phi) sin(theta), c2 sin(phi) sin(theta),
                                        c3 cos(theta))

up to component signs, which the QFI does not see. Each QFI is a quadratic
term plus a rational correction whose denominator is proportional to
1 - |r|^2; the correction is dropped when the teleported state is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from qfi_teleport.channels import ChannelKind
from qfi_teleport.errors import DegenerateDenominator, DZero, OutOfRange
from qfi_teleport.qfi import Method, QfiResult
from qfi_teleport.qstate import ProbeParams, ResourceParams

PURE_GUARD = 1e-12
HALF_PI = 0.5 * math.pi
POLES = (0.0, math.pi)
EQUATOR = (HALF_PI,)


@dataclass(frozen=True)
class ChannelCoefficients:
    kind: ChannelKind
    a: float | None = None
    b: float | None = None
    m: float | None = None
    delta: float | None = None
    lam: float | None = None


def ad_coefficients(D: float, mu: float, c3: float) -> tuple[float, float, float]:
    a = (1.0 - math.sqrt(1.0 - D)) * mu
    b = a - 2.0 * (1.0 - D * (1.0 - mu))
    m = 2.0 * c3 * ((2.0 - D) * D * (1.0 - mu) - 1.0) - 2.0 * D**2 * (1.0 - mu)
    return a, b, m


def pd_delta(D: float, mu: float) -> float:
    return 1.0 - (2.0 - D) * D * (1.0 - mu)


def de_lambda(D: float, mu: float) -> float:
    return 9.0 - 8.0 * (3.0 - 2.0 * D) * D * (1.0 - mu)


def channel_coefficients(kind, D: float, mu: float, c3: float = 0.0) -> ChannelCoefficients:
    kind = ChannelKind.parse(kind)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        a, b, m = ad_coefficients(D, mu, c3)
        return ChannelCoefficients(kind, a=a, b=b, m=m)
    if kind is ChannelKind.PHASE_DAMPING:
        return ChannelCoefficients(kind, delta=pd_delta(D, mu))
    return ChannelCoefficients(kind, lam=de_lambda(D, mu))


def _correction(numerator: float, denominator: float, purity_gap: float) -> float:
    if abs(purity_gap) < PURE_GUARD:
        return 0.0
    return numerator / denominator


def _ad(D, mu, c1, c2, c3, st, ct, sp, cp):
    a, b, m = ad_coefficients(D, mu, c3)
    u = (b * c1 - a * c2) ** 2
    v = (b * c2 - a * c1) ** 2
    den = 4.0 - u * cp**2 * st**2 - v * st**2 * sp**2 - m**2 * ct**2
    gap = den / 4.0
    f_theta = 0.25 * (u * ct**2 * cp**2 + v * ct**2 * sp**2 + m**2 * st**2)
    f_theta += _correction(
        0.25 * ct**2 * st**2 * (u * cp**2 + v * sp**2 - m**2) ** 2, den, gap
    )
    f_phi = 0.25 * (v * st**2 * cp**2 + u * st**2 * sp**2)
    f_phi += _correction(
        cp**2 * sp**2 * st**4 * ((a * a - b * b) * (c1 * c1 - c2 * c2)) ** 2, 4.0 * den, gap
    )
    return f_theta, f_phi


def _pd(D, mu, c1, c2, c3, st, ct, sp, cp):
    d2 = pd_delta(D, mu) ** 2
    x = c1**2 * cp**2 + c2**2 * sp**2
    den = 1.0 - c3**2 * ct**2 - d2 * st**2 * x
    f_theta = d2 * ct**2 * x + c3**2 * st**2
    f_theta += _correction(ct**2 * st**2 * (d2 * x - c3**2) ** 2, den, den)
    f_phi = d2 * st**2 * (c1**2 * sp**2 + c2**2 * cp**2)
    f_phi += _correction((d2 * (c1**2 - c2**2) * st**2 * cp * sp) ** 2, den, den)
    return f_theta, f_phi


def _de(D, mu, c1, c2, c3, st, ct, sp, cp):
    l2 = de_lambda(D, mu) ** 2
    den = l2 * (c1**2 * st**2 * cp**2 + c2**2 * st**2 * sp**2 + c3**2 * ct**2) - 81.0
    gap = -den / 81.0
    f_theta = l2 * (c1**2 * ct**2 * cp**2 + c2**2 * ct**2 * sp**2 + c3**2 * st**2)
    f_theta -= _correction(
        st**2 * ct**2 * l2**2 * ((c1**2 - c3**2) - sp**2 * (c1**2 - c2**2)) ** 2, den, gap
    )
    f_phi = l2 * st**2 * (c1**2 * sp**2 + c2**2 * cp**2)
    f_phi -= _correction((c1**2 - c2**2) ** 2 * l2**2 * st**4 * sp**2 * cp**2, den, gap)
    return f_theta / 81.0, f_phi / 81.0


_FORMS = {
    ChannelKind.AMPLITUDE_DAMPING: _ad,
    ChannelKind.PHASE_DAMPING: _pd,
    ChannelKind.DEPOLARIZING: _de,
}


def closed_form_qfi(kind, D: float, mu: float, c: ResourceParams, at: ProbeParams) -> QfiResult:
    """Teleported single-qubit F_theta and F_phi from the closed forms."""
    kind = ChannelKind.parse(kind)
    st, ct = math.sin(at.theta), math.cos(at.theta)
    sp, cp = math.sin(at.phi), math.cos(at.phi)
    f_theta, f_phi = _FORMS[kind](D, mu, c.c1, c.c2, c.c3, st, ct, sp, cp)
    return QfiResult(f_theta, f_phi, Method.ANALYTIC, {"kind": kind.value})


def _f_theta(kind, D, mu, c, theta, phi=0.0) -> float:
    return closed_form_qfi(kind, D, mu, c, ProbeParams(theta, phi)).f_theta


def pole_minus_equator(kind, c: ResourceParams, D: float, phi: float, mu: float) -> float:
    """F_theta(theta=0) - F_theta(theta=pi/2); positive when the poles win."""
    return _f_theta(kind, D, mu, c, 0.0, phi) - _f_theta(kind, D, mu, c, HALF_PI, phi)


@dataclass(frozen=True)
class ThresholdResult:
    """Memory value where the optimal theta switches between poles and equator.

    ``location_above`` / ``location_below`` give the optimal theta values for
    mu above / below ``mu_star`` (None when that regime is empty). ``clipped``
    is "below" or "above" when the raw formula value left [0, 1].
    """

    mu_star: float | None
    location_above: tuple[float, ...] | None
    location_below: tuple[float, ...] | None
    degenerate: bool = False
    raw_mu_star: float | None = None
    clipped: str | None = None

    def as_dict(self) -> dict:
        return {
            "mu_star": self.mu_star,
            "raw_mu_star": self.raw_mu_star,
            "clipped": self.clipped,
            "location_above": list(self.location_above) if self.location_above else None,
            "location_below": list(self.location_below) if self.location_below else None,
            "degenerate": self.degenerate,
        }


def _dominant(kind, c, D, phi, mu) -> tuple[float, ...]:
    return POLES if pole_minus_equator(kind, c, D, phi, mu) > 0 else EQUATOR


def _regimes(kind, c, D, phi, mu_star):
    above = _dominant(kind, c, D, phi, 0.5 * (mu_star + 1.0)) if mu_star < 1.0 else None
    below = _dominant(kind, c, D, phi, 0.5 * mu_star) if mu_star > 0.0 else None
    return above, below


def pd_threshold(c: ResourceParams, D: float, phi: float) -> ThresholdResult:
    """Phase-damping memory threshold from the explicit formula.

    Raises:
        DZero: for D == 0, where every mu gives the same state.
        DegenerateDenominator: when c1^2 cos^2(phi) + c2^2 sin^2(phi) vanishes.
    """
    if not (0.0 <= D <= 1.0):
        raise OutOfRange(f"D={D!r} outside [0, 1]")
    if D == 0.0:
        raise DZero("threshold undefined at D = 0")
    radicand = c.c1**2 + c.c2**2 + (c.c1**2 - c.c2**2) * math.cos(2.0 * phi)
    if radicand <= 1e-15:
        raise DegenerateDenominator(f"radicand {radicand!r} vanishes for c={c.as_tuple()}, phi={phi}")
    root = math.sqrt(radicand)
    raw = (math.sqrt(2.0) * abs(c.c3) - (1.0 - D) ** 2 * root) / ((2.0 - D) * D * root)
    clipped = None
    mu_star = raw
    if raw < 0.0:
        mu_star, clipped = 0.0, "below"
    elif raw > 1.0:
        mu_star, clipped = 1.0, "above"
    kind = ChannelKind.PHASE_DAMPING
    above, below = _regimes(kind, c, D, phi, mu_star)
    return ThresholdResult(mu_star, above, below, False, raw, clipped)


def ad_threshold(
    c: ResourceParams, D: float, phi: float, samples: int = 101, tol: float = 1e-12
) -> ThresholdResult:
    """Amplitude-damping threshold: first root of F_theta(0) - F_theta(pi/2) in mu.

    The difference is sampled on ``samples`` points of [0, 1] and the first
    bracketed sign change refined by bisection to width ``tol``. Without a
    sign change ``mu_star`` is None and both locations name the dominant
    regime; if the difference is below 1e-12 everywhere the result is
    flagged degenerate.
    """
    kind = ChannelKind.AMPLITUDE_DAMPING
    if not (0.0 <= D <= 1.0):
        raise OutOfRange(f"D={D!r} outside [0, 1]")
    mus = [i / (samples - 1) for i in range(samples)]
    g = [pole_minus_equator(kind, c, D, phi, m) for m in mus]
    if max(abs(x) for x in g) <= 1e-12:
        return ThresholdResult(None, None, None, degenerate=True)
    for i in range(samples - 1):
        lo, hi = mus[i], mus[i + 1]
        glo, ghi = g[i], g[i + 1]
        if glo == 0.0 and 0 < i:
            root = lo
            break
        if glo * ghi < 0.0:
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                gm = pole_minus_equator(kind, c, D, phi, mid)
                if gm == 0.0:
                    lo = hi = mid
                    break
                if (gm < 0.0) == (glo < 0.0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            root = 0.5 * (lo + hi)
            break
    else:
        mean = sum(g) / len(g)
        loc = POLES if mean > 0 else EQUATOR
        return ThresholdResult(None, loc, loc)
    above, below = _regimes(kind, c, D, phi, root)
    return ThresholdResult(root, above, below, False, root)


def de_optimal_location(c: ResourceParams, phi: float, tie_tol: float = 1e-12) -> tuple[float, ...]:
    """Depolarizing optimum for theta: the equator iff c3^2 >= c1^2 cos^2 + c2^2 sin^2.

    The Lambda^2 / 81 prefactor scales both candidates equally, so the
    answer does not depend on D or mu.
    """
    pole_value = c.c1**2 * math.cos(phi) ** 2 + c.c2**2 * math.sin(phi) ** 2
    return EQUATOR if c.c3**2 >= pole_value - tie_tol else POLES


def ad_f_theta_equator(c3: float, D: float, mu: float) -> float:
    """Amplitude-damping F_theta at theta = pi/2."""
    return (c3 * ((2.0 - D) * D * (1.0 - mu) - 1.0) - D**2 * (1.0 - mu)) ** 2


def golden_minimize(f, lo: float, hi: float, tol: float = 1e-10, scan: int = 201) -> float:
    """Minimize ``f`` on [lo, hi]: coarse scan, then golden section around the best sample."""
    xs = [lo + (hi - lo) * i / (scan - 1) for i in range(scan)]
    best = min(range(scan), key=lambda i: f(xs[i]))
    a = xs[max(best - 1, 0)]
    b = xs[min(best + 1, scan - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def ad_min_location(c3: float, mu: float) -> float:
    """Decoherence strength D minimizing amplitude-damping F_theta(pi/2).

    Non-negative c3 gives c3 / (1 + c3) for every mu. Negative c3 uses the
    root c3 / (c3 (1 - mu) - sqrt((c3 + c3^2 mu)(mu - 1))) where it lands in
    [0, 1], and a golden-section search over D otherwise.
    """
    if abs(c3) > 1.0:
        raise OutOfRange(f"c3={c3!r} outside [-1, 1]")
    if not (0.0 <= mu <= 1.0):
        raise OutOfRange(f"mu={mu!r} outside [0, 1]")
    if c3 >= 0.0:
        return c3 / (1.0 + c3)
    radicand = (c3 + c3 * c3 * mu) * (mu - 1.0)
    if radicand >= -1e-14:
        den = c3 * (1.0 - mu) - math.sqrt(max(radicand, 0.0))
        if den != 0.0:
            d_min = c3 / den
            if 0.0 <= d_min <= 1.0:
                return d_min
    return golden_minimize(lambda d: ad_f_theta_equator(c3, d, mu), 0.0, 1.0)
