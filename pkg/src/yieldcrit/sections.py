"""Meridian, deviatoric and biaxial sections of a yield surface.

Sampling strategies:

  * meridian: q = q_surface(p, theta) on a uniform p grid over the cap;
  * deviatoric: the polar curve r(theta) = q_surface(at_p, theta) on the
    fundamental sector [0, pi/3], expanded to the full deviatoric plane by
    the six-fold symmetry of isotropy;
  * biaxial (sigma3 = 0): convex ray-shooting from an interior point.
    Convexity of a certified criterion makes the sublevel set convex, so
    each ray crosses the surface exactly once and bisection resolves the
    crossing to machine precision.

Every emitted sample satisfies the yield condition to a normalized
residual of 1e-10 or better.  Curves serialize to CSV (with a '#' header
echoing the parameter JSON) or to a self-contained SVG.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .criterion import CapMeridian, Criterion, surface_q, yield_value
from .errors import EmptySlice, OutsideCap, UnboundedDomain
from .invariants import invariants

_THETA_MAX = math.pi / 3.0


@dataclass(frozen=True)
class SectionCurve:
    """An ordered planar sample of one yield-surface section."""

    kind: str
    samples: np.ndarray  # (n, 2)
    xlabel: str
    ylabel: str
    params_echo: tuple[tuple[str, object], ...]

    def echo_dict(self) -> dict:
        return {k: v for k, v in self.params_echo}


def _echo(crit: Criterion) -> tuple[tuple[str, object], ...]:
    return tuple(crit.to_dict().items())


def normalized_residual(crit: Criterion, stress) -> float:
    """|F| normalized by the local magnitude of the competing terms."""
    inv = invariants(stress)
    f = crit.meridian.f(inv.p)
    F = yield_value(stress, crit)
    if math.isinf(F):
        return math.inf
    if isinstance(crit.meridian, CapMeridian):
        floor = 0.01 * crit.meridian.pc
    else:
        floor = 0.01 * crit.meridian.Gamma * (abs(inv.p) + crit.meridian.c)
    s0 = max(crit.B * inv.q, abs(f), floor, 1e-300)
    return abs(F) / s0


def sample_meridian(
    crit: Criterion, theta: float, n: int, p_range: tuple[float, float] | None = None
) -> SectionCurve:
    """Sample the meridian section q(p) at fixed Lode angle.

    The cap meridian is sampled on [-c, pc] (endpoints land exactly on the
    apices with q = 0).  A linear meridian has no finite cap, so an
    explicit ``p_range`` is required there.
    """
    if n < 2:
        raise ValueError(f"need at least 2 sample points, got {n}")
    if p_range is None:
        if not isinstance(crit.meridian, CapMeridian):
            raise UnboundedDomain(
                "linear meridian has an unbounded domain; pass an explicit p_range"
            )
        p_range = (-crit.meridian.c, crit.meridian.pc)
    ps = np.linspace(p_range[0], p_range[1], n)
    qs = []
    for p in ps:
        q = surface_q(float(p), theta, crit)
        qs.append(math.nan if q is None else q)
    samples = np.column_stack([ps, qs])
    return SectionCurve(
        kind="meridian", samples=samples, xlabel="p", ylabel="q", params_echo=_echo(crit)
    )


def sample_deviatoric(
    crit: Criterion, at_p: float, n: int, normalize: bool = False
) -> SectionCurve:
    """Sample the deviatoric section at fixed pressure.

    Computes r(theta) = q_surface on the fundamental sector and reflects
    it through the six-fold symmetry into a closed curve over the full
    deviatoric plane (Cartesian coordinates, triaxial-extension meridian
    along +x).  ``normalize`` divides by the radius at theta = pi/3 so
    different shapes coincide at triaxial compression.
    """
    if n < 2:
        raise ValueError(f"need at least 2 sample points, got {n}")
    if isinstance(crit.meridian, CapMeridian):
        phi = crit.meridian.phi(at_p)
        if not (0.0 < phi < 1.0):
            raise OutsideCap(f"p={at_p} has Phi={phi:.6g} outside (0, 1)")
    thetas = np.linspace(0.0, _THETA_MAX, n)
    radii = np.array([surface_q(at_p, float(t), crit) for t in thetas])
    if normalize:
        radii = radii / radii[-1]
    # Six-fold expansion: alternate direct and mirrored copies of the
    # fundamental sector, dropping duplicated joints.
    xs: list[float] = []
    ys: list[float] = []
    for sector in range(6):
        base = sector * _THETA_MAX
        if sector % 2 == 0:
            phis = base + thetas
            rr = radii
        else:
            phis = base + (_THETA_MAX - thetas[::-1])
            rr = radii[::-1]
        start = 1 if sector > 0 else 0
        xs.extend(rr[start:] * np.cos(phis[start:]))
        ys.extend(rr[start:] * np.sin(phis[start:]))
    # Last point coincides with the first (phi = 2 pi); drop it.
    samples = np.column_stack([xs[:-1], ys[:-1]])
    return SectionCurve(
        kind="deviatoric", samples=samples, xlabel="x", ylabel="y", params_echo=_echo(crit)
    )


def _biaxial_F(crit: Criterion, x: float, y: float) -> float:
    return yield_value((x, y, 0.0), crit)


def _biaxial_center(crit: Criterion) -> tuple[float, float]:
    """Interior point of the sigma3 = 0 slice, found on the diagonal."""
    if isinstance(crit.meridian, CapMeridian):
        # p = -2s/3 along (s, s, 0); the cap bounds the search bracket.
        s_lo = -1.5 * crit.meridian.pc
        s_hi = 1.5 * crit.meridian.c
        span = s_hi - s_lo
        s_lo += 1e-9 * span
        s_hi -= 1e-9 * span
        if span <= 0.0:
            raise EmptySlice("empty cap on the biaxial diagonal")
    else:
        ref = crit.meridian.c + 1.0
        s_lo, s_hi = -1e3 * ref, 1.5 * crit.meridian.c
    res = minimize_scalar(
        lambda s: _biaxial_F(crit, s, s), bounds=(s_lo, s_hi), method="bounded",
        options={"xatol": 1e-12 * max(1.0, abs(s_lo), abs(s_hi))},
    )
    if not (res.fun < 0.0):
        raise EmptySlice("no interior point with F < 0 on the sigma3 = 0 slice")
    return float(res.x), float(res.fun)


def _ray_crossing(crit: Criterion, cx: float, cy: float, dx: float, dy: float, t0: float) -> float:
    """Unique F = 0 crossing along the ray (cx, cy) + t (dx, dy), t > 0."""
    t_hi = t0
    for _ in range(200):
        if _biaxial_F(crit, cx + t_hi * dx, cy + t_hi * dy) > 0.0:
            break
        t_hi *= 2.0
    else:
        raise UnboundedDomain("ray never leaves the elastic range; slice is unbounded")
    t_lo = 0.0
    for _ in range(200):
        mid = 0.5 * (t_lo + t_hi)
        if mid == t_lo or mid == t_hi:
            break
        if _biaxial_F(crit, cx + mid * dx, cy + mid * dy) > 0.0:
            t_hi = mid
        else:
            t_lo = mid
    t = t_lo if t_lo > 0.0 else t_hi
    # Convexity contract: F < 0 strictly between the center and the crossing.
    probe = np.linspace(0.05, 0.95, 19) * t
    for tp in probe:
        assert _biaxial_F(crit, cx + tp * dx, cy + tp * dy) < 0.0, (
            "F changed sign more than once along a ray; the criterion is not convex"
        )
    return t


def sample_biaxial(crit: Criterion, n: int = 200, normalize: bool = False) -> SectionCurve:
    """Trace the biaxial yield locus {F(sigma1, sigma2, 0) = 0}.

    Rays are shot from the interior minimum of F along the diagonal; each
    crossing is resolved by bisection to machine precision.  ``normalize``
    divides both axes by the computed uniaxial tensile intercept, which
    must be positive for the option to make sense.
    """
    if n < 3:
        raise ValueError(f"need at least 3 rays, got {n}")
    s_center, _ = _biaxial_center(crit)
    if isinstance(crit.meridian, CapMeridian):
        scale = crit.meridian.pc + crit.meridian.c
    else:
        scale = crit.meridian.c + 1.0
    pts = np.empty((n, 2))
    for j in range(n):
        phi = 2.0 * math.pi * j / n
        dx, dy = math.cos(phi), math.sin(phi)
        t = _ray_crossing(crit, s_center, s_center, dx, dy, 1e-3 * scale)
        x, y = s_center + t * dx, s_center + t * dy
        # A ray that lands on a cap apex (the origin, for c = 0) stops a
        # rounding error short of the exact root, where F has a square
        # root singularity; snap to the root itself.
        if max(abs(x), abs(y)) <= 1e-9 * scale and _biaxial_F(crit, 0.0, 0.0) == 0.0:
            x = y = 0.0
        pts[j] = (x, y)
    if normalize:
        ft = _uniaxial_tensile_intercept(crit, scale)
        pts = pts / ft
    return SectionCurve(
        kind="biaxial",
        samples=pts,
        xlabel="sigma1" if not normalize else "sigma1/ft",
        ylabel="sigma2" if not normalize else "sigma2/ft",
        params_echo=_echo(crit),
    )


def _uniaxial_tensile_intercept(crit: Criterion, scale: float) -> float:
    if not (_biaxial_F(crit, 0.0, 0.0) < 0.0):
        raise EmptySlice("origin is not inside the surface; no tensile intercept to normalize by")
    return _ray_crossing(crit, 0.0, 0.0, 1.0, 0.0, 1e-3 * scale)


def polygon_is_convex(points: np.ndarray, tol: float = 1e-9) -> bool:
    """Cross-product sign test for a closed polygon given as (n, 2) rows.

    Degenerate (zero-length) edges are tolerated; the tolerance is
    relative to the polygon's extent.
    """
    pts = np.asarray(points, dtype=float)
    edges = np.roll(pts, -1, axis=0) - pts
    cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(
        edges, -1, axis=0
    )[:, 0]
    extent = float(np.max(np.abs(pts))) or 1.0
    band = tol * extent * extent
    return bool(np.all(cross >= -band) or np.all(cross <= band))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def curve_to_csv(curve: SectionCurve) -> str:
    """CSV text: '#' header echoing the parameter JSON, then x,y rows."""
    lines = ["# " + json.dumps(curve.echo_dict())]
    lines.append(f"{curve.xlabel},{curve.ylabel}")
    for x, y in curve.samples:
        lines.append(f"{float(x)!r},{float(y)!r}")
    return "\n".join(lines) + "\n"


def curve_to_svg(curve: SectionCurve, width: int = 640, height: int = 480) -> str:
    """Self-contained SVG with one closed path, auto-fit viewBox and axes."""
    pts = curve.samples[np.all(np.isfinite(curve.samples), axis=1)]
    xs, ys = pts[:, 0], -pts[:, 1]  # SVG y axis points down
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    dx = (x1 - x0) or 1.0
    dy = (y1 - y0) or 1.0
    mx, my = 0.1 * dx, 0.1 * dy
    vb = (x0 - mx, y0 - my, dx + 2 * mx, dy + 2 * my)
    stroke = 0.004 * max(dx, dy)
    path = "M " + " L ".join(f"{float(x)!r} {float(y)!r}" for x, y in zip(xs, ys)) + " Z"
    font = 0.05 * max(dx, dy)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{vb[0]!r} {vb[1]!r} {vb[2]!r} {vb[3]!r}">',
        f'<line x1="{vb[0]!r}" y1="0" x2="{vb[0] + vb[2]!r}" y2="0" '
        f'stroke="#888" stroke-width="{stroke / 2!r}"/>',
        f'<line x1="0" y1="{vb[1]!r}" x2="0" y2="{vb[1] + vb[3]!r}" '
        f'stroke="#888" stroke-width="{stroke / 2!r}"/>',
        f'<text x="{x1!r}" y="{-font / 2!r}" font-size="{font!r}">{curve.xlabel}</text>',
        f'<text x="{font / 2!r}" y="{y0!r}" font-size="{font!r}">{curve.ylabel}</text>',
        f'<path d="{path}" fill="none" stroke="#000" stroke-width="{stroke!r}"/>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"
