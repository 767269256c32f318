"""Bound-constrained least-squares calibration of criterion parameters.

Experimental yield points, given either as invariant triples (p, q, theta)
or as principal stresses, are fitted by minimizing one of two residual
definitions:

  * ``meridian_distance``: (q_i - q_surface(p_i, theta_i)) / mean(q),
    matching how meridian and deviatoric section plots are compared;
  * ``function_value``: F(sigma_i) / s0_i with a per-point normalization
    s0_i = max(B q_i, |f(p_i)|, 0.01 pc), which handles mixed data.

Points falling outside the elastic cap do not see the raw +inf of the
meridian function; they get a finite penalty residual w (1 + dist) so the
objective stays continuous for the optimizer.

Box bounds are mapped onto the open admissible parameter intervals by a
smooth logistic reparameterization, keeping the optimizer unconstrained
and the iterates strictly away from the corner cases (alpha in {0, 2},
gamma = 1).  The driver is damped least squares with a numeric Jacobian,
with a simplex fallback, run from a seeded multi-start when no initial
guess is supplied.  Fits are deterministic given (dataset, init, seed).
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np
from scipy.optimize import least_squares, minimize
from scipy.special import expit

from .convexity import ConvexityReport, certify
from .criterion import (
    CapMeridian,
    CosineLode,
    Criterion,
    GudehusArgyris,
    LinearMeridian,
    PowerLaw,
    WillamWarnke,
    cap_h,
)
from .errors import InsufficientData, ParseError, ValidationError
from .invariants import invariants

_THETA_MAX = math.pi / 3.0

FITTABLE = ("M", "pc", "c", "m", "alpha", "beta", "gamma", "Gamma", "A", "e", "k", "n")


# ---------------------------------------------------------------------------
# Dataset
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FitDataset:
    """Observed yield points as (p, q, theta) rows with positive weights."""

    points: np.ndarray  # (n, 3)
    weights: np.ndarray  # (n,)
    meta: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValidationError(f"points must be an (n, 3) array, got shape {pts.shape}")
        if w.shape != (pts.shape[0],):
            raise ValidationError("weights must match the number of points")
        if np.any(w <= 0.0):
            raise ValidationError("weights must be positive")
        th = pts[:, 2]
        if np.any(th < -1e-12) or np.any(th > _THETA_MAX + 1e-12):
            raise ValidationError("theta entries must lie in [0, pi/3]")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.points.shape[0]


def _dataset_from_rows(rows, weights, meta) -> FitDataset:
    return FitDataset(points=np.array(rows, dtype=float), weights=np.array(weights), meta=meta)


def load_dataset(source, meta: Mapping[str, str] | None = None) -> FitDataset:
    """Parse a yield-point CSV into a FitDataset.

    ``source`` may be a path, an open text file, or the CSV text itself.
    The header row is either "p,q,theta[,w]" (invariants, radians) or
    "s1,s2,s3[,w]" (principal stresses, converted internally).  Lines
    starting with '#' are comments.  Raises ParseError with the offending
    line number for malformed rows and ValidationError for out-of-range
    values.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        s = os.fspath(source) if not isinstance(source, str) else source
        if isinstance(s, str) and "\n" not in s and os.path.exists(s):
            with open(s, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = s

    header = None
    rows: list[tuple[float, float, float]] = []
    weights: list[float] = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if header is None:
            header = [f.lower() for f in fields]
            if header[:3] == ["p", "q", "theta"]:
                principal = False
            elif header[:3] == ["s1", "s2", "s3"]:
                principal = True
            else:
                raise ParseError(
                    f"header must start with 'p,q,theta' or 's1,s2,s3', got {line!r}", lineno
                )
            has_w = len(header) == 4 and header[3] == "w"
            if len(header) > 4 or (len(header) == 4 and not has_w):
                raise ParseError(f"unexpected columns in header {line!r}", lineno)
            continue
        expected = 4 if has_w else 3
        if len(fields) != expected:
            raise ParseError(f"expected {expected} fields, got {len(fields)}", lineno)
        try:
            values = [float(f) for f in fields]
        except ValueError as exc:
            raise ParseError(str(exc), lineno)
        w = values[3] if has_w else 1.0
        if w <= 0.0:
            raise ValidationError(f"line {lineno}: weight must be positive, got {w}")
        if principal:
            inv = invariants(values[:3])
            rows.append((inv.p, inv.q, inv.theta))
        else:
            p, q, th = values[:3]
            if q < 0.0:
                raise ValidationError(f"line {lineno}: q must be nonnegative, got {q}")
            if not (-1e-12 <= th <= _THETA_MAX + 1e-12):
                raise ValidationError(f"line {lineno}: theta={th} outside [0, pi/3]")
            rows.append((p, q, th))
        weights.append(w)
    if header is None or not rows:
        raise ParseError("no data rows found", None)
    meta_t = tuple(sorted((meta or {}).items()))
    return _dataset_from_rows(rows, weights, meta_t)


# ---------------------------------------------------------------------------
# Problem definition
# ---------------------------------------------------------------------------

# Default admissible box bounds for the dimensionless parameters; stress
# scaled parameters (pc, c, A) default to a window around the template.
_DEFAULT_BOUNDS = {
    "M": (1e-4, 1e3),
    "m": (1.0 + 1e-6, 60.0),
    "alpha": (1e-6, 2.0 - 1e-6),
    "beta": (0.0, 2.0),  # convex for every gamma
    "gamma": (0.0, 1.0 - 1e-9),
    "Gamma": (1e-4, 1e3),
    "e": (0.5 + 1e-9, 1.0),
    "k": (0.777 + 1e-9, 1.0),
    "n": (1e-3, 40.0),
}


@dataclass(frozen=True)
class FitProblem:
    """A calibration problem: template criterion, free names, bounds, mode."""

    template: Criterion
    free: tuple[str, ...]
    bounds: tuple[tuple[str, tuple[float, float]], ...] = ()
    residual_mode: str = "meridian_distance"

    def __post_init__(self):
        if self.residual_mode not in ("meridian_distance", "function_value"):
            raise ValidationError(f"unknown residual mode {self.residual_mode!r}")
        free = tuple(self.free)
        if len(set(free)) != len(free):
            raise ValidationError(f"duplicate free parameters in {free}")
        for name in free:
            if name not in FITTABLE:
                raise ValidationError(f"unknown parameter {name!r}; choose from {FITTABLE}")
            self._locate(name)  # raises if the template has no such field
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "bounds", tuple(self.bounds))
        for name, (lo, hi) in self.bounds:
            if not (lo < hi):
                raise ValidationError(f"empty bound interval for {name!r}: ({lo}, {hi})")

    def _locate(self, name: str) -> str:
        mer, shape = self.template.meridian, self.template.shape
        if name in ("M", "pc", "c", "m", "alpha") and isinstance(mer, CapMeridian):
            return "meridian"
        if name in ("Gamma", "c") and isinstance(mer, LinearMeridian):
            return "meridian"
        if name in ("beta", "gamma") and isinstance(shape, CosineLode):
            return "shape"
        if name in ("beta", "n") and isinstance(shape, PowerLaw):
            return "shape"
        if name == "e" and isinstance(shape, WillamWarnke):
            return "shape"
        if name == "k" and isinstance(shape, GudehusArgyris):
            return "shape"
        if name == "A":
            return "criterion"
        raise ValidationError(f"parameter {name!r} does not apply to this template")

    def bound_of(self, name: str) -> tuple[float, float]:
        for key, interval in self.bounds:
            if key == name:
                return interval
        if name in _DEFAULT_BOUNDS:
            return _DEFAULT_BOUNDS[name]
        # Stress-scaled defaults from the template value.
        current = self.value_of(name)
        if name == "pc":
            return (current / 1e3, current * 1e3)
        if name == "c":
            if current > 0.0:
                ref = current
            elif isinstance(self.template.meridian, CapMeridian):
                ref = self.template.meridian.pc
            else:
                ref = 1.0
            return (0.0, 10.0 * ref)
        if name == "A":
            ref = current if current > 0.0 else 1.0
            return (0.0, 1e3 * ref)
        raise ValidationError(f"no bounds available for {name!r}")

    def value_of(self, name: str) -> float:
        where = self._locate(name)
        if where == "criterion":
            return getattr(self.template, name)
        return getattr(self.template.meridian if where == "meridian" else self.template.shape, name)

    def with_values(self, values: Mapping[str, float]) -> Criterion:
        """Template with the given parameter overrides applied."""
        mer, shape = self.template.meridian, self.template.shape
        crit_kw = {}
        mer_kw = {}
        shape_kw = {}
        for name, value in values.items():
            where = self._locate(name)
            if where == "criterion":
                crit_kw[name] = float(value)
            elif where == "meridian":
                mer_kw[name] = float(value)
            else:
                shape_kw[name] = float(value)
        if mer_kw:
            mer = replace(mer, **mer_kw)
        if shape_kw:
            shape = replace(shape, **shape_kw)
        return replace(self.template, meridian=mer, shape=shape, **crit_kw)


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------


def _surface_q_array(crit: Criterion, p: np.ndarray, theta: np.ndarray):
    """Vectorized surface radius; NaN where the surface does not exist."""
    g = np.asarray(crit.shape.g(theta), dtype=float)
    out = np.full(p.shape, math.nan)
    if isinstance(crit.meridian, CapMeridian):
        mer = crit.meridian
        phi = (p + mer.c) / (mer.pc + mer.c)
        ok = (phi >= 0.0) & (phi <= 1.0)
        h = np.maximum(0.0, cap_h(np.where(ok, phi, 0.5), mer.m, mer.alpha))
        f = -mer.M * mer.pc * np.sqrt(h)
    else:
        f = -crit.meridian.Gamma * (p + crit.meridian.c)
        ok = f <= 0.0
    if crit.A == 0.0:
        q = -f * g / crit.B
    else:
        bg = crit.B / g
        q = (-bg + np.sqrt(bg * bg - 4.0 * crit.A * np.where(ok, f, 0.0))) / (2.0 * crit.A)
    out[ok] = q[ok]
    return out


def _cap_distance(crit: Criterion, p: np.ndarray) -> np.ndarray:
    """dist(Phi, [0,1]) for cap meridians, a scaled analogue otherwise."""
    if isinstance(crit.meridian, CapMeridian):
        mer = crit.meridian
        phi = (p + mer.c) / (mer.pc + mer.c)
        return np.maximum(0.0, np.maximum(-phi, phi - 1.0))
    scale = max(crit.meridian.c, float(np.mean(np.abs(p))), 1e-30)
    return np.maximum(0.0, -(p + crit.meridian.c)) / scale


def residual_vector(crit: Criterion, dataset: FitDataset, mode: str) -> np.ndarray:
    """Weighted, normalized residuals of a criterion against a dataset."""
    p = dataset.points[:, 0]
    q = dataset.points[:, 1]
    th = dataset.points[:, 2]
    w = dataset.weights
    qs = _surface_q_array(crit, p, th)
    outside = np.isnan(qs)
    penalty = w * (1.0 + _cap_distance(crit, p))
    if mode == "meridian_distance":
        qbar = float(np.mean(q))
        if qbar <= 0.0:
            qbar = 1.0
        r = np.where(outside, penalty, w * (q - np.where(outside, 0.0, qs)) / qbar)
        return r
    if mode != "function_value":
        raise ValidationError(f"unknown residual mode {mode!r}")
    g = np.asarray(crit.shape.g(th), dtype=float)
    if isinstance(crit.meridian, CapMeridian):
        mer = crit.meridian
        phi = (p + mer.c) / (mer.pc + mer.c)
        inside = (phi >= 0.0) & (phi <= 1.0)
        h = np.maximum(0.0, cap_h(np.where(inside, phi, 0.5), mer.m, mer.alpha))
        f = -mer.M * mer.pc * np.sqrt(h)
        floor = 0.01 * mer.pc
    else:
        f = -crit.meridian.Gamma * (p + crit.meridian.c)
        inside = np.ones(p.shape, dtype=bool)
        floor = 0.01 * max(float(np.mean(crit.B * q)), 1e-30)
    F = crit.A * q**2 + crit.B * q / g + f
    s0 = np.maximum(np.maximum(crit.B * q, np.abs(f)), floor)
    return np.where(inside, w * F / s0, penalty)


def residuals(problem: FitProblem, params: Mapping[str, float], dataset: FitDataset) -> np.ndarray:
    """Residual vector at the given free-parameter values."""
    for name in params:
        if name in problem.free:
            lo, hi = problem.bound_of(name)
            v = params[name]
            if not (lo - 1e-12 <= v <= hi + 1e-12):
                raise ValidationError(f"{name}={v} outside its bounds ({lo}, {hi})")
    crit = problem.with_values(params)
    return residual_vector(crit, dataset, problem.residual_mode)


def goodness(crit: Criterion, dataset: FitDataset, mode: str = "meridian_distance"):
    """(rms, max_abs, per_point) residual statistics at fixed parameters."""
    r = residual_vector(crit, dataset, mode)
    return float(np.sqrt(np.mean(r * r))), float(np.max(np.abs(r))), r


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    """Calibrated criterion with residual statistics and a convexity audit."""

    criterion: Criterion
    values: tuple[tuple[str, float], ...]
    rms: float
    iterations: int
    converged: bool
    convexity: ConvexityReport

    def to_dict(self) -> dict:
        d = self.criterion.to_dict()
        d["rms"] = self.rms
        d["converged"] = self.converged
        d["free"] = {k: v for k, v in self.values}
        d["iterations"] = self.iterations
        return d


def _to_unit(v: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    u = (v - lo) / (hi - lo)
    return np.clip(u, 1e-12, 1.0 - 1e-12)


def _fwd(z: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    # logistic map from unbounded z onto the open interval (lo, hi)
    return lo + (hi - lo) * expit(z)


def _inv(v: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    u = _to_unit(v, lo, hi)
    return np.log(u / (1.0 - u))


def fit(
    problem: FitProblem,
    dataset: FitDataset,
    init: Mapping[str, float] | None = None,
    seed: int = 0,
    n_starts: int = 16,
) -> FitResult:
    """Calibrate the problem's free parameters against the dataset.

    A single damped least-squares run starts from ``init`` when given;
    otherwise ``n_starts`` seeded starts are drawn uniformly inside the
    bounds and the best result wins, ties broken by start index so the
    outcome is deterministic.  The returned rms never exceeds the rms at
    the initial point.  ``converged`` is False when no run converged or
    when the result fails convexity certification; the best parameters so
    far are still returned.

    Raises InsufficientData when the dataset has fewer points than there
    are free parameters.
    """
    names = problem.free
    if len(dataset) < len(names):
        raise InsufficientData(
            f"{len(dataset)} points cannot determine {len(names)} free parameters"
        )
    lo = np.array([problem.bound_of(n)[0] for n in names])
    hi = np.array([problem.bound_of(n)[1] for n in names])

    def resid_z(z: np.ndarray) -> np.ndarray:
        values = dict(zip(names, _fwd(z, lo, hi)))
        crit = problem.with_values(values)
        return residual_vector(crit, dataset, problem.residual_mode)

    def rms_of(z: np.ndarray) -> float:
        r = resid_z(z)
        return float(np.sqrt(np.mean(r * r)))

    if init is not None:
        missing = [n for n in names if n not in init]
        if missing:
            raise ValidationError(f"init must cover every free parameter; missing {missing}")
        starts = [np.array([init[n] for n in names], dtype=float)]
    else:
        rng = np.random.default_rng(seed)
        starts = [lo + (hi - lo) * rng.uniform(0.05, 0.95, size=len(names)) for _ in range(n_starts)]

    best = None  # (rms, start_index, z, nfev, success)
    for idx, v0 in enumerate(starts):
        z0 = _inv(v0, lo, hi)
        rms0 = rms_of(z0)
        cand = (rms0, idx, z0, 0, False)
        try:
            res = least_squares(resid_z, z0, method="lm", max_nfev=200 * (len(names) + 1))
            rms1 = float(np.sqrt(np.mean(res.fun**2)))
            if rms1 <= rms0:
                cand = (rms1, idx, res.x, int(res.nfev), bool(res.success))
        except Exception:
            # Damped least squares failed outright; fall back to a simplex
            # search on the summed squares.
            res = minimize(
                lambda z: float(np.sum(resid_z(z) ** 2)),
                z0,
                method="Nelder-Mead",
                options={"maxiter": 2000, "xatol": 1e-12, "fatol": 1e-16},
            )
            rms1 = math.sqrt(res.fun / len(dataset))
            if rms1 <= rms0:
                cand = (rms1, idx, res.x, int(res.get("nfev", 0)), bool(res.success))
        if best is None or (cand[0], cand[1]) < (best[0], best[1]):
            best = cand

    rms, _, z, nfev, success = best
    values = {n: float(v) for n, v in zip(names, _fwd(z, lo, hi))}
    crit = problem.with_values(values)
    report = certify(crit)
    return FitResult(
        criterion=crit,
        values=tuple(values.items()),
        rms=rms,
        iterations=nfev,
        converged=bool(success and report.admissible),
        convexity=report,
    )
