"""The seven-parameter yield criterion, its generalizations and gradients.

The yield function has the separable form

    F(sigma) = A q^2 + B q / g(theta) + f(p)

where f is the meridian function and g the deviatoric (Lode-dependence)
function.  F < 0 inside the elastic range, F = 0 on the yield surface and
F > 0 (possibly +inf) outside.  The native form uses

    f(p) = -M pc sqrt((Phi - Phi^m) (2 (1-alpha) Phi + alpha)),
    Phi  = (p + c) / (pc + c),          f = +inf for Phi outside [0, 1],

    g(theta) = 1 / cos(beta pi/6 - acos(gamma cos 3 theta) / 3),

with the seven material parameters M, pc, c, m, alpha, beta, gamma.  The
closed cap [-c, pc] gives a finite elastic range in both tension and
compression.  Alternative deviatoric shapes (power-law, Willam-Warnke,
Gudehus-Argyris) and a linear (conical) meridian share the same machinery,
including the exact gradient decomposition

    dF/dsigma = a(p) I + b(theta) s_tilde + c(theta) s_tilde_perp.

Lode angle convention: theta in [0, pi/3], theta = 0 triaxial extension,
theta = pi/3 triaxial compression (arccos-based definition; some texts use
the opposite sign convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CornerCase, DegenerateState, DomainError, ValidationError
from .invariants import Invariants, invariants

# Gradient evaluation margin at the cap ends: inside Phi < DELTA_PHI or
# Phi > 1 - DELTA_PHI the square root in a(p) loses all precision and the
# apex limit must be used instead.
DELTA_PHI = 1e-10

# Below this |sin 3 theta| the perpendicular deviatoric direction is an
# exact 0/0 and the gradient is assembled from its smooth limit (the
# c-coefficient vanishes there as well).
EPS_MERIDIAN = 1e-12

_THETA_MAX = math.pi / 3.0


def _check_theta(theta) -> np.ndarray:
    th = np.asarray(theta, dtype=float)
    if np.any(th < -1e-12) or np.any(th > _THETA_MAX + 1e-12):
        raise DomainError(f"theta must lie in [0, pi/3], got {theta}")
    return th


# ---------------------------------------------------------------------------
# Deviatoric shapes: g(theta) with hand-differentiated dg and d2g
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosineLode:
    """Native deviatoric shape 1/cos(beta pi/6 - acos(gamma cos 3t)/3).

    gamma in [0, 1) smooths/sharpens the section (gamma -> 1 approaches a
    piecewise-linear section), beta biases it between the lower and upper
    convexity limits.  beta = 1, gamma = 0 is the circle.
    """

    beta: float
    gamma: float

    kind = "bp"

    def __post_init__(self):
        if not (0.0 <= self.gamma < 1.0):
            raise ValidationError(f"gamma must lie in [0, 1), got {self.gamma}")

    def _psi(self, th):
        return self.beta * math.pi / 6.0 - np.arccos(self.gamma * np.cos(3.0 * th)) / 3.0

    def g(self, theta):
        return 1.0 / np.cos(self._psi(np.asarray(theta, dtype=float)))

    def dg(self, theta):
        th = np.asarray(theta, dtype=float)
        u = self.gamma * np.cos(3.0 * th)
        w = np.sqrt(1.0 - u * u)
        psi = self._psi(th)
        psi1 = -self.gamma * np.sin(3.0 * th) / w
        return np.tan(psi) * psi1 / np.cos(psi)

    def d2g(self, theta):
        th = np.asarray(theta, dtype=float)
        u = self.gamma * np.cos(3.0 * th)
        w = np.sqrt(1.0 - u * u)
        psi = self._psi(th)
        g = 1.0 / np.cos(psi)
        t = np.tan(psi)
        psi1 = -self.gamma * np.sin(3.0 * th) / w
        psi2 = (
            -3.0 * self.gamma * np.cos(3.0 * th) / w
            + 3.0 * self.gamma**3 * np.cos(3.0 * th) * np.sin(3.0 * th) ** 2 / w**3
        )
        return g * ((t * t + g * g) * psi1 * psi1 + t * psi2)

    def to_dict(self) -> dict:
        return {"kind": "bp", "beta": self.beta, "gamma": self.gamma}


@dataclass(frozen=True)
class PowerLaw:
    """Smooth deviatoric shape (1 + beta (1 + cos 3t))^(-1/n).

    Approaches (without reaching) the triangular section as beta grows; it
    cannot be stretched all the way to the lower convexity limit.
    """

    beta: float
    n: float

    kind = "power-law"

    def __post_init__(self):
        if self.beta < 0.0:
            raise ValidationError(f"beta must be nonnegative, got {self.beta}")
        if self.n <= 0.0:
            raise ValidationError(f"n must be positive, got {self.n}")

    def _v(self, th):
        return 1.0 + self.beta * (1.0 + np.cos(3.0 * th))

    def g(self, theta):
        return self._v(np.asarray(theta, dtype=float)) ** (-1.0 / self.n)

    def dg(self, theta):
        th = np.asarray(theta, dtype=float)
        v = self._v(th)
        v1 = -3.0 * self.beta * np.sin(3.0 * th)
        return (-1.0 / self.n) * v ** (-1.0 / self.n - 1.0) * v1

    def d2g(self, theta):
        th = np.asarray(theta, dtype=float)
        v = self._v(th)
        v1 = -3.0 * self.beta * np.sin(3.0 * th)
        v2 = -9.0 * self.beta * np.cos(3.0 * th)
        e = -1.0 / self.n
        return e * (e - 1.0) * v ** (e - 2.0) * v1 * v1 + e * v ** (e - 1.0) * v2

    def to_dict(self) -> dict:
        return {"kind": "power-law", "beta": self.beta, "n": self.n}


@dataclass(frozen=True)
class WillamWarnke:
    """Elliptic deviatoric interpolation with eccentricity e in (0.5, 1].

    e = 1 is the circle; e -> 0.5 approaches the triangular (lower
    convexity) limit.  Convex for every admissible e.  Normalized so that
    g(pi/3) = 1 and g(0) = e.
    """

    e: float

    kind = "willam-warnke"

    def __post_init__(self):
        if not (0.5 < self.e <= 1.0):
            raise ValidationError(f"e must lie in (0.5, 1], got {self.e}")

    def _parts(self, u):
        c2 = 1.0 - self.e * self.e
        t = 2.0 * self.e - 1.0
        rho = 4.0 * c2 * u * u + 5.0 * self.e * self.e - 4.0 * self.e
        return c2, t, rho

    def g(self, theta):
        u = np.cos(np.asarray(theta, dtype=float))
        c2, t, rho = self._parts(u)
        num = 2.0 * c2 * u + t * np.sqrt(rho)
        den = 4.0 * c2 * u * u + t * t
        return num / den

    def _du(self, u):
        # dg/du and d2g/du2; theta derivatives follow by the chain rule.
        c2, t, rho = self._parts(u)
        r = np.sqrt(rho)
        rho_u = 8.0 * c2 * u
        num = 2.0 * c2 * u + t * r
        den = 4.0 * c2 * u * u + t * t
        num_u = 2.0 * c2 + t * rho_u / (2.0 * r)
        den_u = 8.0 * c2 * u
        num_uu = t * (8.0 * c2 / (2.0 * r) - rho_u * rho_u / (4.0 * r**3))
        den_uu = 8.0 * c2
        g_u = (num_u * den - num * den_u) / den**2
        g_uu = (
            num_uu / den
            - (2.0 * num_u * den_u + num * den_uu) / den**2
            + 2.0 * num * den_u * den_u / den**3
        )
        return g_u, g_uu

    def dg(self, theta):
        th = np.asarray(theta, dtype=float)
        g_u, _ = self._du(np.cos(th))
        return g_u * (-np.sin(th))

    def d2g(self, theta):
        th = np.asarray(theta, dtype=float)
        g_u, g_uu = self._du(np.cos(th))
        return g_uu * np.sin(th) ** 2 + g_u * (-np.cos(th))

    def to_dict(self) -> dict:
        return {"kind": "willam-warnke", "e": self.e}


@dataclass(frozen=True)
class GudehusArgyris:
    """Rational deviatoric shape 2k / (1 + k + (1-k) cos 3t), k in (0.777, 1].

    k = 1 is the circle.  The printed lower bound 0.777 slightly undershoots
    the exact convexity boundary k = 7/9; certification scans the curvature
    and will flag k in (0.777, 7/9) as inadmissible.
    """

    k: float

    kind = "gudehus-argyris"

    def __post_init__(self):
        if not (0.777 < self.k <= 1.0):
            raise ValidationError(f"k must lie in (0.777, 1], got {self.k}")

    def _d(self, th):
        return 1.0 + self.k + (1.0 - self.k) * np.cos(3.0 * th)

    def g(self, theta):
        return 2.0 * self.k / self._d(np.asarray(theta, dtype=float))

    def dg(self, theta):
        th = np.asarray(theta, dtype=float)
        d = self._d(th)
        d1 = -3.0 * (1.0 - self.k) * np.sin(3.0 * th)
        return -2.0 * self.k * d1 / d**2

    def d2g(self, theta):
        th = np.asarray(theta, dtype=float)
        d = self._d(th)
        d1 = -3.0 * (1.0 - self.k) * np.sin(3.0 * th)
        d2 = -9.0 * (1.0 - self.k) * np.cos(3.0 * th)
        return -2.0 * self.k * d2 / d**2 + 4.0 * self.k * d1 * d1 / d**3

    def to_dict(self) -> dict:
        return {"kind": "gudehus-argyris", "k": self.k}


SHAPE_KINDS = {
    "bp": CosineLode,
    "power-law": PowerLaw,
    "willam-warnke": WillamWarnke,
    "gudehus-argyris": GudehusArgyris,
}


def shape_from_dict(d: dict):
    """Build a deviatoric shape from its JSON dict form."""
    try:
        kind = d["kind"]
    except (KeyError, TypeError):
        raise ValidationError(f"deviatoric shape needs a 'kind' key, got {d!r}")
    try:
        cls = SHAPE_KINDS[kind]
    except KeyError:
        raise ValidationError(f"unknown deviatoric kind {kind!r}")
    args = {k: float(v) for k, v in d.items() if k != "kind"}
    try:
        return cls(**args)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for deviatoric kind {kind!r}: {exc}")


# ---------------------------------------------------------------------------
# Convexity interval for the native shape (Eq. used by certification)
# ---------------------------------------------------------------------------


def lode_beta_bound(gamma: float) -> float:
    """Upper end of the convex beta interval for the native shape.

    The deviatoric section of the native shape is convex exactly for
    2 - bound <= beta <= bound.  Takes values in (2, 4] for gamma in [0, 1),
    equal to 4 at gamma = 0 and decreasing towards 2 as gamma -> 1.
    """
    if not (0.0 <= gamma < 1.0):
        raise DomainError(f"gamma must lie in [0, 1), got {gamma}")
    z = (2.0 / 3.0) * (math.pi - math.acos(gamma))
    num = 1.0 - 2.0 * math.cos(z) - 2.0 * math.cos(z) ** 2
    den = 2.0 * math.sin(z) * (1.0 - math.cos(z))
    return 3.0 - (6.0 / math.pi) * math.atan(num / den)


# ---------------------------------------------------------------------------
# Meridians
# ---------------------------------------------------------------------------


def cap_h(phi, m: float, alpha: float):
    """h(Phi) = (Phi - Phi^m)(2(1-alpha)Phi + alpha); f = -M pc sqrt(h)."""
    phi = np.asarray(phi, dtype=float)
    return (phi - phi**m) * (2.0 * (1.0 - alpha) * phi + alpha)


def cap_h1(phi, m: float, alpha: float):
    """First derivative dh/dPhi."""
    phi = np.asarray(phi, dtype=float)
    return (1.0 - m * phi ** (m - 1.0)) * (2.0 * (1.0 - alpha) * phi + alpha) + 2.0 * (
        1.0 - alpha
    ) * (phi - phi**m)


def cap_h2(phi, m: float, alpha: float):
    """Second derivative d2h/dPhi2."""
    phi = np.asarray(phi, dtype=float)
    return -m * (m - 1.0) * phi ** (m - 2.0) * (2.0 * (1.0 - alpha) * phi + alpha) + 4.0 * (
        1.0 - alpha
    ) * (1.0 - m * phi ** (m - 1.0))


@dataclass(frozen=True)
class CapMeridian:
    """Bounded meridian with tension apex at -c and compression apex at pc."""

    M: float
    pc: float
    c: float
    m: float
    alpha: float

    def __post_init__(self):
        if self.M <= 0.0:
            raise ValidationError(f"M must be positive, got {self.M}")
        if self.pc <= 0.0:
            raise ValidationError(f"pc must be positive, got {self.pc}")
        if self.c < 0.0:
            raise ValidationError(f"c must be nonnegative, got {self.c}")
        if self.m <= 1.0:
            raise ValidationError(f"m must exceed 1, got {self.m}")
        if not (0.0 < self.alpha < 2.0):
            raise ValidationError(f"alpha must lie in (0, 2), got {self.alpha}")

    def phi(self, p: float) -> float:
        return (p + self.c) / (self.pc + self.c)

    def f(self, p: float) -> float:
        """Meridian value; +inf outside the cap [-c, pc]."""
        phi = self.phi(p)
        if phi < 0.0 or phi > 1.0:
            return math.inf
        h = float(cap_h(phi, self.m, self.alpha))
        return -self.M * self.pc * math.sqrt(max(0.0, h))

    def df(self, p: float) -> float:
        """df/dp on the open interior of the cap; caller guards the ends."""
        phi = self.phi(p)
        h = float(cap_h(phi, self.m, self.alpha))
        h1 = float(cap_h1(phi, self.m, self.alpha))
        return -self.M * self.pc * h1 / (2.0 * math.sqrt(h)) / (self.pc + self.c)

    def to_dict(self) -> dict:
        return {"M": self.M, "pc": self.pc, "c": self.c, "m": self.m, "alpha": self.alpha}


@dataclass(frozen=True)
class LinearMeridian:
    """Open conical meridian f(p) = -Gamma (p + c)."""

    Gamma: float
    c: float

    def __post_init__(self):
        if self.Gamma <= 0.0:
            raise ValidationError(f"Gamma must be positive, got {self.Gamma}")
        if self.c < 0.0:
            raise ValidationError(f"c must be nonnegative, got {self.c}")

    def f(self, p: float) -> float:
        return -self.Gamma * (p + self.c)

    def df(self, p: float) -> float:
        return -self.Gamma

    def to_dict(self) -> dict:
        return {"Gamma": self.Gamma, "c": self.c}


# ---------------------------------------------------------------------------
# The seven-parameter record
# ---------------------------------------------------------------------------

_PARAM_NAMES = ("M", "pc", "c", "m", "alpha", "beta", "gamma")


@dataclass(frozen=True)
class YieldParams:
    """The seven material parameters of the native criterion.

    M > 0 controls pressure sensitivity, pc > 0 and c >= 0 are the
    isotropic compression and tension yield strengths, m > 1 and
    0 < alpha < 2 distort the meridian, beta and gamma shape the deviatoric
    section.  The default constructor also enforces the convexity interval
    2 - bound(gamma) <= beta <= bound(gamma); use :meth:`unchecked` to
    build records outside it (for demonstrations or certification tests)
    and :meth:`limit_mode` to clamp the excluded limit values gamma = 1 and
    alpha in {0, 2}.
    """

    M: float
    pc: float
    c: float
    m: float
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        # Range checks delegate to the meridian/shape constructors.
        CapMeridian(self.M, self.pc, self.c, self.m, self.alpha)
        CosineLode(self.beta, self.gamma)
        bound = lode_beta_bound(self.gamma)
        if not (2.0 - bound - 1e-9 <= self.beta <= bound + 1e-9):
            raise ValidationError(
                f"beta={self.beta} outside the convex interval "
                f"[{2.0 - bound:.6g}, {bound:.6g}] for gamma={self.gamma}; "
                "use YieldParams.unchecked to bypass"
            )

    @classmethod
    def unchecked(cls, M, pc, c, m, alpha, beta, gamma) -> "YieldParams":
        """Construct without any validation.  Downstream code may reject."""
        obj = object.__new__(cls)
        for name, value in zip(_PARAM_NAMES, (M, pc, c, m, alpha, beta, gamma)):
            object.__setattr__(obj, name, float(value))
        return obj

    @classmethod
    def limit_mode(cls, M, pc, c, m, alpha, beta, gamma):
        """Build params, substituting the excluded limit values.

        gamma >= 1 becomes 1 - 1e-9, alpha <= 0 becomes 1e-8 and
        alpha >= 2 becomes 2 - 1e-8.  Returns ``(params, warnings)`` where
        warnings lists the substitutions applied.
        """
        warnings: list[str] = []
        if gamma >= 1.0:
            warnings.append(f"gamma={gamma} replaced by 1-1e-9 (piecewise-linear limit)")
            gamma = 1.0 - 1e-9
        if alpha <= 0.0:
            warnings.append(f"alpha={alpha} replaced by 1e-8 (corner limit)")
            alpha = 1e-8
        elif alpha >= 2.0:
            warnings.append(f"alpha={alpha} replaced by 2-1e-8 (corner limit)")
            alpha = 2.0 - 1e-8
        return cls(M, pc, c, m, alpha, beta, gamma), tuple(warnings)

    def meridian(self) -> CapMeridian:
        return CapMeridian(self.M, self.pc, self.c, self.m, self.alpha)

    def shape(self) -> CosineLode:
        return CosineLode(self.beta, self.gamma)

    def criterion(self, A: float = 0.0, B: float = 1.0) -> "Criterion":
        return Criterion(meridian=self.meridian(), shape=self.shape(), A=A, B=B)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in _PARAM_NAMES}


# ---------------------------------------------------------------------------
# Criterion: meridian + shape + quadratic extension
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Criterion:
    """A yield criterion F = A q^2 + B q / g(theta) + f(p).

    A >= 0 (units 1/stress) is the quadratic deviatoric coefficient of the
    four-parameter concrete-type extension; A = 0, B = 1 with the cap
    meridian and the native shape recovers the plain seven-parameter form.
    """

    meridian: CapMeridian | LinearMeridian
    shape: CosineLode | PowerLaw | WillamWarnke | GudehusArgyris
    A: float = 0.0
    B: float = 1.0

    def __post_init__(self):
        if self.A < 0.0:
            raise ValidationError(f"A must be nonnegative, got {self.A}")
        if self.B <= 0.0:
            raise ValidationError(f"B must be positive, got {self.B}")

    @classmethod
    def from_params(cls, params: YieldParams, A: float = 0.0, B: float = 1.0) -> "Criterion":
        return cls(
            meridian=CapMeridian(params.M, params.pc, params.c, params.m, params.alpha),
            shape=CosineLode(params.beta, params.gamma),
            A=A,
            B=B,
        )

    def to_dict(self) -> dict:
        d: dict = {}
        if isinstance(self.meridian, CapMeridian):
            d["meridian"] = "bp"
            d.update(self.meridian.to_dict())
        else:
            d["meridian"] = "linear"
            d.update(self.meridian.to_dict())
        if isinstance(self.shape, CosineLode):
            d["beta"] = self.shape.beta
            d["gamma"] = self.shape.gamma
        else:
            d["deviatoric"] = self.shape.to_dict()
        d["A"] = self.A
        d["B"] = self.B
        return d


def criterion_from_dict(d: dict, unchecked: bool = False) -> Criterion:
    """Build a Criterion from the parameter-file dict form.

    Accepted keys: M, pc, c, m, alpha, beta, gamma plus the optional
    meridian ("bp" | "linear"), Gamma, A, B and a "deviatoric" object
    {"kind": ...}.  ``unchecked`` skips the beta-interval validation of the
    native seven-parameter record (range checks still apply).
    """
    if not isinstance(d, dict):
        raise ValidationError(f"parameter JSON must be an object, got {type(d).__name__}")
    kind = d.get("meridian", "bp")
    try:
        if kind == "bp":
            meridian = CapMeridian(
                M=float(d["M"]),
                pc=float(d["pc"]),
                c=float(d["c"]),
                m=float(d["m"]),
                alpha=float(d["alpha"]),
            )
        elif kind == "linear":
            meridian = LinearMeridian(Gamma=float(d["Gamma"]), c=float(d.get("c", 0.0)))
        else:
            raise ValidationError(f"unknown meridian kind {kind!r}")
    except KeyError as exc:
        raise ValidationError(f"missing parameter {exc.args[0]!r} for meridian {kind!r}")
    if "deviatoric" in d:
        shape = shape_from_dict(d["deviatoric"])
    else:
        try:
            shape = CosineLode(beta=float(d["beta"]), gamma=float(d["gamma"]))
        except KeyError as exc:
            raise ValidationError(f"missing parameter {exc.args[0]!r} for deviatoric shape")
    crit = Criterion(meridian=meridian, shape=shape, A=float(d.get("A", 0.0)), B=float(d.get("B", 1.0)))
    if not unchecked and isinstance(meridian, CapMeridian) and isinstance(shape, CosineLode):
        bound = lode_beta_bound(shape.gamma)
        if not (2.0 - bound - 1e-9 <= shape.beta <= bound + 1e-9):
            raise ValidationError(
                f"beta={shape.beta} outside the convex interval for gamma={shape.gamma}"
            )
    return crit


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def meridian_f(p: float, params: YieldParams) -> float:
    """Native meridian function f(p); +inf outside the cap [-c, pc]."""
    return CapMeridian(params.M, params.pc, params.c, params.m, params.alpha).f(p)


def deviatoric_g(theta, shape) -> float | np.ndarray:
    """Deviatoric function g(theta) for any built-in shape.

    theta must lie in [0, pi/3] (scalar or array); raises DomainError
    otherwise.
    """
    th = _check_theta(theta)
    out = shape.g(th)
    return float(out) if np.ndim(theta) == 0 else out


def yield_value(stress, crit: Criterion) -> float:
    """Evaluate F at a stress state given by principal values.

    Returns +inf outside the effective domain of a cap meridian.  For
    hydrostatic states the deviatoric terms vanish and only f(p) remains.
    """
    inv = invariants(stress)
    return yield_value_inv(inv, crit)


def yield_value_inv(inv: Invariants, crit: Criterion) -> float:
    """Evaluate F directly from an invariant triple."""
    fp = crit.meridian.f(inv.p)
    if math.isinf(fp):
        return math.inf
    if inv.hydrostatic or inv.q == 0.0:
        return crit.A * inv.q**2 + fp
    g = float(crit.shape.g(inv.theta))
    return crit.A * inv.q**2 + crit.B * inv.q / g + fp


def surface_q(p: float, theta: float, crit: Criterion) -> float | None:
    """Deviatoric radius of the yield surface at (p, theta).

    For A = 0 this is q = -f(p) g(theta) / B; for A > 0 the positive root
    of A q^2 + B q / g + f(p) = 0.  Returns None when p lies outside the
    effective domain of a cap meridian.
    """
    _check_theta(theta)
    fp = crit.meridian.f(p)
    if math.isinf(fp) or fp > 0.0:
        # outside the cap, or a linear meridian beyond its tension apex
        return None
    g = float(crit.shape.g(theta))
    if crit.A == 0.0:
        return -fp * g / crit.B
    # f <= 0 here, so the discriminant is at least (B/g)^2 and the root
    # is nonnegative.
    bg = crit.B / g
    disc = bg * bg - 4.0 * crit.A * fp
    return (-bg + math.sqrt(disc)) / (2.0 * crit.A)


@dataclass(frozen=True)
class GradientDecomposition:
    """dF/dsigma = a I + b s_tilde + c s_tilde_perp, plus the unit normal.

    c vanishes on the deviatoric meridians (theta = 0 and pi/3); there the
    tensor lies in span{I, s_tilde}.
    """

    a: float
    b: float
    c: float
    tensor: np.ndarray
    unit_normal: np.ndarray


def gradient(stress, crit: Criterion) -> GradientDecomposition:
    """Exact yield-function gradient at an interior, non-hydrostatic state.

    Raises
    ------
    DegenerateState
        At q = 0 or, for the cap meridian, within DELTA_PHI of the cap
        ends, where the caller should use :func:`normal_limits`.
    """
    sig = np.asarray(stress, dtype=float).reshape(3)
    inv = invariants(sig)
    if inv.hydrostatic:
        raise DegenerateState("gradient decomposition needs q > 0")
    if isinstance(crit.meridian, CapMeridian):
        phi = crit.meridian.phi(inv.p)
        if not (DELTA_PHI < phi < 1.0 - DELTA_PHI):
            raise DegenerateState(
                f"Phi={phi:.3g} too close to the cap ends; use normal_limits"
            )
    a = -crit.meridian.df(inv.p) / 3.0
    g = float(crit.shape.g(inv.theta))
    b = math.sqrt(1.5) * (crit.B / g + 2.0 * crit.A * inv.q)
    s = sig - sig.sum() / 3.0
    s_tilde = math.sqrt(1.5) * s / inv.q
    sin3t = math.sin(3.0 * inv.theta)
    if abs(sin3t) <= EPS_MERIDIAN:
        # Smooth limit on a deviatoric meridian: the c-term drops out.
        c = 0.0
        tensor = a * np.ones(3) + b * s_tilde
    else:
        dg = float(crit.shape.dg(inv.theta))
        c = math.sqrt(1.5) * crit.B * dg / g**2
        cos3t = math.cos(3.0 * inv.theta)
        perp = (math.sqrt(6.0) * (s_tilde**2 - 1.0 / 3.0) - cos3t * s_tilde) / sin3t
        tensor = a * np.ones(3) + b * s_tilde + c * perp
    norm = math.sqrt(3.0 * a * a + b * b + c * c)
    return GradientDecomposition(a=a, b=b, c=c, tensor=tensor, unit_normal=tensor / norm)


def normal_limits(which: str, params: YieldParams) -> np.ndarray:
    """Unit normal limits where the surface meets the hydrostatic axis.

    ``which`` is "tension_apex" (Phi -> 0+, normal I/sqrt(3)) or
    "compression_apex" (Phi -> 1-, normal -I/sqrt(3)).  These limits do
    not exist for alpha in {0, 2}, where the surface has a corner; that
    case raises CornerCase.
    """
    if not (0.0 < params.alpha < 2.0):
        raise CornerCase(
            f"alpha={params.alpha}: a corner forms at the hydrostatic axis; "
            "the smooth normal limit does not exist"
        )
    e = np.ones(3) / math.sqrt(3.0)
    if which == "tension_apex":
        return e
    if which == "compression_apex":
        return -e
    raise DomainError(f"which must be 'tension_apex' or 'compression_apex', got {which!r}")
