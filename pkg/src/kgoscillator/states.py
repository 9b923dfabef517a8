"""Eigenstates and modified densities in coordinate and momentum space.

Both representations share one shape. With ``phi_n`` the orthonormal
Hermite function, a scale ``s`` and a quadratic energy weight
``w(a) = E + c*a**2``,

    rho(a) = (s / D) * phi_n(s*a)**2 * w(a),

where ``D`` is the closed-form normalization denominator:

=========== ============== ================= =============================
space       s              c                 D
=========== ============== ================= =============================
coordinate  sqrt(lam)      -gamma/2          E - gamma(n+1/2)/(2 lam)
momentum    1/sqrt(lam)    gamma/(2 lam**4)  E + gamma(n+1/2)/(2 lam**3)
=========== ============== ================= =============================

``D`` equals ``E + c <a^2>_0`` with ``<a^2>_0`` the plain oscillator moment,
so ``rho`` integrates to one whenever ``D`` is finite. For the antiparticle
branch ``E``, ``w`` and ``D`` are all negative; the sign is folded out of
each so that ``rho`` stays a positive density.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.special import roots_hermite

from .errors import InvalidDensity, NonNormalizable, NormalizationMismatch
from .quadrature import QuadratureSpec, integrate_even
from .spectrum import EnergyLevel

PI_QUARTER = math.pi ** -0.25
TAIL_SIGMAS = 12.0
TINY = 1e-300
NORM_TOL = 1e-8


class Space(str, enum.Enum):
    COORDINATE = "coordinate"
    MOMENTUM = "momentum"


class DensityKind(str, enum.Enum):
    RHO = "rho"
    FISHER = "fisher_density"
    SHANNON = "shannon_density"

    @classmethod
    def _missing_(cls, value):
        # short names as used on the command line
        return {"fisher": cls.FISHER, "shannon": cls.SHANNON}.get(value)


def hermite_functions(n, xi):
    """Return ``(phi_n(xi), phi_{n-1}(xi))`` via the orthonormal recurrence.

    ``phi_k(x) = H_k(x) exp(-x**2/2) / sqrt(2**k k! sqrt(pi))``. The
    recurrence runs on the weighted functions themselves, so no factorial
    or power of two is ever formed. ``phi_{-1}`` is taken as zero.
    """
    xi = np.asarray(xi, dtype=float)
    prev = np.zeros_like(xi)
    cur = PI_QUARTER * np.exp(-0.5 * xi * xi)
    for k in range(n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * xi * cur - math.sqrt(k / (k + 1)) * prev
    return cur, prev


def hermite_weighted(n, xi):
    """Orthonormal Hermite function ``phi_n(xi)``."""
    return hermite_functions(n, xi)[0]


def hermite_weighted_derivative(n, xi):
    """``phi_n'(xi) = sqrt(2n) phi_{n-1}(xi) - xi phi_n(xi)``."""
    cur, prev = hermite_functions(n, xi)
    return math.sqrt(2.0 * n) * prev - np.asarray(xi) * cur


def oscillator_moments(n, s):
    """``(<a^2>, <a^4>)`` of the unweighted density ``s * phi_n(s a)**2``."""
    m2 = (n + 0.5) / s**2
    m4 = 0.75 * (2 * n * n + 2 * n + 1) / s**4
    return m2, m4


@dataclass(frozen=True)
class ValidityFlags:
    weight_positive: bool
    norm_positive: bool


@dataclass(frozen=True)
class WaveState:
    """A normalized eigenstate in one representation.

    Build with :func:`make_state`. The weight is
    ``weight_const + weight_quad * a**2``; it and ``denominator`` already
    carry the branch sign, so both are positive near the origin for any
    normalizable state.
    """

    space: Space
    level: EnergyLevel
    gamma: float
    norm_const_sq: float
    log_norm_const_sq: float
    validity: ValidityFlags
    scale: float
    weight_const: float
    weight_quad: float
    denominator: float
    radius: float
    weight_zero: float | None
    norm_integral: float = float("nan")
    forensic: bool = False

    @property
    def n(self):
        return self.level.n

    @property
    def E(self):
        return self.level.E

    def nodes(self):
        """Positive zeros of the density inside the truncation radius."""
        pts = []
        if self.n > 0:
            roots = roots_hermite(self.n)[0] / self.scale
            pts.extend(float(r) for r in roots if r > 0)
        if self.weight_zero is not None:
            pts.append(self.weight_zero)
        return sorted(pts)

    def _parts(self, a):
        a = np.asarray(a, dtype=float)
        phi, prev = hermite_functions(self.n, self.scale * a)
        dphi = math.sqrt(2.0 * self.n) * prev - self.scale * a * phi
        w = self.weight_const + self.weight_quad * a * a
        dw = 2.0 * self.weight_quad * a
        return a, phi, dphi, w, dw

    def rho(self, a):
        _, phi, _, w, _ = self._parts(a)
        return self.scale / self.denominator * phi * phi * w

    def rho_prime(self, a):
        _, phi, dphi, w, dw = self._parts(a)
        s = self.scale
        return s / self.denominator * (2.0 * s * phi * dphi * w + phi * phi * dw)

    def score(self, a):
        """``d ln rho / da``; infinite at density zeros."""
        _, phi, dphi, w, dw = self._parts(a)
        with np.errstate(divide="ignore", invalid="ignore"):
            return 2.0 * self.scale * dphi / phi + dw / w

    def fisher_density(self, a):
        """``rho'**2 / rho`` written so the Hermite nodes cancel analytically.

        ``rho'**2/rho = (s/D) (2 s phi' w + phi w')**2 / w``, finite wherever
        the weight is nonzero.
        """
        _, phi, dphi, w, dw = self._parts(a)
        s = self.scale
        return s / self.denominator * (2.0 * s * dphi * w + phi * dw) ** 2 / w

    def shannon_density(self, a):
        """``rho ln rho`` with ``0 ln 0 = 0`` below 1e-300."""
        r = np.asarray(self.rho(a), dtype=float)
        out = np.zeros_like(r)
        big = np.abs(r) >= TINY
        with np.errstate(invalid="ignore"):
            out[big] = r[big] * np.log(r[big])
        return out

    def require_log_safe(self):
        if not self.validity.weight_positive:
            raise InvalidDensity(
                f"{self.space.value} density for n={self.n}, gamma={self.gamma} "
                f"changes sign at |a|={self.weight_zero:.6g} inside R={self.radius:.6g}")
        if not self.validity.norm_positive:
            raise InvalidDensity(
                f"{self.space.value} state for n={self.n}, gamma={self.gamma} "
                "has a non-positive normalization denominator")


def truncation_radius(n, scale):
    """Half-width outside which the Gaussian tail mass is negligible (< 1e-18)."""
    return (math.sqrt(2 * n + 1) + TAIL_SIGMAS) / scale


def _denominator(space, n, gamma, E, lam):
    if space is Space.COORDINATE:
        return E - gamma * (n + 0.5) / (2.0 * lam)
    return E + gamma * (n + 0.5) / (2.0 * lam**3)


def make_state(level, gamma, space, *, forensic=False, spec=None):
    """Construct a normalized :class:`WaveState`.

    The normalization constant follows the closed forms; ``∫rho`` over
    ``[-R, R]`` is then checked numerically.

    Raises
    ------
    NonNormalizable
        If the closed-form denominator has the wrong sign for the branch.
        With ``forensic=True`` the state is built anyway and flagged.
    NormalizationMismatch
        If the numeric normalization deviates from one by more than 1e-8.
    """
    space = Space(space)
    n, E, lam = level.n, level.E, level.lambda_
    if not lam > 0:
        raise NonNormalizable(f"lambda = {lam} for n={n}, gamma={gamma}")
    sign = 1.0 if E > 0 else -1.0
    if space is Space.COORDINATE:
        scale = math.sqrt(lam)
        quad = -0.5 * gamma
    else:
        scale = 1.0 / math.sqrt(lam)
        quad = gamma / (2.0 * lam**4)

    denom = _denominator(space, n, gamma, E, lam) * sign
    norm_positive = denom > 0
    if not norm_positive and not forensic:
        raise NonNormalizable(
            f"{space.value} normalization denominator {denom:.6g} <= 0 "
            f"for n={n}, gamma={gamma}")

    # log C_n^2 without forming 2**n n!
    log_c2 = (-n * math.log(2.0) - math.lgamma(n + 1) + math.log(scale)
              - 0.5 * math.log(math.pi) - math.log(abs(denom)))

    radius = truncation_radius(n, scale)
    weight_const, weight_quad = abs(E), quad * sign
    weight_zero = None
    if weight_quad < 0:
        zero = math.sqrt(-weight_const / weight_quad)
        if zero < radius:
            weight_zero = zero

    state = WaveState(
        space=space, level=level, gamma=float(gamma),
        norm_const_sq=math.exp(log_c2), log_norm_const_sq=log_c2,
        validity=ValidityFlags(weight_positive=weight_zero is None,
                               norm_positive=norm_positive),
        scale=scale, weight_const=weight_const, weight_quad=weight_quad,
        denominator=denom, radius=radius, weight_zero=weight_zero,
        forensic=not norm_positive)

    total = integrate_even(state.rho, radius, spec, points=state.nodes()).value
    if abs(total - 1.0) > NORM_TOL:
        raise NormalizationMismatch(
            f"integral of rho = {total!r} for n={n}, gamma={gamma}, {space.value}")
    return replace(state, norm_integral=total)


def rho(state, a):
    """Modified probability density at ``a`` (scalar or array)."""
    return state.rho(a)


@dataclass(frozen=True)
class DensityCurve:
    space: Space
    kind: DensityKind
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values differ in length")
        if len(self.grid) > 1 and not np.all(np.diff(self.grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("density curve has non-finite values")

    def to_csv(self):
        lines = ["a,value"]
        lines += [f"{a!r},{v!r}" for a, v in zip(self.grid.tolist(), self.values.tolist())]
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {"space": self.space.value, "kind": self.kind.value,
                "grid": self.grid.tolist(), "values": self.values.tolist()}

    def to_json(self):
        return json.dumps(self.to_dict())


def grid_points(lo, hi, count):
    """``np.linspace`` that is exactly antisymmetric when ``lo == -hi``."""
    x = np.linspace(lo, hi, count)
    if lo == -hi:
        x = 0.5 * (x - x[::-1])
    return x


def default_grid(state, count=2001):
    return grid_points(-state.radius, state.radius, count)


def rho_curve(state, grid):
    grid = np.asarray(grid, dtype=float)
    return DensityCurve(state.space, DensityKind.RHO, grid, np.asarray(state.rho(grid)))


def fisher_density_curve(state, grid):
    """Pointwise Fisher density ``rho (d ln rho/da)**2`` on ``grid``."""
    state.require_log_safe()
    grid = np.asarray(grid, dtype=float)
    return DensityCurve(state.space, DensityKind.FISHER, grid,
                        np.asarray(state.fisher_density(grid)))


def shannon_density_curve(state, grid):
    """Pointwise Shannon density ``rho ln rho`` on ``grid``."""
    state.require_log_safe()
    grid = np.asarray(grid, dtype=float)
    return DensityCurve(state.space, DensityKind.SHANNON, grid,
                        np.asarray(state.shannon_density(grid)))


def density_curve(state, kind, grid):
    kind = DensityKind(kind)
    if kind is DensityKind.RHO:
        return rho_curve(state, grid)
    if kind is DensityKind.FISHER:
        return fisher_density_curve(state, grid)
    return shannon_density_curve(state, grid)


def state_summary(state):
    """Plain-dict view of a state for JSON output."""
    out = {
        "space": state.space.value, "n": state.n, "gamma": state.gamma,
        "E": state.E, "lambda": state.level.lambda_,
        "norm_const_sq": state.norm_const_sq,
        "denominator": state.denominator, "radius": state.radius,
        "weight_zero": state.weight_zero, "norm_integral": state.norm_integral,
    }
    out.update(asdict(state.validity))
    return out
