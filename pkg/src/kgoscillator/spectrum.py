"""Energy levels of the 1D Klein-Gordon oscillator with an energy-dependent coupling.

Level ``n`` satisfies ``E**2 - 1 = 2*n*sqrt(1 + gamma*E)``. Squaring gives
the quartic

    E**4 - 2*E**2 - 4*n**2*gamma*E + 1 - 4*n**2 = 0,

whose real roots are computed here and then filtered back through the
unsquared condition. For ``gamma < 0`` the particle levels saturate below
``1/|gamma|``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoPhysicalRoot, UnboundedSpectrum


class Branch(str, enum.Enum):
    PARTICLE = "particle"
    ANTIPARTICLE = "antiparticle"

    @property
    def sign(self):
        return 1.0 if self is Branch.PARTICLE else -1.0


@dataclass(frozen=True)
class ModelConfig:
    gamma: float
    branch: Branch = Branch.PARTICLE
    quartic_tol: float = 1e-12

    def __post_init__(self):
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")
        if abs(self.gamma) >= 2:
            raise ValueError(f"|gamma| < 2 required, got {self.gamma}")
        object.__setattr__(self, "branch", Branch(self.branch))


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    E: float
    lambda_: float
    quartic_residual: float = 0.0
    condition_residual: float = 0.0


def quartic_coefficients(gamma, n):
    """Coefficients of the quantization quartic, highest power first."""
    n2 = 4.0 * n * n
    return np.array([1.0, 0.0, -2.0, -n2 * gamma, 1.0 - n2])


def quartic_residual(gamma, n, E):
    """Backward error of ``E`` as a quartic root: |q(E)| / sum_k |c_k| |E|**k.

    For small ``n`` this is comparable to |q(E)| / max(1, E**4); for large
    ``n`` the coefficient ``4*n**2`` dominates and a plain E**4 scale would
    demand more than double precision can deliver near saturation.
    """
    coeffs = quartic_coefficients(gamma, n)
    q = np.polyval(coeffs, E)
    scale = np.polyval(np.abs(coeffs), abs(E))
    return float(abs(q) / max(1.0, scale))


def condition_residual(gamma, n, E):
    """Residual of ``E**2 - 1 - 2*n*sqrt(1 + gamma*E)``, scaled.

    The scale is ``max(1, E**2, |E * dc/dE|)``: near saturation the square
    root is steep and a one-ulp change in ``E`` moves the raw residual by
    far more than 1e-12. Infinite when ``1 + gamma*E < 0``.
    """
    arg = 1.0 + gamma * E
    if arg < 0:
        return math.inf
    lam = math.sqrt(arg)
    raw = E * E - 1.0 - 2.0 * n * lam
    slope = 2.0 * E - (n * gamma / lam if lam > 0 else math.inf)
    return abs(raw) / max(1.0, E * E, abs(E * slope))


def _polish(coeffs, x, iters=8):
    # Newton on the quartic; keeps the best iterate so a near-double root cannot diverge
    dcoeffs = np.polyder(coeffs)
    best, best_q = x, abs(np.polyval(coeffs, x))
    for _ in range(iters):
        d = np.polyval(dcoeffs, x)
        if d == 0:
            break
        x = x - np.polyval(coeffs, x) / d
        q = abs(np.polyval(coeffs, x))
        if q < best_q:
            best, best_q = x, q
        if q == 0:
            break
    return float(best)


def quartic_real_roots(gamma, n, tol=1e-12):
    """Real roots of the quantization quartic, with multiplicity, ascending.

    Candidates come from the companion-matrix eigenvalues; those with a
    small imaginary part are Newton-polished on the real line and kept if
    the scaled residual falls below ``tol``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        # (E**2 - 1)**2 for every gamma
        return [-1.0, -1.0, 1.0, 1.0]
    coeffs = quartic_coefficients(gamma, n)
    roots = []
    for z in np.roots(coeffs):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        x = _polish(coeffs, z.real)
        if quartic_residual(gamma, n, x) < tol:
            roots.append(x)
    return sorted(roots)


def select_physical(roots, config, n):
    """Pick the physical level out of the quartic's real roots.

    A root survives when its sign matches the branch, ``1 + gamma*E >= 0``
    and the unsquared condition holds to ``config.quartic_tol``. Among the
    survivors the smallest ``|E|`` wins.
    """
    gamma = config.gamma
    sign = config.branch.sign
    if n == 0:
        if 1.0 + gamma * sign < 0:
            raise NoPhysicalRoot(
                f"1 + gamma*E < 0 for n=0, gamma={gamma}", n=0, gamma=gamma)
        return EnergyLevel(n=0, E=sign, lambda_=math.sqrt(1.0 + gamma * sign))
    survivors = []
    for E in roots:
        if E * sign <= 0:
            continue
        if 1.0 + gamma * E < 0:
            continue
        if condition_residual(gamma, n, E) >= config.quartic_tol:
            continue
        survivors.append(E)
    if not survivors:
        raise NoPhysicalRoot(
            f"no physical {config.branch.value} root for n={n}, gamma={gamma}",
            n=n, gamma=gamma)
    E = min(survivors, key=abs)
    return EnergyLevel(
        n=n, E=E, lambda_=math.sqrt(1.0 + gamma * E),
        quartic_residual=quartic_residual(gamma, n, E),
        condition_residual=condition_residual(gamma, n, E))


def energy_level(config, n):
    return select_physical(quartic_real_roots(config.gamma, n, config.quartic_tol),
                           config, n)


def spectrum(config, n_max):
    """Levels ``n = 0 .. n_max`` of one branch."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    return [energy_level(config, n) for n in range(n_max + 1)]


def asymptote(gamma):
    """Saturation value ``1/|gamma|`` of ``|E_n|`` on the bounded branch."""
    if gamma == 0:
        raise UnboundedSpectrum("gamma = 0: the spectrum grows without bound")
    return 1.0 / abs(gamma)
