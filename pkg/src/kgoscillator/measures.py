"""Moments, Fisher information, Shannon entropy and uncertainty relations.

Fisher information is computed two ways. :func:`fisher_direct` integrates
``rho'**2/rho`` and is the reference value. :func:`fisher_paper` evaluates
the published closed form term by term, unchanged, so it can be audited
against the direct value.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NonNormalizable
from .quadrature import gauss_hermite, integrate_even
from .spectrum import Branch, ModelConfig, energy_level
from .states import Space, hermite_weighted, make_state, oscillator_moments

BBM_BOUND = 1.0 + math.log(math.pi)
MARGIN_TOL = 1e-9
PAPER_DIVERGENCE = 0.05


class FisherMode(str, enum.Enum):
    DIRECT = "direct"
    PAPER = "paper"
    BOTH = "both"


def moment2(state, spec=None, strict=False):
    """Second moment ``∫ a**2 rho(a) da`` over the truncation domain."""
    if strict:
        state.require_log_safe()
    res = integrate_even(lambda a: a * a * state.rho(a), state.radius, spec,
                         points=state.nodes())
    return res.value


def moment2_closed_form(state):
    """Second moment from the oscillator moment identities.

    ``<a^2> = (E <a^2>_0 + c <a^4>_0) / D`` for weight ``E + c a**2``.
    """
    m2, m4 = oscillator_moments(state.n, state.scale)
    return (state.weight_const * m2 + state.weight_quad * m4) / state.denominator


def fisher_direct(state, spec=None):
    """Fisher information ``∫ rho (d ln rho/da)**2 da``.

    Raises :class:`InvalidDensity` if the density changes sign on the domain.
    """
    state.require_log_safe()
    res = integrate_even(state.fisher_density, state.radius, spec,
                         points=state.nodes())
    return res.value


def shannon(state, spec=None):
    """Shannon entropy ``-∫ rho ln rho da``."""
    state.require_log_safe()
    res = integrate_even(state.shannon_density, state.radius, spec,
                         points=state.nodes())
    return -res.value


class PaperFisher(NamedTuple):
    """Published closed-form Fisher information and its six terms.

    ``terms`` are the printed evaluations (terms I to V) plus the numeric
    term VI; ``value`` is their sum. ``quadrature_terms`` integrates the
    printed term integrands directly with Gauss-Hermite rules, which
    exposes where the printed evaluations disagree with their own integrands.
    """

    value: float
    terms: tuple
    quadrature_terms: tuple


def _bracket(n):
    return ((2 * n + 1) ** 2 + 2) / 4.0


def fisher_paper(state, spec=None):
    """Fisher information from the published closed form (frequency taken as lambda)."""
    state.require_log_safe()
    n, E, g = state.n, state.E, state.gamma
    lam = state.level.lambda_
    s = state.scale
    # raw printed denominator, without the branch sign folding used by rho
    D = state.denominator * (1.0 if E > 0 else -1.0)
    h = n + 0.5

    def c2_h2_gauss(a):
        # C^2 H_n(s a)^2 exp(-(s a)^2), i.e. (s/D) phi_n(s a)^2
        return s / D * hermite_weighted(n, s * a) ** 2

    if state.space is Space.COORDINATE:
        printed = (
            16 * n * n * E / D,
            0.0,
            (4 * lam**2 * E - 8 * n * n * g + 4 * g * lam) * h / (lam * D),
            0.0,
            -2 * g * _bracket(n) / D,
        )
        polys = (
            lambda x: 16 * n * n * E + 0 * x,
            lambda x: -(16 * n * lam * E + 8 * n * g) * x,
            lambda x: (4 * lam**2 * E - 8 * n * n * g + 4 * g * lam) * x**2,
            lambda x: 8 * n * lam * g * x**3,
            lambda x: -2 * lam**2 * g * x**4,
        )

        def last_term(x):
            return g * g * x * x / (E - 0.5 * g * x * x) * c2_h2_gauss(x)
    else:
        printed = (
            16 * n * n * E / D,
            0.0,
            (4 * E / lam + 8 * n * n * g / lam**3) * h / D,
            0.0,
            2 * g / lam**4 * _bracket(n) / D,
        )
        polys = (
            lambda p: 16 * n * n * E + 0 * p,
            lambda p: (2 * g / lam**4 - 4 * n * E / lam) * p,
            lambda p: (4 * E / lam**2 + 8 * n * n * g / lam**4) * p**2,
            lambda p: -(4 * n * g / (2 * lam**5)) * p**3,
            lambda p: (4 * g / (2 * lam**6)) * p**4,
        )

        def last_term(p):
            return (2 * g * g * p * p / (lam**4 * (2 * E * lam**4 + g * p * p))
                    * c2_h2_gauss(p))

    term6 = integrate_even(last_term, state.radius, spec, points=state.nodes()).value

    def c2_h2(a):
        # Gauss-Hermite supplies exp(-(s a)^2); divide it back out of phi_n^2
        xi = s * a
        return c2_h2_gauss(a) * np.exp(xi * xi)

    m = n + 4
    quad = tuple(gauss_hermite(lambda a, f=f: f(a) * c2_h2(a), s * s, m) for f in polys)
    terms = printed + (term6,)
    return PaperFisher(value=float(sum(terms)), terms=terms,
                       quadrature_terms=quad + (term6,))


@dataclass(frozen=True)
class InequalityRecord:
    lhs: float
    rhs: float
    relation: str
    margin: float
    satisfied: bool

    @classmethod
    def check(cls, lhs, relation, rhs):
        """Record ``lhs <relation> rhs``; a positive margin means satisfied."""
        if lhs is None or rhs is None:
            return None
        margin = rhs - lhs if relation == "<=" else lhs - rhs
        return cls(lhs=lhs, rhs=rhs, relation=relation, margin=margin,
                   satisfied=margin >= -MARGIN_TOL)


INEQUALITIES = ("stam_x", "stam_p", "cramer_rao_x", "cramer_rao_p",
                "fisher_product", "bbm")


def _mul(a, b):
    return None if a is None or b is None else a * b


def _add(a, b):
    return None if a is None or b is None else a + b


def _inv(a):
    return None if a is None or a == 0 else 1.0 / a


def _sqrt(a):
    return None if a is None or a < 0 else math.sqrt(a)


def evaluate_inequalities(x2, p2, Fx, Fp, Sx, Sp):
    """The six uncertainty relations as records (``None`` where an input is missing)."""
    return {
        "stam_x": InequalityRecord.check(Fx, "<=", _mul(4.0, p2)),
        "stam_p": InequalityRecord.check(Fp, "<=", _mul(4.0, x2)),
        "cramer_rao_x": InequalityRecord.check(Fx, ">=", _inv(x2)),
        "cramer_rao_p": InequalityRecord.check(Fp, ">=", _inv(p2)),
        "fisher_product": InequalityRecord.check(_mul(Fx, Fp), ">=", 4.0),
        "bbm": InequalityRecord.check(_add(Sx, Sp), ">=", BBM_BOUND),
    }


@dataclass
class MeasureReport:
    n: int
    gamma: float
    E: float
    x2: float | None = None
    p2: float | None = None
    dx: float | None = None
    dp: float | None = None
    dxdp: float | None = None
    Fx: float | None = None
    Fp: float | None = None
    Fx_paper: float | None = None
    Fp_paper: float | None = None
    Sx: float | None = None
    Sp: float | None = None
    S_sum: float | None = None
    F_prod: float | None = None
    stam_x: InequalityRecord | None = None
    stam_p: InequalityRecord | None = None
    cramer_rao_x: InequalityRecord | None = None
    cramer_rao_p: InequalityRecord | None = None
    fisher_product: InequalityRecord | None = None
    bbm: InequalityRecord | None = None
    branch: str = "particle"
    flags: list = field(default_factory=list)

    @property
    def forensic(self):
        return any(f.startswith("forensic:") for f in self.flags)

    @property
    def partial(self):
        return any(v is None for v in (self.x2, self.p2, self.Fx, self.Fp, self.Sx, self.Sp))

    def inequalities(self):
        return {name: getattr(self, name) for name in INEQUALITIES}

    def to_dict(self):
        return asdict(self)


TABLE_COLUMNS = ("n", "gamma", "x2", "dx", "p2", "dp", "dxdp", "Fx", "Fp",
                 "F_prod", "Sx", "Sp", "S_sum")
DIAGNOSTIC_COLUMNS = ("E", "Fx_paper", "Fp_paper") + tuple(
    f"{name}_margin" for name in INEQUALITIES) + ("flags",)


def report_row(rep):
    """Flat mapping in table column order, diagnostics appended."""
    row = {c: getattr(rep, c) for c in TABLE_COLUMNS}
    row["E"] = rep.E
    row["Fx_paper"] = rep.Fx_paper
    row["Fp_paper"] = rep.Fp_paper
    for name in INEQUALITIES:
        rec = getattr(rep, name)
        row[f"{name}_margin"] = None if rec is None else rec.margin
    row["flags"] = ";".join(rep.flags)
    return row


def _space_measures(level, gamma, space, spec, mode, forensic, flags):
    tag = space.value
    out = {"a2": None, "F": None, "F_paper": None, "S": None}
    try:
        state = make_state(level, gamma, space, spec=spec)
    except NonNormalizable:
        flags.append(f"nonnormalizable:{tag}")
        if not forensic:
            return out
        state = make_state(level, gamma, space, spec=spec, forensic=True)
        flags.append(f"forensic:{tag}")
        out["a2"] = moment2(state, spec)
        return out

    out["a2"] = moment2(state, spec)
    closed = moment2_closed_form(state)
    if abs(out["a2"] - closed) > 1e-8 * max(1.0, abs(closed)):
        flags.append(f"moment_closed_form_mismatch:{tag}")
    if not state.validity.weight_positive:
        flags.append(f"weight_sign_change:{tag}")
        return out
    if mode is not FisherMode.PAPER:
        out["F"] = fisher_direct(state, spec)
    out["S"] = shannon(state, spec)
    if mode is not FisherMode.DIRECT:
        out["F_paper"] = fisher_paper(state, spec).value
    if mode is FisherMode.BOTH and out["F"]:
        if abs(out["F_paper"] - out["F"]) > PAPER_DIVERGENCE * abs(out["F"]):
            flags.append(f"paper_fisher_divergence:{tag}")
    if mode is FisherMode.PAPER:
        out["F"] = out["F_paper"]
    return out


def report(gamma, n, branch=Branch.PARTICLE, spec=None, mode=FisherMode.BOTH,
           forensic=False):
    """Compute one table row for level ``n`` at coupling ``gamma``.

    Missing quantities are ``None`` and explained in ``flags``. With
    ``forensic=True``, second moments of non-normalizable states are still
    evaluated formally and the row is marked as forensic.
    """
    mode = FisherMode(mode)
    level = energy_level(ModelConfig(gamma, branch), n)
    flags = []
    if mode is FisherMode.PAPER:
        flags.append("fisher_mode:paper")
    cx = _space_measures(level, gamma, Space.COORDINATE, spec, mode, forensic, flags)
    cp = _space_measures(level, gamma, Space.MOMENTUM, spec, mode, forensic, flags)

    x2, p2 = cx["a2"], cp["a2"]
    Fx, Fp, Sx, Sp = cx["F"], cp["F"], cx["S"], cp["S"]
    dx, dp = _sqrt(x2), _sqrt(p2)
    rep = MeasureReport(
        n=n, gamma=float(gamma), E=level.E, x2=x2, p2=p2, dx=dx, dp=dp,
        dxdp=_mul(dx, dp), Fx=Fx, Fp=Fp, Fx_paper=cx["F_paper"],
        Fp_paper=cp["F_paper"], Sx=Sx, Sp=Sp, S_sum=_add(Sx, Sp),
        F_prod=_mul(Fx, Fp), branch=Branch(branch).value, flags=flags,
        **evaluate_inequalities(x2, p2, Fx, Fp, Sx, Sp))
    return rep
