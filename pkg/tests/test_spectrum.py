import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgoscillator.errors import NoPhysicalRoot, UnboundedSpectrum
from kgoscillator.spectrum import (Branch, EnergyLevel, ModelConfig, asymptote,
                                   condition_residual, energy_level,
                                   quartic_coefficients, quartic_real_roots,
                                   select_physical, spectrum)

# mpmath polyroots at 40 digits
ROOTS_M05_N2 = (-2.666450744048775741, 1.641321914488118541)


def quartic(gamma, n, E):
    return E**4 - 2 * E**2 - 4 * n * n * gamma * E + 1 - 4 * n * n


def bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_roots(f, lo=-10.0, hi=10.0, count=20001):
    xs = np.linspace(lo, hi, count)
    fs = np.array([f(x) for x in xs])
    out = []
    for i in np.nonzero(np.sign(fs[:-1]) != np.sign(fs[1:]))[0]:
        out.append(bisect(f, xs[i], xs[i + 1]))
    return out


def unsquared_root(gamma, n):
    hi = 1 / abs(gamma) if gamma < 0 else 100.0
    return bisect(lambda E: E * E - 1 - 2 * n * math.sqrt(max(0.0, 1 + gamma * E)), 1.0, hi)


def test_trivial_roots():
    assert quartic_real_roots(0.0, 0) == [-1.0, -1.0, 1.0, 1.0]
    r = quartic_real_roots(0.0, 1)
    assert r == pytest.approx([-math.sqrt(3), math.sqrt(3)], abs=1e-14)


def test_roots_against_scan_and_companion_oracles():
    r = quartic_real_roots(-0.5, 2)
    scanned = scan_roots(lambda E: quartic(-0.5, 2, E))
    np.testing.assert_allclose(r, scanned, atol=1e-12)
    companion = np.zeros((4, 4))
    companion[0, :] = -quartic_coefficients(-0.5, 2)[1:]
    companion[1:, :-1] = np.eye(3)
    eig = np.linalg.eigvals(companion)
    real = sorted(e.real for e in eig if abs(e.imag) < 1e-9)
    np.testing.assert_allclose(r, real, atol=1e-10)
    np.testing.assert_allclose(r, ROOTS_M05_N2, rtol=1e-14)


def test_select_physical_examples():
    lv = select_physical([-1, -1, 1, 1], ModelConfig(0.3), 0)
    assert lv.E == 1.0
    lv = select_physical(quartic_real_roots(0.0, 1), ModelConfig(0.0), 1)
    assert lv.E == pytest.approx(1.7320508, abs=1e-7)
    lv = energy_level(ModelConfig(-0.5), 2)
    assert 1 < lv.E < 2
    assert lv.E == pytest.approx(unsquared_root(-0.5, 2), abs=1e-13)
    assert lv.E == pytest.approx(ROOTS_M05_N2[1], rel=1e-14)


def test_level_invariants():
    for g in (-0.8, -0.32, 0.0, 0.4):
        for n in range(30):
            lv = energy_level(ModelConfig(g), n)
            assert 1 + g * lv.E >= 0
            assert abs(lv.lambda_**2 - (1 + g * lv.E)) < 1e-14
            assert lv.E**2 >= 1 - 1e-15
            assert lv.quartic_residual < 1e-12
            assert lv.condition_residual < 1e-12


def test_no_physical_root():
    with pytest.raises(NoPhysicalRoot) as exc:
        energy_level(ModelConfig(-1.5), 2)
    assert exc.value.n == 2
    with pytest.raises(NoPhysicalRoot):
        energy_level(ModelConfig(-1.5), 0)


def test_squaring_filter_is_not_vacuous():
    # gamma=-1.5, n=2: the quartic has a real root with 1 + gamma E >= 0
    # that fails the unsquared condition
    roots = quartic_real_roots(-1.5, 2)
    spurious = [E for E in roots if 1 - 1.5 * E >= 0 and condition_residual(-1.5, 2, E) > 1e-3]
    assert spurious
    assert all(abs(quartic(-1.5, 2, E)) < 1e-12 for E in spurious)


def test_spectrum_examples():
    E = [lv.E for lv in spectrum(ModelConfig(0.0), 2)]
    assert E == pytest.approx([1, math.sqrt(3), math.sqrt(5)], abs=1e-14)

    E200 = spectrum(ModelConfig(-0.5), 200)[-1].E
    assert abs(E200 - 2.0) < 1.2e-4
    # mpmath bisection of the unsquared condition
    assert 2.0 - E200 == pytest.approx(1.124662635991596e-4, rel=1e-8)

    anti = [lv.E for lv in spectrum(ModelConfig(-0.32, Branch.ANTIPARTICLE), 5)]
    part = [lv.E for lv in spectrum(ModelConfig(0.32), 5)]
    assert anti == pytest.approx([-e for e in part], abs=1e-12)


def test_asymptotic_expansion():
    # E_n ~ 1/|g| - (1/g^2 - 1)^2 |g| / (4 n^2) at leading order
    g = -0.5
    for n in (100, 200, 400):
        E = energy_level(ModelConfig(g), n).E
        approx = 1 / abs(g) - (1 / g**2 - 1) ** 2 / (4 * n * n) / abs(g)
        assert E == pytest.approx(approx, abs=5 / n**3)
        assert E == pytest.approx(unsquared_root(g, n), abs=1e-12)


def test_asymptote():
    assert asymptote(-0.5) == 2.0
    assert asymptote(-0.16) == pytest.approx(6.25)
    with pytest.raises(UnboundedSpectrum):
        asymptote(0)


def test_monotone_saturation():
    E = np.array([lv.E for lv in spectrum(ModelConfig(-0.5), 500)])
    assert np.all(np.diff(E) > 0)
    assert np.all(E < 2)


def test_gamma_zero_anchor():
    for lv in spectrum(ModelConfig(0.0), 50):
        assert abs(lv.E - math.sqrt(2 * lv.n + 1)) < 1e-12


def test_root_polish_plain_scale_small_n():
    for g in (-0.8, -0.5, -0.16, 0.3):
        for n in range(1, 51):
            for E in quartic_real_roots(g, n):
                assert abs(quartic(g, n, E)) / max(1, E**4) < 1e-12


@settings(max_examples=60, deadline=None, derandomize=True)
@given(g=st.floats(-0.95, 0.95), n=st.integers(0, 60))
def test_branch_symmetry(g, n):
    p = energy_level(ModelConfig(g), n)
    a = energy_level(ModelConfig(-g, Branch.ANTIPARTICLE), n)
    assert p.E == pytest.approx(-a.E, abs=1e-12 * max(1, abs(p.E)))


def test_model_config_validation():
    with pytest.raises(ValueError):
        ModelConfig(float("nan"))
    with pytest.raises(ValueError):
        ModelConfig(2.5)
    assert ModelConfig(0.1, "antiparticle").branch is Branch.ANTIPARTICLE


def test_energy_level_is_plain_data():
    lv = EnergyLevel(n=0, E=1.0, lambda_=1.0)
    assert lv.quartic_residual == 0.0
