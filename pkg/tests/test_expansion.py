from fractions import Fraction

import pytest

from telesigma.curve import build_curve
from telesigma.expansion import (
    assemble_qhat,
    homogeneity_audit,
    omega_expansion,
    qhat_asymmetry,
    solve_x_series,
)
from telesigma.semigroup import FIXTURES, semigroup
from telesigma.series import PrecisionError, TruncatedSeries, series_root


def symbolic(a, order):
    return solve_x_series(build_curve(semigroup(a), "symbolic"), order)


def degenerate(a, order=12):
    return solve_x_series(build_curve(semigroup(a)), order)


def test_first_correction_weierstrass():
    e = symbolic((2, 3), 6)
    k = e.ring.gen("k2_1.1")
    assert e.e(2, 1) == k / 2


def test_weierstrass_against_quadratic_formula():
    # x2 solves x2^2 - (k11 x1 + k01) x2 - (x1^3 + k20 x1^2 + k10 x1 + k00) = 0
    order = 10
    e = symbolic((2, 3), order)
    R = e.ring
    g = R.gen
    x1 = TruncatedSeries.monomial(R, -2)
    b = x1.scale(g("k2_1.1")) + g("k2_0.1")
    c = x1 ** 3 + (x1 ** 2).scale(g("k2_2.0")) + x1.scale(g("k2_1.0")) + g("k2_0.0")
    disc = (b * b + c.scale(4)).truncate(-6 + order) / 4
    x2 = (b + series_root(disc, 2).scale(2)) / 2
    assert x2.truncate(-3 + order) == e.x_series[1]


@pytest.mark.parametrize("a", FIXTURES)
def test_monomial_curve_is_exact(a):
    e = degenerate(a)
    for k, ak in enumerate(semigroup(a).a):
        assert e.x_series[k] == TruncatedSeries.monomial(e.ring, -ak)
    for w, du in zip(semigroup(a).gaps, e.du_series):
        assert du == TruncatedSeries.monomial(e.ring, w - 1)
    B = e.b_matrix(10)
    for i, w in enumerate(semigroup(a).gaps):
        assert [b.constant_value() for b in B[i]] == [int(j == w) for j in range(1, 11)]
    assert all(c.is_zero() for c in e.c_series(8))


@pytest.mark.parametrize("a", FIXTURES)
def test_det_g_leading_term(a):
    sg = semigroup(a)
    e = symbolic(a, 8)
    d = e.detG_series
    assert d.valuation == -(2 * sg.genus - 1 + sg.a[0])
    assert d.leading_coefficient() == sg.a[0]


@pytest.mark.parametrize("a", [(2, 3), (2, 7), (3, 4)])
def test_residuals_and_homogeneity(a):
    e = symbolic(a, 20)
    for i, r in e.equation_residuals().items():
        sg = semigroup(a)
        assert r.is_zero()
        assert r.truncation == 20 - sg.a[i - 1] * sg.ratio(i)
    audit = homogeneity_audit(e)
    assert audit.ok, audit.failures


@pytest.mark.slow
def test_homogeneity_deep_order():
    e = symbolic((4, 6, 5), 30)
    for k in (2, 3):
        for l in range(1, 30):
            assert e.e(k, l).is_homogeneous(l)


@pytest.mark.parametrize("a", [(2, 3), (3, 4), (4, 6, 5)])
def test_differentials_normalized(a):
    sg = semigroup(a)
    e = symbolic(a, 10)
    B = e.b_matrix()
    for i, (w, du) in enumerate(zip(sg.gaps, e.du_series)):
        assert du.valuation == w - 1 and du.leading_coefficient() == 1
        assert all(B[i][j - 1].is_zero() for j in range(1, w))
        assert B[i][w - 1] == 1
        for j in range(w + 1, len(B[i]) + 1):
            assert B[i][j - 1].is_homogeneous(j - w)


def test_c_series_matches_exponential():
    e = symbolic((3, 4), 10)
    g = semigroup((3, 4)).genus
    c = e.c_series(6)
    logs = TruncatedSeries(e.ring, 1, [ci / i for i, ci in enumerate(c, start=1)], 7)
    rebuilt = (logs.exp() ** 2).shift(2 * g - 2)
    assert rebuilt == e.du_series[-1].truncate(2 * g - 2 + 7)
    assert c[0] == e.top_differential_unit.coefficient(1) / 2


def test_c_series_refuses_unjustified_orders():
    e = symbolic((2, 3), 6)
    avail = e.top_differential_unit.truncation - 1
    assert len(e.c_series()) == avail
    with pytest.raises(PrecisionError):
        e.c_series(avail + 1)


# -- the bilinear differential ----------------------------------------------


def test_omega_weierstrass_monomial():
    om = omega_expansion(degenerate((2, 3), 20), 10)
    # the z1^0 z2^-2 coefficient of d_y Omega is cancelled by du_1 dr_1
    assert om.d_omega.coefficient(0, -2) == 0
    assert om.remainder.coefficient(0, -2) == -1


@pytest.mark.parametrize("a", [(2, 3), (2, 7), (3, 4), (4, 6, 5)])
def test_omega_principal_part_monomial(a):
    sg = semigroup(a)
    g = sg.genus
    om = omega_expansion(degenerate(a, 20), 10)
    expected = {(w - 1, -w - 1): -w for w in sg.gaps if w - 1 < 10}
    assert om.remainder.terms() == expected
    assert all(p is None or p >= -2 * g for p in om.pole_orders().values())
    parts, residual = om.dr_singular_parts()
    assert residual.terms() == {}
    assert parts == [TruncatedSeries.monomial(om.expansion.ring, -w - 1, w) for w in sg.gaps if w - 1 < 10]
    qhat = assemble_qhat(om, parts)
    assert qhat and all(q.is_zero() for q in qhat.values())
    assert qhat_asymmetry(qhat) == []


@pytest.mark.parametrize("a", [(2, 3), (2, 7), (3, 4)])
def test_omega_singular_structure_symbolic(a):
    sg = semigroup(a)
    om = omega_expansion(symbolic(a, 20), 6)
    assert all(p is None or p >= -2 * sg.genus for p in om.pole_orders().values())
    _, residual = om.dr_singular_parts()
    assert all(residual.row(i).is_zero() for i in residual.row_indices())


def test_omega_precision_guard():
    with pytest.raises(PrecisionError):
        omega_expansion(symbolic((2, 3), 3), 12)


def test_assemble_qhat_checks_inputs():
    om = omega_expansion(degenerate((2, 7), 20), 6)
    with pytest.raises(ValueError):
        assemble_qhat(om, [])
    bad = [TruncatedSeries.monomial(om.expansion.ring, 0)] * 3
    with pytest.raises(ValueError, match="singular"):
        assemble_qhat(om, bad)


def test_explicit_rational_kappa():
    e = solve_x_series(build_curve(semigroup((2, 3)), {"k2_0.0": Fraction(1, 2), "k2_1.1": 2}), 10)
    assert all(r.is_zero() for r in e.equation_residuals().values())
    assert e.e(2, 1) == 1
