from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hmf5.errors import DenominatorMismatch, NoSquareRoot, NotDivisible, NotInvertible, WeightMismatch
from hmf5.numberfield import ONE, ROOT5, QuadElem
from hmf5.qexp import eisenstein_q
from hmf5.series import (
    MU0,
    MU0_CONJ,
    HilbertSeries,
    NuIndex,
    divide_exact,
    enumerate_cone,
    invert,
    is_antisymmetric,
    is_symmetric,
    normalized_partial,
    order_key,
    rescale_denom,
    restrict_diagonal,
    sqrt_series,
    stratum,
    swap_conjugate,
)
from hmf5.structure import phi2
from hmf5.theta import chi5 as theta_chi5

from .conftest import cone_series, rationals, unit_series


def _brute_cone(bound):
    """Independent scan of totally positive elements via float embeddings."""
    r5 = 5**0.5
    pts = [(0, 0)]
    for b in range(1, bound + 1):
        for a in range(-3 * b, 3 * b + 1):
            if (a - b) % 2:
                continue
            s1 = (a + b * r5) / (2 * r5)
            s2 = (-a + b * r5) / (2 * r5)
            if s1 > 0 and s2 > 0:
                pts.append((a, b))
    return pts


def e(nu, bound=6, c=1):
    return HilbertSeries.monomial(nu, bound, c)


def test_enumerate_small():
    assert enumerate_cone(1) == [(0, 0), (1, 1), (-1, 1)]
    assert [k.a for k in stratum(2)] == [4, 2, 0, -2, -4]
    with pytest.raises(ValueError):
        enumerate_cone(-1)


def test_stratum_counts():
    counts = [len(stratum(b)) for b in range(11)]
    assert counts == [1, 2, 5, 6, 9, 12, 13, 16, 17, 20, 23]


@pytest.mark.parametrize("bound", [0, 3, 10, 17])
def test_cone_matches_float_scan(bound):
    assert sorted(enumerate_cone(bound)) == sorted(_brute_cone(bound))
    cone = enumerate_cone(bound)
    assert cone == sorted(cone, key=order_key)


def test_index_field_roundtrip():
    assert MU0.to_field() == (1 + ROOT5) / (2 * ROOT5)
    assert NuIndex.from_field(ONE) == (0, 2)
    assert MU0.sigma(1) * MU0.sigma(2) == Fraction(1, 5)
    with pytest.raises(ValueError):
        NuIndex.from_field(QuadElem(Fraction(1, 3)))


def test_ring_examples():
    assert e(MU0) * e(MU0_CONJ) == e((0, 2))
    p = phi2(4)
    assert p * 1 == p
    sq = p * p
    assert sq.constant_term() == 1 and sq[MU0] == 240


def test_ring_errors():
    with pytest.raises(WeightMismatch):
        HilbertSeries.constant(1, 3, (2, 2)) + HilbertSeries.constant(1, 3, (4, 4))
    with pytest.raises(DenominatorMismatch):
        HilbertSeries.constant(1, 3) + rescale_denom(HilbertSeries.constant(1, 3), 2)
    with pytest.raises(ValueError):
        HilbertSeries((0, 0), 3, {(3, 1): 1})
    # terms past the bound are truncated on construction
    assert HilbertSeries((0, 0), 3, {(0, 4): 1}).is_zero()


def test_mul_bound_is_min():
    assert (HilbertSeries.constant(1, 3) * HilbertSeries.constant(1, 5)).bound == 3


def test_partial_examples():
    p = phi2(4)
    assert normalized_partial(1, HilbertSeries.constant(1, 4)).is_zero()
    d1 = normalized_partial(1, p)
    # 120 * (1 + sqrt5) / (2 sqrt5) = 60 + 12 sqrt5
    assert d1[MU0] == 12 * (5 + ROOT5)
    assert not d1.modular
    assert normalized_partial(2, p) == swap_conjugate(normalized_partial(1, swap_conjugate(p)))


def test_symmetry_examples():
    assert is_symmetric(phi2(5))
    chi = theta_chi5(5)
    assert is_antisymmetric(chi) and not is_symmetric(chi)


def test_restrict_examples():
    assert restrict_diagonal(phi2(8)).agrees(eisenstein_q(4, 8))
    assert restrict_diagonal(theta_chi5(6)).is_zero()
    assert restrict_diagonal(HilbertSeries.constant(1, 4)).coeffs == (1, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        restrict_diagonal(e(MU0, 3, ROOT5))
    with pytest.raises(DenominatorMismatch):
        restrict_diagonal(rescale_denom(HilbertSeries.constant(1, 3), 2))


def test_invert_examples():
    f = HilbertSeries.constant(1, 5) + e(MU0, 5)
    inv = invert(f)
    assert inv == HilbertSeries((0, 0), 5, {(k, k): (-1) ** k for k in range(6)})
    p = phi2(5)
    assert (invert(p) * p) == HilbertSeries.constant(1, 5)
    assert invert(p).weight == (-2, -2)
    with pytest.raises(NotInvertible):
        invert(theta_chi5(4))


def test_divide_examples():
    p, chi = phi2(6), theta_chi5(6)
    chi_sq = chi * chi
    assert divide_exact(p * chi_sq, p).agrees(chi_sq)
    q = divide_exact(chi_sq, chi)
    assert q.bound == 5 and q.agrees(chi)
    one = HilbertSeries.constant(1, 4)
    with pytest.raises(NotDivisible):
        divide_exact(one + e(MU0, 4), e(MU0, 4))
    with pytest.raises(ZeroDivisionError):
        divide_exact(one, HilbertSeries.zero((0, 0), 4))


def test_chi5_squared_leading_stratum():
    # leading stratum of (Theta/32)^2 is 4X^2 - 8XY + 4Y^2
    sq = theta_chi5(4) ** 2
    assert sq.stratum_coeffs(2) == {2: 4, 0: -8, -2: 4}


def test_sqrt_examples():
    chi = theta_chi5(6)
    r = sqrt_series(chi * chi, "+")
    assert r[MU0] == 2 and r[MU0_CONJ] == -2
    assert r.agrees(chi)
    assert sqrt_series(chi * chi, "-").agrees(-chi)
    g = HilbertSeries.constant(1, 4) + e(MU0, 4, 2) + e((2, 2), 4)
    assert sqrt_series(g) == HilbertSeries.constant(1, 4) + e(MU0, 4)
    with pytest.raises(NoSquareRoot):
        sqrt_series(e(MU0, 4) + e(MU0_CONJ, 4))
    with pytest.raises(NoSquareRoot):
        sqrt_series(HilbertSeries.constant(2, 4))


def _koecher(f):
    return all(k.in_cone() and k.b <= f.bound * f.denom for k in f.coeffs)


@given(cone_series(), cone_series(), cone_series())
def test_mul_commutative_associative(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert _koecher(f * g * h)


@given(cone_series(weight=(2, 2)), cone_series(weight=(2, 2)), rationals)
def test_koecher_after_compositions(f, g, c):
    for out in (f + g, f * g, (f - g).scale(c), swap_conjugate(f * g), normalized_partial(1, f)):
        assert _koecher(out)


@given(cone_series(rational=True), cone_series(rational=True))
def test_restrict_homomorphism(f, g):
    f = f + swap_conjugate(f)
    g = g + swap_conjugate(g)
    assert restrict_diagonal(f * g) == restrict_diagonal(f) * restrict_diagonal(g)
    assert restrict_diagonal(f + g) == restrict_diagonal(f) + restrict_diagonal(g)


@given(cone_series(), cone_series())
def test_swap_involution(f, g):
    assert swap_conjugate(swap_conjugate(f)) == f
    assert swap_conjugate(f * g) == swap_conjugate(f) * swap_conjugate(g)
    assert swap_conjugate(f + g) == swap_conjugate(f) + swap_conjugate(g)


@given(cone_series())
def test_d2_swap_intertwines_d1(f):
    assert normalized_partial(2, swap_conjugate(f)) == swap_conjugate(normalized_partial(1, f))


@given(cone_series(bound=4, max_terms=6), cone_series(bound=4, max_terms=4))
def test_divide_recovers_factor(f, g):
    if g.is_zero():
        return
    q = divide_exact(f * g, g)
    assert q.agrees(f)


@given(unit_series())
def test_invert_property(f):
    assert f * invert(f) == HilbertSeries.constant(1, f.bound)


@given(cone_series(bound=4, max_terms=5), st.sampled_from(["+", "-"]))
def test_sqrt_of_square(f, sign):
    sq = f * f
    if sq.is_zero():
        return
    r = sqrt_series(sq, sign)
    assert r.agrees(f, r.bound) or r.agrees(-f, r.bound)
    assert (r * r).agrees(f * f, r.bound)
