"""Parallel-weight Eisenstein series for Q(sqrt 5) from divisor sums.

The coefficient at a totally positive nu is ``kappa_r * sum |N(mu)|^(r-1)``
over principal ideals ``(mu)`` dividing ``nu*sqrt5``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import KappaInconsistency
from .numberfield import EPS, OKElem, QuadElem
from .series import MU0, HilbertSeries, NuIndex, enumerate_cone

KAPPA: dict[int, Fraction] = {2: Fraction(120), 6: Fraction(2520, 67)}

# weight-12 Gundlach combination: chi6 = GUNDLACH * (phi2^3 - E6 normalized)
GUNDLACH = Fraction(67, 21600)

_EPS4 = EPS**4


@lru_cache(maxsize=None)
def _elements_of_norm(n: int) -> tuple[OKElem, ...]:
    """Associate-normalized elements with |N(mu)| = n.

    Representatives satisfy sigma_1(mu) > 0 and 1 <= sigma_1(mu)^2 / n < eps^4.
    """
    found = []
    # sigma_1 in [sqrt n, eps^2 sqrt n), |sigma_2| = n / sigma_1 <= sqrt n
    # so |v| = |sigma_1 - sigma_2| / sqrt5 < (eps^2 + 1) sqrt(n) / sqrt5 < 2 sqrt(n)
    vmax = 2 * math.isqrt(n) + 2
    for v in range(-vmax, vmax + 1):
        for target in (4 * n + 5 * v * v, 5 * v * v - 4 * n):
            if target < 0:
                continue
            u = math.isqrt(target)
            if u * u != target:
                continue
            for uu in {u, -u}:
                if (uu - v) % 2:
                    continue
                mu = QuadElem.raw(uu, v, 2)
                if mu.sign() <= 0:
                    continue
                ratio = mu * mu / n
                if ratio >= 1 and ratio < _EPS4:
                    found.append(OKElem(uu, v))
    out: list[OKElem] = []
    for mu in sorted(set(found), key=lambda m: (m.u, m.v)):
        if not any(_associates(mu, r) for r in out):
            out.append(mu)
    return tuple(out)


def _associates(x: OKElem, y: OKElem) -> bool:
    q = OKElem.try_from_quad(x.to_quad() / y.to_quad())
    return q is not None and q.is_unit()


def _divisors_int(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def enumerate_divisors(xi: OKElem) -> list[OKElem]:
    """One representative per associate class of divisors of xi in O_K."""
    if xi.u == 0 and xi.v == 0:
        raise ValueError("zero has infinitely many divisors")
    n_xi = abs(xi.norm())
    out = []
    for n in _divisors_int(n_xi):
        for mu in _elements_of_norm(n):
            if mu.divides(xi):
                out.append(mu)
    return out


@lru_cache(maxsize=None)
def _divisor_sum(a: int, b: int, r: int) -> int:
    xi = OKElem(a, b)  # nu * sqrt5 = (a + b sqrt5)/2
    return sum(abs(mu.norm()) ** (r - 1) for mu in enumerate_divisors(xi))


def divisor_sum(nu: tuple[int, int], r: int) -> int:
    nu = NuIndex(*nu)
    if not nu.is_totally_positive():
        raise ValueError(f"{tuple(nu)} is not totally positive")
    if r < 2 or r % 2:
        raise ValueError("r must be even and at least 2")
    return _divisor_sum(nu.a, nu.b, r)


def _eisenstein_from_kappa(r: int, kappa: Fraction, bound: int) -> HilbertSeries:
    coeffs: dict[NuIndex, object] = {NuIndex(0, 0): 1}
    for nu in enumerate_cone(bound)[1:]:
        coeffs[nu] = kappa * _divisor_sum(nu.a, nu.b, r)
    return HilbertSeries((r, r), bound, coeffs, check=False)


def derive_kappa6(bound: int = 2, chi6: HilbertSeries | None = None) -> Fraction:
    """kappa_6 from chi6 = Lambda(phi2)/24 and the Gundlach identity.

    Reads kappa_6 off the coefficient at mu0 of phi2^3 - chi6/GUNDLACH and
    checks every coefficient to ``bound`` against the divisor-sum recipe.
    """
    from .structure import chi6 as build_chi6

    if bound < 1:
        raise ValueError("bound must be at least 1")
    if chi6 is None:
        chi6 = build_chi6(bound)
    phi2 = eisenstein_series(2, bound)
    e6 = phi2 * phi2 * phi2 - chi6.scale(1 / GUNDLACH)
    k = e6[MU0]
    if not k.is_rational():
        raise KappaInconsistency("coefficient at mu0 is irrational")
    kappa = k.to_fraction()
    if e6.constant_term() != 1:
        raise KappaInconsistency("constant term of the weight-6 combination is not 1")
    for nu in enumerate_cone(min(bound, chi6.bound))[1:]:
        expected = kappa * _divisor_sum(nu.a, nu.b, 6)
        if e6[nu] != expected:
            raise KappaInconsistency(
                f"coefficient at {tuple(nu)} is {e6[nu]}, divisor sum predicts {expected}"
            )
    return kappa


@lru_cache(maxsize=None)
def validated_kappa(r: int) -> Fraction:
    if r not in KAPPA:
        raise ValueError(f"unsupported weight {r}: only 2 and 6")
    if r == 6:
        derived = derive_kappa6(2)
        if derived != KAPPA[6]:
            raise KappaInconsistency(f"stored kappa_6 {KAPPA[6]} disagrees with derived {derived}")
    return KAPPA[r]


@lru_cache(maxsize=None)
def eisenstein_series(r: int, bound: int) -> HilbertSeries:
    """Normalized Eisenstein series of weight (r, r) with constant term 1."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    return _eisenstein_from_kappa(r, validated_kappa(r), bound)
