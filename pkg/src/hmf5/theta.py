"""The ten-factor theta product and chi5 = Theta / 32.

Each factor is ``sum_{nu in O_K} (-1)^{t(nu beta / sqrt5)} e(t(lambda(nu) z))``
with ``lambda(nu) = (nu + alpha/2)^2 eps / (2 sqrt5)``.  Exponents live on the
lattice with denominator 8 until the full product is taken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .numberfield import EPS, EPS_CONJ, ROOT5, OKElem, QuadElem
from .series import HilbertSeries, NuIndex, reduce_denom

THETA_DENOM = 8


@dataclass(frozen=True)
class Characteristic:
    alpha: OKElem
    beta: OKElem


def _ok(z: QuadElem) -> OKElem:
    return OKElem.from_quad(z)


_ZERO, _ONE = QuadElem(0), QuadElem(1)

CHARACTERISTICS: tuple[Characteristic, ...] = tuple(
    Characteristic(_ok(a), _ok(b))
    for a, b in [
        (_ZERO, _ZERO),
        (_ONE, _ZERO),
        (_ZERO, _ONE),
        (_ONE, _ONE),
        (_ZERO, EPS_CONJ),
        (_ZERO, EPS),
        (EPS_CONJ, _ZERO),
        (EPS, _ZERO),
        (EPS_CONJ, EPS),
        (EPS, EPS_CONJ),
    ]
)

_FACTOR = EPS / (2 * ROOT5)


def exponent(nu: OKElem, alpha: OKElem) -> QuadElem:
    x = nu.to_quad() + alpha.to_quad() / 2
    return x * x * _FACTOR


def sign(nu: OKElem, beta: OKElem) -> int:
    t = (nu.to_quad() * beta.to_quad() / ROOT5).trace()
    assert t.denominator == 1, "t(nu beta / sqrt5) must be an integer"
    return -1 if t % 2 else 1


@lru_cache(maxsize=None)
def theta_factor(ch: Characteristic, bound: int) -> HilbertSeries:
    """One factor of the product, weight (1/2, 1/2), denominator 8."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    D = THETA_DENOM
    a0, a1 = ch.alpha.to_quad().embed()
    # t(lambda) = x1^2 eps/(2 r5) + x2^2 (-eps')/(2 r5) with x_i = sigma_i(nu + alpha/2);
    # both summands are at most the bound, so |x_i| <= sqrt(8 bound)
    r = math.sqrt(8 * bound) + 2
    umax = int(2 * r + abs(a0) + abs(a1)) + 2
    vmax = int((2 * r + abs(a0) + abs(a1)) / math.sqrt(5)) + 2
    coeffs: dict[NuIndex, int] = {}
    for u in range(-umax, umax + 1):
        for v in range(-vmax, vmax + 1):
            if (u - v) % 2:
                continue
            nu = OKElem(u, v)
            lam = exponent(nu, ch.alpha)
            if lam.trace() > bound:
                continue
            assert lam.sign() >= 0 and lam.conj().sign() >= 0, "exponent must be totally nonnegative"
            key = NuIndex.from_field(lam, D)
            coeffs[key] = coeffs.get(key, 0) + sign(nu, ch.beta)
    return HilbertSeries((Fraction(1, 2), Fraction(1, 2)), bound, coeffs, denom=D)


@lru_cache(maxsize=None)
def theta_product(bound: int) -> HilbertSeries:
    """Theta as the product of the ten factors, on the integral lattice."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    factors = [theta_factor(ch, bound) for ch in CHARACTERISTICS]
    # pairwise tree keeps intermediate supports small
    while len(factors) > 1:
        nxt = [factors[i] * factors[i + 1] for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            nxt.append(factors[-1])
        factors = nxt
    theta = reduce_denom(factors[0])
    assert theta.weight == (5, 5)
    assert not theta.constant_term(), "Theta must be a cusp form"
    return theta


@lru_cache(maxsize=None)
def chi5(bound: int) -> HilbertSeries:
    return theta_product(bound).scale(Fraction(1, 32))
