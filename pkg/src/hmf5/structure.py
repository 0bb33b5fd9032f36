"""Generators phi2, chi5, chi6, chi_tilde and the ring relations among them.

``chi6`` is defined as ``Lambda(phi2) / 24``.  The ring generator ``chi5`` is
the theta-built ``Theta / 32`` rescaled by a factor ``rho`` measured from
the leading coefficient of the weight-12 relation (see
:func:`chi5_normalization`); every other relation is then a genuine check.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import qexp
from .diffops import big_pi, lambda_op, t_op, triple_bracket
from .eisenstein import eisenstein_series
from .errors import NotDivisible, NotInRing, UnderdeterminedSystem
from .numberfield import ZERO, QuadElem, solve_linear
from .series import (
    MU0,
    HilbertSeries,
    NuIndex,
    divide_exact,
    enumerate_cone,
    invert,
    is_symmetric,
    restrict_diagonal,
    swap_conjugate,
)
from .theta import chi5 as theta_chi5

# ---------------------------------------------------------------------------
# memoized generators


class _Cache:
    """Keeps the largest bound computed per name and truncates on demand."""

    def __init__(self) -> None:
        self._data: dict[str, HilbertSeries] = {}
        self._lock = threading.Lock()

    def get(self, name: str, bound: int, build: Callable[[int], HilbertSeries]) -> HilbertSeries:
        with self._lock:
            hit = self._data.get(name)
        if hit is not None and hit.bound >= bound:
            return hit if hit.bound == bound else hit.truncate(bound)
        value = build(bound)
        with self._lock:
            old = self._data.get(name)
            if old is None or old.bound < value.bound:
                self._data[name] = value
        return value if value.bound == bound else value.truncate(bound)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


_cache = _Cache()


def phi2(bound: int) -> HilbertSeries:
    return _cache.get("phi2", bound, lambda n: eisenstein_series(2, n))


def chi6(bound: int) -> HilbertSeries:
    """``Lambda(phi2) / 24``: weight (6, 6), symmetric cusp form, 1 at mu0."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return _cache.get("chi6", bound, lambda n: lambda_op(phi2(n)).scale(Fraction(1, 24)))


def chi5_squared_deri2(bound: int) -> HilbertSeries:
    """``(9 chi6^2 - Pi(phi2)/576) / (5 phi2)``, weight (10, 10)."""
    if bound < 2:
        raise ValueError("bound must be at least 2")

    def build(n: int) -> HilbertSeries:
        p, c6 = phi2(n), chi6(n)
        num = (c6 * c6).scale(9) - big_pi(p).scale(Fraction(1, 576))
        return num * invert(p.scale(5))

    return _cache.get("chi5sq_deri2", bound, build)


@lru_cache(maxsize=None)
def chi5_normalization() -> Fraction:
    """The factor rho with ``(rho * Theta/32)^2`` matching the weight-12 relation.

    Measured at the leading coefficient (index 2 mu0) and returned with the
    sign making the coefficient of chi5 at mu0 positive.
    """
    target = chi5_squared_deri2(2)[NuIndex(2, 2)]
    c = theta_chi5(2)[MU0]
    rho2 = target / (c * c)
    rho = rho2.sqrt()
    if rho is None or not rho.is_rational():
        raise NotInRing(f"normalization factor {rho2} has no rational square root")
    return rho.to_fraction()


def chi5(bound: int) -> HilbertSeries:
    """The ring generator of weight (5, 5): ``rho * Theta / 32``."""
    return _cache.get("chi5", bound, lambda n: theta_chi5(n).scale(chi5_normalization()))


def chi5_squared(bound: int) -> HilbertSeries:
    return _cache.get("chi5sq", bound, lambda n: chi5(n) * chi5(n))


def chi_tilde(bound: int) -> HilbertSeries:
    """``[chi6, phi2, chi5]``: symmetric, weight (15, 15)."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return _cache.get("chi_tilde", bound, lambda n: triple_bracket(chi6(n), phi2(n), chi5(n)))


def diagonal_constant() -> Fraction:
    """c with ``chi6(z, z) = c * Delta(z)``; verified to bound 10."""
    r = restrict_diagonal(chi6(10))
    delta = qexp.delta_q(10)
    c = r[1]
    if not r.agrees(delta.scale(c)):
        raise NotInRing("restriction of chi6 is not a multiple of Delta")
    return c


GENERATOR_WEIGHTS: dict[str, int] = {"phi2": 2, "chi5": 5, "chi5sq": 10, "chi6": 6, "chi_tilde": 15}

_BUILDERS: dict[str, Callable[[int], HilbertSeries]] = {
    "phi2": phi2,
    "chi5": chi5,
    "chi5sq": chi5_squared,
    "chi6": chi6,
    "chi_tilde": chi_tilde,
}

SYMMETRIC_BASIS = ("phi2", "chi5sq", "chi6")
FULL_BASIS = ("phi2", "chi5", "chi6", "chi_tilde")


def generator(name: str, bound: int) -> HilbertSeries:
    return _BUILDERS[name](bound)


# ---------------------------------------------------------------------------
# isobaric polynomials


def isobaric_monomials(weights: Sequence[int], weight: int) -> list[tuple[int, ...]]:
    """Exponent vectors e with sum e_j w_j = weight, in reverse lex order."""
    out: list[tuple[int, ...]] = []

    def rec(j: int, remaining: int, prefix: tuple[int, ...]) -> None:
        if j == len(weights) - 1:
            if remaining % weights[j] == 0:
                out.append(prefix + (remaining // weights[j],))
            return
        for e in range(remaining // weights[j], -1, -1):
            rec(j + 1, remaining - e * weights[j], prefix + (e,))

    if weight < 0:
        return []
    if not weights:
        return [()] if weight == 0 else []
    rec(0, weight, ())
    return out


@dataclass(frozen=True)
class IsobaricPoly:
    generators: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], QuadElem], ...]
    weight: int

    def __post_init__(self) -> None:
        ws = [GENERATOR_WEIGHTS[g] for g in self.generators]
        for exps, _ in self.terms:
            if sum(e * w for e, w in zip(exps, ws)) != self.weight:
                raise ValueError(f"monomial {exps} is not of weight {self.weight}")

    def as_dict(self) -> dict[tuple[int, ...], QuadElem]:
        return dict(self.terms)

    def coefficient(self, exps: Sequence[int]) -> QuadElem:
        return self.as_dict().get(tuple(exps), ZERO)

    def evaluate(self, bound: int, series: Mapping[str, HilbertSeries] | None = None) -> HilbertSeries:
        gens = [series[g] if series else generator(g, bound) for g in self.generators]
        total = HilbertSeries.zero((self.weight, self.weight), bound)
        powers: dict[tuple[int, int], HilbertSeries] = {}
        for exps, c in self.terms:
            term = HilbertSeries.constant(c, bound)
            for j, e in enumerate(exps):
                if e:
                    key = (j, e)
                    if key not in powers:
                        powers[key] = gens[j] ** e
                    term = term * powers[key]
            total = total + term.with_weight((self.weight, self.weight))
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            mono = "*".join(f"{g}^{e}" if e > 1 else g for g, e in zip(self.generators, exps) if e)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def fit_isobaric_relation(
    target: HilbertSeries,
    generators: Sequence[str] | Mapping[str, HilbertSeries],
    weight: int,
) -> IsobaricPoly:
    """Exact isobaric polynomial in the generators equal to ``target``.

    Every Fourier coefficient up to the target's bound becomes one equation.
    Raises NotInRing if no solution exists and UnderdeterminedSystem if the
    bound cannot separate the monomials.
    """
    if target.weight != (weight, weight):
        raise ValueError(f"target weight {target.weight} is not ({weight}, {weight})")
    if isinstance(generators, Mapping):
        names = tuple(generators)
        gens = [generators[g].truncate(target.bound) if generators[g].bound > target.bound
                else generators[g] for g in names]
    else:
        names = tuple(generators)
        gens = [generator(g, target.bound) for g in names]
    bound = min([target.bound] + [g.bound for g in gens])
    monos = isobaric_monomials([GENERATOR_WEIGHTS[g] for g in names], weight)
    if not monos:
        if target.truncate(bound).is_zero():
            return IsobaricPoly(names, (), weight)
        raise NotInRing(f"no isobaric monomials of weight {weight}; the target is nonzero")
    powers: dict[tuple[int, int], HilbertSeries] = {}
    columns = []
    for exps in monos:
        col = HilbertSeries.constant(1, bound)
        for j, e in enumerate(exps):
            if e:
                if (j, e) not in powers:
                    powers[(j, e)] = gens[j] ** e
                col = col * powers[(j, e)]
        columns.append(col)
    keys = enumerate_cone(bound)
    A = [[col[k] for col in columns] for k in keys]
    b = [target[k] for k in keys]
    sol = solve_linear(A, b)
    if sol.status == "inconsistent":
        raise NotInRing(f"target is not an isobaric polynomial of weight {weight} in {', '.join(names)}")
    if sol.status == "underdetermined":
        raise UnderdeterminedSystem(
            f"bound {bound} leaves {len(monos) - sol.rank} degrees of freedom; raise the bound"
        )
    terms = tuple((m, c) for m, c in zip(monos, sol.particular) if c)
    return IsobaricPoly(names, terms, weight)


def required_bound(weight: int, generators: Sequence[str] = SYMMETRIC_BASIS) -> int:
    """Bound policy: number of isobaric monomials of the weight plus two."""
    return len(isobaric_monomials([GENERATOR_WEIGHTS[g] for g in generators], weight)) + 2


# ---------------------------------------------------------------------------
# decompositions


def _parallel_weight(F: HilbertSeries) -> int:
    if not F.is_parallel() or isinstance(F.weight[0], Fraction):
        raise ValueError(f"parallel integral weight required, got {F.weight}")
    return F.weight[0]


def decompose_symmetric_even(F: HilbertSeries) -> IsobaricPoly:
    """F as an isobaric polynomial in phi2, chi5^2, chi6 (global linear solve)."""
    k = _parallel_weight(F)
    if k % 2:
        raise ValueError("even weight required")
    if not is_symmetric(F):
        raise NotInRing("input is not symmetric")
    return fit_isobaric_relation(F, SYMMETRIC_BASIS, k)


def _decompose_e4_delta(g: qexp.QExp) -> list[tuple[tuple[int, int], Fraction]]:
    """g as a polynomial in E4, Delta (exponent pairs (a, b), 4a + 12b = weight)."""
    w = g.weight
    monos = [(a, (w - 4 * a) // 12) for a in range(w // 4, -1, -1) if w >= 4 * a and (w - 4 * a) % 12 == 0]
    if not monos:
        if g.is_zero():
            return []
        raise NotInRing(f"no elliptic modular form of weight {w}")
    e4, delta = qexp.eisenstein_q(4, g.bound), qexp.delta_q(max(g.bound, 1)).truncate(g.bound)
    cols = [(e4**a) * (delta**b) for a, b in monos]
    A = [[c[n] for c in cols] for n in range(g.bound + 1)]
    sol = solve_linear(A, list(g.coeffs))
    if sol.status == "inconsistent":
        raise NotInRing("diagonal restriction is not in C[E4, Delta]")
    if sol.status != "unique":
        raise UnderdeterminedSystem("bound too small for the elliptic decomposition")
    return [(m, c.to_fraction()) for m, c in zip(monos, sol.particular) if c]


def lift_mu(p: Sequence[tuple[tuple[int, int], object]], weight: int) -> IsobaricPoly:
    """E4 -> phi2, Delta -> chi6 / c, as a polynomial over (phi2, chi5sq, chi6)."""
    c = diagonal_constant()
    if weight % 4:
        raise ValueError("elliptic weight must be a multiple of 4")
    terms = []
    for (a, b), coef in p:
        terms.append(((a, 0, b), QuadElem(Fraction(coef) / c**b)))
    return IsobaricPoly(SYMMETRIC_BASIS, tuple(terms), weight // 2)


def decompose_symmetric_recursive(F: HilbertSeries) -> IsobaricPoly:
    """Restrict to the diagonal, lift through mu, subtract, divide by chi5^2, recurse."""
    k = _parallel_weight(F)
    if k % 2:
        raise ValueError("even weight required")
    acc: dict[tuple[int, int, int], QuadElem] = {}
    shift = 0
    current = F
    while True:
        w = current.weight[0]
        if current.is_zero():
            break
        if w < 0:
            raise NotInRing("nonzero remainder of negative weight")
        if current.bound < 1:
            raise UnderdeterminedSystem("bound exhausted by repeated division by chi5^2")
        p = _decompose_e4_delta(restrict_diagonal(current))
        lifted = lift_mu(p, 2 * w)
        for (a, _, b), coef in lifted.terms:
            key = (a, shift, b)
            acc[key] = acc.get(key, ZERO) + coef
        rest = current - lifted.evaluate(current.bound)
        if rest.is_zero():
            break
        try:
            current = divide_exact(rest, chi5_squared(current.bound))
        except NotDivisible as exc:
            raise NotInRing(f"remainder is not divisible by chi5^2: {exc}") from exc
        shift += 1
    monos = isobaric_monomials([2, 10, 6], k)
    terms = tuple((m, acc[m]) for m in monos if acc.get(m))
    return IsobaricPoly(SYMMETRIC_BASIS, terms, k)


@dataclass(frozen=True)
class Decomposition:
    """F = symmetric + antisymmetric parts over phi2, chi5, chi6, chi_tilde."""

    poly: IsobaricPoly
    symmetric: IsobaricPoly
    antisymmetric: IsobaricPoly


def _chi5sq_to_chi5(p: IsobaricPoly, extra: tuple[int, int] = (0, 0)) -> list:
    """Rewrite a (phi2, chi5sq, chi6) polynomial over FULL_BASIS, times chi5^e5 chi_tilde^et."""
    e5, et = extra
    return [((a, 2 * s + e5, c, et), coef) for (a, s, c), coef in p.terms]


def decompose_any(F: HilbertSeries) -> Decomposition:
    """Decomposition over {phi2, chi5, chi6, chi_tilde} with chi_tilde-degree at most 1."""
    k = _parallel_weight(F)
    sw = swap_conjugate(F)
    half = Fraction(1, 2)
    sym = (F + sw).scale(half)
    anti = (F - sw).scale(half)
    n = F.bound
    sym_terms: list = []
    anti_terms: list = []
    if not sym.is_zero():
        if k % 2 == 0:
            sym_terms = _chi5sq_to_chi5(decompose_symmetric_even(sym))
        else:
            q = _divide_or_raise(sym, chi_tilde(n))
            sym_terms = _chi5sq_to_chi5(decompose_symmetric_even(q), (0, 1))
    if not anti.is_zero():
        q = _divide_or_raise(anti, chi5(n))
        if k % 2:
            anti_terms = _chi5sq_to_chi5(decompose_symmetric_even(q), (1, 0))
        else:
            q2 = _divide_or_raise(q, chi_tilde(q.bound))
            anti_terms = _chi5sq_to_chi5(decompose_symmetric_even(q2), (1, 1))
    sym_p = IsobaricPoly(FULL_BASIS, tuple(sym_terms), k)
    anti_p = IsobaricPoly(FULL_BASIS, tuple(anti_terms), k)
    merged: dict = {}
    for m, c in sym_terms + anti_terms:
        merged[m] = merged.get(m, ZERO) + c
    poly = IsobaricPoly(FULL_BASIS, tuple((m, c) for m, c in merged.items() if c), k)
    if not poly.evaluate(F.bound).agrees(F):
        raise NotInRing("reassembled polynomial does not reproduce the input")
    return Decomposition(poly, sym_p, anti_p)


def _divide_or_raise(g: HilbertSeries, d: HilbertSeries) -> HilbertSeries:
    try:
        return divide_exact(g, d)
    except NotDivisible as exc:
        raise NotInRing(f"no representation: {exc}") from exc


# ---------------------------------------------------------------------------
# relations

T_CONSTANT = Fraction(2**11 * 3**3 * 5, 7)

KLEIN_MONOMIALS: dict[tuple[int, int, int], Fraction] = {
    # exponents over (phi2, chi5sq, chi6); coefficients of (5/49) chi_tilde^2
    (0, 3, 0): Fraction(50000),
    (2, 2, 1): Fraction(-1000),
    (5, 2, 0): Fraction(1),
    (4, 1, 2): Fraction(-2),
    (1, 1, 3): Fraction(1800),
    (3, 0, 4): Fraction(1),
    (0, 0, 5): Fraction(-864),
}


def klein_expected() -> dict[tuple[int, int, int], Fraction]:
    """Published coefficients of chi_tilde^2 itself (scaled by 49/5)."""
    return {m: Fraction(49, 5) * c for m, c in KLEIN_MONOMIALS.items()}


def klein_rhs(bound: int) -> HilbertSeries:
    poly = IsobaricPoly(SYMMETRIC_BASIS, tuple((m, QuadElem(c)) for m, c in klein_expected().items()), 30)
    return poly.evaluate(bound)


RELATIONS = ("systeme2_1", "systeme2_2", "systeme2_3", "deri2", "equadiff", "klein", "t_identity", "theta_cross_check")

RELATION_WEIGHTS = {
    "systeme2_1": 6,
    "systeme2_2": 14,
    "systeme2_3": 22,
    "deri2": 12,
    "equadiff": 14,
    "klein": 30,
    "t_identity": 20,
    "theta_cross_check": 10,
}


def verify_relation(name: str, bound: int) -> HilbertSeries:
    """Left minus right of the named relation; zero when it holds."""
    p = phi2(bound)
    if name == "systeme2_1":
        return lambda_op(p) - chi6(bound).scale(24)
    if name == "systeme2_2":
        c6, s = chi6(bound), chi5_squared(bound)
        return lambda_op(c6) - (p * (p * s - c6 * c6)).scale(Fraction(1, 20))
    if name == "systeme2_3":
        c6, s = chi6(bound), chi5_squared(bound)
        return lambda_op(s) - (s * (c6 * c6 - p * s)).scale(Fraction(1, 10))
    if name == "deri2":
        c6, s = chi6(bound), chi5_squared(bound)
        return big_pi(p) - ((c6 * c6).scale(9) - (p * s).scale(5)).scale(576)
    if name == "equadiff":
        lp = lambda_op(p)
        return lambda_op(lp).scale(100) + p * big_pi(p) - (p * lp * lp).scale(4)
    if name == "klein":
        ct = chi_tilde(bound)
        return (ct * ct) - klein_rhs(bound)
    if name == "t_identity":
        q = divide_exact(t_op(p), p * p)
        n = q.bound
        return q - (chi5(n) * chi_tilde(n)).scale(T_CONSTANT)
    if name == "theta_cross_check":
        c = theta_chi5(bound)
        return (c * c) - chi5_squared_deri2(bound)
    raise ValueError(f"unknown relation {name!r}")
