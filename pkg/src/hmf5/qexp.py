"""One-variable q-expansions: E2, E4, E6, Delta, the derivation D = q d/dq,
Rankin-Cohen brackets and decomposition in C[E4, E6]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .errors import NotDivisible, NotInRing, WeightMismatch
from .numberfield import solve_linear


def _sigma(k: int, n: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**k
            e = n // d
            if e != d:
                total += e**k
        d += 1
    return total


@dataclass(frozen=True)
class QExp:
    """Truncated expansion ``sum_{n <= bound} c_n q^n`` with a weight tag."""

    weight: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_list(cls, weight: int, values: Iterable[object]) -> QExp:
        return cls(weight, tuple(Fraction(v) for v in values))

    @classmethod
    def constant(cls, c: object, bound: int, weight: int = 0) -> QExp:
        return cls(weight, (Fraction(c),) + (Fraction(0),) * bound)

    @property
    def bound(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def truncate(self, bound: int) -> QExp:
        if bound > self.bound:
            raise ValueError(f"cannot extend bound {self.bound} to {bound}")
        return QExp(self.weight, self.coeffs[: bound + 1])

    def with_weight(self, weight: int) -> QExp:
        return QExp(weight, self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def _coerce(self, other: object) -> QExp:
        if isinstance(other, QExp):
            return other
        if isinstance(other, (int, Fraction)):
            return QExp.constant(other, self.bound, self.weight)
        raise TypeError(f"cannot combine QExp with {type(other).__name__}")

    def __add__(self, other: object) -> QExp:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if other.weight != self.weight:
            raise WeightMismatch(f"cannot add weights {self.weight} and {other.weight}")
        n = min(self.bound, other.bound)
        return QExp(self.weight, tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> QExp:
        return QExp(self.weight, tuple(-c for c in self.coeffs))

    def __sub__(self, other: object) -> QExp:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> QExp:
        return (-self) + other

    def __mul__(self, other: object) -> QExp:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return QExp(self.weight, tuple(c * v for v in self.coeffs))
        if not isinstance(other, QExp):
            return NotImplemented
        n = min(self.bound, other.bound)
        f, g = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            out.append(sum((f[i] * g[k - i] for i in range(k + 1) if f[i] and g[k - i]), Fraction(0)))
        return QExp(self.weight + other.weight, tuple(out))

    __rmul__ = __mul__

    def scale(self, c: object) -> QExp:
        return self * Fraction(c)

    def __pow__(self, e: int) -> QExp:
        if e < 0:
            raise ValueError("negative powers: use divide")
        result = QExp.constant(1, self.bound)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QExp):
            return NotImplemented
        return self.weight == other.weight and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.weight, self.coeffs))

    def agrees(self, other: QExp) -> bool:
        """Coefficientwise equality to the shared bound, ignoring weight tags."""
        n = min(self.bound, other.bound)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]


def ring_ops(f: QExp, g: QExp | object, op: str) -> QExp:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown op {op!r}")


def divide(f: QExp, g: QExp) -> QExp:
    """Exact quotient f/g; the output bound drops by the valuation of g."""
    v = g.valuation()
    if v is None:
        raise ZeroDivisionError("division by the zero series")
    fv = f.valuation()
    if fv is not None and fv < v:
        raise NotDivisible("quotient would have a pole at q = 0")
    n = min(f.bound, g.bound) - v
    num = f.coeffs[v : v + n + 1]
    den = g.coeffs[v : v + n + 1]
    inv0 = 1 / den[0]
    h: list[Fraction] = []
    for k in range(n + 1):
        acc = num[k] - sum((h[i] * den[k - i] for i in range(k) if h[i] and den[k - i]), Fraction(0))
        h.append(acc * inv0)
    return QExp(f.weight - g.weight, tuple(h))


def d_operator(f: QExp) -> QExp:
    return QExp(f.weight + 2, tuple(n * c for n, c in enumerate(f.coeffs)))


@lru_cache(maxsize=None)
def eisenstein_q(k: int, bound: int) -> QExp:
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if k == 4:
        c, e = 240, 3
    elif k == 6:
        c, e = -504, 5
    else:
        raise ValueError(f"unsupported weight {k}: only 4 and 6")
    return QExp(k, (Fraction(1),) + tuple(Fraction(c * _sigma(e, n)) for n in range(1, bound + 1)))


@lru_cache(maxsize=None)
def delta_q(bound: int) -> QExp:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    e4 = eisenstein_q(4, bound)
    e6 = eisenstein_q(6, bound)
    return (e4 * e4 * e4 - e6 * e6).scale(Fraction(1, 1728))


@lru_cache(maxsize=None)
def e2_q(bound: int) -> QExp:
    """E2 as the logarithmic derivative of Delta."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    delta = delta_q(bound + 1)
    return divide(d_operator(delta), delta).truncate(bound).with_weight(2)


def rankin_cohen_1var(f: QExp, g: QExp, n: int) -> QExp:
    """The n-th Rankin-Cohen bracket with D in place of d/dz."""
    if n < 0:
        raise ValueError("bracket order must be nonnegative")
    k, l = f.weight, g.weight
    df = [f]
    dg = [g]
    for _ in range(n):
        df.append(d_operator(df[-1]))
        dg.append(d_operator(dg[-1]))
    bound = min(f.bound, g.bound)
    total = QExp(k + l + 2 * n, (Fraction(0),) * (bound + 1))
    for r in range(n + 1):
        c = (-1) ** r * comb(k + n - 1, n - r) * comb(l + n - 1, r)
        if c:
            term = df[r] * dg[n - r]
            total = total + term.scale(c).with_weight(total.weight)
    return total


def elliptic_monomials(weight: int) -> list[tuple[int, int]]:
    """Exponent pairs (a, b) with 4a + 6b = weight, largest a first."""
    if weight < 0 or weight % 2:
        return []
    return [(a, (weight - 4 * a) // 6) for a in range(weight // 4, -1, -1) if (weight - 4 * a) % 6 == 0]


def evaluate_elliptic(poly: Sequence[tuple[tuple[int, int], object]], weight: int, bound: int) -> QExp:
    e4 = eisenstein_q(4, bound)
    e6 = eisenstein_q(6, bound)
    total = QExp.constant(0, bound, weight)
    for (a, b), c in poly:
        total = total + ((e4**a) * (e6**b)).scale(c).with_weight(weight)
    return total


def isobaric_decompose_elliptic(f: QExp) -> list[tuple[tuple[int, int], Fraction]]:
    """Write f as an isobaric polynomial in E4, E6; raises NotInRing otherwise."""
    monos = elliptic_monomials(f.weight)
    if not monos:
        if f.is_zero():
            return []
        raise NotInRing(f"not a modular form of this weight ({f.weight})")
    if f.bound + 1 < len(monos):
        raise ValueError(f"bound {f.bound} too small for {len(monos)} monomials")
    e4 = eisenstein_q(4, f.bound)
    e6 = eisenstein_q(6, f.bound)
    columns = [(e4**a) * (e6**b) for a, b in monos]
    A = [[col[n] for col in columns] for n in range(f.bound + 1)]
    sol = solve_linear(A, list(f.coeffs))
    if sol.status == "inconsistent":
        raise NotInRing(f"not a modular form of this weight ({f.weight})")
    if sol.status != "unique":
        raise ValueError("bound too small to separate the monomials")
    out = []
    for mono, c in zip(monos, sol.particular):
        if c:
            out.append((mono, c.to_fraction()))
    return out

