"""Exact arithmetic in K = Q(sqrt 5) and its ring of integers.

Elements are stored as ``(p + q*sqrt5) / d`` with integer ``p, q, d``,
``d > 0`` and ``gcd(p, q, d) = 1``, so equality and hashing are structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import InconsistentSystem

SQRT5 = math.sqrt(5.0)

Rational = Union[int, Fraction]


def _normalize(p: int, q: int, d: int) -> tuple[int, int, int]:
    if d == 0:
        raise ZeroDivisionError("zero denominator")
    if d < 0:
        p, q, d = -p, -q, -d
    g = math.gcd(math.gcd(p, q), d)
    if g > 1:
        p //= g
        q //= g
        d //= g
    return p, q, d


class QuadElem:
    """An exact element ``x + y*sqrt5`` of Q(sqrt 5)."""

    __slots__ = ("_p", "_q", "_d", "_hash")

    def __init__(self, x: Rational = 0, y: Rational = 0) -> None:
        x = Fraction(x)
        y = Fraction(y)
        d = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
        p = x.numerator * (d // x.denominator)
        q = y.numerator * (d // y.denominator)
        self._p, self._q, self._d = _normalize(p, q, d)
        self._hash = None

    @classmethod
    def raw(cls, p: int, q: int, d: int = 1) -> QuadElem:
        """Build ``(p + q*sqrt5)/d`` from integers."""
        obj = cls.__new__(cls)
        obj._p, obj._q, obj._d = _normalize(p, q, d)
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: object) -> QuadElem:
        if isinstance(value, QuadElem):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, OKElem):
            return value.to_quad()
        raise TypeError(f"cannot convert {type(value).__name__} to QuadElem")

    # components
    @property
    def x(self) -> Fraction:
        return Fraction(self._p, self._d)

    @property
    def y(self) -> Fraction:
        return Fraction(self._q, self._d)

    @property
    def parts(self) -> tuple[int, int, int]:
        return self._p, self._q, self._d

    def is_rational(self) -> bool:
        return self._q == 0

    def to_fraction(self) -> Fraction:
        if self._q:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._p, self._d)

    # arithmetic
    def __add__(self, other: object) -> QuadElem:
        if not isinstance(other, QuadElem):
            try:
                other = QuadElem.coerce(other)
            except TypeError:
                return NotImplemented
        p1, q1, d1 = self._p, self._q, self._d
        p2, q2, d2 = other._p, other._q, other._d
        if d1 == d2:
            return QuadElem.raw(p1 + p2, q1 + q2, d1)
        return QuadElem.raw(p1 * d2 + p2 * d1, q1 * d2 + q2 * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> QuadElem:
        return QuadElem.raw(-self._p, -self._q, self._d)

    def __pos__(self) -> QuadElem:
        return self

    def __sub__(self, other: object) -> QuadElem:
        if not isinstance(other, QuadElem):
            try:
                other = QuadElem.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> QuadElem:
        return (-self) + other

    def __mul__(self, other: object) -> QuadElem:
        if not isinstance(other, QuadElem):
            try:
                other = QuadElem.coerce(other)
            except TypeError:
                return NotImplemented
        p1, q1, d1 = self._p, self._q, self._d
        p2, q2, d2 = other._p, other._q, other._d
        return QuadElem.raw(p1 * p2 + 5 * q1 * q2, p1 * q2 + q1 * p2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> QuadElem:
        # 1/(p + q r5) * d = d (p - q r5) / (p^2 - 5 q^2)
        n = self._p * self._p - 5 * self._q * self._q
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        return QuadElem.raw(self._d * self._p, -self._d * self._q, n)

    def __truediv__(self, other: object) -> QuadElem:
        if not isinstance(other, QuadElem):
            try:
                other = QuadElem.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> QuadElem:
        return QuadElem.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> QuadElem:
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison and hashing
    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadElem):
            return self._p == other._p and self._q == other._q and self._d == other._d
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return self._q == 0 and self._p == f.numerator and self._d == f.denominator
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self._q == 0:
                self._hash = hash(Fraction(self._p, self._d))
            else:
                self._hash = hash((self._p, self._q, self._d))
        return self._hash

    def __bool__(self) -> bool:
        return self._p != 0 or self._q != 0

    def sign(self) -> int:
        """Exact sign of the real number ``sigma_1(self)``."""
        return _sign_p_plus_q_r5(self._p, self._q)

    def __lt__(self, other: object) -> bool:
        return (self - QuadElem.coerce(other)).sign() < 0

    def __le__(self, other: object) -> bool:
        return (self - QuadElem.coerce(other)).sign() <= 0

    def __gt__(self, other: object) -> bool:
        return (self - QuadElem.coerce(other)).sign() > 0

    def __ge__(self, other: object) -> bool:
        return (self - QuadElem.coerce(other)).sign() >= 0

    def __abs__(self) -> QuadElem:
        return -self if self.sign() < 0 else self

    # Galois structure
    def conj(self) -> QuadElem:
        return QuadElem.raw(self._p, -self._q, self._d)

    def trace(self) -> Fraction:
        return Fraction(2 * self._p, self._d)

    def norm(self) -> Fraction:
        return Fraction(self._p * self._p - 5 * self._q * self._q, self._d * self._d)

    def embed(self) -> tuple[float, float]:
        """The two real embeddings (sqrt5 -> +sqrt5, sqrt5 -> -sqrt5)."""
        x = self._p / self._d
        y = self._q / self._d
        return x + y * SQRT5, x - y * SQRT5

    def sqrt(self) -> QuadElem | None:
        """An exact square root in K with nonnegative first embedding, or None."""
        if not self:
            return ZERO
        x, y = self.x, self.y
        if y == 0:
            r = _fraction_sqrt(x)
            if r is not None:
                return QuadElem(r)
            r = _fraction_sqrt(x / 5)
            if r is not None:
                return QuadElem(0, r)
            return None
        # (u + v r5)^2 = x + y r5  =>  u^2 = (x +- sqrt(x^2 - 5y^2)) / 2
        s = _fraction_sqrt(x * x - 5 * y * y)
        if s is None:
            return None
        for u2 in ((x + s) / 2, (x - s) / 2):
            u = _fraction_sqrt(u2)
            if u:
                cand = QuadElem(u, y / (2 * u))
                if cand * cand == self:
                    return cand if cand.sign() >= 0 else -cand
        return None

    def bit_size(self) -> int:
        return abs(self._p).bit_length() + abs(self._q).bit_length() + self._d.bit_length()

    def __repr__(self) -> str:
        return f"QuadElem({self.x}, {self.y})"

    def __str__(self) -> str:
        return format_quad(self)


def _sign_p_plus_q_r5(p: int, q: int) -> int:
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if (p > 0) == (q > 0):
        return 1 if p > 0 else -1
    # opposite signs: compare p^2 with 5 q^2
    diff = p * p - 5 * q * q
    if diff == 0:
        return 0
    dominant = p if diff > 0 else q
    return 1 if dominant > 0 else -1


def _fraction_sqrt(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    n, d = f.numerator, f.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def format_quad(z: QuadElem) -> str:
    """Render as ``"p/q+r/s*sqrt5"`` (terms omitted when zero)."""
    x, y = z.x, z.y
    if y == 0:
        return str(x)
    ys = "" if abs(y) == 1 else f"{abs(y)}*"
    if x == 0:
        return f"{'-' if y < 0 else ''}{ys}sqrt5"
    return f"{x}{'-' if y < 0 else '+'}{ys}sqrt5"


def parse_quad(text: str) -> QuadElem:
    """Inverse of :func:`format_quad`."""
    s = text.replace(" ", "")
    if "sqrt5" not in s:
        return QuadElem(Fraction(s))
    body = s[: s.index("sqrt5")]
    if s[s.index("sqrt5") + 5:]:
        raise ValueError(f"malformed element {text!r}")
    # split off the rational part at the last sign that is not leading
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut > 0:
        x, ypart = Fraction(body[:cut]), body[cut:]
    else:
        x, ypart = Fraction(0), body
    ypart = ypart.rstrip("*")
    if ypart in ("", "+"):
        y = Fraction(1)
    elif ypart == "-":
        y = Fraction(-1)
    else:
        y = Fraction(ypart)
    return QuadElem(x, y)


ZERO = QuadElem(0)
ONE = QuadElem(1)
ROOT5 = QuadElem(0, 1)
EPS = QuadElem(Fraction(1, 2), Fraction(1, 2))
EPS_CONJ = EPS.conj()


def conj_trace_norm(x: QuadElem) -> tuple[QuadElem, Fraction, Fraction]:
    return x.conj(), x.trace(), x.norm()


def embed(x: QuadElem) -> tuple[float, float]:
    return x.embed()


def is_totally_positive(x: QuadElem) -> bool:
    return x.sign() > 0 and x.conj().sign() > 0


@dataclass(frozen=True)
class OKElem:
    """An algebraic integer ``(u + v*sqrt5)/2`` with ``u = v (mod 2)``."""

    u: int
    v: int

    def __post_init__(self) -> None:
        if (self.u - self.v) % 2:
            raise ValueError(f"({self.u} + {self.v}*sqrt5)/2 is not in O_K")

    @classmethod
    def from_quad(cls, z: QuadElem) -> OKElem:
        u, v = 2 * z.x, 2 * z.y
        if u.denominator != 1 or v.denominator != 1:
            raise ValueError(f"{z} is not an algebraic integer")
        return cls(int(u), int(v))

    @classmethod
    def try_from_quad(cls, z: QuadElem) -> OKElem | None:
        try:
            return cls.from_quad(z)
        except ValueError:
            return None

    def to_quad(self) -> QuadElem:
        return QuadElem.raw(self.u, self.v, 2)

    def norm(self) -> int:
        return (self.u * self.u - 5 * self.v * self.v) // 4

    def __mul__(self, other: OKElem) -> OKElem:
        return OKElem.from_quad(self.to_quad() * other.to_quad())

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def divides(self, other: OKElem) -> bool:
        if self.u == 0 and self.v == 0:
            return False
        return OKElem.try_from_quad(other.to_quad() / self.to_quad()) is not None

    def __str__(self) -> str:
        return format_quad(self.to_quad())


# --------------------------------------------------------------------------
# exact linear algebra


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set ``particular + span(kernel)`` of ``A x = b``.

    ``status`` is one of ``"unique"``, ``"underdetermined"``, ``"inconsistent"``.
    """

    status: str
    particular: tuple[QuadElem, ...] | None = None
    kernel: tuple[tuple[QuadElem, ...], ...] = field(default_factory=tuple)
    rank: int = 0

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"

    def unique(self) -> tuple[QuadElem, ...]:
        if self.status != "unique":
            raise InconsistentSystem(f"system is {self.status}")
        return self.particular


def _as_quad(v: object) -> QuadElem:
    return v if isinstance(v, QuadElem) else QuadElem.coerce(v)


def solve_linear(A: Sequence[Sequence[object]], b: Sequence[object]) -> LinearSolution:
    """Solve ``A x = b`` over K by Gaussian elimination with full pivoting.

    Pivots are chosen as the nonzero entry of smallest bit size in the
    remaining block.  The returned particular solution is checked against
    the original system before returning.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m:
        raise ValueError("dimension mismatch between A and b")
    M = [[_as_quad(v) for v in row] + [_as_quad(rhs)] for row, rhs in zip(A, b)]
    for row in M:
        if len(row) != n + 1:
            raise ValueError("A is not rectangular")
    cols = list(range(n))  # column permutation
    rank = 0
    for r in range(min(m, n)):
        best = None
        for i in range(r, m):
            row = M[i]
            for jj in range(r, n):
                v = row[cols[jj]]
                if v:
                    size = v.bit_size()
                    if best is None or size < best[0]:
                        best = (size, i, jj)
        if best is None:
            break
        _, i, jj = best
        M[r], M[i] = M[i], M[r]
        cols[r], cols[jj] = cols[jj], cols[r]
        pc = cols[r]
        inv = M[r][pc].inverse()
        M[r] = [v * inv for v in M[r]]
        prow = M[r]
        for k in range(m):
            if k != r:
                f = M[k][pc]
                if f:
                    M[k] = [vk - f * vp for vk, vp in zip(M[k], prow)]
        rank += 1
    for i in range(rank, m):
        if M[i][n]:
            return LinearSolution("inconsistent", rank=rank)
    x = [ZERO] * n
    for r in range(rank):
        x[cols[r]] = M[r][n]
    kernel = []
    for jj in range(rank, n):
        free = cols[jj]
        vec = [ZERO] * n
        vec[free] = ONE
        for r in range(rank):
            vec[cols[r]] = -M[r][free]
        kernel.append(tuple(vec))
    A_q = [[_as_quad(v) for v in row] for row in A]
    b_q = [_as_quad(v) for v in b]
    for row, rhs in zip(A_q, b_q):
        acc = ZERO
        for a, xv in zip(row, x):
            if a and xv:
                acc = acc + a * xv
        if acc != rhs:
            raise AssertionError("linear solve failed verification")
    status = "unique" if rank == n else "underdetermined"
    return LinearSolution(status, tuple(x), tuple(kernel), rank)
