"""Truncated Fourier expansions of Hilbert modular forms for Q(sqrt 5).

An index ``(a, b)`` stands for ``nu = (a + b*sqrt5) / (2*sqrt5)`` in the
inverse different; ``trace(nu) = b``.  A series with denominator ``D`` has
actual exponents ``nu / D`` and keeps every key with ``b <= bound * D``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, NamedTuple

from .errors import DenominatorMismatch, NoSquareRoot, NotDivisible, NotInvertible, WeightMismatch
from .numberfield import ONE, ZERO, QuadElem, solve_linear
from .qexp import QExp

Weight = tuple  # (r1, r2), entries int or Fraction


class NuIndex(NamedTuple):
    a: int
    b: int

    @property
    def trace(self) -> int:
        return self.b

    def conj(self) -> NuIndex:
        return NuIndex(-self.a, self.b)

    def is_totally_positive(self) -> bool:
        return self.b > 0 and self.a * self.a < 5 * self.b * self.b

    def in_cone(self) -> bool:
        return (self.a == 0 and self.b == 0) or self.is_totally_positive()

    def to_field(self, denom: int = 1) -> QuadElem:
        # (a + b r5)/(2 r5) = b/2 + (a/10) r5
        return QuadElem(Fraction(self.b, 2 * denom), Fraction(self.a, 10 * denom))

    @classmethod
    def from_field(cls, x: QuadElem, denom: int = 1) -> NuIndex:
        b = 2 * denom * x.x
        a = 10 * denom * x.y
        if b.denominator != 1 or a.denominator != 1 or (a - b) % 2:
            raise ValueError(f"{x} is not on the lattice with denominator {denom}")
        return cls(int(a), int(b))

    def sigma(self, i: int, denom: int = 1) -> QuadElem:
        """sigma_i(nu/D) as an element of K."""
        s = 1 if i == 1 else -1
        return QuadElem.raw(5 * self.b, s * self.a, 10 * denom)


MU0 = NuIndex(1, 1)
MU0_CONJ = NuIndex(-1, 1)


def _amax(b: int) -> int:
    """Largest |a| with a = b (mod 2) and a^2 < 5 b^2, for b > 0."""
    m = math.isqrt(5 * b * b)
    if m * m == 5 * b * b:
        m -= 1
    if (m - b) % 2:
        m -= 1
    return m


def stratum(b: int) -> list[NuIndex]:
    """Cone points of trace b in monomial order (a descending)."""
    if b == 0:
        return [NuIndex(0, 0)]
    m = _amax(b)
    return [NuIndex(a, b) for a in range(m, -m - 1, -2)]


@lru_cache(maxsize=None)
def _enumerate_cone(trace_max: int) -> tuple[NuIndex, ...]:
    out: list[NuIndex] = []
    for b in range(trace_max + 1):
        out.extend(stratum(b))
    return tuple(out)


def enumerate_cone(trace_max: int) -> list[NuIndex]:
    if trace_max < 0:
        raise ValueError("traceMax must be nonnegative")
    return list(_enumerate_cone(trace_max))


def order_key(nu: tuple[int, int]) -> tuple[int, int]:
    """Sort key for the monomial order: trace ascending, then a descending."""
    return (nu[1], -nu[0])


def _norm_weight(w: Iterable[object]) -> tuple:
    out = []
    for r in w:
        r = Fraction(r)
        out.append(int(r) if r.denominator == 1 else r)
    return tuple(out)


class HilbertSeries:
    """An immutable truncated Fourier expansion with weight and bound tags."""

    __slots__ = ("weight", "bound", "denom", "coeffs", "modular", "_strata")

    def __init__(
        self,
        weight: Iterable[object],
        bound: int,
        coeffs: Mapping[tuple[int, int], object] | None = None,
        denom: int = 1,
        modular: bool = True,
        check: bool = True,
    ) -> None:
        self.weight = _norm_weight(weight)
        if len(self.weight) != 2:
            raise ValueError("weight must be a pair")
        if denom < 1:
            raise ValueError("denom must be positive")
        self.bound = int(bound)
        self.denom = int(denom)
        self.modular = modular
        top = self.bound * self.denom
        clean: dict[NuIndex, QuadElem] = {}
        for key, val in (coeffs or {}).items():
            v = val if isinstance(val, QuadElem) else QuadElem.coerce(val)
            if not v:
                continue
            k = key if isinstance(key, NuIndex) else NuIndex(*key)
            if check:
                if (k.a - k.b) % 2:
                    raise ValueError(f"index {tuple(k)} violates a = b (mod 2)")
                if not k.in_cone():
                    raise ValueError(f"index {tuple(k)} lies outside the totally positive cone")
            if k.b > top:
                continue
            clean[k] = v
        self.coeffs = clean
        self._strata = None

    # construction helpers
    @classmethod
    def constant(cls, c: object, bound: int, weight=(0, 0), denom: int = 1) -> HilbertSeries:
        return cls(weight, bound, {(0, 0): c}, denom=denom)

    @classmethod
    def zero(cls, weight, bound: int, denom: int = 1) -> HilbertSeries:
        return cls(weight, bound, {}, denom=denom)

    @classmethod
    def monomial(cls, nu: tuple[int, int], bound: int, c: object = 1, weight=(0, 0)) -> HilbertSeries:
        return cls(weight, bound, {nu: c})

    def _new(self, coeffs, weight=None, bound=None, modular=None) -> HilbertSeries:
        obj = HilbertSeries.__new__(HilbertSeries)
        obj.weight = self.weight if weight is None else _norm_weight(weight)
        obj.bound = self.bound if bound is None else bound
        obj.denom = self.denom
        obj.modular = self.modular if modular is None else modular
        top = obj.bound * obj.denom
        obj.coeffs = {k: v for k, v in coeffs.items() if v and k.b <= top}
        obj._strata = None
        return obj

    def with_weight(self, weight, modular: bool | None = None) -> HilbertSeries:
        return self._new(self.coeffs, weight=weight, modular=modular)

    def truncate(self, bound: int) -> HilbertSeries:
        if bound > self.bound:
            raise ValueError(f"cannot extend bound {self.bound} to {bound}")
        return self._new(self.coeffs, bound=bound)

    # access
    def __getitem__(self, nu: tuple[int, int]) -> QuadElem:
        return self.coeffs.get(nu if isinstance(nu, NuIndex) else NuIndex(*nu), ZERO)

    def items(self) -> list[tuple[NuIndex, QuadElem]]:
        return sorted(self.coeffs.items(), key=lambda kv: order_key(kv[0]))

    def __len__(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> QuadElem:
        return self.coeffs.get(NuIndex(0, 0), ZERO)

    def is_parallel(self) -> bool:
        return self.weight[0] == self.weight[1]

    def min_trace(self) -> int | None:
        return min((k.b for k in self.coeffs), default=None)

    def leading(self) -> tuple[NuIndex, QuadElem] | None:
        if not self.coeffs:
            return None
        k = min(self.coeffs, key=order_key)
        return k, self.coeffs[k]

    def stratum_coeffs(self, b: int) -> dict[int, QuadElem]:
        return {k.a: v for k, v in self.coeffs.items() if k.b == b}

    def is_rational(self) -> bool:
        return all(v.is_rational() for v in self.coeffs.values())

    # comparison
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        return (
            self.weight == other.weight
            and self.bound == other.bound
            and self.denom == other.denom
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.weight, self.bound, self.denom, frozenset(self.coeffs.items())))

    def agrees(self, other: HilbertSeries, bound: int | None = None) -> bool:
        """Coefficient equality up to a shared bound, ignoring weight tags."""
        if self.denom != other.denom:
            raise DenominatorMismatch("denominators differ")
        n = min(self.bound, other.bound) if bound is None else bound
        if n > min(self.bound, other.bound):
            raise ValueError(f"bound {n} exceeds the known range")
        top = n * self.denom
        a = {k: v for k, v in self.coeffs.items() if k.b <= top}
        b = {k: v for k, v in other.coeffs.items() if k.b <= top}
        return a == b

    def first_difference(self, other: HilbertSeries) -> NuIndex | None:
        top = min(self.bound, other.bound) * self.denom
        keys = {k for k in self.coeffs if k.b <= top} | {k for k in other.coeffs if k.b <= top}
        for k in sorted(keys, key=order_key):
            if self[k] != other[k]:
                return k
        return None

    # ring operations
    def _check_compatible(self, other: HilbertSeries) -> None:
        if self.denom != other.denom:
            raise DenominatorMismatch(f"denominators {self.denom} and {other.denom} differ")

    def __add__(self, other: object) -> HilbertSeries:
        if not isinstance(other, HilbertSeries):
            if isinstance(other, (int, Fraction, QuadElem)):
                other = HilbertSeries.constant(other, self.bound, self.weight, self.denom)
            else:
                return NotImplemented
        self._check_compatible(other)
        if self.weight != other.weight:
            raise WeightMismatch(f"cannot add weights {self.weight} and {other.weight}")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return self._new(out, bound=min(self.bound, other.bound), modular=self.modular and other.modular)

    __radd__ = __add__

    def __neg__(self) -> HilbertSeries:
        return self._new({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: object) -> HilbertSeries:
        if isinstance(other, (HilbertSeries, int, Fraction, QuadElem)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: object) -> HilbertSeries:
        return (-self) + other

    def scale(self, c: object) -> HilbertSeries:
        c = QuadElem.coerce(c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other: object) -> HilbertSeries:
        if isinstance(other, (int, Fraction, QuadElem)):
            return self.scale(other)
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        return convolve(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> HilbertSeries:
        if isinstance(other, (int, Fraction, QuadElem)):
            return self.scale(QuadElem.coerce(other).inverse())
        if isinstance(other, HilbertSeries):
            return divide_exact(self, other)
        return NotImplemented

    def __pow__(self, e: int) -> HilbertSeries:
        if e < 0:
            return invert(self) ** (-e)
        result = HilbertSeries.constant(1, self.bound, denom=self.denom)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __repr__(self) -> str:
        head = ", ".join(f"{tuple(k)}: {v}" for k, v in self.items()[:4])
        more = ", ..." if len(self.coeffs) > 4 else ""
        return f"HilbertSeries(weight={self.weight}, bound={self.bound}, denom={self.denom}, {{{head}{more}}})"

    # integer strata for the convolution kernel
    def _int_strata(self):
        """Group coefficients by trace as integer triples over a common denominator."""
        if self._strata is None:
            den = 1
            for v in self.coeffs.values():
                d = v.parts[2]
                den = den * d // math.gcd(den, d)
            strata: dict[int, list] = {}
            rational = True
            for k, v in self.coeffs.items():
                p, q, d = v.parts
                f = den // d
                if q:
                    rational = False
                strata.setdefault(k.b, []).append((k.a, p * f, q * f))
            self._strata = (den, rational, sorted(strata.items()))
        return self._strata


def series_ring_ops(f: HilbertSeries, g, op: str) -> HilbertSeries:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown op {op!r}")


def _finish(acc_p: dict, acc_q: dict | None, den: int) -> dict[NuIndex, QuadElem]:
    out: dict[NuIndex, QuadElem] = {}
    raw = QuadElem.raw
    if acc_q is None:
        for k, p in acc_p.items():
            if p:
                out[NuIndex(*k)] = raw(p, 0, den)
    else:
        for k, p in acc_p.items():
            q = acc_q[k]
            if p or q:
                out[NuIndex(*k)] = raw(p, q, den)
    return out


def convolve(f: HilbertSeries, g: HilbertSeries) -> HilbertSeries:
    """Exact truncated product; the bound is the smaller of the two."""
    f._check_compatible(g)
    bound = min(f.bound, g.bound)
    top = bound * f.denom
    den_f, rat_f, sf = f._int_strata()
    den_g, rat_g, sg = g._int_strata()
    rational = rat_f and rat_g
    acc_p: dict[tuple[int, int], int] = {}
    acc_q: dict[tuple[int, int], int] | None = None if rational else {}
    for b1, t1 in sf:
        if b1 > top:
            break
        for b2, t2 in sg:
            b = b1 + b2
            if b > top:
                break
            if rational:
                for a1, p1, _ in t1:
                    for a2, p2, _ in t2:
                        key = (a1 + a2, b)
                        acc_p[key] = acc_p.get(key, 0) + p1 * p2
            else:
                for a1, p1, q1 in t1:
                    for a2, p2, q2 in t2:
                        key = (a1 + a2, b)
                        acc_p[key] = acc_p.get(key, 0) + p1 * p2 + 5 * q1 * q2
                        acc_q[key] = acc_q.get(key, 0) + p1 * q2 + q1 * p2
    w = (f.weight[0] + g.weight[0], f.weight[1] + g.weight[1])
    out = HilbertSeries.__new__(HilbertSeries)
    out.weight = _norm_weight(w)
    out.bound = bound
    out.denom = f.denom
    out.modular = f.modular and g.modular
    out.coeffs = _finish(acc_p, acc_q, den_f * den_g)
    out._strata = None
    return out


def weighted_convolve(
    f: HilbertSeries,
    g: HilbertSeries,
    weight_fn: Callable[[int, int, int, int], tuple[int, int]],
    weight_den: int,
    out_weight,
) -> HilbertSeries:
    """``sum_{nu+mu=tau} w(nu, mu) a_nu b_mu`` with an integral weight.

    ``weight_fn(a1, b1, a2, b2)`` returns ``(x, y)`` meaning
    ``(x + y*sqrt5) / weight_den``.
    """
    f._check_compatible(g)
    bound = min(f.bound, g.bound)
    top = bound * f.denom
    den_f, _, sf = f._int_strata()
    den_g, _, sg = g._int_strata()
    acc_p: dict[tuple[int, int], int] = {}
    acc_q: dict[tuple[int, int], int] = {}
    for b1, t1 in sf:
        if b1 > top:
            break
        for b2, t2 in sg:
            b = b1 + b2
            if b > top:
                break
            for a1, p1, q1 in t1:
                for a2, p2, q2 in t2:
                    wx, wy = weight_fn(a1, b1, a2, b2)
                    if not (wx or wy):
                        continue
                    cp = p1 * p2 + 5 * q1 * q2
                    cq = p1 * q2 + q1 * p2
                    key = (a1 + a2, b)
                    acc_p[key] = acc_p.get(key, 0) + wx * cp + 5 * wy * cq
                    acc_q[key] = acc_q.get(key, 0) + wx * cq + wy * cp
    out = HilbertSeries.__new__(HilbertSeries)
    out.weight = _norm_weight(out_weight)
    out.bound = bound
    out.denom = f.denom
    out.modular = True
    out.coeffs = _finish(acc_p, acc_q, den_f * den_g * weight_den)
    out._strata = None
    return out


def normalized_partial(i: int, f: HilbertSeries) -> HilbertSeries:
    """D_i f with D_i = (2 pi i)^-1 d/dz_i; the weight tag is kept but flagged."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    out = {k: v * k.sigma(i, f.denom) for k, v in f.coeffs.items() if k.b}
    return f._new(out, modular=False)


def swap_conjugate(f: HilbertSeries) -> HilbertSeries:
    out = {NuIndex(-k.a, k.b): v for k, v in f.coeffs.items()}
    return f._new(out, weight=(f.weight[1], f.weight[0]))


def is_symmetric(f: HilbertSeries) -> bool:
    return swap_conjugate(f) == f


def is_antisymmetric(f: HilbertSeries) -> bool:
    return swap_conjugate(f) == -f


def restrict_diagonal(f: HilbertSeries) -> QExp:
    """Restriction to z1 = z2, an elliptic expansion of weight r1 + r2."""
    if f.denom != 1:
        raise DenominatorMismatch("restriction needs denom 1")
    sums = [ZERO] * (f.bound + 1)
    for k, v in f.coeffs.items():
        sums[k.b] = sums[k.b] + v
    out = []
    for m, s in enumerate(sums):
        if not s.is_rational():
            raise ValueError(f"diagonal coefficient at q^{m} is irrational: the series is corrupted")
        out.append(s.to_fraction())
    w = f.weight[0] + f.weight[1]
    return QExp(int(w) if Fraction(w).denominator == 1 else w, tuple(out))


# ---------------------------------------------------------------------------
# division and square roots, stratum by stratum


def _strata_dict(f: HilbertSeries) -> dict[int, dict[int, QuadElem]]:
    out: dict[int, dict[int, QuadElem]] = {}
    for k, v in f.coeffs.items():
        out.setdefault(k.b, {})[k.a] = v
    return out


def _stratum_product(x: dict[int, QuadElem], y: dict[int, QuadElem]) -> dict[int, QuadElem]:
    out: dict[int, QuadElem] = {}
    for a1, v1 in x.items():
        for a2, v2 in y.items():
            a = a1 + a2
            out[a] = out[a] + v1 * v2 if a in out else v1 * v2
    return out


def _stratum_points(b: int) -> list[int]:
    return [k.a for k in stratum(b)]


def _solve_stratum(lead: dict[int, QuadElem], k: int, m0: int, rhs: dict[int, QuadElem], scale: QuadElem):
    """Find h on stratum k with scale*(h * lead) = rhs on stratum k + m0."""
    unknowns = _stratum_points(k)
    targets = _stratum_points(k + m0)
    extra = [a for a in rhs if a not in set(targets)]
    if extra:
        return None
    row_of = {a: i for i, a in enumerate(targets)}
    A = [[ZERO] * len(unknowns) for _ in targets]
    for j, a in enumerate(unknowns):
        for al, v in lead.items():
            i = row_of.get(a + al)
            if i is None:
                # h would spill outside the cone: only allowed if the unknown is zero
                A.append([ZERO] * len(unknowns))
                A[-1][j] = ONE
                continue
            A[i][j] = A[i][j] + scale * v
    b = [rhs.get(a, ZERO) for a in targets] + [ZERO] * (len(A) - len(targets))
    sol = solve_linear(A, b)
    if sol.status == "inconsistent":
        return None
    if sol.status != "unique":
        raise AssertionError("stratum system is singular: multiplication by a nonzero stratum is injective")
    return {a: v for a, v in zip(unknowns, sol.particular) if v}


def divide_exact(g: HilbertSeries, d: HilbertSeries) -> HilbertSeries:
    """h with h*d = g, exact up to bound ``min(g.bound, d.bound) - m0``."""
    g._check_compatible(d)
    if d.is_zero():
        raise ZeroDivisionError("division by the zero series")
    D = g.denom
    m0 = d.min_trace()
    gs = _strata_dict(g)
    ds = _strata_dict(d)
    lead = ds[m0]
    top = min(g.bound, d.bound) * D - m0
    if top < 0:
        raise NotDivisible(f"bound too small: divisor starts at trace {m0}")
    for b in gs:
        if b < m0:
            raise NotDivisible(f"dividend has terms of trace {b} below the divisor's minimal trace {m0}")
    hs: dict[int, dict[int, QuadElem]] = {}
    for k in range(top + 1):
        resid = dict(gs.get(k + m0, {}))
        for i, hi in hs.items():
            dj = ds.get(k + m0 - i)
            if dj:
                for a, v in _stratum_product(hi, dj).items():
                    resid[a] = resid.get(a, ZERO) - v
        resid = {a: v for a, v in resid.items() if v}
        if not resid:
            continue
        sol = _solve_stratum(lead, k, m0, resid, ONE)
        if sol is None:
            raise NotDivisible(f"no exact quotient: stratum system at trace {k} is inconsistent")
        if sol:
            hs[k] = sol
    coeffs = {NuIndex(a, k): v for k, st in hs.items() for a, v in st.items()}
    w = (g.weight[0] - d.weight[0], g.weight[1] - d.weight[1])
    if D == 1:
        bound = top
    else:
        bound = top // D
    out = HilbertSeries(w, bound, coeffs, denom=D, check=False)
    out.modular = g.modular and d.modular
    return out


def invert(f: HilbertSeries) -> HilbertSeries:
    if not f.constant_term():
        raise NotInvertible("series with zero constant term is not invertible")
    one = HilbertSeries.constant(1, f.bound, denom=f.denom)
    return divide_exact(one, f)


def _poly_sqrt(g: dict[int, QuadElem]) -> dict[int, QuadElem] | None:
    """Square root of a stratum polynomial sum c_a t^a, or None."""
    if not g:
        return {}
    exps = sorted(g, reverse=True)
    top, low = exps[0], exps[-1]
    if top % 2 or low % 2:
        return None
    lead = g[top].sqrt()
    if lead is None:
        return None
    h: dict[int, QuadElem] = {top // 2: lead}
    rem = dict(g)
    # subtract (lead t^(top/2))^2 then peel successive terms
    rem[top] = rem[top] - lead * lead
    two_lead_inv = (lead * 2).inverse()
    e = top // 2 - 1
    while e >= low // 2:
        c = rem.get(top // 2 + e, ZERO) * two_lead_inv
        if c:
            # update rem with 2*c*h_j*t^(e+j) for existing j and c^2 t^(2e)
            for j, hv in h.items():
                a = e + j
                rem[a] = rem.get(a, ZERO) - 2 * c * hv
            rem[2 * e] = rem.get(2 * e, ZERO) - c * c
            h[e] = c
        e -= 1
    if any(v for v in rem.values()):
        return None
    return h


def sqrt_series(g: HilbertSeries, leading_sign: str = "+") -> HilbertSeries:
    """h with h^2 = g; the leading coefficient of h has sign ``leading_sign``.

    The sign refers to the first real embedding of the coefficient of the
    leading monomial (smallest trace, then largest a).
    """
    if leading_sign not in ("+", "-"):
        raise ValueError("leading_sign must be '+' or '-'")
    if g.is_zero():
        raise NoSquareRoot("zero series")
    m0 = g.min_trace()
    if m0 % 2:
        raise NoSquareRoot(f"leading stratum has odd trace {m0}")
    w = []
    for r in g.weight:
        half = Fraction(r) / 2
        w.append(half)
    gs = _strata_dict(g)
    k0 = m0 // 2
    h0 = _poly_sqrt(gs[m0])
    if h0 is None:
        raise NoSquareRoot("leading stratum is not a perfect square")
    allowed = set(_stratum_points(k0))
    if any(a not in allowed for a in h0):
        raise NoSquareRoot("square root of the leading stratum leaves the cone")
    top_a = max(h0)
    if (h0[top_a].sign() > 0) != (leading_sign == "+"):
        h0 = {a: -v for a, v in h0.items()}
    hs: dict[int, dict[int, QuadElem]] = {k0: h0}
    top = g.bound * g.denom - k0
    two = QuadElem(2)
    for k in range(k0 + 1, top + 1):
        target = k0 + k
        resid = dict(gs.get(target, {}))
        for i, hi in hs.items():
            j = target - i
            if i == k0 or j == k0 or j not in hs:
                continue
            for a, v in _stratum_product(hi, hs[j]).items():
                resid[a] = resid.get(a, ZERO) - v
        resid = {a: v for a, v in resid.items() if v}
        if not resid:
            continue
        sol = _solve_stratum(h0, k, k0, resid, two)
        if sol is None:
            raise NoSquareRoot(f"stratum system at trace {k} is inconsistent")
        if sol:
            hs[k] = sol
    coeffs = {NuIndex(a, k): v for k, st in hs.items() for a, v in st.items()}
    bound = top if g.denom == 1 else top // g.denom
    return HilbertSeries(w, bound, coeffs, denom=g.denom, check=False)


def rescale_denom(f: HilbertSeries, factor: int) -> HilbertSeries:
    """The same series written on a finer lattice (denominator times factor)."""
    out = HilbertSeries.__new__(HilbertSeries)
    out.weight = f.weight
    out.bound = f.bound
    out.denom = f.denom * factor
    out.modular = f.modular
    out.coeffs = {NuIndex(k.a * factor, k.b * factor): v for k, v in f.coeffs.items()}
    out._strata = None
    return out


def reduce_denom(f: HilbertSeries) -> HilbertSeries:
    """Rewrite on the integral dual lattice; asserts every exponent lands there."""
    D = f.denom
    out = {}
    for k, v in f.coeffs.items():
        if k.a % D or k.b % D or (k.a // D - k.b // D) % 2:
            raise AssertionError(f"exponent {tuple(k)}/{D} is not on the integral dual lattice")
        out[NuIndex(k.a // D, k.b // D)] = v
    res = HilbertSeries.__new__(HilbertSeries)
    res.weight = f.weight
    res.bound = f.bound
    res.denom = 1
    res.modular = f.modular
    res.coeffs = out
    res._strata = None
    return res
