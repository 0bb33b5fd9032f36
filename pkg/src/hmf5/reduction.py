"""Reduction of points of H x H into the Goetzky set under SL2(O_K).

Points are complex floats; group elements are exact matrices over O_K, so the
returned transformation can be checked independently of the float path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import IterationCapExceeded, SingularAction
from .numberfield import EPS, EPS_CONJ, ONE, ZERO, OKElem, QuadElem

LOG_EPS = math.log((1 + math.sqrt(5)) / 2)
EPS_F = (1 + math.sqrt(5)) / 2
EPS2_F = EPS_F**2
FINAL_BOUND = (-9 + math.sqrt(312)) / 16
BOUNDARY_TOL = 1e-12
TRANSLATION_BOX = 3.0


class PointH2(NamedTuple):
    z1: complex
    z2: complex

    def validate(self) -> PointH2:
        if not (self.z1.imag > 0 and self.z2.imag > 0):
            raise ValueError(f"point {self} is not in H x H")
        return self

    @property
    def im_product(self) -> float:
        return self.z1.imag * self.z2.imag

    @property
    def ratio(self) -> float:
        return self.z1.imag / self.z2.imag

    @property
    def abs_product(self) -> float:
        return abs(self.z1 * self.z2)


@dataclass(frozen=True)
class Mat2K:
    a: QuadElem
    b: QuadElem
    c: QuadElem
    d: QuadElem

    def __post_init__(self) -> None:
        for name in "abcd":
            object.__setattr__(self, name, QuadElem.coerce(getattr(self, name)))
            q = getattr(self, name)
            if OKElem.try_from_quad(q) is None:
                raise ValueError(f"entry {name} = {q} is not in O_K")
        if self.det() != ONE:
            raise ValueError(f"determinant {self.det()} is not 1")

    def det(self) -> QuadElem:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: Mat2K) -> Mat2K:
        return Mat2K(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> Mat2K:
        return Mat2K(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> Mat2K:
        return Mat2K(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> Mat2K:
        base = self if n >= 0 else self.inverse()
        result = IDENTITY
        for _ in range(abs(n)):
            result = result @ base
        return result

    def projectively_equal(self, other: Mat2K) -> bool:
        """Equality in PSL2, i.e. up to the central element -1."""
        return self == other or self == -other

    def entries(self) -> tuple[QuadElem, QuadElem, QuadElem, QuadElem]:
        return self.a, self.b, self.c, self.d

    def is_identity(self) -> bool:
        return self == IDENTITY


IDENTITY = Mat2K(ONE, ZERO, ZERO, ONE)
S = Mat2K(ONE, ONE, ZERO, ONE)
T = Mat2K(ZERO, -ONE, ONE, ZERO)
# diag(eps, eps^-1); eps^-1 = -eps'
U = Mat2K(EPS, ZERO, ZERO, -EPS_CONJ)
# elliptic element of order 5 fixing (zeta5, zeta5^2)
PHI = Mat2K(-EPS_CONJ, -ONE, ONE, ZERO)


def translation(nu: QuadElem) -> Mat2K:
    return Mat2K(ONE, nu, ZERO, ONE)


def act(g: Mat2K, p: PointH2) -> PointH2:
    """Componentwise Moebius action through the two real embeddings."""
    out = []
    for i, z in enumerate(p):
        a, b, c, d = (x.embed()[i] for x in g.entries())
        den = c * z + d
        if abs(den) < 1e-14:
            raise SingularAction(f"denominator {abs(den):.3g} too small in component {i + 1}")
        out.append((a * z + b) / den)
    return PointH2(*out)


def unit_balance(p: PointH2) -> tuple[int, PointH2]:
    """n with the ratio of Im(U^n p) in [eps^-2, eps^2]; smallest |n| on ties."""
    L = math.log(p.ratio) / LOG_EPS
    tol = BOUNDARY_TOL / LOG_EPS
    lo = math.ceil((-2 - L - tol) / 4)
    hi = math.floor((2 - L + tol) / 4)
    if lo > hi:
        n = round(-L / 4)
    else:
        n = min(range(lo, hi + 1), key=lambda k: (abs(k), k))
    if n == 0:
        return 0, p
    return n, act(U**n, p)


def _candidates(p: PointH2, box: float):
    x1, x2 = p.z1.real, p.z2.real
    r5 = math.sqrt(5)
    # nu = m + n eps: sigma1 - sigma2 = n sqrt5
    n_lo = math.floor((x1 - x2 - 2 * box) / r5) - 1
    n_hi = math.ceil((x1 - x2 + 2 * box) / r5) + 1
    e1, e2 = EPS_F, 1 - EPS_F
    for n in range(n_lo, n_hi + 1):
        m_lo = math.ceil(max(x1 - box - n * e1, x2 - box - n * e2))
        m_hi = math.floor(min(x1 + box - n * e1, x2 + box - n * e2))
        for m in range(m_lo, m_hi + 1):
            yield m, n, m + n * e1, m + n * e2


def translate_min(p: PointH2) -> tuple[OKElem, PointH2]:
    """Lattice translate of p minimizing |z1 z2| (exhaustive box scan)."""
    best_val = math.inf
    cands = []
    for m, n, s1, s2 in _candidates(p, TRANSLATION_BOX):
        val = abs((p.z1 - s1) * (p.z2 - s2))
        cands.append((val, m, n))
        best_val = min(best_val, val)
    if not cands:
        return OKElem(0, 0), p
    cutoff = best_val * (1 + BOUNDARY_TOL) + BOUNDARY_TOL
    ties = [(abs(m), abs(n), m < 0, n < 0, m, n) for val, m, n in cands if val <= cutoff]
    *_, m, n = min(ties)
    nu = QuadElem(m) + EPS * n
    if m == 0 and n == 0:
        return OKElem(0, 0), p
    return OKElem.from_quad(nu), act(translation(-nu), p)


@dataclass
class ReductionStep:
    unit_power: int
    translation: str
    applied_t: bool
    im_product: float


@dataclass
class ReductionResult:
    gamma: Mat2K
    point: PointH2
    iterations: int
    log: list[ReductionStep] = field(default_factory=list)


def reduce_to_G(p: PointH2, max_iter: int = 200) -> ReductionResult:
    """Balance, translate, invert until |z1 z2| >= 1; returns the exact gamma."""
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    p = PointH2(complex(p[0]), complex(p[1])).validate()
    gamma = IDENTITY
    log: list[ReductionStep] = []
    for it in range(1, max_iter + 1):
        n, p = unit_balance(p)
        if n:
            gamma = (U**n) @ gamma
        nu, p = translate_min(p)
        nuq = nu.to_quad()
        if nuq:
            gamma = translation(-nuq) @ gamma
        if p.abs_product >= 1 - BOUNDARY_TOL:
            log.append(ReductionStep(n, str(nu), False, p.im_product))
            return ReductionResult(gamma, p, it, log)
        before = p.im_product
        p = act(T, p)
        gamma = T @ gamma
        assert p.im_product > before, "Im z1 * Im z2 must increase under T"
        log.append(ReductionStep(n, str(nu), True, p.im_product))
    raise IterationCapExceeded(f"no reduced point after {max_iter} iterations")


@dataclass(frozen=True)
class Membership:
    in_A: bool
    in_B: bool
    translation_minimal: bool

    @property
    def in_G(self) -> bool:
        return self.in_A and self.in_B and self.translation_minimal


def check_membership(p: PointH2) -> Membership:
    p = p.validate()
    in_a = p.abs_product >= 1 - BOUNDARY_TOL
    r = p.ratio
    in_b = (1 / EPS2_F) * (1 - BOUNDARY_TOL) <= r <= EPS2_F * (1 + BOUNDARY_TOL)
    best = min(abs((p.z1 - s1) * (p.z2 - s2)) for _, _, s1, s2 in _candidates(p, TRANSLATION_BOX))
    minimal = p.abs_product <= best * (1 + BOUNDARY_TOL) + BOUNDARY_TOL
    return Membership(in_a, in_b, minimal)


ZETA5 = cmath.exp(2j * math.pi / 5)
ELLIPTIC_POINT = PointH2(ZETA5, ZETA5**2)
