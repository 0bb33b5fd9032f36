"""Differential operators on Hilbert modular forms for Q(sqrt 5).

Every derivative is the normalized ``D_i = (2 pi i)^-1 d/dz_i``, which acts
on the coefficient at ``nu`` by ``sigma_i(nu)``.

Two implementations are kept for the quadratic operators: the production
path works directly on Fourier coefficients (one weighted convolution per
operator), the ``*_composed`` variants multiply derived series.  Tests
check that they agree.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import NotInvertible, WeightMismatch
from .series import HilbertSeries, divide_exact, normalized_partial, weighted_convolve


def _w(f: HilbertSeries, i: int) -> int:
    r = f.weight[i - 1]
    if isinstance(r, Fraction):
        raise WeightMismatch(f"integral weight required, got {f.weight}")
    return r


def _plus(*ws) -> tuple:
    return tuple(sum(w[k] for w in ws) for k in range(2))


def _check_weight(out: HilbertSeries, expected) -> HilbertSeries:
    expected = tuple(expected)
    assert out.weight == expected, (out.weight, expected)
    return out


def _modular(f: HilbertSeries, weight) -> HilbertSeries:
    return f.with_weight(weight, modular=True)


# ---------------------------------------------------------------------------
# first order brackets


def rankin_bracket(F: HilbertSeries, G: HilbertSeries, i: int) -> HilbertSeries:
    """``g_i G D_i F - f_i F D_i G`` of weight f + g + 2 e_i."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    f_i, g_i = _w(F, i), _w(G, i)
    s = 1 if i == 1 else -1
    D = F.denom

    def weight(a1, b1, a2, b2):
        # g_i sigma_i(nu) - f_i sigma_i(mu), scaled by 10 D
        return 5 * (g_i * b1 - f_i * b2), s * (g_i * a1 - f_i * a2)

    e = (2, 0) if i == 1 else (0, 2)
    out = weighted_convolve(F, G, weight, 10 * D, _plus(F.weight, G.weight, e))
    return _check_weight(out, _plus(F.weight, G.weight, e))


def rankin_bracket_composed(F: HilbertSeries, G: HilbertSeries, i: int) -> HilbertSeries:
    f_i, g_i = _w(F, i), _w(G, i)
    e = (2, 0) if i == 1 else (0, 2)
    out = (G * normalized_partial(i, F)).scale(g_i) - (F * normalized_partial(i, G)).scale(f_i)
    return _modular(out, _plus(F.weight, G.weight, e))


def _iterated_partials(F: HilbertSeries, n1: int, n2: int) -> dict[tuple[int, int], HilbertSeries]:
    table = {(0, 0): F}
    for r1 in range(n1 + 1):
        if r1:
            table[(r1, 0)] = normalized_partial(1, table[(r1 - 1, 0)])
        for r2 in range(1, n2 + 1):
            table[(r1, r2)] = normalized_partial(2, table[(r1, r2 - 1)])
    return table


def rc_bracket(F: HilbertSeries, G: HilbertSeries, s: Sequence[int]) -> HilbertSeries:
    """Rankin-Cohen bracket ``[F, G]_s`` of weight f + g + 2 s.

    ``sum_{r <= s} prod_i (-1)^{r_i} C(f_i+s_i-1, s_i-r_i) C(g_i+s_i-1, r_i)
    D^r F D^(s-r) G``.
    """
    s1, s2 = s
    if s1 < 0 or s2 < 0:
        raise ValueError("bracket orders must be nonnegative")
    f1, f2, g1, g2 = _w(F, 1), _w(F, 2), _w(G, 1), _w(G, 2)
    dF = _iterated_partials(F, s1, s2)
    dG = _iterated_partials(G, s1, s2)
    w = _plus(F.weight, G.weight, (2 * s1, 2 * s2))
    total = HilbertSeries.zero(w, min(F.bound, G.bound), denom=F.denom)
    for r1 in range(s1 + 1):
        for r2 in range(s2 + 1):
            c = (
                (-1) ** (r1 + r2)
                * comb(f1 + s1 - 1, s1 - r1)
                * comb(g1 + s1 - 1, r1)
                * comb(f2 + s2 - 1, s2 - r2)
                * comb(g2 + s2 - 1, r2)
            )
            if c:
                term = (dF[(r1, r2)] * dG[(s1 - r1, s2 - r2)]).scale(c)
                total = total + term.with_weight(w, modular=True)
    return _check_weight(total, w)


# ---------------------------------------------------------------------------
# quadratic operators


def lambda_op(F: HilbertSeries) -> HilbertSeries:
    """``F D1 D2 F - D1F D2F`` of weight 2f + (2, 2)."""
    D = F.denom

    def weight(a1, b1, a2, b2):
        # n(mu) - sigma_1(nu) sigma_2(mu), scaled by (10 D)^2
        return 25 * b2 * b2 - 5 * a2 * a2 - 25 * b1 * b2 + 5 * a1 * a2, 5 * (b1 * a2 - a1 * b2)

    w = _plus(F.weight, F.weight, (2, 2))
    return _check_weight(weighted_convolve(F, F, weight, 100 * D * D, w), w)


def lambda_op_composed(F: HilbertSeries) -> HilbertSeries:
    d1 = normalized_partial(1, F)
    d2 = normalized_partial(2, F)
    out = F * normalized_partial(2, d1) - d1 * d2
    return _modular(out, _plus(F.weight, F.weight, (2, 2)))


def pi_op(F: HilbertSeries, i: int) -> HilbertSeries:
    """``f_i F D_i^2 F - (f_i + 1)(D_i F)^2`` of weight 2f + 4 e_i; a cusp form."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    f = _w(F, i)
    s = 1 if i == 1 else -1
    D = F.denom

    def weight(a1, b1, a2, b2):
        # f sigma_i(mu)^2 - (f+1) sigma_i(nu) sigma_i(mu), scaled by (10 D)^2
        sq_x = 25 * b2 * b2 + 5 * a2 * a2
        sq_y = 10 * a2 * b2
        pr_x = 25 * b1 * b2 + 5 * a1 * a2
        pr_y = 5 * (a1 * b2 + b1 * a2)
        return f * sq_x - (f + 1) * pr_x, s * (f * sq_y - (f + 1) * pr_y)

    e = (4, 0) if i == 1 else (0, 4)
    w = _plus(F.weight, F.weight, e)
    out = weighted_convolve(F, F, weight, 100 * D * D, w)
    assert not out.constant_term(), "Pi_i output must be a cusp form"
    return _check_weight(out, w)


def pi_op_composed(F: HilbertSeries, i: int) -> HilbertSeries:
    f = _w(F, i)
    d = normalized_partial(i, F)
    out = (F * normalized_partial(i, d)).scale(f) - (d * d).scale(f + 1)
    e = (4, 0) if i == 1 else (0, 4)
    return _modular(out, _plus(F.weight, F.weight, e))


def big_pi(F: HilbertSeries) -> HilbertSeries:
    """``Pi F = Pi_1 F * Pi_2 F``."""
    return pi_op(F, 1) * pi_op(F, 2)


# ---------------------------------------------------------------------------
# multilinear brackets


def _det3(m):
    (a, b, c), (d, e, f), (g, h, k) = m
    return a * (e * k - f * h) - b * (d * k - f * g) + c * (d * h - e * g)


def _parallel(*fs: HilbertSeries) -> list[int]:
    out = []
    for F in fs:
        if not F.is_parallel():
            raise WeightMismatch(f"parallel weight required, got {F.weight}")
        out.append(_w(F, 1))
    return out


def multi_bracket(forms: Sequence[HilbertSeries], i: int = 1) -> HilbertSeries:
    """The determinant bracket of m + 1 forms, m in {1, 2}.

    m = 1: ``det [[f F, g G], [D_i F, D_i G]]`` of weight f + g + 2 e_i.
    m = 2: ``det [[f F, g G, h H], [D_1 ...], [D_2 ...]]`` of parallel
    weight f + g + h + 2.
    """
    if len(forms) == 2:
        F, G = forms
        f, g = _w(F, i), _w(G, i)
        e = (2, 0) if i == 1 else (0, 2)
        out = (F * normalized_partial(i, G)).scale(f) - (G * normalized_partial(i, F)).scale(g)
        return _modular(out, _plus(F.weight, G.weight, e))
    if len(forms) == 3:
        ws = _parallel(*forms)
        rows = [
            [F.scale(r) for F, r in zip(forms, ws)],
            [normalized_partial(1, F) for F in forms],
            [normalized_partial(2, F) for F in forms],
        ]
        r = sum(ws) + 2
        return _modular(_det3(rows), (r, r))
    raise ValueError(f"multi_bracket supports 2 or 3 forms, got {len(forms)}")


def triple_bracket(F: HilbertSeries, G: HilbertSeries, H: HilbertSeries) -> HilbertSeries:
    """``(g + h) * det`` of the 3x3 bracket matrix; parallel weight f+g+h+2."""
    f, g, h = _parallel(F, G, H)
    out = multi_bracket([F, G, H]).scale(g + h)
    return _check_weight(out, (f + g + h + 2,) * 2)


def triple_bracket_nested(G1: HilbertSeries, G2: HilbertSeries, G3: HilbertSeries) -> HilbertSeries:
    """``[G1, [G2, G3]_{1_2}]_{1_1} - [G1, [G2, G3]_{1_1}]_{1_2}`` in the
    determinant sign convention for first order brackets."""

    def br(A, B, i):
        return multi_bracket([A, B], i)

    return br(G1, br(G2, G3, 2), 1) - br(G1, br(G2, G3, 1), 2)


# ---------------------------------------------------------------------------
# T and Phi


def t_op(F: HilbertSeries) -> HilbertSeries:
    """``[F, LF]_{1_1}[F, PF]_{1_2} - [F, LF]_{1_2}[F, PF]_{1_1}``."""
    _parallel(F)
    lf = lambda_op(F)
    pf = big_pi(F)
    return rankin_bracket(F, lf, 1) * rankin_bracket(F, pf, 2) - rankin_bracket(F, lf, 2) * rankin_bracket(
        F, pf, 1
    )


def phi_sharp(F: HilbertSeries) -> HilbertSeries:
    """``Pi F - (r_1 + 1)(r_2 + 1)(Lambda F)^2``."""
    r1, r2 = _w(F, 1), _w(F, 2)
    lf = lambda_op(F)
    return big_pi(F) - (lf * lf).scale((r1 + 1) * (r2 + 1))


def phi_op(F: HilbertSeries) -> HilbertSeries:
    """``Phi F = (Pi F - (r_1+1)(r_2+1)(Lambda F)^2) / F`` of weight 3r + (4, 4)."""
    if not F.constant_term():
        raise NotInvertible(
            "Phi needs an invertible input (nonzero constant term); divide by hand with divide_exact"
        )
    out = divide_exact(phi_sharp(F), F)
    return _check_weight(out, _plus(F.weight, F.weight, F.weight, (4, 4)))
