"""Command line front end: expand, verify, reduce, decompose.

Exit codes: 0 success, 1 verification failure or "not in the ring",
2 usage error, 3 internal inconsistency, 4 iteration cap.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import qexp, serialize, structure
from .errors import (
    HMFError,
    IterationCapExceeded,
    KappaInconsistency,
    NotInRing,
    UnderdeterminedSystem,
)
from .eisenstein import eisenstein_series
from .numberfield import format_quad
from .reduction import PointH2, reduce_to_G
from .series import HilbertSeries
from .theta import chi5 as theta_chi5

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL, EXIT_CAP = 0, 1, 2, 3, 4
MIN_BOUND, MAX_BOUND, DEFAULT_BOUND = 1, 24, 6

HILBERT_FORMS = ("phi2", "chi5", "chi6", "chi_tilde", "E6norm")
ELLIPTIC_FORMS = ("E2", "E4", "E6", "Delta")
VERIFY_RELATIONS = ("systeme_elliptic", "systeme2", "deri2", "equadiff", "klein", "t_identity", "theta_cross_check")
_RELATION_PARTS = {
    "systeme2": ("systeme2_1", "systeme2_2", "systeme2_3"),
    "deri2": ("deri2",),
    "equadiff": ("equadiff",),
    "klein": ("klein",),
    "t_identity": ("t_identity",),
    "theta_cross_check": ("theta_cross_check",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 already; keep one path
        raise UsageError(message)


def _bound(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bound must be an integer, got {text!r}") from None
    if not MIN_BOUND <= n <= MAX_BOUND:
        raise argparse.ArgumentTypeError(f"bound must lie in [{MIN_BOUND}, {MAX_BOUND}]")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hmf5", description="Exact Hilbert modular forms for Q(sqrt 5).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("expand", help="print a Fourier expansion")
    e.add_argument("form", help=f"one of {', '.join(HILBERT_FORMS)} or elliptic:{{{','.join(ELLIPTIC_FORMS)}}}")
    e.add_argument("--bound", type=_bound, default=DEFAULT_BOUND)
    e.add_argument("--power", type=int, default=1, help="raise the form to this power first")
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.add_argument("--out")

    v = sub.add_parser("verify", help="check a relation; exit 0 iff the residual vanishes")
    v.add_argument("relation", choices=VERIFY_RELATIONS)
    v.add_argument("--bound", type=_bound, default=DEFAULT_BOUND)
    v.add_argument("--format", choices=("json", "csv"), default="json", help="ignored; output is a table")
    v.add_argument("--out")

    r = sub.add_parser("reduce", help="reduce a point of H x H into the Goetzky set")
    r.add_argument("z1")
    r.add_argument("z2")
    r.add_argument("--max-iter", type=int, default=200)
    r.add_argument("--out")

    d = sub.add_parser("decompose", help="write a series as a polynomial in the generators")
    d.add_argument("input", help="series document (JSON), or - for standard input")
    d.add_argument("--basis", choices=("parallel_full", "symmetric_even", "elliptic"), default="parallel_full")
    d.add_argument("--out")
    return p


# ---------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _hilbert_form(name: str, bound: int) -> HilbertSeries:
    if name == "phi2":
        return structure.phi2(bound)
    if name == "chi5":
        return theta_chi5(bound)
    if name == "chi6":
        return structure.chi6(bound)
    if name == "chi_tilde":
        return structure.chi_tilde(bound)
    if name == "E6norm":
        return eisenstein_series(6, bound)
    raise UsageError(f"unknown form {name!r}")


def _elliptic_form(name: str, bound: int) -> qexp.QExp:
    if name == "E2":
        return qexp.e2_q(bound)
    if name == "E4":
        return qexp.eisenstein_q(4, bound)
    if name == "E6":
        return qexp.eisenstein_q(6, bound)
    if name == "Delta":
        return qexp.delta_q(bound)
    raise UsageError(f"unknown elliptic form {name!r}")


def cmd_expand(args) -> int:
    if args.power < 1:
        raise UsageError("--power must be at least 1")
    if args.form.startswith("elliptic:"):
        f = _elliptic_form(args.form.split(":", 1)[1], args.bound) ** args.power
        text = serialize.qexp_to_csv(f) if args.format == "csv" else serialize.dumps(serialize.qexp_to_doc(f))
    else:
        f = _hilbert_form(args.form, args.bound) ** args.power
        text = serialize.series_to_csv(f) if args.format == "csv" else serialize.dumps(serialize.series_to_doc(f))
    _emit(text, args.out)
    return EXIT_OK


def _residual_elliptic(bound: int) -> list[tuple[str, qexp.QExp]]:
    e2, e4, e6 = qexp.e2_q(bound), qexp.eisenstein_q(4, bound), qexp.eisenstein_q(6, bound)
    D = qexp.d_operator
    return [
        ("systeme_DE2", (D(e2) - (e2 * e2 - e4).scale(Fraction(1, 12))).with_weight(4)),
        ("systeme_DE4", (D(e4) - (e2 * e4 - e6).scale(Fraction(1, 3))).with_weight(6)),
        ("systeme_DE6", (D(e6) - (e2 * e6 - e4 * e4).scale(Fraction(1, 2))).with_weight(8)),
    ]


def _required_bound(relation: str) -> int:
    if relation == "systeme_elliptic":
        return MIN_BOUND
    return max(structure.required_bound(structure.RELATION_WEIGHTS[r]) for r in _RELATION_PARTS[relation])


def cmd_verify(args) -> int:
    bound = args.bound
    need = _required_bound(args.relation)
    if bound < need:
        print(f"warning: bound raised to {need}", file=sys.stderr)
        bound = need
    rows: list[tuple[str, int, int, str, str]] = []
    if args.relation == "systeme_elliptic":
        for name, res in _residual_elliptic(bound):
            nz = [n for n, c in enumerate(res.coeffs) if c]
            rows.append((name, bound, len(nz), "OK" if not nz else "FAIL", f"q^{nz[0]}" if nz else "-"))
    else:
        for part in _RELATION_PARTS[args.relation]:
            res = structure.verify_relation(part, bound)
            bad = min((k.b for k in res.coeffs), default=None)
            rows.append((part, res.bound, len(res), "OK" if bad is None else "FAIL",
                         f"trace {bad}" if bad is not None else "-"))
        if args.relation == "klein":
            ok, detail = _klein_fit(bound)
            rows.append(("klein_fit", bound, 0 if ok else 1, "OK" if ok else "FAIL", detail))
    lines = [f"{'relation':<20} {'bound':>5} {'nonzero':>7}  status  first_offending"]
    for name, b, nz, status, first in rows:
        lines.append(f"{name:<20} {b:>5} {nz:>7}  {status:<6}  {first}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r[3] == "OK" for r in rows) else EXIT_FAIL


def _klein_fit(bound: int) -> tuple[bool, str]:
    ct = structure.chi_tilde(bound)
    try:
        fit = structure.fit_isobaric_relation(ct * ct, structure.SYMMETRIC_BASIS, 30)
    except HMFError as exc:
        return False, str(exc)
    got = {m: c.to_fraction() if c.is_rational() else None for m, c in fit.terms}
    return got == structure.klein_expected(), "-" if got == structure.klein_expected() else str(fit)


_COMPLEX_RE = re.compile(r"^-[0-9.]")


def _parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "").replace("i", "j")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a complex number") from None


def cmd_reduce(args) -> int:
    z1, z2 = _parse_complex(args.z1), _parse_complex(args.z2)
    if not (z1.imag > 0 and z2.imag > 0):
        raise UsageError("both points must have positive imaginary part")
    if args.max_iter < 1:
        raise UsageError("--max-iter must be at least 1")
    res = reduce_to_G(PointH2(z1, z2), args.max_iter)
    doc = {
        "gamma": [format_quad(x) for x in res.gamma.entries()],
        "point": [[res.point.z1.real, res.point.z1.imag], [res.point.z2.real, res.point.z2.imag]],
        "iterations": res.iterations,
        "im_product": res.point.im_product,
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def cmd_decompose(args) -> int:
    text = _read_input(args.input)
    try:
        obj = serialize.parse_document(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed series document: {exc}") from None
    if args.basis == "elliptic":
        if not isinstance(obj, qexp.QExp):
            raise UsageError("the elliptic basis needs an elliptic document")
        terms = qexp.isobaric_decompose_elliptic(obj)
        total = qexp.evaluate_elliptic(terms, obj.weight, obj.bound)
        if not total.agrees(obj):
            raise NotInRing("reassembly check failed")
        doc = serialize.poly_to_doc("elliptic", ("E4", "E6"), obj.weight, terms)
    else:
        if not isinstance(obj, HilbertSeries):
            raise UsageError("this basis needs a Hilbert series document")
        if obj.denom != 1:
            raise UsageError("decomposition needs denom 1")
        try:
            if args.basis == "symmetric_even":
                poly = structure.decompose_symmetric_even(obj)
            else:
                poly = structure.decompose_any(obj).poly
        except ValueError as exc:
            # wrong weight shape for the requested basis
            raise NotInRing(str(exc)) from exc
        if not poly.evaluate(obj.bound).agrees(obj):
            raise NotInRing("reassembly check failed")
        terms = sorted(poly.terms, key=lambda t: tuple(-e for e in t[0]))
        doc = serialize.poly_to_doc(args.basis, poly.generators, poly.weight, terms)
    _emit(serialize.dumps(doc), args.out)
    return EXIT_OK


_COMMANDS = {"expand": cmd_expand, "verify": cmd_verify, "reduce": cmd_reduce, "decompose": cmd_decompose}


def _protect_negative_complex(argv: list[str]) -> list[str]:
    # "-0.1+0.3i" would be read as an option; parenthesize such operands
    if argv and argv[0] == "reduce":
        return [argv[0]] + [f"({a})" if _COMPLEX_RE.match(a) else a for a in argv[1:]]
    return argv


def main(argv: Sequence[str] | None = None) -> int:
    argv = _protect_negative_complex(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotInRing, UnderdeterminedSystem) as exc:
        print(f"not in the ring: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except IterationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (KappaInconsistency, AssertionError, HMFError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
