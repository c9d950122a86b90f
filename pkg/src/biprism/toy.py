"""The two toy theories that are bi-interpretable but not definitionally equivalent.

``T`` (empty language) and ``S`` (one constant ``c``) both say "there are at
least n objects" for every n.  ``t`` interprets ``S`` in ``T`` on triples: the
triples with equal last two coordinates are identified by their first
coordinate, and all remaining triples collapse into one extra element that
names ``c``.  ``s`` interprets ``T`` in ``S`` by discarding ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .interpretations import (
    COMPONENTWISE, SchemeValidationError, TranslationScheme, apply_scheme, check_defined_isomorphism,
    classify, compose,
)
from .logic import (
    Equal, Formula, SchemaTheory, Signature, TRUE, Var, expand_counting, parse_formula,
)
from .report import Report
from .structures import (
    CapExceeded, automorphism_cap, definable_singletons, empty_structure, pointed_structure,
)

__all__ = [
    "L_T", "L_S", "SIGNATURES", "make_T", "make_S", "Prop1Bundle", "prop1_bundle",
    "t_roundtrip", "s_roundtrip", "T_structure", "S_structure",
    "roundtrip_check", "nondefinability_check", "t_sizes",
]

L_T = Signature("L_T")
L_S = Signature("L_S", constants={"c"})
SIGNATURES = {"L_T": L_T, "L_S": L_S, "empty": Signature("empty")}

# ``=.`` on triples and the triples denoting c
T_EPSILON = "(x2 = x3 & y2 = y3 & x1 = y1) | (!(x2 = x3) & !(y2 = y3))"
T_CONSTANT = "!(x2 = x3)"
S_DOMAIN = "!(x1 = c)"
ETA = "x = y1 & x = y2 & x = y3"
NU = "(!(x = c) & x = y1 & x = y2 & x = y3) | (x = c & !(y2 = y3))"


def _at_least(n: int) -> Formula:
    x = Var("x")
    return expand_counting(n, "x", Equal(x, x))


def make_T() -> SchemaTheory:
    return SchemaTheory("T", L_T, (), (_at_least,), ("exists>={n} x. x = x",))


def make_S() -> SchemaTheory:
    return SchemaTheory("S", L_S, (), (_at_least,), ("exists>={n} x. x = x",))


@dataclass(frozen=True)
class Prop1Bundle:
    theory_T: SchemaTheory
    theory_S: SchemaTheory
    scheme_t: TranslationScheme
    scheme_s: TranslationScheme
    eta: Formula
    nu: Formula


@lru_cache(maxsize=None)
def prop1_bundle() -> Prop1Bundle:
    t = TranslationScheme(
        "t", L_S, L_T, 3, TRUE, parse_formula(T_EPSILON, L_T),
        const_defs={"c": parse_formula(T_CONSTANT, L_T)},
    )
    s = TranslationScheme("s", L_T, L_S, 1, parse_formula(S_DOMAIN, L_S), COMPONENTWISE)
    bundle = Prop1Bundle(make_T(), make_S(), t, s, parse_formula(ETA, L_T), parse_formula(NU, L_S))
    assert classify(s).identity_preserving
    return bundle


def t_roundtrip() -> TranslationScheme:
    """Scheme whose functor is ``A -> s(t(A))`` on ``T``-structures."""
    b = prop1_bundle()
    return compose(b.scheme_t, b.scheme_s)


def s_roundtrip() -> TranslationScheme:
    """Scheme whose functor is ``B -> t(s(B))`` on ``S``-structures."""
    b = prop1_bundle()
    return compose(b.scheme_s, b.scheme_t)


def T_structure(n: int):
    return empty_structure(n, L_T)


def S_structure(n: int, k: int):
    return pointed_structure(n, k, L_S)


def _iso_entry(report: Report, label: str, A, scheme, formula) -> None:
    try:
        sub = check_defined_isomorphism(A, scheme, formula)
    except SchemeValidationError as exc:
        failure = exc.report.first_failure
        detail = f"round trip undefined: {failure.name}"
        if failure.detail:
            detail += f" ({failure.detail})"
        report.add(label, False, detail, witness=failure.witness)
        return
    failure = sub.first_failure
    report.add(label, sub.passed, "isomorphism" if sub.passed else f"fails {failure.name}",
               witness=None if sub.passed else failure.witness)


def roundtrip_check(n: int, cap: int | None = None) -> Report:
    """``eta`` on the size-``n`` ``T``-structure and ``nu`` on every size-``n`` ``S``-structure."""
    cap = automorphism_cap() if cap is None else cap
    if not 1 <= n <= cap:
        raise CapExceeded(f"round trip check needs 1 <= n <= {cap}, got {n}")
    b = prop1_bundle()
    report = Report(f"toy round trips, n={n}")
    _iso_entry(report, f"eta: A_{n} = s(t(A_{n}))", T_structure(n), t_roundtrip(), b.eta)
    for k in range(n):
        _iso_entry(report, f"nu: B_{n},c={k} = t(s(B))", S_structure(n, k), s_roundtrip(), b.nu)
    return report


def nondefinability_check(n: int, cap: int | None = None) -> Report:
    """No element of the pure set is 0-definable, while ``c`` is in every ``S``-structure.

    From three elements on ``c`` is the only definable element of ``B``.
    """
    cap = automorphism_cap() if cap is None else cap
    if not 2 <= n <= cap:
        raise CapExceeded(f"non-definability check needs 2 <= n <= {cap}, got {n}")
    report = Report(f"0-definable elements, n={n}")
    got = definable_singletons(T_structure(n), cap)
    report.add(f"A_{n} has none", not got, witness=sorted(got) or None)
    for k in range(n):
        got = definable_singletons(S_structure(n, k), cap)
        if n == 2:
            # with two elements the other one is "the element that is not c"
            report.add(f"B_2,c={k} has exactly c and its complement", got == {0, 1}, witness=sorted(got))
        else:
            report.add(f"B_{n},c={k} has only c", got == {k}, witness=sorted(got))
    return report


def t_sizes(max_n: int) -> dict[int, int]:
    """``|t(A_n)|`` for ``n = 1 .. max_n``; ``None`` where ``t`` is undefined."""
    t = prop1_bundle().scheme_t
    out = {}
    for n in range(1, max_n + 1):
        try:
            out[n] = apply_scheme(t, T_structure(n)).result.size
        except SchemeValidationError:
            out[n] = None
    return out
