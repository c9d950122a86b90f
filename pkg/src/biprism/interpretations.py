"""Translation schemes, formula translation, composition and the induced model functor.

A scheme of dimension ``d`` describes each source element by a ``d``-tuple of
target elements.  Defining formulas use fixed variable names:

* domain formula ``delta``: ``x1 .. xd``
* identity formula ``epsilon``: ``x1 .. xd, y1 .. yd`` (or ``COMPONENTWISE``)
* relation ``R`` of arity ``k``: ``x1_1 .. x1_d, .., xk_1 .. xk_d``
* constant ``c``: ``x1 .. xd``

Translating a formula turns source variable ``v`` into ``v_1 .. v_d`` (just
``v`` when ``d == 1``).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .logic import (
    And, Bottom, Const, Equal, Exists, ForAll, Formula, FormulaError, Iff, Implies, Not, Or,
    Rel, Signature, Top, Var, TRUE, all_vars, check_formula, conj, fresh_name, free_vars,
    parse_formula, render_formula, substitute,
)
from .report import Report
from .structures import FiniteStructure, satisfaction

__all__ = [
    "COMPONENTWISE", "TranslationScheme", "SchemeFlags", "InterpretedStructure",
    "SchemeError", "SchemeValidationError",
    "classify", "translate_formula", "compose", "validate_scheme_on", "apply_scheme",
    "check_commutation", "check_defined_isomorphism", "identity_scheme",
    "xvars", "yvars", "arg_vars", "tuple_vars",
    "scheme_from_dict", "scheme_to_dict", "load_scheme", "dump_scheme",
]

COMPONENTWISE = "componentwise"


class SchemeError(FormulaError):
    pass


class SchemeValidationError(ValueError):
    def __init__(self, report: Report):
        self.report = report
        failure = report.first_failure
        super().__init__(f"{report.title}: {failure.name}: {failure.detail}" if failure else report.title)


def xvars(d: int) -> tuple[str, ...]:
    return tuple(f"x{j}" for j in range(1, d + 1))


def yvars(d: int) -> tuple[str, ...]:
    return tuple(f"y{j}" for j in range(1, d + 1))


def arg_vars(i: int, d: int) -> tuple[str, ...]:
    """Variables for the ``i``-th argument (1-based) of a relation definition."""
    return tuple(f"x{i}_{j}" for j in range(1, d + 1))


def tuple_vars(v: str, d: int) -> tuple[str, ...]:
    """Target variables standing for source variable ``v``."""
    if d == 1:
        return (v,)
    return tuple(f"{v}_{j}" for j in range(1, d + 1))


@dataclass(frozen=True)
class TranslationScheme:
    """A ``d``-dimensional translation of ``source`` formulas into ``target`` formulas."""

    name: str
    source: Signature
    target: Signature
    dim: int
    delta: Formula
    epsilon: object
    rel_defs: tuple = ()
    const_defs: tuple = ()

    def __post_init__(self):
        rel_defs = self.rel_defs.items() if isinstance(self.rel_defs, Mapping) else self.rel_defs
        const_defs = self.const_defs.items() if isinstance(self.const_defs, Mapping) else self.const_defs
        object.__setattr__(self, "rel_defs", tuple(sorted(rel_defs)))
        object.__setattr__(self, "const_defs", tuple(sorted(const_defs)))
        d = self.dim
        if d < 1:
            raise SchemeError(f"{self.name}: dimension must be >= 1")
        self._check("delta", self.delta, xvars(d))
        if self.epsilon != COMPONENTWISE:
            if not isinstance(self.epsilon, Formula):
                raise SchemeError(f"{self.name}: epsilon must be a formula or {COMPONENTWISE!r}")
            self._check("epsilon", self.epsilon, xvars(d) + yvars(d))
        arities = self.source.arities
        for r, f in self.rel_defs:
            if r not in arities:
                raise SchemeError(f"{self.name}: {r!r} is not a relation of {self.source}")
            allowed = sum((arg_vars(i, d) for i in range(1, arities[r] + 1)), ())
            self._check(f"relation {r}", f, allowed)
        for c, f in self.const_defs:
            if c not in self.source.constants:
                raise SchemeError(f"{self.name}: {c!r} is not a constant of {self.source}")
            self._check(f"constant {c}", f, xvars(d))

    def _check(self, what: str, f: Formula, allowed: Sequence[str]) -> None:
        try:
            check_formula(f, self.target)
        except FormulaError as exc:
            raise SchemeError(f"{self.name}: {what}: {exc}") from None
        extra = free_vars(f) - set(allowed)
        if extra:
            raise SchemeError(
                f"{self.name}: {what} has free variables {sorted(extra)}; allowed {list(allowed)}"
            )

    @property
    def relations(self) -> dict[str, Formula]:
        return dict(self.rel_defs)

    @property
    def constants(self) -> dict[str, Formula]:
        return dict(self.const_defs)

    def epsilon_formula(self) -> Formula:
        """The identity formula, spelling out ``COMPONENTWISE`` if needed."""
        if self.epsilon == COMPONENTWISE:
            return conj(Equal(Var(x), Var(y)) for x, y in zip(xvars(self.dim), yvars(self.dim)))
        return self.epsilon


@dataclass(frozen=True)
class SchemeFlags:
    one_dimensional: bool
    identity_preserving: bool
    unrelativized: bool
    direct: bool


def classify(sch: TranslationScheme) -> SchemeFlags:
    """Syntactic taxonomy; ``direct`` means all three other flags hold."""
    one = sch.dim == 1
    ident = one and sch.epsilon == COMPONENTWISE
    unrel = isinstance(sch.delta, Top)
    return SchemeFlags(one, ident, unrel, one and ident and unrel)


def identity_scheme(sig: Signature, name: str | None = None) -> TranslationScheme:
    rels = {
        r: Rel(r, tuple(Var(arg_vars(i, 1)[0]) for i in range(1, k + 1)))
        for r, k in sig.relations
    }
    consts = {c: Equal(Var("x1"), Const(c)) for c in sig.constants}
    return TranslationScheme(name or f"id[{sig.name}]", sig, sig, 1, TRUE, COMPONENTWISE, rels, consts)


# --------------------------------------------------------------------------
# translation


@dataclass(frozen=True)
class _Denotes(Formula):
    """``var = const`` produced by constant elimination; translated by the constant's definition."""

    var: str
    const: str


def _eliminate_constants(f: Formula, avoid: set[str]) -> Formula:
    if isinstance(f, (Equal, Rel)):
        terms = (f.left, f.right) if isinstance(f, Equal) else f.args
        consts = sorted({t.name for t in terms if isinstance(t, Const)})
        if not consts:
            return f
        names = {}
        for c in consts:
            z = fresh_name("z", avoid)
            avoid.add(z)
            names[c] = z

        def swap(t):
            return Var(names[t.name]) if isinstance(t, Const) else t

        if isinstance(f, Equal):
            out: Formula = Equal(swap(f.left), swap(f.right))
        else:
            out = Rel(f.name, tuple(swap(a) for a in f.args))
        for c in reversed(consts):
            out = Exists(names[c], And(_Denotes(names[c], c), out))
        return out
    if isinstance(f, Not):
        return Not(_eliminate_constants(f.body, avoid))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_eliminate_constants(f.left, avoid), _eliminate_constants(f.right, avoid))
    if isinstance(f, (ForAll, Exists)):
        return type(f)(f.var, _eliminate_constants(f.body, avoid))
    return f


def _rename(f: Formula, names: Sequence[str], targets: Sequence[str]) -> Formula:
    return substitute(f, {a: Var(b) for a, b in zip(names, targets)})


def _translate(sch: TranslationScheme, f: Formula) -> Formula:
    d = sch.dim
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, _Denotes):
        try:
            phi = sch.constants[f.const]
        except KeyError:
            raise SchemeError(f"{sch.name}: no defining formula for constant {f.const!r}") from None
        return _rename(phi, xvars(d), tuple_vars(f.var, d))
    if isinstance(f, Equal):
        xs, ys = tuple_vars(f.left.name, d), tuple_vars(f.right.name, d)
        if sch.epsilon == COMPONENTWISE:
            return conj(Equal(Var(a), Var(b)) for a, b in zip(xs, ys))
        return _rename(sch.epsilon, xvars(d) + yvars(d), xs + ys)
    if isinstance(f, Rel):
        try:
            phi = sch.relations[f.name]
        except KeyError:
            raise SchemeError(f"{sch.name}: no defining formula for relation {f.name!r}") from None
        names, targets = [], []
        for i, a in enumerate(f.args, 1):
            names += arg_vars(i, d)
            targets += tuple_vars(a.name, d)
        return _rename(phi, names, targets)
    if isinstance(f, Not):
        return Not(_translate(sch, f.body))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_translate(sch, f.left), _translate(sch, f.right))
    if isinstance(f, (ForAll, Exists)):
        xs = tuple_vars(f.var, d)
        body = _translate(sch, f.body)
        if not isinstance(sch.delta, Top):
            guard = _rename(sch.delta, xvars(d), xs)
            body = Implies(guard, body) if isinstance(f, ForAll) else And(guard, body)
        for v in reversed(xs):
            body = type(f)(v, body)
        return body
    raise TypeError(f"not a formula: {f!r}")


def translate_formula(sch: TranslationScheme, f: Formula) -> Formula:
    """Translate a source-language formula into the target language.

    Constants are first paraphrased away (``x = c`` becomes
    ``exists z. z = c & x = z``); equality goes to ``epsilon``, relations to
    their definitions and quantifiers are relativized to ``delta``.
    """
    check_formula(f, sch.source)
    g = _eliminate_constants(f, set(all_vars(f)))
    return _translate(sch, g)


def compose(outer: TranslationScheme, inner: TranslationScheme) -> TranslationScheme:
    """The scheme translating ``inner.source`` formulas into ``outer.target``.

    Its model functor applies ``outer`` first and then ``inner``.  Inner block
    ``j`` component ``k`` becomes composite coordinate ``(j-1)*d_outer + k``.
    """
    if not inner.target.same_symbols(outer.source):
        raise SchemeError(
            f"cannot compose: {inner.name} targets {inner.target} but {outer.name} reads {outer.source}"
        )
    do, di = outer.dim, inner.dim
    d = do * di

    def lift(f: Formula, blocks: Sequence[tuple[str, str]]) -> Formula:
        """Translate an inner defining formula and rename to composite coordinates.

        ``blocks`` pairs each inner variable name with the composite prefix and
        block index it should land on, e.g. ``("x2", ("x", 2))``.
        """
        g = translate_formula(outer, f)
        names, targets = [], []
        for inner_var, (prefix, j) in blocks:
            names += tuple_vars(inner_var, do)
            targets += [f"{prefix}{(j - 1) * do + k}" for k in range(1, do + 1)]
        return _rename(g, names, targets)

    def xblocks(prefix="x"):
        return [(f"{prefix}{j}", (prefix, j)) for j in range(1, di + 1)]

    guards = []
    if not isinstance(outer.delta, Top):
        for j in range(1, di + 1):
            coords = [f"x{(j - 1) * do + k}" for k in range(1, do + 1)]
            guards.append(_rename(outer.delta, xvars(do), coords))
    inner_delta = lift(inner.delta, xblocks())
    if not isinstance(inner_delta, Top):
        guards.append(inner_delta)
    delta = conj(guards)

    if inner.epsilon == COMPONENTWISE and outer.epsilon == COMPONENTWISE:
        epsilon = COMPONENTWISE
    else:
        epsilon = lift(inner.epsilon_formula(), xblocks() + xblocks("y"))

    rels = {}
    arities = inner.source.arities
    for r, phi in inner.rel_defs:
        blocks = []
        for i in range(1, arities[r] + 1):
            blocks += [(f"x{i}_{j}", (f"x{i}_", j)) for j in range(1, di + 1)]
        rels[r] = lift(phi, blocks)
    consts = {c: lift(phi, xblocks()) for c, phi in inner.const_defs}
    return TranslationScheme(
        f"{outer.name}.{inner.name}", inner.source, outer.target, d, delta, epsilon, rels, consts
    )


# --------------------------------------------------------------------------
# the model functor


@dataclass(frozen=True)
class InterpretedStructure:
    """``result`` is the interpreted structure; element ``i`` is the class ``classes[i]``."""

    result: FiniteStructure
    classes: tuple
    rep: tuple

    def class_of(self, t: tuple) -> int:
        for i, cls in enumerate(self.classes):
            if t in cls:
                return i
        raise KeyError(t)


class _Analysis:
    """Delta-set, epsilon classes and induced relations of a scheme on one structure."""

    def __init__(self, sch: TranslationScheme, A: FiniteStructure):
        self.sch, self.A = sch, A
        d, n = sch.dim, A.size
        self.report = Report(f"validate {sch.name} on {A}")
        if not A.sig.same_symbols(sch.target):
            raise SchemeError(f"{A} is not a {sch.target} structure")
        dtab = satisfaction(A, sch.delta, xvars(d)).reshape(-1)
        self.flat = np.nonzero(dtab)[0]
        self.D = [tuple(int(a) for a in np.unravel_index(i, (n,) * d)) for i in self.flat] if n else []
        m = len(self.D)
        self.report.add("domain formula", True, f"{m} of {n ** d} tuples satisfy delta")

        if sch.epsilon == COMPONENTWISE:
            E = np.eye(m, dtype=bool)
        else:
            etab = satisfaction(A, sch.epsilon, xvars(d) + yvars(d)).reshape(n ** d, n ** d)
            E = etab[np.ix_(self.flat, self.flat)]
        self.E = E
        self.equivalence = self._check_equivalence(E)
        self.labels = None
        self.classes = []
        if not self.equivalence:
            return
        labels = np.full(m, -1)
        for i in range(m):
            if labels[i] < 0:
                labels[E[i]] = len(self.classes)
                self.classes.append(i)
        self.labels = labels
        self.rep_index = list(self.classes)

        self.rel_tables = {}
        for r, k in sch.source.relations:
            self._check_relation(r, k)
        self.const_classes = {}
        for c in sorted(sch.source.constants):
            self._check_constant(c)

    def _check_equivalence(self, E) -> bool:
        D, rep = self.D, self.report
        bad = np.nonzero(~np.diag(E))[0]
        rep.add("epsilon reflexive", not len(bad),
                witness={"tuple": D[bad[0]]} if len(bad) else None)
        asym = np.argwhere(E & ~E.T)
        rep.add("epsilon symmetric", not len(asym),
                witness={"holds": [D[asym[0][0]], D[asym[0][1]]]} if len(asym) else None)
        Ei = E.astype(np.int64)
        reach = (Ei @ Ei) > 0
        trans = np.argwhere(reach & ~E)
        witness = None
        if len(trans):
            i, k = trans[0]
            j = int(np.nonzero(E[i] & E[:, k])[0][0])
            witness = {"holds": [D[i], D[j]], "and": [D[j], D[k]], "but_not": [D[i], D[k]]}
        rep.add("epsilon transitive", not len(trans), witness=witness)
        return not (len(bad) or len(asym) or len(trans))

    def _check_relation(self, r: str, k: int) -> None:
        sch, A, d, n = self.sch, self.A, self.sch.dim, self.A.size
        phi = sch.relations.get(r)
        if phi is None:
            self.report.add(f"relation {r} invariant", False, "no defining formula")
            return
        names = sum((arg_vars(i, d) for i in range(1, k + 1)), ())
        tab = satisfaction(A, phi, names).reshape((n ** d,) * k)
        tab = tab[np.ix_(*[self.flat] * k)]
        reps = np.array(self.rep_index, dtype=np.int64)
        on_classes = tab[np.ix_(*[reps] * k)]
        induced = on_classes[np.ix_(*[self.labels] * k)]
        bad = np.argwhere(tab != induced)
        witness = None
        if len(bad):
            tup = bad[0]
            witness = {
                "tuple": [self.D[i] for i in tup],
                "representatives": [self.D[reps[self.labels[i]]] for i in tup],
            }
        self.report.add(f"relation {r} invariant", not len(bad), witness=witness)
        self.rel_tables[r] = on_classes

    def _check_constant(self, c: str) -> None:
        sch, A, d = self.sch, self.A, self.sch.dim
        phi = sch.constants.get(c)
        if phi is None:
            self.report.add(f"constant {c} unique", False, "no defining formula")
            return
        tab = satisfaction(A, phi, xvars(d)).reshape(-1)[self.flat]
        hit = sorted({int(self.labels[i]) for i in np.nonzero(tab)[0]})
        if len(hit) == 1:
            self.const_classes[c] = hit[0]
            self.report.add(f"constant {c} unique", True)
        else:
            members = [self.D[self.rep_index[h]] for h in hit]
            detail = "defines no class" if not hit else f"meets {len(hit)} classes"
            self.report.add(f"constant {c} unique", False, detail, witness={"representatives": members})

    def build(self) -> InterpretedStructure:
        if not self.report.passed:
            raise SchemeValidationError(self.report)
        k = len(self.classes)
        rels = {}
        for r, tab in self.rel_tables.items():
            rels[r] = {tuple(int(x) for x in t) for t in np.argwhere(tab)}
        result = FiniteStructure(self.sch.source, k, rels, self.const_classes)
        classes = tuple(
            frozenset(self.D[i] for i in np.nonzero(self.labels == c)[0]) for c in range(k)
        )
        rep = tuple(self.D[i] for i in self.rep_index)
        return InterpretedStructure(result, classes, rep)


def validate_scheme_on(sch: TranslationScheme, A: FiniteStructure) -> Report:
    """Check that ``sch`` defines a structure on ``A``.

    ``epsilon`` must be an equivalence on the delta-set, every relation
    definition must respect it, and every constant definition must meet
    exactly one class.
    """
    return _Analysis(sch, A).report


def apply_scheme(sch: TranslationScheme, A: FiniteStructure) -> InterpretedStructure:
    """The interpreted structure, with classes ordered by their least tuple."""
    return _Analysis(sch, A).build()


# --------------------------------------------------------------------------
# semantic checks


def check_commutation(sch: TranslationScheme, A: FiniteStructure, f: Formula,
                      trials: int = 1000, seed: int = 0,
                      interpreted: InterpretedStructure | None = None) -> Report:
    """Compare ``sch(A) |= f`` with ``A |= translate(f)`` on class representatives.

    All assignments are checked when there are at most ``trials`` of them,
    otherwise ``trials`` random ones.
    """
    I = interpreted or apply_scheme(sch, A)
    B, d = I.result, sch.dim
    tf = translate_formula(sch, f)
    vs = tuple(sorted(free_vars(f)))
    comp = sum((tuple_vars(v, d) for v in vs), ())
    left = satisfaction(B, f, vs)
    right = satisfaction(A, tf, comp)
    total = B.size ** len(vs)
    if total <= trials:
        assignments = itertools.product(range(B.size), repeat=len(vs))
        mode = "exhaustive"
    else:
        rng = random.Random(seed)
        assignments = (tuple(rng.randrange(B.size) for _ in vs) for _ in range(trials))
        mode = f"{trials} random"
    report = Report(f"commutation of {sch.name} on {render_formula(f)}")
    checked = 0
    for a in assignments:
        checked += 1
        reps = sum((I.rep[i] for i in a), ())
        lv, rv = bool(left[a]), bool(right[reps])
        if lv != rv:
            report.add("commutes", False, f"{mode} assignments", witness={
                "assignment": dict(zip(vs, a)), "interpreted": lv, "translated": rv,
            })
            return report
    report.add("commutes", True, f"{checked} {mode} assignments")
    return report


def check_defined_isomorphism(A: FiniteStructure, sch_roundtrip: TranslationScheme,
                              eta: Formula) -> Report:
    """Does ``{(x, [y]) : A |= eta(x, y1..yd)}`` define an isomorphism ``A -> sch(A)``?"""
    sch = sch_roundtrip
    if not (sch.source.same_symbols(A.sig) and sch.target.same_symbols(A.sig)):
        raise SchemeError(f"{sch.name} is not a round trip on {A.sig}")
    d, n = sch.dim, A.size
    allowed = {"x"} | set(yvars(d))
    extra = free_vars(eta) - allowed
    if extra:
        raise SchemeError(f"isomorphism formula has unexpected free variables {sorted(extra)}")
    an = _Analysis(sch, A)
    I = an.build()
    B = I.result
    report = Report(f"defined isomorphism {A} -> {sch.name}")
    tab = satisfaction(A, eta, ("x",) + yvars(d)).reshape(n, n ** d)[:, an.flat]
    labels = an.labels

    # eta may pick a single representative per class; only the induced
    # relation between elements and classes has to be a function
    image = [sorted({int(labels[j]) for j in np.nonzero(tab[a])[0]}) for a in range(n)]
    multi = [a for a in range(n) if len(image[a]) > 1]
    report.add("well-defined", not multi, "witnesses of each x lie in one class", witness=(
        {"x": multi[0], "classes": [I.rep[c] for c in image[multi[0]]]} if multi else None))
    missing = [a for a in range(n) if not image[a]]
    report.add("total", not missing, witness={"x": missing[0]} if missing else None)
    if multi or missing:
        return report
    h = [img[0] for img in image]
    seen = {}
    clash = None
    for a, b in enumerate(h):
        if b in seen:
            clash = (seen[b], a)
            break
        seen[b] = a
    report.add("injective", clash is None, witness=(
        {"x": clash[0], "x'": clash[1], "class": I.rep[h[clash[0]]]} if clash else None))
    unhit = sorted(set(range(B.size)) - set(h))
    report.add("surjective", not unhit, witness={"class": I.rep[unhit[0]]} if unhit else None)

    bad_rel = None
    for r, k in A.sig.relations:
        RA, RB = A.rel(r), B.rel(r)
        for t in itertools.product(range(n), repeat=k):
            if (t in RA) != (tuple(h[a] for a in t) in RB):
                bad_rel = {"relation": r, "tuple": t}
                break
        if bad_rel:
            break
    report.add("preserves relations", bad_rel is None, witness=bad_rel)
    bad_c = [c for c, a in A.constants if h[a] != B.const(c)]
    report.add("preserves constants", not bad_c, witness={"constant": bad_c[0]} if bad_c else None)
    return report


# --------------------------------------------------------------------------
# scheme files


def _sig_from(spec, signatures: Mapping[str, Signature]) -> Signature:
    if isinstance(spec, str):
        try:
            return signatures[spec]
        except KeyError:
            raise SchemeError(f"unknown signature {spec!r}; known: {sorted(signatures)}") from None
    return Signature(spec.get("name", ""), spec.get("relations", {}), spec.get("constants", []))


def _sig_to(sig: Signature, signatures: Mapping[str, Signature]):
    if sig.name in signatures and signatures[sig.name] == sig:
        return sig.name
    return {"name": sig.name, "relations": dict(sig.relations), "constants": sorted(sig.constants)}


def scheme_from_dict(data: Mapping, signatures: Mapping[str, Signature] | None = None) -> TranslationScheme:
    signatures = signatures or {}
    try:
        source = _sig_from(data["source"], signatures)
        target = _sig_from(data["target"], signatures)
        dim = int(data["dim"])
        delta = parse_formula(data.get("delta", "true"), target)
        eps = data.get("epsilon", COMPONENTWISE)
        epsilon = COMPONENTWISE if eps == COMPONENTWISE else parse_formula(eps, target)
        rels = {r: parse_formula(t, target) for r, t in (data.get("relations") or {}).items()}
        consts = {c: parse_formula(t, target) for c, t in (data.get("constants") or {}).items()}
    except KeyError as exc:
        raise SchemeError(f"scheme is missing field {exc}") from None
    return TranslationScheme(data.get("name", "scheme"), source, target, dim, delta, epsilon, rels, consts)


def scheme_to_dict(sch: TranslationScheme, signatures: Mapping[str, Signature] | None = None) -> dict:
    signatures = signatures or {}
    return {
        "name": sch.name,
        "source": _sig_to(sch.source, signatures),
        "target": _sig_to(sch.target, signatures),
        "dim": sch.dim,
        "delta": render_formula(sch.delta),
        "epsilon": sch.epsilon if sch.epsilon == COMPONENTWISE else render_formula(sch.epsilon),
        "relations": {r: render_formula(f) for r, f in sch.rel_defs},
        "constants": {c: render_formula(f) for c, f in sch.const_defs},
    }


def load_scheme(path: str, signatures: Mapping[str, Signature] | None = None) -> TranslationScheme:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemeError(f"{path}: {exc}") from None
    return scheme_from_dict(data, signatures)


def dump_scheme(sch: TranslationScheme, signatures: Mapping[str, Signature] | None = None) -> str:
    return json.dumps(scheme_to_dict(sch, signatures), indent=2, sort_keys=True)
