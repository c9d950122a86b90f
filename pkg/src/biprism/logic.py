"""Relational first-order logic with equality.

Formulas are immutable trees of frozen dataclasses.  The concrete syntax is
plain ASCII::

    true  false  t1 = t2  R(t1,...,tk)  !f  f & g  f | g  f -> g  f <-> g
    forall x. f   exists x. f   exists>=N x. f

with precedence ``!`` > ``&`` > ``|`` > ``->`` > ``<->``.  ``&``, ``|`` and
``<->`` associate to the left, ``->`` to the right, and a quantifier body
extends as far to the right as possible.  Counting quantifiers are expanded
at parse time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "FormulaError", "FormulaSyntaxError", "UnknownSymbolError", "ArityError",
    "Signature", "Var", "Const", "Term",
    "Formula", "Equal", "Rel", "Not", "And", "Or", "Implies", "Iff",
    "ForAll", "Exists", "Top", "Bottom", "TRUE", "FALSE",
    "parse_formula", "render_formula", "substitute", "expand_counting",
    "free_vars", "all_vars", "constants_of", "relations_of", "fresh_name",
    "conj", "disj", "check_formula", "is_sentence", "depth", "quantifier_depth",
    "SchemaTheory", "parse_signature", "render_signature", "EMPTY_SIGNATURE",
    "parse_theory", "render_theory", "load_theory",
]


class FormulaError(ValueError):
    """Base class for malformed formulas and signatures."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownSymbolError(FormulaError):
    pass


class ArityError(FormulaError):
    pass


# --------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    """Relation symbols with arities plus constant symbols.

    ``relations`` may be given as a mapping; it is stored as a sorted tuple of
    ``(name, arity)`` pairs so that signatures stay hashable.
    """

    name: str = ""
    relations: tuple = ()
    constants: frozenset = frozenset()

    def __post_init__(self):
        rels = self.relations
        if isinstance(rels, Mapping):
            rels = rels.items()
        rels = tuple(sorted((str(r), int(a)) for r, a in rels))
        consts = frozenset(self.constants)
        names = [r for r, _ in rels]
        if len(set(names)) != len(names):
            raise FormulaError(f"duplicate relation symbol in {self.name!r}")
        clash = set(names) & consts
        if clash:
            raise FormulaError(f"symbols used both as relation and constant: {sorted(clash)}")
        for r, a in rels:
            if a < 1:
                raise FormulaError(f"relation {r} must have arity >= 1, got {a}")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", consts)

    @property
    def arities(self) -> dict[str, int]:
        return dict(self.relations)

    def arity(self, rel: str) -> int:
        try:
            return self.arities[rel]
        except KeyError:
            raise UnknownSymbolError(f"unknown relation symbol {rel!r}") from None

    def has_relation(self, rel: str) -> bool:
        return rel in self.arities

    def same_symbols(self, other: "Signature") -> bool:
        return self.relations == other.relations and self.constants == other.constants

    def __str__(self):
        return self.name or render_signature(self)


EMPTY_SIGNATURE = Signature("empty")


# --------------------------------------------------------------------------
# syntax trees


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]


class Formula:
    """Marker base class; see the concrete node types below."""

    __slots__ = ()

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "TRUE"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "FALSE"


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True)
class Equal(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not all(isinstance(a, (Var, Const)) for a in self.args):
            raise FormulaError(f"arguments of {self.name} must be terms, got {self.args!r}")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (ForAll, Exists)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; ``TRUE`` for no parts."""
    out = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TRUE if out is None else out


def disj(parts: Iterable[Formula]) -> Formula:
    out = None
    for p in parts:
        out = p if out is None else Or(out, p)
    return FALSE if out is None else out


def _term_vars(t: Term) -> set[str]:
    return {t.name} if isinstance(t, Var) else set()


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Equal):
        return frozenset(_term_vars(f.left) | _term_vars(f.right))
    if isinstance(f, Rel):
        return frozenset(a.name for a in f.args if isinstance(a, Var))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    return frozenset()


def all_vars(f: Formula) -> frozenset[str]:
    """Every variable name occurring in ``f``, bound or free."""
    if isinstance(f, Not):
        return all_vars(f.body)
    if isinstance(f, BINARY):
        return all_vars(f.left) | all_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return all_vars(f.body) | {f.var}
    return free_vars(f)


def constants_of(f: Formula) -> frozenset[str]:
    if isinstance(f, Equal):
        return frozenset(t.name for t in (f.left, f.right) if isinstance(t, Const))
    if isinstance(f, Rel):
        return frozenset(a.name for a in f.args if isinstance(a, Const))
    if isinstance(f, Not):
        return constants_of(f.body)
    if isinstance(f, BINARY):
        return constants_of(f.left) | constants_of(f.right)
    if isinstance(f, QUANTIFIERS):
        return constants_of(f.body)
    return frozenset()


def relations_of(f: Formula) -> dict[str, int]:
    """Relation symbols used in ``f`` with the arity they are used at."""
    out: dict[str, int] = {}

    def walk(g):
        if isinstance(g, Rel):
            out.setdefault(g.name, len(g.args))
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, BINARY):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, QUANTIFIERS):
            walk(g.body)

    walk(f)
    return out


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def depth(f: Formula) -> int:
    """Height of the syntax tree; atoms, ``true`` and ``false`` have depth 0."""
    if isinstance(f, Not):
        return 1 + depth(f.body)
    if isinstance(f, BINARY):
        return 1 + max(depth(f.left), depth(f.right))
    if isinstance(f, QUANTIFIERS):
        return 1 + depth(f.body)
    return 0


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, BINARY):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    if isinstance(f, QUANTIFIERS):
        return 1 + quantifier_depth(f.body)
    return 0


def check_formula(f: Formula, sig: Signature) -> None:
    """Raise unless every symbol of ``f`` belongs to ``sig`` at the right arity."""
    for c in constants_of(f):
        if c not in sig.constants:
            raise UnknownSymbolError(f"unknown constant symbol {c!r} for signature {sig}")
    arities = sig.arities
    for r, k in relations_of(f).items():
        if r not in arities:
            raise UnknownSymbolError(f"unknown relation symbol {r!r} for signature {sig}")
    _check_arities(f, arities)


def _check_arities(f, arities):
    if isinstance(f, Rel):
        if len(f.args) != arities[f.name]:
            raise ArityError(f"{f.name} expects {arities[f.name]} arguments, got {len(f.args)}")
    elif isinstance(f, Not):
        _check_arities(f.body, arities)
    elif isinstance(f, BINARY):
        _check_arities(f.left, arities)
        _check_arities(f.right, arities)
    elif isinstance(f, QUANTIFIERS):
        _check_arities(f.body, arities)


# --------------------------------------------------------------------------
# substitution


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """``base`` with primes appended until it avoids every name in ``avoid``."""
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


def _sub_term(t: Term, m: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return m.get(t.name, t)
    return t


def substitute(f: Formula, m: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables."""
    m = {v: t for v, t in m.items() if t != Var(v)}
    if not m:
        return f
    return _subst(f, m)


def _subst(f, m):
    if isinstance(f, Equal):
        return Equal(_sub_term(f.left, m), _sub_term(f.right, m))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(_sub_term(a, m) for a in f.args))
    if isinstance(f, Not):
        return Not(_subst(f.body, m))
    if isinstance(f, BINARY):
        return type(f)(_subst(f.left, m), _subst(f.right, m))
    if isinstance(f, QUANTIFIERS):
        body_free = free_vars(f.body)
        inner = {v: t for v, t in m.items() if v != f.var and v in body_free}
        if not inner:
            return f
        incoming = set()
        for t in inner.values():
            incoming |= _term_vars(t)
        var = f.var
        if var in incoming:
            new = fresh_name(var, incoming | body_free | all_vars(f.body) | set(inner))
            inner[var] = Var(new)
            var = new
        return type(f)(var, _subst(f.body, inner))
    return f


# --------------------------------------------------------------------------
# counting quantifiers


def expand_counting(n: int, v: str, body: Formula) -> Formula:
    """``exists>=n v. body`` in primitive syntax.

    Witness variables are ``v1 .. vn`` (primed when they would clash with a
    free variable of ``body``); the matrix lists the pairwise disequalities
    first and then the body instances.
    """
    if n < 0:
        raise ValueError("counting bound must be non-negative")
    if n == 0:
        return TRUE
    avoid = set(free_vars(body)) - {v}
    names = []
    for i in range(1, n + 1):
        name = fresh_name(f"{v}{i}", avoid)
        avoid.add(name)
        names.append(name)
    parts: list[Formula] = [
        Not(Equal(Var(names[i]), Var(names[j])))
        for i in range(n) for j in range(i + 1, n)
    ]
    parts += [substitute(body, {v: Var(x)}) for x in names]
    out = conj(parts)
    for x in reversed(names):
        out = Exists(x, out)
    return out


# --------------------------------------------------------------------------
# concrete syntax


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op><->|->|>=|[!&|().,=]))"
)
KEYWORDS = {"true", "false", "forall", "exists"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.arities = sig.arities
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return FormulaSyntaxError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def at(self, value):
        kind, val, _ = self.peek()
        return kind in ("op", "ident") and val == value

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def iff(self):
        f = self.imp()
        while self.at("<->"):
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.at("->"):
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self):
        f = self.conj()
        while self.at("|"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.at("!"):
            self.take()
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            return self.quantifier()
        return self.primary()

    def quantifier(self):
        kind = self.take()[1]
        count = None
        if self.at(">="):
            if kind != "exists":
                raise self.error("counting bound is only allowed on exists")
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise self.error("expected a number after '>='", tok)
            count = int(tok[1])
        var = self.variable_name()
        self.expect(".")
        body = self.iff()
        if count is not None:
            return expand_counting(count, var, body)
        return (ForAll if kind == "forall" else Exists)(var, body)

    def variable_name(self):
        tok = self.take()
        if tok[0] != "ident" or tok[1] in KEYWORDS:
            raise self.error("expected a variable name", tok)
        if tok[1] in self.sig.constants or tok[1] in self.arities:
            raise self.error(f"{tok[1]!r} is a signature symbol, not a variable", tok)
        return tok[1]

    def primary(self):
        kind, val, pos = self.peek()
        if self.at("("):
            self.take()
            f = self.iff()
            self.expect(")")
            return f
        if kind == "ident" and val == "true":
            self.take()
            return TRUE
        if kind == "ident" and val == "false":
            self.take()
            return FALSE
        if kind == "ident" and self.toks[self.i + 1][1] == "(":
            self.take()
            if val not in self.arities:
                raise UnknownSymbolError(f"unknown relation symbol {val!r} at position {pos}")
            self.take()
            args = []
            if not self.at(")"):
                args.append(self.term())
                while self.at(","):
                    self.take()
                    args.append(self.term())
            self.expect(")")
            if len(args) != self.arities[val]:
                raise ArityError(
                    f"{val} expects {self.arities[val]} arguments, got {len(args)} at position {pos}"
                )
            return Rel(val, tuple(args))
        left = self.term()
        self.expect("=")
        return Equal(left, self.term())

    def term(self) -> Term:
        kind, val, pos = self.take()
        if kind != "ident" or val in KEYWORDS:
            raise FormulaSyntaxError(f"expected a term, found {val or 'end of input'!r}", pos, self.text)
        if val in self.sig.constants:
            return Const(val)
        if val in self.arities:
            raise FormulaSyntaxError(f"relation symbol {val!r} used as a term", pos, self.text)
        return Var(val)


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``text`` over ``sig``; identifiers that are not constants are variables."""
    return _Parser(text, sig or EMPTY_SIGNATURE).parse()


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _prec(f) -> int:
    if isinstance(f, QUANTIFIERS):
        return 0
    if isinstance(f, BINARY):
        return _PREC[type(f)]
    if isinstance(f, Not):
        return 5
    return 6


def _wrap(f, ok: bool) -> str:
    s = render_formula(f)
    return s if ok else f"({s})"


def render_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Equal):
        return f"{f.left} = {f.right}"
    if isinstance(f, Rel):
        return f"{f.name}({','.join(str(a) for a in f.args)})"
    if isinstance(f, Not):
        return "!" + _wrap(f.body, isinstance(f.body, (Rel, Top, Bottom, Not)))
    if isinstance(f, BINARY):
        p = _PREC[type(f)]
        lp, rp = _prec(f.left), _prec(f.right)
        if isinstance(f, Implies):
            left_ok, right_ok = lp > p, rp >= p
        else:
            left_ok, right_ok = lp >= p, rp > p
        return f"{_wrap(f.left, left_ok)} {_OPS[type(f)]} {_wrap(f.right, right_ok)}"
    if isinstance(f, ForAll):
        return f"forall {f.var}. {render_formula(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {render_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# signature files


def parse_signature(text: str, name: str = "") -> Signature:
    """Read ``relation NAME/ARITY`` and ``constant NAME`` lines.

    Blank lines and ``#`` comments are ignored; an optional
    ``signature NAME`` line names the signature.
    """
    rels: dict[str, int] = {}
    consts: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormulaError(f"line {lineno}: expected two fields, got {line!r}")
        kw, arg = parts
        if kw == "signature":
            name = arg
        elif kw == "constant":
            consts.add(arg)
        elif kw == "relation":
            rel, sep, ar = arg.partition("/")
            if not sep or not ar.isdigit():
                raise FormulaError(f"line {lineno}: expected NAME/ARITY, got {arg!r}")
            if rel in rels:
                raise FormulaError(f"line {lineno}: duplicate relation {rel!r}")
            rels[rel] = int(ar)
        else:
            raise FormulaError(f"line {lineno}: unknown keyword {kw!r}")
    return Signature(name, rels, consts)


def render_signature(sig: Signature) -> str:
    lines = [f"signature {sig.name}"] if sig.name else []
    lines += [f"relation {r}/{a}" for r, a in sig.relations]
    lines += [f"constant {c}" for c in sorted(sig.constants)]
    return "\n".join(lines)


# --------------------------------------------------------------------------
# theories


@dataclass(frozen=True)
class SchemaTheory:
    """Finitely many plain axioms plus schemas ``n -> sentence``."""

    name: str
    signature: Signature
    axioms: tuple = ()
    schemas: tuple = ()
    schema_labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        object.__setattr__(self, "schemas", tuple(self.schemas))
        for ax in self.axioms:
            self._check(ax)

    def _check(self, sentence: Formula) -> None:
        check_formula(sentence, self.signature)
        if not is_sentence(sentence):
            raise FormulaError(
                f"{self.name}: axiom {render_formula(sentence)!r} has free variables "
                f"{sorted(free_vars(sentence))}"
            )

    def instances(self, bound: int) -> list[Formula]:
        """Plain axioms, then every schema instance for parameters ``0..bound``."""
        out = list(self.axioms)
        for gen in self.schemas:
            for n in range(bound + 1):
                s = gen(n)
                self._check(s)
                out.append(s)
        return out

    def iter_instances(self, bound: int) -> Iterator[Formula]:
        yield from self.instances(bound)

    @classmethod
    def from_templates(cls, name: str, signature: Signature,
                       axioms: Sequence[str] = (), schemas: Sequence[str] = ()) -> "SchemaTheory":
        """Build a theory from formula strings; ``{n}`` in a schema is the parameter."""
        axs = tuple(parse_formula(a, signature) for a in axioms)
        gens = tuple(_template_schema(t, signature) for t in schemas)
        return cls(name, signature, axs, gens, tuple(schemas))


def _template_schema(template: str, sig: Signature) -> Callable[[int], Formula]:
    def gen(n: int) -> Formula:
        return parse_formula(template.replace("{n}", str(n)), sig)

    gen.__name__ = f"schema[{template}]"
    return gen


# theory files


def parse_theory(text: str, signatures: Mapping[str, Signature] | None = None) -> SchemaTheory:
    """Read a theory file.

    Lines are ``theory NAME``, an optional ``signature NAME`` naming a known
    signature, the ``relation``/``constant`` lines of a signature file,
    ``axiom FORMULA`` and ``schema TEMPLATE`` where ``{n}`` is the parameter.
    """
    name, sig_lines, axioms, schemas, base = "theory", [], [], [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, _, rest = line.partition(" ")
        rest = rest.strip()
        if kw == "theory":
            name = rest
        elif kw == "signature" and signatures and rest in signatures:
            base = signatures[rest]
        elif kw in ("signature", "relation", "constant"):
            sig_lines.append(line)
        elif kw == "axiom":
            axioms.append(rest)
        elif kw == "schema":
            if "{n}" not in rest:
                raise FormulaError(f"line {lineno}: schema without {{n}}: {rest!r}")
            schemas.append(rest)
        else:
            raise FormulaError(f"line {lineno}: unknown keyword {kw!r}")
    sig = base if base is not None else parse_signature("\n".join(sig_lines), name)
    return SchemaTheory.from_templates(name, sig, axioms, schemas)


def render_theory(th: SchemaTheory) -> str:
    if len(th.schema_labels) != len(th.schemas):
        raise FormulaError(f"{th.name}: schemas without templates cannot be written out")
    lines = [f"theory {th.name}", render_signature(th.signature)]
    lines += [f"axiom {render_formula(a)}" for a in th.axioms]
    lines += [f"schema {t}" for t in th.schema_labels]
    return "\n".join(ln for ln in lines if ln) + "\n"


def load_theory(path: str, signatures: Mapping[str, Signature] | None = None) -> SchemaTheory:
    with open(path) as fh:
        return parse_theory(fh.read(), signatures)
