"""Bounded tableau proving and finite countermodel search.

The tableau works on negation normal form over ground terms (signature
constants plus parameters ``$1, $2, ..``).  Equality is handled when a branch
is tested for closure: positive equations are merged with union-find and a
branch closes on ``false``, on ``!(a = b)`` with ``a ~ b``, or on ``R(a..)``
and ``!R(b..)`` with congruent arguments.

Rule choice never depends on the remaining budget.  A run that would need
more budget gives up instead of trying something else, so raising the
bounds can never lose a proof found under smaller bounds.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

from .interpretations import (
    SchemeError, TranslationScheme, classify, translate_formula,
)
from .logic import (
    And, Bottom, Const, Equal, Exists, ForAll, Formula, FormulaError, Iff, Implies, Not, Or, Rel,
    SchemaTheory, Signature, Top, FALSE, TRUE, check_formula, constants_of, free_vars,
    relations_of, render_formula, substitute,
)
from .report import Report
from .structures import (
    FiniteStructure, all_structures, count_structures, evaluate, satisfaction, structure_to_dict,
)

log = logging.getLogger(__name__)

__all__ = [
    "ProverBounds", "Verdict", "PROVED", "REFUTED", "UNKNOWN", "ProofTrace", "TraceNode",
    "ReplayError", "tableau_prove", "replay", "find_countermodel", "nnf",
    "DefEqEntry", "DefEqReport", "NotDirectError", "check_direct_defeq", "signature_of",
]

PROVED = "proved"
REFUTED = "refuted"
UNKNOWN = "unknown"

MAX_STEPS = 50_000
MAX_STRUCTURES_PER_SIZE = 200_000


@dataclass(frozen=True)
class ProverBounds:
    tableau_depth: int = 32
    instantiation_budget: int = 400
    countermodel_max_size: int = 4

    def __post_init__(self):
        for name in ("tableau_depth", "instantiation_budget", "countermodel_max_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


# --------------------------------------------------------------------------
# traces


@dataclass
class TraceNode:
    """Linear steps, then either a closure or a split into children."""

    steps: list = field(default_factory=list)
    close: bool = False
    split: int | None = None
    children: list = field(default_factory=list)


@dataclass
class ProofTrace:
    root: TraceNode

    def to_text(self) -> str:
        lines: list[str] = []
        _emit(self.root, 0, lines)
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "ProofTrace":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        node, pos = _read(lines, 0, 0)
        if pos != len(lines):
            raise ReplayError(f"trailing trace lines from line {pos + 1}")
        return cls(node)

    def size(self) -> int:
        def count(n):
            return len(n.steps) + 1 + sum(count(c) for c in n.children)
        return count(self.root)


def _emit(node: TraceNode, indent: int, lines: list) -> None:
    pad = " " * indent
    for step in node.steps:
        lines.append(pad + " ".join(str(s) for s in step))
    if node.close:
        lines.append(pad + "close")
    elif node.split is not None:
        lines.append(f"{pad}beta {node.split} {len(node.children)}")
        for k, child in enumerate(node.children, 1):
            lines.append(f"{pad}  branch {k}")
            _emit(child, indent + 4, lines)


def _read(lines: list, pos: int, indent: int) -> tuple[TraceNode, int]:
    node = TraceNode()
    while pos < len(lines):
        raw = lines[pos]
        here = len(raw) - len(raw.lstrip(" "))
        if here != indent:
            raise ReplayError(f"line {pos + 1}: bad indentation")
        parts = raw.split()
        pos += 1
        if parts[0] == "close":
            node.close = True
            return node, pos
        if parts[0] == "beta":
            node.split = int(parts[1])
            for k in range(1, int(parts[2]) + 1):
                if pos >= len(lines) or lines[pos].split() != ["branch", str(k)]:
                    raise ReplayError(f"line {pos + 1}: expected 'branch {k}'")
                child, pos = _read(lines, pos + 1, indent + 4)
                node.children.append(child)
            return node, pos
        if parts[0] == "alpha" and len(parts) == 2:
            node.steps.append(("alpha", int(parts[1])))
        elif parts[0] in ("delta", "gamma") and len(parts) == 3:
            node.steps.append((parts[0], int(parts[1]), parts[2]))
        else:
            raise ReplayError(f"line {pos}: cannot read {raw.strip()!r}")
    raise ReplayError("trace ends before the branch is closed")


class ReplayError(ValueError):
    pass


# --------------------------------------------------------------------------
# normal forms


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form over ``& | forall exists`` and literals."""
    if isinstance(f, Top):
        return TRUE if positive else FALSE
    if isinstance(f, Bottom):
        return FALSE if positive else TRUE
    if isinstance(f, (Equal, Rel)):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return nnf(f.body, not positive)
    if isinstance(f, And):
        op = And if positive else Or
        return op(nnf(f.left, positive), nnf(f.right, positive))
    if isinstance(f, Or):
        op = Or if positive else And
        return op(nnf(f.left, positive), nnf(f.right, positive))
    if isinstance(f, Implies):
        if positive:
            return Or(nnf(f.left, False), nnf(f.right, True))
        return And(nnf(f.left, True), nnf(f.right, False))
    if isinstance(f, Iff):
        l, r = f.left, f.right
        if positive:
            return And(Or(nnf(l, False), nnf(r, True)), Or(nnf(l, True), nnf(r, False)))
        return Or(And(nnf(l, True), nnf(r, False)), And(nnf(l, False), nnf(r, True)))
    if isinstance(f, ForAll):
        return (ForAll if positive else Exists)(f.var, nnf(f.body, positive))
    if isinstance(f, Exists):
        return (Exists if positive else ForAll)(f.var, nnf(f.body, positive))
    raise TypeError(f"not a formula: {f!r}")


def _flatten(f: Formula, op) -> list:
    if isinstance(f, op):
        return _flatten(f.left, op) + _flatten(f.right, op)
    return [f]


def _closure(f: Formula) -> Formula:
    for v in sorted(free_vars(f), reverse=True):
        f = ForAll(v, f)
    return f


def initial_branch(axioms: Sequence[Formula], goal: Formula) -> list:
    """Premises in NNF followed by the negated universal closure of the goal."""
    return [nnf(a) for a in axioms] + [nnf(_closure(goal), False)]


def _is_literal(f) -> bool:
    return isinstance(f, (Equal, Rel, Top, Bottom)) or (
        isinstance(f, Not) and isinstance(f.body, (Equal, Rel))
    )


# --------------------------------------------------------------------------
# search


class _GiveUp(Exception):
    pass


class _Lits:
    """Equality classes and literal sets of one branch."""

    def __init__(self, formulas):
        self.parent: dict = {}
        self.bottom = False
        neg_eq, pos_rel, neg_rel = [], [], []
        for f in formulas:
            if isinstance(f, Bottom):
                self.bottom = True
            elif isinstance(f, Equal):
                a, b = self.find(f.left.name), self.find(f.right.name)
                if a != b:
                    self.parent[a] = b
            elif isinstance(f, Rel):
                pos_rel.append(f)
            elif isinstance(f, Not) and isinstance(f.body, Equal):
                neg_eq.append(f.body)
            elif isinstance(f, Not) and isinstance(f.body, Rel):
                neg_rel.append(f.body)
        self.neg_eq = {frozenset((self.find(e.left.name), self.find(e.right.name))) for e in neg_eq}
        self.pos_rel = {self.key(r) for r in pos_rel}
        self.neg_rel = {self.key(r) for r in neg_rel}
        self.has_rels = bool(pos_rel or neg_rel)

    def find(self, a: str) -> str:
        parent = self.parent
        while parent.get(a, a) != a:
            parent[a] = parent.get(parent[a], parent[a])
            a = parent[a]
        return a

    def key(self, r: Rel) -> tuple:
        return (r.name,) + tuple(self.find(a.name) for a in r.args)

    @property
    def closed(self) -> bool:
        return (self.bottom or any(len(c) == 1 for c in self.neg_eq)
                or bool(self.pos_rel & self.neg_rel))

    def closes(self, lit: Formula, formulas=None) -> bool:
        """Would adding the literal ``lit`` close the branch?"""
        if isinstance(lit, Bottom):
            return True
        if isinstance(lit, Rel):
            return self.key(lit) in self.neg_rel
        if isinstance(lit, Not) and isinstance(lit.body, Rel):
            return self.key(lit.body) in self.pos_rel
        if isinstance(lit, Not) and isinstance(lit.body, Equal):
            return self.find(lit.body.left.name) == self.find(lit.body.right.name)
        if isinstance(lit, Equal):
            a, b = self.find(lit.left.name), self.find(lit.right.name)
            if a == b:
                return False
            if frozenset((a, b)) in self.neg_eq:
                return True
            if self.has_rels and formulas is not None:
                return _Lits(list(formulas) + [lit]).closed
        return False


class _Branch:
    def __init__(self, formulas, terms, done, gamma_done, depth, insts):
        self.formulas = formulas
        self.terms = terms
        self.done = done
        self.gamma_done = gamma_done
        self.depth = depth
        self.insts = insts
        self.plain = 0  # plain gamma steps since the last split

    def copy(self) -> "_Branch":
        return _Branch(list(self.formulas), list(self.terms), set(self.done),
                       set(self.gamma_done), self.depth, self.insts)

    def add(self, f: Formula) -> None:
        self.formulas.append(f)
        for c in sorted(constants_of(f)):
            if c not in self.terms:
                self.terms.append(c)


MAX_MATCH_NODES = 20_000
# after this many plain gamma steps a pending split is preferred (fairness)
GAMMA_ROUND = 16


class _Search:
    def __init__(self, bounds: ProverBounds):
        self.bounds = bounds
        self.steps = 0
        self.fresh = 0

    def new_param(self, branch: _Branch) -> str:
        while True:
            self.fresh += 1
            name = f"${self.fresh}"
            if name not in branch.terms:
                return name

    def run(self, branch: _Branch) -> TraceNode | None:
        """Close ``branch``; ``None`` if it saturates open, ``_GiveUp`` past the bounds."""
        node = TraceNode()
        while True:
            self.steps += 1
            if self.steps > MAX_STEPS:
                raise _GiveUp("step limit")
            lits = _Lits(branch.formulas)
            if lits.closed:
                node.close = True
                return node
            steps = self.linear_steps(branch, lits)
            if steps:
                node.steps.extend(steps)
                continue
            split = self.choose_split(branch, lits, cheap_only=False)
            if split is None:
                return None
            idx, parts, open_count = split
            if open_count > 1:
                if branch.depth >= self.bounds.tableau_depth:
                    raise _GiveUp("tableau depth")
                branch.depth += 1
            branch.done.add(idx)
            node.split = idx
            for part in parts:
                child = branch.copy()
                child.add(part)
                sub = self.run(child)
                if sub is None:
                    return None
                node.children.append(sub)
            return node

    def linear_steps(self, branch: _Branch, lits: _Lits) -> list:
        forms = branch.formulas
        for i, f in enumerate(forms):
            if i not in branch.done and isinstance(f, And):
                branch.done.add(i)
                for part in _flatten(f, And):
                    branch.add(part)
                return [("alpha", i)]
        for i, f in enumerate(forms):
            if i not in branch.done and isinstance(f, Exists):
                if branch.depth >= self.bounds.tableau_depth:
                    raise _GiveUp("tableau depth")
                branch.depth += 1
                branch.done.add(i)
                p = self.new_param(branch)
                branch.add(substitute(f.body, {f.var: Const(p)}))
                return [("delta", i, p)]
        if self.choose_split(branch, lits, cheap_only=True) is not None:
            return []
        gammas = [i for i, f in enumerate(forms) if isinstance(f, ForAll)]
        for i in gammas:
            found = self.closing_instance(branch, i, lits)
            if found:
                return self.instantiate(branch, i, found)
        if branch.plain >= GAMMA_ROUND and self.choose_split(branch, lits, cheap_only=False):
            return []
        for i in reversed(gammas):
            terms = branch.terms[::-1] or [self.new_param(branch)]
            for t in terms:
                if (i, t) not in branch.gamma_done:
                    branch.plain += 1
                    return self.instantiate(branch, i, [t])
        return []

    def instantiate(self, branch: _Branch, i: int, terms: list) -> list:
        if branch.insts + len(terms) > self.bounds.instantiation_budget:
            raise _GiveUp("instantiation budget")
        steps = []
        for t in terms:
            f = branch.formulas[i]
            branch.insts += 1
            branch.gamma_done.add((i, t))
            branch.add(substitute(f.body, {f.var: Const(t)}))
            steps.append(("gamma", i, t))
            i = len(branch.formulas) - 1
        return steps

    def closing_instance(self, branch: _Branch, i: int, lits: _Lits):
        """Terms for the universal prefix of formula ``i`` that close its literal matrix."""
        f = branch.formulas[i]
        names = []
        while isinstance(f, ForAll):
            names.append(f.var)
            f = f.body
        parts = _flatten(f, Or)
        if len(set(names)) != len(names) or not all(_is_literal(p) for p in parts):
            return None
        terms = branch.terms[::-1]
        if not terms:
            return None
        pending = [[p for p in parts if max((names.index(v) for v in free_vars(p)), default=-1) == k]
                   for k in range(len(names))]
        if any(not lits.closes(p, branch.formulas) for p in parts if not free_vars(p)):
            return None
        chosen: list = []
        visits = 0

        def extend(k: int) -> bool:
            nonlocal visits
            if k == len(names):
                return True
            for t in terms:
                visits += 1
                if visits > MAX_MATCH_NODES:
                    return False
                chosen.append(t)
                sub = {v: Const(s) for v, s in zip(names, chosen)}
                if all(lits.closes(substitute(p, sub), branch.formulas) for p in pending[k]):
                    if extend(k + 1):
                        return True
                chosen.pop()
            return False

        return list(chosen) if extend(0) else None

    @staticmethod
    def child_closes(p: Formula, branch: _Branch, lits: _Lits) -> bool:
        if _is_literal(p):
            return lits.closes(p, branch.formulas)
        if not isinstance(p, And):
            return False
        conj = [q for q in _flatten(p, And) if _is_literal(q)]
        if any(lits.closes(q, branch.formulas) for q in conj):
            return True
        return len(conj) > 1 and _Lits(list(branch.formulas) + conj).closed

    def choose_split(self, branch: _Branch, lits: _Lits, cheap_only: bool):
        best = None
        for i, f in enumerate(branch.formulas):
            if i in branch.done or not isinstance(f, Or):
                continue
            parts = _flatten(f, Or)
            open_count = sum(1 for p in parts if not self.child_closes(p, branch, lits))
            if cheap_only and open_count > 1:
                continue
            if best is None or open_count < best[2]:
                best = (i, parts, open_count)
                if open_count == 0:
                    break
        return best


# --------------------------------------------------------------------------
# replay


class _ReplayBranch:
    """Independent re-check of tableau steps; closure by fixpoint, not union-find."""

    def __init__(self, formulas):
        self.formulas = list(formulas)

    def names(self) -> set:
        out = set()
        for f in self.formulas:
            out |= constants_of(f)
        return out

    def closed(self) -> bool:
        forms = self.formulas
        if FALSE in forms:
            return True
        terms = self.names()
        eq = {(a, a) for a in terms}
        for f in forms:
            if isinstance(f, Equal):
                a, b = f.left.name, f.right.name
                eq |= {(a, b), (b, a)}
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(eq), repeat=2):
                if b == c and (a, d) not in eq:
                    eq.add((a, d))
                    changed = True
        for f in forms:
            if isinstance(f, Not) and isinstance(f.body, Equal):
                if (f.body.left.name, f.body.right.name) in eq:
                    return True
            if isinstance(f, Not) and isinstance(f.body, Rel):
                for g in forms:
                    if isinstance(g, Rel) and g.name == f.body.name and all(
                        (a.name, b.name) in eq for a, b in zip(g.args, f.body.args)
                    ):
                        return True
        return False


def _replay_node(node: TraceNode, branch: _ReplayBranch) -> None:
    forms = branch.formulas
    for step in node.steps:
        kind, i = step[0], step[1]
        if not 0 <= i < len(forms):
            raise ReplayError(f"{kind}: no formula {i}")
        f = forms[i]
        if kind == "alpha":
            if not isinstance(f, And):
                raise ReplayError(f"alpha on non-conjunction {render_formula(f)}")
            forms.extend(_flatten(f, And))
        elif kind == "delta":
            if not isinstance(f, Exists):
                raise ReplayError(f"delta on non-existential {render_formula(f)}")
            if step[2] in branch.names():
                raise ReplayError(f"delta parameter {step[2]} is not fresh")
            forms.append(substitute(f.body, {f.var: Const(step[2])}))
        elif kind == "gamma":
            if not isinstance(f, ForAll):
                raise ReplayError(f"gamma on non-universal {render_formula(f)}")
            forms.append(substitute(f.body, {f.var: Const(step[2])}))
        else:
            raise ReplayError(f"unknown step {kind}")
    if node.close:
        if not branch.closed():
            raise ReplayError("branch claimed closed is open")
        return
    if node.split is None:
        raise ReplayError("branch neither closed nor split")
    f = forms[node.split] if 0 <= node.split < len(forms) else None
    if not isinstance(f, Or):
        raise ReplayError(f"beta on non-disjunction at {node.split}")
    parts = _flatten(f, Or)
    if len(parts) != len(node.children):
        raise ReplayError(f"beta with {len(node.children)} branches for {len(parts)} disjuncts")
    for part, child in zip(parts, node.children):
        _replay_node(child, _ReplayBranch(forms + [part]))


def replay(trace: ProofTrace | str, axioms: Sequence[Formula], goal: Formula) -> bool:
    """Re-check a closed tableau for ``axioms |- goal``; raises ``ReplayError`` on a bad step."""
    if isinstance(trace, str):
        trace = ProofTrace.from_text(trace)
    _replay_node(trace.root, _ReplayBranch(initial_branch(axioms, goal)))
    return True


# --------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    status: str
    trace: ProofTrace | None = None
    countermodel: FiniteStructure | None = None
    assignment: dict | None = None
    detail: str = ""

    @property
    def proved(self) -> bool:
        return self.status == PROVED

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED

    def witness(self):
        if self.status == PROVED:
            return {"trace": self.trace.to_text()}
        if self.status == REFUTED:
            return {"countermodel": structure_to_dict(self.countermodel), "assignment": self.assignment}
        return {"exhausted": self.detail}

    def __str__(self):
        return f"{self.status.upper()}" + (f" ({self.detail})" if self.detail else "")


def signature_of(formulas: Sequence[Formula], name: str = "") -> Signature:
    rels: dict[str, int] = {}
    consts: set[str] = set()
    for f in formulas:
        for r, k in relations_of(f).items():
            if rels.setdefault(r, k) != k:
                raise FormulaError(f"relation {r} used with arities {rels[r]} and {k}")
        consts |= constants_of(f)
    return Signature(name, rels, consts)


def _check_sig(formulas, sig: Signature | None) -> Signature:
    if sig is None:
        return signature_of(formulas)
    for f in formulas:
        try:
            check_formula(f, sig)
        except FormulaError as exc:
            raise SchemeError(f"signature mismatch: {exc}") from None
    return sig


def tableau_prove(axioms: Sequence[Formula], goal: Formula, b: ProverBounds | None = None,
                  sig: Signature | None = None) -> Verdict:
    """Proved, Refuted (finite countermodel) or Unknown within the bounds."""
    b = b or ProverBounds()
    axioms = list(axioms)
    sig = _check_sig(axioms + [goal], sig)
    start = initial_branch(axioms, goal)
    branch = _Branch([], [], set(), set(), 0, 0)
    for f in start:
        branch.add(f)
    search = _Search(b)
    reason = "open branch saturated"
    try:
        node = search.run(branch)
    except _GiveUp as exc:
        node, reason = None, f"gave up: {exc}"
    if node is not None:
        trace = ProofTrace(node)
        replay(trace, axioms, goal)
        return Verdict(PROVED, trace=trace, detail=f"{trace.size()} trace lines")
    found = find_countermodel(axioms, goal, b.countermodel_max_size, sig)
    if found is not None:
        A, a = found
        return Verdict(REFUTED, countermodel=A, assignment=a, detail=f"countermodel of size {A.size}")
    return Verdict(UNKNOWN, detail=f"{reason}; no countermodel up to size {b.countermodel_max_size}")


def find_countermodel(axioms: Sequence[Formula], goal: Formula, max_n: int,
                      sig: Signature | None = None):
    """Smallest structure (size ``1..max_n``) satisfying the axioms and falsifying ``goal``.

    Returns ``(structure, assignment)`` or ``None``.  The result is re-checked
    with ``evaluate`` before it is returned.
    """
    axioms = list(axioms)
    sig = _check_sig(axioms + [goal], sig)
    vs = tuple(sorted(free_vars(goal)))
    for n in range(1, max_n + 1):
        count = count_structures(sig, n)
        if count > MAX_STRUCTURES_PER_SIZE:
            log.info("skipping size %d: %d structures", n, count)
            continue
        for A in all_structures(sig, n):
            if not all(evaluate(A, ax) for ax in axioms):
                continue
            table = satisfaction(A, goal, vs)
            if table.all():
                continue
            idx = next(zip(*(ax.tolist() for ax in (~table).nonzero()))) if vs else ()
            a = dict(zip(vs, (int(i) for i in idx)))
            if evaluate(A, goal, a) or not all(evaluate(A, ax) for ax in axioms):
                raise AssertionError("countermodel failed re-evaluation")
            return A, a
    return None


# --------------------------------------------------------------------------
# definitional equivalence


class NotDirectError(ValueError):
    pass


@dataclass
class DefEqEntry:
    clause: int
    side: int
    formula: Formula
    goal: Formula
    verdict: Verdict


@dataclass
class DefEqReport:
    entries: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def status(self) -> str:
        kinds = {e.verdict.status for e in self.entries}
        if REFUTED in kinds:
            return "fail"
        if kinds <= {PROVED}:
            return "pass"
        return "unknown"

    def to_report(self) -> Report:
        report = Report("direct definitional equivalence")
        for e in self.entries:
            ok = {PROVED: True, REFUTED: False}.get(e.verdict.status)
            report.add(
                f"clause {e.clause}, T{e.side}: {render_formula(e.formula)}", ok,
                f"goal {render_formula(e.goal)}: {e.verdict}", witness=e.verdict.witness(),
            )
        return report


def _over(f: Formula, sig: Signature) -> bool:
    try:
        check_formula(f, sig)
        return True
    except FormulaError:
        return False


def check_direct_defeq(t0: TranslationScheme, t1: TranslationScheme,
                       T0: SchemaTheory, T1: SchemaTheory,
                       probes: Sequence[Formula], pool: Sequence[Formula],
                       b: ProverBounds | None = None, schema_bound: int = 5) -> DefEqReport:
    """Bounded check of the syntactic sufficient conditions for definitional equivalence.

    ``t0`` translates ``T1``'s language into ``T0``'s and ``t1`` the other way.
    Clause 1: every probe provable in ``T_i`` must have a provable image in the
    other theory.  Clause 2: ``T_i`` proves ``phi <-> round_trip(phi)`` for
    every pool formula ``phi``.  Only violations or bounded non-violation are
    ever reported.
    """
    b = b or ProverBounds()
    L0, L1 = T0.signature, T1.signature
    if not (t0.source.same_symbols(L1) and t0.target.same_symbols(L0)):
        raise SchemeError(f"signature mismatch: {t0.name} must translate {L1} into {L0}")
    if not (t1.source.same_symbols(L0) and t1.target.same_symbols(L1)):
        raise SchemeError(f"signature mismatch: {t1.name} must translate {L0} into {L1}")
    for sch in (t0, t1):
        if not classify(sch).direct:
            raise NotDirectError(f"{sch.name} is not a direct interpretation")
    theories = (T0, T1)
    axioms = (T0.instances(schema_bound), T1.instances(schema_bound))
    # into[i] translates L_i into the other language
    into = (t1, t0)
    report = DefEqReport()
    for i in (0, 1):
        j = 1 - i
        sig = theories[i].signature
        for phi in probes:
            if not _over(phi, sig) or free_vars(phi):
                continue
            premise = tableau_prove(axioms[i], phi, b, sig)
            if not premise.proved:
                report.skipped.append((1, i, phi, premise))
                continue
            image = translate_formula(into[i], phi)
            verdict = tableau_prove(axioms[j], image, b, theories[j].signature)
            report.entries.append(DefEqEntry(1, i, phi, image, verdict))
        for phi in pool:
            if not _over(phi, sig):
                continue
            back = translate_formula(into[j], translate_formula(into[i], phi))
            goal = Iff(phi, back)
            verdict = tableau_prove(axioms[i], goal, b, sig)
            report.entries.append(DefEqEntry(2, i, phi, _closure(goal), verdict))
    return report
