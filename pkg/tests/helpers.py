"""Oracles and hypothesis strategies shared by the test modules."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from biprism.logic import (
    And, Bottom, Const, Equal, Exists, ForAll, Iff, Implies, Not, Or, Rel, Signature, Top, Var,
)
from biprism.structures import FiniteStructure


def tarski(A: FiniteStructure, f, env: dict) -> bool:
    """Textbook recursive satisfaction, independent of the table evaluator."""

    def term(t):
        return env[t.name] if isinstance(t, Var) else A.const(t.name)

    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Equal):
        return term(f.left) == term(f.right)
    if isinstance(f, Rel):
        return tuple(term(a) for a in f.args) in A.rel(f.name)
    if isinstance(f, Not):
        return not tarski(A, f.body, env)
    if isinstance(f, And):
        return tarski(A, f.left, env) and tarski(A, f.right, env)
    if isinstance(f, Or):
        return tarski(A, f.left, env) or tarski(A, f.right, env)
    if isinstance(f, Implies):
        return (not tarski(A, f.left, env)) or tarski(A, f.right, env)
    if isinstance(f, Iff):
        return tarski(A, f.left, env) == tarski(A, f.right, env)
    if isinstance(f, ForAll):
        return all(tarski(A, f.body, {**env, f.var: a}) for a in A.domain)
    if isinstance(f, Exists):
        return any(tarski(A, f.body, {**env, f.var: a}) for a in A.domain)
    raise TypeError(f)


def assignments(vs, n):
    for vals in itertools.product(range(n), repeat=len(vs)):
        yield dict(zip(vs, vals))


L_T = Signature("L_T")
L_S = Signature("L_S", constants={"c"})
L_RC = Signature("L_RC", {"R": 2, "P": 1}, {"c"})


def terms(sig: Signature, names=("x", "y", "z")):
    opts = [st.builds(Var, st.sampled_from(names))]
    if sig.constants:
        opts.append(st.builds(Const, st.sampled_from(sorted(sig.constants))))
    return st.one_of(*opts)


def formulas(sig: Signature, names=("x", "y", "z"), max_leaves: int = 8):
    term = terms(sig, names)
    atoms = [st.builds(Equal, term, term), st.just(Top()), st.just(Bottom())]
    for r, k in sig.relations:
        atoms.append(st.builds(lambda args, r=r: Rel(r, tuple(args)),
                               st.lists(term, min_size=k, max_size=k)))
    leaf = st.one_of(*atoms)

    def grow(children):
        var = st.sampled_from(names)
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
            st.builds(ForAll, var, children),
            st.builds(Exists, var, children),
        )

    return st.recursive(leaf, grow, max_leaves=max_leaves)


@st.composite
def structures(draw, sig: Signature, min_size: int = 1, max_size: int = 3):
    n = draw(st.integers(min_size, max_size))
    rels = {}
    for r, k in sig.relations:
        cells = list(itertools.product(range(n), repeat=k))
        rels[r] = {c for c in cells if draw(st.booleans())}
    consts = {c: draw(st.integers(0, n - 1)) for c in sorted(sig.constants)}
    return FiniteStructure(sig, n, rels, consts)
