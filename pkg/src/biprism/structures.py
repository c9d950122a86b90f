"""Finite structures, Tarski evaluation, automorphisms and orbit-based definability.

Evaluation works on whole satisfaction tables: a formula with free variables
``v1 .. vk`` is turned into a boolean array of shape ``(n,) * k`` whose entry
at ``(a1, .., ak)`` is the truth value under ``vi -> ai``.  Connectives are
broadcast operations and quantifiers are reductions along one axis.

The definability helpers are only sound on finite structures, where a set is
0-definable exactly when it is invariant under every automorphism.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .logic import (
    And, Bottom, Equal, Exists, ForAll, Formula, Iff, Implies, Not, Or, Rel,
    Signature, Top, Var, free_vars, FormulaError,
)

__all__ = [
    "FiniteStructure", "EvaluationError", "CapExceeded", "StructureError",
    "evaluate", "satisfaction", "definable_set", "automorphisms", "orbits",
    "definable_singletons", "exists_connected_asymmetric_invariant",
    "empty_structure", "pointed_structure", "linear_order", "all_structures",
    "structure_from_dict", "structure_to_dict", "load_structure", "dump_structure",
    "count_structures", "automorphism_cap", "DEFAULT_AUTOMORPHISM_CAP", "MAX_ORBIT_UNIONS",
]

DEFAULT_AUTOMORPHISM_CAP = 8
MAX_ORBIT_UNIONS = 2 ** 20


class StructureError(ValueError):
    pass


class EvaluationError(ValueError):
    pass


class CapExceeded(ValueError):
    pass


def automorphism_cap() -> int:
    """Size bound for brute-force automorphism search (``BIPRISM_CAP`` overrides)."""
    raw = os.environ.get("BIPRISM_CAP")
    if raw is None:
        return DEFAULT_AUTOMORPHISM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise CapExceeded(f"BIPRISM_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise CapExceeded("BIPRISM_CAP must be positive")
    return cap


@dataclass(frozen=True)
class FiniteStructure:
    """A structure with domain ``{0, .., size-1}``.

    ``relations`` maps each relation symbol to a frozenset of tuples and
    ``constants`` maps each constant symbol to an element.  Both are stored as
    sorted tuples of pairs to keep the structure hashable.
    """

    sig: Signature
    size: int
    relations: tuple = ()
    constants: tuple = ()

    def __post_init__(self):
        rels = dict(self.relations)
        consts = dict(self.constants)
        arities = self.sig.arities
        if self.size < 0:
            raise StructureError("size must be non-negative")
        for r in rels:
            if r not in arities:
                raise StructureError(f"relation {r!r} not in signature {self.sig}")
        for r, k in arities.items():
            tuples = frozenset(tuple(int(a) for a in t) for t in rels.get(r, ()))
            for t in tuples:
                if len(t) != k:
                    raise StructureError(f"tuple {t} has wrong arity for {r}/{k}")
                if any(not 0 <= a < self.size for a in t):
                    raise StructureError(f"tuple {t} of {r} leaves the domain")
            rels[r] = tuples
        for c in consts:
            if c not in self.sig.constants:
                raise StructureError(f"constant {c!r} not in signature {self.sig}")
        for c in self.sig.constants:
            if c not in consts:
                raise StructureError(f"constant {c!r} is not interpreted")
            if not 0 <= int(consts[c]) < self.size:
                raise StructureError(f"constant {c!r} = {consts[c]} leaves the domain")
            consts[c] = int(consts[c])
        object.__setattr__(self, "relations", tuple(sorted(rels.items())))
        object.__setattr__(self, "constants", tuple(sorted(consts.items())))

    @property
    def domain(self) -> range:
        return range(self.size)

    def rel(self, name: str) -> frozenset:
        return dict(self.relations)[name]

    def const(self, name: str) -> int:
        return dict(self.constants)[name]

    def permuted(self, perm: Sequence[int]) -> "FiniteStructure":
        """The isomorphic copy along ``a -> perm[a]``."""
        rels = {r: {tuple(perm[a] for a in t) for t in ts} for r, ts in self.relations}
        consts = {c: perm[a] for c, a in self.constants}
        return FiniteStructure(self.sig, self.size, rels, consts)

    def __str__(self):
        parts = [f"size {self.size}"]
        parts += [f"{c}={a}" for c, a in self.constants]
        parts += [f"{r}={sorted(ts)}" for r, ts in self.relations]
        return f"<{self.sig.name or 'structure'}: {', '.join(parts)}>"


def empty_structure(n: int, sig: Signature | None = None) -> FiniteStructure:
    """Size-``n`` structure in the empty language (or ``sig`` with no relations)."""
    return FiniteStructure(sig or Signature("L_T"), n)


def pointed_structure(n: int, point: int, sig: Signature | None = None,
                      const: str = "c") -> FiniteStructure:
    sig = sig or Signature("L_S", constants={const})
    return FiniteStructure(sig, n, constants={const: point})


def linear_order(n: int, rel: str = "R") -> FiniteStructure:
    sig = Signature("L_<", {rel: 2})
    return FiniteStructure(sig, n, {rel: {(a, b) for a in range(n) for b in range(n) if a < b}})


def all_structures(sig: Signature, n: int) -> Iterable[FiniteStructure]:
    """Every structure of size ``n`` over ``sig`` (not up to isomorphism)."""
    rel_items = list(sig.relations)
    consts = sorted(sig.constants)
    rel_spaces = []
    for _, k in rel_items:
        cells = list(itertools.product(range(n), repeat=k))
        rel_spaces.append([
            {cells[i] for i in range(len(cells)) if mask >> i & 1}
            for mask in range(2 ** len(cells))
        ])
    for rel_choice in itertools.product(*rel_spaces):
        rels = {r: ts for (r, _), ts in zip(rel_items, rel_choice)}
        for placement in itertools.product(range(n), repeat=len(consts)):
            yield FiniteStructure(sig, n, rels, dict(zip(consts, placement)))


# --------------------------------------------------------------------------
# evaluation


class _Tables:
    """Satisfaction-table evaluator for one structure."""

    def __init__(self, A: FiniteStructure):
        self.A = A
        self.n = A.size
        self.consts = dict(A.constants)
        self.eye = None
        self.rel_arrays = {}
        for r, k in A.sig.relations:
            arr = np.zeros((self.n,) * k, dtype=bool)
            for t in A.rel(r):
                arr[t] = True
            self.rel_arrays[r] = arr

    def term_axis(self, t):
        if isinstance(t, Var):
            return t.name, None
        if t.name not in self.consts:
            raise EvaluationError(f"constant {t.name!r} is not interpreted in {self.A}")
        return None, self.consts[t.name]

    def run(self, f: Formula) -> tuple[tuple[str, ...], np.ndarray]:
        method = _DISPATCH.get(type(f))
        if method is None:
            method = next((_DISPATCH[k] for k in type(f).__mro__ if k in _DISPATCH), None)
            if method is None:
                raise TypeError(f"not a formula: {f!r}")
        return method(self, f)

    def _top(self, f):
        return (), np.array(True)

    def _bottom(self, f):
        return (), np.array(False)

    def _equal(self, f):
        n = self.n
        (lv, lc), (rv, rc) = self.term_axis(f.left), self.term_axis(f.right)
        if lv is None and rv is None:
            return (), np.array(lc == rc)
        if lv is None or rv is None:
            v, c = (rv, lc) if lv is None else (lv, rc)
            arr = np.zeros(n, dtype=bool)
            arr[c] = True
            return (v,), arr
        if lv == rv:
            return (lv,), np.ones(n, dtype=bool)
        if self.eye is None:
            self.eye = np.eye(n, dtype=bool)
        # the diagonal is symmetric, so only the names need sorting
        return tuple(sorted((lv, rv))), self.eye

    def _rel(self, f):
        if f.name not in self.rel_arrays:
            raise EvaluationError(f"relation {f.name!r} is not interpreted in {self.A}")
        arr = self.rel_arrays[f.name]
        index = []
        names: list[str] = []
        for a in f.args:
            v, c = self.term_axis(a)
            index.append(c if v is None else v)
        # group repeated variables into diagonals, then index constants
        letters = {}
        spec_in = []
        fixed = []
        for pos, item in enumerate(index):
            if isinstance(item, str):
                if item not in letters:
                    letters[item] = chr(97 + len(letters))
                    names.append(item)
                spec_in.append(letters[item])
            else:
                spec_in.append("z")
                fixed.append((pos, item))
        if fixed:
            sl = [slice(None)] * len(index)
            for pos, c in fixed:
                sl[pos] = c
            arr = arr[tuple(sl)]
            spec_in = [s for s in spec_in if s != "z"]
        spec_out = "".join(letters[v] for v in names)
        arr = np.einsum("".join(spec_in) + "->" + spec_out, arr) if spec_in else arr
        return _order(tuple(names), arr.astype(bool))

    def _not(self, f):
        vs, arr = self.run(f.body)
        return vs, ~arr

    def _binary(self, f):
        lv, la = self.run(f.left)
        rv, ra = self.run(f.right)
        if lv == rv:
            vs = lv
        else:
            vs = tuple(sorted(set(lv) | set(rv)))
            la, ra = _align(lv, la, vs), _align(rv, ra, vs)
        kind = type(f)
        if kind is And:
            out = la & ra
        elif kind is Or:
            out = la | ra
        elif kind is Implies:
            out = ~la | ra
        else:
            out = la == ra
        # every variable of vs indexes a full axis of one side, so out has full shape
        return vs, np.asarray(out)

    def _quantifier(self, f):
        vs, arr = self.run(f.body)
        reduce = np.all if type(f) is ForAll else np.any
        if f.var in vs:
            ax = vs.index(f.var)
            return vs[:ax] + vs[ax + 1:], reduce(arr, axis=ax)
        if self.n == 0:
            return vs, np.full(arr.shape, type(f) is ForAll)
        return vs, arr


_DISPATCH = {
    Top: _Tables._top, Bottom: _Tables._bottom, Equal: _Tables._equal, Rel: _Tables._rel,
    Not: _Tables._not, And: _Tables._binary, Or: _Tables._binary, Implies: _Tables._binary,
    Iff: _Tables._binary, ForAll: _Tables._quantifier, Exists: _Tables._quantifier,
}


def _order(vs: tuple[str, ...], arr: np.ndarray):
    """Transpose so that variables come in sorted order."""
    order = sorted(range(len(vs)), key=lambda i: vs[i])
    return tuple(vs[i] for i in order), np.transpose(arr, order)


def _align(src: tuple[str, ...], arr: np.ndarray, dst: tuple[str, ...]) -> np.ndarray:
    """View ``arr`` (axes ``src``, sorted) with singleton axes for ``dst``."""
    shape = [1] * len(dst)
    for i, v in enumerate(src):
        shape[dst.index(v)] = arr.shape[i]
    return arr.reshape(shape) if dst else arr


def satisfaction(A: FiniteStructure, f: Formula, vars: Sequence[str] | None = None) -> np.ndarray:
    """Boolean array over ``vars`` (default: sorted free variables of ``f``)."""
    vs, arr = _Tables(A).run(f)  # the axes of arr are exactly the free variables
    if vars is None:
        vars = vs
    vars = tuple(vars)
    missing = set(vs) - set(vars)
    if missing:
        raise EvaluationError(f"free variables {sorted(missing)} not among {list(vars)}")
    if len(set(vars)) != len(vars):
        raise EvaluationError(f"repeated variable in {list(vars)}")
    sorted_vars = tuple(sorted(vars))
    out = _align(vs, arr, sorted_vars)
    out = np.broadcast_to(out, (A.size,) * len(vars))
    # axes are in sorted-name order; permute back to the caller's order
    return np.transpose(out, [sorted_vars.index(v) for v in vars])


def evaluate(A: FiniteStructure, f: Formula, a: Mapping[str, int] | None = None) -> bool:
    """Tarski truth value of ``f`` in ``A`` under assignment ``a``."""
    a = dict(a or {})
    fv = free_vars(f)
    missing = fv - set(a)
    if missing:
        raise EvaluationError(f"unbound free variables {sorted(missing)}")
    for v in fv:
        if not 0 <= a[v] < A.size:
            raise EvaluationError(f"{v} -> {a[v]} is outside the domain of size {A.size}")
    vs, arr = _Tables(A).run(f)
    return bool(arr[tuple(a[v] for v in vs)])


def definable_set(A: FiniteStructure, f: Formula, vars: Sequence[str]) -> set[tuple[int, ...]]:
    """``{ā : A ⊨ f[vars -> ā]}``."""
    table = satisfaction(A, f, vars)
    return {tuple(int(x) for x in idx) for idx in zip(*np.nonzero(table))} if vars else (
        {()} if bool(table) else set()
    )


# --------------------------------------------------------------------------
# automorphisms and orbits


def _check_cap(A: FiniteStructure, cap: int | None):
    cap = automorphism_cap() if cap is None else cap
    if A.size > cap:
        raise CapExceeded(f"structure of size {A.size} exceeds the automorphism bound {cap}")


def automorphisms(A: FiniteStructure, cap: int | None = None) -> list[tuple[int, ...]]:
    """All permutations of the domain preserving every relation and constant.

    Brute force over ``size!`` candidates; the identity comes first.
    """
    _check_cap(A, cap)
    consts = A.constants
    rels = [ts for _, ts in A.relations]
    out = []
    for p in itertools.permutations(range(A.size)):
        if any(p[a] != a for _, a in consts):
            continue
        if all({tuple(p[x] for x in t) for t in ts} == ts for ts in rels):
            out.append(p)
    return out


def orbits(A: FiniteStructure, arity: int, cap: int | None = None) -> list[frozenset]:
    """Orbits of ``domain ** arity`` under the diagonal automorphism action.

    Orbits are listed in order of their lexicographically least tuple.
    """
    group = automorphisms(A, cap)
    seen = set()
    out = []
    for t in itertools.product(range(A.size), repeat=arity):
        if t in seen:
            continue
        orb = frozenset(tuple(g[x] for x in t) for g in group)
        seen |= orb
        out.append(orb)
    return out


def definable_singletons(A: FiniteStructure, cap: int | None = None) -> set[int]:
    """Elements fixed by every automorphism, i.e. the 0-definable elements."""
    return {next(iter(o))[0] for o in orbits(A, 1, cap) if len(o) == 1}


def _connected_asymmetric(S: frozenset, n: int) -> bool:
    for x in range(n):
        if (x, x) in S:
            return False
        for y in range(x + 1, n):
            if ((x, y) in S) == ((y, x) in S):
                return False
    return True


def exists_connected_asymmetric_invariant(A: FiniteStructure, cap: int | None = None,
                                          max_unions: int = MAX_ORBIT_UNIONS):
    """Some automorphism-invariant binary relation that is connected and asymmetric.

    The structure's own binary relations are tried first, then every union of
    pair-orbits.  Returns ``None`` when no such relation exists.
    """
    for r, k in A.sig.relations:
        if k == 2 and _connected_asymmetric(A.rel(r), A.size):
            return A.rel(r)
    pair_orbits = orbits(A, 2, cap)
    if 2 ** len(pair_orbits) > max_unions:
        raise CapExceeded(
            f"{len(pair_orbits)} pair-orbits give more than {max_unions} candidate unions"
        )
    for mask in range(2 ** len(pair_orbits)):
        S = frozenset().union(*(o for i, o in enumerate(pair_orbits) if mask >> i & 1))
        if _connected_asymmetric(S, A.size):
            return S
    return None


# --------------------------------------------------------------------------
# structure files


def structure_to_dict(A: FiniteStructure) -> dict:
    return {
        "signature": {
            "name": A.sig.name,
            "relations": dict(A.sig.relations),
            "constants": sorted(A.sig.constants),
        },
        "size": A.size,
        "constants": dict(A.constants),
        "relations": {r: [list(t) for t in sorted(ts)] for r, ts in A.relations},
    }


def structure_from_dict(data: Mapping, sig: Signature | None = None) -> FiniteStructure:
    """Build a structure from the file schema (see ``docs/formats.md``).

    Without an explicit ``signature`` entry the signature is inferred: every
    key of ``constants`` is a constant, every key of ``relations`` a relation
    whose arity is read off its first tuple.
    """
    try:
        size = int(data["size"])
    except (KeyError, TypeError, ValueError):
        raise StructureError("structure needs an integer 'size'") from None
    consts = dict(data.get("constants") or {})
    rels = {r: [tuple(t) for t in ts] for r, ts in (data.get("relations") or {}).items()}
    if sig is None and "signature" in data:
        s = data["signature"]
        try:
            sig = Signature(s.get("name", ""), s.get("relations", {}), s.get("constants", []))
        except FormulaError as exc:
            raise StructureError(str(exc)) from None
    if sig is None:
        arities = {}
        for r, ts in rels.items():
            if not ts:
                raise StructureError(f"cannot infer the arity of empty relation {r!r}")
            arities[r] = len(ts[0])
        sig = Signature(data.get("name", ""), arities, consts)
    return FiniteStructure(sig, size, rels, consts)


def load_structure(path: str, sig: Signature | None = None) -> FiniteStructure:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StructureError(f"{path}: {exc}") from None
    return structure_from_dict(data, sig)


def dump_structure(A: FiniteStructure) -> str:
    return json.dumps(structure_to_dict(A), indent=2, sort_keys=True)


def count_structures(sig: Signature, n: int) -> int:
    total = n ** len(sig.constants)
    for _, k in sig.relations:
        total *= 2 ** (n ** k)
    return total
