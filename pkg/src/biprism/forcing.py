"""Finite combinatorics of the Cohen-pair poset.

Conditions are finite partial functions ``(e, i, j) -> {0, 1}`` with ``e`` in
``{0, 1}``; ``q`` extends ``p`` when it contains it.  Index permutations of
``{0,1} x N`` act on conditions and on the symbolic names ``x_{e,i}``
(``XdotLower``), ``X_e`` (``Xdot``) and ``P`` (``Pdot``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

from .report import Report

__all__ = [
    "Condition", "BlockPi", "Explicit", "IndexPerm", "XdotLower", "Xdot", "Pdot", "NameExpr",
    "EMPTY", "ForcingError", "extends", "compatible", "merge", "act_condition", "act_name", "support_bound",
    "extend_to_separate", "decide_bit", "separates", "check_pi_properties", "all_conditions",
    "random_condition", "parse_condition", "render_condition",
]


class ForcingError(ValueError):
    pass


Key = tuple  # (e, i, j)


def _check_key(key) -> tuple:
    if len(key) != 3:
        raise ForcingError(f"condition key must be (e, i, j), got {key!r}")
    e, i, j = (int(k) for k in key)
    if e not in (0, 1) or i < 0 or j < 0:
        raise ForcingError(f"bad condition key {key!r}")
    return (e, i, j)


@dataclass(frozen=True)
class Condition:
    entries: tuple = ()

    def __post_init__(self):
        raw = self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        cleaned = {}
        for key, v in raw:
            key = _check_key(key)
            if v not in (0, 1):
                raise ForcingError(f"condition value must be 0 or 1, got {v!r}")
            if cleaned.get(key, v) != v:
                raise ForcingError(f"conflicting values at {key}")
            cleaned[key] = int(v)
        object.__setattr__(self, "entries", tuple(sorted(cleaned.items())))

    @classmethod
    def _trusted(cls, mapping: Mapping) -> "Condition":
        # entries already validated and conflict-free
        p = object.__new__(cls)
        object.__setattr__(p, "entries", tuple(sorted(mapping.items())))
        p.__dict__["_map"] = dict(mapping)
        return p

    @classmethod
    def of(cls, mapping: Mapping) -> "Condition":
        return cls(tuple(mapping.items()))

    @cached_property
    def _map(self) -> dict:
        return dict(self.entries)

    def as_dict(self) -> dict:
        return dict(self._map)

    def keys(self) -> frozenset:
        return frozenset(self._map)

    def get(self, key, default=None):
        return self._map.get(tuple(key), default)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return render_condition(self)


EMPTY = Condition()


def render_condition(p: Condition) -> str:
    return " ".join(f"{e},{i},{j}={v}" for (e, i, j), v in p.entries) or "{}"


def parse_condition(text: str) -> Condition:
    """Inverse of ``render_condition``; entries may be separated by spaces or semicolons."""
    text = text.strip()
    if text in ("", "{}"):
        return EMPTY
    entries = []
    for item in text.replace(";", " ").split():
        try:
            key, v = item.split("=")
            entries.append((tuple(int(x) for x in key.split(",")), int(v)))
        except ValueError:
            raise ForcingError(f"cannot read condition entry {item!r}") from None
    return Condition(tuple(entries))


def extends(q: Condition, p: Condition) -> bool:
    """``q <= p``: every entry of ``p`` is an entry of ``q``."""
    qd = q._map
    return all(qd.get(k) == v for k, v in p.entries)


def compatible(p: Condition, q: Condition) -> bool:
    qd = q._map
    return all(qd.get(k, v) == v for k, v in p.entries)


def merge(p: Condition, q: Condition) -> Condition:
    if not compatible(p, q):
        raise ForcingError("cannot merge incompatible conditions")
    return Condition._trusted({**p._map, **q._map})


def support_bound(p: Condition) -> int:
    return max((i + 1 for (_, i, _), _ in p.entries), default=0)


# --------------------------------------------------------------------------
# index permutations and names


@dataclass(frozen=True)
class BlockPi:
    """Swap the two rows and, on ``[0, 2k)``, the blocks ``[0, k)`` and ``[k, 2k)``."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ForcingError("BlockPi needs k >= 1")

    def __call__(self, e: int, i: int) -> tuple:
        if i < self.k:
            return (1 - e, i + self.k)
        if i < 2 * self.k:
            return (1 - e, i - self.k)
        return (1 - e, i)

    def row_image(self, e: int) -> int | None:
        return 1 - e


@dataclass(frozen=True)
class Explicit:
    """A bijection on a finite set of indices, the identity elsewhere."""

    mapping: tuple = ()

    def __post_init__(self):
        raw = self.mapping.items() if isinstance(self.mapping, Mapping) else self.mapping
        m = {tuple(a): tuple(b) for a, b in raw}
        for pt in itertools.chain(m, m.values()):
            if len(pt) != 2 or pt[0] not in (0, 1) or pt[1] < 0:
                raise ForcingError(f"bad index {pt!r}")
        if sorted(m) != sorted(m.values()):
            raise ForcingError("Explicit permutation must be a bijection on its support")
        object.__setattr__(self, "mapping", tuple(sorted(m.items())))

    def __call__(self, e: int, i: int) -> tuple:
        return dict(self.mapping).get((e, i), (e, i))

    def row_image(self, e: int) -> int | None:
        # identity off a finite support, so row e can only go to itself
        ok = all(b[0] == e for a, b in self.mapping if a[0] == e)
        return e if ok else None


IndexPerm = Union[BlockPi, Explicit]


@dataclass(frozen=True)
class XdotLower:
    e: int
    i: int

    def __post_init__(self):
        if self.e not in (0, 1) or self.i < 0:
            raise ForcingError(f"bad name index ({self.e}, {self.i})")


@dataclass(frozen=True)
class Xdot:
    e: int

    def __post_init__(self):
        if self.e not in (0, 1):
            raise ForcingError(f"bad name index {self.e}")


@dataclass(frozen=True)
class Pdot:
    pass


NameExpr = Union[XdotLower, Xdot, Pdot]


def act_condition(pi: IndexPerm, p: Condition) -> Condition:
    return Condition(tuple((pi(e, i) + (j,), v) for (e, i, j), v in p.entries))


def act_name(pi: IndexPerm, n: NameExpr) -> NameExpr:
    if isinstance(n, XdotLower):
        return XdotLower(*pi(n.e, n.i))
    if isinstance(n, Xdot):
        e = pi.row_image(n.e)
        if e is None:
            raise ForcingError(f"{pi} does not map row {n.e} onto a single row")
        return Xdot(e)
    if isinstance(n, Pdot):
        return n
    raise TypeError(f"not a name: {n!r}")


# --------------------------------------------------------------------------
# density


def separates(p: Condition, a: tuple, b: tuple) -> int | None:
    """Least ``j`` at which ``p`` decides the columns ``a`` and ``b`` differently."""
    d, a, b = p._map, tuple(a), tuple(b)
    best = None
    for (e, i, j), u in p.entries:
        if (e, i) == a and (best is None or j < best):
            v = d.get(b + (j,))
            if v is not None and v != u:
                best = j
    return best


def extend_to_separate(p: Condition, a: tuple, b: tuple) -> Condition:
    """Extend ``p`` so that columns ``a`` and ``b`` disagree somewhere.

    ``p`` is returned as is when it already separates them.  Otherwise the
    least ``j`` undetermined in at least one column is used; free cells get
    ``0`` for ``a`` and ``1`` for ``b``, or the opposite of an existing value.
    """
    a, b = tuple(a), tuple(b)
    if a == b:
        raise ForcingError("cannot separate a column from itself")
    for col in (a, b):
        if len(col) != 2 or col[0] not in (0, 1) or col[1] < 0:
            raise ForcingError(f"bad column {col!r}")
    if separates(p, a, b) is not None:
        return p
    d = p._map
    j = 0
    while a + (j,) in d and b + (j,) in d:
        j += 1
    u, v = d.get(a + (j,)), d.get(b + (j,))
    if u is None and v is None:
        u, v = 0, 1
    elif u is None:
        u = 1 - v
    else:
        v = 1 - u
    return Condition._trusted({**d, a + (j,): u, b + (j,): v})


def decide_bit(p: Condition, e: int, i: int, j: int) -> Condition:
    """Least extension deciding ``(e, i, j)``; a free cell gets ``0``."""
    key = _check_key((e, i, j))
    return p if key in p.keys() else merge(p, Condition(((key, 0),)))


# --------------------------------------------------------------------------
# enumeration and the properties of BlockPi


def all_conditions(max_entries: int, i_bound: int, j_bound: int) -> Iterator[Condition]:
    """Every condition with at most ``max_entries`` entries, ``i < i_bound`` and ``j < j_bound``."""
    keys = [(e, i, j) for e in (0, 1) for i in range(i_bound) for j in range(j_bound)]
    for size in range(max_entries + 1):
        for ks in itertools.combinations(keys, size):
            for vals in itertools.product((0, 1), repeat=size):
                yield Condition._trusted(dict(zip(ks, vals)))


def random_condition(rng: random.Random, max_entries: int, i_bound: int, j_bound: int) -> Condition:
    size = rng.randint(0, max_entries)
    keys = rng.sample([(e, i, j) for e in (0, 1) for i in range(i_bound) for j in range(j_bound)],
                      min(size, 2 * i_bound * j_bound))
    return Condition(tuple((k, rng.randint(0, 1)) for k in keys))


def check_pi_properties(k: int, samples: Iterable[Condition]) -> Report:
    """Involution, compatibility with the image, and the action on ``X_0``, ``X_1``, ``P``."""
    pi = BlockPi(k)
    samples = list(samples)
    bad = next((p for p in samples if support_bound(p) > k), None)
    if bad is not None:
        raise ForcingError(f"sample {bad} has support bound {support_bound(bad)} > {k}")
    report = Report(f"BlockPi({k}) on {len(samples)} conditions")
    not_inv = next((p for p in samples if act_condition(pi, act_condition(pi, p)) != p), None)
    report.add("involution", not_inv is None, witness=None if not_inv is None else str(not_inv))
    clash = next((p for p in samples if not compatible(p, act_condition(pi, p))), None)
    report.add("compatible with image", clash is None, witness=None if clash is None else str(clash))
    overlap = next((p for p in samples if p.keys() & act_condition(pi, p).keys()), None)
    report.add("disjoint from image", overlap is None, witness=None if overlap is None else str(overlap))
    names = [(Xdot(0), Xdot(1)), (Xdot(1), Xdot(0)), (Pdot(), Pdot())]
    wrong = [(str(a), str(act_name(pi, a))) for a, want in names if act_name(pi, a) != want]
    report.add("names: X0 <-> X1, P fixed", not wrong, witness=wrong or None)
    return report
