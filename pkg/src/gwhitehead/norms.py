"""The out/aut/tot norms, edge absolute values, dot products, comparison.

All vectors are finite prefixes of the infinite lexicographic products:
coordinates are indexed by the shortlex enumeration of conjugacy classes
(out) or words (aut), truncated at a horizon.  Identities are exact per
coordinate; only order comparisons can be indeterminate at the horizon.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

from . import freegroup as fg
from .errors import InternalInconsistency, ValidationError
from .ggraph import rev
from .marking import MarkedGGraph, loop_of_class, path_of_word

KINDS = ("out", "aut", "tot")


@dataclass(frozen=True)
class NormVector:
    """Integer coordinate prefix; tot is the out prefix followed by the aut one."""

    kind: str
    n: int
    horizon: int
    coords: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown norm kind {self.kind!r}")

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        self._check_match(other)
        return NormVector(self.kind, self.n, self.horizon,
                          tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check_match(other)
        return NormVector(self.kind, self.n, self.horizon,
                          tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, k):
        return NormVector(self.kind, self.n, self.horizon,
                          tuple(k * c for c in self.coords))

    def _check_match(self, other):
        if (self.kind, self.n, self.horizon) != (other.kind, other.n, other.horizon):
            raise ValidationError("norm vectors with mismatched kind/rank/horizon")


class Order(enum.Enum):
    LESS = -1
    EQUAL_AT_HORIZON = 0
    GREATER = 1


def compare(u: NormVector, v: NormVector) -> Order:
    """Lexicographic verdict on the truncated coordinates."""
    u._check_match(v)
    for a, b in zip(u.coords, v.coords):
        if a < b:
            return Order.LESS
        if a > b:
            return Order.GREATER
    return Order.EQUAL_AT_HORIZON


class NormCalculator:
    """Caches loops, paths and occurrence counters for one marked graph."""

    def __init__(self, m: MarkedGGraph, horizon: int):
        self.m = m
        self.horizon = horizon
        self.words = fg.enumerate_words(m.n, horizon)
        self.classes = fg.enumerate_classes(m.n, horizon)
        self.items = {
            "aut": [self._item(path_of_word(m, w), cyclic=False) for w in self.words],
            "out": [self._item(loop_of_class(m, fg.ConjClass(c)), cyclic=True)
                    for c in self.classes],
        }
        g = m.graph
        self._inv_actions = [g.edge_action[g.group.inv(x)] for x in g.group.elements]

    @staticmethod
    def _item(steps, cyclic):
        cnt = {}
        for e in steps:
            cnt[e] = cnt.get(e, 0) + 1
        if cyclic and steps:
            idx = [(i, (i + 1) % len(steps)) for i in range(len(steps))]
        else:
            idx = [(i, i + 1) for i in range(len(steps) - 1)]
        pairs = [(steps[i], rev(steps[j])) for i, j in idx]
        for u, w in pairs:
            if u == w:
                raise InternalInconsistency("unreduced path reached the norm layer")
        return steps, cnt, pairs

    def _per_kind(self, kind, coord_fn):
        if kind == "tot":
            return self._per_kind("out", coord_fn) + self._per_kind("aut", coord_fn)
        return tuple(coord_fn(kind, item) for item in self.items[kind])

    def _vec(self, kind, coords):
        return NormVector(kind, self.m.n, self.horizon, coords)

    def edge_abs(self, e, kind) -> NormVector:
        def coord(_, item):
            _, cnt, _ = item
            return sum(cnt.get(act[e], 0) + cnt.get(act[rev(e)], 0)
                       for act in self._inv_actions)

        return self._vec(kind, self._per_kind(kind, coord))

    def dot(self, A, B, kind) -> NormVector:
        A, B = frozenset(A), frozenset(B)
        translated = [(frozenset(act[a] for a in A), frozenset(act[b] for b in B))
                      for act in self._inv_actions]

        def coord(_, item):
            _, _, pairs = item
            c = 0
            for Ax, Bx in translated:
                for u, w in pairs:
                    if u in Ax and w in Bx:
                        c += 1
                    if u in Bx and w in Ax:
                        c += 1
            return c

        return self._vec(kind, self._per_kind(kind, coord))

    def set_abs(self, C, kind) -> NormVector:
        """|C|: equals the inclusion-exclusion closed form, computed by one scan."""
        C = frozenset(C)
        translated = [frozenset(act[c] for c in C) for act in self._inv_actions]

        def coord(_, item):
            _, cnt, pairs = item
            total = 0
            for Cx in translated:
                total += sum(cnt.get(c, 0) + cnt.get(rev(c), 0) for c in Cx)
                total -= 2 * sum(1 for u, w in pairs if u in Cx and w in Cx)
            return total

        return self._vec(kind, self._per_kind(kind, coord))

    def norm(self, kind) -> NormVector:
        """Norm, computed both directly and as half the edge_abs sum."""
        order = self.m.graph.group.order

        def direct_coord(_, item):
            steps, _, _ = item
            return order * len(steps)

        direct = self._per_kind(kind, direct_coord)
        total = None
        for e in range(self.m.graph.n_edges):
            v = self.edge_abs(e, kind)
            total = v if total is None else total + v
        halved = []
        for c in total.coords:
            if c % 2:
                raise InternalInconsistency("edge_abs sum is odd")
            halved.append(c // 2)
        if tuple(halved) != direct:
            raise InternalInconsistency(
                f"direct norm {direct} != half edge_abs sum {tuple(halved)} ({kind})")
        return self._vec(kind, direct)


@functools.lru_cache(maxsize=128)
def calculator(m: MarkedGGraph, horizon: int) -> NormCalculator:
    return NormCalculator(m, horizon)


def edge_abs(m, e, kind, horizon) -> NormVector:
    return calculator(m, horizon).edge_abs(e, kind)


def dot(m, A, B, kind, horizon) -> NormVector:
    return calculator(m, horizon).dot(A, B, kind)


def set_abs(m, C, kind, horizon) -> NormVector:
    return calculator(m, horizon).set_abs(C, kind)


def norm(m, kind, horizon) -> NormVector:
    return calculator(m, horizon).norm(kind)
