"""Blow-ups, Whitehead moves, reductivity, and greedy norm descent.

A Whitehead move (G alpha, G a) blows up the orbit of an ideal edge alpha
and then collapses the orbit of a collapse target a in D(alpha).  The
norm changes by [G:stab(alpha)] * (|alpha| - |a|) per coordinate, which is
what the reductivity value measures (with the opposite sign).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HypothesisNotMet, PropertyViolation, ValidationError
from .ggraph import GGraph, rev
from .idealedges import (IdealEdge, IdealPair, d_set, enumerate_ideal_edges,
                         stab_set, translates)
from .marking import MarkedGGraph, collapse_marked, reduce_path
from .norms import NormVector, Order, calculator, compare
from . import ggraph


@dataclass(frozen=True)
class BlowUpInfo:
    """Bookkeeping for one blow-up: the new edge created per translate."""

    new_edges: tuple        # directed edge id e(g alpha) per translate, new -> old
    translate_sets: tuple   # matching frozensets g alpha (before re-termination)

    def edge_for(self, tset):
        return self.new_edges[self.translate_sets.index(tset)]


@dataclass(frozen=True)
class Reductivity:
    kind: str
    value: NormVector  # [G:stab(alpha)] * (|a| - |alpha|), signed

    @property
    def verdict(self):
        for c in self.value.coords:
            if c > 0:
                return "reductive"
            if c < 0:
                return "not-reductive"
        return "null-at-horizon"

    @property
    def is_reductive(self):
        return self.verdict == "reductive"


def blow_up(m: MarkedGGraph, alpha: IdealEdge):
    """Pull the edges of each translate of alpha away along a new edge.

    Returns (marked graph, BlowUpInfo).  Collapsing the orbit of the new
    pairs recovers the input exactly.
    """
    g = m.graph
    from .idealedges import is_ideal_edge
    if not is_ideal_edge(g, alpha.vertex, alpha.edges):
        raise ValidationError("not an ideal edge")

    trans = translates(g, alpha)
    sets = [t.edges for t in trans]
    moved = {}
    for i, s in enumerate(sets):
        for a in s:
            if a in moved:
                raise ValidationError("orbit translates overlap")
            moved[a] = i

    n_old_pairs = g.n_pairs
    term = list(g.term)
    for a, i in moved.items():
        term[a] = g.n_vertices + i
    # new pair i: directed 2*(n_old_pairs+i) runs new vertex -> old vertex
    for i, t in enumerate(trans):
        term.extend([t.vertex, g.n_vertices + i])

    set_index = {frozenset(s): i for i, s in enumerate(sets)}
    action = []
    for x in g.group.elements:
        perm = list(g.edge_action[x])
        for s in sets:
            j = set_index[g.act_edge_set(x, s)]
            perm.extend([2 * (n_old_pairs + j), 2 * (n_old_pairs + j) + 1])
        action.append(tuple(perm))

    used = set(g.pair_names)
    new_names = []
    k = 0
    for i in range(len(trans)):
        while f"w{k}" in used:
            k += 1
        new_names.append(f"w{k}")
        used.add(f"w{k}")
        k += 1
    vnames = g.vertex_names + tuple(f"u{i}" for i in range(len(trans)))
    g2 = GGraph(g.n_vertices + len(trans), g.basepoint, tuple(term), g.group,
                tuple(action), vnames, g.pair_names + tuple(new_names))

    new_edge = [2 * (n_old_pairs + i) for i in range(len(trans))]
    paths = []
    for p in m.basis_paths:
        steps = []
        for d in p:
            if rev(d) in moved:
                steps.append(rev(new_edge[moved[rev(d)]]))
            steps.append(d)
            if d in moved:
                steps.append(new_edge[moved[d]])
        paths.append(reduce_path(steps))
    m2 = MarkedGGraph(g2, tuple(paths), m.realization)
    m2.require_valid()
    return m2, BlowUpInfo(tuple(new_edge), tuple(frozenset(s) for s in sets))


def whitehead(m: MarkedGGraph, alpha: IdealEdge, a: int):
    """Blow up the orbit of alpha, then collapse the orbit of a.

    Requires a in D(alpha); the collapsed orbit is a forest in the blown-up
    graph by construction.
    """
    if a not in d_set(m, alpha):
        raise HypothesisNotMet(
            f"collapse edge {m.graph.edge_name(a)} is not in D(alpha)")
    m2, _ = blow_up(m, alpha)
    pairs = frozenset(m2.graph.edge_action[x][a] // 2
                      for x in m2.graph.group.elements)
    for p in pairs:
        if m2.graph.is_loop(2 * p):
            raise HypothesisNotMet("collapse target became a loop after blow-up")
    m3, _, _ = collapse_marked(m2, pairs)
    m3.require_valid()
    return m3


def reductivity(m: MarkedGGraph, alpha: IdealEdge, a: int, kind, horizon) -> Reductivity:
    """[G:stab(alpha)] * (|a| - |alpha|), truncated at the horizon."""
    if a not in d_set(m, alpha):
        raise HypothesisNotMet("collapse edge is not in D(alpha)")
    calc = calculator(m, horizon)
    idx = m.graph.group.order // len(stab_set(m.graph, alpha.edges))
    value = (calc.edge_abs(a, kind) - calc.set_abs(alpha.edges, kind)).scale(idx)
    return Reductivity(kind, value)


def edge_reductivity(m, alpha, kind, horizon):
    """Max reductivity over collapse targets; None when D(alpha) is empty."""
    best = None
    for a in sorted(d_set(m, alpha)):
        r = reductivity(m, alpha, a, kind, horizon)
        if best is None or compare(r.value, best[0].value) == Order.GREATER:
            best = (r, a)
    return best


def candidate_pairs(m: MarkedGGraph):
    """All (alpha, a) with alpha an enumerated orbit rep and a in D(alpha)."""
    out = []
    for alpha in enumerate_ideal_edges(m):
        for a in sorted(d_set(m, alpha)):
            out.append((alpha, a))
    return out


def max_reductive_pair(m: MarkedGGraph, horizon, kind="tot"):
    """The reductivity-maximizing ideal pair, or None if nothing reduces.

    Lexicographic comparison at the horizon; equal values are resolved by
    the canonical (vertex, edges, collapse target) order so runs are
    reproducible.
    """
    best = None
    for alpha, a in candidate_pairs(m):
        r = reductivity(m, alpha, a, kind, horizon)
        if not r.is_reductive:
            continue
        key = (alpha.vertex, tuple(sorted(alpha.edges)), a)
        if best is None:
            best = (r, key, alpha, a)
            continue
        c = compare(r.value, best[0].value)
        if c == Order.GREATER or (c == Order.EQUAL_AT_HORIZON and key < best[1]):
            best = (r, key, alpha, a)
    if best is None:
        return None
    return IdealPair(best[2], best[3])


@dataclass(frozen=True)
class MoveRecord:
    step: int
    kind: str        # "collapse" or "whitehead"
    description: str
    red_tot: tuple
    norm_out: tuple
    norm_aut: tuple


def greedy_reduce(m: MarkedGGraph, horizon, max_steps=500):
    """Collapse invariant forests, then apply maximal reductive moves.

    Every step must strictly decrease the tot-norm at the horizon; the
    move log records each step together with both norms after it.
    """
    log = []
    step = 0

    def norms_of(mm):
        calc = calculator(mm, horizon)
        return calc.norm("out"), calc.norm("aut"), calc.norm("tot")

    _, _, tot_before = norms_of(m)
    while True:
        if step >= max_steps:
            raise HypothesisNotMet(f"step budget {max_steps} exhausted")
        forest = ggraph.maximal_invariant_forest(m.graph)
        if forest:
            names = ",".join(sorted(m.graph.pair_names[p] for p in forest))
            m, _, _ = collapse_marked(m, forest)
            desc = f"collapse forest {{{names}}}"
            red = ()
        else:
            pair = max_reductive_pair(m, horizon)
            if pair is None:
                break
            red_v = reductivity(m, pair.edge, pair.collapse_target, "tot", horizon)
            names = ",".join(sorted(m.graph.edge_name(e) for e in pair.edge.edges))
            desc = (f"whitehead ({m.graph.vertex_names[pair.edge.vertex]}:"
                    f"{{{names}}}, {m.graph.edge_name(pair.collapse_target)})")
            red = red_v.value.coords
            m = whitehead(m, pair.edge, pair.collapse_target)
        step += 1
        out_v, aut_v, tot_after = norms_of(m)
        if compare(tot_after, tot_before) != Order.LESS:
            raise PropertyViolation(f"step {step} ({desc}) did not decrease the tot-norm")
        log.append(MoveRecord(step, "collapse" if not red else "whitehead",
                              desc, red, out_v.coords, aut_v.coords))
        tot_before = tot_after
    return m, log
