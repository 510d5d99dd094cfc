"""Ideal edges: enumeration, D(alpha), invertibility, compatibility, crossing.

An ideal edge is a subset of the directed edges ending at one vertex,
subject to cardinality bounds (relaxed at the basepoint, where all but
one edge may be pulled away) and coherence under the vertex stabilizer.
Orbits of ideal edges are the vertices of the blow-up poset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ValidationError
from .ggraph import GGraph, rev
from .marking import MarkedGGraph


@dataclass(frozen=True)
class IdealEdge:
    vertex: int
    edges: frozenset

    def key(self):
        return (self.vertex, tuple(sorted(self.edges)))


@dataclass(frozen=True)
class IdealPair:
    """An ideal edge together with a legal collapse target in D(alpha)."""

    edge: IdealEdge
    collapse_target: int


def _card_ok(g: GGraph, v, edges):
    comp = len(g.edges_at(v)) - len(edges)
    if v == g.basepoint:
        return len(edges) >= 2 and comp >= 1
    return len(edges) >= 2 and comp >= 2


def is_ideal_edge(g: GGraph, v, edges) -> bool:
    """Cardinality bounds plus orbit coherence under the vertex stabilizer."""
    edges = frozenset(edges)
    if not edges <= frozenset(g.edges_at(v)):
        return False
    if not _card_ok(g, v, edges):
        return False
    trans = set()
    for x in g.group.elements:
        img = g.act_edge_set(x, edges)
        if g.act_vertex(x, v) == v:
            if img != edges and img & edges:
                return False
            trans.add(img)
    # the blown-up vertex must stay admissible: it keeps the edges not
    # covered by any translate plus one new edge per translate
    covered = frozenset().union(*trans)
    residual = len(frozenset(g.edges_at(v)) - covered)
    need = 2 if v == g.basepoint else 3
    return residual + len(trans) >= need


def stab_set(g: GGraph, edges):
    edges = frozenset(edges)
    return tuple(x for x in g.group.elements if g.act_edge_set(x, edges) == edges)


def translates(g: GGraph, alpha: IdealEdge):
    """Distinct translates g*alpha, as IdealEdges, deterministically ordered."""
    seen = {}
    for x in g.group.elements:
        s = g.act_edge_set(x, alpha.edges)
        v = g.act_vertex(x, alpha.vertex)
        seen[(v, tuple(sorted(s)))] = IdealEdge(v, s)
    return [seen[k] for k in sorted(seen)]


def orbit_union(g: GGraph, alpha: IdealEdge):
    """All directed edges covered by some translate of alpha."""
    out = set()
    for t in translates(g, alpha):
        out |= t.edges
    return frozenset(out)


def orbit_key(g: GGraph, alpha: IdealEdge):
    """Canonical representative key of the orbit of alpha."""
    return min(t.key() for t in translates(g, alpha))


def canonical_rep(g: GGraph, alpha: IdealEdge) -> IdealEdge:
    v, edges = orbit_key(g, alpha)
    return IdealEdge(v, frozenset(edges))


def enumerate_ideal_edges(m: MarkedGGraph):
    """All ideal edge orbits, one canonical representative each."""
    g = m.graph if isinstance(m, MarkedGGraph) else m
    reps = {}
    for v in range(g.n_vertices):
        ev = g.edges_at(v)
        for r in range(2, len(ev) + 1):
            for combo in itertools.combinations(sorted(ev), r):
                if is_ideal_edge(g, v, combo):
                    alpha = IdealEdge(v, frozenset(combo))
                    reps[orbit_key(g, alpha)] = canonical_rep(g, alpha)
    return [reps[k] for k in sorted(reps)]


def d_set(m, alpha: IdealEdge):
    """D(alpha): collapse candidates with full stabilizer and reverse outside the orbit."""
    g = m.graph if isinstance(m, MarkedGGraph) else m
    stab_a = stab_set(g, alpha.edges)
    union = orbit_union(g, alpha)
    return frozenset(
        a for a in alpha.edges
        if g.stab_edge(a) == stab_a and rev(a) not in union
    )


def is_invertible(m, alpha: IdealEdge):
    """Whether E_v - alpha is an ideal edge not inside the orbit of alpha.

    Returns (flag, inverse IdealEdge or None).
    """
    g = m.graph if isinstance(m, MarkedGGraph) else m
    comp = frozenset(g.edges_at(alpha.vertex)) - alpha.edges
    if not is_ideal_edge(g, alpha.vertex, comp):
        return False, None
    if comp <= orbit_union(g, alpha):
        return False, None
    return True, IdealEdge(alpha.vertex, comp)


def _orbit_contained(g, A, B):
    """Every translate of A is contained in some translate of B."""
    tb = translates(g, B)
    for ta in translates(g, A):
        if not any(ta.vertex == b.vertex and ta.edges <= b.edges for b in tb):
            return False
    return True


def _is_inverse_orbit(g, alpha, beta):
    """Whether one orbit is the inverse of the other (symmetric)."""
    inv_a, ainv = is_invertible(g, alpha)
    if inv_a and orbit_key(g, ainv) == orbit_key(g, beta):
        return True
    inv_b, binv = is_invertible(g, beta)
    return inv_b and orbit_key(g, binv) == orbit_key(g, alpha)


def compatible(m, alpha: IdealEdge, beta: IdealEdge) -> bool:
    """Orbit compatibility: nesting, or disjointness away from the inverse pair.

    Disjoint inverse pairs are still compatible when both live at the
    basepoint.
    """
    g = m.graph if isinstance(m, MarkedGGraph) else m
    if _orbit_contained(g, alpha, beta) or _orbit_contained(g, beta, alpha):
        return True
    if orbit_union(g, alpha) & orbit_union(g, beta):
        return False
    if alpha.vertex == g.basepoint and beta.vertex == g.basepoint:
        return True
    return not _is_inverse_orbit(g, alpha, beta)


def pre_compatible(m, alpha: IdealEdge, beta: IdealEdge) -> bool:
    """Compatible, or one is invertible with its inverse inside the other."""
    g = m.graph if isinstance(m, MarkedGGraph) else m
    if compatible(g, alpha, beta):
        return True
    inv_a, ainv = is_invertible(g, alpha)
    if inv_a and _orbit_contained(g, ainv, beta):
        return True
    inv_b, binv = is_invertible(g, beta)
    if inv_b and _orbit_contained(g, binv, alpha):
        return True
    return False


@dataclass(frozen=True)
class Crossing:
    """Double-coset decomposition of the intersection of two ideal edge orbits."""

    number: int              # N(G alpha, G beta)
    components: tuple        # nonempty gamma_i, as frozensets
    dual_components: tuple   # matching gamma_i'

    @property
    def simple(self):
        return self.number == 1


def crossing(m, alpha: IdealEdge, beta: IdealEdge) -> Crossing:
    """Intersection components of alpha with the orbit of beta.

    beta is first translated to the vertex of alpha; if no translate lives
    there the edges never cross (N = 0).
    """
    g = m.graph if isinstance(m, MarkedGGraph) else m
    beta_t = None
    for t in translates(g, beta):
        if t.vertex == alpha.vertex:
            beta_t = t
            break
    if beta_t is None:
        return Crossing(0, (), ())
    P = stab_set(g, alpha.edges)
    Q = stab_set(g, beta_t.edges)
    comps = []
    duals = []
    for x in g.group.double_coset_reps(P, Q):
        xb = g.act_edge_set(x, beta_t.edges)
        gamma = alpha.edges & frozenset().union(
            *(g.act_edge_set(p, xb) for p in P))
        xi_inv_a = g.act_edge_set(g.group.inv(x), alpha.edges)
        gamma_d = beta_t.edges & frozenset().union(
            *(g.act_edge_set(q, xi_inv_a) for q in Q))
        if gamma:
            comps.append(gamma)
            duals.append(gamma_d)
    comps_duals = sorted(zip(comps, duals), key=lambda cd: sorted(cd[0]))
    comps = tuple(c for c, _ in comps_duals)
    duals = tuple(d for _, d in comps_duals)
    return Crossing(len(comps), comps, duals)
