"""Pointed graphs with an edge-pair involution and a finite group action.

Directed edges are ints 0..2m-1; edge e and its reverse e^1 form a pair
(pair index e//2).  ``term[e]`` is the terminal vertex of e, so the
initial vertex of e is ``term[e^1]`` and E_v is the set of directed edges
ending at v.  The group acts by basepoint-preserving graph automorphisms
without inversions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ValidationError


def rev(e: int) -> int:
    return e ^ 1


@dataclass(frozen=True)
class Group:
    """Finite group given by a multiplication table; element 0 is the identity."""

    mult: tuple  # mult[g][h] = g*h
    names: tuple = None

    def __post_init__(self):
        k = len(self.mult)
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"g{i}" for i in range(k)))
        for g in range(k):
            if self.mult[0][g] != g or self.mult[g][0] != g:
                raise ValidationError("element 0 is not a two-sided identity")
        for g in range(k):
            if 0 not in self.mult[g]:
                raise ValidationError(f"element {g} has no inverse")
        for g in range(k):
            for h in range(k):
                for x in range(k):
                    if self.mult[self.mult[g][h]][x] != self.mult[g][self.mult[h][x]]:
                        raise ValidationError("multiplication table is not associative")

    @property
    def order(self):
        return len(self.mult)

    @property
    def elements(self):
        return range(len(self.mult))

    def mul(self, g, h):
        return self.mult[g][h]

    def inv(self, g):
        return self.mult[g].index(0)

    @classmethod
    def trivial(cls):
        return cls(((0,),), ("1",))

    @classmethod
    def cyclic(cls, k):
        mult = tuple(tuple((i + j) % k for j in range(k)) for i in range(k))
        names = ("1",) + tuple("t" if i == 1 else f"t^{i}" for i in range(1, k))
        return cls(mult, names)

    @classmethod
    def symmetric3(cls):
        """S_3 as permutations of {0,1,2}."""
        perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
        idx = {p: i for i, p in enumerate(perms)}
        mult = tuple(
            tuple(idx[tuple(p[q[i]] for i in range(3))] for q in perms) for p in perms
        )
        return cls(mult, ("1", "r", "r^2", "s", "sr", "sr^2"))

    def subgroups(self):
        """All subgroups, as sorted tuples of elements (brute force)."""
        k = self.order
        out = []
        rest = [g for g in range(1, k)]
        for r in range(len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                cand = frozenset((0,) + extra)
                if all(self.mult[g][h] in cand for g in cand for h in cand):
                    out.append(tuple(sorted(cand)))
        return out

    def double_coset_reps(self, P, Q):
        """Representatives of P\\G/Q for subgroups P, Q (element subsets)."""
        seen = set()
        reps = []
        for x in self.elements:
            if x in seen:
                continue
            reps.append(x)
            for p in P:
                for q in Q:
                    seen.add(self.mult[self.mult[p][x]][q])
        return reps


@dataclass(frozen=True)
class GGraph:
    """Pointed graph with involution and a finite group acting on it."""

    n_vertices: int
    basepoint: int
    term: tuple  # terminal vertex per directed edge; len = 2 * n_pairs
    group: Group
    edge_action: tuple  # edge_action[g][e], one permutation per group element
    vertex_names: tuple = None
    pair_names: tuple = None

    def __post_init__(self):
        if self.vertex_names is None:
            names = tuple("*" if v == self.basepoint else f"v{v}"
                          for v in range(self.n_vertices))
            object.__setattr__(self, "vertex_names", names)
        if self.pair_names is None:
            object.__setattr__(
                self, "pair_names", tuple(f"e{p}" for p in range(self.n_pairs)))

    @property
    def n_pairs(self):
        return len(self.term) // 2

    @property
    def n_edges(self):
        return len(self.term)

    def init(self, e):
        return self.term[rev(e)]

    def is_loop(self, e):
        return self.term[e] == self.term[rev(e)]

    def edges_at(self, v):
        """E_v: directed edges ending at v."""
        return tuple(e for e in range(self.n_edges) if self.term[e] == v)

    def valence(self, v):
        return len(self.edges_at(v))

    def act_edge(self, g, e):
        return self.edge_action[g][e]

    def act_vertex(self, g, v):
        for e in range(self.n_edges):
            if self.term[e] == v:
                return self.term[self.edge_action[g][e]]
        return v

    def act_edge_set(self, g, edges):
        return frozenset(self.edge_action[g][e] for e in edges)

    def stab_edge(self, e):
        return tuple(g for g in self.group.elements if self.edge_action[g][e] == e)

    def orbit_edge(self, e):
        return frozenset(self.edge_action[g][e] for g in self.group.elements)

    def edge_name(self, e):
        base = self.pair_names[e // 2]
        return base if e % 2 == 0 else "~" + base

    def validate(self):
        """Report all violated invariants (empty list means valid)."""
        bad = []
        G = self.group
        for e in range(self.n_edges):
            if not (0 <= self.term[e] < self.n_vertices):
                bad.append(f"edge {self.edge_name(e)} has an unknown terminal vertex")
        for g in G.elements:
            perm = self.edge_action[g]
            if sorted(perm) != list(range(self.n_edges)):
                bad.append(f"action of {G.names[g]} is not an edge permutation")
                continue
            for e in range(self.n_edges):
                if perm[rev(e)] != rev(perm[e]):
                    bad.append(f"action of {G.names[g]} breaks the involution at "
                               f"{self.edge_name(e)}")
                if perm[e] == rev(e):
                    bad.append(f"inversion: {G.names[g]} maps {self.edge_name(e)} "
                               "to its reverse")
        # action respects incidence: terminal vertices move consistently
        for g in G.elements:
            vmap = {}
            ok = True
            for e in range(self.n_edges):
                v, w = self.term[e], self.term[self.edge_action[g][e]]
                if vmap.setdefault(v, w) != w:
                    bad.append(f"action of {G.names[g]} is inconsistent on vertices "
                               f"(witness vertex {self.vertex_names[v]})")
                    ok = False
                    break
            if ok and vmap.get(self.basepoint, self.basepoint) != self.basepoint:
                bad.append(f"action of {G.names[g]} moves the basepoint")
        # homomorphism property
        for g in G.elements:
            for h in G.elements:
                gh = G.mul(g, h)
                for e in range(self.n_edges):
                    if self.edge_action[g][self.edge_action[h][e]] != self.edge_action[gh][e]:
                        bad.append(f"action is not a homomorphism at "
                                   f"({G.names[g]}, {G.names[h]})")
                        break
                else:
                    continue
                break
        # admissibility
        for v in range(self.n_vertices):
            val = self.valence(v)
            if v == self.basepoint:
                if val < 2:
                    bad.append(f"basepoint has valence {val} < 2")
            elif val < 3:
                which = "free edge" if val == 1 else f"valence {val}"
                bad.append(f"vertex {self.vertex_names[v]}: {which} "
                           "(non-basepoint valence must be >= 3)")
        return bad

    def require_valid(self):
        bad = self.validate()
        if bad:
            raise ValidationError("; ".join(bad))


def _acyclic(g: GGraph, pairs) -> bool:
    """Whether the undirected subgraph on the given edge pairs is a forest."""
    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in pairs:
        u, v = g.term[2 * p], g.term[2 * p + 1]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def pair_orbits(g: GGraph):
    """Orbits of undirected edge pairs under the group action."""
    seen = set()
    orbits = []
    for p in range(g.n_pairs):
        if p in seen:
            continue
        orb = {g.edge_action[x][2 * p] // 2 for x in g.group.elements}
        seen |= orb
        orbits.append(frozenset(orb))
    return orbits


def invariant_forests(g: GGraph):
    """All nonempty G-invariant forests, as frozensets of pair indices.

    Deterministic order: by (number of orbits used, sorted pair ids).
    """
    usable = [o for o in pair_orbits(g)
              if all(not g.is_loop(2 * p) for p in o) and _acyclic(g, o)]
    usable.sort(key=lambda o: sorted(o))
    out = []
    for r in range(1, len(usable) + 1):
        for combo in itertools.combinations(usable, r):
            pairs = frozenset().union(*combo)
            if _acyclic(g, pairs):
                out.append(pairs)
    out.sort(key=lambda f: (len(f), sorted(f)))
    return out


def maximal_invariant_forest(g: GGraph):
    """Greedy maximal invariant forest (possibly empty), deterministic."""
    usable = sorted((o for o in pair_orbits(g)), key=lambda o: sorted(o))
    acc = set()
    for o in usable:
        cand = acc | o
        if all(not g.is_loop(2 * p) for p in o) and _acyclic(g, cand):
            acc = cand
    return frozenset(acc)


def is_reduced(g: GGraph) -> bool:
    """No nonempty invariant forest exists (nothing collapsible)."""
    return not invariant_forests(g)


def collapse(g: GGraph, forest):
    """Collapse an invariant forest.  Returns (graph, vertex_map, edge_map).

    vertex_map[v] is the image vertex; edge_map maps each surviving old
    directed edge to its new id.
    """
    forest = frozenset(forest)
    if not all(
        frozenset(g.edge_action[x][2 * p] // 2 for p in forest) == forest
        for x in g.group.elements
    ):
        raise ValidationError("forest is not invariant under the group action")
    if not _acyclic(g, forest):
        raise ValidationError("forest contains a cycle")

    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in forest:
        parent[find(g.term[2 * p])] = find(g.term[2 * p + 1])

    reps = sorted({find(v) for v in range(g.n_vertices)})
    vidx = {r: i for i, r in enumerate(reps)}
    vmap = tuple(vidx[find(v)] for v in range(g.n_vertices))

    survivors = [p for p in range(g.n_pairs) if p not in forest]
    emap = {}
    for i, p in enumerate(survivors):
        emap[2 * p] = 2 * i
        emap[2 * p + 1] = 2 * i + 1

    term = tuple(vmap[g.term[2 * p + d]] for p in survivors for d in (0, 1))
    action = tuple(
        tuple(emap[g.edge_action[x][2 * p + d]] for p in survivors for d in (0, 1))
        for x in g.group.elements
    )
    vnames = tuple(g.vertex_names[reps[i]] for i in range(len(reps)))
    pnames = tuple(g.pair_names[p] for p in survivors)
    out = GGraph(len(reps), vmap[g.basepoint], term, g.group, action, vnames, pnames)
    return out, vmap, emap
