"""Markings of G-graphs by a free group basis.

A marking stores one reduced edge loop at the basepoint per basis
generator.  Applying a group element to all basis loops realizes that
element as a free group automorphism, so a marked G-graph is a point of
the fixed set of the realized subgroup of Aut(F_n).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import freegroup as fg
from .errors import ValidationError
from .ggraph import GGraph, collapse, rev


def reduce_path(steps):
    """Cancel adjacent (e, ~e) backtracks."""
    out = []
    for e in steps:
        if out and out[-1] == rev(e):
            out.pop()
        else:
            out.append(e)
    return tuple(out)


def is_consecutive(g: GGraph, steps, start):
    at = start
    for e in steps:
        if g.init(e) != at:
            return False
        at = g.term[e]
    return True


def path_inv(steps):
    return tuple(rev(e) for e in reversed(steps))


def act_path(g: GGraph, x, steps):
    return tuple(g.edge_action[x][e] for e in steps)


def cyclic_canonical(steps):
    """Lex-least rotation; canonical form of a cyclically reduced loop."""
    if not steps:
        return ()
    rots = [steps[i:] + steps[:i] for i in range(len(steps))]
    return min(rots)


@dataclass(frozen=True)
class MarkedGGraph:
    """G-graph plus basis loops; optionally a claimed realization in Aut(F_n)."""

    graph: GGraph
    basis_paths: tuple  # one reduced loop at the basepoint per generator
    realization: tuple = None  # optional: one FreeAutomorphism per group element

    @property
    def n(self):
        return len(self.basis_paths)

    def validate(self):
        g = self.graph
        bad = list(g.validate())
        for j, p in enumerate(self.basis_paths):
            if not is_consecutive(g, p, g.basepoint) or (p and g.term[p[-1]] != g.basepoint):
                bad.append(f"marking path for x{j + 1} is not a loop at the basepoint")
            if reduce_path(p) != tuple(p):
                bad.append(f"marking path for x{j + 1} is not reduced")
        if bad:
            return bad
        # rank of pi_1 must match the basis size
        rank = g.n_pairs - g.n_vertices + 1
        if rank != self.n:
            bad.append(f"graph has rank {rank} but marking has {self.n} generators")
            return bad
        tree = spanning_tree(g)
        words = [path_to_subgroup_word(g, tree, p) for p in self.basis_paths]
        if not fg.generates_free_group(words, g.n_pairs - len(tree)):
            bad.append("marking loops do not generate the fundamental group")
        return bad

    def require_valid(self):
        bad = self.validate()
        if bad:
            raise ValidationError("; ".join(bad))


def spanning_tree(g: GGraph):
    """BFS spanning tree from the basepoint, as a frozenset of pair ids."""
    seen = {g.basepoint}
    tree = set()
    frontier = [g.basepoint]
    while frontier:
        nxt = []
        for v in frontier:
            for e in range(g.n_edges):
                if g.init(e) == v and g.term[e] not in seen:
                    seen.add(g.term[e])
                    tree.add(e // 2)
                    nxt.append(g.term[e])
        frontier = nxt
    if len(seen) != g.n_vertices:
        raise ValidationError("graph is not connected")
    return frozenset(tree)


def path_to_subgroup_word(g: GGraph, tree, steps):
    """Read a loop as a word in the non-tree pair generators."""
    nontree = sorted(p for p in range(g.n_pairs) if p not in tree)
    gen = {p: i + 1 for i, p in enumerate(nontree)}
    out = []
    for e in steps:
        p = e // 2
        if p in tree:
            continue
        out.append(gen[p] if e % 2 == 0 else -gen[p])
    return fg.reduce_word(out)


def path_of_word(m: MarkedGGraph, word):
    """The unique reduced basepoint loop representing a word."""
    steps = []
    for l in word:
        p = m.basis_paths[abs(l) - 1]
        steps.extend(p if l > 0 else path_inv(p))
    return reduce_path(steps)


def loop_of_class(m: MarkedGGraph, cls):
    """Cyclically reduced loop of a conjugacy class, rotation-canonical."""
    word = cls.rep if isinstance(cls, fg.ConjClass) else fg.conj_class_rep(cls)
    steps = list(path_of_word(m, word))
    while len(steps) >= 2 and steps[0] == rev(steps[-1]):
        steps = steps[1:-1]
    return cyclic_canonical(tuple(steps))


def lyndon_length(m: MarkedGGraph, word) -> int:
    """Distance the word moves the basepoint in the universal cover."""
    return len(path_of_word(m, word))


def induced_images(m: MarkedGGraph, x):
    """Image paths of the basis loops under group element x."""
    return tuple(reduce_path(act_path(m.graph, x, p)) for p in m.basis_paths)


def verify_realization(m: MarkedGGraph):
    """Check the claimed realization against the graph action.

    For every group element x and generator j the path of phi_x(x_j) must
    be the x-image of the path of x_j.  Returns a list of witnesses (empty
    means OK).  With no claimed realization there is nothing to check: the
    graph action always induces *some* subgroup of Aut(F_n).
    """
    if m.realization is None:
        return []
    g = m.graph
    bad = []
    for x in g.group.elements:
        phi = m.realization[x]
        for j in range(m.n):
            want = reduce_path(act_path(g, x, m.basis_paths[j]))
            got = path_of_word(m, phi.apply((j + 1,)))
            if want != got:
                bad.append(
                    f"realization of {g.group.names[x]} fails at x{j + 1}: "
                    f"path {got} != action image {want}")
    return bad


def marked_isomorphic(m1: MarkedGGraph, m2: MarkedGGraph) -> bool:
    """Equality as points: an equivariant basepoint-preserving isomorphism
    carrying the basis loops of m1 to those of m2."""
    g1, g2 = m1.graph, m2.graph
    if (g1.n_vertices != g2.n_vertices or g1.n_pairs != g2.n_pairs
            or g1.group.mult != g2.group.mult or m1.n != m2.n):
        return False

    pairs1 = list(range(g1.n_pairs))

    def extend(vmap, emap, i):
        # emap maps directed edges of g1 to directed edges of g2
        if i == len(pairs1):
            for x in g1.group.elements:
                for e, im in emap.items():
                    if emap.get(g1.edge_action[x][e]) != g2.edge_action[x][im]:
                        return False
                for v, iv in vmap.items():
                    if vmap.get(g1.act_vertex(x, v)) != g2.act_vertex(x, iv):
                        return False
            for p1, p2 in zip(m1.basis_paths, m2.basis_paths):
                if tuple(emap[e] for e in p1) != tuple(p2):
                    return False
            return True
        p = pairs1[i]
        used = set(emap.values())
        for e2 in range(g2.n_edges):
            if e2 in used:
                continue
            for d1, d2 in ((2 * p, e2), (2 * p + 1, e2)):
                vm = dict(vmap)
                em = dict(emap)
                ok = True
                for a, b in ((d1, d2), (rev(d1), rev(d2))):
                    em[a] = b
                    tv = g1.term[a]
                    if tv in vm:
                        if vm[tv] != g2.term[b]:
                            ok = False
                            break
                    elif g2.term[b] in vm.values():
                        ok = False
                        break
                    else:
                        vm[tv] = g2.term[b]
                if ok and extend(vm, em, i + 1):
                    return True
        return False

    return extend({g1.basepoint: g2.basepoint}, {}, 0)


def collapse_marked(m: MarkedGGraph, forest):
    """Collapse an invariant forest and push the marking forward."""
    g2, vmap, emap = collapse(m.graph, forest)
    directed = {2 * p for p in forest} | {2 * p + 1 for p in forest}
    paths = tuple(
        reduce_path([emap[e] for e in p if e not in directed])
        for p in m.basis_paths
    )
    return MarkedGGraph(g2, paths, m.realization), vmap, emap
