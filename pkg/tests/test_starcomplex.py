"""Ideal forests, star complexes, homology, and the retraction engine.

Frozen facts derived by hand: the rose marked x1 -> a, x2 -> ba has
exactly two reductive orbits ({a, ~b} and {~a, b}), both compatible with
the maximal edge, so the star of the reductive family is three forests
(two vertices and their union edge) and contracts in one step.
"""

import itertools

import pytest

from gwhitehead.errors import HypothesisNotMet, ValidationError
from gwhitehead.fixtures import all_fixtures, fix_r2, fix_r2w
from gwhitehead.idealedges import IdealEdge, enumerate_ideal_edges, orbit_union
from gwhitehead.marking import collapse_marked, marked_isomorphic
from gwhitehead.moves import blow_up
from gwhitehead.selftest import reduce_to_forest_free
from gwhitehead.starcomplex import (IdealForest, SimplicialComplex,
                                    closure_pm, enumerate_ideal_forests,
                                    family, forest_violations, gamma_edge,
                                    is_ideal_forest, order_complex,
                                    reduced_homology, reductive_orbits,
                                    run_retractions, star_complex)

from conftest import HORIZON


# ---------------------------------------------------------------------------
# homology oracles on complexes with known answers


def _complex(faces):
    verts = tuple(sorted({v for f in faces for v in f}))
    idx = {v: i for i, v in enumerate(verts)}
    closed = set()
    for f in faces:
        f = tuple(f)
        for r in range(1, len(f) + 1):
            for sub in itertools.combinations(f, r):
                closed.add(frozenset(idx[v] for v in sub))
    return SimplicialComplex(verts, frozenset(closed))


def test_homology_point():
    assert reduced_homology(_complex([("a",)])) == (0,)


def test_homology_two_points():
    assert reduced_homology(_complex([("a",), ("b",)])) == (1,)


def test_homology_circle():
    K = _complex([("a", "b"), ("b", "c"), ("a", "c")])
    assert reduced_homology(K) == (0, 1)


def test_homology_disk():
    K = _complex([("a", "b", "c")])
    assert reduced_homology(K) == (0, 0, 0)


def test_homology_sphere():
    K = _complex([f for f in itertools.combinations("abcd", 3)])
    assert reduced_homology(K) == (0, 0, 1)


def test_complex_rejects_non_closed_face_sets():
    with pytest.raises(ValidationError):
        SimplicialComplex(("a", "b"), frozenset({frozenset({0, 1})}))


def test_order_complex_of_a_chain_is_contractible():
    K = order_complex(["a", "ab", "abc"], lambda x, y: set(x) <= set(y))
    assert K.dim == 2
    assert reduced_homology(K) == (0, 0, 0)


def test_order_complex_of_an_antichain_is_discrete():
    K = order_complex(["a", "b", "c"], lambda x, y: x == y)
    assert K.dim == 0
    assert reduced_homology(K) == (2,)


# ---------------------------------------------------------------------------
# ideal forests


FROZEN_FOREST_COUNTS = {
    "FIX-R2": 25, "FIX-R2-SWAP": 5, "FIX-R2W": 25, "FIX-THETA": 5,
}


@pytest.mark.parametrize("name", sorted(FROZEN_FOREST_COUNTS))
def test_frozen_forest_counts(name):
    m = reduce_to_forest_free(all_fixtures()[name])
    forests = enumerate_ideal_forests(m, enumerate_ideal_edges(m))
    assert len(forests) == FROZEN_FOREST_COUNTS[name]
    for f in forests:
        assert is_ideal_forest(m, f.orbits)


def test_forest_violations_flag_incompatible_pairs():
    m = fix_r2()
    a = IdealEdge(0, frozenset({0, 2}))
    b = IdealEdge(0, frozenset({0, 3}))
    assert forest_violations(m, (a, b))
    assert forest_violations(m, ())  # empty forest excluded


def test_forest_poset_order():
    f1 = IdealForest((IdealEdge(0, frozenset({0, 2})),))
    f2 = IdealForest((IdealEdge(0, frozenset({0, 2})),
                      IdealEdge(0, frozenset({1, 3}))))
    assert f1 <= f2
    assert not f2 <= f1


# ---------------------------------------------------------------------------
# blow-up realization of forests: the poset-isomorphism sanity check


def blow_up_forest(m, forest):
    """Blow up every orbit of a forest, outermost orbits first.

    Returns (marked graph, {orbit key: new pair ids}).  Edge ids are stable
    across successive blow-ups, so nested orbits stay well-defined; only
    their vertex has to be re-read from the current graph.
    """
    orbits = sorted(forest.orbits,
                    key=lambda a: (-len(orbit_union(m.graph, a)), a.key()))
    new_pairs = {}
    cur = m
    for a in orbits:
        v = cur.graph.term[sorted(a.edges)[0]]
        cur, info = blow_up(cur, IdealEdge(v, a.edges))
        new_pairs[a.key()] = frozenset(e // 2 for e in info.new_edges)
    return cur, new_pairs


def _fixture_forests(name):
    m = reduce_to_forest_free(all_fixtures()[name])
    return m, enumerate_ideal_forests(m, enumerate_ideal_edges(m))


@pytest.mark.parametrize("name", sorted(FROZEN_FOREST_COUNTS))
def test_distinct_forests_give_distinct_blowups(name):
    m, forests = _fixture_forests(name)
    blown = [blow_up_forest(m, f)[0] for f in forests]
    for i, j in itertools.combinations(range(len(blown)), 2):
        assert not marked_isomorphic(blown[i], blown[j]), (
            f"forests {forests[i].key()} and {forests[j].key()} "
            "blow up to the same marked graph")


@pytest.mark.parametrize("name", sorted(FROZEN_FOREST_COUNTS))
def test_subforest_blowup_is_collapse_ancestor(name):
    m, forests = _fixture_forests(name)
    for f in forests:
        big, pairs = blow_up_forest(m, f)
        for r in range(1, len(f.orbits)):
            for sub in itertools.combinations(f.orbits, r):
                if not is_ideal_forest(m, sub):
                    continue
                small = IdealForest(tuple(sub))
                drop = frozenset().union(
                    *(pairs[a.key()] for a in f.orbits if a not in sub))
                collapsed, _, _ = collapse_marked(big, drop)
                expect, _ = blow_up_forest(m, small)
                assert marked_isomorphic(collapsed, expect)


# ---------------------------------------------------------------------------
# families and retractions


def test_r2w_reductive_family_frozen():
    m = fix_r2w()
    R = reductive_orbits(m, "tot", HORIZON)
    assert sorted(a.key() for a in R) == [(0, (0, 3)), (0, (1, 2))]
    assert gamma_edge(m, R, HORIZON) is None
    for which in ("C0", "C0p", "C1"):
        assert family(m, which, HORIZON) == R
    assert closure_pm(m, R) == R


def test_family_nesting(named_instance):
    m = reduce_to_forest_free(named_instance)
    R = reductive_orbits(m, "tot", HORIZON)
    if not R:
        pytest.skip("no reductive orbits")
    C0 = family(m, "C0", HORIZON)
    C0p = family(m, "C0p", HORIZON)
    C1 = family(m, "C1", HORIZON)
    assert C0 <= C0p <= C1 <= R


def test_family_rejects_unknown_name():
    with pytest.raises(ValidationError):
        family(fix_r2w(), "C2", HORIZON)


def test_star_complex_of_reductive_family_is_acyclic(named_instance):
    m = reduce_to_forest_free(named_instance)
    R = reductive_orbits(m, "tot", HORIZON)
    if not R:
        pytest.skip("no reductive orbits")
    betti = reduced_homology(star_complex(m, R))
    assert all(b == 0 for b in betti)


def test_run_retractions_requires_reduced_input():
    with pytest.raises(HypothesisNotMet):
        run_retractions(all_fixtures()["FIX-THETA"], HORIZON)


FROZEN_STATUS = {
    "FIX-R2": "degenerate", "FIX-R2-SWAP": "degenerate",
    "FIX-THETA": "degenerate", "FIX-R2W": "done",
}


@pytest.mark.parametrize("name", sorted(FROZEN_STATUS))
def test_retraction_status_frozen(name):
    m = reduce_to_forest_free(all_fixtures()[name])
    trace = run_retractions(m, HORIZON, homology=True)
    assert trace.status == FROZEN_STATUS[name]
    for step in trace.steps:
        assert step.n_after <= step.n_before
        assert all(b == 0 for b in step.betti)
    if trace.status == "done":
        assert len(trace.final_forests) == 1


def test_r2w_retraction_trace_frozen():
    trace = run_retractions(fix_r2w(), HORIZON)
    assert trace.status == "done"
    assert [(s.stage, s.n_before, s.n_after) for s in trace.steps] == [
        ("C0->point", 3, 1)]
    assert trace.final_forests[0].key() == (((0, (1, 2))),)
