"""Blow-ups, Whitehead moves, reductivity, and greedy descent.

Frozen facts derived by hand: in the rose marked x1 -> a, x2 -> ba, the
move that pulls {b, ~a} off the basepoint and collapses along ~a rewrites
ba to b, shortening the second loop; it is the unique maximally reductive
pair, and one step reaches the identity-marked rose.
"""

import pytest

from gwhitehead.errors import HypothesisNotMet, PropertyViolation
from gwhitehead.fixtures import all_fixtures, fix_r2, fix_r2_swap, fix_r2w
from gwhitehead.idealedges import IdealEdge, d_set, enumerate_ideal_edges
from gwhitehead.marking import collapse_marked, marked_isomorphic
from gwhitehead.moves import (blow_up, candidate_pairs, greedy_reduce,
                              max_reductive_pair, reductivity, whitehead)
from gwhitehead.norms import calculator
from gwhitehead.selftest import (check_blowup_correspondence,
                                 check_blowup_roundtrip, check_norm_change)

from conftest import HORIZON


def test_blow_up_structure_on_swapped_rose():
    m = fix_r2_swap()
    m2, info = blow_up(m, IdealEdge(0, frozenset({0, 2})))
    # {a, b} is swap-invariant: one new vertex, one new pair, and both
    # marking loops now travel out along the new edge
    assert m2.graph.n_vertices == 2
    assert m2.graph.n_pairs == 3
    assert info.new_edges == (4,)
    assert m2.basis_paths == ((0, 4), (2, 4))
    assert m2.validate() == []


def test_blow_up_creates_one_vertex_per_translate():
    m = fix_r2_swap()
    # {a, ~b} has two translates under the swap
    m2, info = blow_up(m, IdealEdge(0, frozenset({0, 3})))
    assert m2.graph.n_vertices == 3
    assert len(info.new_edges) == 2
    assert m2.validate() == []


def test_blow_up_rejects_non_ideal_edge():
    from gwhitehead.errors import ValidationError
    with pytest.raises(ValidationError):
        blow_up(fix_r2(), IdealEdge(0, frozenset({0})))


def test_blow_up_roundtrip(named_instance):
    for alpha in enumerate_ideal_edges(named_instance):
        check_blowup_roundtrip(named_instance, alpha)


def test_blow_up_correspondence(named_instance):
    for alpha in enumerate_ideal_edges(named_instance):
        check_blowup_correspondence(named_instance, alpha, HORIZON)


def test_whitehead_requires_collapse_target():
    m = fix_r2()
    alpha = IdealEdge(0, frozenset({0, 2}))
    bad = next(e for e in range(4) if e not in d_set(m, alpha))
    with pytest.raises(HypothesisNotMet):
        whitehead(m, alpha, bad)


def test_norm_change_law(named_instance):
    for alpha, a in candidate_pairs(named_instance):
        check_norm_change(named_instance, alpha, a, HORIZON)


def test_max_reductive_pair_frozen():
    m = fix_r2w()
    pair = max_reductive_pair(m, HORIZON)
    assert pair.edge.key() == (0, (1, 2))  # {~a, b}
    assert pair.collapse_target == 1       # collapse along ~a
    red = reductivity(m, pair.edge, pair.collapse_target, "tot", HORIZON)
    assert red.is_reductive
    assert red.value.coords[:6] == (0, 0, 1, 1, 0, 1)


def test_minimal_instances_have_no_reductive_pair():
    assert max_reductive_pair(fix_r2(), HORIZON) is None
    assert max_reductive_pair(fix_r2_swap(), HORIZON) is None


def test_greedy_reduce_fixes_the_marking():
    m = fix_r2w()
    final, log = greedy_reduce(m, HORIZON)
    assert len(log) == 1
    assert log[0].kind == "whitehead"
    assert final.graph.n_vertices == 1 and final.graph.n_pairs == 2
    assert calculator(final, 1).norm("out").coords == (1, 1, 1, 1)
    assert marked_isomorphic(final, fix_r2())


def test_greedy_reduce_is_idempotent_on_minima(named_instance):
    if named_instance.graph.n_vertices > 1:
        pytest.skip("starts with a collapsible forest; covered elsewhere")
    final, log = greedy_reduce(named_instance, HORIZON)
    final2, log2 = greedy_reduce(final, HORIZON)
    assert not log2
    assert marked_isomorphic(final, final2)


def test_greedy_reduce_collapses_forests_first():
    m = all_fixtures()["FIX-THETA"]
    final, log = greedy_reduce(m, HORIZON)
    assert log and log[0].kind == "collapse"
    assert final.graph.n_vertices == 1


def test_reductivity_requires_valid_target():
    m = fix_r2w()
    alpha = IdealEdge(0, frozenset({1, 2}))
    bad = next(e for e in range(4) if e not in d_set(m, alpha))
    with pytest.raises(HypothesisNotMet):
        reductivity(m, alpha, bad, "tot", HORIZON)
