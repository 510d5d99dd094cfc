"""Property suites shared by the CLI selftest command and the test suite.

Each check either returns quietly or raises PropertyViolation with a
minimal witness description.  Suites aggregate checks over the named
fixtures plus seeded random instances and report one line per check.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import HypothesisNotMet, PropertyViolation
from .fixtures import all_fixtures, random_instance
from .ggraph import is_reduced, maximal_invariant_forest, rev
from .idealedges import (IdealEdge, canonical_rep, crossing, d_set,
                         enumerate_ideal_edges, is_ideal_edge, is_invertible,
                         orbit_union, stab_set, translates)
from .marking import collapse_marked
from .moves import (blow_up, greedy_reduce, max_reductive_pair, reductivity,
                    whitehead)
from .norms import calculator
from .starcomplex import (family, gamma_edge, reduced_homology,
                          reductive_orbits, run_retractions, star_complex)


@dataclass
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str = ""


def _vec_le(u, v):
    return all(a <= b for a, b in zip(u.coords, v.coords))


def reduce_to_forest_free(m):
    while True:
        forest = maximal_invariant_forest(m.graph)
        if not forest:
            return m
        m, _, _ = collapse_marked(m, forest)


# ---------------------------------------------------------------------------
# norm checks


def check_norm_consistency(m, horizon):
    """norm() recomputes each kind two ways and hard-errors on mismatch."""
    calc = calculator(m, horizon)
    for kind in ("out", "aut"):
        calc.norm(kind)


def check_inclusion_exclusion(m, A, B, kind, horizon):
    """|A u B| = |A| + |B| - 2(A.B) for disjoint A and B."""
    calc = calculator(m, horizon)
    lhs = calc.set_abs(A | B, kind)
    rhs = calc.set_abs(A, kind) + calc.set_abs(B, kind) - calc.dot(A, B, kind).scale(2)
    if lhs.coords != rhs.coords:
        raise PropertyViolation(
            f"inclusion-exclusion fails ({kind}): A={sorted(A)} B={sorted(B)} "
            f"|AuB|={lhs.coords} rhs={rhs.coords}")


def out_identity_holds(m, A, horizon):
    """|A|_out equals (A . (E - A))_out; true for out, not for aut."""
    calc = calculator(m, horizon)
    comp = frozenset(range(m.graph.n_edges)) - frozenset(A)
    return calc.set_abs(A, "out").coords == calc.dot(A, comp, "out").coords


def aut_identity_counterexample(m, A, horizon):
    """A witness that the out-only identity fails for the aut absolute value."""
    calc = calculator(m, horizon)
    comp = frozenset(range(m.graph.n_edges)) - frozenset(A)
    return calc.set_abs(A, "aut").coords != calc.dot(A, comp, "aut").coords


def check_coset_identity(m, K, e, A, kind, horizon):
    """((Ke).A) = [K:stab_K(e)] (e.A) for K-invariant A, stab(e) <= K."""
    g = m.graph
    calc = calculator(m, horizon)
    Ke = frozenset(g.edge_action[k][e] for k in K)
    lhs = calc.dot(Ke, A, kind)
    rhs = calc.dot(frozenset({e}), A, kind).scale(len(Ke))
    if lhs.coords != rhs.coords:
        raise PropertyViolation(
            f"coset identity fails ({kind}): K={K} e={e} A={sorted(A)} "
            f"lhs={lhs.coords} rhs={rhs.coords}")


def coset_cases(m):
    """All (K, e, A) triples satisfying the hypotheses, for small graphs."""
    g = m.graph
    edges = list(range(g.n_edges))
    for K in g.group.subgroups():
        Kset = frozenset(K)
        invariant = [A for A in _small_subsets(edges)
                     if all(frozenset(g.edge_action[k][a] for a in A) == A
                            for k in K)]
        for e in edges:
            if not set(g.stab_edge(e)) <= Kset:
                continue
            for A in invariant:
                yield K, e, A


def _small_subsets(edges, max_size=3):
    for r in range(1, min(max_size, len(edges)) + 1):
        for combo in itertools.combinations(edges, r):
            yield frozenset(combo)


# ---------------------------------------------------------------------------
# move checks


def check_norm_change(m, alpha, a, horizon):
    """The Whitehead move changes each norm by [G:stab(alpha)](|alpha|-|a|)."""
    calc = calculator(m, horizon)
    m2 = whitehead(m, alpha, a)
    calc2 = calculator(m2, horizon)
    idx = m.graph.group.order // len(stab_set(m.graph, alpha.edges))
    for kind in ("out", "aut", "tot"):
        before = calc.norm(kind) if kind != "tot" else _tot_norm(calc)
        after = calc2.norm(kind) if kind != "tot" else _tot_norm(calc2)
        delta = (calc.set_abs(alpha.edges, kind)
                 - calc.edge_abs(a, kind)).scale(idx)
        if after.coords != (before + delta).coords:
            raise PropertyViolation(
                f"norm-change law fails ({kind}) for alpha={alpha.key()} "
                f"a={a}: after={after.coords} expected={(before + delta).coords}")


def _tot_norm(calc):
    # norm() validates out and aut separately; tot is their concatenation
    from .norms import NormVector
    out = calc.norm("out")
    aut = calc.norm("aut")
    return NormVector("tot", out.n, out.horizon, out.coords + aut.coords)


def check_blowup_correspondence(m, alpha, horizon):
    """|alpha| in the graph equals |e(alpha)| in the blow-up, both kinds."""
    calc = calculator(m, horizon)
    m2, info = blow_up(m, alpha)
    calc2 = calculator(m2, horizon)
    e_new = info.edge_for(frozenset(alpha.edges))
    for kind in ("out", "aut"):
        want = calc.set_abs(alpha.edges, kind)
        got = calc2.edge_abs(e_new, kind)
        if want.coords != got.coords:
            raise PropertyViolation(
                f"blow-up correspondence fails ({kind}) for {alpha.key()}: "
                f"|alpha|={want.coords} |e(alpha)|={got.coords}")


def check_blowup_roundtrip(m, alpha):
    """Collapsing the new orbit after a blow-up restores the instance."""
    from .cli import canonical_text
    m2, info = blow_up(m, alpha)
    new_pairs = frozenset(e // 2 for e in info.new_edges)
    m3, _, _ = collapse_marked(m2, new_pairs)
    if canonical_text(m3) != canonical_text(m):
        raise PropertyViolation(
            f"blow-up/collapse round trip altered the instance for "
            f"{alpha.key()}")


# ---------------------------------------------------------------------------
# lemma checks


def _cohabiting_pairs(m):
    """(alpha, beta translate) pairs at a shared vertex, distinct orbits."""
    g = m.graph
    reps = enumerate_ideal_edges(m)
    for alpha, beta in itertools.permutations(reps, 2):
        for t in translates(g, beta):
            if t.vertex == alpha.vertex:
                yield alpha, t
                break


def check_crossing_inequalities(m, horizon):
    """Lemmas on simple crossings and component removal, per coordinate."""
    g = m.graph
    calc = calculator(m, horizon)
    checked = 0
    for alpha, beta in _cohabiting_pairs(m):
        cr = crossing(g, alpha, beta)
        if cr.number == 0:
            continue
        P = stab_set(g, alpha.edges)
        Q = stab_set(g, beta.edges)
        p = g.group.order // len(P)
        q = g.group.order // len(Q)
        for kind in ("out", "aut"):
            if cr.number == 1 and set(P) <= set(Q):
                Qalpha = frozenset().union(
                    *(g.act_edge_set(x, alpha.edges) for x in Q))
                lhs = (calc.set_abs(alpha.edges & beta.edges, kind).scale(p)
                       + calc.set_abs(beta.edges | Qalpha, kind).scale(q))
                rhs = (calc.set_abs(alpha.edges, kind).scale(p)
                       + calc.set_abs(beta.edges, kind).scale(q))
                if not _vec_le(lhs, rhs):
                    raise PropertyViolation(
                        f"simple-crossing inequality fails ({kind}): "
                        f"alpha={alpha.key()} beta={beta.key()}")
                checked += 1
            for gamma, gamma_d in zip(cr.components, cr.dual_components):
                lhs = (calc.set_abs(alpha.edges - gamma, kind).scale(p)
                       + calc.set_abs(beta.edges - gamma_d, kind).scale(q))
                rhs = (calc.set_abs(alpha.edges, kind).scale(p)
                       + calc.set_abs(beta.edges, kind).scale(q))
                if not _vec_le(lhs, rhs):
                    raise PropertyViolation(
                        f"component-removal inequality fails ({kind}): "
                        f"alpha={alpha.key()} beta={beta.key()} "
                        f"gamma={sorted(gamma)}")
                checked += 1
    return checked


def _is_reductive_set(m, edges, vertex, kind, horizon):
    g = m.graph
    edges = frozenset(edges)
    if not is_ideal_edge(g, vertex, edges):
        return False
    alpha = IdealEdge(vertex, edges)
    for a in d_set(m, alpha):
        if reductivity(m, alpha, a, kind, horizon).is_reductive:
            return True
    return False


def check_pushing_lemma(m, horizon, kind="aut"):
    """Either both mu-alpha and alpha-mu, or both alpha u Pmu and
    alpha n mu, are reductive (for reductive alpha containing m crossing
    mu simply)."""
    g = m.graph
    pair = max_reductive_pair(m, horizon, kind)
    if pair is None:
        return 0
    mu, mhat = pair.edge, pair.collapse_target
    checked = 0
    for alpha in enumerate_ideal_edges(m):
        t = None
        for tr in translates(g, alpha):
            if mhat in tr.edges:
                t = tr
                break
        if t is None or t.vertex != mu.vertex:
            continue
        if orbit_union(g, t) == orbit_union(g, mu):
            continue
        if crossing(g, canonical_rep(g, t), mu).number != 1:
            continue
        if not any(reductivity(m, t, a, kind, horizon).is_reductive
                   for a in d_set(m, t)):
            continue
        P = stab_set(g, t.edges)
        Pmu = frozenset().union(*(g.act_edge_set(x, mu.edges) for x in P))
        first = (_is_reductive_set(m, mu.edges - t.edges, mu.vertex, kind, horizon)
                 and _is_reductive_set(m, t.edges - mu.edges, mu.vertex, kind,
                                       horizon))
        second = (_is_reductive_set(m, t.edges | Pmu, mu.vertex, kind, horizon)
                  and _is_reductive_set(m, t.edges & mu.edges, mu.vertex, kind,
                                        horizon))
        if not (first or second):
            raise PropertyViolation(
                f"pushing lemma fails ({kind}): mu={mu.key()} m={mhat} "
                f"alpha={t.key()}")
        checked += 1
    return checked


def check_shrinking_lemma(m, horizon, kind="aut"):
    """beta or one of the m-free intersection components is reductive."""
    g = m.graph
    pair = max_reductive_pair(m, horizon, kind)
    if pair is None:
        return 0
    mu, mhat = pair.edge, pair.collapse_target
    m_orbit = frozenset(g.edge_action[x][mhat] for x in g.group.elements)
    checked = 0
    for alpha in enumerate_ideal_edges(m):
        for t in translates(g, alpha):
            if t.vertex == mu.vertex:
                break
        else:
            continue
        if orbit_union(g, t) == orbit_union(g, mu):
            continue
        cr = crossing(g, canonical_rep(g, t), mu)
        if cr.number == 0:
            continue
        rep = canonical_rep(g, t)
        # the source proof assumes alpha itself is reductive
        if not _is_reductive_set(m, rep.edges, rep.vertex, kind, horizon):
            continue
        no_m = [c for c in cr.components if not (c & m_orbit)]
        beta = rep.edges - (frozenset().union(*no_m) if no_m else frozenset())
        candidates = list(no_m) + [beta]
        if not any(_is_reductive_set(m, c, rep.vertex, kind, horizon)
                   for c in candidates if c):
            raise PropertyViolation(
                f"shrinking lemma fails ({kind}): mu={mu.key()} "
                f"alpha={rep.key()}")
        checked += 1
    return checked


def check_invertible_reductive(m, horizon):
    """Inverses of invertible tot-reductive edges are tot-reductive."""
    g = m.graph
    if not is_reduced(g):
        return 0
    checked = 0
    for alpha in enumerate_ideal_edges(m):
        if alpha.vertex != g.basepoint:
            continue
        inv, ainv = is_invertible(g, alpha)
        if not inv:
            continue
        if not _is_reductive_set(m, alpha.edges, alpha.vertex, "tot", horizon):
            continue
        if not _is_reductive_set(m, ainv.edges, ainv.vertex, "tot", horizon):
            raise PropertyViolation(
                f"invertible reductive edge {alpha.key()} has "
                "non-reductive inverse")
        checked += 1
    return checked


def check_conjugation_edge(m, horizon):
    """At most one non-invertible full-stabilizer reductive edge at *;
    the corresponding move is out-norm neutral."""
    if not is_reduced(m.graph):
        return 0
    R = reductive_orbits(m, "tot", horizon)
    gamma = gamma_edge(m, R, horizon)  # raises when two exist
    if gamma is None:
        return 0
    calc = calculator(m, horizon)
    for c in sorted(d_set(m, gamma)):
        m2 = whitehead(m, gamma, c)
        calc2 = calculator(m2, horizon)
        if calc.norm("out").coords != calc2.norm("out").coords:
            raise PropertyViolation(
                f"conjugation move ({gamma.key()},{c}) changed the out-norm")
    return 1


# ---------------------------------------------------------------------------
# suites


def _corpus(seed, count):
    items = list(all_fixtures().items())
    for i in range(count):
        items.append((f"random-{seed}-{i}", random_instance(seed * 1000 + i)))
    return items


def suite_norms(seed, horizon, random_count=10):
    rng = random.Random(seed)
    results = []
    for name, m in _corpus(seed, random_count):
        try:
            check_norm_consistency(m, horizon)
            edges = list(range(m.graph.n_edges))
            for _ in range(20):
                k = rng.randrange(1, len(edges))
                A = frozenset(rng.sample(edges, k))
                rest = [e for e in edges if e not in A]
                if not rest:
                    continue
                B = frozenset(rng.sample(rest, rng.randrange(1, len(rest) + 1)))
                for kind in ("out", "aut"):
                    check_inclusion_exclusion(m, A, B, kind, horizon)
                if not out_identity_holds(m, A, horizon):
                    raise PropertyViolation(
                        f"out identity |A|=(A.E-A) fails for A={sorted(A)}")
            for K, e, A in coset_cases(m):
                for kind in ("out", "aut"):
                    check_coset_identity(m, K, e, A, kind, horizon)
            results.append(CheckResult("norms", name, True))
        except PropertyViolation as exc:
            results.append(CheckResult("norms", name, False, str(exc)))
    return results


def suite_lemmas(seed, horizon, random_count=10):
    results = []
    for name, m in _corpus(seed, random_count):
        try:
            for alpha in enumerate_ideal_edges(m):
                check_blowup_correspondence(m, alpha, horizon)
                check_blowup_roundtrip(m, alpha)
                for a in sorted(d_set(m, alpha)):
                    check_norm_change(m, alpha, a, horizon)
            check_crossing_inequalities(m, horizon)
            check_pushing_lemma(m, horizon)
            check_shrinking_lemma(m, horizon)
            red = reduce_to_forest_free(m)
            check_invertible_reductive(red, horizon)
            check_conjugation_edge(red, horizon)
            results.append(CheckResult("lemmas", name, True))
        except PropertyViolation as exc:
            results.append(CheckResult("lemmas", name, False, str(exc)))
    return results


def suite_star(seed, horizon, random_count=10):
    results = []
    for name, m in _corpus(seed, random_count):
        try:
            red = reduce_to_forest_free(m)
            R = reductive_orbits(red, "tot", horizon)
            if R:
                C0 = family(red, "C0", horizon)
                C0p = family(red, "C0p", horizon)
                C1 = family(red, "C1", horizon)
                if not (C0 <= C0p <= C1 <= R):
                    raise PropertyViolation(
                        "family nesting C0 <= C0' <= C1 <= R fails")
                betti = reduced_homology(star_complex(red, R))
                if any(b != 0 for b in betti):
                    raise PropertyViolation(
                        f"S(R) has nonzero reduced homology {betti}")
            trace = run_retractions(red, horizon)
            if trace.status == "done" and len(trace.final_forests) != 1:
                raise PropertyViolation(
                    "retraction finished without a single final forest")
            results.append(CheckResult("star", name, True, trace.status))
        except PropertyViolation as exc:
            results.append(CheckResult("star", name, False, str(exc)))
    return results


SUITES = {"norms": suite_norms, "lemmas": suite_lemmas, "star": suite_star}


def run_suites(which, seed, horizon, random_count=10):
    names = list(SUITES) if which == "all" else [which]
    results = []
    for n in names:
        results.extend(SUITES[n](seed, horizon, random_count))
    return results
