"""Independent brute-force oracles the tests compare the package against.

Everything here is deliberately naive and written from the definitions,
not by calling back into the package's optimized code paths.
"""

import itertools


def naive_reduce(letters):
    """Repeatedly delete the first adjacent cancelling pair (quadratic scan)."""
    out = list(letters)
    while True:
        for i in range(len(out) - 1):
            if out[i] == -out[i + 1]:
                del out[i:i + 2]
                break
        else:
            return tuple(out)


def brute_reduced_words(n, horizon):
    """All nonempty reduced words of length <= horizon by raw product filtering."""
    letters = [l for i in range(1, n + 1) for l in (i, -i)]
    out = []
    for k in range(1, horizon + 1):
        for w in itertools.product(letters, repeat=k):
            if all(w[i] != -w[i + 1] for i in range(k - 1)):
                out.append(w)
    return out


def rotations(word):
    return {word[i:] + word[:i] for i in range(max(len(word), 1))}


def conjugate_by_rotation(u, v):
    """Whether the cyclic reductions of u and v are rotations of each other."""
    return rotations(naive_cyclic_reduce(u)) == rotations(naive_cyclic_reduce(v))


def naive_cyclic_reduce(word):
    w = naive_reduce(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def coset_partition_ok(group, P, reps, Q):
    """The double cosets P x Q for the given reps partition the group."""
    seen = []
    for x in reps:
        coset = {group.mul(group.mul(p, x), q) for p in P for q in Q}
        seen.append(coset)
    union = set().union(*seen) if seen else set()
    pairwise_disjoint = all(
        not (a & b) for a, b in itertools.combinations(seen, 2))
    return union == set(group.elements) and pairwise_disjoint


def is_subgroup(group, H):
    Hs = set(H)
    if 0 not in Hs:  # the identity is always element 0
        return False
    return all(group.mul(a, b) in Hs for a in Hs for b in Hs)


def all_subgroups(group):
    """Brute force over subsets (only for very small groups)."""
    els = list(group.elements)
    out = []
    for r in range(1, len(els) + 1):
        for combo in itertools.combinations(els, r):
            if 0 in combo and is_subgroup(group, combo):
                out.append(frozenset(combo))
    return set(out)


def path_occurrences(steps, e):
    return sum(1 for s in steps if s == e)
