"""Exact word arithmetic in a free group of finite rank.

Letters are nonzero ints: ``i`` is the i-th basis generator, ``-i`` its
inverse.  A word is a tuple of letters with no adjacent cancelling pair.
The global ordering used for all enumerations is shortlex with the letter
order x1 < x1^-1 < x2 < x2^-1 < ... so every norm vector in this package
is reproducible bit for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ValidationError

Word = tuple  # tuple of nonzero ints


def letter_key(letter: int) -> int:
    """Position of a letter in the order x1 < x1^-1 < x2 < x2^-1 < ..."""
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


def word_key(word):
    """Shortlex sort key."""
    return (len(word), tuple(letter_key(l) for l in word))


def check_letters(letters, n):
    for l in letters:
        if not isinstance(l, int) or l == 0 or abs(l) > n:
            raise ValidationError(f"invalid letter {l!r} for basis size {n}")


def reduce_word(letters, n=None) -> Word:
    """Freely reduce a raw letter sequence (stack scan)."""
    if n is not None:
        check_letters(letters, n)
    out = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def is_reduced(word) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def word_inv(word) -> Word:
    return tuple(-l for l in reversed(word))


def word_mul(*words) -> Word:
    return reduce_word([l for w in words for l in w])


def cyclic_reduce(word):
    """Split w = conj * core * conj^-1 with core cyclically reduced.

    Returns (core, conj).
    """
    w = list(word)
    conj = []
    while len(w) >= 2 and w[0] == -w[-1]:
        conj.append(w[0])
        w = w[1:-1]
    return tuple(w), tuple(conj)


def is_cyclically_reduced(word) -> bool:
    return is_reduced(word) and (len(word) < 2 or word[0] != -word[-1])


def _rotations(word):
    return [word[i:] + word[:i] for i in range(max(len(word), 1))]


def conj_class_rep(word) -> Word:
    """Canonical conjugacy-class representative.

    Shortlex-least cyclic rotation of the cyclically reduced core.  The
    classes of w and w^-1 stay distinct unless they happen to be conjugate.
    """
    core, _ = cyclic_reduce(word)
    if not core:
        return ()
    return min(_rotations(core), key=word_key)


@dataclass(frozen=True)
class ConjClass:
    """Conjugacy class, stored by its canonical representative."""

    rep: Word

    def __post_init__(self):
        if self.rep != conj_class_rep(self.rep):
            raise ValidationError(f"{self.rep} is not a canonical class representative")

    @classmethod
    def of(cls, word) -> "ConjClass":
        return cls(conj_class_rep(word))


@dataclass(frozen=True)
class FreeAutomorphism:
    """Endomorphism of F_n given by the images of the basis generators.

    Instances built from group realizations are automorphisms; use
    ``is_inverse_pair`` to certify invertibility when an inverse candidate
    is available.
    """

    images: tuple  # tuple of n Words

    @property
    def rank(self):
        return len(self.images)

    @classmethod
    def identity(cls, n) -> "FreeAutomorphism":
        return cls(tuple((i + 1,) for i in range(n)))

    def apply(self, word) -> Word:
        out = []
        for l in word:
            img = self.images[abs(l) - 1]
            out.extend(img if l > 0 else word_inv(img))
        return reduce_word(out)

    def compose(self, other: "FreeAutomorphism") -> "FreeAutomorphism":
        """self after other: (self.compose(other))(w) == self(other(w))."""
        return FreeAutomorphism(tuple(self.apply(im) for im in other.images))

    def is_identity(self) -> bool:
        return all(im == (i + 1,) for i, im in enumerate(self.images))


def apply_aut(phi: FreeAutomorphism, word) -> Word:
    return phi.apply(word)


def is_inverse_pair(phi: FreeAutomorphism, psi: FreeAutomorphism) -> bool:
    return phi.compose(psi).is_identity() and psi.compose(phi).is_identity()


def enumerate_words(n, horizon):
    """All nonempty reduced words of length <= horizon, in shortlex order."""
    if n < 1 or horizon < 1:
        raise ValidationError("need basis size >= 1 and horizon >= 1")
    letters = sorted((l for i in range(1, n + 1) for l in (i, -i)), key=letter_key)
    out = []
    layer = [()]
    for _ in range(horizon):
        nxt = []
        for w in layer:
            for l in letters:
                if w and w[-1] == -l:
                    continue
                nxt.append(w + (l,))
        out.extend(nxt)
        layer = nxt
    return out


def enumerate_classes(n, horizon):
    """Canonical representatives of nontrivial conjugacy classes.

    All classes whose cyclically reduced length is <= horizon, shortlex
    ordered on the canonical representative.
    """
    return [w for w in enumerate_words(n, horizon)
            if is_cyclically_reduced(w) and w == conj_class_rep(w)]


def generates_free_group(words, k) -> bool:
    """Whether the given words generate the free group on k letters.

    Stallings folding: build the wedge of word-loops, fold, and test that
    every basis letter traces a loop at the base state.
    """
    parent = [0]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        x, y = find(x), find(y)
        if x != y:
            parent[y] = x
        return x

    def new_state():
        parent.append(len(parent))
        return len(parent) - 1

    # positive-letter transitions as a list of [src, letter, dst]
    edges = []
    for w in words:
        prev = 0
        for i, l in enumerate(w):
            nxt = 0 if i == len(w) - 1 else new_state()
            if l > 0:
                edges.append([prev, l, nxt])
            else:
                edges.append([nxt, -l, prev])
            prev = nxt

    changed = True
    while changed:
        changed = False
        out = {}
        into = {}
        for idx, (u, l, v) in enumerate(edges):
            u, v = find(u), find(v)
            edges[idx] = [u, l, v]
            if (u, l) in out and out[(u, l)] != v:
                union(out[(u, l)], v)
                changed = True
                break
            out[(u, l)] = v
            if (v, l) in into and into[(v, l)] != u:
                union(into[(v, l)], u)
                changed = True
                break
            into[(v, l)] = u
        if changed:
            continue
        # drop duplicate edges
        seen = set()
        dedup = []
        for u, l, v in edges:
            if (u, l, v) not in seen:
                seen.add((u, l, v))
                dedup.append([u, l, v])
        edges = dedup

    base = find(0)
    loops = {(find(u), l, find(v)) for u, l, v in edges}
    return all((base, l, base) in loops for l in range(1, k + 1))
