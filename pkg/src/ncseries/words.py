"""Noncommutative multi-indices (words) over the generators 1..n."""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterable, Iterator

MultiDegree = tuple[int, ...]
Embedding = tuple[int, ...]


class Word(tuple):
    """An immutable word of generator indices, ordered length-lexicographically.

    Equality and hashing are those of the underlying tuple, so a ``Word`` can be
    looked up with a plain tuple key.  Letters are 1-based; the alphabet size is
    carried by the containing series, not by the word.
    """

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()) -> "Word":
        return super().__new__(cls, letters)

    def __add__(self, other):
        return Word(tuple.__add__(self, tuple(other)))

    def __radd__(self, other):
        return Word(tuple(other) + tuple(self))

    def __getitem__(self, item):
        got = tuple.__getitem__(self, item)
        return Word(got) if isinstance(item, slice) else got

    def sort_key(self):
        return (len(self), tuple(self))

    def __lt__(self, other):
        return self.sort_key() < _key(other)

    def __le__(self, other):
        return self.sort_key() <= _key(other)

    def __gt__(self, other):
        return self.sort_key() > _key(other)

    def __ge__(self, other):
        return self.sort_key() >= _key(other)

    def reversed(self) -> "Word":
        return Word(tuple(self)[::-1])

    def check(self, n: int) -> "Word":
        for letter in self:
            if not 1 <= letter <= n:
                raise ValueError(f"letter {letter} outside the alphabet 1..{n}")
        return self

    def format(self, names=None) -> str:
        if not self:
            return "1"
        if names is None:
            return "*".join(f"x{i}" for i in self)
        return "*".join(names[i - 1] for i in self)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Word({', '.join(map(str, self))})" if self else "Word()"


EMPTY = Word()


def _key(w):
    return (len(w), tuple(w))


def concat(a: Iterable[int], b: Iterable[int]) -> Word:
    return Word(a) + Word(b)


def words_of_length(n: int, d: int) -> Iterator[Word]:
    """All n**d words of length d in lexicographic order."""
    for letters in itertools.product(range(1, n + 1), repeat=d):
        yield Word(letters)


def words_up_to(n: int, max_len: int) -> Iterator[Word]:
    for d in range(max_len + 1):
        yield from words_of_length(n, d)


def iter_embeddings(small: Iterable[int], big: Iterable[int]) -> Iterator[Embedding]:
    """Lazily yield every order-preserving letter-matching injection of small into big.

    Positions are 0-based indices into ``big``.  Branches that cannot be completed
    because too few letters remain are cut before they are descended.
    """
    small, big = tuple(small), tuple(big)
    m, t = len(small), len(big)
    if m > t:
        return
    positions = [0] * m

    def walk(k: int, start: int):
        if k == m:
            yield tuple(positions)
            return
        # the remaining m - k letters need m - k slots
        for p in range(start, t - (m - k) + 1):
            if big[p] == small[k]:
                positions[k] = p
                yield from walk(k + 1, p + 1)

    yield from walk(0, 0)


def embeddings(small: Iterable[int], big: Iterable[int]) -> list[Embedding]:
    return list(iter_embeddings(small, big))


def count_embeddings(small: Iterable[int], big: Iterable[int]) -> int:
    """The word binomial coefficient: number of embeddings of small into big.

    Counted by the usual subsequence dynamic programme, so it stays cheap even
    when the embeddings themselves are too many to list.
    """
    small, big = tuple(small), tuple(big)
    ways = [1] + [0] * len(small)
    for letter in big:
        for k in range(len(small), 0, -1):
            if small[k - 1] == letter:
                ways[k] += ways[k - 1]
    return ways[len(small)]


def subword_leq(small: Iterable[int], big: Iterable[int]) -> bool:
    """True iff small arises from big by deleting letters (or equals it)."""
    it = iter(big)
    return all(any(letter == b for b in it) for letter in small)


def remove_along(big: Iterable[int], embedding: Embedding) -> Word:
    big = tuple(big)
    pos = tuple(embedding)
    if any(not 0 <= p < len(big) for p in pos) or any(a >= b for a, b in zip(pos, pos[1:])):
        raise ValueError(f"{pos} is not a strictly increasing position list into a word of length {len(big)}")
    drop = set(pos)
    return Word(letter for p, letter in enumerate(big) if p not in drop)


def abelianize_word(word: Iterable[int], n: int) -> MultiDegree:
    counts = Counter(word)
    if counts and (min(counts) < 1 or max(counts) > n):
        raise ValueError(f"word has letters outside 1..{n}")
    return tuple(counts.get(i, 0) for i in range(1, n + 1))


def sorted_word(degree: MultiDegree) -> Word:
    """The weakly increasing word whose abelianization is ``degree``."""
    return Word(i for i, e in enumerate(degree, start=1) for _ in range(e))
