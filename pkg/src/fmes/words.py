"""Bi-indexed letters, words and exact rational linear combinations.

The alphabet consists of pairs ``[k;d]`` with ``k >= 1`` and ``d >= 0``.
Words are finite sequences of letters (the empty word is allowed); linear
combinations of words carry exact rational coefficients throughout.  There
is no floating-point coefficient mode anywhere in the package.

Three gradings are attached to a word ``[k1..kr; d1..dr]``:

* weight   ``k1 + .. + kr + d1 + .. + dr``
* lower weight (``lwt``)  ``d1 + .. + dr``
* depth    ``r``

All values in this module are immutable after construction and may be
shared freely between threads.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

Rational = Fraction

LetterTuple = tuple[int, int]


def letter(k: int, d: int) -> LetterTuple:
    """Return the validated letter ``[k;d]``."""
    if k < 1:
        raise ValueError(f"letter needs k >= 1, got k={k}")
    if d < 0:
        raise ValueError(f"letter needs d >= 0, got d={d}")
    return (k, d)


class Word:
    """An immutable word over the bi-indexed alphabet.

    ``Word(((2, 1), (1, 0)))`` is the word with letters [2;1][1;0].  Words
    hash and compare by their letter tuple; ``<`` follows the canonical
    graded order used for echelon pivoting: weight, then depth, then the
    flattened ``(k1, d1, k2, d2, ...)`` sequence.
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[LetterTuple] = ()):
        lts = tuple((int(k), int(d)) for k, d in letters)
        for k, d in lts:
            if k < 1 or d < 0:
                raise ValueError(f"invalid letter [{k};{d}] in word")
        object.__setattr__(self, "letters", lts)
        object.__setattr__(self, "_hash", hash(lts))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def from_indices(cls, ks: Iterable[int], ds: Iterable[int] | None = None) -> "Word":
        """Build a word from parallel upper/lower index sequences.

        With ``ds`` omitted all lower indices are zero, matching the
        single-indexed generators ``G[k1,...,kr]``.
        """
        ks = tuple(ks)
        ds = tuple(ds) if ds is not None else (0,) * len(ks)
        if len(ks) != len(ds):
            raise ValueError("upper and lower index sequences differ in length")
        return cls(zip(ks, ds))

    @property
    def weight(self) -> int:
        return sum(k + d for k, d in self.letters)

    @property
    def lwt(self) -> int:
        return sum(d for _, d in self.letters)

    @property
    def depth(self) -> int:
        return len(self.letters)

    def grade(self) -> tuple[int, int, int]:
        """Return ``(weight, lwt, depth)``; the empty word grades to (0,0,0)."""
        return (self.weight, self.lwt, self.depth)

    def concat(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def sort_key(self) -> tuple:
        flat = tuple(x for lt in self.letters for x in lt)
        return (self.weight, self.depth, flat)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[LetterTuple]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Word({self.letters!r})"

    def __str__(self) -> str:
        return render_word(self)


EMPTY_WORD = Word(())


def render_word(w: Word) -> str:
    """Canonical text form: ``G[{k...},{d...}]``, ``G[k...]`` if lwt = 0, ``1`` if empty."""
    if w.depth == 0:
        return "1"
    ks = ",".join(str(k) for k, _ in w.letters)
    if w.lwt == 0:
        return f"G[{ks}]"
    ds = ",".join(str(d) for _, d in w.letters)
    return f"G[{{{ks}}},{{{ds}}}]"


class LinComb:
    """A finite formal sum of words with exact rational coefficients.

    The internal map never stores zero coefficients, so equality of
    linear combinations is plain dictionary equality.  All operations
    return new objects; instances are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Rational] | Iterable[tuple[Word, Rational]] = ()):
        data: dict[Word, Rational] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            c = Fraction(c)
            if c:
                acc = data.get(w)
                if acc is None:
                    data[w] = c
                else:
                    acc = acc + c
                    if acc:
                        data[w] = acc
                    else:
                        del data[w]
        self.terms = data

    @classmethod
    def zero(cls) -> "LinComb":
        return cls()

    @classmethod
    def one(cls) -> "LinComb":
        return cls({EMPTY_WORD: Fraction(1)})

    @classmethod
    def of(cls, w: Word, c: Rational | int = 1) -> "LinComb":
        return cls({w: Fraction(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, w: Word) -> Rational:
        return self.terms.get(w, Fraction(0))

    def __add__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        data = dict(self.terms)
        for w, c in other.terms.items():
            acc = data.get(w)
            if acc is None:
                data[w] = c
            else:
                acc = acc + c
                if acc:
                    data[w] = acc
                else:
                    del data[w]
        out = LinComb.__new__(LinComb)
        object.__setattr__(out, "terms", data)
        return out

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __neg__(self) -> "LinComb":
        out = LinComb.__new__(LinComb)
        object.__setattr__(out, "terms", {w: -c for w, c in self.terms.items()})
        return out

    def scale(self, c: Rational | int) -> "LinComb":
        c = Fraction(c)
        if not c:
            return LinComb()
        out = LinComb.__new__(LinComb)
        object.__setattr__(out, "terms", {w: c * v for w, v in self.terms.items()})
        return out

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other) -> bool:
        return isinstance(other, LinComb) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def weights(self) -> set[int]:
        return {w.weight for w in self.terms}

    def max_weight(self) -> int:
        return max((w.weight for w in self.terms), default=0)

    def homogeneous_component(self, weight: int) -> "LinComb":
        return LinComb({w: c for w, c in self.terms.items() if w.weight == weight})

    def homogeneous_parts(self) -> dict[int, "LinComb"]:
        parts: dict[int, dict[Word, Rational]] = {}
        for w, c in self.terms.items():
            parts.setdefault(w.weight, {})[w] = c
        return {k: LinComb(v) for k, v in sorted(parts.items())}

    def map_words(self, f) -> "LinComb":
        """Apply a word-level linear map ``f: Word -> LinComb`` linearly."""
        out: dict[Word, Rational] = {}
        for w, c in self.terms.items():
            for v, cv in f(w).terms.items():
                acc = out.get(v, ZERO_F) + c * cv
                if acc:
                    out[v] = acc
                elif v in out:
                    del out[v]
        res = LinComb.__new__(LinComb)
        object.__setattr__(res, "terms", out)
        return res

    def sorted_terms(self) -> list[tuple[Word, Rational]]:
        return sorted(self.terms.items(), key=lambda item: item[0].sort_key())

    def __repr__(self) -> str:
        return f"LinComb({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            txt = render_word(w)
            if c == 1:
                part = txt if txt != "1" else "1"
            elif c == -1:
                part = f"-{txt}" if txt != "1" else "-1"
            else:
                part = f"{c}*{txt}" if txt != "1" else f"{c}"
            parts.append(part)
        out = parts[0]
        for p in parts[1:]:
            out += f" + {p}" if not p.startswith("-") else f" - {p[1:]}"
        return out


ZERO_F = Fraction(0)


def grade(w: Word) -> tuple[int, int, int]:
    """``(weight, lwt, depth)`` of a word."""
    return w.grade()


def homogeneous_component(x: LinComb, weight: int) -> LinComb:
    return x.homogeneous_component(weight)


@lru_cache(maxsize=None)
def count_words(weight: int) -> int:
    """Number of words of the given weight.

    There are ``w`` letters of weight ``w``, so the counts satisfy
    ``a(k) = sum_{w=1..k} w * a(k-w)`` with ``a(0) = 1``.
    """
    if weight < 0:
        raise ValueError("weight must be >= 0")
    if weight == 0:
        return 1
    return sum(w * count_words(weight - w) for w in range(1, weight + 1))


def letters_of_weight(w: int) -> list[LetterTuple]:
    """All letters [k;d] with k + d = w, ordered by k."""
    return [(k, w - k) for k in range(1, w + 1)]


@lru_cache(maxsize=None)
def words_of_weight(weight: int, max_depth: int | None = None) -> tuple[Word, ...]:
    """All words of the given weight in canonical order.

    ``max_depth`` restricts to words of depth at most that value; used by
    the depth-filtered quotient computations.
    """
    if weight < 0:
        raise ValueError("weight must be >= 0")

    def rec(rem: int, depth_left: int | None) -> list[tuple[LetterTuple, ...]]:
        if rem == 0:
            return [()]
        if depth_left is not None and depth_left == 0:
            return []
        out = []
        nxt = None if depth_left is None else depth_left - 1
        for w in range(1, rem + 1):
            for lt in letters_of_weight(w):
                for tail in rec(rem - w, nxt):
                    out.append((lt,) + tail)
        return out

    words = [Word(ls) for ls in rec(weight, max_depth)]
    words.sort(key=Word.sort_key)
    return tuple(words)


def words_up_to_weight(max_weight: int) -> list[Word]:
    out: list[Word] = []
    for k in range(max_weight + 1):
        out.extend(words_of_weight(k))
    return out


def word_from_z(ks: Iterable[int]) -> Word:
    """Embed a z-word ``z_{k1}..z_{kr}`` as the word [k1..kr; 0..0]."""
    return Word.from_indices(tuple(ks))
