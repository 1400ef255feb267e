"""Generic quasi-shuffle machinery and derivation constructors.

A quasi-shuffle product on words over a letter set L is determined by a
commutative, associative bilinear product ``diamond`` on QL via

    a w * b v = a (w * b v) + b (a w * v) + (a<>b) (w * v),   1 * w = w.

This module implements the product for arbitrary diamonds, the stuffle
product on the bi-indexed alphabet, the stuffle / shuffle products on the
z-indexed alphabet, the exponential/logarithm isomorphisms onto the
shuffle algebra, and a family of constructors that produce derivations of
quasi-shuffle algebras from letter-level data.

All products are pure functions; the memo caches rely on atomic dict
operations and idempotent values, so concurrent callers are safe.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

from .words import EMPTY_WORD, LetterTuple, LinComb, Rational, Word

# ---------------------------------------------------------------------------
# diamond products

LetterComb = dict  # letter -> Fraction, over an arbitrary hashable alphabet


class DiamondProduct:
    """A commutative associative letter product, linear in both slots.

    ``apply(a, b)`` returns a mapping letter -> coefficient.  ``key``
    identifies the product for memoization.
    """

    def __init__(self, key: str, apply: Callable[[object, object], dict]):
        self.key = key
        self.apply = apply

    def __call__(self, a, b) -> dict:
        return self.apply(a, b)

    def fold(self, letters: Sequence) -> dict:
        """Iterated product of a nonempty block of letters."""
        acc = {letters[0]: Fraction(1)}
        for lt in letters[1:]:
            nxt: dict = {}
            for a, c in acc.items():
                for b, cb in self.apply(a, lt).items():
                    val = nxt.get(b, _F0) + c * cb
                    if val:
                        nxt[b] = val
                    elif b in nxt:
                        del nxt[b]
            acc = nxt
        return acc

    def check_commutative_associative(self, letters: Sequence, samples: int = 40,
                                      seed: int = 0x51AB) -> None:
        """Sampled commutativity/associativity check; raises on failure."""
        rng = random.Random(seed)
        pool = list(letters)
        for _ in range(samples):
            a, b, c = (rng.choice(pool) for _ in range(3))
            if self.apply(a, b) != self.apply(b, a):
                raise ValueError(f"diamond {self.key!r} is not commutative on {a}, {b}")
            left = _comb_diamond(self, self.apply(a, b), {c: Fraction(1)})
            right = _comb_diamond(self, {a: Fraction(1)}, self.apply(b, c))
            if left != right:
                raise ValueError(f"diamond {self.key!r} is not associative on {a}, {b}, {c}")


_F0 = Fraction(0)
_F1 = Fraction(1)


def _comb_diamond(diamond: DiamondProduct, x: dict, y: dict) -> dict:
    """Bilinear extension of a diamond to letter combinations."""
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for lt, c in diamond(a, b).items():
                val = out.get(lt, _F0) + ca * cb * c
                if val:
                    out[lt] = val
                elif lt in out:
                    del out[lt]
    return out


def _stuffle_letters(a: LetterTuple, b: LetterTuple) -> dict:
    return {(a[0] + b[0], a[1] + b[1]): _F1}


def _z_add(a: int, b: int) -> dict:
    return {a + b: _F1}


def _zero_diamond(a, b) -> dict:
    return {}


STUFFLE_DIAMOND = DiamondProduct("stuffle-bi", _stuffle_letters)
Z_STUFFLE_DIAMOND = DiamondProduct("stuffle-z", _z_add)
Z_ZERO_DIAMOND = DiamondProduct("shuffle-z", _zero_diamond)

# ---------------------------------------------------------------------------
# quasi-shuffle products on raw letter tuples

_qsh_caches: dict[str, dict] = {}


def quasi_shuffle_raw(u: tuple, v: tuple, diamond: DiamondProduct) -> dict:
    """Quasi-shuffle of two letter tuples, as a dict word-tuple -> Fraction."""
    if not u:
        return {v: _F1}
    if not v:
        return {u: _F1}
    cache = _qsh_caches.setdefault(diamond.key, {})
    key = (u, v) if u <= v else (v, u)
    hit = cache.get(key)
    if hit is not None:
        return hit
    a, w = u[0], u[1:]
    b, x = v[0], v[1:]
    out: dict = {}
    for t, c in quasi_shuffle_raw(w, v, diamond).items():
        t2 = (a,) + t
        out[t2] = out.get(t2, _F0) + c
    for t, c in quasi_shuffle_raw(u, x, diamond).items():
        t2 = (b,) + t
        out[t2] = out.get(t2, _F0) + c
    for ab, cab in diamond(a, b).items():
        for t, c in quasi_shuffle_raw(w, x, diamond).items():
            t2 = (ab,) + t
            val = out.get(t2, _F0) + cab * c
            if val:
                out[t2] = val
            elif t2 in out:
                del out[t2]
    cache[key] = out
    return out


def quasi_shuffle(u: Word, v: Word, diamond: DiamondProduct = STUFFLE_DIAMOND) -> LinComb:
    """Quasi-shuffle product of two words over the bi-indexed alphabet."""
    raw = quasi_shuffle_raw(u.letters, v.letters, diamond)
    return LinComb({Word(t): c for t, c in raw.items()})


def stuffle(u: Word, v: Word) -> LinComb:
    """The stuffle product on the bi-indexed alphabet: letters merge by
    componentwise index addition."""
    return quasi_shuffle(u, v, STUFFLE_DIAMOND)


def stuffle_comb(x: LinComb, y: LinComb) -> LinComb:
    """Bilinear extension of the stuffle to linear combinations."""
    out: dict[Word, Rational] = {}
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            c = cu * cv
            for t, ct in quasi_shuffle_raw(u.letters, v.letters, STUFFLE_DIAMOND).items():
                w = Word(t)
                val = out.get(w, _F0) + c * ct
                if val:
                    out[w] = val
                elif w in out:
                    del out[w]
    return LinComb(out)


def stuffle_power(x: LinComb, n: int) -> LinComb:
    if n < 0:
        raise ValueError("negative stuffle power")
    acc = LinComb.one()
    for _ in range(n):
        acc = stuffle_comb(acc, x)
    return acc


# ---------------------------------------------------------------------------
# z-words: stuffle, index shuffle, and the shuffle through the xy encoding

ZWord = tuple  # tuple of integers k_i >= 1


def z_weight(zw: ZWord) -> int:
    return sum(zw)


def in_h0(zw: ZWord) -> bool:
    """Words not starting in z_1 (plus the empty word) span the subalgebra H0."""
    return not zw or zw[0] != 1


def in_h2(zw: ZWord) -> bool:
    return all(k >= 2 for k in zw)


def z_words_of_weight(weight: int) -> tuple[ZWord, ...]:
    """All z-words of the given weight (compositions of the weight)."""
    if weight == 0:
        return ((),)
    out = []
    for first in range(1, weight + 1):
        for tail in z_words_of_weight(weight - first):
            out.append((first,) + tail)
    return tuple(sorted(out, key=lambda t: (len(t), t)))


def stuffle_z(u: ZWord, v: ZWord) -> dict:
    """Stuffle on z-words: z_i <> z_j = z_{i+j}."""
    return quasi_shuffle_raw(u, v, Z_STUFFLE_DIAMOND)


def index_shuffle_z(u: ZWord, v: ZWord) -> dict:
    """Plain shuffle of z-letters (the quasi-shuffle with trivial diamond)."""
    return quasi_shuffle_raw(u, v, Z_ZERO_DIAMOND)


def _z_to_xy(zw: ZWord) -> tuple:
    out = []
    for k in zw:
        out.extend([0] * (k - 1))
        out.append(1)
    return tuple(out)


def _xy_to_z(xy: tuple) -> ZWord:
    out = []
    run = 0
    for c in xy:
        if c == 0:
            run += 1
        else:
            out.append(run + 1)
            run = 0
    if run:
        raise ValueError("xy-word does not end in y, cannot re-encode as z-word")
    return tuple(out)


_xy_cache: dict = {}


def _xy_shuffle(u: tuple, v: tuple) -> dict:
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    key = (u, v) if u <= v else (v, u)
    hit = _xy_cache.get(key)
    if hit is not None:
        return hit
    out: dict = {}
    for t, c in _xy_shuffle(u[1:], v).items():
        t2 = (u[0],) + t
        out[t2] = out.get(t2, 0) + c
    for t, c in _xy_shuffle(u, v[1:]).items():
        t2 = (v[0],) + t
        out[t2] = out.get(t2, 0) + c
    _xy_cache[key] = out
    return out


def shuffle_z(u: ZWord, v: ZWord) -> dict:
    """Shuffle product on z-words computed on the {x,y} encoding z_k = x^(k-1) y.

    The letters of the encodings are interleaved and every resulting word
    ends in y, so it re-encodes uniquely as a z-word.
    """
    out: dict = {}
    for t, c in _xy_shuffle(_z_to_xy(u), _z_to_xy(v)).items():
        zw = _xy_to_z(t)
        out[zw] = out.get(zw, _F0) + Fraction(c)
    return out


def z_comb_to_lincomb(comb: dict) -> LinComb:
    """Embed a z-word combination into the bi-indexed algebra ([k;0] letters)."""
    return LinComb({Word.from_indices(zw): c for zw, c in comb.items()})


# ---------------------------------------------------------------------------
# exp / log isomorphisms with the shuffle algebra


def _compositions(r: int) -> list[tuple[int, ...]]:
    if r == 0:
        return [()]
    out = []
    for first in range(1, r + 1):
        for tail in _compositions(r - first):
            out.append((first,) + tail)
    return out


def _block_map(word: tuple, diamond: DiamondProduct, coeff_of_blocks) -> dict:
    """Shared shape of log/exp: sum over compositions, diamond-merged blocks."""
    r = len(word)
    out: dict = {}
    for comp in _compositions(r):
        coeff = coeff_of_blocks(comp)
        blocks = []
        pos = 0
        for size in comp:
            blocks.append(diamond.fold(word[pos:pos + size]))
            pos += size
        for choice in iproduct(*[list(b.items()) for b in blocks]):
            t = tuple(lt for lt, _ in choice)
            c = coeff
            for _, cb in choice:
                c *= cb
            val = out.get(t, _F0) + c
            if val:
                out[t] = val
            elif t in out:
                del out[t]
    return out


def log_diamond_raw(word: tuple, diamond: DiamondProduct) -> dict:
    r = len(word)

    def coeff(comp: tuple[int, ...]) -> Fraction:
        denom = 1
        for i in comp:
            denom *= i
        return Fraction((-1) ** (r - len(comp)), denom)

    return _block_map(word, diamond, coeff)


def exp_diamond_raw(word: tuple, diamond: DiamondProduct) -> dict:
    def coeff(comp: tuple[int, ...]) -> Fraction:
        denom = 1
        for i in comp:
            f = 1
            for j in range(2, i + 1):
                f *= j
            denom *= f
        return Fraction(1, denom)

    return _block_map(word, diamond, coeff)


def log_diamond(w: Word, diamond: DiamondProduct = STUFFLE_DIAMOND) -> LinComb:
    """The isomorphism (Q<L>, *_diamond) -> (Q<L>, shuffle) on a word.

    Linear on combinations via :meth:`LinComb.map_words`; turns the
    quasi-shuffle product into the plain letter shuffle.
    """
    return LinComb({Word(t): c for t, c in log_diamond_raw(w.letters, diamond).items()})


def exp_diamond(w: Word, diamond: DiamondProduct = STUFFLE_DIAMOND) -> LinComb:
    """Inverse of :func:`log_diamond`."""
    return LinComb({Word(t): c for t, c in exp_diamond_raw(w.letters, diamond).items()})


# ---------------------------------------------------------------------------
# derivations


class Derivation:
    """A linear map on the word algebra obeying the Leibniz rule for a product.

    ``word_map`` sends a :class:`Word` to a :class:`LinComb`; application
    extends linearly.  ``weight_shift`` is the homogeneity degree (output
    weight minus input weight), or ``None`` when not declared.
    """

    def __init__(self, name: str, weight_shift: int | None,
                 word_map: Callable[[Word], LinComb]):
        self.name = name
        self.weight_shift = weight_shift
        self.word_map = word_map

    def __call__(self, x: Word | LinComb) -> LinComb:
        if isinstance(x, Word):
            return self.word_map(x)
        return x.map_words(self.word_map)

    def commutator(self, other: "Derivation") -> "Derivation":
        shift = None
        if self.weight_shift is not None and other.weight_shift is not None:
            shift = self.weight_shift + other.weight_shift

        def word_map(w: Word) -> LinComb:
            return other(self(w)) - self(other(w))

        return Derivation(f"[{other.name},{self.name}]", shift, word_map)

    def __repr__(self):
        return f"Derivation({self.name!r}, weight_shift={self.weight_shift})"


def commutator(a: Derivation, b: Derivation) -> Derivation:
    """The word-wise commutator a o b - b o a."""
    shift = None
    if a.weight_shift is not None and b.weight_shift is not None:
        shift = a.weight_shift + b.weight_shift

    def word_map(w: Word) -> LinComb:
        return a(b(w)) - b(a(w))

    return Derivation(f"[{a.name},{b.name}]", shift, word_map)


def leibniz_defect(theta: Derivation, u: Word, v: Word,
                   product: Callable[[LinComb, LinComb], LinComb] = stuffle_comb) -> LinComb:
    """Theta(u*v) - Theta(u)*v - u*Theta(v); zero iff Leibniz holds there."""
    uv = product(LinComb.of(u), LinComb.of(v))
    return theta(uv) - product(theta(u), LinComb.of(v)) - product(LinComb.of(u), theta(v))


LetterMap = Callable[[LetterTuple], dict]
"""Letter-level linear map: letter -> {letter: coefficient}."""


def sample_letters(max_weight: int = 6) -> list[LetterTuple]:
    return [(k, w - k) for w in range(1, max_weight + 1) for k in range(1, w + 1)]


def _apply_letter_map(phi: LetterMap, x: dict) -> dict:
    out: dict = {}
    for lt, c in x.items():
        for lt2, c2 in phi(lt).items():
            val = out.get(lt2, _F0) + c * c2
            if val:
                out[lt2] = val
            elif lt2 in out:
                del out[lt2]
    return out


def _diamond_comb(diamond: DiamondProduct, x: dict, y: dict) -> dict:
    return _comb_diamond(diamond, x, y)


def _letterwise_defect(phi: LetterMap, diamond: DiamondProduct,
                       a: LetterTuple, b: LetterTuple) -> dict:
    """gamma(a,b) = phi(a<>b) - phi(a)<>b - a<>phi(b)."""
    out = _apply_letter_map(phi, diamond(a, b))
    for lt, c in _diamond_comb(diamond, phi(a), {b: _F1}).items():
        val = out.get(lt, _F0) - c
        if val:
            out[lt] = val
        elif lt in out:
            del out[lt]
    for lt, c in _diamond_comb(diamond, {a: _F1}, phi(b)).items():
        val = out.get(lt, _F0) - c
        if val:
            out[lt] = val
        elif lt in out:
            del out[lt]
    return out


def derivation_from_letter_map(phi: LetterMap, diamond: DiamondProduct = STUFFLE_DIAMOND,
                               name: str = "Theta^phi", weight_shift: int | None = None,
                               check: bool = True, samples: int = 100,
                               sample_max_weight: int = 6) -> Derivation:
    """Extend a letter-level diamond-derivation letterwise to words.

    The letter map must satisfy phi(a<>b) = phi(a)<>b + a<>phi(b); this is
    verified on randomly sampled letter pairs and violations are rejected.
    The assignment phi -> Theta^phi is a Lie algebra homomorphism.
    """
    if check:
        rng = random.Random(0xD0E5)
        pool = sample_letters(sample_max_weight)
        for _ in range(samples):
            a, b = rng.choice(pool), rng.choice(pool)
            if _letterwise_defect(phi, diamond, a, b):
                raise ValueError(
                    f"letter map is not a diamond derivation: fails on {a}, {b}")

    def word_map(w: Word) -> LinComb:
        out: dict[Word, Rational] = {}
        ls = w.letters
        for j, lt in enumerate(ls):
            for lt2, c in phi(lt).items():
                w2 = Word(ls[:j] + (lt2,) + ls[j + 1:])
                val = out.get(w2, _F0) + c
                if val:
                    out[w2] = val
                elif w2 in out:
                    del out[w2]
        return LinComb(out)

    return Derivation(name, weight_shift, word_map)


def derivation_with_gamma(phi: LetterMap, diamond: DiamondProduct = STUFFLE_DIAMOND,
                          name: str = "Theta^phi,gamma", weight_shift: int | None = None,
                          check: bool = True, samples: int = 100,
                          sample_max_weight: int = 6) -> Derivation:
    """Letterwise extension corrected by -1/2 of the derivation defect gamma.

    Valid when gamma vanishes on the image of the diamond and satisfies
    gamma(a<>c, b) + gamma(a, b<>c) = gamma(a, b)<>c; both hypotheses are
    sampled at construction and violations are rejected.
    """
    def gamma(a: LetterTuple, b: LetterTuple) -> dict:
        return _letterwise_defect(phi, diamond, a, b)

    if check:
        rng = random.Random(0xCAFE)
        pool = sample_letters(sample_max_weight)
        for _ in range(samples):
            a, b, c, d = (rng.choice(pool) for _ in range(4))
            ab = diamond(a, b)
            cd = diamond(c, d)
            defect: dict = {}
            for x, cx in ab.items():
                for y, cy in cd.items():
                    for lt, cg in gamma(x, y).items():
                        val = defect.get(lt, _F0) + cx * cy * cg
                        if val:
                            defect[lt] = val
                        elif lt in defect:
                            del defect[lt]
            if defect:
                raise ValueError("gamma does not vanish on the diamond image")
            lhs: dict = {}
            for x, cx in diamond(a, c).items():
                for lt, cg in gamma(x, b).items():
                    val = lhs.get(lt, _F0) + cx * cg
                    if val:
                        lhs[lt] = val
                    elif lt in lhs:
                        del lhs[lt]
            for x, cx in diamond(b, c).items():
                for lt, cg in gamma(a, x).items():
                    val = lhs.get(lt, _F0) + cx * cg
                    if val:
                        lhs[lt] = val
                    elif lt in lhs:
                        del lhs[lt]
            rhs = _diamond_comb(diamond, gamma(a, b), {c: _F1})
            if lhs != rhs:
                raise ValueError("gamma fails gamma(a<>c,b)+gamma(a,b<>c)=gamma(a,b)<>c")

    half = Fraction(1, 2)

    def word_map(w: Word) -> LinComb:
        ls = w.letters
        out: dict[Word, Rational] = {}
        for j, lt in enumerate(ls):
            for lt2, c in phi(lt).items():
                w2 = Word(ls[:j] + (lt2,) + ls[j + 1:])
                val = out.get(w2, _F0) + c
                if val:
                    out[w2] = val
                elif w2 in out:
                    del out[w2]
        for j in range(len(ls) - 1):
            for lt2, c in gamma(ls[j], ls[j + 1]).items():
                w2 = Word(ls[:j] + (lt2,) + ls[j + 2:])
                val = out.get(w2, _F0) - half * c
                if val:
                    out[w2] = val
                elif w2 in out:
                    del out[w2]
        return LinComb(out)

    return Derivation(name, weight_shift, word_map)


def boundary_derivation(a: LetterTuple, side: str = "right", mode: str = "diamond",
                        diamond: DiamondProduct = STUFFLE_DIAMOND,
                        name: str | None = None,
                        weight_shift: int | None = None) -> Derivation:
    """Strip the letter ``a`` off one end of a word.

    ``mode="shuffle"`` gives the plain boundary derivations of the shuffle
    algebra (indicator on the first/last letter).  ``mode="diamond"``
    conjugates through the exp/log isomorphism, which yields the explicit
    sums over diamond-merged boundary blocks with coefficients
    (-1)^(l+1)/l; these are derivations for the quasi-shuffle product.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if mode not in ("shuffle", "diamond"):
        raise ValueError("mode must be 'shuffle' or 'diamond'")
    if name is None:
        name = f"Theta^{'[' if side == 'left' else ''}{a}{']' if side == 'right' else ''}"

    if mode == "shuffle":
        def word_map(w: Word) -> LinComb:
            ls = w.letters
            if not ls:
                return LinComb()
            if side == "left" and ls[0] == a:
                return LinComb.of(Word(ls[1:]))
            if side == "right" and ls[-1] == a:
                return LinComb.of(Word(ls[:-1]))
            return LinComb()
    else:
        def word_map(w: Word) -> LinComb:
            ls = w.letters
            out: dict[Word, Rational] = {}
            for l in range(1, len(ls) + 1):
                block = ls[:l] if side == "left" else ls[-l:]
                rest = ls[l:] if side == "left" else ls[:-l]
                coeff = diamond.fold(block).get(a)
                if coeff:
                    w2 = Word(rest)
                    val = out.get(w2, _F0) + Fraction((-1) ** (l + 1), l) * coeff
                    if val:
                        out[w2] = val
                    elif w2 in out:
                        del out[w2]
            return LinComb(out)

    return Derivation(name, weight_shift, word_map)


def neighbor_derivation(in_S: Callable[[LetterTuple], bool],
                        phi_for: Callable[[LetterTuple], LetterMap],
                        diamond: DiamondProduct = STUFFLE_DIAMOND,
                        S_samples: Sequence[LetterTuple] = (),
                        name: str = "Theta_S", weight_shift: int | None = None,
                        check: bool = True, samples: int = 100,
                        sample_max_weight: int = 6) -> Derivation:
    """Sum of the neighbor maps Theta^(phi_a, a) over a letter set S.

    A letter of S is removed and the attached map applied to its right
    neighbor (positively) or left neighbor (negatively).  Hypotheses: the
    diamond image avoids S; phi_a(b<>c) = phi_a(b)<>c for b outside S; and
    phi_a(a'<>c) = phi_a'(a<>c) for a, a' in S.  All three are sampled.
    """
    if check:
        rng = random.Random(0xBEEF)
        pool = sample_letters(sample_max_weight)
        s_pool = list(S_samples) or [lt for lt in pool if in_S(lt)]
        if not s_pool:
            raise ValueError("no sample letters inside S")
        for _ in range(samples):
            b, c = rng.choice(pool), rng.choice(pool)
            for lt in diamond(b, c):
                if in_S(lt):
                    raise ValueError("diamond image meets S")
            a = rng.choice(s_pool)
            phi_a = phi_for(a)
            if not in_S(b):
                lhs = _apply_letter_map(phi_a, diamond(b, c))
                rhs = _diamond_comb(diamond, phi_a(b), {c: _F1})
                if lhs != rhs:
                    raise ValueError("phi_a(b<>c) != phi_a(b)<>c for b outside S")
            a2 = rng.choice(s_pool)
            lhs = _apply_letter_map(phi_a, diamond(a2, c))
            rhs = _apply_letter_map(phi_for(a2), diamond(a, c))
            if lhs != rhs:
                raise ValueError("phi_a(a'<>c) != phi_a'(a<>c) on S")

    def word_map(w: Word) -> LinComb:
        ls = w.letters
        r = len(ls)
        out: dict[Word, Rational] = {}
        for j in range(r):
            if not in_S(ls[j]):
                continue
            phi_a = phi_for(ls[j])
            if j + 1 < r:
                for lt2, c in phi_a(ls[j + 1]).items():
                    w2 = Word(ls[:j] + (lt2,) + ls[j + 2:])
                    val = out.get(w2, _F0) + c
                    if val:
                        out[w2] = val
                    elif w2 in out:
                        del out[w2]
            if j >= 1:
                for lt2, c in phi_a(ls[j - 1]).items():
                    w2 = Word(ls[:j - 1] + (lt2,) + ls[j + 1:])
                    val = out.get(w2, _F0) - c
                    if val:
                        out[w2] = val
                    elif w2 in out:
                        del out[w2]
        return LinComb(out)

    return Derivation(name, weight_shift, word_map)


def conjugate_shuffle_derivation(theta_word_map: Callable[[Word], LinComb],
                                 diamond: DiamondProduct = STUFFLE_DIAMOND,
                                 name: str = "exp.Theta.log",
                                 weight_shift: int | None = None) -> Derivation:
    """exp_diamond o Theta o log_diamond for a shuffle-algebra derivation Theta."""

    def word_map(w: Word) -> LinComb:
        acc: dict[Word, Rational] = {}
        for t, c in log_diamond_raw(w.letters, diamond).items():
            for v, cv in theta_word_map(Word(t)).terms.items():
                for t2, c2 in exp_diamond_raw(v.letters, diamond).items():
                    w2 = Word(t2)
                    val = acc.get(w2, _F0) + c * cv * c2
                    if val:
                        acc[w2] = val
                    elif w2 in acc:
                        del acc[w2]
        return LinComb(acc)

    return Derivation(name, weight_shift, word_map)
