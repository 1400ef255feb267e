"""The concrete derivations of the bi-indexed stuffle algebra.

W multiplies by the weight, D raises (k_j, d_j) with multiplicity k_j,
omega has weight -1, delta has weight -2, and together (W, D, delta) is an
sl2-triple that commutes with the swap.  A weight -3 operator ``t`` and
the commutator [omega, delta] are provided as well.

delta is implemented at coefficient level as delta = delta1 - 1/2 (delta2
+ delta3 + delta4 + delta5), the normative form; the generating-series
definition is available through a small operator engine (multiplication
operators and the slot-removal maps phi_j^+/phi_j^-, transposed to word
level) and serves as a cross-check, as does the closed formula on words
of lower weight zero.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .quasishuffle import (Derivation, shuffle_z, stuffle_comb, stuffle_z,
                           z_comb_to_lincomb)
from .words import EMPTY_WORD, LinComb, Word

_F0 = Fraction(0)
_F1 = Fraction(1)
_HALF = Fraction(1, 2)

Letters = tuple  # tuple of (k, d) pairs
Terms = list  # list of (Letters, Fraction)


# ---------------------------------------------------------------------------
# W and D

def apply_W(x: Word | LinComb) -> LinComb:
    if isinstance(x, Word):
        x = LinComb.of(x)
    return LinComb({w: w.weight * c for w, c in x.terms.items() if w.weight})


def apply_D(x: Word | LinComb) -> LinComb:
    if isinstance(x, Word):
        x = LinComb.of(x)

    def on_word(w: Word) -> LinComb:
        ls = w.letters
        out: dict[Word, Fraction] = {}
        for j, (k, d) in enumerate(ls):
            w2 = Word(ls[:j] + ((k + 1, d + 1),) + ls[j + 1:])
            out[w2] = out.get(w2, _F0) + k
        return LinComb(out)

    return x.map_words(on_word)


# ---------------------------------------------------------------------------
# omega (weight -1)

def apply_omega(x: Word | LinComb) -> LinComb:
    """Weight -1 derivation; on words it strips letters with k = 1.

    The last letter is stripped when it equals [1;0]; an inner letter
    [1;d] is stripped with its d merged rightwards (positively) or
    leftwards (negatively).
    """
    if isinstance(x, Word):
        x = LinComb.of(x)

    def on_word(w: Word) -> LinComb:
        ls = w.letters
        r = len(ls)
        out: dict[Word, Fraction] = {}
        if r and ls[-1] == (1, 0):
            _bump(out, Word(ls[:-1]), _F1)
        for j in range(r - 1):
            if ls[j][0] == 1:
                k2, d2 = ls[j + 1]
                _bump(out, Word(ls[:j] + ((k2, ls[j][1] + d2),) + ls[j + 2:]), _F1)
        for j in range(1, r):
            if ls[j][0] == 1:
                k2, d2 = ls[j - 1]
                _bump(out, Word(ls[:j - 1] + ((k2, d2 + ls[j][1]),) + ls[j + 1:]), -_F1)
        return LinComb(out)

    return x.map_words(on_word)


def _bump(out: dict, w: Word, c: Fraction) -> None:
    acc = out.get(w, _F0) + c
    if acc:
        out[w] = acc
    elif w in out:
        del out[w]


# ---------------------------------------------------------------------------
# delta (weight -2) at coefficient level

def apply_delta1(w: Word) -> LinComb:
    ls = w.letters
    r = len(ls)
    out: dict[Word, Fraction] = {}
    for j, (k, d) in enumerate(ls):
        if k > 1 and d >= 1:
            _bump(out, Word(ls[:j] + ((k - 1, d - 1),) + ls[j + 1:]), Fraction(d))
    for j in range(r - 1):
        k2, d2 = ls[j + 1]
        if k2 == 1 and d2 >= 1:
            k1, d1 = ls[j]
            _bump(out, Word(ls[:j] + ((k1, d1 + d2 - 1),) + ls[j + 2:]),
                  -_HALF * d2)
    for j in range(r - 1):
        k1, d1 = ls[j]
        if k1 == 1 and d1 >= 1:
            k2, d2 = ls[j + 1]
            _bump(out, Word(ls[:j] + ((k2, d1 + d2 - 1),) + ls[j + 2:]),
                  -_HALF * d1)
    return LinComb(out)


def apply_delta2(w: Word) -> LinComb:
    ls = w.letters
    r = len(ls)
    out: dict[Word, Fraction] = {}
    if r >= 1 and ls[-1] == (2, 0):
        _bump(out, Word(ls[:-1]), _F1)
    if r >= 2 and ls[-1] == (1, 0) and ls[-2] == (1, 0):
        _bump(out, Word(ls[:-2]), -_HALF)
    return LinComb(out)


def apply_delta3(w: Word) -> LinComb:
    ls = w.letters
    if ls and ls[-1] == (1, 1):
        return LinComb.of(Word(ls[:-1]))
    return LinComb()


def apply_delta4(w: Word) -> LinComb:
    ls = w.letters
    r = len(ls)
    out: dict[Word, Fraction] = {}
    for j in range(1, r):
        if ls[j][0] == 1 and ls[j - 1][0] > 1:
            k1, d1 = ls[j - 1]
            _bump(out, Word(ls[:j - 1] + ((k1 - 1, d1 + ls[j][1]),) + ls[j + 1:]), _F1)
    for j in range(r - 1):
        if ls[j][0] == 1 and ls[j + 1][0] > 1:
            k2, d2 = ls[j + 1]
            _bump(out, Word(ls[:j] + ((k2 - 1, ls[j][1] + d2),) + ls[j + 2:]), -_F1)
    return LinComb(out)


def apply_delta5(w: Word) -> LinComb:
    ls = w.letters
    r = len(ls)
    out: dict[Word, Fraction] = {}
    for j in range(r - 1):
        if ls[j][0] == 2:
            k2, d2 = ls[j + 1]
            _bump(out, Word(ls[:j] + ((k2, ls[j][1] + d2),) + ls[j + 2:]), _F1)
    for j in range(r - 1):
        if ls[j + 1][0] == 2:
            k1, d1 = ls[j]
            _bump(out, Word(ls[:j] + ((k1, d1 + ls[j + 1][1]),) + ls[j + 2:]), -_F1)
    for j in range(r - 2):
        if ls[j + 1][0] == 1 and ls[j + 2][0] == 1:
            k1, d1 = ls[j]
            _bump(out, Word(ls[:j] + ((k1, d1 + ls[j + 1][1] + ls[j + 2][1]),) + ls[j + 3:]),
                  _HALF)
    for j in range(r - 2):
        if ls[j][0] == 1 and ls[j + 1][0] == 1:
            k3, d3 = ls[j + 2]
            _bump(out, Word(ls[:j] + ((k3, ls[j][1] + ls[j + 1][1] + d3),) + ls[j + 3:]),
                  -_HALF)
    return LinComb(out)


DELTA_COMPONENTS = (apply_delta1, apply_delta2, apply_delta3, apply_delta4, apply_delta5)


def apply_delta(x: Word | LinComb) -> LinComb:
    """delta = delta1 - (delta2 + delta3 + delta4 + delta5) / 2."""
    if isinstance(x, Word):
        x = LinComb.of(x)

    def on_word(w: Word) -> LinComb:
        out = apply_delta1(w)
        corr = apply_delta2(w) + apply_delta3(w) + apply_delta4(w) + apply_delta5(w)
        return out - corr.scale(_HALF)

    return x.map_words(on_word)


def apply_delta_lwt0(w: Word) -> LinComb:
    """Closed four-term formula for delta on words of lower weight zero.

    Agrees with :func:`apply_delta` on its domain and keeps the lwt-0
    span invariant.
    """
    if w.lwt != 0:
        raise ValueError("apply_delta_lwt0 needs a word of lower weight 0")
    ks = tuple(k for k, _ in w.letters)
    r = len(ks)
    out: dict[Word, Fraction] = {}
    if r >= 1 and ks[0] == 2:
        _bump(out, Word.from_indices(ks[1:]), -_HALF)
    if r >= 2 and ks[0] == 1 and ks[1] == 1:
        _bump(out, Word.from_indices(ks[2:]), Fraction(1, 4))
    for j in range(r - 1):
        if ks[j] == 1 and ks[j + 1] > 1:
            _bump(out, Word.from_indices(ks[:j] + (ks[j + 1] - 1,) + ks[j + 2:]), _HALF)
    for j in range(1, r):
        if ks[j] == 1 and ks[j - 1] > 1:
            _bump(out, Word.from_indices(ks[:j - 1] + (ks[j - 1] - 1,) + ks[j + 1:]), -_HALF)
    return LinComb(out)


# ---------------------------------------------------------------------------
# D on the lwt-0 span through the double-shuffle combination

def apply_D_lwt0(w: Word, weight_cutoff: int | None = None) -> LinComb:
    """D on a single-indexed word as G(z2 * zw - z2 sh zw).

    Returns an lwt-0 combination congruent to apply_D(w) modulo the swap
    ideal; the congruence itself is established by the graded quotient.
    ``weight_cutoff``, when given, bounds the weight of the output as a
    sanity guard.
    """
    if w.lwt != 0:
        raise ValueError("apply_D_lwt0 needs a word of lower weight 0")
    if weight_cutoff is not None and w.weight + 2 > weight_cutoff:
        raise ValueError("weight cutoff exceeded")
    zw = tuple(k for k, _ in w.letters)
    st = stuffle_z((2,), zw)
    sh = shuffle_z((2,), zw)
    comb_out: dict = dict(st)
    for t, c in sh.items():
        acc = comb_out.get(t, _F0) - c
        if acc:
            comb_out[t] = acc
        elif t in comb_out:
            del comb_out[t]
    return z_comb_to_lincomb(comb_out)


# ---------------------------------------------------------------------------
# generating-series operator engine (transposed to word level)
#
# Operators on the tuple of generating series induce word maps; in the
# /d! basis the multiplication operator X_a lowers k_a with coefficient 1,
# Y_a lowers d_a with coefficient d_a, and phi_j^+/phi_j^- remove letter j
# (requiring k_j = 1) merging its d to the right/left.  Prefactor
# monomials act before the slot removals.

def _t_mul(ls: Letters, axis: str, idx: int) -> Terms:
    r = len(ls)
    if idx < 1 or idx > r:
        return []
    k, d = ls[idx - 1]
    if axis == "X":
        if k < 2:
            return []
        return [(ls[:idx - 1] + ((k - 1, d),) + ls[idx:], _F1)]
    if d < 1:
        return []
    return [(ls[:idx - 1] + ((k, d - 1),) + ls[idx:], Fraction(d))]


def _t_phi_plus(ls: Letters, j: int) -> Terms:
    r = len(ls)
    if j < 1 or j > r:
        return []
    k, d = ls[j - 1]
    if k != 1:
        return []
    if j == r:
        if d != 0:
            return []
        return [(ls[:r - 1], _F1)]
    k2, d2 = ls[j]
    return [(ls[:j - 1] + ((k2, d + d2),) + ls[j + 1:], _F1)]


def _t_phi_minus(ls: Letters, j: int) -> Terms:
    r = len(ls)
    if j < 2 or j > r:
        return []
    k, d = ls[j - 1]
    if k != 1:
        return []
    k1, d1 = ls[j - 2]
    return [(ls[:j - 2] + ((k1, d1 + d),) + ls[j:], _F1)]


def _apply_terms(terms: Terms, step) -> Terms:
    out: Terms = []
    for ls, c in terms:
        for ls2, c2 in step(ls):
            out.append((ls2, c * c2))
    return out


def _mould_term(w: Word, coeff: Fraction, prefactor: tuple, phis: tuple) -> Terms:
    """One operator term: prefactor variables act first, then the phis."""
    terms: Terms = [(w.letters, coeff)]
    for axis, idx in prefactor:
        terms = _apply_terms(terms, lambda ls, a=axis, i=idx: _t_mul(ls, a, i))
        if not terms:
            return []
    for sign, j in phis:
        step = _t_phi_plus if sign == "+" else _t_phi_minus
        terms = _apply_terms(terms, lambda ls, jj=j, st=step: st(ls, jj))
        if not terms:
            return []
    return terms


def _expand_square(parts: list[tuple[Fraction, tuple]]) -> list[tuple[Fraction, tuple]]:
    """Square of a linear form given as (coeff, variable) parts."""
    out = []
    for i, (ci, vi) in enumerate(parts):
        out.append((ci * ci, (vi, vi)))
        for cj, vj in parts[i + 1:]:
            out.append((2 * ci * cj, (vi, vj)))
    return out


def delta_mould(w: Word) -> LinComb:
    """delta from its generating-series definition; cross-check route."""
    r = w.depth
    acc: dict[Word, Fraction] = {}

    def add(terms: Terms):
        for ls, c in terms:
            _bump(acc, Word(ls), c)

    for j in range(1, r + 1):
        add(_mould_term(w, _F1, (("X", j), ("Y", j)), ()))
    for j in range(1, r + 1):
        for c, vars_ in [(-_HALF, (("X", j),)), (_HALF, (("X", j + 1),)),
                         (-_HALF, (("Y", j),))]:
            add(_mould_term(w, c, vars_, (("+", j),)))
        for c, vars_ in [(-_HALF, (("X", j - 1),)), (_HALF, (("X", j),)),
                         (-_HALF, (("Y", j),))]:
            add(_mould_term(w, c, vars_, (("-", j),)))
        add(_mould_term(w, Fraction(1, 4), (), (("+", j), ("+", j))))
        add(_mould_term(w, Fraction(-1, 4), (), (("-", j), ("-", j))))
    return LinComb(acc)


def apply_t(x: Word | LinComb) -> LinComb:
    """The weight -3 operator from the generating-series display.

    Its derivation property and swap equivariance are conjectural and are
    checked by the conjecture report rather than assumed.
    """
    if isinstance(x, Word):
        x = LinComb.of(x)

    def on_word(w: Word) -> LinComb:
        r = w.depth
        acc: dict[Word, Fraction] = {}

        def add(terms: Terms):
            for ls, c in terms:
                _bump(acc, Word(ls), c)

        for j in range(1, r + 1):
            sq = _expand_square([(_F1, ("X", j)), (-_F1, ("X", j + 1)), (_F1, ("Y", j))])
            for c, vars_ in sq:
                add(_mould_term(w, c, vars_, (("+", j),)))
        for j in range(2, r + 1):
            sq = _expand_square([(_F1, ("X", j - 1)), (-_F1, ("X", j)), (-_F1, ("Y", j))])
            for c, vars_ in sq:
                add(_mould_term(w, -c, vars_, (("-", j),)))
        for j in range(1, r):
            lin = [(-_F1, ("X", j)), (_F1, ("X", j + 2)), (-_F1, ("Y", j)), (-_F1, ("Y", j + 1))]
            for c, v in lin:
                add(_mould_term(w, c, (v,), (("+", j), ("+", j))))
        for j in range(2, r):
            lin = [(_F1, ("X", j - 1)), (Fraction(-4), ("X", j)), (Fraction(3), ("X", j + 1)),
                   (Fraction(-3), ("Y", j)), (_F1, ("Y", j + 1))]
            for c, v in lin:
                add(_mould_term(w, -c, (v,), (("-", j), ("-", j))))
        third = Fraction(1, 3)
        for j in range(1, r - 1):
            add(_mould_term(w, third, (), (("+", j), ("+", j), ("+", j))))
        for j in range(2, r - 1):
            add(_mould_term(w, -third, (), (("-", j), ("-", j), ("-", j))))
        return LinComb(acc)

    return x.map_words(on_word)


def apply_t_lwt0(w: Word) -> LinComb:
    """Closed formula for the weight -3 operator on lwt-0 words.

    A merged entry that comes out negative or zero kills its term, with
    one boundary exception: when the merge window extends past the end of
    the word and the merged value is exactly zero, the slot is deleted
    instead.  Under this convention the formula agrees with
    :func:`apply_t` on every lwt-0 word, which is verified exhaustively
    in the tests.
    """
    if w.lwt != 0:
        raise ValueError("apply_t_lwt0 needs a word of lower weight 0")
    ks = tuple(k for k, _ in w.letters)
    r = len(ks)

    def at(i: int) -> int:
        return ks[i - 1] if 1 <= i <= r else 0

    def word_merge(lo: int, hi: int, merged: int) -> Word | None:
        # replace slots lo..min(hi, r) (1-based, inclusive) by `merged`
        if merged < 0:
            return None
        if merged == 0:
            if hi <= r:
                return None
            return Word.from_indices(ks[:lo - 1] + ks[min(hi, r):])
        return Word.from_indices(ks[:lo - 1] + (merged,) + ks[min(hi, r):])

    out: dict[Word, Fraction] = {}

    def add(word: Word | None, c: Fraction):
        if word is not None and c:
            _bump(out, word, c)

    for j in range(1, r + 1):
        kj = ks[j - 1]
        cf = comb(2, kj - 1) if 0 <= kj - 1 <= 2 else 0
        if cf:
            sign = (-1) ** (kj + 1)
            add(word_merge(j, j + 1, kj + at(j + 1) - 3), Fraction(sign * cf))
    for j in range(2, r + 1):
        kj = ks[j - 1]
        cf = comb(2, kj - 1) if 0 <= kj - 1 <= 2 else 0
        if cf:
            sign = (-1) ** (kj + 1)
            add(word_merge(j - 1, j, ks[j - 2] + kj - 3), -Fraction(sign * cf))
    for j in range(1, r):
        pair = (ks[j - 1], ks[j])
        if pair in ((1, 1), (2, 1)):
            sign = (-1) ** (ks[j - 1] + 1)
            add(word_merge(j, j + 2, ks[j - 1] + ks[j] + at(j + 2) - 3), Fraction(sign))
    for j in range(2, r):
        pair = (ks[j - 1], ks[j])
        cf = {(1, 1): 1, (2, 1): -4, (1, 2): 3}.get(pair, 0)
        if cf:
            add(word_merge(j - 1, j + 1, ks[j - 2] + ks[j - 1] + ks[j] - 3), -Fraction(cf))
    if r >= 3 and ks[0] == ks[1] == ks[2] == 1:
        add(Word.from_indices(ks[3:]), Fraction(1, 3))
    return LinComb(out)


# ---------------------------------------------------------------------------
# named derivations, commutators, polynomial representation

D = Derivation("D", 2, lambda w: apply_D(w))
W = Derivation("W", 0, lambda w: apply_W(w))
omega = Derivation("omega", -1, lambda w: apply_omega(w))
delta = Derivation("delta", -2, lambda w: apply_delta(w))
t_op = Derivation("t", -3, lambda w: apply_t(w))


def commutator(a: Derivation, b: Derivation) -> Derivation:
    shift = None
    if a.weight_shift is not None and b.weight_shift is not None:
        shift = a.weight_shift + b.weight_shift

    def word_map(w: Word) -> LinComb:
        return a(b(w)) - b(a(w))

    return Derivation(f"[{a.name},{b.name}]", shift, word_map)


omega_delta = commutator(omega, delta)


def polynomial_representation(x: LinComb, d: Derivation, a: LinComb,
                              max_steps: int = 64) -> list[tuple[LinComb, int]]:
    """Write x = sum f_i * a^(*i) with every f_i in ker(d).

    Requires d(a) = 1 and d nilpotent on x (automatic for a homogeneous
    negative-weight derivation).  The top coefficient is peeled off as
    d^n(x) / n!, which lies in ker(d) by construction, and the remainder
    has strictly smaller nilpotency degree.
    """
    if d(a) != LinComb.one():
        raise ValueError("polynomial representation needs d(a) = 1")
    result: dict[int, LinComb] = {}
    current = x
    for _ in range(max_steps):
        if current.is_zero():
            break
        chain = [current]
        while chain[-1]:
            if len(chain) > max_steps:
                raise ValueError("derivation is not nilpotent on the input")
            chain.append(d(chain[-1]))
        n = len(chain) - 2
        f_n = chain[n].scale(Fraction(1, factorial(n)))
        result[n] = result.get(n, LinComb()) + f_n
        power = LinComb.one()
        for _ in range(n):
            power = stuffle_comb(power, a)
        current = current - stuffle_comb(f_n, power)
    else:
        raise ValueError("polynomial representation did not terminate")
    return [(f_n, n) for n, f_n in sorted(result.items())]


def reconstruct_polynomial_representation(rep: list, a: LinComb) -> LinComb:
    out = LinComb()
    for f_n, n in rep:
        power = LinComb.one()
        for _ in range(n):
            power = stuffle_comb(power, a)
        out = out + stuffle_comb(f_n, power)
    return out
