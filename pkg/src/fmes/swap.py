"""The swap involution on the bi-indexed word algebra.

A depth-r word [k1..kr; d1..dr] is encoded by the basis monomial

    X1^(k1-1) .. Xr^(kr-1) * Y1^d1/d1! .. Yr^dr/dr!

of the depth-r generating series.  The swap substitutes

    X_i -> Y_1 + ... + Y_{r-i+1},      Y_i -> X_{r-i+1} - X_{r-i+2}

(with X_{r+1} = 0) and re-extracts word coefficients against the same
basis.  This substitution is the normative implementation; the closed
binomial formula :func:`swap_coeff_formula` is an independent cross-check
and the two must agree on every word.

The swap preserves weight and depth, is an involution, and sends
lwt(w) to wt(w) - dep(w) - lwt(w).  Computation is organised per
(weight, depth) slice: expanding the substituted basis monomial of every
word in the slice fills the full coefficient matrix at once, which the
ideal machinery reuses heavily.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .polynomials import Poly, linear_form, monomial
from .words import LinComb, Word, words_of_weight


@lru_cache(maxsize=None)
def _slice_words(weight: int, depth: int) -> tuple[Word, ...]:
    return tuple(w for w in words_of_weight(weight) if w.depth == depth)


@lru_cache(maxsize=None)
def _swap_rows(weight: int, depth: int):
    """Map u -> {v: coeff} such that swap(u) = sum coeff * v over the slice."""
    words = _slice_words(weight, depth)
    r = depth
    if r == 0:
        return {Word(()): {Word(()): Fraction(1)}}

    # Substituted images of the plain variables, shared across the slice.
    y_sum = [linear_form([(("Y", j), Fraction(1)) for j in range(1, m + 1)])
             for m in range(r + 1)]           # y_sum[m] = Y_1 + .. + Y_m
    x_diff = [None] * (r + 1)
    for m in range(1, r + 1):
        pairs = [(("X", m), Fraction(1))]
        if m + 1 <= r:
            pairs.append((("X", m + 1), Fraction(-1)))
        x_diff[m] = linear_form(pairs)        # x_diff[m] = X_m - X_{m+1}

    pow_cache: dict[tuple[str, int, int], Poly] = {}

    def cached_pow(kind: str, m: int, e: int) -> Poly:
        key = (kind, m, e)
        p = pow_cache.get(key)
        if p is None:
            base = y_sum[m] if kind == "S" else x_diff[m]
            p = base.pow(e)
            pow_cache[key] = p
        return p

    rows: dict[Word, dict[Word, Fraction]] = {u: {} for u in words}
    for v in words:
        poly = Poly.const(Fraction(1))
        for i, (k, d) in enumerate(v.letters, start=1):
            m = r - i + 1
            if k > 1:
                poly = poly * cached_pow("S", m, k - 1)
            if d > 0:
                poly = poly * cached_pow("D", m, d).scale(Fraction(1, factorial(d)))
        # Each monomial in X_1..X_r, Y_1..Y_r is a depth-r word.
        for mono, c in poly.terms.items():
            ks = [1] * r
            ds = [0] * r
            for (axis, idx), e in mono:
                if axis == "X":
                    ks[idx - 1] += e
                else:
                    ds[idx - 1] = e
            u = Word(zip(ks, ds))
            norm = c
            for d in ds:
                if d > 1:
                    norm *= factorial(d)
            row = rows[u]
            acc = row.get(v, _F0) + norm
            if acc:
                row[v] = acc
            elif v in row:
                del row[v]
    return rows


_F0 = Fraction(0)


def swap_word(w: Word) -> LinComb:
    """The swap of a single word, via the normative substitution route."""
    if w.depth == 0:
        return LinComb.of(w)
    rows = _swap_rows(w.weight, w.depth)
    return LinComb(rows[w])


def swap_lincomb(x: LinComb) -> LinComb:
    """Linear extension of the swap."""
    return x.map_words(swap_word)


def swap_restricts(x: LinComb, depth_wise: bool = True) -> LinComb:
    """The swap extended linearly, computed slice by slice.

    Sends the span of words with all letters [1;d] onto the span of words
    with all letters [k;0] and conversely.  ``depth_wise`` is accepted for
    interface stability; the computation is always per (weight, depth)
    slice.
    """
    del depth_wise
    return swap_lincomb(x)


def is_swap_fixed(w: Word) -> bool:
    return swap_word(w) == LinComb.of(w)


def _compositions(total: int, parts: int, minimum: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for tail in _compositions(total - first, parts - 1, minimum):
            out.append((first,) + tail)
    return out


def swap_coeff_formula(w: Word) -> LinComb:
    """The swap via the explicit closed coefficient formula.

    For a depth-r word with indices k, d the image is a sum over integer
    vectors a (entries >= 1, summing to |d|+r) and b (entries >= 0,
    summing to |k|-r) of words [a;b] weighted by a product of binomials,
    factorial ratios and signs built from the partial sums

        s_j(l) = l_1 + .. + l_j,     s^j(l) = l_{r-j+2} + .. + l_r.

    Independent of the substitution implementation; the two agree on all
    words.
    """
    r = w.depth
    if r == 0:
        return LinComb.of(w)
    ks = tuple(k for k, _ in w.letters)
    ds = tuple(d for _, d in w.letters)
    total_a = sum(ds) + r
    total_b = sum(ks) - r

    def s_lower(vec: tuple[int, ...], j: int) -> int:
        return sum(vec[:j])

    def s_upper(vec: tuple[int, ...], j: int) -> int:
        # sum of the last j-1 entries
        return sum(vec[r - j + 1:]) if j >= 2 else 0

    sk = [s_lower(ks, j) for j in range(r + 1)]
    sk_up = [s_upper(ks, j) for j in range(r + 1)]
    sd = [s_lower(ds, j) for j in range(r + 1)]

    out: dict[Word, Fraction] = {}
    for a in _compositions(total_a, r, 1):
        sa_up = [s_upper(a, j) for j in range(r + 1)]
        coeff_a = Fraction(1)
        ok = True
        for j in range(1, r + 1):
            top = sd[j] - sa_up[j] + j - 1
            bot = a[r - j] - 1
            if top < 0 or bot < 0 or bot > top:
                ok = False
                break
            coeff_a *= comb(top, bot)
            coeff_a *= Fraction(factorial(a[j - 1] - 1), factorial(ks[j - 1] - 1))
        if not ok or not coeff_a:
            continue
        for b in _compositions(total_b, r, 0):
            sb = [s_lower(b, j) for j in range(r + 1)]
            sb_up = [s_upper(b, j) for j in range(r + 1)]
            coeff = coeff_a * ((-1) ** sum(b))
            good = True
            for j in range(1, r + 1):
                top = ks[r - j] - 1
                bot = sb[j] - sk_up[j] + j - 1
                if bot < 0 or bot > top:
                    good = False
                    break
                coeff *= comb(top, bot)
                if (sk[j] + sb_up[j] + j) % 2:
                    coeff = -coeff
            if not good or not coeff:
                continue
            u = Word(zip(a, b))
            acc = out.get(u, _F0) + coeff
            if acc:
                out[u] = acc
            elif u in out:
                del out[u]
    return LinComb(out)
