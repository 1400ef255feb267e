"""The balanced alphabet b_0, b_1, .. and its bridge to the bi-indexed words.

The quasi-shuffle product on balanced words merges b_i and b_j to
b_{i+j} only when both indices are positive.  Words not starting in b_0
form a subalgebra; on it an involution reverses the (k_i, m_i) block
data, and a graded algebra isomorphism onto the bi-indexed word algebra
intertwines that involution with the swap.  The weight of b_j is j for
j >= 1 and 1 for b_0.

The normalization difference (plain Y-powers here versus Y-powers over
d! on the bi-indexed side) is reconciled inside the isomorphism only.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

from .polynomials import Poly, linear_form, monomial
from .quasishuffle import DiamondProduct, quasi_shuffle_raw
from .quotient import sparse_rref
from .words import LinComb, Word

_F0 = Fraction(0)
_F1 = Fraction(1)

BWord = tuple  # tuple of integers >= 0


def _b_diamond(i: int, j: int) -> dict:
    if i > 0 and j > 0:
        return {i + j: _F1}
    return {}


B_DIAMOND = DiamondProduct("stuffle-b", _b_diamond)


def b_weight(w: BWord) -> int:
    return sum(max(i, 1) for i in w)


def in_b0_subalgebra(w: BWord) -> bool:
    """Words not starting in b_0 (the empty word belongs)."""
    return not w or w[0] != 0


def stuffle_b(u: BWord, v: BWord) -> dict:
    """Quasi-shuffle of balanced words; returns word -> coefficient."""
    return quasi_shuffle_raw(tuple(u), tuple(v), B_DIAMOND)


def stuffle_b_comb(x: dict, y: dict) -> dict:
    out: dict = {}
    for u, cu in x.items():
        for v, cv in y.items():
            for t, c in stuffle_b(u, v).items():
                acc = out.get(t, _F0) + cu * cv * c
                if acc:
                    out[t] = acc
                elif t in out:
                    del out[t]
    return out


def b_blocks(w: BWord) -> list[tuple[int, int]]:
    """Decompose a word not starting in b_0 into (k_i, m_i) blocks: a
    positive letter followed by its run of zeros."""
    if not in_b0_subalgebra(w):
        raise ValueError("word starts with b_0")
    blocks: list[tuple[int, int]] = []
    for letter in w:
        if letter > 0:
            blocks.append((letter, 0))
        else:
            k, m = blocks[-1]
            blocks[-1] = (k, m + 1)
    return blocks


def from_blocks(blocks: list[tuple[int, int]]) -> BWord:
    out: list[int] = []
    for k, m in blocks:
        out.append(k)
        out.extend([0] * m)
    return tuple(out)


def tau(w: BWord) -> BWord:
    """The involution: blocks (k_1, m_1)..(k_s, m_s) map to
    (m_s + 1, k_s - 1)..(m_1 + 1, k_1 - 1)."""
    blocks = b_blocks(w)
    return from_blocks([(m + 1, k - 1) for k, m in reversed(blocks)])


@lru_cache(maxsize=None)
def b_words_of_weight(weight: int, restricted: bool = True) -> tuple[BWord, ...]:
    """Balanced words of a weight; ``restricted`` keeps the subalgebra of
    words not starting in b_0."""
    def rec(rem: int, first: bool) -> list[BWord]:
        if rem == 0:
            return [()]
        out = []
        start = 1 if (first and restricted) else 0
        for letter in range(start, rem + 1):
            cost = max(letter, 1)
            if cost <= rem:
                for tail in rec(rem - cost, False):
                    out.append((letter,) + tail)
        return out

    return tuple(sorted(rec(weight, True), key=lambda t: (len(t), t)))


# ---------------------------------------------------------------------------
# the isomorphism onto the bi-indexed algebra

@lru_cache(maxsize=None)
def phi_iso_word(w: BWord) -> LinComb:
    """Image of a balanced word under the graded isomorphism.

    For block data (k_i, m_i) the image collects the bi-indexed words
    [k; d] whose Y-monomial coefficient in the product of the telescoped
    differences (Y_i - Y_{i-1})^{d_i} / d_i! matches the m-exponents.
    """
    if not in_b0_subalgebra(w):
        raise ValueError("the isomorphism is defined on words not starting in b_0")
    blocks = b_blocks(w)
    r = len(blocks)
    if r == 0:
        return LinComb.one()
    ks = tuple(k for k, _ in blocks)
    ms = tuple(m for _, m in blocks)
    total = sum(ms)
    target = monomial(*((("Y", i), m) for i, m in enumerate(ms, start=1) if m))
    out: dict[Word, Fraction] = {}
    for ds in _weak_compositions(total, r):
        poly = Poly.const(_F1)
        for i, d in enumerate(ds, start=1):
            if d:
                pairs = [(("Y", i), _F1)]
                if i > 1:
                    pairs.append((("Y", i - 1), -_F1))
                poly = poly * linear_form(pairs).pow(d)
        coeff = poly.coefficient(target)
        if coeff:
            norm = 1
            for d in ds:
                norm *= factorial(d)
            word = Word(zip(ks, ds))
            acc = out.get(word, _F0) + coeff / norm
            if acc:
                out[word] = acc
            elif word in out:
                del out[word]
    return LinComb(out)


def phi_iso(x: dict | BWord) -> LinComb:
    """Linear extension of the isomorphism to combinations."""
    if isinstance(x, tuple):
        return phi_iso_word(x)
    out = LinComb()
    for w, c in x.items():
        out = out + phi_iso_word(w).scale(c)
    return out


@lru_cache(maxsize=None)
def _phi_matrix(weight: int):
    """Columns of the isomorphism on a weight slice, plus the word index."""
    b_basis = b_words_of_weight(weight)
    images = [phi_iso_word(bw) for bw in b_basis]
    from .words import words_of_weight
    a_basis = words_of_weight(weight)
    a_index = {w: i for i, w in enumerate(a_basis)}
    return b_basis, a_basis, a_index, images

def phi_inverse(x: LinComb) -> dict:
    """Preimage of a bi-indexed combination; solved per weight slice."""
    out: dict[BWord, Fraction] = {}
    for weight, part in x.homogeneous_parts().items():
        b_basis, a_basis, a_index, images = _phi_matrix(weight)
        n = len(b_basis)
        rows: list[list[Fraction]] = [[_F0] * (n + 1) for _ in a_basis]
        for j, img in enumerate(images):
            for w, c in img.terms.items():
                rows[a_index[w]][j] = c
        for w, c in part.terms.items():
            rows[a_index[w]][n] = c
        sol = _dense_solve(rows, n)
        if sol is None:
            raise ArithmeticError("no preimage; the slice matrix is not onto")
        for j, c in enumerate(sol):
            if c:
                acc = out.get(b_basis[j], _F0) + c
                if acc:
                    out[b_basis[j]] = acc
                elif b_basis[j] in out:
                    del out[b_basis[j]]
    return out


def _dense_solve(rows: list[list[Fraction]], n: int) -> list[Fraction] | None:
    pivot_rows: list[list[Fraction]] = []
    pivot_cols: list[int] = []
    for row in rows:
        row = list(row)
        for pc, pr in zip(pivot_cols, pivot_rows):
            if row[pc]:
                f = row[pc]
                row = [a - f * b for a, b in zip(row, pr)]
        lead = next((i for i in range(n) if row[i]), None)
        if lead is None:
            if row[n]:
                return None
            continue
        inv = row[lead]
        row = [a / inv for a in row]
        pivot_cols.append(lead)
        pivot_rows.append(row)
    sol = [_F0] * n
    for pc, pr in sorted(zip(pivot_cols, pivot_rows), reverse=True):
        sol[pc] = pr[n] - sum(pr[i] * sol[i] for i in range(pc + 1, n))
    for row in rows:
        if sum(row[i] * sol[i] for i in range(n)) != row[n]:
            return None
    return sol


def phi_slice_rank(weight: int) -> tuple[int, int, int]:
    """(number of balanced basis words, slice dimension, matrix rank)."""
    b_basis, a_basis, a_index, images = _phi_matrix(weight)
    rows = []
    for img in images:
        denom = 1
        for c in img.terms.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        rows.append({a_index[w]: int(c * denom) for w, c in img.terms.items()})
    pivots, _ = sparse_rref(rows)
    return len(b_basis), len(a_basis), len(pivots)


# ---------------------------------------------------------------------------
# the derivation D in balanced coordinates

def D_balanced(w: BWord) -> dict:
    """Raise one positive index and lengthen one zero-run at or after it:
    sum over i <= j of k_i (m_j + 1) times the modified word."""
    blocks = b_blocks(w)
    r = len(blocks)
    out: dict[BWord, Fraction] = {}
    for i in range(r):
        for j in range(i, r):
            coeff = Fraction(blocks[i][0] * (blocks[j][1] + 1))
            new_blocks = list(blocks)
            new_blocks[i] = (new_blocks[i][0] + 1, new_blocks[i][1])
            new_blocks[j] = (new_blocks[j][0], new_blocks[j][1] + 1)
            word = from_blocks(new_blocks)
            acc = out.get(word, _F0) + coeff
            if acc:
                out[word] = acc
            elif word in out:
                del out[word]
    return out


# ---------------------------------------------------------------------------
# quotient dimensions in the balanced picture

def balanced_quotient_dim(weight: int) -> int:
    """Dimension of the weight slice of the balanced subalgebra modulo the
    ideal generated by tau(w) - w."""
    basis = b_words_of_weight(weight)
    index = {w: i for i, w in enumerate(basis)}
    rows = []
    seen = set()
    for j in range(1, weight + 1):
        for u in b_words_of_weight(j):
            rel: dict = {tau(u): _F1}
            acc = rel.get(u, _F0) - 1
            if acc:
                rel[u] = acc
            elif u in rel:
                del rel[u]
            if not rel:
                continue
            for v in b_words_of_weight(weight - j):
                gen = stuffle_b_comb(rel, {v: _F1})
                if not gen:
                    continue
                denom = 1
                for c in gen.values():
                    denom = denom * c.denominator // gcd(denom, c.denominator)
                row = {index[t]: int(c * denom) for t, c in gen.items()}
                g = 0
                for vv in row.values():
                    g = gcd(g, vv)
                if row[min(row)] < 0:
                    g = -g
                row = {cc: vv // g for cc, vv in row.items()}
                sig = tuple(sorted(row.items()))
                if sig not in seen:
                    seen.add(sig)
                    rows.append(row)
    pivots, _ = sparse_rref(rows)
    return len(basis) - len(pivots)


def _weak_compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total + 1):
        for tail in _weak_compositions(total - first, parts - 1):
            out.append((first,) + tail)
    return out


def parse_b_word(text: str) -> BWord:
    """Parse balanced-word syntax like 'b2 b0 b3'."""
    letters = []
    for token in text.replace(",", " ").split():
        if not token.startswith("b"):
            raise ValueError(f"bad balanced letter {token!r}")
        try:
            letters.append(int(token[1:]))
        except ValueError as exc:
            raise ValueError(f"bad balanced letter {token!r}") from exc
        if letters[-1] < 0:
            raise ValueError(f"bad balanced letter {token!r}")
    return tuple(letters)
