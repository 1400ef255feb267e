"""Formal multiple zeta values and the extended double shuffle relations.

Formal zeta values are normal-form classes modulo the combined ideal
(swap relations plus the constant-term ideal).  Independently, the
classical double-shuffle machinery is run on the z-indexed alphabet: the
ideal spanned by (w * v - w sh v) * u with v not starting in z_1 is
reduced per weight, and the two quotient dimensions must agree — that
equality is a proven statement, so a mismatch is a hard failure.

Characters (linear maps from z-words into a coefficient ring) carry the
convolution against deconcatenation, the coefficient-level substitution
automorphism, and the exponential correction series; together they
implement the regularized double-shuffle test for a character.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .polynomials import Poly, linear_form
from .quasishuffle import (ZWord, in_h0, index_shuffle_z, shuffle_z,
                           stuffle_z, z_words_of_weight)
from .quotient import (BasisCache, IdealKind, default_cache, dim, normal_form,
                       sparse_rref)
from .rings import CoeffRing, GradedQuotientRing, QQ
from .words import LinComb, Word

_F0 = Fraction(0)


def zeta_f(index: Iterable[int] | Word, cutoff: int,
           cache: BasisCache | None = None) -> LinComb:
    """Normal form of a (single- or bi-indexed) word modulo the combined
    ideal: the formal zeta value of the index."""
    w = index if isinstance(index, Word) else Word.from_indices(tuple(index))
    if w.weight > cutoff:
        raise ValueError(f"weight {w.weight} exceeds cutoff {cutoff}")
    return normal_form(LinComb.of(w), IdealKind.COMBINED, cache=cache)


def xi_f(ds: Iterable[int], cutoff: int, cache: BasisCache | None = None) -> LinComb:
    """Conjugated formal zeta value: the class of [1,..,1; d1,..,dr]."""
    ds = tuple(ds)
    w = Word.from_indices((1,) * len(ds), ds)
    if w.weight > cutoff:
        raise ValueError(f"weight {w.weight} exceeds cutoff {cutoff}")
    return normal_form(LinComb.of(w), IdealKind.COMBINED, cache=cache)


# ---------------------------------------------------------------------------
# the EDS pipeline on z-words

def eds_generators(weight: int) -> list[dict]:
    """Spanning set of the double-shuffle ideal's weight slice in the
    z-word algebra: (w * v - w sh v) * u, with w any nonempty z-word, v a
    nonempty z-word not starting in z_1, u arbitrary (possibly empty)."""
    gens: list[dict] = []
    for wt_w in range(1, weight + 1):
        for w in z_words_of_weight(wt_w):
            for wt_v in range(2, weight - wt_w + 1):
                for v in z_words_of_weight(wt_v):
                    if not v or not in_h0(v):
                        continue
                    base: dict = dict(stuffle_z(w, v))
                    for t, c in shuffle_z(w, v).items():
                        acc = base.get(t, _F0) - c
                        if acc:
                            base[t] = acc
                        elif t in base:
                            del base[t]
                    if not base:
                        continue
                    wt_u = weight - wt_w - wt_v
                    for u in z_words_of_weight(wt_u):
                        out: dict = {}
                        for t, ct in base.items():
                            for t2, c2 in stuffle_z(t, u).items():
                                acc = out.get(t2, _F0) + ct * c2
                                if acc:
                                    out[t2] = acc
                                elif t2 in out:
                                    del out[t2]
                        if out:
                            gens.append(out)
    return gens


def eds_ideal_rank(weight: int) -> int:
    """Rank of the double-shuffle ideal slice inside the z-words of the
    given weight (a space of dimension 2^(weight-1))."""
    if weight == 0:
        return 0
    basis = z_words_of_weight(weight)
    index = {w: i for i, w in enumerate(basis)}
    rows = []
    seen = set()
    for gen in eds_generators(weight):
        denom = 1
        for c in gen.values():
            denom = denom * c.denominator // __import__("math").gcd(denom, c.denominator)
        row = {index[t]: int(c * denom) for t, c in gen.items()}
        from math import gcd
        g = 0
        for v in row.values():
            g = gcd(g, v)
        if not g:
            continue
        if row[min(row)] < 0:
            g = -g
        row = {c: v // g for c, v in row.items()}
        sig = tuple(sorted(row.items()))
        if sig in seen:
            continue
        seen.add(sig)
        rows.append(row)
    pivots, _ = sparse_rref(rows)
    return len(pivots)


def eds_quotient_dim(weight: int) -> int:
    if weight == 0:
        return 1
    return len(z_words_of_weight(weight)) - eds_ideal_rank(weight)


@dataclass(frozen=True)
class DimComparison:
    weight: int
    eds_dim: int
    zf_dim: int

    @property
    def equal(self) -> bool:
        return self.eds_dim == self.zf_dim


def compare_dims(max_weight: int, cache: BasisCache | None = None,
                 strict: bool = True) -> list[DimComparison]:
    """Dimensions of the double-shuffle quotient versus the combined-ideal
    quotient, weight by weight, from the two independent pipelines.

    The equality is a theorem; with ``strict`` a mismatch raises.
    """
    rows = []
    for k in range(max_weight + 1):
        row = DimComparison(k, eds_quotient_dim(k), dim(IdealKind.COMBINED, k, cache))
        if strict and not row.equal:
            raise AssertionError(
                f"double-shuffle and combined-quotient dimensions differ at "
                f"weight {k}: {row.eds_dim} vs {row.zf_dim}")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# characters and the regularized double-shuffle test

class Character:
    """A linear map from z-words (up to a weight cutoff) into a ring.

    ``values`` maps z-word tuples to ring elements; absent words of
    positive weight evaluate to zero and the empty word to the stored
    value (one for the characters used by the double-shuffle test).
    """

    def __init__(self, ring: CoeffRing, cutoff: int, values: dict):
        self.ring = ring
        self.cutoff = cutoff
        self.values = dict(values)
        self.values.setdefault((), ring.one())

    def value(self, zw: ZWord):
        if sum(zw) > self.cutoff:
            raise ValueError(f"word weight {sum(zw)} exceeds cutoff {self.cutoff}")
        return self.values.get(tuple(zw), self.ring.zero())

    def value_of_comb(self, comb: dict):
        total = self.ring.zero()
        for zw, c in comb.items():
            total = self.ring.add(total, self.ring.mul(
                self.ring.scalar(Fraction(c)), self.value(zw)))
        return total

    def is_product_hom(self, product, max_weight: int | None = None) -> bool:
        bound = self.cutoff if max_weight is None else min(max_weight, self.cutoff)
        for a in range(1, bound):
            for b in range(1, bound - a + 1):
                for u in z_words_of_weight(a):
                    for v in z_words_of_weight(b):
                        lhs = self.value_of_comb(product(u, v))
                        rhs = self.ring.mul(self.value(u), self.value(v))
                        if not self.ring.eq(lhs, rhs):
                            return False
        return True


def zeta_character(cutoff: int, ring: GradedQuotientRing | None = None,
                   cache: BasisCache | None = None) -> Character:
    """The canonical character: a z-word maps to its formal zeta class in
    the truncated quotient ring."""
    ring = ring or GradedQuotientRing(cutoff, IdealKind.COMBINED, cache)
    values = {}
    for k in range(cutoff + 1):
        for zw in z_words_of_weight(k):
            values[zw] = ring.class_of_word(Word.from_indices(zw))
    return Character(ring, cutoff, values)


def convolution(phi: Character, psi: Character) -> Character:
    """Convolution against the deconcatenation coproduct."""
    if phi.cutoff != psi.cutoff:
        raise ValueError("cutoff mismatch")
    ring = phi.ring
    values = {}
    for k in range(phi.cutoff + 1):
        for zw in z_words_of_weight(k):
            total = ring.zero()
            for i in range(len(zw) + 1):
                total = ring.add(total, ring.mul(phi.value(zw[:i]), psi.value(zw[i:])))
            values[zw] = total
    return Character(ring, phi.cutoff, values)


def sigma_star(phi: Character) -> Character:
    """Coefficient-level substitution X_i -> X_1 + .. + X_{n-i+1}.

    Expands the substituted monomial of every source word symbolically
    and transposes the integer coefficients onto the target words.
    """
    ring = phi.ring
    out: dict[tuple, object] = {}
    for k in range(phi.cutoff + 1):
        for v in z_words_of_weight(k):
            n = len(v)
            if n == 0:
                continue
            poly = Poly.const(Fraction(1))
            for i, ki in enumerate(v, start=1):
                if ki > 1:
                    m = n - i + 1
                    poly = poly * linear_form(
                        [(("X", j), Fraction(1)) for j in range(1, m + 1)]).pow(ki - 1)
            val = phi.value(v)
            for mono, c in poly.terms.items():
                exps = [0] * n
                for (_, idx), e in mono:
                    exps[idx - 1] = e
                target = tuple(e + 1 for e in exps)
                contrib = ring.mul(ring.scalar(c), val)
                out[target] = ring.add(out.get(target, ring.zero()), contrib)
    return Character(ring, phi.cutoff, out)


def phi_corr(phi: Character) -> Character:
    """The correction character: coefficients of
    exp(sum_{n>=2} ((-1)^n / n) phi(z_n) t^n) on powers of z_1.

    Implemented with the t-power reading: the coefficient of t^j is the
    value on the word z_1^j; words containing a letter z_k with k >= 2
    map to zero.
    """
    ring = phi.ring
    cutoff = phi.cutoff
    # exponent series as a list of ring elements, index = power of t
    arg = [ring.zero()] * (cutoff + 1)
    for n in range(2, cutoff + 1):
        arg[n] = ring.mul(ring.scalar(Fraction((-1) ** n, n)), phi.value((n,)))
    series = [ring.zero()] * (cutoff + 1)
    series[0] = ring.one()
    term = [ring.zero()] * (cutoff + 1)
    term[0] = ring.one()
    fact = 1
    for m in range(1, cutoff // 2 + 1):
        nxt = [ring.zero()] * (cutoff + 1)
        for i in range(cutoff + 1):
            if not ring.is_zero(term[i]):
                for j in range(2, cutoff + 1 - i):
                    if not ring.is_zero(arg[j]):
                        nxt[i + j] = ring.add(nxt[i + j], ring.mul(term[i], arg[j]))
        term = nxt
        fact *= m
        inv_fact = ring.scalar(Fraction(1, fact))
        for i in range(cutoff + 1):
            series[i] = ring.add(series[i], ring.mul(inv_fact, term[i]))
    values = {}
    for j in range(cutoff + 1):
        values[(1,) * j] = series[j]
    return Character(ring, cutoff, values)


def eds_check(phi: Character, max_weight: int | None = None) -> dict[str, bool]:
    """The regularized double-shuffle test for a character.

    (i) the character is a homomorphism for the stuffle;
    (ii) after convolving with its correction series and applying the
    substitution automorphism, it is a homomorphism for the index
    shuffle.
    """
    psi = sigma_star(convolution(phi_corr(phi), phi))
    return {
        "stuffle_homomorphism": phi.is_product_hom(stuffle_z, max_weight),
        "regularized_shuffle_homomorphism":
            psi.is_product_hom(index_shuffle_z, max_weight),
    }


# ---------------------------------------------------------------------------
# structural checks tying the pipelines together

def check_projection_kills_derivative(max_weight: int,
                                      cache: BasisCache | None = None) -> bool:
    """The weight-raising derivation lands in the combined ideal."""
    from .derivations import apply_D
    from .words import words_of_weight
    for k in range(max_weight - 1):
        for w in words_of_weight(k):
            img = apply_D(LinComb.of(w))
            if not normal_form(img, IdealKind.COMBINED, cache=cache).is_zero():
                return False
    return True


def lwt0_span_dimension(weight: int, cache: BasisCache | None = None) -> int:
    """Dimension of the span of single-indexed words inside the combined
    quotient at the given weight."""
    from .words import words_of_weight
    cache = cache or default_cache()
    vectors = []
    for zw in z_words_of_weight(weight):
        nf = normal_form(LinComb.of(Word.from_indices(zw)), IdealKind.COMBINED,
                         cache=cache)
        if nf:
            vectors.append(nf)
    words = sorted({w for v in vectors for w in v.terms}, key=Word.sort_key)
    index = {w: i for i, w in enumerate(words)}
    from math import gcd
    rows = []
    for v in vectors:
        denom = 1
        for c in v.terms.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        row = {index[w]: int(c * denom) for w, c in v.terms.items()}
        rows.append(row)
    pivots, _ = sparse_rref(rows)
    return len(pivots)


def check_lwt0_surjectivity(max_weight: int, cache: BasisCache | None = None) -> bool:
    """Single-indexed words span the combined quotient in every weight up
    to the bound."""
    for k in range(max_weight + 1):
        if lwt0_span_dimension(k, cache) != dim(IdealKind.COMBINED, k, cache):
            return False
    return True


def xi_span_dimension(weight: int, cache: BasisCache | None = None) -> int:
    """Dimension of the span of the conjugated zeta values at a weight."""
    vectors = []
    for r in range(1, weight + 1):
        for comp in _weak_compositions(weight - r, r):
            nf = xi_f(comp, weight, cache)
            if nf:
                vectors.append(nf)
    if weight == 0:
        return 1
    words = sorted({w for v in vectors for w in v.terms}, key=Word.sort_key)
    index = {w: i for i, w in enumerate(words)}
    from math import gcd
    rows = []
    for v in vectors:
        denom = 1
        for c in v.terms.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        rows.append({index[w]: int(c * denom) for w, c in v.terms.items()})
    pivots, _ = sparse_rref(rows)
    return len(pivots)


def _weak_compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total + 1):
        for tail in _weak_compositions(total - first, parts - 1):
            out.append((first,) + tail)
    return out
