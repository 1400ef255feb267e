"""Truncated bimoulds over an abstract coefficient ring.

A bimould is a tuple (F_0, F_1, ..) where F_n is a polynomial in
X_1..X_n, Y_1..Y_n over the ring, truncated at a fixed depth and total
degree.  The concatenation product shifts the right factor's variables,
the swap substitutes the standard change of variables, and group-like
elements are detected through their word-coefficient character: in the
factorial-normalized basis the coproduct dual to concatenation is the
stuffle on bi-indexed words.

Truncations are part of the type; mixing truncations is an error, never a
silent re-truncation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import comb, factorial

from .polynomials import ONE, Poly, linear_form, monomial
from .quasishuffle import index_shuffle_z, quasi_shuffle_raw, stuffle_z, STUFFLE_DIAMOND
from .rings import CoeffRing
from .words import Word

_F0 = Fraction(0)


def _shift_vars(p: Poly, offset: int) -> Poly:
    if offset == 0:
        return p
    out = {}
    for m, c in p.terms.items():
        out[monomial(*(((axis, idx + offset), e) for (axis, idx), e in m))] = c
    return Poly(out)


@dataclass(frozen=True)
class Bimould:
    ring: CoeffRing
    rmax: int
    degree: int
    components: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.components) != self.rmax + 1:
            raise ValueError("component count must be rmax + 1")

    @classmethod
    def from_components(cls, ring, rmax, degree, comps) -> "Bimould":
        comps = list(comps) + [Poly()] * (rmax + 1 - len(comps))
        return cls(ring, rmax, degree, tuple(p.truncate(degree) for p in comps))

    @classmethod
    def unit(cls, ring: CoeffRing, rmax: int, degree: int) -> "Bimould":
        comps = [Poly({ONE: ring.one()})] + [Poly()] * rmax
        return cls(ring, rmax, degree, tuple(comps))

    def _check_compatible(self, other: "Bimould"):
        if (self.rmax, self.degree) != (other.rmax, other.degree):
            raise ValueError("bimould truncations differ; no silent re-truncation")
        if self.ring is not other.ring:
            raise ValueError("bimoulds live over different rings")

    def __add__(self, other: "Bimould") -> "Bimould":
        self._check_compatible(other)
        return Bimould(self.ring, self.rmax, self.degree,
                       tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "Bimould") -> "Bimould":
        self._check_compatible(other)
        return Bimould(self.ring, self.rmax, self.degree,
                       tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, c) -> "Bimould":
        return Bimould(self.ring, self.rmax, self.degree,
                       tuple(p.scale(c) for p in self.components))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Bimould)
                and (self.rmax, self.degree) == (other.rmax, other.degree)
                and self.components == other.components)

    def is_zero(self) -> bool:
        return all(not p for p in self.components)


def concat(F: Bimould, G: Bimould) -> Bimould:
    """Concatenation product: H_n = sum_i F_i * G_{n-i} with the right
    factor's variables shifted past the left one's."""
    F._check_compatible(G)
    comps = []
    for n in range(F.rmax + 1):
        acc = Poly()
        for i in range(n + 1):
            left = F.components[i]
            right = G.components[n - i]
            if left and right:
                acc = acc + (left * _shift_vars(right, i)).truncate(F.degree)
        comps.append(acc)
    return Bimould(F.ring, F.rmax, F.degree, tuple(comps))


def concat_inverse(F: Bimould) -> Bimould:
    """Two-sided inverse for the concatenation product.

    Requires the depth-0 component to be a unit of the ring; solved
    degree by degree in the depth."""
    const = F.components[0].coefficient(ONE)
    if const is None or F.ring.is_zero(const):
        raise ValueError("depth-0 component is not a unit")
    inv0 = F.ring.invert(const)
    neg_inv0 = F.ring.neg(inv0)
    comps = [Poly({ONE: inv0})]
    for n in range(1, F.rmax + 1):
        acc = Poly()
        for i in range(1, n + 1):
            left = F.components[i]
            right = comps[n - i]
            if left and right:
                acc = acc + (left * _shift_vars(right, i)).truncate(F.degree)
        comps.append(acc.scale(neg_inv0))
    return Bimould(F.ring, F.rmax, F.degree, tuple(comps))


def swap_bimould(F: Bimould) -> Bimould:
    """The involution: X_i -> Y_1 + .. + Y_{n-i+1}, Y_i -> X_{n-i+1} -
    X_{n-i+2} componentwise (raw series, no factorial normalization)."""
    comps = [F.components[0]]
    for n in range(1, F.rmax + 1):
        subs = {}
        for i in range(1, n + 1):
            subs[("X", i)] = linear_form(
                [(("Y", j), Fraction(1)) for j in range(1, n - i + 2)])
            pairs = [(("X", n - i + 1), Fraction(1))]
            if n - i + 2 <= n:
                pairs.append((("X", n - i + 2), Fraction(-1)))
            subs[("Y", i)] = linear_form(pairs)
        comps.append(F.components[n].substitute(subs, F.degree))
    return Bimould(F.ring, F.rmax, F.degree, tuple(comps))


def constants(F: Bimould) -> Bimould:
    """c(F): keep only each component's constant term."""
    comps = []
    for p in F.components:
        c = p.coefficient(ONE)
        comps.append(Poly({ONE: c}) if c is not None else Poly())
    return Bimould(F.ring, F.rmax, F.degree, tuple(comps))


def project_x(F: Bimould) -> Bimould:
    """c_X(F): set all Y variables to zero."""
    comps = []
    for p in F.components:
        comps.append(Poly({m: c for m, c in p.terms.items()
                           if all(axis != "Y" for (axis, _), _e in m)}))
    return Bimould(F.ring, F.rmax, F.degree, tuple(comps))


def in_m_x(F: Bimould) -> bool:
    return all(all(axis != "Y" for (axis, _), _ in m)
               for p in F.components for m in p.terms)


def in_m_y(F: Bimould) -> bool:
    return all(all(axis != "X" for (axis, _), _ in m)
               for p in F.components for m in p.terms)


def lambda_embed(coeffs: list, ring: CoeffRing, rmax: int, degree: int) -> Bimould:
    """Embed a one-variable power series: the n-th component is the
    constant equal to the n-th coefficient."""
    comps = []
    for n in range(rmax + 1):
        c = coeffs[n] if n < len(coeffs) else ring.zero()
        comps.append(Poly({ONE: c}) if not ring.is_zero(c) else Poly())
    return Bimould(ring, rmax, degree, tuple(comps))


def bijection_phi(H: Bimould) -> Bimould:
    """swap(H) (.) c(H)^(-1) (.) H, for H in the X-only subalgebra."""
    if not in_m_x(H):
        raise ValueError("bijection_phi expects an X-only bimould")
    return concat(concat(swap_bimould(H), concat_inverse(constants(H))), H)


def bijection_psi(F: Bimould) -> Bimould:
    return project_x(F)


# ---------------------------------------------------------------------------
# word characters and group-likeness

def word_coefficient(F: Bimould, w: Word):
    """Coefficient of the word w in the factorial-normalized basis."""
    n = w.depth
    if n > F.rmax:
        raise ValueError("word depth exceeds truncation")
    pairs = []
    norm = 1
    for i, (k, d) in enumerate(w.letters, start=1):
        if k > 1:
            pairs.append((("X", i), k - 1))
        if d > 0:
            pairs.append((("Y", i), d))
            norm *= factorial(d)
    if sum(e for _, e in pairs) > F.degree:
        raise ValueError("word degree exceeds truncation")
    c = F.components[n].coefficient(monomial(*pairs))
    if c is None:
        return F.ring.zero()
    return F.ring.mul(F.ring.scalar(Fraction(norm)), c)


def max_character_weight(F: Bimould) -> int:
    """Largest W such that every word of weight <= W fits the truncation."""
    return min(F.rmax, F.degree + 1)


def is_grouplike(F: Bimould, max_weight: int | None = None) -> bool:
    """Group-likeness via the character criterion: the word coefficients
    multiply by the stuffle, and the depth-0 component is one."""
    one = F.components[0].coefficient(ONE)
    if one is None or not F.ring.eq(one, F.ring.one()):
        return False
    bound = max_character_weight(F)
    if max_weight is not None:
        bound = min(bound, max_weight)
    ring = F.ring
    from .words import words_of_weight
    for a in range(1, bound):
        for b in range(1, bound - a + 1):
            for u in words_of_weight(a):
                if u.depth > F.rmax:
                    continue
                fu = word_coefficient(F, u)
                for v in words_of_weight(b):
                    if v.depth > F.rmax or u.depth + v.depth > F.rmax:
                        continue
                    rhs = ring.mul(fu, word_coefficient(F, v))
                    lhs = ring.zero()
                    for t, c in quasi_shuffle_raw(u.letters, v.letters,
                                                  STUFFLE_DIAMOND).items():
                        lhs = ring.add(lhs, ring.mul(
                            ring.scalar(Fraction(c)), word_coefficient(F, Word(t))))
                    if not ring.eq(lhs, rhs):
                        return False
    return True


def is_grouplike_x(F: Bimould, max_weight: int | None = None) -> bool:
    """Group-likeness inside the X-only subalgebra: the z-word character
    multiplies by the z-stuffle."""
    if not in_m_x(F):
        return False
    one = F.components[0].coefficient(ONE)
    if one is None or not F.ring.eq(one, F.ring.one()):
        return False
    ring = F.ring

    def char(zw):
        n = len(zw)
        if n > F.rmax:
            raise ValueError("depth exceeds truncation")
        pairs = [(("X", i), k - 1) for i, k in enumerate(zw, start=1) if k > 1]
        c = F.components[n].coefficient(monomial(*pairs))
        return ring.zero() if c is None else c

    bound = max_character_weight(F)
    if max_weight is not None:
        bound = min(bound, max_weight)
    from .quasishuffle import z_words_of_weight
    for a in range(1, bound):
        for b in range(1, bound - a + 1):
            for u in z_words_of_weight(a):
                for v in z_words_of_weight(b):
                    if len(u) + len(v) > F.rmax:
                        continue
                    rhs = ring.mul(char(u), char(v))
                    lhs = ring.zero()
                    for t, c in stuffle_z(u, v).items():
                        lhs = ring.add(lhs, ring.mul(ring.scalar(Fraction(c)), char(t)))
                    if not ring.eq(lhs, rhs):
                        return False
    return True


def is_grouplike_y(F: Bimould, max_weight: int | None = None) -> bool:
    """Group-likeness inside the Y-only subalgebra: the raw coefficients
    on Y-monomials multiply by the plain index shuffle of the exponent
    sequences (the per-slot coproduct is primitive)."""
    if not in_m_y(F):
        return False
    one = F.components[0].coefficient(ONE)
    if one is None or not F.ring.eq(one, F.ring.one()):
        return False
    ring = F.ring

    def char(ds):
        n = len(ds)
        if n > F.rmax:
            raise ValueError("depth exceeds truncation")
        pairs = [(("Y", i), d) for i, d in enumerate(ds, start=1) if d > 0]
        c = F.components[n].coefficient(monomial(*pairs))
        return ring.zero() if c is None else c

    def d_words(total_size: int):
        # sequences of d >= 0 letters, graded by depth + sum of entries
        out = []
        for n in range(total_size + 1):
            for comp in _weak_comps(total_size - n, n):
                out.append(comp)
        return out

    bound = max_character_weight(F)
    if max_weight is not None:
        bound = min(bound, max_weight)
    for a in range(1, bound):
        for b in range(1, bound - a + 1):
            for u in d_words(a):
                if not u:
                    continue
                for v in d_words(b):
                    if not v or len(u) + len(v) > F.rmax:
                        continue
                    if sum(u) + sum(v) > F.degree:
                        continue
                    rhs = ring.mul(char(u), char(v))
                    lhs = ring.zero()
                    for t, c in index_shuffle_z(u, v).items():
                        lhs = ring.add(lhs, ring.mul(ring.scalar(Fraction(c)), char(t)))
                    if not ring.eq(lhs, rhs):
                        return False
    return True


def _weak_comps(total: int, parts: int):
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total + 1):
        for tail in _weak_comps(total - first, parts - 1):
            out.append((first,) + tail)
    return out


# ---------------------------------------------------------------------------
# the coproduct on letter monomials

UNIT_LEG = None  # the depth-0 unit of the tuple algebra in a tensor leg


def coproduct_delta_star(k: int, d: int) -> dict:
    """Coproduct of the letter monomial X^(k-1) Y^d as a map to tensor
    pairs; ``None`` marks the depth-0 unit of the tuple algebra.

    Split legs are genuine letters (including the slot constant [1;0],
    whose own split sum is empty, making it primitive); the depth-0 unit
    maps to unit (x) unit.  This is the coassociative reading dual to the
    stuffle on words.
    """
    if k < 1 or d < 0:
        raise ValueError("need k >= 1, d >= 0")
    out = {((k, d), UNIT_LEG): Fraction(1), (UNIT_LEG, (k, d)): Fraction(1)}
    for k1 in range(1, k):
        k2 = k - k1
        for d1 in range(d + 1):
            d2 = d - d1
            key = ((k1, d1), (k2, d2))
            out[key] = out.get(key, _F0) + comb(d, d1)
    return out


def _coproduct_of_leg(leg) -> dict:
    if leg is UNIT_LEG:
        return {(UNIT_LEG, UNIT_LEG): Fraction(1)}
    return coproduct_delta_star(*leg)


def coproduct_coassociative(k: int, d: int) -> bool:
    """(Delta (x) id) Delta equals (id (x) Delta) Delta on the monomial."""
    first = coproduct_delta_star(k, d)
    left: dict = {}
    right: dict = {}
    for (a, b), c in first.items():
        for (a1, a2), c2 in _coproduct_of_leg(a).items():
            key = (a1, a2, b)
            left[key] = left.get(key, _F0) + c * c2
        for (b1, b2), c2 in _coproduct_of_leg(b).items():
            key = (a, b1, b2)
            right[key] = right.get(key, _F0) + c * c2
    left = {k2: v for k2, v in left.items() if v}
    right = {k2: v for k2, v in right.items() if v}
    return left == right


# ---------------------------------------------------------------------------
# group-like construction and the equivalence report

def grouplike_from_primitive_words(ring: CoeffRing, rmax: int, degree: int,
                                   letter_values: dict) -> Bimould:
    """exp for the concatenation product of a primitive element supported
    on single letters with k = 1.

    Letters outside the image of the diamond (upper index 1) never occur
    in a stuffle product of nonempty words, so a depth-1 element
    supported on them kills all products: it is primitive, and its
    exponential is group-like.
    """
    comps = [Poly()] * (rmax + 1)
    p1 = Poly()
    for (k, dd), val in letter_values.items():
        if k != 1:
            raise ValueError("primitive letters must have upper index 1")
        deg = (k - 1) + dd
        if deg > degree:
            continue
        pairs = []
        if dd > 0:
            pairs.append((("Y", 1), dd))
        p1 = p1 + Poly({monomial(*pairs): ring.mul(
            val, ring.scalar(Fraction(1, factorial(dd))))})
    prim = Bimould.from_components(ring, rmax, degree, [Poly(), p1])
    total = Bimould.unit(ring, rmax, degree)
    power = Bimould.unit(ring, rmax, degree)
    for m in range(1, rmax + 1):
        power = concat(power, prim)
        total = total + power.scale(Fraction(1, factorial(m)))
    return total


def zeta_valued_bimould(cutoff: int, cache=None) -> Bimould:
    """The principal integration fixture: depth-n component collects the
    quotient classes of all words of depth n and weight <= cutoff in the
    factorial-normalized basis, over the truncated quotient ring."""
    from .quotient import IdealKind
    from .rings import GradedQuotientRing
    from .words import words_of_weight
    ring = GradedQuotientRing(cutoff, IdealKind.COMBINED, cache)
    rmax = cutoff
    degree = max(cutoff - 1, 0)
    comps = [Poly({ONE: ring.one()})] + [Poly()] * rmax
    for weight in range(1, cutoff + 1):
        for w in words_of_weight(weight):
            n = w.depth
            pairs = []
            norm = 1
            for i, (k, d) in enumerate(w.letters, start=1):
                if k > 1:
                    pairs.append((("X", i), k - 1))
                if d > 0:
                    pairs.append((("Y", i), d))
                    norm *= factorial(d)
            val = ring.class_of_word(w)
            if val.rep:
                coeff = val * Fraction(1, norm)
                comps[n] = comps[n] + Poly({monomial(*pairs): coeff})
    return Bimould(ring, rmax, degree, tuple(comps))


def corr_series(F: Bimould) -> Bimould:
    """lambda(exp(sum_{n>=2} ((-1)^n/n) f_{n,0} t^n)) with f_{n,0} the
    coefficient of X^(n-1) in the depth-1 component."""
    ring = F.ring
    cutoff = F.rmax
    arg = [ring.zero()] * (cutoff + 1)
    for n in range(2, cutoff + 1):
        if n - 1 > F.degree:
            break
        c = F.components[1].coefficient(monomial((("X", 1), n - 1)))
        if c is not None:
            arg[n] = ring.mul(ring.scalar(Fraction((-1) ** n, n)), c)
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
        inv = ring.scalar(Fraction(1, fact))
        for i in range(cutoff + 1):
            series[i] = ring.add(series[i], ring.mul(inv, term[i]))
    return lambda_embed(series, ring, F.rmax, F.degree)


def check_grouplike_equivalence(F: Bimould, max_weight: int | None = None) -> dict:
    """Both sides of the group-like equivalence, within truncation.

    Preconditions (swap invariance and the factorization through the
    X-projection) are verified first and reported; the two sides are the
    group-likeness of F itself versus the group-likeness of its
    X-projection together with that of the corrected, swapped Y-side.
    """
    out: dict[str, bool] = {}
    out["precondition_swap_invariant"] = swap_bimould(F) == F
    H = project_x(F)
    out["precondition_factorization"] = bijection_phi(H) == F
    if not (out["precondition_swap_invariant"] and out["precondition_factorization"]):
        out["equivalence_agrees"] = False
        return out
    side1 = is_grouplike(F, max_weight)
    corr = corr_series(F)
    y_side = swap_bimould(concat(corr, H))
    side2 = is_grouplike_x(H, max_weight) and is_grouplike_y(y_side, max_weight)
    out["side_grouplike"] = side1
    out["side_factor_grouplike"] = side2
    out["equivalence_agrees"] = side1 == side2
    return out
