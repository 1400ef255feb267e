"""Quasimodular identities in the word algebra, verified exactly.

Two complementary toolkits live here.

* Word-level verification: the depth-two double shuffle, the even-weight
  relations, the product recursions, the generalized Euler decomposition,
  the Ramanujan equations and the Chazy equation are all expanded into
  the word algebra and reduced to normal form modulo the swap ideal.

* A free symbolic model: polynomials in e_i (the i-th derivative of the
  weight-2 generator) with D acting as the shift derivation and the
  depth-lowering derivation fixed by its value -1/2 on the generator and
  the sl2 bracket.  Statements in weight 12 (the cusp form, its
  differential equation, Rankin-Cohen closure) are certified here, since
  the direct weight-12 echelon with 46368 words is kept behind a resource
  flag.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .derivations import apply_D, apply_delta
from .polynomials import Poly, monomial
from .quasishuffle import stuffle_comb, stuffle_power
from .quotient import BasisCache, IdealKind, default_cache, normal_form
from .qseries import bernoulli, eisenstein_G
from .words import LinComb, Word

_F0 = Fraction(0)
_F1 = Fraction(1)


def _word(*ks: int) -> LinComb:
    return LinComb.of(Word.from_indices(ks))


def _biword(ks, ds) -> LinComb:
    return LinComb.of(Word.from_indices(ks, ds))


# ---------------------------------------------------------------------------
# free symbolic model: polynomials in e_i = D^i (weight-2 generator)

def e_var(i: int) -> Poly:
    return Poly.var(("e", i))


def free_weight(p: Poly) -> set[int]:
    """Set of graded weights of the monomials; e_i has weight 2 + 2i."""
    out = set()
    for m in p.terms:
        out.add(sum((2 + 2 * i) * exp for (_, i), exp in m))
    return out


def free_D(p: Poly) -> Poly:
    """Shift derivation e_i -> e_{i+1}."""
    out = Poly()
    for m, c in p.terms.items():
        for (name, i), exp in m:
            rest = monomial(*[(v, e) for v, e in m if v != (name, i)],
                            ((name, i), exp - 1))
            out = out + Poly({rest: c * exp}) * e_var(i + 1)
    return out


def free_delta(p: Poly) -> Poly:
    """Depth-lowering derivation: e_0 -> -1/2, e_i -> i(i+1) e_{i-1}."""
    out = Poly()
    for m, c in p.terms.items():
        for (name, i), exp in m:
            rest = monomial(*[(v, e) for v, e in m if v != (name, i)],
                            ((name, i), exp - 1))
            if i == 0:
                img = Poly.const(Fraction(-1, 2))
            else:
                img = e_var(i - 1).scale(Fraction(i * (i + 1)))
            out = out + Poly({rest: c * exp}) * img
    return out


def chazy_rewrite(p: Poly) -> Poly:
    """Reduce modulo the Chazy relation: e_3 = -24 e_0 e_2 + 36 e_1^2,
    with higher e_i rewritten through derivatives of that relation."""
    rules: dict[int, Poly] = {3: e_var(0) * e_var(2).scale(Fraction(-24))
                                 + e_var(1) * e_var(1).scale(Fraction(36))}

    def rule_for(i: int) -> Poly:
        if i not in rules:
            rules[i] = chazy_rewrite(free_D(rule_for(i - 1)))
        return rules[i]

    while True:
        worst = None
        for m in p.terms:
            for (_, i), _ in m:
                if i >= 3 and (worst is None or i > worst):
                    worst = i
        if worst is None:
            return p
        out = Poly()
        for m, c in p.terms.items():
            hit = next((((n, i), e) for (n, i), e in m if i == worst), None)
            if hit is None:
                out = out + Poly({m: c})
                continue
            (var, exp) = hit
            rest = monomial(*[(v, e) for v, e in m if v != var], (var, exp - 1))
            out = out + Poly({rest: c}) * rule_for(worst)
        p = out


def g4_free() -> Poly:
    """The weight-4 generator in the free model: (e_1 + 2 e_0^2)/5."""
    return (e_var(1) + (e_var(0) * e_var(0)).scale(2)).scale(Fraction(1, 5))


def g6_free() -> Poly:
    """The weight-6 generator: (e_2 + 12 e_0 e_1 + 16 e_0^3)/70."""
    return (e_var(2) + (e_var(0) * e_var(1)).scale(12)
            + (e_var(0) * e_var(0) * e_var(0)).scale(16)).scale(Fraction(1, 70))


def pure_g2_coefficient(p: Poly, power: int) -> Fraction:
    """Coefficient of e_0^power (the derivative-free monomial)."""
    c = p.coefficient(monomial((("e", 0), power)))
    return c if c is not None else Fraction(0)


def free_to_words(p: Poly) -> LinComb:
    """Expand a free-model polynomial into the word algebra.

    e_i maps to the i-th derivative of the weight-2 word; products are
    stuffle products.
    """
    gens: dict[int, LinComb] = {}

    def gen(i: int) -> LinComb:
        if i not in gens:
            x = _word(2)
            for _ in range(i):
                x = apply_D(x)
            gens[i] = x
        return gens[i]

    out = LinComb()
    for m, c in p.terms.items():
        term = LinComb.one()
        for (_, i), exp in m:
            for _ in range(exp):
                term = stuffle_comb(term, gen(i))
        out = out + term.scale(c)
    return out


# ---------------------------------------------------------------------------
# polynomials in the three quasimodular generators

@dataclass(frozen=True)
class QmfPolynomial:
    """A polynomial in the weight 2, 4 and 6 generators.

    ``terms`` maps exponent triples (a, b, c) to rational coefficients;
    the monomial weight is 2a + 4b + 6c.
    """

    terms: tuple[tuple[tuple[int, int, int], Fraction], ...]

    @classmethod
    def from_dict(cls, data: dict) -> "QmfPolynomial":
        return cls(tuple(sorted((k, Fraction(v)) for k, v in data.items() if v)))

    @classmethod
    def generator(cls, k: int) -> "QmfPolynomial":
        if k not in (2, 4, 6):
            raise ValueError("generators have weight 2, 4 or 6")
        expo = {2: (1, 0, 0), 4: (0, 1, 0), 6: (0, 0, 1)}[k]
        return cls.from_dict({expo: Fraction(1)})

    def weights(self) -> set[int]:
        return {2 * a + 4 * b + 6 * c for (a, b, c), _ in self.terms}

    def to_words(self) -> LinComb:
        out = LinComb()
        for (a, b, c), coeff in self.terms:
            term = stuffle_power(_word(2), a)
            if b:
                term = stuffle_comb(term, stuffle_power(_word(4), b))
            if c:
                term = stuffle_comb(term, stuffle_power(_word(6), c))
            out = out + term.scale(coeff)
        return out

    def to_free(self) -> Poly:
        g4, g6 = g4_free(), g6_free()
        out = Poly()
        for (a, b, c), coeff in self.terms:
            term = Poly.const(coeff)
            for _ in range(a):
                term = term * e_var(0)
            for _ in range(b):
                term = term * g4
            for _ in range(c):
                term = term * g6
            out = out + term
        return out

    def __add__(self, other: "QmfPolynomial") -> "QmfPolynomial":
        data = dict(self.terms)
        for k, v in other.terms:
            data[k] = data.get(k, _F0) + v
        return QmfPolynomial.from_dict(data)

    def scale(self, c) -> "QmfPolynomial":
        return QmfPolynomial.from_dict({k: Fraction(c) * v for k, v in self.terms})

    def __str__(self):
        names = {(1, 0, 0): "g2", (0, 1, 0): "g4", (0, 0, 1): "g6"}
        bits = []
        for (a, b, c), coeff in self.terms:
            mono = "*".join(filter(None, [f"g2^{a}" if a else "",
                                          f"g4^{b}" if b else "",
                                          f"g6^{c}" if c else ""])) or "1"
            bits.append(f"({coeff})*{mono}")
        return " + ".join(bits) or "0"


def qmf_monomials(weight: int) -> list[tuple[int, int, int]]:
    """Exponent triples (a, b, c) with 2a + 4b + 6c equal to the weight."""
    out = []
    for c in range(weight // 6 + 1):
        for b in range((weight - 6 * c) // 4 + 1):
            rest = weight - 6 * c - 4 * b
            if rest % 2 == 0:
                out.append((rest // 2, b, c))
    return sorted(out)


# ---------------------------------------------------------------------------
# identity verification (word level, modulo the swap ideal)

def verify_depth2_dsh(k1: int, k2: int, d1: int, d2: int,
                      cutoff: int | None = None,
                      cache: BasisCache | None = None) -> bool:
    """Both depth-two expansions of the product of two depth-1 generators
    agree modulo the swap ideal."""
    weight = k1 + k2 + d1 + d2
    if cutoff is not None and weight > cutoff:
        raise ValueError("weight exceeds cutoff")
    stuffle_side = (_biword((k1, k2), (d1, d2)) + _biword((k2, k1), (d2, d1))
                    + _biword((k1 + k2,), (d1 + d2,)))
    other = LinComb()
    for l1 in range(1, k1 + k2):
        l2 = k1 + k2 - l1
        for e1 in range(0, d1 + d2 + 1):
            e2 = d1 + d2 - e1
            coeff = Fraction(0)
            if e1 <= d1:
                coeff += comb(l1 - 1, k1 - 1) * comb(d1, e1) * (-1) ** (d1 - e1)
            if e1 <= d2:
                coeff += comb(l1 - 1, k2 - 1) * comb(d2, e1) * (-1) ** (d2 - e1)
            if coeff:
                other = other + _biword((l1, l2), (e1, e2)).scale(coeff)
    other = other + _biword((k1 + k2 - 1,), (d1 + d2 + 1,)).scale(
        Fraction(factorial(d1) * factorial(d2), factorial(d1 + d2 + 1))
        * comb(k1 + k2 - 2, k1 - 1))
    return normal_form(stuffle_side - other, IdealKind.SWAP, cache=cache).is_zero()


def verify_relpevevk(k1: int, k2: int, cache: BasisCache | None = None) -> bool:
    """Even-weight relation expressing G(k1+k2) through products and one
    bi-indexed correction term."""
    k = k1 + k2
    if k < 4 or k % 2:
        raise ValueError("needs k1 + k2 even and >= 4")
    lhs = _word(k).scale(Fraction(comb(k, k2) - (-1) ** k1, 2))
    rhs = LinComb()
    for j in range(2, k - 1, 2):
        coeff = comb(k - j - 1, k1 - 1) + comb(k - j - 1, k2 - 1) - (1 if j == k1 else 0)
        if coeff:
            rhs = rhs + stuffle_comb(_word(j), _word(k - j)).scale(coeff)
    corr = Fraction(comb(k - 3, k1 - 1) + comb(k - 3, k2 - 1)
                    + (1 if k1 == 1 else 0) + (1 if k2 == 1 else 0), 2)
    rhs = rhs + _biword((k - 1,), (1,)).scale(corr)
    return normal_form(lhs - rhs, IdealKind.SWAP, cache=cache).is_zero()


def verify_mfprod(k: int, part: str = "i", cache: BasisCache | None = None) -> bool:
    """The two product recursions for the even single generators."""
    if part == "i":
        if k < 4 or k % 2:
            raise ValueError("part (i) needs even k >= 4")
        lhs = _word(k).scale(Fraction(k + 1, 2))
        rhs = _biword((k - 1,), (1,))
        for k1 in range(2, k - 1, 2):
            rhs = rhs + stuffle_comb(_word(k1), _word(k - k1))
    elif part == "ii":
        if k < 6 or k % 2:
            raise ValueError("part (ii) needs even k >= 6")
        lhs = _word(k).scale(Fraction((k + 1) * (k - 1) * (k - 6), 12))
        rhs = LinComb()
        for k1 in range(4, k - 3, 2):
            rhs = rhs + stuffle_comb(_word(k1), _word(k - k1)).scale(
                (k1 - 1) * (k - k1 - 1))
    else:
        raise ValueError("part must be 'i' or 'ii'")
    return normal_form(lhs - rhs, IdealKind.SWAP, cache=cache).is_zero()


def _solve_membership(vectors: list[LinComb], target: LinComb,
                      kind: IdealKind, cache: BasisCache | None) -> list[Fraction] | None:
    """Solve sum x_i nf(vectors_i) = nf(target) by exact elimination."""
    nf_vecs = [normal_form(v, kind, cache=cache) for v in vectors]
    nf_t = normal_form(target, kind, cache=cache)
    words = sorted({w for v in nf_vecs for w in v.terms} | set(nf_t.terms),
                   key=Word.sort_key)
    index = {w: i for i, w in enumerate(words)}
    n = len(nf_vecs)
    rows = []
    for w in words:
        rows.append([v.coefficient(w) for v in nf_vecs] + [nf_t.coefficient(w)])
    # dense Gauss on a tiny system
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
        row = [a / row[lead] for a in row]
        pivot_cols.append(lead)
        pivot_rows.append(row)
    sol = [Fraction(0)] * n
    for pc, pr in sorted(zip(pivot_cols, pivot_rows), reverse=True):
        sol[pc] = pr[n] - sum(pr[i] * sol[i] for i in range(pc + 1, n))
    # verify
    for row in rows:
        if sum(row[i] * sol[i] for i in range(n)) != row[n]:
            return None
    return sol


@dataclass(frozen=True)
class EulerDecomposition:
    m: int
    coefficient: Fraction
    derivative_certificate: QmfPolynomial  # Q = D(certificate)
    residual_zero: bool


def euler_coefficient(m: int) -> Fraction:
    return -bernoulli(2 * m) / (2 * factorial(2 * m)) * Fraction(-24) ** m


def euler_decomposition(m: int, cache: BasisCache | None = None) -> EulerDecomposition:
    """G(2m) = c * G(2)^m + D(P) modulo the swap ideal, with the exact
    Bernoulli coefficient and P a quasimodular polynomial of weight 2m-2.

    The membership of the remainder in the image of D is solved by linear
    algebra over the monomial expansion at weight 2m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    c = euler_coefficient(m)
    target = _word(2 * m) - stuffle_power(_word(2), m).scale(c)
    monos = qmf_monomials(2 * m - 2)
    basis_polys = [QmfPolynomial.from_dict({e: Fraction(1)}) for e in monos]
    vectors = [apply_D(p.to_words()) for p in basis_polys]
    sol = _solve_membership(vectors, target, IdealKind.SWAP, cache)
    if sol is None:
        raise ArithmeticError(
            f"no derivative certificate found at weight {2 * m}; "
            f"residual reported by normal form")
    cert = QmfPolynomial.from_dict({e: s for e, s in zip(monos, sol)})
    residual = target - apply_D(cert.to_words())
    ok = normal_form(residual, IdealKind.SWAP, cache=cache).is_zero()
    return EulerDecomposition(m, c, cert, ok)


def verify_ramanujan(cache: BasisCache | None = None) -> dict[str, bool]:
    """The three differential equations for the even generators, reduced
    modulo the swap ideal at weights 4, 6 and 8."""
    g2, g4, g6 = _word(2), _word(4), _word(6)
    eq1 = apply_D(g2) - g4.scale(5) + stuffle_comb(g2, g2).scale(2)
    eq2 = apply_D(g4) - g6.scale(14) + stuffle_comb(g2, g4).scale(8)
    eq3 = (apply_D(g6) - stuffle_comb(g4, g4).scale(Fraction(120, 7))
           + stuffle_comb(g2, g6).scale(12))
    return {
        "ramanujan_weight4": normal_form(eq1, IdealKind.SWAP, cache=cache).is_zero(),
        "ramanujan_weight6": normal_form(eq2, IdealKind.SWAP, cache=cache).is_zero(),
        "ramanujan_weight8": normal_form(eq3, IdealKind.SWAP, cache=cache).is_zero(),
    }


def verify_chazy(cache: BasisCache | None = None) -> bool:
    """D^3 g2 + 24 g2 D^2 g2 - 36 (D g2)^2 vanishes modulo the swap ideal."""
    g2 = _word(2)
    d1 = apply_D(g2)
    d2 = apply_D(d1)
    d3 = apply_D(d2)
    expr = d3 + stuffle_comb(g2, d2).scale(24) - stuffle_comb(d1, d1).scale(36)
    return normal_form(expr, IdealKind.SWAP, cache=cache).is_zero()


def verify_D_depth2(k: int, cache: BasisCache | None = None) -> bool:
    """D G(k) = (2k-1) G(k+2) - G(2,k) - sum_{j=2..k} (k+j-1) G(k+2-j, j)
    modulo the swap ideal, for k >= 2."""
    if k < 2:
        raise ValueError("needs k >= 2")
    rhs = _word(k + 2).scale(2 * k - 1) - _word(2, k)
    for j in range(2, k + 1):
        rhs = rhs - _word(k + 2 - j, j).scale(k + j - 1)
    return normal_form(apply_D(_word(k)) - rhs, IdealKind.SWAP, cache=cache).is_zero()


# ---------------------------------------------------------------------------
# the discriminant cusp form

def delta_cusp_form() -> QmfPolynomial:
    """2400*6! g4^3 - 420*7! g6^2, the first nonzero formal cusp form."""
    return QmfPolynomial.from_dict({(0, 3, 0): Fraction(2400 * factorial(6)),
                                    (0, 0, 2): Fraction(-420 * factorial(7))})


def verify_cusp_properties(cache: BasisCache | None = None,
                           direct_weight12: bool = False) -> dict[str, bool]:
    """Certificates for the weight-12 cusp form.

    (a) normalization: it equals (E(4)^3 - E(6)^2)/1728 under the
        constant-term-1 rescaling of the generators;
    (b) kernel membership: expanded in the free model it has no pure
        g2-power monomial, so every term lies in the constant-term ideal;
    (c) its D-derivative equals -24 g2 times it, modulo the Chazy
        relation in the free model;
    (d) the depth-lowering derivation kills g4, g6, and hence the form,
        exactly at word level.

    ``direct_weight12`` additionally reduces the full weight-12 word
    expansion modulo the combined ideal (expensive; resource-gated by the
    caller).
    """
    out: dict[str, bool] = {}
    delta_f = delta_cusp_form()
    # (a) exact normalization constants
    e4_scale = Fraction(-2 * factorial(4)) / bernoulli(4)   # 1440
    e6_scale = Fraction(-2 * factorial(6)) / bernoulli(6)   # -60480
    lhs = QmfPolynomial.from_dict({
        (0, 3, 0): e4_scale ** 3 / 1728,
        (0, 0, 2): -(e6_scale ** 2) / 1728,
    })
    out["normalization"] = lhs.terms == delta_f.terms
    # (b) free-model expansion: the displayed 5-term polynomial, no e_0^6
    free = delta_f.to_free()
    e0, e1, e2 = e_var(0), e_var(1), e_var(2)
    displayed = ((e0 * e0 * e1 * e1).scale(48) + (e1 * e1 * e1).scale(32)
                 - (e0 * e0 * e0 * e2).scale(32) - (e0 * e1 * e2).scale(24)
                 - (e2 * e2)).scale(432)
    out["free_expansion"] = free == displayed
    out["no_pure_g2_power"] = pure_g2_coefficient(free, 6) == 0
    # (c) D(delta) = E(2) delta = -24 g2 delta, modulo Chazy
    lhs_de = free_D(free) + (e0 * free).scale(24)
    out["d_delta_eigenform"] = chazy_rewrite(lhs_de).is_zero()
    # (d) word-level delta annihilation
    g4w, g6w = _word(4), _word(6)
    out["delta_g4_zero"] = apply_delta(g4w).is_zero()
    out["delta_g6_zero"] = apply_delta(g6w).is_zero()
    out["delta_cusp_zero"] = apply_delta(delta_f.to_words()).is_zero()
    if direct_weight12:
        out["direct_weight12_kernel"] = normal_form(
            delta_f.to_words(), IdealKind.COMBINED, cache=cache).is_zero()
    return out


# ---------------------------------------------------------------------------
# Rankin-Cohen brackets

def rankin_cohen(f: LinComb, g: LinComb, n: int, k: int, l: int) -> LinComb:
    """[f, g]_n with D-powers and stuffle products; f, g of weights k, l."""
    if n < 0:
        raise ValueError("bracket order must be >= 0")
    out = LinComb()
    fr = [f]
    gs = [g]
    for _ in range(n):
        fr.append(apply_D(fr[-1]))
        gs.append(apply_D(gs[-1]))
    for r in range(n + 1):
        s = n - r
        coeff = Fraction((-1) ** r * comb(k + n - 1, s) * comb(l + n - 1, r))
        out = out + stuffle_comb(fr[r], gs[s]).scale(coeff)
    return out


def rankin_cohen_free(fp: Poly, gp: Poly, n: int, k: int, l: int) -> Poly:
    out = Poly()
    fr = [fp]
    gs = [gp]
    for _ in range(n):
        fr.append(free_D(fr[-1]))
        gs.append(free_D(gs[-1]))
    for r in range(n + 1):
        s = n - r
        coeff = Fraction((-1) ** r * comb(k + n - 1, s) * comb(l + n - 1, r))
        out = out + (fr[r] * gs[s]).scale(coeff)
    return out


def verify_rc_delta_closure(n: int) -> dict[str, bool]:
    """The depth-lowering derivation kills the bracket of the weight 4
    and 6 generators, exactly at word level and in the free model."""
    g4w, g6w = _word(4), _word(6)
    word_bracket = rankin_cohen(g4w, g6w, n, 4, 6)
    out = {"word_level": apply_delta(word_bracket).is_zero()}
    free_bracket = rankin_cohen_free(g4_free(), g6_free(), n, 4, 6)
    out["free_model"] = free_delta(free_bracket).is_zero()
    return out


# ---------------------------------------------------------------------------
# structural witnesses

def algebraic_independence_witness() -> bool:
    """The 3x3 matrix of q-coefficients (orders 1..3) of the three even
    Eisenstein series has full rank: a necessary condition for their
    algebraic independence."""
    rows = []
    for k in (2, 4, 6):
        series = eisenstein_G(k, 3)
        rows.append([series[1], series[2], series[3]])
    det = (rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
           - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
           + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]))
    return det != 0


def modular_decomposition_report(k: int, cache: BasisCache | None = None) -> dict:
    """Certificate-level check that weight-k modular polynomials split as
    the line through G(k) plus forms with vanishing pure g2-part.

    Basis monomials are products of the weight 4 and 6 generators; each
    is compared against G(k) through its pure-g2 coefficient in the free
    model.  The pure-g2 coefficient of G(k) is the exact Euler value.
    """
    if k % 2 or k < 4:
        raise ValueError("needs even k >= 4")
    monos = [(a, b) for a in range(k // 4 + 1) for b in range(k // 6 + 1)
             if 4 * a + 6 * b == k]
    gk_value = euler_coefficient(k // 2)
    report = {"weight": k, "dim_modular": len(monos),
              "gk_pure_g2": gk_value, "gk_nonzero": gk_value != 0,
              "complements": []}
    g4p, g6p = g4_free(), g6_free()
    for a, b in monos:
        p = Poly.const(Fraction(1))
        for _ in range(a):
            p = p * g4p
        for _ in range(b):
            p = p * g6p
        cf = pure_g2_coefficient(p, k // 2)
        # f - (cf/gk) G(k) has vanishing pure-g2 part by construction;
        # record the certificate data.
        report["complements"].append({"monomial": (a, b), "pure_g2": cf})
    report["split_ok"] = report["gk_nonzero"]
    return report
