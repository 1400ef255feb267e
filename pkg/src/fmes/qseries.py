"""Truncated q-series realization: the numerical oracle.

For a word [k1..kr; d1..dr] the attached q-series is

    sum over m1 > .. > mr > 0 and n1, .., nr > 0 of
        prod n_i^(k_i - 1) m_i^(d_i) / (k_i - 1)!  *  q^(m1 n1 + .. + mr nr),

computed exactly by direct enumeration of the (m, n) tuples up to the
truncation order.  The classical Eisenstein normalization adds the
constant term -B_k / (2 k!).  These series realize the word algebra only
modulo lower-weight terms, which is precisely what the numerical checks
in this module exercise: swap invariance holds exactly, the product of
two series equals the stuffle image up to explicit lower-weight
corrections, and the q-derivative intertwines the weight-raising
derivation exactly.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .derivations import apply_D
from .swap import swap_word
from .words import LinComb, Word

_F0 = Fraction(0)


class QSeries:
    """A rational power series in q truncated at order N (inclusive)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=None):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        self.order = order
        data = [Fraction(0)] * (order + 1)
        if coeffs is not None:
            for n, c in (coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)):
                if n <= order:
                    data[n] = Fraction(c)
        self.coeffs = data

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls(order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls(order, {0: 1})

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        return (isinstance(other, QSeries) and self.order == other.order
                and self.coeffs == other.coeffs)

    def __add__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        return QSeries(order, [self.coeffs[n] + other.coeffs[n] for n in range(order + 1)])

    def __sub__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        return QSeries(order, [self.coeffs[n] - other.coeffs[n] for n in range(order + 1)])

    def __neg__(self) -> "QSeries":
        return QSeries(self.order, [-c for c in self.coeffs])

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.order, [c * v for v in self.coeffs])

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        out = [Fraction(0)] * (order + 1)
        for i, a in enumerate(self.coeffs[:order + 1]):
            if not a:
                continue
            for j in range(order + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return QSeries(order, out)

    def q_derivative(self) -> "QSeries":
        """q d/dq: multiplies the n-th coefficient by n."""
        return QSeries(self.order, [n * c for n, c in enumerate(self.coeffs)])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, order: int) -> "QSeries":
        return QSeries(min(order, self.order), self.coeffs[:order + 1])

    def __repr__(self):
        bits = [f"{c}*q^{n}" for n, c in enumerate(self.coeffs) if c]
        return "QSeries(" + (" + ".join(bits) or "0") + f"; O(q^{self.order + 1}))"


@lru_cache(maxsize=None)
def g_series(w: Word, order: int) -> QSeries:
    """Exact coefficients of the q-series attached to a word, to q^order."""
    r = w.depth
    coeffs = [Fraction(0)] * (order + 1)
    if r == 0:
        coeffs[0] = Fraction(1)
        return QSeries(order, coeffs)
    ks = [k for k, _ in w.letters]
    ds = [d for _, d in w.letters]
    norm = Fraction(1)
    for k in ks:
        norm /= factorial(k - 1)

    # depth-first over m_1 > .. > m_r > 0, n_i > 0 with total exponent <= order
    def rec(i: int, m_prev: int, budget: int, weight_factor: int):
        rem = r - i - 1  # letters still to place after this one
        # minimal extra cost for letters i+1..r: m at least rem, rem-1, .., 1
        min_tail = rem * (rem + 1) // 2
        for m in range(rem + 1, min(m_prev - 1, budget - min_tail) + 1):
            md = m ** ds[i]
            max_n = (budget - min_tail) // m
            for n in range(1, max_n + 1):
                contrib = weight_factor * (n ** (ks[i] - 1)) * md
                cost = m * n
                if i + 1 == r:
                    coeffs[order - (budget - cost)] += contrib
                else:
                    rec(i + 1, m, budget - cost, contrib)

    rec(0, order + 1, order, 1)
    # rec indexes coefficients via remaining budget; shift to exponents
    out = [Fraction(0)] * (order + 1)
    for n, c in enumerate(coeffs):
        out[n] = c * norm
    return QSeries(order, out)


def g_series_of_comb(x: LinComb, order: int) -> QSeries:
    total = QSeries(order)
    for w, c in x.terms.items():
        total = total + g_series(w, order).scale(c)
    return total


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2, by the defining recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(1)
    from math import comb
    total = Fraction(0)
    for j in range(n):
        total += comb(n + 1, j) * bernoulli(j)
    return -total / (n + 1)


def eisenstein_G(k: int, order: int) -> QSeries:
    """Eisenstein series G(k) = -B_k/(2 k!) + sum sigma_{k-1}(n)/(k-1)! q^n."""
    if k < 2:
        raise ValueError("eisenstein_G needs k >= 2")
    series = g_series(Word.from_indices((k,)), order)
    const = -bernoulli(k) / (2 * factorial(k))
    coeffs = list(series.coeffs)
    coeffs[0] += const
    return QSeries(order, coeffs)


def eisenstein_E(k: int, order: int) -> QSeries:
    """E(k) = -(2 k!/B_k) G(k); constant term 1."""
    scale = Fraction(-2 * factorial(k), 1) / bernoulli(k)
    return eisenstein_G(k, order).scale(scale)


def eta_power_24(order: int) -> QSeries:
    """q * prod_{n>=1} (1 - q^n)^24, truncated at q^order."""
    prod = QSeries.one(order)
    for n in range(1, order + 1):
        prod = prod * QSeries(order, {0: 1, n: -1})
    power = QSeries.one(order)
    base = prod
    e = 24
    while e:
        if e & 1:
            power = power * base
        e >>= 1
        if e:
            base = base * base
    out = [Fraction(0)] * (order + 1)
    for n, c in enumerate(power.coeffs):
        if n + 1 <= order:
            out[n + 1] = c
    return QSeries(order, out)


# ---------------------------------------------------------------------------
# numerical checks

def check_swap_invariance_g(w: Word, order: int) -> bool:
    """g of a word equals g of its swap, coefficientwise."""
    return g_series(w, order) == g_series_of_comb(swap_word(w), order)


def check_lower_weight_stuffle(order: int) -> bool:
    """The product g[2;1] g[3;2] equals the stuffle image minus the
    explicit lower-weight correction (1/12) g[3;3]."""
    g21 = g_series(Word(((2, 1),)), order)
    g32 = g_series(Word(((3, 2),)), order)
    lhs = g21 * g32
    rhs = (g_series(Word(((2, 1), (3, 2))), order)
           + g_series(Word(((3, 2), (2, 1))), order)
           + g_series(Word(((5, 3),)), order)
           - g_series(Word(((3, 3),)), order).scale(Fraction(1, 12)))
    return lhs == rhs


def lower_weight_defect(u: Word, v: Word, order: int) -> QSeries:
    """g(u) g(v) - g(u * v); nonzero only in lower weight."""
    from .quasishuffle import stuffle
    return g_series(u, order) * g_series(v, order) - g_series_of_comb(stuffle(u, v), order)


def check_derivative_intertwining(w: Word, order: int) -> bool:
    """q d/dq of g(w) equals g(D w), exactly."""
    return g_series(w, order).q_derivative() == g_series_of_comb(apply_D(w), order)


def check_quasimodular_qseries(order: int) -> dict[str, bool]:
    """Classical coefficientwise identities at the q-series level."""
    if order < 12:
        raise ValueError("order must be >= 12")
    G2 = eisenstein_G(2, order)
    G4 = eisenstein_G(4, order)
    G6 = eisenstein_G(6, order)
    G8 = eisenstein_G(8, order)
    D = QSeries.q_derivative
    out = {
        "ramanujan_DG2": D(G2) == 5 * G4 - 2 * (G2 * G2),
        "ramanujan_DG4": D(G4) == 14 * G6 - 8 * (G2 * G4),
        "ramanujan_DG6": D(G6) == Fraction(120, 7) * (G4 * G4) - 12 * (G2 * G6),
        "g8_from_g4": G8 == Fraction(6, 7) * (G4 * G4),
    }
    chazy = (D(D(D(G2))) + 24 * (G2 * D(D(G2))) - 36 * (D(G2) * D(G2)))
    out["chazy"] = chazy.is_zero()
    E4 = eisenstein_E(4, order)
    E6 = eisenstein_E(6, order)
    disc = (E4 * E4 * E4 - E6 * E6).scale(Fraction(1, 1728))
    out["discriminant_eta_product"] = disc == eta_power_24(order)
    return out


def check_depth1_swap_relation(k: int, d: int, order: int) -> bool:
    """g[k;d] = d!/(k-1)! g[d+1;k-1] coefficientwise."""
    lhs = g_series(Word(((k, d),)), order)
    rhs = g_series(Word(((d + 1, k - 1),)), order).scale(
        Fraction(factorial(d), factorial(k - 1)))
    return lhs == rhs
