"""Coefficient rings: the rationals and weight-truncated quotient rings.

A coefficient ring exposes zero, one, addition, negation, multiplication,
equality and embedding of rationals.  The truncated quotient ring has the
normal-form classes of words of weight at most K as elements, with the
stuffle product followed by reduction; products landing above the cutoff
truncate to zero, which keeps the ring structure (the dropped part sits
in higher weight only).
"""
from __future__ import annotations

import random
from fractions import Fraction

from .quasishuffle import stuffle_comb
from .quotient import BasisCache, IdealKind, normal_form
from .words import LinComb, Word, words_of_weight


class CoeffRing:
    """Interface for commutative unital rings with exact equality."""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        raise NotImplementedError

    def scalar(self, c: Fraction):
        """Embed a rational."""
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero())

    def invert(self, a):
        raise NotImplementedError(f"{type(self).__name__} has no division")

    def sample_elements(self, rng: random.Random, count: int) -> list:
        return [self.scalar(Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
                for _ in range(count)]


class RationalField(CoeffRing):
    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def eq(self, a, b):
        return a == b

    def scalar(self, c):
        return Fraction(c)

    def invert(self, a):
        if not a:
            raise ZeroDivisionError("inverting 0")
        return 1 / Fraction(a)


QQ = RationalField()


class QElement:
    """Element of a truncated quotient ring; arithmetic dunders included
    so that generic polynomial code can use ring-valued coefficients."""

    __slots__ = ("ring", "rep")

    def __init__(self, ring: "GradedQuotientRing", rep: LinComb):
        self.ring = ring
        self.rep = rep

    def __add__(self, other):
        if isinstance(other, QElement):
            return QElement(self.ring, self.rep + other.rep)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, QElement):
            return QElement(self.ring, self.rep - other.rep)
        return NotImplemented

    def __neg__(self):
        return QElement(self.ring, -self.rep)

    def __mul__(self, other):
        if isinstance(other, QElement):
            return self.ring.mul(self, other)
        if isinstance(other, (int, Fraction)):
            return QElement(self.ring, self.rep.scale(other))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, QElement) and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __bool__(self):
        return bool(self.rep)

    def __repr__(self):
        return f"<{self.rep}>"


class GradedQuotientRing(CoeffRing):
    """Normal forms of weight <= K modulo an ideal, with truncation.

    Serves as the finite-dimensional coefficient ring for the appendix
    machinery; multiplication is the stuffle followed by reduction, and
    components above the cutoff are dropped.
    """

    def __init__(self, max_weight: int, kind: IdealKind = IdealKind.COMBINED,
                 cache: BasisCache | None = None):
        self.max_weight = max_weight
        self.kind = kind
        self.cache = cache

    def element(self, x: LinComb) -> QElement:
        reduced = normal_form(self._truncate(x), self.kind, cache=self.cache)
        return QElement(self, reduced)

    def class_of_word(self, w: Word) -> QElement:
        if w.weight > self.max_weight:
            return self.zero()
        return self.element(LinComb.of(w))

    def _truncate(self, x: LinComb) -> LinComb:
        return LinComb({w: c for w, c in x.terms.items() if w.weight <= self.max_weight})

    def zero(self):
        return QElement(self, LinComb())

    def one(self):
        return QElement(self, LinComb.one())

    def add(self, a: QElement, b: QElement):
        return QElement(self, a.rep + b.rep)

    def neg(self, a: QElement):
        return QElement(self, -a.rep)

    def mul(self, a: QElement, b: QElement):
        prod = self._truncate(stuffle_comb(a.rep, b.rep))
        return QElement(self, normal_form(prod, self.kind, cache=self.cache))

    def eq(self, a: QElement, b: QElement) -> bool:
        return a.rep == b.rep

    def scalar(self, c):
        return QElement(self, LinComb.one().scale(Fraction(c)))

    def invert(self, a: QElement) -> QElement:
        """Inverse of an element whose weight-0 part is nonzero.

        The positive-weight part is nilpotent under truncation, so the
        geometric series terminates."""
        c0 = a.rep.coefficient(Word(()))
        if not c0:
            raise ZeroDivisionError("element has no constant part")
        n = QElement(self, a.rep.scale(1 / c0) - LinComb.one())
        # (1 + n)^(-1) = sum (-n)^i, finite by nilpotency under truncation
        total = self.one()
        power = self.one()
        for _ in range(self.max_weight):
            power = QElement(self, -self.mul(power, n).rep)
            if not power.rep:
                break
            total = QElement(self, total.rep + power.rep)
        return QElement(self, total.rep.scale(1 / c0))

    def sample_elements(self, rng: random.Random, count: int) -> list:
        pool = [w for k in range(self.max_weight + 1) for w in words_of_weight(k)]
        out = []
        for _ in range(count):
            terms = {}
            for _ in range(rng.randint(1, 3)):
                terms[rng.choice(pool)] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            out.append(self.element(LinComb(terms)))
        return out


def check_ring_axioms(ring: CoeffRing, samples: int = 25, seed: int = 0xA1) -> bool:
    """Sampled commutative unital ring axioms; raises on violation."""
    rng = random.Random(seed)
    elems = ring.sample_elements(rng, max(3, samples // 3))
    one, zero = ring.one(), ring.zero()
    for _ in range(samples):
        a, b, c = (rng.choice(elems) for _ in range(3))
        if not ring.eq(ring.add(a, b), ring.add(b, a)):
            raise AssertionError("addition not commutative")
        if not ring.eq(ring.add(ring.add(a, b), c), ring.add(a, ring.add(b, c))):
            raise AssertionError("addition not associative")
        if not ring.eq(ring.mul(a, b), ring.mul(b, a)):
            raise AssertionError("multiplication not commutative")
        if not ring.eq(ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c))):
            raise AssertionError("multiplication not associative")
        if not ring.eq(ring.mul(a, ring.add(b, c)),
                       ring.add(ring.mul(a, b), ring.mul(a, c))):
            raise AssertionError("distributivity fails")
        if not ring.eq(ring.mul(a, one), a) or not ring.eq(ring.add(a, zero), a):
            raise AssertionError("unit laws fail")
        if not ring.eq(ring.add(a, ring.neg(a)), zero):
            raise AssertionError("negation fails")
    return True
