"""Sparse multivariate polynomials over an exact coefficient domain.

Internal engine shared by the swap substitution, the generating-series
operators, the appendix machinery and the symbolic quasimodular
certificates.  Monomials are canonical sorted tuples of ``(variable,
exponent)`` pairs with positive exponents; variables are arbitrary
hashable objects, typically ``("X", i)`` / ``("Y", i)`` pairs.

Coefficients default to ``fractions.Fraction`` but any commutative ring
whose elements support ``+``, ``*``, unary ``-`` and truthiness works
(used with ring-valued series in the appendix module).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Monomial = tuple[tuple[Hashable, int], ...]

ONE: Monomial = ()


def monomial(*pairs: tuple[Hashable, int]) -> Monomial:
    """Canonical monomial from (variable, exponent) pairs."""
    merged: dict[Hashable, int] = {}
    for v, e in pairs:
        if e:
            merged[v] = merged.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in merged.items() if e))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    """A sparse polynomial: dict from monomial to nonzero coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]] = ()):
        data: dict[Monomial, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            if c:
                acc = data.get(m)
                if acc is None:
                    data[m] = c
                else:
                    acc = acc + c
                    if acc:
                        data[m] = acc
                    else:
                        del data[m]
        self.terms = data

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({ONE: c}) if c else cls()

    @classmethod
    def var(cls, v: Hashable, coeff=Fraction(1)) -> "Poly":
        return cls({monomial((v, 1)): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((m, repr(c)) for m, c in self.terms.items()))

    def __add__(self, other: "Poly") -> "Poly":
        data = dict(self.terms)
        for m, c in other.terms.items():
            acc = data.get(m)
            if acc is None:
                data[m] = c
            else:
                acc = acc + c
                if acc:
                    data[m] = acc
                else:
                    del data[m]
        out = Poly.__new__(Poly)
        out.terms = data
        return out

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return Poly()
        data: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                acc = data.get(m)
                if acc is None:
                    if c:
                        data[m] = c
                else:
                    acc = acc + c
                    if acc:
                        data[m] = acc
                    else:
                        del data[m]
        out = Poly.__new__(Poly)
        out.terms = data
        return out

    def scale(self, c) -> "Poly":
        if not c:
            return Poly()
        out = Poly.__new__(Poly)
        out.terms = {m: v * c for m, v in self.terms.items()}
        return out

    def pow(self, n: int, max_degree: int | None = None) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(Fraction(1))
        base = self
        for _ in range(n):
            result = result * base
            if max_degree is not None:
                result = result.truncate(max_degree)
        return result

    def truncate(self, max_degree: int) -> "Poly":
        out = Poly.__new__(Poly)
        out.terms = {m: c for m, c in self.terms.items() if mono_degree(m) <= max_degree}
        return out

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def coefficient(self, m: Monomial):
        return self.terms.get(m)

    def substitute(self, subs: Mapping[Hashable, "Poly"], max_degree: int | None = None) -> "Poly":
        """Substitute polynomials for variables; missing variables map to 0.

        Every variable occurring in ``self`` must have an entry in ``subs``
        (use ``Poly.var(v)`` for the identity substitution on ``v``).
        """
        total = Poly()
        pow_cache: dict[tuple[Hashable, int], Poly] = {}
        for m, c in self.terms.items():
            term = Poly.const(c) if isinstance(c, Fraction) else Poly({ONE: c})
            for v, e in m:
                key = (v, e)
                p = pow_cache.get(key)
                if p is None:
                    if v not in subs:
                        raise KeyError(f"no substitution for variable {v!r}")
                    p = subs[v].pow(e, max_degree)
                    pow_cache[key] = p
                term = term * p
                if max_degree is not None:
                    term = term.truncate(max_degree)
                if not term:
                    break
            total = total + term
        return total

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else f"{v}" for v, e in m) or "1"
            bits.append(f"{c}*{mono}")
        return "Poly(" + " + ".join(bits) + ")"


def linear_form(vars_and_coeffs: Iterable[tuple[Hashable, object]]) -> Poly:
    return Poly({monomial((v, 1)): c for v, c in vars_and_coeffs if c})
