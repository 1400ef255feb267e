"""Report-only checks for the conjectural statements.

Everything here *reports*; nothing asserts.  The checks cover the weight
-3 operator (Leibniz rule, swap equivariance, independence from the
commutator of the weight -1 and -2 derivations), the span of the
single-indexed words inside the swap quotient, the closure of the
all-indices->=2 span under the weight-raising derivation, and the rank
of the space of swap-equivariant derivations at low weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .derivations import apply_D, apply_t, delta, omega, commutator
from .quasishuffle import stuffle_comb
from .quotient import (BasisCache, IdealKind, default_cache, dim, in_ideal,
                       normal_form, sparse_rref)
from .swap import swap_lincomb, swap_word
from .words import LinComb, Word, words_of_weight

_F0 = Fraction(0)


@dataclass
class ConjectureReport:
    name: str
    holds: bool
    checked: int
    failures: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)


def t_leibniz_report(max_weight: int = 6) -> ConjectureReport:
    """Leibniz rule for the weight -3 operator on all pairs with combined
    weight up to the bound (exact, not modulo the ideal)."""
    checked = 0
    failures = []
    for a in range(1, max_weight):
        for b in range(a, max_weight - a + 1):
            for u in words_of_weight(a):
                for v in words_of_weight(b):
                    checked += 1
                    uv = stuffle_comb(LinComb.of(u), LinComb.of(v))
                    defect = (apply_t(uv)
                              - stuffle_comb(apply_t(u), LinComb.of(v))
                              - stuffle_comb(LinComb.of(u), apply_t(v)))
                    if not defect.is_zero():
                        failures.append((str(u), str(v)))
    return ConjectureReport("t_leibniz", not failures, checked, failures)


def t_equivariance_report(max_weight: int = 6,
                          cache: BasisCache | None = None) -> ConjectureReport:
    """[t, swap] on all words up to the bound: counted exactly and modulo
    the swap ideal."""
    checked = 0
    failures = []
    exact_failures = 0
    for k in range(1, max_weight + 1):
        for w in words_of_weight(k):
            checked += 1
            com = apply_t(swap_word(w)) - swap_lincomb(apply_t(w))
            if not com.is_zero():
                exact_failures += 1
                if not in_ideal(com, IdealKind.SWAP, cache=cache):
                    failures.append(str(w))
    return ConjectureReport("t_swap_equivariance", not failures, checked, failures,
                            {"exact_commutator_nonzero": exact_failures})


def t_independence_report(max_weight: int = 6) -> ConjectureReport:
    """The weight -3 operator is not a scalar multiple of the commutator
    of the weight -1 and -2 derivations, as maps on words up to the
    bound: the 2 x N matrix of their coefficients has rank 2."""
    od = commutator(omega, delta)
    rows: list[dict[int, Fraction]] = [dict(), dict()]
    col = {}
    for k in range(1, max_weight + 1):
        for w in words_of_weight(k):
            for v, c in apply_t(w).terms.items():
                col.setdefault((w, v), len(col))
                rows[0][col[(w, v)]] = c
            for v, c in od(w).terms.items():
                col.setdefault((w, v), len(col))
                rows[1][col[(w, v)]] = c
    int_rows = []
    for row in rows:
        denom = 1
        for c in row.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        int_rows.append({c2: int(v * denom) for c2, v in row.items()})
    pivots, _ = sparse_rref(int_rows)
    rank = len(pivots)
    return ConjectureReport("t_independent_of_omega_delta", rank == 2,
                            len(col), [], {"rank": rank})


def lwt0_span_report(max_weight: int = 6,
                     cache: BasisCache | None = None) -> ConjectureReport:
    """Dimension of the span of single-indexed words inside the swap
    quotient versus the full quotient dimension, per weight."""
    cache = cache or default_cache()
    rows = []
    all_equal = True
    for k in range(max_weight + 1):
        vectors = []
        from .quasishuffle import z_words_of_weight
        for zw in z_words_of_weight(k):
            nf = normal_form(LinComb.of(Word.from_indices(zw)), IdealKind.SWAP,
                             cache=cache)
            if nf:
                vectors.append(nf)
        words = sorted({w for v in vectors for w in v.terms}, key=Word.sort_key)
        index = {w: i for i, w in enumerate(words)}
        int_rows = []
        for v in vectors:
            denom = 1
            for c in v.terms.values():
                denom = denom * c.denominator // gcd(denom, c.denominator)
            int_rows.append({index[w]: int(c * denom) for w, c in v.terms.items()})
        pivots, _ = sparse_rref(int_rows)
        span = len(pivots) if k else 1
        full = dim(IdealKind.SWAP, k, cache)
        rows.append({"weight": k, "lwt0_span": span, "quotient_dim": full})
        if span != full:
            all_equal = False
    return ConjectureReport("lwt0_words_span_quotient", all_equal, max_weight + 1,
                            [r for r in rows if r["lwt0_span"] != r["quotient_dim"]],
                            {"rows": rows})


def eisenstein_closure_report(max_weight: int = 7,
                              cache: BasisCache | None = None) -> ConjectureReport:
    """Closure of the span of words with every index >= 2 under the
    weight-raising derivation, checked inside the swap quotient."""
    from .quasishuffle import z_words_of_weight
    cache = cache or default_cache()
    checked = 0
    failures = []
    for k in range(2, max_weight - 1):
        # target space at weight k+2
        basis_vectors = []
        for zw in z_words_of_weight(k + 2):
            if zw and all(x >= 2 for x in zw):
                nf = normal_form(LinComb.of(Word.from_indices(zw)), IdealKind.SWAP,
                                 cache=cache)
                if nf:
                    basis_vectors.append(nf)
        words = sorted({w for v in basis_vectors for w in v.terms}, key=Word.sort_key)
        index = {w: i for i, w in enumerate(words)}

        def int_row(v: LinComb, idx) -> dict[int, int] | None:
            denom = 1
            for c in v.terms.values():
                denom = denom * c.denominator // gcd(denom, c.denominator)
            row = {}
            for w, c in v.terms.items():
                if w not in idx:
                    return None
                row[idx[w]] = int(c * denom)
            return row

        span_rows = [int_row(v, index) for v in basis_vectors]
        pivots, reduced = sparse_rref([r for r in span_rows if r])
        base_rank = len(pivots)
        for zw in z_words_of_weight(k):
            if not zw or any(x < 2 for x in zw):
                continue
            checked += 1
            img = normal_form(apply_D(LinComb.of(Word.from_indices(zw))),
                              IdealKind.SWAP, cache=cache)
            row = int_row(img, index)
            if row is None:
                failures.append(str(Word.from_indices(zw)))
                continue
            new_pivots, _ = sparse_rref([r for r in span_rows if r] + [row])
            if len(new_pivots) != base_rank:
                failures.append(str(Word.from_indices(zw)))
    return ConjectureReport("eisenstein_span_closed_under_D", not failures,
                            checked, failures)


def equivariant_derivation_rank_report(weight_shift: int, max_weight: int = 3,
                                       ) -> ConjectureReport:
    """Kernel dimension of the combined Leibniz + swap-equivariance
    constraints for a general linear map of the given weight shift on
    words up to the bound.

    Low cutoffs under-constrain the system, so this is a report: the
    named derivations lie in the kernel, and uniqueness is not claimed.
    """
    unknowns: dict[tuple[Word, Word], int] = {}

    def var(w: Word, u: Word) -> int:
        key = (w, u)
        if key not in unknowns:
            unknowns[key] = len(unknowns)
        return unknowns[key]

    for k in range(1, max_weight + 1):
        if k + weight_shift < 0:
            continue
        for w in words_of_weight(k):
            for u in words_of_weight(k + weight_shift):
                var(w, u)
    rows: list[dict[int, Fraction]] = []

    def theta_row_of(x: LinComb) -> dict[tuple[Word, Word], Fraction]:
        # formal Theta(x) as a linear expression in the unknowns
        out: dict[tuple[Word, Word], Fraction] = {}
        for w, c in x.terms.items():
            if w.weight + weight_shift < 0 or w.depth == 0:
                continue
            for u in words_of_weight(w.weight + weight_shift):
                key = (w, u)
                out[key] = out.get(key, _F0) + c
        return out

    # Leibniz: theta(u*v) - theta(u)*v - u*theta(v) = 0
    for a in range(1, max_weight):
        for b in range(a, max_weight - a + 1):
            for u in words_of_weight(a):
                for v in words_of_weight(b):
                    prod = stuffle_comb(LinComb.of(u), LinComb.of(v))
                    # collect per output word an equation
                    eq: dict[Word, dict[int, Fraction]] = {}
                    for w, c in prod.terms.items():
                        if w.weight + weight_shift < 0:
                            continue
                        for out_w in words_of_weight(w.weight + weight_shift):
                            eq.setdefault(out_w, {})[var(w, out_w)] = \
                                eq.get(out_w, {}).get(var(w, out_w), _F0) + c
                    for side, fixed in ((u, v), (v, u)):
                        if side.weight + weight_shift < 0:
                            continue
                        for out_w in words_of_weight(side.weight + weight_shift):
                            prod2 = stuffle_comb(LinComb.of(out_w), LinComb.of(fixed))
                            vi = var(side, out_w)
                            for w2, c2 in prod2.terms.items():
                                d = eq.setdefault(w2, {})
                                d[vi] = d.get(vi, _F0) - c2
                    rows.extend(r for r in eq.values() if r)
    # equivariance: theta(sigma w) - sigma(theta w) = 0
    for k in range(1, max_weight + 1):
        if k + weight_shift < 0:
            continue
        for w in words_of_weight(k):
            eq: dict[Word, dict[int, Fraction]] = {}
            for w2, c in swap_word(w).terms.items():
                for out_w in words_of_weight(k + weight_shift):
                    d = eq.setdefault(out_w, {})
                    vi = var(w2, out_w)
                    d[vi] = d.get(vi, _F0) + c
            for out_w in words_of_weight(k + weight_shift):
                vi = var(w, out_w)
                for w2, c in swap_word(out_w).terms.items():
                    d = eq.setdefault(w2, {})
                    d[vi] = d.get(vi, _F0) - c
            rows.extend(r for r in eq.values() if r)
    int_rows = []
    seen = set()
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        if not row:
            continue
        denom = 1
        for v in row.values():
            denom = denom * v.denominator // gcd(denom, v.denominator)
        irow = {c: int(v * denom) for c, v in row.items()}
        g = 0
        for v in irow.values():
            g = gcd(g, v)
        if irow[min(irow)] < 0:
            g = -g
        irow = {c: v // g for c, v in irow.items()}
        sig = tuple(sorted(irow.items()))
        if sig not in seen:
            seen.add(sig)
            int_rows.append(irow)
    pivots, _ = sparse_rref(int_rows)
    kernel = len(unknowns) - len(pivots)
    return ConjectureReport(f"equivariant_derivations_shift_{weight_shift}",
                            True, len(int_rows), [],
                            {"unknowns": len(unknowns), "rank": len(pivots),
                             "kernel_dim": kernel, "max_weight": max_weight})
