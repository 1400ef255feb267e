"""Weight-graded exact linear algebra for the word-algebra ideals.

Three ideals are supported: the swap ideal generated by sigma(w) - w, the
constant-term ideal generated by the words that are not a block of [1;d]
letters followed by a block of [k;0] letters, and their sum.  Each weight
is processed independently: homogeneous spanning sets are generated,
deduplicated, and brought to reduced row echelon form over exact
rationals against the canonical word basis.

The echelon form is canonical for a given generator set and column order,
so repeated builds are bit-identical.  Completed bases are immutable;
construction of a given (kind, weight) pair is serialized by a keyed
lock, and bases can be persisted to a versioned on-disk cache.
"""
from __future__ import annotations

import enum
import hashlib
import logging
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .quasishuffle import quasi_shuffle_raw, STUFFLE_DIAMOND
from .swap import swap_word
from .words import LinComb, Word, count_words, words_of_weight

log = logging.getLogger(__name__)

_F0 = Fraction(0)

CACHE_FORMAT_VERSION = 1


class IdealKind(enum.Enum):
    SWAP = "swap"
    CONSTANT_TERM = "nzero"
    COMBINED = "combined"


def is_conforming(w: Word) -> bool:
    """True when the word is a [1;d]-block followed by a [k;0]-block.

    Equivalently: every letter with d >= 1 has k = 1, and all of them
    precede every letter with k >= 2.
    """
    last_d = 0
    first_k = len(w.letters) + 1
    for i, (k, d) in enumerate(w.letters, start=1):
        if d >= 1:
            if k != 1:
                return False
            last_d = i
        if k >= 2 and i < first_k:
            first_k = i
    return last_d < first_k


def constant_term_generator_words(weight: int) -> list[Word]:
    return [w for w in words_of_weight(weight) if not is_conforming(w)]


def _row_from_lincomb(x: LinComb, index: dict[Word, int]) -> dict[int, Fraction]:
    return {index[w]: c for w, c in x.terms.items()}


def _int_row(row: dict[int, Fraction]) -> dict[int, int] | None:
    """Clear denominators, divide content, make the leading entry positive."""
    if not row:
        return None
    denom = 1
    for c in row.values():
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = {col: int(c * denom) for col, c in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    lead = min(ints)
    sign = 1 if ints[lead] > 0 else -1
    g *= sign
    return {col: v // g for col, v in ints.items()}


def _row_signature(row: dict[int, int]) -> tuple:
    return tuple(sorted(row.items()))


def ideal_generators(kind: IdealKind, weight: int) -> list[LinComb]:
    """Homogeneous spanning set of the ideal's weight slice.

    Swap part: (sigma(u) - u) * v over words u, v with wt(u) + wt(v)
    equal to the weight (v possibly empty); swap-fixed u are pruned.
    Constant-term part: w * v over non-conforming generator words w.
    Weight-additivity of the product makes these slices complete.
    """
    if weight < 0:
        raise ValueError("weight must be >= 0")
    gens: list[LinComb] = []
    if kind in (IdealKind.SWAP, IdealKind.COMBINED):
        for j in range(1, weight + 1):
            for u in words_of_weight(j):
                rel = swap_word(u) - LinComb.of(u)
                if rel.is_zero():
                    continue
                for v in words_of_weight(weight - j):
                    out: dict[Word, Fraction] = {}
                    for t, ct in rel.terms.items():
                        for prod, cp in quasi_shuffle_raw(
                                t.letters, v.letters, STUFFLE_DIAMOND).items():
                            pw = Word(prod)
                            acc = out.get(pw, _F0) + ct * cp
                            if acc:
                                out[pw] = acc
                            elif pw in out:
                                del out[pw]
                    gens.append(LinComb(out))
    if kind in (IdealKind.CONSTANT_TERM, IdealKind.COMBINED):
        for j in range(1, weight + 1):
            for w in constant_term_generator_words(j):
                for v in words_of_weight(weight - j):
                    out = {}
                    for prod, cp in quasi_shuffle_raw(
                            w.letters, v.letters, STUFFLE_DIAMOND).items():
                        pw = Word(prod)
                        acc = out.get(pw, _F0) + cp
                        if acc:
                            out[pw] = acc
                        elif pw in out:
                            del out[pw]
                    gens.append(LinComb(out))
    return gens


def sparse_rref(rows: list[dict[int, int]]) -> tuple[tuple[int, ...], list[dict[int, Fraction]]]:
    """Reduced row echelon form of integer rows; canonical for the row space.

    Returns (pivot columns ascending, reduced rows with pivot entry 1).
    Forward elimination keeps each pivot row normalized to leading
    coefficient one so a combination only touches the pivot row's
    entries; a heap tracks the candidate leading column of the row being
    inserted (combinations only ever introduce columns to the right).
    Sorting the input by sparsity approximates minimum-fill pivoting, and
    the back-substitution pass yields the unique RREF of the row space.
    """
    import heapq

    pivots: dict[int, dict[int, Fraction]] = {}
    for int_row in sorted(rows, key=lambda r: (len(r), sorted(r.items()))):
        row: dict[int, Fraction] = {c: Fraction(v) for c, v in int_row.items()}
        heap = list(row)
        heapq.heapify(heap)
        while heap:
            col = heapq.heappop(heap)
            val = row.get(col)
            if not val:
                row.pop(col, None)
                continue
            piv = pivots.get(col)
            if piv is None:
                inv = 1 / val
                pivots[col] = {c: v * inv for c, v in row.items()}
                break
            for c, v in piv.items():
                if c == col:
                    continue
                acc = row.get(c)
                if acc is None:
                    row[c] = -val * v
                    heapq.heappush(heap, c)
                else:
                    acc = acc - val * v
                    if acc:
                        row[c] = acc
                    else:
                        del row[c]
            del row[col]

    # Back-substitution: clear pivot columns from the rows above them.
    cols = sorted(pivots)
    reduced: dict[int, dict[int, Fraction]] = {}
    for col in reversed(cols):
        row = dict(pivots[col])
        for c in [c for c in row if c != col and c in pivots]:
            coeff = row.pop(c)
            for c2, v2 in reduced[c].items():
                if c2 == c:
                    continue
                acc = row.get(c2, _F0) - coeff * v2
                if acc:
                    row[c2] = acc
                elif c2 in row:
                    del row[c2]
        reduced[col] = row
    return tuple(cols), [reduced[c] for c in cols]


@dataclass(frozen=True)
class EchelonBasis:
    """Reduced echelon basis of an ideal's weight slice.

    ``words`` is the canonical column basis, ``pivots`` the pivot columns
    in ascending order, ``rows`` the matching reduced rows as sorted
    (column, coefficient) tuples with pivot coefficient 1.
    """

    kind: IdealKind
    weight: int
    words: tuple[Word, ...]
    pivots: tuple[int, ...]
    rows: tuple[tuple[tuple[int, Fraction], ...], ...]
    fingerprint: str

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def dimension(self) -> int:
        return len(self.words) - len(self.pivots)

    def reduce_vector(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        """Subtract pivot rows; one ascending pass suffices since reduced
        rows vanish on the other pivot columns."""
        vec = dict(vec)
        for col, row in zip(self.pivots, self.rows):
            c = vec.get(col)
            if not c:
                continue
            for c2, v2 in row:
                acc = vec.get(c2, _F0) - c * v2
                if acc:
                    vec[c2] = acc
                elif c2 in vec:
                    del vec[c2]
        return vec


def _generator_fingerprint(kind: IdealKind, weight: int,
                           rows: list[dict[int, int]]) -> str:
    h = hashlib.sha256()
    h.update(f"v{CACHE_FORMAT_VERSION}|{kind.value}|{weight}|".encode())
    for sig in sorted(_row_signature(r) for r in rows):
        h.update(repr(sig).encode())
        h.update(b";")
    return h.hexdigest()


def build_echelon_basis(kind: IdealKind, weight: int) -> EchelonBasis:
    words = words_of_weight(weight)
    index = {w: i for i, w in enumerate(words)}
    int_rows: list[dict[int, int]] = []
    seen: set[tuple] = set()
    for gen in ideal_generators(kind, weight):
        row = _int_row(_row_from_lincomb(gen, index))
        if row is None:
            continue
        sig = _row_signature(row)
        if sig in seen:
            continue
        seen.add(sig)
        int_rows.append(row)
    fingerprint = _generator_fingerprint(kind, weight, int_rows)
    pivots, reduced = sparse_rref(int_rows)
    rows = tuple(tuple(sorted(r.items())) for r in reduced)
    return EchelonBasis(kind, weight, words, pivots, rows, fingerprint)


# ---------------------------------------------------------------------------
# cache

def serialize_basis(basis: EchelonBasis) -> str:
    lines = [
        f"fmes-echelon v{CACHE_FORMAT_VERSION}",
        f"kind {basis.kind.value}",
        f"weight {basis.weight}",
        f"fingerprint {basis.fingerprint}",
        f"words {len(basis.words)}",
        f"rank {basis.rank}",
    ]
    for piv, row in zip(basis.pivots, basis.rows):
        cells = " ".join(f"{c}:{v.numerator}/{v.denominator}" for c, v in row)
        lines.append(f"R {piv} {len(row)} {cells}")
    return "\n".join(lines) + "\n"


def deserialize_basis(text: str) -> EchelonBasis:
    lines = text.strip("\n").split("\n")
    if not lines or lines[0] != f"fmes-echelon v{CACHE_FORMAT_VERSION}":
        raise ValueError("unsupported cache format")
    head: dict[str, str] = {}
    body_start = 1
    for i, line in enumerate(lines[1:], start=1):
        if line.startswith("R "):
            body_start = i
            break
        key, _, val = line.partition(" ")
        head[key] = val
        body_start = i + 1
    kind = IdealKind(head["kind"])
    weight = int(head["weight"])
    words = words_of_weight(weight)
    if len(words) != int(head["words"]):
        raise ValueError("word count mismatch")
    pivots: list[int] = []
    rows: list[tuple[tuple[int, Fraction], ...]] = []
    for line in lines[body_start:]:
        if not line:
            continue
        parts = line.split(" ")
        if parts[0] != "R":
            raise ValueError("malformed cache row")
        piv, n = int(parts[1]), int(parts[2])
        cells = []
        for cell in parts[3:]:
            col, _, frac = cell.partition(":")
            num, _, den = frac.partition("/")
            cells.append((int(col), Fraction(int(num), int(den))))
        if len(cells) != n:
            raise ValueError("malformed cache row length")
        pivots.append(piv)
        rows.append(tuple(cells))
    basis = EchelonBasis(kind, weight, words, tuple(pivots), tuple(rows),
                         head["fingerprint"])
    return basis


class BasisCache:
    """In-memory (and optionally on-disk) store of echelon bases.

    Builds for a given (kind, weight) are serialized by a keyed lock;
    distinct keys build concurrently.  Corrupt or stale cache files are
    recomputed and overwritten with a logged warning.
    """

    def __init__(self, directory: str | None = None):
        self.directory = directory
        self._memory: dict[tuple[IdealKind, int], EchelonBasis] = {}
        self._locks: dict[tuple[IdealKind, int], threading.Lock] = {}
        self._master = threading.Lock()

    def _lock_for(self, key) -> threading.Lock:
        with self._master:
            lock = self._locks.get(key)
            if lock is None:
                lock = threading.Lock()
                self._locks[key] = lock
            return lock

    def _path(self, kind: IdealKind, weight: int) -> str:
        return os.path.join(self.directory, f"{kind.value}_w{weight}.basis")

    def get(self, kind: IdealKind, weight: int) -> EchelonBasis:
        key = (kind, weight)
        basis = self._memory.get(key)
        if basis is not None:
            return basis
        with self._lock_for(key):
            basis = self._memory.get(key)
            if basis is not None:
                return basis
            basis = self._load_or_build(kind, weight)
            self._memory[key] = basis
            return basis

    def _load_or_build(self, kind: IdealKind, weight: int) -> EchelonBasis:
        path = None
        if self.directory:
            path = self._path(kind, weight)
            if os.path.exists(path):
                try:
                    with open(path, "r", encoding="ascii") as fh:
                        cached = deserialize_basis(fh.read())
                    probe = _generator_fingerprint(
                        kind, weight, _generator_int_rows(kind, weight))
                    if cached.fingerprint == probe:
                        return cached
                    log.warning("stale fingerprint in %s; recomputing", path)
                except (ValueError, OSError, KeyError) as exc:
                    log.warning("corrupt echelon cache %s (%s); recomputing", path, exc)
        basis = build_echelon_basis(kind, weight)
        if path:
            os.makedirs(self.directory, exist_ok=True)
            tmp = path + ".tmp"
            with open(tmp, "w", encoding="ascii") as fh:
                fh.write(serialize_basis(basis))
            os.replace(tmp, path)
        return basis

    def stats(self) -> dict:
        out = {"memory_entries": len(self._memory), "directory": self.directory,
               "files": []}
        if self.directory and os.path.isdir(self.directory):
            for name in sorted(os.listdir(self.directory)):
                if name.endswith(".basis"):
                    full = os.path.join(self.directory, name)
                    out["files"].append({"name": name, "bytes": os.path.getsize(full)})
        return out

    def clear_disk(self) -> int:
        if not self.directory or not os.path.isdir(self.directory):
            return 0
        n = 0
        for name in os.listdir(self.directory):
            if name.endswith(".basis"):
                os.remove(os.path.join(self.directory, name))
                n += 1
        return n


def _generator_int_rows(kind: IdealKind, weight: int) -> list[dict[int, int]]:
    words = words_of_weight(weight)
    index = {w: i for i, w in enumerate(words)}
    rows = []
    seen = set()
    for gen in ideal_generators(kind, weight):
        row = _int_row(_row_from_lincomb(gen, index))
        if row is None:
            continue
        sig = _row_signature(row)
        if sig in seen:
            continue
        seen.add(sig)
        rows.append(row)
    return rows


_default_cache = BasisCache()


def default_cache() -> BasisCache:
    return _default_cache


# ---------------------------------------------------------------------------
# quotient operations

def normal_form(x: LinComb, kind: IdealKind = IdealKind.SWAP,
                weight_cutoff: int | None = None,
                cache: BasisCache | None = None) -> LinComb:
    """Canonical representative of x modulo the ideal.

    Linear, idempotent, and zero exactly on the ideal's span; every
    homogeneous component must stay within the weight cutoff.
    """
    cache = cache or _default_cache
    if weight_cutoff is not None:
        over = [k for k in x.weights() if k > weight_cutoff]
        if over:
            raise ValueError(f"components of weight {over} exceed cutoff {weight_cutoff}")
    out = LinComb()
    for weight, part in x.homogeneous_parts().items():
        basis = cache.get(kind, weight)
        index = {w: i for i, w in enumerate(basis.words)}
        vec = basis.reduce_vector({index[w]: c for w, c in part.terms.items()})
        out = out + LinComb({basis.words[i]: c for i, c in vec.items()})
    return out


def in_ideal(x: LinComb, kind: IdealKind = IdealKind.SWAP,
             weight_cutoff: int | None = None,
             cache: BasisCache | None = None) -> bool:
    return normal_form(x, kind, weight_cutoff, cache).is_zero()


def dim(kind: IdealKind, weight: int, cache: BasisCache | None = None) -> int:
    """Dimension of the weight slice of the quotient algebra."""
    cache = cache or _default_cache
    basis = cache.get(kind, weight)
    return count_words(weight) - basis.rank


def quotient_dimensions(kind: IdealKind, max_weight: int,
                        cache: BasisCache | None = None) -> list[int]:
    return [dim(kind, k, cache) for k in range(max_weight + 1)]
