"""Exact linear algebra for chain complexes of free abelian groups.

Boundary matrices are stored as sparse integer triplets.  Ranks are
computed over GF(2) with packed bit rows, over GF(p) by modular
elimination, and over the rationals by fraction-free integer elimination;
Betti numbers follow from the rank formula.  Pivoting always takes the
first nonzero entry in row-major order, so results are deterministic.
"""

from __future__ import annotations

import math
from typing import NamedTuple


class SparseMatrix(NamedTuple):
    """An n_rows x n_cols integer matrix as (row, col, value) triplets."""

    rows: int
    cols: int
    entries: tuple


class ChainComplex(NamedTuple):
    """Cell counts per dimension and the boundary triplets between them.

    boundaries[j] holds the entries of the map from j-cells to (j-1)-cells;
    boundaries[0] is empty.
    """

    counts: tuple
    boundaries: tuple

    def matrix(self, j):
        rows = self.counts[j - 1] if j >= 1 else 0
        cols = self.counts[j] if j < len(self.counts) else 0
        tri = self.boundaries[j] if 1 <= j < len(self.counts) else ()
        return SparseMatrix(rows, cols, tuple(tri))


def parse_field(spec):
    """Normalize a field name: "gf2", "gf<p>" with p prime, or "rational"."""
    if spec in ("rational", "q", "Q"):
        return ("rational", 0)
    text = spec.lower()
    if text.startswith("gf"):
        try:
            p = int(text[2:])
        except ValueError:
            raise ValueError(f"unknown field {spec!r}") from None
        if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"{p} is not prime")
        return ("gf", p)
    raise ValueError(f"unknown field {spec!r}")


def _rank_gf2(matrix):
    "Row echelon over GF(2) with rows packed into integers."
    rows = [0] * matrix.rows
    for r, c, v in matrix.entries:
        if v & 1:
            rows[r] ^= 1 << c
    pivots = {}
    rank = 0
    for row in rows:
        while row:
            low = (row & -row).bit_length() - 1
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = row
                rank += 1
                break
            row ^= piv
    return rank


def _sparse_rows(matrix, modulus=0):
    rows = [dict() for _ in range(matrix.rows)]
    for r, c, v in matrix.entries:
        if modulus:
            v %= modulus
        if v:
            rows[r][c] = v
    return rows


def _rank_gfp(matrix, p):
    "Modular elimination on sparse rows; pivot rows are scaled to lead by 1."
    pivots = {}
    rank = 0
    for row in _sparse_rows(matrix, p):
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], p - 2, p)
                pivots[c] = {k: (v * inv) % p for k, v in row.items()}
                rank += 1
                break
            f = row[c]
            for k, v in piv.items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return rank


def _rank_rational(matrix):
    """Rank over the rationals by fraction-free elimination on integers.

    Rows are combined by cross-multiplication and stripped by their gcd, so
    all arithmetic stays in the integers and is exact.
    """
    pivots = {}
    rank = 0
    for row in _sparse_rows(matrix):
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                g = math.gcd(*row.values())
                if row[c] < 0:
                    g = -g
                pivots[c] = {k: v // g for k, v in row.items()}
                rank += 1
                break
            a = row[c]
            b = piv[c]
            new = {}
            for k in row.keys() | piv.keys():
                v = b * row.get(k, 0) - a * piv.get(k, 0)
                if v:
                    new[k] = v
            if new:
                g = math.gcd(*new.values())
                new = {k: v // g for k, v in new.items()}
            row = new
    return rank


def rank(matrix, field="gf2"):
    """Rank of a sparse integer matrix over the given field."""
    kind, p = parse_field(field) if isinstance(field, str) else field
    if kind == "rational":
        return _rank_rational(matrix)
    if p == 2:
        return _rank_gf2(matrix)
    return _rank_gfp(matrix, p)


def validate_d2(cc):
    """Raise if the composite of consecutive boundary maps is nonzero."""
    for j in range(2, len(cc.counts)):
        cols = {}
        for r, c, v in cc.boundaries[j - 1]:
            cols.setdefault(c, []).append((r, v))
        acc = {}
        for r, c, v in cc.boundaries[j]:
            for r2, v2 in cols.get(r, ()):
                key = (r2, c)
                acc[key] = acc.get(key, 0) + v * v2
        bad = {k: v for k, v in acc.items() if v}
        if bad:
            some = next(iter(bad.items()))
            raise AssertionError(
                f"d o d != 0 between degrees {j} and {j - 2}: entry {some}"
            )


def euler(numbers):
    return sum(x if i % 2 == 0 else -x for i, x in enumerate(numbers))


def trim(numbers):
    out = list(numbers)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


REDUCE_THRESHOLD = 2000


def betti(cc, field="gf2", validate=None):
    """Betti numbers of a chain complex over the given field.

    beta_j = dim C_j - rank d_j - rank d_{j+1}, trailing zeros trimmed.
    All but small complexes are first shrunk by homology-preserving
    unit-pivot cancellation (exact over the integers, so valid for every
    field); ranks are then taken on the remainder.
    """
    fieldpair = parse_field(field) if isinstance(field, str) else field
    counts = cc.counts
    if not counts or sum(counts) == 0:
        return ()
    if validate is None:
        validate = sum(counts) <= 200_000
    if validate:
        validate_d2(cc)
    if sum(counts) > REDUCE_THRESHOLD:
        from .reduce import reduce_complex

        def stream():
            for j in range(1, len(counts)):
                for r, c, v in cc.boundaries[j]:
                    yield (j, r, c, v)

        seeds, counts2, tris2 = reduce_complex(counts, stream())
        cc = ChainComplex(tuple(counts2), tuple(tuple(t) for t in tris2))
        base = [seeds if j == 0 else 0 for j in range(len(counts))]
    else:
        base = [0] * len(counts)
    ranks = [0] * (len(cc.counts) + 1)
    for j in range(1, len(cc.counts)):
        ranks[j] = rank(cc.matrix(j), fieldpair)
    out = []
    for j in range(len(counts)):
        m = cc.counts[j] if j < len(cc.counts) else 0
        out.append(base[j] + m - ranks[j] - (ranks[j + 1] if j + 1 <= len(cc.counts) else 0))
    return trim(out)


class AuditFailure(AssertionError):
    "A computed homology result violates a structural bound."


def audit(n, p, q, betti_vec, f_vec, morse_counts=None):
    """Check vanishing bounds, Euler consistency, and Morse inequalities.

    Nonzero homology may only appear in degrees j with
    j <= min(p*q - n, n, p*q/3); the alternating sums of the f-vector and
    the Betti vector must agree; and each Morse count must dominate the
    matching Betti number.  Violations raise AuditFailure.
    """
    problems = []
    bound = min(p * q - n, n)
    for j, b in enumerate(betti_vec):
        if b and (j > bound or 3 * j > p * q):
            problems.append(f"beta_{j} = {b} but degree {j} must vanish")
    if euler(f_vec) != euler(betti_vec):
        problems.append(
            f"euler mismatch: cells give {euler(f_vec)}, homology gives {euler(betti_vec)}"
        )
    if morse_counts is not None:
        for j, b in enumerate(betti_vec):
            m = morse_counts[j] if j < len(morse_counts) else 0
            if m < b:
                problems.append(f"morse count m_{j} = {m} below beta_{j} = {b}")
    if problems:
        raise AuditFailure("; ".join(problems))
    return {
        "instance": (n, p, q),
        "betti": tuple(betti_vec),
        "f_vector": tuple(f_vec),
        "euler": euler(f_vec),
        "vanishing_bound": min(bound, (p * q) // 3),
        "morse_counts": tuple(morse_counts) if morse_counts is not None else None,
    }
