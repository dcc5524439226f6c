"""Cubical cells for hard unit squares on a rectangular board.

A configuration of n labeled unit squares snaps onto a cell of a cubical
complex: each square touches a rectangle of 1, 2, or 4 board squares, and
the cell is recorded as an ordered list of such rectangles ("pieces").
The cell belongs to the hard-squares complex exactly when no two pieces
share a board square.

This module provides the cell encoding, membership predicates, the signed
cubical boundary, deterministic apex-major enumeration, and f-vectors.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import NamedTuple


class Piece(NamedTuple):
    """One labeled square's rectangle of board squares.

    (col, row) is the upper-right corner square, counted from 1.  A piece
    with left=1 also covers (col-1, row); with down=1 it also covers
    (col, row-1); with both it covers a 2x2 block.
    """

    col: int
    row: int
    left: int
    down: int

    def squares(self):
        "All board squares covered by this piece."
        return [
            (c, r)
            for c in range(self.col - self.left, self.col + 1)
            for r in range(self.row - self.down, self.row + 1)
        ]


class Arrangement(NamedTuple):
    """An ordered list of n pieces on a p x q board: one cubical cell.

    The index of a piece in the list is the label of the square it stands
    for.  The dimension of the cell is the total number of extensions.
    """

    pieces: tuple
    board: tuple

    @property
    def dim(self):
        return sum(pc.left + pc.down for pc in self.pieces)


def snap(x):
    """Round a coordinate to the barycenter coordinate of its grid cell.

    Integers are fixed; any other value maps to the half-integer at the
    center of the enclosing unit interval.  Idempotent.
    """
    f = math.floor(x)
    return f if x == f else f + 0.5


def check_arrangement(arr):
    """Raise ValueError unless every piece lies on the board."""
    p, q = arr.board
    if p < 1 or q < 1:
        raise ValueError("board sides must be at least 1")
    for pc in arr.pieces:
        if not (1 <= pc.col <= p and 1 <= pc.row <= q):
            raise ValueError(f"piece corner {pc.col, pc.row} off the {p}x{q} board")
        if pc.left not in (0, 1) or pc.down not in (0, 1):
            raise ValueError("extension flags must be 0 or 1")
        if (pc.left and pc.col < 2) or (pc.down and pc.row < 2):
            raise ValueError(f"piece {pc} extends off the board")


def pieces_overlap(a, b):
    """Whether two pieces share a board square (closed interval test)."""
    return (
        a.col - a.left <= b.col
        and b.col - b.left <= a.col
        and a.row - a.down <= b.row
        and b.row - b.down <= a.row
    )


def is_valid_cell(arr):
    """Whether no two pieces overlap, i.e. the cell is a hard-squares cell."""
    pieces = arr.pieces
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if pieces_overlap(pieces[i], pieces[j]):
                return False
    return True


def apex_of(arr):
    """The ordered tuple of upper-right corner squares, one per piece.

    On a 0-cell this is the identity viewed as a list of board squares.
    """
    return tuple((pc.col, pc.row) for pc in arr.pieces)


def boundary(arr):
    """Signed facets of a cell.

    Each facet collapses one extension of one piece to an endpoint: the
    corner endpoint keeps the corner, the far endpoint shifts it one square
    left or down.  Signs alternate along the fixed coordinate order
    x1,y1,x2,y2,...; the two endpoints of one coordinate get opposite signs.
    """
    out = []
    pieces = arr.pieces
    board = arr.board
    t = 0
    for k, pc in enumerate(pieces):
        head, tail = pieces[:k], pieces[k + 1 :]
        if pc.left:
            sign = -1 if t & 1 else 1
            upper = Piece(pc.col, pc.row, 0, pc.down)
            lower = Piece(pc.col - 1, pc.row, 0, pc.down)
            out.append((Arrangement(head + (upper,) + tail, board), sign))
            out.append((Arrangement(head + (lower,) + tail, board), -sign))
            t += 1
        if pc.down:
            sign = -1 if t & 1 else 1
            upper = Piece(pc.col, pc.row, pc.left, 0)
            lower = Piece(pc.col, pc.row - 1, pc.left, 0)
            out.append((Arrangement(head + (upper,) + tail, board), sign))
            out.append((Arrangement(head + (lower,) + tail, board), -sign))
            t += 1
    return out


def cell_vertices(arr):
    """All 0-faces of the closed cell, as arrangements of 1x1 pieces.

    Works for any ambient cell; no disjointness is assumed.
    """
    options = []
    for pc in arr.pieces:
        cols = (pc.col - 1, pc.col) if pc.left else (pc.col,)
        rows = (pc.row - 1, pc.row) if pc.down else (pc.row,)
        options.append([Piece(c, r, 0, 0) for c in cols for r in rows])
    for combo in itertools.product(*options):
        yield Arrangement(tuple(combo), arr.board)


def relabel(arr, perm):
    """Reorder the pieces: new piece k is old piece perm[k]."""
    return Arrangement(tuple(arr.pieces[j] for j in perm), arr.board)


def relabel_sign(arr, perm):
    """Orientation sign relating a cell's boundary to its relabeling's.

    The boundary signs follow the position of each free coordinate in the
    x1,y1,...,xn,yn order, so reordering pieces permutes the free
    coordinates; this returns the parity of that permutation.
    """
    pos = [0] * len(perm)
    for k, j in enumerate(perm):
        pos[j] = k
    keys = []
    for j, pc in enumerate(arr.pieces):
        if pc.left:
            keys.append((pos[j], 0))
        if pc.down:
            keys.append((pos[j], 1))
    inversions = 0
    for i in range(len(keys)):
        for l in range(i + 1, len(keys)):
            if keys[l] < keys[i]:
                inversions += 1
    return -1 if inversions & 1 else 1


def board_squares(p, q):
    """Board squares in lexicographic (col, row) order."""
    return [(c, r) for c in range(1, p + 1) for r in range(1, q + 1)]


def enumerate_apexes(n, p, q):
    """All labeled apexes: injective n-tuples of board squares, lex order."""
    return itertools.permutations(board_squares(p, q), n)


_EXTENSIONS = ((0, 0), (1, 0), (0, 1), (1, 1))


def cells_with_apex(apex, board):
    """All cells whose apex is the given labeled corner tuple.

    Backtracks over per-piece extension choices, pruning overlaps; order is
    deterministic in the (none, left, down, both) option sequence per piece.
    """
    n = len(apex)
    out = []
    chosen = []

    def place(k):
        if k == n:
            out.append(Arrangement(tuple(chosen), board))
            return
        c, r = apex[k]
        for left, down in _EXTENSIONS:
            if (left and c < 2) or (down and r < 2):
                continue
            pc = Piece(c, r, left, down)
            if any(pieces_overlap(pc, other) for other in chosen):
                continue
            chosen.append(pc)
            place(k + 1)
            chosen.pop()

    place(0)
    return out


def enumerate_cells(n, p, q):
    """Every cell of the hard-squares complex exactly once.

    Cells come grouped by apex, apexes in lexicographic order of their
    corner lists.  Empty stream when n > p*q.
    """
    if n == 0:
        yield Arrangement((), (p, q))
        return
    if n > p * q:
        return
    for apex in enumerate_apexes(n, p, q):
        yield from cells_with_apex(apex, (p, q))


@lru_cache(maxsize=None)
def _path_poly(k):
    "Coefficients by size of the independent sets of a k-vertex path."
    return tuple(math.comb(k - m + 1, m) for m in range(0, (k + 1) // 2 + 1))


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _fvector_chunk(args):
    "Cell counts by dimension over corner sets starting at one fixed square."
    n, p, q, first = args
    from .apexgraph import path_lengths

    squares = board_squares(p, q)
    total = [0]
    for rest in itertools.combinations(range(first + 1, len(squares)), n - 1):
        corners = [squares[first]] + [squares[i] for i in rest]
        poly = [1]
        for k in path_lengths(corners):
            poly = _poly_mul(poly, _path_poly(k))
        if len(poly) > len(total):
            total.extend([0] * (len(poly) - len(total)))
        for i, x in enumerate(poly):
            total[i] += x
    return total


def f_vector(n, p, q, threads=1):
    """Cell counts of the hard-squares complex by dimension.

    Counts per apex via the path decomposition of its conflict graph, so
    the complex itself is never materialized.  Unordered corner sets are
    counted once and scaled by n!.
    """
    if n > p * q:
        return ()
    if n == 0:
        return (1,)
    from .parallel import pmap

    jobs = [(n, p, q, first) for first in range(0, p * q - n + 1)]
    chunks = pmap(_fvector_chunk, jobs, threads)
    total = [0]
    for part in chunks:
        if len(part) > len(total):
            total.extend([0] * (len(part) - len(total)))
        for i, x in enumerate(part):
            total[i] += x
    scale = math.factorial(n)
    while total and total[-1] == 0:
        total.pop()
    return tuple(x * scale for x in total)


def sliding_puzzle_counts(p, q):
    """Closed-form vertex and edge counts for the n = p*q - 1 complex.

    With every board square but one occupied, the complex is a graph: its
    vertices are the (p*q)! aligned positions and its edges the single
    slides of a piece into the hole.
    """
    cells = p * q
    edges = p * (q - 1) + q * (p - 1)
    return math.factorial(cells), edges * math.factorial(cells - 1)


def cells_json(n, p, q):
    """JSON-ready dump of the complex: [{id, pieces, dim}, ...]."""
    out = []
    for i, cell in enumerate(enumerate_cells(n, p, q)):
        out.append(
            {
                "id": i,
                "pieces": [[pc.col, pc.row, pc.left, pc.down] for pc in cell.pieces],
                "dim": cell.dim,
            }
        )
    return out
