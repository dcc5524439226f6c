"""Discrete gradient matching on the hard-squares complex.

Cells sharing an apex are bit strings on the paths of the apex's option
graph, and are matched by a recursive rule on those strings.  At most one
cell per apex stays unmatched (critical).  The Morse complex lives on the
critical cells; its boundary is computed by flowing each cubical facet
through the matching until only critical cells remain.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

from . import grid
from .apexgraph import cached_structure
from .grid import Arrangement, Piece, boundary, relabel, relabel_sign

DEFAULT_FLOW_BUDGET = 10_000_000


class FlowBudgetExceeded(RuntimeError):
    "Gradient flow ran past its replacement budget: the pairing is broken."


@lru_cache(maxsize=None)
def critical_string(k):
    """The unique unmatched bit string on a k-vertex path, or None.

    Paths with k = 1 mod 3 have every string matched; otherwise the
    unmatched string repeats 010, truncated to 01 at the end when
    k = 2 mod 3.
    """
    r = k % 3
    if r == 1:
        return None
    return "010" * (k // 3) + ("" if r == 0 else "01")


def match_string(s):
    """Partner of s under the pairing, or None when s is unmatched.

    Strip leading 010 blocks, then flip the first remaining bit; the empty
    remainder and the remainder 01 are the unmatched cases.  An involution:
    matched partners differ in exactly one bit.
    """
    if "11" in s or s.strip("01"):
        raise ValueError(f"{s!r} is not an independence string")
    i = 0
    while s.startswith("010", i):
        i += 3
    rest = s[i:]
    if rest in ("", "01"):
        return None
    flip = "1" if s[i] == "0" else "0"
    return s[:i] + flip + s[i + 1 :]


def _paths_of(arr):
    corners = tuple(sorted((pc.col, pc.row) for pc in arr.pieces))
    return cached_structure(corners)


def match_cell(arr):
    """Partner cell of arr under the gradient pairing, or None if critical.

    The first path (in canonical order) whose string is not the unmatched
    pattern gets its string replaced by its partner; every other option is
    kept.  Label-blind, so the pairing commutes with relabeling.
    """
    pieces = arr.pieces
    owner = {(pc.col, pc.row): k for k, pc in enumerate(pieces)}
    for path in _paths_of(arr):
        bits = []
        for (c, r), axis in path:
            pc = pieces[owner[(c, r)]]
            bits.append("1" if (pc.left if axis == 0 else pc.down) else "0")
        s = "".join(bits)
        if s == critical_string(len(path)):
            continue
        partner = match_string(s)
        pos = next(i for i in range(len(s)) if s[i] != partner[i])
        (c, r), axis = path[pos]
        k = owner[(c, r)]
        pc = pieces[k]
        if axis == 0:
            new = Piece(pc.col, pc.row, 1 - pc.left, pc.down)
        else:
            new = Piece(pc.col, pc.row, pc.left, 1 - pc.down)
        return Arrangement(pieces[:k] + (new,) + pieces[k + 1 :], arr.board)
    return None


def cell_status(arr):
    """("critical", None), ("up", partner) or ("down", partner).

    "up" means the partner is the cofacet (one dimension higher).
    """
    partner = match_cell(arr)
    if partner is None:
        return ("critical", None)
    return ("up" if partner.dim > arr.dim else "down", partner)


def critical_cell_for(apex, board):
    """The critical cell with the given labeled apex, or None.

    An apex is critical exactly when every path of its option graph has
    0 or 2 mod 3 vertices; the critical cell then takes the unmatched
    pattern on every path.
    """
    corners = tuple(sorted(apex))
    if len(set(corners)) != len(corners):
        raise ValueError("apex corners must be pairwise distinct")
    paths = cached_structure(corners)
    if any(len(path) % 3 == 1 for path in paths):
        return None
    owner = {c: k for k, c in enumerate(apex)}
    left = [0] * len(apex)
    down = [0] * len(apex)
    for path in paths:
        pattern = critical_string(len(path))
        for ((c, r), axis), bit in zip(path, pattern):
            if bit == "1":
                if axis == 0:
                    left[owner[(c, r)]] = 1
                else:
                    down[owner[(c, r)]] = 1
    pieces = tuple(Piece(c, r, left[k], down[k]) for k, (c, r) in enumerate(apex))
    return Arrangement(pieces, board)


def critical_sets(n, p, q):
    """Unordered critical apexes in lexicographic order.

    Yields (corners, dim) with corners a sorted tuple of board squares.
    """
    if n == 0:
        yield ((), 0)
        return
    squares = grid.board_squares(p, q)
    for combo in itertools.combinations(squares, n):
        paths = cached_structure(combo)
        dim = 0
        for path in paths:
            k = len(path)
            r = k % 3
            if r == 1:
                dim = -1
                break
            dim += k // 3 if r == 0 else (k + 1) // 3
        if dim >= 0:
            yield (combo, dim)


def critical_counts(n, p, q):
    "Number of labeled critical cells by dimension."
    if n > p * q:
        return ()
    counts = []
    for _, dim in critical_sets(n, p, q):
        if dim >= len(counts):
            counts.extend([0] * (dim + 1 - len(counts)))
        counts[dim] += 1
    scale = math.factorial(n)
    return tuple(c * scale for c in counts)


def iter_critical_cells(n, p, q):
    "All labeled critical cells, grouped by corner set, labelings in lex order."
    board = (p, q)
    for corners, _ in critical_sets(n, p, q):
        rep = critical_cell_for(corners, board)
        for perm in itertools.permutations(range(len(corners))):
            yield relabel(rep, perm)


def flow_boundary(cell, memo=None, budget=DEFAULT_FLOW_BUDGET):
    """Morse boundary of a critical cell: flow its facets to critical cells.

    A facet that is critical contributes itself; one paired with a facet of
    its own contributes nothing; one paired with a cofacet E is replaced by
    the (signed) remaining boundary of E, recursively.  Termination is
    guaranteed by acyclicity of the pairing and enforced by the budget.
    """
    if memo is None:
        memo = {}
    out = {}
    steps = [0]
    for facet, sign in boundary(cell):
        for target, coeff in _flow_chain(facet, memo, steps, budget).items():
            out[target] = out.get(target, 0) + sign * coeff
    return {t: v for t, v in out.items() if v}


def _flow_chain(start, memo, steps, budget):
    key = start.pieces
    if key in memo:
        return memo[key]
    stack = [start]
    while stack:
        cell = stack[-1]
        ck = cell.pieces
        if ck in memo:
            stack.pop()
            continue
        status, partner = cell_status(cell)
        if status == "critical":
            memo[ck] = {ck: 1}
            stack.pop()
            continue
        if status == "down":
            memo[ck] = {}
            stack.pop()
            continue
        facets = boundary(partner)
        lam = next(s for f, s in facets if f.pieces == ck)
        pending = [f for f, _ in facets if f.pieces != ck and f.pieces not in memo]
        if pending:
            stack.extend(pending)
            continue
        steps[0] += 1
        if steps[0] > budget:
            raise FlowBudgetExceeded(
                f"gradient flow exceeded {budget} replacements"
            )
        acc = {}
        for f, s in facets:
            if f.pieces == ck:
                continue
            coef = -s * lam
            for t, v in memo[f.pieces].items():
                acc[t] = acc.get(t, 0) + coef * v
        memo[ck] = {t: v for t, v in acc.items() if v}
        stack.pop()
    return memo[key]


def morse_boundary(cell, budget=DEFAULT_FLOW_BUDGET):
    """Public per-cell Morse boundary, as {critical Arrangement: coeff}."""
    if match_cell(cell) is not None:
        raise ValueError("cell is not critical")
    raw = flow_boundary(cell, {}, budget)
    board = cell.board
    return {Arrangement(k, board): v for k, v in raw.items()}


def _flow_chunk(args):
    "Flows for a slice of critical corner sets (worker for parallel builds)."
    n, p, q, corner_sets, budget = args
    board = (p, q)
    memo = {}
    out = []
    for corners in corner_sets:
        rep = critical_cell_for(corners, board)
        flow = flow_boundary(rep, memo, budget)
        out.append(sorted(flow.items()))
    return out


class MorseComplex:
    """Critical cells by dimension plus the signed Morse boundary matrices.

    cells[d] lists the labeled critical d-cells; boundaries[d] holds the
    (row, col, coeff) triplets of the map from d-cells to (d-1)-cells,
    sorted by (row, col).
    """

    def __init__(self, n, board, cells, boundaries, spans):
        self.n = n
        self.board = board
        self.cells = cells
        self.boundaries = boundaries
        self.spans = spans  # per dim, per cell: (max col, max row) of the apex

    @property
    def counts(self):
        return tuple(len(c) for c in self.cells)

    def chain_complex(self):
        from .homology import ChainComplex

        return ChainComplex(self.counts, tuple(self.boundaries))

    def betti(self, field="gf2"):
        from .homology import betti

        return betti(self.chain_complex(), field)

    def restrict(self, p, q):
        """Sub-Morse-complex of critical cells whose apex fits in p x q.

        Valid because boundaries only move apexes left and down; a dropped
        row under a kept column would mean the pairing is broken.
        """
        bp, bq = self.board
        if p > bp or q > bq:
            raise ValueError(f"cannot restrict {self.board} to larger ({p}, {q})")
        keep = []
        index = []
        for d in range(len(self.cells)):
            sel = [
                i
                for i, (mc, mr) in enumerate(self.spans[d])
                if mc <= p and mr <= q
            ]
            keep.append({old: new for new, old in enumerate(sel)})
            index.append(sel)
        cells = [
            [Arrangement(self.cells[d][i].pieces, (p, q)) for i in index[d]]
            for d in range(len(self.cells))
        ]
        spans = [[self.spans[d][i] for i in index[d]] for d in range(len(self.cells))]
        boundaries = [[]]
        for d in range(1, len(self.cells)):
            tri = []
            for r, c, v in self.boundaries[d]:
                if c in keep[d]:
                    if r not in keep[d - 1]:
                        raise AssertionError(
                            "restriction dropped the boundary of a kept cell"
                        )
                    tri.append((keep[d - 1][r], keep[d][c], v))
            boundaries.append(tri)
        while len(cells) > 1 and not cells[-1]:
            cells.pop()
            spans.pop()
            boundaries.pop()
        return MorseComplex(self.n, (p, q), cells, boundaries, spans)

    def to_json(self):
        return {
            "dims": list(self.counts),
            "boundaries": [
                [[r, c, v] for r, c, v in tri] for tri in self.boundaries[1:]
            ],
        }


def build_morse_complex(n, p, q, threads=1, budget=DEFAULT_FLOW_BUDGET):
    """Morse complex of the full gradient pairing on the n, p, q complex.

    Flows are computed once per unordered critical cell; the labeled
    matrices follow by relabeling, with the orientation signs transported
    through the coordinate-order permutation.
    """
    from .parallel import pmap

    board = (p, q)
    sets = list(critical_sets(n, p, q)) if n <= p * q else []
    reps = [critical_cell_for(corners, board) for corners, _ in sets]
    dims = [dim for _, dim in sets]

    maxdim = max(dims, default=0)
    cells = [[] for _ in range(maxdim + 1)]
    spans = [[] for _ in range(maxdim + 1)]
    index = {}
    perms = list(itertools.permutations(range(n)))
    for rep, (corners, dim) in zip(reps, sets):
        mc = max((c for c, _ in corners), default=1)
        mr = max((r for _, r in corners), default=1)
        for perm in perms:
            cell = relabel(rep, perm)
            index[cell.pieces] = (dim, len(cells[dim]))
            cells[dim].append(cell)
            spans[dim].append((mc, mr))

    chunks = _split([s for s, d in zip(sets, dims) if d > 0], threads)
    jobs = [(n, p, q, [corners for corners, _ in part], budget) for part in chunks]
    flow_parts = pmap(_flow_chunk, jobs, threads)
    flows = {}
    for part, result in zip(chunks, flow_parts):
        for (corners, _), flow in zip(part, result):
            flows[corners] = flow

    boundaries = [[] for _ in range(maxdim + 1)]
    for rep, (corners, dim) in zip(reps, sets):
        if dim == 0:
            continue
        flow = flows[corners]
        targets = [(Arrangement(tk, board), v) for tk, v in flow]
        for perm in perms:
            col = index[relabel(rep, perm).pieces][1]
            base = relabel_sign(rep, perm)
            for target, coeff in targets:
                labeled = relabel(target, perm)
                trow, row = index[labeled.pieces]
                if trow != dim - 1:
                    raise AssertionError("flow target has wrong dimension")
                sign = base * relabel_sign(target, perm)
                boundaries[dim].append((row, col, sign * coeff))
    for d in range(len(boundaries)):
        boundaries[d].sort()
    return MorseComplex(n, board, cells, boundaries, spans)


def restrict_morse(mc, p, q):
    return mc.restrict(p, q)


def _split(items, parts):
    "Split a list into at most `parts` contiguous chunks of similar size."
    parts = max(1, min(parts, len(items)) if items else 1)
    size, extra = divmod(len(items), parts)
    out = []
    start = 0
    for i in range(parts):
        end = start + size + (1 if i < extra else 0)
        if start < end:
            out.append(items[start:end])
        start = end
    return out or [[]]


def verify_acyclic(n, p, q):
    """Exhaustively check that the pairing has no closed V-path."""
    ups = {}
    for cell in grid.enumerate_cells(n, p, q):
        status, partner = cell_status(cell)
        if status == "up":
            ups[cell.pieces] = partner
    # successor upper cells: from E through a facet f' (not its partner)
    # that is itself paired upward
    adj = {}
    for fk, upper in ups.items():
        succ = []
        for f2, _ in boundary(upper):
            k2 = f2.pieces
            if k2 != fk and k2 in ups and ups[k2].pieces != upper.pieces:
                succ.append(ups[k2].pieces)
        adj[upper.pieces] = succ

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {k: WHITE for k in adj}
    for root in adj:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in color:
                    continue
                if color[nxt] == GRAY:
                    return False
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return True
