"""Independent cross-checks on the homology pipeline.

direct_betti builds the full cubical complex from enumeration and reduces
it, with no use of the gradient pairing, so it can be compared against the
Morse route.  conf_plane_betti gives the closed-form Betti numbers of the
planar labeled configuration space, the expected values in the stabilized
regime.  classify_regime labels each degree solid, liquid, or
gas-consistent by comparing against those values.
"""

from __future__ import annotations

from fractions import Fraction

from . import grid
from .homology import ChainComplex, parse_field, rank, trim
from .reduce import reduce_complex

DEFAULT_CELL_CAP = 2_000_000


class CellCapExceeded(RuntimeError):
    "The requested complex is larger than the configured cell cap."

    def __init__(self, n, p, q, total, cap):
        super().__init__(
            f"complex for n={n}, p={p}, q={q} has {total} cells,"
            f" over the cap of {cap}"
        )
        self.total = total
        self.cap = cap


def _pack(pieces, p, q):
    "Order-preserving integer key for a piece tuple on a fixed board."
    base = 4 * p * q
    key = 0
    for pc in pieces:
        digit = ((pc.col - 1) * q + (pc.row - 1)) * 4 + pc.left + 2 * pc.down
        key = key * base + digit
    return key


def _assign_ids(n, p, q):
    "Per-dimension dense ids for every cell, in enumeration order."
    ids = {}
    counts = []
    for cell in grid.enumerate_cells(n, p, q):
        d = cell.dim
        if d >= len(counts):
            counts.extend([0] * (d + 1 - len(counts)))
        ids[_pack(cell.pieces, p, q)] = counts[d]
        counts[d] += 1
    return ids, counts


def _triple_stream(n, p, q, ids):
    counters = {}
    for cell in grid.enumerate_cells(n, p, q):
        d = cell.dim
        c = counters.get(d, 0)
        counters[d] = c + 1
        if d == 0:
            continue
        for facet, sign in grid.boundary(cell):
            yield (d, ids[_pack(facet.pieces, p, q)], c, sign)


def check_cap(n, p, q, cap=DEFAULT_CELL_CAP):
    "f-vector and total size, raising CellCapExceeded over the cap."
    fv = grid.f_vector(n, p, q)
    total = sum(fv)
    if cap is not None and total > cap:
        raise CellCapExceeded(n, p, q, total, cap)
    return fv, total


def build_chain_complex(n, p, q, cap=DEFAULT_CELL_CAP):
    "The full cubical chain complex, materialized (small instances only)."
    check_cap(n, p, q, cap)
    ids, counts = _assign_ids(n, p, q)
    tris = [[] for _ in range(len(counts))]
    for d, r, c, v in _triple_stream(n, p, q, ids):
        tris[d].append((r, c, v))
    for tri in tris:
        tri.sort()
    return ChainComplex(tuple(counts), tuple(tuple(t) for t in tris))


def direct_betti(n, p, q, field="gf2", cap=DEFAULT_CELL_CAP):
    """Betti numbers computed from the full complex, no gradient involved.

    The complex is shrunk by homology-preserving unit-pivot cancellation
    (exact over the integers, hence valid for every field) and the ranks
    of the small remainder give the Betti numbers.
    """
    fv, total = check_cap(n, p, q, cap)
    if total == 0:
        return ()
    fieldpair = parse_field(field) if isinstance(field, str) else field
    ids, counts = _assign_ids(n, p, q)
    seeds, counts2, tris2 = reduce_complex(
        counts, _triple_stream(n, p, q, ids), unit_coefficients=True
    )
    cc = ChainComplex(tuple(counts2), tuple(tuple(t) for t in tris2))
    ranks = [0] * (len(counts2) + 1)
    for j in range(1, len(counts2)):
        ranks[j] = rank(cc.matrix(j), fieldpair)
    out = []
    for j in range(len(counts2)):
        extra = seeds if j == 0 else 0
        out.append(extra + counts2[j] - ranks[j] - ranks[j + 1])
    return trim(out)


def conf_plane_betti(n):
    """Betti numbers of n labeled points in the plane.

    The Poincare polynomial is the product of (1 + k t) for k < n, so
    beta_j is the elementary symmetric polynomial e_j(1, ..., n-1).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    coeffs = [1]
    for k in range(1, n):
        nxt = coeffs + [0]
        for i in range(len(coeffs)):
            nxt[i + 1] += k * coeffs[i]
        coeffs = nxt
    return tuple(coeffs)


def classify_regime(n, p, q, betti_vec):
    """Per-degree labels: solid, liquid, or gas-consistent.

    solid means the homology vanishes; gas-consistent means it matches the
    planar configuration space numerically (a necessary condition for the
    inclusion to be an isomorphism, which is all a Betti table can see).
    """
    plane = conf_plane_betti(n) if n >= 1 else (1,)
    labels = []
    for j, b in enumerate(betti_vec):
        expected = plane[j] if j < len(plane) else 0
        if b == 0:
            labels.append("solid")
        elif b == expected:
            labels.append("gas-consistent")
        else:
            labels.append("liquid")
    return labels


def nonvanishing_witness_check(rows):
    """Check the known nontrivial cycles and the vanishing region.

    rows maps (n, p, q) to a computed Betti vector.  The orbit cycles in
    the 2x2 board with 2 and 3 squares must be present, and every nonzero
    Betti number, read as a point (x, y) = (n/pq, j/pq), must satisfy
    y <= min(1 - x, x, 1/3).
    """
    report = {"witnesses": [], "points": [], "violations": []}
    for inst in ((2, 2, 2), (3, 2, 2)):
        bv = rows.get(inst)
        if bv is None:
            bv = direct_betti(*inst)
        ok = len(bv) > 1 and bv[1] != 0
        report["witnesses"].append(
            {"instance": list(inst), "degree": 1, "nonzero": ok}
        )
        if not ok:
            report["violations"].append(
                f"expected nonzero degree-1 homology for {inst}"
            )
    third = Fraction(1, 3)
    for (n, p, q), bv in sorted(rows.items()):
        area = p * q
        for j, b in enumerate(bv):
            if not b:
                continue
            x = Fraction(n, area)
            y = Fraction(j, area)
            inside = y <= min(1 - x, x, third)
            report["points"].append(
                {
                    "instance": [n, p, q],
                    "degree": j,
                    "x": [x.numerator, x.denominator],
                    "y": [y.numerator, y.denominator],
                    "inside": inside,
                }
            )
            if not inside:
                report["violations"].append(
                    f"nonzero beta_{j} of {(n, p, q)} falls outside the"
                    " admissible region"
                )
    return report


def witness_report_text(report):
    "Human-readable rendering of a nonvanishing_witness_check report."
    lines = []
    for w in report["witnesses"]:
        n, p, q = w["instance"]
        state = "present" if w["nonzero"] else "MISSING"
        lines.append(f"degree-{w['degree']} cycle in ({n},{p},{q}): {state}")
    for pt in report["points"]:
        n, p, q = pt["instance"]
        x = "{}/{}".format(*pt["x"])
        y = "{}/{}".format(*pt["y"])
        mark = "ok" if pt["inside"] else "OUTSIDE"
        lines.append(
            f"({n},{p},{q}) beta_{pt['degree']} != 0 at (x,y)=({x},{y}): {mark}"
        )
    if report["violations"]:
        lines.append("violations:")
        lines.extend("  " + v for v in report["violations"])
    else:
        lines.append("no violations")
    return "\n".join(lines)


def component_count(n, p, q):
    "Connected components of the 1-skeleton, by union-find."
    parent = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    edges = []
    for cell in grid.enumerate_cells(n, p, q):
        d = cell.dim
        if d == 0:
            key = _pack(cell.pieces, p, q)
            parent[key] = key
        elif d == 1:
            edges.append(cell)
    for cell in edges:
        (f1, _), (f2, _) = grid.boundary(cell)
        a = find(_pack(f1.pieces, p, q))
        b = find(_pack(f2.pieces, p, q))
        if a != b:
            parent[a] = b
    return sum(1 for k in parent if find(k) == k)
