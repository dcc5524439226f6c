"""Homology of configuration spaces of hard squares in a rectangle."""

from .apexgraph import (
    ApexGraph,
    ApexVertex,
    build_apex_graph,
    decode_cell,
    encode_cell,
    half_square_allocation,
    independent_set_count,
)
from .grid import (
    Arrangement,
    Piece,
    apex_of,
    boundary,
    enumerate_cells,
    f_vector,
    is_valid_cell,
    pieces_overlap,
    sliding_puzzle_counts,
    snap,
)
from .homology import AuditFailure, ChainComplex, SparseMatrix, audit, betti, rank
from .morse import (
    FlowBudgetExceeded,
    MorseComplex,
    build_morse_complex,
    cell_status,
    critical_counts,
    match_cell,
    match_string,
    morse_boundary,
    restrict_morse,
    verify_acyclic,
)
from .oracle import (
    CellCapExceeded,
    classify_regime,
    conf_plane_betti,
    direct_betti,
    nonvanishing_witness_check,
    witness_report_text,
)

__version__ = "0.1.0"
