"""Pauli-graph optimization of measurement, preparation and Clifford frame nodes.

Numerical verification helpers live in :mod:`pcoast.oracle` (requires numpy).
"""
from .circuit import (
    TQE,
    Circuit,
    CircuitStats,
    Clifford1Q,
    MeasSQ,
    PrepSQ,
    RotSQ,
    aggregate_stats,
    max_tqe_bound,
    r2q,
    synthesize_frame,
)
from .frame import PauliFrame, pauli_frame, rotation_frame, single_qubit_clifford, tqe_conjugate, tqe_frame
from .graph import (
    NOT_MERGEABLE,
    ClassicalRemap,
    FrameNode,
    Meas,
    PcoastGraph,
    Prep,
    Rot,
    build_graph,
    commutes_nodes,
    merge,
    normalize,
    push_frame,
)
from .grouping import Grouping, InputError, WeightedTerm, read_pauli_set, read_terms, sorted_insertion
from .ladder import ladder_circuit, ladder_statistics_check
from .measurement_map import MeasurementRemap, SpanError, apply_remap, map_measurements
from .optimizer import OptimizeMode, OptimizeReport, optimize_graph, optimize_with_report
from .pauli import PauliOperator, PauliSpaceVector, commutator_form, mask, multiply, parse_pauli, parse_term
from .prep_reduction import PrepSet, reduce_frame_by_prep, reduce_nodes_by_prep
from .stabilizer_search import StabilizerResult, agrees_on_support, find_stabilizers, measured_paulis

__version__ = "0.1.0"

__all__ = [
    "TQE", "Circuit", "CircuitStats", "Clifford1Q", "MeasSQ", "PrepSQ", "RotSQ",
    "aggregate_stats", "max_tqe_bound", "r2q", "synthesize_frame",
    "PauliFrame", "pauli_frame", "rotation_frame", "single_qubit_clifford", "tqe_conjugate", "tqe_frame",
    "NOT_MERGEABLE", "ClassicalRemap", "FrameNode", "Meas", "PcoastGraph", "Prep", "Rot",
    "build_graph", "commutes_nodes", "merge", "normalize", "push_frame",
    "Grouping", "InputError", "WeightedTerm", "read_pauli_set", "read_terms", "sorted_insertion",
    "ladder_circuit", "ladder_statistics_check",
    "MeasurementRemap", "SpanError", "apply_remap", "map_measurements",
    "OptimizeMode", "OptimizeReport", "optimize_graph", "optimize_with_report",
    "PauliOperator", "PauliSpaceVector", "commutator_form", "mask", "multiply", "parse_pauli", "parse_term",
    "PrepSet", "reduce_frame_by_prep", "reduce_nodes_by_prep",
    "StabilizerResult", "agrees_on_support", "find_stabilizers", "measured_paulis",
]
