"""Weil--Poincare series of curve and divisorial valuations on rational double
points: exact computation from resolution graphs, recovery of the graph from
the series, and exhaustive checks of uniqueness at small budgets."""

from .algebra import (
    CanonicalForm, FactoredSeries, SeriesError, TruncatedSeries, canonicalize, expand, parse_series,
    render_series, series_equal,
)
from .engine import (
    CurveArrow, Divisorial, Valuation, ValuationSpec, drop_variable, intersection_number,
    multiplicity_vectors, oracle_coefficient, project_set_one, single_from_multi, weil_poincare,
)
from .explorer import (
    Certificate, CollisionReport, EnumerationBudget, certify_uniqueness, enumerate_configurations,
    find_collisions,
)
from .graphs import (
    AdeType, ArrowPoint, BlowupStep, EdgePoint, FreePoint, GraphError, ResolutionGraph, apply_script,
    automorphism_group, blow_up, build_minimal, canonical_key, determinant, euler_chi,
    graph_from_doc, graph_to_doc, intersection_matrix, is_minimal, isomorphic_up_to_symmetry,
    m_matrix, minimize, parse_graph, render_graph,
)
from .modes import AssumptionMode, legal_modes, violates
from .reconstruct import (
    BudgetExhausted, Position, PreResolutionAnswer, ReconstructionError, ReconstructionResult,
    ratio_candidates, recover, recover_multi, recover_preresolution, recover_single,
)
from .registry import ExceptionalEntry, detect_exceptional, lookup, registry_for

__version__ = "0.1.0"
