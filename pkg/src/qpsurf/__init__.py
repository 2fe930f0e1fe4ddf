"""Exact lattice models of surfaces and the K.L lower bounds for quasi-polarisations."""
from .blowup import (
    BlowupEvent, BlowupPlan, TransformState, apply_plan, blow_up, genus_drop, separation_data,
    validate_snc,
)
from .bounds import (
    BoundReport, Declarations, EqualityCase, UndecidableDispatch, applicable_theorem,
    check_conjecture, pair_inequality, classify_equality, star_degree_check, named_bound, n_of_d_check,
)
from .configuration import Configuration, PointCluster
from .document import DocumentError, InputDocument, dump_document, load_document, parse_document
from .graphs import (
    CNNSCase, DualGraph, RiverGraph, build_dual_graph, build_river, build_rivers, classify_cnns,
    reduced_square_check, m_formula, m_oracle, n_of_d, non_cutpoints, split_check,
)
from .lattice import (
    CurveRecord, DivisorClass, ModelError, PreconditionError, SurfaceModel, UnsupportedModel,
    abelian_surface, append_curve, hodge_index_check, is_negative_semidefinite, pairing,
    product_surface, sectional_genus, validate_surface,
)
from .oracle import oracle_genus, oracle_m, oracle_semidef, run_corpus

__version__ = "0.1.0"
