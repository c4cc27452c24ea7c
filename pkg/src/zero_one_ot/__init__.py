"""Exact Kantorovich duality for zero-one costs on finite ground sets.

Solve ``min over couplings of 1 - pi(R)`` and ``max over upper sets A of
mu(A) - nu(A)`` exactly, certify that they agree, and explore c-transforms,
layer-cake extraction and a grid version of the threshold-order counterexample.
"""
from .counterexample import (GridInstance, SweepReport, SweepRow, approximant_sweep,
                             build_grid_instance, closed_approximant, mean_gap_certificate,
                             resolution_sweep, shift_coupling)
from .errors import (CertificateFailure, CostConditionsViolated, GroundMismatch,
                     InfeasiblePotential, InvalidParameter, InvalidResolution, InvalidShift,
                     MissingLabels, OverlappingSupports, ParseError, RangeViolation,
                     RelationNotPreorder, TooLarge, ValidationError, ZeroOneOTError)
from .instance import Instance, emit_instance, parse_instance
from .potentials import (Measure, Potential, c_transform, check_one_var_feasible,
                         check_two_var_feasible, dual_objective, layer_cake_extract,
                         rescale_to_unit)
from .relations import (CostMatrix, GroundSet, IndexSet, Relation, RelationFamily,
                        check_family, is_reflexive, is_transitive, is_upper_set,
                        relation_to_cost, transitive_reflexive_closure, upper_closure,
                        validate_cost)
from .transport import (Coupling, DualityReport, brute_force_dual, certify_duality,
                        solve_dual_mincut, solve_ot_two_var, solve_primal_mass,
                        solve_transshipment_one_var)

__version__ = "0.1.0"

__all__ = [
    "CertificateFailure", "CostConditionsViolated", "CostMatrix", "Coupling", "DualityReport",
    "GridInstance", "GroundMismatch", "GroundSet", "IndexSet", "InfeasiblePotential",
    "Instance", "InvalidParameter", "InvalidResolution", "InvalidShift", "Measure",
    "MissingLabels", "OverlappingSupports", "ParseError", "Potential", "RangeViolation",
    "Relation", "RelationFamily", "RelationNotPreorder", "SweepReport", "SweepRow", "TooLarge",
    "ValidationError", "ZeroOneOTError", "approximant_sweep", "brute_force_dual",
    "build_grid_instance", "c_transform", "certify_duality", "check_family",
    "check_one_var_feasible", "check_two_var_feasible", "closed_approximant", "dual_objective",
    "emit_instance", "is_reflexive", "is_transitive", "is_upper_set", "layer_cake_extract",
    "mean_gap_certificate", "parse_instance", "relation_to_cost", "rescale_to_unit",
    "resolution_sweep", "shift_coupling", "solve_dual_mincut", "solve_ot_two_var",
    "solve_primal_mass", "solve_transshipment_one_var", "transitive_reflexive_closure",
    "upper_closure", "validate_cost",
]
