"""Characterize a quantum controlled-NOT from two complementary classical truth tables."""
from .analysis import (ErrorBudget, FidelityReport, InfeasibleMarginals, MarginalGrid,
                       TruthTable, capability_bound, classical_fidelity, derived_fidelity_bound,
                       discrimination_bound, error_budget, fidelity_interval, full_report,
                       grid_max_mass, grid_min_mass, grid_witness)
from .channel import (NoisyGateModel, ProcessMatrix, apply, average_fidelity_mc,
                      choi_fidelity, ideal_model, process_matrix, sample_counts, truth_table,
                      verify_identities)
from .gates import BasisKind, basis_family, cnot, flip_pattern, pauli, preserved_errors

__version__ = "0.1.0"
