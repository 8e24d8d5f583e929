"""Quantum-like representation of data from two three-valued observables.

Starting from probabilities of any origin the package computes interference
coefficients, tests the constraints a Born-rule representation needs, solves
for sub-amplitude phases and assembles a complex state vector (and, when
possible, a second orthonormal basis) reproducing the data.
"""

from .engine import AmplitudeModel, FeasibilityReport, born_verify, build_amplitude, run_qlra, unitarity_residuals
from .errors import (
    DegenerateContextError,
    DomainError,
    InconsistentRowError,
    ParseError,
    QLRAError,
    SchemaError,
    UndefinedLambdaError,
)
from .forward import (
    AnsatzParams,
    QuantumInstance,
    admissible_mu_roots,
    ansatz_family,
    ansatz_mu_roots,
    example1,
    generate,
    mub_instance,
    mub_marginals_closed_form,
    random_instance,
)
from .interference import (
    InterferenceTable,
    boundedness_check,
    ftp_with_interference,
    interference_coefficients,
    lambda_normalization_residual,
    sorkin_residual,
    triple_prob_from_lambda,
)
from .phase_solver import BranchReport, PhaseSolution, row_consistency, solve_all, solve_row
from .prob_model import (
    PAIRS,
    ProbabilityData,
    ValidationOutcome,
    check_double_stochastic,
    load,
    save,
    validate,
)
from .slit_sim import FrequencyData, SlitExperimentPlan, simulate, to_probability_data

__version__ = "0.1.0"
