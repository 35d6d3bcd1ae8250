"""Small-qubit statevector toolkit and reversible-circuit synthesizer.

The package simulates the optimal universal qubit-cloning machine end to
end: solving for preparation angles, synthesizing CNOT programs from
Boolean truth tables, verifying the cloning outputs, and computing copy
and ancilla fidelities.  A FastAPI service and a CLI front end live in
qclone.service and qclone.cli.
"""

from .states import (
    ATOL,
    MAX_QUBITS,
    QUAD_TOL,
    BlochAngles,
    DensityMatrix,
    PureState,
    average_fidelity,
    bloch_grid,
    bloch_state,
    conjugate_state,
    density_of,
    max_amplitude_error,
    orthogonal_state,
    partial_trace,
    reduced_density,
    state_fidelity,
    states_equal_up_to_phase,
    tensor,
)
from .gates import (
    NOT_ROTATION,
    CnotGate,
    CnotProgram,
    NotGate,
    Rotation,
    apply_cnot,
    apply_program,
    apply_rotation,
)
from .prep import (
    AngleTriple,
    CatalogRow,
    NoRealSolutionError,
    PrepCoefficients,
    SignPattern,
    catalog_rows,
    closed_form_cos_squares,
    eval_prep_equations,
    prepare_state,
    solve_angles,
)
from .boolsynth import (
    AnfPolynomial,
    Completion,
    LinearMap,
    NotReversibleError,
    TableParseError,
    TruthTable,
    anf_of,
    enumerate_completions,
    format_truth_table,
    is_affine,
    parse_truth_table,
    synthesize,
    verify_program,
)
from .cloner import (
    CloneResult,
    expected_output,
    machine_average_fidelities,
    mix_input,
    mixture_residual,
    run_machine,
)

__version__ = "0.1.0"

__all__ = [
    "ATOL",
    "MAX_QUBITS",
    "QUAD_TOL",
    "NOT_ROTATION",
    "AngleTriple",
    "AnfPolynomial",
    "BlochAngles",
    "CatalogRow",
    "CloneResult",
    "CnotGate",
    "CnotProgram",
    "Completion",
    "DensityMatrix",
    "LinearMap",
    "NoRealSolutionError",
    "NotGate",
    "NotReversibleError",
    "TableParseError",
    "PrepCoefficients",
    "PureState",
    "Rotation",
    "SignPattern",
    "TruthTable",
    "anf_of",
    "apply_cnot",
    "apply_program",
    "apply_rotation",
    "average_fidelity",
    "bloch_grid",
    "bloch_state",
    "catalog_rows",
    "closed_form_cos_squares",
    "conjugate_state",
    "density_of",
    "enumerate_completions",
    "eval_prep_equations",
    "expected_output",
    "is_affine",
    "machine_average_fidelities",
    "max_amplitude_error",
    "mix_input",
    "mixture_residual",
    "orthogonal_state",
    "format_truth_table",
    "parse_truth_table",
    "partial_trace",
    "prepare_state",
    "reduced_density",
    "run_machine",
    "solve_angles",
    "state_fidelity",
    "states_equal_up_to_phase",
    "synthesize",
    "tensor",
    "verify_program",
]
