"""qdptune: privacy-budget tuning for depolarized quantum circuits.

Depolarizing noise makes a quantum circuit differentially private, and error
correction tunes the budget: correcting gates lowers the effective error rate
and thereby raises the privacy budget eps. The package provides a dense
simulation core, a Steane-code implementation, closed-form error and budget
formulas, a correction planner, an empirical bound verifier, Monte Carlo
validation, an HTTP service, and a CLI.
"""

from .analytics import (
    EffectiveError,
    NoiseScenario,
    concatenated_error,
    corrected_accuracy,
    corrected_error,
    error_global,
    error_selective,
    error_two_gates_both_qec,
    error_two_gates_one_qec,
    qec_threshold,
)
from .montecarlo import TrialReport, run_concatenated_trials, run_steane_trials, sample_pauli_error
from .privacy import (
    DpCheckReport,
    InfiniteBudgetError,
    PrivacyReport,
    QecPlan,
    budget_report,
    epsilon_from_p,
    p_from_epsilon,
    plan_qec,
    verify_dp_empirical,
)
from .rng import Rng
from .states import (
    CapacityError,
    DensityMatrix,
    GenerationError,
    PauliString,
    Povm,
    StateVector,
    UnitaryGate,
    apply_unitary,
    depolarize,
    depolarize_kraus_form,
    measure_projective,
    partial_trace,
    povm_probabilities,
    random_density_matrix,
    state_pair_at_distance,
    tensor,
    trace_distance,
)
from .steane import (
    CodewordState,
    Correction,
    DecodeError,
    StabilizerSet,
    Syndrome,
    concatenated_decode_classical,
    decode,
    decode_syndrome,
    encode,
    extract_syndrome_circuit,
    extract_syndrome_classical,
    qec_cycle,
)

__version__ = "0.1.0"
