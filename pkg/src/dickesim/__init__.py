"""Digital-analog simulation of generalized Dicke models.

Builds truncated qubit-boson operator algebra, compiles collective
interaction schedules (plain, biased, pulsed, and analog rotating-wave
variants), integrates them under a circuit-QED master equation, and
evaluates analytic first-order digital-error bounds against measured error.
"""

from .error_bounds import (
    ErrorReport,
    biased_bound,
    biased_error_operator,
    cauchy_schwarz_bound,
    closed_form_error,
    dicke_error_report,
    leading_error_operator,
    measured_error,
    trotter_error_sum,
)
from .hamiltonians import (
    FermiBoseOracle,
    FermionicSpace,
    FrameParams,
    ModelParams,
    PulseParams,
    anti_tavis_cummings,
    biased_dicke,
    collective_rotation,
    dicke,
    excitation_number,
    fermi_bose_oracle,
    frame_map,
    inhomogeneous_dicke,
    pulsed_coupling,
    tavis_cummings,
)
from .hilbert import (
    DensityMatrix,
    HilbertSpace,
    Operator,
    basis_state,
    boson_op,
    build_space,
    collective_qubit_op,
    commutator,
    evolve_unitary,
    ground_state,
    identity,
    qubit_op,
    spectral_norm,
    zero,
)
from .lindblad import (
    IntegrationError,
    IntegratorConfig,
    NoiseParams,
    convergence_check,
    integrate_segment,
    rhs,
    run_schedule,
)
from .observables import (
    SimulationResult,
    fidelity,
    leakage,
    photon_number,
    survival_probability,
)
from .trotter import (
    Segment,
    Trajectory,
    TrotterSchedule,
    biased_schedule,
    dicke_schedule,
    execute_unitary,
    fermi_bose_analog_schedule,
    operator_norm_error,
    pulsed_schedule,
    schedule_unitary,
    target_unitary,
)

__version__ = "0.1.0"
