"""Single-photon path (x) polarization simulator for quantum delayed-choice experiments."""

__version__ = "0.1.0"

from .bench import BenchCircuit, parse_bench, serialize
from .elements import BS, HWP, PBS, PHASE, QBS, Element, compose, element_unitary, qbs_decomposition
from .errors import (
    DegeneratePostselectionError,
    ParseError,
    QDChoiceError,
    UndefinedVisibilityError,
)
from .experiments import (
    Scenario,
    ScenarioId,
    build_scenario,
    evaluate,
    oracle_mixture,
    oracle_particle,
    oracle_superposition,
    oracle_wave,
    simulate,
    surface,
    verify_scenario,
)
from .measurement import (
    DetectorSpec,
    ProbabilityTable,
    conditional_probability,
    mixture_path_probabilities,
    outcome_probabilities,
    postselect,
    sample_shots,
    visibility,
)
from .statecore import (
    BasisLabel,
    DensityMatrix,
    Pol,
    PureState,
    apply_unitary,
    inner,
    overlap,
    particle_state,
    partial_trace_pol,
    source_state,
    to_density,
    wave_state,
)
