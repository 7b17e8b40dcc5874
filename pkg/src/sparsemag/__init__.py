"""Compressive waveform estimation with a simulated RF-dressed spin-1
magnetometer: DST-basis quantum sampling, FISTA sparse recovery and
matched-filter grading."""

from .grids import (
    FrequencyGrid,
    PulseSpec,
    TimeGrid,
    Waveform,
    make_grids,
    synth_waveform,
)
from .transform import (
    DstMatrix,
    MeasurementVector,
    SubsampleSet,
    apply_dst,
    apply_inverse_dst,
    dst_matrix,
    operator_norm_bound,
    random_subsample,
    sine_interpolant,
    subsample_rows,
)
from .sensor import (
    MagnusCoefficients,
    NoiseModel,
    PopulationCounts,
    SensorParams,
    SpinState,
    evolve_lab_frame,
    evolve_rotating_frame,
    extract_coefficient,
    magnus_coefficients,
    magnus_prediction,
    measure_sine_coefficient,
    ramsey_sample,
    readout,
)
from .recovery import (
    FistaConfig,
    LassoProblem,
    RecoveryResult,
    default_lambda,
    fista_solve,
    objective,
    soft_threshold,
)
from .detection import (
    AucScore,
    Classification,
    ConfusionCounts,
    RocCurve,
    Template,
    auc,
    default_template,
    ground_truth_classification,
    matched_filter,
    roc_curve,
)
from .experiments import (
    LambdaGrid,
    SweepSpec,
    TrainingSetSpec,
    compute_bound,
    run_scenario,
    simulate_measurements,
    sweep_sample_count,
    tune_lambda,
)

__version__ = "0.1.0"
