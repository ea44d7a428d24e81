"""Mean-field and covariance dynamics of an optomechanical resonator with
dispersive and dissipative coupling, driven by constant or chirped pulses."""
from .errors import (ChirpWithoutDissipation, ConfigError, ConflictingDriveKeys, Diverged,
                     IllConditioned, MissingKey, NegativeOccupation, NoConvergence,
                     NoStationaryState, NumericalError, OptocoolError, ParseError)
from .model import (ChirpedDrive, CoefficientSet, ConstantDrive, MeanFieldState, SystemParams,
                    build_drift_matrix, build_noise_matrix, chirp_envelope, drive_amplitude,
                    eval_coefficients, mean_field_rhs, peak_matched_drive)
from .propagation import (Trajectory, covariance_rhs, extract_observables, initial_covariance,
                          propagate, propagate_oracle)
from .steady import SteadyResult, solve_steady_mean_field, steady_phonon_decomposition, steady_state
from .sweeps import Axis, SweepGrid, SweepSpec, figure_preset, run_sweep

__version__ = "0.1.0"
