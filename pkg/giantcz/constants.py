"""Constants and default values for giantcz."""

import math

# Excitation sectors supported by the three-level atom model
MAX_SECTOR = 2
MAX_ATOM_LEVEL = 2

# Computational basis order used by every 4x4 / 16x16 matrix
COMPUTATIONAL_LABELS = ("11", "10", "01", "00")
COMPUTATIONAL_ATOMS = ((1, 1), (1, 0), (0, 1), (0, 0))
QUBIT_DIMENSION = 4

# Numerical tolerances
HERMITIAN_TOLERANCE = 1e-12
DENSITY_TOLERANCE = 1e-12
CHOI_TOLERANCE = 1e-10
PSD_CLIP_TOLERANCE = 1e-10
DF_RESIDUAL_TOLERANCE = 1e-10
DF_REFINE_TOLERANCE = 1e-12
BAND_EDGE_TOLERANCE = 1e-9

# Propagation defaults (times in units of 1/J)
DEFAULT_TOLERANCE = 1e-10
DEFAULT_DT = 0.1
DEFAULT_KRYLOV_DIM = 30
MAX_SUBSTEP_HALVINGS = 8
NORM_DRIFT_GATE = 1e-8

# Decoherence-free root search
DF_GRID_SAMPLES = 10_000
ZETA_MERGE = 2.0

# Protocol defaults
DEFAULT_NUM_SITES = 100
DEFAULT_PLACEMENT = "interleaved"
PLACEMENTS = ("interleaved", "separate")
DEFAULT_SEARCH_HALFWIDTH = 0.05
MAX_SEARCH_HALFWIDTH = 0.1
CALIBRATION_XATOL = 1e-4
REVIVAL_HYSTERESIS = 0.02
# n11 must drop below this before a return counts as a revival
REVIVAL_DEPTH = 0.5
REVIVAL_RETURN_FRACTION = 0.5
GROUP_VELOCITY_FACTOR = 2.0
ALPHA2_DEFAULT_OFFSET = -0.3

# Horizon rule: t_max = 150 for g >= 0.1, else scaled with the exchange time ~ 1/g^2
HORIZON_MIN = 150.0
HORIZON_G_REFERENCE = 0.1
HORIZON_EXCHANGE_COEFFICIENT = 0.74
HORIZON_MARGIN = 1.35
HORIZON_ROUNDING = 50.0

# Experimental decay rates (units of J) for J/2pi = 200 MHz
DEFAULT_QUBIT_DECAY = 1.6e-5
DEFAULT_CAVITY_DECAY = 8e-5
DEFAULT_SWEEP_G = (0.03, 0.05, 0.08, 0.1, 0.175)

# Published parameter sets, energies in units of J
SQRT2 = math.sqrt(2.0)
PRESETS = {
    "2d": {
        "geometry": "two_point", "dx": 4, "zeta": 0.0, "g": 0.175,
        "omega1": SQRT2, "omega2": -SQRT2, "alpha1": -2.0 * SQRT2, "alpha2": -3.0,
        "t_max": 150.0,
    },
    "2e": {
        "geometry": "two_point", "dx": 16, "zeta": 0.0, "g": 0.175,
        "omega1": 0.39, "omega2": -0.39, "alpha1": -0.78, "alpha2": -1.0,
        "t_max": 150.0,
    },
    "3c": {
        "geometry": "three_point", "dx": 2, "zeta": 1.0, "g": 0.1,
        "omega1": 1.0, "omega2": -0.98, "alpha1": -2.0, "alpha2": -1.52,
        "t_max": 150.0,
    },
    "3d": {
        "geometry": "three_point", "dx": 2, "zeta": 1.5, "g": 0.1,
        "omega1": 0.71, "omega2": -0.69, "alpha1": -1.42, "alpha2": -1.31,
        "t_max": 150.0,
    },
    "3e": {
        "geometry": "three_point", "dx": 2, "zeta": 1.97, "g": 0.1,
        "omega1": 0.17, "omega2": -0.17, "alpha1": -0.34, "alpha2": -0.67,
        "t_max": 150.0,
    },
}
PRESETS["4a"] = dict(PRESETS["3e"])
PRESETS["4b"] = dict(PRESETS["3e"], g=0.05, t_max=400.0)
PRESET_IDS = tuple(PRESETS)

# Configuration document
SCHEMA_VERSION = 1
CONFIG_SUFFIXES = (".yaml", ".yml")
ENV_THREADS = "GIANTCZ_THREADS"
ENV_OUTPUT_DIR = "GIANTCZ_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "results"

# CSV columns
DYNAMICS_COLUMNS = ["t_J", "n11", "n20", "n02", "norm"]
FIDELITY_COLUMNS = [
    "t", "process_fidelity", "average_fidelity", "phi1", "phi2", "trace_deficit",
]
SWEEP_COLUMNS = [
    "g_over_J", "fidelity_process", "fidelity_average", "tau_J",
    "omega2_calibrated", "phi1", "phi2",
]
DF_COLUMNS = ["k_DF", "omega_DF_over_J", "band_edge"]

# Output file kinds
DYNAMICS_KIND = "dynamics"
FIDELITY_KIND = "fidelity"
SWEEP_KIND = "sweep"
DF_SCAN_KIND = "df_scan"
BAND_KIND = "band"
HAMILTONIAN_KIND = "hamiltonian"
CSV_EXTENSION = ".csv"
JSON_EXTENSION = ".json"
GNUPLOT_EXTENSION = ".gp"
TEXT_EXTENSION = ".txt"
CSV_FLOAT_FORMAT = "%.12g"

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4
