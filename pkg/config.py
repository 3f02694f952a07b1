"""Configuration settings for the first-passage-time density toolkit."""

import os

# Logging
LOG_LEVEL = os.environ.get('FPT_LOG_LEVEL', 'INFO').upper()

# Density evaluation
DEFAULT_EPS = float(os.environ.get('FPT_EPS', '1e-6'))  # Absolute tolerance on the density value
DEFAULT_DELTA = int(os.environ.get('FPT_DELTA', '1'))  # Large-time switch for combined SWSE
DEFAULT_MAX_TERMS = int(os.environ.get('FPT_MAX_TERMS', '1000000'))
DEFAULT_METHOD = "combined-swse-17"

# Oracle
ORACLE_N_TERMS = int(os.environ.get('FPT_ORACLE_TERMS', '10000'))
ORACLE_AGREEMENT_TOL = float(os.environ.get('FPT_ORACLE_TOL', '1e-10'))
NORMALIZATION_HORIZON = 60.0  # Seconds after t0
NORMALIZATION_TOL = 1e-4

# Fitting
FIT_MAX_ITER = int(os.environ.get('FPT_FIT_MAX_ITER', '500'))
FIT_MAX_EVALS = int(os.environ.get('FPT_FIT_MAX_EVALS', '20000'))
FIT_PENALTY = 1e10  # Stand-in objective for infinite nll inside the optimizer
FIT_T0_MARGIN = 1e-4  # Upper t0 bound is min rt minus this
FIT_GAP_TOL = 1e-4  # Objective gap flagged in fit benchmarks

# Parameter order: a, v_c1, v_c2, w, t0, eta (t0 bounds depend on the data)
FIT_BOUNDS = {
    "a": (0.05, 10.0),
    "v_c1": (-15.0, 15.0),
    "v_c2": (-15.0, 15.0),
    "w": (0.01, 0.99),
    "eta": (0.0, 10.0),
}

# Fixed Latin-hypercube-style starts: (a, v_c1, v_c2, w, t0 as a fraction of min rt, eta)
DEFAULT_STARTS = [
    (0.6, -0.6, 1.8, 0.46, 0.69, 1.3),
    (0.8, 2.4, -1.2, 0.62, 0.21, 0.5),
    (1.0, 0.0, 0.6, 0.38, 0.85, 1.9),
    (1.2, -2.4, -3.0, 0.54, 0.37, 0.1),
    (1.4, 1.2, 2.4, 0.30, 0.53, 1.1),
    (1.6, -1.8, 0.0, 0.66, 0.05, 2.1),
    (1.8, 3.0, -0.6, 0.42, 0.61, 0.7),
    (2.0, -1.2, 3.0, 0.58, 0.29, 1.5),
    (2.4, 0.6, -2.4, 0.34, 0.77, 0.3),
    (2.8, -3.0, 1.2, 0.70, 0.13, 1.7),
    (3.2, 1.8, -1.8, 0.50, 0.45, 0.9),
]

# Simulation
SIM_DT = float(os.environ.get('FPT_SIM_DT', '1e-4'))  # Seconds per Euler step
SIM_MAX_TIME = float(os.environ.get('FPT_SIM_MAX_TIME', '120'))  # Simulated seconds before a trial times out
SIM_MAX_RESAMPLE_ROUNDS = 10
SIM_N_PER_CLASS = 500

# Generating parameters of the fit benchmark datasets
FIT_BENCH_TRUE_PARAMS = {"a": 1.0, "v_c1": 1.0, "v_c2": -0.5, "w": 0.5, "t0": 0.3, "eta": 0.5}
FIT_BENCH_DATASETS = 4

# Benchmarking
BENCH_WARMUP = int(os.environ.get('FPT_BENCH_WARMUP', '10'))
BENCH_REPS_VECTOR = int(os.environ.get('FPT_BENCH_REPS_VECTOR', '1000'))
BENCH_REPS_INDIVIDUAL = int(os.environ.get('FPT_BENCH_REPS_INDIVIDUAL', '200'))
BENCH_REPS_FIT = int(os.environ.get('FPT_BENCH_REPS_FIT', '5'))
BENCH_REPS_DELTA = int(os.environ.get('FPT_BENCH_REPS_DELTA', '200'))
BENCH_DELTAS = [0, 1, 2, 3, 4, 5, 6, 7]

# Published benchmark grids
TABLE_1 = {
    "t": [0.001, 0.1, 1.0, 2.0, 3.0, 4.0, 5.0, 10.0, 30.0],
    "a": [0.25, 0.5, 1.0, 2.5, 5.0],
    "v": [-5.0, -2.0, 0.0, 2.0, 5.0],
    "w": [0.2, 0.5, 0.8],
    "eta": [0.0, 0.5, 1.0, 1.5],
    "t0": 0.0001,
}

TABLE_2 = {
    "t": [round(0.1 * i, 1) for i in range(1, 21)],
    "a": [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5],
    "v": [-5.0, -2.0, 0.0, 2.0, 5.0],
    "w": [0.3, 0.4, 0.5, 0.6, 0.7],
    "eta": [0.0, 1.0, 2.0, 3.5],
    "t0": 0.0001,
}
