# apps/experiments/reference.py
"""
Published values the reproduce command compares against.

Only the scheme's own published columns and the printed exact-solution
columns are kept. Values are copied as printed; they are reference data,
not truth. Entries that disagree with their own closed form are listed in
FLAGGED with the reason, and reproduce reports them as 'flagged'.

Keys: table id -> nested dicts, innermost keyed by the row coordinate.
"""

REFERENCE_VERSION = 1

POINTS_1D = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


# ============================================================================
# TABLE 1: 1d-wood, sigma=2, N=40, dt=1e-4, T=1e-3, Re in {1, 10}
# ============================================================================

TABLE_1 = {
    'computed': {
        1.0: dict(zip(POINTS_1D, (
            0.653544, 1.305533, 1.949363, 2.565927, 3.110739,
            3.492873, 3.549602, 3.050145, 1.816672,
        ))),
        10.0: dict(zip(POINTS_1D, (
            0.065749761, 0.131382943, 0.196280911, 0.258575994, 0.313849356,
            0.352972354, 0.359442750, 0.309579979, 0.184753526,
        ))),
    },
    'exact': {
        1.0: dict(zip(POINTS_1D, (
            0.653545, 1.305534, 1.949364, 2.565927, 3.110739,
            3.492871, 3.549594, 3.050130, 1.816658,
        ))),
        10.0: dict(zip(POINTS_1D, (
            0.065749761, 0.131382943, 0.196280911, 0.258575995, 0.313849356,
            0.352972351, 0.359442742, 0.309579963, 0.184753511,
        ))),
    },
    # (L2, Linf)
    'norms': {
        1.0: (6.66e-06, 1.60e-05),
        10.0: (7.13e-09, 1.73e-08),
    },
}


# ============================================================================
# TABLE 2: 1d-wood, sigma=100, T=1, dt=0.01; (Re, N) -> (L2, Linf)
# ============================================================================

TABLE_2 = {
    (100.0, 10): (2.3494e-10, 3.9698e-10),
    (100.0, 20): (2.3486e-10, 3.9784e-10),
    (100.0, 40): (2.3486e-10, 3.9784e-10),
    (100.0, 80): (2.3486e-10, 3.9856e-10),
    (200.0, 10): (3.161e-11, 5.303e-11),
    (200.0, 20): (3.155e-11, 5.342e-11),
    (200.0, 40): (3.155e-11, 5.347e-11),
    (200.0, 80): (3.155e-11, 5.355e-11),
}


# ============================================================================
# TABLE 3: 1d-wood, sigma=2, dt=1e-3; (T, Re, N) -> (L2, Linf)
# ============================================================================

TABLE_3 = {
    (0.1, 10.0, 20): (3.6018e-07, 8.1267e-07),
    (0.1, 10.0, 32): (3.6020e-07, 8.1808e-07),
    (0.1, 100.0, 20): (6.6321e-10, 1.5636e-09),
    (0.1, 100.0, 32): (6.6393e-10, 1.5970e-09),
    (0.1, 1e4, 20): (3.5865e-14, 1.4146e-13),
    (0.1, 1e4, 32): (7.1838e-16, 1.7435e-15),
    (0.1, 1e5, 20): (4.1011e-16, 1.6284e-15),
    (0.1, 1e5, 32): (8.1422e-19, 2.0939e-18),
    (0.5, 10.0, 20): (6.2788e-08, 1.2138e-07),
    (0.5, 10.0, 32): (6.2787e-08, 1.2158e-07),
    (0.5, 100.0, 20): (4.9320e-10, 1.1375e-09),
    (0.5, 100.0, 32): (4.9473e-10, 1.1514e-09),
    (0.5, 1e4, 20): (1.0714e-13, 4.0785e-13),
    (0.5, 1e4, 32): (7.0998e-16, 1.7148e-15),
    (0.5, 1e5, 20): (1.9304e-15, 7.6459e-15),
    (0.5, 1e5, 32): (3.3693e-18, 1.1923e-17),
}


# ============================================================================
# TABLE 4: 1d-fourier, Re=100, dt=1e-3; (x, t) -> values
# ============================================================================

TABLE_4 = {
    # (x, t): (N=40, N=80, exact, abs error at N=80)
    (0.25, 0.4): (0.36226, 0.36226, 0.36226, 9.9e-08),
    (0.25, 0.6): (0.28204, 0.28204, 0.28204, 7.0e-08),
    (0.25, 0.8): (0.23045, 0.23045, 0.23045, 4.6e-08),
    (0.25, 1.0): (0.19469, 0.19469, 0.19469, 3.2e-08),
    (0.25, 3.0): (0.07613, 0.07613, 0.07613, 4.7e-09),
    (0.5, 0.4): (0.68369, 0.68369, 0.68368, 1.2e-07),
    (0.5, 0.6): (0.54832, 0.54832, 0.54832, 1.7e-07),
    (0.5, 0.8): (0.45372, 0.45371, 0.45371, 1.4e-07),
    (0.5, 1.0): (0.38568, 0.38568, 0.38568, 9.7e-08),
    (0.5, 3.0): (0.15218, 0.15218, 0.15218, 1.1e-08),
    (0.75, 0.4): (0.92050, 0.92050, 0.92050, 2.5e-07),
    (0.75, 0.6): (0.78299, 0.78299, 0.78299, 4.3e-07),
    (0.75, 0.8): (0.66272, 0.66272, 0.66272, 3.2e-07),
    (0.75, 1.0): (0.56932, 0.56932, 0.56932, 2.2e-07),
    (0.75, 3.0): (0.22774, 0.22774, 0.22774, 1.9e-08),
}


# ============================================================================
# TABLE 5: 1d-fourier, N=80, dt=1e-3; (nu, T) -> (L2, Linf)
# ============================================================================

TABLE_5 = {
    (0.005, 5.0): (2.875e-09, 5.419e-09),
    (0.005, 10.0): (5.180e-10, 9.913e-10),
    (0.005, 15.0): (1.986e-10, 3.762e-10),
    (0.002, 5.0): (1.764e-08, 5.931e-08),
    (0.002, 10.0): (2.577e-09, 3.938e-09),
    (0.002, 15.0): (1.854e-09, 3.296e-09),
    (1e-4, 5.0): (0.08022, 0.29237),
    (1e-4, 10.0): (6.029e-07, 1.246e-06),
    (1e-4, 15.0): (2.386e-07, 5.058e-07),
}


# ============================================================================
# TABLE 6: 2d, Re=20, 16x16, dt=1e-3; (x, y) -> abs error at T=0.5, 0.75, 1
# ============================================================================

TABLE_6_TIMES = (0.5, 0.75, 1.0)

TABLE_6 = {
    (0.125, 0.125): (4.50e-06, 1.64e-06, 3.37e-07),
    (0.125, 0.5): (4.92e-06, 3.40e-06, 8.56e-07),
    (0.125, 0.875): (9.41e-07, 1.45e-06, 3.85e-06),
    (0.5, 0.125): (4.92e-06, 3.40e-06, 8.56e-07),
    (0.5, 0.5): (5.60e-07, 2.01e-08, 6.11e-06),
    (0.5, 0.875): (4.46e-08, 5.91e-07, 7.69e-07),
    (0.875, 0.125): (9.41e-07, 1.45e-06, 3.85e-06),
    (0.875, 0.5): (4.46e-08, 5.91e-07, 7.69e-07),
    (0.875, 0.875): (3.26e-09, 8.71e-09, 3.21e-07),
}


# ============================================================================
# TABLE 7: 2d, Re=1; (T, grid, dt) -> (L2, Linf)
# ============================================================================

TABLE_7 = {
    (0.05, 5, 0.005): (4.375e-07, 5.855e-07),
    (0.05, 10, 0.0005): (4.775e-09, 4.492e-09),
    (0.05, 15, 0.0001): (2.407e-10, 1.887e-10),
    (0.25, 5, 0.005): (2.909e-07, 4.057e-07),
    (0.25, 10, 0.0005): (2.379e-10, 2.160e-10),
    (0.25, 15, 0.0001): (1.207e-11, 8.888e-12),
}


# ============================================================================
# TABLE 8: 2d, 16x16, dt=5e-4; (T, Re) -> (L2, Linf)
# ============================================================================

TABLE_8 = {
    (3.0, 10.0): (3.18e-09, 3.52e-09),
    (3.0, 100.0): (3.11e-06, 3.84e-06),
    (3.0, 200.0): (1.56e-04, 2.46e-04),
    (5.0, 10.0): (1.29e-13, 1.31e-13),
    (5.0, 100.0): (1.35e-12, 1.26e-12),
    (5.0, 200.0): (1.93e-09, 2.34e-09),
    (10.0, 10.0): (3.08e-13, 3.86e-13),
    (10.0, 100.0): (7.59e-13, 8.10e-13),
    (10.0, 200.0): (9.52e-13, 9.54e-13),
}


# ============================================================================
# TABLE 9: coupled u, Re=100, N=20, dt=1e-3; T -> (L2, Linf)
# ============================================================================

TABLE_9 = {
    0.5: (1.3078e-05, 1.0721e-05),
    1.0: (1.0779e-05, 8.3286e-06),
    2.0: (1.0823e-05, 9.0187e-06),
    4.0: (7.3885e-08, 8.4375e-08),
}


# ============================================================================
# TABLES 10 AND 11: coupled u and v, Re=100, 20x20, dt=1e-3
# (x, y) -> (computed T=0.5, exact T=0.5, computed T=2, exact T=2)
# ============================================================================

TABLE_10 = {
    (0.1, 0.1): (0.54332, 0.54332, 0.50048, 0.50048),
    (0.5, 0.1): (0.50035, 0.50035, 0.50000, 0.50000),
    (0.9, 0.1): (0.50000, 0.50000, 0.50000, 0.50000),
    (0.3, 0.3): (0.54338, 0.54338, 0.50048, 0.50048),
    (0.7, 0.3): (0.50035, 0.50035, 0.50000, 0.50000),
    (0.1, 0.5): (0.74222, 0.74221, 0.55568, 0.55568),
    (0.5, 0.5): (0.54332, 0.54332, 0.50048, 0.50048),
    (0.9, 0.5): (0.50035, 0.50035, 0.50000, 0.50000),
    (0.3, 0.7): (0.74223, 0.74223, 0.55577, 0.55577),
    (0.7, 0.7): (0.54338, 0.54338, 0.50048, 0.50048),
    (0.1, 0.9): (0.74995, 0.74995, 0.74426, 0.74426),
    (0.5, 0.9): (0.74221, 0.74221, 0.55568, 0.55568),
    (0.9, 0.9): (0.543324, 0.543325, 0.50048, 0.50048),
}

TABLE_11 = {
    (0.1, 0.1): (0.95668, 0.95668, 0.99952, 0.99952),
    (0.5, 0.1): (0.99965, 0.99965, 1.00000, 1.00000),
    (0.9, 0.1): (1.00000, 1.00000, 1.00000, 1.00000),
    (0.3, 0.3): (0.95662, 0.95662, 0.99952, 0.99952),
    (0.7, 0.3): (0.99965, 0.99965, 1.00000, 1.00000),
    (0.1, 0.5): (0.75778, 0.75779, 0.94433, 0.94432),
    (0.5, 0.5): (0.95668, 0.95668, 0.99952, 0.99952),
    (0.9, 0.5): (0.99965, 0.99965, 1.00000, 1.00000),
    (0.3, 0.7): (0.75777, 0.75777, 0.94423, 0.94423),
    (0.7, 0.7): (0.95662, 0.95662, 0.99952, 0.99952),
    (0.1, 0.9): (0.75005, 0.75005, 0.75574, 0.75574),
    (0.5, 0.9): (0.75779, 0.75779, 0.94432, 0.94432),
}


# ============================================================================
# FLAGS
# ============================================================================

_OFF_FRONT = "printed exact value disagrees with the closed form at this point"

# (table id, row key, column) -> reason
FLAGGED = {
    (5, (1e-4, 5.0), 'L2'): "series exact solution cannot be evaluated here; printed error is O(0.1)",
    (5, (1e-4, 5.0), 'Linf'): "series exact solution cannot be evaluated here; printed error is O(0.1)",
    (10, (0.3, 0.3), 'exact_t0.5'): _OFF_FRONT,
    (10, (0.7, 0.7), 'exact_t0.5'): _OFF_FRONT,
    (10, (0.3, 0.7), 'exact_t0.5'): _OFF_FRONT,
    (10, (0.3, 0.7), 'exact_t2'): _OFF_FRONT,
    (11, (0.3, 0.3), 'exact_t0.5'): _OFF_FRONT,
    (11, (0.7, 0.7), 'exact_t0.5'): _OFF_FRONT,
    (11, (0.3, 0.7), 'exact_t0.5'): _OFF_FRONT,
    (11, (0.3, 0.7), 'exact_t2'): _OFF_FRONT,
}


def flag_for(table_id, key, column):
    return FLAGGED.get((table_id, key, column), '')


# ============================================================================
# KNOWN DIVERGENCES
# ============================================================================

_TABLE_4_ROUNDING = (
    "printed value is 1e-5 above the printed exact 0.68368; the computed "
    "0.683669 sits within 1.1e-5 of the closed form"
)

_TABLE_6_RESOLUTION = (
    "error is bound by the 16x16 grid: about 1.0e-4 at (0.125, 0.125), T=0.75 "
    "for dt 1e-3, 5e-4 and 2.5e-4 alike, 5e-7 on a 24x24 grid, and above the "
    "nodal Linf of 5.4e-5, so interpolation to off-node points contributes"
)

# Measured disagreements that survive the scheme as implemented. A cell that
# misses its tolerance and is listed here is reported 'flagged' with this
# evidence; a cell that meets its tolerance still passes.
# (table id, row key, column) -> evidence; (table id, None, None) covers the table.
KNOWN_DIVERGENCES = {
    (4, (0.5, 0.4), 'N=40'): _TABLE_4_ROUNDING,
    (4, (0.5, 0.4), 'N=80'): _TABLE_4_ROUNDING,
    (6, None, None): _TABLE_6_RESOLUTION,
}


def divergence_for(table_id, key, column):
    return (KNOWN_DIVERGENCES.get((table_id, key, column))
            or KNOWN_DIVERGENCES.get((table_id, None, None), ''))
