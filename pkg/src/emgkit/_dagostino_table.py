"""Percentiles of D'Agostino's Y statistic for normal samples.

Generated by tools/dagostino_table.py (Monte Carlo, 200000 replicates per n, seed 19710101).
"""

ALPHAS = (0.05, 0.01)
PROBS = (0.005, 0.025, 0.975, 0.995)
QUANTILES = {
    10: {0.005: -4.7173, 0.025: -3.2543, 0.975: 0.3003, 0.995: 0.3889},
    12: {0.005: -4.6201, 0.025: -3.2003, 0.975: 0.3866, 0.995: 0.4726},
    14: {0.005: -4.5423, 0.025: -3.1570, 0.975: 0.4624, 0.995: 0.5508},
    16: {0.005: -4.5509, 0.025: -3.1334, 0.975: 0.5258, 0.995: 0.6164},
    18: {0.005: -4.4896, 0.025: -3.0983, 0.975: 0.5824, 0.995: 0.6772},
    20: {0.005: -4.4029, 0.025: -3.0461, 0.975: 0.6321, 0.995: 0.7300},
    25: {0.005: -4.2971, 0.025: -2.9922, 0.975: 0.7419, 0.995: 0.8489},
    30: {0.005: -4.1709, 0.025: -2.8906, 0.975: 0.8289, 0.995: 0.9476},
    35: {0.005: -4.1545, 0.025: -2.8661, 0.975: 0.9008, 0.995: 1.0330},
    40: {0.005: -4.0400, 0.025: -2.8033, 0.975: 0.9616, 0.995: 1.1063},
    45: {0.005: -3.9604, 0.025: -2.7717, 0.975: 1.0147, 0.995: 1.1729},
    50: {0.005: -3.9476, 0.025: -2.7388, 0.975: 1.0599, 0.995: 1.2317},
    60: {0.005: -3.8025, 0.025: -2.6886, 0.975: 1.1299, 0.995: 1.3337},
    70: {0.005: -3.7199, 0.025: -2.6273, 0.975: 1.1883, 0.995: 1.4088},
    80: {0.005: -3.6833, 0.025: -2.6094, 0.975: 1.2405, 0.995: 1.4767},
    90: {0.005: -3.5773, 0.025: -2.5557, 0.975: 1.2819, 0.995: 1.5405},
    100: {0.005: -3.5845, 0.025: -2.5496, 0.975: 1.3134, 0.995: 1.5877},
    150: {0.005: -3.3686, 0.025: -2.4311, 0.975: 1.4303, 0.995: 1.7546},
    200: {0.005: -3.2679, 0.025: -2.3933, 0.975: 1.5025, 0.995: 1.8576},
    250: {0.005: -3.2179, 0.025: -2.3536, 0.975: 1.5540, 0.995: 1.9367},
    300: {0.005: -3.1495, 0.025: -2.3041, 0.975: 1.5815, 0.995: 1.9858},
    400: {0.005: -3.0681, 0.025: -2.2738, 0.975: 1.6332, 0.995: 2.0722},
    500: {0.005: -3.0448, 0.025: -2.2497, 0.975: 1.6683, 0.995: 2.1012},
    600: {0.005: -2.9791, 0.025: -2.2148, 0.975: 1.6970, 0.995: 2.1554},
    700: {0.005: -2.9456, 0.025: -2.2015, 0.975: 1.7182, 0.995: 2.1843},
    800: {0.005: -2.9548, 0.025: -2.1845, 0.975: 1.7372, 0.995: 2.2142},
    900: {0.005: -2.9293, 0.025: -2.1767, 0.975: 1.7434, 0.995: 2.2484},
    1000: {0.005: -2.8884, 0.025: -2.1462, 0.975: 1.7521, 0.995: 2.2448},
    1500: {0.005: -2.8509, 0.025: -2.1199, 0.975: 1.7992, 0.995: 2.3180},
    2000: {0.005: -2.8258, 0.025: -2.1053, 0.975: 1.8119, 0.995: 2.3464},
}
