"""Norm-equivalence constants.  Generated by tools/gen_norm_constants.py; do not edit."""

# degree -> (C1, C2, C_AP)
NORM_CONSTANTS = {
    1: (1, 1, 1),
    2: (3, 4, 3),
    3: (11, 48, 6),
    4: (50, 1008, 10),
    5: (274, 31680, 20),
    6: (1764, 1382400, 35),
    7: (13132, 94348800, 70),
    8: (118124, 8360755200, 126),
}
