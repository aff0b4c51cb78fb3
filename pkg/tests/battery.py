"""The instance battery shared by several test modules."""

from pregeom import gen

SMALL_NORMAL_BASIC = {
    "fano": gen.fano_pair,
    "points_pairs_S4": gen.points_pairs_S4,
    "f20_case_iia": gen.f20_case_iia,
    "c52_Z3_S3": lambda: gen.construction_5_2(gen.named_group("Z3"), gen.named_group("S3")),
    "c52_Z2_Z2": lambda: gen.construction_5_2(gen.named_group("Z2"), gen.named_group("Z2")),
    "c52_Z5_F20": lambda: gen.construction_5_2(gen.named_group("Z5"), gen.named_group("F20")),
    "gl_2_1": lambda: gen.example_gamma_lambda(2, 1),
    "gl_3_1": lambda: gen.example_gamma_lambda(3, 1),
    "gl_2_2": lambda: gen.example_gamma_lambda(2, 2),
    "gl_3_1_partial": lambda: gen.example_gamma_lambda(3, 1, "0,1,inf"),
    "gl_2_2_partial": lambda: gen.example_gamma_lambda(2, 2, "0,1,inf"),
    "gl_5_1_partial": lambda: gen.example_gamma_lambda(5, 1, "0,2,inf"),
}

A5_NORMAL_BASIC = {
    "line_i_A5": gen.line_i_A5,
    "line_ii_A5": gen.line_ii_A5,
    "case_iib_A5": gen.case_iib_A5,
}

OTHER = {
    "cyclic_pair_4": lambda: gen.cyclic_pair(4),
    "fano_plus_fano": lambda: gen.product_pair(gen.fano_pair(), gen.fano_pair()),
}

EXPECTED_CASE = {
    "fano": "i", "points_pairs_S4": "iv", "f20_case_iia": "ii-a",
    "c52_Z3_S3": "iii", "c52_Z2_Z2": "iii", "c52_Z5_F20": "iii",
    "gl_2_1": "iii", "gl_3_1": "iii", "gl_2_2": "iii",
    "gl_3_1_partial": "iii", "gl_2_2_partial": "iii", "gl_5_1_partial": "iii",
    "line_i_A5": "iii", "line_ii_A5": "iii", "case_iib_A5": "ii-b",
}


def all_builders():
    return {**SMALL_NORMAL_BASIC, **A5_NORMAL_BASIC, **OTHER}
