from ._bpinterp import (
    aux_report,
    basis_pursuit,
    erfcx,
    gen_instance,
    h_factor,
    min_l2_interpolator,
    path_breakpoints,
    path_gamma,
    phi_c,
    prediction_error,
    sparsity_window,
    t_quantile,
    truncated_moments,
)

__all__ = [
    "aux_report",
    "basis_pursuit",
    "erfcx",
    "gen_instance",
    "h_factor",
    "min_l2_interpolator",
    "path_breakpoints",
    "path_gamma",
    "phi_c",
    "prediction_error",
    "sparsity_window",
    "t_quantile",
    "truncated_moments",
]
