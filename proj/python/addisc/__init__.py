"""Additive energy, metric discrepancy and exponential sums of integer sequences."""

from ._core import (
    BudgetExceeded,
    Error,
    InvalidArgument,
    NumericalFailure,
    VerificationFailure,
    __version__,
    block_sum_identity_residual,
    default_config,
    difference_histogram,
    draw_alphas,
    energy_bruteforce,
    energy_convolution,
    energy_histogram,
    exp_sum,
    fractional_parts,
    generate,
    golden_numerator,
    holder_lower_bound,
    is_convex,
    l1_norm,
    metric_experiment,
    normalize_spec,
    predicted_tau,
    representation_count,
    rs_partial_sum,
    rs_polynomial_eval,
    rs_sign,
    rs_verify,
    run_experiment,
    star_discrepancy,
    verify,
)


def spec(family, **params):
    """Build a sequence spec dict, e.g. spec("polynomial", coefficients=[0, 0, 1])."""
    return {"family": family, "params": params}


__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
