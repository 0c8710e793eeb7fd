"""N-simplicial attention with rank-collapse, Lipschitz and RoPE checks."""

from ._core import (
    Mask,
    Params,
    analytic_jvp,
    apply_rotations,
    contract_logits,
    cubic_bound_check,
    curvature_increase,
    det_logits,
    forman_curvature,
    forward,
    lipschitz_bound,
    norm_one_inf,
    parse_mask,
    parse_params,
    path_sparse_mask,
    reduce_order_exact,
    residual_norm,
    softmax,
)

__all__ = [
    "Mask",
    "Params",
    "analytic_jvp",
    "apply_rotations",
    "contract_logits",
    "cubic_bound_check",
    "curvature_increase",
    "det_logits",
    "forman_curvature",
    "forward",
    "lipschitz_bound",
    "norm_one_inf",
    "parse_mask",
    "parse_params",
    "path_sparse_mask",
    "reduce_order_exact",
    "residual_norm",
    "softmax",
]
