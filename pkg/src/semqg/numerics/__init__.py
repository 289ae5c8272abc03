from .tensor import (
    Tensor,
    add,
    as_tensor,
    backward,
    concat,
    dot,
    exp,
    gather_rows,
    leaky_relu,
    log,
    matmul,
    maximum,
    mean,
    minimum,
    mul,
    neg,
    reshape,
    sigmoid,
    softmax,
    split,
    sub,
    sum,
    take,
    tanh,
    transpose,
    zeros,
)
from .gru import GruParams, gru_cell
from .params import ParamStore, read_checkpoint, write_checkpoint
from .gradcheck import finite_difference_check

__all__ = [
    "Tensor", "add", "as_tensor", "backward", "concat", "dot", "exp",
    "gather_rows", "leaky_relu", "log", "matmul", "maximum", "mean", "minimum", "mul",
    "neg", "reshape", "sigmoid", "softmax", "split", "sub", "sum", "take",
    "tanh", "transpose", "zeros",
    "GruParams", "gru_cell",
    "ParamStore", "read_checkpoint", "write_checkpoint",
    "finite_difference_check",
]
