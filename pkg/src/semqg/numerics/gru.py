"""Gated recurrent cell used by the document encoder, graph updates, decoder."""

from __future__ import annotations

from dataclasses import dataclass

from .params import ParamStore
from .tensor import Tensor, add, matmul, mul, sigmoid, sub, tanh, as_tensor


@dataclass
class GruParams:
    w_z: Tensor
    u_z: Tensor
    b_z: Tensor
    w_r: Tensor
    u_r: Tensor
    b_r: Tensor
    w_c: Tensor
    u_c: Tensor
    b_c: Tensor

    @classmethod
    def create(cls, store: ParamStore, prefix: str, input_dim: int, hidden_dim: int) -> "GruParams":
        def gate(g):
            return (
                store.parameter(f"{prefix}.w_{g}", (hidden_dim, input_dim)),
                store.parameter(f"{prefix}.u_{g}", (hidden_dim, hidden_dim)),
                store.parameter(f"{prefix}.b_{g}", (hidden_dim,), init="zeros"),
            )

        wz, uz, bz = gate("z")
        wr, ur, br = gate("r")
        wc, uc, bc = gate("c")
        return cls(wz, uz, bz, wr, ur, br, wc, uc, bc)

    @classmethod
    def fetch(cls, store: ParamStore, prefix: str) -> "GruParams":
        return cls(*(store[f"{prefix}.{p}_{g}"] for g in "zrc" for p in ("w", "u", "b")))


def gru_cell(x: Tensor, h: Tensor, p: GruParams) -> Tensor:
    """One gated update.

    The update gate multiplies the previous state, so saturating it at 1
    copies ``h`` through unchanged; with all parameters zero the output is
    exactly ``h / 2`` (z = 1/2, candidate = 0).
    """
    z = sigmoid(add(add(matmul(p.w_z, x), matmul(p.u_z, h)), p.b_z))
    r = sigmoid(add(add(matmul(p.w_r, x), matmul(p.u_r, h)), p.b_r))
    cand = tanh(add(add(matmul(p.w_c, x), matmul(p.u_c, mul(r, h))), p.b_c))
    one = as_tensor(1.0)
    return add(mul(z, h), mul(sub(one, z), cand))
