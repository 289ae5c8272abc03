"""Named parameter store, deterministic initialization, checkpoint format.

Checkpoints are versioned JSON: parameter values are float64 little-endian
bytes, base64-encoded, so round-trips are bit-exact.
"""

from __future__ import annotations

import base64
import json
import zlib
from typing import Callable

import numpy as np

from ..errors import ConfigError
from .tensor import Tensor

CHECKPOINT_VERSION = 1


def _rng_for(seed: int, name: str) -> np.random.Generator:
    """Splittable deterministic stream: one independent RNG per parameter name."""
    return np.random.default_rng([seed & 0xFFFFFFFF, zlib.crc32(name.encode("utf-8"))])


class ParamStore:
    """Ordered map of named trainable tensors."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._params: dict[str, Tensor] = {}

    def parameter(self, name: str, shape, init: str = "uniform") -> Tensor:
        """Create (or fetch) a parameter.

        ``uniform`` draws from U(-1/sqrt(fan_in), +1/sqrt(fan_in)) with
        fan_in the trailing dimension; ``zeros`` is used for biases.
        """
        if name in self._params:
            p = self._params[name]
            if p.data.shape != tuple(shape):
                raise ConfigError(f"parameter {name} exists with shape {p.data.shape}, requested {shape}")
            return p
        shape = tuple(shape)
        if init == "zeros":
            data = np.zeros(shape, dtype=np.float64)
        elif init == "uniform":
            fan_in = shape[-1] if len(shape) >= 2 else shape[0]
            bound = 1.0 / np.sqrt(fan_in)
            data = _rng_for(self.seed, name).uniform(-bound, bound, size=shape)
        else:
            raise ConfigError(f"unknown init {init!r}")
        p = Tensor(data, requires_grad=True)
        self._params[name] = p
        return p

    def __getitem__(self, name: str) -> Tensor:
        try:
            return self._params[name]
        except KeyError:
            raise ConfigError(f"parameter {name!r} not found") from None

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def names(self) -> list[str]:
        return list(self._params)

    def items(self):
        return self._params.items()

    def zero_grad(self):
        for p in self._params.values():
            p.grad = None

    def n_values(self) -> int:
        return int(np.sum([p.size for p in self._params.values()])) if self._params else 0

    def map_values(self, fn: Callable[[str, np.ndarray], None]):
        for name, p in self._params.items():
            fn(name, p.data)


def params_to_obj(store: ParamStore) -> dict:
    return {
        name: {
            "shape": list(p.data.shape),
            "data": base64.b64encode(
                np.ascontiguousarray(p.data, dtype="<f8").tobytes()
            ).decode("ascii"),
        }
        for name, p in store.items()
    }


def params_from_obj(obj: dict, seed: int = 0) -> ParamStore:
    store = ParamStore(seed)
    for name, entry in obj.items():
        data = np.frombuffer(
            base64.b64decode(entry["data"]), dtype="<f8"
        ).astype(np.float64).reshape(entry["shape"])
        t = Tensor(data.copy(), requires_grad=True)
        store._params[name] = t
    return store


def write_checkpoint(path, store: ParamStore, extra: dict | None = None):
    obj = {
        "version": CHECKPOINT_VERSION,
        "seed": store.seed,
        "params": params_to_obj(store),
    }
    if extra:
        obj.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def read_checkpoint(path) -> tuple[ParamStore, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("version") != CHECKPOINT_VERSION:
        raise ConfigError(f"unsupported checkpoint version {obj.get('version')!r}")
    store = params_from_obj(obj["params"], seed=obj.get("seed", 0))
    extra = {k: v for k, v in obj.items() if k not in {"version", "seed", "params"}}
    return store, extra
