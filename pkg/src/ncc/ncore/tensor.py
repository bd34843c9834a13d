"""Named parameters over float64 numpy arrays."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch


class Parameter:
    """A named tensor with a same-shaped gradient buffer."""

    def __init__(self, name: str, value: np.ndarray):
        self.name = name
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    def zero_grad(self) -> None:
        self.grad.fill(0.0)

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.value.shape})"


class ParameterSet:
    """Ordered collection of uniquely named parameters."""

    def __init__(self, params: list[Parameter] | None = None):
        self._params: dict[str, Parameter] = {}
        for p in params or []:
            self.add(p)

    def add(self, param: Parameter) -> Parameter:
        if param.name in self._params:
            raise ValueError(f"duplicate parameter name {param.name!r}")
        self._params[param.name] = param
        return param

    def __iter__(self):
        return iter(self._params.values())

    def __len__(self) -> int:
        return len(self._params)

    def __getitem__(self, name: str) -> Parameter:
        return self._params[name]

    def names(self) -> list[str]:
        return list(self._params)

    def zero_grads(self) -> None:
        for p in self:
            p.zero_grad()

    def grads(self) -> dict[str, np.ndarray]:
        return {p.name: p.grad for p in self}

    def set_grads(self, grads: dict[str, np.ndarray]) -> None:
        for p in self:
            g = grads[p.name]
            if g.shape != p.value.shape:
                raise ShapeMismatch(f"grad for {p.name} has shape {g.shape}, want {p.value.shape}")
            np.copyto(p.grad, g)


def uniform_init(rng: np.random.Generator, shape: tuple[int, ...], scale: float = 0.08) -> np.ndarray:
    """Default weight init: uniform(-scale, scale)."""
    return rng.uniform(-scale, scale, size=shape)
