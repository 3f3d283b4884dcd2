"""First-order optimizers (SGD, ADAM) with constraint projection.

Both steps are pure: they take (params, grads, state) and return updated
copies. The projection clamping a and c runs after every update.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidArgumentError
from .grad import GradientRecord
from .model import A_MAX, A_MIN, DqnnParams

_FIELDS = ("theta", "a", "c", "alpha")
_GRAD_FIELDS = ("dtheta", "da", "dc", "dalpha")


@dataclass
class OptimizerState:
    kind: str = "adam"                 # "sgd" or "adam"
    lr: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("sgd", "adam"):
            raise InvalidArgumentError(f"unknown optimizer kind {self.kind!r}")
        if self.lr <= 0:
            raise InvalidArgumentError("learning rate must be positive")


def _check_shapes(params: DqnnParams, grads: GradientRecord):
    for f, gf in zip(_FIELDS, _GRAD_FIELDS):
        p, g = getattr(params, f), getattr(grads, gf)
        if p.shape != g.shape:
            raise InvalidArgumentError(f"gradient {gf} shape {g.shape} != parameter shape {p.shape}")


def _project(new: dict) -> dict:
    # Clamp before constructing DqnnParams: its validation rejects raw
    # out-of-range values, so projection must happen on the arrays.
    new["a"] = np.clip(new["a"], A_MIN, A_MAX)
    new["c"] = np.clip(new["c"], 0.0, 1.0)
    return new


def sgd_step(params: DqnnParams, grads: GradientRecord, state: OptimizerState):
    """p <- p - lr * g, then projection."""
    _check_shapes(params, grads)
    new = {
        f: getattr(params, f) - state.lr * getattr(grads, gf)
        for f, gf in zip(_FIELDS, _GRAD_FIELDS)
    }
    state = replace(state, step_count=state.step_count + 1)
    return replace(params, **_project(new)), state


def adam_step(params: DqnnParams, grads: GradientRecord, state: OptimizerState):
    """Bias-corrected ADAM update, then projection."""
    _check_shapes(params, grads)
    t = state.step_count + 1
    m = dict(state.m)
    v = dict(state.v)
    new = {}
    for f, gf in zip(_FIELDS, _GRAD_FIELDS):
        g = getattr(grads, gf)
        m[f] = state.beta1 * m.get(f, np.zeros_like(g)) + (1 - state.beta1) * g
        v[f] = state.beta2 * v.get(f, np.zeros_like(g)) + (1 - state.beta2) * g**2
        m_hat = m[f] / (1 - state.beta1**t)
        v_hat = v[f] / (1 - state.beta2**t)
        new[f] = getattr(params, f) - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    state = replace(state, step_count=t, m=m, v=v)
    return replace(params, **_project(new)), state


def step(params: DqnnParams, grads: GradientRecord, state: OptimizerState):
    if state.kind == "sgd":
        return sgd_step(params, grads, state)
    return adam_step(params, grads, state)
