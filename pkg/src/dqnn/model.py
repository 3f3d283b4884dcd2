"""DQNN forward pass: circuit expectations -> sigmoid nodes -> linear heads.

Each observable expectation feeds one parameterized sigmoid feature
sigma(a_i(<B_i> - c_i)); K independent weight rows combine the N features
into the outputs. Constraints a_i > 2 and c_i in [0, 1] are enforced by
projection after every optimizer step.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import expit

from . import rng
from .errors import InvalidArgumentError
from .observables import ObservableSet, PauliString, expectations_array
from .statevec import CircuitAnsatz, GateSpec, Statevector, run_ansatz_array

A_MIN = 2.0 + 1e-6
A_MAX = 50.0
_FEATURE_CEIL = np.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class DqnnParams:
    """Full trainable parameter record plus the fixed circuit/observables."""

    theta: np.ndarray          # circuit rotation angles, shape (P,)
    a: np.ndarray              # sigmoid sharpness, shape (N,), each > 2
    c: np.ndarray              # sigmoid centers, shape (N,), each in [0, 1]
    alpha: np.ndarray          # head weights, shape (K, N)
    observables: ObservableSet
    ansatz: CircuitAnsatz

    def __post_init__(self):
        object.__setattr__(self, "theta", np.asarray(self.theta, dtype=float).reshape(-1))
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float).reshape(-1))
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).reshape(-1))
        alpha = np.asarray(self.alpha, dtype=float)
        if alpha.ndim == 1:
            alpha = alpha[None, :]
        object.__setattr__(self, "alpha", alpha)
        N = len(self.observables)
        if self.theta.shape[0] != self.ansatz.n_params:
            raise InvalidArgumentError("theta length does not match ansatz")
        if self.a.shape[0] != N or self.c.shape[0] != N or self.alpha.shape[1] != N:
            raise InvalidArgumentError("a, c, alpha must have N columns")
        if np.any(self.a <= 2.0):
            raise InvalidArgumentError("sharpness a must exceed 2")
        if np.any((self.c < 0.0) | (self.c > 1.0)):
            raise InvalidArgumentError("centers c must lie in [0, 1]")

    @property
    def n_features(self) -> int:
        return len(self.observables)

    @property
    def n_heads(self) -> int:
        return self.alpha.shape[0]


@dataclass(frozen=True)
class ModelOutput:
    expectations: np.ndarray   # (N,)
    features: np.ndarray       # (N,), each strictly in (0, 1)
    outputs: np.ndarray        # (K,)


def project_params(params: DqnnParams) -> DqnnParams:
    """Clamp a into [2+1e-6, 50] and c into [0, 1]; idempotent."""
    return replace(
        params,
        a=np.clip(params.a, A_MIN, A_MAX),
        c=np.clip(params.c, 0.0, 1.0),
    )


def init_params(
    ansatz: CircuitAnsatz,
    observables: ObservableSet,
    n_heads: int,
    seed: int,
) -> DqnnParams:
    """Seeded initialization: theta ~ U[0, 2pi), a = 4, c = 0.5, alpha ~ U(-0.5, 0.5)."""
    gen = rng.stream(seed, "init")
    N = len(observables)
    return DqnnParams(
        theta=gen.uniform(0.0, 2.0 * np.pi, size=ansatz.n_params),
        a=np.full(N, 4.0),
        c=np.full(N, 0.5),
        alpha=gen.uniform(-0.5, 0.5, size=(n_heads, N)),
        observables=observables,
        ansatz=ansatz,
    )


def sigmoid_node(b: float, a: float, c: float) -> float:
    """sigma(a (b - c)); saturates smoothly, never overflows."""
    if not a > 2.0:
        raise InvalidArgumentError(f"sharpness a must exceed 2, got {a}")
    if not 0.0 <= c <= 1.0:
        raise InvalidArgumentError(f"center c must lie in [0, 1], got {c}")
    return float(_sigmoid(a * (b - c)))


def _sigmoid(z):
    # expit rounds to exactly 0.0/1.0 deep in the tails; nudge back inside
    # the open interval so features stay strictly in (0, 1).
    return np.clip(expit(z), 5e-324, _FEATURE_CEIL)


def features_from_expectations(expect: np.ndarray, params: DqnnParams) -> np.ndarray:
    return _sigmoid(params.a * (expect - params.c))


def forward_array(amps: np.ndarray, params: DqnnParams, theta: np.ndarray = None):
    """Batched forward pass on raw amplitudes (..., 2**n).

    Returns (expectations, features, outputs) with trailing axes (N,), (N,),
    (K,). `theta` overrides params.theta (used by the shift rule).
    """
    th = params.theta if theta is None else theta
    evolved = run_ansatz_array(amps, params.ansatz, th)
    expect = expectations_array(evolved, params.observables.strings)
    feats = features_from_expectations(expect, params)
    outputs = feats @ params.alpha.T
    return expect, feats, outputs


def forward(xbar: Statevector, params: DqnnParams) -> ModelOutput:
    """Run the circuit and classical readout on one encoded state."""
    if xbar.n != params.ansatz.n:
        raise InvalidArgumentError(
            f"state has {xbar.n} qubits, ansatz expects {params.ansatz.n}"
        )
    expect, feats, outputs = forward_array(xbar.amplitudes, params)
    return ModelOutput(expect, feats, outputs)


def predict_class(out: ModelOutput) -> int:
    """Argmax over heads; ties go to the lowest index."""
    if out.outputs.shape[0] < 2:
        raise InvalidArgumentError("classification needs at least 2 heads")
    return int(np.argmax(out.outputs))


# ---------------------------------------------------------------------------
# Checkpoint (de)serialization

def params_to_json(params: DqnnParams, extra: dict = None) -> str:
    doc = {
        "ansatz": {
            "n": params.ansatz.n,
            "layers": params.ansatz.layers,
            "layout": [
                {"kind": g.kind, "qubits": list(g.qubits), "slots": list(g.slots)}
                for g in params.ansatz.layout
            ],
        },
        "theta": params.theta.tolist(),
        "a": params.a.tolist(),
        "c": params.c.tolist(),
        "alpha": params.alpha.tolist(),
        "observables": {"words": params.observables.words, "seed": params.observables.seed},
        "constraints": {"a_min": A_MIN, "a_max": A_MAX, "c_min": 0.0, "c_max": 1.0},
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2)


def params_from_json(text: str) -> DqnnParams:
    doc = json.loads(text)
    az = doc["ansatz"]
    ansatz = CircuitAnsatz(
        az["n"],
        az["layers"],
        tuple(
            GateSpec(g["kind"], tuple(g["qubits"]), tuple(g["slots"]))
            for g in az["layout"]
        ),
    )
    obs = ObservableSet(
        tuple(PauliString(w) for w in doc["observables"]["words"]),
        doc["observables"]["seed"],
    )
    return DqnnParams(
        theta=np.array(doc["theta"]),
        a=np.array(doc["a"]),
        c=np.array(doc["c"]),
        alpha=np.array(doc["alpha"]),
        observables=obs,
        ansatz=ansatz,
    )
