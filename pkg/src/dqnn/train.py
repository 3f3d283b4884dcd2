"""Loss, training loop and evaluation metrics."""
from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import InvalidArgumentError
from .grad import loss_gradient
from .model import DqnnParams, forward_array, predict_class
from .optim import OptimizerState, step

MRE_FLOOR = 1e-3


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 32
    optimizer: str = "adam"
    lr: float = 0.05
    seed: int = 0
    eval_every: int = 0          # 0 disables in-loop evaluation
    patience: int = 0            # 0 disables early stopping

    def __post_init__(self):
        if self.epochs < 1:
            raise InvalidArgumentError("epochs must be >= 1")
        if self.batch_size < 1:
            raise InvalidArgumentError("batch_size must be >= 1")


@dataclass
class RunHistory:
    losses: list = field(default_factory=list)
    metrics: list = field(default_factory=list)        # (epoch, value) pairs
    wall_clock: float = 0.0

    def to_csv(self, path):
        metric_at = dict(self.metrics)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "loss", "metric"])
            for i, loss in enumerate(self.losses):
                writer.writerow([i, repr(loss), repr(metric_at.get(i, ""))])

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(
                {"losses": self.losses, "metrics": self.metrics, "wall_clock": self.wall_clock},
                fh,
            )


def sse_loss(outputs: np.ndarray, targets: np.ndarray) -> float:
    """Sum over samples of the squared Euclidean output error."""
    outputs = np.atleast_2d(np.asarray(outputs, dtype=float))
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if outputs.shape != targets.shape:
        raise InvalidArgumentError(
            f"output shape {outputs.shape} != target shape {targets.shape}"
        )
    return float(np.sum((outputs - targets) ** 2))


def _batch_loss(amps, ys, params):
    _, _, outputs = forward_array(amps, params)
    return sse_loss(outputs, ys)


def train_model(params: DqnnParams, amps: np.ndarray, targets: np.ndarray,
                cfg: TrainConfig, metric_fn=None):
    """Mini-batch gradient descent; deterministic for a fixed config.

    `amps` are pre-encoded amplitudes (m, 2**n); `targets` is (m, K).
    Datasets smaller than 64 samples train full-batch. Returns
    (trained params, RunHistory).
    """
    m = amps.shape[0]
    if m == 0:
        raise InvalidArgumentError("empty dataset")
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    batch = m if m < 64 else min(cfg.batch_size, m)
    shuffler = rng.stream(cfg.seed, "batch-shuffle")
    state = OptimizerState(kind=cfg.optimizer, lr=cfg.lr)
    history = RunHistory()
    best = np.inf
    stale = 0
    t0 = time.perf_counter()
    for epoch in range(cfg.epochs):
        perm = shuffler.permutation(m)
        for start in range(0, m, batch):
            idx = perm[start : start + batch]
            grads = loss_gradient((amps[idx], targets[idx]), params)
            params, state = step(params, grads, state)
        loss = _batch_loss(amps, targets, params)
        history.losses.append(loss)
        if cfg.eval_every and metric_fn and (epoch + 1) % cfg.eval_every == 0:
            history.metrics.append((epoch, float(metric_fn(params))))
        if cfg.patience:
            if loss < best - 1e-12:
                best, stale = loss, 0
            else:
                stale += 1
                if stale >= cfg.patience:
                    break
    history.wall_clock = time.perf_counter() - t0
    return params, history


def eval_regression(params: DqnnParams, amps: np.ndarray, targets: np.ndarray) -> float:
    """Mean relative error |Q - y| / max(|y|, 1e-3) over scalar targets."""
    _, _, outputs = forward_array(amps, params)
    y = np.asarray(targets, dtype=float).reshape(-1)
    q = outputs[:, 0]
    return float(np.mean(np.abs(q - y) / np.maximum(np.abs(y), MRE_FLOOR)))


def eval_classification(params: DqnnParams, amps: np.ndarray, targets: np.ndarray) -> float:
    """Fraction of samples whose argmax output matches the one-hot target."""
    _, _, outputs = forward_array(amps, params)
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if targets.shape[1] < 2:
        raise InvalidArgumentError("classification needs one-hot targets")
    pred = np.argmax(outputs, axis=1)
    truth = np.argmax(targets, axis=1)
    return float(np.mean(pred == truth))
