"""Constructive numeric checks behind the universality argument.

The building block is a sigmoid bump sigma(a (|<x|xi>|^2 - c)) around a
unit direction xi. As a grows, the bump converges to the indicator of the
ball of radius delta1(c) = sqrt(2 (1 - sqrt(c))) around xi (for real unit
vectors), provided c exceeds a ring-dependent threshold. These functions
evaluate the bump, the radius, the chord/overlap identity and the
convergence behaviour on sampled encoded states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .encode import amplitude_encode
from .errors import InvalidArgumentError
from .model import _sigmoid


@dataclass(frozen=True)
class BumpFeature:
    """Rank-one observable direction with a sigmoid readout."""

    xi: np.ndarray
    a: float
    c: float

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float).reshape(-1)
        object.__setattr__(self, "xi", xi)
        if abs(np.linalg.norm(xi) - 1.0) > 1e-10:
            raise InvalidArgumentError("xi must be a unit vector")
        if not self.a > 2.0:
            raise InvalidArgumentError("sharpness a must exceed 2")
        if not 0.0 < self.c < 1.0:
            raise InvalidArgumentError("center c must lie in (0, 1)")


def bump_value(xbar: np.ndarray, f: BumpFeature) -> float:
    """sigma(a (|<xbar|xi>|^2 - c)) for a unit vector xbar."""
    xbar = np.asarray(xbar, dtype=float).reshape(-1)
    if abs(np.linalg.norm(xbar) - 1.0) > 1e-10:
        raise InvalidArgumentError("xbar must be a unit vector")
    overlap2 = float(np.dot(xbar, f.xi)) ** 2
    return float(_sigmoid(f.a * (overlap2 - f.c)))


def indicator_radius(c: float) -> float:
    """delta1 = sqrt(2 (1 - sqrt(c)))."""
    if not 0.0 < c < 1.0:
        raise InvalidArgumentError("c must lie in (0, 1)")
    return math.sqrt(2.0 * (1.0 - math.sqrt(c)))


def center_threshold(kappa2: float) -> float:
    """Smallest valid c for the indicator limit on a ring with outer radius kappa2."""
    return (1.0 - 2.0 / (1.0 + (1.0 + kappa2) ** 2)) ** 2


def chord_overlap_identity_check(xbar: np.ndarray, xi: np.ndarray) -> float:
    """Residual of |x - xi|^2 = 2 - 2 <x|xi> for real unit vectors."""
    xbar = np.asarray(xbar, dtype=float).reshape(-1)
    xi = np.asarray(xi, dtype=float).reshape(-1)
    lhs = float(np.sum((xbar - xi) ** 2))
    rhs = 2.0 - 2.0 * float(np.dot(xbar, xi))
    return abs(lhs - rhs)


def sample_ring_states(d: int, n: int, kappa1: float, kappa2: float,
                       count: int, seed: int, around: np.ndarray = None,
                       spread: float = 0.0) -> np.ndarray:
    """Encoded states of random ring points, rows of shape (count, 2**n).

    With `around`/`spread` set, points are normal perturbations of a given
    ring point (resampled until they land in the ring), which concentrates
    samples near a chosen encoded direction.
    """
    if around is not None:
        r0 = float(np.linalg.norm(np.asarray(around, dtype=float)))
        if not kappa1 <= r0 <= kappa2:
            raise InvalidArgumentError(
                f"perturbation center norm {r0:.6g} lies outside the ring "
                f"[{kappa1}, {kappa2}]"
            )
    gen = rng.stream(seed, "ring-samples")
    rows = []
    attempts = 0
    max_attempts = 1000 * count
    while len(rows) < count:
        attempts += 1
        if attempts > max_attempts:
            raise InvalidArgumentError(
                "ring rejection sampling stalled; widen the ring or lower spread"
            )
        if around is not None:
            x = np.asarray(around, dtype=float) + gen.normal(0.0, spread, size=d)
        else:
            x = gen.normal(0.0, 1.0, size=d)
            x *= gen.uniform(kappa1, kappa2) / np.linalg.norm(x)
        r = np.linalg.norm(x)
        if not kappa1 <= r <= kappa2:
            continue
        rows.append(amplitude_encode(x, n).state.amplitudes.real)
    return np.stack(rows)


def check_indicator_convergence(xi: np.ndarray, c: float, a_sequence,
                                samples: np.ndarray, kappa2: float) -> dict:
    """Inside/outside deviation of the bump from the ball indicator.

    For each sharpness a, reports max |bump - 1| over samples within
    0.5*delta1 of xi and max |bump| over samples beyond 1.5*delta1.
    Requires c above the ring threshold.
    """
    thresh = center_threshold(kappa2)
    if not c > thresh:
        raise InvalidArgumentError(
            f"c = {c} must exceed the ring threshold {thresh:.6f} for kappa2 = {kappa2}"
        )
    xi = np.asarray(xi, dtype=float).reshape(-1)
    delta1 = indicator_radius(c)
    dist = np.linalg.norm(samples - xi, axis=1)
    inside = samples[dist <= 0.5 * delta1]
    outside = samples[dist >= 1.5 * delta1]
    if len(inside) == 0 or len(outside) == 0:
        raise InvalidArgumentError("need samples on both sides of the indicator ball")
    overlap2_in = (inside @ xi) ** 2
    overlap2_out = (outside @ xi) ** 2
    report = {"delta1": delta1, "c": c, "threshold": thresh, "rows": []}
    for a in a_sequence:
        dev_in = float(np.max(np.abs(_sigmoid(a * (overlap2_in - c)) - 1.0)))
        dev_out = float(np.max(np.abs(_sigmoid(a * (overlap2_out - c)))))
        report["rows"].append({"a": float(a), "inside_dev": dev_in, "outside_dev": dev_out})
    return report


def outer_branch_violations(samples: np.ndarray, xi: np.ndarray, c: float) -> int:
    """Count samples with |x - xi|^2 > 2 (1 + sqrt(c)) (none should exist)."""
    xi = np.asarray(xi, dtype=float).reshape(-1)
    d2 = np.sum((samples - xi) ** 2, axis=1)
    return int(np.sum(d2 > 2.0 * (1.0 + math.sqrt(c))))


def bump_least_squares_demo(n_features: int = 8) -> dict:
    """Fit a two-bump 1-D target with bump features and least-squares weights.

    Inputs live on the ring [0.5, 2.0] in one dimension; the target is a
    smooth pair of humps. Returns the achieved max error over the sample
    grid. A concrete finite-feature instance of the approximation claim.
    """
    kappa1, kappa2 = 0.5, 2.0
    xs = np.linspace(kappa1, kappa2, 160)
    target = np.exp(-((xs - 0.85) ** 2) / (2 * 0.15**2)) + 0.7 * np.exp(
        -((xs - 1.55) ** 2) / (2 * 0.25**2)
    )
    states = np.stack([amplitude_encode(np.array([x]), 1).state.amplitudes.real for x in xs])
    centers = np.linspace(kappa1 + 0.05, kappa2 - 0.05, n_features)
    feats = []
    for x0 in centers:
        xi = amplitude_encode(np.array([x0]), 1).state.amplitudes.real
        overlap2 = (states @ xi) ** 2
        feats.append(_sigmoid(80.0 * (overlap2 - 0.999)))
    design = np.stack(feats, axis=1)
    weights, *_ = np.linalg.lstsq(design, target, rcond=None)
    fitted = design @ weights
    return {
        "n_features": n_features,
        "max_error": float(np.max(np.abs(fitted - target))),
        "weights": weights.tolist(),
    }
