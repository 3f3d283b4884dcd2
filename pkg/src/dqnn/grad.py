"""Gradients of the model output and of the training loss.

Circuit-angle gradients use the parameter-shift rule. Every trainable
circuit parameter is a plain rotation angle (see statevec), so:

- single-qubit rotation slots: the exact two-evaluation rule
  dE/dt = (E(t + pi/2) - E(t - pi/2)) / 2
- controlled-rotation slots: the generator has eigenvalues {0, +-1/2},
  which introduces a half-frequency component the two-evaluation rule
  cannot capture; the exact four-evaluation rule with shifts pi/2 and
  3*pi/2 is used instead.

Classical parameters (a, c, alpha) use the closed-form sigmoid chain. A
central finite-difference oracle over every scalar parameter backs both
paths in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .model import DqnnParams, features_from_expectations, forward_array
from .observables import expectations_array
from .statevec import Statevector, run_ansatz_array

# Four-evaluation shift coefficients: solve c1*2sin(w*pi/2) + c2*2sin(w*3pi/2) = w
# for the two frequencies w in {1/2, 1} of a controlled rotation.
_C1 = (math.sqrt(2.0) + 1.0) / (4.0 * math.sqrt(2.0))
_C2 = (math.sqrt(2.0) - 1.0) / (4.0 * math.sqrt(2.0))


@dataclass(frozen=True)
class GradientRecord:
    """Loss gradient with shapes mirroring DqnnParams."""

    dtheta: np.ndarray   # (P,)
    da: np.ndarray       # (N,)
    dc: np.ndarray       # (N,)
    dalpha: np.ndarray   # (K, N)


def _as_amps(x) -> np.ndarray:
    return x.amplitudes if isinstance(x, Statevector) else np.asarray(x, dtype=complex)


def _expect_at(amps: np.ndarray, params: DqnnParams, theta: np.ndarray) -> np.ndarray:
    evolved = run_ansatz_array(amps, params.ansatz, theta)
    return expectations_array(evolved, params.observables.strings)


def shifted_expectations(xbar, params: DqnnParams, j: int, shift: float = math.pi / 2):
    """Expectations with theta_j shifted by +shift and -shift."""
    if not 0 <= j < params.theta.shape[0]:
        raise IndexError(f"theta index {j} out of range")
    amps = _as_amps(xbar)
    plus = params.theta.copy()
    minus = params.theta.copy()
    plus[j] += shift
    minus[j] -= shift
    return _expect_at(amps, params, plus), _expect_at(amps, params, minus)


def expectation_derivatives(xbar, params: DqnnParams) -> np.ndarray:
    """d<B_i>/d theta_j via parameter shift; shape (..., P, N)."""
    amps = _as_amps(xbar)
    ctrl = params.ansatz.controlled_slots()
    rows = []
    for j in range(params.theta.shape[0]):
        ep, em = shifted_expectations(amps, params, j)
        d = 0.5 * (ep - em)
        if ctrl[j]:
            ep3, em3 = shifted_expectations(amps, params, j, shift=1.5 * math.pi)
            d = _C1 * (ep - em) - _C2 * (ep3 - em3)
        rows.append(d)
    return np.stack(rows, axis=-2)


def grad_theta(xbar, params: DqnnParams) -> np.ndarray:
    """dQ_k/d theta: shape (P,) for a single head, else (K, P)."""
    amps = _as_amps(xbar)
    expect, feats, _ = forward_array(amps, params)
    d_expect = expectation_derivatives(amps, params)            # (..., P, N)
    sig_chain = params.a * feats * (1.0 - feats)                # (..., N)
    # dQ_k/dtheta_j = sum_i alpha_ki * a_i * sig_i (1 - sig_i) * dE_ji
    g = np.einsum("...pn,...n,kn->...kp", d_expect, sig_chain, params.alpha)
    if params.n_heads == 1:
        return g[..., 0, :]
    return g


def grad_classical(xbar, params: DqnnParams):
    """(dQ_k/da_j, dQ_k/dc_j, dQ_k/dalpha_kj), each of shape (..., K, N)."""
    amps = _as_amps(xbar)
    expect, feats, _ = forward_array(amps, params)
    sp = feats * (1.0 - feats)                                  # (..., N)
    da = params.alpha * (sp * (expect - params.c))[..., None, :]
    dc = -params.alpha * (sp * params.a)[..., None, :]
    dalpha = np.broadcast_to(
        feats[..., None, :], feats.shape[:-1] + (params.n_heads, params.n_features)
    ).copy()
    return da, dc, dalpha


def stack_states(batch) -> tuple:
    """Split a sequence of (state, y) pairs into (amps_matrix, target_matrix)."""
    amps = np.stack([_as_amps(s) for s, _ in batch])
    ys = np.stack([np.atleast_1d(np.asarray(y, dtype=float)) for _, y in batch])
    return amps, ys


def loss_gradient(batch, params: DqnnParams) -> GradientRecord:
    """Gradient of the sum-of-squared-errors loss over a batch.

    `batch` is a sequence of (state, target) pairs or a pre-stacked
    (amps (m, 2^n), targets (m, K)) tuple. Accumulation over samples is a
    fixed-order vectorized sum, so results are bit-reproducible.
    """
    if isinstance(batch, tuple) and len(batch) == 2:
        amps, ys = batch
    else:
        if len(batch) == 0:
            raise InvalidArgumentError("empty batch")
        amps, ys = stack_states(batch)
    if amps.shape[0] == 0:
        raise InvalidArgumentError("empty batch")

    expect, feats, outputs = forward_array(amps, params)        # (m, N), (m, N), (m, K)
    resid = 2.0 * (outputs - ys)                                # dL/dQ, (m, K)
    sp = feats * (1.0 - feats)

    d_expect = expectation_derivatives(amps, params)            # (m, P, N)
    w = resid @ params.alpha                                    # (m, N): sum_k resid_k alpha_ki
    dtheta = np.einsum("mpn,mn->p", d_expect, params.a * sp * w)
    da = np.einsum("mk,kn,mn->n", resid, params.alpha, sp * (expect - params.c))
    dc = -np.einsum("mk,kn,mn->n", resid, params.alpha, sp) * params.a
    dalpha = resid.T @ feats                                    # (K, N)
    return GradientRecord(dtheta, da, dc, dalpha)


# ---------------------------------------------------------------------------
# Finite-difference oracle

def _loss_raw(amps, ys, params: DqnnParams, theta, a, c, alpha) -> float:
    """SSE loss from raw parameter arrays, bypassing constraint validation."""
    evolved = run_ansatz_array(amps, params.ansatz, theta)
    expect = expectations_array(evolved, params.observables.strings)
    feats = 1.0 / (1.0 + np.exp(-a * (expect - c)))
    outputs = feats @ alpha.T
    return float(np.sum((outputs - ys) ** 2))


def fd_loss_gradient(batch, params: DqnnParams, h: float = 1e-5) -> GradientRecord:
    """Central finite differences of the SSE loss on every scalar parameter."""
    if not 1e-7 <= h <= 1e-3:
        raise InvalidArgumentError(f"step h={h} outside [1e-7, 1e-3]")
    if isinstance(batch, tuple) and len(batch) == 2:
        amps, ys = batch
    else:
        amps, ys = stack_states(batch)

    arrays = {
        "theta": params.theta.copy(),
        "a": params.a.copy(),
        "c": params.c.copy(),
        "alpha": params.alpha.copy(),
    }

    def objective():
        return _loss_raw(amps, ys, params, arrays["theta"], arrays["a"], arrays["c"], arrays["alpha"])

    grads = {}
    for name, arr in arrays.items():
        g = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gflat = g.reshape(-1)
        for i in range(flat.shape[0]):
            orig = flat[i]
            flat[i] = orig + h
            fp = objective()
            flat[i] = orig - h
            fm = objective()
            flat[i] = orig
            gflat[i] = (fp - fm) / (2.0 * h)
        grads[name] = g
    return GradientRecord(grads["theta"], grads["a"], grads["c"], grads["alpha"])


def fd_gradient_oracle(xbar, params: DqnnParams, h: float = 1e-5) -> GradientRecord:
    """FD gradient of the scalar output Q (first head) for one state."""
    amps = _as_amps(xbar)[None, :]
    if not 1e-7 <= h <= 1e-3:
        raise InvalidArgumentError(f"step h={h} outside [1e-7, 1e-3]")

    arrays = {
        "theta": params.theta.copy(),
        "a": params.a.copy(),
        "c": params.c.copy(),
        "alpha": params.alpha.copy(),
    }

    def q_value():
        evolved = run_ansatz_array(amps, params.ansatz, arrays["theta"])
        expect = expectations_array(evolved, params.observables.strings)
        feats = 1.0 / (1.0 + np.exp(-arrays["a"] * (expect - arrays["c"])))
        return float((feats @ arrays["alpha"].T)[0, 0])

    grads = {}
    for name, arr in arrays.items():
        g = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gflat = g.reshape(-1)
        for i in range(flat.shape[0]):
            orig = flat[i]
            flat[i] = orig + h
            fp = q_value()
            flat[i] = orig - h
            fm = q_value()
            flat[i] = orig
            gflat[i] = (fp - fm) / (2.0 * h)
        grads[name] = g
    return GradientRecord(grads["theta"], grads["a"], grads["c"], grads["alpha"])


def gradient_agreement(analytic: GradientRecord, fd: GradientRecord,
                       rtol: float = 1e-6, afloor: float = 1e-9) -> dict:
    """Compare two gradient records: pass iff |a - f| <= rtol*|f| + afloor everywhere."""
    max_abs = 0.0
    max_rel = 0.0
    ok = True
    for name in ("dtheta", "da", "dc", "dalpha"):
        av = getattr(analytic, name).reshape(-1)
        fv = getattr(fd, name).reshape(-1)
        diff = np.abs(av - fv)
        ok = ok and bool(np.all(diff <= rtol * np.abs(fv) + afloor))
        max_abs = max(max_abs, float(diff.max(initial=0.0)))
        big = np.abs(fv) > 1e-6
        if np.any(big):
            max_rel = max(max_rel, float((diff[big] / np.abs(fv[big])).max()))
    return {"pass": ok, "max_abs_err": max_abs, "max_rel_err": max_rel}
