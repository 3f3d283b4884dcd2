"""Amplitude encoding of classical vectors into statevectors.

A d-dim input x with |x| > 0 maps to the (d+1)-slot amplitude pattern
(x_1, ..., x_d, xt, 0, ..., 0) / gamma with xt = |x|/(1+|x|) and
gamma = sqrt(|x|^2 + xt^2). The auxiliary slot makes the map injective on
any ring 0 < kappa1 <= |x| <= kappa2 and lets us recover x exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainViolationError, InvalidArgumentError, MalformedEncodingError
from .statevec import Statevector


@dataclass(frozen=True)
class RingDomainSpec:
    """Shift and ring bounds under which the encoding is well defined."""

    d: int
    shift: np.ndarray
    kappa1: float
    kappa2: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "shift", np.asarray(self.shift, dtype=float).reshape(-1))
        if not 0 < self.kappa1 <= self.kappa2:
            raise InvalidArgumentError(f"need 0 < kappa1 <= kappa2, got {self.kappa1}, {self.kappa2}")
        if self.shift.shape[0] != self.d:
            raise InvalidArgumentError("shift length must equal d")
        if 2**self.n < self.d + 1:
            raise InvalidArgumentError(f"2^{self.n} < {self.d}+1: not enough amplitudes")


@dataclass(frozen=True)
class EncodedInput:
    """An encoded state together with the original input dimension."""

    state: Statevector
    d: int


def shift_to_ring(x: np.ndarray, spec: RingDomainSpec, label: str = "sample") -> np.ndarray:
    """Shift x by spec.shift and verify the result lies in the ring."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != spec.d:
        raise InvalidArgumentError(f"input has dim {x.shape[0]}, spec.d = {spec.d}")
    shifted = x + spec.shift
    r = float(np.linalg.norm(shifted))
    if not spec.kappa1 <= r <= spec.kappa2:
        raise DomainViolationError(
            f"{label}: |x + shift| = {r:.6g} outside ring [{spec.kappa1}, {spec.kappa2}]"
        )
    return shifted


def amplitude_encode(x: np.ndarray, n: int) -> EncodedInput:
    """Encode x into n qubits with the auxiliary norm slot."""
    x = np.asarray(x, dtype=float).reshape(-1)
    d = x.shape[0]
    if 2**n < d + 1:
        raise InvalidArgumentError(f"2^{n} < {d}+1: not enough amplitudes")
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise InvalidArgumentError("amplitude encoding is undefined at the origin")
    xt = r / (1.0 + r)
    gamma = math.sqrt(r * r + xt * xt)
    amps = np.zeros(2**n, dtype=complex)
    amps[:d] = x / gamma
    amps[d] = xt / gamma
    return EncodedInput(Statevector(amps, n), d)


def amplitude_decode(e: EncodedInput) -> np.ndarray:
    """Recover the original x from an encoding (exact inversion)."""
    amps = e.state.amplitudes
    t = amps[e.d].real
    if t == 0.0:
        raise MalformedEncodingError("auxiliary slot is zero; not a valid encoding")
    head = amps[: e.d].real
    r_scaled = float(np.linalg.norm(head))
    r = r_scaled / t - 1.0
    gamma = r / r_scaled
    return gamma * head


def check_slot_bound(e: EncodedInput, kappa1: float, kappa2: float) -> bool:
    """Strict two-sided bound on the auxiliary slot implied by the ring."""
    t = float(e.state.amplitudes[e.d].real)
    lo = (1.0 + (1.0 + kappa2) ** 2) ** -0.5
    hi = (1.0 + (1.0 + kappa1) ** 2) ** -0.5
    return lo < t < hi
