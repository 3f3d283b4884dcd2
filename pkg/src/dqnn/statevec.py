"""Exact statevector simulation of the DQNN circuit.

Conventions fixed here and relied on everywhere else:
- qubit 0 is the most significant bit of the amplitude index
- RY(b) = [[cos(b/2), sin(b/2)], [-sin(b/2), cos(b/2)]]
- RZ(a) = diag(e^{ia/2}, e^{-ia/2})

The single-qubit gate G(t1, t2, t3) has determinant 1 and factors exactly
as RZ(t2+t3) RY(2*t1) RZ(t2-t3), so the trainable circuit binds its angle
slots natively as (RZ, RY, RZ) rotation angles. That keeps every trainable
parameter a plain rotation angle, for which the two-evaluation parameter
shift is exact (see grad).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

_NORM_TOL = 1e-12
_UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class Statevector:
    """Unit-norm complex amplitude vector of an n-qubit pure state."""

    amplitudes: np.ndarray
    n: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape[0] != 2**self.n:
            raise InvalidArgumentError(
                f"statevector of {self.n} qubits needs {2**self.n} amplitudes, got {amps.shape[0]}"
            )
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > 1e-9:
            raise InvalidArgumentError(f"statevector norm^2 = {norm2}, not 1")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def zero_state(n: int) -> Statevector:
    """|0...0> on n qubits."""
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    return Statevector(amps, n)


def from_amplitudes(amps: np.ndarray) -> Statevector:
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    n = int(round(math.log2(amps.shape[0])))
    return Statevector(amps, n)


# ---------------------------------------------------------------------------
# Gate matrices

def gate_matrix_g(theta1: float, theta2: float, theta3: float) -> np.ndarray:
    """The 2x2 single-qubit gate G(theta1, theta2, theta3)."""
    for t in (theta1, theta2, theta3):
        if not math.isfinite(t):
            raise InvalidArgumentError(f"non-finite gate angle {t!r}")
    c, s = math.cos(theta1), math.sin(theta1)
    e2, e3 = np.exp(1j * theta2), np.exp(1j * theta3)
    return np.array([[e2 * c, e3 * s], [-s / e3, c / e2]], dtype=complex)


def ry_matrix(b: float) -> np.ndarray:
    c, s = math.cos(b / 2), math.sin(b / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def rz_matrix(a: float) -> np.ndarray:
    e = np.exp(1j * a / 2)
    return np.array([[e, 0.0], [0.0, np.conj(e)]], dtype=complex)


def decompose_g_to_rotations(theta1: float, theta2: float, theta3: float):
    """Split G into RZ(a) RY(b) RZ(c) and a global phase.

    The factorization is exact: b = 2*theta1, a = theta2 + theta3,
    c = theta2 - theta3, phase 0. We additionally normalize b into
    [0, 2pi), absorbing the sign flip RY(b + 2pi) = -RY(b) into the phase.
    """
    for t in (theta1, theta2, theta3):
        if not math.isfinite(t):
            raise InvalidArgumentError(f"non-finite gate angle {t!r}")
    b_raw = 2.0 * theta1
    b = b_raw % (2.0 * math.pi)
    k = round((b_raw - b) / (2.0 * math.pi))
    phase = math.pi if (k % 2) else 0.0
    a = theta2 + theta3
    c = theta2 - theta3
    return a, b, c, phase


def _check_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidArgumentError(f"expected a 2x2 matrix, got shape {u.shape}")
    if np.max(np.abs(u @ u.conj().T - np.eye(2))) > _UNITARY_TOL:
        raise InvalidArgumentError("matrix is not unitary within 1e-10")
    return u


# ---------------------------------------------------------------------------
# Gate application (array kernels, batched over leading axes)

def _apply_1q_array(amps: np.ndarray, n: int, qubit: int, u: np.ndarray) -> np.ndarray:
    """Apply u to one qubit of amps; amps has shape (..., 2**n)."""
    lead = amps.shape[:-1]
    left = 2**qubit            # qubit 0 is MSB: `qubit` more-significant bits on its left
    right = 2 ** (n - qubit - 1)
    work = amps.reshape(lead + (left, 2, right))
    out = np.einsum("ab,...lbr->...lar", u, work)
    return np.ascontiguousarray(out.reshape(lead + (2**n,)))


def _apply_ctrl_array(
    amps: np.ndarray, n: int, control: int, target: int, u: np.ndarray
) -> np.ndarray:
    """Apply controlled-u; acts on the control=1 subspace only."""
    out = amps.copy()
    flat = out.reshape(-1, 2**n)
    idx = np.arange(2**n)
    mask = (idx >> (n - control - 1)) & 1 == 1
    sub = flat[:, mask]                      # control=1 block, 2**(n-1) columns
    # Within the block, the target bit keeps its relative position, shifted
    # left by one if it sat below the control bit.
    t_eff = target if target < control else target - 1
    left = 2**t_eff
    right = 2 ** (n - 2 - t_eff)
    work = sub.reshape(-1, left, 2, right)
    sub = np.einsum("ab,klbr->klar", u, work).reshape(-1, 2 ** (n - 1))
    flat[:, mask] = sub
    return out


def apply_single_qubit(state: Statevector, qubit: int, u: np.ndarray) -> Statevector:
    """Apply a unitary to one qubit, returning a new state."""
    if not 0 <= qubit < state.n:
        raise IndexError(f"qubit {qubit} out of range for n={state.n}")
    u = _check_unitary(u)
    return Statevector(_apply_1q_array(state.amplitudes, state.n, qubit, u), state.n)


def apply_controlled(state: Statevector, control: int, target: int, u: np.ndarray) -> Statevector:
    """Apply u to `target` on the control=1 subspace."""
    if control == target:
        raise InvalidArgumentError("control and target must differ")
    for q in (control, target):
        if not 0 <= q < state.n:
            raise IndexError(f"qubit {q} out of range for n={state.n}")
    u = _check_unitary(u)
    return Statevector(
        _apply_ctrl_array(state.amplitudes, state.n, control, target, u), state.n
    )


# ---------------------------------------------------------------------------
# Ansatz

@dataclass(frozen=True)
class GateSpec:
    """A gate template: kind, qubit wires and parameter-slot indices.

    kind "G"  -> slots (a, b, c) bound as RZ(a) RY(b) RZ(c) on one qubit
    kind "CG" -> same triple, controlled
    kind "RY"/"RZ" -> single slot, plain rotation
    """

    kind: str
    qubits: tuple
    slots: tuple

    def __post_init__(self):
        if self.kind not in ("G", "CG", "RY", "RZ"):
            raise InvalidArgumentError(f"unknown gate kind {self.kind!r}")
        want = 3 if self.kind in ("G", "CG") else 1
        if len(self.slots) != want:
            raise InvalidArgumentError(f"{self.kind} gate takes {want} slots")
        if self.kind == "CG" and self.qubits[0] == self.qubits[1]:
            raise InvalidArgumentError("control and target must differ")


@dataclass(frozen=True)
class CircuitAnsatz:
    """Layered gate layout with contiguous parameter slots."""

    n: int
    layers: int
    layout: tuple = field(default_factory=tuple)

    def __post_init__(self):
        slots = sorted(s for g in self.layout for s in g.slots)
        if slots != list(range(len(slots))):
            raise InvalidArgumentError("parameter slots must be the contiguous range 0..P-1")
        for g in self.layout:
            for q in g.qubits:
                if not 0 <= q < self.n:
                    raise InvalidArgumentError(f"qubit {q} invalid for n={self.n}")

    @property
    def n_params(self) -> int:
        return sum(len(g.slots) for g in self.layout)

    def controlled_slots(self) -> np.ndarray:
        """Boolean mask over slots: True where the slot drives a controlled rotation."""
        mask = np.zeros(self.n_params, dtype=bool)
        for g in self.layout:
            if g.kind == "CG":
                for s in g.slots:
                    mask[s] = True
        return mask


def build_ansatz(n: int, layers: int) -> CircuitAnsatz:
    """Per layer: a G template on every qubit, then a CG ring i -> (i+1) mod n.

    Total slot count is 6*n*layers for n >= 2 (3*layers for n = 1, where no
    two-qubit pair exists).
    """
    if n < 1 or layers < 1:
        raise InvalidArgumentError("need n >= 1 and layers >= 1")
    layout = []
    p = 0
    for _ in range(layers):
        for q in range(n):
            layout.append(GateSpec("G", (q,), (p, p + 1, p + 2)))
            p += 3
        if n >= 2:
            for q in range(n):
                layout.append(GateSpec("CG", (q, (q + 1) % n), (p, p + 1, p + 2)))
                p += 3
    return CircuitAnsatz(n, layers, tuple(layout))


def _bound_matrix(gate: GateSpec, theta: np.ndarray) -> np.ndarray:
    if gate.kind in ("G", "CG"):
        a, b, c = (theta[s] for s in gate.slots)
        return rz_matrix(a) @ ry_matrix(b) @ rz_matrix(c)
    if gate.kind == "RY":
        return ry_matrix(theta[gate.slots[0]])
    return rz_matrix(theta[gate.slots[0]])


def run_ansatz_array(amps: np.ndarray, ansatz: CircuitAnsatz, theta: np.ndarray) -> np.ndarray:
    """Batched ansatz run on raw amplitudes of shape (..., 2**n)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.n_params,):
        raise InvalidArgumentError(
            f"theta has shape {theta.shape}, ansatz expects ({ansatz.n_params},)"
        )
    for gate in ansatz.layout:
        u = _bound_matrix(gate, theta)
        if gate.kind in ("G", "RY", "RZ"):
            amps = _apply_1q_array(amps, ansatz.n, gate.qubits[0], u)
        else:
            amps = _apply_ctrl_array(amps, ansatz.n, gate.qubits[0], gate.qubits[1], u)
    return amps


def run_ansatz(state: Statevector, ansatz: CircuitAnsatz, theta: np.ndarray) -> Statevector:
    """Apply the full parameterized circuit to a state."""
    if state.n != ansatz.n:
        raise InvalidArgumentError(f"state has {state.n} qubits, ansatz {ansatz.n}")
    return Statevector(run_ansatz_array(state.amplitudes, ansatz, theta), ansatz.n)


def ansatz_unitary(ansatz: CircuitAnsatz, theta: np.ndarray) -> np.ndarray:
    """Dense 2**n x 2**n circuit matrix (test oracle; small n only)."""
    dim = 2**ansatz.n
    cols = run_ansatz_array(np.eye(dim, dtype=complex), ansatz, theta)
    return cols.T
