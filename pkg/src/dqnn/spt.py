"""Cluster-model spin chain: Hamiltonian, ground states and phase labels.

H = -J sum Z_i X_{i+1} Z_{i+2} - h1 sum X_i - h2 sum X_i X_{i+1}
(open boundaries). Ground states over an (h1, h2) grid form the quantum
phase recognition dataset; the ground truth label comes from the string
order parameter Z Y X ... X Y Z, whose magnitude is close to 1 throughout
the symmetry-protected phase and close to 0 outside it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .data import Dataset, Sample
from .errors import InvalidArgumentError, SolverError
from .observables import PauliString, expectation
from .statevec import Statevector

_X = sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=float))
_Z = sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=float))

DENSE_LIMIT = 10     # dense eigensolve up to this many spins
SIZE_LIMIT = 14


@dataclass(frozen=True)
class SptSpec:
    n_spins: int
    j: float = 1.0
    h1: float = 0.0
    h2: float = 0.0

    def __post_init__(self):
        if self.n_spins < 4 or self.n_spins % 2 != 0:
            raise InvalidArgumentError("n_spins must be even and >= 4")
        if self.j < 0:
            raise InvalidArgumentError("J must be non-negative")


def _site_op(op, site: int, n: int):
    left = sp.identity(2**site, format="csr")
    right = sp.identity(2 ** (n - site - 1), format="csr")
    return sp.kron(sp.kron(left, op), right, format="csr")


def spt_hamiltonian(spec: SptSpec):
    """Sparse Hermitian Hamiltonian (2^n x 2^n)."""
    n = spec.n_spins
    if n > SIZE_LIMIT:
        raise InvalidArgumentError(f"n_spins {n} exceeds the supported limit {SIZE_LIMIT}")
    dim = 2**n
    h = sp.csr_matrix((dim, dim))
    for i in range(n - 2):
        h = h - spec.j * (_site_op(_Z, i, n) @ _site_op(_X, i + 1, n) @ _site_op(_Z, i + 2, n))
    for i in range(n):
        h = h - spec.h1 * _site_op(_X, i, n)
    for i in range(n - 1):
        h = h - spec.h2 * (_site_op(_X, i, n) @ _site_op(_X, i + 1, n))
    return h


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(vec)))
    phase = vec[k] / abs(vec[k])
    return vec / phase


def spt_ground_state(spec: SptSpec) -> tuple:
    """(ground state, energy). Dense eigensolve for small chains, Lanczos above.

    The global phase is fixed so the largest-magnitude amplitude is real
    positive, making degenerate points reproducible.
    """
    h = spt_hamiltonian(spec)
    n = spec.n_spins
    if n <= DENSE_LIMIT:
        evals, evecs = np.linalg.eigh(h.toarray())
        energy = float(evals[0])
        vec = evecs[:, 0].astype(complex)
    else:
        try:
            evals, evecs = spla.eigsh(h, k=1, which="SA")
        except spla.ArpackNoConvergence as exc:
            raise SolverError(f"Lanczos did not converge for {spec}") from exc
        energy = float(evals[0])
        vec = evecs[:, 0].astype(complex)
    vec = _fix_phase(vec / np.linalg.norm(vec))
    resid = float(np.linalg.norm(h @ vec - energy * vec))
    if resid > 1e-8:
        raise SolverError(f"eigenpair residual {resid:.3e} exceeds 1e-8 for {spec}")
    return Statevector(vec, n), energy


def string_order_word(n_spins: int) -> PauliString:
    return PauliString("ZY" + "X" * (n_spins - 4) + "YZ")


def string_order(state: Statevector, n_spins: int) -> float:
    """|<psi| Z Y X ... X Y Z |psi>|."""
    if state.n != n_spins:
        raise InvalidArgumentError("state size does not match n_spins")
    return abs(expectation(state, string_order_word(n_spins)))


def string_order_label(state: Statevector, n_spins: int) -> np.ndarray:
    """[1, 0] iff the string order parameter exceeds 0.5, else [0, 1]."""
    s = string_order(state, n_spins)
    return np.array([1.0, 0.0]) if s > 0.5 else np.array([0.0, 1.0])


def gen_spt_grid(n_spins: int, j: float, h1_range, h2_range,
                 h1_count: int, h2_count: int) -> Dataset:
    """Equally spaced (h1, h2) grid of labeled ground states."""
    if h1_count < 1 or h2_count < 1:
        raise InvalidArgumentError("grid counts must be >= 1")
    h1s = np.linspace(h1_range[0], h1_range[1], h1_count)
    h2s = np.linspace(h2_range[0], h2_range[1], h2_count)
    samples = []
    for h1 in h1s:
        for h2 in h2s:
            spec = SptSpec(n_spins, j, float(h1), float(h2))
            state, energy = spt_ground_state(spec)
            y = string_order_label(state, n_spins)
            samples.append(
                Sample(y=y, state=state, meta={"h1": float(h1), "h2": float(h2), "energy": energy})
            )
    return Dataset(samples)


def export_states(prefix, dataset: Dataset, spec_info: dict):
    """Binary export: interleaved little-endian float64 (re, im) rows + JSON sidecar."""
    states = [s.state for s in dataset.samples]
    dim = states[0].amplitudes.shape[0]
    flat = np.empty((len(states), 2 * dim))
    for i, st in enumerate(states):
        flat[i, 0::2] = st.amplitudes.real
        flat[i, 1::2] = st.amplitudes.imag
    bin_path = f"{prefix}.f64"
    flat.astype("<f8").tofile(bin_path)
    sidecar = {
        "shape": [len(states), dim],
        "layout": "interleaved re/im, little-endian float64",
        "labels": [s.y.tolist() for s in dataset.samples],
        "grid": [s.meta for s in dataset.samples],
        "spec": spec_info,
    }
    with open(f"{prefix}.json", "w") as fh:
        json.dump(sidecar, fh, indent=2)
    return bin_path, f"{prefix}.json"


def import_states(prefix) -> Dataset:
    with open(f"{prefix}.json") as fh:
        sidecar = json.load(fh)
    m, dim = sidecar["shape"]
    flat = np.fromfile(f"{prefix}.f64", dtype="<f8").reshape(m, 2 * dim)
    samples = []
    for i in range(m):
        amps = flat[i, 0::2] + 1j * flat[i, 1::2]
        samples.append(
            Sample(
                y=np.array(sidecar["labels"][i]),
                state=Statevector(amps, int(np.log2(dim))),
                meta=sidecar["grid"][i],
            )
        )
    return Dataset(samples)
