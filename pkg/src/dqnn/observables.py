"""Pauli-string observables and exact expectation values.

Expectations are computed in O(2^n) per string by tracking the bit-flip
permutation (X/Y part) and the phase pattern (Z/Y part); the 2^n x 2^n
operator matrix is never materialized, which keeps long spin chains cheap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import InvalidArgumentError
from .statevec import Statevector

_LETTERS = "IXYZ"


@dataclass(frozen=True)
class PauliString:
    """A word over {I, X, Y, Z}; qubit 0 is the leftmost letter (MSB)."""

    word: str

    def __post_init__(self):
        if not self.word or any(ch not in _LETTERS for ch in self.word):
            raise InvalidArgumentError(f"bad Pauli word {self.word!r}")

    @property
    def n(self) -> int:
        return len(self.word)

    def masks(self) -> tuple:
        """(x_mask, z_mask, y_count): bit n-1-q corresponds to qubit q."""
        xm = zm = 0
        ny = 0
        for q, ch in enumerate(self.word):
            bit = 1 << (self.n - 1 - q)
            if ch in "XY":
                xm |= bit
            if ch in "ZY":
                zm |= bit
            if ch == "Y":
                ny += 1
        return xm, zm, ny


def apply_pauli_array(amps: np.ndarray, p: PauliString) -> np.ndarray:
    """P |psi> for amplitudes of shape (..., 2**n), without a dense matrix."""
    n = p.n
    xm, zm, ny = p.masks()
    idx = np.arange(2**n, dtype=np.uint64)
    src = idx ^ np.uint64(xm)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(zm)) % 2)
    phase = (-1j) ** ny
    return phase * signs * amps[..., src]


def expectation(state: Statevector, p: PauliString) -> float:
    """<psi| P |psi>, a real number in [-1, 1]."""
    if state.n != p.n:
        raise InvalidArgumentError(f"state has {state.n} qubits, word {p.n} letters")
    val = complex(np.vdot(state.amplitudes, apply_pauli_array(state.amplitudes, p)))
    assert abs(val.imag) < 1e-12
    return val.real


def expectations_array(amps: np.ndarray, strings) -> np.ndarray:
    """Batched expectations: amps (..., 2**n) -> (..., N)."""
    cols = [
        np.sum(np.conj(amps) * apply_pauli_array(amps, p), axis=-1).real for p in strings
    ]
    return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class ObservableSet:
    """Distinct non-identity Pauli strings plus the seed that produced them."""

    strings: tuple
    seed: int

    def __post_init__(self):
        words = [p.word for p in self.strings]
        if len(set(words)) != len(words):
            raise InvalidArgumentError("duplicate Pauli words in observable set")
        if any(set(w) == {"I"} for w in words):
            raise InvalidArgumentError("all-identity word is not allowed")

    def __len__(self) -> int:
        return len(self.strings)

    @property
    def words(self):
        return [p.word for p in self.strings]


def _word_from_index(k: int, n: int) -> str:
    digits = []
    for _ in range(n):
        digits.append(_LETTERS[k % 4])
        k //= 4
    return "".join(reversed(digits))


def sample_pauli_set(n: int, count: int, seed: int) -> ObservableSet:
    """Draw `count` distinct non-identity words uniformly, reproducibly.

    PRNG: numpy PCG64 keyed by (seed, "observables"); rejection sampling
    over the integer codes [1, 4^n) keeps the draw uniform without
    materializing the 4^n-element space.
    """
    if count < 1 or count > 4**n - 1:
        raise InvalidArgumentError(
            f"count must be in [1, {4**n - 1}] for n={n}, got {count}"
        )
    gen = rng.stream(seed, "observables")
    seen = set()
    words = []
    while len(words) < count:
        k = int(gen.integers(1, 4**n))
        if k not in seen:
            seen.add(k)
            words.append(_word_from_index(k, n))
    return ObservableSet(tuple(PauliString(w) for w in words), seed)
