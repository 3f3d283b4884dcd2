"""Pauli strings, fast expectation evaluation and observable sampling."""
import numpy as np
import pytest

from dqnn import observables as obs
from dqnn.errors import InvalidArgumentError
from dqnn.statevec import Statevector

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(word):
    full = PAULI[word[0]]
    for ch in word[1:]:
        full = np.kron(full, PAULI[ch])
    return full


def random_state(n, seed):
    gen = np.random.default_rng(seed)
    amps = gen.normal(size=2**n) + 1j * gen.normal(size=2**n)
    return Statevector(amps / np.linalg.norm(amps), n)


class TestPauliString:
    def test_word_validation(self):
        with pytest.raises(InvalidArgumentError):
            obs.PauliString("XQ")
        with pytest.raises(InvalidArgumentError):
            obs.PauliString("")

    def test_masks_single_qubit(self):
        assert obs.PauliString("X").masks() == (1, 0, 0)
        assert obs.PauliString("Z").masks() == (0, 1, 0)
        assert obs.PauliString("Y").masks() == (1, 1, 1)
        assert obs.PauliString("I").masks() == (0, 0, 0)

    def test_masks_msb_convention(self):
        # qubit 0 is the leftmost letter and the most significant bit
        assert obs.PauliString("XI").masks() == (2, 0, 0)
        assert obs.PauliString("IZ").masks() == (0, 1, 0)


class TestExpectation:
    @pytest.mark.parametrize("word,expected", [("Z", 1.0), ("X", 0.0), ("Y", 0.0)])
    def test_zero_state(self, word, expected):
        zero = Statevector(np.array([1.0, 0.0], dtype=complex), 1)
        assert obs.expectation(zero, obs.PauliString(word)) == pytest.approx(expected)

    def test_plus_state_x(self):
        plus = Statevector(np.array([1.0, 1.0], dtype=complex) / np.sqrt(2), 1)
        assert obs.expectation(plus, obs.PauliString("X")) == pytest.approx(1.0)

    def test_matches_dense_oracle(self):
        gen = np.random.default_rng(0)
        letters = np.array(list("IXYZ"))
        for n in [1, 2, 3, 4]:
            for trial in range(50):
                word = "".join(gen.choice(letters, size=n))
                psi = random_state(n, seed=n * 100 + trial)
                fast = obs.expectation(psi, obs.PauliString(word))
                dense = np.real(
                    psi.amplitudes.conj() @ dense_pauli(word) @ psi.amplitudes
                )
                assert abs(fast - dense) < 1e-12

    def test_result_is_real_and_bounded(self):
        gen = np.random.default_rng(5)
        letters = np.array(list("IXYZ"))
        for trial in range(200):
            word = "".join(gen.choice(letters, size=3))
            val = obs.expectation(random_state(3, seed=trial), obs.PauliString(word))
            assert isinstance(val, float)
            assert -1.0 - 1e-12 <= val <= 1.0 + 1e-12

    def test_length_mismatch_rejected(self):
        with pytest.raises(InvalidArgumentError):
            obs.expectation(random_state(2, seed=0), obs.PauliString("X"))


class TestExpectationsArray:
    def test_batched_matches_loop(self):
        words = [obs.PauliString(w) for w in ["XZ", "YY", "IZ", "XX"]]
        batch = np.stack([random_state(2, seed=s).amplitudes for s in range(6)])
        vals = obs.expectations_array(batch, words)
        assert vals.shape == (6, 4)
        for i in range(6):
            st = Statevector(batch[i], 2)
            for j, w in enumerate(words):
                assert vals[i, j] == pytest.approx(obs.expectation(st, w), abs=1e-12)


class TestObservableSet:
    def test_rejects_duplicates(self):
        with pytest.raises(InvalidArgumentError):
            obs.ObservableSet((obs.PauliString("XZ"), obs.PauliString("XZ")), seed=0)

    def test_rejects_identity(self):
        with pytest.raises(InvalidArgumentError):
            obs.ObservableSet((obs.PauliString("II"),), seed=0)

    def test_len_and_words(self):
        oset = obs.ObservableSet((obs.PauliString("XZ"), obs.PauliString("ZY")), seed=3)
        assert len(oset) == 2
        assert oset.words == ["XZ", "ZY"]


class TestSamplePauliSet:
    def test_deterministic(self):
        a = obs.sample_pauli_set(3, 5, seed=42)
        b = obs.sample_pauli_set(3, 5, seed=42)
        assert a.words == b.words

    def test_distinct_and_nontrivial(self):
        oset = obs.sample_pauli_set(2, 10, seed=0)
        assert len(set(oset.words)) == 10
        assert "II" not in oset.words

    def test_too_many_requested(self):
        with pytest.raises(InvalidArgumentError):
            obs.sample_pauli_set(1, 4, seed=0)  # only 3 non-identity words exist
