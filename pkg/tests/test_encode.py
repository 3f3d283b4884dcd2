"""Amplitude encoding: normalization trick, decode, ring shift, slot bound."""
import numpy as np
import pytest

from dqnn import encode
from dqnn.errors import DomainViolationError, InvalidArgumentError, MalformedEncodingError


def ring_points(d, kappa1, kappa2, count, seed):
    gen = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        x = gen.normal(size=d)
        x *= gen.uniform(kappa1, kappa2) / np.linalg.norm(x)
        pts.append(x)
    return pts


class TestAmplitudeEncode:
    def test_unit_input_example(self):
        # |x| = 1 gives slot value 1/2 and gamma = sqrt(5)/2
        enc = encode.amplitude_encode(np.array([1.0]), 1)
        gamma = np.sqrt(1.0 + 0.25)
        np.testing.assert_allclose(
            enc.state.amplitudes, [1.0 / gamma, 0.5 / gamma], atol=1e-15
        )

    def test_norm_is_one(self):
        for x in ring_points(3, 0.5, 2.0, 50, seed=2):
            enc = encode.amplitude_encode(x, 2)
            assert abs(np.linalg.norm(enc.state.amplitudes) - 1.0) < 1e-12

    def test_padding_slots_zero(self):
        enc = encode.amplitude_encode(np.array([0.3, 0.4]), 2)
        np.testing.assert_allclose(enc.state.amplitudes[3:], 0.0)

    def test_extra_slot_value(self):
        x = np.array([0.6, 0.8, 0.0])
        enc = encode.amplitude_encode(x, 2)
        r = 1.0
        xt = r / (1.0 + r)
        gamma = np.sqrt(r**2 + xt**2)
        assert enc.state.amplitudes[3].real == pytest.approx(xt / gamma)

    def test_zero_vector_rejected(self):
        with pytest.raises(InvalidArgumentError):
            encode.amplitude_encode(np.zeros(2), 2)

    def test_too_many_features_rejected(self):
        with pytest.raises(InvalidArgumentError):
            encode.amplitude_encode(np.ones(4), 2)  # d + 1 = 5 > 4


class TestAmplitudeDecode:
    def test_roundtrip_small(self):
        x = np.array([0.7, -1.1, 0.4])
        enc = encode.amplitude_encode(x, 2)
        back = encode.amplitude_decode(enc)
        np.testing.assert_allclose(back, x, atol=1e-12)

    def test_roundtrip_many_dims(self):
        gen = np.random.default_rng(11)
        for d in [1, 2, 3, 5, 7, 15]:
            n = int(np.ceil(np.log2(d + 1)))
            for _ in range(20):
                x = gen.normal(size=d) * gen.uniform(0.2, 3.0)
                back = encode.amplitude_decode(encode.amplitude_encode(x, n))
                np.testing.assert_allclose(back, x, atol=1e-10)

    def test_zero_extra_slot_rejected(self):
        amps = np.zeros(4, dtype=complex)
        amps[0] = 1.0
        bad = encode.EncodedInput(
            state=encode.Statevector(amps, 2), d=2
        )
        with pytest.raises(MalformedEncodingError):
            encode.amplitude_decode(bad)


class TestShiftToRing:
    def test_spec_construction(self):
        spec = encode.RingDomainSpec(d=2, shift=np.array([1.0, 1.0]),
                                     kappa1=0.2, kappa2=2.9, n=2)
        x = encode.shift_to_ring(np.array([0.0, 0.0]), spec)
        np.testing.assert_allclose(x, [1.0, 1.0])

    def test_out_of_ring_rejected(self):
        spec = encode.RingDomainSpec(d=2, shift=np.array([0.0, 0.0]),
                                     kappa1=0.5, kappa2=1.5, n=2)
        with pytest.raises(DomainViolationError):
            encode.shift_to_ring(np.array([0.1, 0.1]), spec)
        with pytest.raises(DomainViolationError):
            encode.shift_to_ring(np.array([3.0, 0.0]), spec)

    def test_bad_ring_rejected(self):
        with pytest.raises(InvalidArgumentError):
            encode.RingDomainSpec(d=2, shift=np.zeros(2), kappa1=1.5, kappa2=0.5, n=2)
        with pytest.raises(InvalidArgumentError):
            encode.RingDomainSpec(d=2, shift=np.zeros(2), kappa1=0.0, kappa2=1.0, n=2)


class TestSlotBound:
    def test_bound_holds_on_ring_samples(self):
        kappa1, kappa2 = 0.4, 2.5
        lo = (1.0 + (1.0 + kappa2) ** 2) ** -0.5
        hi = (1.0 + (1.0 + kappa1) ** 2) ** -0.5
        for x in ring_points(3, kappa1, kappa2, 300, seed=4):
            enc = encode.amplitude_encode(x, 2)
            slot = enc.state.amplitudes[3].real
            assert lo < slot < hi
            assert encode.check_slot_bound(enc, kappa1, kappa2)

    def test_violation_detected(self):
        # encode a point outside the ring, then check against the ring
        enc = encode.amplitude_encode(np.array([5.0, 0.0]), 2)
        assert not encode.check_slot_bound(enc, 0.5, 1.5)

    def test_bound_is_monotone_in_radius(self):
        rs = np.linspace(0.1, 4.0, 40)
        slots = []
        for r in rs:
            enc = encode.amplitude_encode(np.array([r, 0.0]), 2)
            slots.append(enc.state.amplitudes[2].real)
        assert np.all(np.diff(slots) < 0)
