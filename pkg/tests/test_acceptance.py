"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Each test prints a single summary line of the form
"ACCEPTANCE <k> <name>: PASS/FAIL (<measurements>)". The lines are also
collected by the conftest terminal-summary hook so the full record appears
at the end of every pytest run, with or without -s.
"""
import os
import time

import numpy as np
import pytest

from dqnn import grad, model, train
from dqnn.complexity import circuit_cost
from dqnn.data import (
    CsvSchema,
    gen_donut,
    gen_regression,
    gen_synthetic_digits,
    load_csv_dataset,
    load_idx_images,
    prepare_xy_dataset,
    write_idx_images,
    write_idx_labels,
)
from dqnn.cli import _ring_shift_images
from dqnn.encode import amplitude_decode, amplitude_encode, check_slot_bound
from dqnn.observables import sample_pauli_set
from dqnn.rng import stream
from dqnn.spt import SptSpec, gen_spt_grid, spt_ground_state, string_order
from dqnn.statevec import (
    Statevector,
    apply_controlled,
    apply_single_qubit,
    build_ansatz,
    gate_matrix_g,
    run_ansatz,
)
from dqnn.universality import (
    bump_least_squares_demo,
    check_indicator_convergence,
    chord_overlap_identity_check,
    indicator_radius,
    sample_ring_states,
)

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

# training lengths for the two larger runs, pinned from measured runs that
# passed with margin (digits: accuracy 1.000 in ~5 min; spin grid: 0.975
# in ~4 min including ground-state generation)
EPOCHS_DIGITS = 30
EPOCHS_QPR = 60

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def report(k, name, ok, detail):
    line = f"ACCEPTANCE {k} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    from conftest import ACCEPTANCE_LINES
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def ring_point(gen, d):
    x = gen.normal(size=d)
    return x * gen.uniform(0.5, 1.5) / np.linalg.norm(x)


class TestCriterion1GradientCorrectness:
    def test_analytic_matches_finite_differences(self):
        t0 = time.perf_counter()
        worst_rel = 0.0
        ok = True
        for n in (1, 2, 3, 4):
            for inst in range(20):
                seed = 1000 * n + inst
                gen = stream(seed, "acceptance-grad")
                ansatz = build_ansatz(n, 1)
                obs = sample_pauli_set(n, min(4, 4**n - 1), seed)
                params = model.init_params(ansatz, obs, 1, seed)
                d = max(1, 2**n - 1)
                amps = np.stack([
                    amplitude_encode(ring_point(gen, d), n).state.amplitudes
                    for _ in range(3)
                ])
                ys = gen.uniform(0.0, 1.0, size=(3, 1))
                analytic = grad.loss_gradient((amps, ys), params)
                fd = grad.fd_loss_gradient((amps, ys), params, h=1e-5)
                rep = grad.gradient_agreement(analytic, fd, rtol=1e-6, afloor=1e-9)
                ok = ok and rep["pass"]
                worst_rel = max(worst_rel, rep["max_rel_err"])
        elapsed = time.perf_counter() - t0
        ok = ok and elapsed < 60.0
        report(1, "gradient-correctness", ok,
               f"n in 1..4, 20 instances each, max rel err {worst_rel:.3e}, "
               f"{elapsed:.1f}s")


class TestCriterion2SimulatorCorrectness:
    def test_dense_oracle_and_norms(self):
        t0 = time.perf_counter()
        gen = np.random.default_rng(20)
        worst = 0.0
        # dense-matrix oracle for every gate application at n <= 3
        for n in (1, 2, 3):
            for _ in range(60):
                amps = gen.normal(size=2**n) + 1j * gen.normal(size=2**n)
                st = Statevector(amps / np.linalg.norm(amps), n)
                u = gate_matrix_g(*gen.uniform(-5, 5, 3))
                q = int(gen.integers(n))
                ops = [np.eye(2, dtype=complex)] * n
                ops[q] = u
                full = ops[0]
                for op in ops[1:]:
                    full = np.kron(full, op)
                got = apply_single_qubit(st, q, u).amplitudes
                worst = max(worst, float(np.max(np.abs(got - full @ st.amplitudes))))
                if n >= 2:
                    c = int(gen.integers(n))
                    t = int((c + 1 + gen.integers(n - 1)) % n)
                    p0 = np.diag([1.0, 0.0]).astype(complex)
                    p1 = np.diag([0.0, 1.0]).astype(complex)
                    ops0 = [np.eye(2, dtype=complex)] * n
                    ops0[c] = p0
                    ops1 = [np.eye(2, dtype=complex)] * n
                    ops1[c] = p1
                    ops1[t] = u
                    f0, f1 = ops0[0], ops1[0]
                    for a, b in zip(ops0[1:], ops1[1:]):
                        f0 = np.kron(f0, a)
                        f1 = np.kron(f1, b)
                    got = apply_controlled(st, c, t, u).amplitudes
                    worst = max(
                        worst, float(np.max(np.abs(got - (f0 + f1) @ st.amplitudes)))
                    )
        # norm preservation over 10^4 random circuits
        worst_norm = 0.0
        ansatz_cache = {n: build_ansatz(n, 1) for n in (1, 2, 3)}
        for k in range(10_000):
            n = int(gen.integers(1, 4))
            ansatz = ansatz_cache[n]
            amps = gen.normal(size=2**n) + 1j * gen.normal(size=2**n)
            st = Statevector(amps / np.linalg.norm(amps), n)
            theta = gen.uniform(-np.pi, np.pi, ansatz.n_params)
            out = run_ansatz(st, ansatz, theta)
            worst_norm = max(worst_norm, abs(out.norm - 1.0))
        elapsed = time.perf_counter() - t0
        ok = worst < 1e-10 and worst_norm < 1e-10 and elapsed < 60.0
        report(2, "simulator-correctness", ok,
               f"dense oracle err {worst:.2e}, norm err {worst_norm:.2e} over "
               f"1e4 circuits, {elapsed:.1f}s")


class TestCriterion3Encoding:
    def test_roundtrip_and_slot_bound(self):
        gen = np.random.default_rng(30)
        kappa1, kappa2 = 0.5, 2.0
        worst = 0.0
        bound_ok = True
        for _ in range(1000):
            d = int(gen.integers(1, 8))
            n = max(1, int(np.ceil(np.log2(d + 1))))
            x = gen.normal(size=d)
            x *= gen.uniform(kappa1, kappa2) / np.linalg.norm(x)
            enc = amplitude_encode(x, n)
            back = amplitude_decode(enc)
            worst = max(worst, float(np.max(np.abs(back - x))))
            bound_ok = bound_ok and check_slot_bound(enc, kappa1, kappa2)
        ok = worst < 1e-10 and bound_ok
        report(3, "encoding-roundtrip", ok,
               f"1000 ring samples, max roundtrip err {worst:.2e}, "
               f"slot bound {'held' if bound_ok else 'violated'}")


class TestCriterion4Regression:
    def test_mean_relative_error(self):
        t0 = time.perf_counter()
        ds = gen_regression(400, seed=1)
        prep = prepare_xy_dataset(ds, 2)
        amps, ys = prep.encoded_amplitudes(2), prep.targets()
        ansatz = build_ansatz(2, 1)
        obs = sample_pauli_set(2, 5, seed=7)
        params = model.init_params(ansatz, obs, 1, seed=7)
        cfg = train.TrainConfig(epochs=800, batch_size=32, optimizer="adam",
                                lr=0.02, seed=7)
        params, hist = train.train_model(params, amps, ys, cfg)
        mre = train.eval_regression(params, amps, ys)
        elapsed = time.perf_counter() - t0
        ok = mre <= 0.10 and hist.losses[-1] < hist.losses[0] and elapsed < 600.0
        report(4, "regression", ok,
               f"n=2 L=1 N=5 m=400 adam, MRE {mre:.4f} <= 0.10, {elapsed:.0f}s")


class TestCriterion5Donut:
    def test_classification_accuracy(self):
        t0 = time.perf_counter()
        ds = gen_donut(800, seed=1)
        prep = prepare_xy_dataset(ds, 2, mode="identity")
        amps, ys = prep.encoded_amplitudes(2), prep.targets()
        ansatz = build_ansatz(2, 1)
        obs = sample_pauli_set(2, 10, seed=7)
        params = model.init_params(ansatz, obs, 2, seed=7)
        cfg = train.TrainConfig(epochs=400, batch_size=32, optimizer="adam",
                                lr=0.02, seed=7)
        params, hist = train.train_model(params, amps, ys, cfg)
        acc = train.eval_classification(params, amps, ys)
        elapsed = time.perf_counter() - t0
        ok = acc >= 0.90 and hist.losses[-1] < hist.losses[0] and elapsed < 600.0
        report(5, "donut", ok,
               f"n=2 L=1 N=10 m=800, accuracy {acc:.4f} >= 0.90, {elapsed:.0f}s")


class TestCriterion6WineFolds:
    def test_mean_test_error(self):
        t0 = time.perf_counter()
        path = os.path.join(FIXTURES, "wine.csv")
        schema = CsvSchema(label_column=0, class_labels=("0", "1", "2"))
        ansatz = build_ansatz(4, 1)
        obs = sample_pauli_set(4, 8, seed=7)
        errs = []
        for fold in range(5):
            tr, te = load_csv_dataset(path, schema, 4, fold_seed=1, fold_index=fold)
            params = model.init_params(ansatz, obs, 3, seed=7)
            cfg = train.TrainConfig(epochs=150, batch_size=32, optimizer="adam",
                                    lr=0.05, seed=7)
            params, _ = train.train_model(params, tr.encoded_amplitudes(4),
                                          tr.targets(), cfg)
            acc = train.eval_classification(params, te.encoded_amplitudes(4),
                                            te.targets())
            errs.append(1.0 - acc)
        mean_err = float(np.mean(errs))
        elapsed = time.perf_counter() - t0
        ok = mean_err <= 0.10 and elapsed < 600.0
        report(6, "wine-5fold", ok,
               f"fold errors {[round(e, 4) for e in errs]}, "
               f"mean {mean_err:.4f} <= 0.10, {elapsed:.0f}s")


class TestCriterion7Digits:
    def test_binary_digit_classification(self, tmp_path):
        t0 = time.perf_counter()
        for name, m, seed in (("train", 1000, 11), ("test", 200, 12)):
            imgs, labels = gen_synthetic_digits(m, classes=[0, 1], seed=seed)
            write_idx_images(tmp_path / f"{name}-i.idx", imgs)
            write_idx_labels(tmp_path / f"{name}-l.idx", labels)
        tr = load_idx_images(tmp_path / "train-i.idx", tmp_path / "train-l.idx", [0, 1])
        te = load_idx_images(tmp_path / "test-i.idx", tmp_path / "test-l.idx", [0, 1])
        tr = _ring_shift_images(tr, 8)
        te = _ring_shift_images(te, 8)
        ansatz = build_ansatz(8, 1)
        obs = sample_pauli_set(8, 6, seed=7)
        params = model.init_params(ansatz, obs, 2, seed=7)
        cfg = train.TrainConfig(epochs=EPOCHS_DIGITS, batch_size=32,
                                optimizer="adam", lr=0.05, seed=7)
        params, _ = train.train_model(params, tr.encoded_amplitudes(8),
                                      tr.targets(), cfg)
        acc = train.eval_classification(params, te.encoded_amplitudes(8),
                                        te.targets())
        elapsed = time.perf_counter() - t0
        ok = acc >= 0.95 and elapsed < 1800.0
        report(7, "digits-1000-200", ok,
               f"n=8, test accuracy {acc:.4f} >= 0.95, {elapsed:.0f}s")


class TestCriterion8QuantumPhaseRecognition:
    def test_grid_classification_and_calibration(self):
        t0 = time.perf_counter()
        s_cluster = string_order(spt_ground_state(SptSpec(8, 1.0, 0.0, 0.0))[0], 8)
        s_para = string_order(spt_ground_state(SptSpec(8, 1.0, 1.6, 0.0))[0], 8)
        calib_ok = abs(s_cluster - 1.0) < 0.05 and s_para < 0.05
        tr = gen_spt_grid(8, 1.0, (0.0, 1.6), (-1.6, 1.6), 10, 10)
        te = gen_spt_grid(8, 1.0, (0.0, 1.6), (-1.6, 1.6), 20, 20)
        ansatz = build_ansatz(8, 1)
        obs = sample_pauli_set(8, 6, seed=7)
        params = model.init_params(ansatz, obs, 2, seed=7)
        cfg = train.TrainConfig(epochs=EPOCHS_QPR, batch_size=32,
                                optimizer="adam", lr=0.05, seed=7)
        params, _ = train.train_model(params, tr.encoded_amplitudes(8),
                                      tr.targets(), cfg)
        acc = train.eval_classification(params, te.encoded_amplitudes(8),
                                        te.targets())
        elapsed = time.perf_counter() - t0
        ok = acc >= 0.90 and calib_ok and elapsed < 1800.0
        report(8, "qpr-8-spins", ok,
               f"test accuracy {acc:.4f} >= 0.90, calibration S_cluster "
               f"{s_cluster:.4f} S_trivial {s_para:.4f}, {elapsed:.0f}s")


class TestCriterion9ComplexityTable:
    def test_reference_costs(self):
        c1 = circuit_cost(24, 5)
        c2 = circuit_cost(24, 10)
        ok = c1 == 120 and c2 == 240
        report(9, "complexity-costs", ok, f"(24,5) -> {c1}, (24,10) -> {c2}")


class TestCriterion10Universality:
    def test_indicator_chord_and_bump_demo(self):
        kappa1, kappa2 = 0.5, 2.0
        c = 0.99
        center = np.array([1.0, 0.7, 0.4])
        xi = amplitude_encode(center, 2).state.amplitudes.real
        near = sample_ring_states(3, 2, kappa1, kappa2, 300, seed=101,
                                  around=center, spread=0.05)
        far = sample_ring_states(3, 2, kappa1, kappa2, 300, seed=102)
        samples = np.vstack([near, far])
        conv = check_indicator_convergence(xi, c, [1e2, 1e3, 1e4], samples, kappa2)
        last = conv["rows"][-1]
        inside_ok = last["inside_dev"] < 0.01
        outside_ok = last["outside_dev"] < 0.01

        gen = np.random.default_rng(103)
        worst_chord = 0.0
        for _ in range(1000):
            u = gen.normal(size=4)
            v = gen.normal(size=4)
            worst_chord = max(worst_chord, chord_overlap_identity_check(
                u / np.linalg.norm(u), v / np.linalg.norm(v)))
        demo = bump_least_squares_demo(n_features=8)
        ok = (inside_ok and outside_ok and worst_chord < 1e-12
              and demo["max_error"] < 0.05)
        report(10, "universality", ok,
               f"a=1e4 deviations in/out {last['inside_dev']:.2e}/"
               f"{last['outside_dev']:.2e} < 0.01, chord residual "
               f"{worst_chord:.2e} < 1e-12, delta1 {indicator_radius(c):.4f}, "
               f"8-feature demo max err {demo['max_error']:.4f} < 0.05")

