"""Command-line entry point tying the modules into reproducible runs.

Subcommands: gen-data, spt-gen, train, eval, grad-check, complexity,
universality-check. Run configuration is a single JSON document; every
artifact embeds the config hash and master seed. Exit codes: 0 success,
2 config/validation error, 3 data error, 4 solver error, 5 failed check.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import rng
from .complexity import circuit_cost, resource_table
from .data import (
    CsvSchema,
    Dataset,
    export_csv,
    gen_donut,
    gen_regression,
    gen_synthetic_digits,
    load_csv_dataset,
    load_idx_images,
    prepare_xy_dataset,
    write_idx_images,
    write_idx_labels,
)
from .errors import ConfigError, DataFormatError, InvalidArgumentError, SolverError
from .grad import fd_loss_gradient, gradient_agreement, loss_gradient
from .model import init_params, params_from_json, params_to_json
from .observables import sample_pauli_set
from .spt import export_states, gen_spt_grid, import_states
from .statevec import build_ansatz
from .train import TrainConfig, eval_classification, eval_regression, train_model
from .universality import (
    bump_least_squares_demo,
    chord_overlap_identity_check,
    check_indicator_convergence,
    sample_ring_states,
)
from .encode import amplitude_encode

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_SOLVER = 4
EXIT_CHECK = 5


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _require(cfg: dict, *keys):
    cur = cfg
    trail = []
    for k in keys:
        trail.append(str(k))
        if not isinstance(cur, dict) or k not in cur:
            raise ConfigError(f"missing config field: {'.'.join(trail)}")
        cur = cur[k]
    return cur


# ---------------------------------------------------------------------------
# Dataset assembly from a config

def _build_dataset(cfg: dict):
    """Returns (train_amps, train_targets, test_amps, test_targets, info)."""
    task = _require(cfg, "task")
    data = cfg.get("data", {})
    n = _require(cfg, "model", "n")
    if task == "regression":
        ds = gen_regression(data.get("m", 400), data.get("seed", 1),
                            data.get("noise_sigma", 0.0))
        prep = prepare_xy_dataset(ds, n)
        amps, ys = prep.encoded_amplitudes(n), prep.targets()
        return amps, ys, amps, ys, {"samples": len(prep)}
    if task == "donut":
        ds = gen_donut(data.get("m", 800), data.get("seed", 1))
        # zero-shift prep: the donut label is radial and the data already
        # avoids the origin, so the ring needs no recentering
        prep = prepare_xy_dataset(ds, n, mode="identity")
        amps, ys = prep.encoded_amplitudes(n), prep.targets()
        return amps, ys, amps, ys, {"samples": len(prep)}
    if task == "csv-classify":
        schema = CsvSchema(
            label_column=_require(cfg, "data", "label_column"),
            class_labels=tuple(_require(cfg, "data", "class_labels")),
            has_header=data.get("has_header", False),
        )
        train, test = load_csv_dataset(
            _require(cfg, "data", "path"), schema, n,
            data.get("fold_seed", 0), data.get("fold_index", 0),
        )
        return (train.encoded_amplitudes(n), train.targets(),
                test.encoded_amplitudes(n), test.targets(),
                {"train": len(train), "test": len(test)})
    if task == "idx-classify":
        if n < math.ceil(math.log2(256)):
            raise ConfigError(f"n = {n} qubits cannot hold 255 features + slot")
        classes = data.get("classes", [0, 1])
        train = load_idx_images(_require(cfg, "data", "images_path"),
                                _require(cfg, "data", "labels_path"),
                                classes, data.get("limit"))
        test = load_idx_images(_require(cfg, "data", "test_images_path"),
                               _require(cfg, "data", "test_labels_path"),
                               classes, data.get("test_limit"))
        train = _ring_shift_images(train, n)
        test = _ring_shift_images(test, n)
        return (train.encoded_amplitudes(n), train.targets(),
                test.encoded_amplitudes(n), test.targets(),
                {"train": len(train), "test": len(test)})
    if task == "qpr":
        spins = data.get("spins", 8)
        if n != spins:
            raise ConfigError(f"model n = {n} must equal spins = {spins} for qpr")
        j = data.get("j", 1.0)
        train = gen_spt_grid(spins, j, data.get("h1_range", [0.0, 1.6]),
                             data.get("h2_range", [-1.6, 1.6]),
                             data.get("train_h1_count", 10), data.get("train_h2_count", 10))
        test = gen_spt_grid(spins, j, data.get("h1_range", [0.0, 1.6]),
                            data.get("h2_range", [-1.6, 1.6]),
                            data.get("test_h1_count", 20), data.get("test_h2_count", 20))
        return (train.encoded_amplitudes(n), train.targets(),
                test.encoded_amplitudes(n), test.targets(),
                {"train": len(train), "test": len(test)})
    raise ConfigError(f"unknown task {task!r}")


def _ring_shift_images(ds: Dataset, n: int) -> Dataset:
    # pixels already in [0, 1]; the +0.5 shift keeps 0 out of the domain
    from .data import ring_prepare, Sample
    xs = np.stack([s.x for s in ds.samples])
    shifted, spec = ring_prepare(xs, np.zeros(xs.shape[1]), np.ones(xs.shape[1]), n)
    return Dataset(
        [Sample(y=s.y, x=x) for s, x in zip(ds.samples, shifted)], ring=spec
    )


def _init_from_config(cfg: dict):
    model = _require(cfg, "model")
    n = _require(cfg, "model", "n")
    ansatz = build_ansatz(n, model.get("layers", 1))
    obs = sample_pauli_set(n, model.get("n_observables", 5), model.get("observable_seed", cfg.get("seed", 0)))
    return init_params(ansatz, obs, model.get("heads", 1), model.get("init_seed", cfg.get("seed", 0)))


# ---------------------------------------------------------------------------
# Subcommands

def cmd_gen_data(args) -> int:
    os.makedirs(os.path.dirname(os.path.abspath(args.out)) or ".", exist_ok=True)
    if args.kind == "regression":
        ds = gen_regression(args.m, args.seed)
        export_csv(args.out, ds)
    elif args.kind == "donut":
        ds = gen_donut(args.m, args.seed)
        export_csv(args.out, ds)
    else:  # digits
        images, labels = gen_synthetic_digits(args.m, args.classes, args.seed)
        write_idx_images(args.out + "-images.idx", images)
        write_idx_labels(args.out + "-labels.idx", labels)
    manifest = {
        "kind": args.kind,
        "m": args.m,
        "seed": args.seed,
        "hash": config_hash({"kind": args.kind, "m": args.m, "seed": args.seed}),
    }
    with open(args.out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    print(f"wrote {args.kind} dataset ({args.m} samples) to {args.out}")
    return EXIT_OK


def cmd_spt_gen(args) -> int:
    ds = gen_spt_grid(args.spins, args.j, (args.h1_min, args.h1_max),
                      (args.h2_min, args.h2_max), args.h1_count, args.h2_count)
    spec_info = vars(args).copy()
    spec_info.pop("func", None)
    export_states(args.out, ds, spec_info)
    print(f"wrote {len(ds)} ground states to {args.out}.f64 / {args.out}.json")
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = _load_config(args.config)
    chash = config_hash(cfg)
    out_dir = args.out or cfg.get("output_dir", ".")
    os.makedirs(out_dir, exist_ok=True)
    tr_amps, tr_ys, te_amps, te_ys, info = _build_dataset(cfg)
    params = _init_from_config(cfg)
    opt = cfg.get("optimizer", {})
    tcfg = TrainConfig(
        epochs=opt.get("epochs", 100),
        batch_size=opt.get("batch_size", 32),
        optimizer=opt.get("kind", "adam"),
        lr=opt.get("lr", 0.05),
        seed=cfg.get("seed", 0),
    )
    t0 = time.perf_counter()
    params, history = train_model(params, tr_amps, tr_ys, tcfg)
    wall = time.perf_counter() - t0

    task = cfg["task"]
    if task == "regression":
        metric_name, metric = "mean_relative_error", eval_regression(params, te_amps, te_ys)
    else:
        metric_name, metric = "accuracy", eval_classification(params, te_amps, te_ys)

    ckpt_path = os.path.join(out_dir, "checkpoint.json")
    with open(ckpt_path, "w") as fh:
        fh.write(params_to_json(params, extra={"config_hash": chash, "seed": cfg.get("seed", 0)}))
    history.to_csv(os.path.join(out_dir, "history.csv"))
    summary = {
        "task": task,
        "config_hash": chash,
        "seed": cfg.get("seed", 0),
        "final_loss": history.losses[-1],
        metric_name: metric,
        "wall_clock": wall,
        "data": info,
    }
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _load_config(args.config)
    with open(args.checkpoint) as fh:
        params = params_from_json(fh.read())
    _, _, te_amps, te_ys, _ = _build_dataset(cfg)
    if cfg["task"] == "regression":
        result = {"mean_relative_error": eval_regression(params, te_amps, te_ys)}
    else:
        result = {"accuracy": eval_classification(params, te_amps, te_ys)}
    print(json.dumps(result, indent=2))
    return EXIT_OK


def cmd_grad_check(args) -> int:
    worst = {"pass": True, "max_abs_err": 0.0, "max_rel_err": 0.0}
    reports = []
    for inst in range(args.instances):
        master = args.seed + inst
        gen = rng.stream(master, "grad-check")
        ansatz = build_ansatz(args.n, 1)
        obs = sample_pauli_set(args.n, min(5, 4**args.n - 1), master)
        params = init_params(ansatz, obs, 1, master)
        d = max(1, 2**args.n - 1)
        xs = gen.uniform(0.5, 1.5, size=(3, d))
        batch_amps = np.stack(
            [amplitude_encode(x, args.n).state.amplitudes for x in xs]
        )
        ys = gen.uniform(0.0, 1.0, size=(3, 1))
        analytic = loss_gradient((batch_amps, ys), params)
        fd = fd_loss_gradient((batch_amps, ys), params, h=args.h)
        rep = gradient_agreement(analytic, fd)
        rep["instance"] = inst
        reports.append(rep)
        worst["pass"] = worst["pass"] and rep["pass"]
        worst["max_abs_err"] = max(worst["max_abs_err"], rep["max_abs_err"])
        worst["max_rel_err"] = max(worst["max_rel_err"], rep["max_rel_err"])
    doc = {"n": args.n, "instances": args.instances, "h": args.h,
           "summary": worst, "reports": reports}
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text)
    return EXIT_OK if worst["pass"] else EXIT_CHECK


def cmd_complexity(args) -> int:
    rows = []
    if args.ng and args.nb:
        rows.append({"algorithm": "input", "n_g": args.ng, "n_b": args.nb,
                     "c": circuit_cost(args.ng, args.nb)})
        print(f"c = {circuit_cost(args.ng, args.nb)}")
    if args.d:
        for est in resource_table(args.d, args.M, n_b=args.nb or None):
            rows.append({
                "algorithm": est.algorithm,
                "duplication": est.duplication,
                "data_qubits": est.data_qubits,
                "data_qubits_table": est.data_qubits_table,
                "n_g": est.n_g,
                "n_b": est.n_b,
                "c": est.c,
            })
            print(rows[-1])
    if args.csv:
        keys = ["algorithm", "duplication", "data_qubits", "data_qubits_table", "n_g", "n_b", "c"]
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=keys)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: row.get(k, "") for k in keys})
    return EXIT_OK


def cmd_universality_check(args) -> int:
    kappa1, kappa2 = 0.5, 2.0
    d = 2
    gen = rng.stream(args.seed, "universality-xi")
    x0 = gen.uniform(0.7, 1.2, size=d)
    xi = amplitude_encode(x0, 2).state.amplitudes.real
    near = sample_ring_states(d, 2, kappa1, kappa2, args.samples // 2, args.seed,
                              around=x0, spread=0.02)
    far = sample_ring_states(d, 2, kappa1, kappa2, args.samples // 2, args.seed + 1)
    samples = np.concatenate([near, far])
    report = check_indicator_convergence(
        xi, args.c, [10.0, 100.0, 1000.0, args.a_max], samples, kappa2
    )
    # chord identity residual over random unit pairs
    gen2 = rng.stream(args.seed, "universality-chord")
    worst = 0.0
    for _ in range(1000):
        u = gen2.normal(size=4)
        v = gen2.normal(size=4)
        worst = max(worst, chord_overlap_identity_check(u / np.linalg.norm(u),
                                                        v / np.linalg.norm(v)))
    report["chord_residual_max"] = worst
    report["bump_demo"] = bump_least_squares_demo()
    last = report["rows"][-1]
    ok = (last["inside_dev"] < 0.01 and last["outside_dev"] < 0.01
          and worst < 1e-12 and report["bump_demo"]["max_error"] < 0.05)
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text)
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dqnn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic dataset")
    p.add_argument("kind", choices=["regression", "donut", "digits"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--classes", type=int, nargs="+", default=[0, 1])
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("spt-gen", help="generate labeled spin-chain ground states")
    p.add_argument("--spins", type=int, default=8)
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--h1-min", type=float, default=0.0)
    p.add_argument("--h1-max", type=float, default=1.6)
    p.add_argument("--h2-min", type=float, default=-1.6)
    p.add_argument("--h2-max", type=float, default=1.6)
    p.add_argument("--h1-count", type=int, default=20)
    p.add_argument("--h2-count", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spt_gen)

    p = sub.add_parser("train", help="train a model from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint on the config's test split")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grad-check", help="analytic-vs-finite-difference gradient report")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=float, default=1e-5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_grad_check)

    p = sub.add_parser("complexity", help="circuit cost and qubit resource table")
    p.add_argument("--ng", type=int, default=None)
    p.add_argument("--nb", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("universality-check", help="indicator-limit convergence report")
    p.add_argument("--c", type=float, default=0.99)
    p.add_argument("--a-max", type=float, default=1e4)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_universality_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except InvalidArgumentError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
