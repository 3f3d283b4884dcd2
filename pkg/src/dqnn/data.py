"""Dataset generators and ingestion.

Synthetic regression/donut generators, CSV ingestion with deterministic
5-fold splitting, IDX image ingestion with bilinear downsampling, and a
procedural digit generator used where the real MNIST files are not
available. Ground-state (QPR) data lives in spt.py.
"""
from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .encode import RingDomainSpec, amplitude_encode, shift_to_ring
from .errors import DataFormatError, InvalidArgumentError
from .statevec import Statevector

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


@dataclass(frozen=True)
class Sample:
    """One data point: a raw vector or a prebuilt state, plus its target."""

    y: np.ndarray
    x: np.ndarray = None
    state: Statevector = None
    meta: dict = None

    def __post_init__(self):
        if (self.x is None) == (self.state is None):
            raise InvalidArgumentError("exactly one of x / state must be set")
        object.__setattr__(self, "y", np.atleast_1d(np.asarray(self.y, dtype=float)))
        if self.x is not None:
            object.__setattr__(self, "x", np.asarray(self.x, dtype=float).reshape(-1))


@dataclass
class Dataset:
    samples: list
    ring: RingDomainSpec = None

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def targets(self) -> np.ndarray:
        return np.stack([s.y for s in self.samples])

    def encoded_amplitudes(self, n: int) -> np.ndarray:
        """Stack all samples as encoded amplitude rows (m, 2**n).

        Raw-vector samples are amplitude encoded (they must already be
        ring-shifted); prebuilt states pass through.
        """
        rows = []
        for s in self.samples:
            if s.state is not None:
                rows.append(s.state.amplitudes)
            else:
                rows.append(amplitude_encode(s.x, n).state.amplitudes)
        return np.stack(rows)


# ---------------------------------------------------------------------------
# Synthetic generators

def regression_target(x1, x2):
    g1 = 0.715625 - 1.0125 * x1**2 + x1**4
    g2 = 0.715625 - 1.0125 * x2**2 + x2**4
    return g1 * g2


def gen_regression(m: int, seed: int, noise_sigma: float = 0.0) -> Dataset:
    """m uniform points in [-0.8, 0.8]^2 with the quartic product target."""
    if m < 1:
        raise InvalidArgumentError("need m >= 1")
    gen = rng.stream(seed, "data-regression")
    xs = gen.uniform(-0.8, 0.8, size=(m, 2))
    ys = regression_target(xs[:, 0], xs[:, 1])
    if noise_sigma > 0:
        ys = ys + gen.normal(0.0, noise_sigma, size=m)
    return Dataset([Sample(y=[y], x=x) for x, y in zip(xs, ys)])


def donut_label(x1, x2):
    r2 = x1**2 + x2**2
    return [1.0, 0.0] if 0.16 < r2 < 0.81 else [0.0, 1.0]


def gen_donut(m: int, seed: int) -> Dataset:
    """m uniform points in [-1, 1]^2; donut annulus vs the rest.

    Points exactly on a boundary circle get the outer class (measure zero,
    fixed for determinism).
    """
    if m < 1:
        raise InvalidArgumentError("need m >= 1")
    gen = rng.stream(seed, "data-donut")
    xs = gen.uniform(-1.0, 1.0, size=(m, 2))
    return Dataset([Sample(y=donut_label(x[0], x[1]), x=x) for x in xs])


# ---------------------------------------------------------------------------
# Ring preprocessing

def ring_prepare(raw_x: np.ndarray, lo: np.ndarray, hi: np.ndarray, n: int):
    """Min-max scale with given per-feature stats, then shift by +0.5.

    Returns the shifted vectors and a RingDomainSpec whose kappa bounds
    enclose the actual shifted norms with a small margin.
    """
    raw_x = np.asarray(raw_x, dtype=float)
    span = np.where(hi > lo, hi - lo, 1.0)
    scaled = (raw_x - lo) / span
    d = raw_x.shape[1]
    shift = np.full(d, 0.5)
    shifted = scaled + shift
    norms = np.linalg.norm(shifted, axis=1)
    spec = RingDomainSpec(
        d=d,
        shift=shift,
        kappa1=float(norms.min()) * 0.999,
        kappa2=float(norms.max()) * 1.001,
        n=n,
    )
    return shifted, spec


def ring_identity(raw_x: np.ndarray, n: int):
    """Zero-shift ring spec for data whose norms already avoid the origin.

    Keeps any radial structure of the data intact (a min-max shift would
    move the center and scramble it), which matters for radially labeled
    sets like the donut.
    """
    raw_x = np.asarray(raw_x, dtype=float)
    norms = np.linalg.norm(raw_x, axis=1)
    if norms.min() <= 0.0:
        raise InvalidArgumentError("identity ring prep needs all samples off the origin")
    d = raw_x.shape[1]
    spec = RingDomainSpec(
        d=d,
        shift=np.zeros(d),
        kappa1=float(norms.min()) * 0.999,
        kappa2=float(norms.max()) * 1.001,
        n=n,
    )
    return raw_x.copy(), spec


def prepare_xy_dataset(dataset: Dataset, n: int, mode: str = "minmax") -> Dataset:
    """Ring-shift a raw synthetic dataset so it is ready for encoding.

    mode "minmax": per-feature min-max scaling plus a +0.5 shift (for data
    that covers the origin). mode "identity": keep coordinates as they are
    (for data already inside a ring).
    """
    xs = np.stack([s.x for s in dataset.samples])
    if mode == "minmax":
        shifted, spec = ring_prepare(xs, xs.min(axis=0), xs.max(axis=0), n)
    elif mode == "identity":
        shifted, spec = ring_identity(xs, n)
    else:
        raise InvalidArgumentError(f"unknown ring prep mode {mode!r}")
    samples = [
        Sample(y=s.y, x=shift_to_ring(x - spec.shift, spec), meta=s.meta)
        for s, x in zip(dataset.samples, shifted)
    ]
    return Dataset(samples, ring=spec)


# ---------------------------------------------------------------------------
# CSV ingestion with 5-fold splitting

@dataclass(frozen=True)
class CsvSchema:
    """Column layout of a labeled CSV file."""

    label_column: int
    class_labels: tuple          # ordered distinct raw label strings
    feature_columns: tuple = None
    has_header: bool = False


def _read_csv_rows(path, schema: CsvSchema):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if lineno == 1 and schema.has_header:
                continue
            if not row:
                continue
            try:
                label = row[schema.label_column].strip()
                cols = schema.feature_columns
                if cols is None:
                    cols = [i for i in range(len(row)) if i != schema.label_column]
                feats = [float(row[i]) for i in cols]
            except (IndexError, ValueError) as exc:
                raise DataFormatError(f"{path}:{lineno}: malformed row ({exc})") from exc
            if label not in schema.class_labels:
                raise DataFormatError(f"{path}:{lineno}: unknown class label {label!r}")
            rows.append((feats, schema.class_labels.index(label)))
    return rows


def fold_indices(m: int, n_folds: int, seed: int):
    """Seeded shuffle split into n_folds near-equal parts (partition).

    The remainder r = m mod n_folds is spread over the earliest folds.
    """
    gen = rng.stream(seed, "folds")
    perm = gen.permutation(m)
    base = m // n_folds
    rem = m % n_folds
    folds = []
    start = 0
    for i in range(n_folds):
        size = base + (1 if i < rem else 0)
        folds.append(np.sort(perm[start : start + size]))
        start += size
    return folds


def load_csv_dataset(path, schema: CsvSchema, n: int, fold_seed: int, fold_index: int,
                     n_folds: int = 5):
    """Read, 5-fold split, scale on train stats, ring-shift. Returns (train, test)."""
    rows = _read_csv_rows(path, schema)
    m = len(rows)
    folds = fold_indices(m, n_folds, fold_seed)
    if not 0 <= fold_index < n_folds:
        raise InvalidArgumentError(f"fold_index {fold_index} out of range")
    test_idx = set(folds[fold_index].tolist())
    train_rows = [rows[i] for i in range(m) if i not in test_idx]
    test_rows = [rows[i] for i in range(m) if i in test_idx]

    k_classes = len(schema.class_labels)
    xs_train = np.array([r[0] for r in train_rows])
    lo, hi = xs_train.min(axis=0), xs_train.max(axis=0)

    def build(split_rows):
        xs = np.array([r[0] for r in split_rows])
        shifted, spec = ring_prepare(xs, lo, hi, n)
        samples = []
        for (feats, cls), x in zip(split_rows, shifted):
            y = np.zeros(k_classes)
            y[cls] = 1.0
            samples.append(Sample(y=y, x=x))
        return Dataset(samples, ring=spec)

    return build(train_rows), build(test_rows)


# ---------------------------------------------------------------------------
# IDX image ingestion

def read_idx_images(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic, count, rows, cols = struct.unpack(">IIII", fh.read(16))
        if magic != IDX_IMAGES_MAGIC:
            raise DataFormatError(f"{path}: bad IDX image magic {magic:#010x}")
        buf = fh.read(count * rows * cols)
    if len(buf) != count * rows * cols:
        raise DataFormatError(f"{path}: truncated image payload")
    return np.frombuffer(buf, dtype=np.uint8).reshape(count, rows, cols)


def read_idx_labels(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic, count = struct.unpack(">II", fh.read(8))
        if magic != IDX_LABELS_MAGIC:
            raise DataFormatError(f"{path}: bad IDX label magic {magic:#010x}")
        buf = fh.read(count)
    if len(buf) != count:
        raise DataFormatError(f"{path}: truncated label payload")
    return np.frombuffer(buf, dtype=np.uint8)


def write_idx_images(path, images: np.ndarray):
    images = np.asarray(images, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(struct.pack(">IIII", IDX_IMAGES_MAGIC, *images.shape))
        fh.write(images.tobytes())


def write_idx_labels(path, labels: np.ndarray):
    labels = np.asarray(labels, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(struct.pack(">II", IDX_LABELS_MAGIC, labels.shape[0]))
        fh.write(labels.tobytes())


def bilinear_resize(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample with half-pixel centers."""
    img = np.asarray(img, dtype=float)
    in_h, in_w = img.shape
    ys = (np.arange(out_h) + 0.5) * in_h / out_h - 0.5
    xs = (np.arange(out_w) + 0.5) * in_w / out_w - 0.5
    y0 = np.clip(np.floor(ys).astype(int), 0, in_h - 1)
    x0 = np.clip(np.floor(xs).astype(int), 0, in_w - 1)
    y1 = np.clip(y0 + 1, 0, in_h - 1)
    x1 = np.clip(x0 + 1, 0, in_w - 1)
    wy = np.clip(ys - y0, 0.0, 1.0)[:, None]
    wx = np.clip(xs - x0, 0.0, 1.0)[None, :]
    top = img[np.ix_(y0, x0)] * (1 - wx) + img[np.ix_(y0, x1)] * wx
    bot = img[np.ix_(y1, x0)] * (1 - wx) + img[np.ix_(y1, x1)] * wx
    return top * (1 - wy) + bot * wy


def load_idx_images(images_path, labels_path, classes, limit: int = None) -> Dataset:
    """IDX images -> 16x16 bilinear -> flatten -> drop pixel 255 -> [0, 1].

    255 features plus the auxiliary encoding slot exactly fill 8 qubits.
    Targets are one-hot over `classes` in the given order. Zero-norm images
    are rejected.
    """
    images = read_idx_images(images_path)
    labels = read_idx_labels(labels_path)
    if images.shape[0] != labels.shape[0]:
        raise DataFormatError(
            f"image count {images.shape[0]} != label count {labels.shape[0]}"
        )
    classes = list(classes)
    samples = []
    for img, lab in zip(images, labels):
        if int(lab) not in classes:
            continue
        small = bilinear_resize(img, 16, 16).reshape(-1)[:255] / 255.0
        if np.linalg.norm(small) == 0.0:
            raise InvalidArgumentError("zero-norm image cannot be amplitude encoded")
        y = np.zeros(len(classes))
        y[classes.index(int(lab))] = 1.0
        samples.append(Sample(y=y, x=small))
        if limit is not None and len(samples) >= limit:
            break
    return Dataset(samples)


# ---------------------------------------------------------------------------
# Procedural digits (MNIST stand-in for offline runs)

def _draw_digit(gen: np.random.Generator, digit: int, size: int = 28) -> np.ndarray:
    """Rough 28x28 rendering of 0, 1 or 2 with jittered geometry."""
    yy, xx = np.mgrid[0:size, 0:size].astype(float)
    cy = size / 2 + gen.uniform(-2, 2)
    cx = size / 2 + gen.uniform(-2, 2)
    thick = gen.uniform(1.2, 2.2)
    img = np.zeros((size, size))
    if digit == 0:
        ry = gen.uniform(7, 9)
        rx = gen.uniform(4.5, 6.5)
        rad = np.sqrt(((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2)
        img = np.exp(-((rad - 1.0) ** 2) / (2 * (thick / 8) ** 2))
    elif digit == 1:
        slope = gen.uniform(-0.12, 0.12)
        dist = np.abs((xx - cx) - slope * (yy - cy))
        img = np.exp(-(dist**2) / (2 * thick**2))
        img[yy < cy - 9] = 0
        img[yy > cy + 9] = 0
    elif digit == 2:
        # top arc, diagonal, bottom bar
        rad = np.sqrt((yy - (cy - 4)) ** 2 + (xx - cx) ** 2)
        arc = np.exp(-((rad - 5.5) ** 2) / (2 * thick**2))
        arc[yy > cy - 2] = 0
        diag = np.exp(-((yy + xx - (cy + cx + 3)) ** 2) / (2 * (2 * thick) ** 2))
        diag[(yy < cy - 3) | (yy > cy + 8)] = 0
        bar = np.exp(-((yy - (cy + 8)) ** 2) / (2 * thick**2))
        bar[np.abs(xx - cx) > 6] = 0
        img = np.maximum(np.maximum(arc, diag), bar)
    else:
        raise InvalidArgumentError(f"procedural digits support 0, 1, 2; got {digit}")
    img = img * gen.uniform(0.75, 1.0)
    img = img + gen.normal(0.0, 0.02, size=img.shape)
    return np.clip(img * 255, 0, 255).astype(np.uint8)


def gen_synthetic_digits(m: int, classes, seed: int):
    """(images (m, 28, 28) uint8, labels (m,) uint8) of procedural digits."""
    gen = rng.stream(seed, "synthetic-digits")
    classes = list(classes)
    labels = np.array([classes[i % len(classes)] for i in range(m)], dtype=np.uint8)
    gen.shuffle(labels)
    images = np.stack([_draw_digit(gen, int(lab)) for lab in labels])
    return images, labels


# ---------------------------------------------------------------------------
# Export

def export_csv(path, dataset: Dataset):
    """x columns, y columns, optional h1/h2 meta columns."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for s in dataset.samples:
            if s.x is None:
                raise InvalidArgumentError("state-backed samples export via spt.export_states")
            row = [repr(float(v)) for v in s.x] + [repr(float(v)) for v in s.y]
            if s.meta and "h1" in s.meta:
                row += [repr(float(s.meta["h1"])), repr(float(s.meta["h2"]))]
            writer.writerow(row)
