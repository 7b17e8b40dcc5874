"""DST-I measurement matrix, subsampling and operator-norm facts.

The sampler is the (N-1)x(N-1) matrix A[k, j] = sin(pi k j / N) / N, which is
the Riemann-sum discretisation of the Fourier sine coefficient
m(f) = (1/T) integral sin(2 pi f t) x(t) dt on the paired grids
(df * dt = 1/(2N)).  A is a scaled orthogonal matrix: A^T A = I/(2N), so every
singular value is 1/sqrt(2N) and the inverse transform is x = 2N A^T m.

The matrix is kept dense on purpose: N is at most a few hundred here, dense
form keeps row subsampling trivial, and the cost is O(N^2).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .grids import FrequencyGrid, TimeGrid, Waveform


@dataclass(frozen=True)
class DstMatrix:
    """Dense DST-I sampler for a grid of size ``n_grid``."""

    n_grid: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (self.n_grid - 1, self.n_grid - 1):
            raise ValueError("entries shape inconsistent with n_grid")


def dst_matrix(n_grid: int) -> DstMatrix:
    """Build the DST-I sampler with entries sin(pi k j / N) / N."""
    if n_grid < 2:
        raise ValueError(f"n_grid must be >= 2, got {n_grid}")
    idx = np.arange(1, n_grid)
    entries = np.sin(np.pi * np.outer(idx, idx) / n_grid) / n_grid
    return DstMatrix(n_grid, entries)


def apply_dst(matrix: DstMatrix, waveform: Waveform) -> np.ndarray:
    """Full measurement vector m_k = sum_j sin(pi k j / N) x_j / N."""
    if waveform.grid.n_grid != matrix.n_grid:
        raise ValueError(
            f"waveform grid N={waveform.grid.n_grid} does not match "
            f"matrix N={matrix.n_grid}"
        )
    return matrix.entries @ waveform.samples


def apply_inverse_dst(matrix: DstMatrix, full_measurements, grid: TimeGrid) -> Waveform:
    """Exact inverse of :func:`apply_dst`: x = 2N A^T m."""
    m = np.asarray(full_measurements, dtype=float)
    if m.shape != (matrix.n_grid - 1,):
        raise ValueError(
            f"expected full-length vector of {matrix.n_grid - 1}, got {m.shape}"
        )
    if grid.n_grid != matrix.n_grid:
        raise ValueError("grid does not match matrix")
    samples = 2.0 * matrix.n_grid * (matrix.entries.T @ m)
    return Waveform(samples, grid)


def operator_norm_bound(n_grid: int) -> float:
    """Upper bound 1/sqrt(2N) on the spectral norm of any row-subsampled A."""
    if n_grid < 2:
        raise ValueError(f"n_grid must be >= 2, got {n_grid}")
    return 1.0 / np.sqrt(2.0 * n_grid)


@dataclass(frozen=True)
class SubsampleSet:
    """Strictly increasing frequency indices, each in 1..N-1."""

    n_grid: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        if idx.size < 1 or idx.size > self.n_grid - 1:
            raise ValueError(f"need between 1 and {self.n_grid - 1} indices")
        if np.any(idx < 1) or np.any(idx > self.n_grid - 1):
            raise ValueError("indices must lie in 1..N-1")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("indices must be strictly increasing")

    @property
    def m(self) -> int:
        return len(self.indices)


def random_subsample(n_grid: int, m: int, seed: int) -> SubsampleSet:
    """Uniformly random m-subset of 1..N-1, deterministic per seed.

    Seeded partial Fisher-Yates shuffle: only the first m draws are made.
    """
    if not 1 <= m <= n_grid - 1:
        raise ValueError(f"m must lie in 1..{n_grid - 1}, got {m}")
    rng = np.random.default_rng(seed)
    pool = np.arange(1, n_grid)
    for i in range(m):
        j = int(rng.integers(i, pool.size))
        pool[i], pool[j] = pool[j], pool[i]
    return SubsampleSet(n_grid, tuple(sorted(int(i) for i in pool[:m])))


def subsample_rows(matrix: DstMatrix, subsample: SubsampleSet) -> np.ndarray:
    """Rows of A at the chosen frequency indices, in index order (M x (N-1))."""
    if subsample.n_grid != matrix.n_grid:
        raise ValueError("subsample set does not match matrix size")
    rows = np.asarray(subsample.indices, dtype=int) - 1
    return matrix.entries[rows, :]


@dataclass
class MeasurementVector:
    """Measured sine coefficients (Hz) at a subsampled set of frequencies."""

    values: np.ndarray
    subsample: SubsampleSet

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.subsample.m,):
            raise ValueError(
                f"expected {self.subsample.m} values, got {self.values.shape}"
            )


def sine_interpolant(waveform: Waveform, matrix: DstMatrix | None = None):
    """Continuous sine-series interpolation of a waveform.

    Returns B(t) = 2 sum_k m_k sin(2 pi k df t) with m = apply_dst(waveform).
    This passes through every grid sample, and its continuous Fourier sine
    coefficient at frequency k*df is exactly m_k, so a sensor evolving it
    measures the DST of the samples with no discretisation error.
    """
    if matrix is None:
        matrix = dst_matrix(waveform.grid.n_grid)
    coefs = apply_dst(matrix, waveform)
    omega = np.pi * np.arange(1, waveform.grid.n_grid) / waveform.grid.duration

    def signal(t):
        t = np.asarray(t, dtype=float)
        return 2.0 * np.sin(np.multiply.outer(t, omega)) @ coefs

    return signal


def subsample_to_json(subsample: SubsampleSet, path):
    with open(path, "w") as fh:
        json.dump({"n_grid": subsample.n_grid, "indices": list(subsample.indices)}, fh)


def subsample_from_json(path) -> SubsampleSet:
    with open(path) as fh:
        data = json.load(fh)
    return SubsampleSet(int(data["n_grid"]), tuple(int(i) for i in data["indices"]))


def measurements_to_csv(measurement: MeasurementVector, fgrid: FrequencyGrid, path):
    """Write ``k,freq_hz,coef_hz`` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "freq_hz", "coef_hz"])
        for k, value in zip(measurement.subsample.indices, measurement.values):
            writer.writerow([int(k), repr(float(k * fgrid.df)), repr(float(value))])


def measurements_from_csv(path, n_grid: int) -> MeasurementVector:
    indices, values = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["k", "freq_hz", "coef_hz"]:
            raise ValueError(f"unexpected measurement CSV header: {header}")
        for row in reader:
            indices.append(int(row[0]))
            values.append(float(row[2]))
    order = np.argsort(indices)
    subsample = SubsampleSet(n_grid, tuple(int(indices[i]) for i in order))
    return MeasurementVector(np.array(values)[order], subsample)
