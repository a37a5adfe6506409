"""Haar-random two-qubit states, their (concurrence, M2) histogram and band checks.

Sampling is split into fixed-size partitions, each drawing from its own
Philox substream spawned from the run seed, so counts are reproducible no
matter how the partitions are scheduled.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..frontiers import DELTA_B, DELTA_H, f_abc, m2_max_values
from ..measures import concurrence_batch, m2_from_expectations
from ..states import StateVector, pauli_expectations

GENERATOR = "Philox"
DEFAULT_N = 1_000_000
DEFAULT_BINS = 200
DEFAULT_CHUNK = 1 << 16
Y_MAX = math.log(16 / 7)
CONTAINMENT_TOL = 1e-9
PURITY_TOL = 1e-9
SPARSE_FRACTION = 0.10


def substreams(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.Philox(ss)) for ss in np.random.SeedSequence(seed).spawn(count)]


def haar_amplitudes(rng: np.random.Generator, n: int) -> np.ndarray:
    """n rows of 4 complex Gaussian amplitudes, normalized."""
    z = rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_sample(rng: np.random.Generator) -> StateVector:
    return StateVector(haar_amplitudes(rng, 1)[0])


@dataclass(frozen=True)
class PartitionPlan:
    n: int
    chunk: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.chunk < 1:
            raise ValueError("chunk must be >= 1")

    @property
    def sizes(self) -> list[int]:
        full, rest = divmod(self.n, self.chunk)
        return [self.chunk] * full + ([rest] if rest else [])


@dataclass(frozen=True, eq=False)
class Histogram2D:
    counts: np.ndarray
    n_samples: int
    seed: int
    y_max: float = Y_MAX
    chunk: int = DEFAULT_CHUNK
    generator: str = GENERATOR

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64)
        if c.ndim != 2:
            raise ValueError("counts must be a 2-D grid")
        if (c < 0).any():
            raise ValueError("counts must be nonnegative")
        if int(c.sum()) != self.n_samples:
            raise ValueError(f"counts sum to {int(c.sum())}, expected {self.n_samples}")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def bins_x(self) -> int:
        return self.counts.shape[0]

    @property
    def bins_y(self) -> int:
        return self.counts.shape[1]

    @property
    def dx(self) -> float:
        return 1.0 / self.bins_x

    @property
    def dy(self) -> float:
        return self.y_max / self.bins_y

    @property
    def cell_diagonal(self) -> float:
        return math.hypot(self.dx, self.dy)


@dataclass
class SampleScan:
    """Per-sample checks gathered while histogramming."""

    n: int = 0
    lower_violations: int = 0
    upper_violations: int = 0
    worst_lower: float = -math.inf  # max of f_abc - M2; must stay <= tol
    worst_upper: float = -math.inf  # max of M2 - m2_max
    purity_max_dev: float = 0.0
    delta_sum: float = 0.0
    counts: np.ndarray | None = field(default=None, repr=False)

    @property
    def mean_delta(self) -> float:
        return self.delta_sum / self.n if self.n else math.nan

    @property
    def violations(self) -> int:
        return self.lower_violations + self.upper_violations

    def merge(self, other: SampleScan) -> None:
        self.n += other.n
        self.lower_violations += other.lower_violations
        self.upper_violations += other.upper_violations
        self.worst_lower = max(self.worst_lower, other.worst_lower)
        self.worst_upper = max(self.worst_upper, other.worst_upper)
        self.purity_max_dev = max(self.purity_max_dev, other.purity_max_dev)
        self.delta_sum += other.delta_sum
        self.counts = other.counts if self.counts is None else self.counts + other.counts


def bin_indices(values: np.ndarray, upper: float, bins: int) -> np.ndarray:
    # values a hair outside [0, upper] land in the edge cells
    idx = np.floor(np.asarray(values) / upper * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def _scan_partition(rng: np.random.Generator, size: int, bins: int, y_max: float) -> SampleScan:
    psi = haar_amplitudes(rng, size)
    vals = pauli_expectations(psi)
    delta = np.minimum(concurrence_batch(psi), 1.0)
    m2 = m2_from_expectations(vals)
    lo_gap = f_abc(delta) - m2
    hi_gap = m2 - m2_max_values(delta)
    counts = np.zeros((bins, bins), dtype=np.int64)
    np.add.at(counts, (bin_indices(delta, 1.0, bins), bin_indices(m2, y_max, bins)), 1)
    return SampleScan(
        n=size,
        lower_violations=int((lo_gap > CONTAINMENT_TOL).sum()),
        upper_violations=int((hi_gap > CONTAINMENT_TOL).sum()),
        worst_lower=float(lo_gap.max()),
        worst_upper=float(hi_gap.max()),
        purity_max_dev=float(np.abs(np.square(vals).sum(axis=-1) - 4.0).max()),
        delta_sum=float(delta.sum()),
        counts=counts,
    )


def scan_samples(n: int, bins: int, seed: int, chunk: int = DEFAULT_CHUNK, workers: int = 1,
                 y_max: float = Y_MAX) -> tuple[Histogram2D, SampleScan]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    sizes = PartitionPlan(n, chunk).sizes
    streams = substreams(seed, len(sizes))
    jobs = list(zip(streams, sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _scan_partition(job[0], job[1], bins, y_max), jobs))
    else:
        parts = [_scan_partition(rng, size, bins, y_max) for rng, size in jobs]
    total = SampleScan(counts=np.zeros((bins, bins), dtype=np.int64))
    for part in parts:
        total.merge(part)
    return Histogram2D(total.counts, n, seed, y_max, chunk), total


def build_histogram(n: int, bins: int, seed: int, chunk: int = DEFAULT_CHUNK, workers: int = 1) -> Histogram2D:
    return scan_samples(n, bins, seed, chunk, workers)[0]


def _column_extremes(bins: int, samples_per_cell: int = 32) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-column min/max of f_abc and of m2_max over [ix/bins, (ix+1)/bins]."""
    t = np.linspace(0.0, 1.0, samples_per_cell + 1)
    xs = (np.arange(bins)[:, None] + t[None, :]) / bins
    lo_vals, hi_vals = f_abc(xs), m2_max_values(xs)
    lo_min, lo_max = lo_vals.min(axis=1), lo_vals.max(axis=1)
    hi_min, hi_max = hi_vals.min(axis=1), hi_vals.max(axis=1)
    # interior peaks of the curves may fall between sample points
    for peak, val in ((DELTA_B, f_abc(DELTA_B)),):
        ix = min(int(peak * bins), bins - 1)
        lo_max[ix] = max(lo_max[ix], val)
    for peak in (DELTA_H, DELTA_B):
        ix = min(int(peak * bins), bins - 1)
        hi_max[ix] = max(hi_max[ix], Y_MAX)
    return lo_min, lo_max, hi_min, hi_max


def out_of_band_cells(h: Histogram2D) -> np.ndarray:
    """Populated cells lying wholly above m2_max + diag or wholly below f_abc - diag.

    Returns an (k, 2) array of (ix, iy).
    """
    lo_min, _, _, hi_max = _column_extremes(h.bins_x)
    iy = np.arange(h.bins_y)
    y0, y1 = iy * h.dy, (iy + 1) * h.dy
    diag = h.cell_diagonal
    above = y0[None, :] > hi_max[:, None] + diag
    below = y1[None, :] < lo_min[:, None] - diag
    return np.argwhere((above | below) & (h.counts > 0))


def boundary_cells(h: Histogram2D) -> np.ndarray:
    """Boolean mask of cells crossed by either frontier curve."""
    lo_min, lo_max, hi_min, hi_max = _column_extremes(h.bins_x)
    iy = np.arange(h.bins_y)
    y0, y1 = iy * h.dy, (iy + 1) * h.dy
    on_lower = (y1[None, :] >= lo_min[:, None]) & (y0[None, :] <= lo_max[:, None])
    on_upper = (y1[None, :] >= hi_min[:, None]) & (y0[None, :] <= hi_max[:, None])
    return on_lower | on_upper


def boundary_sparsity(h: Histogram2D) -> float:
    """max count on frontier-crossed cells divided by the global max count."""
    top = h.counts.max()
    if top == 0:
        return 0.0
    return float(h.counts[boundary_cells(h)].max() / top)


def histogram_header(h: Histogram2D) -> list[str]:
    return [
        f"n={h.n_samples} bins={h.bins_x} seed={h.seed} ymax={h.y_max!r}",
        f"generator={h.generator} chunk={h.chunk}",
    ]


def write_histogram_csv(h: Histogram2D, fh, extra_header: list[str] | None = None) -> None:
    """Header comment lines, then ``ix,iy,count`` for every nonzero cell."""
    for line in histogram_header(h) + list(extra_header or []):
        fh.write(f"# {line}\n")
    fh.write("ix,iy,count\n")
    for ix, iy in np.argwhere(h.counts > 0):
        fh.write(f"{ix},{iy},{h.counts[ix, iy]}\n")
