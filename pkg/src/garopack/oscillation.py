"""Cube-oscillation functionals and maximal operators.

For a subcube Q the two oscillation measurements are

  mean_oscillation   Omega(f, Q) = (1/|Q|) int_Q |f - f_Q|
  double_oscillation D(f, Q)     = int_Q int_Q |f(x) - f(y)| dx dy

bridged cube-by-cube by Omega <= D/|Q| <= 2 Omega.  BMO norms are suprema
of these over a cube family; the sharp and Hardy-Littlewood maximal
functions take per-cell suprema over the cubes containing the cell.

Maximal operators enumerate the family exhaustively and are therefore
size-guarded (N <= 64 in 1D, N <= 16 in 2D).
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from garopack import kernels
from garopack.grid import (
    Cube,
    GridFunction,
    cell_measure,
    enumerate_subcubes,
    mean,
)

__all__ = [
    "OscillationReport",
    "IntervalTables",
    "interval_tables",
    "oscillation_report",
    "mean_oscillation",
    "double_oscillation",
    "bmo_norm_classic",
    "bmo_norm_star",
    "sharp_maximal",
    "hl_maximal",
    "family_oscillations",
]

MAXIMAL_LIMITS = {1: 64, 2: 16}


@dataclass(frozen=True)
class OscillationReport:
    cube: Cube
    mean_osc: float
    double_osc: float


@dataclass(frozen=True, eq=False)
class IntervalTables:
    """All-interval oscillation sums for a 1D grid function.

    Flat arrays indexed by id(i, j) = j*(j-1)/2 + i for cells [i, j):
    sumabs[id]  = sum of |v_k - mean| over the interval,
    pairsum[id] = sum over ordered cell pairs of |v_a - v_b|,
    plus the matching left/right endpoint and length index arrays.
    """

    n_cells: int
    cm: float
    sumabs: np.ndarray
    pairsum: np.ndarray
    i_arr: np.ndarray
    j_arr: np.ndarray
    lengths: np.ndarray

    @property
    def omegas(self) -> np.ndarray:
        """Mean oscillation per interval (cell-measure factors cancel)."""
        return self.sumabs / self.lengths

    @property
    def measures(self) -> np.ndarray:
        return self.lengths * self.cm

    def cube_of(self, idx: int) -> Cube:
        return Cube((int(self.i_arr[idx]),), int(self.lengths[idx]))


_tables_cache: "weakref.WeakKeyDictionary[GridFunction, IntervalTables]" = (
    weakref.WeakKeyDictionary()
)
_index_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _interval_indices(n: int):
    if n not in _index_cache:
        j_arr = np.repeat(np.arange(1, n + 1), np.arange(1, n + 1))
        i_arr = np.concatenate([np.arange(j) for j in range(1, n + 1)])
        _index_cache[n] = (i_arr, j_arr, j_arr - i_arr)
    return _index_cache[n]


def interval_tables(f: GridFunction) -> IntervalTables:
    """Oscillation sums for every grid interval of a 1D function (cached)."""
    if f.dim != 1:
        raise ValueError("interval tables are defined for 1D grids only")
    cached = _tables_cache.get(f)
    if cached is not None:
        return cached
    sumabs, pairsum = kernels.interval_oscillation_tables(f.values)
    i_arr, j_arr, lengths = _interval_indices(f.cells_per_axis)
    t = IntervalTables(
        f.cells_per_axis, cell_measure(f), sumabs, pairsum, i_arr, j_arr, lengths
    )
    _tables_cache[f] = t
    return t


def mean_oscillation(f: GridFunction, q: Cube) -> float:
    """Omega(f, Q): average of |f - f_Q| over Q (exact cell sum)."""
    vals = f.cube_values(q)
    return float(np.abs(vals - vals.mean()).mean())


def _pairsum(vals: np.ndarray) -> float:
    # sum over ordered pairs of |v_a - v_b| via sort + prefix coefficients
    srt = np.sort(vals)
    m = srt.size
    coef = 2.0 * np.arange(m) - (m - 1)
    return float(2.0 * (srt * coef).sum())


def double_oscillation(f: GridFunction, q: Cube) -> float:
    """D(f, Q) = unnormalized double integral of |f(x) - f(y)| over Q x Q."""
    vals = f.cube_values(q)
    return _pairsum(vals) * cell_measure(f) ** 2


def oscillation_report(f: GridFunction, q: Cube) -> OscillationReport:
    return OscillationReport(q, mean_oscillation(f, q), double_oscillation(f, q))


_family_cache: "weakref.WeakKeyDictionary[GridFunction, dict]" = (
    weakref.WeakKeyDictionary()
)


def family_oscillations(f: GridFunction, family: str):
    """(cube, Omega, D) for every cube of the family, cached per function."""
    per_f = _family_cache.setdefault(f, {})
    if family not in per_f:
        cm = cell_measure(f)
        out = []
        if f.dim == 1 and family == "all_grid":
            t = interval_tables(f)
            omegas = t.omegas
            ds = t.pairsum * cm * cm
            for idx in range(len(omegas)):
                out.append((t.cube_of(idx), float(omegas[idx]), float(ds[idx])))
        else:
            for q in enumerate_subcubes(f, family):
                vals = f.cube_values(q)
                om = float(np.abs(vals - vals.mean()).mean())
                out.append((q, om, _pairsum(vals) * cm * cm))
        per_f[family] = out
    return per_f[family]


def bmo_norm_classic(f: GridFunction, family: str = "all_grid") -> float:
    """sup over the family of the mean oscillation Omega(f, Q)."""
    if f.dim == 1 and family == "all_grid":
        return float(np.max(interval_tables(f).omegas))
    return max(om for _, om, _ in family_oscillations(f, family))


def bmo_norm_star(f: GridFunction, family: str = "all_grid") -> float:
    """sup over the family of D(f, Q) / |Q|^2 (double-integral BMO norm)."""
    if f.dim == 1 and family == "all_grid":
        t = interval_tables(f)
        # D/|Q|^2 = pairsum * cm^2 / (len * cm)^2 = pairsum / len^2
        return float(np.max(t.pairsum / t.lengths.astype(np.float64) ** 2))
    best = 0.0
    for q, _, d in family_oscillations(f, family):
        mq = f.cube_measure(q)
        best = max(best, d / (mq * mq))
    return best


def _check_maximal_size(f: GridFunction) -> None:
    limit = MAXIMAL_LIMITS.get(f.dim)
    if limit is not None and f.cells_per_axis > limit:
        raise ValueError(
            f"maximal operators enumerate exhaustively; N <= {limit} required "
            f"for dim {f.dim}, got {f.cells_per_axis}"
        )


def sharp_maximal(
    f: GridFunction, beta: float = 0.0, family: str = "all_grid"
) -> GridFunction:
    """Per-cell sup over cubes containing the cell of |Q|^(-beta) Omega(f, Q).

    beta = 0 is the classical sharp maximal function; beta = 1/n is the
    variant dominated by the maximal function of an upper gradient.
    """
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    _check_maximal_size(f)
    out = np.zeros_like(f.values)
    for q, om, _ in family_oscillations(f, family):
        w = om * f.cube_measure(q) ** (-beta)
        idx = f.cube_cell_indices(q)
        np.maximum.at(out, idx, w)
    return f.with_values(out)


def hl_maximal(f: GridFunction, family: str = "all_grid") -> GridFunction:
    """Hardy-Littlewood maximal function: per-cell sup of mean(|f|, Q)."""
    _check_maximal_size(f)
    absf = f.with_values(np.abs(f.values))
    out = np.zeros_like(f.values)
    for q in enumerate_subcubes(f, family):
        m = mean(absf, q)
        idx = f.cube_cell_indices(q)
        np.maximum.at(out, idx, m)
    return f.with_values(out)
