"""Discrete geometry and measure on a uniform grid over a cube Q0.

A GridFunction is piecewise constant on the N^n cells of Q0 = [0, L)^n, so
every integral used by the oscillation and packing functionals is an exact
finite sum.  Subcubes are grid aligned; packings are finite families of
subcubes with pairwise disjoint interiors (not required to cover Q0).

Cell indexing is row-major, 0-based, axis 0 fastest:
linear index = sum_k idx[k] * N^k.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridFunction",
    "Cube",
    "Packing",
    "cell_measure",
    "integrate",
    "mean",
    "enumerate_subcubes",
    "validate_packing",
    "read_grid_csv",
    "write_grid_csv",
]


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Piecewise-constant real function on a uniform N^n grid over Q0."""

    dim: int
    cells_per_axis: int
    values: np.ndarray
    side: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.cells_per_axis < 1:
            raise ValueError(f"cells_per_axis must be >= 1, got {self.cells_per_axis}")
        if not self.side > 0:
            raise ValueError(f"side must be positive, got {self.side}")
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        expected = self.cells_per_axis**self.dim
        if vals.shape != (expected,):
            raise ValueError(
                f"values must be a flat array of {expected} entries, got shape {vals.shape}"
            )
        if not np.isfinite(vals).all():
            raise ValueError("values must all be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def total_measure(self) -> float:
        return float(self.side**self.dim)

    @property
    def cell_width(self) -> float:
        return self.side / self.cells_per_axis

    def cube_values(self, q: Cube) -> np.ndarray:
        """Flat array of the cell values inside q."""
        check_cube(self, q)
        n, N = self.dim, self.cells_per_axis
        if n == 1:
            return self.values[q.offset[0] : q.offset[0] + q.side_cells]
        view = self.values.reshape((N,) * n)
        # reshape in C order puts axis 0 (fastest) last
        slices = tuple(
            slice(q.offset[k], q.offset[k] + q.side_cells) for k in reversed(range(n))
        )
        return np.ascontiguousarray(view[slices]).ravel()

    def cube_cell_indices(self, q: Cube) -> np.ndarray:
        """Linear indices of the cells inside q."""
        check_cube(self, q)
        n, N = self.dim, self.cells_per_axis
        if n == 1:
            return np.arange(q.offset[0], q.offset[0] + q.side_cells)
        axes = [np.arange(q.offset[k], q.offset[k] + q.side_cells) for k in range(n)]
        idx = np.zeros((q.side_cells,) * n, dtype=np.int64)
        for k, ax in enumerate(axes):
            shape = [1] * n
            shape[k] = q.side_cells
            idx = idx + ax.reshape(shape) * (N**k)
        return idx.ravel()

    def cube_measure(self, q: Cube) -> float:
        return float((q.side_cells * self.cell_width) ** self.dim)

    def edge_length(self, q: Cube) -> float:
        return q.side_cells * self.cell_width

    def with_values(self, values: np.ndarray) -> GridFunction:
        return GridFunction(self.dim, self.cells_per_axis, values, self.side)

    def shifted(self, c: float) -> GridFunction:
        return self.with_values(self.values - c)


@dataclass(frozen=True, order=True)
class Cube:
    """Grid-aligned subcube: per-axis cell offset and side length in cells."""

    offset: tuple[int, ...]
    side_cells: int

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(int(o) for o in self.offset))
        if self.side_cells < 1:
            raise ValueError(f"side_cells must be >= 1, got {self.side_cells}")
        if any(o < 0 for o in self.offset):
            raise ValueError(f"offsets must be nonnegative, got {self.offset}")


@dataclass(frozen=True)
class Packing:
    """Finite family of subcubes with pairwise disjoint interiors."""

    cubes: tuple[Cube, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "cubes", tuple(self.cubes))

    def __len__(self) -> int:
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)


def check_cube(f: GridFunction, q: Cube) -> None:
    if len(q.offset) != f.dim:
        raise ValueError(f"cube has {len(q.offset)} axes, grid has {f.dim}")
    for k, o in enumerate(q.offset):
        if o + q.side_cells > f.cells_per_axis:
            raise ValueError(
                f"cube {q} exceeds grid bound {f.cells_per_axis} on axis {k}"
            )


def cell_measure(f: GridFunction) -> float:
    """Measure of a single grid cell, (L/N)^n."""
    return float(f.cell_width**f.dim)


def integrate(f: GridFunction, q: Cube) -> float:
    """Exact integral of f over q (cell sum times cell measure)."""
    return float(f.cube_values(q).sum() * cell_measure(f))


def mean(f: GridFunction, q: Cube) -> float:
    """Average f_Q = integral over q divided by |q|."""
    return float(f.cube_values(q).mean())


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def enumerate_subcubes(f: GridFunction, family: str = "all_grid") -> list[Cube]:
    """All subcubes of Q0 in the requested family.

    all_grid: every grid-aligned subcube (side s = 1..N, all offsets).
    dyadic: the dyadic tree (requires N to be a power of two), root first.
    Deterministic order: side descending for dyadic levels / ascending for
    all_grid, offsets lexicographic.
    """
    n, N = f.dim, f.cells_per_axis
    if family == "all_grid":
        cubes = []
        for s in range(1, N + 1):
            for off in itertools.product(range(N - s + 1), repeat=n):
                cubes.append(Cube(off, s))
        return cubes
    if family == "dyadic":
        if not _is_power_of_two(N):
            raise ValueError(f"dyadic family requires N to be a power of 2, got {N}")
        cubes = []
        s = N
        while s >= 1:
            for off in itertools.product(range(0, N, s), repeat=n):
                cubes.append(Cube(off, s))
            s //= 2
        return cubes
    raise ValueError(f"unknown cube family {family!r}")


def _interiors_overlap(a: Cube, b: Cube) -> bool:
    return all(
        oa < ob + b.side_cells and ob < oa + a.side_cells
        for oa, ob in zip(a.offset, b.offset)
    )


def validate_packing(p: Packing, f: GridFunction) -> bool:
    """True iff all cubes lie in Q0 and interiors are pairwise disjoint."""
    try:
        for q in p:
            check_cube(f, q)
    except ValueError:
        return False
    cubes = list(p)
    for a in range(len(cubes)):
        for b in range(a + 1, len(cubes)):
            if _interiors_overlap(cubes[a], cubes[b]):
                return False
    return True


def write_grid_csv(f: GridFunction, path_or_buf) -> None:
    """CSV format: first line `n,N,L`, then the N^n values one per line."""
    lines = [f"{f.dim},{f.cells_per_axis},{f.side!r}"]
    lines.extend(repr(float(v)) for v in f.values)
    text = "\n".join(lines) + "\n"
    if isinstance(path_or_buf, (str, bytes)):
        with open(path_or_buf, "w") as fh:
            fh.write(text)
    else:
        path_or_buf.write(text)


def read_grid_csv(path_or_buf) -> GridFunction:
    if isinstance(path_or_buf, (str, bytes)):
        with open(path_or_buf) as fh:
            text = fh.read()
    elif isinstance(path_or_buf, io.TextIOBase):
        text = path_or_buf.read()
    else:
        text = path_or_buf.read()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty grid file")
    head = lines[0].split(",")
    if len(head) != 3:
        raise ValueError(f"header must be `n,N,L`, got {lines[0]!r}")
    n, N, L = int(head[0]), int(head[1]), float(head[2])
    values = np.array([float(x) for x in lines[1:]], dtype=np.float64)
    return GridFunction(n, N, values, L)
