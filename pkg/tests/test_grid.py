import io

import numpy as np
import pytest

from garopack.grid import (
    Cube,
    GridFunction,
    Packing,
    cell_measure,
    enumerate_subcubes,
    integrate,
    mean,
    read_grid_csv,
    validate_packing,
    write_grid_csv,
)


def test_cell_measure():
    assert cell_measure(GridFunction(1, 4, np.zeros(4))) == 0.25
    assert cell_measure(GridFunction(2, 8, np.zeros(64))) == 1 / 64
    assert cell_measure(GridFunction(1, 3, np.zeros(3), side=3.0)) == 1.0


def test_integrate_examples():
    f = GridFunction(1, 4, np.array([1.0, 2, 3, 4]))
    assert integrate(f, Cube((1,), 2)) == pytest.approx(1.25, rel=1e-12)
    const = GridFunction(2, 3, np.full(9, 7.0))
    q = Cube((0, 1), 2)
    assert integrate(const, q) == pytest.approx(7.0 * const.cube_measure(q))
    f2 = GridFunction(2, 2, np.ones(4))
    assert integrate(f2, Cube((0, 0), 2)) == pytest.approx(1.0)


def test_mean_examples():
    f = GridFunction(1, 4, np.array([1.0, 2, 3, 4]))
    assert mean(f, Cube((0,), 4)) == pytest.approx(2.5)
    assert mean(f, Cube((2,), 1)) == 3.0
    f2 = GridFunction(1, 4, np.array([0.0, 0, 4, 4]))
    assert mean(f2, Cube((2,), 2)) == 4.0


def test_mean_shift_invariance(rng):
    f = GridFunction(1, 8, rng.uniform(-2, 2, 8))
    q = Cube((2,), 4)
    c = 1.375
    shifted = f.shifted(c)
    assert mean(shifted, q) == pytest.approx(mean(f, q) - c, rel=1e-12)


def test_enumerate_counts():
    f = GridFunction(1, 4, np.zeros(4))
    assert len(enumerate_subcubes(f, "all_grid")) == 10
    assert len(enumerate_subcubes(f, "dyadic")) == 7
    f2 = GridFunction(2, 2, np.zeros(4))
    assert len(enumerate_subcubes(f2, "dyadic")) == 5
    for n_cells in (2, 3, 5):
        g1 = GridFunction(1, n_cells, np.zeros(n_cells))
        assert len(enumerate_subcubes(g1, "all_grid")) == n_cells * (n_cells + 1) // 2
        g2 = GridFunction(2, n_cells, np.zeros(n_cells**2))
        expected = sum((n_cells - s + 1) ** 2 for s in range(1, n_cells + 1))
        assert len(enumerate_subcubes(g2, "all_grid")) == expected


def test_dyadic_requires_power_of_two():
    f = GridFunction(1, 3, np.zeros(3))
    with pytest.raises(ValueError):
        enumerate_subcubes(f, "dyadic")


def test_validate_packing():
    f = GridFunction(1, 4, np.zeros(4))
    assert validate_packing(Packing(), f)
    assert validate_packing(Packing((Cube((0,), 2), Cube((2,), 2))), f)
    assert not validate_packing(Packing((Cube((0,), 3), Cube((2,), 2))), f)
    assert not validate_packing(Packing((Cube((3,), 2),)), f)  # out of bounds
    f2 = GridFunction(2, 4, np.zeros(16))
    # touching edges do not overlap interiors
    assert validate_packing(Packing((Cube((0, 0), 2), Cube((2, 0), 2))), f2)
    assert not validate_packing(Packing((Cube((0, 0), 3), Cube((2, 2), 2))), f2)


def test_integrate_additive_over_packing(rng):
    f = GridFunction(1, 10, rng.uniform(-1, 1, 10))
    pk = Packing((Cube((0,), 3), Cube((4,), 2), Cube((7,), 3)))
    assert validate_packing(pk, f)
    total = sum(integrate(f, q) for q in pk)
    covered = np.concatenate([f.cube_cell_indices(q) for q in pk])
    direct = f.values[covered].sum() * cell_measure(f)
    assert total == pytest.approx(direct, rel=1e-12)


def test_2d_cell_indexing_axis0_fastest():
    # linear index = i0 + N*i1
    vals = np.arange(9, dtype=float)
    f = GridFunction(2, 3, vals)
    q = Cube((1, 0), 2)  # i0 in {1,2}, i1 in {0,1}
    got = sorted(f.cube_values(q).tolist())
    assert got == [1.0, 2.0, 4.0, 5.0]


def test_grid_validation_errors():
    with pytest.raises(ValueError):
        GridFunction(1, 4, np.zeros(3))
    with pytest.raises(ValueError):
        GridFunction(1, 2, np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        GridFunction(1, 2, np.zeros(2), side=0.0)
    with pytest.raises(ValueError):
        Cube((0,), 0)


def test_csv_roundtrip(tmp_path, rng):
    f = GridFunction(2, 3, rng.uniform(-5, 5, 9), side=2.5)
    path = tmp_path / "f.csv"
    write_grid_csv(f, str(path))
    g = read_grid_csv(str(path))
    assert g.dim == 2 and g.cells_per_axis == 3 and g.side == 2.5
    np.testing.assert_array_equal(f.values, g.values)
    buf = io.StringIO()
    write_grid_csv(f, buf)
    buf.seek(0)
    h = read_grid_csv(buf)
    np.testing.assert_array_equal(f.values, h.values)
