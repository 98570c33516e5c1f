"""Packing-supremum norms: JN_p and the Garsia-Rodemich constants.

Both norms are suprema over packings (finite families of subcubes with
disjoint interiors).  Three engines are provided:

- all_grid (1D): exact dynamic programs over every grid interval.  JN_p is
  a max-weight disjoint-interval problem; the GaRo ratio is maximized via a
  coverage-indexed value table whose nondominated points form a Pareto
  frontier (measure is quantized by the cell measure, so frontiers stay
  small).
- dyadic (any dimension): bottom-up tree DP merging child frontiers.
- exhaustive: brute-force enumeration of every packing, size-guarded; kept
  as the oracle the DPs are tested against.

The GaRo norm is computed as sup over nonempty packings of
(sum_i D(f,Q_i)/|Q_i|) / (sum_i |Q_i|)^{1/p'}, the least admissible
constant in the defining inequality.  Every computed value is a lower
bound for the continuum norm since only grid-aligned cubes enter.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from garopack import kernels
from garopack.grid import (
    Cube,
    GridFunction,
    Packing,
    cell_measure,
    enumerate_subcubes,
    validate_packing,
)
from garopack.oscillation import (
    double_oscillation,
    family_oscillations,
    interval_tables,
    mean_oscillation,
)

__all__ = [
    "PackingObjective",
    "ParetoFrontier",
    "NormResult",
    "packing_sum",
    "jn_norm",
    "garo_norm",
    "pareto_frontier",
    "exhaustive_packings",
    "evaluate_witness",
]

P_CAP = 64.0
EXHAUSTIVE_MAX_CELLS_1D = 12
EXHAUSTIVE_MAX_LEAVES_DYADIC = 64
EXHAUSTIVE_MAX_PACKINGS = 1_000_000


def _count_packings_1d(n: int) -> int:
    c = [1]
    s = 1
    for _ in range(n):
        nxt = c[-1] + s
        c.append(nxt)
        s += nxt
    return c[n]


def _count_packings_dyadic(n_cells: int, dim: int) -> int:
    t = 2
    s = 1
    while s < n_cells:
        s *= 2
        t = 1 + t ** (2**dim)
    return t


def _check_p(p: float, allow_inf: bool) -> float:
    p = float(p)
    if math.isinf(p):
        if not allow_inf:
            raise ValueError("p = inf is only valid for the GaRo norm")
        return p
    if not (1.0 < p <= P_CAP):
        raise ValueError(f"p must lie in (1, {P_CAP}] (got {p})")
    return p


def holder_conjugate(p: float) -> float:
    """p' = p/(p-1); equals 1 at p = inf."""
    return 1.0 if math.isinf(p) else p / (p - 1.0)


@dataclass(frozen=True)
class PackingObjective:
    """What a packing sum accumulates: JN(p) or GaRo(p), p = inf allowed."""

    kind: str
    p: float

    def __post_init__(self):
        if self.kind not in ("jn", "garo"):
            raise ValueError(f"kind must be 'jn' or 'garo', got {self.kind!r}")
        object.__setattr__(self, "p", _check_p(self.p, allow_inf=self.kind == "garo"))

    @property
    def pprime(self) -> float:
        return holder_conjugate(self.p)


@dataclass(frozen=True)
class ParetoFrontier:
    """Nondominated (total measure, oscillation sum) pairs, measure ascending."""

    measures: np.ndarray
    values: np.ndarray
    witnesses: tuple = ()

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(m), float(v)) for m, v in zip(self.measures, self.values)]


@dataclass(frozen=True)
class NormResult:
    kind: str
    p: float
    family: str
    value: float
    witness: Packing
    lower_bound_flag: bool = True

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "p": "inf" if math.isinf(self.p) else self.p,
            "family": self.family,
            "value": self.value,
            "witness": [[*q.offset, q.side_cells] for q in self.witness],
            "lower_bound_flag": self.lower_bound_flag,
        }


def packing_sum(
    f: GridFunction, pk: Packing, obj: PackingObjective
) -> tuple[float, float]:
    """(total measure, objective value) of one packing.

    GaRo: value = sum_i D(f,Q_i)/|Q_i|; JN: value = sum_i |Q_i| Omega_i^p.
    """
    if not validate_packing(pk, f):
        raise ValueError("invalid packing (out of bounds or overlapping interiors)")
    measure = 0.0
    value = 0.0
    for q in pk:
        mq = f.cube_measure(q)
        measure += mq
        if obj.kind == "garo":
            value += double_oscillation(f, q) / mq
        else:
            value += mq * mean_oscillation(f, q) ** obj.p
    return measure, value


def evaluate_witness(f: GridFunction, result: NormResult) -> float:
    """Recompute the norm value from the witness packing."""
    obj = PackingObjective(result.kind, result.p)
    measure, value = packing_sum(f, result.witness, obj)
    if obj.kind == "jn":
        return value ** (1.0 / obj.p)
    if measure <= 0:
        return 0.0
    return value / measure ** (1.0 / obj.pprime)


# ---------------------------------------------------------------------------
# Pareto frontier machinery (dyadic tree and 1D all_grid)
# ---------------------------------------------------------------------------


def _prune(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Indices of nondominated points: no other has m' <= m and v' >= v."""
    order = np.lexsort((-v, m))
    vs = v[order]
    keep = np.empty(len(order), dtype=bool)
    keep[0] = True
    keep[1:] = vs[1:] > np.maximum.accumulate(vs)[:-1]
    return order[keep]


def _merge_frontiers(fa, fb, track: bool):
    ma, va, wa = fa
    mb, vb, wb = fb
    cm = (ma[:, None] + mb[None, :]).ravel()
    cv = (va[:, None] + vb[None, :]).ravel()
    kept = _prune(cm, cv)
    if not track:
        return cm[kept], cv[kept], None
    nb = len(mb)
    wit = [wa[k // nb] + wb[k % nb] for k in kept]
    return cm[kept], cv[kept], wit


def _dyadic_children(q: Cube, n: int) -> list[Cube]:
    h = q.side_cells // 2
    out = []
    for bits in range(2**n):
        off = tuple(q.offset[k] + ((bits >> k) & 1) * h for k in range(n))
        out.append(Cube(off, h))
    return out


def _dyadic_frontier_node(f: GridFunction, q: Cube, track: bool):
    n = f.dim
    mq = f.cube_measure(q)
    own_m = q.side_cells**n
    own_v = double_oscillation(f, q) / mq
    if q.side_cells == 1:
        m = np.array([0, own_m], dtype=np.int64)
        v = np.array([0.0, own_v])
        wit = [(), (q,)] if track else None
    else:
        children = _dyadic_children(q, n)
        acc = _dyadic_frontier_node(f, children[0], track)
        for child in children[1:]:
            acc = _merge_frontiers(acc, _dyadic_frontier_node(f, child, track), track)
        m = np.concatenate([acc[0], [own_m]])
        v = np.concatenate([acc[1], [own_v]])
        wit = (list(acc[2]) + [(q,)]) if track else None
    kept = _prune(m, v)
    if track:
        return m[kept], v[kept], [wit[k] for k in kept]
    return m[kept], v[kept], None


def _root_cube(f: GridFunction) -> Cube:
    return Cube((0,) * f.dim, f.cells_per_axis)


def _require_pow2(f: GridFunction) -> None:
    N = f.cells_per_axis
    if N & (N - 1):
        raise ValueError(f"dyadic engines require N to be a power of 2, got {N}")


def pareto_frontier(f: GridFunction, family: str = "dyadic") -> ParetoFrontier:
    """Frontier of (packing measure, GaRo oscillation sum) over dyadic packings."""
    if family != "dyadic":
        raise ValueError("pareto_frontier supports the dyadic family")
    _require_pow2(f)
    m, v, wit = _dyadic_frontier(f)
    return ParetoFrontier(m * cell_measure(f), v, tuple(Packing(w) for w in wit))


# ---------------------------------------------------------------------------
# JN norm engines
# ---------------------------------------------------------------------------


def _jn_all_grid_1d(f: GridFunction, p: float) -> tuple[float, Packing]:
    t = interval_tables(f)
    n = t.n_cells
    weights = t.measures * t.omegas**p
    best = np.zeros(n + 1)
    take = np.full(n + 1, -1, dtype=np.int64)  # left endpoint of taken interval
    for j in range(1, n + 1):
        base = (j - 1) * j // 2
        cand = best[:j] + weights[base : base + j]
        i = int(np.argmax(cand))
        if cand[i] > best[j - 1]:
            best[j] = cand[i]
            take[j] = i
        else:
            best[j] = best[j - 1]
    cubes = []
    j = n
    while j > 0:
        i = take[j]
        if i < 0:
            j -= 1
        else:
            cubes.append(Cube((int(i),), j - int(i)))
            j = int(i)
    return float(best[n] ** (1.0 / p)), Packing(tuple(reversed(cubes)))


def _jn_dyadic_node(f: GridFunction, q: Cube, p: float) -> tuple[float, tuple]:
    own = f.cube_measure(q) * mean_oscillation(f, q) ** p
    if q.side_cells == 1:
        return 0.0, ()  # singletons have zero oscillation
    child_val = 0.0
    child_wit: tuple = ()
    for child in _dyadic_children(q, f.dim):
        cv, cw = _jn_dyadic_node(f, child, p)
        child_val += cv
        child_wit += cw
    if own > child_val:
        return own, (q,)
    return child_val, child_wit


def jn_norm(f: GridFunction, p: float, family: str = "all_grid") -> NormResult:
    """John-Nirenberg norm: sup over packings of (sum |Q_i| Omega_i^p)^{1/p}."""
    p = _check_p(p, allow_inf=False)
    if family == "all_grid":
        if f.dim != 1:
            raise ValueError(
                "all_grid JN/GaRo engines are 1D only; use the dyadic family"
            )
        value, witness = _jn_all_grid_1d(f, p)
    elif family == "dyadic":
        _require_pow2(f)
        raw, wit = _jn_dyadic_node(f, _root_cube(f), p)
        value, witness = raw ** (1.0 / p), Packing(wit)
    elif family == "exhaustive":
        value, witness = _norm_exhaustive(f, PackingObjective("jn", p), "all_grid")
    else:
        raise ValueError(f"unknown family {family!r}")
    return NormResult("jn", p, family, float(value), witness)


# ---------------------------------------------------------------------------
# GaRo norm engines
# ---------------------------------------------------------------------------


def _garo_best_from_frontier(m, v, pprime: float) -> int:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(m > 0, v / np.maximum(m, 1e-300) ** (1.0 / pprime), -1.0)
    return int(np.argmax(ratios))


# the coverage DP and the dyadic frontier do not depend on p, so per-f
# results are cached and every p (and p = inf) reuses them
_coverage_cache: "weakref.WeakKeyDictionary[GridFunction, tuple]" = (
    weakref.WeakKeyDictionary()
)
_frontier_cache: "weakref.WeakKeyDictionary[GridFunction, tuple]" = (
    weakref.WeakKeyDictionary()
)


def _coverage_table(f: GridFunction):
    cached = _coverage_cache.get(f)
    if cached is None:
        t = interval_tables(f)
        weights = t.pairsum * t.cm / t.lengths  # D_i / |Q_i|
        cached = kernels.coverage_value_table(weights, t.n_cells)
        _coverage_cache[f] = cached
    return cached


def _dyadic_frontier(f: GridFunction):
    cached = _frontier_cache.get(f)
    if cached is None:
        cached = _dyadic_frontier_node(f, _root_cube(f), track=True)
        _frontier_cache[f] = cached
    return cached


def _garo_all_grid_1d(f: GridFunction, pprime: float) -> tuple[float, Packing]:
    t = interval_tables(f)
    n = t.n_cells
    cm = t.cm
    best, choice = _coverage_table(f)
    final = best[n]
    m_cells = np.arange(n + 1)
    reachable = final > -np.inf
    m = np.where(reachable, m_cells, 0) * cm
    v = np.where(reachable, final, -np.inf)
    k = _garo_best_from_frontier(m, v, pprime)
    if v[k] <= 0.0:
        return 0.0, Packing((Cube((0,), 1),))
    # reconstruct the witness by walking the choice table
    cubes = []
    j, mm = n, int(m_cells[k])
    while j > 0:
        c = int(choice[j][mm])
        if c == -1:
            j -= 1
        else:
            cubes.append(Cube((c,), j - c))
            mm -= j - c
            j = c
    value = float(v[k] / m[k] ** (1.0 / pprime))
    return value, Packing(tuple(reversed(cubes)))


def garo_norm(f: GridFunction, p: float, family: str = "dyadic") -> NormResult:
    """Garsia-Rodemich norm: least C with
    sum_i D(f,Q_i)/|Q_i| <= C (sum_i |Q_i|)^{1/p'} over all packings,
    computed as the packing ratio supremum (empty packings excluded)."""
    p = _check_p(p, allow_inf=True)
    pprime = holder_conjugate(p)
    if family == "all_grid":
        if f.dim != 1:
            raise ValueError(
                "all_grid JN/GaRo engines are 1D only; use the dyadic family"
            )
        value, witness = _garo_all_grid_1d(f, pprime)
    elif family == "dyadic":
        _require_pow2(f)
        m, v, wit = _dyadic_frontier(f)
        meas = m * cell_measure(f)
        k = _garo_best_from_frontier(meas, v, pprime)
        if v[k] <= 0.0:
            value, witness = 0.0, Packing((_root_cube(f),))
        else:
            value = float(v[k] / meas[k] ** (1.0 / pprime))
            witness = Packing(wit[k])
    elif family == "exhaustive":
        value, witness = _norm_exhaustive(f, PackingObjective("garo", p), "all_grid")
    else:
        raise ValueError(f"unknown family {family!r}")
    return NormResult("garo", p, family, float(value), witness)


# ---------------------------------------------------------------------------
# Exhaustive enumeration (oracle)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _exhaustive_id_lists_1d(n: int) -> tuple[tuple[int, ...], ...]:
    """Every packing of grid intervals of [0, n) as tuples of interval ids.

    Follows the count recurrence c(j) = c(j-1) + sum_{i<j} c(i).
    """
    packs: list[list[tuple[int, ...]]] = [[()]]
    for j in range(1, n + 1):
        cur = list(packs[j - 1])
        base = (j - 1) * j // 2
        for i in range(j):
            iid = base + i
            cur.extend(pk + (iid,) for pk in packs[i])
        packs.append(cur)
    return tuple(packs[n])


@lru_cache(maxsize=32)
def _exhaustive_id_lists_dyadic(n_cells: int, dim: int) -> tuple[tuple[int, ...], ...]:
    """Every dyadic packing as tuples of ids into enumerate_subcubes(dyadic)."""
    dummy = GridFunction(dim, n_cells, np.zeros(n_cells**dim))
    cubes = enumerate_subcubes(dummy, "dyadic")
    index = {q: k for k, q in enumerate(cubes)}

    def node(q: Cube) -> list[tuple[int, ...]]:
        if q.side_cells == 1:
            return [(), (index[q],)]
        out = [(index[q],)]
        combos: list[tuple[int, ...]] = [()]
        for child in _dyadic_children(q, dim):
            combos = [a + b for a in combos for b in node(child)]
        out.extend(combos)
        return out

    return tuple(node(Cube((0,) * dim, n_cells)))


def exhaustive_packings(f: GridFunction, family: str = "all_grid"):
    """Yield every packing of the family exactly once (size-guarded)."""
    if family == "all_grid":
        if f.dim != 1 or f.cells_per_axis > EXHAUSTIVE_MAX_CELLS_1D:
            raise ValueError(
                f"exhaustive all_grid enumeration requires 1D with N <= "
                f"{EXHAUSTIVE_MAX_CELLS_1D}"
            )
        n = f.cells_per_axis
        i_arr = np.concatenate([np.arange(j) for j in range(1, n + 1)])
        j_arr = np.repeat(np.arange(1, n + 1), np.arange(1, n + 1))
        for ids in _exhaustive_id_lists_1d(n):
            yield Packing(
                tuple(Cube((int(i_arr[k]),), int(j_arr[k] - i_arr[k])) for k in ids)
            )
    elif family == "dyadic":
        _require_pow2(f)
        if f.cells_per_axis**f.dim > EXHAUSTIVE_MAX_LEAVES_DYADIC:
            raise ValueError(
                f"exhaustive dyadic enumeration requires at most "
                f"{EXHAUSTIVE_MAX_LEAVES_DYADIC} leaves"
            )
        if _count_packings_dyadic(f.cells_per_axis, f.dim) > EXHAUSTIVE_MAX_PACKINGS:
            raise ValueError(
                "dyadic packing count exceeds the enumeration ceiling "
                f"({EXHAUSTIVE_MAX_PACKINGS})"
            )
        cubes = enumerate_subcubes(f, "dyadic")
        for ids in _exhaustive_id_lists_dyadic(f.cells_per_axis, f.dim):
            yield Packing(tuple(cubes[k] for k in ids))
    else:
        raise ValueError(f"unknown family {family!r}")


def _norm_exhaustive(
    f: GridFunction, obj: PackingObjective, cube_family: str
) -> tuple[float, Packing]:
    best_val = 0.0
    best_pk = Packing()
    if obj.kind == "garo":
        best_pk = Packing((Cube((0,) * f.dim, 1),))
    for pk in exhaustive_packings(f, cube_family):
        measure, value = packing_sum(f, pk, obj)
        if obj.kind == "jn":
            score = value ** (1.0 / obj.p)
        elif measure > 0:
            score = value / measure ** (1.0 / obj.pprime)
        else:
            continue
        if score > best_val:
            best_val, best_pk = score, pk
    return best_val, best_pk
