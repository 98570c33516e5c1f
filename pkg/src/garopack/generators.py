"""Seeded grid-function generators for the verification suites.

Analytic kinds sample the underlying function at cell midpoints; the power
and log kinds clamp the cell containing the singularity to the value of an
adjacent cell.  Each kind with a known gradient also produces the paired
upper-gradient sample g (linear/sawtooth/bump: |grad f| analytically;
step/indicator: a unit-mass spike column at the jump; random_pc: central
differences scaled by N/L).

Randomness is splitmix64 (fixed by its reference constants), so an
identical GeneratorSpec yields a bit-identical GridFunction on every
platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from garopack.grid import GridFunction

__all__ = ["SplitMix64", "GeneratorSpec", "generate", "KINDS"]

KINDS = ("power", "log", "step", "linear", "sawtooth", "random_pc", "indicator", "bump")

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class SplitMix64:
    """Reference splitmix64: 64-bit state, golden-gamma increment."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_uint64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_uint64() >> 11) * 2.0**-53


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int = 1
    N: int = 64
    L: float = 1.0
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; want one of {KINDS}")
        if self.n < 1 or self.N < 1 or not self.L > 0:
            raise ValueError("need n >= 1, N >= 1, L > 0")

    @classmethod
    def from_string(cls, text: str) -> "GeneratorSpec":
        """Parse `kind=power,alpha=0.5,n=1,N=256,seed=7` style strings."""
        fields: dict = {}
        params: dict = {}
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "=" not in chunk:
                raise ValueError(f"expected key=value, got {chunk!r}")
            key, val = (s.strip() for s in chunk.split("=", 1))
            if key == "kind":
                fields["kind"] = val
            elif key in ("n", "N", "seed"):
                fields[key] = int(val)
            elif key == "L":
                fields["L"] = float(val)
            else:
                params[key] = float(val)
        if "kind" not in fields:
            raise ValueError(f"generator spec {text!r} is missing kind=")
        return cls(params=params, **fields)

    def label(self) -> str:
        parts = [f"kind={self.kind}", f"n={self.n}", f"N={self.N}", f"L={self.L}"]
        if self.kind == "random_pc":
            parts.append(f"seed={self.seed}")
        parts.extend(f"{k}={v}" for k, v in sorted(self.params.items()))
        return ",".join(parts)


def _midpoints(spec: GeneratorSpec) -> list[np.ndarray]:
    """Per-axis midpoint coordinates of every cell, linear-index order."""
    n, N = spec.n, spec.N
    h = spec.L / N
    ax = (np.arange(N) + 0.5) * h
    coords = []
    for k in range(n):
        shape = [1] * n
        shape[k] = N
        coords.append(np.broadcast_to(ax.reshape(shape), (N,) * n))
    # linear index = sum idx[k] N^k, axis 0 fastest: transpose so that in
    # C-order raveling the axis-0 coordinate varies fastest
    return [np.ascontiguousarray(c.transpose(tuple(reversed(range(n))))).ravel()
            for c in coords]


def _radius(spec: GeneratorSpec, x0: np.ndarray) -> np.ndarray:
    coords = _midpoints(spec)
    r2 = np.zeros_like(coords[0])
    for k in range(spec.n):
        r2 = r2 + (coords[k] - x0[k]) ** 2
    return np.sqrt(r2)


def _singular_cell(spec: GeneratorSpec, x0: np.ndarray) -> tuple[int, int]:
    """(linear index of the cell containing x0, linear index of its clamp
    neighbor along axis 0)."""
    N, h = spec.N, spec.L / spec.N
    idx = [min(int(x0[k] / h), N - 1) for k in range(spec.n)]
    lin = sum(idx[k] * N**k for k in range(spec.n))
    nb = list(idx)
    nb[0] = idx[0] + 1 if idx[0] + 1 < N else idx[0] - 1
    lin_nb = sum(nb[k] * N**k for k in range(spec.n))
    return lin, lin_nb


def _x0(spec: GeneratorSpec) -> np.ndarray:
    x0 = np.zeros(spec.n)
    for k in range(spec.n):
        x0[k] = spec.params.get("x0" if k == 0 else f"x{k}", 0.0)
    return x0


def _jump_column(spec: GeneratorSpec, jump_x: float) -> np.ndarray:
    """Boolean mask of the cells whose axis-0 cell contains jump_x (the cell
    to the left when jump_x is exactly a cell edge)."""
    N, h = spec.N, spec.L / spec.N
    col = int(math.ceil(jump_x / h)) - 1
    col = min(max(col, 0), N - 1)
    coords_idx = np.arange(N**spec.n)
    return (coords_idx % N) == col


def generate(spec: GeneratorSpec) -> tuple[GridFunction, GridFunction | None]:
    """Build (f, paired upper gradient g or None) from the spec."""
    n, N, L = spec.n, spec.N, spec.L
    h = L / N
    p = spec.params
    g_vals: np.ndarray | None = None

    if spec.kind == "linear":
        coords = _midpoints(spec)
        f_vals = np.sum(coords, axis=0)
        g_vals = np.full(N**n, math.sqrt(n))
    elif spec.kind == "indicator":
        coords = _midpoints(spec)
        f_vals = (coords[0] < L / 2).astype(np.float64)
        g_vals = np.where(_jump_column(spec, L / 2), N / L, 0.0)
    elif spec.kind == "step":
        jump = p.get("jump", 0.5) * L
        lo, hi = p.get("lo", 0.0), p.get("hi", 1.0)
        coords = _midpoints(spec)
        f_vals = np.where(coords[0] < jump, hi, lo)
        g_vals = np.where(_jump_column(spec, jump), abs(hi - lo) * N / L, 0.0)
    elif spec.kind == "sawtooth":
        teeth = int(p.get("teeth", 4))
        coords = _midpoints(spec)
        u = (coords[0] / L * teeth) % 1.0
        f_vals = 1.0 - 2.0 * np.abs(u - 0.5)
        g_vals = np.full(N**n, 2.0 * teeth / L)
    elif spec.kind == "power":
        alpha = p.get("alpha", 0.5)
        if not 0 < alpha < 1:
            raise ValueError(f"power kind needs alpha in (0,1), got {alpha}")
        x0 = _x0(spec)
        r = _radius(spec, x0)
        sing, nb = _singular_cell(spec, x0)
        f_vals = r**-alpha
        f_vals[sing] = f_vals[nb]
        g_vals = alpha * r ** (-alpha - 1.0)
        g_vals[sing] = g_vals[nb]
    elif spec.kind == "log":
        x0 = _x0(spec)
        r = _radius(spec, x0)
        sing, nb = _singular_cell(spec, x0)
        f_vals = np.log(L / r)
        f_vals[sing] = f_vals[nb]
        g_vals = 1.0 / r
        g_vals[sing] = g_vals[nb]
    elif spec.kind == "bump":
        width = p.get("width", 0.25) * L
        center = np.full(n, p.get("center", 0.5) * L)
        r = _radius(spec, center)
        f_vals = np.exp(-((r / width) ** 2))
        g_vals = 2.0 * r / width**2 * f_vals
    elif spec.kind == "random_pc":
        rng = SplitMix64(spec.seed)
        f_vals = np.array([rng.next_float() for _ in range(N**n)])
        g_vals = _central_gradient(spec, f_vals)
    else:  # pragma: no cover - guarded in __post_init__
        raise ValueError(spec.kind)

    f = GridFunction(n, N, f_vals, L)
    g = GridFunction(n, N, g_vals, L) if g_vals is not None else None
    return f, g


def _central_gradient(spec: GeneratorSpec, vals: np.ndarray) -> np.ndarray:
    """Central-difference gradient magnitude, one-sided at the boundary."""
    n, N, h = spec.n, spec.N, spec.L / spec.N
    grid = vals.reshape((N,) * n)  # C order: axis 0 of the grid is the
    # slowest linear axis, i.e. spatial axis n-1; gradient magnitude does
    # not depend on the ordering of axes
    acc = np.zeros_like(grid)
    for ax in range(n):
        d = np.gradient(grid, h, axis=ax)
        acc += d * d
    return np.sqrt(acc).ravel()
