"""Inequality registry, seeded suites and report emission.

Every quantitative claim the library verifies is registered under a stable
check id with an anchor string stating the inequality being tested.  Checks
come in two tolerance classes:

- exact: discrete theorems (valid cube-by-cube on the grid); they must hold
  with relative slack tolerance 1e-9 or tighter and fail the run otherwise.
- reported: bounds whose constants are not pinned in the discrete model
  (grid packing norms are lower bounds of their continuum counterparts, and
  some constants are only estimated empirically).  These never fail by
  themselves; dedicated stability records assert that the estimated
  constants are reproducible across grid refinement (within 20%).

Suites: embeddings (packing norms against rearrangement norms), poincare
(upper-gradient chains in 2D plus the sharp-maximal domination), rearrange-
ment (1D gradient/rearrangement inequalities and the K-functional), oracle
(dynamic programs against exhaustive enumeration).
"""

from __future__ import annotations

import hashlib
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from garopack.generators import GeneratorSpec, SplitMix64, generate
from garopack.grid import GridFunction, cell_measure
from garopack.oscillation import (
    bmo_norm_classic,
    bmo_norm_star,
    hl_maximal,
    sharp_maximal,
)
from garopack.packing import (
    PackingObjective,
    evaluate_witness,
    garo_norm,
    holder_conjugate,
    jn_norm,
)
from garopack.rearrange import (
    eval_avg,
    eval_star,
    k_functional,
    rearrangement,
    reconstruct_avg,
    weak_lorentz_norm,
    weak_oscillation_norm,
)
from garopack.sobolev import (
    assembled_weak_constant,
    centered,
    fit_upper_gradient_constant,
    gradient_rearrangement_check,
    lp_norm,
    poincare_chain_critical,
    poincare_chain_subcritical,
    qp_rearrangement_check,
    weak_gn_check,
)

__all__ = ["Config", "CheckRecord", "REGISTRY", "SUITES", "run_suite", "emit_report"]

EXACT_TOL = 1e-9
IDENTITY_TOL = 1e-12
STABILITY_SPREAD = 0.2

CSV_HEADER = "check_id,anchor,seed,kind,n,N,p,lhs,rhs,slack,status"


@dataclass(frozen=True)
class Config:
    n_values: tuple[int, ...] = (1, 2)
    resolutions_1d: tuple[int, ...] = (64, 256, 1024)
    resolutions_2d: tuple[int, ...] = (8, 16, 32)
    seeds: int = 3
    seed0: int = 20230901
    p_values: tuple[float, ...] = (1.25, 1.5, 2.0, 3.0, 8.0)
    family_1d: str = "all_grid"
    family_2d: str = "dyadic"
    oracle_seeds: int = 100
    oracle_max_cells: int = 10
    random_t_count: int = 100
    qp_exponents: tuple[float, float] = (2.0, 1.5)


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    anchor: str
    seed: int
    kind: str
    n: int
    N: int
    p: float | None
    lhs: float
    rhs: float
    status: str
    digest: str = ""

    @property
    def slack(self) -> float:
        if self.lhs == 0.0:
            return math.inf
        return self.rhs / self.lhs


REGISTRY = {
    "garo_le_two_jn": "GaRo_p(f) <= 2 JN_p(f) over the same packing family",
    "garo_le_weak_lorentz": "GaRo_p(f) <= (2p/(p-1)) sup_t t^{1/p} f*(t)",
    "weak_osc_le_garo_plus_l1": (
        "sup_t t^{1/p}(f**-f*) <= 2^{n/p'+1} GaRo_p(f) + (4/|Q0|)^{1/p'} ||f||_1"
    ),
    "garo_inf_eq_bmo_star": "GaRo_inf(f) = sup_Q D(f,Q)/|Q|^2 (exact identity)",
    "bmo_star_vs_classic": "sup_Q Omega <= sup_Q D/|Q|^2 <= 2 sup_Q Omega",
    "jn_weak_lorentz_embedding": (
        "||f-f_Q0||*_{L(p,inf)} <= 2 p(2^{n/p'+1}+4^{1/p'}) JN_p(f)"
    ),
    "weak_lorentz_le_garo": (
        "||f-f_Q0||*_{L(p,inf)} <= p(2^{n/p'+1}+4^{1/p'}) GaRo_p(f-f_Q0)"
    ),
    "weak_lorentz_le_garo_stability": (
        "min slack of weak_lorentz_le_garo varies < 20% across resolutions"
    ),
    "avg_reconstruction": "f**(t) = int_t^inf (f**(s)-f*(s)) ds/s (L1 extension)",
    "k_functional_identity": (
        "t f**(t) equals the best-truncation K(t; L1, Linf) and is concave"
    ),
    "poincare_sub_garo": "GaRo_{p*}(f) <= 2 c(f) ||g||_p with 1/p* = 1/p - 1/n",
    "poincare_sub_garo_centered": "GaRo_{p*}(f-f_Q0) <= 2 c(f) ||g||_p",
    "poincare_sub_weak_lorentz": (
        "||f-f_Q0||*_{L(p*,inf)} <= p*(2^{n/p*'+1}+4^{1/p*'}) GaRo_{p*}(f-f_Q0)"
    ),
    "poincare_crit_garo": "GaRo_inf(f-f_Q0) <= 2 c(f) ||g||_n (p = n)",
    "poincare_crit_bmo": "GaRo_inf(f-f_Q0) equals the double-integral BMO norm",
    "sharp_le_gradient_maximal": (
        "sup_{Q containing x} Omega(f,Q)/l(Q) <= c(f) Mg(x) pointwise, same family"
    ),
    "osc_vs_gradient_rearrangement": (
        "f**(t)-f*(t) <= c t^{1/n} g**(t) for t < |Q0|/2; c estimated"
    ),
    "osc_vs_gradient_rearrangement_stability": (
        "estimated c of osc_vs_gradient_rearrangement varies < 20% across N"
    ),
    "weak_gagliardo_nirenberg": "||f-f_Q0||*_{L(n',inf)} <= c(n) ||g||_1; c estimated",
    "weak_gagliardo_nirenberg_stability": (
        "estimated c(n) grows < 20% per refinement step"
    ),
    "l1_absorption": "||f-f_Q0||_1 <= c(f) |Q0|^{1/n} ||g||_1 (Q = Q0 instance)",
    "qp_oscillation_rearrangement": (
        "t^{1/n}((1/t) int_0^t (f**-f*)^q)^{1/q} <= C c(f) ((g^p)**(t))^{1/p}"
    ),
    "qp_oscillation_rearrangement_stability": (
        "estimated C of qp_oscillation_rearrangement varies < 20% across N"
    ),
    "herz_stein_ratio": "(Mf)*(t) <= c f**(t) at breakpoints; empirical c <= 3",
    "dp_vs_exhaustive_jn_all_grid": "all-interval JN DP equals exhaustive max",
    "dp_vs_exhaustive_garo_all_grid": "coverage-table GaRo DP equals exhaustive max",
    "dp_vs_exhaustive_jn_dyadic": "dyadic-tree JN DP equals exhaustive max",
    "dp_vs_exhaustive_garo_dyadic": "dyadic frontier GaRo DP equals exhaustive max",
    "witness_reevaluation": "witness packings reproduce the reported norm value",
}

SUITES = {
    "embeddings": (
        "garo_le_two_jn",
        "garo_le_weak_lorentz",
        "weak_osc_le_garo_plus_l1",
        "garo_inf_eq_bmo_star",
        "bmo_star_vs_classic",
        "jn_weak_lorentz_embedding",
        "weak_lorentz_le_garo",
        "weak_lorentz_le_garo_stability",
    ),
    "poincare": (
        "poincare_sub_garo",
        "poincare_sub_garo_centered",
        "poincare_sub_weak_lorentz",
        "poincare_crit_garo",
        "poincare_crit_bmo",
        "sharp_le_gradient_maximal",
    ),
    "rearrangement": (
        "avg_reconstruction",
        "k_functional_identity",
        "osc_vs_gradient_rearrangement",
        "osc_vs_gradient_rearrangement_stability",
        "weak_gagliardo_nirenberg",
        "weak_gagliardo_nirenberg_stability",
        "l1_absorption",
        "qp_oscillation_rearrangement",
        "qp_oscillation_rearrangement_stability",
        "herz_stein_ratio",
    ),
    "oracle": (
        "dp_vs_exhaustive_jn_all_grid",
        "dp_vs_exhaustive_garo_all_grid",
        "dp_vs_exhaustive_jn_dyadic",
        "dp_vs_exhaustive_garo_dyadic",
        "witness_reevaluation",
    ),
}

ANALYTIC_KINDS = ("linear", "power", "log", "step", "sawtooth", "indicator", "bump")


def _digest(f: GridFunction, extra: str = "") -> str:
    h = hashlib.sha256()
    h.update(f.values.tobytes())
    h.update(f"{f.dim},{f.cells_per_axis},{f.side},{extra}".encode())
    return h.hexdigest()[:12]


def _rec(
    check_id: str,
    spec: GeneratorSpec,
    lhs: float,
    rhs: float,
    status: str,
    p: float | None = None,
    digest: str = "",
) -> CheckRecord:
    return CheckRecord(
        check_id, REGISTRY[check_id], spec.seed, spec.kind, spec.n, spec.N, p,
        float(lhs), float(rhs), status, digest,
    )


def _exact(lhs: float, rhs: float, tol: float = EXACT_TOL) -> str:
    return "pass" if rhs >= lhs * (1.0 - tol) - 1e-300 else "fail"


def _close(a: float, b: float, tol: float = IDENTITY_TOL) -> str:
    return "pass" if math.isclose(a, b, rel_tol=tol, abs_tol=tol) else "fail"


# ---------------------------------------------------------------------------
# generator grids
# ---------------------------------------------------------------------------


def _specs_for(config: Config, n: int, N: int, kinds=None) -> list[GeneratorSpec]:
    out = []
    if n == 1:
        base = [
            GeneratorSpec("linear", 1, N),
            GeneratorSpec("power", 1, N, params={"alpha": 0.5}),
            GeneratorSpec("power", 1, N, params={"alpha": 1.0 / 3.0}),
            GeneratorSpec("log", 1, N),
            GeneratorSpec("step", 1, N, params={"jump": 0.25}),
            GeneratorSpec("sawtooth", 1, N),
            GeneratorSpec("indicator", 1, N),
        ]
    else:
        base = [
            GeneratorSpec("linear", n, N),
            GeneratorSpec("bump", n, N),
            GeneratorSpec("power", n, N, params={"alpha": 0.5}),
            GeneratorSpec("sawtooth", n, N),
            GeneratorSpec("indicator", n, N),
        ]
    if kinds is not None:
        base = [s for s in base if s.kind in kinds]
    out.extend(base)
    if kinds is None or "random_pc" in kinds:
        for k in range(config.seeds):
            out.append(GeneratorSpec("random_pc", n, N, seed=config.seed0 + k))
    return out


def _resolutions(config: Config, n: int) -> tuple[int, ...]:
    return config.resolutions_1d if n == 1 else config.resolutions_2d


def _family(config: Config, n: int) -> str:
    return config.family_1d if n == 1 else config.family_2d


# ---------------------------------------------------------------------------
# embeddings suite
# ---------------------------------------------------------------------------


def _embedding_records(config: Config) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    min_slacks: dict[tuple[int, int], float] = {}
    for n in config.n_values:
        family = _family(config, n)
        for N in _resolutions(config, n):
            for spec in _specs_for(config, n, N):
                f, _ = generate(spec)
                dig = _digest(f)
                fc = centered(f)
                r = rearrangement(f)
                rc = rearrangement(fc)
                l1 = float(np.abs(f.values).sum() * cell_measure(f))
                total = r.total_measure
                garo_inf = garo_norm(f, math.inf, family).value
                bstar = bmo_norm_star(f, family)
                bclassic = bmo_norm_classic(f, family)
                records.append(_rec(
                    "garo_inf_eq_bmo_star", spec, garo_inf, bstar,
                    _close(garo_inf, bstar), math.inf, dig,
                ))
                st = ("pass" if bstar <= 2 * bclassic * (1 + IDENTITY_TOL)
                      and bclassic <= bstar * (1 + IDENTITY_TOL) else "fail")
                records.append(_rec(
                    "bmo_star_vs_classic", spec, bstar, 2 * bclassic, st, None, dig,
                ))
                for p in config.p_values:
                    pp = holder_conjugate(p)
                    jn = jn_norm(f, p, family).value
                    garo = garo_norm(f, p, family).value
                    lorentz = weak_lorentz_norm(r, p)
                    wosc = weak_oscillation_norm(r, p)
                    records.append(_rec(
                        "garo_le_two_jn", spec, garo, 2.0 * jn,
                        _exact(garo, 2.0 * jn, IDENTITY_TOL), p, dig,
                    ))
                    records.append(_rec(
                        "garo_le_weak_lorentz", spec, garo,
                        2.0 * p / (p - 1.0) * lorentz,
                        _exact(garo, 2.0 * p / (p - 1.0) * lorentz), p, dig,
                    ))
                    rhs = 2.0 ** (n / pp + 1.0) * garo + (4.0 / total) ** (1.0 / pp) * l1
                    records.append(_rec(
                        "weak_osc_le_garo_plus_l1", spec, wosc, rhs, "reported", p, dig,
                    ))
                    # packing norms are shift invariant, so the centered GaRo
                    # and JN norms equal the uncentered values
                    cnp = assembled_weak_constant(n, p)
                    lor_c = weak_lorentz_norm(rc, p)
                    records.append(_rec(
                        "weak_lorentz_le_garo", spec, lor_c, cnp * garo,
                        "reported", p, dig,
                    ))
                    records.append(_rec(
                        "jn_weak_lorentz_embedding", spec, lor_c, cnp * 2.0 * jn,
                        "reported", p, dig,
                    ))
                    if spec.kind in ANALYTIC_KINDS and lor_c > 0:
                        key = (n, N)
                        slack = cnp * garo / lor_c
                        min_slacks[key] = min(min_slacks.get(key, math.inf), slack)
    for n in config.n_values:
        per_res = [min_slacks[(n, N)] for N in _resolutions(config, n)
                   if (n, N) in min_slacks]
        if len(per_res) < 2:
            continue
        spread = (max(per_res) - min(per_res)) / min(per_res)
        records.append(CheckRecord(
            "weak_lorentz_le_garo_stability",
            REGISTRY["weak_lorentz_le_garo_stability"],
            0, "aggregate", n, 0, None, spread, STABILITY_SPREAD,
            "pass" if spread <= STABILITY_SPREAD else "fail",
        ))
    return records


# ---------------------------------------------------------------------------
# poincare suite (upper-gradient chains, 2D)
# ---------------------------------------------------------------------------


def _poincare_records(config: Config) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    if 2 in config.n_values:
        family = config.family_2d
        for N in config.resolutions_2d:
            for spec in _specs_for(config, 2, N):
                f, g = generate(spec)
                if g is None:
                    continue
                dig = _digest(f)
                for p in (1.25, 1.5):
                    pair = fit_upper_gradient_constant(f, g, p, family)
                    rep = poincare_chain_subcritical(pair, family)
                    e = rep.entry("garo_conjugate")
                    records.append(_rec(
                        "poincare_sub_garo", spec, e.lhs, e.rhs, e.status, p, dig))
                    e = rep.entry("garo_conjugate_centered")
                    records.append(_rec(
                        "poincare_sub_garo_centered", spec, e.lhs, e.rhs, e.status,
                        p, dig))
                    e = rep.entry("weak_lorentz_centered")
                    records.append(_rec(
                        "poincare_sub_weak_lorentz", spec, e.lhs, e.rhs, "reported",
                        p, dig))
                pair = fit_upper_gradient_constant(f, g, 2.0, family)
                rep = poincare_chain_critical(pair, family)
                e = rep.entry("garo_inf_centered")
                records.append(_rec(
                    "poincare_crit_garo", spec, e.lhs, e.rhs, e.status, 2.0, dig))
                e = rep.entry("bmo_identity")
                records.append(_rec(
                    "poincare_crit_bmo", spec, e.lhs, e.rhs, e.status, math.inf, dig))
    records.extend(_sharp_maximal_records(config))
    return records


def _sharp_maximal_records(config: Config) -> list[CheckRecord]:
    """S_1 pointwise domination over the same exhaustive cube family."""
    records: list[CheckRecord] = []
    setups = []
    if 1 in config.n_values:
        setups.append((1, 64))
    if 2 in config.n_values:
        setups.extend((2, N) for N in config.resolutions_2d if N <= 16)
    for n, N in setups:
        for spec in _specs_for(config, n, N):
            f, g = generate(spec)
            if g is None:
                continue
            pair = fit_upper_gradient_constant(f, g, 1.0, "all_grid")
            if not pair.finite:
                continue
            sharp = sharp_maximal(f, 1.0 / n, "all_grid").values
            mg = hl_maximal(g, "all_grid").values
            bound = pair.c_f * mg
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(sharp > 0, sharp / bound, 0.0)
            worst = float(np.max(ratios)) if ratios.size else 0.0
            records.append(_rec(
                "sharp_le_gradient_maximal", spec, worst, 1.0,
                _exact(worst, 1.0, IDENTITY_TOL), 1.0, _digest(f)))
    return records


# ---------------------------------------------------------------------------
# rearrangement suite (1D gradient pairs, K-functional, reconstruction)
# ---------------------------------------------------------------------------


def _random_ts(r, count: int, seed: int) -> np.ndarray:
    rng = SplitMix64(seed)
    total = r.total_measure
    return np.array([rng.next_float() * total for _ in range(count)])


def _truncation_k_many(r, ts: np.ndarray) -> np.ndarray:
    """Independent K-functional oracle: best split of f into bounded plus
    integrable parts.  The objective sum_k (v_k - lam)_+ m_k + t lam is
    piecewise linear in lam, so the optimum sits at a plateau value or 0;
    the per-lambda upfront costs are computed by direct clipping."""
    vals, meas = r.values, r.measures
    upfront = (np.clip(vals[None, :] - vals[:, None], 0.0, None)
               * meas[None, :]).sum(axis=1)
    cand = upfront[None, :] + np.outer(ts, vals)
    return np.minimum(cand.min(axis=1), r.total_integral)


def _rearrangement_records(config: Config) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    if 1 not in config.n_values:
        return records
    c_hats: dict[tuple[str, float | None, str], dict[int, float]] = {}
    for N in config.resolutions_1d:
        for spec in _specs_for(config, 1, N):
            f, g = generate(spec)
            dig = _digest(f)
            r = rearrangement(f)
            ts = np.concatenate([
                r.breakpoints[1:], _random_ts(r, config.random_t_count,
                                              config.seed0 + N)])
            ts = ts[(ts > 0) & (ts <= r.total_measure)]
            err = 0.0
            kvals_t = np.array([k_functional(r, t) for t in ts])
            oracle_k = _truncation_k_many(r, ts)
            kerr = float(np.max(np.abs(kvals_t - oracle_k)
                                / np.maximum(1.0, np.abs(kvals_t))))
            for t in ts:
                a = eval_avg(r, t)
                b = reconstruct_avg(r, t)
                err = max(err, abs(a - b) / max(1.0, abs(a)))
            records.append(_rec(
                "avg_reconstruction", spec, err, EXACT_TOL,
                "pass" if err <= EXACT_TOL else "fail", None, dig))
            grid_t = np.linspace(r.total_measure / 64, r.total_measure, 64)
            kvals = np.array([k_functional(r, t) for t in grid_t])
            concave = float(np.max(np.diff(kvals, 2))) if len(kvals) > 2 else 0.0
            nondecr = float(-np.min(np.diff(kvals)))
            kok = kerr <= EXACT_TOL and concave <= IDENTITY_TOL and nondecr <= IDENTITY_TOL
            records.append(_rec(
                "k_functional_identity", spec, kerr, EXACT_TOL,
                "pass" if kok else "fail", None, dig))

            if g is None:
                continue
            pair1 = fit_upper_gradient_constant(f, g, 1.0, config.family_1d)
            rep = gradient_rearrangement_check(pair1)
            e = rep.entry("osc_vs_gradient")
            records.append(_rec(
                "osc_vs_gradient_rearrangement", spec, e.extras["c_hat"],
                e.extras["sup_ratio"], e.status, 1.0, dig))
            _collect(c_hats, ("osc", None, spec.kind), spec, N, e.extras["c_hat"])

            gn = weak_gn_check(pair1)
            e = gn.entry("weak_lorentz_vs_gradient_l1")
            records.append(_rec(
                "weak_gagliardo_nirenberg", spec, e.lhs, e.rhs, "reported", None, dig))
            _collect(c_hats, ("gn", None, spec.kind), spec, N, e.extras["c_est"])
            e = gn.entry("l1_absorption")
            records.append(_rec(
                "l1_absorption", spec, e.lhs, e.rhs, e.status, 1.0, dig))

            q, p = config.qp_exponents
            pairp = fit_upper_gradient_constant(f, g, p, config.family_1d)
            qp = qp_rearrangement_check(pairp, q)
            e = qp.entry("qp_oscillation")
            records.append(_rec(
                "qp_oscillation_rearrangement", spec, e.extras["C"], 0.0,
                e.status, p, dig))
            _collect(c_hats, ("qp", p, spec.kind), spec, N, e.extras["C"])

        if N <= 64:
            records.extend(_herz_stein_records(config, N))
    records.extend(_stability_records(config, c_hats))
    return records


def _collect(store, key, spec, N, value) -> None:
    if spec.kind in ANALYTIC_KINDS:
        store.setdefault(key, {})[N] = value


# stability is asserted only where the estimated constant is meaningful
# under refinement: exemplars whose paired gradient has an N-uniform
# discrete norm (a singular g, or g^p outside L1, legitimately drifts) and
# whose plateau structure is resolved at the coarsest N; other kinds carry
# the stability spread as a reported diagnostic
_ASSERTED_STABILITY = {
    "osc": ("linear", "power", "log", "step", "indicator"),
    "gn": ANALYTIC_KINDS,
    "qp": ("linear", "sawtooth"),
}


def _stability_records(config: Config, store) -> list[CheckRecord]:
    ids = {"osc": "osc_vs_gradient_rearrangement_stability",
           "gn": "weak_gagliardo_nirenberg_stability",
           "qp": "qp_oscillation_rearrangement_stability"}
    records = []
    for (tag, p, kind), by_n in sorted(store.items()):
        vals = [by_n[N] for N in sorted(by_n)]
        if len(vals) < 2:
            continue
        if tag == "gn":
            # non-increasing under refinement, within 20 percent per step
            ratios = [b / a if a > 0 else (0.0 if b == 0 else math.inf)
                      for a, b in zip(vals, vals[1:])]
            worst = max(ratios)
            ok = worst <= 1.0 + STABILITY_SPREAD
            lhs, rhs = worst, 1.0 + STABILITY_SPREAD
        else:
            lo, hi = min(vals), max(vals)
            spread = 0.0 if hi == 0 else (hi - lo) / (lo if lo > 0 else hi)
            ok = spread <= STABILITY_SPREAD
            lhs, rhs = spread, STABILITY_SPREAD
        if kind in _ASSERTED_STABILITY[tag]:
            status = "pass" if ok else "fail"
        else:
            status = "reported"
        records.append(CheckRecord(
            ids[tag], REGISTRY[ids[tag]], 0, kind, 1, 0, p, float(lhs), float(rhs),
            status))
    return records


def _herz_stein_records(config: Config, N: int) -> list[CheckRecord]:
    records = []
    for spec in _specs_for(config, 1, N):
        f, _ = generate(spec)
        r = rearrangement(f)
        if r.total_integral == 0:
            continue
        mf = hl_maximal(f, "all_grid")
        rm = rearrangement(mf)
        worst = 0.0
        for t in r.breakpoints[1:]:
            denom = eval_avg(r, t)
            if denom > 0:
                worst = max(worst, eval_star(rm, t) / denom)
        records.append(_rec(
            "herz_stein_ratio", spec, worst, 3.0, "reported", None, _digest(f)))
    return records


# ---------------------------------------------------------------------------
# oracle suite
# ---------------------------------------------------------------------------


_INCIDENCE_CACHE: dict[tuple[int, str], np.ndarray] = {}


def _incidence(n_cells: int, family: str) -> np.ndarray:
    """Dense packing-by-cube incidence matrix; the packing structure only
    depends on N and the family, so it is cached across seeds."""
    key = (n_cells, family)
    if key not in _INCIDENCE_CACHE:
        from garopack.packing import (
            _exhaustive_id_lists_1d,
            _exhaustive_id_lists_dyadic,
        )

        if family == "all_grid":
            id_lists = _exhaustive_id_lists_1d(n_cells)
            ncols = n_cells * (n_cells + 1) // 2
        else:
            id_lists = _exhaustive_id_lists_dyadic(n_cells, 1)
            ncols = 2 * n_cells - 1
        lens = np.array([len(ids) for ids in id_lists])
        rows = np.repeat(np.arange(len(id_lists)), lens)
        cols = (np.concatenate([np.array(ids, dtype=np.int64)
                                for ids in id_lists if ids])
                if lens.sum() else np.empty(0, dtype=np.int64))
        inc = np.zeros((len(id_lists), ncols))
        inc[rows, cols] = 1.0
        _INCIDENCE_CACHE[key] = inc
    return _INCIDENCE_CACHE[key]


def _oracle_eval(f: GridFunction, family: str, objectives):
    """Exhaustive maxima for several objectives at once via the incidence
    matrix over the family's cube ids."""
    from garopack.grid import enumerate_subcubes
    from garopack.oscillation import (
        double_oscillation,
        interval_tables,
        mean_oscillation,
    )

    if family == "all_grid":
        t = interval_tables(f)
        omegas = t.omegas
        measures = t.measures
        dnorm = t.pairsum * t.cm / t.lengths
    else:
        cubes = enumerate_subcubes(f, "dyadic")
        omegas = np.array([mean_oscillation(f, q) for q in cubes])
        measures = np.array([f.cube_measure(q) for q in cubes])
        dnorm = np.array([double_oscillation(f, q) / f.cube_measure(q) for q in cubes])
    inc = _incidence(f.cells_per_axis, family)
    pk_measure = inc @ measures
    garo_vals = inc @ dnorm
    out = {}
    for obj in objectives:
        if obj.kind == "jn":
            vals = inc @ (measures * omegas**obj.p)
            out[obj] = float(np.max(vals) ** (1.0 / obj.p))
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(pk_measure > 0,
                                  garo_vals / np.maximum(pk_measure, 1e-300)
                                  ** (1.0 / obj.pprime), 0.0)
            out[obj] = float(np.max(ratios))
    return out


def _oracle_records(config: Config) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    sizes = [N for N in range(4, config.oracle_max_cells + 1)]
    objectives = [PackingObjective("jn", p) for p in config.p_values]
    objectives += [PackingObjective("garo", p) for p in config.p_values]
    objectives.append(PackingObjective("garo", math.inf))
    worst: dict[str, float] = {
        "dp_vs_exhaustive_jn_all_grid": 0.0,
        "dp_vs_exhaustive_garo_all_grid": 0.0,
        "dp_vs_exhaustive_jn_dyadic": 0.0,
        "dp_vs_exhaustive_garo_dyadic": 0.0,
        "witness_reevaluation": 0.0,
    }
    for N in sizes:
        families = ["all_grid"] + (["dyadic"] if N & (N - 1) == 0 else [])
        for k in range(config.oracle_seeds):
            spec = GeneratorSpec("random_pc", 1, N, seed=config.seed0 + k)
            f, _ = generate(spec)
            for family in families:
                oracle = _oracle_eval(f, family, objectives)
                for obj in objectives:
                    if obj.kind == "jn":
                        res = jn_norm(f, obj.p, family)
                        key = f"dp_vs_exhaustive_jn_{family}"
                    else:
                        res = garo_norm(f, obj.p, family)
                        key = f"dp_vs_exhaustive_garo_{family}"
                    rel = abs(res.value - oracle[obj]) / max(1.0, oracle[obj])
                    worst[key] = max(worst[key], rel)
                    wit = evaluate_witness(f, res)
                    wrel = abs(wit - res.value) / max(1.0, res.value)
                    worst["witness_reevaluation"] = max(
                        worst["witness_reevaluation"], wrel)
    for key, val in worst.items():
        tol = 1e-10 if key != "witness_reevaluation" else IDENTITY_TOL
        records.append(CheckRecord(
            key, REGISTRY[key], config.seed0, "random_pc", 1,
            config.oracle_max_cells, None, float(val), tol,
            "pass" if val <= tol else "fail"))
    return records


# ---------------------------------------------------------------------------
# suite driver and report emission
# ---------------------------------------------------------------------------


def run_suite(suite_id: str, config: Config | None = None) -> list[CheckRecord]:
    config = config or Config()
    runners = {
        "embeddings": _embedding_records,
        "poincare": _poincare_records,
        "rearrangement": _rearrangement_records,
        "oracle": _oracle_records,
    }
    if suite_id == "all":
        records = []
        for name in ("embeddings", "poincare", "rearrangement", "oracle"):
            records.extend(runners[name](config))
    elif suite_id in runners:
        records = runners[suite_id](config)
    else:
        raise ValueError(f"unknown suite {suite_id!r}; want one of "
                         f"{sorted(runners) + ['all']}")
    records.sort(key=lambda r: (r.check_id, r.seed, r.kind, r.n, r.N,
                                _fmt_p(r.p)))
    return records


def _fmt_p(p: float | None) -> str:
    if p is None:
        return ""
    if math.isinf(p):
        return "inf"
    return repr(float(p))


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def emit_report(records: list[CheckRecord], format: str = "csv") -> bytes:
    """Render records; CSV column order is fixed, JSON is a plain array."""
    if format == "csv":
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in records:
            buf.write(",".join([
                r.check_id, '"' + r.anchor.replace('"', "'") + '"',
                str(r.seed), r.kind, str(r.n), str(r.N), _fmt_p(r.p),
                _fmt(r.lhs), _fmt(r.rhs), _fmt(r.slack), r.status,
            ]) + "\n")
        return buf.getvalue().encode()
    if format == "json":
        payload = [
            {
                "check_id": r.check_id, "anchor": r.anchor, "seed": r.seed,
                "kind": r.kind, "n": r.n, "N": r.N, "p": _fmt_p(r.p),
                "lhs": _fmt(r.lhs), "rhs": _fmt(r.rhs), "slack": _fmt(r.slack),
                "status": r.status, "digest": r.digest,
            }
            for r in records
        ]
        return json.dumps(payload, indent=1, sort_keys=True).encode()
    raise ValueError(f"unknown report format {format!r}")
