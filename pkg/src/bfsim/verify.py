"""Statistical verification suites driven by the CLI.

Each suite returns a JSON-serializable dict with an "ok" flag. Replica
counts can be reduced through the config's "verify" section for quick
smoke runs; defaults match the full protocol.
"""

from __future__ import annotations

import math
from typing import Dict, List

import numpy as np

from .analysis import (
    dominating_tree_sim,
    ks_two_sample,
    mann_whitney_one_sided,
    rate_test,
)
from .baseline import simulate_ogata_inverse
from .engine_bf import simulate_bf
from .models import (
    FiniteHawkesModel,
    LatticeGaussianHawkesModel,
    finite_from_couplings,
)


def _isis(times: List[float]) -> List[float]:
    return [b - a for a, b in zip(times, times[1:])]


def run_poisson_suite(cfg: dict) -> dict:
    """Degenerate-mixture reduction: lambda_empty = 1 collapses the engine
    to thinning a rate-M Poisson at constant probability, i.e. Poisson(nu)."""
    v = cfg.get("verify", {})
    n_seeds = int(v.get("seeds", 20))
    model_cfg = cfg.get("model", {})
    M = float(model_cfg.get("M", 2.0))
    model = LatticeGaussianHawkesModel(sigma=1.0, lam_empty=1.0, M=M)
    t0, t1 = float(cfg.get("t0", 0.0)), float(cfg.get("t1", 1000.0))
    base_seed = int(cfg.get("seed", 0))
    results = []
    for k in range(n_seeds):
        rec = simulate_bf(model, (0, 0), t0, t1, seed=base_seed + k)
        rt = rate_test(rec.accepted_output, model.nu, t1 - t0, alpha=0.0027)
        results.append({"seed": base_seed + k, "count": rt.count,
                        "z": rt.z, "passed": rt.passed})
    n_pass = sum(r["passed"] for r in results)
    return {
        "suite": "poisson",
        "expected_rate": model.nu,
        "runs": results,
        "passed": n_pass,
        "ok": n_pass >= n_seeds - 1,
    }


def run_oracle_suite(cfg: dict) -> dict:
    """Single-neuron finite model: the backward-forward engine against the
    inverse-transform oracle, KS on pooled inter-spike intervals plus a
    mean-count z-test."""
    v = cfg.get("verify", {})
    replicas = int(v.get("replicas", 200))
    horizon = float(v.get("horizon", 100.0))
    base_seed = int(cfg.get("seed", 0))
    model = finite_from_couplings([(0, 0)], [[0.5]], M=2.0)

    isis_bf: List[float] = []
    isis_or: List[float] = []
    counts_bf: List[int] = []
    counts_or: List[int] = []
    for k in range(replicas):
        rec = simulate_bf(model, (0, 0), 0.0, horizon, seed=base_seed + k)
        isis_bf.extend(_isis(rec.accepted_output))
        counts_bf.append(rec.accepted_count)
        trains = simulate_ogata_inverse(model, 0.0, horizon,
                                        seed=base_seed + 10_000 + k)
        isis_or.extend(_isis(trains[(0, 0)]))
        counts_or.append(len(trains[(0, 0)]))

    d, p = ks_two_sample(isis_bf, isis_or)
    mb, mo = np.mean(counts_bf), np.mean(counts_or)
    pooled = math.sqrt((np.var(counts_bf, ddof=1) +
                        np.var(counts_or, ddof=1)) / replicas)
    z = float((mb - mo) / pooled) if pooled > 0 else 0.0
    return {
        "suite": "oracle",
        "replicas": replicas,
        "ks_d": d, "ks_p": p,
        "mean_count_bf": float(mb), "mean_count_oracle": float(mo),
        "count_z": z,
        "ok": p > 0.01 and abs(z) < 3.0,
    }


def run_branching_suite(cfg: dict) -> dict:
    """Dominating-tree diagnostic at the coupled sparsity value 0.9."""
    v = cfg.get("verify", {})
    runs = int(v.get("runs", 10_000))
    base_seed = int(cfg.get("seed", 0))
    model_cfg = cfg.get("model", {})
    model = LatticeGaussianHawkesModel(
        sigma=float(model_cfg.get("sigma", 1.0)),
        lam_empty=float(model_cfg.get("lambda_empty", 0.25)),
        M=float(model_cfg.get("M", 2.0)),
    )
    zeta = model.sparsity()
    extinct = 0
    parents = 0
    children = 0
    gen_sums = np.zeros(11)
    for k in range(runs):
        tree = dominating_tree_sim(model, (0, 0), seed=base_seed + k,
                                   max_gen=500)
        extinct += tree.extinct
        parents += tree.total_parents
        children += tree.total_children
        for g, size in enumerate(tree.generation_sizes[:11]):
            gen_sums[g] += size
    offspring_mean = children / parents if parents else 0.0
    mean_z = (gen_sums / runs).tolist()
    gen_ok = all(mean_z[k] <= 1.1 * zeta ** k for k in range(min(11, len(mean_z))))
    return {
        "suite": "branching",
        "zeta": zeta,
        "runs": runs,
        "extinct": extinct,
        "offspring_mean": offspring_mean,
        "mean_generation_sizes": mean_z,
        "ok": (extinct == runs
               and abs(offspring_mean - zeta) <= 0.02
               and gen_ok),
    }


def run_figures_suite(cfg: dict) -> dict:
    """Qualitative summaries mirroring the illustration runs: accepted count
    at the target, total/accepted ratio, and spread trends in sigma,
    lambda_empty and M."""
    v = cfg.get("verify", {})
    n_seeds = int(v.get("seeds", 20))
    spread_reps = int(v.get("spread_replicas", 50))
    base_seed = int(cfg.get("seed", 0))

    def spread_and_totals(sigma, lam, M, reps, seed0):
        spreads, totals, accepted = [], [], []
        model = LatticeGaussianHawkesModel(sigma=sigma, lam_empty=lam, M=M)
        for k in range(reps):
            rec = simulate_bf(model, (0, 0), 0.0, 100.0, seed=seed0 + k)
            spreads.append(len(rec.request_counts))
            totals.append(rec.total_points)
            accepted.append(rec.accepted_count)
        return spreads, totals, accepted

    # base setting
    _, totals, accepted = spread_and_totals(1.0, 0.25, 2.0, n_seeds, base_seed)
    med_accept = float(np.median(accepted))
    ratios = [t / a for t, a in zip(totals, accepted) if a > 0]
    med_ratio = float(np.median(ratios))

    s3, tot_s3, _ = spread_and_totals(3.0, 0.25, 2.0, spread_reps,
                                      base_seed + 1000)
    s1, _, _ = spread_and_totals(1.0, 0.25, 2.0, spread_reps, base_seed + 2000)
    _, p_sigma = mann_whitney_one_sided(s3, s1)

    s_lam50, _, _ = spread_and_totals(3.0, 0.5, 2.0, spread_reps,
                                      base_seed + 3000)
    _, p_lam = mann_whitney_one_sided(s3, s_lam50)

    m_reps = int(v.get("m_replicas", 20))
    _, tot_m20, _ = spread_and_totals(3.0, 0.25, 20.0, m_reps, base_seed + 4000)
    ratio_m = float(np.median(tot_m20) / np.median(tot_s3))

    return {
        "suite": "figures",
        "median_accepted": med_accept,
        "median_total_over_accepted": med_ratio,
        "spread_sigma3_gt_sigma1_p": p_sigma,
        "spread_lam25_gt_lam50_p": p_lam,
        "total_ratio_M20_over_M2": ratio_m,
        "ok": (40 <= med_accept <= 160
               and 5 <= med_ratio <= 20
               and p_sigma < 0.05
               and p_lam < 0.05
               and 5 <= ratio_m <= 20),
    }


SUITES = {
    "poisson": run_poisson_suite,
    "oracle": run_oracle_suite,
    "branching": run_branching_suite,
    "figures": run_figures_suite,
}
