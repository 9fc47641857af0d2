"""
Аудиты концентрации, аудит геометрии и одиночная оценка d_hat.

Каждая репликация r использует поток RngSeed(master_seed, r), поэтому
последовательный и параллельный запуск дают одинаковые записи.
"""

import math
import time
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from loguru import logger

from polcomp.common.models import Cmp, OccupancyMeasure, RngSeed, TabularPolicy
from polcomp.common.utils.io import load_cmp, load_policy, write_csv
from polcomp.divergence import renyi2, total_variation
from polcomp.geometry import GeometryCertificate, OracleBudget, certificate
from polcomp.mdp_core import (
    ensure_valid,
    induced_chain,
    occupancy,
    random_policy,
    spectral_gap,
    uniform_policy,
    with_initial_distribution,
)
from polcomp.planner import (
    SampleBudget,
    renyi_known_bounds,
    renyi_unknown_bounds,
    threshold_meaningful,
    tv_known_single,
    tv_unknown,
    weissman,
)
from polcomp.sampling import (
    estimate_transition_model,
    occupancy_on_estimate,
    sample_occupancy,
    simulation_gap_bound,
)
from .generator import generate_random_mdp
from .models import (
    RECORD_COLUMNS,
    EstimateReport,
    ExperimentConfig,
    ExperimentReport,
    MdpSource,
    PolicySource,
    RunRecord,
)

ZERO_SAMPLE = "zero_sample"

GEOMETRY_COLUMNS = [
    "n", "sigma2", "max_tv", "loosest_tv", "min_tv",
    "oracle_max", "oracle_min", "oracle_exceeds_max_tv", "failed",
]


def load_mdp(source: MdpSource) -> Cmp:
    if source.path:
        return load_cmp(source.path)
    return generate_random_mdp(
        source.num_states,
        source.num_actions,
        source.branching,
        RngSeed(seed=source.seed),
        reversible=source.reversible,
        gamma=source.gamma,
    )


def load_policy_source(source: PolicySource, c: Cmp) -> TabularPolicy:
    if source.kind == "file":
        return load_policy(source.path)
    if source.kind == "random":
        return random_policy(c, RngSeed(seed=source.seed))
    return uniform_policy(c)


def _measure(metric: str, estimate: OccupancyMeasure, exact: OccupancyMeasure) -> float:
    if metric == "tv":
        return total_variation(estimate, exact)
    return float(renyi2(estimate, exact))


class _Plan:
    """Что сэмплировать: модель, цель и список (formula_id, N) для каждой репликации"""

    def __init__(self, c: Cmp, p: TabularPolicy, target: OccupancyMeasure, runs: List[Tuple[str, int]]):
        self.c = c
        self.p = p
        self.target = target
        self.runs = runs


def _plan(cfg: ExperimentConfig, c: Cmp, p: TabularPolicy, report: ExperimentReport) -> _Plan:
    n_pairs = c.num_pairs
    s, a = c.num_states, c.num_actions
    sigma, delta = cfg.threshold, cfg.delta

    if n_pairs < 2:
        meaningful = False
    else:
        kwargs = {"sigma_tv": sigma} if cfg.metric == "tv" else {"sigma2": sigma}
        meaningful = threshold_meaningful(n_pairs, **kwargs).meaningful

    target_cmp = c
    if cfg.setting == "known_model":
        info = spectral_gap(induced_chain(c, p))
        report.spectral = info
        if not info.reversible:
            report.flags.append("non_reversible_chain")
            logger.warning("Induced chain is not reversible: the mixing-rate premise does not hold")
        if cfg.sampling_mode == "stationary":
            target_cmp = with_initial_distribution(c, np.asarray(info.stationary))

    target = occupancy(target_cmp, p)

    # Порог за пределом осмысленности: равномерная оценка без выборки
    if not meaningful:
        report.flags.append("zero_sample_shortcut")
        logger.warning(f"Threshold {sigma} is beyond the meaningful range for {n_pairs} pairs: no samples drawn")
        return _Plan(target_cmp, p, target, [(ZERO_SAMPLE, 0)])

    budgets: List[SampleBudget] = []
    if cfg.setting == "known_model":
        gamma0 = report.spectral.gamma0
        if cfg.metric == "tv":
            budgets.append(tv_known_single(gamma0, sigma, delta, n_pairs))
        else:
            bounds = renyi_known_bounds(gamma0, sigma, n_pairs, 1, delta)
            budgets.extend([bounds.lower, bounds.upper])
            report.flags.extend(bounds.flags)
        runs = [(b.formula_id.value, b.n_int) for b in budgets]
    else:
        if cfg.metric == "tv":
            budgets.append(tv_unknown(c.gamma, s, a, sigma, delta, scope="per_pair"))
            per_pair = [b.n_int for b in budgets]
        else:
            bounds = renyi_unknown_bounds(c.gamma, s, a, sigma, delta)
            budgets.extend([bounds.lower, bounds.upper])
            report.flags.extend(bounds.flags)
            per_pair = [math.ceil(b.n_real / n_pairs) for b in budgets]

        runs = []
        for budget, n in zip(budgets, per_pair):
            if n > cfg.max_per_pair:
                report.flags.append(f"per_pair_budget_capped:{budget.formula_id.value}")
                logger.warning(f"{budget.formula_id.value}: per-pair budget {n} capped at {cfg.max_per_pair}")
                n = cfg.max_per_pair
            runs.append((budget.formula_id.value, n))

    report.budgets = budgets
    for budget in budgets:
        report.flags.extend(f for f in budget.flags if f not in report.flags)
    return _Plan(target_cmp, p, target, runs)


def _replicate(cfg: ExperimentConfig, plan: _Plan, replicate: int) -> List[RunRecord]:
    seed = RngSeed(seed=cfg.master_seed, stream=replicate)
    uniform = OccupancyMeasure(values=np.full(plan.target.values.size, 1.0 / plan.target.values.size))
    records = []

    for formula_id, n in plan.runs:
        started = time.perf_counter()
        if formula_id == ZERO_SAMPLE:
            divergence, env_steps = _measure(cfg.metric, plan.target, uniform), 0
        elif cfg.setting == "known_model":
            batch = sample_occupancy(plan.c, plan.p, n, seed, cfg.sampling_mode)
            divergence, env_steps = _measure(cfg.metric, batch.occupancy, plan.target), batch.env_steps
        else:
            estimated = estimate_transition_model(plan.c, n, seed)
            estimate = occupancy_on_estimate(estimated, plan.p)
            divergence, env_steps = _measure(cfg.metric, estimate, plan.target), n * plan.c.num_pairs

        wall_ms = (time.perf_counter() - started) * 1000.0 if cfg.record_timings else 0.0
        records.append(RunRecord(
            replicate=replicate,
            n_used=n,
            formula_id=formula_id,
            divergence=divergence,
            threshold=cfg.threshold,
            violated=divergence > cfg.threshold,
            env_steps=env_steps,
            wall_ms=wall_ms,
        ))
    return records


def run_concentration_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    """Доля репликаций с D(d_hat || d) > sigma при N из соответствующей формулы"""
    c = load_mdp(cfg.mdp)
    p = load_policy_source(cfg.policy, c)
    ensure_valid(c, p)

    report = ExperimentReport(
        name=cfg.name,
        setting=cfg.setting,
        metric=cfg.metric,
        threshold=cfg.threshold,
        delta=cfg.delta,
        replicates=cfg.replicates,
        master_seed=cfg.master_seed,
        mdp_seed=None if cfg.mdp.path else cfg.mdp.seed,
        policy_seed=cfg.policy.seed if cfg.policy.kind == "random" else None,
        sampling_mode=cfg.sampling_mode,
    )
    plan = _plan(cfg, c, p, report)
    report.n_used = {formula_id: n for formula_id, n in plan.runs}
    logger.info(f"{cfg.name}: {cfg.replicates} replicates at N = {report.n_used}")

    batches = Parallel(n_jobs=jobs)(
        delayed(_replicate)(cfg, plan, replicate) for replicate in range(cfg.replicates)
    )
    records = [record for batch in batches for record in batch]

    frame = records_frame(records)
    rates = frame.groupby("formula_id", sort=True)["violated"].mean()
    report.violation_rates = {str(k): float(v) for k, v in rates.items()}
    report.violation_rate = max(report.violation_rates.values())
    report.passed = report.violation_rate <= cfg.delta
    report.records = records

    sampled = frame[frame["n_used"] > 0]
    if cfg.setting == "known_model" and cfg.sampling_mode == "geometric" and not sampled.empty:
        report.mean_steps_per_sample = float(sampled["env_steps"].sum() / sampled["n_used"].sum())

    log = logger.info if report.passed else logger.warning
    log(f"{cfg.name}: violation rate {report.violation_rate:.4f} (delta {cfg.delta})")
    return report


def records_frame(records: Iterable[RunRecord]) -> pd.DataFrame:
    """Записи в таблицу с фиксированным порядком колонок"""
    rows = [record.model_dump() for record in records]
    if not rows:
        return pd.DataFrame(columns=RECORD_COLUMNS)
    return pd.DataFrame(rows, columns=RECORD_COLUMNS)


def run_geometry_audit(
    n_list: List[int],
    sigma2_list: List[float],
    seed: RngSeed,
    output: Optional[Path] = None,
    budget: Optional[OracleBudget] = None,
    jobs: int = 1
) -> Tuple[pd.DataFrame, List[GeometryCertificate]]:
    """Сертификат для каждой пары (n, sigma2); строка помечается failed при невязке"""
    certificates = []
    for index, (n, sigma2) in enumerate((n, s2) for n in n_list for s2 in sigma2_list):
        certificates.append(certificate(n, sigma2, seed.with_stream(seed.stream + 2 * index), budget, jobs))

    frame = pd.DataFrame([cert.row() for cert in certificates], columns=GEOMETRY_COLUMNS)
    failed = int(frame["failed"].sum()) if not frame.empty else 0
    logger.info(f"Geometry audit: {len(certificates)} certificates, {failed} failed")
    if output is not None:
        write_csv(frame, output)
    return frame, certificates


def run_estimate(cfg: ExperimentConfig) -> EstimateReport:
    """Одна оценка d_hat при первом N плана и все расхождения с точной d"""
    c = load_mdp(cfg.mdp)
    p = load_policy_source(cfg.policy, c)
    ensure_valid(c, p)

    scratch = ExperimentReport(
        name=cfg.name, setting=cfg.setting, metric=cfg.metric, threshold=cfg.threshold,
        delta=cfg.delta, replicates=1, master_seed=cfg.master_seed, sampling_mode=cfg.sampling_mode,
    )
    plan = _plan(cfg, c, p, scratch)
    formula_id, n = plan.runs[0]
    seed = RngSeed(seed=cfg.master_seed)
    flags = list(scratch.flags)
    gap_bound = None

    if formula_id == ZERO_SAMPLE:
        estimate = OccupancyMeasure(values=np.full(plan.target.values.size, 1.0 / plan.target.values.size))
        env_steps = 0
    elif cfg.setting == "known_model":
        batch = sample_occupancy(plan.c, plan.p, n, seed, cfg.sampling_mode)
        estimate, env_steps = batch.occupancy, batch.env_steps
    else:
        estimated = estimate_transition_model(plan.c, n, seed)
        estimate, env_steps = occupancy_on_estimate(estimated, p), n * c.num_pairs
        gap_bound = simulation_gap_bound(c, estimated, p)

    epsilon = None
    if cfg.setting == "known_model" and n > 0 and c.num_pairs >= 2:
        epsilon = weissman(c.num_pairs, cfg.delta, n=n)

    forward = renyi2(estimate, plan.target)
    backward = renyi2(plan.target, estimate)

    return EstimateReport(
        setting=cfg.setting,
        formula_id=formula_id,
        n_used=n,
        tv=total_variation(estimate, plan.target),
        renyi2_forward=float(forward),
        renyi2_backward=float(backward),
        renyi2_forward_offending=list(getattr(forward, "offending_indices", ())),
        renyi2_backward_offending=list(getattr(backward, "offending_indices", ())),
        weissman_epsilon=epsilon,
        simulation_gap_bound=gap_bound,
        env_steps=env_steps,
        seed=cfg.master_seed,
        flags=flags,
        estimate=estimate.values.tolist(),
        exact=plan.target.values.tolist(),
    )
