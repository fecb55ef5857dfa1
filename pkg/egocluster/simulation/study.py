# -*- coding: utf-8 -*-
# Описание: Движок симуляционного исследования: репликации, агрегирование, таблица мощности.

import logging
import math
from collections import OrderedDict
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from egocluster.baselines import complete_randomization, random_ego_clusters, three_net
from egocluster.clustering import EgoClustering
from egocluster.config import SimConfig
from egocluster.ego_design import build_design
from egocluster.graph import Graph, load_edge_list_file
from egocluster.inference import estimate
from egocluster.randomization import assign, exposures
from egocluster.simulation.generators import gen_ba, gen_community, gen_er
from egocluster.simulation.outcomes import read_covariates, simulate_outcomes
from egocluster.simulation.seeding import mix
from egocluster.util.timeit import timeit

ESTIMANDS = ("tau", "gamma")
FAILURE_LIMIT = 0.05
METRICS = ("bias", "sd", "rmse", "rejection_rate", "coverage", "mean_se",
           "mean_K_n", "mean_r_bar", "mean_b", "completed", "failures")
DEFAULT_EFFECTS = (0.0, 0.3, 0.6)


class StudyFailedError(RuntimeError):
    pass


class Record(object):
    """
    Итог одной репликации для одного дизайна.
    """
    __slots__ = ("tau_hat", "gamma_hat", "se_tau", "se_gamma", "reject_tau", "reject_gamma",
                 "cover_tau", "cover_gamma", "K_n", "r_bar", "b")

    def __init__(self, **values):
        for name in self.__slots__:
            setattr(self, name, values[name])

    def estimate(self, estimand: str) -> float:
        return self.tau_hat if estimand == "tau" else self.gamma_hat

    def se(self, estimand: str) -> float:
        return self.se_tau if estimand == "tau" else self.se_gamma

    def rejected(self, estimand: str) -> bool:
        return self.reject_tau if estimand == "tau" else self.reject_gamma

    def covered(self, estimand: str) -> bool:
        return self.cover_tau if estimand == "tau" else self.cover_gamma


class SimReport(object):
    """
    Метрики по парам (дизайн, оценка): смещение, SD, RMSE, доля отвержений, покрытие,
    средняя SE, средние K_n, r̄, b, число успешных и упавших репликаций.
    """
    def __init__(self, designs: Sequence[str], reps: int, truth: Dict[str, float]):
        self.designs = list(designs)
        self.reps = reps
        self.truth = dict(truth)
        self.metrics = OrderedDict()  # type: Dict[Tuple[str, str], Dict[str, float]]
        self.errors = dict()  # type: Dict[str, List[str]]

    def value(self, design: str, estimand: str, metric: str) -> float:
        return self.metrics[(design, estimand)][metric]

    def rows(self):
        for design in self.designs:
            for estimand in ESTIMANDS:
                for metric in METRICS:
                    yield design, estimand, metric, self.metrics[(design, estimand)][metric]


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else math.nan


def summarize(records: Sequence[Record], truth: float, estimand: str) -> Dict[str, float]:
    """
    Агрегаты по репликациям; суммы через math.fsum, поэтому порядок сложения не важен.
    SD - выборочное (делитель reps - 1), при одной репликации SD = 0.
    """
    completed = len(records)
    if completed == 0:
        return {metric: math.nan for metric in METRICS}
    estimates = [record.estimate(estimand) for record in records]
    mean = _mean(estimates)
    squares = math.fsum((value - mean) ** 2 for value in estimates)
    errors = math.fsum((value - truth) ** 2 for value in estimates)
    return {
        "bias": mean - truth,
        "sd": math.sqrt(squares / (completed - 1)) if completed > 1 else 0.0,
        "rmse": math.sqrt(errors / completed),
        "rejection_rate": _mean([1.0 if record.rejected(estimand) else 0.0 for record in records]),
        "coverage": _mean([1.0 if record.covered(estimand) else 0.0 for record in records]),
        "mean_se": _mean([record.se(estimand) for record in records]),
        "mean_K_n": _mean([float(record.K_n) for record in records]),
        "mean_r_bar": _mean([record.r_bar for record in records]),
        "mean_b": _mean([record.b for record in records]),
        "completed": float(completed),
        "failures": 0.0,
    }


def make_design(g: Graph, design: str, seed: int, lambda_: float) -> EgoClustering:
    if design == "ego_cr":
        return build_design(g, lambda_, seed)
    if design == "cr":
        return complete_randomization(g, lambda_)
    if design == "three_net":
        return three_net(g, seed, lambda_)
    if design == "random_ego":
        return random_ego_clusters(g, seed, lambda_)
    raise ValueError("unknown design '{}'".format(design))


class _Fixed(object):
    """
    Сеть и ковариаты, общие для всех репликаций (network = edge_list).
    """
    def __init__(self, cfg: SimConfig):
        self.graph = None  # type: Optional[Graph]
        self.z = None  # type: Optional[np.ndarray]
        if cfg.network == "edge_list":
            self.graph = load_edge_list_file(cfg.edge_list_path)
            if cfg.z_path:
                with open(cfg.z_path, "r", encoding="utf-8") as f:
                    self.z = read_covariates(self.graph, f.read().split("\n"))


_STATE = dict()


def _init_worker(cfg: SimConfig, fixed: _Fixed) -> None:
    _STATE["cfg"] = cfg
    _STATE["fixed"] = fixed


def network_for(cfg: SimConfig, fixed: _Fixed, rng: np.random.Generator) -> Tuple[Graph, Optional[np.ndarray]]:
    if cfg.network == "er":
        return gen_er(cfg.n, cfg.p, rng), None
    if cfg.network == "ba":
        return gen_ba(cfg.n, cfg.m, rng), None
    if cfg.network == "community":
        return gen_community(cfg.n, cfg.communities, cfg.ratio, cfg.target_avg_degree, rng)
    return fixed.graph, fixed.z


def replicate(cfg: SimConfig, fixed: _Fixed, r: int) -> Dict[str, object]:
    """
    Одна репликация: сеть, затем для каждого дизайна разбиение, назначение, отклики и оценка.
    Вся случайность получается из seed_r = mix(base_seed, r).

    :return: дизайн -> Record или текст ошибки.
    """
    rng = np.random.default_rng(mix(cfg.base_seed, r))
    g, z = network_for(cfg, fixed, rng)
    alpha, beta, gamma = cfg.coefficients()
    truth = {"tau": beta + gamma, "gamma": gamma}
    outcomes = dict()
    for design in cfg.designs:
        design_seed = int(rng.integers(2 ** 63))
        try:
            c = make_design(g, design, design_seed, cfg.lambda_)
            a = assign(c, rng)
            rho = exposures(g, a.T)
            y = simulate_outcomes(g, a.T, rho, alpha, beta, gamma, cfg.error_model, rng,
                                  sigma=cfg.sigma, eta=cfg.eta, z=z)
            result = estimate(g, c, a.T, rho, y, cfg.level)
        except ValueError as e:
            outcomes[design] = "{}: {}".format(type(e).__name__, e)
            continue
        outcomes[design] = Record(
            tau_hat=result.tau_hat, gamma_hat=result.gamma_hat,
            se_tau=result.se_tau, se_gamma=result.se_gamma,
            reject_tau=result.p_tau < cfg.level, reject_gamma=result.p_gamma < cfg.level,
            cover_tau=result.ci_tau[0] <= truth["tau"] <= result.ci_tau[1],
            cover_gamma=result.ci_gamma[0] <= truth["gamma"] <= result.ci_gamma[1],
            K_n=result.K_n, r_bar=result.r_bar, b=result.b)
    return outcomes


def _replicate_task(r: int) -> Dict[str, object]:
    return replicate(_STATE["cfg"], _STATE["fixed"], r)


@timeit
def run_study(cfg: SimConfig, workers: int = 1) -> SimReport:
    """
    Провести cfg.reps репликаций и агрегировать метрики.
    Результат не зависит от числа процессов: случайность каждой репликации задаётся только seed_r,
    результаты собираются в порядке номеров репликаций.

    :param cfg: конфиг исследования.
    :param workers: число процессов.
    :return: отчёт.
    """
    cfg.validate()
    fixed = _Fixed(cfg)
    alpha, beta, gamma = cfg.coefficients()
    truth = {"tau": beta + gamma, "gamma": gamma}
    collected = {design: [] for design in cfg.designs}
    report = SimReport(cfg.designs, cfg.reps, truth)
    report.errors = {design: [] for design in cfg.designs}

    def consume(results):
        for outcomes in tqdm(results, total=cfg.reps, disable=not cfg.progress, desc="replications"):
            for design, outcome in outcomes.items():
                if isinstance(outcome, Record):
                    collected[design].append(outcome)
                else:
                    report.errors[design].append(outcome)

    if workers > 1:
        chunk_size = max(1, cfg.reps // (workers * 8))
        with Pool(processes=workers, initializer=_init_worker, initargs=(cfg, fixed)) as pool:
            consume(pool.imap(_replicate_task, range(cfg.reps), chunksize=chunk_size))
    else:
        consume(replicate(cfg, fixed, r) for r in range(cfg.reps))

    for design in cfg.designs:
        failures = len(report.errors[design])
        for estimand in ESTIMANDS:
            metrics = summarize(collected[design], truth[estimand], estimand)
            metrics["failures"] = float(failures)
            report.metrics[(design, estimand)] = metrics
        if failures:
            logging.warning("design %s failed in %d of %d replications; first error: %s",
                            design, failures, cfg.reps, report.errors[design][0])
        if failures > FAILURE_LIMIT * cfg.reps:
            raise StudyFailedError("design {} failed in {} of {} replications: {}".format(
                design, failures, cfg.reps, report.errors[design][0]))
    logging.info("study finished: %d replications, designs %s", cfg.reps, ", ".join(cfg.designs))
    return report


class PowerTable(object):
    """
    Доли отвержений по дизайнам и размерам эффекта.
    """
    def __init__(self, estimand: str, effects: Sequence[float], designs: Sequence[str]):
        self.estimand = estimand
        self.effects = list(effects)
        self.designs = list(designs)
        self.rates = dict()  # type: Dict[Tuple[str, float], float]

    def rows(self):
        for design in self.designs:
            for effect in self.effects:
                yield design, effect, self.rates[(design, effect)]


def power_config(cfg: SimConfig, estimand: str, effect: float) -> SimConfig:
    """
    Для τ: β = effect - 1, γ = 1 (τ = effect); для γ: γ = effect, β = 1.
    """
    shifted = cfg.copy()
    shifted.null = "none"
    if estimand == "tau":
        shifted.beta, shifted.gamma = effect - 1.0, 1.0
    elif estimand == "gamma":
        shifted.beta, shifted.gamma = 1.0, effect
    else:
        raise ValueError("estimand must be one of {}, got '{}'".format(ESTIMANDS, estimand))
    return shifted


def run_power_grid(cfg: SimConfig, estimand: str, effects: Sequence[float] = DEFAULT_EFFECTS,
                   workers: int = 1) -> PowerTable:
    if not effects:
        raise ValueError("at least one effect size is required")
    table = PowerTable(estimand, effects, cfg.designs)
    for effect in effects:
        report = run_study(power_config(cfg, estimand, effect), workers)
        for design in cfg.designs:
            table.rates[(design, effect)] = report.value(design, estimand, "rejection_rate")
    return table
