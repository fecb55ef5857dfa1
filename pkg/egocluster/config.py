# -*- coding: utf-8 -*-
# Описание: Конфиги построения дизайна и симуляционного исследования.

import copy
import json
from typing import List, Tuple

from egocluster.baselines import DESIGNS
from egocluster.ego_design import TARGETS

NETWORKS = ("er", "ba", "community", "edge_list")
ERROR_MODELS = ("iid_normal", "correlated", "confounded")
NULLS = ("none", "tau", "gamma")


class ConfigError(ValueError):
    pass


class JsonConfig(object):
    """
    Конфиг с полями-атрибутами и сохранением в JSON. Неизвестные ключи при загрузке запрещены.
    """
    def save(self, filename):
        with open(filename, 'w', encoding='utf-8') as f:
            d = copy.deepcopy(self.__dict__)
            f.write(json.dumps(d, sort_keys=True, indent=4) + "\n")

    def load(self, filename):
        with open(filename, 'r', encoding='utf-8') as f:
            d = json.loads(f.read())
        self.update(d)
        return self

    def update(self, d):
        unknown = sorted(set(d) - set(self.__dict__))
        if unknown:
            raise ConfigError("unknown config keys: {}".format(", ".join(unknown)))
        self.__dict__.update(d)
        self.validate()

    def validate(self):
        pass


class DesignConfig(JsonConfig):
    def __init__(self):
        self.target = "tau"  # tau, gamma или weighted.
        self.lambda_ = 1.0  # вес для target = weighted.
        self.seed = 0
        self.restarts = 1  # число независимых запусков с зёрнами seed, seed + 1, ...
        self.workers = 1
        self.predetermined_egos = []  # внешние id эго, формирующих кластеры до отбора.

    def validate(self):
        if self.target not in TARGETS:
            raise ConfigError("target must be one of {}, got '{}'".format(TARGETS, self.target))
        if self.restarts < 1:
            raise ConfigError("restarts must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    def seeds(self) -> List[int]:
        return [self.seed + offset for offset in range(self.restarts)]


class SimConfig(JsonConfig):
    def __init__(self):
        self.network = "ba"  # er, ba, community или edge_list.
        self.n = 1000
        self.p = 0.015  # вероятность ребра в er.
        self.m = 6  # число рёбер нового узла в ba.
        self.communities = 4
        self.ratio = 8.0  # отношение вероятностей ребра внутри и между сообществами.
        self.target_avg_degree = 11.0
        self.edge_list_path = None  # фиксированная сеть для network = edge_list.
        self.z_path = None  # TSV unit, z1, z2, ... для фиксированной сети.

        self.designs = ["ego_cr", "cr"]
        self.lambda_ = 1.0

        self.alpha = 2.0
        self.beta = 2.5
        self.gamma = 5.0
        self.eta = 0.8  # число или список по столбцам Z.
        self.error_model = "iid_normal"
        self.sigma = 1.0
        self.null = "none"  # tau: β = -1, γ = 1; gamma: γ = 0, β = 1.

        self.reps = 500
        self.base_seed = 20240601
        self.level = 0.05
        self.progress = True

    def validate(self):
        if self.network not in NETWORKS:
            raise ConfigError("network must be one of {}, got '{}'".format(NETWORKS, self.network))
        if self.network == "edge_list" and not self.edge_list_path:
            raise ConfigError("network edge_list requires edge_list_path")
        if self.network != "edge_list" and self.n < 2:
            raise ConfigError("n must be at least 2")
        if self.network == "er" and not 0.0 < self.p < 1.0:
            raise ConfigError("p must lie in (0, 1), got {}".format(self.p))
        if self.network == "ba" and not (self.m >= 1 and self.n > self.m):
            raise ConfigError("ba requires m >= 1 and n > m")
        if self.network == "community":
            if self.communities < 2:
                raise ConfigError("communities must be at least 2")
            if self.ratio <= 0.0:
                raise ConfigError("ratio must be positive, got {}".format(self.ratio))
            if self.target_avg_degree <= 0.0:
                raise ConfigError("target_avg_degree must be positive")
        if not self.designs:
            raise ConfigError("at least one design is required")
        for design in self.designs:
            if design not in DESIGNS:
                raise ConfigError("unknown design '{}', expected one of {}".format(design, DESIGNS))
        if len(set(self.designs)) != len(self.designs):
            raise ConfigError("designs must not repeat")
        if not 0.0 < self.lambda_ <= 1.0:
            raise ConfigError("lambda_ must lie in (0, 1]")
        if self.error_model not in ERROR_MODELS:
            raise ConfigError("error_model must be one of {}, got '{}'".format(ERROR_MODELS, self.error_model))
        if self.error_model == "confounded" and not self.has_covariates():
            raise ConfigError("error_model confounded requires Z: network community, or edge_list with z_path")
        if self.sigma < 0.0:
            raise ConfigError("sigma must be nonnegative")
        if self.null not in NULLS:
            raise ConfigError("null must be one of {}, got '{}'".format(NULLS, self.null))
        if self.reps < 1:
            raise ConfigError("reps must be at least 1")
        if not 0 <= self.base_seed < 2 ** 64:
            raise ConfigError("base_seed must be an unsigned 64-bit integer")
        if not 0.0 < self.level < 1.0:
            raise ConfigError("level must lie in (0, 1), got {}".format(self.level))

    def has_covariates(self) -> bool:
        return self.network == "community" or (self.network == "edge_list" and bool(self.z_path))

    def coefficients(self) -> Tuple[float, float, float]:
        """
        (α, β, γ) с учётом нулевой гипотезы.
        """
        if self.null == "tau":
            return self.alpha, -1.0, 1.0
        if self.null == "gamma":
            return self.alpha, 1.0, 0.0
        return self.alpha, self.beta, self.gamma

    def copy(self) -> 'SimConfig':
        return copy.deepcopy(self)
