import os
from pkg_resources import resource_filename

CONFIGS_FOLDER = resource_filename(__name__, "configs")

CONFIGS = dict()
CONFIGS["estimation_ba"] = "estimation_ba.json"
CONFIGS["type1_tau_ba"] = "type1_tau_ba.json"
CONFIGS["type1_gamma_ba"] = "type1_gamma_ba.json"
CONFIGS["community_confounded"] = "community_confounded.json"
CONFIGS["correlated_er"] = "correlated_er.json"

CONFIGS_PATHS = {key: os.path.join(CONFIGS_FOLDER, file_name) for key, file_name in CONFIGS.items()}
