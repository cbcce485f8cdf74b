# -*- coding: utf-8 -*-
import numpy as np

from .learner import LearnConfig
from .mechanisms import PrivacyBudget
from .sequence import Params, SeedKey


def make_rng(seed):
    """A counter-based generator; ``seed`` may be an int or a SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def trial_seeds(seed, trials):
    """Independent child sequences, one per trial, in trial order."""
    return np.random.SeedSequence(seed).spawn(trials)


def make_config(d, epsilon, alpha, beta, delta=0):
    return LearnConfig(alpha, beta, PrivacyBudget(epsilon, delta), Params(d))


def new_concept(d, seed):
    """Parameters and a seed key drawn from ``seed``."""
    params = Params(d)
    return params, SeedKey.random(params, make_rng(seed))
