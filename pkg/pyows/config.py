# -*- coding: utf-8 -*-
"""
Resolved settings of one command run.

Values come from three layers, later ones winning: built-in defaults (the
package's, then the command's), a JSON config file, and command-line flags.
A config file holds shared keys at the top level and may hold one object
per command name whose keys override the shared ones for that command.
"""
import json
import logging
import os

from dataclasses import dataclass, field
from typing import Optional

from .errors import DecodeError, UsageError
from .learner import DEFAULT_SAMPLE_CONSTANT, LearnConfig, required_sample_size
from .mechanisms import PrivacyBudget
from .sequence import Params

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = 'PYOWS_OUTPUT_DIR'
FORMATS = ('json', 'csv')

DEFAULTS = {
    'd': 256,
    'epsilon': 1.0,
    'delta': 0.0,
    'alpha': 0.1,
    'beta': 0.1,
    'n': None,
    'trials': 200,
    'T': 2000,
    'seed': 0,
    'jobs': 1,
    'out': None,
    'format': 'json',
    'sample_constant': DEFAULT_SAMPLE_CONSTANT,
}


@dataclass(frozen=True)
class ExperimentConfig(object):
    command: str
    d: int = DEFAULTS['d']
    epsilon: float = DEFAULTS['epsilon']
    delta: float = DEFAULTS['delta']
    alpha: float = DEFAULTS['alpha']
    beta: float = DEFAULTS['beta']
    n: Optional[int] = None
    trials: int = DEFAULTS['trials']
    T: int = DEFAULTS['T']
    seed: int = DEFAULTS['seed']
    jobs: int = DEFAULTS['jobs']
    out: Optional[str] = None
    format: str = DEFAULTS['format']
    sample_constant: float = DEFAULT_SAMPLE_CONSTANT
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        Params(self.d)
        if not self.epsilon > 0:
            raise UsageError("epsilon must be positive", epsilon=self.epsilon)
        if not 0 <= self.delta < 1:
            raise UsageError("delta must lie in [0, 1)", delta=self.delta)
        for name in ('alpha', 'beta'):
            if not 0 < getattr(self, name) < 1:
                raise UsageError("%s must lie in (0, 1)" % name, **{name: getattr(self, name)})
        for name in ('trials', 'T', 'jobs'):
            if getattr(self, name) < 1:
                raise UsageError("%s must be positive" % name, **{name: getattr(self, name)})
        if self.n is not None and self.n < 1:
            raise UsageError("n must be positive", n=self.n)
        if self.sample_constant <= 0:
            raise UsageError("sample constant must be positive", sample_constant=self.sample_constant)
        if self.format not in FORMATS:
            raise UsageError("unknown format", format=self.format)

    @property
    def params(self):
        return Params(self.d)

    def learn_config(self):
        return LearnConfig(self.alpha, self.beta, PrivacyBudget(self.epsilon, self.delta),
                           self.params)

    def sample_size(self, auto=False):
        """n when given and not ``auto``, otherwise the calibrated required sample size."""
        if self.n is not None and not auto:
            return self.n
        return required_sample_size(self.params, self.learn_config(), self.sample_constant)

    def get(self, name):
        return self.extras[name]

    def echo(self):
        """Every resolved value, for the report's params."""
        values = {'d': self.d, 'epsilon': self.epsilon, 'delta': self.delta,
                  'alpha': self.alpha, 'beta': self.beta, 'n': self.n,
                  'trials': self.trials, 'T': self.T, 'seed': self.seed,
                  'jobs': self.jobs, 'format': self.format,
                  'sample_constant': self.sample_constant}
        values.update(self.extras)
        return values

    def output_path(self, environ=None, use_out=True):
        """
        Where the report goes: --out as given, or <command>.<format> in the
        default output directory, or None for stdout.
        """
        environ = os.environ if environ is None else environ
        if use_out and self.out:
            return self.out
        directory = environ.get(OUTPUT_DIR_ENV)
        if directory:
            return os.path.join(directory, '%s.%s' % (self.command, self.format))
        return None


def load_config_file(path):
    try:
        with open(path) as fp:
            values = json.load(fp)
    except OSError as e:
        raise UsageError("cannot read config file", path=path, error=e.strerror)
    except ValueError as e:
        raise DecodeError("config file %s: %s" % (path, e))
    if not isinstance(values, dict):
        raise DecodeError("config file %s must hold a JSON object" % path)
    return values


def resolve(command, flags, file_values=None, command_defaults=None, commands=()):
    """
    Merges the layers into an ExperimentConfig.

    :param flags: parsed flag values; None means 'not given'
    :param commands: every command name; sections of other commands in a
                     shared config file are skipped
    """
    command_defaults = command_defaults or {}
    file_values = file_values or {}
    section = file_values.get(command, {})
    if not isinstance(section, dict):
        raise DecodeError("config section %r must be an object" % command)
    shared = {key: value for key, value in file_values.items() if key not in commands}
    known = set(DEFAULTS) | set(command_defaults)

    values = dict(DEFAULTS)
    values.update(command_defaults)
    for source, layer in (('config file', shared), ('config file', section), ('flag', flags)):
        for key, value in layer.items():
            key = key.replace('-', '_')
            if key not in known:
                raise UsageError("unknown %s key" % source, key=key)
            if value is not None:
                values[key] = value

    core = {key: values.pop(key) for key in DEFAULTS}
    try:
        return ExperimentConfig(command=command, extras=values, **core)
    except TypeError as e:
        raise UsageError("bad config value", error=str(e))
