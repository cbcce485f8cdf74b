# -*- coding: utf-8 -*-
"""
Subcommands of the ``pyows`` command line. Each class declares its flags,
its defaults and what it runs; every run returns a Report.
"""
import logging
import sys

from . import arena, encode, lemmas, learner, mechanisms
from .api import make_rng
from .baselines import BASELINES
from .errors import UsageError
from .reports import Report
from .sequence import SeedKey, compute_forward, derive_example

logger = logging.getLogger(__name__)

COMMANDS = ('keys', 'derive', 'forward', 'learn', 'eval', 'pac', 'duel', 'advantage',
            'lemmas', 'calibrate', 'mech-audit')


def lookup(name):
    """The Command class of a subcommand name, e.g. 'mech-audit' -> MechAudit."""
    cls = getattr(sys.modules[__name__], ''.join(part.title() for part in name.split('-')), None)
    if name not in COMMANDS or cls is None:
        raise UsageError("unknown command", command=name)
    return cls


def _read_text(path):
    try:
        with open(path) as fp:
            return fp.read()
    except OSError as e:
        raise UsageError("cannot read file", path=path, error=e.strerror)


def _read_bytes(path):
    try:
        with open(path, 'rb') as fp:
            return fp.read()
    except OSError as e:
        raise UsageError("cannot read file", path=path, error=e.strerror)


class Command(object):
    """A subcommand bound to its resolved ExperimentConfig."""
    name = None
    help = None
    defaults = {}
    verifies = False

    def __init__(self, config):
        self.config = config

    @classmethod
    def add_arguments(cls, parser):
        pass

    def run(self):
        raise NotImplementedError

    def report_path(self):
        return self.config.output_path()

    def report(self, **fields):
        fields.setdefault('trials', 1)
        return Report(experiment=self.name, params=self.config.echo(), seed=self.config.seed,
                      **fields)

    def seed_key(self):
        """--seed-key when given, otherwise a key drawn from --seed."""
        params = self.config.params
        text = self.config.extras.get('seed_key')
        if text:
            return encode.seed_from_hex(text, params)
        return SeedKey.random(params, make_rng(self.config.seed))


def _add_privacy_arguments(parser):
    parser.add_argument('--d', type=int, help="domain bit-length")
    parser.add_argument('--epsilon', type=float)
    parser.add_argument('--delta', type=float)
    parser.add_argument('--alpha', type=float)
    parser.add_argument('--beta', type=float)


class Keys(Command):
    """Draws seed keys."""
    name = 'keys'
    help = "generate seed keys"
    defaults = {'count': 1}

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--d', type=int)
        parser.add_argument('--count', type=int)

    def run(self):
        params = self.config.params
        count = self.config.get('count')
        if count < 1:
            raise UsageError("count must be positive", count=count)
        rng = make_rng(self.config.seed)
        rows = [{'k': params.k, 'seed_key': encode.seed_to_hex(SeedKey.random(params, rng))}
                for _ in range(count)]
        return self.report(trials=count, rows=rows)


class Derive(Command):
    """Prints G(i, s) and f(i, s) for the given indices."""
    name = 'derive'
    help = "derive on-sequence examples"
    defaults = {'seed_key': None, 'i': [0]}

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--d', type=int)
        parser.add_argument('--seed-key', help="hex seed key; drawn from --seed if omitted")
        parser.add_argument('--i', type=int, nargs='+')

    def run(self):
        params = self.config.params
        s = self.seed_key()
        rows = []
        for i in self.config.get('i'):
            sigma, fbit = derive_example(params, s, i)
            rows.append({'i': i, 'sigma': encode.bits_to_hex(sigma, params.sigma_bits),
                         'fbit': fbit})
        return self.report(trials=len(rows), summary={'seed_key': encode.seed_to_hex(s)},
                           rows=rows)


class Forward(Command):
    """Computes G(j, s) and f(j, s) from (i, G(i, s)) without the key."""
    name = 'forward'
    help = "compute forward from an on-sequence example"
    defaults = {'i': None, 'sigma': None, 'j': None}

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--d', type=int)
        parser.add_argument('--i', type=int)
        parser.add_argument('--sigma', help="hex G(i, s)")
        parser.add_argument('--j', type=int, nargs='+')

    def run(self):
        params = self.config.params
        i, text, targets = (self.config.get(name) for name in ('i', 'sigma', 'j'))
        if i is None or text is None or not targets:
            raise UsageError("forward needs --i, --sigma and --j")
        sigma = encode.hex_to_bits(text, params.sigma_bits)
        rows = []
        for j in targets:
            sigma_j, fbit = compute_forward(params, j, i, sigma)
            rows.append({'j': j, 'sigma': encode.bits_to_hex(sigma_j, params.sigma_bits),
                         'fbit': fbit})
        return self.report(trials=len(rows), rows=rows)


class Learn(Command):
    """Runs the private learner on a JSON-lines dataset."""
    name = 'learn'
    help = "learn a hypothesis privately"
    defaults = {'input': None}

    @classmethod
    def add_arguments(cls, parser):
        _add_privacy_arguments(parser)
        parser.add_argument('--in', dest='input', help="JSON-lines dataset")

    def report_path(self):
        # --out names the hypothesis file
        return self.config.output_path(use_out=False)

    def run(self):
        cfg = self.config
        params = cfg.params
        if not cfg.get('input'):
            raise UsageError("learn needs --in")
        S = encode.load_dataset(params, _read_text(cfg.get('input')).splitlines())
        ledger = mechanisms.PrivacyLedger()
        trace = {}
        h = learner.learn(S, cfg.learn_config(), make_rng(cfg.seed), ledger, trace)
        if cfg.out:
            if cfg.out.endswith('.json'):
                with open(cfg.out, 'w') as fp:
                    fp.write(learner.hypothesis_to_json(params, h) + "\n")
            else:
                with open(cfg.out, 'wb') as fp:
                    fp.write(learner.hypothesis_to_bytes(params, h))
        return self.report(summary={'hypothesis': learner.hypothesis_to_dict(params, h),
                                    'trace': trace,
                                    'budget': ledger.total().as_dict(),
                                    'sample_loss': learner.sample_loss(params, h, S)},
                           rows=ledger.as_rows())


def load_hypothesis(params, path):
    """Reads a hypothesis file written by ``learn``: JSON by extension, else binary."""
    if path.endswith('.json'):
        return learner.hypothesis_from_json(params, _read_text(path))
    return learner.hypothesis_from_bytes(params, _read_bytes(path))


class Eval(Command):
    """Evaluates a stored hypothesis on a dataset."""
    name = 'eval'
    help = "evaluate a hypothesis on examples"
    defaults = {'hypothesis': None, 'input': None}

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--d', type=int)
        parser.add_argument('--hypothesis', help="file written by learn")
        parser.add_argument('--in', dest='input', help="JSON-lines dataset")

    def run(self):
        params = self.config.params
        if not self.config.get('hypothesis') or not self.config.get('input'):
            raise UsageError("eval needs --hypothesis and --in")
        h = load_hypothesis(params, self.config.get('hypothesis'))
        S = encode.load_dataset(params, _read_text(self.config.get('input')).splitlines())
        rows = [{'i': labeled.example.i, 'label': labeled.label,
                 'prediction': h.evaluate(params, labeled.example)} for labeled in S]
        return self.report(trials=len(rows),
                           summary={'hypothesis': h.kind,
                                    'sample_loss': learner.sample_loss(params, h, S)},
                           rows=rows)


class Pac(Command):
    """PAC trials on uniform on-sequence distributions."""
    name = 'pac'
    help = "run PAC trials"
    defaults = {'mc_samples': 10000, 'indices': 100, 'negative_weight': 0.0, 'auto_n': False}
    verifies = True

    @classmethod
    def add_arguments(cls, parser):
        _add_privacy_arguments(parser)
        parser.add_argument('--n', type=int, help="sample size; required_sample_size if omitted")
        parser.add_argument('--auto-n', action='store_true', default=None,
                            help="ignore any configured n")
        parser.add_argument('--trials', type=int)
        parser.add_argument('--mc-samples', type=int)
        parser.add_argument('--indices', type=int)
        parser.add_argument('--negative-weight', type=float)
        parser.add_argument('--sample-constant', type=float)

    def run(self):
        cfg = self.config
        n = cfg.sample_size(auto=bool(cfg.get('auto_n')))
        return arena.pac_experiment(cfg.learn_config(), n, cfg.trials, cfg.seed,
                                    mc_samples=cfg.get('mc_samples'),
                                    indices=cfg.get('indices'),
                                    negative_weight=cfg.get('negative_weight'),
                                    jobs=cfg.jobs, echo=cfg.echo())


class Duel(Command):
    """The online game of the baseline zoo against an adversary."""
    name = 'duel'
    help = "play the online game"
    defaults = {'d': 1024, 'games': 50, 'baseline': list(BASELINES), 'adversary': 'reverse',
                'margin': arena.ONLINE_MARGIN}
    verifies = True

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--d', type=int)
        parser.add_argument('--T', type=int, help="rounds per game")
        parser.add_argument('--games', type=int)
        parser.add_argument('--baseline', nargs='+', choices=BASELINES)
        parser.add_argument('--adversary', choices=sorted(arena.ADVERSARIES))
        parser.add_argument('--margin', type=float)

    def run(self):
        cfg = self.config
        return arena.duel_experiment(cfg.params, cfg.get('baseline'), cfg.T, cfg.get('games'),
                                     cfg.seed, adversary=cfg.get('adversary'), jobs=cfg.jobs,
                                     margin=cfg.get('margin'), echo=cfg.echo())


class Advantage(Command):
    """Forward-prediction advantage of a baseline."""
    name = 'advantage'
    help = "measure prediction advantage"
    defaults = {'d': 1024, 'trials': 10000, 'baseline': 'forward', 't': None}
    verifies = True

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--d', type=int)
        parser.add_argument('--t', type=int,
                            help="target index; %d rounds below the top if omitted"
                            % arena.ADVANTAGE_SUFFIX)
        parser.add_argument('--baseline', choices=BASELINES)
        parser.add_argument('--trials', type=int)

    def run(self):
        cfg = self.config
        params = cfg.params
        t = cfg.get('t')
        if t is None:
            t = arena.default_advantage_target(params)
        return arena.advantage_experiment(params, cfg.get('baseline'), t, cfg.trials, cfg.seed,
                                          jobs=cfg.jobs, echo=cfg.echo())


class Lemmas(Command):
    """Both combinatorial verifiers."""
    name = 'lemmas'
    help = "verify the combinatorial lemmas"
    defaults = {'m_max': lemmas.MAX_SEPARATION_POINTS, 'universe': 10, 'n_max': 3, 'samples': 20}
    verifies = True

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--m-max', type=int)
        parser.add_argument('--universe', type=int)
        parser.add_argument('--n-max', type=int)
        parser.add_argument('--samples', type=int)

    def run(self):
        cfg = self.config
        report = lemmas.verify_lemmas(cfg.get('m_max'), cfg.get('universe'), cfg.get('n_max'),
                                      cfg.get('samples'), cfg.seed)
        report.params = dict(cfg.echo(), **report.params)
        return report


class Calibrate(Command):
    """Sweeps the sample-size constant."""
    name = 'calibrate'
    help = "calibrate the sample-size constant"
    defaults = {'dims': [64, 256, 1024], 'constants': list(learner.CALIBRATION_CONSTANTS),
                'mc_samples': 10000, 'indices': 100}
    verifies = True

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--dims', type=int, nargs='+')
        parser.add_argument('--constants', type=float, nargs='+')
        parser.add_argument('--epsilon', type=float)
        parser.add_argument('--alpha', type=float)
        parser.add_argument('--beta', type=float)
        parser.add_argument('--trials', type=int)
        parser.add_argument('--mc-samples', type=int)
        parser.add_argument('--indices', type=int)

    def run(self):
        cfg = self.config
        report = arena.calibrate(cfg.get('dims'), cfg.get('constants'), cfg.trials, cfg.seed,
                                 epsilon=cfg.epsilon, alpha=cfg.alpha, beta=cfg.beta,
                                 indices=cfg.get('indices'), mc_samples=cfg.get('mc_samples'),
                                 jobs=cfg.jobs)
        report.params = dict(cfg.echo(), **report.params)
        return report


class MechAudit(Command):
    """Exact pmf and shift-ratio tables of the geometric mechanism."""
    name = 'mech-audit'
    help = "audit the count mechanism"
    defaults = {'epsilons': [0.1, 1, 5], 'window': 50}
    verifies = True

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--epsilons', type=float, nargs='+')
        parser.add_argument('--window', type=int)

    def run(self):
        window = self.config.get('window')
        if window < 0:
            raise UsageError("window must be non-negative", window=window)
        rows = []
        summary = {}
        passed = True
        for epsilon in self.config.get('epsilons'):
            for z, here, shifted, ratio in mechanisms.dp_ratio_table(epsilon, window):
                rows.append({'epsilon': epsilon, 'z': z, 'pmf': float(here),
                             'pmf_shifted': float(shifted), 'ratio': float(ratio)})
            largest, bound = mechanisms.max_dp_ratio(epsilon, window)
            ok = largest <= bound
            passed = passed and ok
            summary[str(epsilon)] = {'max_ratio': str(largest), 'bound': str(bound),
                                     'tail_at_window': mechanisms.geometric_tail(window, epsilon),
                                     'passed': ok}
        return self.report(trials=len(self.config.get('epsilons')), passed=passed,
                           summary=summary, rows=rows)
