# -*- coding: utf-8 -*-
"""
Experiment harnesses: PAC trials on realizable distributions, the online
mistake-bound game against the reverse-order adversary, and the
forward-prediction advantage experiment.

Trials are independent jobs. Each owns a generator spawned from the run
seed, and results are collected in trial order, so the number of worker
processes never changes a report.
"""
import logging
import math

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np

from .api import make_config, make_rng, trial_seeds
from .baselines import BASELINES, EFFICIENT_BASELINES, make_learner
from .errors import BudgetExceeded, ProtocolError, UsageError
from .learner import learn, required_sample_size
from .mechanisms import PrivacyLedger, uniform_int
from .reports import Report, binomial_interval
from .sequence import (Example, LabeledExample, SeedKey, concept_eval, forward_chain,
                       on_sequence)

logger = logging.getLogger(__name__)

ONLINE_MARGIN = 0.02

# Default and largest number of suffix rounds before the advantage target.
ADVANTAGE_SUFFIX = 32
MAX_ADVANTAGE_SUFFIX = 1 << 16


# Distributions

@dataclass(frozen=True)
class RealizableDistribution(object):
    """
    Weighted on-sequence indices plus an optional mass of uniformly random
    (almost surely negative) examples, all labelled by c_s.
    """
    params: object
    s: SeedKey
    weights: tuple
    negative_weight: float = 0.0

    def __post_init__(self):
        weights = tuple((int(i), float(w)) for i, w in self.weights)
        object.__setattr__(self, 'weights', weights)
        for i, w in weights:
            self.params.check_index(i)
            if w < 0:
                raise UsageError("negative weight", i=i, weight=w)
        if self.negative_weight < 0:
            raise UsageError("negative weight", negative_weight=self.negative_weight)
        total = sum(w for _, w in weights) + self.negative_weight
        if total <= 0:
            raise UsageError("distribution has empty support")
        if not math.isclose(total, 1.0, rel_tol=1e-9, abs_tol=1e-12):
            raise UsageError("weights must sum to 1", total=total)
        object.__setattr__(self, '_support', tuple(on_sequence(self.params, self.s, i)
                                                   for i, _ in weights))

    @classmethod
    def uniform(cls, params, s, indices, negative_weight=0.0):
        indices = list(indices)
        if not indices:
            return cls(params, s, (), negative_weight)
        share = (1.0 - negative_weight) / len(indices)
        return cls(params, s, tuple((i, share) for i in indices), negative_weight)

    @property
    def support(self):
        return self._support

    def _probabilities(self):
        return np.array([w for _, w in self.weights] + [self.negative_weight])

    def draw_positions(self, n, rng):
        """Support positions; position len(weights) stands for a negative draw."""
        probabilities = self._probabilities()
        return rng.choice(len(probabilities), size=n, p=probabilities / probabilities.sum())

    def negative_example(self, rng):
        i = uniform_int(rng, 0, self.params.index_count - 1)
        sigma = uniform_int(rng, 0, (1 << self.params.sigma_bits) - 1)
        x = Example(i, sigma)
        return LabeledExample(x, concept_eval(self.params, self.s, x))

    def sample(self, n, rng):
        """n i.i.d. labelled examples."""
        drawn = []
        for position in self.draw_positions(n, rng):
            if position < len(self._support):
                drawn.append(self._support[position])
            else:
                drawn.append(self.negative_example(rng))
        return drawn


def random_indices(params, count, rng):
    """``count`` distinct indices below the all-ones index."""
    if count >= params.index_count:
        raise UsageError("not enough indices", count=count, k=params.k)
    chosen = set()
    while len(chosen) < count:
        chosen.add(uniform_int(rng, 0, params.index_count - 2))
    return sorted(chosen)


# PAC trials

@dataclass(frozen=True)
class PacTrial(object):
    sample_loss: float
    population_loss_estimate: float
    population_loss: Optional[float]
    success: bool
    hypothesis: str
    i_star: Optional[int]
    m: int
    m_hat: int
    ell: Optional[int]
    epsilon_spent: float
    delta_spent: float

    def as_row(self, trial):
        return {'trial': trial,
                'sample_loss': self.sample_loss,
                'population_loss_estimate': self.population_loss_estimate,
                'population_loss': self.population_loss,
                'success': int(self.success),
                'hypothesis': self.hypothesis,
                'i_star': self.i_star,
                'm': self.m,
                'm_hat': self.m_hat,
                'ell': self.ell,
                'epsilon': self.epsilon_spent,
                'delta': self.delta_spent}


class _CachedHypothesis(object):
    """Evaluates a hypothesis once per distinct example."""

    def __init__(self, params, h):
        self.params = params
        self.h = h
        self.cache = {}

    def __call__(self, x):
        if x not in self.cache:
            self.cache[x] = self.h.evaluate(self.params, x)
        return self.cache[x]


def _loss(predict, examples):
    if not examples:
        return 0.0
    return sum(1 for labeled in examples if predict(labeled.example) != labeled.label) / len(examples)


def population_loss_estimate(dist, predict, mc_samples, rng):
    return _loss(predict, dist.sample(mc_samples, rng))


def on_sequence_loss(dist, predict):
    """Exact loss contributed by the on-sequence part of the distribution."""
    return sum(w for (_, w), labeled in zip(dist.weights, dist.support)
               if predict(labeled.example) != labeled.label)


def run_pac_trial(dist, cfg, n, mc_samples, rng):
    """Draws n examples, learns privately, and scores the hypothesis."""
    if n < 1 or mc_samples < 1:
        raise UsageError("n and mc_samples must be positive", n=n, mc_samples=mc_samples)
    if not dist.weights and dist.negative_weight == 0:
        raise UsageError("distribution has empty support")
    S = dist.sample(n, rng)
    ledger = PrivacyLedger()
    trace = {}
    h = learn(S, cfg, rng, ledger, trace)
    predict = _CachedHypothesis(cfg.params, h)
    estimate = population_loss_estimate(dist, predict, mc_samples, rng)
    exact = on_sequence_loss(dist, predict) if dist.negative_weight == 0 else None
    spent = ledger.total()
    return PacTrial(sample_loss=_loss(predict, S),
                    population_loss_estimate=estimate,
                    population_loss=exact,
                    success=estimate <= float(cfg.alpha),
                    hypothesis=h.kind,
                    i_star=getattr(h, 'i_star', None),
                    m=trace['m'],
                    m_hat=trace['m_hat'],
                    ell=trace.get('ell'),
                    epsilon_spent=float(spent.epsilon),
                    delta_spent=float(spent.delta))


# Online game

def reverse_stream(s, params, T):
    """
    On-sequence examples from the top index downwards, T of them. They are
    produced by one derivation at the lowest index and forward steps.
    """
    if not 1 <= T <= params.index_count:
        raise UsageError("T out of range", T=T, k=params.k)
    top = params.index_count - 1
    chain = [LabeledExample(Example(i, sigma), fbit)
             for i, sigma, fbit in forward_chain(params, s, top - T + 1, top)]
    chain.reverse()
    return chain


def forward_stream(s, params, T):
    """The same examples in increasing index order, starting at index 0."""
    if not 1 <= T <= params.index_count:
        raise UsageError("T out of range", T=T, k=params.k)
    return [LabeledExample(Example(i, sigma), fbit)
            for i, sigma, fbit in forward_chain(params, s, 0, T - 1)]


ADVERSARIES = {'reverse': reverse_stream, 'forward': forward_stream}


@dataclass(frozen=True)
class GameRecord(object):
    T: int
    mistakes: int
    per_round: Optional[tuple] = None

    def __post_init__(self):
        if not 0 <= self.mistakes <= self.T:
            raise UsageError("mistakes out of range", mistakes=self.mistakes, T=self.T)

    @property
    def mistake_rate(self):
        return self.mistakes / self.T if self.T else 0.0


class GameSession(object):
    """
    Round state machine of the online game: an example is handed out, a
    single bit is committed for it, and only then is its label revealed.
    """

    def __init__(self, stream, label_of=None, keep_transcript=False):
        self._stream = list(stream)
        self._label_of = label_of
        self._t = 0
        self._pending = None
        self.mistakes = 0
        self._transcript = [] if keep_transcript else None

    @property
    def done(self):
        return self._pending is None and self._t >= len(self._stream)

    def next_example(self):
        if self._pending is not None:
            raise ProtocolError(self._t, "previous example has no prediction yet")
        if self._t >= len(self._stream):
            raise ProtocolError(self._t, "stream exhausted")
        self._pending = self._stream[self._t]
        return self._pending.example

    def predict(self, bit):
        """Commits a prediction for the pending example and returns its label."""
        if self._pending is None:
            raise ProtocolError(self._t, "no example pending; prediction already committed?")
        if bit not in (0, 1):
            raise ProtocolError(self._t, "prediction %r is not a bit" % (bit,))
        labeled = self._pending
        label = self._label_of(labeled.example) if self._label_of else labeled.label
        self.mistakes += int(bit != label)
        if self._transcript is not None:
            self._transcript.append((labeled.example.i, int(bit), label))
        self._pending = None
        self._t += 1
        return label

    def record(self):
        transcript = tuple(self._transcript) if self._transcript is not None else None
        return GameRecord(self._t, self.mistakes, transcript)


def run_online_game(learner, stream, s, params, keep_transcript=False):
    """Plays the stream round by round, scoring against c_s."""
    stream = list(stream)
    if not stream:
        raise UsageError("stream is empty")
    session = GameSession(stream, label_of=partial(concept_eval, params, s),
                          keep_transcript=keep_transcript)
    while not session.done:
        x = session.next_example()
        label = session.predict(learner.predict(x))
        learner.update(x, label)
    return session.record()


def best_constant_rate(stream):
    ones = sum(labeled.label for labeled in stream)
    return min(ones, len(stream) - ones) / len(stream)


def default_advantage_target(params):
    """The index ADVANTAGE_SUFFIX rounds below the top, or 0 on small domains."""
    return max(0, params.index_count - 1 - ADVANTAGE_SUFFIX)


def _check_advantage_target(params, t):
    top = params.index_count - 1
    if not 0 <= t < top:
        raise UsageError("t out of range", t=t, k=params.k)
    if top - t > MAX_ADVANTAGE_SUFFIX:
        raise BudgetExceeded('suffix', top - t, MAX_ADVANTAGE_SUFFIX)


def prediction_advantage(learner_factory, t, trials, params, rng):
    """
    Fraction of trials in which the learner, after playing the
    forward-computable suffix top..t+1, predicts f(t, s) on (t, G(t, s)).
    """
    _check_advantage_target(params, t)
    if trials < 1:
        raise UsageError("trials must be positive", trials=trials)
    hits = 0
    for _ in range(trials):
        hits += _advantage_round(learner_factory, t, params, rng)
    return hits / trials


def _advantage_round(learner_factory, t, params, rng):
    s = SeedKey.random(params, rng)
    learner = learner_factory(params, s, rng)
    chain = [LabeledExample(Example(i, sigma), fbit)
             for i, sigma, fbit in forward_chain(params, s, t, params.index_count - 1)]
    target, suffix = chain[0], chain[:0:-1]
    session = GameSession(suffix)
    while not session.done:
        x = session.next_example()
        learner.update(x, session.predict(learner.predict(x)))
    return int(learner.predict(target.example) == target.label)


# Batch runners

def run_trials(job, arguments, jobs=1):
    """Maps ``job`` over ``arguments`` in order, in ``jobs`` processes."""
    arguments = list(arguments)
    if jobs <= 1 or len(arguments) <= 1:
        return [job(argument) for argument in arguments]
    chunk = max(1, len(arguments) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(job, arguments, chunksize=chunk))


def _pac_job(argument):
    cfg, n, mc_samples, indices, negative_weight, seed = argument
    rng = make_rng(seed)
    params = cfg.params
    s = SeedKey.random(params, rng)
    dist = RealizableDistribution.uniform(params, s, random_indices(params, indices, rng),
                                          negative_weight)
    return run_pac_trial(dist, cfg, n, mc_samples, rng)


def pac_experiment(cfg, n, trials, seed, mc_samples=10000, indices=100,
                   negative_weight=0.0, jobs=1, echo=None):
    """
    ``trials`` PAC trials, each with a fresh seed key and a fresh uniform
    distribution over ``indices`` on-sequence points.
    """
    if trials < 1:
        raise UsageError("trials must be positive", trials=trials)
    arguments = [(cfg, n, mc_samples, indices, negative_weight, child)
                 for child in trial_seeds(seed, trials)]
    results = run_trials(_pac_job, arguments, jobs)
    successes = sum(1 for trial in results if trial.success)
    low, high = binomial_interval(successes, trials)
    target = (1 - float(cfg.beta)) * trials - 10 * trials / 200.0
    logger.info("pac d=%s n=%s: %s/%s successes", cfg.params.d, n, successes, trials)
    return Report(experiment='pac',
                  params=dict(echo or {}, d=cfg.params.d, n=n, mc_samples=mc_samples,
                              indices=indices, negative_weight=negative_weight,
                              **_config_echo(cfg)),
                  seed=seed,
                  trials=trials,
                  successes=successes,
                  ci_low=low,
                  ci_high=high,
                  passed=successes >= target,
                  summary={'success_target': target,
                           'mean_population_loss': float(np.mean(
                               [trial.population_loss_estimate for trial in results]))},
                  rows=[trial.as_row(index) for index, trial in enumerate(results)])


def _config_echo(cfg):
    return {'alpha': float(cfg.alpha), 'beta': float(cfg.beta),
            'epsilon': float(cfg.budget.epsilon), 'delta': float(cfg.budget.delta)}


def _duel_job(argument):
    params, baselines, T, adversary, seed = argument
    rng = make_rng(seed)
    s = SeedKey.random(params, rng)
    stream = ADVERSARIES[adversary](s, params, T)
    best = best_constant_rate(stream)
    rows = []
    for name in baselines:
        learner = make_learner(name, params, s, rng)
        record = run_online_game(learner, stream, s, params)
        rows.append({'baseline': name, 'T': record.T, 'mistakes': record.mistakes,
                     'mistake_rate': record.mistake_rate, 'best_constant_rate': best})
    return rows


def duel_experiment(params, baselines, T, games, seed, adversary='reverse', jobs=1,
                    margin=ONLINE_MARGIN, echo=None):
    """
    Plays every baseline against the adversary on ``games`` random seed keys.
    A baseline passes when its pooled mistake rate is at least the pooled
    best-constant rate minus ``margin``; the omniscient learner must make
    no mistakes.
    """
    if adversary not in ADVERSARIES:
        raise UsageError("unknown adversary", adversary=adversary)
    for name in baselines:
        if name not in BASELINES:
            raise UsageError("unknown baseline", name=name)
    if games < 1:
        raise UsageError("games must be positive", games=games)
    arguments = [(params, tuple(baselines), T, adversary, child)
                 for child in trial_seeds(seed, games)]
    per_game = run_trials(_duel_job, arguments, jobs)
    rows = []
    for game, game_rows in enumerate(per_game):
        for row in game_rows:
            rows.append(dict(game=game, **row))

    summary = {}
    passed = True
    total_mistakes = 0
    total_rounds = 0
    for name in baselines:
        mine = [row for row in rows if row['baseline'] == name]
        mistakes = sum(row['mistakes'] for row in mine)
        rounds = sum(row['T'] for row in mine)
        best = sum(row['best_constant_rate'] * row['T'] for row in mine) / rounds
        rate = mistakes / rounds
        if name in EFFICIENT_BASELINES:
            ok = rate >= best - margin
        else:
            ok = mistakes == 0
        summary[name] = {'mistakes': mistakes, 'rounds': rounds, 'mistake_rate': rate,
                         'best_constant_rate': best, 'passed': ok}
        passed = passed and (ok or adversary != 'reverse')
        total_mistakes += mistakes
        total_rounds += rounds
    low, high = binomial_interval(total_mistakes, total_rounds)
    return Report(experiment='duel',
                  params=dict(echo or {}, d=params.d, k=params.k, T=T, games=games,
                              adversary=adversary, baselines=list(baselines), margin=margin),
                  seed=seed,
                  trials=games,
                  mistake_rate=total_mistakes / total_rounds,
                  ci_low=low,
                  ci_high=high,
                  passed=passed,
                  summary=summary,
                  rows=rows)


def _advantage_job(argument):
    params, baseline, t, trials, seed = argument
    rng = make_rng(seed)
    return prediction_advantage(partial(make_learner, baseline), t, trials, params, rng) * trials


def advantage_experiment(params, baseline, t, trials, seed, jobs=1, echo=None):
    """
    prediction_advantage split into per-worker batches, with the two-sided
    99% binomial band around 1/2 as the pass criterion.
    """
    _check_advantage_target(params, t)
    if trials < 1:
        raise UsageError("trials must be positive", trials=trials)
    batches = max(1, jobs)
    sizes = [trials // batches + (1 if b < trials % batches else 0) for b in range(batches)]
    sizes = [size for size in sizes if size]
    arguments = [(params, baseline, t, size, child)
                 for size, child in zip(sizes, trial_seeds(seed, len(sizes)))]
    hits = int(round(sum(run_trials(_advantage_job, arguments, jobs))))
    advantage = hits / trials
    band = 2.576 * 0.5 / math.sqrt(trials)
    low, high = binomial_interval(hits, trials)
    return Report(experiment='advantage',
                  params=dict(echo or {}, d=params.d, k=params.k, t=t, baseline=baseline),
                  seed=seed,
                  trials=trials,
                  successes=hits,
                  ci_low=low,
                  ci_high=high,
                  passed=abs(advantage - 0.5) <= band,
                  summary={'advantage': advantage, 'band_low': 0.5 - band,
                           'band_high': 0.5 + band},
                  rows=[{'batch': b, 'trials': size} for b, size in enumerate(sizes)])


def calibrate(dims, constants, trials, seed, epsilon=1, alpha=0.1, beta=0.1,
              indices=100, mc_samples=10000, jobs=1):
    """
    Smallest sample-size constant whose PAC success target holds at every
    dimension in ``dims``.
    """
    rows = []
    chosen = None
    for constant in constants:
        all_passed = True
        for d in dims:
            cfg = make_config(d, epsilon, alpha, beta)
            n = required_sample_size(cfg.params, cfg, constant)
            report = pac_experiment(cfg, n, trials, seed, mc_samples=mc_samples,
                                    indices=indices, jobs=jobs)
            rows.append({'constant': constant, 'd': d, 'n': n,
                         'successes': report.successes, 'trials': trials,
                         'passed': int(report.passed)})
            all_passed = all_passed and report.passed
        if all_passed:
            chosen = constant
            break
    return Report(experiment='calibrate',
                  params={'dims': list(dims), 'constants': list(constants),
                          'epsilon': epsilon, 'alpha': alpha, 'beta': beta,
                          'indices': indices, 'mc_samples': mc_samples},
                  seed=seed,
                  trials=trials,
                  passed=chosen is not None,
                  summary={'constant': chosen},
                  rows=rows)
