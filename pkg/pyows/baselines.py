# -*- coding: utf-8 -*-
"""
Online learners played against the adversaries of ``pyows.arena``.

A learner sees an example, commits to a bit with ``predict`` and only then
hears the true label through ``update``. Everything except the omniscient
learner runs in time polynomial in d; these are the only efficient learners
the experiments speak about.
"""
import math

from .errors import UsageError
from .learner import Threshold
from .sequence import compute_forward, concept_eval


class OnlineLearner(object):
    """Base class; subclasses override predict and, if stateful, update."""
    name = None

    def predict(self, x):
        raise NotImplementedError

    def update(self, x, label):
        pass


class ConstantLearner(OnlineLearner):

    def __init__(self, bit):
        self.bit = bit
        self.name = 'constant%d' % bit

    def predict(self, x):
        return self.bit


class RandomLearner(OnlineLearner):
    name = 'random'

    def __init__(self, rng):
        self.rng = rng

    def predict(self, x):
        return int(self.rng.integers(2))


class MajorityLearner(OnlineLearner):
    """Predicts the more frequent label so far, 0 on ties."""
    name = 'majority'

    def __init__(self):
        self.counts = [0, 0]

    def predict(self, x):
        return int(self.counts[1] > self.counts[0])

    def update(self, x, label):
        self.counts[label] += 1


class ForwardPredictor(OnlineLearner):
    """
    Remembers the lowest-index positive example seen and answers later
    indices by computing forward from it. Indices at or below that anchor
    get 0 unless they repeat the anchor itself.
    """
    name = 'forward'

    def __init__(self, params):
        self.params = params
        self.anchor = None

    def predict(self, x):
        if self.anchor is None or x.i < self.anchor.i:
            return 0
        if x.i == self.anchor.i:
            return int(x.sigma == self.anchor.sigma)
        sigma_hat, b_hat = compute_forward(self.params, x.i, self.anchor.i, self.anchor.sigma)
        return b_hat if x.sigma == sigma_hat else 0

    def update(self, x, label):
        if label == 1 and (self.anchor is None or x.i < self.anchor.i):
            self.anchor = x


class MultiplicativeWeightsLearner(OnlineLearner):
    """
    Weighted majority over the two constants and threshold hypotheses
    anchored at the most recent positive examples.
    """
    name = 'mw'

    def __init__(self, params, pool_size=8, eta=0.5):
        self.params = params
        self.pool_size = pool_size
        self.penalty = math.exp(-eta)
        self.experts = [('constant', 0), ('constant', 1)]
        self.weights = [1.0, 1.0]
        self._votes = None

    def _vote(self, expert, x):
        kind, value = expert
        if kind == 'constant':
            return value
        return value.evaluate(self.params, x)

    def predict(self, x):
        self._votes = [self._vote(expert, x) for expert in self.experts]
        mass = sum(w for w, vote in zip(self.weights, self._votes) if vote == 1)
        return int(mass > sum(self.weights) / 2.0)

    def update(self, x, label):
        votes = self._votes if self._votes is not None else \
            [self._vote(expert, x) for expert in self.experts]
        self.weights = [w * (self.penalty if vote != label else 1.0)
                        for w, vote in zip(self.weights, votes)]
        total = sum(self.weights)
        self.weights = [w / total for w in self.weights]
        self._votes = None
        if label == 1:
            self.experts.append(('threshold', Threshold(x.i, x.sigma, 1)))
            self.weights.append(sum(self.weights) / len(self.weights))
            if len(self.experts) > self.pool_size + 2:
                del self.experts[2]
                del self.weights[2]


class OmniscientLearner(OnlineLearner):
    """Holds the seed key; the reference point with zero mistakes."""
    name = 'omniscient'

    def __init__(self, params, s):
        self.params = params
        self.s = s

    def predict(self, x):
        return concept_eval(self.params, self.s, x)


BASELINES = ('constant0', 'constant1', 'random', 'majority', 'forward', 'mw', 'omniscient')
EFFICIENT_BASELINES = BASELINES[:-1]


def make_learner(name, params, s, rng):
    """Builds a fresh learner of the named baseline for one game."""
    if name == 'constant0':
        return ConstantLearner(0)
    if name == 'constant1':
        return ConstantLearner(1)
    if name == 'random':
        return RandomLearner(rng)
    if name == 'majority':
        return MajorityLearner()
    if name == 'forward':
        return ForwardPredictor(params)
    if name == 'mw':
        return MultiplicativeWeightsLearner(params)
    if name == 'omniscient':
        return OmniscientLearner(params, s)
    raise UsageError("unknown baseline", name=name)
