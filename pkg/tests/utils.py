"""
Helper methods for testing
"""
from mock import Mock

from pyows.api import make_rng
from pyows.baselines import OnlineLearner
from pyows.sequence import Example, LabeledExample, Params, SeedKey, label_bit, prg_expand


def small_params(k=3):
    """The smallest domain with index length k, d = (k+1)^2."""
    return Params.for_k(k)


def all_keys(params):
    return [SeedKey(value, params.k) for value in range(params.index_count)]


def full_tree(params, s):
    """
    Every node seed of the GGM tree, level by level; level t lists the 2^t
    nodes of depth t left to right.
    """
    levels = [[s.value]]
    for _ in range(params.k):
        below = []
        for node in levels[-1]:
            below.extend(prg_expand(node, params.k))
        levels.append(below)
    return levels


def tree_example(params, s, i, levels=None):
    """
    (G(i, s), f(i, s)) read off the materialized tree. Slot t of sigma is
    the right child sitting next to the path at depth t when i turns left
    there; other slots are zero.
    """
    k = params.k
    levels = levels or full_tree(params, s)
    sigma = 0
    for depth in range(1, k + 1):
        prefix = i >> (k - depth)
        if prefix & 1 == 0:
            sigma |= levels[depth][prefix | 1] << (params.sigma_bits - depth * k)
    return sigma, label_bit(levels[k][i], k)


def tree_sequence(params, s):
    """Labelled on-sequence examples for every index, from the tree."""
    levels = full_tree(params, s)
    out = []
    for i in range(params.index_count):
        sigma, fbit = tree_example(params, s, i, levels)
        out.append(LabeledExample(Example(i, sigma), fbit))
    return out


def key_with_positive(params, minimum=1, seed=0):
    """A seed key whose sequence has at least ``minimum`` positive labels."""
    rng = make_rng(seed)
    while True:
        s = SeedKey.random(params, rng)
        if sum(labeled.label for labeled in tree_sequence(params, s)) >= minimum:
            return s


def get_spy_learner(prediction=0):
    """
    An OnlineLearner whose predict/update are Mocks recording every call,
    together with the ordered call log shared by both.
    """
    log = []
    learner = OnlineLearner()

    def predict(x):
        log.append(('predict', x.i))
        return prediction

    def update(x, label):
        log.append(('update', x.i, label))

    learner.predict = Mock(side_effect=predict)
    learner.update = Mock(side_effect=update)
    return learner, log
