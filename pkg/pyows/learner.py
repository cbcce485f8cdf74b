# -*- coding: utf-8 -*-
"""
The differentially private PAC learner for one-way sequences.

The learner privately counts the positive examples, privately picks a
robust minimum i* of their indices, carries every positive example at or
below i* forward to i*, and privately selects the common <sigma*, b*> of
the carried examples. The hypothesis it returns accepts exactly the
sequence from i* onwards.
"""
import json
import logging
import math

from dataclasses import dataclass
from fractions import Fraction

from . import encode
from .errors import DecodeError, DegenerateInputError, UsageError
from .mechanisms import PrivacyBudget, PrivacyLedger, SortedIntDataset, noisy_count, rational
from .selection import (RobustMinParams, most_frequent_approx, most_frequent_pure,
                        robust_min_approx, robust_min_pure)
from .sequence import CoPath, Params, compute_forward, index_bit

logger = logging.getLogger(__name__)

CALIBRATION_CONSTANTS = (20, 40, 80, 160, 320)
DEFAULT_SAMPLE_CONSTANT = 320

ALL_ZERO_TAG = 0
THRESHOLD_TAG = 1


@dataclass(frozen=True)
class LearnConfig(object):
    alpha: Fraction
    beta: Fraction
    budget: PrivacyBudget
    params: Params

    def __post_init__(self):
        for name in ('alpha', 'beta'):
            value = rational(getattr(self, name))
            if not 0 < value < 1:
                raise UsageError("%s must lie in (0, 1)" % name, **{name: float(value)})
            object.__setattr__(self, name, value)

    @property
    def pure(self):
        return self.budget.pure


class Hypothesis(object):
    """Base class of the two hypothesis shapes the learner can return."""

    def evaluate(self, params, x):
        raise NotImplementedError

    @property
    def kind(self):
        raise NotImplementedError


class AllZero(Hypothesis):

    def evaluate(self, params, x):
        return 0

    @property
    def kind(self):
        return 'all_zero'

    def __eq__(self, other):
        return isinstance(other, AllZero)

    def __hash__(self):
        return hash(AllZero)

    def __repr__(self):
        return 'AllZero()'


@dataclass(frozen=True)
class Threshold(Hypothesis):
    i_star: int
    sigma_star: int
    b_star: int

    def evaluate(self, params, x):
        if x.i < self.i_star:
            return 0
        if x.i == self.i_star:
            return self.b_star if x.sigma == self.sigma_star else 0
        sigma_hat, b_hat = compute_forward(params, x.i, self.i_star, self.sigma_star)
        return b_hat if x.sigma == sigma_hat else 0

    @property
    def kind(self):
        return 'threshold'


def hypothesis_eval(params, h, x):
    return h.evaluate(params, x)


def sample_loss(params, h, S):
    if not S:
        return 0.0
    return sum(1 for labeled in S if h.evaluate(params, labeled.example) != labeled.label) / len(S)


# Serialization

def hypothesis_to_bytes(params, h):
    """Tag byte, then i*, sigma* and b* as one bit string padded to bytes."""
    if isinstance(h, AllZero):
        return bytes([ALL_ZERO_TAG])
    packed = (((h.i_star << params.sigma_bits) | h.sigma_star) << 1) | h.b_star
    return bytes([THRESHOLD_TAG]) + encode.pack_bits(packed, params.d + 1)


def hypothesis_from_bytes(params, data):
    if not data:
        raise DecodeError("empty hypothesis")
    if data[0] == ALL_ZERO_TAG:
        if len(data) != 1:
            raise DecodeError("trailing bytes after the all-zero tag")
        return AllZero()
    if data[0] != THRESHOLD_TAG:
        raise DecodeError("unknown hypothesis tag %d" % data[0])
    packed = encode.unpack_bits(data[1:], params.d + 1)
    b_star = packed & 1
    sigma_star = (packed >> 1) & ((1 << params.sigma_bits) - 1)
    i_star = packed >> (params.sigma_bits + 1)
    return Threshold(i_star, sigma_star, b_star)


def hypothesis_to_dict(params, h):
    if isinstance(h, AllZero):
        return {'type': h.kind}
    return {'type': h.kind,
            'i_star': encode.bits_to_hex(h.i_star, params.k),
            'sigma_star': encode.bits_to_hex(h.sigma_star, params.sigma_bits),
            'b_star': h.b_star}


def hypothesis_from_dict(params, record):
    kind = record.get('type')
    if kind == 'all_zero':
        return AllZero()
    if kind != 'threshold':
        raise DecodeError("unknown hypothesis type %r" % (kind,))
    try:
        i_star = params.check_index(encode.hex_to_bits(record['i_star'], params.k))
        b_star = record['b_star']
        sigma_star = encode.hex_to_bits(record['sigma_star'], params.sigma_bits)
    except (KeyError, UsageError) as e:
        raise DecodeError(str(e))
    if b_star not in (0, 1):
        raise DecodeError("b_star must be a bit")
    return Threshold(i_star, sigma_star, b_star)


def hypothesis_to_json(params, h):
    return json.dumps(hypothesis_to_dict(params, h), sort_keys=True)


def hypothesis_from_json(params, text):
    try:
        record = json.loads(text)
    except ValueError as e:
        raise DecodeError(str(e))
    if not isinstance(record, dict):
        raise DecodeError("hypothesis JSON must be an object")
    return hypothesis_from_dict(params, record)


# Sample size

def required_sample_size(params, cfg, constant=DEFAULT_SAMPLE_CONSTANT):
    """
    max(ceil(C (sqrt(d) + ln(1/beta)) / (alpha epsilon)),
        ceil(8 ln(2/beta) / alpha))
    """
    alpha = float(cfg.alpha)
    beta = float(cfg.beta)
    epsilon = float(cfg.budget.epsilon)
    privacy_term = math.ceil(constant * (math.sqrt(params.d) + math.log(1 / beta)) / (alpha * epsilon))
    return max(privacy_term, generalization_floor(cfg))


def generalization_floor(cfg):
    return math.ceil(8 * math.log(2 / float(cfg.beta)) / float(cfg.alpha))


# The learner

def canonical_range_bits(params, i_star):
    """Bits of a canonical <sigma, b> at i*: one seed per zero bit, plus b."""
    zeros = sum(1 for depth in range(1, params.k + 1) if not index_bit(i_star, depth, params.k))
    return zeros * params.k + 1


def is_canonical(params, i_star, sigma):
    return CoPath.from_sigma(params, i_star, sigma).to_sigma(params) == sigma


def _item_to_pair(params, item):
    packed = encode.unpack_bits(item, params.sigma_bits + 1)
    return packed >> 1, packed & 1


def learn_pure(S, cfg, rng, ledger=None, trace=None):
    if not cfg.pure:
        raise UsageError("learn_pure needs delta = 0", delta=float(cfg.budget.delta))
    return _learn(S, cfg, rng, ledger, trace, approximate=False)


def learn_approx(S, cfg, rng, ledger=None, trace=None):
    if cfg.pure:
        raise UsageError("learn_approx needs delta > 0")
    return _learn(S, cfg, rng, ledger, trace, approximate=True)


def learn(S, cfg, rng, ledger=None, trace=None):
    """learn_pure or learn_approx, whichever the budget calls for."""
    if cfg.pure:
        return learn_pure(S, cfg, rng, ledger, trace)
    return learn_approx(S, cfg, rng, ledger, trace)


def _learn(S, cfg, rng, ledger, trace, approximate):
    params = cfg.params
    ledger = ledger if ledger is not None else PrivacyLedger()
    trace = trace if trace is not None else {}
    share = cfg.budget.epsilon / 3
    count_budget = ledger.allot('count', PrivacyBudget(share))
    if approximate:
        min_budget = ledger.allot('robust_min', PrivacyBudget(share, cfg.budget.delta / 2))
        freq_budget = ledger.allot('most_frequent', PrivacyBudget(share, cfg.budget.delta / 2))
    else:
        min_budget = ledger.allot('robust_min', PrivacyBudget(share))
        freq_budget = ledger.allot('most_frequent', PrivacyBudget(share))

    n = len(S)
    positives = sorted((labeled.example for labeled in S if labeled.label == 1),
                       key=lambda x: x.i)
    m = len(positives)
    m_hat = noisy_count(m, count_budget.epsilon, rng)
    trace.update(n=n, m=m, m_hat=m_hat)
    if Fraction(m_hat) <= cfg.alpha * n / 3:
        logger.debug("count: m_hat=%s at or below alpha n / 3, all-zero", m_hat)
        trace['stopped'] = 'count'
        return AllZero()

    alpha_prime = min(cfg.alpha * n / (6 * m_hat), Fraction(1, 2))
    if alpha_prime <= 0:
        trace['stopped'] = 'count'
        return AllZero()
    indices = SortedIntDataset(tuple(x.i + 1 for x in positives), params.index_count)
    min_params = RobustMinParams(alpha_prime, cfg.beta / 6, min_budget, params.index_count)
    try:
        if approximate:
            i_star = robust_min_approx(indices, min_params, rng) - 1
        else:
            i_star = robust_min_pure(indices, min_params, rng) - 1
    except DegenerateInputError as e:
        logger.debug("robust min: %s, all-zero", e)
        trace['stopped'] = 'robust_min'
        return AllZero()
    trace['i_star'] = i_star

    forwarded = {}
    mapped = []
    for x in positives:
        if x.i > i_star:
            break
        if x.i == i_star:
            mapped.append((x.sigma, 1))
            continue
        key = (x.i, x.sigma)
        if key not in forwarded:
            forwarded[key] = compute_forward(params, i_star, x.i, x.sigma)
        mapped.append(forwarded[key])
    trace['ell'] = len(mapped)
    if not mapped:
        logger.debug("most frequent: no positive example at or below i*=%s, all-zero", i_star)
        trace['stopped'] = 'most_frequent'
        return AllZero()

    items = [encode.item_bytes(params, sigma, bit) for sigma, bit in mapped
             if is_canonical(params, i_star, sigma)]
    if approximate:
        outcome = most_frequent_approx(items, freq_budget.epsilon, freq_budget.delta,
                                       cfg.beta / 6, rng)
    else:
        outcome = most_frequent_pure(items, 1 << canonical_range_bits(params, i_star),
                                     freq_budget.epsilon, cfg.beta / 6, rng)
    if not outcome.found:
        logger.debug("most frequent: no item released, all-zero")
        trace['stopped'] = 'most_frequent'
        return AllZero()
    sigma_star, b_star = _item_to_pair(params, outcome.item)
    trace['stopped'] = None
    logger.debug("learned threshold at i*=%s (m=%s, m_hat=%s, ell=%s)", i_star, m, m_hat, len(mapped))
    return Threshold(i_star, sigma_star, b_star)
