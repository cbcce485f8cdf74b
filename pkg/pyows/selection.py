# -*- coding: utf-8 -*-
"""
Private selection: the robust minimum of a list of indices and the most
frequent item of a multiset, each in a pure and an approximate variant.
"""
import logging
import math

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, UsageError
from .mechanisms import (PrivacyBudget, SortedIntDataset, exp_mech_interior_point,
                         rational, sample_log_weights, two_sided_geometric)

logger = logging.getLogger(__name__)

PURE_GAP_CONSTANT = 4


@dataclass(frozen=True)
class RobustMinParams(object):
    alpha_prime: Fraction
    beta: Fraction
    budget: PrivacyBudget
    R: int

    def __post_init__(self):
        alpha_prime = rational(self.alpha_prime)
        if not 0 < alpha_prime <= Fraction(1, 2):
            raise UsageError("robustness fraction must lie in (0, 1/2]",
                             alpha_prime=float(alpha_prime))
        object.__setattr__(self, 'alpha_prime', alpha_prime)
        object.__setattr__(self, 'beta', rational(self.beta))


@dataclass(frozen=True)
class RobustMinCheck(object):
    """The two counting conditions of a robust minimum, recomputed."""
    at_or_below: int
    lower: Fraction
    upper: Fraction

    @property
    def ok(self):
        return self.lower <= self.at_or_below <= self.upper


@dataclass(frozen=True)
class FreqOutcome(object):
    """Selected item, or None when no stable mode was released."""
    item: Optional[bytes] = None

    @property
    def found(self):
        return self.item is not None


def rank_window(n, alpha_prime):
    """1-based ranks ceil(a n) .. floor(2 a n)."""
    alpha_prime = rational(alpha_prime)
    return math.ceil(alpha_prime * n), math.floor(2 * alpha_prime * n)


def is_robust_minimum(I, r, alpha_prime):
    alpha_prime = rational(alpha_prime)
    at_or_below = sum(1 for value in I.values if value <= r)
    return RobustMinCheck(at_or_below, alpha_prime * I.n, 2 * alpha_prime * I.n)


def robust_min_pure(I, params, rng):
    """
    Runs the interior-point exponential mechanism on the ranks
    ceil(a n) .. floor(2 a n) of the sorted input.
    """
    low, high = rank_window(I.n, params.alpha_prime)
    if low < 1 or high < low:
        raise DegenerateInputError(I.n, low, high)
    window = SortedIntDataset(I.values[low - 1:high], params.R)
    r = exp_mech_interior_point(window, params.budget.epsilon, rng)
    check = is_robust_minimum(I, r, params.alpha_prime)
    logger.debug("robust minimum r=%s: %s at or below, wanted [%s, %s] -> %s",
                 r, check.at_or_below, float(check.lower), float(check.upper),
                 "ok" if check.ok else "missed")
    return r


def robust_min_approx(I, params, rng):
    """
    (epsilon, delta) variant. Pure privacy implies approximate privacy, so
    this runs the pure mechanism; delta stays on the caller's budget.
    """
    return robust_min_pure(I, params, rng)


def pure_gap_threshold(R, beta, epsilon):
    """Lead over the runner-up at which the pure selection is reliable."""
    return PURE_GAP_CONSTANT * math.log(R / float(beta)) / float(epsilon)


def most_frequent_log_weights(S, R, epsilon):
    """
    Exponential-mechanism weights with score freq_S(x), in log form.

    :return: (sorted observed items, their log weights, log of the total
              weight of the R - #distinct unobserved items or None)
    """
    counts = Counter(S)
    if R < len(counts):
        raise UsageError("domain smaller than the number of distinct items",
                         R=R, distinct=len(counts))
    items = sorted(counts)
    log_weights = [float(epsilon) * counts[item] / 2.0 for item in items]
    unseen = R - len(items)
    return items, log_weights, (math.log(unseen) if unseen > 0 else None)


def most_frequent_pure(S, R, epsilon, beta, rng):
    """
    Exponential mechanism over the whole domain of size R. The unobserved
    items are one aggregated branch which, when drawn, releases no item.
    """
    rational(beta)
    epsilon = rational(epsilon)
    if epsilon <= 0:
        raise UsageError("epsilon must be positive", epsilon=float(epsilon))
    S = list(S)
    if not S:
        return FreqOutcome()
    items, log_weights, unseen = most_frequent_log_weights(S, R, epsilon)
    top_two = sorted(Counter(S).values(), reverse=True)[:2] + [0]
    lead, gap = top_two[0] - top_two[1], pure_gap_threshold(R, beta, epsilon)
    if lead < gap:
        logger.debug("most frequent item: lead %d below %.1f", lead, gap)
    if unseen is not None:
        log_weights = log_weights + [unseen]
    choice = sample_log_weights(log_weights, rng)
    if choice == len(items):
        logger.debug("most frequent item: unobserved branch drawn")
        return FreqOutcome()
    return FreqOutcome(items[choice])


def stable_threshold(epsilon, delta):
    """tau = 1 + ceil(2 ln(2 / delta) / epsilon)."""
    return 1 + math.ceil(2 * math.log(2 / float(delta)) / float(epsilon))


def stable_survivors(counts, noise, tau):
    """Noisy counts of the items that clear the threshold."""
    return {item: counts[item] + int(z) for item, z in zip(sorted(counts), noise)
            if counts[item] + int(z) >= tau}


def most_frequent_approx(S, epsilon, delta, beta, rng):
    """
    Stable histogram restricted to its argmax: geometric noise at epsilon/2
    on each observed count, counts below tau dropped, the largest survivor
    released (smallest item bytes on ties).
    """
    rational(beta)
    delta = rational(delta)
    if delta <= 0:
        raise UsageError("approximate selection needs delta > 0", delta=float(delta))
    epsilon = rational(epsilon)
    counts = Counter(S)
    if not counts:
        return FreqOutcome()
    tau = stable_threshold(epsilon, delta)
    noise = two_sided_geometric(epsilon / 2, rng, size=len(counts))
    survivors = stable_survivors(counts, np.asarray(noise), tau)
    if not survivors:
        logger.debug("most frequent item: nothing above tau=%s", tau)
        return FreqOutcome()
    best = max(sorted(survivors), key=lambda item: survivors[item])
    return FreqOutcome(best)
