# -*- coding: utf-8 -*-
"""
Differential-privacy building blocks: two-sided geometric noise for counts,
the exponential mechanism for the interior-point problem, and basic
sequential composition.

Privacy parameters are kept as Fractions so that splitting a budget and
composing the parts gives back the original budget exactly.
"""
import bisect
import logging
import math

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby

import numpy as np

from .errors import UsageError

logger = logging.getLogger(__name__)


def rational(value):
    """
    Reads a number as an exact rational. Floats are read through their
    shortest decimal form, so 0.1 becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise UsageError("expected a number", value=value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise UsageError("expected a finite number", value=value)
        return Fraction(repr(float(value)))
    raise UsageError("expected a number", value=value)


def _positive_epsilon(epsilon):
    epsilon = rational(epsilon)
    if epsilon <= 0:
        raise UsageError("epsilon must be positive", epsilon=float(epsilon))
    return epsilon


@dataclass(frozen=True)
class PrivacyBudget(object):
    """(epsilon, delta); delta = 0 is pure differential privacy."""
    epsilon: Fraction
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 'epsilon', _positive_epsilon(self.epsilon))
        delta = rational(self.delta)
        if not 0 <= delta < 1:
            raise UsageError("delta must lie in [0, 1)", delta=float(delta))
        object.__setattr__(self, 'delta', delta)

    @property
    def pure(self):
        return self.delta == 0

    def as_dict(self):
        return {'epsilon': float(self.epsilon), 'delta': float(self.delta)}

    def __str__(self):
        return "(epsilon=%s, delta=%s)" % (float(self.epsilon), float(self.delta))


def compose(budgets):
    """Basic composition: componentwise sums."""
    budgets = list(budgets)
    if not budgets:
        raise UsageError("nothing to compose")
    return PrivacyBudget(sum(b.epsilon for b in budgets), sum(b.delta for b in budgets))


@dataclass
class PrivacyLedger(object):
    """Budgets allotted to the private steps of one computation, in order."""
    entries: list = field(default_factory=list)

    def allot(self, label, budget):
        self.entries.append((label, budget))
        return budget

    def total(self):
        return compose(budget for _, budget in self.entries)

    def as_rows(self):
        return [dict(step=label, **budget.as_dict()) for label, budget in self.entries]


@dataclass(frozen=True)
class SortedIntDataset(object):
    """Nondecreasing integers in [1, R]."""
    values: tuple
    R: int

    def __post_init__(self):
        if self.R < 1:
            raise UsageError("domain bound must be positive", R=self.R)
        values = tuple(self.values)
        object.__setattr__(self, 'values', values)
        if values and (values[0] < 1 or values[-1] > self.R):
            raise UsageError("values must lie in [1, R]", R=self.R)
        if any(a > b for a, b in zip(values, values[1:])):
            raise UsageError("values must be sorted")

    @classmethod
    def from_values(cls, values, R):
        return cls(tuple(sorted(values)), R)

    @property
    def n(self):
        return len(self.values)


# Noise for counts

def _gamma(epsilon):
    g = math.exp(-float(epsilon))
    if g == 0:
        raise UsageError("epsilon too large for float noise", epsilon=float(epsilon))
    return g


def two_sided_geometric(epsilon, rng, size=None):
    """
    Pr[Z = z] = (1 - g) / (1 + g) * g^|z| with g = exp(-epsilon), sampled as
    the difference of two geometric variables.
    """
    epsilon = _positive_epsilon(epsilon)
    p = -math.expm1(-float(epsilon))
    draws = rng.geometric(p, size=size) - rng.geometric(p, size=size)
    if size is None:
        return int(draws)
    return draws


def geometric_pmf(z, epsilon):
    """
    Exact pmf, with g read as the rational value of the float exp(-epsilon)
    the sampler uses. Under that reading e^epsilon is 1/g.
    """
    g = Fraction(_gamma(_positive_epsilon(epsilon)))
    return (1 - g) / (1 + g) * g ** abs(z)


def geometric_tail(t, epsilon):
    """Pr[|Z| > t] = 2 g^(t+1) / (1 + g) for t >= 0."""
    g = _gamma(_positive_epsilon(epsilon))
    return 2 * g ** (t + 1) / (1 + g)


def dp_ratio_table(epsilon, window=50):
    """
    Rows (z, pmf(z), pmf(z + 1), ratio) for a sensitivity-1 shift, ratio
    being the larger of the two directions, over |z| <= window.
    """
    rows = []
    for z in range(-window, window + 1):
        here = geometric_pmf(z, epsilon)
        shifted = geometric_pmf(z + 1, epsilon)
        rows.append((z, here, shifted, max(here / shifted, shifted / here)))
    return rows


def max_dp_ratio(epsilon, window=50):
    """
    Largest shift ratio over the window and beyond it, and the bound 1/g.

    For |z| > window both neighbours lie on the same side of zero and the
    ratio is exactly 1/g in one direction and g in the other.
    """
    bound = 1 / Fraction(_gamma(_positive_epsilon(epsilon)))
    inside = max(row[3] for row in dp_ratio_table(epsilon, window))
    return max(inside, bound), bound


def noisy_count(count, epsilon, rng):
    """count + two-sided geometric noise at epsilon."""
    if isinstance(count, bool) or not isinstance(count, int) or count < 0:
        raise UsageError("count must be a nonnegative integer", count=count)
    return count + two_sided_geometric(epsilon, rng)


# Interior point

def _best_split(low, high, n):
    """max of min(t, n - t) over t in [low, high]."""
    if high < n / 2.0:
        return high
    if low > n / 2.0:
        return n - low
    return n // 2


def interior_point_score(S, r):
    """
    q(S, r): the best min(t, n - t) over split points t with
    x_(t) <= r <= x_(t+1), sentinels x_(0) = 1 and x_(n+1) = R.
    """
    low = bisect.bisect_left(S.values, r)
    high = bisect.bisect_right(S.values, r)
    return _best_split(low, high, S.n)


def interior_point_pieces(S):
    """
    [1, R] cut into (low, high, score) pieces of constant score: every
    distinct data value on its own, and the gaps between them.
    """
    n = S.n
    pieces = []
    below = 0
    previous = 0
    for value, group in groupby(S.values):
        count = sum(1 for _ in group)
        if value - previous > 1:
            pieces.append((previous + 1, value - 1, _best_split(below, below, n)))
        pieces.append((value, value, _best_split(below, below + count, n)))
        below += count
        previous = value
    if previous < S.R:
        pieces.append((previous + 1, S.R, 0))
    return pieces


def uniform_int(rng, low, high):
    """Uniform integer in [low, high], for bounds of any size."""
    span = high - low + 1
    if span <= np.iinfo(np.int64).max:
        return low + int(rng.integers(span))
    nbytes = (span.bit_length() + 7) // 8
    limit = (1 << (8 * nbytes)) // span * span
    while True:
        draw = int.from_bytes(rng.bytes(nbytes), "big")
        if draw < limit:
            return low + draw % span


def sample_log_weights(log_weights, rng):
    """Index drawn with probability proportional to exp(log_weights)."""
    log_weights = np.asarray(log_weights, dtype=float)
    weights = np.exp(log_weights - log_weights.max())
    return int(rng.choice(len(weights), p=weights / weights.sum()))


def exp_mech_interior_point(S, epsilon, rng):
    """
    Samples r in [1, R] with probability proportional to
    exp(epsilon * q(S, r) / 2), one piece at a time, so the cost is linear in
    n and independent of R.
    """
    epsilon = _positive_epsilon(epsilon)
    if S.n == 0:
        raise UsageError("interior point of an empty dataset")
    pieces = interior_point_pieces(S)
    log_weights = [math.log(high - low + 1) + float(epsilon) * score / 2.0
                   for low, high, score in pieces]
    low, high, score = pieces[sample_log_weights(log_weights, rng)]
    r = uniform_int(rng, low, high)
    logger.debug("interior point r=%s score=%s (n=%s, pieces=%s)", r, score, S.n, len(pieces))
    return r
