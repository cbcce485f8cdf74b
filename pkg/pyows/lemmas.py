# -*- coding: utf-8 -*-
"""
Brute-force verifiers for the two combinatorial facts behind the
impossibility of pure private online learning:

* separating every ordered pair of m points needs at least log2(m) + 1
  sets;
* n sets generate at most 2^(2^n) subsets of a universe.

Subsets of a universe of size u are int bitmasks. The membership code of
a point x under a collection S_1..S_n is the n-bit int whose bit i is set
when x is in S_i.
"""
import itertools
import logging
import math

from .api import make_rng
from .errors import BudgetExceeded, UsageError
from .reports import Report

logger = logging.getLogger(__name__)

MAX_SEPARATION_POINTS = 8
MAX_UNIVERSE = 12
MAX_COLLECTION_SIZE = 3
LITERAL_LIMIT = 1 << 12
SEPARATION_LITERAL_LIMIT = 1 << 16


def members(mask, u):
    return [x for x in range(u) if mask >> x & 1]


def codes_of(collection, u):
    """Membership code of every point of the universe."""
    return [sum(1 << i for i, subset in enumerate(collection) if subset >> x & 1)
            for x in range(u)]


def _is_subcode(a, b):
    return a & b == a


# Separation

def separates_all_pairs(m, collection):
    """True when every ordered pair x != y of [m] has a set holding x but not y."""
    for x in range(m):
        for y in range(m):
            if x == y:
                continue
            if not any(subset >> x & 1 and not subset >> y & 1 for subset in collection):
                return False
    return True


def _has_antichain(n, m):
    """Is there a family of m pairwise incomparable n-bit codes?"""
    codes = range(1 << n)

    def extend(chosen, start):
        if len(chosen) == m:
            return True
        for code in codes[start:]:
            if all(not _is_subcode(code, c) and not _is_subcode(c, code) for c in chosen):
                if extend(chosen + [code], code + 1):
                    return True
        return False

    if m > 1 << n:
        return False
    return extend([], 0)


def _literal_separation_exists(m, n):
    return any(separates_all_pairs(m, collection)
               for collection in itertools.product(range(1 << m), repeat=n))


def separation_exists(m, n):
    """
    Whether some collection of n subsets of [m] separates every ordered
    pair, by enumerating collections when that is small and otherwise
    through the equivalent antichain search on membership codes.
    """
    if (1 << m) ** n <= SEPARATION_LITERAL_LIMIT:
        return _literal_separation_exists(m, n)
    return _has_antichain(n, m)


def lemma_lower_bound(m):
    """Smallest n with n >= log2(m) + 1."""
    return (m - 1).bit_length() + 1


def minimum_separating_size(m):
    n = 0
    while math.comb(n, n // 2) < m:
        n += 1
    return n


def middle_layer_witness(m):
    """A collection of minimum size: m distinct codes of the middle layer."""
    n = minimum_separating_size(m)
    layer = [c for c in range(1 << n) if bin(c).count('1') == n // 2][:m]
    return tuple(sum(1 << x for x, code in enumerate(layer) if code >> i & 1)
                 for i in range(n))


def bit_complement_witness(m):
    """Sets 'bit j of x is 1' and their complements, one pair per bit of m - 1."""
    everything = (1 << m) - 1
    collection = []
    for j in range(max(1, (m - 1).bit_length())):
        ones = sum(1 << x for x in range(m) if x >> j & 1)
        collection.extend([ones, everything & ~ones])
    return tuple(collection)


def verify_separation_lemma(m_max):
    if m_max > MAX_SEPARATION_POINTS:
        raise BudgetExceeded('m_max', m_max, MAX_SEPARATION_POINTS)
    if m_max < 2:
        raise UsageError("m_max must be at least 2", m_max=m_max)
    rows = []
    passed = True
    for m in range(2, m_max + 1):
        bound = lemma_lower_bound(m)
        smallest = minimum_separating_size(m)
        below = [n for n in range(smallest) if separation_exists(m, n)]
        witness = middle_layer_witness(m)
        paired = bit_complement_witness(m)
        ok = (not below
              and smallest >= bound
              and separation_exists(m, smallest)
              and separates_all_pairs(m, witness)
              and separates_all_pairs(m, paired))
        passed = passed and ok
        logger.info("separation m=%s: bound %s, minimum %s -> %s", m, bound, smallest,
                    "ok" if ok else "FAILED")
        rows.append({'m': m,
                     'lemma_bound': bound,
                     'minimum_size': smallest,
                     'smaller_separating_sizes': ' '.join(map(str, below)),
                     'witness': ' '.join(format(s, '0%db' % m) for s in witness),
                     'complement_witness_size': len(paired),
                     'complement_witness': ' '.join(format(s, '0%db' % m) for s in paired),
                     'passed': int(ok)})
    return Report(experiment='separation_lemma',
                  params={'m_max': m_max},
                  seed=0,
                  trials=len(rows),
                  successes=sum(row['passed'] for row in rows),
                  passed=passed,
                  rows=rows)


# Generation

def generates(collection, u, T):
    """The defining predicate: every x in T and y outside T are split by some set."""
    inside = members(T, u)
    outside = [y for y in range(u) if not T >> y & 1]
    return all(any(subset >> x & 1 and not subset >> y & 1 for subset in collection)
               for x in inside for y in outside)


def generated_family(collection, u):
    """
    Every subset T the collection generates. T qualifies iff it contains,
    for each of its points x, the intersection of all sets holding x.
    """
    everything = (1 << u) - 1
    closures = []
    for x in range(u):
        closure = everything
        for subset in collection:
            if subset >> x & 1:
                closure &= subset
        closures.append(closure)
    return [T for T in range(1 << u)
            if all(_is_subcode(closures[x], T) for x in range(u) if T >> x & 1)]


def count_generated(collection, u):
    return len(generated_family(collection, u))


def count_upsets(codes):
    """Subfamilies of ``codes`` closed upwards under bitwise inclusion."""
    codes = sorted(set(codes))
    above = [[j for j, other in enumerate(codes) if _is_subcode(code, other)] for code in codes]
    count = 0
    for chosen in range(1 << len(codes)):
        if all(chosen >> j & 1 for i in range(len(codes)) if chosen >> i & 1 for j in above[i]):
            count += 1
    return count


def generation_bound(n):
    return 2 ** (2 ** n)


def _columns(codes, width):
    return [frozenset(c for c in codes if c >> i & 1) for i in range(width)]


def complement_closure(codes, n):
    """
    Closes a collection, given by its distinct codes, under complement.

    :return: (closed codes, number of distinct sets of the closed family)
    """
    codes = sorted(set(codes))
    mask = (1 << n) - 1
    closed = [(c << n) | (~c & mask) for c in codes]
    return closed, len(set(_columns(closed, 2 * n)))


def check_complement_closed(codes, n):
    """
    Checks the intermediate bound on a complement-closed family: its codes
    are pairwise incomparable, so it generates exactly 2^r sets for r
    distinct codes, and 2^r <= 2^(2^(n'-1)) for its n' distinct sets.
    """
    closed, distinct_sets = complement_closure(codes, n)
    incomparable = all(not _is_subcode(a, b) for a in closed for b in closed if a != b)
    r = len(closed)
    count = count_upsets(closed)
    ok = incomparable and count == 2 ** r and r <= 2 ** (distinct_sets - 1)
    return ok, count, distinct_sets


def _code_sets(n, u):
    """Every realizable set of distinct codes: nonempty, at most u of them."""
    universe = range(1 << n)
    for size in range(1, min(u, 1 << n) + 1):
        for subset in itertools.combinations(universe, size):
            yield subset


def _random_collection(n, u, rng):
    return tuple(int(rng.integers(1 << u)) for _ in range(n))


def verify_generation_bound(u, n_max, samples=20, seed=0):
    """
    For n = 0..n_max checks count <= 2^(2^n) over every collection (or
    every distinct code set, when the collections are too many to list),
    the complement-closed bound for n >= 1, and ``samples`` random
    collections against the literal predicate.
    """
    if u > MAX_UNIVERSE:
        raise BudgetExceeded('universe', u, MAX_UNIVERSE)
    if n_max > MAX_COLLECTION_SIZE:
        raise BudgetExceeded('n_max', n_max, MAX_COLLECTION_SIZE)
    if u < 1 or n_max < 0 or samples < 0:
        raise UsageError("universe must be positive and n_max, samples non-negative",
                         universe=u, n_max=n_max, samples=samples)
    rng = make_rng(seed)
    rows = []
    passed = True
    for n in range(n_max + 1):
        bound = generation_bound(n)
        literal = (1 << u) ** n <= LITERAL_LIMIT
        if literal:
            counts = [count_generated(collection, u)
                      for collection in itertools.product(range(1 << u), repeat=n)]
            mode = 'collections'
        else:
            counts = [count_upsets(codes) for codes in _code_sets(n, u)]
            mode = 'code_sets'
        closure_ok = True
        closure_max = None
        if n >= 1:
            results = [check_complement_closed(codes, n) for codes in _code_sets(n, u)]
            closure_ok = all(ok for ok, _, _ in results)
            closure_max = max(count for _, count, _ in results)

        sampled_ok = True
        for _ in range(samples):
            collection = _random_collection(n, u, rng)
            family = generated_family(collection, u)
            literal_family = [T for T in range(1 << u) if generates(collection, u, T)]
            sampled_ok = sampled_ok and family == literal_family and \
                len(family) == count_upsets(codes_of(collection, u)) and len(family) <= bound

        ok = max(counts) <= bound and closure_ok and sampled_ok
        passed = passed and ok
        logger.info("generation u=%s n=%s (%s): max %s <= %s -> %s", u, n, mode, max(counts),
                    bound, "ok" if ok else "FAILED")
        rows.append({'n': n,
                     'universe': u,
                     'mode': mode,
                     'checked': len(counts),
                     'max_generated': max(counts),
                     'bound': bound,
                     'closed_max_generated': closure_max,
                     'closure_passed': int(closure_ok),
                     'sampled': samples,
                     'sampled_passed': int(sampled_ok),
                     'passed': int(ok)})
    return Report(experiment='generation_bound',
                  params={'universe': u, 'n_max': n_max, 'samples': samples},
                  seed=seed,
                  trials=len(rows),
                  successes=sum(row['passed'] for row in rows),
                  passed=passed,
                  rows=rows)


def verify_lemmas(m_max, u, n_max, samples=20, seed=0):
    """Both verifiers in one report, rows tagged by lemma."""
    separation = verify_separation_lemma(m_max)
    generation = verify_generation_bound(u, n_max, samples, seed)
    rows = [dict(lemma='separation', **row) for row in separation.rows] + \
        [dict(lemma='generation', **row) for row in generation.rows]
    return Report(experiment='lemmas',
                  params=dict(separation.params, **generation.params),
                  seed=seed,
                  trials=separation.trials + generation.trials,
                  successes=separation.successes + generation.successes,
                  passed=bool(separation.passed and generation.passed),
                  summary={'separation_passed': separation.passed,
                           'generation_passed': generation.passed},
                  rows=rows)
