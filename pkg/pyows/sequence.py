# -*- coding: utf-8 -*-
"""
The one-way-sequence concept class.

Concepts are indexed by a k-bit root seed s of a GGM tree of depth k. The
string attached to index i is the co-path of leaf i: the right-sibling seed
at every depth where i turns left. It is enough to rebuild every later leaf
and its co-path, and it never contains the seed of leaf i itself, whose
label bit therefore stays hidden.

Bit strings are plain ints together with their known length; bit t of an
index (1-based, t = depth) is read most-significant first.
"""
import hashlib
import logging
import math

from dataclasses import dataclass

from .errors import UsageError

logger = logging.getLogger(__name__)

PRG_TAG = b"pyows/ggm-shake256/v1"
MIN_DOMAIN_BITS = 9


@dataclass(frozen=True)
class Params(object):
    """Domain bit-length d and the derived index bit-length k."""
    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int):
            raise UsageError("d must be an integer", d=self.d)
        if self.d < MIN_DOMAIN_BITS:
            raise UsageError("d must be at least %d" % MIN_DOMAIN_BITS, d=self.d)

    @classmethod
    def for_k(cls, k):
        """Smallest domain whose index length is k."""
        return cls((k + 1) ** 2)

    @property
    def k(self):
        return math.isqrt(self.d) - 1

    @property
    def sigma_bits(self):
        return self.d - self.k

    @property
    def index_count(self):
        return 1 << self.k

    def check_index(self, i):
        if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < self.index_count:
            raise UsageError("index out of range", i=i, k=self.k)
        return i

    def check_sigma(self, sigma):
        if isinstance(sigma, bool) or not isinstance(sigma, int) or not 0 <= sigma < (1 << self.sigma_bits):
            raise UsageError("sigma must be a %d-bit string" % self.sigma_bits)
        return sigma


@dataclass(frozen=True)
class SeedKey(object):
    """The k-bit master secret of a concept."""
    value: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise UsageError("seed length must be positive", k=self.k)
        if isinstance(self.value, bool) or not isinstance(self.value, int) \
                or not 0 <= self.value < (1 << self.k):
            raise UsageError("seed must be a %d-bit string" % self.k, value=self.value)

    @classmethod
    def random(cls, params, rng):
        """Draws a uniform key from a numpy Generator."""
        value = int.from_bytes(rng.bytes((params.k + 7) // 8), "big") & ((1 << params.k) - 1)
        return cls(value, params.k)


@dataclass(frozen=True)
class Example(object):
    i: int
    sigma: int


@dataclass(frozen=True)
class LabeledExample(object):
    example: Example
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise UsageError("label must be a bit", label=self.label)


@dataclass(frozen=True)
class CoPath(object):
    """(depth, seed) pairs, one per zero bit of the leaf index, by depth."""
    entries: tuple = ()

    def to_sigma(self, params):
        """Slot t holds the seed stored at depth t; everything else is zero."""
        k = params.k
        sigma = 0
        for depth, seed in self.entries:
            sigma |= seed << (params.sigma_bits - depth * k)
        return sigma

    @classmethod
    def from_sigma(cls, params, i, sigma):
        """Reads the slots selected by the zero bits of i; total on any sigma."""
        k = params.k
        mask = (1 << k) - 1
        entries = []
        for depth in range(1, k + 1):
            if not index_bit(i, depth, k):
                entries.append((depth, (sigma >> (params.sigma_bits - depth * k)) & mask))
        return cls(tuple(entries))


def index_bit(i, depth, k):
    return (i >> (k - depth)) & 1


def prg_expand(seed, k):
    """
    Length-doubling generator: SHAKE-256 over a fixed tag, the seed length
    and the seed, truncated to 2k bits and split into halves.

    :return: (left, right), each a k-bit int
    """
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < (1 << k):
        raise UsageError("seed must be a %d-bit string" % k, seed=seed)
    message = PRG_TAG + k.to_bytes(2, "big") + seed.to_bytes((k + 7) // 8, "big")
    size = (2 * k + 7) // 8
    stream = int.from_bytes(hashlib.shake_256(message).digest(size), "big") >> (8 * size - 2 * k)
    return stream >> k, stream & ((1 << k) - 1)


def label_bit(leaf, k):
    """f at a leaf: first bit of the left half of its expansion."""
    return prg_expand(leaf, k)[0] >> (k - 1)


def leaf_seed(s, i):
    k = s.k
    if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < (1 << k):
        raise UsageError("index out of range", i=i, k=k)
    node = s.value
    for depth in range(1, k + 1):
        left, right = prg_expand(node, k)
        node = right if index_bit(i, depth, k) else left
    return node


def copath(params, s, i):
    """The right-sibling seeds along the path to leaf i, plus the leaf seed."""
    k = params.k
    params.check_index(i)
    if s.k != k:
        raise UsageError("seed length does not match the domain", seed_k=s.k, k=k)
    node = s.value
    entries = []
    for depth in range(1, k + 1):
        left, right = prg_expand(node, k)
        if index_bit(i, depth, k):
            node = right
        else:
            entries.append((depth, right))
            node = left
    return CoPath(tuple(entries)), node


def derive_example(params, s, i):
    """
    G(i, s) and f(i, s).

    :return: (sigma, fbit)
    """
    path, leaf = copath(params, s, i)
    return path.to_sigma(params), label_bit(leaf, params.k)


def compute_forward(params, j, i, sigma_i):
    """
    Rebuilds (G(j, s), f(j, s)) from G(i, s) for any j > i.

    The highest bit where i and j differ is 0 in i and 1 in j, so leaf j
    sits under the right sibling stored in slot t0 of sigma_i. Entries above
    t0 are shared with i; entries below are collected on the way down.
    """
    k = params.k
    params.check_index(i)
    params.check_index(j)
    params.check_sigma(sigma_i)
    if j <= i:
        raise UsageError("forward computation needs j > i", i=i, j=j)

    divergence = k - (i ^ j).bit_length() + 1
    given = CoPath.from_sigma(params, i, sigma_i)
    entries = [entry for entry in given.entries if entry[0] < divergence]
    node = dict(given.entries)[divergence]
    for depth in range(divergence + 1, k + 1):
        left, right = prg_expand(node, k)
        if index_bit(j, depth, k):
            node = right
        else:
            entries.append((depth, right))
            node = left
    return CoPath(tuple(entries)).to_sigma(params), label_bit(node, k)


def forward_chain(params, s, low, high):
    """
    Yields (i, sigma_i, f(i, s)) for i = low..high using one derivation at
    low and forward steps after it.
    """
    params.check_index(low)
    params.check_index(high)
    sigma, fbit = derive_example(params, s, low)
    yield low, sigma, fbit
    for j in range(low + 1, high + 1):
        sigma, fbit = compute_forward(params, j, j - 1, sigma)
        yield j, sigma, fbit


def concept_eval(params, s, x):
    """c_s(x): 1 iff x.sigma is G(x.i, s) and f(x.i, s) = 1."""
    sigma, fbit = derive_example(params, s, x.i)
    return int(x.sigma == sigma and fbit == 1)


def on_sequence(params, s, i):
    """The on-sequence example at index i with its concept label."""
    sigma, fbit = derive_example(params, s, i)
    return LabeledExample(Example(i, sigma), fbit)
