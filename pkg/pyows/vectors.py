# -*- coding: utf-8 -*-
"""
Frozen test vectors for the length-doubling generator and the sequence.

The files under ``pyows/data`` were produced once and are never rewritten;
``generate_prg_vectors`` and ``generate_sequence_vectors`` recompute the same
lines so a changed primitive shows up as a diff.
"""
import os

from . import encode
from .sequence import Params, SeedKey, derive_example, prg_expand

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')
PRG_VECTORS = os.path.join(DATA_DIR, 'prg_vectors.txt')
SEQUENCE_VECTORS = os.path.join(DATA_DIR, 'ggm_vectors.txt')

PRG_LENGTHS = (2, 3, 4, 5, 8, 15, 31)
SEQUENCE_LENGTHS = (2, 3, 4, 5)


def _vector_seeds(k):
    return (0, (1 << k) - 1, int(("10" * k)[:k], 2))


def _vector_indices(k):
    top = 1 << k
    return sorted({0, 1, top // 2, top - 2, top - 1})


def generate_prg_vectors():
    lines = []
    for k in PRG_LENGTHS:
        for seed in (0, (1 << k) - 1):
            left, right = prg_expand(seed, k)
            lines.append(encode.format_prg_line(k, seed, left, right))
    return lines


def generate_sequence_vectors():
    lines = []
    for k in SEQUENCE_LENGTHS:
        params = Params.for_k(k)
        for value in _vector_seeds(k):
            s = SeedKey(value, k)
            for i in _vector_indices(k):
                sigma, fbit = derive_example(params, s, i)
                lines.append(encode.format_vector_line(k, value, i, sigma, fbit,
                                                       params.sigma_bits))
    return lines


def read_lines(path):
    with open(path) as fp:
        return [line.strip() for line in fp
                if line.strip() and not line.startswith('#')]


def load_prg_vectors(path=PRG_VECTORS):
    return [encode.parse_prg_line(line) for line in read_lines(path)]


def load_sequence_vectors(path=SEQUENCE_VECTORS):
    return [encode.parse_vector_line(line, lambda k: Params.for_k(k).sigma_bits)
            for line in read_lines(path)]
