#!/usr/bin/env python
"""
Unit tests for pyows.lemmas, the exhaustive verifiers.
"""
import itertools

import pytest

from pyows import lemmas
from pyows.errors import BudgetExceeded, UsageError


def test_codes_of():
    assert lemmas.codes_of((0b011, 0b110), 3) == [0b01, 0b11, 0b10]
    assert lemmas.members(0b101, 3) == [0, 2]


def test_two_points_need_two_sets():
    assert lemmas.separates_all_pairs(2, (0b01, 0b10))
    assert not lemmas.separates_all_pairs(2, (0b01,))
    assert not lemmas.separation_exists(2, 1)
    assert lemmas.separation_exists(2, 2)


def test_four_points_need_four_sets():
    assert not any(lemmas.separates_all_pairs(4, collection)
                   for collection in itertools.combinations(range(16), 2))
    assert not lemmas.separation_exists(4, 3)
    assert lemmas.separation_exists(4, 4)
    assert lemmas.minimum_separating_size(4) == 4


def test_eight_points():
    witness = lemmas.middle_layer_witness(8)
    assert len(witness) == 5
    assert lemmas.separates_all_pairs(8, witness)
    assert lemmas.minimum_separating_size(8) == 5
    assert lemmas.lemma_lower_bound(8) == 4
    paired = lemmas.bit_complement_witness(8)
    assert len(paired) == 6
    assert lemmas.separates_all_pairs(8, paired)


def test_verify_separation_lemma():
    report = lemmas.verify_separation_lemma(8)
    assert report.passed
    assert [row['m'] for row in report.rows] == list(range(2, 9))
    assert all(row['minimum_size'] >= row['lemma_bound'] for row in report.rows)
    assert all(row['smaller_separating_sizes'] == '' for row in report.rows)
    with pytest.raises(BudgetExceeded):
        lemmas.verify_separation_lemma(9)
    with pytest.raises(UsageError):
        lemmas.verify_separation_lemma(1)


def test_generated_family_matches_predicate():
    u = 4
    for collection in itertools.product(range(16), repeat=2):
        family = lemmas.generated_family(collection, u)
        assert family == [T for T in range(16) if lemmas.generates(collection, u, T)]
        assert len(family) == lemmas.count_upsets(lemmas.codes_of(collection, u))


def test_small_generation_counts():
    assert lemmas.count_generated((), 3) == 2
    assert lemmas.generated_family((), 3) == [0, 0b111]
    # one set splits the universe into two codes forming a chain
    assert max(lemmas.count_generated((subset,), 3) for subset in range(8)) == 3
    assert lemmas.generated_family((0b011,), 3) == [0, 0b011, 0b111]


def test_count_upsets():
    assert lemmas.count_upsets([]) == 1
    assert lemmas.count_upsets([0b01]) == 2
    # chain 00 < 01 < 11
    assert lemmas.count_upsets([0b00, 0b01, 0b11]) == 4
    assert lemmas.count_upsets([0b01, 0b10]) == 4


def test_complement_closure():
    closed, distinct_sets = lemmas.complement_closure([0b0, 0b1], 1)
    assert closed == [0b01, 0b10]
    assert distinct_sets == 2
    ok, count, _ = lemmas.check_complement_closed([0b00, 0b01, 0b11], 2)
    assert ok
    assert count == 2 ** 3


def test_verify_generation_bound():
    report = lemmas.verify_generation_bound(4, 3, samples=10)
    assert report.passed
    assert [row['mode'] for row in report.rows] == ['collections'] * 4
    assert report.rows[0]['max_generated'] == 2
    assert all(row['max_generated'] <= row['bound'] for row in report.rows)

    wide = lemmas.verify_generation_bound(7, 2, samples=5, seed=3)
    assert wide.passed
    assert wide.rows[2]['mode'] == 'code_sets'


def test_generation_guards():
    with pytest.raises(BudgetExceeded):
        lemmas.verify_generation_bound(lemmas.MAX_UNIVERSE + 1, 2)
    with pytest.raises(BudgetExceeded):
        lemmas.verify_generation_bound(4, lemmas.MAX_COLLECTION_SIZE + 1)
    with pytest.raises(UsageError):
        lemmas.verify_generation_bound(0, 2)


def test_verify_lemmas_combines_reports():
    report = lemmas.verify_lemmas(4, 4, 2, samples=3)
    assert report.passed
    assert {row['lemma'] for row in report.rows} == {'separation', 'generation'}
    assert report.trials == 3 + 3
