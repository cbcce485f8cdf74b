#!/usr/bin/env python
"""
Unit tests for pyows.arena: distributions, PAC trials, the online game and
the prediction-advantage experiment. Domains are kept small; the full-size
runs live behind the command line.
"""
import math

from functools import partial

import pytest

from pyows import arena
from pyows.api import make_config, make_rng
from pyows.baselines import ConstantLearner, OmniscientLearner, make_learner
from pyows.errors import BudgetExceeded, ProtocolError, UsageError
from pyows.learner import DEFAULT_SAMPLE_CONSTANT, AllZero, required_sample_size
from pyows.sequence import Example, LabeledExample, Params, SeedKey, concept_eval, derive_example

from tests.utils import get_spy_learner, key_with_positive, small_params, tree_sequence


def test_distribution_validation():
    params = small_params(3)
    s = SeedKey(3, 3)
    with pytest.raises(UsageError):
        arena.RealizableDistribution(params, s, ((0, 0.5), (1, 0.4)))
    with pytest.raises(UsageError):
        arena.RealizableDistribution(params, s, ((0, 1.5), (1, -0.5)))
    with pytest.raises(UsageError):
        arena.RealizableDistribution(params, s, ((9, 1.0),))
    with pytest.raises(UsageError):
        arena.RealizableDistribution(params, s, ())
    dist = arena.RealizableDistribution.uniform(params, s, [1, 4], negative_weight=0.5)
    assert dist.weights == ((1, 0.25), (4, 0.25))


def test_distribution_sample_is_labelled_by_the_concept():
    params = small_params(4)
    s = key_with_positive(params, minimum=2, seed=1)
    dist = arena.RealizableDistribution.uniform(params, s, range(8), negative_weight=0.2)
    rng = make_rng(2)
    sample = dist.sample(500, rng)
    assert len(sample) == 500
    for labeled in sample:
        assert labeled.label == concept_eval(params, s, labeled.example)
    sequence = tree_sequence(params, s)
    assert dist.support == tuple(sequence[:8])
    assert dist.sample(40, make_rng(3)) == dist.sample(40, make_rng(3))


def test_random_indices():
    params = small_params(4)
    chosen = arena.random_indices(params, 10, make_rng(4))
    assert len(set(chosen)) == 10
    assert max(chosen) < params.index_count - 1
    with pytest.raises(UsageError):
        arena.random_indices(params, params.index_count, make_rng(4))


def test_negative_only_trial_learns_all_zero():
    params = small_params(4)
    dist = arena.RealizableDistribution.uniform(params, SeedKey(5, 4), [], negative_weight=1.0)
    cfg = make_config(params.d, 1, 0.1, 0.1)
    trial = arena.run_pac_trial(dist, cfg, 2000, 500, make_rng(5))
    assert trial.hypothesis == AllZero().kind
    assert trial.population_loss_estimate == 0
    assert trial.population_loss is None
    assert trial.success
    assert trial.as_row(3)['trial'] == 3


def test_truth_table_has_no_loss():
    params = small_params(4)
    s = key_with_positive(params, minimum=3, seed=6)
    dist = arena.RealizableDistribution.uniform(params, s, range(params.index_count))
    truth = partial(concept_eval, params, s)
    assert arena.population_loss_estimate(dist, truth, 1000, make_rng(6)) == 0
    assert arena.on_sequence_loss(dist, truth) == 0
    ones = sum(labeled.label for labeled in dist.support)
    assert arena.on_sequence_loss(dist, lambda x: 0) == pytest.approx(ones / params.index_count)


def test_pac_trial_on_small_domain():
    params = small_params(4)
    s = key_with_positive(params, minimum=4, seed=7)
    dist = arena.RealizableDistribution.uniform(params, s, range(params.index_count))
    cfg = make_config(params.d, 1, 0.1, 0.1)
    trial = arena.run_pac_trial(dist, cfg, 20000, 2000, make_rng(8))
    assert trial.success
    assert trial.population_loss <= 0.1
    assert trial.epsilon_spent == pytest.approx(1.0)
    assert trial.delta_spent == 0
    with pytest.raises(UsageError):
        arena.run_pac_trial(dist, cfg, 0, 10, make_rng(8))


def test_reverse_stream():
    params = small_params(5)
    s = SeedKey(17, 5)
    sequence = tree_sequence(params, s)
    T = 20
    stream = arena.reverse_stream(s, params, T)
    top = params.index_count - 1
    assert [labeled.example.i for labeled in stream] == list(range(top, top - T, -1))
    for labeled in stream:
        assert labeled == sequence[labeled.example.i]
        assert (labeled.example.sigma, labeled.label) == derive_example(params, s,
                                                                        labeled.example.i)
    assert arena.reverse_stream(s, params, T) == stream
    assert len(arena.reverse_stream(s, params, params.index_count)) == params.index_count
    for bad in (0, params.index_count + 1):
        with pytest.raises(UsageError):
            arena.reverse_stream(s, params, bad)


def test_forward_stream():
    params = small_params(4)
    s = SeedKey(6, 4)
    stream = arena.forward_stream(s, params, 10)
    assert stream == tree_sequence(params, s)[:10]
    assert 'reverse' in arena.ADVERSARIES


def test_game_session_protocol():
    params = small_params(3)
    stream = tree_sequence(params, SeedKey(2, 3))[:2]
    session = arena.GameSession(stream)
    with pytest.raises(ProtocolError):
        session.predict(0)
    session.next_example()
    with pytest.raises(ProtocolError):
        session.next_example()
    with pytest.raises(ProtocolError):
        session.predict(2)
    assert session.predict(1) == stream[0].label
    with pytest.raises(ProtocolError):
        session.predict(1)
    session.next_example()
    session.predict(0)
    assert session.done
    with pytest.raises(ProtocolError) as info:
        session.next_example()
    assert info.value.round_index == 2


def test_game_reveals_label_after_prediction():
    params = small_params(4)
    s = key_with_positive(params, minimum=2, seed=9)
    stream = arena.reverse_stream(s, params, 12)
    learner, log = get_spy_learner(prediction=1)
    record = arena.run_online_game(learner, stream, s, params)
    expected = []
    for labeled in stream:
        expected.append(('predict', labeled.example.i))
        expected.append(('update', labeled.example.i, labeled.label))
    assert log == expected
    for call in learner.predict.call_args_list:
        assert len(call[0]) == 1
        assert isinstance(call[0][0], Example)
    assert record.mistakes == sum(1 - labeled.label for labeled in stream)


def test_transcript():
    params = small_params(3)
    s = SeedKey(4, 3)
    stream = arena.reverse_stream(s, params, 5)
    record = arena.run_online_game(ConstantLearner(0), stream, s, params, keep_transcript=True)
    assert record.per_round == tuple((labeled.example.i, 0, labeled.label) for labeled in stream)


def test_omniscient_and_constant_extremes():
    params = small_params(5)
    s = key_with_positive(params, minimum=3, seed=10)
    stream = arena.reverse_stream(s, params, params.index_count)
    assert arena.run_online_game(OmniscientLearner(params, s), stream, s, params).mistakes == 0
    positives = [labeled for labeled in stream if labeled.label == 1]
    record = arena.run_online_game(ConstantLearner(0), positives, s, params)
    assert record.mistakes == record.T == len(positives)
    assert record.mistake_rate == 1.0
    with pytest.raises(UsageError):
        arena.run_online_game(ConstantLearner(0), [], s, params)


def test_game_record_range():
    assert arena.GameRecord(4, 1).mistake_rate == 0.25
    with pytest.raises(UsageError):
        arena.GameRecord(4, 5)


def test_best_constant_rate():
    x = Example(0, 0)
    stream = [LabeledExample(x, 1)] * 3 + [LabeledExample(x, 0)]
    assert arena.best_constant_rate(stream) == 0.25


def test_prediction_advantage_extremes():
    params = Params.for_k(6)
    top = params.index_count - 1
    omniscient = partial(make_learner, 'omniscient')
    assert arena.prediction_advantage(omniscient, 10, 30, params, make_rng(11)) == 1.0
    value = arena.prediction_advantage(partial(make_learner, 'forward'), top - 1, 30, params,
                                       make_rng(12))
    assert 0 <= value <= 1
    for bad in (top, -1):
        with pytest.raises(UsageError):
            arena.prediction_advantage(omniscient, bad, 10, params, make_rng(0))
    with pytest.raises(UsageError):
        arena.prediction_advantage(omniscient, 1, 0, params, make_rng(0))


def test_forward_learner_has_no_advantage():
    params = Params(1024)
    t = arena.default_advantage_target(params)
    assert params.index_count - 1 - t == arena.ADVANTAGE_SUFFIX
    trials = 2000
    tolerance = 4 * 0.5 / math.sqrt(trials)
    for baseline in ('forward', 'constant0'):
        report = arena.advantage_experiment(params, baseline, t, trials, seed=13)
        assert report.trials == trials
        assert report.params['t'] == t
        assert abs(report.summary['advantage'] - 0.5) <= tolerance


def test_advantage_suffix_guard():
    params = Params(1024)
    forward = partial(make_learner, 'forward')
    with pytest.raises(BudgetExceeded) as info:
        arena.prediction_advantage(forward, params.index_count // 2, 10, params, make_rng(0))
    assert info.value.value == params.index_count // 2 - 1
    with pytest.raises(BudgetExceeded):
        arena.advantage_experiment(params, 'forward', 0, 10, seed=0)
    small = Params.for_k(4)
    assert arena.default_advantage_target(small) == 0
    assert 0 <= arena.prediction_advantage(forward, 0, 5, small, make_rng(1)) <= 1


def test_run_trials_keeps_order():
    assert arena.run_trials(abs, [-3, 2, -1]) == [3, 2, 1]
    assert arena.run_trials(abs, [-3, 2, -1], jobs=2) == [3, 2, 1]


def test_pac_experiment_is_reproducible():
    cfg = make_config(Params.for_k(4).d, 1, 0.1, 0.1)
    run = partial(arena.pac_experiment, cfg, 20000, 4, 21, mc_samples=500, indices=10)
    report = run()
    assert report.experiment == 'pac'
    assert report.successes == 4
    assert report.passed
    assert len(report.rows) == 4
    assert run() == report
    assert run(jobs=2) == report


def test_duel_experiment():
    params = Params(256)
    report = arena.duel_experiment(params, ('constant0', 'majority', 'random', 'forward',
                                            'mw', 'omniscient'), 500, 8, seed=14)
    assert report.passed
    assert report.summary['omniscient']['mistakes'] == 0
    assert len(report.rows) == 6 * 8
    for name in ('constant0', 'majority', 'random', 'forward', 'mw'):
        assert report.summary[name]['rounds'] == 8 * 500
    with pytest.raises(UsageError):
        arena.duel_experiment(params, ('oracle',), 10, 1, seed=0)
    with pytest.raises(UsageError):
        arena.duel_experiment(params, ('random',), 10, 1, seed=0, adversary='sideways')


def test_forward_adversary_lets_forward_predictor_win():
    params = Params.for_k(6)
    report = arena.duel_experiment(params, ('forward', 'constant0'), params.index_count, 4,
                                   seed=15, adversary='forward')
    assert report.summary['forward']['mistakes'] <= 4


def test_default_sample_constant_is_the_smallest_that_passes():
    # the next smaller constant falls short at d = 1024
    report = arena.calibrate((64, 256, 1024), (160, DEFAULT_SAMPLE_CONSTANT), 20, seed=22,
                             mc_samples=2000)
    assert report.passed
    assert report.summary['constant'] == DEFAULT_SAMPLE_CONSTANT
    rows = {(row['constant'], row['d']): row for row in report.rows}
    assert not rows[(160, 1024)]['passed']
    for d in (64, 256, 1024):
        row = rows[(DEFAULT_SAMPLE_CONSTANT, d)]
        cfg = make_config(d, 1, 0.1, 0.1)
        assert row['n'] == required_sample_size(cfg.params, cfg, DEFAULT_SAMPLE_CONSTANT)
        assert row['passed']
