from pyows import api, arena, baselines, learner
from pyows.mechanisms import PrivacyLedger

seed = 7
d = 64

cfg = api.make_config(d, epsilon=1, alpha=0.1, beta=0.1)
params, s = api.new_concept(d, seed)
rng = api.make_rng(seed)

# PAC side: i.i.d. examples from 100 on-sequence indices
indices = arena.random_indices(params, 100, rng)
dist = arena.RealizableDistribution.uniform(params, s, indices)
n = learner.required_sample_size(params, cfg)
S = dist.sample(n, rng)

ledger = PrivacyLedger()
trace = {}
h = learner.learn(S, cfg, rng, ledger, trace)
print(h, trace)
print(ledger.as_rows())
print(learner.hypothesis_to_json(params, h))

#Online side: the same concept, labels revealed from the top index down
stream = arena.reverse_stream(s, params, 100)
for name in baselines.BASELINES:
    record = arena.run_online_game(baselines.make_learner(name, params, s, rng), stream, s, params)
    print(name, record.mistakes, arena.best_constant_rate(stream))

#Forward computation needs no key
x = stream[-1].example
print(learner.Threshold(x.i, x.sigma, stream[-1].label).evaluate(params, stream[0].example))
