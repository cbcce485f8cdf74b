# -*- coding: utf-8 -*-
"""
Experiment reports: one JSON document per run and a CSV mirror with one
row per trial. Output depends only on the resolved configuration, so two
runs with the same seed produce the same bytes.
"""
import csv
import io
import json

from dataclasses import dataclass, field
from typing import Optional

from scipy.stats import binomtest

CONFIDENCE = 0.95


def binomial_interval(successes, trials, confidence=CONFIDENCE):
    """Clopper-Pearson interval for successes / trials."""
    if trials == 0:
        return 0.0, 1.0
    interval = binomtest(successes, trials).proportion_ci(confidence_level=confidence,
                                                           method='exact')
    return float(interval.low), float(interval.high)


@dataclass
class Report(object):
    experiment: str
    params: dict
    seed: int
    trials: int
    successes: Optional[int] = None
    mistake_rate: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    passed: Optional[bool] = None
    summary: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)

    def to_dict(self):
        return {'experiment': self.experiment,
                'params': self.params,
                'seed': self.seed,
                'trials': self.trials,
                'successes': self.successes,
                'mistake_rate': self.mistake_rate,
                'ci_low': self.ci_low,
                'ci_high': self.ci_high,
                'passed': self.passed,
                'summary': self.summary,
                'rows': self.rows}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self):
        columns = []
        for row in self.rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row)
        return out.getvalue()

    def render(self, fmt):
        if fmt == 'csv':
            return self.to_csv()
        return self.to_json()
