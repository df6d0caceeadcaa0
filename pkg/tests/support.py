"""Executor doubles and random model generation shared by the tests."""

import random

from scaler.params import serialize_cpv
from scaler.simulator import SimModel


class Recorder:
    """Counting wrapper that logs every call."""

    def __init__(self, inner):
        self.inner = inner
        self.log = []

    def reset(self):
        self.inner.reset()

    def execute(self, cpv, n):
        self.log.append((serialize_cpv(cpv), n))
        return self.inner.execute(cpv, n)


class Scripted:
    def __init__(self, values):
        self.values = list(values)

    def execute(self, cpv, n):
        return self.values.pop(0)


def random_model(rng: random.Random, ids) -> SimModel:
    comp, over = {}, {}
    for pid in ids:
        if rng.random() < 0.5:
            comp[pid] = {"B": rng.uniform(0.7, 1.3)}
        if rng.random() < 0.6:
            over[pid] = {"B": rng.uniform(0.3, 1.5)}
    return SimModel(
        base_time=rng.uniform(10, 500),
        serial_fraction=rng.uniform(0.0, 0.6),
        overhead_per_node=rng.uniform(0.0, 0.04) * 100,
        compute_multipliers=comp,
        overhead_multipliers=over,
        noise_scale=rng.choice([0.0, 0.0, 0.01, 0.03]),
        seed=rng.randrange(1000),
    )
