"""Compare adapt() against an exhaustive search on random simulator models.

For each model every CPV of the 9-parameter space is scored, and the
adaptation result is placed against the global optimum.  Prints one row
per model and a short tally.

    python3 scripts/oracle_sweep.py --models 50 --seed 0
"""

import argparse
import random
import time
from itertools import product

from scaler.engine import AdaptationConfig, adapt, measure_curve
from scaler.metrics import scalability_score
from scaler.params import CPV, builtin_space
from scaler.simulator import SimExecutor, SimModel


def random_model(rng, ids):
    comp = {p: {"B": rng.uniform(0.7, 1.3)} for p in ids if rng.random() < 0.5}
    over = {p: {"B": rng.uniform(0.3, 1.5)} for p in ids if rng.random() < 0.6}
    return SimModel(rng.uniform(10, 500), rng.uniform(0.0, 0.6), rng.uniform(0.0, 4.0),
                    comp, over, noise_scale=rng.choice([0.0, 0.01, 0.03]), seed=rng.randrange(1000))


def best_cpv(model, space, config):
    ex = SimExecutor(model)
    best = None
    for combo in product(*(range(len(p.options)) for p in space.params)):
        ex.reset()
        s = scalability_score(measure_curve(ex, CPV(space.ids, combo), config.schedule, config.repeats),
                              config.weights).score
        if best is None or s > best[1]:
            best = (combo, s)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--models", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threshold", type=float, default=0.58)
    args = ap.parse_args()

    space = builtin_space("spark9")
    config = AdaptationConfig(threshold=args.threshold)
    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    hits = misses = 0
    print(f"{'#':>3} {'default':>8} {'adapted':>8} {'optimum':>8} {'iters':>5} {'pruned':>6}  verdict")
    for i in range(args.models):
        m = random_model(rng, space.ids)
        r = adapt(SimExecutor(m), space, config)
        _, opt = best_cpv(m, space, config)
        if not r.triggered:
            verdict = "not triggered"
        elif r.converged_above_threshold:
            verdict, hits = "above threshold", hits + 1
        elif opt > args.threshold:
            verdict, misses = "optimum above, walk stuck", misses + 1
        else:
            verdict = "no CPV above threshold"
        pruned = sum(t.pruned for t in r.trials)
        print(f"{i:>3} {r.default_score:8.3f} {r.optimal_score:8.3f} {opt:8.3f} {r.iterations:>5} {pruned:>6}  {verdict}")
    print(f"\nconverged {hits}; optimum above threshold but walk stuck {misses}; "
          f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
