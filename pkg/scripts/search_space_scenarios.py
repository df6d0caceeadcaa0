"""Run the adaptation loop over every shipped space and fixture model.

Shows how the search cost grows with the number of parameters and options:
trials, pruned trials and executor calls per (space, model) pair.

    python3 scripts/search_space_scenarios.py [--repeats 3]
"""

import argparse

from scaler.engine import AdaptationConfig, adapt
from scaler.params import builtin_space, space_size
from scaler.simulator import SimExecutor, builtin_models

SPACES = ("spark9", "binary9", "binary5", "multi9", "multi5")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--models", nargs="*", default=None, help="fixture names (default: family_*)")
    args = ap.parse_args()

    models = builtin_models()
    names = args.models or sorted(k for k in models if k.startswith("family_"))
    config = AdaptationConfig(repeats=args.repeats)
    print(f"{'space':<8} {'size':>6} {'model':<10} {'default':>8} {'adapted':>8} "
          f"{'trials':>6} {'pruned':>6} {'calls':>6}")
    for sname in SPACES:
        space = builtin_space(sname)
        for mname in names:
            r = adapt(SimExecutor(models[mname]), space, config)
            print(f"{sname:<8} {space_size(space):>6} {mname:<10} {r.default_score:8.3f} "
                  f"{r.optimal_score:8.3f} {len(r.trials):>6} {sum(t.pruned for t in r.trials):>6} "
                  f"{r.total_calls:>6}")


if __name__ == "__main__":
    main()
