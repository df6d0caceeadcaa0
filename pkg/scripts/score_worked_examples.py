"""Score the shipped worked-example curves and print a summary table.

    python3 scripts/score_worked_examples.py [--csv path]
"""

import argparse
from importlib import resources

from scaler.files import load_curves
from scaler.metrics import deviation_percent, scalability_score, unexpected_variations


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--csv", default=str(resources.files("scaler") / "data" / "worked_curves.csv"))
    args = ap.parse_args()

    print(f"{'case':<12} {'score':>7} {'gap':>7} {'trend':>7} {'dev%':>7}  rises")
    for cid, curve in load_curves(args.csv):
        b = scalability_score(curve)
        rises = " ".join(f"{a}->{c}" for a, c in unexpected_variations(curve)) or "-"
        print(f"{cid:<12} {b.score:7.3f} {b.gap:7.3f} {b.trend:7.3f} {deviation_percent(b.score):7.1f}  {rises}")


if __name__ == "__main__":
    main()
