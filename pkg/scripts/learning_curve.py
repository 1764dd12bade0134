"""Learning curve of one ABL system on growing prefixes of a synthetic treebank.

    python scripts/learning_curve.py --size 300 --step 50 --alignment default --selection leaf
"""
import argparse

from abl.evaluation import curve_csv, learning_curve
from abl.pipeline import RunConfig, learn
from abl.synthetic import generate_treebank


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=300)
    ap.add_argument("--step", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--alignment", default="default")
    ap.add_argument("--selection", default="leaf")
    ap.add_argument("--recursive", action="store_true")
    args = ap.parse_args()

    gold = generate_treebank(args.size, seed=args.seed, recursive=args.recursive)
    config = RunConfig(alignment=args.alignment, selection=args.selection)
    points = learning_curve([t.sentence for t in gold], gold, args.step, lambda c: learn(c, config))
    print(config.header() + curve_csv(points), end="")


if __name__ == "__main__":
    main()
