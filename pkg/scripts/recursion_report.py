"""Count recursive structures in gold and learned treebanks of a recursive toy grammar."""
import argparse

from abl.corpus import serialize_tree
from abl.evaluation import detect_recursion
from abl.pipeline import RunConfig, learn
from abl.synthetic import generate_treebank


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--examples", type=int, default=2)
    args = ap.parse_args()

    gold = generate_treebank(args.size, seed=args.seed, recursive=True)
    corpus = [t.sentence for t in gold]
    print(f"gold: {len(detect_recursion(gold))} recursive pairs")
    for alignment in ("default", "biased", "all"):
        for selection in ("first", "leaf", "branch"):
            config = RunConfig(alignment=alignment, selection=selection)
            learned = learn(corpus, config)
            found = detect_recursion(learned)
            print(f"{config.system_name:16s} {len(found)} recursive pairs")
            for index, (c1, c2) in found[:args.examples]:
                print(f"    {serialize_tree(learned[index])}    <- types {c1.n}")


if __name__ == "__main__":
    main()
