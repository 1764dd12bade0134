"""Score all nine ABL systems and the random baseline on a synthetic treebank.

    python scripts/compare_systems.py --size 200 --runs 5 --out results/systems.csv
"""
import argparse
import logging
import time

from abl.evaluation import format_mean_sd, mean_sd, random_baseline, score_treebank
from abl.pipeline import RunConfig, learn, learn_shuffled
from abl.synthetic import generate_treebank

log = logging.getLogger("compare_systems")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1, help="corpus seed")
    ap.add_argument("--runs", type=int, default=3)
    ap.add_argument("--recursive", action="store_true")
    ap.add_argument("--out", default=None, help="optional CSV path")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    gold = generate_treebank(args.size, seed=args.seed, recursive=args.recursive)
    corpus = [t.sentence for t in gold]
    rows = []
    base = [score_treebank(gold, random_baseline(corpus, s)).percentages() for s in range(args.runs)]
    rows.append(("baseline", base))
    for alignment in ("default", "biased", "all"):
        for selection in ("first", "leaf", "branch"):
            config = RunConfig(alignment=alignment, selection=selection)
            start = time.perf_counter()
            scores = []
            for run in range(args.runs):
                c = config.for_run(run)
                learned = learn(corpus, c) if run == 0 else learn_shuffled(corpus, c)
                scores.append(score_treebank(gold, learned).percentages())
            log.info("%-16s %.1f s", config.system_name, time.perf_counter() - start)
            rows.append((config.system_name, scores))

    print(f"{'system':16s} {'recall':>16s} {'precision':>16s} {'fscore':>16s}")
    for name, scores in rows:
        cols = [format_mean_sd([s[k] for s in scores]) for k in range(3)]
        print(f"{name:16s} " + " ".join(f"{c:>16s}" for c in cols))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(f"# size={args.size} seed={args.seed} runs={args.runs} recursive={args.recursive}\n")
            fh.write("system,recall,recall_sd,precision,precision_sd,fscore,fscore_sd\n")
            for name, scores in rows:
                stats = [mean_sd([s[k] for s in scores]) for k in range(3)]
                fh.write(name + "," + ",".join(f"{m:.2f},{sd:.2f}" for m, sd in stats) + "\n")


if __name__ == "__main__":
    main()
