"""Unlabelled bracket scoring, the random branching baseline, recursion
detection and learning curves."""
from __future__ import annotations

import csv
import io
import random
import statistics
from collections import Counter
from dataclasses import dataclass

from .corpus import Hypothesis, Tree


@dataclass(frozen=True)
class BracketScore:
    matched: int
    gold: int
    learned: int
    beta: float = 1.0

    @property
    def recall(self) -> float:
        return self.matched / self.gold if self.gold else 0.0

    @property
    def precision(self) -> float:
        return self.matched / self.learned if self.learned else 0.0

    @property
    def precision_undefined(self) -> bool:
        return self.learned == 0

    @property
    def fscore(self) -> float:
        return f_score(self.recall, self.precision, self.beta)

    def percentages(self):
        return 100 * self.recall, 100 * self.precision, 100 * self.fscore


def f_score(recall: float, precision: float, beta: float = 1.0) -> float:
    """(b^2 + 1) P R / (b^2 P + R).

    As written this tends to recall as beta grows (and to precision as it
    shrinks); beta = 1 weighs both equally.
    """
    denom = beta * beta * precision + recall
    if denom == 0:
        return 0.0
    return (beta * beta + 1) * precision * recall / denom


def _spans(tree: Tree, exclude_root: bool, exclude_single: bool) -> Counter:
    n = len(tree.sentence)
    spans = Counter()
    for c in tree.constituents:
        if c.width == 0:
            continue
        if exclude_root and c.span == (0, n):
            continue
        if exclude_single and c.width == 1:
            continue
        spans[c.span] += 1
    return spans


def score_treebank(gold, learned, exclude_root=False, exclude_single=False,
                   beta=1.0) -> BracketScore:
    """Micro-averaged unlabelled recall and precision over aligned treebanks."""
    if len(gold) != len(learned):
        raise ValueError(f"gold has {len(gold)} trees, learned has {len(learned)}")
    matched = n_gold = n_learned = 0
    for index, (g, l) in enumerate(zip(gold, learned)):
        if tuple(g.sentence) != tuple(l.sentence):
            raise ValueError(f"yields differ at tree {index}")
        gs = _spans(g, exclude_root, exclude_single)
        ls = _spans(l, exclude_root, exclude_single)
        matched += sum((gs & ls).values())
        n_gold += sum(gs.values())
        n_learned += sum(ls.values())
    return BracketScore(matched, n_gold, n_learned, beta)


def branching_tree(sentence, left: bool) -> Tree:
    """Left- or right-branching tree labelled 1 (outermost) to n (innermost)."""
    n = len(sentence)
    if left:
        cons = [Hypothesis(0, n - k, k + 1) for k in range(n)]
    else:
        cons = [Hypothesis(k, n, k + 1) for k in range(n)]
    return Tree(tuple(sentence), tuple(cons))


def random_baseline(corpus, seed=0) -> list:
    rng = random.Random(seed)
    return [branching_tree(s, rng.random() < 0.5) for s in corpus]


def detect_recursion(treebank) -> list:
    """``(tree index, (c1, c2))`` for same-labelled nested or equal-span pairs."""
    found = []
    for index, tree in enumerate(treebank):
        cons = [c for c in tree.constituents if c.width > 0]
        for i, c1 in enumerate(cons):
            for c2 in cons[i + 1:]:
                if c1.n != c2.n:
                    continue
                if (c1.b <= c2.b and c1.e >= c2.e) or (c1.b >= c2.b and c1.e <= c2.e):
                    found.append((index, (c1, c2)))
    return found


def has_recursion(treebank) -> bool:
    return bool(detect_recursion(treebank))


def mean_sd(values):
    """Mean and sample standard deviation (n - 1); sd is 0 for a single value."""
    values = list(values)
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sd


def format_mean_sd(values, digits=2) -> str:
    mean, sd = mean_sd(values)
    return f"{mean:.{digits}f} ({sd:.{digits}f})"


@dataclass(frozen=True)
class CurvePoint:
    prefix: int
    score: BracketScore


def learning_curve(corpus, gold, step: int, pipeline, beta=1.0,
                   exclude_root=False, exclude_single=False) -> list:
    """Score ``pipeline(prefix)`` on prefixes of size step, 2*step, ...

    ``pipeline`` maps a list of sentences to a treebank.
    """
    if step < 1 or step > len(corpus):
        raise ValueError("step must be between 1 and the corpus size")
    points = []
    for size in range(step, len(corpus) + 1, step):
        learned = pipeline(list(corpus[:size]))
        score = score_treebank(gold[:size], learned, exclude_root, exclude_single, beta)
        points.append(CurvePoint(size, score))
    return points


def scores_csv(rows, key="run") -> str:
    """CSV with header ``<key>,recall,precision,fscore``; values in percent.

    Each row is a name with a :class:`BracketScore` or a percentage triple.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([key, "recall", "precision", "fscore"])
    for name, score in rows:
        r, p, f = score.percentages() if isinstance(score, BracketScore) else score
        writer.writerow([name, f"{r:.2f}", f"{p:.2f}", f"{f:.2f}"])
    return out.getvalue()


def curve_csv(points) -> str:
    return scores_csv(((pt.prefix, pt.score) for pt in points), key="prefix")
