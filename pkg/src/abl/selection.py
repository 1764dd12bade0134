"""Selection learning: remove overlapping hypotheses from a hypothesis space.

``first`` keeps hypotheses in the order they were learned.  The probabilistic
models score hypotheses by how often their yield (``leaf``) or their yield
together with their type (``branch``) occurs in the hypothesis universe, and
combine the scores of a set of hypotheses with the geometric mean.
"""
from __future__ import annotations

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .corpus import HypothesisSpace, Tree, overlaps

log = logging.getLogger(__name__)

MODELS = ("first", "leaf", "branch")


@dataclass(frozen=True)
class SelectionConfig:
    model: str = "leaf"
    extended: bool = True
    seed: int = 0
    component_cap: int = 20

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown selection model {self.model!r}")

    @property
    def name(self):
        if self.model == "first":
            return "first"
        return self.model + ("+" if self.extended else "")


class HypothesisUniverse:
    """Counts over every hypothesis of every fuzzy tree (roots and empty ones too)."""

    def __init__(self, space: HypothesisSpace):
        self.total = 0
        self.by_yield: Counter = Counter()
        self.by_yield_root: Counter = Counter()
        self.by_root: Counter = Counter()
        for tree in space.trees:
            for h in space.canonical_hypotheses(tree):
                y = h.yield_in(tree.sentence)
                self.total += 1
                self.by_yield[y] += 1
                self.by_yield_root[y, h.n] += 1
                self.by_root[h.n] += 1

    def __len__(self):
        return self.total


def hypothesis_probability(h, sentence, universe: HypothesisUniverse, model: str) -> Fraction:
    """Relative frequency of ``h`` (with a canonical label) in the universe."""
    y = h.yield_in(sentence)
    if model == "leaf":
        num, den = universe.by_yield[y], universe.total
    elif model == "branch":
        num, den = universe.by_yield_root[y, h.n], universe.by_root[h.n]
    else:
        raise ValueError(f"no probabilities for model {model!r}")
    assert num > 0 and den > 0, f"{h} is not part of the hypothesis universe"
    return Fraction(num, den)


def combined_score(probabilities) -> float:
    """Mean logprob (-log of the geometric mean); lower is better."""
    probabilities = list(probabilities)
    assert probabilities, "cannot score an empty combination"
    assert all(p > 0 for p in probabilities)
    return sum(-math.log(p) for p in probabilities) / len(probabilities)


def better_combination(probs_a, probs_b, extended: bool = True) -> int:
    """Compare two combinations exactly: -1 if a is better, 1 if b is, 0 on a tie.

    Geometric means are compared as ``prod(a)**len(b)`` against
    ``prod(b)**len(a)`` on fractions.  With ``extended`` an equal mean is
    decided in favour of the larger combination.
    """
    pa = math.prod(Fraction(p) for p in probs_a) ** len(probs_b)
    pb = math.prod(Fraction(p) for p in probs_b) ** len(probs_a)
    if pa != pb:
        return -1 if pa > pb else 1
    if extended and len(probs_a) != len(probs_b):
        return -1 if len(probs_a) > len(probs_b) else 1
    return 0


def _finish(sentence, hyps) -> Tree:
    return Tree(sentence, tuple(h for h in hyps if h.width > 0))


def select_first(space: HypothesisSpace) -> list:
    """Keep every hypothesis that overlaps none kept before it."""
    treebank = []
    for tree in space.trees:
        kept = []
        for h in space.canonical_hypotheses(tree):
            if not any(overlaps(h, k) for k in kept):
                kept.append(h)
        treebank.append(_finish(tree.sentence, kept))
    return treebank


def _components(hyps):
    """Connected components of the overlap graph, as lists of indices."""
    seen, comps = set(), []
    for start in range(len(hyps)):
        if start in seen:
            continue
        comp, todo = [], [start]
        seen.add(start)
        while todo:
            i = todo.pop()
            comp.append(i)
            for j in range(len(hyps)):
                if j not in seen and overlaps(hyps[i], hyps[j]):
                    seen.add(j)
                    todo.append(j)
        comps.append(sorted(comp))
    return comps


def _independent_sets(hyps, idx):
    """All overlap-free subsets of ``idx`` (including the empty one)."""
    out = []

    def grow(pos, chosen):
        if pos == len(idx):
            out.append(tuple(chosen))
            return
        grow(pos + 1, chosen)
        h = hyps[idx[pos]]
        if not any(overlaps(h, hyps[c]) for c in chosen):
            chosen.append(idx[pos])
            grow(pos + 1, chosen)
            chosen.pop()

    grow(0, [])
    return out


def _greedy_set(hyps, idx):
    chosen = []
    for i in idx:
        if not any(overlaps(hyps[i], hyps[c]) for c in chosen):
            chosen.append(i)
    return tuple(chosen)


def _choose_best(hyps, probs, rng, extended, cap):
    """Indices of the best overlap-free combination of ``hyps``.

    A mean is never lowered by adding a value above it, so the best geometric
    mean is reached by combinations drawn only from the hypotheses with the
    highest probability.  The extended mean then wants as many of those as
    possible; maximum-size choices are independent across the connected
    components of the overlap graph and are made per component.
    """
    top = max(probs)
    cands = [i for i, p in enumerate(probs) if p == top]
    chosen = []
    comps = _components([hyps[i] for i in cands])
    options = []
    for comp in comps:
        idx = [cands[i] for i in comp]
        if len(idx) > cap:
            log.warning("overlap component of %d hypotheses exceeds cap %d; greedy choice",
                        len(idx), cap)
            options.append([_greedy_set(hyps, idx)])
            continue
        sets = _independent_sets(hyps, idx)
        if extended:
            best = max(len(s) for s in sets)
            options.append([s for s in sets if len(s) == best])
        else:
            options.append(sets)
    while True:
        chosen = [i for opts in options for i in rng.choice(opts)]
        if chosen:
            return sorted(chosen)


def tree_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}/{index}")


def select_probabilistic(space: HypothesisSpace, config: SelectionConfig, universe=None) -> list:
    """Keep non-overlapping hypotheses and the best combination of the others."""
    if universe is None:
        universe = HypothesisUniverse(space)
    treebank = []
    for index, tree in enumerate(space.trees):
        hyps = space.canonical_hypotheses(tree)
        involved = [i for i, h in enumerate(hyps)
                    if any(overlaps(h, o) for o in hyps)]
        keep = set(range(len(hyps))) - set(involved)
        if involved:
            sub = [hyps[i] for i in involved]
            probs = [hypothesis_probability(h, tree.sentence, universe, config.model) for h in sub]
            rng = tree_rng(config.seed, index)
            keep.update(involved[i] for i in
                        _choose_best(sub, probs, rng, config.extended, config.component_cap))
        treebank.append(_finish(tree.sentence, [hyps[i] for i in sorted(keep)]))
    return treebank


def select(space: HypothesisSpace, config: SelectionConfig) -> list:
    if config.model == "first":
        return select_first(space)
    return select_probabilistic(space, config)

