"""Random inputs and oracle comparisons shared by several test modules."""
from fractions import Fraction

from abl.corpus import FuzzyTree, Hypothesis, HypothesisSpace, overlaps
from abl.selection import SelectionConfig, select_probabilistic
from oracles import brute_best_subsets, universe_counts


def random_space(rng, n_trees=4):
    vocab = "abc"
    space = HypothesisSpace()
    for _ in range(n_trees):
        sent = tuple(rng.choice(vocab) for _ in range(rng.randint(2, 7)))
        tree = FuzzyTree.seeded(sent)
        spans = {(b, e) for b in range(len(sent)) for e in range(b + 1, len(sent) + 1)}
        spans.discard((0, len(sent)))
        for b, e in rng.sample(sorted(spans), min(len(spans), rng.randint(0, 9))):
            n = rng.randint(2, 5)
            space.merge_table.observe(n)
            tree.add(Hypothesis(b, e, n))
        space.trees.append(tree)
    if rng.random() < 0.5:
        space.merge_table.merge(rng.randint(2, 5), rng.randint(2, 5))
    return space


def check_against_oracle(space, model, seed=0):
    """Selected trees agree with exhaustive search; returns the number of checked trees."""
    fuzzy = [(t.sentence, [tuple(space.canonical(h)) for h in t.hypotheses]) for t in space.trees]
    total, by_yield, by_pair, by_root = universe_counts(fuzzy)
    out = select_probabilistic(space, SelectionConfig(model, True, seed))
    checked = 0
    for (sent, hyps), tree in zip(fuzzy, out):
        involved = [h for h in hyps if any(overlaps(h, o) for o in hyps)]
        free = [h for h in hyps if h not in involved and h[1] > h[0]]
        kept = set(tree.constituents)
        assert set(free) <= kept
        if not involved:
            assert kept == set(free)
            continue
        assert len(involved) <= 12
        if model == "leaf":
            probs = [Fraction(by_yield[tuple(sent[b:e])], total) for b, e, _ in involved]
        else:
            probs = [Fraction(by_pair[tuple(sent[b:e]), n], by_root[n]) for b, e, n in involved]
        best = brute_best_subsets(involved, probs)
        chosen = tuple(i for i, h in enumerate(involved) if h in kept)
        assert chosen in best, (sent, involved, probs, chosen, best)
        checked += 1
    return checked
