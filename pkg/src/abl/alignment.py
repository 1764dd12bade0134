"""Alignment learning: turn a corpus into a hypothesis space.

Sentence pairs are aligned (edit distance or exhaustive enumeration of
alignments), the unequal parts between linked word clusters become pairs of
substitutable subsentences, and every pair is stored as two hypotheses that
share a non-terminal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .corpus import START_SYMBOL, FuzzyTree, Hypothesis, HypothesisSpace, Sentence

INSTANCES = ("default", "biased", "all")


@dataclass(frozen=True)
class CostFunction:
    """Edit costs.  ``biased`` only changes the cost of matching equal words.

    The biased match cost of words at (0-based) positions i and j is
    ``|i/|A| - j/|B|| * (|A| + |B|) / 2``; it is computed with fractions so
    that the traceback can compare costs exactly.
    """

    kind: str = "default"
    deletion: int = 1
    insertion: int = 1
    substitution: int = 2

    def __post_init__(self):
        if self.kind not in ("default", "biased"):
            raise ValueError(f"unknown cost function {self.kind!r}")

    def replace(self, a: Sentence, b: Sentence, i: int, j: int):
        if a[i] != b[j]:
            return self.substitution
        if self.kind == "default":
            return 0
        return abs(Fraction(i, len(a)) - Fraction(j, len(b))) * Fraction(len(a) + len(b), 2)


DEFAULT_COST = CostFunction()
BIASED_COST = CostFunction("biased")


def edit_matrix(a: Sentence, b: Sentence, cost: CostFunction = DEFAULT_COST):
    """Fill the (|a|+1) x (|b|+1) edit cost table; ``d[-1][-1]`` is the distance."""
    rows, cols = len(a), len(b)
    d = [[0] * (cols + 1) for _ in range(rows + 1)]
    for i in range(1, rows + 1):
        d[i][0] = d[i - 1][0] + cost.deletion
    for j in range(1, cols + 1):
        d[0][j] = d[0][j - 1] + cost.insertion
    for i in range(1, rows + 1):
        row, prev = d[i], d[i - 1]
        for j in range(1, cols + 1):
            row[j] = min(prev[j - 1] + cost.replace(a, b, i - 1, j - 1),
                         prev[j] + cost.deletion,
                         row[j - 1] + cost.insertion)
    return d


def edit_distance(a: Sentence, b: Sentence, cost: CostFunction = DEFAULT_COST):
    return edit_matrix(a, b, cost)[-1][-1]


def traceback_links(a: Sentence, b: Sentence, d, cost: CostFunction = DEFAULT_COST):
    """Links (0-based index pairs of equal words) of one minimum-cost transcript.

    Ties are broken deletion first, then insertion, then the diagonal step.
    Substituted words never become links.
    """
    links = []
    i, j = len(a), len(b)
    while i and j:
        if d[i][j] == d[i - 1][j] + cost.deletion:
            i -= 1
        elif d[i][j] == d[i][j - 1] + cost.insertion:
            j -= 1
        else:
            if a[i - 1] == b[j - 1]:
                links.append((i - 1, j - 1))
            i -= 1
            j -= 1
    links.reverse()
    return links


def transcript_cost(a: Sentence, b: Sentence, links, cost: CostFunction = DEFAULT_COST):
    """Cost of the cheapest transcript whose matches are exactly ``links``."""
    total = sum(cost.replace(a, b, i, j) for i, j in links)
    prev_i = prev_j = 0
    for i, j in sorted(links) + [(len(a), len(b))]:
        p, q = i - prev_i, j - prev_j
        # no matches inside a gap: substituting costs what a deletion plus an insertion does at most
        total += min(p, q) * min(cost.substitution, cost.deletion + cost.insertion)
        total += (p - min(p, q)) * cost.deletion + (q - min(p, q)) * cost.insertion
        prev_i, prev_j = i + 1, j + 1
    return total


def _conflicts(x, y) -> bool:
    """Links that cross or share an index cannot be in one alignment."""
    return (x[0] <= y[0] and x[1] >= y[1]) or (x[0] >= y[0] and x[1] <= y[1])


def all_alignments(a: Sentence, b: Sentence) -> list:
    """Every maximal set of pairwise compatible links, as sorted tuples.

    Links are added one at a time; when a link conflicts with an alignment,
    both the alignment without the link and the alignment with the link (and
    without the links it conflicts with) are kept.  Alignments that are
    subsets of others are pruned after every step, which never loses a
    maximal alignment.
    """
    matches = [(i, j) for i, x in enumerate(a) for j, y in enumerate(b) if x == y]
    current = {frozenset()}
    for link in matches:
        grown = set()
        for align in current:
            clash = {e for e in align if _conflicts(e, link)}
            if not clash:
                grown.add(align | {link})
            else:
                grown.add(align)
                grown.add((align - clash) | {link})
        current = _drop_subsets(grown)
    return sorted(tuple(sorted(al)) for al in current)


def _drop_subsets(alignments: set) -> set:
    ordered = sorted(alignments, key=len, reverse=True)
    kept: list[frozenset] = []
    for al in ordered:
        if not any(al < k for k in kept):
            kept.append(al)
    return set(kept)


def clusters_from_links(links: Sequence[tuple]):
    """Group links into maximal runs where both indices advance by one.

    Returns ``((bA, eA), (bB, eB))`` span pairs of equal word sequences.
    """
    clusters = []
    for i, j in sorted(links):
        if clusters:
            (ba, ea), (bb, eb) = clusters[-1]
            if i == ea and j == eb:
                clusters[-1] = ((ba, ea + 1), (bb, eb + 1))
                continue
        clusters.append(((i, i + 1), (j, j + 1)))
    return clusters


def complement_spans(clusters, len_a: int, len_b: int):
    """Paired gaps around the clusters; pairs empty on both sides are dropped."""
    gaps = []
    prev_a = prev_b = 0
    for (ba, ea), (bb, eb) in list(clusters) + [((len_a, len_a), (len_b, len_b))]:
        if ba > prev_a or bb > prev_b:
            gaps.append(((prev_a, ba), (prev_b, bb)))
        prev_a, prev_b = ea, eb
    return gaps


def substitutable_pairs(a: Sentence, b: Sentence, links) -> list:
    """Gap pairs that share no word between their two sides."""
    pairs = []
    for (ba, ea), (bb, eb) in complement_spans(clusters_from_links(links), len(a), len(b)):
        if set(a[ba:ea]).isdisjoint(b[bb:eb]):
            pairs.append(((ba, ea), (bb, eb)))
    return pairs


def find_substitutable(a: Sentence, b: Sentence, instance: str = "default") -> list:
    if instance == "all":
        seen, pairs = set(), []
        for links in all_alignments(a, b):
            for pair in substitutable_pairs(a, b, links):
                if pair not in seen:
                    seen.add(pair)
                    pairs.append(pair)
        return pairs
    cost = BIASED_COST if instance == "biased" else DEFAULT_COST
    d = edit_matrix(a, b, cost)
    return substitutable_pairs(a, b, traceback_links(a, b, d, cost))


def add_hypothesis_pair(space: HypothesisSpace, f: FuzzyTree, span_f, g: FuzzyTree, span_g):
    """Insert a substitutable pair, reusing or merging existing types.

    Returns the case that applied (1, 2 or 3).
    """
    table = space.merge_table
    old_f = f.equivalent(*span_f)
    old_g = g.equivalent(*span_g)
    if old_f is None and old_g is None:
        n = table.fresh()
        f.add(Hypothesis(*span_f, n))
        g.add(Hypothesis(*span_g, n))
        return 1
    if old_f is None or old_g is None:
        n = table.canonical((old_f or old_g).n)
        if old_f is None:
            f.add(Hypothesis(*span_f, n))
        else:
            g.add(Hypothesis(*span_g, n))
        return 2
    table.merge(old_f.n, old_g.n)
    return 3


def alignment_learning(corpus, instance: str = "default", fold_case: bool = False) -> HypothesisSpace:
    """Align every sentence against all earlier ones, in corpus order.

    ``fold_case`` compares lowercased words; the stored sentences keep their
    original spelling.
    """
    if instance not in INSTANCES:
        raise ValueError(f"unknown alignment instance {instance!r}")
    space = HypothesisSpace()
    keys: list[tuple] = []
    for sentence in corpus:
        tree = FuzzyTree.seeded(sentence, START_SYMBOL)
        key = tuple(w.lower() for w in sentence) if fold_case else tuple(sentence)
        for other, other_key in zip(space.trees, keys):
            for span_f, span_g in find_substitutable(key, other_key, instance):
                add_hypothesis_pair(space, tree, span_f, other, span_g)
        space.trees.append(tree)
        keys.append(key)
    return space
