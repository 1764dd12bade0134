"""Seeded toy treebanks generated from a small hand-written CFG.

Gold trees are Penn-style: every word sits under a part-of-speech bracket
(literal words under ``C``) and phrasal categories bracket their yields.  With ``recursive=True`` the grammar has a
self-embedding clause rule (``VP -> V that S``) and PP attachment to NPs.
"""
from __future__ import annotations

import random

from .corpus import Hypothesis, Tree

LEXICON = {
    "Det": ["the", "a"],
    "N": ["dog", "cat", "man", "woman", "park", "telescope", "apple"],
    "Adj": ["big", "old", "red"],
    "Name": ["Oscar", "Bert", "Ernie", "Elmo"],
    "TV": ["sees", "likes", "eats", "finds"],
    "IV": ["walks", "sleeps", "laughs"],
    "SV": ["thinks", "says"],
    "P": ["in", "with", "near"],
}

FLAT_RULES = {
    "S": [(1.0, ["NP", "VP"])],
    "NP": [(0.45, ["Det", "N"]), (0.2, ["Det", "Adj", "N"]), (0.35, ["Name"])],
    "VP": [(0.5, ["TV", "NP"]), (0.3, ["IV"]), (0.2, ["TV", "NP", "PP"])],
    "PP": [(1.0, ["P", "NP"])],
}

RECURSIVE_RULES = {
    "S": [(1.0, ["NP", "VP"])],
    "NP": [(0.4, ["Det", "N"]), (0.15, ["Det", "Adj", "N"]), (0.3, ["Name"]),
           (0.15, ["NP", "PP"])],
    "VP": [(0.4, ["TV", "NP"]), (0.2, ["IV"]), (0.15, ["TV", "NP", "PP"]),
           (0.25, ["SV", "that", "S"])],
    "PP": [(1.0, ["P", "NP"])],
}


def _expand(rules, label, rng, depth, max_depth, words, cons):
    if label in LEXICON or label not in rules:
        cons.append([len(words), len(words) + 1, label if label in LEXICON else "C"])
        words.append(rng.choice(LEXICON[label]) if label in LEXICON else label)
        return
    options = rules[label]
    if depth >= max_depth:
        # bottom out with the first (non-recursive) option
        options = options[:1]
    weights = [w for w, _ in options]
    rhs = rng.choices([r for _, r in options], weights=weights)[0]
    entry = [len(words), None, label]
    cons.append(entry)
    for sym in rhs:
        _expand(rules, sym, rng, depth + 1, max_depth, words, cons)
    entry[1] = len(words)


def generate_tree(rng: random.Random, recursive=False, max_depth=8) -> Tree:
    rules = RECURSIVE_RULES if recursive else FLAT_RULES
    words: list = []
    cons: list = []
    _expand(rules, "S", rng, 0, max_depth, words, cons)
    return Tree(tuple(words), tuple(Hypothesis(b, e, n) for b, e, n in cons))


def generate_treebank(size: int, seed: int = 0, recursive=False, max_depth=8) -> list:
    rng = random.Random(seed)
    return [generate_tree(rng, recursive, max_depth) for _ in range(size)]
