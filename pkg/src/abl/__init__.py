"""Alignment-Based Learning: unsupervised constituent structure from plain text."""
from .alignment import alignment_learning, all_alignments, edit_distance, find_substitutable
from .corpus import (FormatError, FuzzyTree, Hypothesis, HypothesisSpace, Tree, overlaps,
                     parse_plain_corpus, parse_treebank, serialize_treebank)
from .evaluation import random_baseline, score_treebank
from .grammar import cky_parse, enumerate_elementary_trees, extract_scfg, extract_stsg
from .pipeline import RunConfig, learn
from .selection import SelectionConfig, select

__all__ = [
    "FormatError", "FuzzyTree", "Hypothesis", "HypothesisSpace", "RunConfig", "SelectionConfig",
    "Tree", "alignment_learning", "all_alignments", "cky_parse", "edit_distance",
    "enumerate_elementary_trees", "extract_scfg", "extract_stsg", "find_substitutable", "learn",
    "overlaps", "parse_plain_corpus", "parse_treebank", "random_baseline", "score_treebank",
    "select", "serialize_treebank",
]
__version__ = "0.1.0"
