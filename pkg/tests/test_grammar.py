import random
from collections import Counter
from fractions import Fraction

import pytest

from abl.corpus import FormatError, parse_tree, parse_treebank
from abl.grammar import (NT, cky_parse, enumerate_elementary_trees, extract_scfg, extract_stsg,
                         format_fragment, parse_scfg, reparse_corpus, serialize_scfg, to_nodes, tree_rules)
from abl.synthetic import generate_treebank
from oracles import brute_best_parse, brute_fragments, derivation_spans

SCFG_TREES = ["(S (NP Bert) (VP (V sees) (NP Ernie)))", "(S (NP Ernie) (VP (V walks)))"]

SCFG_RULES = {
    ("S", (NT("NP"), NT("VP"))): Fraction(1),
    ("VP", (NT("V"), NT("NP"))): Fraction(1, 2),
    ("VP", (NT("V"),)): Fraction(1, 2),
    ("NP", ("Bert",)): Fraction(1, 3),
    ("NP", ("Ernie",)): Fraction(2, 3),
    ("V", ("sees",)): Fraction(1, 2),
    ("V", ("walks",)): Fraction(1, 2),
}

BERT_FRAGMENTS = """\
(S (NP Bert) (VP (V sees) (NP Ernie)))
(S (NP Bert) (VP (V*) (NP Ernie)))
(S (NP Bert) (VP (V sees) (NP*)))
(S (NP Bert) (VP (V*) (NP*)))
(S (NP Bert) (VP*))
(S (NP*) (VP (V sees) (NP Ernie)))
(S (NP*) (VP (V*) (NP Ernie)))
(S (NP*) (VP (V sees) (NP*)))
(S (NP*) (VP (V*) (NP*)))
(S (NP*) (VP*))
(VP (V sees) (NP Ernie))
(VP (V*) (NP Ernie))
(VP (V sees) (NP*))
(VP (V*) (NP*))
(NP Bert)
(V sees)
(NP Ernie)""".splitlines()


def as_tuple(tree):
    """Nested (label, child, ...) form used by the oracles."""
    def walk(node):
        return (node.label,) + tuple(walk(c) if not isinstance(c, str) else c
                                     for c in node.children)
    return walk(to_nodes(tree))


def test_two_tree_scfg():
    g = extract_scfg(parse_treebank("\n".join(SCFG_TREES)))
    assert g.probs == SCFG_RULES
    assert g.starts == ("S",)


def test_single_flat_tree():
    g = extract_scfg([parse_tree("(1 a b)")])
    assert g.probs == {(1, ("a", "b")): 1}


def test_duplicated_treebank_same_probs():
    tb = parse_treebank("\n".join(SCFG_TREES))
    assert extract_scfg(tb + tb).probs == extract_scfg(tb).probs


def test_mixed_rhs():
    g = extract_scfg([parse_tree("(1 (2 Bert) sees (3 Ernie))")])
    assert (1, (NT(2), "sees", NT(3))) in g.probs


def test_scfg_roundtrip():
    g = extract_scfg(parse_treebank("\n".join(SCFG_TREES + ["(1 (2 \"quoted\") x)"])))
    again = parse_scfg(serialize_scfg(g))
    assert again.starts == g.starts
    assert again.probs == {r: float(p) for r, p in g.probs.items()}


def test_scfg_format_error():
    with pytest.raises(FormatError):
        parse_scfg("0.5\tS\n")


def test_bert_sees_ernie_fragments():
    tree = parse_tree(SCFG_TREES[0])
    frags = enumerate_elementary_trees(tree)
    assert len(frags) == 17
    assert sorted(format_fragment(f) for f in frags) == sorted(BERT_FRAGMENTS)
    assert Counter(frags) == brute_fragments(as_tuple(tree))


def test_depth_one_fragments_are_rules():
    tree = parse_tree(SCFG_TREES[0])
    frags = enumerate_elementary_trees(tree, max_depth=1)
    g = extract_scfg([tree])
    as_rules = {(f[0], tuple(NT(k[0]) if isinstance(k, tuple) else k for k in f[1])) for f in frags}
    assert as_rules == set(g.probs)
    stsg = extract_stsg([tree], max_depth=1)
    assert sorted(map(float, stsg.probs.values())) == sorted(map(float, g.probs.values()))


def test_single_constituent_fragment():
    assert enumerate_elementary_trees(parse_tree("(1 a)")) == [(1, ("a",))]


def test_stsg_normalised():
    stsg = extract_stsg([parse_tree(SCFG_TREES[0])])
    totals = Counter()
    for frag, p in stsg.probs.items():
        totals[frag[0]] += p
    assert all(v == 1 for v in totals.values())
    assert extract_stsg([]).probs == {}


def test_bad_depth():
    with pytest.raises(ValueError):
        enumerate_elementary_trees(parse_tree("(1 a)"), max_depth=0)


def test_random_fragments_match_oracle():
    rng = random.Random(4)
    seen = 0
    for tree in generate_treebank(300, seed=2):
        internal = len(tree.constituents)
        if internal > 8:
            continue
        seen += 1
        depth = rng.choice([None, 1, 2, 3])
        assert Counter(enumerate_elementary_trees(tree, depth)) == brute_fragments(as_tuple(tree), depth)
    assert seen >= 50


def test_cky_example():
    g = extract_scfg(parse_treebank("\n".join(SCFG_TREES)))
    tree = cky_parse(g, ("Ernie", "walks"))
    assert tree == parse_tree(SCFG_TREES[1])
    assert cky_parse(g, ("zzz",)) is None


def _oracle_rules(g):
    return {(lhs, tuple(("nt", s.label) if isinstance(s, NT) else s for s in rhs)): float(p)
            for (lhs, rhs), p in g.probs.items()}


def test_cky_matches_exhaustive_derivations():
    for seed in range(3):
        tb = generate_treebank(12, seed=seed)
        g = extract_scfg(tb)
        rules = _oracle_rules(g)
        for tree in tb:
            if len(tree.sentence) > 6:
                continue
            parsed, score = cky_parse(g, tree.sentence, return_score=True)
            best = brute_best_parse(rules, g.starts, tree.sentence)
            assert score == pytest.approx(best[0], abs=1e-9)
            # the returned tree's own derivation has the optimal score
            own = sum(g.logprob(r) for r in tree_rules(parsed))
            assert own == pytest.approx(best[0], abs=1e-9)


def test_self_reparse_fixed_point():
    tb = parse_treebank("\n".join(SCFG_TREES))
    out, fallbacks = reparse_corpus(tb, "scfg")
    assert out == tb and fallbacks == 0
    g = extract_scfg(tb)
    for tree in tb:
        best = brute_best_parse(_oracle_rules(g), g.starts, tree.sentence)
        assert sorted(map(tuple, tree.constituents)) == sorted(derivation_spans(best[1]))


def test_reparse_unique_tree_unchanged():
    tb = parse_treebank("\n".join(SCFG_TREES))
    # the only derivation of "zzz zzz" is the tree it came from
    odd = parse_tree("(T (U zzz) (U zzz))")
    out, _ = reparse_corpus(tb + [odd], "scfg")
    assert out[-1] == odd


def test_reparse_rejects_stsg():
    with pytest.raises(ValueError):
        reparse_corpus([], "stsg")


def test_synthetic_corpora_parse_under_own_grammar():
    tb = generate_treebank(60, seed=5, recursive=True)
    _, fallbacks = reparse_corpus(tb, "scfg")
    assert fallbacks == 0


def test_reparse_passes_unparsed_trees_through(monkeypatch):
    import abl.grammar
    monkeypatch.setattr(abl.grammar, "_best_parse", lambda *args: (None, None))
    tb = parse_treebank("\n".join(SCFG_TREES))
    out, fallbacks = reparse_corpus(tb, "scfg")
    assert out == tb and fallbacks == 2
