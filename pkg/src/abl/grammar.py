"""Grammar extraction from treebanks and reparsing with the extracted SCFG.

Right-hand sides mix non-terminals and words, because learned trees are
flat: words not covered by a daughter constituent hang directly off their
parent.  Non-terminals are wrapped in :class:`NT`; words are plain strings.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple, Optional

from .corpus import FormatError, Hypothesis, Tree, _label, _nest


class NT(NamedTuple):
    label: object

    def __str__(self):
        return str(self.label)


@dataclass
class Node:
    label: object
    b: int
    e: int
    children: list = field(default_factory=list)  # Node or word


def to_nodes(tree: Tree) -> Node:
    """Nest the constituents of ``tree``; zero-width ones are ignored."""
    cons = _nest([c for c in tree.constituents if c.width > 0])
    if not cons or cons[0].span != (0, len(tree.sentence)):
        raise ValueError("tree has no constituent spanning the sentence")
    root = Node(cons[0].n, cons[0].b, cons[0].e)
    stack = [root]
    for c in cons[1:]:
        while not (stack[-1].b <= c.b and c.e <= stack[-1].e):
            stack.pop()
        node = Node(c.n, c.b, c.e)
        stack[-1].children.append(node)
        stack.append(node)

    def add_words(node):
        kids, pos = [], node.b
        for child in node.children:
            kids.extend(tree.sentence[pos:child.b])
            add_words(child)
            kids.append(child)
            pos = child.e
        kids.extend(tree.sentence[pos:node.e])
        node.children = kids

    add_words(root)
    return root


def from_nodes(sentence, root: Node) -> Tree:
    cons = []

    def walk(node):
        cons.append(Hypothesis(node.b, node.e, node.label))
        for child in node.children:
            if isinstance(child, Node):
                walk(child)

    walk(root)
    return Tree(tuple(sentence), tuple(cons))


def _symbol_key(sym):
    return (0, str(sym.label)) if isinstance(sym, NT) else (1, sym)


def rule_key(rule):
    lhs, rhs = rule
    return (str(lhs), tuple(_symbol_key(s) for s in rhs))


# -- SCFG ------------------------------------------------------------------


@dataclass
class Scfg:
    """Rules ``(lhs, rhs)`` with probabilities; ``starts`` are admissible root labels."""

    probs: dict
    starts: tuple = ()
    counts: Optional[Counter] = None

    def logprob(self, rule) -> float:
        return math.log(self.probs[rule])

    def lhs_totals(self) -> dict:
        totals: dict = {}
        for (lhs, _), p in self.probs.items():
            totals[lhs] = totals.get(lhs, 0) + p
        return totals

    def __len__(self):
        return len(self.probs)


def tree_rules(tree: Tree):
    out = []

    def walk(node):
        out.append((node.label, tuple(NT(c.label) if isinstance(c, Node) else c
                                      for c in node.children)))
        for c in node.children:
            if isinstance(c, Node):
                walk(c)

    walk(to_nodes(tree))
    return out


def extract_scfg(treebank) -> Scfg:
    """One rule per constituent; P(rule) = count(rule) / count(lhs)."""
    counts: Counter = Counter()
    starts: Counter = Counter()
    for tree in treebank:
        rules = tree_rules(tree)
        counts.update(rules)
        starts[rules[0][0]] += 1
    lhs_counts: Counter = Counter()
    for (lhs, _), c in counts.items():
        lhs_counts[lhs] += c
    probs = {rule: Fraction(c, lhs_counts[rule[0]]) for rule, c in counts.items()}
    return Scfg(probs, tuple(sorted(starts, key=str)), counts)


def _format_symbol(sym) -> str:
    return str(sym.label) if isinstance(sym, NT) else json.dumps(sym, ensure_ascii=False)


def serialize_scfg(grammar: Scfg) -> str:
    """``PROB<TAB>LHS<TAB>RHS`` lines; words in RHS are JSON-quoted."""
    lines = ["# start: " + " ".join(str(s) for s in grammar.starts) + "\n"]
    for rule in sorted(grammar.probs, key=rule_key):
        lhs, rhs = rule
        rhs_text = " ".join(_format_symbol(s) for s in rhs)
        lines.append(f"{float(grammar.probs[rule])!r}\t{lhs}\t{rhs_text}\n")
    return "".join(lines)


def parse_scfg(text: str) -> Scfg:
    probs, starts = {}, None
    decoder = json.JSONDecoder()
    for lineno, line in enumerate(text.split("\n"), 1):
        if line.startswith("# start:"):
            starts = tuple(_label(s) for s in line[len("# start:"):].split())
            continue
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError("expected PROB<TAB>LHS<TAB>RHS", lineno)
        try:
            prob = float(fields[0])
        except ValueError as err:
            raise FormatError(f"bad probability {fields[0]!r}", lineno) from err
        rhs, rest = [], fields[2].strip()
        while rest:
            if rest.startswith('"'):
                word, end = decoder.raw_decode(rest)
                rhs.append(word)
                rest = rest[end:].lstrip()
            else:
                sym, _, rest = rest.partition(" ")
                rhs.append(NT(_label(sym)))
                rest = rest.lstrip()
        if not rhs:
            raise FormatError("empty right-hand side", lineno)
        probs[_label(fields[1]), tuple(rhs)] = prob
    if starts is None:
        starts = (1,) if any(lhs == 1 for lhs, _ in probs) else tuple(
            sorted({lhs for lhs, _ in probs}, key=str))
    return Scfg(probs, starts)


# -- STSG ------------------------------------------------------------------
# A fragment node is ``(label, kids)`` with ``kids`` a tuple of fragment nodes
# and words, or ``None`` for a frontier non-terminal.


def fragment_depth(frag) -> int:
    if isinstance(frag, str) or frag[1] is None:
        return 0
    return 1 + max(fragment_depth(k) for k in frag[1])


def _expansions(node: Node, max_depth):
    options = []
    for child in node.children:
        if not isinstance(child, Node):
            options.append([child])
            continue
        opts = [(child.label, None)]
        if max_depth is None or max_depth > 1:
            opts.extend(_expansions(child, None if max_depth is None else max_depth - 1))
        options.append(opts)
    return [(node.label, kids) for kids in product(*options)]


def enumerate_elementary_trees(tree: Tree, max_depth=None) -> list:
    """All fragments of ``tree`` of depth at most ``max_depth`` (None: unbounded).

    A fragment keeps either all daughters of a node or none of them (frontier).
    """
    if max_depth is not None and max_depth < 1:
        raise ValueError("max_depth must be positive or None")
    out = []

    def walk(node):
        out.extend(_expansions(node, max_depth))
        for c in node.children:
            if isinstance(c, Node):
                walk(c)

    walk(to_nodes(tree))
    return out


def format_fragment(frag) -> str:
    if isinstance(frag, str):
        return frag
    label, kids = frag
    if kids is None:
        return f"({label}*)"
    return f"({label} " + " ".join(format_fragment(k) for k in kids) + ")"


@dataclass
class Stsg:
    probs: dict
    counts: Counter

    def root_totals(self) -> dict:
        totals: dict = {}
        for frag, p in self.probs.items():
            totals[frag[0]] = totals.get(frag[0], 0) + p
        return totals

    def __len__(self):
        return len(self.probs)


def extract_stsg(treebank, max_depth=None) -> Stsg:
    counts: Counter = Counter()
    for tree in treebank:
        counts.update(enumerate_elementary_trees(tree, max_depth))
    root_counts: Counter = Counter()
    for frag, c in counts.items():
        root_counts[frag[0]] += c
    probs = {f: Fraction(c, root_counts[f[0]]) for f, c in counts.items()}
    return Stsg(probs, counts)


def serialize_stsg(grammar: Stsg) -> str:
    lines = sorted((str(f[0]), format_fragment(f), float(p)) for f, p in grammar.probs.items())
    return "".join(f"{p!r}\t{text}\n" for _, text, p in lines)


# -- CKY -------------------------------------------------------------------


class _Binarized:
    """Grammar in chart form.  Chart symbols are tagged tuples:
    ``("nt", label)``, ``("w", word)`` for a word inside a longer rule, and
    ``("@", suffix)`` for the remainder of a long right-hand side."""

    def __init__(self, grammar: Scfg):
        self.lexical: dict = {}
        self.unary: dict = {}
        self.binary: dict = {}
        self.words: set = set()
        for rule in sorted(grammar.probs, key=rule_key):
            lhs, rhs = rule
            lp = math.log(grammar.probs[rule])
            parent = ("nt", lhs)
            if len(rhs) == 1:
                sym = rhs[0]
                if isinstance(sym, NT):
                    self.unary.setdefault(("nt", sym.label), []).append((parent, lp))
                else:
                    self.lexical.setdefault(sym, []).append((parent, lp))
                    self.words.add(sym)
                continue
            syms = []
            for s in rhs:
                if isinstance(s, NT):
                    syms.append(("nt", s.label))
                else:
                    syms.append(("w", s))
                    self.words.add(s)
            self._add_binary(parent, syms, lp)

    def _add_binary(self, parent, syms, lp):
        while len(syms) > 2:
            rest = ("@", tuple(syms[1:]))
            self._put(syms[0], rest, parent, lp)
            parent, syms, lp = rest, syms[1:], 0.0
        self._put(syms[0], syms[1], parent, lp)

    def _put(self, left, right, parent, lp):
        entries = self.binary.setdefault(left, {}).setdefault(right, [])
        if (parent, lp) not in entries:
            entries.append((parent, lp))


def _improve(cell, sym, score, back) -> bool:
    old = cell.get(sym)
    if old is None or score > old[0]:
        cell[sym] = (score, back)
        return True
    return False


def _unary_closure(cell, unary):
    changed = True
    while changed:
        changed = False
        for sym in sorted(cell, key=repr):
            if sym[0] != "nt":
                continue
            score = cell[sym][0]
            for parent, lp in unary.get(sym, ()):
                if _improve(cell, parent, score + lp, ("unary", sym)):
                    changed = True


def cky_chart(grammar, sentence):
    bin_g = grammar if isinstance(grammar, _Binarized) else _Binarized(grammar)
    n = len(sentence)
    chart = [[{} for _ in range(n + 1)] for _ in range(n + 1)]
    for i, word in enumerate(sentence):
        cell = chart[i][i + 1]
        cell[("w", word)] = (0.0, ("word", word))
        for parent, lp in bin_g.lexical.get(word, ()):
            _improve(cell, parent, lp, ("word", word))
        _unary_closure(cell, bin_g.unary)
    for width in range(2, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            cell = chart[i][j]
            for k in range(i + 1, j):
                left_cell, right_cell = chart[i][k], chart[k][j]
                for left in sorted(left_cell, key=repr):
                    rights = bin_g.binary.get(left)
                    if not rights:
                        continue
                    ls = left_cell[left][0]
                    for right, entries in rights.items():
                        if right not in right_cell:
                            continue
                        rs = right_cell[right][0]
                        for parent, lp in entries:
                            _improve(cell, parent, ls + rs + lp, ("split", k, left, right))
            _unary_closure(cell, bin_g.unary)
    return chart


def _rebuild(chart, i, j, sym):
    """Daughters contributed by ``sym`` over (i, j); helper symbols are spliced out."""
    _, back = chart[i][j][sym]
    if back[0] == "word":
        kids = [back[1]]
    elif back[0] == "unary":
        kids = _rebuild(chart, i, j, back[1])
    else:
        _, k, left, right = back
        kids = _rebuild(chart, i, k, left) + _rebuild(chart, k, j, right)
    if sym[0] == "nt":
        return [Node(sym[1], i, j, kids)]
    return kids


def _best_parse(bin_g: _Binarized, starts, sentence):
    if any(w not in bin_g.words for w in sentence):
        return None, None
    chart = cky_chart(bin_g, sentence)
    top = chart[0][len(sentence)]
    best = None
    for start in sorted(starts, key=str):  # first maximum wins ties
        entry = top.get(("nt", start))
        if entry is not None and (best is None or entry[0] > best[1]):
            best = (("nt", start), entry[0])
    if best is None:
        return None, None
    (root,) = _rebuild(chart, 0, len(sentence), best[0])
    return from_nodes(sentence, root), best[1]


def cky_parse(grammar: Scfg, sentence, return_score=False):
    """Most probable parse of ``sentence`` (log score with ``return_score``), or None."""
    tree, score = _best_parse(_Binarized(grammar), grammar.starts, tuple(sentence))
    return (tree, score) if return_score else tree


def reparse_corpus(treebank, grammar_kind: str = "scfg"):
    """Reparse every yield with the grammar extracted from ``treebank``.

    Sentences without a parse keep their input tree.  Returns the new
    treebank and the number of sentences that fell back.
    """
    if grammar_kind != "scfg":
        raise ValueError(f"reparsing is only supported with an scfg, not {grammar_kind!r}")
    grammar = extract_scfg(treebank)
    bin_g = _Binarized(grammar)
    out, fallbacks = [], 0
    for tree in treebank:
        parsed, _ = _best_parse(bin_g, grammar.starts, tree.sentence)
        if parsed is None:
            fallbacks += 1
            parsed = tree
        out.append(parsed)
    return out, fallbacks
