"""Core data types and on-disk formats.

Sentences are tuples of tokens.  Hypotheses and constituents are half-open
spans ``(b, e, n)`` over a sentence.  Three line-oriented text formats are
supported: plain corpora, hypothesis spaces and labelled-bracket treebanks.
Lines starting with ``#`` in hypothesis-space and treebank files are
metadata comments and are skipped by the readers.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

log = logging.getLogger(__name__)

Label = Union[int, str]
Sentence = tuple  # tuple[str, ...]
Corpus = list  # list[Sentence]

START_SYMBOL = 1

_RESERVED = re.compile(r"[\s()]")


class FormatError(ValueError):
    """Malformed input file.  ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def make_sentence(tokens: Iterable[str]) -> Sentence:
    sent = tuple(tokens)
    if not sent:
        raise ValueError("a sentence needs at least one token")
    for tok in sent:
        if not tok or _RESERVED.search(tok):
            raise ValueError(f"invalid token {tok!r}")
    return sent


class Hypothesis(NamedTuple):
    b: int
    e: int
    n: Label

    @property
    def span(self):
        return (self.b, self.e)

    @property
    def width(self):
        return self.e - self.b

    def yield_in(self, sentence: Sentence) -> tuple:
        return tuple(sentence[self.b:self.e])


class MergeTable:
    """Union-find over non-terminal ids; the canonical id is the smallest."""

    def __init__(self, next_fresh: int = START_SYMBOL + 1):
        self.parent: dict[int, int] = {}
        self.next_fresh = next_fresh

    def fresh(self) -> int:
        n = self.next_fresh
        self.next_fresh += 1
        return n

    def observe(self, n: int):
        """Make sure ``fresh`` never returns ``n`` (used when loading files)."""
        if n >= self.next_fresh:
            self.next_fresh = n + 1

    def canonical(self, n: int) -> int:
        root = n
        while root in self.parent:
            root = self.parent[root]
        while n != root:  # path compression
            nxt = self.parent[n]
            self.parent[n] = root
            n = nxt
        return root

    def merge(self, x: int, y: int) -> int:
        x, y = self.canonical(x), self.canonical(y)
        if x == y:
            return x
        keep, drop = min(x, y), max(x, y)
        self.parent[drop] = keep
        return keep


@dataclass
class FuzzyTree:
    """A sentence with possibly overlapping hypotheses, in insertion order."""

    sentence: Sentence
    hypotheses: list = field(default_factory=list)
    _by_span: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @classmethod
    def seeded(cls, sentence: Sentence, start=START_SYMBOL) -> "FuzzyTree":
        tree = cls(tuple(sentence))
        tree.add(Hypothesis(0, len(sentence), start))
        return tree

    def __post_init__(self):
        hyps, self.hypotheses, self._by_span = self.hypotheses, [], {}
        for h in hyps:
            self.add(Hypothesis(*h))

    def equivalent(self, b: int, e: int):
        """The stored hypothesis spanning ``(b, e)``, or None."""
        return self._by_span.get((b, e))

    def add(self, h: Hypothesis):
        if not 0 <= h.b <= h.e <= len(self.sentence):
            raise ValueError(f"{h} out of range for a {len(self.sentence)}-token sentence")
        if h.span in self._by_span:
            raise ValueError(f"an equivalent of {h} is already stored")
        self._by_span[h.span] = h
        self.hypotheses.append(h)


@dataclass
class HypothesisSpace:
    trees: list = field(default_factory=list)
    merge_table: MergeTable = field(default_factory=MergeTable)

    def canonical(self, h: Hypothesis) -> Hypothesis:
        if isinstance(h.n, int):
            return h._replace(n=self.merge_table.canonical(h.n))
        return h

    def canonical_hypotheses(self, tree: FuzzyTree) -> list:
        return [self.canonical(h) for h in tree.hypotheses]

    def __len__(self):
        return len(self.trees)


def overlaps(h1, h2) -> bool:
    """Strict interleaving of two spans; nesting and disjointness do not count."""
    b1, e1 = h1[0], h1[1]
    b2, e2 = h2[0], h2[1]
    return b1 < b2 < e1 < e2 or b2 < b1 < e2 < e1


@dataclass(frozen=True)
class Tree:
    """A sentence with pairwise non-overlapping constituents.

    Constituents keep their order; for equal spans (unary chains) the earlier
    constituent dominates the later one.  Zero-width constituents are not
    allowed here.
    """

    sentence: Sentence
    constituents: tuple

    def __post_init__(self):
        object.__setattr__(self, "sentence", tuple(self.sentence))
        cons = tuple(Hypothesis(*c) for c in self.constituents)
        object.__setattr__(self, "constituents", cons)
        n = len(self.sentence)
        for c in cons:
            if not 0 <= c.b < c.e <= n:
                raise ValueError(f"constituent {c} invalid for a {n}-token sentence")
        for i, c in enumerate(cons):
            for d in cons[i + 1:]:
                if overlaps(c, d):
                    raise ValueError(f"constituents {c} and {d} overlap")

    def spans(self):
        return [c.span for c in self.constituents]


Treebank = list  # list[Tree]


def yield_of(tree) -> Sentence:
    return tuple(tree.sentence)


# -- plain corpus ----------------------------------------------------------


def parse_plain_corpus(text) -> Corpus:
    """One sentence per line; blank lines are skipped."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as err:
            raise FormatError(f"invalid UTF-8: {err}") from err
    corpus, skipped = [], 0
    for lineno, line in enumerate(text.split("\n"), 1):
        tokens = line.split()
        if not tokens:
            if line.strip("\r"):
                skipped += 1
            continue
        try:
            corpus.append(make_sentence(tokens))
        except ValueError as err:
            raise FormatError(str(err), lineno) from err
    if skipped:
        log.warning("skipped %d whitespace-only lines", skipped)
    return corpus


def serialize_plain_corpus(corpus: Iterable[Sentence]) -> str:
    return "".join(" ".join(s) + "\n" for s in corpus)


# -- labelled brackets -----------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _label(text: str) -> Label:
    return int(text) if text.isdecimal() else text


def parse_tree(line: str, lineno=None) -> Tree:
    """Parse one labelled bracketing such as ``(S (NP Bert) (VP sees))``."""
    tokens = _TOKEN.findall(line)
    if not tokens or tokens[0] != "(":
        raise FormatError("a tree must start with '('", lineno)
    words: list[str] = []
    cons: list[list] = []
    stack: list[list] = []
    pos = 0
    while pos < len(tokens):
        tok = tokens[pos]
        if tok == "(":
            if pos + 1 >= len(tokens) or tokens[pos + 1] in "()":
                raise FormatError("bracket without a label", lineno)
            if not stack and cons:
                raise FormatError("more than one tree on the line", lineno)
            entry = [len(words), None, _label(tokens[pos + 1]), 0]
            cons.append(entry)
            stack.append(entry)
            pos += 2
            continue
        if tok == ")":
            if not stack:
                raise FormatError("unbalanced ')'", lineno)
            entry = stack.pop()
            if entry[3] == 0:
                raise FormatError(f"empty bracket ({entry[2]})", lineno)
            entry[1] = len(words)
            if stack:
                stack[-1][3] += 1
        else:
            if not stack:
                raise FormatError(f"token {tok!r} outside of brackets", lineno)
            words.append(tok)
            stack[-1][3] += 1
        pos += 1
    if stack:
        raise FormatError("unbalanced '('", lineno)
    try:
        return Tree(tuple(words), tuple(Hypothesis(b, e, n) for b, e, n, _ in cons))
    except ValueError as err:
        raise FormatError(str(err), lineno) from err


def _nest(constituents: Sequence[Hypothesis]):
    """Order constituents so that parents precede children (stable for ties)."""
    order = sorted(range(len(constituents)),
                   key=lambda i: (constituents[i].b, -constituents[i].e, i))
    return [constituents[i] for i in order]


def serialize_tree(tree: Tree) -> str:
    n = len(tree.sentence)
    cons = _nest([c for c in tree.constituents if c.width > 0])
    if not cons or cons[0].span != (0, n):
        raise ValueError("a tree needs a constituent spanning the whole sentence")
    parts: list[str] = []
    open_ends: list[int] = []
    ci = 0
    for i in range(n + 1):
        while open_ends and open_ends[-1] == i:
            open_ends.pop()
            parts.append(")")
        while ci < len(cons) and cons[ci].b == i:
            parts.append(f"({cons[ci].n}")
            open_ends.append(cons[ci].e)
            ci += 1
        if i < n:
            parts.append(tree.sentence[i])
    out = []
    for p in parts:
        if out and p != ")":
            out.append(" ")
        out.append(p)
    return "".join(out)


def parse_treebank(text) -> Treebank:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as err:
            raise FormatError(f"invalid UTF-8: {err}") from err
    trees = []
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip() or line.startswith("#"):
            continue
        trees.append(parse_tree(line, lineno))
    return trees


def serialize_treebank(treebank: Iterable[Tree]) -> str:
    return "".join(serialize_tree(t) + "\n" for t in treebank)


# -- hypothesis space ------------------------------------------------------


def serialize_space(space: HypothesisSpace) -> str:
    """``tokens<TAB>b:e:n b:e:n ...`` with canonical labels, insertion order."""
    lines = []
    for tree in space.trees:
        triples = " ".join(f"{h.b}:{h.e}:{h.n}" for h in space.canonical_hypotheses(tree))
        lines.append(" ".join(tree.sentence) + "\t" + triples + "\n")
    return "".join(lines)


def parse_space(text) -> HypothesisSpace:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as err:
            raise FormatError(f"invalid UTF-8: {err}") from err
    space = HypothesisSpace()
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip() or line.startswith("#"):
            continue
        if line.count("\t") != 1:
            raise FormatError("expected exactly one TAB", lineno)
        words, triples = line.split("\t")
        try:
            tree = FuzzyTree(make_sentence(words.split()))
            for triple in triples.split():
                b, e, n = triple.split(":")
                h = Hypothesis(int(b), int(e), _label(n))
                if isinstance(h.n, int):
                    space.merge_table.observe(h.n)
                tree.add(h)
        except ValueError as err:
            raise FormatError(str(err), lineno) from err
        space.trees.append(tree)
    return space
