"""Brute-force reference implementations used only by the tests.

None of these share code with the package beyond its plain data types.
They are exponential and meant for small inputs.
"""
from __future__ import annotations

import math
from collections import Counter
from itertools import combinations


# -- alignment -------------------------------------------------------------


def _monotone_matchings(pairs):
    """Every set of pairs strictly increasing in both coordinates."""
    pairs = sorted(pairs)
    out = []

    def grow(start, chosen):
        out.append(tuple(chosen))
        for k in range(start, len(pairs)):
            i, j = pairs[k]
            if chosen and (i <= chosen[-1][0] or j <= chosen[-1][1]):
                continue
            chosen.append((i, j))
            grow(k + 1, chosen)
            chosen.pop()

    grow(0, [])
    return out


def brute_edit_distance(a, b, ins=1, dele=1, sub=2):
    """Minimum cost over all edit scripts.

    An edit script is fixed by the positions it pairs up (matches or
    substitutions, increasing in both sentences); every other word is
    deleted or inserted.  All order-preserving pairings are enumerated.
    """
    pairs = [(i, j) for i in range(len(a)) for j in range(len(b))]
    best = math.inf
    for m in _monotone_matchings(pairs):
        cost = sum(0 if a[i] == b[j] else sub for i, j in m)
        cost += (len(a) - len(m)) * dele + (len(b) - len(m)) * ins
        best = min(best, cost)
    return best


def brute_all_alignments(a, b):
    """Maximal sets of pairwise compatible equal-word links."""
    links = [(i, j) for i in range(len(a)) for j in range(len(b)) if a[i] == b[j]]

    def compatible(x, y):
        return (x[0] < y[0] and x[1] < y[1]) or (x[0] > y[0] and x[1] > y[1])

    maximal = []
    for m in _monotone_matchings(links):
        if not any(all(compatible(x, l) for x in m) for l in links if l not in m):
            maximal.append(m)
    return sorted(maximal)


# -- selection -------------------------------------------------------------


def _overlap(x, y):
    return x[0] < y[0] < x[1] < y[1] or y[0] < x[0] < y[1] < x[1]


def brute_best_subsets(hyps, probs, extended=True, tol=1e-12):
    """All optimal overlap-free subsets of ``hyps`` (as sorted index tuples).

    Scores are float mean -log p; ties within ``tol``.  With ``extended`` the
    largest of the tied subsets win.
    """
    scored = []
    idx = range(len(hyps))
    for r in range(1, len(hyps) + 1):
        for combo in combinations(idx, r):
            if any(_overlap(hyps[i], hyps[j]) for i, j in combinations(combo, 2)):
                continue
            score = math.fsum(-math.log(float(probs[i])) for i in combo) / r
            scored.append((score, combo))
    best = min(s for s, _ in scored)
    tied = [c for s, c in scored if s - best <= tol]
    if extended:
        most = max(len(c) for c in tied)
        tied = [c for c in tied if len(c) == most]
    return sorted(tied)


def universe_counts(fuzzy):
    """``fuzzy``: list of (sentence, [(b, e, n), ...]).  Returns leaf and branch tables."""
    total = 0
    by_yield, by_pair, by_root = Counter(), Counter(), Counter()
    for sent, hyps in fuzzy:
        for b, e, n in hyps:
            y = tuple(sent[b:e])
            total += 1
            by_yield[y] += 1
            by_pair[y, n] += 1
            by_root[n] += 1
    return total, by_yield, by_pair, by_root


# -- elementary trees ------------------------------------------------------
# Trees here are nested tuples (label, child, child, ...) with words as str.


def _internal_positions(node, path=()):
    out = [path]
    for k, child in enumerate(node[1:]):
        if not isinstance(child, str):
            out.extend(_internal_positions(child, path + (k,)))
    return out


def _cut(node, path, frontier):
    if path in frontier:
        return (node[0], None)
    kids = []
    for k, child in enumerate(node[1:]):
        kids.append(child if isinstance(child, str) else _cut(child, path + (k,), frontier))
    return (node[0], tuple(kids))


def _depth(frag):
    if isinstance(frag, str) or frag[1] is None:
        return 0
    return 1 + max(_depth(k) for k in frag[1])


def brute_fragments(tree, max_depth=None):
    """Multiset of fragments: every node, every antichain of its proper descendants as frontier."""
    out = Counter()

    def subtree(node, path):
        return node if not path else subtree(node[1 + path[0]], path[1:])

    for root_path in _internal_positions(tree):
        root = subtree(tree, root_path)
        below = [p for p in _internal_positions(root) if p]
        for r in range(len(below) + 1):
            for frontier in combinations(below, r):
                # an antichain: no member below another
                if any(q[:len(p)] == p for p in frontier for q in frontier if p != q):
                    continue
                frag = _cut(root, (), set(frontier))
                if max_depth is None or _depth(frag) <= max_depth:
                    out[frag] += 1
    return out


# -- parsing ---------------------------------------------------------------


def brute_best_parse(rules, starts, sentence):
    """Best log probability of any derivation of ``sentence`` from a start symbol.

    ``rules`` maps (lhs, rhs) to a probability; rhs items are ("nt", X) or
    words.  Derivations are enumerated exhaustively; a (symbol, span) pair
    may not repeat along a path, which removes only unary cycles (these never
    raise a probability).  Returns (logprob, tree) or None.
    """
    n = len(sentence)
    by_lhs = {}
    for (lhs, rhs), p in rules.items():
        by_lhs.setdefault(lhs, []).append((rhs, p))

    def derive(sym, i, j, seen):
        """All (logprob, node) derivations of sentence[i:j] from ``sym``."""
        key = (sym, i, j)
        if key in seen:
            return []
        seen = seen | {key}
        out = []
        for rhs, p in by_lhs.get(sym, []):
            for lp, kids in seq(rhs, i, j, seen):
                out.append((lp + math.log(p), (sym, i, j, kids)))
        return out

    def seq(rhs, i, j, seen):
        if not rhs:
            return [(0.0, ())] if i == j else []
        head, rest = rhs[0], rhs[1:]
        out = []
        if isinstance(head, str):
            if i < j and sentence[i] == head:
                out.extend((lp, (head,) + kids) for lp, kids in seq(rest, i + 1, j, seen))
            return out
        # a non-terminal covers at least one word
        for k in range(i + 1, j + 1):
            if len(rest) > j - k:
                continue
            for lp1, node in derive(head[1], i, k, seen):
                for lp2, kids in seq(rest, k, j, seen):
                    out.append((lp1 + lp2, (node,) + kids))
        return out

    best = None
    for s in starts:
        for lp, node in derive(s, 0, n, frozenset()):
            if best is None or lp > best[0]:
                best = (lp, node)
    return best


def derivation_spans(node):
    """(b, e, label) of every node of a derivation from :func:`brute_best_parse`."""
    sym, i, j, kids = node
    out = [(i, j, sym)]
    for k in kids:
        if not isinstance(k, str):
            out.extend(derivation_spans(k))
    return out
