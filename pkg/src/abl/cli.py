"""Command-line entry point: ``abl <subcommand> ...``.

Every file written starts with a ``# abl ...`` comment line holding the
configuration that produced it.  Outputs are written to a temporary file and
moved into place, so a failing command leaves no partial artifact behind.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

from .alignment import INSTANCES, alignment_learning
from .corpus import (START_SYMBOL, FormatError, Hypothesis, Tree, parse_plain_corpus,
                     parse_space, parse_treebank, serialize_space, serialize_treebank)
from .evaluation import (BracketScore, curve_csv, learning_curve, mean_sd, random_baseline,
                         score_treebank, scores_csv)
from .grammar import (cky_parse, extract_scfg, extract_stsg, parse_scfg, serialize_scfg,
                      serialize_stsg)
from .pipeline import RunConfig, learn, learn_shuffled
from .selection import MODELS, select

log = logging.getLogger("abl")

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_ASSERT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path) -> str:
    try:
        return Path(path).read_bytes().decode("utf-8")
    except FileNotFoundError as err:
        raise UsageError(f"no such file: {path}") from err
    except UnicodeDecodeError as err:
        raise FormatError(f"{path}: invalid UTF-8 ({err})") from err


def _write(path, text: str):
    """Atomically write ``text``; a failure leaves no file at ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _config(args) -> RunConfig:
    return RunConfig(
        alignment=getattr(args, "alignment", "default"),
        selection=getattr(args, "selection", "leaf"),
        extended=not getattr(args, "no_extended", False),
        seed=getattr(args, "seed", 0),
        grammar=getattr(args, "grammar", None),
        max_depth=getattr(args, "max_depth", 0),
        reparse=getattr(args, "reparse", False),
        fold_case=getattr(args, "fold_case", False),
        beta=getattr(args, "beta", 1.0),
        exclude_root=getattr(args, "exclude_root", False),
        exclude_single=getattr(args, "exclude_single", False),
        runs=getattr(args, "runs", 1),
    )


def _score(config, gold, learned) -> BracketScore:
    return score_treebank(gold, learned, config.exclude_root, config.exclude_single, config.beta)


def _runs_csv(config, scores) -> str:
    rows = [(i, s) for i, s in enumerate(scores)]
    if len(scores) > 1:
        stats = [mean_sd(100 * getattr(s, m) for s in scores) for m in ("recall", "precision", "fscore")]
        rows.append(("mean", tuple(m for m, _ in stats)))
        rows.append(("sd", tuple(sd for _, sd in stats)))
    return config.header() + scores_csv(rows)


# -- subcommands -----------------------------------------------------------


def cmd_align(args):
    config = _config(args)
    corpus = parse_plain_corpus(_read(args.corpus))
    space = alignment_learning(corpus, config.alignment, fold_case=config.fold_case)
    _write(args.output, config.header() + serialize_space(space))


def cmd_select(args):
    config = _config(args)
    space = parse_space(_read(args.space))
    treebank = select(space, config.selection_config)
    _write(args.output, config.header() + serialize_treebank(treebank))


def cmd_extract(args):
    config = _config(args)
    treebank = parse_treebank(_read(args.treebank))
    if config.grammar == "stsg":
        text = serialize_stsg(extract_stsg(treebank, config.max_depth or None))
    else:
        text = serialize_scfg(extract_scfg(treebank))
    _write(args.output, config.header() + text)


def cmd_parse(args):
    config = _config(args)
    grammar = parse_scfg(_read(args.grammar_file))
    corpus = parse_plain_corpus(_read(args.corpus))
    out, failed = [], 0
    for sentence in corpus:
        tree = cky_parse(grammar, sentence)
        if tree is None:  # no parse: a bare root keeps the yield
            failed += 1
            root = grammar.starts[0] if grammar.starts else START_SYMBOL
            tree = Tree(sentence, (Hypothesis(0, len(sentence), root),))
        out.append(tree)
    if failed:
        log.warning("%d of %d sentences had no parse", failed, len(corpus))
    _write(args.output, config.header() + serialize_treebank(out))


def cmd_baseline(args):
    config = _config(args)
    corpus = parse_plain_corpus(_read(args.corpus))
    _write(args.output, config.header() + serialize_treebank(random_baseline(corpus, config.seed)))


def cmd_eval(args):
    config = _config(args)
    gold = parse_treebank(_read(args.gold))
    learned = parse_treebank(_read(args.learned))
    _write(args.output, _runs_csv(config, [_score(config, gold, learned)]))


def cmd_curve(args):
    config = _config(args)
    gold = parse_treebank(_read(args.gold))
    corpus = [t.sentence for t in gold]
    points = learning_curve(corpus, gold, args.step, lambda c: learn(c, config),
                            config.beta, config.exclude_root, config.exclude_single)
    _write(args.output, config.header() + curve_csv(points))


def cmd_pipeline(args):
    config = _config(args)
    if args.gold:
        gold = parse_treebank(_read(args.gold))
        corpus = [t.sentence for t in gold]
    else:
        gold, corpus = None, parse_plain_corpus(_read(args.corpus))
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    scores = []
    for run in range(config.runs):
        run_config = config.for_run(run)
        # the first run keeps the corpus order; later ones shuffle it
        learned = learn(corpus, run_config) if run == 0 else learn_shuffled(corpus, run_config)
        if run == 0:
            _write(outdir / "treebank.txt", config.header() + serialize_treebank(learned))
            if config.grammar:
                if config.grammar == "stsg":
                    text = serialize_stsg(extract_stsg(learned, config.max_depth or None))
                else:
                    text = serialize_scfg(extract_scfg(learned))
                _write(outdir / "grammar.txt", config.header() + text)
        if gold is not None:
            scores.append(_score(config, gold, learned))
    if gold is not None:
        _write(outdir / "scores.csv", _runs_csv(config, scores))


# -- argument parsing ------------------------------------------------------


def _add_alignment(p):
    p.add_argument("--alignment", choices=INSTANCES, default="default")
    p.add_argument("--fold-case", action="store_true", help="compare words case-insensitively")


def _add_selection(p):
    p.add_argument("--selection", choices=MODELS, default="leaf")
    p.add_argument("--no-extended", action="store_true",
                   help="plain geometric mean (no preference for larger combinations)")


def _add_grammar(p, default=None):
    p.add_argument("--grammar", choices=("scfg", "stsg"), default=default)
    p.add_argument("--max-depth", type=int, default=0, help="STSG depth bound (0: unbounded)")


def _add_metrics(p):
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--exclude-root", action="store_true")
    p.add_argument("--exclude-single", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abl", description="Alignment-Based Learning")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("align", help="plain corpus -> hypothesis space")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    _add_alignment(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("select", help="hypothesis space -> treebank")
    p.add_argument("space")
    p.add_argument("-o", "--output", required=True)
    _add_selection(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("extract-grammar", help="treebank -> SCFG or STSG")
    p.add_argument("treebank")
    p.add_argument("-o", "--output", required=True)
    _add_grammar(p, "scfg")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("parse", help="SCFG + plain corpus -> Viterbi treebank")
    p.add_argument("grammar_file")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("baseline", help="random left/right branching treebank")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("eval", help="gold + learned treebank -> scores CSV")
    p.add_argument("gold")
    p.add_argument("learned")
    p.add_argument("-o", "--output", required=True)
    _add_metrics(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("curve", help="learning curve over corpus prefixes")
    p.add_argument("gold")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--step", type=int, required=True)
    _add_alignment(p)
    _add_selection(p)
    _add_metrics(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reparse", action="store_true")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("pipeline", help="align, select[, reparse, extract] and evaluate")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="plain corpus (no scores)")
    src.add_argument("--gold", help="gold treebank; its yields are the corpus")
    p.add_argument("-o", "--output", required=True, help="output directory")
    _add_alignment(p)
    _add_selection(p)
    _add_grammar(p)
    _add_metrics(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reparse", action="store_true", help="reparse with the extracted SCFG")
    p.add_argument("--runs", type=int, default=1, help="extra runs learn from shuffled corpora")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if os.environ.get("ABL_THREADS"):
        log.info("ABL_THREADS is set; this implementation runs sequentially")
    try:
        if getattr(args, "runs", 1) < 1:
            raise UsageError("--runs must be at least 1")
        if getattr(args, "reparse", False) and getattr(args, "grammar", None) == "stsg":
            raise UsageError("--reparse needs an scfg")
        args.func(args)
    except UsageError as err:
        print(f"abl: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as err:
        print(f"abl: format error: {err}", file=sys.stderr)
        return EXIT_FORMAT
    except ValueError as err:
        # malformed inputs that only show up in combination (e.g. differing yields)
        print(f"abl: format error: {err}", file=sys.stderr)
        return EXIT_FORMAT
    except AssertionError as err:
        print(f"abl: internal assertion failed: {err}", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
