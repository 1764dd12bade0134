"""Chaining the phases: alignment, selection and optional reparsing."""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from typing import Optional

from .alignment import alignment_learning
from .grammar import reparse_corpus
from .selection import SelectionConfig, select


@dataclass(frozen=True)
class RunConfig:
    alignment: str = "default"
    selection: str = "leaf"
    extended: bool = True
    seed: int = 0
    grammar: Optional[str] = None
    max_depth: int = 0
    reparse: bool = False
    fold_case: bool = False
    beta: float = 1.0
    exclude_root: bool = False
    exclude_single: bool = False
    runs: int = 1

    @property
    def selection_config(self) -> SelectionConfig:
        return SelectionConfig(self.selection, self.extended, self.seed)

    @property
    def system_name(self) -> str:
        name = f"{self.alignment}:{self.selection_config.name}"
        if self.reparse:
            name += ":scfg"
        return name

    def header(self) -> str:
        """One comment line describing the run, for artifact headers."""
        fields = " ".join(f"{k}={v}" for k, v in asdict(self).items())
        return f"# abl {self.system_name} {fields}\n"

    def for_run(self, run: int) -> "RunConfig":
        return RunConfig(**{**asdict(self), "seed": self.seed + run, "runs": 1})


def learn(corpus, config: RunConfig):
    """Treebank for ``corpus`` (same order) under ``config``."""
    space = alignment_learning(corpus, config.alignment, fold_case=config.fold_case)
    treebank = select(space, config.selection_config)
    if config.reparse:
        treebank, _ = reparse_corpus(treebank, "scfg")
    return treebank


def learn_shuffled(corpus, config: RunConfig):
    """Learn on a seeded permutation of ``corpus``; trees come back in input order."""
    order = list(range(len(corpus)))
    random.Random(config.seed).shuffle(order)
    learned = learn([corpus[i] for i in order], config)
    out = [None] * len(corpus)
    for pos, i in enumerate(order):
        out[i] = learned[pos]
    return out
