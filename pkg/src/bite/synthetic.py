"""Planted-bias corpora built from rule-based edit lineages."""

from __future__ import annotations

import json
from importlib import resources
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .actions import RuleBasedEditor, StylisticAction, default_action_registry


def load_corpus() -> List[dict]:
    """The bundled 50-question fixture corpus."""
    text = resources.files("bite.data").joinpath("corpus.jsonl").read_text(encoding="utf-8")
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def sample_edit_pairs(answers: Sequence[str], n: int, seed: int = 0, max_depth: int = 2,
                      actions: Optional[Sequence[StylisticAction]] = None,
                      editor=None) -> List[Tuple[int, str, str]]:
    """Draw ``n`` (answer index, parent, child) triples.

    The parent is an answer after 0..max_depth random edits; the child is
    one more random edit of the parent.
    """
    rng = np.random.default_rng(seed)
    actions = list(actions or default_action_registry())
    editor = editor or RuleBasedEditor()
    out = []
    for _ in range(n):
        i = int(rng.integers(len(answers)))
        text = answers[i]
        for _ in range(int(rng.integers(max_depth + 1))):
            text = editor.edit(actions[int(rng.integers(len(actions)))], text, int(rng.integers(2 ** 31)))
        child = editor.edit(actions[int(rng.integers(len(actions)))], text, int(rng.integers(2 ** 31)))
        out.append((i, text, child))
    return out
