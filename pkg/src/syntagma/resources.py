"""Resource directories: grammar.sg, lexicon.sg, semnet.sg, pairs.tsv."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .grammar import Diagnostic, Grammar, GrammarError, load_grammar, validate_grammar
from .lexicon import Lexicon, LexiconError, load_lexicon
from .semnet import SemNet, SemNetError, load_pairs, load_semnet

GRAMMAR_FILE = "grammar.sg"
LEXICON_FILE = "lexicon.sg"
SEMNET_FILE = "semnet.sg"
PAIRS_FILE = "pairs.tsv"
ENV_VAR = "SYNTAGMA_RES"
PACKAGED = Path(__file__).parent / "data"


class ResourceError(Exception):
    """``missing`` is True for absent or unreadable files, False for invalid content."""

    def __init__(self, message: str, missing: bool):
        super().__init__(message)
        self.missing = missing


@dataclass(frozen=True)
class ResourceSet:
    grammar: Grammar
    lexicon: Lexicon
    semnet: SemNet
    pairs: dict = field(default_factory=dict, hash=False)
    path: Optional[Path] = None


def packaged_languages() -> list:
    return sorted(p.name for p in PACKAGED.iterdir() if (p / GRAMMAR_FILE).exists())


def resolve_directory(name: Optional[str]) -> Path:
    """A directory path, a packaged language name, or ``$SYNTAGMA_RES``."""
    if name is None:
        name = os.environ.get(ENV_VAR)
    if name is None:
        raise ResourceError(f"no resource directory: pass --grammar or set {ENV_VAR}", True)
    path = Path(name)
    if not path.exists() and (PACKAGED / name / GRAMMAR_FILE).exists():
        return PACKAGED / name
    if not path.is_dir():
        raise ResourceError(f"{name}: resource directory not found", True)
    return path


def load_resources(directory) -> ResourceSet:
    path = resolve_directory(str(directory) if directory is not None else None)
    for required in (GRAMMAR_FILE, LEXICON_FILE):
        if not (path / required).is_file():
            raise ResourceError(f"{path / required}: missing resource file", True)
    try:
        grammar = load_grammar(path / GRAMMAR_FILE)
        lexicon = load_lexicon(path / LEXICON_FILE)
        semnet = load_semnet(path / SEMNET_FILE) if (path / SEMNET_FILE).is_file() else SemNet()
        pairs = load_pairs(path / PAIRS_FILE) if (path / PAIRS_FILE).is_file() else {}
    except (GrammarError, LexiconError, SemNetError) as exc:
        missing = isinstance(exc.__cause__, OSError)
        raise ResourceError(str(exc), missing) from exc
    return ResourceSet(grammar, lexicon, semnet, pairs, path)


def validate_resources(res: ResourceSet) -> list:
    """Grammar/lexicon diagnostics plus lexicon-to-semnet cross-references."""
    diags = list(validate_grammar(res.grammar, res.lexicon))
    for (lemma, pos), meanings in res.lexicon.meaning_table():
        for m in meanings:
            if m.sem_ref and m.sem_ref not in res.semnet:
                diags.append(Diagnostic("dangling-semtag",
                                        f"meaning {lemma} {m.meaning_id} points to unknown "
                                        f"semantic node {m.sem_ref}"))
    return diags
