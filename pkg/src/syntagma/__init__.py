"""SYNTAGMA-style grammar-driven parsing: pattern frames, valency, traces."""

__version__ = "0.1.0"

from .grammar import (Grammar, GrammarError, PatternFrame, load_grammar, loads_grammar,
                      parse_constraint, format_constraint, print_grammar, validate_grammar)
from .lexicon import Lexicon, LexiconError, load_lexicon, loads_lexicon
from .semnet import SemNet, SemNetError, load_semnet, loads_semnet
from .tagger import tokenize, build_lattice
from .engine import Analysis, Constituent, ParseConfig, parse
from .binder import bind_traces, resolve_coordination
from .output import to_table, to_columns, from_columns, to_graph
from .resources import ResourceSet, load_resources

__all__ = [
    "Grammar", "GrammarError", "PatternFrame", "load_grammar", "loads_grammar",
    "parse_constraint", "format_constraint", "print_grammar", "validate_grammar",
    "Lexicon", "LexiconError", "load_lexicon", "loads_lexicon",
    "SemNet", "SemNetError", "load_semnet", "loads_semnet",
    "tokenize", "build_lattice",
    "Analysis", "Constituent", "ParseConfig", "parse",
    "bind_traces", "resolve_coordination",
    "to_table", "to_columns", "from_columns", "to_graph",
    "ResourceSet", "load_resources",
]
