"""Command-line interface.

Exit codes:
    0  success
    1  missing or unreadable resources / input
    2  empty input, or a sentence without any analysis
    3  invalid resources (syntax errors or validation diagnostics)
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import __version__
from .engine import ParseConfig, Rejection, build_chart, parse
from .output import format_table, to_columns, to_graph
from .resources import ResourceError, load_resources, validate_resources
from .tagger import dump_lattice, split_sentences

EXIT_OK, EXIT_MISSING, EXIT_NO_PARSE, EXIT_INVALID = 0, 1, 2, 3
FORMATS = {"table": format_table, "columns": to_columns, "graph": to_graph}


def _err(msg: str) -> None:
    print(f"syntagma: {msg}", file=sys.stderr)


def _load(args):
    try:
        return load_resources(args.grammar), None
    except ResourceError as exc:
        _err(str(exc))
        return None, EXIT_MISSING if exc.missing else EXIT_INVALID


def _sentences(args) -> Optional[list]:
    if args.sentences:
        texts = args.sentences
    else:
        try:
            texts = sys.stdin.read().splitlines()
        except OSError as exc:
            _err(f"cannot read standard input: {exc}")
            return None
    out = []
    for t in texts:
        out.extend(split_sentences(t))
    return out


def cmd_parse(args) -> int:
    res, code = _load(args)
    if res is None:
        return code
    if args.profile not in res.grammar.profile_names:
        _err(f"unknown profile {args.profile!r} (have: {', '.join(res.grammar.profile_names)})")
        return EXIT_INVALID
    sentences = _sentences(args)
    if sentences is None:
        return EXIT_MISSING
    if not sentences:
        _err("empty input")
        return EXIT_NO_PARSE
    cfg = ParseConfig(profile=args.profile, beam=args.beam, pairs=res.pairs)
    render = FORMATS[args.format]
    status = EXIT_OK
    blocks = []
    for sentence in sentences:
        result = parse(sentence, res.grammar, res.lexicon, res.semnet, cfg)
        if args.dump_lattice:
            blocks.append("# lattice\n" + dump_lattice(result.lattice))
        for d in result.diagnostics:
            _err(f"{sentence}: {d}")
        if not result:
            _err(f"no analysis: {sentence}")
            status = EXIT_NO_PARSE
            continue
        for a in result[: args.k]:
            blocks.append(render(a))
    if blocks:
        sys.stdout.write("\n".join(blocks))
    return status


def cmd_validate(args) -> int:
    res, code = _load(args)
    if res is None:
        return code
    diags = validate_resources(res)
    for d in diags:
        print(d)
    if diags:
        return EXIT_INVALID
    print(f"{res.path}: ok ({len(res.grammar.frames)} frames, {len(res.lexicon)} entries, "
          f"{len(res.semnet)} semantic nodes, {len(res.pairs)} pairs)")
    return EXIT_OK


def _span(seq) -> str:
    overt = [c for c in seq if not c.is_trace]
    first, last = overt[0].start[0], overt[-1].end[0] - 1
    if overt[-1].end[1]:
        last = overt[-1].end[0]
    return f"{first}" if first == last else f"{first}-{last}"


def cmd_explain(args) -> int:
    res, code = _load(args)
    if res is None:
        return code
    text = " ".join(args.sentences).strip()
    if not text:
        _err("empty input")
        return EXIT_NO_PARSE
    if args.profile not in res.grammar.profile_names:
        _err(f"unknown profile {args.profile!r}")
        return EXIT_INVALID
    lines = []

    def observe(frame, seq, result):
        words = " ".join(c.surface if not c.is_trace else c.category for c in seq)
        if isinstance(result, Rejection):
            why = result.reason + (f": {result.atom}" if result.atom else "")
            where = f" position {result.position}" if result.position else ""
            lines.append(f"reject {frame.id} [{_span(seq)}] ({words}){where}: {why}")
            log = result.filter_log
        else:
            lines.append(f"accept {frame.id} [{_span(seq)}] ({words}) penalty={result.penalty:g}")
            log = result.filter_log
        for lemma, kept, rejected in log:
            lines.append(f"    meanings of {lemma}: kept {{{','.join(kept)}}} "
                         f"rejected {{{','.join(rejected)}}}")

    cfg = ParseConfig(profile=args.profile, pairs=res.pairs)
    chart, tokens, _, lattice, diags = build_chart(text, res.grammar, res.lexicon, cfg, observe)
    for node in lattice:
        if node.fallback and node.entry.pos == "N":
            lines.insert(0, f"note: {node.surface!r} is not in the lexicon; "
                            f"fallback entries N, V, Adj, Adv with penalty {node.penalty:g}")
    result = parse(text, res.grammar, res.lexicon, res.semnet, cfg)
    lines.extend(f"diagnostic: {d}" for d in diags)
    lines.append(f"{len(result)} analys{'is' if len(result) == 1 else 'es'}")
    print("\n".join(lines))
    return EXIT_OK if result else EXIT_NO_PARSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="syntagma", description="Grammar-driven dependency parser.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--grammar", metavar="DIR",
                        help="resource directory or packaged language (en, it); "
                             "default $SYNTAGMA_RES")

    sp = sub.add_parser("parse", help="parse sentences from arguments or standard input")
    common(sp)
    sp.add_argument("--format", choices=sorted(FORMATS), default="table")
    sp.add_argument("--k", type=int, default=1, help="analyses per sentence (default 1)")
    sp.add_argument("--profile", default="strict", help="relaxation profile (default strict)")
    sp.add_argument("--beam", type=int, default=None, help="keep at most N analyses")
    sp.add_argument("--dump-lattice", action="store_true", help="also print the terminal lattice")
    sp.add_argument("sentences", nargs="*")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("validate", help="check a resource directory")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("explain", help="show every frame attempt for one sentence")
    common(sp)
    sp.add_argument("--profile", default="strict")
    sp.add_argument("sentences", nargs="*")
    sp.set_defaults(func=cmd_explain)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
