"""Command-line front end: analyze / climax / recur / form / corpus."""

from __future__ import annotations

import argparse
import statistics
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import __version__
from .climax import climax_profile
from .config import AnalysisConfig, load_config
from .errors import AnalysisError, ArcformError, GrammarError, ScoreFormatError
from .grammar import (flatten, generate, parse_form, predicted_climax_position,
                      recognize)
from .recurrence import find_recurrences
from .report import build_report, curve_csv, render_json
from .score import Piece, import_midi, parse_text, skyline
from .errors import NotesParseError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3


def load_piece(path: str) -> Piece:
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".notes":
        return parse_text(p.read_text(encoding="utf-8"))
    if suffix in (".mid", ".midi"):
        return import_midi(p.read_bytes())
    raise ScoreFormatError(f"unknown input extension {suffix!r} for {path}")


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="key=value config file (flags win)")
    parser.add_argument("--out", metavar="PATH",
                        help="write output here instead of stdout")
    parser.add_argument("--weights", metavar="P,D,V",
                        help="salience weights pitch,density,velocity")
    parser.add_argument("--window", metavar="BEATS",
                        help="salience window width in beats")
    parser.add_argument("--threshold", type=float, metavar="X",
                        help="recurrence similarity threshold")
    parser.add_argument("--json", action="store_true",
                        help="force JSON output")


def _effective_config(args: argparse.Namespace) -> AnalysisConfig:
    config = AnalysisConfig()
    if getattr(args, "config", None):
        config = load_config(args.config, config)
    if getattr(args, "weights", None):
        parts = args.weights.split(",")
        if len(parts) != 3:
            raise ArcformError("--weights needs three comma-separated values")
        config = replace(config, w_pitch=float(parts[0]),
                         w_density=float(parts[1]),
                         w_velocity=float(parts[2]))
    if getattr(args, "window", None):
        config = replace(config, window=Fraction(args.window))
    if getattr(args, "threshold", None) is not None:
        config = replace(config, threshold=args.threshold)
    return config


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    piece = load_piece(args.input)
    climax = climax_profile(piece, config.salience_weights, config.window)
    recurrence = None
    if args.query:
        query_piece = load_piece(args.query)
        query = skyline(query_piece)
        recurrence = find_recurrences(piece, query, config.threshold,
                                      config.similarity_weights)
    form = None
    if args.form:
        seed = parse_form(args.seed or "AB")
        steps = recognize(args.form, seed)
        form = {
            "form": args.form,
            "seed": flatten(seed),
            "minimal_steps": steps if steps is not None else "not derivable",
        }
        if steps is not None and steps >= 0:
            total = piece.beats_total
            n_copies = steps + 1
            form["predicted_climax_position"] = float(
                predicted_climax_position(n_copies, (Fraction(1), Fraction(1))))
            form["measured_climax_position"] = climax.normalized_position
    report = build_report(piece, args.input, config, __version__,
                          climax=climax, recurrence=recurrence, form=form)
    _emit(render_json(report), args.out)
    return EXIT_OK


def cmd_climax(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    piece = load_piece(args.input)
    profile = climax_profile(piece, config.salience_weights, config.window)
    if args.csv and not args.json:
        _emit(curve_csv(profile), args.out)
    else:
        report = build_report(piece, args.input, config, __version__,
                              climax=profile)
        _emit(render_json(report), args.out)
    return EXIT_OK


def cmd_recur(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    piece = load_piece(args.input)
    query = skyline(load_piece(args.query))
    series = find_recurrences(piece, query, config.threshold,
                              config.similarity_weights)
    report = build_report(piece, args.input, config, __version__,
                          recurrence=series)
    _emit(render_json(report), args.out)
    return EXIT_OK


def cmd_form_generate(args: argparse.Namespace) -> int:
    seed = parse_form(args.seed)
    trees = generate(seed, args.steps)
    strings = sorted({flatten(t) for t in trees}, key=lambda s: (len(s), s))
    if args.json:
        _emit(render_json(strings), args.out)
    else:
        _emit(" ".join(strings) + "\n", args.out)
    return EXIT_OK


def cmd_form_recognize(args: argparse.Namespace) -> int:
    seed = parse_form(args.seed)
    steps = recognize(args.form, seed)
    text = "not derivable" if steps is None else str(steps)
    if args.json:
        _emit(render_json({"form": args.form, "seed": args.seed,
                           "minimal_steps": steps if steps is not None
                           else "not derivable"}), args.out)
    else:
        _emit(text + "\n", args.out)
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    directory = Path(args.directory)
    if not directory.is_dir():
        raise ScoreFormatError(f"not a directory: {args.directory}")
    files = sorted(p for p in directory.iterdir()
                   if p.suffix.lower() in (".notes", ".mid", ".midi"))
    rows = []
    skipped = 0
    for path in files:
        try:
            piece = load_piece(str(path))
            profile = climax_profile(piece, config.salience_weights,
                                     config.window)
        except ArcformError as exc:
            skipped += 1
            print(f"warning: skipped {path.name}: {exc}", file=sys.stderr)
            continue
        rows.append((path.name, piece.beats_total,
                     profile.normalized_position,
                     profile.asymmetry_index,
                     profile.pre_mass_fraction))
    if not rows:
        raise ScoreFormatError(f"no parseable scores in {args.directory}")
    lines = ["file,beats_total,normalized_position,asymmetry_index,"
             "pre_mass_fraction"]
    for name, total, pos, asym, pre in rows:
        lines.append(f"{name},{total},{pos:.6f},{asym:.6f},{pre:.6f}")
    positions = [pos for _, _, pos, _, _ in rows]
    mean = statistics.fmean(positions)
    median = statistics.median(positions)
    # summary row: column 2 = piece count, 3 = mean position, 4 = median
    lines.append(f"summary,{len(rows)},{mean:.6f},{median:.6f},")
    _emit("\n".join(lines) + "\n", args.out)
    if skipped:
        print(f"warning: {skipped} file(s) skipped", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcform",
        description="Temporal-structure analysis of symbolic music: "
                    "recurrence, climax asymmetry, and form grammar.")
    parser.add_argument("--version", action="version",
                        version=f"arcform {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="full analysis to JSON")
    p_analyze.add_argument("input", help=".notes or .mid score")
    p_analyze.add_argument("--query", metavar="PATH",
                           help="melody file: also run recurrence detection")
    p_analyze.add_argument("--form", metavar="STR",
                           help="form string: also run form recognition")
    p_analyze.add_argument("--seed", metavar="FORM", default="AB",
                           help="seed form for recognition (default AB)")
    _add_shared_flags(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_climax = sub.add_parser("climax", help="climax profile only")
    p_climax.add_argument("input")
    p_climax.add_argument("--csv", action="store_true",
                          help="emit the salience curve as CSV")
    _add_shared_flags(p_climax)
    p_climax.set_defaults(func=cmd_climax)

    p_recur = sub.add_parser("recur", help="recurrence detection only")
    p_recur.add_argument("input")
    p_recur.add_argument("--query", metavar="PATH", required=True)
    _add_shared_flags(p_recur)
    p_recur.set_defaults(func=cmd_recur)

    p_form = sub.add_parser("form", help="form grammar tools")
    form_sub = p_form.add_subparsers(dest="form_command", required=True)
    p_gen = form_sub.add_parser("generate")
    p_gen.add_argument("--seed", metavar="FORM", default="AB")
    p_gen.add_argument("--steps", type=int, default=1)
    _add_shared_flags(p_gen)
    p_gen.set_defaults(func=cmd_form_generate)
    p_rec = form_sub.add_parser("recognize")
    p_rec.add_argument("form")
    p_rec.add_argument("--seed", metavar="FORM", default="AB")
    _add_shared_flags(p_rec)
    p_rec.set_defaults(func=cmd_form_recognize)

    p_corpus = sub.add_parser("corpus", help="batch climax stats to CSV")
    p_corpus.add_argument("directory")
    _add_shared_flags(p_corpus)
    p_corpus.set_defaults(func=cmd_corpus)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScoreFormatError, GrammarError, NotesParseError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ArcformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
