"""Command line: ``hlunfold {hlnet,lola,pnml} -i model.pnml [-o out]``.

Exit status is 0 on success, 1 when the input cannot be processed (the
message on stderr starts with the input name and, for PNML errors, the line
and column) and 2 for usage errors.
"""

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from hlunfold import pnml
from hlunfold.composer import detect_ring, emit_script, expand_script
from hlunfold.errors import HLUnfoldError, ResourceLimitError
from hlunfold.unfolder import DEFAULT_LIMIT, detect_stable_places, unfold
from hlunfold.writers import EXTENSIONS, WRITERS

log = logging.getLogger("hlunfold")

FORMATS = {"hlnet": "net", "lola": "lola", "pnml": "pnml"}


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hlunfold",
        description="Unfold a high-level Petri net given in PNML into a P/T net.")
    sub = parser.add_subparsers(dest="command", metavar="{hlnet,lola,pnml}")
    sub.required = True
    helps = {
        "hlnet": "write a TINA .net file (or a .ring script for ring nets)",
        "lola": "write a LoLA net",
        "pnml": "write a P/T net in PNML",
    }
    for cmd, text in helps.items():
        p = sub.add_parser(cmd, help=text, description=text)
        p.add_argument("-i", "--input", required=True, help="PNML file, or - for standard input")
        p.add_argument("-o", "--output", help="output file, or - for standard output")
        p.add_argument("--name", help="net name in the output (also names the default output file)")
        p.add_argument("--debug", action="store_true", help="hlnet only: print the colored net itself")
        p.add_argument("--expand", action="store_true", help="never emit a ring script")
        p.add_argument("--limit", type=_positive, default=DEFAULT_LIMIT,
                       help=f"maximum number of transition instances (default {DEFAULT_LIMIT})")
    return parser


def output_path(args, ext):
    """Where the result goes: -o, else the input (or --name) with ``ext``."""
    if args.output:
        return args.output
    src = Path(args.input)
    stem = args.name if args.name else src.stem
    return str(src.with_name(stem + ext))


def _write(path, writer, obj, name):
    if path == "-":
        n = writer(obj, sys.stdout.buffer, name)
        sys.stdout.buffer.flush()
        return n
    tmp = f"{path}.part"
    try:
        with open(tmp, "wb") as f:
            n = writer(obj, f, name)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)
    return n


def _read(args):
    if args.input == "-":
        return pnml.load(sys.stdin.buffer)
    with open(args.input, "rb") as f:
        return pnml.load(f)


def execute(args):
    start = time.perf_counter()
    net = _read(args)
    stable = detect_stable_places(net)
    if args.debug:
        fmt, result = "debug", net
        places, transitions = len(net.places), len(net.transitions)
    else:
        ring = None if args.command == "hlnet" and args.expand else detect_ring(net)
        if ring is not None:
            script = emit_script(ring)
            transitions = ring.n * len(ring.transitions)
            if transitions > args.limit:
                raise ResourceLimitError(f"more than {args.limit} transition instances")
        if ring is not None and args.command == "hlnet":
            fmt, result = "ring", script
            places = ring.n * len(ring.places)
        else:
            fmt = FORMATS[args.command]
            result = expand_script(script) if ring is not None else unfold(net, args.limit)
            places, transitions = len(result.places), len(result.transitions)
    path = output_path(args, EXTENSIONS[fmt])
    _write(path, WRITERS[fmt], result, args.name)
    elapsed = time.perf_counter() - start
    print(f"places={places} transitions={transitions} stable={len(stable)} time={elapsed:.3f}s",
          file=sys.stderr)
    log.info("wrote %s", path)


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.debug and args.command != "hlnet":
        parser.print_usage(sys.stderr)
        print("hlunfold: error: --debug is only valid with hlnet", file=sys.stderr)
        return 2
    if args.input == "-" and not args.output:
        parser.print_usage(sys.stderr)
        print("hlunfold: error: reading standard input requires -o", file=sys.stderr)
        return 2
    logging.basicConfig(format="hlunfold: %(levelname)s: %(message)s", level=logging.WARNING)
    where = "<stdin>" if args.input == "-" else args.input
    try:
        execute(args)
    except HLUnfoldError as exc:
        print(f"{where}:{exc}" if getattr(exc, "position", None) else f"{where}: error: {exc}",
              file=sys.stderr)
        return 1
    except BrokenPipeError:
        # downstream closed early (``| head``); silence the final flush too
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1
    except OSError as exc:
        print(f"{exc.filename or where}: error: {exc.strerror or exc}", file=sys.stderr)
        return 1
    except (RecursionError, MemoryError) as exc:
        print(f"{where}: error: input too large to process ({type(exc).__name__})", file=sys.stderr)
        return 1
    except Exception as exc:  # keep tracebacks off the user's terminal
        log.debug("internal error", exc_info=True)
        print(f"{where}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run(sys.argv[1:]))
