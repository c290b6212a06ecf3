"""
cli.py - Command-line interface for the grammar-with-prohibition toolkit

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import argparse
import logging
import sys

from prohibitiongrammar_python.derivation import Budget
from prohibitiongrammar_python.grammar import (
    GrammarAlphabetError,
    GrammarClassError,
    GrammarConstructionError,
    GrammarIndefiniteError,
    GrammarInvalidArgument,
    GrammarSectionError,
    GrammarSyntaxError,
    GrammarValidationError,
    serialize,
)
from prohibitiongrammar_python.oracle import CLAIMS
from prohibitiongrammar_python.toolkit import ProhibitionToolkit
from prohibitiongrammar_python.utils import GrammarFormatError, Utils

logger = logging.getLogger(__name__)

EXIT_USAGE = 64
EXIT_INPUT = 65
EXIT_UNSUPPORTED_PAIR = 66
EXIT_INDEFINITE = 67

DEMO_WORDS = ("wear ed", "keep ed", "adopt ed", "wore", "kept")
DEMO_WITNESS_DEPTH = 9
ARROW = "→"


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise GrammarInvalidArgument(f"{self.prog}: {message}")


def _budget(text):
    if text is None:
        return None
    steps, length = Utils.parse_budget(text)
    return Budget(steps, length)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="prohibitiongrammar",
        description="Grammars with prohibition: classify, decide membership, construct and verify.",
    )
    parser.add_argument("--debug", action="store_true", help="Log debug output to stderr")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_ArgumentParser)

    classify = verbs.add_parser("classify", help="Print component classes, pair class and decidability")
    classify.add_argument("grammar")

    member = verbs.add_parser("member", help="Decide membership of a word")
    member.add_argument("grammar")
    member.add_argument("--word", required=True, help='Space-separated tokens; "eps" or "" for the empty word')
    member.add_argument("--budget", help="STEPS,LENGTH caps for unrestricted components")
    member.add_argument("--trace", action="store_true", help="Print the derivation of an In verdict")

    construct = verbs.add_parser("construct", help="Deliver the language as a conventional grammar")
    construct.add_argument("grammar")
    construct.add_argument("--out", help="Write the grammar file here instead of stdout")

    sample = verbs.add_parser("sample", help="Print the language slice, one word per line")
    sample.add_argument("grammar")
    sample.add_argument("--max-len", type=int, default=8)
    sample.add_argument("--budget")

    verify = verbs.add_parser("verify", help="Check a constructive claim on the grammar")
    verify.add_argument("grammar")
    verify.add_argument("--claim", required=True, choices=sorted(CLAIMS))
    verify.add_argument("--max-len", type=int)
    verify.add_argument("--budget")
    verify.add_argument("--format", choices=("text", "xml"), default="text")

    verbs.add_parser("demo", help="Run the bundled showcases")
    return parser


def _classify(args, out):
    report = ProhibitionToolkit.from_file(args.grammar).classify()
    for key in ("positive", "negative", "pair", "status", "language"):
        print(f"{key}: {report[key]}", file=out)
    return 0


def _member(args, out):
    toolkit = ProhibitionToolkit.from_file(args.grammar, budget=_budget(args.budget))
    verdict = toolkit.member(args.word, trace=args.trace)
    print(verdict, file=out)
    if args.trace:
        for line in verdict.trace_lines():
            print(line, file=out)
    return verdict.value.exit_code


def _construct(args, out):
    constructed = ProhibitionToolkit.from_file(args.grammar).construct()
    text = serialize(constructed, header=f"constructed from {args.grammar}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        out.write(text)
    return 0


def _sample(args, out):
    toolkit = ProhibitionToolkit.from_file(args.grammar, budget=_budget(args.budget))
    for word in toolkit.sample(args.max_len):
        print(Utils.format_word(word), file=out)
    return 0


def _verify(args, out):
    toolkit = ProhibitionToolkit.from_file(args.grammar)
    report = toolkit.verify(args.claim, args.max_len, _budget(args.budget))
    out.write(report.to_xml() + "\n" if args.format == "xml" else report.render())
    return 0 if report.consistent else 1


def _demo(args, out):
    verbs = ProhibitionToolkit.demo("irregular_verbs.pg")
    rows = [
        {"word": word, "verdict": str(verbs.member(word))}
        for word in DEMO_WORDS
    ]
    witness = ProhibitionToolkit.demo("anbncn_witness.pg")
    regular = ProhibitionToolkit.demo("reg_pair.pg")
    constructed = regular.construct()
    text = Utils.render_template(
        "demo.txt.j2",
        template_vars={
            "arrow": ARROW,
            "rows": rows,
            "witness_pair": witness.pair_class.label,
            "witness_depth": DEMO_WITNESS_DEPTH,
            "witness_words": [Utils.format_word(w) for w in witness.sample(DEMO_WITNESS_DEPTH)],
            "regular_pair": regular.pair_class.label,
            "constructed_class": str(ProhibitionToolkit(constructed).pair_class.i),
            "constructed": serialize(constructed),
        },
    )
    out.write(text)
    return 0


COMMANDS = {
    "classify": _classify,
    "member": _member,
    "construct": _construct,
    "sample": _sample,
    "verify": _verify,
    "demo": _demo,
}


def run(argv=None, out=None, err=None) -> int:
    """Run one command and return its exit code.

    Args:
        argv (list, optional): Arguments without the program name. Defaults to sys.argv[1:].
        out (file, optional): Stream for regular output. Defaults to sys.stdout.
        err (file, optional): Stream for error messages. Defaults to sys.stderr.

    Returns:
        int: 0/1/2 for in/not-in/unknown verdicts, 64 usage, 65 input, 66 unsupported pair, 67 indefinite slice
    """
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except GrammarInvalidArgument as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code or 0
    if args.debug:
        logging.basicConfig(level=logging.DEBUG, stream=err)

    try:
        return COMMANDS[args.verb](args, out)
    except GrammarConstructionError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_UNSUPPORTED_PAIR
    except GrammarIndefiniteError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INDEFINITE
    except (GrammarInvalidArgument, GrammarFormatError, GrammarClassError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (
        OSError,
        GrammarSyntaxError,
        GrammarSectionError,
        GrammarValidationError,
        GrammarAlphabetError,
    ) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


def main():
    sys.exit(run())
