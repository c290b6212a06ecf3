"""
grammar.py - Grammar data model, grammar file parsing and Chomsky classification

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import logging
import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from prohibitiongrammar_python.utils import Utils

logger = logging.getLogger(__name__)

EPSILON = "eps"
ARROW = "->"
ALTERNATION = "|"
DEFAULT_START = "S"

_TOKEN_RE = re.compile(r'"[^"\n]*"?|[^\s"]+')
_TERMINAL_RE = re.compile(r"[a-z][A-Za-z0-9_']*\Z")
_NONTERMINAL_RE = re.compile(r"[A-Z][A-Za-z0-9_']*\Z")


class GrammarError(Exception):
    """Base class for errors raised by the grammar toolkit"""


class GrammarSyntaxError(GrammarError):
    """Error raised when a grammar file cannot be tokenized or parsed"""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class GrammarUndeclaredSymbol(GrammarSyntaxError):
    """Error raised when a production uses a terminal missing from %alphabet"""


class GrammarSectionError(GrammarError):
    """Error raised when a section is missing or declared twice"""


class GrammarValidationError(GrammarError):
    """Error raised when a grammar violates its structural invariants"""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class GrammarClassError(GrammarError):
    """Error raised when a grammar is outside the Chomsky class an operation requires"""


class GrammarConstructionError(GrammarClassError):
    """Error raised when no difference construction exists for a class pair"""


class GrammarAlphabetError(GrammarError):
    """Error raised on a symbol outside the alphabet or on mismatched alphabets"""


class GrammarIndefiniteError(GrammarError):
    """Error raised when a language slice meets an Unknown verdict"""

    def __init__(self, word, message=None):
        self.word = tuple(word)
        super().__init__(
            message or f"membership of {Utils.format_word(self.word)} is unknown within budget"
        )


class GrammarInvalidArgument(GrammarError):
    """Error raised when an invalid argument is specified"""


class GrammarUnknownRelation(GrammarError):
    """Error raised when the relation tables hold no cell for a pair"""


class SymbolKind(Enum):
    """Kind of a grammar symbol."""

    TERMINAL = "terminal"
    NONTERMINAL = "nonterminal"


@dataclass(frozen=True)
class SymbolId:
    """A terminal or nonterminal symbol, identified by kind and name."""

    kind: SymbolKind
    name: str

    @property
    def is_terminal(self) -> bool:
        return self.kind is SymbolKind.TERMINAL

    @property
    def is_nonterminal(self) -> bool:
        return self.kind is SymbolKind.NONTERMINAL

    def render(self) -> str:
        """Return the symbol as it is written in a grammar file."""
        if self.is_nonterminal:
            return self.name
        if _TERMINAL_RE.match(self.name) and self.name != EPSILON:
            return self.name
        return f'"{self.name}"'

    def __str__(self):
        return self.name


def terminal(name: str) -> SymbolId:
    return SymbolId(SymbolKind.TERMINAL, name)


def nonterminal(name: str) -> SymbolId:
    return SymbolId(SymbolKind.NONTERMINAL, name)


def check_word(names: Iterable[str], word) -> Tuple[str, ...]:
    """Return the word as a tuple, raising if a symbol is outside the named alphabet."""
    word = tuple(word)
    names = frozenset(names)
    for symbol in word:
        if symbol not in names:
            raise GrammarAlphabetError(f"symbol-not-in-alphabet: {symbol}")
    return word


def symbol_key(symbol: SymbolId):
    """Sort key ordering nonterminals before terminals, then by name."""
    return (symbol.kind is SymbolKind.TERMINAL, symbol.name)


def fresh_name(prefix: str, taken: Iterable[str]) -> str:
    """Return prefix, or prefix followed by the smallest index, that is not taken."""
    taken = set(taken)
    if prefix not in taken:
        return prefix
    index = 1
    while f"{prefix}{index}" in taken:
        index += 1
    return f"{prefix}{index}"


@dataclass(frozen=True)
class Production:
    """A rewriting rule lhs -> rhs. An empty rhs is the empty string."""

    lhs: Tuple[SymbolId, ...]
    rhs: Tuple[SymbolId, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))

    def render(self) -> str:
        lhs = " ".join(s.render() for s in self.lhs)
        rhs = " ".join(s.render() for s in self.rhs) if self.rhs else EPSILON
        return f"{lhs} {ARROW} {rhs}"

    def __str__(self):
        return self.render()


class ChomskyClass(IntEnum):
    """Syntactic level in the Chomsky hierarchy. The value is the type number."""

    TYPE0 = 0
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3

    def __str__(self):
        return f"Type{self.value}"


@dataclass(frozen=True)
class Grammar:
    """A formal grammar (alphabet, nonterminals, start symbol, ordered productions).

    Construction does not validate; use :func:`validate` or build grammars
    through :func:`parse_grammar_file`, which rejects invalid input.
    """

    alphabet: FrozenSet[SymbolId]
    nonterminals: FrozenSet[SymbolId]
    start: SymbolId
    productions: Tuple[Production, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "productions", tuple(self.productions))

    @property
    def terminal_names(self) -> FrozenSet[str]:
        return frozenset(s.name for s in self.alphabet)

    @property
    def nonterminal_names(self) -> FrozenSet[str]:
        return frozenset(s.name for s in self.nonterminals)

    @classmethod
    def empty(cls, alphabet: Iterable[SymbolId], start: str = DEFAULT_START):
        """Grammar with no productions, generating the empty language."""
        start_symbol = nonterminal(start)
        return cls(frozenset(alphabet), frozenset([start_symbol]), start_symbol, ())

    @classmethod
    def build(cls, alphabet: Iterable[str], start: str, rules: Iterable[str]):
        """Build a grammar from terminal names and production lines in file syntax.

        Args:
            alphabet (iterable): Terminal names.
            start (str): Start nonterminal.
            rules (iterable): Production lines, e.g. ``"S -> a S | eps"``.

        Returns:
            Grammar: the validated grammar
        """
        symbols = " ".join(terminal(name).render() for name in sorted(set(alphabet)))
        lines = [f"%alphabet {symbols}", "%positive", f"%start {start}"]
        lines.extend(rules)
        return parse_grammar_file("\n".join(lines) + "\n").positive

    def as_unrestricted(self):
        """Return a language-equal grammar that classifies as Type0.

        A fresh, unreachable nonterminal Z gets the contracting rule ``Z Z -> eps``.
        """
        name = fresh_name("Z", self.nonterminal_names | self.terminal_names)
        extra = nonterminal(name)
        return Grammar(
            self.alphabet,
            self.nonterminals | {extra},
            self.start,
            self.productions + (Production((extra, extra), ()),),
        )

    def render_lines(self) -> List[str]:
        """Production lines in file syntax, consecutive rules with one lhs joined by '|'."""
        lines = []
        previous = None
        for production in self.productions:
            rhs = (
                " ".join(s.render() for s in production.rhs) if production.rhs else EPSILON
            )
            if previous is not None and production.lhs == previous:
                lines[-1] = f"{lines[-1]} {ALTERNATION} {rhs}"
            else:
                lhs = " ".join(s.render() for s in production.lhs)
                lines.append(f"{lhs} {ARROW} {rhs}")
            previous = production.lhs
        return lines


@dataclass(frozen=True)
class ProhibitionGrammar:
    """A grammar with prohibition: L = L(positive) minus L(negative)."""

    positive: Grammar
    negative: Grammar

    def __post_init__(self):
        if self.positive.alphabet != self.negative.alphabet:
            raise GrammarAlphabetError(
                "positive and negative grammars must declare the same alphabet"
            )

    @property
    def alphabet(self) -> FrozenSet[SymbolId]:
        return self.positive.alphabet

    @property
    def terminal_names(self) -> FrozenSet[str]:
        return self.positive.terminal_names

    @classmethod
    def without_prohibition(cls, positive: Grammar):
        """Pair a grammar with an empty negative grammar."""
        return cls(positive, Grammar.empty(positive.alphabet))


@dataclass
class _Token:
    text: str
    column: int

    @property
    def quoted(self) -> bool:
        return self.text.startswith('"')


class GrammarParser:
    """Line-oriented parser for grammar-with-prohibition files."""

    directives = ("%alphabet", "%positive", "%negative", "%start")

    def __init__(self, text: str):
        self.text = text
        self.alphabet: Optional[Dict[str, SymbolId]] = None
        self.sections: Dict[str, dict] = {}
        self.current: Optional[dict] = None

    def parse(self) -> ProhibitionGrammar:
        """Parse the whole text.

        Returns:
            ProhibitionGrammar: validated pair; a missing %negative yields an empty negative grammar
        """
        for number, line in enumerate(self.text.splitlines(), start=1):
            tokens = self._tokenize(line, number)
            if not tokens:
                continue
            head = tokens[0]
            if head.text.startswith("%") and not head.quoted:
                self._directive(tokens, number)
            else:
                self._production(tokens, number)

        if self.alphabet is None:
            raise GrammarSectionError("missing %alphabet section")
        if "positive" not in self.sections:
            raise GrammarSectionError("missing %positive section")
        alphabet = frozenset(self.alphabet.values())
        positive = self._build("positive", alphabet)
        if "negative" in self.sections:
            negative = self._build("negative", alphabet)
        else:
            negative = Grammar.empty(alphabet)
        logger.debug(
            "parsed grammar: %d terminals, %d positive and %d negative productions",
            len(alphabet),
            len(positive.productions),
            len(negative.productions),
        )
        return ProhibitionGrammar(positive, negative)

    @staticmethod
    def _tokenize(line: str, number: int) -> List[_Token]:
        tokens = []
        for match in _TOKEN_RE.finditer(line):
            text = match.group(0)
            column = match.start() + 1
            if text.startswith('"'):
                if len(text) < 2 or not text.endswith('"'):
                    raise GrammarSyntaxError("unterminated quoted terminal", number, column)
                if len(text) == 2 or any(ch.isspace() for ch in text):
                    raise GrammarSyntaxError(
                        "quoted terminal must be nonempty and free of whitespace",
                        number,
                        column,
                    )
                tokens.append(_Token(text, column))
                continue
            if "#" in text:
                text = text[: text.index("#")]
                if text:
                    tokens.append(_Token(text, column))
                break
            tokens.append(_Token(text, column))
        return tokens

    def _directive(self, tokens: List[_Token], number: int):
        head = tokens[0]
        if head.text not in self.directives:
            raise GrammarSyntaxError(f"unknown directive {head.text}", number, head.column)

        if head.text == "%alphabet":
            if self.alphabet is not None:
                raise GrammarSectionError(f"line {number}: duplicate %alphabet section")
            if self.sections:
                raise GrammarSyntaxError(
                    "%alphabet must precede the grammar sections", number, head.column
                )
            self.alphabet = {}
            for token in tokens[1:]:
                name = self._terminal_name(token, number)
                self.alphabet[name] = terminal(name)
            return

        if head.text in ("%positive", "%negative"):
            name = head.text[1:]
            if len(tokens) > 1:
                raise GrammarSyntaxError(
                    f"unexpected text after {head.text}", number, tokens[1].column
                )
            if name in self.sections:
                raise GrammarSectionError(f"line {number}: duplicate {head.text} section")
            if self.alphabet is None:
                raise GrammarSyntaxError(
                    "%alphabet must precede the grammar sections", number, head.column
                )
            self.current = {"start": None, "productions": [], "line": number}
            self.sections[name] = self.current
            return

        # %start
        if self.current is None:
            raise GrammarSyntaxError("%start outside of a section", number, head.column)
        if self.current["start"] is not None:
            raise GrammarSectionError(f"line {number}: duplicate %start in section")
        if len(tokens) != 2 or tokens[1].quoted or not _NONTERMINAL_RE.match(tokens[1].text):
            column = tokens[1].column if len(tokens) > 1 else head.column
            raise GrammarSyntaxError("%start takes exactly one nonterminal", number, column)
        self.current["start"] = nonterminal(tokens[1].text)

    def _terminal_name(self, token: _Token, number: int) -> str:
        if token.quoted:
            return token.text[1:-1]
        if token.text == EPSILON or not _TERMINAL_RE.match(token.text):
            raise GrammarSyntaxError(
                f"invalid terminal {token.text}", number, token.column
            )
        return token.text

    def _production(self, tokens: List[_Token], number: int):
        if self.current is None:
            raise GrammarSyntaxError(
                "production outside of a section", number, tokens[0].column
            )
        if self.current["start"] is None:
            raise GrammarSyntaxError(
                "production before %start", number, tokens[0].column
            )
        arrows = [index for index, token in enumerate(tokens) if token.text == ARROW]
        if not arrows:
            raise GrammarSyntaxError(f"expected '{ARROW}'", number, tokens[0].column)
        if len(arrows) > 1:
            raise GrammarSyntaxError(
                f"more than one '{ARROW}'", number, tokens[arrows[1]].column
            )
        lhs_tokens = tokens[: arrows[0]]
        if not lhs_tokens:
            raise GrammarSyntaxError("empty left-hand side", number, tokens[0].column)
        lhs = tuple(self._symbol(token, number) for token in lhs_tokens)

        alternatives: List[List[_Token]] = [[]]
        for token in tokens[arrows[0] + 1:]:
            if token.text == ALTERNATION and not token.quoted:
                alternatives.append([])
            else:
                alternatives[-1].append(token)

        for alternative in alternatives:
            epsilons = [t for t in alternative if t.text == EPSILON and not t.quoted]
            if epsilons and len(alternative) > 1:
                raise GrammarSyntaxError(
                    f"'{EPSILON}' must appear alone", number, epsilons[0].column
                )
            rhs = tuple(
                self._symbol(token, number)
                for token in alternative
                if not epsilons
            )
            self.current["productions"].append(Production(lhs, rhs))

    def _symbol(self, token: _Token, number: int) -> SymbolId:
        text = token.text
        if token.quoted:
            name = text[1:-1]
            if name not in self.alphabet:
                raise GrammarUndeclaredSymbol(
                    f"undeclared symbol {name}", number, token.column
                )
            return self.alphabet[name]
        if text == EPSILON:
            raise GrammarSyntaxError(f"'{EPSILON}' is not allowed here", number, token.column)
        if _NONTERMINAL_RE.match(text):
            return nonterminal(text)
        if _TERMINAL_RE.match(text):
            if text not in self.alphabet:
                raise GrammarUndeclaredSymbol(
                    f"undeclared symbol {text}", number, token.column
                )
            return self.alphabet[text]
        raise GrammarSyntaxError(f"invalid symbol {text}", number, token.column)

    def _build(self, name: str, alphabet: FrozenSet[SymbolId]) -> Grammar:
        section = self.sections[name]
        if section["start"] is None:
            raise GrammarSectionError(
                f"line {section['line']}: missing %start in %{name} section"
            )
        nonterminals = {section["start"]}
        for production in section["productions"]:
            nonterminals.update(
                s for s in production.lhs + production.rhs if s.is_nonterminal
            )
        grammar = Grammar(alphabet, nonterminals, section["start"], section["productions"])
        violations = validate(grammar)
        if violations:
            raise GrammarValidationError([f"%{name}: {v}" for v in violations])
        return grammar


def parse_grammar_file(text: str) -> ProhibitionGrammar:
    """Parse grammar-with-prohibition file text.

    Args:
        text (str): File contents.

    Raises:
        GrammarSyntaxError: Tokenizing or production syntax error, with line and column
        GrammarUndeclaredSymbol: A production uses a terminal not in %alphabet
        GrammarSectionError: Missing %alphabet/%positive/%start or a duplicated section
        GrammarValidationError: The parsed grammars violate their invariants

    Returns:
        ProhibitionGrammar
    """
    return GrammarParser(text).parse()


def load_grammar_file(path) -> ProhibitionGrammar:
    """Read a UTF-8 grammar file from disk and parse it."""
    with open(path, encoding="utf-8") as handle:
        return parse_grammar_file(handle.read())


def serialize(pg: ProhibitionGrammar, header: Optional[str] = None) -> str:
    """Render a grammar with prohibition in the grammar file format.

    Args:
        pg (ProhibitionGrammar): Grammar to render.
        header (str, optional): Comment written on the first line.

    Returns:
        str: File text that parses back to a structurally equal grammar
    """
    sections = [
        {"name": "positive", "start": pg.positive.start.name, "lines": pg.positive.render_lines()},
        {"name": "negative", "start": pg.negative.start.name, "lines": pg.negative.render_lines()},
    ]
    return Utils.render_template(
        "grammar.pg.j2",
        template_vars={
            "header": header,
            "alphabet": [s.render() for s in sorted(pg.alphabet, key=symbol_key)],
            "sections": sections,
        },
    )


def is_right_linear(g: Grammar) -> bool:
    """True iff every production has the form A -> a B, A -> a or A -> eps."""
    for production in g.productions:
        if len(production.lhs) != 1 or not production.lhs[0].is_nonterminal:
            return False
        rhs = production.rhs
        if not rhs:
            continue
        if not rhs[0].is_terminal or len(rhs) > 2:
            return False
        if len(rhs) == 2 and not rhs[1].is_nonterminal:
            return False
    return True


def is_context_free(g: Grammar) -> bool:
    """True iff every left-hand side is a single nonterminal."""
    return all(
        len(p.lhs) == 1 and p.lhs[0].is_nonterminal for p in g.productions
    )


def is_noncontracting(g: Grammar) -> bool:
    """True iff |lhs| <= |rhs| everywhere, except S -> eps when S is on no right-hand side."""
    on_rhs = {s for p in g.productions for s in p.rhs}
    for production in g.productions:
        if len(production.lhs) <= len(production.rhs):
            continue
        if production.lhs == (g.start,) and not production.rhs and g.start not in on_rhs:
            continue
        return False
    return True


def classify(g: Grammar) -> ChomskyClass:
    """Return the most restrictive syntactic Chomsky class the grammar satisfies.

    Args:
        g (Grammar): A valid grammar.

    Returns:
        ChomskyClass
    """
    if is_right_linear(g):
        return ChomskyClass.TYPE3
    if is_context_free(g):
        return ChomskyClass.TYPE2
    if is_noncontracting(g):
        return ChomskyClass.TYPE1
    return ChomskyClass.TYPE0


def validate(g: Grammar) -> List[str]:
    """List every violated grammar invariant.

    Args:
        g (Grammar): Grammar to check.

    Returns:
        list: Violation descriptions, empty when the grammar is valid
    """
    violations = []
    for symbol in sorted(g.alphabet, key=symbol_key):
        if not symbol.is_terminal:
            violations.append(f"alphabet entry {symbol.name} is not a terminal")
    for symbol in sorted(g.nonterminals, key=symbol_key):
        if not symbol.is_nonterminal:
            violations.append(f"nonterminal entry {symbol.name} is a terminal")
    for name in sorted(g.terminal_names & g.nonterminal_names):
        violations.append(f"symbol {name} is both terminal and nonterminal")
    if g.start not in g.nonterminals or not g.start.is_nonterminal:
        violations.append(f"start symbol {g.start.name} is not a declared nonterminal")

    for index, production in enumerate(g.productions):
        if not production.lhs:
            violations.append(f"empty left-hand side in production {index}")
        elif not any(s.is_nonterminal for s in production.lhs):
            violations.append(f"no nonterminal on left-hand side of production {index}")
        seen = set()
        for symbol in production.lhs + production.rhs:
            if symbol in seen:
                continue
            seen.add(symbol)
            declared = symbol in (g.alphabet if symbol.is_terminal else g.nonterminals)
            if not declared:
                violations.append(f"undeclared symbol {symbol.name} in production {index}")
    return violations
