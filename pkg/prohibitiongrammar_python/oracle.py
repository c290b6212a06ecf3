"""
oracle.py - Enumeration oracle: language slices and verification of class relations on instances

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import xmltodict

from prohibitiongrammar_python.automata import (
    compile_regular,
    complement,
    dfa_member,
    dfa_to_regular_grammar,
    difference,
    equivalent,
)
from prohibitiongrammar_python.cfg import (
    CnfGrammar,
    cfg_is_empty,
    cfg_member,
    construct_cf_minus_regular,
)
from prohibitiongrammar_python.derivation import Budget, Verdict, VerdictValue
from prohibitiongrammar_python.grammar import (
    ChomskyClass,
    Grammar,
    GrammarAlphabetError,
    GrammarClassError,
    GrammarIndefiniteError,
    GrammarInvalidArgument,
    ProhibitionGrammar,
    check_word,
    classify,
    is_context_free,
    nonterminal,
    terminal,
)
from prohibitiongrammar_python.prohibition import (
    combine,
    component_verdict,
    member,
    pair_class,
)
from prohibitiongrammar_python.utils import Utils

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 8
DEFAULT_CF_DEPTH = 10

Word = Tuple[str, ...]
Membership = Callable[[Word], Union[Verdict, VerdictValue, bool]]


def length_lex_key(word: Sequence[str]):
    return (len(word), tuple(word))


def enumerate_words(alphabet: Iterable[str], n: int) -> List[Word]:
    """All words of length at most n, shortest first and lexicographic within a length.

    Args:
        alphabet (iterable): Terminal names
        n (int): Maximum word length

    Raises:
        GrammarInvalidArgument: n is negative, or the alphabet is empty while n > 0

    Returns:
        list: Words as tuples of terminal names
    """
    symbols = sorted(set(alphabet))
    if n < 0:
        raise GrammarInvalidArgument(f"Slice depth must be non-negative, got {n}")
    if not symbols and n > 0:
        raise GrammarInvalidArgument("Cannot enumerate words of positive length over an empty alphabet")
    words: List[Word] = []
    for length in range(n + 1):
        words.extend(itertools.product(symbols, repeat=length))
    return words


@dataclass(frozen=True)
class LanguageSlice:
    """The finite set L intersected with all words of length at most max_len."""

    alphabet: FrozenSet[str]
    max_len: int
    words: FrozenSet[Word]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "words", frozenset(tuple(w) for w in self.words))
        for word in self.words:
            if len(word) > self.max_len:
                raise GrammarInvalidArgument(
                    f"word {Utils.format_word(word)} is longer than {self.max_len}"
                )
            check_word(self.alphabet, word)

    def __contains__(self, word):
        return tuple(word) in self.words

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.sorted_words())

    def sorted_words(self) -> List[Word]:
        return sorted(self.words, key=length_lex_key)

    def _check_compatible(self, other: "LanguageSlice"):
        if self.alphabet != other.alphabet or self.max_len != other.max_len:
            raise GrammarAlphabetError("slices differ in alphabet or depth")

    def union(self, other: "LanguageSlice") -> "LanguageSlice":
        self._check_compatible(other)
        return LanguageSlice(self.alphabet, self.max_len, self.words | other.words)

    def intersection(self, other: "LanguageSlice") -> "LanguageSlice":
        self._check_compatible(other)
        return LanguageSlice(self.alphabet, self.max_len, self.words & other.words)

    def difference(self, other: "LanguageSlice") -> "LanguageSlice":
        self._check_compatible(other)
        return LanguageSlice(self.alphabet, self.max_len, self.words - other.words)

    def complement(self) -> "LanguageSlice":
        """Complement within all words of length at most max_len."""
        everything = enumerate_words(self.alphabet, self.max_len)
        return LanguageSlice(self.alphabet, self.max_len, set(everything) - self.words)

    def first_difference(self, other: "LanguageSlice") -> Optional[Word]:
        """Shortest, then lexicographically least, word in exactly one of the slices."""
        differing = self.words ^ other.words
        if not differing:
            return None
        return min(differing, key=length_lex_key)

    __or__ = union
    __and__ = intersection
    __sub__ = difference


def _definitive(outcome, word: Word) -> bool:
    if isinstance(outcome, bool):
        return outcome
    value = outcome.value if isinstance(outcome, Verdict) else outcome
    if value is VerdictValue.UNKNOWN:
        raise GrammarIndefiniteError(word)
    return value is VerdictValue.IN


def language_slice(membership: Membership, alphabet: Iterable[str], n: int) -> LanguageSlice:
    """Materialize the words of length at most n accepted by a membership function.

    Args:
        membership (callable): Maps a word to a bool, a Verdict or a VerdictValue
        alphabet (iterable): Terminal names
        n (int): Maximum word length

    Raises:
        GrammarIndefiniteError: The membership function answered Unknown; the error names the word

    Returns:
        LanguageSlice
    """
    alphabet = frozenset(alphabet)
    words = [word for word in enumerate_words(alphabet, n) if _definitive(membership(word), word)]
    return LanguageSlice(alphabet, n, words)


def grammar_slice(g: Grammar, n: int, budget: Optional[Budget] = None) -> LanguageSlice:
    """Slice of a single grammar, decided with its best component decider."""
    return language_slice(lambda w: component_verdict(g, w, budget), g.terminal_names, n)


def prohibition_slice(pg: ProhibitionGrammar, n: int, budget: Optional[Budget] = None) -> LanguageSlice:
    """Slice of L(positive) minus L(negative) from word-level membership."""
    return language_slice(lambda w: member(pg, w, budget), pg.terminal_names, n)


def cnf_derives(c: CnfGrammar, w: Iterable[str]) -> bool:
    """Decide w in L(c) by enumerating leftmost derivations.

    Normal-form rules never shrink a form, so forms longer than w and forms
    whose terminal prefix disagrees with w are discarded.
    """
    w = check_word(c.terminals, w)
    if not w:
        return c.accepts_epsilon
    target = tuple(terminal(symbol) for symbol in w)
    expansions = {}
    for lhs, first, second in c.binary_rules:
        expansions.setdefault(lhs, []).append((nonterminal(first), nonterminal(second)))
    for lhs, symbol in c.terminal_rules:
        expansions.setdefault(lhs, []).append((terminal(symbol),))

    start = (nonterminal(c.start),)
    seen = {start}
    stack = [start]
    while stack:
        form = stack.pop()
        if form == target:
            return True
        position = next((i for i, s in enumerate(form) if s.is_nonterminal), None)
        if position is None:
            continue
        for rhs in expansions.get(form[position].name, ()):
            successor = form[:position] + rhs + form[position + 1:]
            if len(successor) > len(target) or successor in seen:
                continue
            prefix = next((i for i, s in enumerate(successor) if s.is_nonterminal), len(successor))
            if successor[:prefix] != target[:prefix]:
                continue
            seen.add(successor)
            stack.append(successor)
    return False


def _require_decidable(g: Grammar, role: str):
    if classify(g) is ChomskyClass.TYPE0:
        raise GrammarClassError(f"class-signature mismatch: {role} must classify as Type1, Type2 or Type3")


def check_lemma_identities(
    gD: Grammar, gE: Grammar, n: int, budget: Optional[Budget] = None
) -> bool:
    """Check the set identities behind the enumerability arguments at slice level.

    With D decidable and E arbitrary, verifies that D minus E equals the
    complement of (complement of D union E), and that E minus D equals the
    pointwise combination of the two membership tests.

    Args:
        gD (Grammar): Grammar of class 1-3
        gE (Grammar): Any grammar whose slice is definitive at depth n under budget
        n (int): Slice depth
        budget (Budget, optional): Caps for an unrestricted gE

    Raises:
        GrammarClassError: gD is unrestricted
        GrammarAlphabetError: The grammars declare different alphabets
        GrammarIndefiniteError: gE membership is Unknown for some word

    Returns:
        bool
    """
    _require_decidable(gD, "gD")
    if gD.alphabet != gE.alphabet:
        raise GrammarAlphabetError("gD and gE must declare the same alphabet")
    d = grammar_slice(gD, n)
    e = grammar_slice(gE, n, budget)
    first = (d - e) == (d.complement() | e).complement()
    pointwise = language_slice(
        lambda w: combine(
            component_verdict(gE, w, budget).value, component_verdict(gD, w).value
        ),
        gD.terminal_names,
        n,
    )
    second = (e - d) == pointwise
    logger.debug("lemma identities at depth %d: %s, %s", n, first, second)
    return first and second


@dataclass(frozen=True)
class InstanceOutcome:
    """Result of one instance: consistent, or violated with a witness word."""

    label: str
    consistent: bool
    witness: Optional[Word] = None
    detail: str = ""

    def __post_init__(self):
        if not self.consistent and self.witness is None:
            raise GrammarInvalidArgument("a violated outcome needs a witness word")

    @property
    def status(self) -> str:
        return "consistent" if self.consistent else "violated"

    @property
    def witness_text(self) -> Optional[str]:
        return None if self.witness is None else Utils.format_word(self.witness)


@dataclass(frozen=True)
class RelationReport:
    """Outcome of checking one claim over a set of instances."""

    claim: str
    max_len: int
    outcomes: Tuple[InstanceOutcome, ...]

    @property
    def consistent(self) -> bool:
        return all(outcome.consistent for outcome in self.outcomes)

    @property
    def status(self) -> str:
        return "consistent" if self.consistent else "violated"

    def render(self) -> str:
        """Text report: claim, depth, instance count, outcome, then one line per instance."""
        return Utils.render_template("report.txt.j2", template_vars={"report": self})

    def to_xml(self) -> str:
        document = {
            "RelationReport": {
                "Claim": self.claim,
                "MaxLen": str(self.max_len),
                "Instances": str(len(self.outcomes)),
                "Outcome": self.status,
                "Instance": [
                    {
                        "@label": outcome.label,
                        "Outcome": outcome.status,
                        **({"Witness": outcome.witness_text} if outcome.witness is not None else {}),
                        **({"Detail": outcome.detail} if outcome.detail else {}),
                    }
                    for outcome in self.outcomes
                ],
            }
        }
        return xmltodict.unparse(document, pretty=True)


def _outcome(label: str, expected: LanguageSlice, actual: LanguageSlice, detail: str) -> InstanceOutcome:
    witness = expected.first_difference(actual)
    if witness is None:
        return InstanceOutcome(label, True)
    return InstanceOutcome(label, False, witness, detail)


def _check_regular_difference(label, pg, n, budget):
    positive, negative = compile_regular(pg.positive), compile_regular(pg.negative)
    automaton = difference(positive, negative)
    delivered = dfa_to_regular_grammar(automaton)
    if classify(delivered) is not ChomskyClass.TYPE3:
        return InstanceOutcome(label, False, (), f"delivered grammar classifies as {classify(delivered)}")
    expected = prohibition_slice(pg, n, budget)
    outcome = _outcome(label, expected, grammar_slice(delivered, n), "constructed grammar slice differs")
    if not outcome.consistent:
        return outcome
    check = equivalent(compile_regular(delivered), automaton)
    if not check:
        return InstanceOutcome(label, False, check.counterexample, "automaton equivalence failed")
    return outcome


def _check_cf_minus_regular(label, pg, n, budget):
    constructed = construct_cf_minus_regular(pg.positive, pg.negative)
    if classify(constructed) not in (ChomskyClass.TYPE2, ChomskyClass.TYPE3):
        return InstanceOutcome(label, False, (), f"delivered grammar classifies as {classify(constructed)}")
    expected = grammar_slice(pg.positive, n) - grammar_slice(pg.negative, n)
    return _outcome(label, expected, grammar_slice(constructed, n), "constructed grammar slice differs")


def _check_cs_difference(label, pg, n, budget):
    words = enumerate_words(pg.terminal_names, n)
    for word in words:
        if not member(pg, word, budget).is_definitive:
            return InstanceOutcome(label, False, word, "word-level decider returned unknown")
    expected = grammar_slice(pg.positive, n) - grammar_slice(pg.negative, n)
    return _outcome(label, expected, prohibition_slice(pg, n, budget), "word-level decider disagrees")


def _check_complement_identity(label, pg, n, budget):
    alphabet = pg.terminal_names
    regular = compile_regular(pg.positive)
    complement_slice = language_slice(
        lambda w: dfa_member(complement(regular), w), alphabet, n
    )
    context_free = language_slice(lambda w: cfg_member(pg.negative, w), alphabet, n)
    expected = (complement_slice | context_free).complement()
    return _outcome(label, expected, prohibition_slice(pg, n, budget), "complement identity fails")


def _check_empty_negative(label, pg, n, budget):
    for word in enumerate_words(pg.terminal_names, n):
        combined = member(pg, word, budget).value
        alone = component_verdict(pg.positive, word, budget).value
        if combined is not alone:
            return InstanceOutcome(label, False, word, f"{combined} with prohibition, {alone} without")
    return InstanceOutcome(label, True)


def _negative_is_empty(g: Grammar) -> bool:
    return not g.productions or (is_context_free(g) and cfg_is_empty(g))


def _signature_regular_difference(pg):
    return pair_class(pg) == (ChomskyClass.TYPE3, ChomskyClass.TYPE3)


def _signature_cf_minus_regular(pg):
    pc = pair_class(pg)
    return pc.i in (ChomskyClass.TYPE2, ChomskyClass.TYPE3) and pc.j is ChomskyClass.TYPE3


def _signature_cs_difference(pg):
    pc = pair_class(pg)
    return ChomskyClass.TYPE0 not in (pc.i, pc.j)


def _signature_complement_identity(pg):
    pc = pair_class(pg)
    return pc.i is ChomskyClass.TYPE3 and pc.j in (ChomskyClass.TYPE2, ChomskyClass.TYPE3)


@dataclass(frozen=True)
class Claim:
    name: str
    description: str
    signature: Callable[[ProhibitionGrammar], bool]
    expectation: str
    check: Callable
    depth: int = DEFAULT_DEPTH


CLAIMS = {
    claim.name: claim
    for claim in (
        Claim(
            "empty-negative",
            "an empty prohibition leaves the positive language unchanged",
            lambda pg: _negative_is_empty(pg.negative),
            "negative language empty",
            _check_empty_negative,
        ),
        Claim(
            "regular-difference",
            "regular minus regular is delivered as a right-linear grammar",
            _signature_regular_difference,
            "pair class 33",
            _check_regular_difference,
        ),
        Claim(
            "cs-difference",
            "word-level difference of decidable components is total and exact",
            _signature_cs_difference,
            "both components of class 1, 2 or 3",
            _check_cs_difference,
        ),
        Claim(
            "cf-minus-regular",
            "context-free minus regular is delivered as a context-free grammar",
            _signature_cf_minus_regular,
            "positive of class 2 or 3, negative of class 3",
            _check_cf_minus_regular,
            DEFAULT_CF_DEPTH,
        ),
        Claim(
            "complement-identity",
            "regular minus context-free equals the complement of (complement union context-free)",
            _signature_complement_identity,
            "positive of class 3, negative of class 2 or 3",
            _check_complement_identity,
        ),
    )
}


def verify_relation(
    claim: str,
    instances: Iterable[Union[ProhibitionGrammar, Tuple[str, ProhibitionGrammar]]],
    n: Optional[int] = None,
    budget: Optional[Budget] = None,
) -> RelationReport:
    """Check a constructive claim on concrete instances at slice level.

    Args:
        claim (str): One of the keys of CLAIMS
        instances (iterable): Grammars with prohibition, or (label, grammar) pairs
        n (int, optional): Slice depth. Defaults to the claim's own depth.
        budget (Budget, optional): Caps for unrestricted components

    Raises:
        GrammarInvalidArgument: Unsupported claim id
        GrammarClassError: An instance does not match the claim's class signature

    Returns:
        RelationReport
    """
    if claim not in CLAIMS:
        raise GrammarInvalidArgument(
            f"Unsupported claim {claim}. Supported claims: {', '.join(CLAIMS)}"
        )
    entry = CLAIMS[claim]
    depth = entry.depth if n is None else n
    outcomes = []
    for index, instance in enumerate(instances):
        label, pg = instance if isinstance(instance, tuple) else (f"instance {index}", instance)
        if not entry.signature(pg):
            raise GrammarClassError(
                f"class-signature mismatch: claim {claim} expects {entry.expectation}, "
                f"{label} has pair class {pair_class(pg)}"
            )
        outcome = entry.check(label, pg, depth, budget)
        logger.debug("claim %s, %s: %s", claim, label, outcome.status)
        outcomes.append(outcome)
    return RelationReport(claim, depth, tuple(outcomes))
