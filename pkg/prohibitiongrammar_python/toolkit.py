"""
toolkit.py - Facade for working with one grammar with prohibition

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import os

from prohibitiongrammar_python.automata import (
    compile_regular,
    dfa_to_regular_grammar,
    difference,
)
from prohibitiongrammar_python.cfg import construct_cf_minus_regular
from prohibitiongrammar_python.derivation import Budget, Verdict
from prohibitiongrammar_python.grammar import (
    ChomskyClass,
    GrammarConstructionError,
    GrammarInvalidArgument,
    ProhibitionGrammar,
    load_grammar_file,
    parse_grammar_file,
    serialize,
)
from prohibitiongrammar_python.oracle import (
    DEFAULT_DEPTH,
    LanguageSlice,
    RelationReport,
    prohibition_slice,
    verify_relation,
)
from prohibitiongrammar_python.prohibition import (
    decidability_status,
    language_class,
    member,
    pair_class,
)
from prohibitiongrammar_python.utils import Utils

DEMO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "demos")


class ProhibitionToolkit:
    """Class used for working with a grammar with prohibition"""

    def __init__(self, grammar: ProhibitionGrammar, budget: Budget = None, max_len: int = DEFAULT_DEPTH):
        if max_len < 0:
            raise GrammarInvalidArgument(f"max_len must be non-negative, got {max_len}")
        self.grammar = grammar
        self.budget = budget
        self.max_len = max_len

    @classmethod
    def from_file(cls, path: str, **kwargs):
        """Load a grammar file.

        Args:
            path (str): Path to a UTF-8 grammar file
            **kwargs: Passed through to the constructor (budget, max_len)
        """
        return cls(load_grammar_file(path), **kwargs)

    @classmethod
    def from_text(cls, text: str, **kwargs):
        """Parse grammar file contents.

        Args:
            text (str): Grammar file contents
            **kwargs: Passed through to the constructor (budget, max_len)
        """
        return cls(parse_grammar_file(text), **kwargs)

    @classmethod
    def demo(cls, name: str, **kwargs):
        """Load one of the bundled demo grammars by file name, e.g. ``irregular_verbs.pg``."""
        return cls.from_file(os.path.join(DEMO_DIR, name), **kwargs)

    @property
    def pair_class(self):
        return pair_class(self.grammar)

    def classify(self) -> dict:
        """Classify both components.

        Returns:
            dict: positive and negative class, pair label, decidability status and language class
        """
        pc = self.pair_class
        return {
            "positive": str(pc.i),
            "negative": str(pc.j),
            "pair": pc.label,
            "status": str(decidability_status(pc)),
            "language": language_class(pc),
        }

    def member(self, word, budget: Budget = None, trace: bool = False, debug: bool = False) -> Verdict:
        """Decide membership of a word.

        Args:
            word (str or sequence): Terminal names, or a space-separated string (``eps`` or "" for the empty word)
            budget (Budget, optional): Override the toolkit budget for this call
            trace (bool, optional): Request a derivation trace for In verdicts. Defaults to False.
            debug (bool, optional): Enable debug mode to display the verdict and trace. Defaults to False.

        Returns:
            Verdict
        """
        if isinstance(word, str):
            word = Utils.tokenize_word(word)
        verdict = member(self.grammar, word, budget or self.budget, trace)
        if debug:
            print(f"VERDICT: {verdict}")
            for line in verdict.trace_lines():
                print(f"  {line}")
        return verdict

    def construct(self, debug: bool = False) -> ProhibitionGrammar:
        """Deliver the language of the grammar as a conventional grammar (with an empty prohibition).

        Regular minus regular yields a right-linear grammar through the product
        automaton; context-free minus regular yields a context-free grammar
        through the product with the complemented automaton.

        Args:
            debug (bool, optional): Enable debug mode to display the constructed grammar. Defaults to False.

        Raises:
            GrammarConstructionError: No construction exists for the pair class

        Returns:
            ProhibitionGrammar
        """
        pc = self.pair_class
        positive, negative = self.grammar.positive, self.grammar.negative
        if pc == (ChomskyClass.TYPE3, ChomskyClass.TYPE3):
            result = dfa_to_regular_grammar(
                difference(compile_regular(positive), compile_regular(negative))
            )
        elif pc.i in (ChomskyClass.TYPE2, ChomskyClass.TYPE3) and pc.j is ChomskyClass.TYPE3:
            result = construct_cf_minus_regular(positive, negative)
        else:
            raise GrammarConstructionError(
                f"unsupported construct pair {pc.label}: constructions exist for 33 and 23 only"
            )
        constructed = ProhibitionGrammar.without_prohibition(result)
        if debug:
            print(f"GRAMMAR: {serialize(constructed)}")
        return constructed

    def sample(self, max_len: int = None, budget: Budget = None) -> LanguageSlice:
        """Language slice up to max_len (toolkit default when omitted).

        Raises:
            GrammarIndefiniteError: Some word got an Unknown verdict
        """
        depth = self.max_len if max_len is None else max_len
        return prohibition_slice(self.grammar, depth, budget or self.budget)

    def verify(self, claim: str, max_len: int = None, budget: Budget = None) -> RelationReport:
        """Verify a constructive claim on this grammar.

        Args:
            claim (str): Claim id, see ``oracle.CLAIMS``
            max_len (int, optional): Slice depth. Defaults to the claim's own depth.
            budget (Budget, optional): Caps for unrestricted components

        Returns:
            RelationReport
        """
        return verify_relation(claim, [("grammar", self.grammar)], max_len, budget or self.budget)

    def serialize(self, header: str = None) -> str:
        return serialize(self.grammar, header)
