"""Unit tests for the grammar-with-prohibition toolkit

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import io
import os
import tempfile
import unittest
from unittest.mock import patch

import xmltodict

from prohibitiongrammar_python import automata, cli, derivation, oracle, prohibition
from prohibitiongrammar_python.automata import (
    Dfa,
    Nfa,
    compile_regular,
    complement,
    determinize,
    dfa_member,
    dfa_to_regular_grammar,
    difference,
    equivalent,
    export_dfa,
    intersect,
    minimize,
    parse_dfa_listing,
    regular_to_nfa,
    union,
)
from prohibitiongrammar_python.cfg import (
    cfg_intersect_dfa,
    cfg_is_empty,
    cfg_member,
    cnf_to_grammar,
    construct_cf_minus_regular,
    cyk_member,
    to_cnf,
)
from prohibitiongrammar_python.derivation import (
    Budget,
    Verdict,
    VerdictValue,
    cs_member,
    cs_verdict,
    replay,
    t0_member,
)
from prohibitiongrammar_python.grammar import (
    ChomskyClass,
    Grammar,
    GrammarAlphabetError,
    GrammarClassError,
    GrammarConstructionError,
    GrammarIndefiniteError,
    GrammarInvalidArgument,
    GrammarSectionError,
    GrammarSyntaxError,
    GrammarUndeclaredSymbol,
    GrammarUnknownRelation,
    GrammarValidationError,
    Production,
    ProhibitionGrammar,
    classify,
    nonterminal,
    parse_grammar_file,
    serialize,
    terminal,
    validate,
)
from prohibitiongrammar_python.oracle import (
    LanguageSlice,
    check_lemma_identities,
    cnf_derives,
    enumerate_words,
    grammar_slice,
    language_slice,
    prohibition_slice,
    verify_relation,
)
from prohibitiongrammar_python.prohibition import (
    DecidabilityStatus,
    PairClass,
    combine,
    decidability_status,
    language_class,
    member,
    pair_class,
    relation_matrix,
)
from prohibitiongrammar_python.toolkit import DEMO_DIR, ProhibitionToolkit
from prohibitiongrammar_python.utils import GrammarFormatError, Utils

IN, NOT_IN, UNKNOWN = VerdictValue.IN, VerdictValue.NOT_IN, VerdictValue.UNKNOWN

AB = ["a", "b"]


def words(*texts):
    """Words from space-separated strings, "" for the empty word."""
    return {tuple(text.split()) for text in texts}


def a_star(alphabet=("a",)):
    return Grammar.build(alphabet, "S", ["S -> a S | eps"])


def even_a(alphabet=("a",)):
    return Grammar.build(alphabet, "T", ["T -> a U | eps", "U -> a T"])


def anbn():
    return Grammar.build(AB, "S", ["S -> a S b | eps"])


def only_ab():
    return Grammar.build(AB, "T", ["T -> a U", "U -> b"])


def anbncn():
    """Noncontracting grammar for a^n b^n c^n, n >= 1."""
    return Grammar.build(
        ["a", "b", "c"],
        "S",
        [
            "S -> a S B C | a B C",
            "C B -> B C",
            "a B -> a b",
            "b B -> b b",
            "b C -> b c",
            "c C -> c c",
        ],
    )


SIMPLE_FILE = "%alphabet a\n%positive\n%start S\nS -> a S | eps\n"


class TestUtils(unittest.TestCase):
    """Tests for Utils helpers"""

    def test_tokenize_word(self):
        """Test tokenize_word() method"""
        assert Utils.tokenize_word("a a b") == ("a", "a", "b")
        assert Utils.tokenize_word('"wear" ed') == ("wear", "ed")
        assert Utils.tokenize_word("") == ()
        assert Utils.tokenize_word("eps") == ()
        self.assertRaises(GrammarFormatError, Utils.tokenize_word, "a eps")

    def test_format_word(self):
        """Test format_word() method"""
        assert Utils.format_word(("wear", "ed")) == "wear ed"
        assert Utils.format_word(()) == "eps"

    def test_parse_budget(self):
        """Test parse_budget() method"""
        assert Utils.parse_budget("50,10") == (50, 10)
        self.assertRaises(GrammarFormatError, Utils.parse_budget, "50")
        self.assertRaises(GrammarFormatError, Utils.parse_budget, "x,y")

    def test_ensure_list(self):
        """Test ensure_list() method"""
        assert Utils.ensure_list({"a": 1}) == [{"a": 1}]
        assert Utils.ensure_list([1, 2]) == [1, 2]
        assert Utils.ensure_list(None) == []


class TestGrammarParser(unittest.TestCase):
    """Tests for grammar file parsing"""

    def test_minimal_file(self):
        """Test parse_grammar_file() without a negative section"""
        pg = parse_grammar_file(SIMPLE_FILE)
        S, a = nonterminal("S"), terminal("a")
        assert pg.positive.alphabet == {a}
        assert pg.positive.nonterminals == {S}
        assert pg.positive.start == S
        assert pg.positive.productions == (Production((S,), (a, S)), Production((S,), ()))
        assert pg.negative.productions == ()

    def test_negative_section(self):
        """Test parse_grammar_file() with a finite negative section"""
        pg = parse_grammar_file(SIMPLE_FILE + "%negative\n%start T\nT -> a a\n")
        T, a = nonterminal("T"), terminal("a")
        assert pg.negative.productions == (Production((T,), (a, a)),)
        assert grammar_slice(pg.negative, 4).words == words("a a")

    def test_quoted_terminals(self):
        """Test multi-character quoted terminals in the demo file"""
        pg = ProhibitionToolkit.demo("irregular_verbs.pg").grammar
        assert {"wear", "ed", "adopt", "wore", "kept"} <= pg.terminal_names
        assert classify(pg.positive) is ChomskyClass.TYPE3

    def test_comments_and_empty_alternative(self):
        """Test comments and an empty alternative standing for eps"""
        pg = parse_grammar_file(
            "# leading comment\n%alphabet a # trailing\n%positive\n%start S\nS -> a S |\n"
        )
        assert Production((nonterminal("S"),), ()) in pg.positive.productions

    def test_syntax_error_position(self):
        """Test syntax errors carry line and column"""
        with self.assertRaises(GrammarSyntaxError) as context:
            parse_grammar_file("%alphabet a\n%positive\n%start S\nS a S\n")
        assert context.exception.line == 4
        assert context.exception.column == 1

    def test_eps_must_be_alone(self):
        """Test eps mixed with other symbols"""
        self.assertRaises(
            GrammarSyntaxError, parse_grammar_file, "%alphabet a\n%positive\n%start S\nS -> a eps\n"
        )

    def test_undeclared_symbol(self):
        """Test a terminal missing from %alphabet"""
        with self.assertRaises(GrammarUndeclaredSymbol) as context:
            parse_grammar_file("%alphabet a\n%positive\n%start S\nS -> c\n")
        assert "undeclared symbol c" in str(context.exception)

    def test_missing_positive(self):
        """Test a file without a %positive section"""
        self.assertRaises(GrammarSectionError, parse_grammar_file, "%alphabet a\n")

    def test_duplicate_section(self):
        """Test a duplicated section"""
        self.assertRaises(
            GrammarSectionError,
            parse_grammar_file,
            SIMPLE_FILE + "%positive\n%start S\nS -> a\n",
        )

    def test_shared_nonterminal_names(self):
        """Test positive and negative sections may reuse nonterminal names"""
        pg = parse_grammar_file(SIMPLE_FILE + "%negative\n%start S\nS -> a\n")
        assert member(pg, ("a",)).value is NOT_IN
        assert member(pg, ("a", "a")).value is IN

    def test_round_trip(self):
        """Test serialize() output parses back to an equal grammar"""
        for name in os.listdir(DEMO_DIR):
            pg = ProhibitionToolkit.demo(name).grammar
            assert parse_grammar_file(serialize(pg, header=name)) == pg

    def test_as_unrestricted(self):
        """Test as_unrestricted() keeps the language and lowers the class"""
        g = a_star()
        wrapped = g.as_unrestricted()
        assert classify(wrapped) is ChomskyClass.TYPE0
        assert grammar_slice(wrapped, 4).words == grammar_slice(g, 4).words


class TestClassify(unittest.TestCase):
    """Tests for classify() and validate()"""

    def test_right_linear(self):
        """Test a right-linear grammar"""
        g = Grammar.build(["a"], "S", ["S -> a S | a"])
        assert classify(g) is ChomskyClass.TYPE3
        assert str(classify(g)) == "Type3"

    def test_context_free(self):
        """Test a context-free grammar whose start symbol recurs"""
        assert classify(anbn()) is ChomskyClass.TYPE2

    def test_left_linear_is_context_free(self):
        """Test a left-linear grammar classifies as Type2"""
        g = Grammar.build(["a"], "S", ["S -> S a | a"])
        assert classify(g) is ChomskyClass.TYPE2

    def test_noncontracting(self):
        """Test a noncontracting grammar"""
        g = Grammar.build(["a"], "S", ["A B -> B A", "S -> A B"])
        assert classify(g) is ChomskyClass.TYPE1
        assert classify(anbncn()) is ChomskyClass.TYPE1

    def test_start_epsilon_exception(self):
        """Test S -> eps is allowed in a noncontracting grammar when S is on no right-hand side"""
        g = Grammar.build(["a"], "S", ["S -> A B | eps", "A B -> B A", "A -> a", "B -> a"])
        assert classify(g) is ChomskyClass.TYPE1
        g = Grammar.build(["a"], "S", ["S -> A S | eps", "A B -> B A"])
        assert classify(g) is ChomskyClass.TYPE0

    def test_unrestricted(self):
        """Test a contracting non-context-free grammar"""
        g = Grammar.build(["a"], "S", ["S -> A a", "A a -> a"])
        assert classify(g) is ChomskyClass.TYPE0

    def test_removal_monotone(self):
        """Test deleting productions never moves a grammar to Type0"""
        for g in (anbn(), a_star(), anbncn()):
            before = classify(g)
            for index in range(len(g.productions)):
                smaller = Grammar(
                    g.alphabet,
                    g.nonterminals,
                    g.start,
                    g.productions[:index] + g.productions[index + 1:],
                )
                after = classify(smaller)
                assert before is ChomskyClass.TYPE0 or after is not ChomskyClass.TYPE0

    def test_validate(self):
        """Test validate() method"""
        S, a, c = nonterminal("S"), terminal("a"), terminal("c")
        assert validate(a_star()) == []
        g = Grammar({a}, {S}, S, [Production((S,), (c,))])
        assert validate(g) == ["undeclared symbol c in production 0"]
        g = Grammar({a}, {S}, S, [Production((a,), (a,))])
        assert len(validate(g)) == 1
        g = Grammar({a}, {S}, nonterminal("X"), [])
        assert validate(g) == ["start symbol X is not a declared nonterminal"]

    def test_validation_error(self):
        """Test GrammarValidationError lists the violations"""
        error = GrammarValidationError(["one", "two"])
        assert error.violations == ["one", "two"]
        assert str(error) == "one; two"


class TestAutomata(unittest.TestCase):
    """Tests for the automata module"""

    def setUp(self):
        """Test setup"""
        self.a_star = compile_regular(a_star())
        self.even = compile_regular(even_a())
        self.a_plus = compile_regular(Grammar.build(["a"], "S", ["S -> a S | a"]))

    def test_regular_to_nfa(self):
        """Test regular_to_nfa() method"""
        nfa = regular_to_nfa(Grammar.build(AB, "S", ["S -> a T", "T -> b"]))
        assert nfa.accepts(("a", "b"))
        assert not nfa.accepts(("a",))
        assert regular_to_nfa(Grammar.build(["a"], "S", ["S -> eps"])).accepts(())
        self.assertRaises(GrammarClassError, regular_to_nfa, anbn())

    def test_determinize_sink(self):
        """Test determinize() materializes a sink state"""
        dfa = determinize(regular_to_nfa(Grammar.build(AB, "S", ["S -> a S | a"])))
        assert len(dfa.states) == 3
        assert language_slice(lambda w: dfa_member(dfa, w), AB, 8).words == {
            ("a",) * n for n in range(1, 9)
        }

    def test_determinize_epsilon_moves(self):
        """Test determinize() follows epsilon moves"""
        nfa = Nfa({0, 1, 2}, {"a"}, {(0, None, 1), (0, "a", 2)}, 0, {1, 2})
        dfa = determinize(nfa)
        assert language_slice(lambda w: dfa_member(dfa, w), ["a"], 4).words == words("", "a")

    def test_nfa_rejects_undeclared_state(self):
        """Test Nfa invariant on transitions"""
        self.assertRaises(GrammarInvalidArgument, Nfa, {0}, {"a"}, {(0, "a", 1)}, 0, set())

    def test_dfa_must_be_total(self):
        """Test Dfa invariant on the transition function"""
        self.assertRaises(GrammarInvalidArgument, Dfa, {0, 1}, {"a"}, {(0, "a"): 1}, 0, set())

    def test_difference(self):
        """Test difference() of a* and (aa)*"""
        odd = difference(self.a_star, self.even)
        expected = {("a",) * n for n in range(10) if n % 2}
        assert language_slice(lambda w: dfa_member(odd, w), ["a"], 9).words == expected
        assert equivalent(difference(self.a_star, Dfa.empty({"a"})), self.a_star)
        assert equivalent(difference(self.a_star, self.a_star), Dfa.empty({"a"}))

    def test_boolean_operations(self):
        """Test intersect(), union() and complement()"""
        assert equivalent(intersect(self.a_star, self.even), self.even)
        assert equivalent(union(self.a_plus, self.even), self.a_star)
        assert equivalent(complement(complement(self.even)), self.even)
        assert equivalent(complement(self.a_star), Dfa.empty({"a"}))

    def test_alphabet_mismatch(self):
        """Test alphabet mismatch is rejected"""
        other = compile_regular(a_star(AB))
        self.assertRaises(GrammarAlphabetError, difference, self.a_star, other)
        self.assertRaises(GrammarAlphabetError, equivalent, self.a_star, other)

    def test_minimize(self):
        """Test minimize() merges equivalent states and drops unreachable ones"""
        cycle = Dfa({0, 1, 2}, {"a"}, {(0, "a"): 1, (1, "a"): 2, (2, "a"): 0}, 0, {0, 1, 2})
        smallest = minimize(cycle)
        assert len(smallest.states) == 1
        assert smallest.accepting == {0}
        unreachable = Dfa({0, 1}, {"a"}, {(0, "a"): 0, (1, "a"): 1}, 0, {1})
        assert minimize(unreachable).states == {0}
        assert minimize(unreachable).accepting == set()
        assert minimize(self.even) == self.even

    def test_equivalent_counterexample(self):
        """Test equivalent() reports the shortest counterexample"""
        result = equivalent(self.a_star, self.a_plus)
        assert not result
        assert result.counterexample == ()
        result = equivalent(self.a_star, self.even)
        assert result.counterexample == ("a",)
        assert equivalent(self.a_star, minimize(self.a_star)).equal

    def test_equivalent_to_nfa_view(self):
        """Test a DFA is equivalent to the determinized NFA view of itself"""
        for dfa in (self.a_star, self.even, self.a_plus):
            assert equivalent(dfa, determinize(Nfa.from_dfa(dfa)))

    def test_dfa_to_regular_grammar(self):
        """Test dfa_to_regular_grammar() method"""
        g = dfa_to_regular_grammar(compile_regular(only_ab()))
        assert classify(g) is ChomskyClass.TYPE3
        assert g.render_lines() == ["S -> a Q1", "Q1 -> b"]
        assert grammar_slice(g, 4).words == words("a b")

    def test_dfa_to_regular_grammar_edge_cases(self):
        """Test empty and epsilon-only languages"""
        assert dfa_to_regular_grammar(Dfa.empty({"a"})).productions == ()
        eps_only = compile_regular(Grammar.build(["a"], "S", ["S -> eps"]))
        g = dfa_to_regular_grammar(eps_only)
        assert g.productions == (Production((nonterminal("S"),), ()),)

    def test_dfa_member(self):
        """Test dfa_member() method"""
        assert dfa_member(self.a_star, ())
        assert dfa_member(difference(self.a_star, self.even), ("a", "a", "a"))
        self.assertRaises(GrammarAlphabetError, dfa_member, self.a_star, ("b",))

    def test_export_dfa(self):
        """Test export_dfa() listing"""
        assert export_dfa(self.even) == "0\n0\n0 a 1\n1 a 0\n"
        assert equivalent(parse_dfa_listing(export_dfa(self.even)), self.even)

    @patch.object(automata, "minimize", wraps=automata.minimize)
    def test_compile_regular_cached(self, mocked_minimize):
        """Test compile_regular() caches per grammar"""
        automata.compile_regular.cache_clear()
        g = Grammar.build(["a"], "S", ["S -> a T | a", "T -> a S"])
        first = compile_regular(g)
        second = compile_regular(g)
        assert first is second
        assert mocked_minimize.call_count == 1


class TestCfg(unittest.TestCase):
    """Tests for the cfg module"""

    def test_to_cnf(self):
        """Test to_cnf() on a^n b^n"""
        cnf = to_cnf(anbn())
        assert cnf.accepts_epsilon
        for lhs, first, second in cnf.binary_rules:
            assert cnf.start not in (first, second)
        expected = {("a",) * n + ("b",) * n for n in range(6)}
        assert language_slice(lambda w: cyk_member(cnf, w), AB, 10).words == expected

    def test_to_cnf_single_terminal(self):
        """Test to_cnf() on S -> a"""
        cnf = to_cnf(Grammar.build(["a"], "S", ["S -> a"]))
        assert not cnf.accepts_epsilon
        assert cnf.binary_rules == frozenset()
        assert cnf.terminal_rules == {(cnf.start, "a")}

    def test_to_cnf_drops_useless(self):
        """Test unreachable and non-generating nonterminals disappear"""
        g = Grammar.build(AB, "S", ["S -> a", "U -> b", "L -> a L"])
        cnf = to_cnf(g)
        assert "U" not in cnf.nonterminals
        assert "L" not in cnf.nonterminals

    def test_to_cnf_rejects_non_context_free(self):
        """Test to_cnf() precondition"""
        self.assertRaises(GrammarClassError, to_cnf, anbncn())

    def test_cyk_member(self):
        """Test cyk_member() method"""
        cnf = to_cnf(anbn())
        assert cyk_member(cnf, ("a", "a", "b", "b"))
        assert not cyk_member(cnf, ("b", "a"))
        assert cyk_member(cnf, ())
        self.assertRaises(GrammarAlphabetError, cyk_member, cnf, ("c",))

    def test_cyk_matches_brute_force(self):
        """Test CYK against leftmost derivation enumeration"""
        g = Grammar.build(AB, "S", ["S -> a S b S | b S a S | eps"])
        cnf = to_cnf(g)
        for word in enumerate_words(AB, 6):
            assert cyk_member(cnf, word) == cnf_derives(cnf, word)
            assert cyk_member(cnf, word) == (word.count("a") == word.count("b"))

    def test_cfg_intersect_dfa(self):
        """Test cfg_intersect_dfa() with even length, empty and universal automata"""
        cnf = to_cnf(anbn())
        even_length = compile_regular(Grammar.build(AB, "E", ["E -> a O | b O | eps", "O -> a E | b E"]))
        product = cfg_intersect_dfa(cnf, even_length)
        assert classify(product) in (ChomskyClass.TYPE2, ChomskyClass.TYPE3)
        assert grammar_slice(product, 10).words == grammar_slice(anbn(), 10).words
        assert cfg_is_empty(cfg_intersect_dfa(cnf, Dfa.empty(set(AB))))
        universal = cfg_intersect_dfa(cnf, Dfa.universal(set(AB)))
        assert grammar_slice(universal, 8).words == grammar_slice(anbn(), 8).words

    def test_cfg_intersect_dfa_alphabet_mismatch(self):
        """Test cfg_intersect_dfa() rejects different alphabets"""
        self.assertRaises(
            GrammarAlphabetError, cfg_intersect_dfa, to_cnf(anbn()), Dfa.universal({"a"})
        )

    def test_construct_cf_minus_regular(self):
        """Test construct_cf_minus_regular() method"""
        result = construct_cf_minus_regular(anbn(), only_ab())
        assert classify(result) is ChomskyClass.TYPE2
        expected = {("a",) * n + ("b",) * n for n in range(6) if n != 1}
        assert grammar_slice(result, 10).words == expected
        empty = Grammar.empty({terminal("a"), terminal("b")}, "T")
        assert grammar_slice(construct_cf_minus_regular(anbn(), empty), 8).words == (
            grammar_slice(anbn(), 8).words
        )
        everything = Grammar.build(AB, "T", ["T -> a T | b T | eps"])
        assert cfg_is_empty(construct_cf_minus_regular(anbn(), everything))

    def test_construct_cf_minus_regular_preconditions(self):
        """Test class checks of construct_cf_minus_regular()"""
        self.assertRaises(GrammarClassError, construct_cf_minus_regular, anbn(), anbn())

    def test_cfg_is_empty(self):
        """Test cfg_is_empty() method"""
        assert cfg_is_empty(Grammar.build(["a"], "S", ["S -> a S"]))
        assert not cfg_is_empty(Grammar.build(["a"], "S", ["S -> a"]))
        g = a_star()
        assert cfg_is_empty(construct_cf_minus_regular(g, g))

    def test_cnf_to_grammar(self):
        """Test cnf_to_grammar() keeps the language"""
        g = cnf_to_grammar(to_cnf(anbn()))
        assert classify(g) is ChomskyClass.TYPE2
        assert grammar_slice(g, 8).words == grammar_slice(anbn(), 8).words
        assert cfg_member(g, ("a", "b"))


class TestDerivation(unittest.TestCase):
    """Tests for the derivation module"""

    def test_budget(self):
        """Test Budget invariants and defaults"""
        self.assertRaises(GrammarInvalidArgument, Budget, 0, 5)
        self.assertRaises(GrammarInvalidArgument, Budget, 5, -1)
        assert Budget.default_for(("a", "b")) == Budget(10000, 8)
        assert Budget(3, 4).doubled() == Budget(6, 8)
        assert Budget(3, 4) <= Budget(3, 5)

    def test_verdict_evidence_only_when_in(self):
        """Test Verdict evidence invariant"""
        self.assertRaises(GrammarInvalidArgument, Verdict, NOT_IN, ((nonterminal("S"),),))
        assert VerdictValue.UNKNOWN.exit_code == 2
        assert str(Verdict(NOT_IN)) == "not-in"

    def test_cs_member(self):
        """Test cs_member() on a^n b^n c^n"""
        g = anbncn()
        assert cs_member(g, ("a", "b", "c"))
        assert cs_member(g, ("a", "a", "b", "b", "c", "c"))
        assert not cs_member(g, ("a", "a", "b", "b", "c"))
        assert not cs_member(g, ())
        verdict = cs_verdict(g, ("a", "b", "c"))
        assert replay(g, verdict.evidence)

    def test_cs_member_epsilon(self):
        """Test the empty word is decided by S -> eps"""
        g = Grammar.build(["a"], "S", ["S -> A B | eps", "A B -> B A", "A -> a", "B -> a"])
        assert cs_member(g, ())
        assert cs_member(g, ("a", "a"))

    def test_cs_member_preconditions(self):
        """Test cs_member() rejects contracting grammars and foreign symbols"""
        self.assertRaises(GrammarClassError, cs_member, a_star().as_unrestricted(), ())
        self.assertRaises(GrammarAlphabetError, cs_member, anbncn(), ("d",))

    def test_t0_member_in_with_trace(self):
        """Test t0_member() finds a derivation and its trace"""
        g = a_star().as_unrestricted()
        verdict = t0_member(g, ("a", "a"), Budget(50, 10))
        assert verdict.value is IN
        assert verdict.trace_lines() == ["S", "a S", "a a S", "a a"]
        assert replay(g, verdict.evidence)

    def test_t0_member_saturation(self):
        """Test NotIn by saturation and Unknown when the length cap is hit"""
        assert t0_member(Grammar.build(AB, "S", ["S -> b"]), ("a",), Budget(50, 10)).value is NOT_IN
        growing = Grammar.build(["a"], "S", ["S -> a S a"])
        assert t0_member(growing, ("a",), Budget(50, 6)).value is UNKNOWN

    def test_t0_member_step_cap(self):
        """Test Unknown when the derivation needs more steps than allowed"""
        g = a_star().as_unrestricted()
        assert t0_member(g, ("a",) * 4, Budget(2, 20)).value is UNKNOWN
        assert t0_member(g, ("a",) * 4, Budget(5, 20)).value is IN

    def test_t0_member_step_cap_bounds_branching(self):
        """Test a small budget stops a branching search with Unknown"""
        g = Grammar.build(
            ["a", "b", "c"], "S", ["S -> A S | B S | eps", "A -> a", "B -> b", "A B -> B A"]
        )
        with patch.object(derivation, "successors", wraps=derivation.successors) as mocked_successors:
            verdict = t0_member(g, ("c",) * 5, Budget(50, 14))
        assert verdict.value is UNKNOWN
        assert mocked_successors.call_count == 50

    def test_t0_member_budget_monotone(self):
        """Test a larger length cap keeps an In found under a smaller one"""
        g = Grammar.build(AB, "S", ["S -> a S | b S | A", "A -> a A a A | b", "Z Z -> eps"])
        word = ("a", "b")
        small = t0_member(g, word, Budget(20, 3))
        assert small.value is IN
        for budget in (Budget(20, 6), Budget(20, 12), Budget(40, 12)):
            assert t0_member(g, word, budget).value is IN, budget

    def test_t0_member_cycle(self):
        """Test swapping rules terminate thanks to deduplication"""
        g = Grammar.build(AB, "S", ["S -> A B", "A B -> B A", "A -> a", "B -> b", "A A -> eps"])
        assert t0_member(g, ("b", "a"), Budget(100, 4)).value is IN
        assert t0_member(g, ("a", "a"), Budget(100, 4)).value is NOT_IN

    def test_replay_rejects_bad_trace(self):
        """Test replay() rejects skipped steps"""
        g = a_star()
        S, a = nonterminal("S"), terminal("a")
        assert not replay(g, [(S,), (a, a, S)])
        assert not replay(g, [])


class TestProhibition(unittest.TestCase):
    """Tests for the prohibition module"""

    def test_pair_class(self):
        """Test pair_class() method"""
        pg = ProhibitionGrammar(a_star(), even_a())
        assert pair_class(pg) == PairClass(ChomskyClass.TYPE3, ChomskyClass.TYPE3)
        assert str(pair_class(pg)) == "33"
        pg = ProhibitionGrammar(a_star().as_unrestricted(), even_a())
        assert pair_class(pg).label == "03"

    def test_decidability_status(self):
        """Test decidability_status() method"""
        assert decidability_status(PairClass(2, 3)) is DecidabilityStatus.DECIDABLE
        assert decidability_status(PairClass(0, 1)) is DecidabilityStatus.SEMI_DECIDABLE
        assert decidability_status(PairClass(1, 0)) is DecidabilityStatus.CO_SEMI_DECIDABLE
        assert decidability_status(PairClass(0, 0)) is DecidabilityStatus.NEITHER_IN_GENERAL

    def test_combine(self):
        """Test the full difference truth table"""
        table = {
            (IN, IN): NOT_IN,
            (IN, NOT_IN): IN,
            (IN, UNKNOWN): UNKNOWN,
            (NOT_IN, IN): NOT_IN,
            (NOT_IN, NOT_IN): NOT_IN,
            (NOT_IN, UNKNOWN): NOT_IN,
            (UNKNOWN, IN): NOT_IN,
            (UNKNOWN, NOT_IN): UNKNOWN,
            (UNKNOWN, UNKNOWN): UNKNOWN,
        }
        for (p, q), expected in table.items():
            assert combine(p, q) is expected

    def test_member_anbn_minus_ab(self):
        """Test member() on a^n b^n minus {ab}"""
        pg = ProhibitionGrammar(anbn(), only_ab())
        assert member(pg, ("a", "b")).value is NOT_IN
        assert member(pg, ("a", "a", "b", "b")).value is IN
        assert member(pg, ()).value is IN

    def test_member_beyond_context_free(self):
        """Test a*b*c* minus unequal runs"""
        pg = ProhibitionToolkit.demo("anbncn_witness.pg").grammar
        assert pair_class(pg).label == "32"
        assert member(pg, ("a", "a", "b", "b", "c", "c")).value is IN
        assert member(pg, ("a", "a", "b", "b", "c")).value is NOT_IN

    def test_member_irregular_verbs(self):
        """Test the irregular verbs demo"""
        pg = ProhibitionToolkit.demo("irregular_verbs.pg").grammar
        assert member(pg, ("wear", "ed")).value is NOT_IN
        assert member(pg, ("adopt", "ed")).value is IN
        assert member(pg, ("wore",)).value is IN

    def test_member_alphabet_violation(self):
        """Test member() rejects foreign symbols"""
        pg = ProhibitionGrammar(anbn(), only_ab())
        self.assertRaises(GrammarAlphabetError, member, pg, ("c",))

    def test_member_trace(self):
        """Test member() attaches evidence from the positive component on request"""
        pg = ProhibitionGrammar(anbn(), only_ab())
        verdict = member(pg, ("a", "a", "b", "b"), trace=True)
        assert verdict.trace_lines() == ["S", "a S b", "a a S b b", "a a b b"]
        assert member(pg, ("a", "a", "b", "b")).evidence is None

    def test_negative_in_overrides_unknown_positive(self):
        """Test q = In settles the verdict even when the positive search gives up"""
        growing = Grammar.build(["a"], "S", ["S -> a S a | a", "Z Z -> eps"])
        pg = ProhibitionGrammar(growing, Grammar.build(["a"], "T", ["T -> a T | a"]))
        assert member(pg, ("a", "a"), Budget(1, 3)).value is NOT_IN

    @patch.object(prohibition, "t0_member")
    def test_budget_only_reaches_unrestricted_components(self, mocked_t0):
        """Test decidable components never call the budgeted search"""
        pg = ProhibitionGrammar(anbn(), only_ab())
        member(pg, ("a", "b"), Budget(1, 1))
        mocked_t0.assert_not_called()


class TestRelationMatrix(unittest.TestCase):
    """Tests for the relation tables"""

    PAIR_COLUMNS = "01 02 03 10 11 12 13 20 21 22 23 30 31 32 33".split()
    PAIR_ROWS = {
        "00": "⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃ ⊃",
        "01": "= = = ≠ ⊃ ⊃ ⊃ ≠ ⊃ ⊃ ⊃ ≠ ⊃ ⊃ ⊃",
        "02": "= = = ≠ ⊃ ⊃ ⊃ ≠ ⊃ ⊃ ⊃ ≠ ⊃ ⊃ ⊃",
        "03": "= = = ≠ ⊃ ⊃ ⊃ ≠ ⊃ ⊃ ⊃ ≠ ⊃ ⊃ ⊃",
        "10": "≠ ≠ ≠ = ⊃ ⊃ ⊃ = ⊃ ⊃ ⊃ = ⊃ ⊃ ⊃",
        "11": "⊂ ⊂ ⊂ ⊂ = = = ⊂ = ⊇ ⊃ ⊂ = ⊃ ⊃",
        "12": "⊂ ⊂ ⊂ ⊂ = = = ⊂ = ⊇ ⊃ ⊂ = ⊃ ⊃",
        "13": "⊂ ⊂ ⊂ ⊂ = = = ⊂ = ⊇ ⊃ ⊂ = ⊃ ⊃",
        "20": "≠ ≠ ≠ = ⊃ ⊃ ⊃ = ⊃ ⊃ ⊃ = ⊃ ⊃ ⊃",
        "21": "⊂ ⊂ ⊂ ⊂ = = = ⊂ = ⊇ ⊃ ⊂ = ⊃ ⊃",
        "22": "⊂ ⊂ ⊂ ⊂ ⊆ ⊆ ⊆ ⊂ ⊆ = ⊃ ⊂ ⊃ ⊃ ⊃",
        "23": "⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ = ⊂ ⊂ ≠ ⊃",
        "30": "≠ ≠ ≠ = ⊃ ⊃ ⊃ = ⊃ ⊃ ⊃ = ⊃ ⊃ ⊃",
        "31": "⊂ ⊂ ⊂ ⊂ = = = ⊂ = ⊃ ⊃ ⊂ = ⊃ ⊃",
        "32": "⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ≠ ⊂ ⊂ = ⊃",
        "33": "⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ =",
    }
    CONVENTIONAL_COLUMNS = ["00"] + PAIR_COLUMNS
    CONVENTIONAL_ROWS = {
        "0": "⊂ = = = ≠ ⊃ ⊃ ⊃ ≠ ⊃ ⊃ ⊃ ≠ ⊃ ⊃ ⊃",
        "1": "⊂ ⊂ ⊂ ⊂ ⊂ = = = ⊂ = ⊇ ⊃ ⊂ = ⊃ ⊃",
        "2": "⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ = ⊂ ⊂ ≠ ⊃",
        "3": "⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ ⊂ =",
    }

    def setUp(self):
        """Test setup"""
        self.matrix = relation_matrix()

    def test_pair_table(self):
        """Test every printed cell of the pair table"""
        for row, symbols in self.PAIR_ROWS.items():
            for column, symbol in zip(self.PAIR_COLUMNS, symbols.split()):
                assert self.matrix.relation(row, column) == symbol, (row, column)
        assert self.matrix.rows() == sorted(self.PAIR_ROWS)
        assert self.matrix.columns() == self.PAIR_COLUMNS

    def test_conventional_table(self):
        """Test every printed cell of the conventional table"""
        for row, symbols in self.CONVENTIONAL_ROWS.items():
            for column, symbol in zip(self.CONVENTIONAL_COLUMNS, symbols.split()):
                assert self.matrix.relation(row, column) == symbol, (row, column)

    def test_examples(self):
        """Test relation() lookups in both orientations"""
        assert self.matrix.relation("33", "3") == "="
        assert self.matrix.relation("00", "01") == "⊃"
        assert self.matrix.relation("23", "32") == "≠"
        assert self.matrix.relation("22", "1") == "⊆"
        assert self.matrix.relation("23", ChomskyClass.TYPE2) == "="
        assert self.matrix.relation(PairClass(1, 0), "0") == "≠"

    def test_unknown_pair(self):
        """Test pairs the tables do not print"""
        self.assertRaises(GrammarUnknownRelation, self.matrix.relation, "11", "00")
        self.assertRaises(GrammarUnknownRelation, self.matrix.relation, "44", "01")

    def test_language_class(self):
        """Test language_class() descriptions"""
        assert language_class(PairClass(3, 3)) == "exactly the regular languages"
        assert language_class(PairClass(2, 3)) == "exactly the context-free languages"
        assert language_class(PairClass(1, 2)) == "exactly the context-sensitive languages"
        assert language_class(PairClass(0, 2)) == "exactly the recursively enumerable languages"
        assert "complements" in language_class(PairClass(3, 0))
        assert "strictly containing the context-free languages" in language_class(PairClass(2, 2))
        assert "incomparable with the context-free languages" in language_class(PairClass(3, 2))


class TestOracle(unittest.TestCase):
    """Tests for the oracle module"""

    def test_enumerate_words(self):
        """Test enumerate_words() method"""
        assert enumerate_words(["a"], 2) == [(), ("a",), ("a", "a")]
        assert enumerate_words(AB, 1) == [(), ("a",), ("b",)]
        assert len(enumerate_words(AB, 3)) == 15
        assert len(enumerate_words(["a", "b", "c"], 4)) == sum(3**k for k in range(5))
        assert enumerate_words([], 0) == [()]
        self.assertRaises(GrammarInvalidArgument, enumerate_words, [], 2)
        self.assertRaises(GrammarInvalidArgument, enumerate_words, AB, -1)

    def test_language_slice(self):
        """Test language_slice() method"""
        a_only = compile_regular(a_star(AB))
        assert language_slice(lambda w: dfa_member(a_only, w), AB, 2).words == words("", "a", "a a")
        cnf = to_cnf(anbn())
        assert language_slice(lambda w: cyk_member(cnf, w), AB, 4).words == words("", "a b", "a a b b")

    def test_language_slice_indefinite(self):
        """Test an Unknown verdict names the word"""
        growing = Grammar.build(["a"], "S", ["S -> a S a | a", "Z Z -> eps"])
        with self.assertRaises(GrammarIndefiniteError) as context:
            grammar_slice(growing, 3, Budget(1, 2))
        assert context.exception.word == ()

    def test_slice_operations(self):
        """Test LanguageSlice set operations and complement"""
        left = LanguageSlice({"a"}, 2, words("", "a"))
        right = LanguageSlice({"a"}, 2, words("a", "a a"))
        assert (left | right).words == words("", "a", "a a")
        assert (left & right).words == words("a")
        assert (left - right).words == words("")
        assert left.complement().words == words("a a")
        assert left.first_difference(right) == ()
        assert list(left | right) == [(), ("a",), ("a", "a")]
        self.assertRaises(GrammarInvalidArgument, LanguageSlice, {"a"}, 1, words("a a"))

    def test_slice_is_deterministic(self):
        """Test recomputing a slice gives the same words"""
        pg = ProhibitionGrammar(anbn(), only_ab())
        assert prohibition_slice(pg, 6) == prohibition_slice(pg, 6)

    def test_cnf_derives(self):
        """Test cnf_derives() method"""
        cnf = to_cnf(anbn())
        assert cnf_derives(cnf, ("a", "a", "b", "b"))
        assert not cnf_derives(cnf, ("a", "b", "b"))
        assert cnf_derives(cnf, ())

    def test_check_lemma_identities(self):
        """Test check_lemma_identities() method"""
        assert check_lemma_identities(a_star(), even_a(), 6)
        empty = Grammar.empty({terminal("a")}, "T")
        assert check_lemma_identities(a_star(), empty, 6)
        assert check_lemma_identities(even_a(), a_star().as_unrestricted(), 6)
        self.assertRaises(GrammarClassError, check_lemma_identities, a_star().as_unrestricted(), even_a(), 4)

    def test_verify_relation(self):
        """Test verify_relation() for each supported claim"""
        report = verify_relation("regular-difference", [ProhibitionGrammar(a_star(), even_a())], 8)
        assert report.consistent
        report = verify_relation("cf-minus-regular", [ProhibitionGrammar(anbn(), only_ab())])
        assert report.max_len == 10
        assert report.consistent
        report = verify_relation("empty-negative", [ProhibitionGrammar.without_prohibition(anbn())], 8)
        assert report.consistent
        report = verify_relation("cs-difference", [ProhibitionGrammar(anbncn(), Grammar.empty(anbncn().alphabet))], 6)
        assert report.consistent
        witness = ProhibitionGrammar(a_star(AB), anbn())
        assert verify_relation("complement-identity", [witness], 6).consistent

    def test_verify_relation_errors(self):
        """Test unsupported claims and class-signature mismatches"""
        pg = ProhibitionGrammar(anbn(), only_ab())
        self.assertRaises(GrammarInvalidArgument, verify_relation, "no-such-claim", [pg])
        self.assertRaises(GrammarClassError, verify_relation, "regular-difference", [pg])

    @patch.object(oracle, "construct_cf_minus_regular")
    def test_cf_minus_regular_checks_class(self, mocked_construct):
        """Test a delivered grammar that is not context-free violates the claim"""
        mocked_construct.return_value = anbncn()
        report = verify_relation("cf-minus-regular", [ProhibitionGrammar(anbn(), only_ab())])
        outcome = report.outcomes[0]
        assert not outcome.consistent
        assert outcome.witness == ()
        assert outcome.detail == "delivered grammar classifies as Type1"

    def test_report_render(self):
        """Test text and XML report output"""
        report = verify_relation("regular-difference", [("reg_pair", ProhibitionGrammar(a_star(), even_a()))], 8)
        assert report.render() == (
            "claim: regular-difference\n"
            "max-len: 8\n"
            "instances: 1\n"
            "outcome: consistent\n"
            "  reg_pair: consistent\n"
        )
        document = xmltodict.parse(report.to_xml())
        assert document["RelationReport"]["Outcome"] == "consistent"
        assert document["RelationReport"]["Instance"]["@label"] == "reg_pair"

    def test_violated_report(self):
        """Test a violated outcome carries its witness"""
        outcome = oracle.InstanceOutcome("broken", False, ("a",), "slice differs")
        report = oracle.RelationReport("regular-difference", 2, (outcome,))
        assert not report.consistent
        assert "broken: violated (witness: a; slice differs)" in report.render()
        self.assertRaises(GrammarInvalidArgument, oracle.InstanceOutcome, "broken", False)


class TestToolkit(unittest.TestCase):
    """Tests for ProhibitionToolkit"""

    def setUp(self):
        """Test setup"""
        self.toolkit = ProhibitionToolkit.demo("anbn_minus_ab.pg")

    def test_classify(self):
        """Test classify() method"""
        assert self.toolkit.classify() == {
            "positive": "Type2",
            "negative": "Type3",
            "pair": "23",
            "status": "decidable",
            "language": "exactly the context-free languages",
        }

    def test_member(self):
        """Test member() method with text words"""
        assert self.toolkit.member("a a b b").value is IN
        assert self.toolkit.member("a b").value is NOT_IN
        assert self.toolkit.member("eps").value is IN
        assert self.toolkit.member("").value is IN

    @patch("builtins.print")
    def test_member_debug(self, mocked_print):
        """Test member() debug output"""
        self.toolkit.member("a b", debug=True)
        mocked_print.assert_called_with("VERDICT: not-in")

    def test_construct(self):
        """Test construct() for a context-free minus regular pair"""
        constructed = self.toolkit.construct()
        assert constructed.negative.productions == ()
        assert grammar_slice(constructed.positive, 8).words == self.toolkit.sample(8).words

    def test_construct_unsupported(self):
        """Test construct() for a pair without a construction"""
        toolkit = ProhibitionToolkit.demo("anbncn_witness.pg")
        self.assertRaises(GrammarConstructionError, toolkit.construct)

    def test_sample(self):
        """Test sample() method"""
        assert self.toolkit.sample(6).words == words("", "a a b b", "a a a b b b")

    def test_verify(self):
        """Test verify() method"""
        assert self.toolkit.verify("cf-minus-regular").consistent

    def test_invalid_max_len(self):
        """Test constructor argument checks"""
        self.assertRaises(GrammarInvalidArgument, ProhibitionToolkit, self.toolkit.grammar, None, -1)


class TestCli(unittest.TestCase):
    """Tests for the command-line interface"""

    def setUp(self):
        """Test setup"""
        self.out = io.StringIO()
        self.err = io.StringIO()

    def run_cli(self, *argv):
        return cli.run(list(argv), out=self.out, err=self.err)

    def demo(self, name):
        return os.path.join(DEMO_DIR, name)

    def test_member(self):
        """Test the member command and its exit codes"""
        assert self.run_cli("member", self.demo("anbn_minus_ab.pg"), "--word", "a a b b") == 0
        assert self.out.getvalue() == "in\n"
        assert self.run_cli("member", self.demo("anbn_minus_ab.pg"), "--word", "a b") == 1

    def test_member_unknown(self):
        """Test exit code 2 for an Unknown verdict"""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "growing.pg")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("%alphabet a\n%positive\n%start S\nS -> a S a | a\nZ Z -> eps\n")
            assert self.run_cli("member", path, "--word", "a a", "--budget", "1,3") == 2
            assert self.out.getvalue() == "unknown\n"

    def test_member_trace(self):
        """Test --trace prints one sentential form per line"""
        assert self.run_cli("member", self.demo("reg_pair.pg"), "--word", "a", "--trace") == 0
        assert self.out.getvalue() == "in\nS\na S\na\n"

    def test_classify(self):
        """Test the classify command"""
        assert self.run_cli("classify", self.demo("reg_pair.pg")) == 0
        assert self.out.getvalue().splitlines()[:4] == [
            "positive: Type3",
            "negative: Type3",
            "pair: 33",
            "status: decidable",
        ]

    def test_construct_then_classify(self):
        """Test construct --out followed by classify"""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "diff.pg")
            assert self.run_cli("construct", self.demo("reg_pair.pg"), "--out", path) == 0
            assert self.run_cli("classify", path) == 0
        assert "positive: Type3" in self.out.getvalue()

    def test_construct_unsupported_pair(self):
        """Test exit code 66"""
        assert self.run_cli("construct", self.demo("anbncn_witness.pg")) == 66

    def test_sample(self):
        """Test the sample command"""
        assert self.run_cli("sample", self.demo("reg_pair.pg"), "--max-len", "5") == 0
        assert self.out.getvalue() == "a\na a a\na a a a a\n"

    def test_sample_indefinite(self):
        """Test exit code 67"""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "growing.pg")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("%alphabet a\n%positive\n%start S\nS -> a S a | a\nZ Z -> eps\n")
            assert self.run_cli("sample", path, "--max-len", "3", "--budget", "1,2") == 67

    def test_verify(self):
        """Test the verify command in both formats"""
        assert self.run_cli("verify", self.demo("reg_pair.pg"), "--claim", "regular-difference") == 0
        assert "outcome: consistent" in self.out.getvalue()
        self.out = io.StringIO()
        assert self.run_cli(
            "verify", self.demo("reg_pair.pg"), "--claim", "regular-difference", "--format", "xml"
        ) == 0
        assert xmltodict.parse(self.out.getvalue())["RelationReport"]["Outcome"] == "consistent"

    def test_usage_errors(self):
        """Test exit code 64"""
        assert self.run_cli() == 64
        assert self.run_cli("member", self.demo("reg_pair.pg")) == 64
        assert self.run_cli("member", self.demo("reg_pair.pg"), "--word", "a", "--budget", "0,1") == 64

    def test_input_errors(self):
        """Test exit code 65"""
        assert self.run_cli("classify", self.demo("missing.pg")) == 65
        assert self.run_cli("member", self.demo("reg_pair.pg"), "--word", "b") == 65

    def test_demo(self):
        """Test the demo command"""
        assert self.run_cli("demo") == 0
        output = self.out.getvalue()
        for line in ("wear ed → not-in", "keep ed → not-in", "adopt ed → in", "wore → in", "kept → in"):
            assert f"  {line}\n" in output
        assert "  a a a b b b c c c\n" in output
        assert "delivered as a Type3 grammar" in output


if __name__ == "__main__":
    unittest.main()
