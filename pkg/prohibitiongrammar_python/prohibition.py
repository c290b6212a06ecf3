"""
prohibition.py - Membership, decidability status and class relations for grammars with prohibition

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import functools
import logging
import os
from enum import Enum
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import xmltodict

from prohibitiongrammar_python.automata import compile_regular, dfa_member
from prohibitiongrammar_python.cfg import compile_context_free, cyk_member
from prohibitiongrammar_python.derivation import (
    Budget,
    Verdict,
    VerdictValue,
    cs_verdict,
    derive,
    t0_member,
)
from prohibitiongrammar_python.grammar import (
    ChomskyClass,
    Grammar,
    GrammarUnknownRelation,
    ProhibitionGrammar,
    check_word,
    classify,
)
from prohibitiongrammar_python.utils import Utils

logger = logging.getLogger(__name__)

RELATIONS_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "relations.xml")

SUBSET = "⊂"
SUBSET_OR_EQUAL = "⊆"
EQUAL = "="
SUPERSET = "⊃"
SUPERSET_OR_EQUAL = "⊇"
INCOMPARABLE = "≠"

CONVERSE = {
    SUBSET: SUPERSET,
    SUBSET_OR_EQUAL: SUPERSET_OR_EQUAL,
    EQUAL: EQUAL,
    SUPERSET: SUBSET,
    SUPERSET_OR_EQUAL: SUBSET_OR_EQUAL,
    INCOMPARABLE: INCOMPARABLE,
}

RELATION_PHRASES = {
    SUBSET: "strictly inside",
    SUBSET_OR_EQUAL: "inside or equal to",
    EQUAL: "equal to",
    SUPERSET: "strictly containing",
    SUPERSET_OR_EQUAL: "containing or equal to",
    INCOMPARABLE: "incomparable with",
}

CLASS_LANGUAGES = {
    ChomskyClass.TYPE0: "recursively enumerable",
    ChomskyClass.TYPE1: "context-sensitive",
    ChomskyClass.TYPE2: "context-free",
    ChomskyClass.TYPE3: "regular",
}


class PairClass(NamedTuple):
    """Chomsky classes of the positive (i) and negative (j) component."""

    i: ChomskyClass
    j: ChomskyClass

    @property
    def label(self) -> str:
        return f"{int(self.i)}{int(self.j)}"

    def __str__(self):
        return self.label


class DecidabilityStatus(Enum):
    """Where membership for a class pair sits relative to the recursive languages."""

    DECIDABLE = "decidable"
    SEMI_DECIDABLE = "semi-decidable"
    CO_SEMI_DECIDABLE = "co-semi-decidable"
    NEITHER_IN_GENERAL = "neither-in-general"

    def __str__(self):
        return self.value


def pair_class(pg: ProhibitionGrammar) -> PairClass:
    return PairClass(classify(pg.positive), classify(pg.negative))


def decidability_status(pc: PairClass) -> DecidabilityStatus:
    """Status of membership for a class pair.

    An unrestricted positive part makes membership only semi-decidable, an
    unrestricted negative part only co-semi-decidable, and both together
    neither in general.
    """
    positive_open = pc.i == ChomskyClass.TYPE0
    negative_open = pc.j == ChomskyClass.TYPE0
    if positive_open and negative_open:
        return DecidabilityStatus.NEITHER_IN_GENERAL
    if positive_open:
        return DecidabilityStatus.SEMI_DECIDABLE
    if negative_open:
        return DecidabilityStatus.CO_SEMI_DECIDABLE
    return DecidabilityStatus.DECIDABLE


def combine(p: VerdictValue, q: VerdictValue) -> VerdictValue:
    """Difference truth table for a positive verdict p and a negative verdict q.

    A word outside L(positive) or inside L(negative) is out regardless of the
    other verdict.
    """
    if p is VerdictValue.NOT_IN or q is VerdictValue.IN:
        return VerdictValue.NOT_IN
    if p is VerdictValue.IN and q is VerdictValue.NOT_IN:
        return VerdictValue.IN
    return VerdictValue.UNKNOWN


def component_verdict(
    g: Grammar, w: Iterable[str], budget: Optional[Budget] = None, trace: bool = False
) -> Verdict:
    """Decide membership in one component with the best decider for its class.

    Right-linear grammars run on their minimal DFA, context-free grammars on
    CYK, noncontracting grammars on the saturating search, and anything else on
    the budgeted search.

    Args:
        g (Grammar): Component grammar
        w (iterable): Terminal names
        budget (Budget, optional): Caps for the unrestricted search. Defaults to Budget.default_for(w).
        trace (bool, optional): Attach a derivation trace to In verdicts of the DFA and CYK deciders.

    Returns:
        Verdict
    """
    w = check_word(g.terminal_names, w)
    budget = budget or Budget.default_for(w)
    level = classify(g)
    if level is ChomskyClass.TYPE1:
        return cs_verdict(g, w)
    if level is ChomskyClass.TYPE0:
        return t0_member(g, w, budget)

    if level is ChomskyClass.TYPE3:
        accepted = dfa_member(compile_regular(g), w)
    else:
        accepted = cyk_member(compile_context_free(g), w)
    if not accepted:
        return Verdict(VerdictValue.NOT_IN)
    if trace:
        search = derive(g, w, budget.max_steps, budget.max_form_length)
        if search.value is VerdictValue.IN:
            return search
    return Verdict(VerdictValue.IN)


def member(
    pg: ProhibitionGrammar,
    w: Iterable[str],
    budget: Optional[Budget] = None,
    trace: bool = False,
) -> Verdict:
    """Decide w in L(positive) minus L(negative).

    The negative component is only consulted when the positive verdict is not
    already NotIn. An In verdict carries the positive derivation when one is
    available.

    Args:
        pg (ProhibitionGrammar): Grammar with prohibition
        w (iterable): Terminal names
        budget (Budget, optional): Caps applied to unrestricted components
        trace (bool, optional): Request derivation evidence for In verdicts

    Raises:
        GrammarAlphabetError: A symbol of w is outside the shared alphabet

    Returns:
        Verdict
    """
    w = check_word(pg.terminal_names, w)
    budget = budget or Budget.default_for(w)
    positive = component_verdict(pg.positive, w, budget, trace)
    if positive.value is VerdictValue.NOT_IN:
        return Verdict(VerdictValue.NOT_IN)
    negative = component_verdict(pg.negative, w, budget)
    value = combine(positive.value, negative.value)
    logger.debug(
        "member %s: positive %s, negative %s -> %s",
        Utils.format_word(w),
        positive.value,
        negative.value,
        value,
    )
    if value is VerdictValue.IN:
        return Verdict(value, positive.evidence)
    return Verdict(value)


class RelationMatrix:
    """Relation symbols between language classes, queryable by (row, column) label.

    Pair labels are two digits ``ij`` and conventional class labels a single
    digit. The conventional table is stored with conventional rows; asking for a
    pair row and a conventional column answers with the converse symbol.
    """

    def __init__(self, tables: Dict[str, Dict[Tuple[str, str], str]]):
        self.pairs = tables["pairs"]
        self.conventional = tables["conventional"]

    @classmethod
    def from_xml(cls, text: str):
        """Build the matrix from the XML relations data."""
        document = xmltodict.parse(text)
        tables = {}
        for table in Utils.ensure_list(document["Relations"]["Table"]):
            columns = table["Columns"].split()
            cells = {}
            for row in Utils.ensure_list(table["Row"]):
                symbols = row["#text"].split()
                if len(symbols) != len(columns):
                    raise GrammarUnknownRelation(
                        f"row {row['@type']} of table {table['@name']} has {len(symbols)} cells, "
                        f"expected {len(columns)}"
                    )
                for column, symbol in zip(columns, symbols):
                    cells[(row["@type"], column)] = symbol
            tables[table["@name"]] = cells
        return cls(tables)

    @staticmethod
    def _label(value) -> str:
        if isinstance(value, PairClass):
            return value.label
        if isinstance(value, ChomskyClass):
            return str(int(value))
        return str(value)

    def relation(self, row, column) -> str:
        """Relation symbol such that L(row) <symbol> L(column).

        Args:
            row: Pair label ("23", PairClass) or conventional class ("2", ChomskyClass)
            column: Pair label or conventional class

        Raises:
            GrammarUnknownRelation: The tables print no cell for the pair

        Returns:
            str: one of ⊂ ⊆ = ⊃ ⊇ ≠
        """
        row, column = self._label(row), self._label(column)
        if (row, column) in self.pairs:
            return self.pairs[(row, column)]
        if (row, column) in self.conventional:
            return self.conventional[(row, column)]
        if (column, row) in self.conventional:
            return CONVERSE[self.conventional[(column, row)]]
        raise GrammarUnknownRelation(f"no relation recorded for ({row}, {column})")

    def rows(self, table: str = "pairs") -> List[str]:
        cells = self.pairs if table == "pairs" else self.conventional
        return sorted({row for row, _ in cells})

    def columns(self, table: str = "pairs") -> List[str]:
        cells = self.pairs if table == "pairs" else self.conventional
        return sorted({column for _, column in cells})

    def equal_class(self, pc: PairClass) -> Optional[ChomskyClass]:
        """Conventional class whose languages are exactly those of the pair, if any."""
        for level in ChomskyClass:
            if self.conventional.get((str(int(level)), pc.label)) == EQUAL:
                return level
        return None


@functools.lru_cache(maxsize=1)
def relation_matrix() -> RelationMatrix:
    """Static relation tables between pair classes and conventional classes."""
    with open(RELATIONS_FILE, encoding="utf-8") as handle:
        return RelationMatrix.from_xml(handle.read())


def language_class(pc: PairClass) -> str:
    """Describe the class of languages generated by grammars of the given pair."""
    level = relation_matrix().equal_class(pc)
    if level is not None:
        return f"exactly the {CLASS_LANGUAGES[level]} languages"
    status = decidability_status(pc)
    if status is DecidabilityStatus.CO_SEMI_DECIDABLE:
        return "exactly the complements of recursively enumerable languages"
    if status is DecidabilityStatus.NEITHER_IN_GENERAL:
        return "the recursively enumerable languages together with their complements"
    matrix = relation_matrix()
    return ", ".join(
        f"{RELATION_PHRASES[matrix.relation(pc, level)]} the {CLASS_LANGUAGES[level]} languages"
        for level in ChomskyClass
    )
