"""
cfg.py - Context-free machinery: Chomsky normal form, CYK membership and intersection with a DFA

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import functools
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

from prohibitiongrammar_python.automata import Dfa, compile_regular, complement
from prohibitiongrammar_python.grammar import (
    ChomskyClass,
    Grammar,
    GrammarAlphabetError,
    GrammarClassError,
    Production,
    SymbolId,
    check_word,
    classify,
    fresh_name,
    is_context_free,
    nonterminal,
    terminal,
)

logger = logging.getLogger(__name__)

Rule = Tuple[str, Tuple[SymbolId, ...]]


@dataclass(frozen=True)
class CnfGrammar:
    """Context-free grammar in Chomsky normal form.

    Rules are either ``A -> B C`` (binary_rules) or ``A -> a`` (terminal_rules).
    The empty word is tracked separately by accepts_epsilon, and start appears
    on no right-hand side.
    """

    nonterminals: FrozenSet[str]
    terminals: FrozenSet[str]
    start: str
    binary_rules: FrozenSet[Tuple[str, str, str]]
    terminal_rules: FrozenSet[Tuple[str, str]]
    accepts_epsilon: bool = False

    def __post_init__(self):
        for name in ("nonterminals", "terminals", "binary_rules", "terminal_rules"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def rule_count(self) -> int:
        return len(self.binary_rules) + len(self.terminal_rules)

    @functools.cached_property
    def by_terminal(self) -> Dict[str, FrozenSet[str]]:
        """Left-hand sides of A -> a, keyed by a."""
        index: Dict[str, Set[str]] = {}
        for lhs, symbol in self.terminal_rules:
            index.setdefault(symbol, set()).add(lhs)
        return {key: frozenset(value) for key, value in index.items()}

    @functools.cached_property
    def by_pair(self) -> Dict[Tuple[str, str], FrozenSet[str]]:
        """Left-hand sides of A -> B C, keyed by (B, C)."""
        index: Dict[Tuple[str, str], Set[str]] = {}
        for lhs, first, second in self.binary_rules:
            index.setdefault((first, second), set()).add(lhs)
        return {key: frozenset(value) for key, value in index.items()}


def _require_context_free(g: Grammar):
    if not is_context_free(g):
        raise GrammarClassError(f"not-context-free: classifies as {classify(g)}")


def _generating(rules: Iterable[Rule]) -> Set[str]:
    """Nonterminals that derive some terminal word."""
    rules = list(rules)
    found: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if lhs in found:
                continue
            if all(s.is_terminal or s.name in found for s in rhs):
                found.add(lhs)
                changed = True
    return found


def _reachable(start: str, rules: Iterable[Rule]) -> Set[str]:
    by_lhs: Dict[str, List[Tuple[SymbolId, ...]]] = {}
    for lhs, rhs in rules:
        by_lhs.setdefault(lhs, []).append(rhs)
    found = {start}
    stack = [start]
    while stack:
        current = stack.pop()
        for rhs in by_lhs.get(current, ()):
            for symbol in rhs:
                if symbol.is_nonterminal and symbol.name not in found:
                    found.add(symbol.name)
                    stack.append(symbol.name)
    return found


def _nullable(rules: Iterable[Rule]) -> Set[str]:
    rules = list(rules)
    found: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if lhs not in found and all(s.is_nonterminal and s.name in found for s in rhs):
                found.add(lhs)
                changed = True
    return found


def _drop_nullable(rules: List[Rule], nullable: Set[str]) -> List[Rule]:
    """Every variant of each rule with nullable occurrences omitted, minus empty right-hand sides."""
    result: List[Rule] = []
    seen = set()
    for lhs, rhs in rules:
        optional = [i for i, s in enumerate(rhs) if s.is_nonterminal and s.name in nullable]
        for size in range(len(optional) + 1):
            for dropped in itertools.combinations(optional, size):
                variant = tuple(s for i, s in enumerate(rhs) if i not in dropped)
                if variant and (lhs, variant) not in seen:
                    seen.add((lhs, variant))
                    result.append((lhs, variant))
    return result


def _drop_units(rules: List[Rule]) -> List[Rule]:
    """Replace unit rules A -> B by copies of B's non-unit rules."""

    def is_unit(rhs):
        return len(rhs) == 1 and rhs[0].is_nonterminal

    units: Dict[str, Set[str]] = {}
    for lhs, rhs in rules:
        units.setdefault(lhs, {lhs})
        if is_unit(rhs):
            units[lhs].add(rhs[0].name)
    changed = True
    while changed:
        changed = False
        for lhs, targets in units.items():
            closure = set(targets)
            for target in targets:
                closure |= units.get(target, set())
            if closure != targets:
                units[lhs] = closure
                changed = True

    proper: Dict[str, List[Tuple[SymbolId, ...]]] = {}
    for lhs, rhs in rules:
        if not is_unit(rhs):
            proper.setdefault(lhs, []).append(rhs)
    result: List[Rule] = []
    seen = set()
    for lhs in units:
        for target in sorted(units[lhs]):
            for rhs in proper.get(target, ()):
                if (lhs, rhs) not in seen:
                    seen.add((lhs, rhs))
                    result.append((lhs, rhs))
    return result


def to_cnf(g: Grammar) -> CnfGrammar:
    """Convert a context-free grammar to Chomsky normal form.

    A fresh start symbol is always introduced, then epsilon rules, unit rules and
    useless symbols are eliminated before terminals in long rules get their own
    nonterminals and long rules are split into binary ones.

    Args:
        g (Grammar): Grammar classifying as Type2 or Type3

    Raises:
        GrammarClassError: The grammar is not context-free

    Returns:
        CnfGrammar: language-equal grammar; the empty word is kept in accepts_epsilon
    """
    _require_context_free(g)
    taken = set(g.nonterminal_names) | set(g.terminal_names)
    start = fresh_name("S0", taken)
    taken.add(start)

    rules: List[Rule] = [(start, (g.start,))]
    rules.extend((p.lhs[0].name, p.rhs) for p in g.productions)

    nullable = _nullable(rules)
    accepts_epsilon = start in nullable
    rules = _drop_units(_drop_nullable(rules, nullable))

    generating = _generating(rules)
    rules = [
        (lhs, rhs)
        for lhs, rhs in rules
        if lhs in generating and all(s.is_terminal or s.name in generating for s in rhs)
    ]
    reachable = _reachable(start, rules)
    rules = [(lhs, rhs) for lhs, rhs in rules if lhs in reachable]

    proxies: Dict[str, str] = {}
    terminal_rules: Set[Tuple[str, str]] = set()
    binary_rules: Set[Tuple[str, str, str]] = set()

    def as_nonterminal(symbol: SymbolId) -> str:
        if symbol.is_nonterminal:
            return symbol.name
        if symbol.name not in proxies:
            proxy = fresh_name("T", taken)
            taken.add(proxy)
            proxies[symbol.name] = proxy
            terminal_rules.add((proxy, symbol.name))
        return proxies[symbol.name]

    for lhs, rhs in rules:
        if len(rhs) == 1:
            terminal_rules.add((lhs, rhs[0].name))
            continue
        names = [as_nonterminal(symbol) for symbol in rhs]
        current = lhs
        while len(names) > 2:
            link = fresh_name("X", taken)
            taken.add(link)
            binary_rules.add((current, names.pop(0), link))
            current = link
        binary_rules.add((current, names[0], names[1]))

    nonterminals = {start}
    nonterminals.update(lhs for lhs, _ in terminal_rules)
    for rule in binary_rules:
        nonterminals.update(rule)
    result = CnfGrammar(
        nonterminals, g.terminal_names, start, binary_rules, terminal_rules, accepts_epsilon
    )
    logger.debug(
        "CNF: %d binary and %d terminal rules, accepts_epsilon=%s",
        len(binary_rules),
        len(terminal_rules),
        accepts_epsilon,
    )
    return result


@functools.lru_cache(maxsize=128)
def compile_context_free(g: Grammar) -> CnfGrammar:
    """Cached :func:`to_cnf` for repeated membership queries on one grammar."""
    return to_cnf(g)


def cyk_member(c: CnfGrammar, w: Iterable[str]) -> bool:
    """Decide w in L(c) with the CYK table.

    Raises:
        GrammarAlphabetError: A symbol of w is not a terminal of c
    """
    w = check_word(c.terminals, w)
    if not w:
        return c.accepts_epsilon

    by_terminal = c.by_terminal
    by_pair = c.by_pair
    size = len(w)
    # table[length - 1][i] holds the nonterminals deriving w[i:i + length]
    table: List[List[Set[str]]] = [[set(by_terminal.get(symbol, ())) for symbol in w]]
    for length in range(2, size + 1):
        row = []
        for i in range(size - length + 1):
            cell = set()
            for split in range(1, length):
                left = table[split - 1][i]
                right = table[length - split - 1][i + split]
                for first in left:
                    for second in right:
                        cell.update(by_pair.get((first, second), ()))
            row.append(cell)
        table.append(row)
    return c.start in table[size - 1][0]


def cfg_member(g: Grammar, w: Iterable[str]) -> bool:
    """Decide membership in a context-free grammar through its cached normal form."""
    return cyk_member(compile_context_free(g), w)


def _state_order(d: Dfa) -> List:
    reachable = d.reachable()
    return reachable + sorted(set(d.states) - set(reachable), key=repr)


def cfg_intersect_dfa(c: CnfGrammar, d: Dfa) -> Grammar:
    """Product of a normal-form grammar with a DFA.

    Nonterminal ``P{p}_{A}_{q}`` derives exactly the words that A derives and
    that drive the DFA from state p to state q. Only triples that are both
    generating and reachable from the new start symbol are kept.

    Args:
        c (CnfGrammar): Context-free grammar in normal form
        d (Dfa): Automaton over the same terminals

    Raises:
        GrammarAlphabetError: The terminal alphabets differ

    Returns:
        Grammar: context-free grammar for L(c) intersected with L(d)
    """
    if c.terminals != d.alphabet:
        raise GrammarAlphabetError(
            f"alphabet mismatch: {sorted(c.terminals)} vs {sorted(d.alphabet)}"
        )
    number = {state: index for index, state in enumerate(_state_order(d))}

    generating: Set[Tuple[object, str, object]] = set()
    for lhs, symbol in c.terminal_rules:
        for state in d.states:
            generating.add((state, lhs, d.transition[(state, symbol)]))

    # Bottom-up closure over binary rules, indexed by (first state, nonterminal).
    ends: Dict[Tuple[object, str], Set[object]] = {}
    for p, name, q in generating:
        ends.setdefault((p, name), set()).add(q)
    changed = True
    while changed:
        changed = False
        for lhs, first, second in c.binary_rules:
            for (p, name), middles in list(ends.items()):
                if name != first:
                    continue
                for q in list(middles):
                    for r in list(ends.get((q, second), ())):
                        if (p, lhs, r) not in generating:
                            generating.add((p, lhs, r))
                            ends.setdefault((p, lhs), set()).add(r)
                            changed = True

    def name_of(triple) -> str:
        p, name, q = triple
        return f"P{number[p]}_{name}_{number[q]}"

    terminals = {symbol: terminal(symbol) for symbol in c.terminals}
    taken = {name_of(t) for t in generating} | set(c.terminals)
    start = nonterminal(fresh_name("S", taken))
    roots = sorted(
        ((d.start, c.start, f) for f in d.accepting if (d.start, c.start, f) in generating),
        key=name_of,
    )

    productions: List[Production] = []
    if c.accepts_epsilon and d.start in d.accepting:
        productions.append(Production((start,), ()))
    for root in roots:
        productions.append(Production((start,), (nonterminal(name_of(root)),)))

    binary_by_lhs: Dict[str, List[Tuple[str, str]]] = {}
    for lhs, first, second in sorted(c.binary_rules):
        binary_by_lhs.setdefault(lhs, []).append((first, second))
    terminal_by_lhs: Dict[str, List[str]] = {}
    for lhs, symbol in sorted(c.terminal_rules):
        terminal_by_lhs.setdefault(lhs, []).append(symbol)

    seen = set(roots)
    order = list(roots)
    for triple in order:
        p, name, r = triple
        lhs = (nonterminal(name_of(triple)),)
        for symbol in terminal_by_lhs.get(name, ()):
            if d.transition[(p, symbol)] == r:
                productions.append(Production(lhs, (terminals[symbol],)))
        for first, second in binary_by_lhs.get(name, ()):
            for q in sorted(ends.get((p, first), ()), key=lambda s: number[s]):
                right = (q, second, r)
                if right not in generating:
                    continue
                left = (p, first, q)
                productions.append(
                    Production(lhs, (nonterminal(name_of(left)), nonterminal(name_of(right))))
                )
                for child in (left, right):
                    if child not in seen:
                        seen.add(child)
                        order.append(child)

    nonterminals = {start} | {nonterminal(name_of(t)) for t in order}
    result = Grammar(set(terminals.values()), nonterminals, start, productions)
    logger.debug(
        "CFG x DFA product: %d generating triples, %d kept, %d productions",
        len(generating),
        len(order),
        len(productions),
    )
    return result


def construct_cf_minus_regular(g2: Grammar, g3: Grammar) -> Grammar:
    """Deliver L(g2) minus L(g3) as a context-free grammar.

    The difference is the intersection of the context-free language with the
    complement of the regular one.

    Args:
        g2 (Grammar): Grammar classifying as Type2 or Type3
        g3 (Grammar): Right-linear grammar over the same alphabet

    Raises:
        GrammarClassError: A component is outside its required class
        GrammarAlphabetError: The alphabets differ

    Returns:
        Grammar
    """
    if classify(g2) not in (ChomskyClass.TYPE2, ChomskyClass.TYPE3):
        raise GrammarClassError(f"not-context-free: positive classifies as {classify(g2)}")
    if classify(g3) is not ChomskyClass.TYPE3:
        raise GrammarClassError(f"not-right-linear: negative classifies as {classify(g3)}")
    if g2.alphabet != g3.alphabet:
        raise GrammarAlphabetError("positive and negative grammars must declare the same alphabet")
    return cfg_intersect_dfa(to_cnf(g2), complement(compile_regular(g3)))


def cfg_is_empty(g: Grammar) -> bool:
    """True iff the start symbol derives no terminal word.

    Raises:
        GrammarClassError: The grammar is not context-free
    """
    _require_context_free(g)
    generating = _generating((p.lhs[0].name, p.rhs) for p in g.productions)
    return g.start.name not in generating


def cnf_to_grammar(c: CnfGrammar) -> Grammar:
    """Render a normal-form grammar as an ordinary grammar with the same language."""
    start = nonterminal(c.start)
    productions = []
    if c.accepts_epsilon:
        productions.append(Production((start,), ()))
    for lhs, first, second in sorted(c.binary_rules, key=lambda r: (r[0] != c.start, r)):
        productions.append(Production((nonterminal(lhs),), (nonterminal(first), nonterminal(second))))
    for lhs, symbol in sorted(c.terminal_rules, key=lambda r: (r[0] != c.start, r)):
        productions.append(Production((nonterminal(lhs),), (terminal(symbol),)))
    return Grammar(
        {terminal(name) for name in c.terminals},
        {nonterminal(name) for name in c.nonterminals},
        start,
        productions,
    )
