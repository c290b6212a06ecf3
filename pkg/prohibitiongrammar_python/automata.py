"""
automata.py - Finite automata for regular grammars and the Boolean constructions on them

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import functools
import logging
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
)

from prohibitiongrammar_python.grammar import (
    ChomskyClass,
    Grammar,
    GrammarAlphabetError,
    GrammarClassError,
    GrammarInvalidArgument,
    Production,
    check_word,
    classify,
    fresh_name,
    nonterminal,
    terminal,
)
from prohibitiongrammar_python.utils import Utils

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
State = Hashable

# Label of an epsilon move, and the accepting sink of a grammar-derived NFA.
EPSILON_MOVE = None
ACCEPT_STATE = "<accept>"


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton; a transition label of None is an epsilon move."""

    states: FrozenSet[State]
    alphabet: FrozenSet[str]
    transitions: FrozenSet[Tuple[State, Optional[str], State]]
    start: State
    accepting: FrozenSet[State]

    def __post_init__(self):
        for name in ("states", "alphabet", "transitions", "accepting"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.start not in self.states:
            raise GrammarInvalidArgument(f"Start state {self.start!r} is not a declared state")
        if not self.accepting <= self.states:
            raise GrammarInvalidArgument("Accepting states must be declared states")
        for source, symbol, target in self.transitions:
            if source not in self.states or target not in self.states:
                raise GrammarInvalidArgument(
                    f"Transition {source!r} -> {target!r} uses an undeclared state"
                )
            if symbol is not EPSILON_MOVE and symbol not in self.alphabet:
                raise GrammarAlphabetError(f"symbol-not-in-alphabet: {symbol}")

    @classmethod
    def from_dfa(cls, d: "Dfa"):
        """View a DFA as an NFA without epsilon moves."""
        transitions = {(s, a, t) for (s, a), t in d.transition.items()}
        return cls(d.states, d.alphabet, transitions, d.start, d.accepting)

    @functools.cached_property
    def _moves(self) -> Dict[Tuple[State, Optional[str]], FrozenSet[State]]:
        moves: Dict[Tuple[State, Optional[str]], set] = {}
        for source, symbol, target in self.transitions:
            moves.setdefault((source, symbol), set()).add(target)
        return {key: frozenset(value) for key, value in moves.items()}

    def epsilon_closure(self, states: Iterable[State]) -> FrozenSet[State]:
        closure = set(states)
        stack = list(closure)
        while stack:
            state = stack.pop()
            for target in self._moves.get((state, EPSILON_MOVE), ()):
                if target not in closure:
                    closure.add(target)
                    stack.append(target)
        return frozenset(closure)

    def step(self, states: Iterable[State], symbol: str) -> FrozenSet[State]:
        targets = set()
        for state in states:
            targets.update(self._moves.get((state, symbol), ()))
        return self.epsilon_closure(targets)

    def accepts(self, word: Iterable[str]) -> bool:
        current = self.epsilon_closure([self.start])
        for symbol in word:
            current = self.step(current, symbol)
        return bool(current & self.accepting)


@dataclass(frozen=True)
class Dfa:
    """Deterministic automaton with a total transition function."""

    states: FrozenSet[State]
    alphabet: FrozenSet[str]
    transition: Mapping[Tuple[State, str], State] = field(hash=False)
    start: State = 0
    accepting: FrozenSet[State] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transition", MappingProxyType(dict(self.transition)))
        if self.start not in self.states:
            raise GrammarInvalidArgument(f"Start state {self.start!r} is not a declared state")
        if not self.accepting <= self.states:
            raise GrammarInvalidArgument("Accepting states must be declared states")
        for state in self.states:
            for symbol in self.alphabet:
                target = self.transition.get((state, symbol))
                if target not in self.states:
                    raise GrammarInvalidArgument(
                        f"Transition function is not total at ({state!r}, {symbol})"
                    )

    @classmethod
    def empty(cls, alphabet: Iterable[str]):
        """Single non-accepting sink: accepts nothing."""
        alphabet = frozenset(alphabet)
        return cls({0}, alphabet, {(0, a): 0 for a in alphabet}, 0, frozenset())

    @classmethod
    def universal(cls, alphabet: Iterable[str]):
        """Single accepting state: accepts every word over the alphabet."""
        alphabet = frozenset(alphabet)
        return cls({0}, alphabet, {(0, a): 0 for a in alphabet}, 0, {0})

    @property
    def symbols(self) -> List[str]:
        return sorted(self.alphabet)

    def run(self, word: Iterable[str]) -> State:
        state = self.start
        for symbol in word:
            state = self.transition[(state, symbol)]
        return state

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) in self.accepting

    def reachable(self) -> List[State]:
        """States reachable from start, in breadth-first order over sorted symbols."""
        order = [self.start]
        seen = {self.start}
        for state in order:
            for symbol in self.symbols:
                target = self.transition[(state, symbol)]
                if target not in seen:
                    seen.add(target)
                    order.append(target)
        return order

    def coreachable(self) -> FrozenSet[State]:
        """States from which some accepting state is reachable."""
        incoming: Dict[State, set] = {}
        for (source, _), target in self.transition.items():
            incoming.setdefault(target, set()).add(source)
        found = set(self.accepting)
        stack = list(found)
        while stack:
            state = stack.pop()
            for source in incoming.get(state, ()):
                if source not in found:
                    found.add(source)
                    stack.append(source)
        return frozenset(found)


class Equivalence(NamedTuple):
    """Outcome of a language-equivalence check, truthy iff the languages are equal."""

    equal: bool
    counterexample: Optional[Word] = None

    def __bool__(self):
        return self.equal


def _crawl(
    alphabet: FrozenSet[str],
    initial: Hashable,
    follow: Callable[[Hashable, str], Hashable],
    final: Callable[[Hashable], bool],
) -> Dfa:
    """Explore the states reachable from initial and number them breadth-first."""
    symbols = sorted(alphabet)
    index = {initial: 0}
    order = [initial]
    transition = {}
    for current in order:
        for symbol in symbols:
            target = follow(current, symbol)
            if target not in index:
                index[target] = len(order)
                order.append(target)
            transition[(index[current], symbol)] = index[target]
    accepting = {index[state] for state in order if final(state)}
    return Dfa(range(len(order)), alphabet, transition, 0, accepting)


def _require_shared_alphabet(a, b):
    if a.alphabet != b.alphabet:
        raise GrammarAlphabetError(
            f"alphabet mismatch: {sorted(a.alphabet)} vs {sorted(b.alphabet)}"
        )


def regular_to_nfa(g: Grammar) -> Nfa:
    """Translate a right-linear grammar into an NFA over its terminal names.

    Nonterminals become states; A -> a B is a move on a, A -> a moves to an extra
    accepting state and A -> eps makes A accepting.

    Raises:
        GrammarClassError: The grammar is not right-linear
    """
    if classify(g) is not ChomskyClass.TYPE3:
        raise GrammarClassError(f"not-right-linear: classifies as {classify(g)}")
    states = set(g.nonterminal_names) | {ACCEPT_STATE}
    transitions = set()
    accepting = {ACCEPT_STATE}
    for production in g.productions:
        source = production.lhs[0].name
        rhs = production.rhs
        if not rhs:
            accepting.add(source)
        elif len(rhs) == 1:
            transitions.add((source, rhs[0].name, ACCEPT_STATE))
        else:
            transitions.add((source, rhs[0].name, rhs[1].name))
    return Nfa(states, g.terminal_names, transitions, g.start.name, accepting)


def determinize(n: Nfa) -> Dfa:
    """Subset construction. The empty subset, when reached, is the sink state."""
    result = _crawl(
        n.alphabet,
        n.epsilon_closure([n.start]),
        n.step,
        lambda subset: bool(subset & n.accepting),
    )
    logger.debug("determinized %d NFA states into %d DFA states", len(n.states), len(result.states))
    return result


def complement(d: Dfa) -> Dfa:
    """Flip the accepting states of the (total) DFA."""
    return Dfa(d.states, d.alphabet, d.transition, d.start, d.states - d.accepting)


def _product(a: Dfa, b: Dfa, accept: Callable[[bool, bool], bool]) -> Dfa:
    _require_shared_alphabet(a, b)
    return _crawl(
        a.alphabet,
        (a.start, b.start),
        lambda pair, symbol: (a.transition[(pair[0], symbol)], b.transition[(pair[1], symbol)]),
        lambda pair: accept(pair[0] in a.accepting, pair[1] in b.accepting),
    )


def intersect(a: Dfa, b: Dfa) -> Dfa:
    """Product automaton accepting L(a) and L(b)."""
    return _product(a, b, lambda x, y: x and y)


def union(a: Dfa, b: Dfa) -> Dfa:
    """Product automaton accepting L(a) or L(b)."""
    return _product(a, b, lambda x, y: x or y)


def difference(a: Dfa, b: Dfa) -> Dfa:
    """Automaton for L(a) minus L(b), as intersect(a, complement(b))."""
    _require_shared_alphabet(a, b)
    return intersect(a, complement(b))


def minimize(d: Dfa) -> Dfa:
    """Drop unreachable states and merge equivalent ones by partition refinement.

    States of the result are numbered breadth-first from the start state, so two
    minimal automata for one language come out identical.
    """
    reachable = d.reachable()
    symbols = d.symbols
    block = {state: int(state in d.accepting) for state in reachable}
    count = len(set(block.values()))
    while True:
        signatures: Dict[tuple, int] = {}
        refined = {}
        for state in reachable:
            signature = (block[state],) + tuple(
                block[d.transition[(state, symbol)]] for symbol in symbols
            )
            refined[state] = signatures.setdefault(signature, len(signatures))
        block = refined
        if len(signatures) == count:
            break
        count = len(signatures)

    representative = {}
    for state in reachable:
        representative.setdefault(block[state], state)
    result = _crawl(
        d.alphabet,
        block[d.start],
        lambda b, symbol: block[d.transition[(representative[b], symbol)]],
        lambda b: representative[b] in d.accepting,
    )
    logger.debug("minimized %d states into %d", len(d.states), len(result.states))
    return result


def equivalent(a: Dfa, b: Dfa) -> Equivalence:
    """Decide L(a) = L(b) by a breadth-first search of the product automaton.

    Returns:
        Equivalence: equal flag, plus the shortest (then lexicographically least)
        distinguishing word when the languages differ
    """
    _require_shared_alphabet(a, b)
    symbols = a.symbols
    initial = (a.start, b.start)
    parent: Dict[tuple, Optional[tuple]] = {initial: None}
    queue = deque([initial])
    while queue:
        pair = queue.popleft()
        if (pair[0] in a.accepting) != (pair[1] in b.accepting):
            word = []
            while parent[pair] is not None:
                pair, symbol = parent[pair]
                word.append(symbol)
            return Equivalence(False, tuple(reversed(word)))
        for symbol in symbols:
            target = (a.transition[(pair[0], symbol)], b.transition[(pair[1], symbol)])
            if target not in parent:
                parent[target] = (pair, symbol)
                queue.append(target)
    return Equivalence(True)


def dfa_to_regular_grammar(d: Dfa) -> Grammar:
    """Deliver the language of a DFA as a right-linear grammar.

    Only live states (reachable and co-reachable) produce rules. A move into an
    accepting state yields A -> a; a move into a state with live successors
    yields A -> a B; an accepting start state yields S -> eps.
    """
    alphabet = {terminal(name) for name in d.alphabet}
    live = set(d.reachable()) & d.coreachable()
    start_name = fresh_name("S", d.alphabet)
    if d.start not in live:
        return Grammar.empty(alphabet, start_name)

    symbols = d.symbols
    names = {d.start: start_name}
    order = [d.start]
    productions: List[Production] = []

    def has_live_successor(state):
        return any(d.transition[(state, symbol)] in live for symbol in symbols)

    for state in order:
        lhs = (nonterminal(names[state]),)
        if state == d.start and state in d.accepting:
            productions.append(Production(lhs, ()))
        for symbol in symbols:
            target = d.transition[(state, symbol)]
            if target not in live:
                continue
            if target in d.accepting:
                productions.append(Production(lhs, (terminal(symbol),)))
            if has_live_successor(target):
                if target not in names:
                    names[target] = fresh_name(f"Q{len(names)}", d.alphabet)
                    order.append(target)
                productions.append(
                    Production(lhs, (terminal(symbol), nonterminal(names[target])))
                )

    nonterminals = {nonterminal(names[state]) for state in order}
    grammar = Grammar(alphabet, nonterminals, nonterminal(start_name), productions)
    logger.debug("regular grammar from DFA: %d productions", len(productions))
    return grammar


def dfa_member(d: Dfa, w: Iterable[str]) -> bool:
    """Run the DFA on w.

    Raises:
        GrammarAlphabetError: A symbol of w is not in the DFA alphabet
    """
    return d.accepts(check_word(d.alphabet, w))


@functools.lru_cache(maxsize=128)
def compile_regular(g: Grammar) -> Dfa:
    """Minimal DFA for a right-linear grammar."""
    return minimize(determinize(regular_to_nfa(g)))


def _canonical_states(d: Dfa) -> List[State]:
    reachable = d.reachable()
    rest = sorted(set(d.states) - set(reachable), key=repr)
    return reachable + rest


def export_dfa(d: Dfa) -> str:
    """Render the DFA as a text adjacency listing.

    The first line holds the start state, the second the accepting states, then
    one ``state symbol state`` line per transition. States are renumbered
    breadth-first from the start state.
    """
    number = {state: index for index, state in enumerate(_canonical_states(d))}
    rows = [
        {"source": number[state], "symbol": symbol, "target": number[d.transition[(state, symbol)]]}
        for state in _canonical_states(d)
        for symbol in d.symbols
    ]
    return Utils.render_template(
        "dfa.txt.j2",
        template_vars={
            "start": number[d.start],
            "accepting": sorted(number[state] for state in d.accepting),
            "rows": rows,
        },
    )


def parse_dfa_listing(text: str) -> Dfa:
    """Read a DFA back from the adjacency listing written by :func:`export_dfa`."""
    lines = text.splitlines()
    if len(lines) < 2:
        raise GrammarInvalidArgument("DFA listing needs a start line and an accepting line")

    def state_id(token):
        return int(token) if token.isdigit() else token

    start = state_id(lines[0].strip())
    accepting = {state_id(token) for token in lines[1].split()}
    states = {start} | accepting
    alphabet = set()
    transition = {}
    for line in lines[2:]:
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GrammarInvalidArgument(f"Malformed DFA listing line: {line!r}")
        source, symbol, target = state_id(parts[0]), parts[1], state_id(parts[2])
        states.update((source, target))
        alphabet.add(symbol)
        transition[(source, symbol)] = target
    return Dfa(states, alphabet, transition, start, accepting)
