"""
derivation.py - Breadth-first derivation search for context-sensitive and unrestricted grammars

Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the License for the specific language governing
permissions and limitations under the License.
"""
import heapq
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from prohibitiongrammar_python.grammar import (
    EPSILON,
    Grammar,
    GrammarClassError,
    GrammarInvalidArgument,
    Production,
    SymbolId,
    check_word,
    is_noncontracting,
    terminal,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 10000

Form = Tuple[SymbolId, ...]


@dataclass(frozen=True)
class Budget:
    """Resource caps for a derivation search.

    max_steps bounds the number of sentential forms whose successors are
    generated and max_form_length bounds the length of any form explored.
    """

    max_steps: int
    max_form_length: int

    def __post_init__(self):
        for name in ("max_steps", "max_form_length"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise GrammarInvalidArgument(f"Budget {name} must be a positive integer, got {value!r}")

    @classmethod
    def default_for(cls, w: Sequence[str]):
        """Default budget for a word: 10000 steps, forms up to 2*|w| + 4 symbols."""
        return cls(DEFAULT_MAX_STEPS, 2 * len(w) + 4)

    def doubled(self):
        return Budget(self.max_steps * 2, self.max_form_length * 2)

    def __le__(self, other):
        return self.max_steps <= other.max_steps and self.max_form_length <= other.max_form_length


class VerdictValue(Enum):
    """Three-valued membership answer."""

    IN = "in"
    NOT_IN = "not-in"
    UNKNOWN = "unknown"

    @property
    def exit_code(self) -> int:
        return {"in": 0, "not-in": 1, "unknown": 2}[self.value]

    @property
    def is_definitive(self) -> bool:
        return self is not VerdictValue.UNKNOWN

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    """Membership verdict, optionally carrying the derivation that proves In.

    Search-based deciders always attach the derivation to In. The DFA and CYK
    deciders answer In without one unless a trace is requested.
    """

    value: VerdictValue
    evidence: Optional[Tuple[Form, ...]] = None

    def __post_init__(self):
        if self.evidence is not None:
            if self.value is not VerdictValue.IN:
                raise GrammarInvalidArgument("Only an In verdict may carry evidence")
            object.__setattr__(self, "evidence", tuple(tuple(form) for form in self.evidence))

    @property
    def is_definitive(self) -> bool:
        return self.value.is_definitive

    def trace_lines(self) -> List[str]:
        """Evidence as one sentential form per line."""
        return [render_form(form) for form in self.evidence or ()]

    def __str__(self):
        return str(self.value)


def render_form(form: Iterable[SymbolId]) -> str:
    form = tuple(form)
    return " ".join(symbol.render() for symbol in form) if form else EPSILON


def successors(form: Form, productions: Sequence[Production]) -> Iterator[Form]:
    """Every sentential form obtained from form by one production application."""
    for position in range(len(form)):
        for production in productions:
            end = position + len(production.lhs)
            if form[position:end] == production.lhs:
                yield form[:position] + production.rhs + form[end:]


def _trace(parent: Dict[Form, Optional[Form]], form: Form) -> Tuple[Form, ...]:
    trace = [form]
    while parent[form] is not None:
        form = parent[form]
        trace.append(form)
    return tuple(reversed(trace))


def derive(
    g: Grammar,
    w: Sequence[str],
    max_steps: Optional[int],
    max_form_length: int,
    length_cap_is_exact: bool = False,
) -> Verdict:
    """Breadth-first search of the derivation graph of g for the word w.

    Sentential forms are deduplicated across the whole search and expanded in
    order of (widest form on the path, derivation length). Forms that fit under a
    smaller length cap are therefore expanded in the same order under any larger
    cap. Forms longer than max_form_length are not explored; unless
    length_cap_is_exact is set (the grammar can never shrink a form back below
    the cap), pruning one forfeits a definitive NotIn.

    Args:
        g (Grammar): Any valid grammar
        w (sequence): Terminal names
        max_steps (int): Maximum number of sentential forms expanded, None for no limit
        max_form_length (int): Cap on sentential-form length
        length_cap_is_exact (bool): Pruned forms cannot lead to w

    Returns:
        Verdict: In with a derivation trace, NotIn when the reachable forms were
        exhausted within both caps, Unknown otherwise
    """
    target = tuple(terminal(symbol) for symbol in w)
    start: Form = (g.start,)
    parent: Dict[Form, Optional[Form]] = {start: None}
    queue: List[Tuple[int, int, int, Form]] = [(1, 0, 0, start)]
    counter = itertools.count(1)
    capped = False
    expanded = 0
    while queue:
        if max_steps is not None and expanded >= max_steps:
            logger.debug("derivation search: step cap %d reached, %d forms seen", max_steps, len(parent))
            return Verdict(VerdictValue.UNKNOWN)
        width, depth, _, form = heapq.heappop(queue)
        expanded += 1
        for successor in successors(form, g.productions):
            if len(successor) > max_form_length:
                capped = True
                continue
            if successor in parent:
                continue
            parent[successor] = form
            if successor == target:
                logger.debug(
                    "derivation search: found at depth %d after %d expansions", depth + 1, expanded
                )
                return Verdict(VerdictValue.IN, _trace(parent, successor))
            # every left-hand side holds a nonterminal, so terminal words are dead ends
            if any(symbol.is_nonterminal for symbol in successor):
                entry = (max(width, len(successor)), depth + 1, next(counter), successor)
                heapq.heappush(queue, entry)
    logger.debug(
        "derivation search: saturated after %d expansions, %d forms seen, capped=%s",
        expanded,
        len(parent),
        capped,
    )
    if capped and not length_cap_is_exact:
        return Verdict(VerdictValue.UNKNOWN)
    return Verdict(VerdictValue.NOT_IN)


def cs_verdict(g: Grammar, w: Iterable[str]) -> Verdict:
    """Exact membership verdict for a noncontracting grammar, with evidence when In.

    Raises:
        GrammarClassError: The grammar is not noncontracting
        GrammarAlphabetError: A symbol of w is outside the alphabet
    """
    if not is_noncontracting(g):
        raise GrammarClassError("not-context-sensitive: grammar has a contracting production")
    w = check_word(g.terminal_names, w)
    if not w:
        if Production((g.start,), ()) in g.productions:
            return Verdict(VerdictValue.IN, ((g.start,), ()))
        return Verdict(VerdictValue.NOT_IN)
    return derive(g, w, None, len(w), length_cap_is_exact=True)


def cs_member(g: Grammar, w: Iterable[str]) -> bool:
    """Decide membership for a noncontracting grammar by saturating search over forms no longer than w."""
    return cs_verdict(g, w).value is VerdictValue.IN


def t0_member(g: Grammar, w: Iterable[str], b: Budget) -> Verdict:
    """Budgeted semi-decision of membership for an unrestricted grammar.

    Args:
        g (Grammar): Any valid grammar
        w (iterable): Terminal names
        b (Budget): Expansion and sentential-form caps

    Raises:
        GrammarAlphabetError: A symbol of w is outside the alphabet

    Returns:
        Verdict
    """
    w = check_word(g.terminal_names, w)
    return derive(g, w, b.max_steps, b.max_form_length)


def replay(g: Grammar, trace: Sequence[Form]) -> bool:
    """Check that a trace starts at the start symbol and each form follows from the previous by one production."""
    if not trace or tuple(trace[0]) != (g.start,):
        return False
    for previous, current in zip(trace, trace[1:]):
        if tuple(current) not in set(successors(tuple(previous), g.productions)):
            return False
    return True
