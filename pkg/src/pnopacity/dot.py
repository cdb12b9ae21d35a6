"""Deterministic Graphviz DOT rendering for every graph artifact.

Output is byte-stable: nodes are emitted in state order and edges in sorted
order, and nothing depends on hash iteration.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .automata import Dfa
from .net import Marking, format_marking
from .reachability import Lts
from .twoway import TwObserver, TwState, format_tagged


def _quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def _marking_name(payload, places: Sequence[str]) -> str:
    if isinstance(payload, Marking):
        return format_marking(payload, places)
    return str(payload)


def render_lts(lts: Lts, places: Sequence[str], title: str) -> str:
    """Render a marking graph; silent edges are dashed and labeled with ε."""
    lines = [f"digraph {_quote(title)} {{", "  rankdir=LR;", "  node [shape=ellipse];"]
    for i, payload in enumerate(lts.states):
        extra = ", peripheries=2" if i in lts.initial else ""
        lines.append(f"  n{i} [label={_quote(_marking_name(payload, places))}{extra}];")
    rendered = []
    for e in lts.edges:
        label = e.label if e.label is not None else "ε"
        if e.trans is not None:
            label = f"{label} [{e.trans}]"
        style = ", style=dashed" if e.label is None else ""
        rendered.append((e.src, e.dst, label, style))
    for src, dst, label, style in sorted(rendered):
        lines.append(f"  n{src} -> n{dst} [label={_quote(label)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _state_set_name(indices: Iterable[int], lts: Lts, places: Sequence[str]) -> str:
    names = [_marking_name(lts.states[i], places) for i in sorted(indices)]
    return "{" + ",".join(names) + "}"


def render_dfa(dfa: Dfa, source: Lts, places: Sequence[str], title: str) -> str:
    """Render an observer/estimator; nodes show their underlying marking sets."""
    lines = [f"digraph {_quote(title)} {{", "  rankdir=LR;", "  node [shape=box];"]
    for i, subset in enumerate(dfa.states):
        extra = ", peripheries=2" if i == dfa.initial else ""
        lines.append(
            f"  n{i} [label={_quote(_state_set_name(subset, source, places))}{extra}];")
    for (src, letter), dst in sorted(dfa.delta.items()):
        lines.append(f"  n{src} -> n{dst} [label={_quote(letter)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_two_way(
    tw: TwObserver,
    source: Lts,
    places: Sequence[str],
    violating: Iterable[TwState] = (),
    title: str = "two_way",
) -> str:
    """Render the paired graph; violating states are filled red."""
    flagged = set(violating)
    order = {q: i for i, q in enumerate(tw.states)}
    lines = [f"digraph {_quote(title)} {{", "  rankdir=LR;", "  node [shape=box];"]
    for q, i in order.items():
        first = _state_set_name(tw.observer.states[q.first], source, places)
        second = _state_set_name(tw.estimator.states[q.second], source, places)
        extra = ", peripheries=2" if q == tw.initial else ""
        if q in flagged:
            extra += ', style=filled, fillcolor="indianred1"'
        lines.append(f"  n{i} [label={_quote(f'({first},{second})')}{extra}];")
    rendered = sorted(
        (order[q], order[q2], format_tagged(ev)) for (q, ev), q2 in tw.delta.items()
    )
    for src, dst, label in rendered:
        lines.append(f"  n{src} -> n{dst} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
