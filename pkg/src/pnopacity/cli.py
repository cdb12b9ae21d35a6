"""Command-line interface: check, oracle, and export subcommands.

Exit code contract (stable, for CI pipelines):
  0  the property holds (or the export succeeded)
  1  the property is violated — a finding, not an error
  2  input or assumption error (parse/semantic errors, cyclic unobservable
     subnet, secret not closed under unobservable reach, validation failure)
  3  an exploration bound was exceeded (potentially unbounded net)
"""

from __future__ import annotations

import json
import sys
from typing import Sequence

import click

from .automata import observer, reverse
from .basis import Brg, Secret, build_brg, check_secret_closure, secret_basis_partition
from .dot import render_dfa, render_lts, render_two_way
from .errors import (
    BoundExceeded,
    CyclicUnobservableSubnet,
    ParseError,
    SemanticError,
)
from .net import LabeledPetriNet, Marking, format_marking, validate_net
from .netfile import parse_net_document, to_system
from .oracle import brute_force_infinite_step, brute_force_k_step
from .reachability import BoundConfig, build_rg
from .twoway import (
    OpacityVerdict,
    TwObserver,
    build_two_way,
    check_infinite_step,
    check_k_step,
    extract_witness,
    format_tagged,
)

EXIT_OPAQUE = 0
EXIT_NOT_OPAQUE = 1
EXIT_INPUT_ERROR = 2
EXIT_BOUND_EXCEEDED = 3


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(netfile: str, max_states: int | None, max_token: int | None):
    with open(netfile, "r", encoding="utf-8") as handle:
        doc = parse_net_document(handle.read())
    lpn, secret, cfg, depth = to_system(doc)
    if max_states is not None or max_token is not None:
        cfg = BoundConfig(
            max_states=max_states if max_states is not None else cfg.max_states,
            max_token=max_token if max_token is not None else cfg.max_token,
        )
    return lpn, secret, cfg, depth


def _validated(lpn: LabeledPetriNet) -> None:
    report = validate_net(lpn)
    for issue in report.warnings:
        click.echo(f"warning: {issue.code}: {issue.message}", err=True)
    if not report.ok:
        for issue in report.errors:
            click.echo(f"error: {issue.code}: {issue.message}", err=True)
        sys.exit(EXIT_INPUT_ERROR)


def _resolve_property(prop: str, k: int | None) -> tuple[str, int | None]:
    """Map the flag pair to (display label, k); k None means infinite."""
    if prop == "infinite":
        return "infinite-step", None
    if prop == "current":
        return "current-state", 0
    if k is None:
        _fail("--property k requires --k", EXIT_INPUT_ERROR)
    return f"{k}-step", k


def _marking_dict(m: Marking, places: Sequence[str]) -> dict[str, int]:
    return {p: c for p, c in zip(places, m.counts) if c}


def _marking_names(markings, places) -> str:
    names = sorted(format_marking(m, places) for m in markings)
    return "{" + ", ".join(names) + "}"


def _guarded(body):
    try:
        body()
    except (ParseError, SemanticError) as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)
    except CyclicUnobservableSubnet as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)
    except BoundExceeded as exc:
        _fail(str(exc), EXIT_BOUND_EXCEEDED)


@click.group()
def main():
    """Decide infinite-step and K-step opacity of bounded labeled Petri nets.

    Exit codes: 0 opaque / success, 1 not opaque, 2 input or assumption
    error, 3 exploration bound exceeded.
    """


def _observers(brg: Brg):
    bo = observer(brg.graph, brg.graph.initial)
    be = observer(reverse(brg.graph), range(len(brg.graph.states)))
    return bo, be


def _enforce_closure(lpn: LabeledPetriNet, brg: Brg, secret: Secret, cfg: BoundConfig):
    closure = check_secret_closure(lpn, brg, secret, cfg)
    if not closure.holds:
        places = lpn.net.places
        for basis, escaped in closure.violations:
            click.echo(
                "error: secret not closed under unobservable reach: "
                f"{format_marking(basis, places)} is secret but reaches "
                f"{format_marking(escaped, places)} silently",
                err=True,
            )
        sys.exit(EXIT_INPUT_ERROR)
    return closure


def _verdict_exit(verdict: OpacityVerdict) -> None:
    sys.exit(EXIT_OPAQUE if verdict.opaque else EXIT_NOT_OPAQUE)


@main.command()
@click.argument("netfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--property", "prop", type=click.Choice(["infinite", "k", "current"]),
              default="infinite", show_default=True,
              help="Opacity property to decide; 'k' needs --k.")
@click.option("--k", type=click.IntRange(min=0), default=None,
              help="Step bound for --property k.")
@click.option("--max-states", type=click.IntRange(min=1), default=None,
              help="Override the document's marking cap.")
@click.option("--max-token", type=click.IntRange(min=0), default=None,
              help="Override the document's per-place token cap.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
def check(netfile, prop, k, max_states, max_token, fmt):
    """Decide opacity through the basis-graph pipeline."""

    def body():
        label, kk = _resolve_property(prop, k)
        lpn, secret, cfg, _ = _load(netfile, max_states, max_token)
        _validated(lpn)
        brg = build_brg(lpn, cfg)
        closure = _enforce_closure(lpn, brg, secret, cfg)
        bo, be = _observers(brg)
        split = secret_basis_partition(brg, secret)
        tw = build_two_way(bo, be, k=kk)
        if kk is None:
            verdict = check_infinite_step(tw, split, closure)
        else:
            verdict = check_k_step(tw, split, closure)
        places = lpn.net.places
        witnesses = () if verdict.opaque else extract_witness(verdict, tw)
        if fmt == "json":
            click.echo(json.dumps(
                _check_report(lpn, brg, tw, label, kk, verdict, witnesses),
                indent=2, sort_keys=True))
        else:
            _echo_check_text(lpn, brg, tw, label, verdict, witnesses, places)
        _verdict_exit(verdict)

    _guarded(body)


def _check_report(lpn, brg: Brg, tw: TwObserver, label, k, verdict, witnesses):
    places = lpn.net.places
    graph = brg.graph
    violations = []
    for violation, witness in zip(verdict.violations, witnesses):
        first, second = tw.component_sets(violation.state)
        violations.append({
            "observer_set": [_marking_dict(graph.states[i], places) for i in sorted(first)],
            "estimator_set": [_marking_dict(graph.states[i], places) for i in sorted(second)],
            "intersection": [_marking_dict(graph.states[i], places)
                             for i in violation.intersection],
            "witness": {
                "prefix": list(witness.revealed_prefix),
                "suffix": list(witness.exposing_suffix),
                "path": [format_tagged(ev) for ev in witness.events],
            },
        })
    return {
        "command": "check",
        "property": label,
        "k": k,
        "verdict": "opaque" if verdict.opaque else "not-opaque",
        "sizes": _sizes(brg, tw),
        "violations": violations,
    }


def _sizes(brg: Brg, tw: TwObserver) -> dict[str, int]:
    return {
        "basis_states": len(brg.graph.states),
        "basis_edges": len(brg.graph.edges),
        "observer_states": len(tw.observer.states),
        "estimator_states": len(tw.estimator.states),
        "two_way_states": len(tw.states),
        "two_way_edges": len(tw.delta),
    }


def _echo_check_text(lpn, brg: Brg, tw: TwObserver, label, verdict, witnesses, places):
    graph = brg.graph
    sizes = _sizes(brg, tw)
    click.echo(f"property: {label} opacity")
    click.echo(
        "graphs: basis={basis_states} states/{basis_edges} edges, "
        "observer={observer_states}, estimator={estimator_states}, "
        "two-way={two_way_states} states/{two_way_edges} edges".format(**sizes))
    click.echo(f"verdict: {'OPAQUE' if verdict.opaque else 'NOT OPAQUE'}")
    if not verdict.opaque:
        click.echo(f"violations ({len(verdict.violations)}):")
        for violation, witness in zip(verdict.violations, witnesses):
            first, second = tw.component_sets(violation.state)
            inter = _marking_names((graph.states[i] for i in violation.intersection), places)
            click.echo(
                f"  - state ({_marking_names((graph.states[i] for i in first), places)}, "
                f"{_marking_names((graph.states[i] for i in second), places)}) "
                f"intersection {inter}")
            click.echo(f"    {witness.describe()}")


@main.command()
@click.argument("netfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--property", "prop", type=click.Choice(["infinite", "k", "current"]),
              default="infinite", show_default=True)
@click.option("--k", type=click.IntRange(min=0), default=None)
@click.option("--depth", type=click.IntRange(min=0), default=None,
              help="Observation/suffix length bound; defaults to the document "
                   "option or |reachable markings| + k.")
@click.option("--max-states", type=click.IntRange(min=1), default=None)
@click.option("--max-token", type=click.IntRange(min=0), default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
def oracle(netfile, prop, k, depth, max_states, max_token, fmt):
    """Decide opacity by bounded brute force on the full reachability graph."""

    def body():
        label, kk = _resolve_property(prop, k)
        lpn, secret, cfg, doc_depth = _load(netfile, max_states, max_token)
        _validated(lpn)
        rg = build_rg(lpn, cfg)
        unreachable = sorted(
            (m for m in secret.members if m not in rg.index),
            key=lambda m: m.counts)
        if unreachable:
            names = ", ".join(format_marking(m, lpn.net.places) for m in unreachable)
            raise SemanticError(f"secret markings not reachable: {names}", "secret")
        effective = depth if depth is not None else doc_depth
        if effective is None:
            effective = len(rg.states) + (kk or 0)
        if kk is None:
            verdict = brute_force_infinite_step(lpn, secret, effective, cfg)
        else:
            if effective < kk:
                effective = kk
            verdict = brute_force_k_step(lpn, secret, kk, effective, cfg)
        if fmt == "json":
            click.echo(json.dumps(_oracle_report(label, kk, verdict, rg), indent=2,
                                  sort_keys=True))
        else:
            _echo_oracle_text(label, verdict, rg)
        _verdict_exit(verdict)

    _guarded(body)


def _oracle_report(label, k, verdict: OpacityVerdict, rg):
    return {
        "command": "oracle",
        "property": label,
        "k": k,
        "verdict": "opaque" if verdict.opaque else "not-opaque",
        "certified_depth": verdict.certified_depth,
        "complete": verdict.complete,
        "reachable_markings": len(rg.states),
        "violations": [
            {"observation": list(v.observation), "suffix": list(v.suffix)}
            for v in verdict.violations
        ],
    }


def _echo_oracle_text(label, verdict: OpacityVerdict, rg):
    click.echo(f"property: {label} opacity (brute force)")
    click.echo(f"reachable markings: {len(rg.states)}")
    if verdict.opaque:
        scope = ("complete (search saturated)" if verdict.complete
                 else f"certified up to depth {verdict.certified_depth}")
        click.echo(f"verdict: OPAQUE [{scope}]")
    else:
        click.echo("verdict: NOT OPAQUE")
        for v in verdict.violations:
            obs = "".join(v.observation) or "ε"
            suffix = "".join(v.suffix) or "ε"
            click.echo(f"  - after observing {obs!r}, secret-only continuation {suffix!r}")


@main.command()
@click.argument("netfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--dot", "artifact",
              type=click.Choice(["rg", "brg", "observer", "estimator", "tw", "ktw"]),
              required=True, help="Which graph to render.")
@click.option("--k", type=click.IntRange(min=0), default=None,
              help="Step bound; required for --dot ktw.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write to a file instead of standard output.")
@click.option("--max-states", type=click.IntRange(min=1), default=None)
@click.option("--max-token", type=click.IntRange(min=0), default=None)
def export(netfile, artifact, k, out, max_states, max_token):
    """Render a graph artifact as deterministic Graphviz DOT."""

    def body():
        lpn, secret, cfg, _ = _load(netfile, max_states, max_token)
        _validated(lpn)
        places = lpn.net.places
        if artifact == "rg":
            text = render_lts(build_rg(lpn, cfg), places, "reachability")
        elif artifact == "brg":
            text = render_lts(build_brg(lpn, cfg).graph, places, "basis")
        else:
            if artifact == "ktw" and k is None:
                _fail("--dot ktw requires --k", EXIT_INPUT_ERROR)
            brg = build_brg(lpn, cfg)
            bo, be = _observers(brg)
            if artifact == "observer":
                text = render_dfa(bo, brg.graph, places, "observer")
            elif artifact == "estimator":
                text = render_dfa(be, brg.graph, places, "estimator")
            else:
                kk = None if artifact == "tw" else k
                tw = build_two_way(bo, be, k=kk)
                violating = ()
                if secret.members:
                    closure = _enforce_closure(lpn, brg, secret, cfg)
                    split = secret_basis_partition(brg, secret)
                    if kk is None:
                        verdict = check_infinite_step(tw, split, closure)
                    else:
                        verdict = check_k_step(tw, split, closure)
                    violating = tuple(v.state for v in verdict.violations)
                title = "two_way" if kk is None else f"two_way_k{kk}"
                text = render_two_way(tw, brg.graph, places, violating, title)
        if out is None:
            click.echo(text, nl=False)
        else:
            with open(out, "w", encoding="utf-8") as handle:
                handle.write(text)
        sys.exit(EXIT_OPAQUE)

    _guarded(body)


if __name__ == "__main__":
    main()
