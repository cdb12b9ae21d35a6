"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. Criteria 6-8 run over a seeded corpus of 200 random bounded nets with
acyclic silent subnets and secrets closed under silent reach (see gen.py).
"""

from __future__ import annotations

import itertools
import time
from contextlib import contextmanager

import pytest
from click.testing import CliRunner

from pnopacity import (
    build_brg,
    build_rg,
    build_two_way,
    brute_force_infinite_step,
    brute_force_k_step,
    check_infinite_step,
    check_k_step,
    check_secret_closure,
    language_upto,
    minimal_explanations,
    observer,
    reverse,
    run,
    secret_basis_partition,
    unobservable_reach,
)
from pnopacity.cli import main as cli_main

from gen import Instance, describe_instance
from helpers import DEMO_PATH, chain_marking, demo_lpn, demo_secret
from oracles import nd_observation_reach, unmodified_two_way

DEMO = demo_lpn()
SECRET = demo_secret()
M = {i: chain_marking(i) for i in range(7)}


@contextmanager
def criterion(number: int, label: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} ({label}): FAIL")
        raise
    print(f"ACCEPTANCE {number} ({label}): PASS")


def payloads(index_set, graph):
    return frozenset(graph.states[i] for i in index_set)


def pipeline(lpn, secret, cfg=None):
    kwargs = {} if cfg is None else {"cfg": cfg}
    brg = build_brg(lpn, **kwargs)
    closure = check_secret_closure(lpn, brg, secret, **kwargs)
    split = secret_basis_partition(brg, secret)
    bo = observer(brg.graph, brg.graph.initial)
    be = observer(reverse(brg.graph), range(len(brg.graph.states)))
    return brg, closure, split, bo, be


def test_criterion_1_graph_sizes():
    with criterion(1, "reachability and basis graph sizes"):
        started = time.perf_counter()
        rg = build_rg(DEMO)
        brg = build_brg(DEMO)
        elapsed = time.perf_counter() - started
        assert len(rg.states) == 7
        assert set(brg.graph.states) == {M[0], M[2], M[3], M[6]}
        assert len(brg.graph.states) == 4
        assert elapsed < 1.0


def test_criterion_2_estimator_run():
    with criterion(2, "estimator run on 'ba'"):
        brg = build_brg(DEMO)
        be = observer(reverse(brg.graph), range(len(brg.graph.states)))
        reached = run(be, "ba")
        assert payloads(reached, brg.graph) == {M[0]}


def test_criterion_3_two_way_content():
    with criterion(3, "two-way observer state and path"):
        brg, _, _, bo, be = pipeline(DEMO, SECRET)
        tw = build_two_way(bo, be)
        q = tw.initial
        for ev in [(None, "a"), ("a", None), ("b", None)]:
            assert (q, ev) in tw.delta
            q = tw.delta[(q, ev)]
        first, second = tw.component_sets(q)
        assert payloads(first, brg.graph) == {M[6]}
        assert payloads(second, brg.graph) == {M[0], M[2], M[6]}


def test_criterion_4_verdicts_and_exit_codes():
    with criterion(4, "verdicts: infinite/0-step/1-step with exit codes 1/0/1"):
        started = time.perf_counter()
        brg, closure, split, bo, be = pipeline(DEMO, SECRET)
        verdict = check_infinite_step(build_two_way(bo, be), split, closure)
        assert not verdict.opaque
        intersections = [payloads(v.intersection, brg.graph) for v in verdict.violations]
        assert {M[2]} in intersections
        assert check_k_step(build_two_way(bo, be, k=0), split, closure).opaque
        assert not check_k_step(build_two_way(bo, be, k=1), split, closure).opaque

        runner = CliRunner()
        codes = [
            runner.invoke(cli_main, ["check", str(DEMO_PATH), "--property", prop, *extra]).exit_code
            for prop, extra in [("infinite", []), ("k", ["--k", "0"]), ("k", ["--k", "1"])]
        ]
        assert codes == [1, 0, 1]
        assert time.perf_counter() - started < 1.0


def test_criterion_5_oracle_agreement_on_demo():
    with criterion(5, "brute-force oracle agrees on the demo net"):
        _, closure, split, bo, be = pipeline(DEMO, SECRET)
        tw_inf = check_infinite_step(build_two_way(bo, be), split, closure)
        assert brute_force_infinite_step(DEMO, SECRET, 4).opaque == tw_inf.opaque
        for k in (0, 1, 2):
            tw_k = check_k_step(build_two_way(bo, be, k=k), split, closure)
            assert brute_force_k_step(DEMO, SECRET, k, 4).opaque == tw_k.opaque


def _verdicts(inst: Instance):
    """(two-way verdicts, oracle verdicts) for k in 0,1,2 and infinite."""
    _, closure, split, bo, be = pipeline(inst.lpn, inst.secret, inst.cfg)
    tw_verdicts = {}
    oracle_verdicts = {}
    for k in (0, 1, 2):
        tw_verdicts[k] = check_k_step(build_two_way(bo, be, k=k), split, closure).opaque
        oracle_verdicts[k] = brute_force_k_step(
            inst.lpn, inst.secret, k, len(inst.rg.states) + k, inst.cfg).opaque
    tw_verdicts["inf"] = check_infinite_step(build_two_way(bo, be), split, closure).opaque
    oracle_verdicts["inf"] = brute_force_infinite_step(
        inst.lpn, inst.secret, len(inst.rg.states), inst.cfg).opaque
    return tw_verdicts, oracle_verdicts


def test_criterion_6_corpus_agreement(corpus):
    with criterion(6, "two-way verdicts equal oracle verdicts on 200 random nets"):
        assert len(corpus) >= 200
        started = time.perf_counter()
        disagreements = []
        for inst in corpus:
            tw_verdicts, oracle_verdicts = _verdicts(inst)
            if tw_verdicts != oracle_verdicts:
                disagreements.append(
                    f"seed {inst.seed}: two-way={tw_verdicts} oracle={oracle_verdicts}\n"
                    + describe_instance(inst))
        elapsed = time.perf_counter() - started
        assert not disagreements, "verdict disagreements:\n" + "\n".join(disagreements)
        assert elapsed < 60.0


def test_criterion_7_structural_properties(corpus):
    with criterion(7, "structural properties on the corpus"):
        started = time.perf_counter()
        for inst in corpus:
            lpn, cfg = inst.lpn, inst.cfg
            brg, closure, split, bo, be = pipeline(lpn, inst.secret, cfg)
            graph = brg.graph

            # product completeness of the unrestricted two-way state set
            tw = build_two_way(bo, be)
            assert {(q.first, q.second) for q in tw.states} == set(
                itertools.product(range(len(bo.states)), range(len(be.states)))), inst.seed

            # minimal explanations form an antichain
            for m in graph.states:
                for t in lpn.observable:
                    vecs = [e.vector for e in minimal_explanations(lpn, m, t, cfg)]
                    for a, b in itertools.combinations(vecs, 2):
                        assert not all(x <= y for x, y in zip(a, b)), inst.seed
                        assert not all(y <= x for x, y in zip(a, b)), inst.seed

            # silent reach of a basis marking only shrinks the language
            for bidx, mb in enumerate(graph.states):
                basis_lang = language_upto(graph, [bidx], 4)
                for reached in unobservable_reach(lpn, mb, cfg):
                    rg_lang = language_upto(inst.rg, [inst.rg.index[reached]], 4)
                    assert rg_lang <= basis_lang, inst.seed

            # erased-silent language of the net equals the basis-graph
            # language from the initial marking
            assert language_upto(inst.rg, inst.rg.initial, 4) == language_upto(
                graph, graph.initial, 4), inst.seed

            # verdict monotonicity: opaque at k implies opaque below k
            tw_verdicts, _ = _verdicts(inst)
            assert tw_verdicts[1] <= tw_verdicts[0], inst.seed
            assert tw_verdicts[2] <= tw_verdicts[1], inst.seed
            assert tw_verdicts["inf"] <= tw_verdicts[2], inst.seed

            # k-reduced state sets only grow with k
            by_k = [set(build_two_way(bo, be, k=k).states) for k in (0, 1, 2)]
            assert by_k[0] <= by_k[1] <= by_k[2] <= set(tw.states), inst.seed

            # k=0 verdict coincides with a direct current-state scan
            secret_idx = set(split.secret)
            estimate_all = set(be.states[be.initial])
            exposed = any(
                (set(s) & estimate_all) and (set(s) & estimate_all) <= secret_idx
                for s in bo.states)
            assert tw_verdicts[0] == (not exposed), inst.seed

            # observer correctness against an independent path search
            rg_observer = observer(inst.rg, inst.rg.initial)
            for length in range(3):
                for word in itertools.product(lpn.alphabet, repeat=length):
                    expected = nd_observation_reach(inst.rg, inst.rg.initial, word)
                    reached = run(rg_observer, word)
                    assert expected == frozenset(reached or ()), inst.seed
        elapsed = time.perf_counter() - started
        assert elapsed < 60.0


def test_criterion_8_transition_count_advantage(corpus):
    with criterion(8, "two-phase edge bound and advantage over plain product"):
        strictly_fewer = 0
        for inst in corpus:
            _, _, _, bo, be = pipeline(inst.lpn, inst.secret, inst.cfg)
            tw = build_two_way(bo, be)
            n_events = len(inst.lpn.alphabet)
            bound = (n_events * len(bo.states) * len(be.states)
                     + n_events * len(be.states))
            assert len(tw.delta) <= bound, inst.seed
            u_states, u_delta = unmodified_two_way(bo, be)
            assert {(q.first, q.second) for q in tw.states} == u_states, inst.seed
            assert len(tw.delta) <= len(u_delta), inst.seed
            if len(tw.delta) < len(u_delta):
                strictly_fewer += 1
        assert strictly_fewer >= 1
