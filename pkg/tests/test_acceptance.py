"""Acceptance suite.

Each criterion runs at its stated size and prints one pass/fail line
(visible with ``pytest -s`` or in verbose failure output). Randomized suites
are seeded, so a run is reproducible bit for bit.
"""

import random
import time
from pathlib import Path

import pytest

from subcatdyn.cli import main
from subcatdyn.dynamics import (
    check_categorical,
    check_deterministic,
    check_proper,
    check_subcategorical,
    out_of_play_states,
    union_dynamics,
)
from subcatdyn.generation import naive_primo_engender, primo_engender, quotient_engender
from subcatdyn.randomgen import (
    chain_category,
    random_clock,
    random_def1_dynamics,
    random_family,
    random_motor,
    random_partition,
    random_relational_dynamics,
    random_subcategorical_dynamics,
    random_subcategorical_pair,
)
from subcatdyn.temporal import enumerate_h_realizations, oracle_h_realizations, succession

from util import brute_force_largest_subcategorical, total_pairs

GOLDEN = Path(__file__).parent / "golden"


def verdict(number, label, ok):
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {label}")
    assert ok, f"criterion {number} failed: {label}"


def datation_sound(A):
    for (arrow, _param), t in A.multi.transitions.items():
        for a, b in t.pairs:
            if A.tau(b) != A.clock.step(arrow, A.tau(a)):
                return False
    return True


@pytest.fixture(scope="module")
def theorem1_run():
    """200 seeded random families; primo plus 3 random quotients each."""
    rng = random.Random(20260809)
    subcat_ok = True
    dated_ok = True
    started = time.monotonic()
    for _ in range(200):
        family = random_family(rng)
        gen = primo_engender(family)
        generated = [gen]
        for _ in range(3):
            generated.append(
                quotient_engender(family, random_partition(rng, gen.result.parameters))
            )
        for g in generated:
            dated_ok = dated_ok and datation_sound(g.result)
            for param in g.result.parameters:
                subcat_ok = subcat_ok and check_subcategorical(
                    g.result.slice(param), max_violations=1
                ).holds
    return subcat_ok, dated_ok, time.monotonic() - started


@pytest.fixture(scope="module")
def primo_oracle_run():
    """50 random families: optimized constructor vs verbatim comprehension."""
    rng = random.Random(6003)
    equal_ok = True
    dated_ok = True
    for _ in range(50):
        family = random_family(rng)
        fast = primo_engender(family)
        slow = naive_primo_engender(family)
        equal_ok = equal_ok and fast.result == slow.result
        dated_ok = dated_ok and datation_sound(fast.result)
    return equal_ok, dated_ok


def test_criterion_1_theorem1_suite(theorem1_run):
    subcat_ok, _, elapsed = theorem1_run
    verdict(1, f"stability over 200 random families (4 generated dynamics each, {elapsed:.1f}s)",
            subcat_ok and elapsed < 300)


def test_criterion_2_union_counterexample_golden(corpus, capsys):
    d = union_dynamics([corpus.dynamics["alpha1"], corpus.dynamics["alpha2"]])
    exact = (
        d.transition("u").pairs == {("a1", "a2"), ("a1", "a2'")}
        and d.transition("v").pairs == {("a2", "a3"), ("a2", "a3'"), ("a2'", "a3")}
        and d.transition("w").pairs == {("a1", "a3")}
    )
    subcat = check_subcategorical(d).holds
    cat = check_categorical(d, max_violations=1)
    witness = (not cat.holds) and cat.violations[0].describe() == "w(a1)={a3} ⊊ {a3,a3'}"
    code = main(["demo", "union-counterexample"])
    out = capsys.readouterr().out
    golden = (GOLDEN / "union_counterexample.txt").read_text(encoding="utf-8")
    with capsys.disabled():
        verdict(2, "union counterexample, bit-exact report",
                exact and subcat and witness and code == 0 and out == golden)


def test_criterion_3_deterministic_implies_categorical():
    rng = random.Random(31415)
    ok = True
    deterministic_seen = 0
    for _ in range(500):
        d = random_def1_dynamics(rng)
        if check_deterministic(d, max_violations=1).holds:
            deterministic_seen += 1
            ok = ok and check_categorical(d, max_violations=1).holds
    verdict(3, f"500 random dynamics, deterministic ⟹ categorical "
               f"({deterministic_seen} deterministic cases)",
            ok and deterministic_seen >= 50)


def test_criterion_4_unions_stay_subcategorical_and_proper():
    rng = random.Random(27182)
    ok = True
    for _ in range(500):
        a, b = random_subcategorical_pair(rng)
        ok = ok and check_subcategorical(union_dynamics([a, b]), max_violations=1).holds
    for _ in range(500):
        a, b = random_subcategorical_pair(rng, proper=True)
        u = union_dynamics([a, b])
        ok = ok and check_subcategorical(u, max_violations=1).holds
        ok = ok and check_proper(u, max_violations=1).holds
    verdict(4, "500 sub-categorical unions + 500 proper unions", ok)


def test_criterion_5_out_of_play_states_are_inert():
    rng = random.Random(16180)
    ok = True
    with_dead_states = 0
    for _ in range(500):
        d = random_subcategorical_dynamics(rng)
        dead = set(out_of_play_states(d))
        if dead:
            with_dead_states += 1
        for arrow in d.motor.arrow_names():
            t = d.transition(arrow)
            for a in dead:
                if d.motor.dom(arrow) == d.typ(a) and t.image(a):
                    ok = False
            for _, y in t.pairs:
                if y in dead:
                    ok = False
    verdict(5, f"500 sub-categorical dynamics, out-of-play states inert "
               f"({with_dead_states} had some)",
            ok and with_dead_states >= 50)


def test_criterion_6a_largest_subcategorical_oracle():
    rng = random.Random(1001)
    ok = True
    done = 0
    while done < 50:
        spec = random_motor(rng, max_objects=3)
        g = random_relational_dynamics(rng, spec, p=0.25)
        if not 1 <= total_pairs(g) <= 10:
            continue
        ok = ok and largest_equal(g)
        done += 1
    verdict(6, "(a) greatest sub-categorical sub-dynamics vs brute force, 50 instances", ok)


def largest_equal(g):
    from subcatdyn.dynamics import largest_subcategorical

    return largest_subcategorical(g) == brute_force_largest_subcategorical(g)


def test_criterion_6b_realization_enumerator_oracle():
    rng = random.Random(1002)
    ok = True
    done = 0
    while done < 50:
        spec = random_motor(rng, max_objects=3)
        h = random_clock(rng, spec, max_per_object=2)
        if len(h.instants()) > 6:
            continue
        d = random_subcategorical_dynamics(rng, spec)
        ok = ok and enumerate_h_realizations(h, d) == oracle_h_realizations(h, d)
        done += 1
    verdict(6, "(b) realization enumerator vs all-partial-functions oracle, 50 instances", ok)


def test_criterion_6c_primo_constructor_oracle(primo_oracle_run):
    equal_ok, _ = primo_oracle_run
    verdict(6, "(c) primo constructor vs verbatim comprehension, 50 families", equal_ok)


def test_criterion_7_succession_is_a_preorder():
    rng = random.Random(1003)
    ok = True
    for _ in range(200):
        h = random_clock(rng, random_motor(rng))
        try:
            pairs = succession(h)  # verifies reflexivity + transitivity itself
        except Exception:
            ok = False
            continue
        ok = ok and all((t, t) in pairs for t in h.instants())
    verdict(7, "200 random clocks, succession reflexive and transitive", ok)


def test_criterion_8_determinism_breaking_demo(mimicry, capsys):
    components_deterministic = all(
        check_deterministic(mimicry.components[i].slice(lam)).holds
        for i in mimicry.index
        for lam in mimicry.components[i].parameters
    )
    from subcatdyn.generation import mono_engender

    mono = mono_engender(mimicry).result
    branching = any(
        len(mono.slice(mono.parameters[0]).transition(arrow).image(s)) >= 2
        for arrow in mono.motor.arrow_names()
        for s in mono.multi.states_of(mono.motor.dom(arrow))
    )
    code = main(["demo", "mimicry"])
    capsys.readouterr()
    with capsys.disabled():
        verdict(8, "mimicry: deterministic components, non-deterministic mono dynamics",
                components_deterministic and branching and code == 0)


def test_criterion_9_datation_soundness(theorem1_run, primo_oracle_run):
    _, dated_1, _ = theorem1_run
    _, dated_6c = primo_oracle_run
    verdict(9, "dates advance with the clock in every generated dynamics", dated_1 and dated_6c)
