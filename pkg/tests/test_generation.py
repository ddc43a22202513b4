import random

import pytest

from subcatdyn.dynamics import (
    check_categorical,
    check_deterministic,
    check_quasi_deterministic,
    check_subcategorical,
    make_dynamics,
    union_dynamics,
)
from subcatdyn.errors import PartitionMismatch
from subcatdyn.family import build_family, build_interaction
from subcatdyn.generation import (
    mono_engender,
    naive_primo_engender,
    primo_engender,
    quotient_engender,
    stability_report,
)
from subcatdyn.open_dynamics import mono_open_dynamics
from subcatdyn.randomgen import random_family, random_partition
from subcatdyn.temporal import Realization, enumerate_realizations


def all_pairs_interaction(A, name="X"):
    """R relating every realization of A to its own parameter."""
    rs = enumerate_realizations(A)
    return build_interaction((name,), {name: A}, [(r,) for r in rs.full])


@pytest.fixture
def degenerate(corpus):
    A = corpus.open_dynamics["mimic_x"]
    R = all_pairs_interaction(A)
    return build_family(("X",), "X", {"X": A}, R, {})


def test_degenerate_family_states_and_traversal(degenerate, corpus):
    A = corpus.open_dynamics["mimic_x"]
    gen = primo_engender(degenerate)
    # one-component tuples keep the component's state ids
    assert gen.result.states() == A.states()
    assert gen.result.parameters == ("left", "right")
    left = gen.result.slice("left")
    # only the pairs actually traversed by a left realization survive
    assert left.transition("u").pairs == {("x1", "x2l")}
    assert left.transition("v").pairs == {("x2l", "x3l")}
    assert left.transition("id2").pairs == {("x2l", "x2l")}
    assert check_subcategorical(left).holds


def test_two_identical_deterministic_components(corpus):
    chain3 = corpus.categories["chain3"]
    clock = corpus.clocks["clock_x"]
    d = make_dynamics(
        chain3,
        {"1": ["c1"], "2": ["c2"], "3": ["c3"]},
        {"u": [("c1", "c2")], "v": [("c2", "c3")], "w": [("c1", "c3")],
         "id1": [("c1", "c1")], "id2": [("c2", "c2")], "id3": [("c3", "c3")]},
    )
    A = mono_open_dynamics(d, clock, {"c1": "t1", "c2": "t2", "c3": "t3"})
    pool = enumerate_realizations(A).full
    diagonal = [(r, r) for r in pool]
    R = build_interaction(("L", "R"), {"L": A, "R": A}, diagonal)
    from subcatdyn.category import identity_functor
    from subcatdyn.family import ClockSync

    sync = ClockSync(identity_functor(chain3), {t: t for t in clock.instants()})
    F = build_family(("L", "R"), "L", {"L": A, "R": A}, R, {"R": sync})
    gen = primo_engender(F)
    assert gen.result.multi.states_of("1") == ("c1|c1",)
    slice_ = gen.result.slice(gen.result.parameters[0])
    assert check_deterministic(slice_).holds
    assert slice_.transition("u").pairs == {("c1|c1", "c2|c2")}


def test_mimicry_primo_and_mono(mimicry):
    gen = primo_engender(mimicry)
    assert gen.result.parameters == ("left|left", "right|right")
    assert gen.result.multi.states_of("2") == (
        "x2l|y2l", "x2l|y2r", "x2r|y2l", "x2r|y2r"
    )
    for mu in gen.result.parameters:
        s = gen.result.slice(mu)
        assert check_subcategorical(s).holds
        assert check_quasi_deterministic(s).holds
    left = gen.result.slice("left|left")
    assert left.transition("u").pairs == {("x1|y1", "x2l|y2l")}

    mono = mono_engender(mimicry)
    assert mono.result.parameters == ("left|left+right|right",)
    merged = mono.result.slice("left|left+right|right")
    assert merged.transition("u").image("x1|y1") == {"x2l|y2l", "x2r|y2r"}
    assert not check_deterministic(merged).holds
    assert not check_quasi_deterministic(merged).holds
    assert check_subcategorical(merged).holds


def test_quotient_trivial_partitions(mimicry):
    gen = primo_engender(mimicry)
    identity = quotient_engender(mimicry, [[p] for p in gen.result.parameters])
    assert identity.result.multi.transitions.keys() == gen.result.multi.transitions.keys()
    for key, t in gen.result.multi.transitions.items():
        assert identity.result.multi.transitions[key] == t
    full = quotient_engender(mimicry, [list(gen.result.parameters)])
    mono = mono_engender(mimicry)
    assert full.result.multi == mono.result.multi


def test_quotient_blocks_are_unions(degenerate):
    gen = primo_engender(degenerate)
    q = quotient_engender(degenerate, [["left", "right"]])
    merged = q.result.slice("left+right")
    direct = union_dynamics([gen.result.slice("left"), gen.result.slice("right")])
    for arrow in merged.motor.arrow_names():
        assert merged.transition(arrow).pairs == direct.transition(arrow).pairs


def test_quotient_partition_mismatch(mimicry):
    with pytest.raises(PartitionMismatch):
        quotient_engender(mimicry, [["left|left"]])
    with pytest.raises(PartitionMismatch):
        quotient_engender(mimicry, [["left|left", "ghost"]])


def test_empty_realization_family(corpus):
    A = corpus.open_dynamics["mimic_x"]
    empty_left = Realization.from_mapping({}, A.clock, parameter="left")
    R = build_interaction(("X",), {"X": A}, [(empty_left,)])
    F = build_family(("X",), "X", {"X": A}, R, {})
    gen = primo_engender(F)
    assert gen.result.parameters == ("left",)
    for arrow in gen.result.motor.arrow_names():
        assert gen.result.multi.transitions[(arrow, "left")].pairs == frozenset()


def test_provenance_soundness(mimicry):
    gen = primo_engender(mimicry)
    A_by_index = [mimicry.components[i] for i in mimicry.index]
    assert gen.provenance  # something was generated
    for (arrow, mu_id, aid, bid), witnesses in gen.provenance.items():
        mu = tuple(mu_id.split("|"))
        inverse = mimicry.interaction.rb_inverse(mu)
        a_parts = aid.split("|")
        b_parts = bid.split("|")
        for ext in witnesses:
            assert ext in inverse
            for n, A in enumerate(A_by_index):
                assert ext[n].value(A.tau(a_parts[n])) == a_parts[n]
                assert ext[n].value(A.tau(b_parts[n])) == b_parts[n]


def test_naive_constructor_agrees(mimicry, degenerate):
    for F in (mimicry, degenerate):
        fast = primo_engender(F)
        slow = naive_primo_engender(F)
        assert fast.result == slow.result
        assert set(fast.provenance) == set(slow.provenance)


def test_naive_constructor_agrees_on_random_families():
    rng = random.Random(31)
    for _ in range(8):
        F = random_family(rng)
        assert primo_engender(F).result == naive_primo_engender(F).result


def test_stability_report_mimicry(mimicry):
    report = stability_report(mimicry)
    assert report.family_categorical
    primo, mono = report.modes
    assert primo.label == "primo" and mono.label == "mono"
    for mode in report.modes:
        assert mode.subcategorical
        assert not mode.categorical       # a categorical family, unstable in every mode
        assert mode.stable is False
        assert mode.first_violation is not None


def test_stability_report_with_partitions(mimicry):
    gen = primo_engender(mimicry)
    report = stability_report(
        mimicry, [("identity", [[p] for p in gen.result.parameters])]
    )
    assert [m.label for m in report.modes] == ["primo", "mono", "quotient:identity"]


def test_stability_not_applicable_for_non_categorical_family(corpus):
    # a component that is merely sub-categorical: the union of the two branches
    a1, a2 = corpus.dynamics["alpha1"], corpus.dynamics["alpha2"]
    u = union_dynamics([a1, a2])
    assert not check_categorical(u).holds
    A = mono_open_dynamics(u, corpus.clocks["clock_x"],
                           {"a1": "t1", "a2": "t2", "a2'": "t2", "a3": "t3", "a3'": "t3"})
    F = build_family(("X",), "X", {"X": A}, all_pairs_interaction(A), {})
    report = stability_report(F)
    assert not report.family_categorical
    assert report.component_witness[0] == "X"
    for mode in report.modes:
        assert mode.stable is None          # Def-gate: not applicable
        assert mode.subcategorical          # the theorem still holds
