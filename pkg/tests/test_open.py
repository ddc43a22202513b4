import pytest

from subcatdyn.category import validate_category, validate_functor
from subcatdyn.dynamics import (
    Transition,
    check_categorical,
    check_deterministic,
    check_subcategorical,
    clean,
    make_dynamics,
    union_dynamics,
)
from subcatdyn.errors import DatationViolation, NotAnEquivalence, ValidationError
from subcatdyn.open_dynamics import (
    check_dynamorphism,
    check_multi_dynamorphism,
    check_open_dynamorphism,
    clean_dynamorphism,
    make_multi_dynamics,
    mono_open_dynamics,
    parametric_quotient,
    semi_proper_clean,
    validate_open_dynamics,
)
from subcatdyn.temporal import validate_clock

DATATION = {"a1": "t1", "a2": "t2", "a2'": "t2", "a3": "t3", "a3'": "t3"}


def diagonal_into(a, b):
    """Identity transition viewed inside a larger state set."""
    return Transition.make(a.states(), b.states(), [(s, s) for s in a.states()])


@pytest.fixture
def two_branch(corpus):
    a1, a2 = corpus.dynamics["alpha1"], corpus.dynamics["alpha2"]
    multi = make_multi_dynamics(
        a1.motor,
        ("one", "two"),
        a1.state_sets,
        {
            arrow: {"one": a1.transition(arrow).pairs, "two": a2.transition(arrow).pairs}
            for arrow in a1.motor.arrow_names()
        },
    )
    return validate_open_dynamics(multi, corpus.clocks["clock_x"], DATATION)


# -- validation ---------------------------------------------------------------


def test_valid_single_parameter_open(alpha1, clock_x):
    A = mono_open_dynamics(alpha1, clock_x, DATATION)
    assert A.parameters == ("*",)
    assert A.tau("a2'") == "t2"


def test_datation_violation(alpha1, clock_x):
    bad = dict(DATATION, a3="t2")
    with pytest.raises(DatationViolation):
        mono_open_dynamics(alpha1, clock_x, bad)


def test_empty_parameter_set_rejected(alpha1):
    with pytest.raises(ValidationError):
        make_multi_dynamics(alpha1.motor, (), alpha1.state_sets, {})


def test_slice_subcategoricity_enforced(alpha1, clock_x):
    pairs = {a: {"m": set(alpha1.transition(a).pairs)} for a in alpha1.motor.arrow_names()}
    pairs["w"]["m"] = {("a1", "a3'")}  # no witness through u;v
    from subcatdyn.errors import SliceNotSubcategorical

    with pytest.raises(SliceNotSubcategorical):
        make_multi_dynamics(alpha1.motor, ("m",), alpha1.state_sets, pairs)


# -- dynamorphisms --------------------------------------------------------------


def test_identity_dynamorphism(alpha1):
    report = check_dynamorphism(None, diagonal_into(alpha1, alpha1), alpha1, alpha1)
    assert report.holds


def test_inclusion_into_union_is_a_dynamorphism(alpha1, alpha2):
    u = union_dynamics([alpha1, alpha2])
    report = check_dynamorphism(None, diagonal_into(alpha1, u), alpha1, u)
    assert report.holds


def test_swap_delta_fails(alpha1):
    swapped = {"a1": "a1", "a2": "a2'", "a2'": "a2", "a3": "a3", "a3'": "a3'"}
    delta = Transition.make(alpha1.states(), alpha1.states(), swapped.items())
    report = check_dynamorphism(None, delta, alpha1, alpha1)
    assert not report.holds
    assert any(v.arrows[0] in ("u", "v") for v in report.violations)


def test_multi_dynamorphism_reduces_to_mono(two_branch):
    multi = two_branch.multi
    delta = Transition.make(multi.states(), multi.states(), [(s, s) for s in multi.states()])
    report = check_multi_dynamorphism({"one": "one", "two": "two"}, None, delta, multi, multi)
    assert report.holds


def test_quotient_projection_is_a_dynamorphism(two_branch):
    multi = two_branch.multi
    merged = parametric_quotient(multi, [["one", "two"]])
    theta = {"one": "one+two", "two": "one+two"}
    delta = Transition.make(multi.states(), merged.states(), [(s, s) for s in multi.states()])
    assert check_multi_dynamorphism(theta, None, delta, multi, merged).holds


def test_branch_swapping_theta_fails(two_branch):
    multi = two_branch.multi
    delta = Transition.make(multi.states(), multi.states(), [(s, s) for s in multi.states()])
    report = check_multi_dynamorphism({"one": "two", "two": "one"}, None, delta, multi, multi)
    assert not report.holds
    assert report.violations[0].params == ("one", "two")


def test_identity_open_quadruple(two_branch):
    multi = two_branch.multi
    delta = Transition.make(multi.states(), multi.states(), [(s, s) for s in multi.states()])
    d = {t: t for t in two_branch.clock.instants()}
    report = check_open_dynamorphism(
        {"one": "one", "two": "two"}, None, delta, d, two_branch, two_branch
    )
    assert report.holds


def test_misdated_clock_part_breaks_synchronization(two_branch):
    multi = two_branch.multi
    delta = Transition.make(multi.states(), multi.states(), [(s, s) for s in multi.states()])
    d = {"t1": "t1", "t2": "t3", "t3": "t3"}  # t2 mis-dated
    report = check_open_dynamorphism(
        {"one": "one", "two": "two"}, None, delta, d, two_branch, two_branch
    )
    assert not report.holds
    sync = [v for v in report.violations if v.kind == "synchronization"]
    assert sync and sync[0].objects == ("2",) and sync[0].states[0] in ("a2", "a2'")


def test_constant_functor_to_one_instant_component(alpha1, clock_x):
    term = validate_category(["*"], [("id", "*", "*")], {"*": "id"}, [])
    h = validate_clock(make_dynamics(term, {"*": ["tau"]}, {"id": [("tau", "tau")]}))
    target = mono_open_dynamics(
        make_dynamics(term, {"*": ["z"]}, {"id": [("z", "z")]}), h, {"z": "tau"}
    )
    A = mono_open_dynamics(alpha1, clock_x, DATATION)
    functor = validate_functor(alpha1.motor, term,
                               {o: "*" for o in alpha1.motor.objects},
                               {a: "id" for a in alpha1.motor.arrow_names()})
    delta = Transition.make(alpha1.states(), ["z"], [(s, "z") for s in alpha1.states()])
    d = {t: "tau" for t in clock_x.instants()}
    report = check_open_dynamorphism({"*": "*"}, functor, delta, d, A, target)
    assert report.holds


# -- quotients and cleaning -----------------------------------------------------


def test_quotient_identity_partition(two_branch):
    q = parametric_quotient(two_branch, [["one"], ["two"]])
    assert q.parameters == ("one", "two")
    assert q.multi.transitions == two_branch.multi.transitions
    assert q.datation == two_branch.datation


def test_full_quotient_is_the_union(two_branch, alpha1, alpha2):
    q = parametric_quotient(two_branch, [["one", "two"]])
    assert q.parameters == ("one+two",)
    u = union_dynamics([alpha1, alpha2])
    merged = q.slice("one+two")
    for arrow in u.motor.arrow_names():
        assert merged.transition(arrow).pairs == u.transition(arrow).pairs
    assert check_subcategorical(merged).holds


def test_quotient_composition_equals_join(corpus, alpha1, alpha2):
    u = union_dynamics([alpha1, alpha2])
    multi = make_multi_dynamics(
        alpha1.motor,
        ("one", "two", "both"),
        alpha1.state_sets,
        {
            arrow: {
                "one": alpha1.transition(arrow).pairs,
                "two": alpha2.transition(arrow).pairs,
                "both": u.transition(arrow).pairs,
            }
            for arrow in alpha1.motor.arrow_names()
        },
    )
    A = validate_open_dynamics(multi, corpus.clocks["clock_x"], DATATION)
    step1 = parametric_quotient(A, [["one", "two"], ["both"]])
    step2 = parametric_quotient(step1, [["one+two", "both"]])
    direct = parametric_quotient(A, [["one", "two", "both"]])
    assert step2.parameters == direct.parameters == ("one+two+both",)
    for arrow in A.motor.arrow_names():
        assert step2.multi.transitions[(arrow, "one+two+both")] == \
            direct.multi.transitions[(arrow, "one+two+both")]


def test_partition_must_be_an_equivalence(two_branch):
    for bad in ([["one"]], [["one", "one"], ["two"]], [["one", "ghost"], ["two"]], [[]]):
        with pytest.raises(NotAnEquivalence):
            parametric_quotient(two_branch, bad)


def test_semi_proper_clean_single_parameter(alpha1, clock_x):
    pairs = {a: set(alpha1.transition(a).pairs) for a in alpha1.motor.arrow_names()}
    pairs["id2"] = {("a2", "a2")}  # a2' out of play
    d = make_dynamics(alpha1.motor, alpha1.state_sets, pairs)
    multi = make_multi_dynamics(alpha1.motor, ("m",), alpha1.state_sets,
                                {a: {"m": p} for a, p in pairs.items()})
    cleaned = semi_proper_clean(multi)
    assert cleaned.slice("m") == clean(d)


def test_semi_proper_clean_keeps_half_dead_states(alpha1):
    full = {a: set(alpha1.transition(a).pairs) for a in alpha1.motor.arrow_names()}
    m1 = {a: set(p) for a, p in full.items()}
    m1["id2"] = {("a2", "a2")}            # a2' dead for m1 only
    m1["id3"] = {("a3", "a3")}            # a3' dead for m1
    m2 = {a: set(p) for a, p in full.items()}
    m2["id3"] = {("a3", "a3")}            # a3' dead for m2 as well
    multi = make_multi_dynamics(
        alpha1.motor, ("m1", "m2"), alpha1.state_sets,
        {a: {"m1": m1[a], "m2": m2[a]} for a in alpha1.motor.arrow_names()},
    )
    cleaned = semi_proper_clean(multi)
    states = cleaned.states()
    assert "a2'" in states      # in play for m2
    assert "a3'" not in states  # out of play everywhere
    for s in states:
        assert any((s, s) in cleaned.transitions[(cleaned.motor.identity_of(cleaned.typ(s)), p)].pairs
                   for p in cleaned.parameters)


def test_deterministic_open_dynamics_has_categorical_slices(corpus):
    A = corpus.open_dynamics["mimic_x"]
    for lam in A.parameters:
        assert check_deterministic(A.slice(lam)).holds
        assert check_categorical(A.slice(lam)).holds


def test_clean_dynamorphism_restricts(alpha1):
    pairs = {a: set(alpha1.transition(a).pairs) for a in alpha1.motor.arrow_names()}
    pairs["id2"] = {("a2", "a2")}
    d = make_dynamics(alpha1.motor, alpha1.state_sets, pairs)
    delta = Transition.make(d.states(), d.states(), [(s, s) for s in d.states()])
    assert check_dynamorphism(None, delta, d, d).holds
    restricted = clean_dynamorphism(delta, d, d)
    cleaned = clean(d)
    assert set(restricted.source) == set(cleaned.states())
    assert check_dynamorphism(None, restricted, cleaned, cleaned).holds
