"""Multi-dynamics, datations, open dynamics, dynamorphism checkers, and
parametric quotients.

A multi-dynamics is a parameter-indexed family of dynamics sharing one
family of state sets; an open dynamics adds a clock and a datation mapping
every state to the instant it happens at. Dynamorphisms come in three
flavours (plain, multi, open with a synchronization condition) and are all
checked exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .category import Category, Functor, identity_functor
from .dynamics import (
    DEFAULT_MAX_VIOLATIONS,
    Dynamics,
    PropertyReport,
    Transition,
    Violation,
    _Collector,
    check_subcategorical,
    make_dynamics,
    out_of_play_states,
)
from .errors import (
    DatationViolation,
    EndpointMismatch,
    InternalCheckFailed,
    MotorMismatch,
    NotAnEquivalence,
    SliceNotSubcategorical,
    ValidationError,
)
from .temporal import Clock

DynamorphismReport = PropertyReport


@dataclass(frozen=True)
class MultiDynamics:
    """Shared state sets, one transition per (arrow, parameter)."""

    motor: Category
    parameters: tuple[str, ...]
    state_sets: dict[str, tuple[str, ...]]
    transitions: dict[tuple[str, str], Transition]
    _slices: dict[str, Dynamics] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_slices", {})

    def slice(self, parameter: str) -> Dynamics:
        """The mono-dynamics of one parameter."""
        cached = self._slices.get(parameter)
        if cached is None:
            if parameter not in self.parameters:
                raise ValidationError(f"unknown parameter {parameter}")
            cached = make_dynamics(
                self.motor,
                self.state_sets,
                {a: self.transitions[(a, parameter)].pairs for a in self.motor.arrow_names()},
            )
            self._slices[parameter] = cached
        return cached

    def states(self) -> tuple[str, ...]:
        return self.slice(self.parameters[0]).states()

    def typ(self, state: str) -> str:
        return self.slice(self.parameters[0]).typ(state)

    def states_of(self, obj: str) -> tuple[str, ...]:
        return self.state_sets.get(obj, ())


def make_multi_dynamics(
    motor: Category,
    parameters: Sequence[str],
    state_sets: Mapping[str, Sequence[str]],
    pairs: Mapping[str, Mapping[str, Iterable[tuple[str, str]]]],
    *,
    require_subcategorical: bool = True,
) -> MultiDynamics:
    """Build a multi-dynamics from per-arrow, per-parameter pair lists.

    Each slice must be a well-formed dynamics; by default each slice must
    also be sub-categorical (set ``require_subcategorical=False`` to
    represent graph-level data).
    """
    parameters = tuple(parameters)
    if not parameters:
        raise ValidationError("parameter set must be non-empty")
    if len(set(parameters)) != len(parameters):
        raise ValidationError("duplicate parameters")
    for arrow, by_param in pairs.items():
        if not motor.has_arrow(arrow):
            raise ValidationError(f"transition declared for unknown arrow {arrow}")
        for param in by_param:
            if param not in parameters:
                raise ValidationError(f"arrow {arrow} declares unknown parameter {param}")
    slices = {}
    for param in parameters:
        slices[param] = make_dynamics(
            motor,
            state_sets,
            {a: tuple(pairs.get(a, {}).get(param, ())) for a in motor.arrow_names()},
        )
        if require_subcategorical:
            report = check_subcategorical(slices[param], max_violations=1)
            if not report.holds:
                raise SliceNotSubcategorical(
                    f"slice {param}: {report.violations[0].describe()}"
                )
    transitions = {
        (a, param): slices[param].transition(a)
        for a in motor.arrow_names()
        for param in parameters
    }
    md = MultiDynamics(
        motor=motor,
        parameters=parameters,
        state_sets={obj: tuple(state_sets.get(obj, ())) for obj in motor.objects},
        transitions=transitions,
    )
    md._slices.update(slices)
    return md


@dataclass(frozen=True)
class OpenDynamics:
    """A multi-dynamics with a clock and a datation; use
    validate_open_dynamics."""

    multi: MultiDynamics
    clock: Clock
    datation: dict[str, str]

    @property
    def motor(self) -> Category:
        return self.multi.motor

    @property
    def parameters(self) -> tuple[str, ...]:
        return self.multi.parameters

    def states(self) -> tuple[str, ...]:
        return self.multi.states()

    def typ(self, state: str) -> str:
        return self.multi.typ(state)

    def tau(self, state: str) -> str:
        return self.datation[state]

    def slice(self, parameter: str) -> Dynamics:
        return self.multi.slice(parameter)


def validate_open_dynamics(multi: MultiDynamics, clock: Clock,
                           datation: Mapping[str, str]) -> OpenDynamics:
    """Check the datation: total, per-object typed, and compatible with the
    clock on every transition pair of every slice."""
    if multi.motor != clock.motor:
        raise MotorMismatch("multi-dynamics and clock live over different motors")
    datation = dict(datation)
    for obj in multi.motor.objects:
        instants = set(clock.instants_of(obj))
        for s in multi.states_of(obj):
            t = datation.get(s)
            if t is None:
                raise DatationViolation(f"state {s} has no date")
            if t not in instants:
                raise DatationViolation(
                    f"state {s} of object {obj} is dated {t}, which is not an instant of {obj}"
                )
    for param in multi.parameters:
        for a in multi.motor.arrows:
            for x, y in multi.transitions[(a.name, param)].pairs:
                expected = clock.step(a.name, datation[x])
                if datation[y] != expected:
                    raise DatationViolation(
                        f"slice {param}, arrow {a.name}: pair ({x},{y}) is dated "
                        f"({datation[x]},{datation[y]}) but the clock requires {expected}"
                    )
    return OpenDynamics(multi=multi, clock=clock, datation=datation)


def mono_open_dynamics(d: Dynamics, clock: Clock, datation: Mapping[str, str],
                       parameter: str = "*") -> OpenDynamics:
    """Wrap a mono-dynamics as an open dynamics with a single parameter."""
    multi = make_multi_dynamics(
        d.motor,
        (parameter,),
        d.state_sets,
        {a: {parameter: d.transition(a).pairs} for a in d.motor.arrow_names()},
    )
    return validate_open_dynamics(multi, clock, datation)


# -- dynamorphisms --------------------------------------------------------


def check_dynamorphism(
    functor: Functor | None,
    delta: Transition,
    a: Dynamics,
    b: Dynamics,
    *,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> DynamorphismReport:
    """Typing (δ sends A-states into ΔA-states) plus the intertwining
    inclusion δ⊙f ⊂ Δf⊙δ for every arrow. Pass functor=None for the
    same-motor form (identity functor)."""
    if functor is None:
        if a.motor != b.motor:
            raise MotorMismatch("same-motor dynamorphism needs equal motors")
        functor = identity_functor(a.motor)
    if functor.source != a.motor or functor.target != b.motor:
        raise MotorMismatch("functor endpoints do not match the dynamics' motors")
    if set(delta.source) != set(a.states()) or set(delta.target) != set(b.states()):
        raise EndpointMismatch("δ must be a transition from st(a) to st(b)")
    out = _Collector(max_violations)
    for obj in a.motor.objects:
        allowed = set(b.states_of(functor.object_map[obj]))
        for x in a.states_of(obj):
            img = delta.image(x)
            if not img <= allowed:
                known = b.sorted_states(img & set(b.states()))
                out.add(Violation(
                    "typing",
                    objects=(obj, functor.object_map[obj]),
                    states=(x,),
                    found=known + tuple(sorted(img - set(b.states()))),
                    expected=tuple(b.states_of(functor.object_map[obj])),
                ))
    for arr in a.motor.arrows:
        fa = a.transition(arr.name)
        fb = b.transition(functor.arrow_map[arr.name])
        for x in a.states_of(arr.dom):
            lhs = frozenset(z for y in fa.image(x) for z in delta.image(y))
            rhs = frozenset(z for y in delta.image(x) for z in fb.image(y))
            if not lhs <= rhs:
                out.add(Violation(
                    "intertwine",
                    arrows=(arr.name, functor.arrow_map[arr.name]),
                    states=(x,),
                    found=b.sorted_states(lhs & set(b.states())),
                    expected=b.sorted_states(rhs),
                ))
    return out.report()


def check_multi_dynamorphism(
    theta: Mapping[str, str],
    functor: Functor | None,
    delta: Transition,
    a: MultiDynamics,
    b: MultiDynamics,
    *,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> DynamorphismReport:
    """(Δ,δ) must be a dynamorphism from every slice a_λ to b_θ(λ)."""
    theta = dict(theta)
    for lam in a.parameters:
        if lam not in theta:
            raise ValidationError(f"θ is not defined on parameter {lam}")
        if theta[lam] not in b.parameters:
            raise ValidationError(f"θ sends {lam} to unknown parameter {theta[lam]}")
    out = _Collector(max_violations)
    for lam in a.parameters:
        sub = check_dynamorphism(functor, delta, a.slice(lam), b.slice(theta[lam]),
                                 max_violations=max_violations)
        for v in sub.violations:
            out.add(Violation(
                v.kind, arrows=v.arrows, objects=v.objects, states=v.states,
                params=(lam, theta[lam]), found=v.found, expected=v.expected, note=v.note,
            ))
        if sub.truncated:
            out.seen += 1
    return out.report()


def check_open_dynamorphism(
    theta: Mapping[str, str],
    functor: Functor | None,
    delta: Transition,
    clock_map: Mapping[str, str],
    A: OpenDynamics,
    B: OpenDynamics,
    *,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> DynamorphismReport:
    """Multi part, deterministic clock part, and the synchronization
    inclusion τ∘δ ⊂ d∘ρ at every object."""
    if functor is None:
        if A.motor != B.motor:
            raise MotorMismatch("same-motor dynamorphism needs equal motors")
        functor = identity_functor(A.motor)
    out = _Collector(max_violations)
    sub = check_multi_dynamorphism(theta, functor, delta, A.multi, B.multi,
                                   max_violations=max_violations)
    for v in sub.violations:
        out.add(v)

    # clock part: total single-valued, typed, and intertwining exactly
    clock_map = dict(clock_map)
    h, k = A.clock, B.clock
    for obj in A.motor.objects:
        target_obj = functor.object_map[obj]
        for t in h.instants_of(obj):
            img = clock_map.get(t)
            if img is None:
                out.add(Violation("clock-part", states=(t,), note=f"d is not defined at instant {t}"))
            elif img not in set(k.instants_of(target_obj)):
                out.add(Violation("clock-part", states=(t,),
                                  note=f"d({t})={img} is not an instant of {target_obj}"))
    for arr in A.motor.arrows:
        img_arrow = functor.arrow_map[arr.name]
        for t in h.instants_of(arr.dom):
            if t not in clock_map or h.step(arr.name, t) not in clock_map:
                continue
            if clock_map[t] not in set(k.instants_of(functor.object_map[arr.dom])):
                continue  # mistyped value, already reported above
            got = clock_map[h.step(arr.name, t)]
            expected = k.step(img_arrow, clock_map[t])
            if got != expected:
                out.add(Violation(
                    "clock-part", arrows=(arr.name, img_arrow), states=(t,),
                    note=f"d({arr.name}^h({t}))={got} but ({img_arrow})^k(d({t}))={expected}",
                ))

    # synchronization: dates of δ-images are forced by d and the source date
    for obj in A.motor.objects:
        for x in A.multi.states_of(obj):
            dates = frozenset(B.tau(y) for y in delta.image(x) if y in set(B.states()))
            bound = clock_map.get(A.tau(x))
            expected = frozenset() if bound is None else frozenset((bound,))
            if not dates <= expected:
                out.add(Violation(
                    "synchronization", objects=(obj,), states=(x,),
                    found=tuple(sorted(dates, key=k.instant_key)),
                    expected=tuple(sorted(expected, key=k.instant_key)),
                ))
    return out.report()


def clean_dynamorphism(delta: Transition, a: Dynamics, b: Dynamics) -> Transition:
    """Restriction of δ to the in-play states on both sides; this is the
    morphism part of cleaning, read as plain restriction."""
    dead_a = set(out_of_play_states(a))
    dead_b = set(out_of_play_states(b))
    return Transition.make(
        tuple(s for s in delta.source if s not in dead_a),
        tuple(s for s in delta.target if s not in dead_b),
        {(x, y) for x, y in delta.pairs if x not in dead_a and y not in dead_b},
    )


# -- parametric quotients --------------------------------------------------


def _validate_partition(partition: Sequence[Sequence[str]], universe: Sequence[str]) -> list[tuple[str, ...]]:
    seen: set[str] = set()
    blocks = []
    for block in partition:
        block = tuple(block)
        if not block:
            raise NotAnEquivalence("empty block")
        for m in block:
            if m not in universe:
                raise NotAnEquivalence(f"block member {m} is not a parameter")
            if m in seen:
                raise NotAnEquivalence(f"parameter {m} appears in two blocks")
            seen.add(m)
        blocks.append(block)
    missing = [m for m in universe if m not in seen]
    if missing:
        raise NotAnEquivalence(f"parameters not covered: {', '.join(missing)}")
    order = {m: i for i, m in enumerate(universe)}
    blocks = [tuple(sorted(b, key=order.__getitem__)) for b in blocks]
    blocks.sort(key=lambda b: order[b[0]])
    return blocks


def class_label(block: Sequence[str]) -> str:
    return "+".join(block)


def parametric_quotient(
    x: MultiDynamics | OpenDynamics,
    partition: Sequence[Sequence[str]],
):
    """Quotient by an equivalence on the parameter set, given as a partition.

    Each class's transition is the union of its members'; states, motor,
    clock and datation are unchanged. Class slices are sub-categorical
    whenever member slices are (unions preserve sub-categoricity); this is
    re-checked and a failure is reported as an internal error.
    """
    if isinstance(x, OpenDynamics):
        multi = parametric_quotient(x.multi, partition)
        try:
            return validate_open_dynamics(multi, x.clock, x.datation)
        except DatationViolation as exc:  # unions of dated pairs stay dated
            raise InternalCheckFailed(f"quotient broke the datation: {exc}") from exc
    blocks = _validate_partition(partition, x.parameters)
    labels = [class_label(b) for b in blocks]
    pairs = {
        a: {
            label: frozenset().union(*(x.transitions[(a, m)].pairs for m in block))
            for label, block in zip(labels, blocks)
        }
        for a in x.motor.arrow_names()
    }
    try:
        return make_multi_dynamics(x.motor, labels, x.state_sets, pairs)
    except SliceNotSubcategorical as exc:
        raise InternalCheckFailed(f"quotient slice lost sub-categoricity: {exc}") from exc


def semi_proper_clean(A: MultiDynamics) -> MultiDynamics:
    """Remove the states that are out of play for every parameter; each
    surviving state is in play for at least one parameter."""
    dead = set(A.states())
    for param in A.parameters:
        dead &= set(out_of_play_states(A.slice(param)))
    state_sets = {
        obj: tuple(s for s in A.states_of(obj) if s not in dead)
        for obj in A.motor.objects
    }
    pairs = {
        a: {
            param: {(x, y) for x, y in A.transitions[(a, param)].pairs
                    if x not in dead and y not in dead}
            for param in A.parameters
        }
        for a in A.motor.arrow_names()
    }
    return make_multi_dynamics(A.motor, A.parameters, state_sets, pairs)
