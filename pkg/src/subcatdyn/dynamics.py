"""Relational dynamics over a motor.

A dynamics assigns a finite state set to every object of its motor and a
non-deterministic transition (a binary relation) to every arrow. This module
houses the transition algebra, the property checkers (sub-categorical,
proper, categorical, deterministic, quasi-deterministic), cleaning, the
inclusion order with unions and intersections, and the greatest
sub-categorical sub-dynamics of an arbitrary dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .category import Category
from .errors import (
    EmptyList,
    EndpointMismatch,
    MotorMismatch,
    NotSubcategorical,
    ValidationError,
)


def _setstr(items: Iterable[str]) -> str:
    items = tuple(items)
    return "{" + ",".join(items) + "}" if items else "∅"


@dataclass(frozen=True)
class Violation:
    """One fact contradicting a checked property, with its witnesses."""

    kind: str
    arrows: tuple[str, ...] = ()
    objects: tuple[str, ...] = ()
    states: tuple[str, ...] = ()
    params: tuple[str, ...] = ()
    found: tuple[str, ...] | None = None
    expected: tuple[str, ...] | None = None
    note: str = ""

    def describe(self) -> str:
        k = self.kind
        if k == "identity-off-diagonal":
            a, b = self.states
            return f"{self.arrows[0]}({a})∋{b} off the diagonal"
        if k == "state-out-of-play":
            (a,) = self.states
            return f"{self.arrows[0]}({a})=∅ ({a} is out of play)"
        if k == "composite-not-included":
            e, f, w = self.arrows
            a, c = self.states
            return f"{w}({a})∋{c} without witness in ({f}⊙{e})({a})"
        if k == "composite-not-equal":
            _, _, w = self.arrows
            (a,) = self.states
            lhs, rhs = _setstr(self.found or ()), _setstr(self.expected or ())
            strict = set(self.found or ()) < set(self.expected or ())
            return f"{w}({a})={lhs} {'⊊' if strict else '≠'} {rhs}"
        if k == "image-not-singleton":
            (a,) = self.states
            return f"{self.arrows[0]}({a})={_setstr(self.found or ())} is not a singleton"
        if k == "image-multivalued":
            (a,) = self.states
            return f"{self.arrows[0]}({a})={_setstr(self.found or ())} has {len(self.found or ())} elements"
        if k == "typing":
            (x,) = self.states
            return (
                f"δ({x})={_setstr(self.found or ())} ⊄ {self.objects[-1]}-states "
                f"{_setstr(self.expected or ())}"
            )
        if k == "intertwine":
            f, g = self.arrows
            (x,) = self.states
            return (
                f"(δ⊙{f})({x})={_setstr(self.found or ())} ⊄ "
                f"({g}⊙δ)({x})={_setstr(self.expected or ())}"
            )
        if k == "clock-part":
            return self.note
        if k == "synchronization":
            (x,) = self.states
            return (
                f"sync at {self.objects[0]}: τ(δ({x}))={_setstr(self.found or ())} ⊄ "
                f"d(ρ({x}))={_setstr(self.expected or ())}"
            )
        return self.note or k


@dataclass(frozen=True)
class PropertyReport:
    holds: bool
    violations: tuple[Violation, ...] = ()
    truncated: bool = False


DEFAULT_MAX_VIOLATIONS = 100


class _Collector:
    """Accumulates violations up to a cap; holds/fails stays exact."""

    def __init__(self, max_violations: int):
        self.max = max_violations
        self.items: list[Violation] = []
        self.seen = 0

    def add(self, v: Violation) -> None:
        self.seen += 1
        if len(self.items) < self.max:
            self.items.append(v)

    def report(self) -> PropertyReport:
        return PropertyReport(
            holds=self.seen == 0,
            violations=tuple(self.items),
            truncated=self.seen > len(self.items),
        )


@dataclass(frozen=True)
class Transition:
    """A relation between two declared finite state sets."""

    source: tuple[str, ...]
    target: tuple[str, ...]
    pairs: frozenset[tuple[str, str]]
    _image: dict[str, frozenset[str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        src, tgt = set(self.source), set(self.target)
        img: dict[str, set[str]] = {}
        for a, b in self.pairs:
            if a not in src or b not in tgt:
                raise ValidationError(f"pair ({a},{b}) leaves the declared state sets")
            img.setdefault(a, set()).add(b)
        object.__setattr__(self, "_image", {a: frozenset(bs) for a, bs in img.items()})

    @classmethod
    def make(cls, source: Iterable[str], target: Iterable[str],
             pairs: Iterable[tuple[str, str]]) -> "Transition":
        return cls(tuple(source), tuple(target), frozenset(tuple(p) for p in pairs))

    @classmethod
    def diagonal(cls, states: Iterable[str]) -> "Transition":
        states = tuple(states)
        return cls(states, states, frozenset((s, s) for s in states))

    @classmethod
    def empty(cls, source: Iterable[str], target: Iterable[str]) -> "Transition":
        return cls(tuple(source), tuple(target), frozenset())

    def image(self, state: str) -> frozenset[str]:
        return self._image.get(state, frozenset())


def compose_transitions(u: Transition, v: Transition) -> Transition:
    """Relational composition, u applied first: (a,c) iff some b has
    (a,b) in u and (b,c) in v."""
    if set(u.target) != set(v.source):
        raise EndpointMismatch("target set of the first transition must equal source set of the second")
    pairs = {(a, c) for a, b in u.pairs for c in v.image(b)}
    return Transition(u.source, v.target, frozenset(pairs))


@dataclass(frozen=True)
class Dynamics:
    """State sets per object plus one transition per arrow of the motor."""

    motor: Category
    state_sets: dict[str, tuple[str, ...]]
    transitions: dict[str, Transition]
    _typ: dict[str, str] = field(init=False, repr=False, compare=False)
    _key: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        typ: dict[str, str] = {}
        key: dict[str, int] = {}
        for obj in self.motor.objects:
            for s in self.state_sets.get(obj, ()):
                if s in typ:
                    raise ValidationError(f"state {s} appears under two objects ({typ[s]} and {obj})")
                typ[s] = obj
                key[s] = len(key)
        object.__setattr__(self, "_typ", typ)
        object.__setattr__(self, "_key", key)

    def states(self) -> tuple[str, ...]:
        return tuple(self._key)

    def typ(self, state: str) -> str:
        return self._typ[state]

    def state_key(self, state: str) -> int:
        return self._key[state]

    def states_of(self, obj: str) -> tuple[str, ...]:
        return self.state_sets.get(obj, ())

    def transition(self, arrow: str) -> Transition:
        return self.transitions[arrow]

    def sorted_states(self, states: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(states, key=self.state_key))

    def sorted_pairs(self, pairs: Iterable[tuple[str, str]]) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(pairs, key=lambda p: (self._key[p[0]], self._key[p[1]])))

    def restrict(self, keep: Iterable[str]) -> "Dynamics":
        """Sub-dynamics induced on the given states."""
        keep = set(keep)
        state_sets = {
            obj: tuple(s for s in self.state_sets.get(obj, ()) if s in keep)
            for obj in self.motor.objects
        }
        pairs = {
            name: {(a, b) for a, b in t.pairs if a in keep and b in keep}
            for name, t in self.transitions.items()
        }
        return make_dynamics(self.motor, state_sets, pairs)


def make_dynamics(
    motor: Category,
    state_sets: Mapping[str, Sequence[str]],
    pairs_by_arrow: Mapping[str, Iterable[tuple[str, str]]],
) -> Dynamics:
    """Build a Dynamics; arrows absent from ``pairs_by_arrow`` get the empty
    relation."""
    for obj in state_sets:
        if obj not in motor.objects:
            raise ValidationError(f"state set declared for unknown object {obj}")
    sets = {obj: tuple(state_sets.get(obj, ())) for obj in motor.objects}
    for obj, states in sets.items():
        if len(set(states)) != len(states):
            raise ValidationError(f"duplicate states under object {obj}")
    for name in pairs_by_arrow:
        if not motor.has_arrow(name):
            raise ValidationError(f"transition declared for unknown arrow {name}")
    transitions = {}
    for a in motor.arrows:
        pairs = pairs_by_arrow.get(a.name, ())
        try:
            transitions[a.name] = Transition.make(sets[a.dom], sets[a.cod], pairs)
        except ValidationError as exc:
            raise ValidationError(f"arrow {a.name}: {exc}") from exc
    return Dynamics(motor=motor, state_sets=sets, transitions=transitions)


def empty_dynamics(motor: Category) -> Dynamics:
    return make_dynamics(motor, {}, {})


def check_subcategorical(d: Dynamics, *, max_violations: int = DEFAULT_MAX_VIOLATIONS) -> PropertyReport:
    """Identity transitions inside the diagonal, composite transitions
    inside the relational composite of their factors."""
    out = _Collector(max_violations)
    for obj in d.motor.objects:
        ident = d.motor.identity_of(obj)
        for a, b in d.sorted_pairs(d.transition(ident).pairs):
            if a != b:
                out.add(Violation("identity-off-diagonal", arrows=(ident,), states=(a, b)))
    for e, f, w in d.motor.composable_pairs():
        composite = compose_transitions(d.transition(e), d.transition(f))
        for a, c in d.sorted_pairs(d.transition(w).pairs):
            if (a, c) not in composite.pairs:
                out.add(Violation("composite-not-included", arrows=(e, f, w), states=(a, c)))
    return out.report()


def check_proper(d: Dynamics, *, max_violations: int = DEFAULT_MAX_VIOLATIONS) -> PropertyReport:
    """Every identity transition is the full diagonal (no out-of-play state)."""
    _require_subcategorical(d)
    out = _Collector(max_violations)
    for obj in d.motor.objects:
        ident = d.motor.identity_of(obj)
        t = d.transition(ident)
        for a in d.states_of(obj):
            if (a, a) not in t.pairs:
                out.add(Violation("state-out-of-play", arrows=(ident,), states=(a,)))
    return out.report()


def check_categorical(d: Dynamics, *, max_violations: int = DEFAULT_MAX_VIOLATIONS) -> PropertyReport:
    """Proper, with equality (not mere inclusion) on every composable pair."""
    out = _Collector(max_violations)
    for obj in d.motor.objects:
        ident = d.motor.identity_of(obj)
        t = d.transition(ident)
        for a, b in d.sorted_pairs(t.pairs):
            if a != b:
                out.add(Violation("identity-off-diagonal", arrows=(ident,), states=(a, b)))
        for a in d.states_of(obj):
            if (a, a) not in t.pairs:
                out.add(Violation("state-out-of-play", arrows=(ident,), states=(a,)))
    for e, f, w in d.motor.composable_pairs():
        composite = compose_transitions(d.transition(e), d.transition(f))
        tw = d.transition(w)
        for a in d.states_of(d.motor.dom(e)):
            lhs, rhs = tw.image(a), composite.image(a)
            if lhs != rhs:
                out.add(Violation(
                    "composite-not-equal",
                    arrows=(e, f, w),
                    states=(a,),
                    found=d.sorted_states(lhs),
                    expected=d.sorted_states(rhs),
                ))
    return out.report()


def check_deterministic(d: Dynamics, *, max_violations: int = DEFAULT_MAX_VIOLATIONS) -> PropertyReport:
    """Every image is exactly a singleton (total single-valued)."""
    out = _Collector(max_violations)
    for a in d.motor.arrows:
        t = d.transition(a.name)
        for s in d.states_of(a.dom):
            img = t.image(s)
            if len(img) != 1:
                out.add(Violation("image-not-singleton", arrows=(a.name,), states=(s,),
                                  found=d.sorted_states(img)))
    return out.report()


def check_quasi_deterministic(d: Dynamics, *, max_violations: int = DEFAULT_MAX_VIOLATIONS) -> PropertyReport:
    """Every image has at most one element (partial single-valued)."""
    out = _Collector(max_violations)
    for a in d.motor.arrows:
        t = d.transition(a.name)
        for s in d.states_of(a.dom):
            img = t.image(s)
            if len(img) > 1:
                out.add(Violation("image-multivalued", arrows=(a.name,), states=(s,),
                                  found=d.sorted_states(img)))
    return out.report()


def _require_subcategorical(d: Dynamics) -> None:
    report = check_subcategorical(d, max_violations=1)
    if not report.holds:
        raise NotSubcategorical(report.violations[0].describe())


def out_of_play_states(d: Dynamics) -> tuple[str, ...]:
    """States whose identity image is empty, in document order."""
    _require_subcategorical(d)
    out = []
    for obj in d.motor.objects:
        t = d.transition(d.motor.identity_of(obj))
        out.extend(s for s in d.states_of(obj) if (s, s) not in t.pairs)
    return tuple(sorted(out, key=d.state_key))


def clean(d: Dynamics) -> Dynamics:
    """Remove every out-of-play state; the result is proper and cleaning is
    idempotent. By sub-categoricity such states touch no transition pair."""
    dead = set(out_of_play_states(d))
    return d.restrict(set(d.states()) - dead)


def _check_same_motor(ds: Sequence[Dynamics]) -> Category:
    motor = ds[0].motor
    for d in ds[1:]:
        if d.motor != motor:
            raise MotorMismatch("dynamics live over different motors")
    return motor


def union_dynamics(ds: Sequence[Dynamics], motor: Category | None = None) -> Dynamics:
    """Union of state sets and of transition pairs; members are read as
    empty outside their own state sets. The empty union is the empty
    dynamics, for which an explicit motor is required."""
    ds = list(ds)
    if not ds:
        if motor is None:
            raise ValidationError("union of no dynamics needs an explicit motor")
        return empty_dynamics(motor)
    found = _check_same_motor(ds)
    if motor is not None and motor != found:
        raise MotorMismatch("explicit motor differs from the members' motor")
    state_sets: dict[str, list[str]] = {obj: [] for obj in found.objects}
    for d in ds:
        for obj in found.objects:
            for s in d.states_of(obj):
                if s not in state_sets[obj]:
                    state_sets[obj].append(s)
    pairs = {
        a.name: set().union(*(d.transition(a.name).pairs for d in ds))
        for a in found.arrows
    }
    return make_dynamics(found, state_sets, pairs)


def intersect_dynamics(ds: Sequence[Dynamics]) -> Dynamics:
    """Intersection of state sets and of transition pairs."""
    ds = list(ds)
    if not ds:
        raise EmptyList("intersection of an empty list is undefined")
    motor = _check_same_motor(ds)
    state_sets = {
        obj: tuple(
            s for s in ds[0].states_of(obj)
            if all(s in d.states_of(obj) for d in ds[1:])
        )
        for obj in motor.objects
    }
    pairs = {
        a.name: frozenset.intersection(*(d.transition(a.name).pairs for d in ds))
        for a in motor.arrows
    }
    return make_dynamics(motor, state_sets, pairs)


def is_subdynamics(a: Dynamics, b: Dynamics) -> bool:
    """Componentwise inclusion of state sets and transition pairs."""
    if a.motor != b.motor:
        raise MotorMismatch("dynamics live over different motors")
    for obj in a.motor.objects:
        if not set(a.states_of(obj)) <= set(b.states_of(obj)):
            return False
    return all(a.transition(n).pairs <= b.transition(n).pairs for n in a.motor.arrow_names())


def largest_subcategorical(g: Dynamics) -> Dynamics:
    """Greatest sub-categorical sub-dynamics of g.

    Deflationary fixpoint: delete identity pairs off the diagonal, then
    repeatedly delete composite pairs with no relational witness, until
    stable. Sub-categorical sub-dynamics are closed under union, so the
    fixpoint contains every one of them and is therefore the greatest.
    State sets are untouched: they are unconstrained by sub-categoricity.
    """
    pairs: dict[str, set[tuple[str, str]]] = {
        name: set(g.transition(name).pairs) for name in g.motor.arrow_names()
    }
    for obj in g.motor.objects:
        ident = g.motor.identity_of(obj)
        pairs[ident] = {(a, b) for a, b in pairs[ident] if a == b}
    changed = True
    while changed:
        changed = False
        for e, f, w in g.motor.composable_pairs():
            pe, pf = pairs[e], pairs[f]
            for a, c in list(pairs[w]):
                if not any((a, b) in pe and (b, c) in pf for b in {x for _, x in pe}):
                    pairs[w].discard((a, c))
                    changed = True
    return make_dynamics(g.motor, g.state_sets, pairs)
