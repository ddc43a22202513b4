"""Clocks, the succession preorder on instants, and realization enumeration.

A clock is a deterministic sub-categorical dynamics; its states are called
instants. A realization of a dynamics against a clock is a partial map from
instants to states that follows the transitions; enumeration is by
backtracking over a topological order of the succession preorder, with a
naive all-partial-functions oracle kept alongside for testing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .dynamics import Dynamics, check_deterministic, check_subcategorical
from .errors import (
    ClockNotDeterministic,
    InternalCheckFailed,
    MotorMismatch,
    NotSubcategorical,
    SizeGuardExceeded,
    SuccessionViolation,
    UnknownState,
    ValidationError,
)

if TYPE_CHECKING:  # pragma: no cover - only for annotations
    from .open_dynamics import OpenDynamics


@dataclass(frozen=True)
class SizeGuard:
    max_instants: int = 12
    max_product: int = 1_000_000


DEFAULT_GUARD = SizeGuard()


@dataclass(frozen=True)
class Clock:
    """A deterministic sub-categorical dynamics; use validate_clock."""

    base: Dynamics
    _step: dict[tuple[str, str], str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        step = {}
        for a in self.base.motor.arrows:
            t = self.base.transition(a.name)
            for s in self.base.states_of(a.dom):
                (target,) = t.image(s)
                step[(a.name, s)] = target
        object.__setattr__(self, "_step", step)

    @property
    def motor(self):
        return self.base.motor

    def instants(self) -> tuple[str, ...]:
        return self.base.states()

    def instants_of(self, obj: str) -> tuple[str, ...]:
        return self.base.states_of(obj)

    def typ(self, instant: str) -> str:
        return self.base.typ(instant)

    def instant_key(self, instant: str) -> int:
        return self.base.state_key(instant)

    def step(self, arrow: str, instant: str) -> str:
        """The unique instant reached from ``instant`` along ``arrow``."""
        return self._step[(arrow, instant)]


def validate_clock(d: Dynamics) -> Clock:
    if not check_subcategorical(d, max_violations=1).holds:
        raise NotSubcategorical("a clock must be sub-categorical")
    report = check_deterministic(d, max_violations=1)
    if not report.holds:
        raise ClockNotDeterministic(report.violations[0].describe())
    return Clock(base=d)


def succession(h: Clock) -> frozenset[tuple[str, str]]:
    """The preorder {(s,t) : some arrow sends s to t}; reflexivity and
    transitivity are re-verified before returning."""
    pairs = set()
    for a in h.motor.arrows:
        for s in h.instants_of(a.dom):
            pairs.add((s, h.step(a.name, s)))
    for t in h.instants():
        if (t, t) not in pairs:
            raise InternalCheckFailed(f"succession of a valid clock must be reflexive, missing ({t},{t})")
    for s, t in pairs:
        for t2, u in pairs:
            if t == t2 and (s, u) not in pairs:
                raise InternalCheckFailed(f"succession must be transitive, missing ({s},{u})")
    return frozenset(pairs)


@dataclass(frozen=True)
class Realization:
    """A parameter (None for mono-dynamics) plus a partial map from instants
    to states, stored as pairs in clock document order."""

    parameter: str | None
    assignment: tuple[tuple[str, str], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str], clock: Clock,
                     parameter: str | None = None) -> "Realization":
        for t in mapping:
            if t not in set(clock.instants()):
                raise UnknownRealizationInstant(t)
        pairs = tuple(sorted(mapping.items(), key=lambda kv: clock.instant_key(kv[0])))
        return cls(parameter=parameter, assignment=pairs)

    def mapping(self) -> dict[str, str]:
        return dict(self.assignment)

    def df(self) -> frozenset[str]:
        return frozenset(t for t, _ in self.assignment)

    def value(self, instant: str) -> str | None:
        for t, s in self.assignment:
            if t == instant:
                return s
        return None

    def external_part(self) -> "Realization":
        return replace(self, parameter=None)

    def is_total(self, h: Clock) -> bool:
        return len(self.assignment) == len(h.instants())


class UnknownRealizationInstant(ValidationError):
    pass


@dataclass(frozen=True)
class RealizationSet:
    """Full list of (parameter, external part) realizations plus the
    deduplicated external parts; the union over parameters is not disjoint."""

    full: tuple[Realization, ...]
    external_parts: tuple[Realization, ...]


def _lex_key(r: Realization, h: Clock) -> tuple:
    return tuple((h.instant_key(t), s) for t, s in r.assignment)


def _satisfies_steps(h: Clock, d: Dynamics, asg: Mapping[str, str]) -> bool:
    for a in h.motor.arrows:
        for t in h.instants_of(a.dom):
            after = asg.get(h.step(a.name, t))
            if after is None:
                continue
            before = asg.get(t)
            if before is None or after not in d.transition(a.name).image(before):
                return False
    return True


def _check_inputs(h: Clock, d: Dynamics, guard: SizeGuard) -> None:
    if h.motor != d.motor:
        raise MotorMismatch("clock and dynamics live over different motors")
    if len(h.instants()) > guard.max_instants:
        raise SizeGuardExceeded(
            f"{len(h.instants())} instants exceed the guard ({guard.max_instants})"
        )


def _options(h: Clock, d: Dynamics, allowed: Mapping[str, Sequence[str]] | None,
             instant: str) -> tuple[str, ...]:
    if allowed is not None:
        return tuple(allowed.get(instant, ()))
    return d.states_of(h.typ(instant))


def oracle_h_realizations(
    h: Clock,
    d: Dynamics,
    *,
    guard: SizeGuard = DEFAULT_GUARD,
    allowed: Mapping[str, Sequence[str]] | None = None,
) -> tuple[Realization, ...]:
    """Naive oracle: every partial function over the instants, filtered by
    the step condition. Exponential; kept as the reference the backtracking
    enumerator is tested against."""
    _check_inputs(h, d, guard)
    instants = h.instants()
    option_lists = [(None, *_options(h, d, allowed, t)) for t in instants]
    found = []
    for combo in itertools.product(*option_lists):
        asg = {t: s for t, s in zip(instants, combo) if s is not None}
        if _satisfies_steps(h, d, asg):
            found.append(Realization.from_mapping(asg, h))
    found.sort(key=lambda r: _lex_key(r, h))
    return tuple(found)


def _topological_instants(h: Clock) -> list[str] | None:
    """Instants ordered compatibly with succession, or None on a cycle."""
    instants = list(h.instants())
    out: dict[str, set[str]] = {t: set() for t in instants}
    indeg = {t: 0 for t in instants}
    for a in h.motor.arrows:
        for t in h.instants_of(a.dom):
            t2 = h.step(a.name, t)
            if t2 != t and t2 not in out[t]:
                out[t].add(t2)
                indeg[t2] += 1
    ready = [t for t in instants if indeg[t] == 0]
    order = []
    while ready:
        t = ready.pop(0)
        order.append(t)
        for t2 in sorted(out[t], key=h.instant_key):
            indeg[t2] -= 1
            if indeg[t2] == 0:
                ready.append(t2)
    return order if len(order) == len(instants) else None


def enumerate_h_realizations(
    h: Clock,
    d: Dynamics,
    *,
    guard: SizeGuard = DEFAULT_GUARD,
    allowed: Mapping[str, Sequence[str]] | None = None,
) -> tuple[Realization, ...]:
    """All realizations of d against h, in canonical lexicographic order.

    Backtracks over instants in a succession-compatible order, pruning each
    assignment against the arrows that end at it. When the succession
    preorder has a cycle no such order exists and the naive oracle is used
    instead.
    """
    _check_inputs(h, d, guard)
    order = _topological_instants(h)
    if order is None:
        return oracle_h_realizations(h, d, guard=guard, allowed=allowed)

    into: dict[str, list[tuple[str, str]]] = {t: [] for t in order}
    for a in h.motor.arrows:
        for t in h.instants_of(a.dom):
            into[h.step(a.name, t)].append((a.name, t))

    found: list[Realization] = []
    partial: dict[str, str] = {}

    def extend(pos: int) -> None:
        if pos == len(order):
            found.append(Realization.from_mapping(partial, h))
            return
        t = order[pos]
        # leaving t undefined never violates a constraint ending at t
        extend(pos + 1)
        for s in _options(h, d, allowed, t):
            ok = True
            for arrow, src in into[t]:
                before = s if src == t else partial.get(src)
                if before is None or s not in d.transition(arrow).image(before):
                    ok = False
                    break
            if ok:
                partial[t] = s
                extend(pos + 1)
                del partial[t]

    extend(0)
    found.sort(key=lambda r: _lex_key(r, h))
    return tuple(found)


def _datation_filter(A: "OpenDynamics") -> dict[str, tuple[str, ...]]:
    allowed: dict[str, list[str]] = {t: [] for t in A.clock.instants()}
    for s in A.states():
        allowed[A.tau(s)].append(s)
    return {t: tuple(ss) for t, ss in allowed.items()}


def enumerate_realizations(
    A: "OpenDynamics",
    *,
    guard: SizeGuard = DEFAULT_GUARD,
    use_oracle: bool = False,
) -> RealizationSet:
    """All realizations (parameter, partial map) of an open dynamics.

    The datation restricts each instant to the states it dates; the step
    condition is checked against the slice of the chosen parameter. Output
    is ordered by parameter document order, then lexicographically.
    """
    allowed = _datation_filter(A)
    enumerate_fn = oracle_h_realizations if use_oracle else enumerate_h_realizations
    full: list[Realization] = []
    for param in A.parameters:
        for r in enumerate_fn(A.clock, A.slice(param), guard=guard, allowed=allowed):
            full.append(replace(r, parameter=param))
    seen: dict[tuple, Realization] = {}
    for r in full:
        seen.setdefault(r.assignment, r.external_part())
    external = sorted(seen.values(), key=lambda r: _lex_key(r, A.clock))
    return RealizationSet(full=tuple(full), external_parts=tuple(external))


def is_realization(A: "OpenDynamics", parameter: str, mapping: Mapping[str, str]) -> tuple[bool, str]:
    """Decide directly whether the partial map is a realization of the given
    slice; returns (ok, reason)."""
    if parameter not in A.parameters:
        return False, f"unknown parameter {parameter}"
    instants = set(A.clock.instants())
    states = set(A.states())
    for t, s in mapping.items():
        if t not in instants:
            return False, f"unknown instant {t}"
        if s not in states:
            return False, f"unknown state {s}"
        if A.tau(s) != t:
            return False, f"state {s} is dated {A.tau(s)}, not {t}"
    if not _satisfies_steps(A.clock, A.slice(parameter), dict(mapping)):
        return False, "step condition fails"
    return True, ""


def passes_through(r: Realization, a: str, A: "OpenDynamics") -> bool:
    """True when the realization assigns a to the instant dating a."""
    if a not in set(A.states()):
        raise UnknownState(f"{a} is not a state of the dynamics")
    return r.value(A.tau(a)) == a


def passes_then(r: Realization, a: str, b: str, A: "OpenDynamics") -> bool:
    """True when r passes through a and then through b; the date of b must
    succeed the date of a."""
    for s in (a, b):
        if s not in set(A.states()):
            raise UnknownState(f"{s} is not a state of the dynamics")
    if (A.tau(a), A.tau(b)) not in succession(A.clock):
        raise SuccessionViolation(f"{A.tau(b)} does not succeed {A.tau(a)}")
    return passes_through(r, a, A) and passes_through(r, b, A)
