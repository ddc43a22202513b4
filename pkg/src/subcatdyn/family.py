"""Interactions and dynamic families.

An interaction is a non-empty set of index-aligned (realization, parameter)
tuples, each component coherent with its open dynamics: the listed external
part must actually be a realization under the listed parameter. A dynamic
family adds a synchronizing component and, for every other component, a
deterministic clock dynamorphism out of the synchronizer's clock.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .category import Functor
from .errors import (
    CoherenceViolation,
    EmptyInteraction,
    IndexMismatch,
    MotorMismatch,
    SynchronizationNotCommuting,
    SynchronizationNotDeterministic,
    UnknownParameterTuple,
    UnknownRealizationReference,
)
from .open_dynamics import OpenDynamics
from .temporal import Realization, is_realization


@dataclass(frozen=True)
class Interaction:
    """Tuples are aligned with the index; each entry is a full realization
    (its parameter is the λ_i of the tuple component)."""

    index: tuple[str, ...]
    entries: tuple[tuple[Realization, ...], ...]

    def rb_pairs(self) -> tuple[tuple[tuple[Realization, ...], tuple[str, ...]], ...]:
        """The induced binary relation between external-part tuples and
        parameter tuples."""
        return tuple(
            (tuple(r.external_part() for r in entry), tuple(r.parameter for r in entry))
            for entry in self.entries
        )

    def rb_image(self) -> tuple[tuple[str, ...], ...]:
        """Parameter tuples reached by some realization tuple, in first
        occurrence order."""
        seen = []
        for _, mu in self.rb_pairs():
            if mu not in seen:
                seen.append(mu)
        return tuple(seen)

    def rb_inverse(self, mu: Sequence[str]) -> tuple[tuple[Realization, ...], ...]:
        """External-part tuples related to the given parameter tuple; empty
        with a warning when the tuple lies outside the image."""
        mu = tuple(mu)
        found = []
        for ext, got in self.rb_pairs():
            if got == mu and ext not in found:
                found.append(ext)
        if not found:
            warnings.warn(f"parameter tuple {mu} is outside Im(rb(R))", UnknownParameterTuple)
        return tuple(found)


def rb(R: Interaction):
    return R.rb_pairs()


def rb_image(R: Interaction):
    return R.rb_image()


def rb_inverse(R: Interaction, mu: Sequence[str]):
    return R.rb_inverse(mu)


def build_interaction(
    index: Sequence[str],
    components: Mapping[str, OpenDynamics],
    tuples: Sequence[Sequence[Realization]],
) -> Interaction:
    """Validate raw tuples into an Interaction.

    Coherence is checked directly: each listed external part must satisfy
    the realization conditions of its component under its parameter.
    Structurally equal tuples are deduplicated, keeping first occurrence.
    """
    index = tuple(index)
    if not index:
        raise IndexMismatch("interaction index must be non-empty")
    for i in index:
        if i not in components:
            raise IndexMismatch(f"no component for index {i}")
    if not tuples:
        raise EmptyInteraction("an interaction must contain at least one tuple")
    entries = []
    for n, raw in enumerate(tuples):
        raw = tuple(raw)
        if len(raw) != len(index):
            raise IndexMismatch(f"tuple #{n} has {len(raw)} components, index has {len(index)}")
        for i, r in zip(index, raw):
            A = components[i]
            if r.parameter is None:
                raise CoherenceViolation(f"tuple #{n}, component {i}: missing parameter")
            instants = set(A.clock.instants())
            states = set(A.states())
            for t, s in r.assignment:
                if t not in instants or s not in states:
                    raise UnknownRealizationReference(
                        f"tuple #{n}, component {i}: ({t} ↦ {s}) references unknown ids"
                    )
            ok, reason = is_realization(A, r.parameter, r.mapping())
            if not ok:
                raise CoherenceViolation(
                    f"tuple #{n}, component {i}: not a realization under "
                    f"{r.parameter} ({reason})"
                )
        if raw not in entries:
            entries.append(raw)
    return Interaction(index=index, entries=tuple(entries))


@dataclass(frozen=True)
class ClockSync:
    """A deterministic clock dynamorphism (Δ_i, δ_i) out of the
    synchronizer's clock."""

    functor: Functor
    delta: dict[str, str]


@dataclass(frozen=True)
class DynamicFamily:
    index: tuple[str, ...]
    synchronizer: str
    components: dict[str, OpenDynamics]
    interaction: Interaction
    synchronizations: dict[str, ClockSync]

    @property
    def synchronizing_component(self) -> OpenDynamics:
        return self.components[self.synchronizer]

    def sync_functor(self, i: str) -> Functor:
        if i == self.synchronizer:
            from .category import identity_functor

            return identity_functor(self.synchronizing_component.motor)
        return self.synchronizations[i].functor

    def sync_delta(self, i: str, instant: str) -> str:
        if i == self.synchronizer:
            return instant
        return self.synchronizations[i].delta[instant]


def build_family(
    index: Sequence[str],
    synchronizer: str,
    components: Mapping[str, OpenDynamics],
    interaction: Interaction,
    synchronizations: Mapping[str, ClockSync],
) -> DynamicFamily:
    """Validate the quintuple; every synchronization must be a total
    single-valued clock map commuting exactly with the two clocks."""
    index = tuple(index)
    if not index or len(set(index)) != len(index):
        raise IndexMismatch("index must be a non-empty set")
    if synchronizer not in index:
        raise IndexMismatch(f"synchronizer {synchronizer} is not in the index")
    if set(components) != set(index):
        raise IndexMismatch("components must be keyed exactly by the index")
    if interaction.index != index:
        raise IndexMismatch("interaction index differs from the family index")
    expected_syncs = set(index) - {synchronizer}
    if set(synchronizations) != expected_syncs:
        raise IndexMismatch("synchronizations must be keyed by every non-synchronizing index")

    # re-verify coherence against these very components
    build_interaction(index, components, interaction.entries)

    h0 = components[synchronizer].clock
    c0 = components[synchronizer].motor
    for i in sorted(expected_syncs, key=index.index):
        sync = synchronizations[i]
        hi = components[i].clock
        if sync.functor.source != c0 or sync.functor.target != components[i].motor:
            raise MotorMismatch(
                f"synchronization {i}: functor must go from the synchronizing motor "
                f"to component {i}'s motor"
            )
        for obj in c0.objects:
            target_obj = sync.functor.object_map[obj]
            for t in h0.instants_of(obj):
                img = sync.delta.get(t)
                if img is None:
                    raise SynchronizationNotDeterministic(
                        f"synchronization {i}: δ is not defined at instant {t}"
                    )
                if img not in set(hi.instants_of(target_obj)):
                    raise SynchronizationNotDeterministic(
                        f"synchronization {i}: δ({t})={img} is not an instant of {target_obj}"
                    )
        for arr in c0.arrows:
            img_arrow = sync.functor.arrow_map[arr.name]
            for t in h0.instants_of(arr.dom):
                got = sync.delta[h0.step(arr.name, t)]
                expected = hi.step(img_arrow, sync.delta[t])
                if got != expected:
                    raise SynchronizationNotCommuting(
                        f"synchronization {i}: δ({arr.name}^h({t}))={got} but "
                        f"({img_arrow})^k(δ({t}))={expected}"
                    )
    return DynamicFamily(
        index=index,
        synchronizer=synchronizer,
        components=dict(components),
        interaction=interaction,
        synchronizations=dict(synchronizations),
    )
