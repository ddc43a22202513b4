"""Dynamics generated by a dynamic family.

The primo-engendered dynamics lives on the synchronizing motor: its states
are synchronized tuples of component states, its parameters are the tuples
in the image of rb(R), and a transition pair needs a tuple of realization
witnesses passing through source and target componentwise. Mono and
partition engendering are parametric quotients of it. Sub-categoricity of
every generated slice is guaranteed (that is the stability theorem this
library exists to exercise), so it is re-checked at construction and a
failure is raised as an internal error, never reported as a property of the
input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .dynamics import Violation, check_categorical, check_subcategorical
from .errors import (
    InternalStabilityCheckFailed,
    PartitionMismatch,
    SizeGuardExceeded,
    SubcatdynError,
    ValidationError,
)
from .family import DynamicFamily
from .open_dynamics import (
    OpenDynamics,
    class_label,
    make_multi_dynamics,
    parametric_quotient,
    validate_open_dynamics,
)
from .temporal import DEFAULT_GUARD, Realization, SizeGuard

TUPLE_SEP = "|"

# provenance key: (arrow, parameter id, source tuple id, target tuple id)
Provenance = dict[tuple[str, str, str, str], tuple[tuple[Realization, ...], ...]]


@dataclass(frozen=True)
class GeneratedDynamics:
    family: DynamicFamily
    mode: str
    result: OpenDynamics
    provenance: Provenance


def _joined(parts: Sequence[str]) -> str:
    for p in parts:
        if TUPLE_SEP in p:
            raise ValidationError(f"id {p!r} may not contain {TUPLE_SEP!r} in a generated tuple")
    return TUPLE_SEP.join(parts)


def _synchronized_states(F: DynamicFamily, guard: SizeGuard):
    """Per object of the synchronizing motor, the tuples of component states
    whose dates agree through the synchronizations."""
    i0 = F.synchronizer
    A0 = F.components[i0]
    pos0 = F.index.index(i0)
    state_sets: dict[str, tuple[str, ...]] = {}
    ids: dict[tuple[str, ...], str] = {}
    for obj in A0.motor.objects:
        pools = []
        for i in F.index:
            target_obj = obj if i == i0 else F.synchronizations[i].functor.object_map[obj]
            pools.append(F.components[i].multi.states_of(target_obj))
        size = 1
        for pool in pools:
            size *= len(pool)
        if size > guard.max_product:
            raise SizeGuardExceeded(
                f"object {obj}: {size} candidate tuples exceed the guard ({guard.max_product})"
            )
        kept = []
        for combo in itertools.product(*pools):
            a0 = combo[pos0]
            t0 = A0.tau(a0)
            if all(
                F.components[i].tau(combo[n]) == F.sync_delta(i, t0)
                for n, i in enumerate(F.index)
                if i != i0
            ):
                ids[combo] = _joined(combo)
                kept.append(ids[combo])
        state_sets[obj] = tuple(kept)
    return state_sets, ids


def _parameter_ids(F: DynamicFamily) -> tuple[tuple[tuple[str, ...], str], ...]:
    return tuple((mu, _joined(mu)) for mu in F.interaction.rb_image())


def primo_engender(F: DynamicFamily, *, guard: SizeGuard = DEFAULT_GUARD) -> GeneratedDynamics:
    """Construct the primo-engendered open dynamics of the family.

    Rather than testing the witness condition per candidate pair, each
    realization tuple is walked once along every arrow and every instant of
    the synchronizing clock: the component values read off at the source and
    target instants are exactly the pairs it witnesses. The verbatim
    comprehension lives in naive_primo_engender and anchors this in tests.
    """
    i0 = F.synchronizer
    A0 = F.components[i0]
    h0 = A0.clock
    pos0 = F.index.index(i0)

    state_sets, ids = _synchronized_states(F, guard)
    mus = _parameter_ids(F)

    pairs: dict[str, dict[str, set[tuple[str, str]]]] = {
        a: {mu_id: set() for _, mu_id in mus} for a in A0.motor.arrow_names()
    }
    witnesses: dict[tuple[str, str, str, str], list[tuple[Realization, ...]]] = {}

    def read(ext: tuple[Realization, ...], instant: str) -> tuple[str, ...] | None:
        combo = []
        for n, i in enumerate(F.index):
            value = ext[n].value(F.sync_delta(i, instant))
            if value is None:
                return None
            combo.append(value)
        return tuple(combo)

    for mu, mu_id in mus:
        for ext in F.interaction.rb_inverse(mu):
            for arr in A0.motor.arrows:
                for t in h0.instants_of(arr.dom):
                    source = read(ext, t)
                    if source is None:
                        continue
                    target = read(ext, h0.step(arr.name, t))
                    if target is None:
                        continue
                    if source not in ids or target not in ids:
                        raise InternalStabilityCheckFailed(
                            "a witnessed tuple escaped the synchronized state sets"
                        )
                    aid, bid = ids[source], ids[target]
                    pairs[arr.name][mu_id].add((aid, bid))
                    key = (arr.name, mu_id, aid, bid)
                    if key not in witnesses:
                        witnesses[key] = []
                    if ext not in witnesses[key]:
                        witnesses[key].append(ext)

    datation = {ids[combo]: A0.tau(combo[pos0]) for combo in ids}
    result = _assemble(F, state_sets, [mu_id for _, mu_id in mus], pairs, datation)
    provenance = {key: tuple(w) for key, w in witnesses.items()}
    return GeneratedDynamics(family=F, mode="primo", result=result, provenance=provenance)


def _assemble(F, state_sets, params, pairs, datation) -> OpenDynamics:
    h0 = F.components[F.synchronizer].clock
    try:
        multi = make_multi_dynamics(
            h0.motor, params, state_sets, pairs, require_subcategorical=False
        )
        for mu_id in params:
            report = check_subcategorical(multi.slice(mu_id), max_violations=1)
            if not report.holds:
                raise InternalStabilityCheckFailed(
                    f"generated slice {mu_id} is not sub-categorical: "
                    f"{report.violations[0].describe()}"
                )
        return validate_open_dynamics(multi, h0, datation)
    except InternalStabilityCheckFailed:
        raise
    except SubcatdynError as exc:
        raise InternalStabilityCheckFailed(f"generated dynamics failed validation: {exc}") from exc


def naive_primo_engender(F: DynamicFamily, *, guard: SizeGuard = DEFAULT_GUARD) -> GeneratedDynamics:
    """Reference constructor: the transition comprehension evaluated
    verbatim, quantifiers and all. Used as the testing oracle."""
    i0 = F.synchronizer
    A0 = F.components[i0]
    h0 = A0.clock
    pos0 = F.index.index(i0)

    state_sets, ids = _synchronized_states(F, guard)
    tuples_by_id = {v: k for k, v in ids.items()}
    mus = _parameter_ids(F)

    def passes_through_pair(ext, combo_a, combo_b) -> bool:
        for n, i in enumerate(F.index):
            A = F.components[i]
            if ext[n].value(A.tau(combo_a[n])) != combo_a[n]:
                return False
            if ext[n].value(A.tau(combo_b[n])) != combo_b[n]:
                return False
        return True

    pairs: dict[str, dict[str, set[tuple[str, str]]]] = {
        a: {mu_id: set() for _, mu_id in mus} for a in A0.motor.arrow_names()
    }
    witnesses: dict[tuple[str, str, str, str], list] = {}
    for arr in A0.motor.arrows:
        for mu, mu_id in mus:
            inverse = F.interaction.rb_inverse(mu)
            for aid in state_sets[arr.dom]:
                combo_a = tuples_by_id[aid]
                t0 = A0.tau(combo_a[pos0])
                for bid in state_sets[arr.cod]:
                    combo_b = tuples_by_id[bid]
                    if A0.tau(combo_b[pos0]) != h0.step(arr.name, t0):
                        continue
                    found = [ext for ext in inverse if passes_through_pair(ext, combo_a, combo_b)]
                    if found:
                        pairs[arr.name][mu_id].add((aid, bid))
                        witnesses[(arr.name, mu_id, aid, bid)] = found

    datation = {ids[combo]: A0.tau(combo[pos0]) for combo in ids}
    result = _assemble(F, state_sets, [mu_id for _, mu_id in mus], pairs, datation)
    provenance = {key: tuple(w) for key, w in witnesses.items()}
    return GeneratedDynamics(family=F, mode="naive-primo", result=result, provenance=provenance)


def _quotient_generated(gen: GeneratedDynamics, partition: Sequence[Sequence[str]],
                        mode: str) -> GeneratedDynamics:
    result = parametric_quotient(gen.result, partition)
    order = {p: n for n, p in enumerate(gen.result.parameters)}
    label_of = {}
    for block in partition:
        label = class_label(sorted(block, key=order.__getitem__))
        for member in block:
            label_of[member] = label
    provenance: dict[tuple[str, str, str, str], list] = {}
    for (arrow, mu_id, aid, bid), wits in gen.provenance.items():
        key = (arrow, label_of[mu_id], aid, bid)
        bucket = provenance.setdefault(key, [])
        for w in wits:
            if w not in bucket:
                bucket.append(w)
    return GeneratedDynamics(
        family=gen.family,
        mode=mode,
        result=result,
        provenance={k: tuple(v) for k, v in provenance.items()},
    )


def mono_engender(F: DynamicFamily, *, guard: SizeGuard = DEFAULT_GUARD) -> GeneratedDynamics:
    """Quotient of the primo-engendered dynamics by the full equivalence:
    a single parameter whose transitions are the unions over all of M."""
    gen = primo_engender(F, guard=guard)
    return _quotient_generated(gen, [list(gen.result.parameters)], "mono")


def quotient_engender(
    F: DynamicFamily,
    partition: Sequence[Sequence[str]],
    *,
    guard: SizeGuard = DEFAULT_GUARD,
) -> GeneratedDynamics:
    """Quotient of the primo-engendered dynamics by a user-supplied
    partition of the generated parameter set."""
    gen = primo_engender(F, guard=guard)
    flat = [m for block in partition for m in block]
    if set(flat) != set(gen.result.parameters) or len(flat) != len(set(flat)):
        raise PartitionMismatch(
            "partition must cover the generated parameter set exactly; "
            f"parameters are: {', '.join(gen.result.parameters)}"
        )
    return _quotient_generated(gen, partition, "quotient")


@dataclass(frozen=True)
class ModeStability:
    label: str
    subcategorical: bool
    categorical: bool
    stable: bool | None
    param: str | None = None
    first_violation: Violation | None = None


@dataclass(frozen=True)
class StabilityReport:
    family_categorical: bool
    component_witness: tuple[str, str, Violation] | None
    modes: tuple[ModeStability, ...]


def stability_report(
    F: DynamicFamily,
    partitions: Sequence[tuple[str, Sequence[Sequence[str]]]] | None = None,
    *,
    guard: SizeGuard = DEFAULT_GUARD,
) -> StabilityReport:
    """Is the family categorical and, mode by mode, is the generated
    dynamics categorical (the four stability notions)?

    Sub-categoricity of every generated slice is reported as well; it is
    expected true unconditionally. Stability verdicts only apply when the
    family itself is categorical, and are marked not-applicable otherwise.
    """
    component_witness = None
    for i in F.index:
        A = F.components[i]
        for lam in A.parameters:
            report = check_categorical(A.slice(lam), max_violations=1)
            if not report.holds:
                component_witness = (i, lam, report.violations[0])
                break
        if component_witness:
            break
    family_categorical = component_witness is None

    gen = primo_engender(F, guard=guard)
    runs = [("primo", gen), ("mono", _quotient_generated(gen, [list(gen.result.parameters)], "mono"))]
    for name, blocks in partitions or ():
        flat = [m for block in blocks for m in block]
        if set(flat) != set(gen.result.parameters) or len(flat) != len(set(flat)):
            raise PartitionMismatch(f"partition {name} does not cover the generated parameters")
        runs.append((f"quotient:{name}", _quotient_generated(gen, blocks, "quotient")))

    modes = []
    for label, g in runs:
        subcat = True
        cat = True
        first = None
        param = None
        for mu in g.result.parameters:
            s = g.result.slice(mu)
            if not check_subcategorical(s, max_violations=1).holds:
                subcat = False
            report = check_categorical(s, max_violations=1)
            if not report.holds and first is None:
                cat = False
                first = report.violations[0]
                param = mu
            elif not report.holds:
                cat = False
        modes.append(ModeStability(
            label=label,
            subcategorical=subcat,
            categorical=cat,
            stable=cat if family_categorical else None,
            param=param,
            first_violation=first,
        ))
    return StabilityReport(
        family_categorical=family_categorical,
        component_witness=component_witness,
        modes=tuple(modes),
    )
