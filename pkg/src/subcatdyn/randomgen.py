"""Seeded random generators: motors, clocks, dynamics, open dynamics and
whole families.

Used by the randomized verification suites and by the CLI. The point is
adversarial variety at desk scale, not realism: chain, diamond and
codiscrete motors of at most four objects, relational slices pruned to
their greatest sub-categorical sub-dynamics, deterministic slices built as
honest finite functors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .category import Category, Functor, validate_category, validate_functor
from .dynamics import Dynamics, clean, largest_subcategorical, make_dynamics
from .errors import SynchronizationNotCommuting
from .family import ClockSync, DynamicFamily, build_family, build_interaction
from .open_dynamics import OpenDynamics, make_multi_dynamics, validate_open_dynamics
from .temporal import (
    Clock,
    Realization,
    SizeGuard,
    enumerate_realizations,
    validate_clock,
)


@dataclass(frozen=True)
class MotorSpec:
    """A category plus the generator structure its random builders rely on."""

    kind: str  # chain | free-diamond | comm-diamond | codiscrete
    category: Category
    generators: tuple[str, ...]
    composite_paths: dict[str, tuple[str, ...]]  # non-generator arrow -> generator path


def chain_category(n: int) -> MotorSpec:
    objects = [f"A{i}" for i in range(1, n + 1)]
    arrows = [(f"id_{o}", o, o) for o in objects]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            arrows.append((f"a{i}_{j}", f"A{i}", f"A{j}"))
    compositions = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                compositions.append((f"a{i}_{j}", f"a{j}_{k}", f"a{i}_{k}"))
    cat = validate_category(objects, arrows, {o: f"id_{o}" for o in objects}, compositions)
    generators = tuple(f"a{i}_{i+1}" for i in range(1, n))
    paths = {
        f"a{i}_{j}": tuple(f"a{k}_{k+1}" for k in range(i, j))
        for i in range(1, n + 1)
        for j in range(i + 2, n + 1)
    }
    return MotorSpec("chain", cat, generators, paths)


def free_diamond_category() -> MotorSpec:
    objects = ["A", "B", "C", "D"]
    arrows = [(f"id_{o}", o, o) for o in objects] + [
        ("p", "A", "B"), ("q", "A", "C"), ("r", "B", "D"), ("s", "C", "D"),
        ("rp", "A", "D"), ("sq", "A", "D"),
    ]
    cat = validate_category(
        objects, arrows, {o: f"id_{o}" for o in objects},
        [("p", "r", "rp"), ("q", "s", "sq")],
    )
    return MotorSpec("free-diamond", cat, ("p", "q", "r", "s"),
                     {"rp": ("p", "r"), "sq": ("q", "s")})


def commutative_diamond_category() -> MotorSpec:
    objects = ["A", "B", "C", "D"]
    arrows = [(f"id_{o}", o, o) for o in objects] + [
        ("p", "A", "B"), ("q", "A", "C"), ("r", "B", "D"), ("s", "C", "D"),
        ("m", "A", "D"),
    ]
    cat = validate_category(
        objects, arrows, {o: f"id_{o}" for o in objects},
        [("p", "r", "m"), ("q", "s", "m")],
    )
    return MotorSpec("comm-diamond", cat, ("p", "q", "r", "s"), {"m": ("p", "r")})


def codiscrete_category(n: int) -> MotorSpec:
    """Exactly one arrow between any two objects; composites wrap around, so
    the succession preorder of its clocks has cycles."""
    objects = [f"X{i}" for i in range(1, n + 1)]
    arrows = [(f"c{i}_{j}", f"X{i}", f"X{j}") for i in range(1, n + 1) for j in range(1, n + 1)]
    compositions = [
        (f"c{i}_{j}", f"c{j}_{k}", f"c{i}_{k}")
        for i in range(1, n + 1) for j in range(1, n + 1) for k in range(1, n + 1)
    ]
    cat = validate_category(
        objects, arrows, {f"X{i}": f"c{i}_{i}" for i in range(1, n + 1)}, compositions
    )
    generators = tuple(f"c{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1) if i != j)
    return MotorSpec("codiscrete", cat, generators, {})


def random_motor(rng: random.Random, max_objects: int = 4) -> MotorSpec:
    choices = ["chain", "chain", "free-diamond", "comm-diamond", "codiscrete"]
    kind = rng.choice(choices)
    if kind == "chain":
        return chain_category(rng.randint(1, max_objects))
    if kind == "codiscrete":
        return codiscrete_category(rng.randint(1, min(3, max_objects)))
    if max_objects < 4:
        return chain_category(rng.randint(1, max_objects))
    return free_diamond_category() if kind == "free-diamond" else commutative_diamond_category()


# -- clocks ----------------------------------------------------------------


def _compose_maps(path: Sequence[str], maps: dict[str, dict[str, str]]) -> dict[str, str]:
    first = maps[path[0]]
    out = dict(first)
    for gen in path[1:]:
        out = {t: maps[gen][v] for t, v in out.items()}
    return out


def random_clock(rng: random.Random, spec: MotorSpec, prefix: str = "t",
                 max_per_object: int = 3) -> Clock:
    cat = spec.category
    if spec.kind in ("comm-diamond", "codiscrete"):
        # equal instant counts; generator maps are coherent bijections
        k = rng.randint(1, max_per_object)
        instants = {o: tuple(f"{prefix}{o}_{n}" for n in range(k)) for o in cat.objects}
        labels = {}
        for o in cat.objects:
            perm = list(range(k))
            rng.shuffle(perm)
            labels[o] = {t: perm[n] for n, t in enumerate(instants[o])}
        inverse = {o: {lab: t for t, lab in labels[o].items()} for o in cat.objects}
        pairs = {}
        for a in cat.arrows:
            pairs[a.name] = {(t, inverse[a.cod][labels[a.dom][t]]) for t in instants[a.dom]}
        return validate_clock(make_dynamics(cat, instants, pairs))

    instants = {
        o: tuple(f"{prefix}{o}_{n}" for n in range(rng.randint(1, max_per_object)))
        for o in cat.objects
    }
    maps: dict[str, dict[str, str]] = {}
    for gen in spec.generators:
        dom, cod = cat.dom(gen), cat.cod(gen)
        maps[gen] = {t: rng.choice(instants[cod]) for t in instants[dom]}
    for name, path in spec.composite_paths.items():
        maps[name] = _compose_maps(path, maps)
    pairs = {name: set(m.items()) for name, m in maps.items()}
    for o in cat.objects:
        pairs[cat.identity_of(o)] = {(t, t) for t in instants[o]}
    return validate_clock(make_dynamics(cat, instants, pairs))


# -- mono dynamics for the property suites ----------------------------------


def _random_state_sets(rng: random.Random, cat: Category, max_per_object: int = 3,
                       min_per_object: int = 0, prefix: str = "s") -> dict[str, tuple[str, ...]]:
    sets = {}
    count = 0
    for o in cat.objects:
        n = rng.randint(min_per_object, max_per_object)
        sets[o] = tuple(f"{prefix}{count + m}" for m in range(n))
        count += n
    return sets


def random_relational_dynamics(rng: random.Random, spec: MotorSpec,
                               p: float = 0.35, diag_p: float = 0.7) -> Dynamics:
    """Raw random relations; usually not sub-categorical."""
    cat = spec.category
    sets = _random_state_sets(rng, cat)
    pairs = {}
    for a in cat.arrows:
        chosen = set()
        for x in sets[a.dom]:
            for y in sets[a.cod]:
                prob = diag_p if cat.is_identity(a.name) and x == y else (
                    0.05 if cat.is_identity(a.name) else p)
                if rng.random() < prob:
                    chosen.add((x, y))
        pairs[a.name] = chosen
    return make_dynamics(cat, sets, pairs)


def random_subcategorical_dynamics(rng: random.Random, spec: MotorSpec | None = None) -> Dynamics:
    spec = spec or random_motor(rng)
    return largest_subcategorical(random_relational_dynamics(rng, spec))


def random_functor_dynamics(rng: random.Random, spec: MotorSpec | None = None,
                            partial: bool = False) -> Dynamics:
    """Deterministic (or quasi-deterministic when partial) dynamics built
    from generator choices; composite transitions are composed, so the
    result is categorical by construction. Chain and free-diamond motors
    only: their composition tables are freely generated."""
    if spec is not None and spec.kind not in ("chain", "free-diamond"):
        raise ValueError("functor-built dynamics need a freely generated motor")
    if spec is None:
        spec = chain_category(rng.randint(1, 4)) if rng.random() < 0.7 else free_diamond_category()
    cat = spec.category
    sets = _random_state_sets(rng, cat, min_per_object=1)
    maps: dict[str, dict[str, str]] = {}
    for gen in spec.generators:
        dom, cod = cat.dom(gen), cat.cod(gen)
        maps[gen] = {}
        for x in sets[dom]:
            if partial and rng.random() < 0.25:
                continue
            maps[gen][x] = rng.choice(sets[cod])
    for name, path in spec.composite_paths.items():
        out = dict(maps[path[0]])
        for gen in path[1:]:
            out = {x: maps[gen][v] for x, v in out.items() if v in maps[gen]}
        maps[name] = out
    pairs = {name: set(m.items()) for name, m in maps.items()}
    for o in cat.objects:
        pairs[cat.identity_of(o)] = {(x, x) for x in sets[o]}
    return make_dynamics(cat, sets, pairs)


def random_def1_dynamics(rng: random.Random) -> Dynamics:
    """A random sub-categorical dynamics, mixing relational and functor
    styles; the sampler behind the propositions' suites."""
    roll = rng.random()
    if roll < 0.25:
        return random_functor_dynamics(rng)
    if roll < 0.45:
        return random_functor_dynamics(rng, partial=True)
    return random_subcategorical_dynamics(rng)


def random_subcategorical_pair(rng: random.Random, proper: bool = False) -> tuple[Dynamics, Dynamics]:
    """Two sub-categorical dynamics over one motor, sharing a state
    universe so that their union is well-formed."""
    spec = random_motor(rng)
    cat = spec.category
    universe = _random_state_sets(rng, cat, max_per_object=3)
    out = []
    for _ in range(2):
        sets = {o: tuple(s for s in universe[o] if rng.random() < 0.8) for o in cat.objects}
        pairs = {}
        for a in cat.arrows:
            chosen = set()
            for x in sets[a.dom]:
                for y in sets[a.cod]:
                    if cat.is_identity(a.name):
                        if x == y and rng.random() < 0.8:
                            chosen.add((x, y))
                    elif rng.random() < 0.4:
                        chosen.add((x, y))
            pairs[a.name] = chosen
        d = largest_subcategorical(make_dynamics(cat, sets, pairs))
        out.append(clean(d) if proper else d)
    return out[0], out[1]


# -- open dynamics and families ---------------------------------------------


def random_open_dynamics(
    rng: random.Random,
    spec: MotorSpec,
    clock: Clock,
    prefix: str,
    n_params: int,
    max_states: int = 8,
) -> OpenDynamics:
    """Random open dynamics: states are spread over the (object, instant)
    grid (at least one each), slices are deterministic, quasi-deterministic
    or relational-pruned, and the datation is correct by construction."""
    cat = spec.category
    grid = [(o, t) for o in cat.objects for t in clock.instants_of(o)]
    counts = {cell: 1 for cell in grid}
    budget = max_states - len(grid)
    while budget > 0 and rng.random() < 0.6:
        counts[rng.choice(grid)] += 1
        budget -= 1
    sets: dict[str, list[str]] = {o: [] for o in cat.objects}
    datation: dict[str, str] = {}
    n = 0
    by_cell: dict[tuple[str, str], list[str]] = {cell: [] for cell in grid}
    for (o, t) in grid:
        for _ in range(counts[(o, t)]):
            name = f"{prefix}{n}"
            n += 1
            sets[o].append(name)
            datation[name] = t
            by_cell[(o, t)].append(name)

    styles = ["rel"] if spec.kind in ("comm-diamond", "codiscrete") else ["det", "qdet", "rel"]
    pairs: dict[str, dict[str, set[tuple[str, str]]]] = {a: {} for a in cat.arrow_names()}
    params = [f"m{k}" for k in range(n_params)]
    for param in params:
        style = rng.choice(styles)
        if style == "rel":
            slice_pairs = {}
            for a in cat.arrows:
                chosen = set()
                for x in sets[a.dom]:
                    tx = clock.step(a.name, datation[x])
                    for y in by_cell[(a.cod, tx)]:
                        if cat.is_identity(a.name):
                            if x == y and rng.random() < 0.8:
                                chosen.add((x, y))
                        elif rng.random() < 0.5:
                            chosen.add((x, y))
                slice_pairs[a.name] = chosen
            pruned = largest_subcategorical(make_dynamics(cat, sets, slice_pairs))
            for a in cat.arrow_names():
                pairs[a][param] = set(pruned.transition(a).pairs)
        else:
            maps: dict[str, dict[str, str]] = {}
            for gen in spec.generators:
                dom = cat.dom(gen)
                maps[gen] = {}
                for x in sets[dom]:
                    if style == "qdet" and rng.random() < 0.25:
                        continue
                    tx = clock.step(gen, datation[x])
                    maps[gen][x] = rng.choice(by_cell[(cat.cod(gen), tx)])
            for name, path in spec.composite_paths.items():
                out = dict(maps[path[0]])
                for gen in path[1:]:
                    out = {x: maps[gen][v] for x, v in out.items() if v in maps[gen]}
                maps[name] = out
            for name, m in maps.items():
                pairs[name][param] = set(m.items())
            for o in cat.objects:
                pairs[cat.identity_of(o)][param] = {(x, x) for x in sets[o]}
    multi = make_multi_dynamics(cat, params, sets, pairs)
    return validate_open_dynamics(multi, clock, datation)


def _chain_functor_and_delta(rng, spec0, clock0, spec_i, clock_i):
    """A functor between two chain motors plus a commuting clock map,
    propagated object by object; None when the forced values clash."""
    n0 = len(spec0.category.objects)
    ni = len(spec_i.category.objects)
    picks = sorted(rng.randint(1, ni) for _ in range(n0))
    object_map = {f"A{k+1}": f"A{picks[k]}" for k in range(n0)}
    arrow_map = {}
    for a in spec0.category.arrows:
        if spec0.category.is_identity(a.name):
            arrow_map[a.name] = spec_i.category.identity_of(object_map[a.dom])
        else:
            i, j = object_map[a.dom], object_map[a.cod]
            arrow_map[a.name] = (
                spec_i.category.identity_of(i) if i == j
                else f"a{i[1:]}_{j[1:]}"
            )
    functor = validate_functor(spec0.category, spec_i.category, object_map, arrow_map)
    delta: dict[str, str] = {}
    for k in range(1, n0 + 1):
        obj = f"A{k}"
        for t in clock0.instants_of(obj):
            forced = set()
            if k > 1:
                gen = f"a{k-1}_{k}"
                for t_prev in clock0.instants_of(f"A{k-1}"):
                    if clock0.step(gen, t_prev) == t:
                        img = functor.arrow_map[gen]
                        forced.add(clock_i.step(img, delta[t_prev]))
            if len(forced) > 1:
                return None
            delta[t] = forced.pop() if forced else rng.choice(
                clock_i.instants_of(functor.object_map[obj])
            )
    return functor, delta


def random_family(
    rng: random.Random,
    *,
    max_components: int = 3,
    max_tuples: int = 20,
    guard: SizeGuard = SizeGuard(max_instants=12, max_product=1_000_000),
) -> DynamicFamily:
    """A random dynamic family: components with valid synchronizations and
    an interaction sampled from actually enumerated realizations (so
    coherence holds by construction)."""
    n = rng.randint(1, max_components)
    index = tuple(f"c{k}" for k in range(n))
    synchronizer = index[0]

    spec0 = random_motor(rng)
    clock0 = random_clock(rng, spec0, prefix="t0_", max_per_object=1 if spec0.kind == "codiscrete" else 2)
    components = {
        synchronizer: random_open_dynamics(rng, spec0, clock0, "s0_", rng.randint(1, 3))
    }
    syncs: dict[str, ClockSync] = {}
    for k in range(1, n):
        i = index[k]
        strategies = ["shared", "constant"]
        if spec0.kind == "chain":
            strategies.append("chainmap")
        strategy = rng.choice(strategies)
        if strategy == "shared":
            components[i] = random_open_dynamics(rng, spec0, clock0, f"s{k}_", rng.randint(1, 3))
            functor = validate_functor(
                spec0.category, spec0.category,
                {o: o for o in spec0.category.objects},
                {a: a for a in spec0.category.arrow_names()},
            )
            syncs[i] = ClockSync(functor, {t: t for t in clock0.instants()})
            continue
        if strategy == "chainmap":
            spec_i = chain_category(rng.randint(1, 4))
            clock_i = random_clock(rng, spec_i, prefix=f"t{k}_", max_per_object=2)
            built = _chain_functor_and_delta(rng, spec0, clock0, spec_i, clock_i)
            if built is not None:
                functor, delta = built
                components[i] = random_open_dynamics(rng, spec_i, clock_i, f"s{k}_", rng.randint(1, 3))
                syncs[i] = ClockSync(functor, delta)
                continue
            strategy = "constant"  # clash while propagating: fall back
        spec_i = random_motor(rng)
        clock_i = random_clock(rng, spec_i, prefix=f"t{k}_",
                               max_per_object=1 if spec_i.kind == "codiscrete" else 2)
        components[i] = random_open_dynamics(rng, spec_i, clock_i, f"s{k}_", rng.randint(1, 3))
        target_obj = rng.choice(spec_i.category.objects)
        functor = validate_functor(
            spec0.category, spec_i.category,
            {o: target_obj for o in spec0.category.objects},
            {a: spec_i.category.identity_of(target_obj) for a in spec0.category.arrow_names()},
        )
        instant = rng.choice(clock_i.instants_of(target_obj))
        syncs[i] = ClockSync(functor, {t: instant for t in clock0.instants()})

    pools = {
        i: enumerate_realizations(components[i], guard=guard).full
        for i in index
    }
    n_tuples = rng.randint(1, max_tuples)
    tuples = [
        tuple(rng.choice(pools[i]) for i in index)
        for _ in range(n_tuples)
    ]
    interaction = build_interaction(index, components, tuples)
    try:
        return build_family(index, synchronizer, components, interaction, syncs)
    except SynchronizationNotCommuting:  # generator bug guard; should not happen
        raise


def random_partition(rng: random.Random, items: Sequence[str]) -> list[list[str]]:
    """A random partition of the items into non-empty blocks."""
    items = list(items)
    n_blocks = rng.randint(1, len(items))
    blocks: list[list[str]] = [[] for _ in range(n_blocks)]
    for m, item in enumerate(items):
        if m < n_blocks:
            blocks[m].append(item)  # every block non-empty
        else:
            rng.choice(blocks).append(item)
    return [b for b in blocks if b]
