"""JSON document format and the named-document workspace.

One document per file, one kind per document. Schema per kind:

  category       kind, name, objects, arrows [{name,dom,cod}], identities
                 {object: arrow}, compositions [{f,g,gf}] (gf = g∘f; entries
                 forced by the identity laws may be omitted)
  dynamics       kind, name, motor, states {object: [state,...]},
                 transitions {arrow: [[from,to],...]}
  clock          same fields as dynamics; must validate as a clock
  open-dynamics  kind, name, motor, clock, parameters, states, transitions
                 {arrow: {param: [[from,to],...]}}, datation {state: instant};
                 mono documents may give plain pair lists for transitions and
                 omit parameters, which normalizes to the single parameter "*"
  partition      kind, name, partition [[param,...],...]
  family         kind, name, index, synchronizer, components {i: open name},
                 synchronizations {i: {functor: {objects, arrows}, delta}},
                 interaction [{i: {realization: {instant: state}, param}}]

References (motor, clock, components) are by document name; member kinds form
a hierarchy, so resolution in kind order cannot cycle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .category import Category, validate_category, validate_functor
from .dynamics import Dynamics, make_dynamics
from .errors import LoadError, ParseError, SubcatdynError, UnknownReference, ValidationError
from .family import ClockSync, DynamicFamily, build_family, build_interaction
from .open_dynamics import OpenDynamics, make_multi_dynamics, validate_open_dynamics
from .temporal import Clock, Realization, validate_clock

KINDS = ("category", "dynamics", "clock", "open-dynamics", "partition", "family")


@dataclass
class Workspace:
    categories: dict[str, Category] = field(default_factory=dict)
    dynamics: dict[str, Dynamics] = field(default_factory=dict)
    clocks: dict[str, Clock] = field(default_factory=dict)
    open_dynamics: dict[str, OpenDynamics] = field(default_factory=dict)
    partitions: dict[str, tuple[tuple[str, ...], ...]] = field(default_factory=dict)
    families: dict[str, DynamicFamily] = field(default_factory=dict)
    # reference names, kept for serialization
    dynamics_motor: dict[str, str] = field(default_factory=dict)
    clock_motor: dict[str, str] = field(default_factory=dict)
    open_refs: dict[str, tuple[str, str]] = field(default_factory=dict)  # motor, clock
    family_components: dict[str, dict[str, str]] = field(default_factory=dict)

    def find_dynamics(self, name: str) -> Dynamics:
        """Resolve a name among dynamics and clocks (a clock is a dynamics)."""
        if name in self.dynamics:
            return self.dynamics[name]
        if name in self.clocks:
            return self.clocks[name].base
        raise UnknownReference(f"no dynamics or clock named {name}")


def _require(doc: Mapping, key: str, context: str):
    if key not in doc:
        raise ValidationError(f"{context}: missing field {key!r}")
    return doc[key]


def _doc_paths(paths: Iterable[str | Path]) -> list[Path]:
    out = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            out.extend(sorted(p.glob("*.json")))
        else:
            out.append(p)
    return out


def load_documents(paths: Iterable[str | Path]) -> Workspace:
    """Read, parse and validate every document; failures are aggregated into
    one LoadError carrying file context."""
    failures: list[str] = []
    docs: list[tuple[str, dict]] = []
    seen: set[tuple[str, str]] = set()
    for p in _doc_paths(paths):
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            failures.append(f"{p}: {exc}")
            continue
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            failures.append(f"{p}:{exc.lineno}: {exc.msg}")
            continue
        try:
            kind = _require(doc, "kind", str(p))
            name = _require(doc, "name", str(p))
            if kind not in KINDS:
                raise ValidationError(f"unknown kind {kind!r}")
            if (kind, name) in seen:
                raise ValidationError(f"duplicate {kind} document named {name}")
            seen.add((kind, name))
            docs.append((str(p), doc))
        except SubcatdynError as exc:
            failures.append(f"{p}: {exc}")
    ws = Workspace()
    for stage in KINDS:
        for path, doc in docs:
            if doc["kind"] != stage:
                continue
            try:
                _load_one(ws, doc)
            except SubcatdynError as exc:
                failures.append(f"{path} ({stage} {doc.get('name')}): {exc}")
    if failures:
        raise LoadError(failures)
    return ws


def load_document_objects(docs: Iterable[Mapping], ws: Workspace | None = None) -> Workspace:
    """Same as load_documents but for in-memory document objects."""
    ws = ws or Workspace()
    failures = []
    docs = list(docs)
    for stage in KINDS:
        for doc in docs:
            if doc.get("kind") != stage:
                continue
            try:
                _load_one(ws, dict(doc))
            except SubcatdynError as exc:
                failures.append(f"({stage} {doc.get('name')}): {exc}")
    if failures:
        raise LoadError(failures)
    return ws


def _load_one(ws: Workspace, doc: dict) -> None:
    kind, name = doc["kind"], doc["name"]
    ctx = f"{kind} {name}"
    if kind == "category":
        arrows = [
            (_require(a, "name", ctx), _require(a, "dom", ctx), _require(a, "cod", ctx))
            for a in _require(doc, "arrows", ctx)
        ]
        compositions = [
            (_require(c, "f", ctx), _require(c, "g", ctx), _require(c, "gf", ctx))
            for c in doc.get("compositions", ())
        ]
        ws.categories[name] = validate_category(
            _require(doc, "objects", ctx), arrows, _require(doc, "identities", ctx), compositions
        )
    elif kind in ("dynamics", "clock"):
        motor = _resolve(ws.categories, _require(doc, "motor", ctx), "category")
        d = make_dynamics(
            motor,
            _require(doc, "states", ctx),
            {a: [tuple(p) for p in pairs] for a, pairs in _require(doc, "transitions", ctx).items()},
        )
        if kind == "clock":
            ws.clocks[name] = validate_clock(d)
            ws.clock_motor[name] = doc["motor"]
        else:
            ws.dynamics[name] = d
            ws.dynamics_motor[name] = doc["motor"]
    elif kind == "open-dynamics":
        motor = _resolve(ws.categories, _require(doc, "motor", ctx), "category")
        clock = _resolve(ws.clocks, _require(doc, "clock", ctx), "clock")
        raw = _require(doc, "transitions", ctx)
        transitions: dict[str, dict[str, list]] = {}
        for arrow, by_param in raw.items():
            if isinstance(by_param, list):  # mono document: no parameter level
                by_param = {"*": by_param}
            transitions[arrow] = {p: [tuple(x) for x in pairs] for p, pairs in by_param.items()}
        parameters = doc.get("parameters")
        if parameters is None:
            parameters = sorted({p for by in transitions.values() for p in by})
            parameters = parameters or ["*"]
        multi = make_multi_dynamics(motor, parameters, _require(doc, "states", ctx), transitions)
        ws.open_dynamics[name] = validate_open_dynamics(multi, clock, _require(doc, "datation", ctx))
        ws.open_refs[name] = (doc["motor"], doc["clock"])
    elif kind == "partition":
        blocks = tuple(tuple(b) for b in _require(doc, "partition", ctx))
        ws.partitions[name] = blocks
    elif kind == "family":
        index = tuple(_require(doc, "index", ctx))
        comp_names = _require(doc, "components", ctx)
        components = {
            i: _resolve(ws.open_dynamics, comp_names[i], "open-dynamics")
            for i in index
            if i in comp_names
        }
        missing = [i for i in index if i not in comp_names]
        if missing:
            raise ValidationError(f"no component document for indices: {', '.join(missing)}")
        synchronizer = _require(doc, "synchronizer", ctx)
        syncs = {}
        for i, raw_sync in _require(doc, "synchronizations", ctx).items():
            if i not in components:
                raise ValidationError(f"synchronization for unknown index {i}")
            fdoc = _require(raw_sync, "functor", ctx)
            functor = validate_functor(
                components[synchronizer].motor,
                components[i].motor,
                _require(fdoc, "objects", ctx),
                _require(fdoc, "arrows", ctx),
            )
            syncs[i] = ClockSync(functor, dict(_require(raw_sync, "delta", ctx)))
        tuples = []
        for n, raw_tuple in enumerate(_require(doc, "interaction", ctx)):
            entry = []
            for i in index:
                part = raw_tuple.get(i)
                if part is None:
                    raise ValidationError(f"interaction tuple #{n} has no component {i}")
                entry.append(Realization.from_mapping(
                    _require(part, "realization", ctx),
                    components[i].clock,
                    parameter=_require(part, "param", ctx),
                ))
            tuples.append(tuple(entry))
        interaction = build_interaction(index, components, tuples)
        ws.families[name] = build_family(index, synchronizer, components, interaction, syncs)
        ws.family_components[name] = dict(comp_names)


def _resolve(table: Mapping[str, object], name: str, kind: str):
    if name not in table:
        raise UnknownReference(f"no {kind} named {name}")
    return table[name]


# -- serialization ----------------------------------------------------------


def category_doc(name: str, cat: Category) -> dict:
    forced = set()
    for a in cat.arrows:
        forced.add((cat.identity_of(a.dom), a.name))
        forced.add((a.name, cat.identity_of(a.cod)))
    compositions = [
        {"f": f, "g": g, "gf": gf}
        for (f, g), gf in sorted(
            cat.composition.items(),
            key=lambda kv: (cat.arrow_names().index(kv[0][0]), cat.arrow_names().index(kv[0][1])),
        )
        if (f, g) not in forced
    ]
    return {
        "kind": "category",
        "name": name,
        "objects": list(cat.objects),
        "arrows": [{"name": a.name, "dom": a.dom, "cod": a.cod} for a in cat.arrows],
        "identities": dict(cat.identity),
        "compositions": compositions,
    }


def _pairs_list(d: Dynamics, arrow: str) -> list[list[str]]:
    return [list(p) for p in d.sorted_pairs(d.transition(arrow).pairs)]


def dynamics_doc(name: str, d: Dynamics, motor_name: str, kind: str = "dynamics") -> dict:
    return {
        "kind": kind,
        "name": name,
        "motor": motor_name,
        "states": {obj: list(d.states_of(obj)) for obj in d.motor.objects},
        "transitions": {a: _pairs_list(d, a) for a in d.motor.arrow_names()},
    }


def clock_doc(name: str, clock: Clock, motor_name: str) -> dict:
    return dynamics_doc(name, clock.base, motor_name, kind="clock")


def open_dynamics_doc(name: str, A: OpenDynamics, motor_name: str, clock_name: str) -> dict:
    return {
        "kind": "open-dynamics",
        "name": name,
        "motor": motor_name,
        "clock": clock_name,
        "parameters": list(A.parameters),
        "states": {obj: list(A.multi.states_of(obj)) for obj in A.motor.objects},
        "transitions": {
            a: {p: _pairs_list(A.slice(p), a) for p in A.parameters}
            for a in A.motor.arrow_names()
        },
        "datation": {s: A.tau(s) for s in A.states()},
    }


def partition_doc(name: str, blocks: Sequence[Sequence[str]]) -> dict:
    return {"kind": "partition", "name": name, "partition": [list(b) for b in blocks]}


def family_doc(name: str, F: DynamicFamily, component_names: Mapping[str, str]) -> dict:
    syncs = {}
    for i, sync in F.synchronizations.items():
        syncs[i] = {
            "functor": {
                "objects": dict(sync.functor.object_map),
                "arrows": dict(sync.functor.arrow_map),
            },
            "delta": dict(sync.delta),
        }
    interaction = []
    for entry in F.interaction.entries:
        interaction.append({
            i: {"realization": r.mapping(), "param": r.parameter}
            for i, r in zip(F.index, entry)
        })
    return {
        "kind": "family",
        "name": name,
        "index": list(F.index),
        "synchronizer": F.synchronizer,
        "components": dict(component_names),
        "synchronizations": syncs,
        "interaction": interaction,
    }


def workspace_documents(ws: Workspace) -> list[dict]:
    """Serialize every named document; loading the result back gives a
    structurally equal workspace."""
    docs: list[dict] = []
    for name, cat in ws.categories.items():
        docs.append(category_doc(name, cat))
    for name, d in ws.dynamics.items():
        docs.append(dynamics_doc(name, d, ws.dynamics_motor[name]))
    for name, clock in ws.clocks.items():
        docs.append(clock_doc(name, clock, ws.clock_motor[name]))
    for name, A in ws.open_dynamics.items():
        motor_name, clock_name = ws.open_refs[name]
        docs.append(open_dynamics_doc(name, A, motor_name, clock_name))
    for name, blocks in ws.partitions.items():
        docs.append(partition_doc(name, blocks))
    for name, F in ws.families.items():
        docs.append(family_doc(name, F, ws.family_components[name]))
    return docs


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
