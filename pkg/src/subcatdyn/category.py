"""Finite small categories (motors), their underlying graphs, and functors.

Every category is given by an explicit finite composition table, so all
axioms are checked exhaustively at validation time. Identifiers are plain
strings and every iteration follows the declared document order, which keeps
reports and serializations deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import (
    AssociativityViolation,
    CompositionNotPreserved,
    DanglingEndpoint,
    EndpointMismatch,
    IdentityLawViolation,
    IdentityNotPreserved,
    MissingComposite,
    MissingIdentity,
    NonComposablePairInTable,
    ValidationError,
)


@dataclass(frozen=True)
class Arrow:
    name: str
    dom: str
    cod: str


@dataclass(frozen=True)
class Category:
    """A validated finite category.

    ``composition[(f, g)]`` is the name of the composite "g after f" and is
    defined exactly for the composable pairs (cod(f) == dom(g)).
    """

    objects: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    identity: dict[str, str]
    composition: dict[tuple[str, str], str]
    _by_name: dict[str, Arrow] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {a.name: a for a in self.arrows})

    def arrow(self, name: str) -> Arrow:
        return self._by_name[name]

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def dom(self, name: str) -> str:
        return self._by_name[name].dom

    def cod(self, name: str) -> str:
        return self._by_name[name].cod

    def compose(self, f: str, g: str) -> str:
        """Name of the composite g∘f; KeyError for non-composable pairs."""
        return self.composition[(f, g)]

    def is_identity(self, name: str) -> bool:
        arrow = self._by_name[name]
        return self.identity.get(arrow.dom) == name and arrow.dom == arrow.cod

    def identity_of(self, obj: str) -> str:
        return self.identity[obj]

    def arrow_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.arrows)

    def composable_pairs(self) -> Iterator[tuple[str, str, str]]:
        """Yield (e, f, f∘e) for every composable pair, in document order."""
        for e in self.arrows:
            for f in self.arrows:
                if e.cod == f.dom:
                    yield e.name, f.name, self.composition[(e.name, f.name)]


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Arrow, ...]


@dataclass(frozen=True)
class Functor:
    source: Category
    target: Category
    object_map: dict[str, str]
    arrow_map: dict[str, str]


def validate_category(
    objects: Iterable[str],
    arrows: Iterable[Arrow | tuple[str, str, str]],
    identities: Mapping[str, str],
    compositions: Mapping[tuple[str, str], str] | Iterable[tuple[str, str, str]],
) -> Category:
    """Validate a raw category description and return a Category.

    ``compositions`` maps (f, g) to the composite g∘f; entries forced by the
    identity laws may be omitted and are filled in automatically.
    """
    objects = tuple(objects)
    if len(set(objects)) != len(objects):
        raise ValidationError("duplicate object names")
    arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in arrows)
    names = [a.name for a in arrows]
    if len(set(names)) != len(names):
        raise ValidationError("duplicate arrow names")
    by_name = {a.name: a for a in arrows}

    for a in arrows:
        if a.dom not in objects or a.cod not in objects:
            raise DanglingEndpoint(f"arrow {a.name}: {a.dom} -> {a.cod} has an undeclared endpoint")

    identity = dict(identities)
    for obj in objects:
        ident = identity.get(obj)
        if ident is None:
            raise MissingIdentity(f"object {obj} has no identity arrow")
        if ident not in by_name:
            raise MissingIdentity(f"identity {ident} of {obj} is not a declared arrow")
        ia = by_name[ident]
        if ia.dom != obj or ia.cod != obj:
            raise MissingIdentity(f"identity {ident} of {obj} must be an arrow {obj} -> {obj}")

    if isinstance(compositions, Mapping):
        table = {tuple(k): v for k, v in compositions.items()}
    else:
        table = {(f, g): gf for f, g, gf in compositions}

    for (f, g), gf in table.items():
        for name in (f, g, gf):
            if name not in by_name:
                raise ValidationError(f"composition entry ({f},{g})->{gf} names unknown arrow {name}")
        if by_name[f].cod != by_name[g].dom:
            raise NonComposablePairInTable(f"({f},{g}) is not composable: cod({f}) != dom({g})")
        if by_name[gf].dom != by_name[f].dom or by_name[gf].cod != by_name[g].cod:
            raise EndpointMismatch(
                f"composite {gf} of ({f},{g}) must go {by_name[f].dom} -> {by_name[g].cod}"
            )

    # Entries forced by the identity laws: fill when absent, reject when wrong.
    for a in arrows:
        for key, forced in (((identity[a.dom], a.name), a.name), ((a.name, identity[a.cod]), a.name)):
            got = table.setdefault(key, forced)
            if got != forced:
                raise IdentityLawViolation(
                    f"composite of ({key[0]},{key[1]}) must be {forced}, table says {got}"
                )

    for e in arrows:
        for f in arrows:
            if e.cod == f.dom and (e.name, f.name) not in table:
                raise MissingComposite(f"no table entry for the composable pair ({e.name},{f.name})")

    # Brute force over all composable triples; instances are tiny.
    for e in arrows:
        for f in arrows:
            if e.cod != f.dom:
                continue
            for g in arrows:
                if f.cod != g.dom:
                    continue
                left = table[(table[(e.name, f.name)], g.name)]
                right = table[(e.name, table[(f.name, g.name)])]
                if left != right:
                    raise AssociativityViolation(
                        f"(({e.name};{f.name});{g.name}) gives {left} but "
                        f"({e.name};({f.name};{g.name})) gives {right}"
                    )

    return Category(objects=objects, arrows=arrows, identity=identity, composition=table)


def underlying_graph(c: Category) -> Graph:
    """Forget the composition: vertices are objects, edges are all arrows."""
    return Graph(vertices=c.objects, edges=c.arrows)


def validate_functor(
    source: Category,
    target: Category,
    object_map: Mapping[str, str],
    arrow_map: Mapping[str, str],
) -> Functor:
    """Validate a raw functor description; all three preservation laws are
    checked exhaustively."""
    object_map = dict(object_map)
    arrow_map = dict(arrow_map)
    for obj in source.objects:
        if obj not in object_map:
            raise ValidationError(f"object_map is not defined on {obj}")
        if object_map[obj] not in target.objects:
            raise ValidationError(f"object_map sends {obj} to unknown object {object_map[obj]}")
    for a in source.arrows:
        img = arrow_map.get(a.name)
        if img is None:
            raise ValidationError(f"arrow_map is not defined on {a.name}")
        if not target.has_arrow(img):
            raise ValidationError(f"arrow_map sends {a.name} to unknown arrow {img}")
        ia = target.arrow(img)
        if ia.dom != object_map[a.dom] or ia.cod != object_map[a.cod]:
            raise EndpointMismatch(
                f"image of {a.name}: {a.dom} -> {a.cod} must go "
                f"{object_map[a.dom]} -> {object_map[a.cod]}, got {img}: {ia.dom} -> {ia.cod}"
            )
    for obj in source.objects:
        expected = target.identity_of(object_map[obj])
        got = arrow_map[source.identity_of(obj)]
        if got != expected:
            raise IdentityNotPreserved(f"identity of {obj} maps to {got}, expected {expected}")
    for e, f, ef in source.composable_pairs():
        expected = target.compose(arrow_map[e], arrow_map[f])
        got = arrow_map[ef]
        if got != expected:
            raise CompositionNotPreserved(
                f"image of {ef} = ({f}∘{e}) is {got}, expected {expected}"
            )
    return Functor(source=source, target=target, object_map=object_map, arrow_map=arrow_map)


def identity_functor(c: Category) -> Functor:
    return Functor(
        source=c,
        target=c,
        object_map={obj: obj for obj in c.objects},
        arrow_map={a.name: a.name for a in c.arrows},
    )


def compose_functors(first: Functor, second: Functor) -> Functor:
    """Pointwise composition; the result is re-validated."""
    if first.target != second.source:
        raise EndpointMismatch("functors are not composable: target of first != source of second")
    return validate_functor(
        first.source,
        second.target,
        {obj: second.object_map[img] for obj, img in first.object_map.items()},
        {a: second.arrow_map[img] for a, img in first.arrow_map.items()},
    )
