"""Command-line surface.

Documents come in via --in (files or directories) and --corpus (the bundled
examples). Exit status: 0 when everything asked for holds, 1 on a property
failure, 2 on validation or usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from pathlib import Path

from . import documents as docs
from .dynamics import (
    Dynamics,
    PropertyReport,
    _setstr,
    check_categorical,
    check_deterministic,
    check_proper,
    check_quasi_deterministic,
    check_subcategorical,
    clean,
    largest_subcategorical,
    union_dynamics,
)
from .errors import NotSubcategorical, SubcatdynError, UnknownCommand
from .generation import GeneratedDynamics, mono_engender, primo_engender, quotient_engender
from .randomgen import random_family, random_partition
from .stability import render_stability, stability_lines
from .temporal import SizeGuard, enumerate_h_realizations, enumerate_realizations


def corpus_dir() -> Path:
    return Path(resources.files("subcatdyn") / "corpus")


def _load(args) -> docs.Workspace:
    paths = list(getattr(args, "inputs", []) or [])
    if getattr(args, "corpus", False):
        paths.append(corpus_dir())
    if not paths:
        raise SubcatdynError("no documents: pass --in PATH or --corpus")
    return docs.load_documents(paths)


CHECKS = (
    ("sub-categorical", check_subcategorical),
    ("proper", check_proper),
    ("categorical", check_categorical),
    ("deterministic", check_deterministic),
    ("quasi-deterministic", check_quasi_deterministic),
)


def props_lines(name: str, d: Dynamics, max_violations: int) -> tuple[list[str], bool]:
    lines = [f"dynamics: {name}"]
    all_hold = True
    for label, checker in CHECKS:
        try:
            report: PropertyReport = checker(d, max_violations=max_violations)
        except NotSubcategorical:
            lines.append(f"{label}: n/a (not sub-categorical)")
            continue
        lines.append(f"{label}: {'yes' if report.holds else 'no'}")
        all_hold = all_hold and report.holds
        for v in report.violations:
            lines.append(f"  witness: {v.describe()}")
        if report.truncated:
            lines.append("  (more witnesses not shown)")
    return lines, all_hold


def props_json(name: str, d: Dynamics, max_violations: int) -> tuple[dict, bool]:
    out = {"dynamics": name, "checks": {}}
    all_hold = True
    for label, checker in CHECKS:
        try:
            report = checker(d, max_violations=max_violations)
        except NotSubcategorical:
            out["checks"][label] = None
            continue
        out["checks"][label] = {
            "holds": report.holds,
            "witnesses": [v.describe() for v in report.violations],
            "truncated": report.truncated,
        }
        all_hold = all_hold and report.holds
    return out, all_hold


def transition_lines(d: Dynamics, indent: str = "  ") -> list[str]:
    lines = []
    for arrow in d.motor.arrow_names():
        t = d.transition(arrow)
        cells = [
            f"{s} -> {_setstr(d.sorted_states(t.image(s)))}"
            for s in d.states_of(d.motor.dom(arrow))
            if t.image(s)
        ]
        lines.append(f"{indent}{arrow}: " + ("; ".join(cells) if cells else "(empty)"))
    return lines


def _realization_text(r) -> str:
    body = " ".join(f"{t}↦{s}" for t, s in r.assignment) or "(empty)"
    return f"[{r.parameter}] {body}" if r.parameter is not None else body


def _print(out: list[str]) -> None:
    sys.stdout.write("\n".join(out) + "\n")


# -- commands ---------------------------------------------------------------


def cmd_validate(args) -> int:
    ws = _load(args)
    counts = {
        "categories": len(ws.categories),
        "dynamics": len(ws.dynamics),
        "clocks": len(ws.clocks),
        "open-dynamics": len(ws.open_dynamics),
        "partitions": len(ws.partitions),
        "families": len(ws.families),
    }
    if args.format == "json":
        _print([json.dumps({"ok": True, "documents": counts})])
    else:
        _print([f"{kind}: {n}" for kind, n in counts.items() if n] + ["all documents valid"])
    return 0


def cmd_props(args) -> int:
    ws = _load(args)
    if args.name in ws.open_dynamics:
        A = ws.open_dynamics[args.name]
        targets = [(f"{args.name} slice {lam}", A.slice(lam)) for lam in A.parameters]
    else:
        targets = [(args.name, ws.find_dynamics(args.name))]
    ok = True
    if args.format == "json":
        objs = []
        for label, d in targets:
            obj, good = props_json(label, d, args.max_violations)
            objs.append(obj)
            ok = ok and good
        payload = objs[0] if len(objs) == 1 else objs
        _print([json.dumps(payload, indent=2, ensure_ascii=False)])
    else:
        lines = []
        for label, d in targets:
            block, good = props_lines(label, d, args.max_violations)
            lines += block
            ok = ok and good
        _print(lines)
    return 0 if ok else 1


def _emit_dynamics_doc(args, name: str, d: Dynamics, motor_name: str) -> int:
    _print([docs.dump_document(docs.dynamics_doc(name, d, motor_name)).rstrip("\n")])
    return 0


def cmd_clean(args) -> int:
    ws = _load(args)
    d = ws.find_dynamics(args.name)
    motor = ws.dynamics_motor.get(args.name) or ws.clock_motor[args.name]
    return _emit_dynamics_doc(args, f"{args.name}.clean", clean(d), motor)


def cmd_largest_subcat(args) -> int:
    ws = _load(args)
    d = ws.find_dynamics(args.name)
    motor = ws.dynamics_motor.get(args.name) or ws.clock_motor[args.name]
    return _emit_dynamics_doc(args, f"{args.name}.subcat", largest_subcategorical(d), motor)


def cmd_union(args) -> int:
    ws = _load(args)
    members = [ws.find_dynamics(n) for n in args.names]
    motor_name = ws.dynamics_motor.get(args.names[0]) or ws.clock_motor[args.names[0]]
    return _emit_dynamics_doc(args, "union_" + "_".join(args.names), union_dynamics(members), motor_name)


def cmd_realizations(args) -> int:
    ws = _load(args)
    guard = SizeGuard(max_instants=args.size_guard)
    if args.name:
        A = ws.open_dynamics.get(args.name)
        if A is None:
            raise SubcatdynError(f"no open-dynamics named {args.name}")
        rs = enumerate_realizations(A, guard=guard)
        if args.format == "json":
            obj = {
                "open-dynamics": args.name,
                "full": [{"param": r.parameter, "assignment": r.mapping()} for r in rs.full],
                "external-parts": [r.mapping() for r in rs.external_parts],
            }
            _print([json.dumps(obj, indent=2, ensure_ascii=False)])
        else:
            lines = [f"open-dynamics: {args.name}", f"realizations (full): {len(rs.full)}"]
            lines += [f"  {_realization_text(r)}" for r in rs.full]
            lines.append(f"external parts (deduplicated): {len(rs.external_parts)}")
            lines += [f"  {_realization_text(r)}" for r in rs.external_parts]
            _print(lines)
        return 0
    if not (args.clock and args.dynamics):
        raise SubcatdynError("realizations needs a name, or --clock and --dynamics")
    h = ws.clocks.get(args.clock)
    if h is None:
        raise SubcatdynError(f"no clock named {args.clock}")
    d = ws.find_dynamics(args.dynamics)
    found = enumerate_h_realizations(h, d, guard=guard)
    if args.format == "json":
        _print([json.dumps({"realizations": [r.mapping() for r in found]}, indent=2, ensure_ascii=False)])
    else:
        lines = [f"clock: {args.clock}  dynamics: {args.dynamics}",
                 f"realizations: {len(found)}"]
        lines += [f"  {_realization_text(r)}" for r in found]
        _print(lines)
    return 0


def _generated(args, ws) -> GeneratedDynamics:
    F = ws.families.get(args.family)
    if F is None:
        raise SubcatdynError(f"no family named {args.family}")
    guard = SizeGuard(max_instants=args.size_guard)
    mode = args.mode
    if mode == "primo":
        return primo_engender(F, guard=guard)
    if mode == "mono":
        return mono_engender(F, guard=guard)
    if mode.startswith("quotient="):
        pname = mode.split("=", 1)[1]
        if pname not in ws.partitions:
            raise SubcatdynError(f"no partition named {pname}")
        return quotient_engender(F, ws.partitions[pname], guard=guard)
    raise UnknownCommand(f"unknown mode {mode!r} (use primo, mono, or quotient=<partition>)")


def provenance_entries(gen: GeneratedDynamics) -> list[dict]:
    result = gen.result
    arrows = {a: n for n, a in enumerate(result.motor.arrow_names())}
    params = {p: n for n, p in enumerate(result.parameters)}
    keys = sorted(
        gen.provenance,
        key=lambda k: (arrows[k[0]], params[k[1]],
                       result.multi.states().index(k[2]), result.multi.states().index(k[3])),
    )
    return [
        {
            "arrow": arrow,
            "param": param,
            "source": source,
            "target": target,
            "witnesses": [[r.mapping() for r in ext] for ext in gen.provenance[(arrow, param, source, target)]],
        }
        for arrow, param, source, target in keys
    ]


def cmd_generate(args) -> int:
    ws = _load(args)
    gen = _generated(args, ws)
    comp_name = None
    for name, F in ws.families.items():
        if name == args.family:
            comp_name = ws.family_components[name][F.synchronizer]
    motor_name, clock_name = ws.open_refs[comp_name]
    doc = docs.open_dynamics_doc(f"{args.family}.{gen.mode}", gen.result, motor_name, clock_name)
    if args.provenance:
        payload = [doc, {"kind": "provenance", "name": f"{args.family}.{gen.mode}.provenance",
                         "entries": provenance_entries(gen)}]
        _print([json.dumps(payload, indent=2, ensure_ascii=False)])
    else:
        _print([docs.dump_document(doc).rstrip("\n")])
    return 0


def cmd_stability(args) -> int:
    ws = _load(args)
    F = ws.families.get(args.family)
    if F is None:
        raise SubcatdynError(f"no family named {args.family}")
    partitions = []
    for pname in args.partition or ():
        if pname not in ws.partitions:
            raise SubcatdynError(f"no partition named {pname}")
        partitions.append((pname, ws.partitions[pname]))
    guard = SizeGuard(max_instants=args.size_guard)
    return render_stability(args.family, F, partitions, guard, args.format)


def cmd_demo(args) -> int:
    ws = docs.load_documents([corpus_dir()])
    if args.name == "union-counterexample":
        return _demo_union(ws)
    if args.name == "mimicry":
        return _demo_mimicry(ws)
    raise UnknownCommand(f"unknown demo {args.name!r} (try union-counterexample or mimicry)")


def _demo_union(ws) -> int:
    d = union_dynamics([ws.dynamics["alpha1"], ws.dynamics["alpha2"]])
    lines = [
        "union counterexample: two categorical dynamics whose union is not categorical",
        "motor: chain3",
        "union of alpha1 and alpha2:",
    ]
    lines += transition_lines(d)
    props, _ = props_lines("union(alpha1,alpha2)", d, 100)
    lines += props[1:]
    subcat = check_subcategorical(d).holds
    proper = check_proper(d).holds if subcat else False
    cat = check_categorical(d, max_violations=1)
    expected_witness = "w(a1)={a3} ⊊ {a3,a3'}"
    ok = (
        subcat and proper and not cat.holds
        and cat.violations[0].describe() == expected_witness
        and d.transition("u").pairs == {("a1", "a2"), ("a1", "a2'")}
        and d.transition("v").pairs == {("a2", "a3"), ("a2", "a3'"), ("a2'", "a3")}
        and d.transition("w").pairs == {("a1", "a3")}
    )
    lines.append("verdict: " + ("as expected (sub-categorical, proper, not categorical)"
                                if ok else "UNEXPECTED"))
    _print(lines)
    return 0 if ok else 1


def _demo_mimicry(ws) -> int:
    F = ws.families["mimicry"]
    lines = ["mimicry demo: two deterministic components, each required to copy the other"]
    comps_det = True
    for i in F.index:
        A = F.components[i]
        verdicts = []
        for lam in A.parameters:
            holds = check_deterministic(A.slice(lam)).holds
            comps_det = comps_det and holds
            verdicts.append(f"{lam}: {'yes' if holds else 'no'}")
        lines.append(f"component {i} deterministic per slice: " + ", ".join(verdicts))
    mono = mono_engender(F)
    slice_ = mono.result.slice(mono.result.parameters[0])
    branching = None
    for arrow in slice_.motor.arrow_names():
        t = slice_.transition(arrow)
        for s in slice_.states_of(slice_.motor.dom(arrow)):
            if len(t.image(s)) >= 2:
                branching = (arrow, s, slice_.sorted_states(t.image(s)))
                break
        if branching:
            break
    lines.append(f"generated parameters: {', '.join(primo_params(F))}")
    if branching:
        arrow, s, succ = branching
        lines.append(f"mono-engendered slice: {arrow}({s})={_setstr(succ)} has {len(succ)} successors")
    lines.append("mono-engendered dynamics deterministic: "
                 + ("no" if branching else "yes"))
    ok = comps_det and branching is not None
    lines.append("verdict: " + (
        "as expected (deterministic interaction produced non-determinism)" if ok else "UNEXPECTED"))
    _print(lines)
    return 0 if ok else 1


def primo_params(F) -> list[str]:
    return [pid for _, pid in
            ((mu, "|".join(mu)) for mu in F.interaction.rb_image())]


def cmd_random_family(args) -> int:
    rng = random.Random(args.seed)
    guard = SizeGuard(max_instants=args.size_guard)
    failures = 0
    for k in range(args.count):
        F = random_family(rng, guard=guard)
        line = f"family #{k} (seed {args.seed}): |I|={len(F.index)}, |R|={len(F.interaction.entries)}"
        try:
            gen = primo_engender(F, guard=guard)
        except SubcatdynError as exc:
            _print([line + f" FAILED: {exc}"])
            failures += 1
            continue
        params = gen.result.parameters
        checks = [check_subcategorical(gen.result.slice(p)).holds for p in params]
        quotient_ok = True
        for _ in range(3):
            q = quotient_engender(F, random_partition(rng, params), guard=guard)
            quotient_ok = quotient_ok and all(
                check_subcategorical(q.result.slice(p)).holds for p in q.result.parameters
            )
        dated = all(
            gen.result.tau(b) == gen.result.clock.step(arrow, gen.result.tau(a))
            for (arrow, param) in ((ar, p) for ar in gen.result.motor.arrow_names() for p in params)
            for a, b in gen.result.multi.transitions[(arrow, param)].pairs
        )
        ok = all(checks) and quotient_ok and dated
        failures += 0 if ok else 1
        line += (f", |M|={len(params)}: primo sub-categorical: {'yes' if all(checks) else 'NO'};"
                 f" 3 quotients sub-categorical: {'yes' if quotient_ok else 'NO'};"
                 f" datation sound: {'yes' if dated else 'NO'}")
        _print([line])
    _print([f"{args.count - failures}/{args.count} families pass"])
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subcatdyn",
        description="Finite relational dynamics over small categories: checkers, "
                    "realizations, interacting families, generated dynamics.",
    )
    parser.add_argument("--size-guard", type=int, default=12, metavar="N",
                        help="max clock instants for enumeration (default 12)")
    parser.add_argument("--max-violations", type=int, default=100, metavar="N",
                        help="cap on reported witnesses per check (default 100)")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p):
        p.add_argument("--in", dest="inputs", action="append", metavar="PATH",
                       help="document file or directory (repeatable)")
        p.add_argument("--corpus", action="store_true", help="include the bundled corpus")

    p = sub.add_parser("validate", help="load and validate documents")
    p.add_argument("inputs", nargs="*", metavar="PATH")
    p.add_argument("--corpus", action="store_true")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("props", help="run all five property checkers on a dynamics")
    p.add_argument("name")
    add_inputs(p)
    p.set_defaults(fn=cmd_props)

    p = sub.add_parser("clean", help="remove out-of-play states")
    p.add_argument("name")
    add_inputs(p)
    p.set_defaults(fn=cmd_clean)

    p = sub.add_parser("union", help="union of dynamics over one motor")
    p.add_argument("names", nargs="+")
    add_inputs(p)
    p.set_defaults(fn=cmd_union)

    p = sub.add_parser("largest-subcat", help="greatest sub-categorical sub-dynamics")
    p.add_argument("name")
    add_inputs(p)
    p.set_defaults(fn=cmd_largest_subcat)

    p = sub.add_parser("realizations", help="enumerate realizations")
    p.add_argument("name", nargs="?", help="open-dynamics name")
    p.add_argument("--clock", help="clock name (with --dynamics)")
    p.add_argument("--dynamics", help="dynamics name (with --clock)")
    add_inputs(p)
    p.set_defaults(fn=cmd_realizations)

    p = sub.add_parser("generate", help="dynamics generated by a family")
    p.add_argument("family")
    p.add_argument("--mode", default="primo", metavar="primo|mono|quotient=<partition>")
    p.add_argument("--provenance", action="store_true", help="include the witness side-table")
    add_inputs(p)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("stability", help="categoricity of the generated dynamics")
    p.add_argument("family")
    p.add_argument("--partition", action="append", metavar="NAME")
    add_inputs(p)
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("demo", help="bundled scenarios")
    p.add_argument("name", metavar="union-counterexample|mimicry")
    p.set_defaults(fn=cmd_demo)

    p = sub.add_parser("random-family", help="generate random families and verify stability")
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(fn=cmd_random_family)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SubcatdynError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
