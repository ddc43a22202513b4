"""Rendering of stability reports for the CLI."""

from __future__ import annotations

import json
import sys

from .generation import stability_report


def stability_lines(name: str, report) -> tuple[list[str], bool]:
    lines = [f"family: {name}"]
    ok = report.family_categorical
    if report.family_categorical:
        lines.append("categorical family: yes")
    else:
        i, lam, v = report.component_witness
        lines.append("categorical family: no")
        lines.append(f"  witness (component {i}, slice {lam}): {v.describe()}")
        lines.append("  stability verdicts below are not applicable (the family is not categorical)")
    for mode in report.modes:
        line = (f"{mode.label}: sub-categorical: {'yes' if mode.subcategorical else 'NO'};"
                f" categorical: {'yes' if mode.categorical else 'no'}")
        lines.append(line)
        ok = ok and mode.subcategorical and mode.categorical
        if mode.first_violation is not None:
            lines.append(f"  witness (slice {mode.param}): {mode.first_violation.describe()}")
        if mode.stable is not None:
            label = mode.label.split(":", 1)[0]
            lines.append(f"  {label}-stable: {'yes' if mode.stable else 'no'}")
    return lines, ok


def render_stability(name, family, partitions, guard, fmt) -> int:
    report = stability_report(family, partitions, guard=guard)
    lines, ok = stability_lines(name, report)
    if fmt == "json":
        obj = {
            "family": name,
            "categorical-family": report.family_categorical,
            "modes": [
                {
                    "label": m.label,
                    "sub-categorical": m.subcategorical,
                    "categorical": m.categorical,
                    "stable": m.stable,
                    "witness": m.first_violation.describe() if m.first_violation else None,
                }
                for m in report.modes
            ],
        }
        sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return 0 if ok else 1
