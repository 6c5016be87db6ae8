"""Text, JSON and CSV rendering of records, presentations and scheme tables."""
import json
from itertools import groupby
from typing import Dict, List, Optional

import pandas as pd

from app.models.schemas import PresentationRecord, Record
from app.services.group_analysis import abelian_invariants, freeness_verdict
from app.services.presentation import Presentation, SchemeLevel, counts, render_word

RULE = "=" * 72


def presentation_record(p: Presentation, simplified: bool, listing: Optional[str] = None) -> PresentationRecord:
    return PresentationRecord(
        n=p.n,
        provenance=p.provenance,
        listing=listing,
        simplified=simplified,
        generators=[g.label for g in p.generators],
        relators=[[(g.label, e) for g, e in relator] for relator in p.relators],
        counts=counts(p).as_dict(),
    )


def format_record(record: Record, title: str) -> str:
    """Plain key/value dump under a header."""
    lines = [RULE, f"📊 {title}", RULE]
    for key, value in record.model_dump().items():
        if key == "schema_version":
            continue
        if isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {v}" for k, v in value.items())
        elif isinstance(value, list):
            lines.append(f"{key}: " + (", ".join(str(v) for v in value) if value else "-"))
        else:
            lines.append(f"{key}: {value}")
    lines.append(RULE)
    return "\n".join(lines)


def format_presentation(p: Presentation, footer: bool = True) -> str:
    c = counts(p)
    lines = [RULE, f"📊 pi(A{p.n}) from the {p.provenance}", RULE]
    lines.append(f"Generators ({c.generators}):")
    lines.extend(f"  {g.label}" for g in p.generators)
    lines.append(f"Relators ({c.relators}):")
    lines.extend(f"  {render_word(r)} = e" for r in p.relators)
    lines.append(f"killed {c.killed}, merged {c.merged}, eliminated {c.eliminated}")
    if footer:
        invariants = abelian_invariants(p)
        lines.append(f"abelianization: {invariants} (free rank {invariants.free_rank})")
        lines.append(f"verdict: {freeness_verdict(p)}")
    lines.append(RULE)
    return "\n".join(lines)


def format_scheme_table(level: SchemeLevel) -> str:
    """Generators by top split A_a x A_b, new brackets by rows, then relations."""
    n = level.n
    lines = [RULE, f"📊 G{n}: {len(level.raw.generators)} generators "
                   f"({level.old_count} old + {len(level.new)} new)", RULE]
    for (a, b), names in level.columns:
        if names:
            lines.append(f"A{a} x A{b}: " + ", ".join(g.label for g in names))
    for j, row in groupby(level.new, key=lambda g: g.arity.j):
        lines.append(f"new (j={j}): " + ", ".join(g.label for g in row))
    lines.append(RULE)
    lines.append(f"📊 R{n}: {len(level.raw.relators)} relators")
    lines.append(RULE)
    for relation in level.relations:
        lines.append(f"  [{relation.kind}] {relation.render()}")
    lines.append(RULE)
    reduced = counts(level.reduced)
    lines.append(f"reduced: {reduced.generators} generators "
                 f"({len(level.survivors) - level.surviving_new} old + {level.surviving_new} new), "
                 f"{reduced.relators} relators")
    return "\n".join(lines)


def to_csv(rows: List[Dict]) -> str:
    frame = pd.DataFrame(rows)
    for column in frame.columns:
        frame[column] = frame[column].map(lambda v: json.dumps(v) if isinstance(v, (list, dict, tuple)) else v)
    return frame.to_csv(index=False)


def record_rows(record: Record) -> List[Dict]:
    """One CSV row per record; list and dict fields are JSON encoded."""
    return [record.model_dump()]


def to_json(record: Record) -> str:
    return record.model_dump_json(indent=2)
