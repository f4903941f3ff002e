"""Audit report serialization: TSV (benchmark-table schema), JSON, Markdown.

The TSV header is kept verbatim as ``ratio_vs_en`` even when the pivot is
not English so the output stays drop-in comparable with the published
table; JSON carries a clean ``ratio_vs_pivot`` alias and records the
actual pivot.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .engines import TokenizerId
from .errors import ParseError, ValidationError
from .geometry import GeometryReport
from .metrics import FertilityStats, display_mean, display_ratio

SCHEMA_VERSION = 1
TSV_HEADER = "provider\tmodel\tlang\tmean_input_tokens\tratio_vs_en\tn_rows"
TSV_EXTENDED = "\tstd_input_tokens\ttokens_per_word\tbyte_fallback_rate"
BAR_WIDTH = 20


@dataclass(frozen=True)
class AuditReport:
    corpus_name: str
    pivot: str
    rows: tuple[FertilityStats, ...]
    geometry: tuple[tuple[str, GeometryReport], ...] = ()
    tool_version: str = "0"
    timestamp: str = ""  # injected by the caller (UTC ISO-8601)

    def __post_init__(self):
        keys = [(s.tokenizer.provider, s.tokenizer.model, s.lang) for s in self.rows]
        if len(set(keys)) != len(keys):
            raise ValidationError("duplicate (tokenizer, lang) row in report")
        if keys != sorted(keys):
            object.__setattr__(
                self,
                "rows",
                tuple(sorted(self.rows, key=lambda s: (s.tokenizer.provider, s.tokenizer.model, s.lang))),
            )


def emit_tsv(report: AuditReport, extended: bool = False) -> str:
    lines = [TSV_HEADER + (TSV_EXTENDED if extended else "")]
    for s in report.rows:
        cells = [
            s.tokenizer.provider,
            s.tokenizer.model,
            s.lang,
            display_mean(s.mean_input_tokens),
            display_ratio(s.ratio_vs_pivot),
            str(s.n_rows),
        ]
        if extended:
            cells += [
                display_mean(s.std_input_tokens),
                display_ratio(s.tokens_per_word),
                "-" if s.byte_fallback_rate is None else display_ratio(s.byte_fallback_rate),
            ]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def _stats_to_dict(s: FertilityStats) -> dict:
    d = {
        "provider": s.tokenizer.provider,
        "model": s.tokenizer.model,
        "kind": s.tokenizer.kind,
        "lang": s.lang,
        "n_rows": s.n_rows,
        "mean_input_tokens": s.mean_input_tokens,
        "std_input_tokens": s.std_input_tokens,
        "tokens_per_word": s.tokens_per_word,
        "ratio_vs_pivot": s.ratio_vs_pivot,
        "byte_fallback_rate": s.byte_fallback_rate,
    }
    if s.incomplete:
        d["incomplete"] = True
    return d


def _geometry_to_dict(g: GeometryReport) -> dict:
    return {
        "label": g.label,
        "anisotropy": g.anisotropy,
        "singular_values": list(g.singular_values),
        "singular_values_uncentered": list(g.singular_values_uncentered),
        "effective_rank": g.effective_rank,
        "participation_ratio": g.participation_ratio,
        "anisotropy_sample_seed": g.anisotropy_sample_seed,
    }


def emit_json(report: AuditReport) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "corpus_name": report.corpus_name,
        "pivot": report.pivot,
        "tool_version": report.tool_version,
        "timestamp": report.timestamp,
        "rows": [_stats_to_dict(s) for s in report.rows],
        "geometry": [
            {"set": label, **_geometry_to_dict(g)} for label, g in report.geometry
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_json(text: str) -> AuditReport:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema {doc.get('schema')!r}")
    rows = tuple(
        FertilityStats(
            tokenizer=TokenizerId(d["provider"], d["model"], d["kind"]),
            lang=d["lang"],
            n_rows=d["n_rows"],
            mean_input_tokens=d["mean_input_tokens"],
            std_input_tokens=d["std_input_tokens"],
            tokens_per_word=d["tokens_per_word"],
            ratio_vs_pivot=d["ratio_vs_pivot"],
            byte_fallback_rate=d["byte_fallback_rate"],
            incomplete=d.get("incomplete", False),
        )
        for d in doc["rows"]
    )
    geometry = tuple(
        (
            g["set"],
            GeometryReport(
                label=g["label"],
                anisotropy=g["anisotropy"],
                singular_values=tuple(g["singular_values"]),
                singular_values_uncentered=tuple(g["singular_values_uncentered"]),
                effective_rank=g["effective_rank"],
                participation_ratio=g["participation_ratio"],
                anisotropy_sample_seed=g["anisotropy_sample_seed"],
            ),
        )
        for g in doc.get("geometry", [])
    )
    return AuditReport(
        corpus_name=doc["corpus_name"],
        pivot=doc["pivot"],
        rows=rows,
        geometry=geometry,
        tool_version=doc["tool_version"],
        timestamp=doc["timestamp"],
    )


def emit_markdown(report: AuditReport, extended: bool = False) -> str:
    """GitHub-flavored table; ratios get a bar scaled to the max ratio."""
    header = ["provider", "model", "lang", "mean_input_tokens", "ratio_vs_en", "n_rows"]
    if extended:
        header += ["std_input_tokens", "tokens_per_word", "byte_fallback_rate"]
    header.append("inflation")
    max_ratio = max((s.ratio_vs_pivot for s in report.rows), default=1.0)
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join(" --- " for _ in header) + "|",
    ]
    for s in report.rows:
        bar = "█" * round(BAR_WIDTH * s.ratio_vs_pivot / max_ratio)
        cells = [
            s.tokenizer.provider,
            s.tokenizer.model,
            s.lang,
            display_mean(s.mean_input_tokens),
            display_ratio(s.ratio_vs_pivot),
            str(s.n_rows),
        ]
        if extended:
            cells += [
                display_mean(s.std_input_tokens),
                display_ratio(s.tokens_per_word),
                "-" if s.byte_fallback_rate is None else display_ratio(s.byte_fallback_rate),
            ]
        cells.append(bar)
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
