"""Shared rendering of classification results for the CLI and the service."""

from __future__ import annotations

from .classify import ClassificationResult, classify_model
from .model import Model


def classification_payload(model: Model) -> dict:
    """JSON-safe classification report; identical for CLI --json and HTTP."""
    result = classify_model(model)
    summary = sorted(
        (list(x) if isinstance(x, tuple) else x for x in result.node_summary()),
        key=lambda x: (x if isinstance(x, list) else [x]),
    )
    return {
        "model": model.name,
        "constraints": [
            {
                "name": name,
                "tags": [
                    {"name": t.name, "node": t.omt_node_id, "specificity": t.specificity}
                    for t in tags
                ],
            }
            for name, tags in result.tags.items()
        ],
        "pattern_groups": [
            {
                "constraints": list(g.constraint_names),
                "indicator": g.indicator,
                "tags": list(g.tag_names),
                "nodes": sorted(g.node_ids),
            }
            for g in result.pattern_groups
        ],
        "node_summary": summary,
    }


def classification_table(payload: dict) -> str:
    """Plain-text table for terminal output."""
    grouped = {name for g in payload["pattern_groups"] for name in g["constraints"]}
    rows = [("constraint", "node", "primary tag")]
    for entry in payload["constraints"]:
        if entry["name"] in grouped or not entry["tags"]:
            continue
        top = entry["tags"][0]
        rows.append((entry["name"], str(top["node"]), top["name"]))
    for g in payload["pattern_groups"]:
        nodes = "+".join(str(n) for n in g["nodes"])
        rows.append((", ".join(g["constraints"]), nodes, " | ".join(g["tags"])))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    summary = ", ".join(
        "+".join(str(n) for n in x) if isinstance(x, list) else str(x)
        for x in payload["node_summary"]
    )
    lines.append("")
    lines.append(f"nodes: {summary}")
    return "\n".join(lines) + "\n"
