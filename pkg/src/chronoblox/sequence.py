"""Input graph sequence: core types, parsing and serialization.

A sequence is an ordered list of phase snapshots, each an undirected
weighted graph over a shared universe of string node identifiers. Edge
rows arriving more than once are merged by summing weights; endpoint
order is canonicalized at ingestion.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

NodeId = str


def canonical_edge(src: NodeId, dst: NodeId) -> tuple[NodeId, NodeId]:
    """Undirected endpoint canonicalization: smaller string first."""
    return (src, dst) if src <= dst else (dst, src)


@dataclass(frozen=True)
class PhaseGraph:
    """One snapshot: an undirected weighted graph at a given phase.

    ``edges`` maps canonicalized node pairs to summed non-negative
    weights; self-loops are permitted.
    """

    phase_index: int
    phase_label: str
    nodes: frozenset[NodeId]
    edges: dict[tuple[NodeId, NodeId], float]

    def __post_init__(self):
        for (a, b), w in self.edges.items():
            if a not in self.nodes or b not in self.nodes:
                raise ValidationError(
                    f"phase {self.phase_index}: edge ({a},{b}) references unknown node")
            if (a, b) != canonical_edge(a, b):
                raise ValidationError(
                    f"phase {self.phase_index}: edge ({a},{b}) not canonicalized")
            if w < 0:
                raise ValidationError(
                    f"phase {self.phase_index}: negative weight on edge ({a},{b})")

    @property
    def total_weight(self) -> float:
        return sum(self.edges.values())

    def neighbors(self) -> dict[NodeId, dict[NodeId, float]]:
        """Adjacency view; self-loop weight appears once under its node."""
        adj: dict[NodeId, dict[NodeId, float]] = {v: {} for v in self.nodes}
        for (a, b), w in self.edges.items():
            adj[a][b] = adj[a].get(b, 0.0) + w
            if a != b:
                adj[b][a] = adj[b].get(a, 0.0) + w
        return adj


@dataclass(frozen=True)
class GraphSequence:
    """Ordered phases; indexes strictly increasing from 0, at least two."""

    phases: list[PhaseGraph]

    def __post_init__(self):
        if len(self.phases) < 2:
            raise ValidationError("a graph sequence needs at least 2 phases")
        for i, ph in enumerate(self.phases):
            if ph.phase_index != i:
                raise ValidationError(
                    f"phase at position {i} has index {ph.phase_index}")

    @property
    def n_phases(self) -> int:
        return len(self.phases)

    @property
    def phase_labels(self) -> list[str]:
        return [ph.phase_label for ph in self.phases]

    def label_to_index(self) -> dict[str, int]:
        return {ph.phase_label: ph.phase_index for ph in self.phases}


@dataclass
class MetadataTable:
    """Per-(phase, node) label sets, e.g. a country per user per year.

    ``skipped_rows`` counts input rows that referenced an unknown
    (phase, node) pair and were dropped with a warning.
    """

    entries: dict[tuple[int, NodeId], set[str]] = field(default_factory=dict)
    skipped_rows: int = 0

    def labels_for(self, phase_index: int, node: NodeId) -> set[str]:
        return self.entries.get((phase_index, node), set())


def _phase_sort_key(labels: Iterable[str]):
    """Sort phase tokens numerically when they all parse as numbers."""
    labels = list(labels)
    try:
        numeric = {lab: float(lab) for lab in labels}
        return lambda lab: numeric[lab]
    except ValueError:
        return lambda lab: lab


def _rows_from_csv(stream: IO[str]):
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise ParseError("empty input")
    cols = [c.strip().lower() for c in header]
    if cols[:3] != ["phase", "src", "dst"]:
        raise ParseError(f"expected header phase,src,dst[,weight], got {header!r}", row=1)
    has_weight = len(cols) > 3 and cols[3] == "weight"
    for i, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) < 3:
            raise ParseError(f"expected at least 3 fields, got {len(row)}", row=i)
        weight = row[3] if has_weight and len(row) > 3 and row[3].strip() else "1"
        yield i, row[0].strip(), row[1].strip(), row[2].strip(), weight


def _rows_from_jsonl(stream: IO[str]):
    for i, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", row=i) from exc
        if not isinstance(obj, dict) or "phase" not in obj or "src" not in obj or "dst" not in obj:
            raise ParseError("object must carry phase, src and dst", row=i)
        yield i, str(obj["phase"]), str(obj["src"]), str(obj["dst"]), str(obj.get("weight", 1))


def parse_sequence(edge_stream: IO[str] | str, format: str = "csv") -> GraphSequence:
    """Parse edge rows ``(phase, src, dst[, weight])`` into a validated sequence.

    Phases are sorted (numerically when possible) and reindexed 0..n-1;
    duplicate edges merge by weight summation. Raises :class:`ParseError`
    on malformed rows and :class:`ValidationError` when fewer than two
    distinct phases are present or a weight is negative.
    """
    if isinstance(edge_stream, str):
        edge_stream = io.StringIO(edge_stream)
    if format == "csv":
        rows = _rows_from_csv(edge_stream)
    elif format == "jsonl":
        rows = _rows_from_jsonl(edge_stream)
    else:
        raise ValueError(f"unknown format {format!r}")

    # raw phase label -> {canonical edge -> weight}
    by_phase: dict[str, dict[tuple[NodeId, NodeId], float]] = {}
    node_sets: dict[str, set[NodeId]] = {}
    for rownum, phase, src, dst, weight_str in rows:
        if not src or not dst:
            raise ParseError("empty node identifier", row=rownum)
        try:
            weight = float(weight_str)
        except ValueError:
            raise ParseError(f"weight {weight_str!r} is not a number", row=rownum)
        if weight < 0:
            raise ParseError(f"negative weight {weight}", row=rownum)
        edges = by_phase.setdefault(phase, {})
        key = canonical_edge(src, dst)
        edges[key] = edges.get(key, 0.0) + weight
        node_sets.setdefault(phase, set()).update((src, dst))

    if len(by_phase) < 2:
        raise ValidationError(
            f"fewer than 2 phases: found {len(by_phase)} distinct phase value(s)")

    order = sorted(by_phase, key=_phase_sort_key(by_phase))
    phases = [
        PhaseGraph(phase_index=i, phase_label=label,
                   nodes=frozenset(node_sets[label]), edges=by_phase[label])
        for i, label in enumerate(order)
    ]
    return GraphSequence(phases=phases)


def serialize_sequence(seq: GraphSequence, format: str = "csv") -> str:
    """Inverse of :func:`parse_sequence` on canonicalized sequences."""
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["phase", "src", "dst", "weight"])
        for ph in seq.phases:
            for (a, b) in sorted(ph.edges):
                writer.writerow([ph.phase_label, a, b, repr(ph.edges[(a, b)])])
        return out.getvalue()
    if format == "jsonl":
        lines = []
        for ph in seq.phases:
            for (a, b) in sorted(ph.edges):
                lines.append(json.dumps(
                    {"phase": ph.phase_label, "src": a, "dst": b, "weight": ph.edges[(a, b)]}))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def parse_metadata(stream: IO[str] | str, seq: GraphSequence) -> MetadataTable:
    """Parse ``phase,node,label`` rows into per-(phase, node) label sets.

    Rows referencing a (phase, node) absent from the sequence are skipped
    with a warning; the count is recorded on the returned table. The phase
    column is matched against phase labels.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise ParseError("empty metadata input")
    if [c.strip().lower() for c in header][:3] != ["phase", "node", "label"]:
        raise ParseError(f"expected header phase,node,label, got {header!r}", row=1)

    label_to_index = seq.label_to_index()
    table = MetadataTable()
    for i, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) < 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", row=i)
        phase_tok, node, label = row[0].strip(), row[1].strip(), row[2].strip()
        phase_index = label_to_index.get(phase_tok)
        if phase_index is None or node not in seq.phases[phase_index].nodes:
            table.skipped_rows += 1
            continue
        table.entries.setdefault((phase_index, node), set()).add(label)
    if table.skipped_rows:
        logger.warning("metadata: skipped %d row(s) referencing unknown (phase, node)",
                       table.skipped_rows)
    return table
