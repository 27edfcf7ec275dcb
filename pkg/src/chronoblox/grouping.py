"""Per-phase node grouping: built-in Louvain or imported partitions.

The Louvain implementation is deliberately deterministic: Newman-Girvan
modularity at resolution 1, seed-driven node visiting order, gain ties
broken toward the smallest target group id, and level passes repeated
until no single-node move improves modularity by more than ``GAIN_EPS``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO

import numpy as np

from .errors import ParseError, ValidationError
from .sequence import GraphSequence, NodeId, PhaseGraph

GAIN_EPS = 1e-9


@dataclass(frozen=True)
class Partition:
    """Assignment of every node of one phase to a dense group id."""

    phase_index: int
    assignment: dict[NodeId, int]

    def __post_init__(self):
        ids = set(self.assignment.values())
        if ids and ids != set(range(len(ids))):
            raise ValidationError(
                f"phase {self.phase_index}: group ids not dense 0..k-1: {sorted(ids)}")

    @property
    def n_groups(self) -> int:
        return len(set(self.assignment.values()))

    def members(self) -> dict[int, set[NodeId]]:
        out: dict[int, set[NodeId]] = {}
        for node, g in self.assignment.items():
            out.setdefault(g, set()).add(node)
        return out


def _check_cover(phase: PhaseGraph, part: Partition) -> None:
    if part.phase_index != phase.phase_index:
        raise ValidationError(
            f"partition for phase {part.phase_index} applied to phase {phase.phase_index}")
    if set(part.assignment) != set(phase.nodes):
        missing = set(phase.nodes) - set(part.assignment)
        extra = set(part.assignment) - set(phase.nodes)
        raise ValidationError(
            f"phase {phase.phase_index}: partition does not cover the node set "
            f"(missing {sorted(missing)[:3]}, extra {sorted(extra)[:3]})")


def modularity(phase: PhaseGraph, part: Partition) -> float:
    """Newman-Girvan modularity at resolution 1; 0.0 on edgeless phases.

    Self-loops count twice in a node's degree, once in within-group weight.
    """
    _check_cover(phase, part)
    m = phase.total_weight
    if m == 0:
        return 0.0
    degree: dict[NodeId, float] = {v: 0.0 for v in phase.nodes}
    internal: dict[int, float] = {}
    for (a, b), w in phase.edges.items():
        degree[a] += w
        degree[b] += w  # loops (a == b) count twice by falling through here
        if part.assignment[a] == part.assignment[b]:
            g = part.assignment[a]
            internal[g] = internal.get(g, 0.0) + w
    tot: dict[int, float] = {}
    for v, k in degree.items():
        g = part.assignment[v]
        tot[g] = tot.get(g, 0.0) + k
    q = 0.0
    for g in set(part.assignment.values()):
        q += internal.get(g, 0.0) / m - (tot.get(g, 0.0) / (2.0 * m)) ** 2
    return q


def _one_level(adj: list[dict[int, float]], loops: list[float], m: float,
               rng: np.random.Generator) -> tuple[list[int], bool]:
    """Local moving phase on the current (possibly aggregated) graph.

    Returns (community per node, whether any move happened).
    """
    n = len(adj)
    degree = [sum(nb.values()) + 2.0 * loops[i] for i, nb in enumerate(adj)]
    node2com = list(range(n))
    tot = degree.copy()
    two_m_sq = 2.0 * m * m
    moved_any = False
    while True:
        moved_this_pass = False
        for i in rng.permutation(n):
            com_i = node2com[i]
            neigh: dict[int, float] = {}
            for j, w in adj[i].items():
                c = node2com[j]
                neigh[c] = neigh.get(c, 0.0) + w
            tot[com_i] -= degree[i]
            stay_gain = neigh.get(com_i, 0.0) / m - tot[com_i] * degree[i] / two_m_sq
            move_com, move_gain = -1, -np.inf
            for c in sorted(neigh):
                if c == com_i:
                    continue
                gain = neigh[c] / m - tot[c] * degree[i] / two_m_sq
                if gain > move_gain:  # strict > keeps the smallest id on ties
                    move_com, move_gain = c, gain
            if move_com >= 0 and move_gain > stay_gain + GAIN_EPS:
                node2com[i] = move_com
                tot[move_com] += degree[i]
                moved_this_pass = True
                moved_any = True
            else:
                tot[com_i] += degree[i]
        if not moved_this_pass:
            break
    return node2com, moved_any


def _aggregate(adj: list[dict[int, float]], loops: list[float],
               node2com: list[int]) -> tuple[list[dict[int, float]], list[float], list[int]]:
    """Collapse communities into nodes; returns (adj, loops, dense relabel)."""
    seen: dict[int, int] = {}
    relabel = []
    for c in node2com:
        if c not in seen:
            seen[c] = len(seen)
        relabel.append(seen[c])
    k = len(seen)
    new_adj: list[dict[int, float]] = [{} for _ in range(k)]
    new_loops = [0.0] * k
    for i, nb in enumerate(adj):
        ci = relabel[i]
        new_loops[ci] += loops[i]
        for j, w in nb.items():
            if j <= i:
                continue  # undirected: visit each pair once
            cj = relabel[j]
            if ci == cj:
                new_loops[ci] += w
            else:
                new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
                new_adj[cj][ci] = new_adj[cj].get(ci, 0.0) + w
    return new_adj, new_loops, relabel


def louvain(phase: PhaseGraph, seed: int) -> Partition:
    """Louvain partition of one phase, deterministic for a fixed seed."""
    if not phase.nodes:
        raise ValidationError(f"phase {phase.phase_index} has no nodes")
    nodes = sorted(phase.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    m = phase.total_weight
    if m == 0:
        return Partition(phase.phase_index, {v: i for i, v in enumerate(nodes)})

    adj: list[dict[int, float]] = [{} for _ in nodes]
    loops = [0.0] * len(nodes)
    for (a, b), w in phase.edges.items():
        ia, ib = index[a], index[b]
        if ia == ib:
            loops[ia] += w
        else:
            adj[ia][ib] = adj[ia].get(ib, 0.0) + w
            adj[ib][ia] = adj[ib].get(ia, 0.0) + w

    rng = np.random.default_rng(seed)
    membership = list(range(len(nodes)))  # original node -> current meta node
    while True:
        node2com, moved = _one_level(adj, loops, m, rng)
        if not moved:
            break
        adj, loops, relabel = _aggregate(adj, loops, node2com)
        membership = [relabel[meta] for meta in membership]
        if len(adj) == 1:
            break

    # densify by first appearance over sorted node order
    dense: dict[int, int] = {}
    assignment: dict[NodeId, int] = {}
    for v in nodes:
        c = membership[index[v]]
        if c not in dense:
            dense[c] = len(dense)
        assignment[v] = dense[c]
    return Partition(phase.phase_index, assignment)


def import_partition(stream: IO[str] | str, seq: GraphSequence) -> list[Partition]:
    """Ingest an externally computed ``phase,node,group`` assignment file.

    Every (phase, node) of the sequence must appear exactly once; group
    ids are densified per phase in order of first appearance.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise ParseError("empty partition input")
    if [c.strip().lower() for c in header][:3] != ["phase", "node", "group"]:
        raise ParseError(f"expected header phase,node,group, got {header!r}", row=1)

    label_to_index = seq.label_to_index()
    raw: list[dict[NodeId, str]] = [dict() for _ in seq.phases]
    for i, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) < 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", row=i)
        phase_tok, node, group = row[0].strip(), row[1].strip(), row[2].strip()
        phase_index = label_to_index.get(phase_tok)
        if phase_index is None:
            raise ParseError(f"unknown phase {phase_tok!r}", row=i)
        if node not in seq.phases[phase_index].nodes:
            raise ParseError(f"assignment for unknown node ({phase_tok}, {node})", row=i)
        if node in raw[phase_index]:
            raise ParseError(f"duplicate assignment for ({phase_tok}, {node})", row=i)
        raw[phase_index][node] = group

    partitions = []
    for ph in seq.phases:
        missing = set(ph.nodes) - set(raw[ph.phase_index])
        if missing:
            raise ValidationError(
                f"missing assignment for ({ph.phase_label}, {sorted(missing)[0]})"
                + (f" and {len(missing) - 1} more" if len(missing) > 1 else ""))
        dense: dict[str, int] = {}
        assignment: dict[NodeId, int] = {}
        for node, group in raw[ph.phase_index].items():  # insertion = file order
            if group not in dense:
                dense[group] = len(dense)
            assignment[node] = dense[group]
        partitions.append(Partition(ph.phase_index, assignment))
    return partitions


def export_partition(partitions: list[Partition], seq: GraphSequence) -> str:
    """Write partitions in the import format; import(export(p)) == p.

    Rows are ordered by (phase, group, node) so that first-appearance
    densification on import reproduces the original ids.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["phase", "node", "group"])
    for part in partitions:
        label = seq.phases[part.phase_index].phase_label
        for node, g in sorted(part.assignment.items(), key=lambda kv: (kv[1], kv[0])):
            writer.writerow([label, node, g])
    return out.getvalue()
