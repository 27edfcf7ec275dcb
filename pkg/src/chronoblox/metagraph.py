"""Per-phase meta-graphs: node groups with aggregated inter-group edges.

Aggregation is a raw sum of the original edge weights over group pairs;
within-group weight (including self-loops) is kept on the diagonal so no
weight is lost.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .grouping import Partition, _check_cover
from .sequence import GraphSequence, MetadataTable, NodeId, PhaseGraph

NO_LABEL = "∅"  # sentinel for groups without any labeled member


@dataclass(frozen=True, order=True)
class GroupId:
    """Globally unique group handle: (phase index, local group id)."""

    phase_index: int
    local_id: int

    def token(self) -> str:
        return f"{self.phase_index}:{self.local_id}"


@dataclass(frozen=True)
class MetaGraph:
    """Groups of one phase, their member sets and aggregated edges.

    ``edges`` is keyed by canonically ordered group pairs; diagonal
    entries hold within-group weight.
    """

    phase_index: int
    groups: dict[GroupId, frozenset[NodeId]]
    edges: dict[tuple[GroupId, GroupId], float]

    def __post_init__(self):
        for g in self.groups:
            if g.phase_index != self.phase_index:
                raise ValidationError(f"group {g} in meta-graph of phase {self.phase_index}")
        for (a, b), w in self.edges.items():
            if a not in self.groups or b not in self.groups:
                raise ValidationError(f"meta-edge ({a},{b}) references unknown group")
            if a > b:
                raise ValidationError(f"meta-edge ({a},{b}) not canonically ordered")
            if w < 0:
                raise ValidationError(f"negative meta-edge weight on ({a},{b})")

    @property
    def total_weight(self) -> float:
        return sum(self.edges.values())

    def group_ids(self) -> list[GroupId]:
        return sorted(self.groups)


@dataclass
class MetaGraphSequence:
    """One meta-graph per phase, plus optional dominant-label summary."""

    metas: list[MetaGraph]
    layer_summary: dict[GroupId, str] = field(default_factory=dict)

    def all_groups(self) -> list[GroupId]:
        return [g for meta in self.metas for g in meta.group_ids()]

    def members_of(self, gid: GroupId) -> frozenset[NodeId]:
        return self.metas[gid.phase_index].groups[gid]


def build_metagraph(phase: PhaseGraph, part: Partition) -> MetaGraph:
    """Aggregate a phase over its partition.

    The weight of a meta-edge (b, b') is the summed weight of the phase
    edges with one endpoint in each; member sets are the partition classes.
    """
    _check_cover(phase, part)
    groups = {
        GroupId(phase.phase_index, local): frozenset(members)
        for local, members in part.members().items()
    }
    edges: dict[tuple[GroupId, GroupId], float] = {}
    for (a, b), w in phase.edges.items():
        ga = GroupId(phase.phase_index, part.assignment[a])
        gb = GroupId(phase.phase_index, part.assignment[b])
        key = (ga, gb) if ga <= gb else (gb, ga)
        edges[key] = edges.get(key, 0.0) + w
    return MetaGraph(phase_index=phase.phase_index, groups=groups, edges=edges)


def dominant_label(meta: MetaGraph, table: MetadataTable) -> dict[GroupId, str]:
    """Most frequent member label per group; lexicographic tie-break.

    Groups whose members carry no label at all map to the sentinel "∅".
    """
    out: dict[GroupId, str] = {}
    for gid, members in meta.groups.items():
        counts: dict[str, int] = {}
        for node in members:
            for label in table.labels_for(meta.phase_index, node):
                counts[label] = counts.get(label, 0) + 1
        if not counts:
            out[gid] = NO_LABEL
        else:
            out[gid] = min(counts, key=lambda lab: (-counts[lab], lab))
    return out


def build_metagraph_sequence(seq: GraphSequence, partitions: list[Partition],
                             metadata: MetadataTable | None = None) -> MetaGraphSequence:
    """Aggregate every phase; attach dominant labels when metadata is given."""
    if len(partitions) != seq.n_phases:
        raise ValidationError(
            f"{len(partitions)} partitions for {seq.n_phases} phases")
    metas = [build_metagraph(ph, part) for ph, part in zip(seq.phases, partitions)]
    summary: dict[GroupId, str] = {}
    if metadata is not None:
        for meta in metas:
            summary.update(dominant_label(meta, metadata))
    return MetaGraphSequence(metas=metas, layer_summary=summary)
