"""Sparse Jaccard similarities between all groups of all phases.

Built through an inverted index (node -> groups containing it) so only
group pairs that actually share a member are touched; zero entries are
never stored. Within one phase the groups partition the node set, so
same-phase similarities are structurally zero.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import AbstractSet, Iterator

from .errors import ValidationError
from .metagraph import GroupId, MetaGraphSequence
from .sequence import NodeId


def jaccard(a: AbstractSet[NodeId], b: AbstractSet[NodeId]) -> float:
    """|a ∩ b| / |a ∪ b|; undefined (raises) when both sets are empty."""
    if not a and not b:
        raise ValidationError("jaccard of two empty sets is undefined")
    inter = len(a & b)
    if inter == 0:
        return 0.0
    return inter / (len(a) + len(b) - inter)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric sparse similarity over the groups of the whole sequence.

    ``order`` is the canonical global index (sorted GroupIds); ``entries``
    holds each unordered pair once, keyed with the smaller GroupId first,
    and stores only strictly positive values.
    """

    order: list[GroupId]
    entries: dict[tuple[GroupId, GroupId], float]

    def __post_init__(self):
        known = set(self.order)
        for (a, b), v in self.entries.items():
            if a not in known or b not in known:
                raise ValidationError(f"similarity entry ({a},{b}) outside the index")
            if a >= b:
                raise ValidationError(f"similarity entry ({a},{b}) not canonically keyed")
            if not (0.0 < v <= 1.0):
                raise ValidationError(f"similarity {v} for ({a},{b}) outside (0,1]")

    def get(self, a: GroupId, b: GroupId) -> float:
        if a == b:
            return 1.0
        key = (a, b) if a < b else (b, a)
        return self.entries.get(key, 0.0)

    def neighbors(self, g: GroupId) -> dict[GroupId, float]:
        out = {}
        for (a, b), v in self.entries.items():
            if a == g:
                out[b] = v
            elif b == g:
                out[a] = v
        return out

    def iter_pairs(self) -> Iterator[tuple[GroupId, GroupId, float]]:
        for (a, b), v in sorted(self.entries.items()):
            yield a, b, v


def build_similarity(seq: MetaGraphSequence) -> SimilarityMatrix:
    """Populate the matrix for every overlapping group pair of the sequence."""
    order = seq.all_groups()
    for meta in seq.metas:
        if not meta.groups:
            raise ValidationError(f"phase {meta.phase_index} has no groups")

    containing: dict[NodeId, list[GroupId]] = {}
    sizes: dict[GroupId, int] = {}
    for meta in seq.metas:
        for gid in meta.group_ids():
            members = meta.groups[gid]
            sizes[gid] = len(members)
            for node in members:
                containing.setdefault(node, []).append(gid)

    inter: dict[tuple[GroupId, GroupId], int] = {}
    for gids in containing.values():
        if len(gids) < 2:
            continue
        for i in range(len(gids)):
            for j in range(i + 1, len(gids)):
                a, b = gids[i], gids[j]
                key = (a, b) if a < b else (b, a)
                inter[key] = inter.get(key, 0) + 1

    entries = {
        (a, b): cnt / (sizes[a] + sizes[b] - cnt)
        for (a, b), cnt in inter.items()
    }
    return SimilarityMatrix(order=order, entries=entries)


def dump_similarity(matrix: SimilarityMatrix) -> str:
    """Debug CSV: one row per stored pair."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["phase_a", "group_a", "phase_b", "group_b", "jaccard"])
    for a, b, v in matrix.iter_pairs():
        writer.writerow([a.phase_index, a.local_id, b.phase_index, b.local_id, repr(v)])
    return out.getvalue()
