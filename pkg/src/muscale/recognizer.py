"""Scale and cluster recognition for multiscale design documents.

Two analytics come out of this module: the number of scales a composition
uses, and the nested spatial clusters of elements at each scale.

Scales are legibility bands. An element's characteristic size determines how
far one must zoom in from the most legible element before it becomes readable;
one zoom step (factor ``zoom_step``) per band. Occupied bands are compressed
to consecutive ranks starting at 0.

Clusters at rank k are connected components of the elements at rank >= k,
where two elements are adjacent when their world bboxes, each expanded
outward by ``expansion_factor`` times that element's own characteristic size,
intersect (closed). The expansion rule is rank-independent, so components at
rank k refine components at rank k-1: the hierarchy is a tree rooted at the
single whole-document cluster.

All functions are pure over immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable

from .canonical import canonical_json_bytes, sha256_hex
from .model import (
    Document,
    Element,
    WorldRect,
    characteristic_size,
    document_content_hash,
    hull_of,
    world_bbox,
)

# Slack added to the log before flooring, so a size ratio of exactly Z^k
# lands in band k rather than k-1.
_LOG_SLACK = 1e-9


@dataclass(frozen=True)
class RecognizerConfig:
    """Tuning knobs for the recognizer.

    zoom_step: magnification per zoom level; one legibility band per step.
    expansion_factor: bbox expansion (per side, as a fraction of the
        element's own characteristic size) used in the adjacency rule.
    max_levels: clamp on raw levels; deeper elements merge into the
        innermost band so pathological documents stay bounded.
    """

    zoom_step: float = 3.0
    expansion_factor: float = 0.5
    max_levels: int = 8

    def __post_init__(self):
        if not self.zoom_step > 1:
            raise ValueError(f"zoom_step must be > 1, got {self.zoom_step}")
        if self.expansion_factor < 0:
            raise ValueError(f"expansion_factor must be >= 0, got {self.expansion_factor}")
        if self.max_levels < 1:
            raise ValueError(f"max_levels must be >= 1, got {self.max_levels}")

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "zoomStep": self.zoom_step,
            "expansionFactor": self.expansion_factor,
            "maxLevels": self.max_levels,
        }

    def digest(self) -> str:
        return sha256_hex(canonical_json_bytes(self.to_json_dict()))


@dataclass(frozen=True)
class Cluster:
    id: int
    scale_rank: int
    member_element_ids: frozenset[str]
    region: WorldRect
    parent_cluster_id: int | None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "scaleRank": self.scale_rank,
            "memberElementIds": sorted(self.member_element_ids),
            "region": self.region.to_json_dict(),
            "parentClusterId": self.parent_cluster_id,
        }


@dataclass(frozen=True)
class MultiscaleHierarchy:
    num_scales: int
    clusters: tuple[Cluster, ...]
    element_levels: dict[str, int]

    def clusters_at_rank(self, rank: int) -> list[Cluster]:
        return [c for c in self.clusters if c.scale_rank == rank]

    def clusters_per_scale(self) -> list[int]:
        counts = [0] * self.num_scales
        for c in self.clusters:
            counts[c.scale_rank] += 1
        return counts

    def cluster_by_id(self, cluster_id: int) -> Cluster | None:
        for c in self.clusters:
            if c.id == cluster_id:
                return c
        return None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "numScales": self.num_scales,
            "clusters": [c.to_json_dict() for c in self.clusters],
            "elementLevels": dict(sorted(self.element_levels.items())),
        }


@dataclass(frozen=True)
class Fluency:
    """Effort counts: how much stuff a design contains."""

    element_count: int
    word_count: int
    image_count: int

    def to_json_dict(self) -> dict[str, int]:
        return {
            "elementCount": self.element_count,
            "wordCount": self.word_count,
            "imageCount": self.image_count,
        }


@dataclass(frozen=True)
class AnalyticsRecord:
    num_scales: int
    num_clusters: int
    clusters_per_scale: tuple[int, ...]
    fluency: Fluency
    content_hash: str
    config_echo: RecognizerConfig

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "numScales": self.num_scales,
            "numClusters": self.num_clusters,
            "clustersPerScale": list(self.clusters_per_scale),
            "fluency": self.fluency.to_json_dict(),
            "contentHash": self.content_hash,
            "configEcho": self.config_echo.to_json_dict(),
        }

    def canonical_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_json_dict())


def assign_scale_levels(doc: Document, cfg: RecognizerConfig) -> dict[str, int]:
    """Map each element id to its scale rank (0 = most legible band).

    Raw level = floor(log_Z(C0 / c_e) + slack), clamped to [0, max_levels-1],
    where c_e is the element's characteristic size and C0 the document
    maximum. Occupied raw levels are then compressed to consecutive ranks.
    """
    if not doc.elements:
        return {}
    sizes = {e.id: characteristic_size(e) for e in doc.elements}
    c0 = max(sizes.values())
    log_z = math.log(cfg.zoom_step)
    raw: dict[str, int] = {}
    for eid, c in sizes.items():
        level = math.floor(math.log(c0 / c) / log_z + _LOG_SLACK)
        raw[eid] = min(max(level, 0), cfg.max_levels - 1)
    compression = {lvl: rank for rank, lvl in enumerate(sorted(set(raw.values())))}
    return {eid: compression[lvl] for eid, lvl in raw.items()}


def _expanded_bbox(e: Element, cfg: RecognizerConfig) -> WorldRect:
    return world_bbox(e).expand(cfg.expansion_factor * characteristic_size(e))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:  # path compression
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _connected_components(elements: list[Element], cfg: RecognizerConfig) -> list[list[Element]]:
    """Broad-phase sweep over expanded bboxes, then union-find.

    Boxes sorted by min_x; an active list keeps only candidates whose x-span
    still reaches the sweep line, so the pair test runs on x-overlapping
    boxes only.
    """
    n = len(elements)
    boxes = [_expanded_bbox(e, cfg) for e in elements]
    order = sorted(range(n), key=lambda i: boxes[i].min_x)
    uf = _UnionFind(n)
    active: list[int] = []
    for i in order:
        box = boxes[i]
        active = [j for j in active if boxes[j].max_x >= box.min_x]
        for j in active:
            other = boxes[j]
            if box.min_y <= other.max_y and other.min_y <= box.max_y:
                uf.union(i, j)
        active.append(i)
    groups: dict[int, list[Element]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(elements[i])
    return list(groups.values())


def _sorted_components(components: Iterable[list[Element]]) -> list[list[str]]:
    """Deterministic ordering: ids within a component, components by hull corner."""
    keyed = []
    for comp in components:
        hull = hull_of([world_bbox(e) for e in comp])
        keyed.append(((hull.min_x, hull.min_y), sorted(e.id for e in comp)))
    keyed.sort(key=lambda item: item[0])
    return [ids for _, ids in keyed]


def cluster_at_rank(
    doc: Document, levels: dict[str, int], rank: int, cfg: RecognizerConfig
) -> list[list[str]]:
    """Connected components of the elements at rank >= ``rank`` (rank >= 1).

    Returns element-id lists, each sorted by id, components ordered by the
    (min_x, min_y) corner of their unexpanded hulls.
    """
    if rank < 1:
        raise ValueError("cluster_at_rank is defined for rank >= 1")
    eligible = [e for e in doc.elements if levels[e.id] >= rank]
    if not eligible:
        return []
    return _sorted_components(_connected_components(eligible, cfg))


def build_hierarchy(doc: Document, cfg: RecognizerConfig | None = None) -> MultiscaleHierarchy:
    """Recognize the full scale/cluster tree of a document.

    Rank 0 is always a single root cluster holding every element of a
    nonempty document; deeper ranks come from spatial clustering. Cluster ids
    are assigned in (rank, spatial order) sequence, so identical input yields
    an identical hierarchy.
    """
    cfg = cfg or RecognizerConfig()
    levels = assign_scale_levels(doc, cfg)
    if not levels:
        return MultiscaleHierarchy(num_scales=0, clusters=(), element_levels={})

    num_scales = max(levels.values()) + 1
    by_id = {e.id: e for e in doc.elements}

    def region_of(ids: Iterable[str]) -> WorldRect:
        return hull_of([world_bbox(by_id[i]) for i in ids])

    all_ids = frozenset(by_id)
    clusters: list[Cluster] = [
        Cluster(
            id=0,
            scale_rank=0,
            member_element_ids=all_ids,
            region=region_of(all_ids),
            parent_cluster_id=None,
        )
    ]
    previous_rank = {eid: 0 for eid in all_ids}  # element id -> cluster id at rank k-1
    next_id = 1
    for rank in range(1, num_scales):
        current_rank: dict[str, int] = {}
        for member_ids in cluster_at_rank(doc, levels, rank, cfg):
            parents = {previous_rank[eid] for eid in member_ids}
            if len(parents) != 1:
                # Impossible by refinement (edge rule is rank-independent).
                raise AssertionError(f"ambiguous parent for component {member_ids}")
            cluster = Cluster(
                id=next_id,
                scale_rank=rank,
                member_element_ids=frozenset(member_ids),
                region=region_of(member_ids),
                parent_cluster_id=parents.pop(),
            )
            clusters.append(cluster)
            for eid in member_ids:
                current_rank[eid] = cluster.id
            next_id += 1
        previous_rank = current_rank

    return MultiscaleHierarchy(
        num_scales=num_scales, clusters=tuple(clusters), element_levels=levels
    )


def _word_count(doc: Document) -> int:
    total = 0
    for e in doc.elements:
        if e.kind == "text" and e.text:
            total += len(e.text.split())
    return total


def compute_analytics(doc: Document, cfg: RecognizerConfig | None = None) -> AnalyticsRecord:
    """Scale/cluster counts plus fluency counts for one document."""
    cfg = cfg or RecognizerConfig()
    hierarchy = build_hierarchy(doc, cfg)
    per_scale = hierarchy.clusters_per_scale()
    return AnalyticsRecord(
        num_scales=hierarchy.num_scales,
        num_clusters=sum(per_scale),
        clusters_per_scale=tuple(per_scale),
        fluency=Fluency(
            element_count=len(doc.elements),
            word_count=_word_count(doc),
            image_count=sum(1 for e in doc.elements if e.kind == "image"),
        ),
        content_hash=document_content_hash(doc),
        config_echo=cfg,
    )
