"""Shared test utilities: document builders, corpus specs, and the
brute-force clustering oracle.

The oracle here is deliberately independent of the production path: plain
O(n^2) pairwise expansion checks and its own union-find, so it can catch
broad-phase bugs in the recognizer.
"""

from __future__ import annotations

import math

from muscale.model import Document, Element, Point, Settings, Transforms, world_bbox
from muscale.recognizer import RecognizerConfig
from muscale.synthgen import GenSpec, SplitMix64


def make_element(
    eid: str,
    x: float = 0.0,
    y: float = 0.0,
    width: float = 1.0,
    height: float = 1.0,
    scale: float = 1.0,
    rotation: float = 0.0,
    kind: str = "image",
    text: str | None = None,
) -> Element:
    return Element(
        id=eid,
        kind=kind,
        width=width,
        height=height,
        transforms=Transforms(position=Point(x, y), scale=scale, rotation=rotation),
        text=text,
    )


def make_doc(elements, key: str = "test-doc") -> Document:
    return Document(
        title="test",
        key=key,
        id=f"id-{key}",
        settings=Settings(visibility="public", background_color="#ffffff"),
        creator="tests",
        elements=tuple(elements),
    )


def corpus_spec(index: int, base_seed: int = 9000) -> GenSpec:
    """Random-but-reproducible GenSpec within the acceptance envelope:
    <= 4 scales, <= 50 clusters, <= 500 elements."""
    rng = SplitMix64(base_seed + index)
    num_scales = rng.randint(1, 4)
    counts = [1]
    total = 1
    for _ in range(1, num_scales):
        fanout_cap = 4 if num_scales == 4 else 7
        headroom = max(50 - total, 1)
        counts.append(rng.randint(1, min(fanout_cap * counts[-1], headroom)))
        total += counts[-1]
    return GenSpec(
        num_scales=num_scales,
        clusters_per_scale=tuple(counts),
        elements_per_cluster=(1, rng.randint(2, 5)),
        seed=1337 * index + 17,
        parent_assignment=("random", "round_robin", "first")[rng.randint(0, 2)],
    )


# ---------------------------------------------------------------------------
# Brute-force oracle


def _oracle_expanded(e: Element, beta: float) -> tuple[float, float, float, float]:
    box = world_bbox(e)
    reach = beta * e.transforms.scale * math.sqrt(e.width * e.height)
    return (box.min_x - reach, box.min_y - reach, box.max_x + reach, box.max_y + reach)


def brute_force_components(
    doc: Document, levels: dict[str, int], rank: int, cfg: RecognizerConfig
) -> list[list[str]]:
    """O(n^2) pairwise union-find over expanded bboxes; same output
    conventions as cluster_at_rank."""
    elems = [e for e in doc.elements if levels[e.id] >= rank]
    n = len(elems)
    boxes = [_oracle_expanded(e, cfg.expansion_factor) for e in elems]
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        ax0, ay0, ax1, ay1 = boxes[i]
        for j in range(i + 1, n):
            bx0, by0, bx1, by1 = boxes[j]
            if ax0 <= bx1 and bx0 <= ax1 and ay0 <= by1 and by0 <= ay1:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    groups: dict[int, list[Element]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(elems[i])

    decorated = []
    for comp in groups.values():
        xs0 = min(world_bbox(e).min_x for e in comp)
        ys0 = min(world_bbox(e).min_y for e in comp)
        decorated.append(((xs0, ys0), sorted(e.id for e in comp)))
    decorated.sort(key=lambda item: item[0])
    return [ids for _, ids in decorated]
