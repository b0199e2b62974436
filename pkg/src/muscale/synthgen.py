"""Synthetic multiscale documents with known ground-truth hierarchies.

The generator packs cluster nodes top-down. Each node owns a rectangular
slot; its first native element (the host) fills the slot, further natives
cascade over the host with small offsets so the group is spatially
connected, and child clusters are laid out on a grid inside the host with
gaps wide enough that the recognizer can never bridge them.

Margins are sized so that, under the default recognizer config, recovery of
the generated hierarchy is exact:

* adjacent ranks differ in characteristic size by a factor of at least
  zoom_step * margin_safety (the factor grows automatically when a node has
  many children to pack);
* the gap between same-rank clusters exceeds margin_safety times the summed
  bbox expansions that the adjacency rule could apply across the gap;
* child clusters sit strictly inside their parent's host element.

Generation is keyed only by the spec's seed through a counter-based
splitmix64 stream, so a given spec reproduces byte-identical documents on
any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .model import (
    Document,
    Element,
    Point,
    Settings,
    Transforms,
    WorldRect,
    characteristic_size,
    hull_of,
    world_bbox,
)
from .recognizer import Cluster, MultiscaleHierarchy, RecognizerConfig

PARENT_ASSIGNMENTS = ("random", "round_robin", "first")

# Layout constants, all relative to the rank's characteristic size.
_ASPECT_RANGE = (0.8, 1.25)  # element aspect ratio; sqrt ends up in [0.894, 1.118]
_CASCADE_STEP = 0.1          # offset of each extra native over the host
_CORE_INSET = 0.1            # child grid keeps this fraction of host edge clear
_GAP_SAFETY = 1.05           # per-side child margin beyond the exact threshold
_SQRT_ASPECT_MAX = math.sqrt(_ASPECT_RANGE[1])
_SQRT_ASPECT_MIN = math.sqrt(_ASPECT_RANGE[0])

_WORDS = (
    "idea", "sketch", "plan", "study", "note", "concept", "draft", "scene",
    "detail", "overview", "storyboard", "prototype", "layout", "palette",
    "phase", "review", "journey", "insight", "moodboard", "iteration",
)


class InfeasibleSpec(Exception):
    """The requested cluster tree cannot be packed within margin guarantees."""


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one synthetic document.

    elements_per_cluster is an inclusive (min, max) range of native elements
    per cluster. parent_assignment picks how clusters at rank k choose a
    parent at rank k-1; "first" funnels them all into the first cluster,
    which the canned presets rely on.
    """

    num_scales: int
    clusters_per_scale: tuple[int, ...]
    elements_per_cluster: tuple[int, int] = (1, 3)
    zoom_step: float = 3.0
    seed: int = 0
    margin_safety: float = 2.0
    parent_assignment: str = "random"

    def __post_init__(self):
        if self.num_scales < 1:
            raise ValueError("num_scales must be >= 1")
        if len(self.clusters_per_scale) != self.num_scales:
            raise ValueError("clusters_per_scale length must equal num_scales")
        if self.clusters_per_scale[0] != 1:
            raise ValueError("clusters_per_scale[0] must be 1 (single root)")
        if any(c < 1 for c in self.clusters_per_scale):
            raise ValueError("clusters_per_scale entries must be >= 1")
        lo, hi = self.elements_per_cluster
        if not (1 <= lo <= hi):
            raise ValueError("elements_per_cluster must satisfy 1 <= min <= max")
        if not self.zoom_step > 1:
            raise ValueError("zoom_step must be > 1")
        if not self.margin_safety > 1:
            raise ValueError("margin_safety must be > 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.parent_assignment not in PARENT_ASSIGNMENTS:
            raise ValueError(f"parent_assignment must be one of {PARENT_ASSIGNMENTS}")

    def to_json_dict(self) -> dict:
        return {
            "numScales": self.num_scales,
            "clustersPerScale": list(self.clusters_per_scale),
            "elementsPerCluster": list(self.elements_per_cluster),
            "zoomStep": self.zoom_step,
            "seed": self.seed,
            "marginSafety": self.margin_safety,
            "parentAssignment": self.parent_assignment,
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "GenSpec":
        return cls(
            num_scales=raw["numScales"],
            clusters_per_scale=tuple(raw["clustersPerScale"]),
            elements_per_cluster=tuple(raw.get("elementsPerCluster", (1, 3))),
            zoom_step=raw.get("zoomStep", 3.0),
            seed=raw.get("seed", 0),
            margin_safety=raw.get("marginSafety", 2.0),
            parent_assignment=raw.get("parentAssignment", "random"),
        )


@dataclass(frozen=True)
class GroundTruth:
    expected: MultiscaleHierarchy

    def to_json_dict(self) -> dict:
        return self.expected.to_json_dict()


class SplitMix64:
    """Counter-based 64-bit PRNG; output i depends only on (seed, i)."""

    _MASK = (1 << 64) - 1
    _GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self.seed = seed & self._MASK
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        z = (self.seed + self.counter * self._GAMMA) & self._MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * (self.next_u64() / 2.0**64)

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, items):
        return items[self.randint(0, len(items) - 1)]


@dataclass
class _Node:
    rank: int
    index: int                 # position within its rank, generation order
    parent: "_Node | None"
    children: "list[_Node]"
    native_count: int = 0
    native_ids: list[str] = None  # type: ignore[assignment]
    origin: tuple[float, float] = (0.0, 0.0)


def _build_tree(spec: GenSpec, rng: SplitMix64) -> list[list[_Node]]:
    ranks: list[list[_Node]] = [[_Node(rank=0, index=0, parent=None, children=[])]]
    for k in range(1, spec.num_scales):
        row: list[_Node] = []
        parents = ranks[k - 1]
        for i in range(spec.clusters_per_scale[k]):
            if spec.parent_assignment == "first":
                parent = parents[0]
            elif spec.parent_assignment == "round_robin":
                parent = parents[i % len(parents)]
            else:
                parent = parents[rng.randint(0, len(parents) - 1)]
            node = _Node(rank=k, index=i, parent=parent, children=[])
            parent.children.append(node)
            row.append(node)
        ranks.append(row)
    return ranks


def _footprint_factor(native_max: int) -> float:
    """Upper bound on a cluster's hull extent in units of its rank size."""
    return _SQRT_ASPECT_MAX * (1.0 + _CASCADE_STEP * (native_max - 1))


def _child_margin_factor(spec: GenSpec) -> float:
    # Per-side clearance around a child slot, in units of the child rank size.
    return _GAP_SAFETY * spec.margin_safety * RecognizerConfig().expansion_factor


def _required_ratio(spec: GenSpec, ranks: list[list[_Node]]) -> float:
    """Smallest adjacent-rank size ratio that fits every node's children."""
    footprint = _footprint_factor(spec.elements_per_cluster[1])
    margin = _child_margin_factor(spec)
    core = (1.0 - 2.0 * _CORE_INSET) * _SQRT_ASPECT_MIN
    ratio = spec.zoom_step * spec.margin_safety
    for row in ranks:
        for node in row:
            if node.children:
                grid = math.isqrt(len(node.children) - 1) + 1
                ratio = max(ratio, grid * (footprint + 2.0 * margin) / core)
    return ratio


def _band_safe_ratio(ratio: float, spec: GenSpec) -> float:
    """Nudge the ratio up until every rank sits mid-band under the default
    recognizer config, then verify the bands stay distinct despite the
    raw-level clamp."""
    cfg = RecognizerConfig()
    log_z = math.log(cfg.zoom_step)
    for _ in range(600):
        fractions_ok = all(
            0.05 <= (k * math.log(ratio) / log_z) % 1.0 <= 0.95
            for k in range(1, spec.num_scales)
            if k * math.log(ratio) / log_z < cfg.max_levels - 1
        )
        if fractions_ok:
            break
        ratio *= 1.01
    raw = [
        min(math.floor(k * math.log(ratio) / log_z + 1e-9), cfg.max_levels - 1)
        for k in range(spec.num_scales)
    ]
    if len(set(raw)) != spec.num_scales:
        raise InfeasibleSpec(
            f"rank sizes need ratio {ratio:.2f}, which collides legibility "
            f"bands under the default recognizer config (raw levels {raw})"
        )
    return ratio


def _make_element(
    rng: SplitMix64,
    eid: str,
    char_size: float,
    x: float,
    y: float,
    aspect: float,
) -> Element:
    scale = rng.uniform(0.5, 2.0)
    world_w = char_size * math.sqrt(aspect)
    world_h = char_size / math.sqrt(aspect)
    kind_roll = rng.uniform(0.0, 1.0)
    if kind_roll < 0.35:
        kind, text = "image", None
    elif kind_roll < 0.70:
        kind = "text"
        count = rng.randint(1, 12)
        text = " ".join(rng.choice(_WORDS) for _ in range(count))
    else:
        kind = rng.choice(("sketch", "video", "embed", "other"))
        text = None
    return Element(
        id=eid,
        kind=kind,
        width=world_w / scale,
        height=world_h / scale,
        transforms=Transforms(position=Point(x, y), scale=scale, rotation=0.0),
        text=text,
    )


def _layout(
    node: _Node,
    origin: tuple[float, float],
    sizes: list[float],
    spec: GenSpec,
    rng: SplitMix64,
    elements: list[Element],
) -> None:
    size = sizes[node.rank]
    node.origin = origin
    node.native_ids = []
    ox, oy = origin

    host_aspect = rng.uniform(*_ASPECT_RANGE)
    host = _make_element(
        rng, f"e{len(elements):04d}", size, ox, oy, host_aspect
    )
    elements.append(host)
    node.native_ids.append(host.id)
    host_w = size * math.sqrt(host_aspect)
    host_h = size / math.sqrt(host_aspect)

    for i in range(1, node.native_count):
        aspect = rng.uniform(*_ASPECT_RANGE)
        e = _make_element(
            rng,
            f"e{len(elements):04d}",
            size,
            ox + _CASCADE_STEP * i * host_w,
            oy + _CASCADE_STEP * i * host_h,
            aspect,
        )
        elements.append(e)
        node.native_ids.append(e.id)

    if not node.children:
        return

    child_size = sizes[node.rank + 1]
    slot = _footprint_factor(spec.elements_per_cluster[1]) * child_size
    margin = _child_margin_factor(spec) * child_size
    grid = math.isqrt(len(node.children) - 1) + 1
    core_x = ox + _CORE_INSET * host_w
    core_y = oy + _CORE_INSET * host_h
    cell_w = (1.0 - 2.0 * _CORE_INSET) * host_w / grid
    cell_h = (1.0 - 2.0 * _CORE_INSET) * host_h / grid
    room_w = cell_w - slot - 2.0 * margin
    room_h = cell_h - slot - 2.0 * margin
    if room_w < 0 or room_h < 0:
        raise InfeasibleSpec(
            f"child slots of rank {node.rank + 1} do not fit the host cell"
        )
    for idx, child in enumerate(node.children):
        row, col = divmod(idx, grid)
        cx = core_x + col * cell_w + margin + rng.uniform(0.0, 1.0) * room_w
        cy = core_y + row * cell_h + margin + rng.uniform(0.0, 1.0) * room_h
        _layout(child, (cx, cy), sizes, spec, rng, elements)


def _members(node: _Node) -> frozenset[str]:
    ids = set(node.native_ids)
    for child in node.children:
        ids |= _members(child)
    return frozenset(ids)


def _truth_hierarchy(
    ranks: list[list[_Node]], elements: list[Element], spec: GenSpec
) -> MultiscaleHierarchy:
    bbox = {e.id: world_bbox(e) for e in elements}
    levels: dict[str, int] = {}
    for row in ranks:
        for node in row:
            for eid in node.native_ids:
                levels[eid] = node.rank

    clusters: list[Cluster] = []
    node_cluster_id: dict[int, int] = {}
    next_id = 0
    for row in ranks:
        decorated = []
        for node in row:
            members = _members(node)
            hull = hull_of([bbox[i] for i in members])
            decorated.append(((hull.min_x, hull.min_y), node, members, hull))
        decorated.sort(key=lambda item: item[0])
        for _, node, members, hull in decorated:
            parent_id = None if node.parent is None else node_cluster_id[id(node.parent)]
            clusters.append(
                Cluster(
                    id=next_id,
                    scale_rank=node.rank,
                    member_element_ids=members,
                    region=hull,
                    parent_cluster_id=parent_id,
                )
            )
            node_cluster_id[id(node)] = next_id
            next_id += 1
    return MultiscaleHierarchy(
        num_scales=spec.num_scales, clusters=tuple(clusters), element_levels=levels
    )


def _axis_separation(a: WorldRect, b: WorldRect) -> float:
    """Largest single-axis distance between two rects (0 if they overlap on
    both axes)."""
    dx = max(a.min_x - b.max_x, b.min_x - a.max_x, 0.0)
    dy = max(a.min_y - b.max_y, b.min_y - a.max_y, 0.0)
    return max(dx, dy)


def _self_check(doc: Document, truth: MultiscaleHierarchy, spec: GenSpec) -> None:
    """Assert the margin guarantees directly on the emitted geometry,
    without invoking the recognizer."""
    beta = RecognizerConfig().expansion_factor
    by_id = {e.id: e for e in doc.elements}
    char = {e.id: characteristic_size(e) for e in doc.elements}

    # (a) adjacent ranks separated by at least zoom_step * margin_safety
    for rank in range(spec.num_scales - 1):
        upper = min(char[eid] for eid, lv in truth.element_levels.items() if lv == rank)
        lower = max(char[eid] for eid, lv in truth.element_levels.items() if lv == rank + 1)
        if upper / lower < spec.zoom_step * spec.margin_safety * (1 - 1e-12):
            raise AssertionError(f"rank size ratio violated at rank {rank}")

    # (b) same-rank clusters farther apart than the reach of any expansion
    for rank in range(1, spec.num_scales):
        row = truth.clusters_at_rank(rank)
        for i, a in enumerate(row):
            cmax_a = max(char[eid] for eid in a.member_element_ids)
            for b in row[i + 1 :]:
                cmax_b = max(char[eid] for eid in b.member_element_ids)
                needed = spec.margin_safety * beta * (cmax_a + cmax_b)
                if _axis_separation(a.region, b.region) <= needed:
                    raise AssertionError(
                        f"cluster gap violated at rank {rank}: {a.id} vs {b.id}"
                    )

    # (c) children strictly inside the parent region
    clusters_by_id = {c.id: c for c in truth.clusters}
    for c in truth.clusters:
        if c.parent_cluster_id is None:
            continue
        p = clusters_by_id[c.parent_cluster_id].region
        r = c.region
        if not (p.min_x < r.min_x and p.min_y < r.min_y and r.max_x < p.max_x and r.max_y < p.max_y):
            raise AssertionError(f"cluster {c.id} not strictly inside its parent")

    # every member bbox inside the cluster region
    for c in truth.clusters:
        for eid in c.member_element_ids:
            if not c.region.contains(world_bbox(by_id[eid])):
                raise AssertionError(f"element {eid} escapes cluster {c.id}")


def generate(spec: GenSpec) -> tuple[Document, GroundTruth]:
    """Emit a synthetic document plus the hierarchy a correct recognizer
    must recover from it.

    Deterministic in spec.seed. Raises InfeasibleSpec when the requested
    tree cannot be packed within margin guarantees.
    """
    rng = SplitMix64(spec.seed)
    ranks = _build_tree(spec, rng)
    for row in ranks:
        for node in row:
            node.native_count = rng.randint(*spec.elements_per_cluster)

    ratio = _band_safe_ratio(_required_ratio(spec, ranks), spec)
    sizes = [1000.0]
    for _ in range(1, spec.num_scales):
        sizes.append(sizes[-1] / ratio)

    origin = (rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0))
    elements: list[Element] = []
    _layout(ranks[0][0], origin, sizes, spec, rng, elements)

    doc = Document(
        title=f"synthetic multiscale design {spec.seed}",
        key=f"synth-{spec.seed:016x}",
        id=f"doc-{spec.seed:016x}",
        settings=Settings(visibility="public", background_color="#ffffff"),
        creator="synthgen",
        elements=tuple(elements),
    )
    truth = _truth_hierarchy(ranks, elements, spec)
    _self_check(doc, truth, spec)
    return doc, GroundTruth(expected=truth)


def generate_unconstrained(
    seed: int,
    num_elements: int,
    *,
    world_extent: float = 1000.0,
    size_range: tuple[float, float] = (2.0, 400.0),
    rotated: bool = True,
) -> Document:
    """Random scattered document with no margin or recovery guarantees.

    Used by property tests and the brute-force clustering oracle; the
    --no-margins CLI flag maps here.
    """
    rng = SplitMix64(seed)
    elements = []
    log_lo, log_hi = math.log(size_range[0]), math.log(size_range[1])
    for i in range(num_elements):
        char = math.exp(rng.uniform(log_lo, log_hi))
        aspect = rng.uniform(0.5, 2.0)
        e = _make_element(
            rng,
            f"e{i:04d}",
            char,
            rng.uniform(0.0, world_extent),
            rng.uniform(0.0, world_extent),
            aspect,
        )
        if rotated:
            e = replace(
                e,
                transforms=replace(e.transforms, rotation=rng.uniform(0.0, 2.0 * math.pi)),
            )
        elements.append(e)

    return Document(
        title=f"unconstrained scatter {seed}",
        key=f"scatter-{seed:016x}",
        id=f"doc-scatter-{seed:016x}",
        settings=Settings(visibility="private", background_color="#fafafa"),
        creator="synthgen",
        elements=tuple(elements),
    )


def nested_triads_spec() -> GenSpec:
    """Three scales, one root, three mid groups, three small groups nested
    in the first mid group."""
    return GenSpec(
        num_scales=3,
        clusters_per_scale=(1, 3, 3),
        elements_per_cluster=(1, 3),
        seed=1003,
        parent_assignment="first",
    )


def broad_middle_spec() -> GenSpec:
    """Three scales, seven mid groups, two deeper groups in the first."""
    return GenSpec(
        num_scales=3,
        clusters_per_scale=(1, 7, 2),
        elements_per_cluster=(1, 3),
        seed=1004,
        parent_assignment="first",
    )
