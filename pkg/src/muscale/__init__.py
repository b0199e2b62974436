"""Multiscale design analytics.

Recognizes the scales and nested spatial clusters a design composition uses,
annotates instances with colored overlays, generates synthetic oracle
corpora, and serves it all through a dashboard HTTP API.
"""

from .annotator import (
    AnnotationOverlay,
    Palette,
    RankOverflow,
    RenderOptions,
    UnknownCluster,
    build_overlay,
    render_svg,
)
from .model import (
    Document,
    DocumentError,
    Element,
    InvariantViolation,
    MalformedJson,
    SchemaViolation,
    Transforms,
    WorldRect,
    characteristic_size,
    parse_document,
    serialize_document,
    world_bbox,
)
from .recognizer import (
    AnalyticsRecord,
    Cluster,
    MultiscaleHierarchy,
    RecognizerConfig,
    assign_scale_levels,
    build_hierarchy,
    cluster_at_rank,
    compute_analytics,
)
from .synthgen import GenSpec, GroundTruth, InfeasibleSpec, generate, generate_unconstrained

__version__ = "0.1.0"

__all__ = [
    "AnalyticsRecord",
    "AnnotationOverlay",
    "Cluster",
    "Document",
    "DocumentError",
    "Element",
    "GenSpec",
    "GroundTruth",
    "InfeasibleSpec",
    "InvariantViolation",
    "MalformedJson",
    "MultiscaleHierarchy",
    "Palette",
    "RankOverflow",
    "RecognizerConfig",
    "RenderOptions",
    "SchemaViolation",
    "Transforms",
    "UnknownCluster",
    "WorldRect",
    "assign_scale_levels",
    "build_hierarchy",
    "build_overlay",
    "characteristic_size",
    "cluster_at_rank",
    "compute_analytics",
    "generate",
    "generate_unconstrained",
    "parse_document",
    "render_svg",
    "serialize_document",
    "world_bbox",
]
