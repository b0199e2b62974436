"""Multiscale design document model.

The document format (a "free-form web curation") is a JSON object with a
flat list of elements, each positioned through a transforms record:

    document: title, description?, key, id,
              settings{visibility, backgroundColor}, creator, elements[]
    element:  id, kind, width, height,
              transforms{position{x, y}, scale, rotation}, text?, clipping?

Conventions fixed here (the source environment leaves them open):

* rotation is in radians, counter-clockwise about the element's local origin;
* scale is a single uniform magnification factor;
* all geometry is 64-bit floating point, and NaN/infinity anywhere in a
  document is rejected as a schema violation;
* unknown JSON fields are preserved in per-object side maps so that documents
  written by richer environments survive a parse/serialize round trip.

Documents and derived geometry are immutable values; every operation in this
module is pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .canonical import canonical_json_bytes, sha256_hex

ELEMENT_KINDS = ("image", "text", "sketch", "video", "embed", "other")
VISIBILITIES = ("public", "private")


class DocumentError(Exception):
    """Base class for document validation failures; carries a JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class MalformedJson(DocumentError):
    """Input is not well-formed JSON."""


class SchemaViolation(DocumentError):
    """A required field is missing or has the wrong type."""


class InvariantViolation(DocumentError):
    """Fields are well-typed but violate a model invariant."""


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    extra_fields: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Transforms:
    """Spatial placement of an element: position, uniform scale, rotation."""

    position: Point
    scale: float
    rotation: float
    extra_fields: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Clipping:
    """Provenance of a collected element plus whatever semantics came with it."""

    source_url: str | None = None
    source_title: str | None = None
    extra: dict[str, Any] | None = None
    extra_fields: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Element:
    id: str
    kind: str
    width: float
    height: float
    transforms: Transforms
    text: str | None = None
    clipping: Clipping | None = None
    extra_fields: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Settings:
    visibility: str
    background_color: str
    extra_fields: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Document:
    title: str
    key: str
    id: str
    settings: Settings
    creator: str
    elements: tuple[Element, ...]
    description: str | None = None
    extra_fields: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class WorldRect:
    """Axis-aligned box in world units. min corner never exceeds max corner."""

    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if self.min_x > self.max_x or self.min_y > self.max_y:
            raise ValueError(f"inverted rect {self}")

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    def union(self, other: "WorldRect") -> "WorldRect":
        return WorldRect(
            min(self.min_x, other.min_x),
            min(self.min_y, other.min_y),
            max(self.max_x, other.max_x),
            max(self.max_y, other.max_y),
        )

    def expand(self, amount: float) -> "WorldRect":
        return WorldRect(
            self.min_x - amount,
            self.min_y - amount,
            self.max_x + amount,
            self.max_y + amount,
        )

    def intersects(self, other: "WorldRect") -> bool:
        # Closed intersection: touching edges count.
        return (
            self.min_x <= other.max_x
            and other.min_x <= self.max_x
            and self.min_y <= other.max_y
            and other.min_y <= self.max_y
        )

    def contains(self, other: "WorldRect") -> bool:
        return (
            self.min_x <= other.min_x
            and self.min_y <= other.min_y
            and self.max_x >= other.max_x
            and self.max_y >= other.max_y
        )

    def contains_point(self, x: float, y: float) -> bool:
        return self.min_x <= x <= self.max_x and self.min_y <= y <= self.max_y

    def to_json_dict(self) -> dict[str, float]:
        return {
            "minX": self.min_x,
            "minY": self.min_y,
            "maxX": self.max_x,
            "maxY": self.max_y,
        }


def hull_of(rects: list[WorldRect]) -> WorldRect:
    """Axis-aligned hull of a nonempty list of rects."""
    out = rects[0]
    for r in rects[1:]:
        out = out.union(r)
    return out


# ---------------------------------------------------------------------------
# Parsing / validation


def _require(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise SchemaViolation(_join(path, key), "missing required field")
    return obj[key]


def _join(path: str, key: str) -> str:
    return key if not path else f"{path}.{key}"


def _as_string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaViolation(path, f"expected string, got {_type_name(value)}")
    return value


def _as_number(value: Any, path: str) -> float:
    # bool is an int subclass; JSON true/false is never a number here.
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation(path, f"expected number, got {_type_name(value)}")
    if not math.isfinite(value):
        raise SchemaViolation(path, "number must be finite")
    return value


def _as_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaViolation(path, f"expected object, got {_type_name(value)}")
    return value


def _type_name(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    return {dict: "object", list: "array", str: "string"}.get(
        type(value), type(value).__name__
    )


def _extras(obj: dict, known: tuple[str, ...]) -> dict[str, Any]:
    return {k: v for k, v in obj.items() if k not in known}


def _check_finite_tree(value: Any, path: str) -> None:
    """Reject NaN/infinity hiding anywhere, including preserved extras."""
    if isinstance(value, bool):
        return
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise SchemaViolation(path, "number must be finite")
    elif isinstance(value, dict):
        for k, v in value.items():
            _check_finite_tree(v, _join(path, k))
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _check_finite_tree(v, f"{path}[{i}]")


def _parse_point(obj: Any, path: str) -> Point:
    o = _as_object(obj, path)
    return Point(
        x=_as_number(_require(o, "x", path), _join(path, "x")),
        y=_as_number(_require(o, "y", path), _join(path, "y")),
        extra_fields=_extras(o, ("x", "y")),
    )


def _parse_transforms(obj: Any, path: str) -> Transforms:
    o = _as_object(obj, path)
    scale = _as_number(_require(o, "scale", path), _join(path, "scale"))
    if scale <= 0:
        raise InvariantViolation(_join(path, "scale"), "scale must be > 0")
    return Transforms(
        position=_parse_point(_require(o, "position", path), _join(path, "position")),
        scale=scale,
        rotation=_as_number(_require(o, "rotation", path), _join(path, "rotation")),
        extra_fields=_extras(o, ("position", "scale", "rotation")),
    )


def _parse_clipping(obj: Any, path: str) -> Clipping:
    o = _as_object(obj, path)
    source_url = source_title = None
    if "sourceUrl" in o:
        source_url = _as_string(o["sourceUrl"], _join(path, "sourceUrl"))
    if "sourceTitle" in o:
        source_title = _as_string(o["sourceTitle"], _join(path, "sourceTitle"))
    extra = None
    if "extra" in o:
        extra = _as_object(o["extra"], _join(path, "extra"))
    return Clipping(
        source_url=source_url,
        source_title=source_title,
        extra=extra,
        extra_fields=_extras(o, ("sourceUrl", "sourceTitle", "extra")),
    )


def _parse_element(obj: Any, path: str) -> Element:
    o = _as_object(obj, path)
    kind = _as_string(_require(o, "kind", path), _join(path, "kind"))
    if kind not in ELEMENT_KINDS:
        raise SchemaViolation(
            _join(path, "kind"), f"unknown kind {kind!r}; expected one of {ELEMENT_KINDS}"
        )
    width = _as_number(_require(o, "width", path), _join(path, "width"))
    height = _as_number(_require(o, "height", path), _join(path, "height"))
    if width <= 0:
        raise InvariantViolation(_join(path, "width"), "width must be > 0")
    if height <= 0:
        raise InvariantViolation(_join(path, "height"), "height must be > 0")
    text = None
    if "text" in o and o["text"] is not None:
        text = _as_string(o["text"], _join(path, "text"))
    clipping = None
    if "clipping" in o and o["clipping"] is not None:
        clipping = _parse_clipping(o["clipping"], _join(path, "clipping"))
    return Element(
        id=_as_string(_require(o, "id", path), _join(path, "id")),
        kind=kind,
        width=width,
        height=height,
        transforms=_parse_transforms(
            _require(o, "transforms", path), _join(path, "transforms")
        ),
        text=text,
        clipping=clipping,
        extra_fields=_extras(
            o, ("id", "kind", "width", "height", "transforms", "text", "clipping")
        ),
    )


def _parse_settings(obj: Any, path: str) -> Settings:
    o = _as_object(obj, path)
    visibility = _as_string(_require(o, "visibility", path), _join(path, "visibility"))
    if visibility not in VISIBILITIES:
        raise SchemaViolation(
            _join(path, "visibility"),
            f"expected one of {VISIBILITIES}, got {visibility!r}",
        )
    color = _as_string(
        _require(o, "backgroundColor", path), _join(path, "backgroundColor")
    )
    body = color[1:]
    if not color.startswith("#") or len(body) not in (3, 4, 6, 8) or not all(
        c in "0123456789abcdefABCDEF" for c in body
    ):
        raise SchemaViolation(
            _join(path, "backgroundColor"), f"not a hex color: {color!r}"
        )
    return Settings(
        visibility=visibility,
        background_color=color,
        extra_fields=_extras(o, ("visibility", "backgroundColor")),
    )


def parse_document(data: bytes | str) -> Document:
    """Parse and validate a document from UTF-8 JSON.

    Raises MalformedJson / SchemaViolation / InvariantViolation; every error
    names the JSON path it refers to.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedJson("$", f"not UTF-8: {exc}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedJson("$", f"not JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaViolation("$", f"expected object, got {_type_name(raw)}")

    _check_finite_tree(raw, "$")

    key = _as_string(_require(raw, "key", ""), "key")
    if not key:
        raise InvariantViolation("key", "key must be nonempty")
    description = None
    if "description" in raw and raw["description"] is not None:
        description = _as_string(raw["description"], "description")

    elements_raw = _require(raw, "elements", "")
    if not isinstance(elements_raw, list):
        raise SchemaViolation("elements", "expected array")
    elements = tuple(
        _parse_element(e, f"elements[{i}]") for i, e in enumerate(elements_raw)
    )
    seen: dict[str, int] = {}
    for i, e in enumerate(elements):
        if e.id in seen:
            raise InvariantViolation(
                f"elements[{i}].id", f"duplicate element id {e.id!r} (first at elements[{seen[e.id]}])"
            )
        seen[e.id] = i

    return Document(
        title=_as_string(_require(raw, "title", ""), "title"),
        key=key,
        id=_as_string(_require(raw, "id", ""), "id"),
        settings=_parse_settings(_require(raw, "settings", ""), "settings"),
        creator=_as_string(_require(raw, "creator", ""), "creator"),
        elements=elements,
        description=description,
        extra_fields=_extras(
            raw,
            ("title", "description", "key", "id", "settings", "creator", "elements"),
        ),
    )


# ---------------------------------------------------------------------------
# Serialization


def document_to_json_dict(doc: Document) -> dict[str, Any]:
    out: dict[str, Any] = dict(doc.extra_fields)
    out.update(
        title=doc.title,
        key=doc.key,
        id=doc.id,
        creator=doc.creator,
        settings={
            **doc.settings.extra_fields,
            "visibility": doc.settings.visibility,
            "backgroundColor": doc.settings.background_color,
        },
        elements=[_element_to_json_dict(e) for e in doc.elements],
    )
    if doc.description is not None:
        out["description"] = doc.description
    return out


def _element_to_json_dict(e: Element) -> dict[str, Any]:
    transforms: dict[str, Any] = dict(e.transforms.extra_fields)
    transforms.update(
        position={
            **e.transforms.position.extra_fields,
            "x": e.transforms.position.x,
            "y": e.transforms.position.y,
        },
        scale=e.transforms.scale,
        rotation=e.transforms.rotation,
    )
    out: dict[str, Any] = dict(e.extra_fields)
    out.update(id=e.id, kind=e.kind, width=e.width, height=e.height, transforms=transforms)
    if e.text is not None:
        out["text"] = e.text
    if e.clipping is not None:
        clipping: dict[str, Any] = dict(e.clipping.extra_fields)
        if e.clipping.source_url is not None:
            clipping["sourceUrl"] = e.clipping.source_url
        if e.clipping.source_title is not None:
            clipping["sourceTitle"] = e.clipping.source_title
        if e.clipping.extra is not None:
            clipping["extra"] = e.clipping.extra
        out["clipping"] = clipping
    return out


def serialize_document(doc: Document) -> bytes:
    """Canonical UTF-8 JSON bytes for ``doc``; parse(serialize(d)) == d."""
    return canonical_json_bytes(document_to_json_dict(doc))


def document_content_hash(doc: Document) -> str:
    """Hex digest of the canonical document bytes."""
    return sha256_hex(serialize_document(doc))


# ---------------------------------------------------------------------------
# Geometry


def world_bbox(e: Element) -> WorldRect:
    """Axis-aligned hull of the element's transformed local rectangle.

    The local rect (0,0)-(width,height) is scaled, rotated about the local
    origin, then translated to the element's position.
    """
    s = e.transforms.scale
    cos_r = math.cos(e.transforms.rotation)
    sin_r = math.sin(e.transforms.rotation)
    px = e.transforms.position.x
    py = e.transforms.position.y
    xs: list[float] = []
    ys: list[float] = []
    for lx, ly in ((0.0, 0.0), (e.width, 0.0), (e.width, e.height), (0.0, e.height)):
        x = s * lx
        y = s * ly
        xs.append(x * cos_r - y * sin_r + px)
        ys.append(x * sin_r + y * cos_r + py)
    return WorldRect(min(xs), min(ys), max(xs), max(ys))


def characteristic_size(e: Element) -> float:
    """Legibility proxy: scale times the geometric mean of the extents.

    Rotation- and translation-independent, linear in uniform scaling. The
    geometric mean keeps long thin elements (divider lines) from dominating.
    """
    return e.transforms.scale * math.sqrt(e.width * e.height)


def document_bbox(doc: Document) -> WorldRect | None:
    """Hull of all element bboxes; None for an empty document."""
    if not doc.elements:
        return None
    return hull_of([world_bbox(e) for e in doc.elements])


def ffwc_schema() -> dict[str, Any]:
    """The machine-readable JSON Schema for the document format."""
    text = resources.files("muscale").joinpath("data/ffwc.schema.json").read_text("utf-8")
    return json.loads(text)
