"""OSM XML ingestion: tagged objects, whitelist filtering, per-cell counts."""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .hexgrid import CellId, GeoPoint, latlng_to_cell


class OsmParseError(ValueError):
    """Malformed OSM XML; message carries the source line where known."""


class WhitelistError(ValueError):
    pass


@dataclass(frozen=True)
class TaggedObject:
    osm_id: int
    kind: str  # "node" or "way"
    representative_point: GeoPoint
    tags: frozenset[tuple[str, str]]


@dataclass
class ParseResult:
    objects: list[TaggedObject] = field(default_factory=list)
    skipped_ways: int = 0  # ways dropped for referencing missing nodes


@dataclass(frozen=True)
class TagWhitelist:
    """Keys match any value; "key=value" entries match exactly."""

    keys: frozenset[str]
    pairs: frozenset[str]

    def __post_init__(self):
        if not self.keys and not self.pairs:
            raise WhitelistError("whitelist must not be empty")

    def admits(self, key: str, value: str) -> bool:
        return key in self.keys or f"{key}={value}" in self.pairs

    @classmethod
    def from_lines(cls, lines) -> "TagWhitelist":
        keys: set[str] = set()
        pairs: set[str] = set()
        for raw in lines:
            entry = raw.split("#", 1)[0].strip()
            if not entry:
                continue
            target = pairs if "=" in entry else keys
            if entry in keys or entry in pairs:
                raise WhitelistError(f"duplicate whitelist entry: {entry}")
            target.add(entry)
        return cls(frozenset(keys), frozenset(pairs))

    @classmethod
    def from_file(cls, path) -> "TagWhitelist":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)


def parse_osm(stream) -> ParseResult:
    """Single pass over OSM XML yielding tagged nodes and ways.

    Nodes carry their own coordinates; a way is reduced to the arithmetic
    centroid of its member nodes (dropping the conventional closing
    repetition of the first node).  Untagged objects and relations are
    dropped; a way referencing an unknown node is skipped and tallied.
    """
    result = ParseResult()
    node_coords: dict[int, tuple[float, float]] = {}

    try:
        for _, elem in ET.iterparse(stream, events=("end",)):
            if elem.tag == "node":
                osm_id = int(elem.get("id"))
                lat = float(elem.get("lat"))
                lng = float(elem.get("lon"))
                node_coords[osm_id] = (lat, lng)
                tags = _element_tags(elem)
                if tags:
                    result.objects.append(
                        TaggedObject(osm_id, "node", GeoPoint(lat, lng), tags)
                    )
                elem.clear()
            elif elem.tag == "way":
                osm_id = int(elem.get("id"))
                tags = _element_tags(elem)
                refs = [int(nd.get("ref")) for nd in elem.findall("nd")]
                elem.clear()
                if not tags:
                    continue
                if len(refs) > 1 and refs[-1] == refs[0]:
                    refs = refs[:-1]  # closed ring repeats its first node
                if not refs or any(r not in node_coords for r in refs):
                    result.skipped_ways += 1
                    continue
                lat = sum(node_coords[r][0] for r in refs) / len(refs)
                lng = sum(node_coords[r][1] for r in refs) / len(refs)
                result.objects.append(
                    TaggedObject(osm_id, "way", GeoPoint(lat, lng), tags)
                )
            elif elem.tag == "relation":
                elem.clear()
    except ET.ParseError as exc:
        line, column = exc.position
        raise OsmParseError(f"malformed OSM XML at line {line}, column {column}: {exc.msg}") from None
    except (TypeError, ValueError) as exc:
        raise OsmParseError(f"malformed OSM element: {exc}") from None

    return result


def _element_tags(elem) -> frozenset[tuple[str, str]]:
    return frozenset(
        (tag.get("k"), tag.get("v"))
        for tag in elem.findall("tag")
        if tag.get("k") is not None and tag.get("v") is not None
    )


def filter_tags(objects, whitelist: TagWhitelist) -> list[TaggedObject]:
    """Strip non-whitelisted tags; drop objects left with none."""
    out = []
    for obj in objects:
        kept = frozenset((k, v) for k, v in obj.tags if whitelist.admits(k, v))
        if kept:
            out.append(TaggedObject(obj.osm_id, obj.kind, obj.representative_point, kept))
    return out


def aggregate_counts(objects, resolution: int) -> dict[CellId, dict[str, int]]:
    """Count "key=value" features per cell of the object's representative point."""
    cells: dict[CellId, dict[str, int]] = {}
    for obj in objects:
        cell = latlng_to_cell(obj.representative_point, resolution)
        counts = cells.setdefault(cell, {})
        for k, v in sorted(obj.tags):
            name = f"{k}={v}"
            counts[name] = counts.get(name, 0) + 1
    return cells


def write_cell_features(cells: dict[CellId, dict[str, int]], fh) -> int:
    """One JSON line per cell, cells and feature names sorted for stable bytes."""
    n = 0
    for cell in sorted(cells, key=str):
        counts = cells[cell]
        record = {"cell": str(cell), "counts": {k: counts[k] for k in sorted(counts)}}
        fh.write(json.dumps(record, separators=(",", ":")) + "\n")
        n += 1
    return n


def read_cell_features(fh) -> dict[CellId, dict[str, int]]:
    cells: dict[CellId, dict[str, int]] = {}
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            cell = CellId.from_string(record["cell"])
            counts = {str(k): int(v) for k, v in record["counts"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise OsmParseError(f"bad cell-features record on line {lineno}: {exc}") from None
        if any(v <= 0 for v in counts.values()):
            raise OsmParseError(f"non-positive count on line {lineno}")
        cells[cell] = counts
    return cells
