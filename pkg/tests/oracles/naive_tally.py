"""Independent per-cell tag tally for the fixture city.

Deliberately naive: DOM parsing instead of streaming, plain dict loops, no
shared code with the package's ingestion path.  Only the point-to-cell
primitive is reused, since cell assignment has its own oracle suite.

Run as a script to (re)generate the committed golden features file:

    python tests/oracles/naive_tally.py tests/fixtures/toy_city.osm > golden/features.jsonl
"""

import json
import sys
from xml.dom import minidom

from hexserve.hexgrid import GeoPoint, latlng_to_cell

WHITELIST_KEYS = {
    "building", "highway", "amenity", "shop", "landuse", "leisure", "office",
    "parking", "public_transport", "railway", "barrier", "traffic_calming",
    "crossing", "tourism", "waterway",
}


def tally(osm_path: str, resolution: int = 9) -> dict[str, dict[str, int]]:
    doc = minidom.parse(osm_path)

    node_pos = {}
    for node in doc.getElementsByTagName("node"):
        node_pos[node.getAttribute("id")] = (
            float(node.getAttribute("lat")),
            float(node.getAttribute("lon")),
        )

    def tags_of(elem):
        out = {}
        for tag in elem.getElementsByTagName("tag"):
            out[tag.getAttribute("k")] = tag.getAttribute("v")
        return out

    placements = []  # (lat, lng, {key: value})
    for node in doc.getElementsByTagName("node"):
        tags = {k: v for k, v in tags_of(node).items() if k in WHITELIST_KEYS}
        if tags:
            lat, lng = node_pos[node.getAttribute("id")]
            placements.append((lat, lng, tags))

    for way in doc.getElementsByTagName("way"):
        tags = {k: v for k, v in tags_of(way).items() if k in WHITELIST_KEYS}
        if not tags:
            continue
        refs = [nd.getAttribute("ref") for nd in way.getElementsByTagName("nd")]
        if len(refs) > 1 and refs[0] == refs[-1]:
            refs = refs[:-1]
        if any(r not in node_pos for r in refs):
            continue  # counted as a skipped way by the pipeline
        lat = sum(node_pos[r][0] for r in refs) / len(refs)
        lng = sum(node_pos[r][1] for r in refs) / len(refs)
        placements.append((lat, lng, tags))

    cells: dict[str, dict[str, int]] = {}
    for lat, lng, tags in placements:
        cell = str(latlng_to_cell(GeoPoint(lat, lng), resolution))
        counts = cells.setdefault(cell, {})
        for k, v in tags.items():
            name = f"{k}={v}"
            counts[name] = counts.get(name, 0) + 1
    return cells


def render(cells: dict[str, dict[str, int]]) -> str:
    lines = []
    for cell in sorted(cells):
        counts = {k: cells[cell][k] for k in sorted(cells[cell])}
        lines.append(json.dumps({"cell": cell, "counts": counts}, separators=(",", ":")))
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    sys.stdout.write(render(tally(sys.argv[1])))
