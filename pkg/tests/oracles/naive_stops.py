"""Independent cell aggregation for the fixture stops file.

Reads the CSV by hand, groups by cell, and computes statistics with the
statistics module (exact-fraction mean, its own median), so agreement with
the pipeline is a genuine cross-check rather than shared code.

    python tests/oracles/naive_stops.py tests/fixtures/toy_stops.csv > golden/aggregates.jsonl
"""

import json
import statistics
import sys

from hexserve.hexgrid import GeoPoint, latlng_to_cell


def aggregate(csv_path: str, resolution: int = 9) -> dict[str, dict]:
    groups: dict[str, list[float]] = {}
    with open(csv_path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        idx = {name: i for i, name in enumerate(header)}
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            t = float(parts[idx["service_time_s"]])
            if t <= 0:
                continue
            cell = str(
                latlng_to_cell(
                    GeoPoint(float(parts[idx["lat"]]), float(parts[idx["lng"]])),
                    resolution,
                )
            )
            groups.setdefault(cell, []).append(t)

    out = {}
    for cell in sorted(groups):
        times = groups[cell]
        out[cell] = {
            "cell": cell,
            "n_stops": len(times),
            "mean_s": statistics.mean(times),
            "median_s": statistics.median(times),
        }
    return out


def render(aggregates: dict[str, dict]) -> str:
    return "\n".join(
        json.dumps(aggregates[c], separators=(",", ":")) for c in sorted(aggregates)
    ) + "\n"


if __name__ == "__main__":
    sys.stdout.write(render(aggregate(sys.argv[1])))
