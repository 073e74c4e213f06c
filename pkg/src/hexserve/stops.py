"""Delivery stop ingestion and the cell-level modeling dataset."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .hexgrid import CellId, CellIndexError, GeoPoint, latlng_to_cell

REQUIRED_COLUMNS = ("route_id", "stop_id", "lat", "lng", "service_time_s")


class SchemaError(ValueError):
    """Input file does not match the expected schema."""


class EmptyDatasetError(ValueError):
    pass


@dataclass(frozen=True)
class StopRecord:
    route_id: str
    stop_id: str
    location: GeoPoint
    service_time_s: float

    def __post_init__(self):
        if not (math.isfinite(self.service_time_s) and self.service_time_s > 0):
            raise SchemaError(f"service time must be positive, got {self.service_time_s}")


@dataclass
class StopsResult:
    records: list[StopRecord] = field(default_factory=list)
    rejected: int = 0  # rows dropped for invalid values (tallied, not fatal)


@dataclass(frozen=True)
class CellAggregate:
    cell: CellId
    n_stops: int
    mean_service_time_s: float
    median_service_time_s: float


@dataclass(frozen=True)
class AggregateResult:
    aggregates: tuple[CellAggregate, ...]
    per_stop_index: dict  # CellId -> tuple of stop service times (sorted)


@dataclass(frozen=True)
class CellDataset:
    """Cells x features design matrix with per-cell mean service time target."""

    feature_names: tuple[str, ...]
    cells: tuple
    X: np.ndarray
    y: np.ndarray
    per_stop_index: dict

    def __post_init__(self):
        if self.X.shape != (len(self.cells), len(self.feature_names)):
            raise SchemaError("design matrix shape does not match cells x features")
        if np.any(self.y <= 0):
            raise SchemaError("all cell targets must be positive")


def parse_stops_csv(stream) -> StopsResult:
    """Read the canonical stops CSV; bad rows are rejected and tallied."""
    reader = csv.DictReader(stream)
    header = reader.fieldnames or []
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"stops CSV missing columns: {', '.join(missing)}")

    result = StopsResult()
    for row in reader:
        try:
            record = StopRecord(
                route_id=row["route_id"],
                stop_id=row["stop_id"],
                location=GeoPoint(float(row["lat"]), float(row["lng"])),
                service_time_s=float(row["service_time_s"]),
            )
        except (TypeError, ValueError, SchemaError, CellIndexError):
            result.rejected += 1
            continue
        result.records.append(record)
    return result


def write_stops_csv(records, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(REQUIRED_COLUMNS)
    for r in records:
        writer.writerow(
            [r.route_id, r.stop_id, repr(r.location.lat), repr(r.location.lng), repr(r.service_time_s)]
        )


def convert_lmrrc(route_json_stream, package_json_stream) -> StopsResult:
    """Adapt the routing-challenge JSON pair to stop records.

    Per stop, the service time is the sum of its packages' planned service
    times; stops with a zero total or no usable coordinates are skipped.
    """
    try:
        routes = json.load(route_json_stream)
        packages = json.load(package_json_stream)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed challenge JSON: {exc}") from None
    if not isinstance(routes, dict) or not isinstance(packages, dict):
        raise SchemaError("challenge JSON must map route ids to route objects")

    result = StopsResult()
    for route_id in sorted(routes):
        stops = routes[route_id].get("stops", {})
        route_packages = packages.get(route_id, {})
        for stop_id in sorted(stops):
            info = stops[stop_id]
            total = 0.0
            for package in route_packages.get(stop_id, {}).values():
                t = package.get("planned_service_time_seconds", 0.0)
                if t:
                    total += float(t)
            if total <= 0.0:
                continue
            lat, lng = info.get("lat"), info.get("lng")
            if lat is None or lng is None:
                result.rejected += 1
                continue
            try:
                location = GeoPoint(float(lat), float(lng))
            except (ValueError, CellIndexError):
                result.rejected += 1
                continue
            result.records.append(StopRecord(route_id, stop_id, location, total))
    return result


def aggregate_stops(stops, resolution: int, min_stops: int = 1) -> AggregateResult:
    """Mean/median service time per occupied cell.

    Per-cell stop lists are sorted before any reduction so results do not
    depend on input order; the per-stop index is retained for cluster-level
    statistics downstream.
    """
    if not stops:
        raise EmptyDatasetError("no stop records to aggregate")
    by_cell: dict[CellId, list[float]] = {}
    for stop in stops:
        cell = latlng_to_cell(stop.location, resolution)
        by_cell.setdefault(cell, []).append(stop.service_time_s)

    aggregates = []
    index = {}
    for cell in sorted(by_cell, key=str):
        times = tuple(sorted(by_cell[cell]))
        if len(times) < min_stops:
            continue
        index[cell] = times
        aggregates.append(
            CellAggregate(
                cell=cell,
                n_stops=len(times),
                mean_service_time_s=sum(times) / len(times),
                median_service_time_s=float(np.median(times)),
            )
        )
    return AggregateResult(tuple(aggregates), index)


def write_cell_aggregates(result: AggregateResult, fh) -> None:
    for agg in result.aggregates:
        record = {
            "cell": str(agg.cell),
            "n_stops": agg.n_stops,
            "mean_s": agg.mean_service_time_s,
            "median_s": agg.median_service_time_s,
        }
        fh.write(json.dumps(record, separators=(",", ":")) + "\n")


def build_dataset(aggregation: AggregateResult, cell_features: dict) -> CellDataset:
    """Join cell aggregates with tag-count features.

    Rows are the aggregated cells; the feature axis is the sorted union of
    every feature name observed in the feature map.  Cells with stops but no
    mapped features keep an all-zero row.
    """
    if not aggregation.aggregates:
        raise EmptyDatasetError("cannot build a dataset from zero cells")

    names = sorted({name for counts in cell_features.values() for name in counts})
    col = {name: i for i, name in enumerate(names)}

    cells = tuple(agg.cell for agg in aggregation.aggregates)
    X = np.zeros((len(cells), len(names)), dtype=np.float64)
    y = np.empty(len(cells), dtype=np.float64)
    for row, agg in enumerate(aggregation.aggregates):
        y[row] = agg.mean_service_time_s
        for name, count in cell_features.get(agg.cell, {}).items():
            X[row, col[name]] = count

    return CellDataset(
        feature_names=tuple(names),
        cells=cells,
        X=X,
        y=y,
        per_stop_index=dict(aggregation.per_stop_index),
    )
