"""GeoJSON map export: one closed polygon feature per modeled cell."""

from __future__ import annotations

import json

from . import hexgrid
from .boost import BoostModel
from .stops import AggregateResult


def _ring(cell: hexgrid.CellId) -> list[list[float]]:
    boundary = hexgrid.cell_boundary(cell)
    ring = [[v.lng, v.lat] for v in boundary.vertices]
    ring.append(ring[0])  # GeoJSON rings repeat the first position
    return ring


def _top_tags(counts: dict[str, int], limit: int = 5) -> list[str]:
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [f"{name}:{n}" for name, n in ranked[:limit]]


def build_feature_collection(
    aggregation: AggregateResult,
    cell_features: dict,
    model: BoostModel | None = None,
    cluster_doc: dict | None = None,
) -> dict:
    """Assemble the FeatureCollection for every aggregated cell.

    Cluster labels and medoid flags come from a cluster report document when
    provided; cells excluded from clustering carry a null label.
    """
    assignment = {}
    medoids = set()
    if cluster_doc is not None:
        assignment = dict(cluster_doc.get("assignment", {}))
        medoids = {c["medoid_cell"] for c in cluster_doc.get("clusters", [])}
        feature_order = cluster_doc.get("significant_features")
    else:
        feature_order = None

    names = tuple(model.feature_names) if model is not None else ()
    features = []
    for agg in aggregation.aggregates:
        cell_hex = str(agg.cell)
        counts = cell_features.get(agg.cell, {})
        props = {
            "cell": cell_hex,
            "n_stops": agg.n_stops,
            "mean_service_time_s": agg.mean_service_time_s,
            "median_service_time_s": agg.median_service_time_s,
            "top_tags": _top_tags(counts),
        }
        if model is not None:
            x = [float(counts.get(name, 0)) for name in names]
            params = model.predict_params(x)
            props["predicted_mu_log_s"] = params.mu
            props["predicted_sigma_log_s"] = params.sigma
            props["predicted_mean_s"] = params.mean_seconds()
        if cluster_doc is not None:
            label = assignment.get(cell_hex)
            props["cluster"] = label
            props["medoid"] = cell_hex in medoids
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [_ring(agg.cell)]},
                "properties": props,
            }
        )

    collection = {"type": "FeatureCollection", "features": features}
    if feature_order:
        collection["properties"] = {"significant_features": feature_order}
    return collection


def write_geojson(collection: dict, fh) -> None:
    json.dump(collection, fh, separators=(",", ":"), sort_keys=True)
    fh.write("\n")
