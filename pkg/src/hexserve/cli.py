"""Command-line pipeline: ingest, convert, train, cluster, export."""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import analytics, boost, cluster, export, osm, stops
from .config import ConfigError, PipelineConfig, default_whitelist_text
from .hexgrid import CellIndexError

INPUT_ERRORS = (
    ConfigError,
    CellIndexError,
    osm.OsmParseError,
    osm.WhitelistError,
    stops.SchemaError,
    stops.EmptyDatasetError,
    boost.ModelError,
    analytics.MetricError,
    cluster.ClusterError,
    OSError,
    json.JSONDecodeError,
)


def _load_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    overrides = {}
    for name in (
        "resolution",
        "seed",
        "k_folds",
        "n_clusters",
        "top_k_features",
        "min_stops_per_cell",
    ):
        if getattr(args, name.replace("-", "_"), None) is not None:
            overrides[name] = getattr(args, name)
    if getattr(args, "whitelist", None) is not None:
        overrides["whitelist_path"] = args.whitelist
    fit_overrides = {}
    for name in ("n_stages", "learning_rate", "max_depth", "min_samples_leaf"):
        if getattr(args, name, None) is not None:
            fit_overrides[name] = getattr(args, name)
    if overrides.get("seed") is not None:
        fit_overrides.setdefault("seed", overrides["seed"])
    return cfg.replace(fit=fit_overrides, **overrides)


def _whitelist(config: PipelineConfig) -> osm.TagWhitelist:
    if config.whitelist_path:
        return osm.TagWhitelist.from_file(config.whitelist_path)
    return osm.TagWhitelist.from_lines(io.StringIO(default_whitelist_text()))


def _read_stop_records(path: str) -> list[stops.StopRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        result = stops.parse_stops_csv(fh)
    if result.rejected:
        print(f"warning: rejected {result.rejected} invalid stop rows", file=sys.stderr)
    return result.records


def cmd_ingest_osm(args) -> int:
    config = _load_config(args)
    whitelist = _whitelist(config)
    with open(args.osm_path, "rb") as fh:
        parsed = osm.parse_osm(fh)
    if parsed.skipped_ways:
        print(
            f"warning: skipped {parsed.skipped_ways} ways with missing member nodes",
            file=sys.stderr,
        )
    kept = osm.filter_tags(parsed.objects, whitelist)
    cells = osm.aggregate_counts(kept, config.resolution)
    if not cells:
        print("warning: no whitelisted objects found; wrote an empty file", file=sys.stderr)
    with open(args.output, "w", encoding="utf-8") as fh:
        n_cells = osm.write_cell_features(cells, fh)
    print(
        f"parsed {len(parsed.objects)} tagged objects, kept {len(kept)} after filtering, "
        f"wrote {n_cells} cells to {args.output}"
    )
    return 0


def cmd_convert_lmrrc(args) -> int:
    with open(args.route_json, encoding="utf-8") as rfh, open(
        args.package_json, encoding="utf-8"
    ) as pfh:
        result = stops.convert_lmrrc(rfh, pfh)
    if result.rejected:
        print(f"warning: skipped {result.rejected} stops without coordinates", file=sys.stderr)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        stops.write_stops_csv(result.records, fh)
    print(f"converted {len(result.records)} stops to {args.output}")
    return 0


def cmd_ingest_stops(args) -> int:
    config = _load_config(args)
    records = _read_stop_records(args.stops_csv)
    aggregation = stops.aggregate_stops(records, config.resolution, config.min_stops_per_cell)
    with open(args.output, "w", encoding="utf-8") as fh:
        stops.write_cell_aggregates(aggregation, fh)
    print(
        f"aggregated {len(records)} stops into {len(aggregation.aggregates)} cells "
        f"at resolution {config.resolution}"
    )
    return 0


def _build_dataset(args, config: PipelineConfig):
    records = _read_stop_records(args.stops_csv)
    aggregation = stops.aggregate_stops(records, config.resolution, config.min_stops_per_cell)
    with open(args.features, encoding="utf-8") as fh:
        cell_features = osm.read_cell_features(fh)
    return stops.build_dataset(aggregation, cell_features), aggregation, cell_features


def cmd_train(args) -> int:
    config = _load_config(args)
    dataset, _, _ = _build_dataset(args, config)

    report = analytics.cross_validate(dataset, config.fit, config.k_folds, config.seed)
    model = boost.fit(dataset, config.fit)

    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(boost.model_to_json(model))
        fh.write("\n")
    report_obj = report.to_json_obj()
    report_obj["n_cells"] = len(dataset.cells)
    report_obj["n_features"] = len(dataset.feature_names)
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(report_obj, fh, indent=2, sort_keys=True)
        fh.write("\n")

    print(
        f"trained on {len(dataset.cells)} cells x {len(dataset.feature_names)} features; "
        f"{config.k_folds}-fold mean NLL {report.mean_nll:.4f} (sd {report.sd_nll:.4f}), "
        f"mean R^2 {report.mean_r2:.4f} (sd {report.sd_r2:.4f})"
    )
    return 0


def cmd_cluster(args) -> int:
    config = _load_config(args)
    with open(args.model, encoding="utf-8") as fh:
        model = boost.model_from_json(fh.read())
    dataset, _, cell_features = _build_dataset(args, config)

    importance = boost.feature_importance(model)
    if not importance:
        raise cluster.ClusterError("model has no split gains; cannot rank features")
    significant = cluster.select_significant_features(importance, config.top_k_features)

    vectors = []
    kept_rows = []
    excluded = []
    for row, cell in enumerate(dataset.cells):
        counts = cell_features.get(cell, {})
        vec = np.array([float(counts.get(name, 0)) for name in significant])
        if vec.any():
            if config.normalize_cluster_vectors:
                vec = vec / np.linalg.norm(vec)
            vectors.append(vec)
            kept_rows.append(row)
        else:
            excluded.append(str(cell))

    if len(vectors) < config.n_clusters:
        raise cluster.ClusterError(
            f"only {len(vectors)} cells have significant-tag vectors; "
            f"cannot form {config.n_clusters} clusters"
        )

    assignment = cluster.agglomerate(
        np.vstack(vectors), config.n_clusters, cells=[dataset.cells[r] for r in kept_rows]
    )
    report = cluster.summarize_clusters(assignment, dataset.per_stop_index, np.vstack(vectors))

    doc = {
        "k": config.n_clusters,
        "significant_features": significant,
        "clusters": [
            {
                "label": s.label,
                "size": s.size,
                "medoid_cell": str(s.medoid_cell),
                "n_stops": s.n_stops,
                "median_service_time_s": s.median_service_time_s,
                "mean_service_time_s": s.mean_service_time_s,
            }
            for s in report.per_cluster
        ],
        "t_test": report.test.to_json_obj() if report.test else None,
        "assignment": {str(c): int(lab) for c, lab in zip(assignment.cells, assignment.labels)},
        "excluded_zero_vector_cells": excluded,
    }
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")

    medians = ", ".join(
        f"cluster {s.label}: median {s.median_service_time_s:.1f}s over {s.n_stops} stops"
        for s in report.per_cluster
    )
    print(f"clustered {len(vectors)} cells into {config.n_clusters} ({medians})")
    if report.test:
        print(
            f"log-space pooled t({report.test.df}) = {report.test.t:.2f}, "
            f"two-sided p = {report.test.p_two_sided:.3g}"
        )
    return 0


def cmd_export(args) -> int:
    config = _load_config(args)
    records = _read_stop_records(args.stops_csv)
    aggregation = stops.aggregate_stops(records, config.resolution, config.min_stops_per_cell)
    with open(args.features, encoding="utf-8") as fh:
        cell_features = osm.read_cell_features(fh)

    model = None
    if args.model:
        with open(args.model, encoding="utf-8") as fh:
            model = boost.model_from_json(fh.read())
    cluster_doc = None
    if args.cluster_report:
        with open(args.cluster_report, encoding="utf-8") as fh:
            cluster_doc = json.load(fh)

    collection = export.build_feature_collection(aggregation, cell_features, model, cluster_doc)
    with open(args.output, "w", encoding="utf-8") as fh:
        export.write_geojson(collection, fh)
    print(f"wrote {len(collection['features'])} cell polygons to {args.output}")
    return 0


def _add_config_flags(p: argparse.ArgumentParser, *, fit: bool = False) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--resolution", type=int, help="cell resolution (default 9)")
    p.add_argument("--seed", type=int, help="master random seed")
    p.add_argument("--min-stops-per-cell", dest="min_stops_per_cell", type=int)
    if fit:
        p.add_argument("--k-folds", dest="k_folds", type=int)
        p.add_argument("--n-stages", dest="n_stages", type=int)
        p.add_argument("--learning-rate", dest="learning_rate", type=float)
        p.add_argument("--max-depth", dest="max_depth", type=int)
        p.add_argument("--min-samples-leaf", dest="min_samples_leaf", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexserve",
        description="Micro-region delivery service-time pipeline: "
        "OSM tag features, probabilistic boosting, clustering, map export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-osm", help="count whitelisted OSM tags per cell")
    p.add_argument("osm_path")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--whitelist", help="tag whitelist file (default: packaged list)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_ingest_osm)

    p = sub.add_parser("convert-lmrrc", help="convert routing-challenge JSON to stops CSV")
    p.add_argument("route_json")
    p.add_argument("package_json")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_convert_lmrrc)

    p = sub.add_parser("ingest-stops", help="aggregate stops to cell level")
    p.add_argument("stops_csv")
    p.add_argument("-o", "--output", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_ingest_stops)

    p = sub.add_parser("train", help="cross-validate and fit the service-time model")
    p.add_argument("stops_csv")
    p.add_argument("features")
    p.add_argument("-o", "--output", required=True, help="model JSON path")
    p.add_argument("--report", required=True, help="cross-validation report path")
    _add_config_flags(p, fit=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("cluster", help="cluster cells on significant tags")
    p.add_argument("model")
    p.add_argument("features")
    p.add_argument("stops_csv")
    p.add_argument("-o", "--output", required=True, help="cluster report path")
    p.add_argument("--n-clusters", dest="n_clusters", type=int)
    p.add_argument("--top-k-features", dest="top_k_features", type=int)
    _add_config_flags(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("export", help="export cell polygons and results as GeoJSON")
    p.add_argument("features")
    p.add_argument("stops_csv")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--model", help="model JSON for per-cell predictions")
    p.add_argument("--cluster-report", dest="cluster_report", help="cluster report JSON")
    _add_config_flags(p)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
