"""Diachronic study orchestration.

Selects projects, computes one metric vector per parsed release against a
release-time ecosystem graph, and correlates each project's metric series
(and the pooled point cloud) with its bug-fix series.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .graph import DEFAULT_SCOPE_FILTER, EcosystemGraph, build_graph
from .ingest import Corpus, latest_at_or_before
from .metrics import METRIC_ORDER, compute_vector, vector_value
from .model import MetricVector, ProjectCoordinate, ReleaseSnapshot
from .stats import CorrelationResult, activity_ratio, correlate, median

MIN_RELEASES = 10
MIN_PARSE_RATIO = 0.80

REJECT_MIN_VERSIONS = "min-versions"
REJECT_PARSE_RATIO = "parse-ratio"
REJECT_ZERO_BUGS = "zero-bugs"


@dataclass(frozen=True)
class ReleasePoint:
    version_label: str
    timestamp: int
    bugs_fixed: int
    vector: MetricVector


@dataclass(frozen=True)
class ProjectSeries:
    coordinate: ProjectCoordinate
    releases: tuple[ReleasePoint, ...]
    failed_release_count: int = 0


@dataclass(frozen=True)
class ProjectSummary:
    coordinate: ProjectCoordinate
    n_releases: int
    n_bugs_total: int
    activity: float
    correlations: tuple[CorrelationResult, ...]
    medians: dict[str, float] = field(default_factory=dict)


def select_projects(corpus: Corpus) -> tuple[set[ProjectCoordinate], dict[ProjectCoordinate, str]]:
    """Apply the three study criteria; rejects name the first failing one.

    Criteria, in order: at least MIN_RELEASES releases overall, at least
    MIN_PARSE_RATIO of them parsed, and a non-zero total bug count.
    """
    selected: set[ProjectCoordinate] = set()
    rejected: dict[ProjectCoordinate, str] = {}
    for coordinate in sorted(set(corpus.snapshots) | set(corpus.failed)):
        parsed = corpus.snapshots.get(coordinate, [])
        failed = corpus.failed.get(coordinate, [])
        total = len(parsed) + len(failed)
        if total < MIN_RELEASES:
            rejected[coordinate] = REJECT_MIN_VERSIONS
        elif len(parsed) / total < MIN_PARSE_RATIO:
            rejected[coordinate] = REJECT_PARSE_RATIO
        elif sum(snapshot.bugs_fixed for snapshot in parsed) <= 0:
            rejected[coordinate] = REJECT_ZERO_BUGS
        else:
            selected.add(coordinate)
    return selected, rejected


def graph_snapshots_at(corpus: Corpus, coordinate: ProjectCoordinate,
                       release: ReleaseSnapshot) -> list[ReleaseSnapshot]:
    """Ecosystem state for one release: the release itself plus every other
    project's latest snapshot at or before its timestamp (earliest when
    none precede)."""
    chosen = [release]
    for other, snapshots in sorted(corpus.snapshots.items()):
        if other == coordinate or not snapshots:
            continue
        chosen.append(latest_at_or_before(snapshots, release.timestamp))
    return chosen


def build_series(corpus: Corpus,
                 scope_filter: frozenset[str] | set[str] = DEFAULT_SCOPE_FILTER,
                 workers: int = 1,
                 errors: list[str] | None = None) -> dict[ProjectCoordinate, ProjectSeries]:
    """One ProjectSeries per corpus project, in canonical order.

    Vector computation per release is independent work; results are merged
    in (coordinate, version) order so output does not depend on `workers`.
    """
    jobs = [
        (coordinate, snapshot)
        for coordinate in sorted(corpus.snapshots)
        for snapshot in corpus.snapshots[coordinate]
    ]

    # Releases that resolve to the same ecosystem state share one graph.
    # (coordinate, version_label) identifies a snapshot uniquely, so the key
    # is exact; a duplicate build under concurrency is benign.
    graph_cache: dict[tuple[tuple[str, str], ...], EcosystemGraph] = {}

    def compute(job: tuple[ProjectCoordinate, ReleaseSnapshot]) -> ReleasePoint | str:
        coordinate, snapshot = job
        try:
            chosen = graph_snapshots_at(corpus, coordinate, snapshot)
            key = tuple(sorted((s.coordinate.key(), s.version_label) for s in chosen))
            graph = graph_cache.get(key)
            if graph is None:
                graph = build_graph(chosen, scope_filter)
                graph_cache[key] = graph
            vector = compute_vector(graph, snapshot)
        except Exception as exc:  # recorded, never fatal for the run
            return f"{coordinate.key()}/{snapshot.version_label}: {exc}"
        return ReleasePoint(
            version_label=snapshot.version_label,
            timestamp=snapshot.timestamp,
            bugs_fixed=snapshot.bugs_fixed,
            vector=vector,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(compute, jobs))
    else:
        results = [compute(job) for job in jobs]

    points: dict[ProjectCoordinate, list[ReleasePoint]] = {c: [] for c in corpus.snapshots}
    for (coordinate, _), outcome in zip(jobs, results):
        if isinstance(outcome, str):
            if errors is not None:
                errors.append(outcome)
            continue
        points[coordinate].append(outcome)

    return {
        coordinate: ProjectSeries(
            coordinate=coordinate,
            releases=tuple(sorted(points[coordinate], key=lambda p: (p.timestamp, p.version_label))),
            failed_release_count=len(corpus.failed.get(coordinate, [])),
        )
        for coordinate in sorted(corpus.snapshots)
    }


def correlate_project(series: ProjectSeries) -> list[CorrelationResult]:
    """Per-metric correlation against the project's own bug series.

    A metric missing from any release of the series is skipped entirely.
    """
    if len(series.releases) < 2:
        raise ValueError(
            f"series for {series.coordinate.key()} has {len(series.releases)} releases; need at least 2"
        )
    points = sorted(series.releases, key=lambda p: (p.timestamp, p.version_label))
    bugs = [float(p.bugs_fixed) for p in points]
    results = []
    for name in METRIC_ORDER:
        values = [vector_value(p.vector, name) for p in points]
        if any(v is None for v in values):
            continue
        results.append(correlate(name, [float(v) for v in values], bugs))
    return results


def correlate_pooled(all_series: list[ProjectSeries] | tuple[ProjectSeries, ...]) -> list[CorrelationResult]:
    """One pooled correlation per metric over every project's releases.

    Releases where the metric is absent are skipped point-by-point; a
    metric with no usable points at all is omitted from the result.
    """
    ordered = sorted(all_series, key=lambda s: s.coordinate)
    results = []
    for name in METRIC_ORDER:
        xs: list[float] = []
        ys: list[float] = []
        for series in ordered:
            for point in series.releases:
                value = vector_value(point.vector, name)
                if value is None:
                    continue
                xs.append(float(value))
                ys.append(float(point.bugs_fixed))
        if not xs:
            continue
        results.append(correlate(name, xs, ys))
    return results


def summarize_project(series: ProjectSeries) -> ProjectSummary:
    """Summary row for a selected project: activity plus per-metric medians."""
    n_releases = len(series.releases)
    n_bugs = sum(p.bugs_fixed for p in series.releases)
    medians: dict[str, float] = {}
    for name in METRIC_ORDER:
        values = [float(v) for p in series.releases if (v := vector_value(p.vector, name)) is not None]
        if values:
            medians[name] = median(values)
    return ProjectSummary(
        coordinate=series.coordinate,
        n_releases=n_releases,
        n_bugs_total=n_bugs,
        activity=activity_ratio(n_releases, n_bugs),
        correlations=tuple(correlate_project(series)),
        medians=medians,
    )


def classify_activity(summaries: list[ProjectSummary] | tuple[ProjectSummary, ...],
                      threshold: float) -> tuple[tuple[ProjectSummary, ...], tuple[ProjectSummary, ...]]:
    """Partition summaries by activity: below threshold first, rest second.

    The low-activity set is where metric/bug correlations carry meaning.
    """
    if threshold <= 0:
        raise ValueError(f"activity threshold must be positive, got {threshold}")
    ordered = sorted(summaries, key=lambda s: s.coordinate)
    low = tuple(s for s in ordered if s.activity < threshold)
    rest = tuple(s for s in ordered if s.activity >= threshold)
    return low, rest
