"""Interaction-complexity metrics for dependency-manifest ecosystems."""

from .graph import EcosystemGraph, build_graph, condensation_depth, reverse_dependents, scc_members
from .ingest import (
    Corpus,
    ReleaseHistoryRow,
    count_loc,
    encode_snapshot,
    load_corpus,
    load_release_history,
    parse_snapshot_json,
)
from .metrics import ic_cbo, ic_dit, ic_lcom1, ic_noc, ic_rfc, ic_wmc, compute_vector
from .model import (
    ApiSurface,
    DependencyDecl,
    MetricVector,
    ProjectCoordinate,
    ProjectManifest,
    ReleaseSnapshot,
    UsageRecord,
    validate_snapshot,
)
from .pom import parse_pom
from .pipeline import (
    ProjectSeries,
    ProjectSummary,
    build_series,
    classify_activity,
    correlate_pooled,
    correlate_project,
    select_projects,
)
from .stats import CorrelationResult, activity_ratio, median, p_two_tailed, pearson_r
from .synth import synth_ecosystem

__version__ = "0.1.0"
