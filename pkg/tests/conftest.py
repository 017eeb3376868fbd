"""Shared fixture builders for the test suite."""

from __future__ import annotations

from pathlib import Path

from icmetrics.ingest import Corpus, encode_snapshot
from icmetrics.model import (
    ApiSurface,
    DependencyDecl,
    ProjectCoordinate,
    ProjectManifest,
    ReleaseSnapshot,
    UsageRecord,
)

FIXTURE_GROUP = "org.fixture"


def coord(name: str, group: str = FIXTURE_GROUP) -> ProjectCoordinate:
    return ProjectCoordinate(group, name)


def _as_decl(dep) -> DependencyDecl:
    if isinstance(dep, DependencyDecl):
        return dep
    if isinstance(dep, ProjectCoordinate):
        return DependencyDecl(target=dep)
    return DependencyDecl(target=coord(dep))


def make_manifest(name: str, deps=(), version: str = "1.0.0", submodules=(),
                  group: str = FIXTURE_GROUP) -> ProjectManifest:
    return ProjectManifest(
        coordinate=coord(name, group),
        version_text=version,
        declared_dependencies=tuple(_as_decl(d) for d in deps),
        submodule_coordinates=frozenset(coord(s, group) if isinstance(s, str) else s for s in submodules),
    )


def make_snapshot(name: str, deps=(), version: str = "1.0.0", timestamp: int = 0,
                  bugs: int = 0, api_surface: ApiSurface | None = None,
                  usage: UsageRecord | None = None, loc: int | None = None,
                  manifests=None, group: str = FIXTURE_GROUP) -> ReleaseSnapshot:
    if manifests is None:
        manifests = (make_manifest(name, deps, version, group=group),)
    return ReleaseSnapshot(
        coordinate=coord(name, group),
        version_label=version,
        timestamp=timestamp,
        manifests=tuple(manifests),
        api_surface=api_surface,
        usage=usage,
        loc=loc,
        bugs_fixed=bugs,
    )


def graph_snapshots(edge_map: dict[str, list[str]]) -> list[ReleaseSnapshot]:
    """One snapshot per key, depending on the named targets (all corpus members)."""
    return [make_snapshot(name, deps) for name, deps in edge_map.items()]


def make_corpus(projects: dict[str, list[ReleaseSnapshot]],
                failed: dict[str, int] | None = None) -> Corpus:
    """In-memory corpus; `failed` counts unparsable releases per project name."""
    from icmetrics.ingest import FailedRelease

    corpus = Corpus()
    for name, snapshots in projects.items():
        corpus.snapshots[coord(name)] = sorted(snapshots, key=lambda s: (s.timestamp, s.version_label))
        corpus.failed.setdefault(coord(name), [])
    for name, count in (failed or {}).items():
        corpus.snapshots.setdefault(coord(name), [])
        corpus.failed[coord(name)] = [FailedRelease(f"broken-{i}", "no snapshot.json or pom.xml") for i in range(count)]
    return corpus


def write_release(corpus_root: Path, snapshot: ReleaseSnapshot) -> Path:
    release_dir = corpus_root / snapshot.coordinate.key() / snapshot.version_label
    release_dir.mkdir(parents=True)
    (release_dir / "snapshot.json").write_text(encode_snapshot(snapshot), encoding="utf-8")
    return release_dir


def write_failed_release(corpus_root: Path, project_key: str, version: str) -> Path:
    release_dir = corpus_root / project_key / version
    release_dir.mkdir(parents=True)
    return release_dir


def write_history(path: Path, rows: list[tuple[str, str, int, int]]) -> Path:
    lines = ["project,version,timestamp,bugs_fixed"]
    lines += [f"{key},{version},{timestamp},{bugs}" for key, version, timestamp, bugs in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
