"""Maven POM subset parser.

Only the manifest surface needed for graph construction is read: the
project coordinate (with ``<parent>`` fallback), the project-level
``<dependencies>`` block, ``<modules>``, and ``<properties>`` for
``${...}`` interpolation. ``<dependencyManagement>`` and inherited parent
dependencies are deliberately out of scope: resolving them faithfully
requires a full build, while declared direct dependencies are a stable
observable of the file alone.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from .model import DependencyDecl, ProjectCoordinate, ProjectManifest

_PROPERTY_RE = re.compile(r"\$\{([^}]+)\}")
_MAX_INTERPOLATION_ROUNDS = 10


class PomError(ValueError):
    """Base class for all POM parsing failures."""


class PomSyntaxError(PomError):
    """Malformed XML; carries the 1-based line and column of the fault."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class IncompleteCoordinatesError(PomError):
    """groupId/artifactId/version missing and not supplied by a parent."""


class UnresolvedPropertyError(PomError):
    """A ${...} reference has no definition."""

    def __init__(self, key: str):
        super().__init__(f"unresolved property: {key!r}")
        self.key = key


def _local(tag: str) -> str:
    # ElementTree keeps the namespace as a {uri} prefix on every tag.
    return tag.rpartition("}")[2]


def _child(element: ET.Element, name: str) -> ET.Element | None:
    for node in element:
        if _local(node.tag) == name:
            return node
    return None


def _child_text(element: ET.Element | None, name: str) -> str | None:
    if element is None:
        return None
    node = _child(element, name)
    if node is None or node.text is None:
        return None
    text = node.text.strip()
    return text or None


def _interpolate(text: str, properties: dict[str, str]) -> str:
    for _ in range(_MAX_INTERPOLATION_ROUNDS):
        match = _PROPERTY_RE.search(text)
        if match is None:
            return text
        key = match.group(1)
        if key not in properties:
            raise UnresolvedPropertyError(key)
        text = text[: match.start()] + properties[key] + text[match.end() :]
    # Still unresolved after the round cap: either deeply nested or cyclic.
    match = _PROPERTY_RE.search(text)
    raise UnresolvedPropertyError(match.group(1) if match else text)


def parse_pom(xml_text: str) -> ProjectManifest:
    """Parse one pom.xml document into a ProjectManifest.

    Raises PomSyntaxError, IncompleteCoordinatesError or
    UnresolvedPropertyError; never returns a partial manifest.
    """
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise PomSyntaxError(f"malformed XML: {exc.msg.split(':')[0]}", line, column) from exc

    parent = _child(root, "parent")

    properties: dict[str, str] = {}
    props_node = _child(root, "properties")
    if props_node is not None:
        for node in props_node:
            if node.text is not None:
                properties[_local(node.tag)] = node.text.strip()

    group = _child_text(root, "groupId") or _child_text(parent, "groupId")
    artifact = _child_text(root, "artifactId") or _child_text(parent, "artifactId")
    version = _child_text(root, "version") or _child_text(parent, "version")
    if not group or not artifact or not version:
        missing = [
            name
            for name, value in (("groupId", group), ("artifactId", artifact), ("version", version))
            if not value
        ]
        raise IncompleteCoordinatesError(
            f"incomplete coordinates: missing {', '.join(missing)} (own or parent)"
        )

    group = _interpolate(group, properties)
    artifact = _interpolate(artifact, properties)
    version = _interpolate(version, properties)

    properties = dict(properties)
    properties.setdefault("project.groupId", group)
    properties.setdefault("project.artifactId", artifact)
    properties.setdefault("project.version", version)

    dependencies: list[DependencyDecl] = []
    deps_node = _child(root, "dependencies")
    if deps_node is not None:
        for index, node in enumerate(n for n in deps_node if _local(n.tag) == "dependency"):
            dep_group = _child_text(node, "groupId")
            dep_artifact = _child_text(node, "artifactId")
            if not dep_group or not dep_artifact:
                raise IncompleteCoordinatesError(
                    f"incomplete coordinates: dependency #{index} lacks groupId or artifactId"
                )
            dep_version = _child_text(node, "version")
            dep_scope = _child_text(node, "scope")
            dependencies.append(
                DependencyDecl(
                    target=ProjectCoordinate(
                        _interpolate(dep_group, properties),
                        _interpolate(dep_artifact, properties),
                    ),
                    version_text=None if dep_version is None else _interpolate(dep_version, properties),
                    scope=None if dep_scope is None else _interpolate(dep_scope, properties),
                )
            )

    submodules: set[ProjectCoordinate] = set()
    modules_node = _child(root, "modules")
    if modules_node is not None:
        for node in modules_node:
            if _local(node.tag) == "module" and node.text and node.text.strip():
                submodules.add(ProjectCoordinate(group, _interpolate(node.text.strip(), properties)))

    return ProjectManifest(
        coordinate=ProjectCoordinate(group, artifact),
        version_text=version,
        declared_dependencies=tuple(dependencies),
        submodule_coordinates=frozenset(submodules),
    )
