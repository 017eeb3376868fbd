import random

import pytest

from conftest import coord, graph_snapshots, make_manifest, make_snapshot

from icmetrics.graph import (
    GraphError,
    UnknownCoordinateError,
    build_graph,
    condensation_depth,
    edges_csv,
    reverse_dependents,
    scc_members,
)
from icmetrics.model import DependencyDecl


# --------------------------------------------------------------------------
# brute-force oracles (shared with the acceptance suite)


def oracle_reachability(nodes, edges):
    """O(n^3) transitive closure."""
    reach = {u: {u} for u in nodes}
    for u, v in edges:
        reach[u].add(v)
    changed = True
    while changed:
        changed = False
        for u in nodes:
            for v in list(reach[u]):
                before = len(reach[u])
                reach[u] |= reach[v]
                changed = changed or len(reach[u]) > before
    return reach


def oracle_same_scc(reach, u, v):
    return v in reach[u] and u in reach[v]


def oracle_scc_members(nodes, reach, u):
    return {v for v in nodes if oracle_same_scc(reach, u, v)}


def oracle_depth(nodes, edges, start, reach=None):
    """Exhaustive enumeration of paths in the condensation."""
    if reach is None:
        reach = oracle_reachability(nodes, edges)
    components = {}
    for u in nodes:
        components[u] = frozenset(oracle_scc_members(nodes, reach, u))
    comp_edges = {}
    for u, v in edges:
        if components[u] != components[v]:
            comp_edges.setdefault(components[u], set()).add(components[v])

    best = 0
    stack = [(components[start], len(components[start]))]
    while stack:
        comp, total = stack.pop()
        best = max(best, total)
        for succ in comp_edges.get(comp, ()):
            stack.append((succ, total + len(succ)))
    return best - 1


def random_edge_map(rng, max_nodes=12, max_density=0.5):
    n = rng.randint(1, max_nodes)
    names = [f"n{i}" for i in range(n)]
    density = rng.uniform(0.0, max_density)
    return {
        u: [v for v in names if v != u and rng.random() < density]
        for u in names
    }


# --------------------------------------------------------------------------
# construction


def test_single_project_no_dependencies():
    graph = build_graph([make_snapshot("p")])
    assert graph.nodes == frozenset({coord("p")})
    assert graph.edges == frozenset()


def test_module_references_and_duplicates_collapse_to_one_edge():
    # m2 is a submodule of p; both modules declare X; m1 also references m2.
    manifests = (
        make_manifest("p", deps=["x", "m2"], submodules=["m2"]),
        make_manifest("m2", deps=["x"]),
    )
    graph = build_graph([make_snapshot("p", manifests=manifests)])
    assert graph.edges == frozenset({(coord("p"), coord("x"))})


def test_external_targets_become_stub_leaves():
    graph = build_graph(graph_snapshots({"p": ["ext"]}))
    ext = coord("ext")
    assert ext in graph.nodes
    assert ext not in graph.corpus_members
    assert graph.out_edges[ext] == frozenset()


def test_scope_filter_defaults_to_test_and_provided():
    deps = (
        DependencyDecl(target=coord("kept")),
        DependencyDecl(target=coord("t"), scope="test"),
        DependencyDecl(target=coord("p2"), scope="provided"),
    )
    graph = build_graph([make_snapshot("p", deps=deps)])
    assert graph.out_edges[coord("p")] == frozenset({coord("kept")})


def test_scope_filter_override():
    deps = (DependencyDecl(target=coord("t"), scope="test"),)
    graph = build_graph([make_snapshot("p", deps=deps)], scope_filter=frozenset())
    assert graph.out_edges[coord("p")] == frozenset({coord("t")})


def test_duplicate_snapshot_coordinate_is_an_error():
    with pytest.raises(GraphError, match="duplicate"):
        build_graph([make_snapshot("p"), make_snapshot("p", version="2.0")])


def test_construction_is_order_independent():
    edge_map = {"a": ["b", "c"], "b": ["c"], "c": ["a"], "d": []}
    snapshots = graph_snapshots(edge_map)
    forward = build_graph(snapshots)
    backward = build_graph(list(reversed(snapshots)))
    assert forward == backward


# --------------------------------------------------------------------------
# queries


def test_mutual_dependency_shares_one_scc():
    graph = build_graph(graph_snapshots({"a": ["b"], "b": ["a"]}))
    assert graph.scc_id[coord("a")] == graph.scc_id[coord("b")]


def test_three_cycle_members():
    graph = build_graph(graph_snapshots({"a": ["b"], "b": ["c"], "c": ["a"]}))
    assert scc_members(graph, coord("a")) == {coord("a"), coord("b"), coord("c")}


def test_acyclic_node_is_a_singleton():
    graph = build_graph(graph_snapshots({"a": ["b"], "b": []}))
    assert scc_members(graph, coord("a")) == {coord("a")}


def test_disjoint_two_cycles_stay_separate():
    graph = build_graph(graph_snapshots({"a": ["b"], "b": ["a"], "c": ["d"], "d": ["c"]}))
    assert scc_members(graph, coord("a")) == {coord("a"), coord("b")}
    assert scc_members(graph, coord("c")) == {coord("c"), coord("d")}


def test_depth_isolated_node_is_zero():
    graph = build_graph(graph_snapshots({"solo": []}))
    assert condensation_depth(graph, coord("solo")) == 0


def test_depth_of_chain_counts_edges():
    graph = build_graph(graph_snapshots({"a": ["b"], "b": ["c"], "c": []}))
    assert condensation_depth(graph, coord("a")) == 2
    assert condensation_depth(graph, coord("b")) == 1
    assert condensation_depth(graph, coord("c")) == 0


def test_depth_of_two_cycle_is_one():
    graph = build_graph(graph_snapshots({"a": ["b"], "b": ["a"]}))
    assert condensation_depth(graph, coord("a")) == 1


def test_depth_cycle_plus_tail():
    graph = build_graph(graph_snapshots({"a": ["b"], "b": ["a", "c"], "c": []}))
    assert condensation_depth(graph, coord("a")) == 2


def test_depth_branching_takes_the_longest_path():
    graph = build_graph(graph_snapshots({"a": ["b", "c"], "b": [], "c": ["d"], "d": []}))
    assert condensation_depth(graph, coord("a")) == 2


def test_reverse_dependents_empty():
    graph = build_graph(graph_snapshots({"p": []}))
    assert reverse_dependents(graph, coord("p")) == frozenset()


def test_reverse_dependents_direct_only():
    graph = build_graph(graph_snapshots({"q": ["p"], "r": ["p"], "s": ["q"], "p": []}))
    assert reverse_dependents(graph, coord("p")) == {coord("q"), coord("r")}


def test_reverse_dependents_dedupes_modules():
    manifests = (
        make_manifest("q", deps=["p"], submodules=["q2"]),
        make_manifest("q2", deps=["p"]),
    )
    snapshots = [make_snapshot("q", manifests=manifests), make_snapshot("p")]
    graph = build_graph(snapshots)
    assert reverse_dependents(graph, coord("p")) == {coord("q")}


@pytest.mark.parametrize("query", [condensation_depth, reverse_dependents, scc_members])
def test_unknown_coordinate_raises(query):
    graph = build_graph([make_snapshot("p")])
    with pytest.raises(UnknownCoordinateError):
        query(graph, coord("ghost"))


def test_edges_csv_is_sorted():
    graph = build_graph(graph_snapshots({"b": ["a"], "a": ["c"]}))
    assert edges_csv(graph) == (
        "org.fixture:a,org.fixture:c\n"
        "org.fixture:b,org.fixture:a\n"
    )


# --------------------------------------------------------------------------
# randomized oracle check (the acceptance suite runs the full 1000 seeds)


def test_random_graphs_match_oracles():
    rng = random.Random(20260810)
    for _ in range(150):
        edge_map = random_edge_map(rng)
        nodes = [coord(n) for n in edge_map]
        edges = [(coord(u), coord(v)) for u, targets in edge_map.items() for v in targets]
        graph = build_graph(graph_snapshots(edge_map))
        reach = oracle_reachability(nodes, edges)
        for u in nodes:
            assert scc_members(graph, u) == oracle_scc_members(nodes, reach, u)
            assert condensation_depth(graph, u) == oracle_depth(nodes, edges, u)
            assert reverse_dependents(graph, u) == {s for s, t in edges if t == u}
            for v in nodes:
                assert (graph.scc_id[u] == graph.scc_id[v]) == oracle_same_scc(reach, u, v)
