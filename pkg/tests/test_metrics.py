import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import coord, graph_snapshots, make_manifest, make_snapshot

from icmetrics.graph import GraphError, build_graph
from icmetrics.metrics import (
    compute_vector,
    ic_cbo,
    ic_dit,
    ic_lcom1,
    ic_noc,
    ic_rfc,
    ic_wmc,
)
from icmetrics.model import ApiSurface, UsageRecord


class TestWmc:
    def test_zero_dependency_project(self):
        graph = build_graph([make_snapshot("p")])
        assert ic_wmc(graph, coord("p")) == 0

    def test_modules_dedupe(self):
        manifests = (
            make_manifest("p", deps=["x"], submodules=["m2"]),
            make_manifest("m2", deps=["x", "y"]),
        )
        graph = build_graph([make_snapshot("p", manifests=manifests)])
        assert ic_wmc(graph, coord("p")) == 2

    def test_counts_corpus_members_and_stubs_alike(self):
        graph = build_graph(graph_snapshots({"p": ["inside", "outside"], "inside": []}))
        assert ic_wmc(graph, coord("p")) == 2

    def test_non_corpus_project_rejected(self):
        graph = build_graph(graph_snapshots({"p": ["stub"]}))
        with pytest.raises(GraphError):
            ic_wmc(graph, coord("stub"))


class TestDit:
    def test_isolated(self):
        graph = build_graph([make_snapshot("p")])
        assert ic_dit(graph, coord("p")) == 0

    def test_branching(self):
        graph = build_graph(graph_snapshots({"a": ["b", "c"], "b": [], "c": ["d"], "d": []}))
        assert ic_dit(graph, coord("a")) == 2

    def test_cycle_with_tail(self):
        graph = build_graph(graph_snapshots({"a": ["b"], "b": ["a", "c"], "c": []}))
        assert ic_dit(graph, coord("a")) == 2

    def test_stub_contributes_one_level(self):
        graph = build_graph(graph_snapshots({"p": ["ext"]}))
        assert ic_dit(graph, coord("p")) == 1


class TestNoc:
    def test_leaf(self):
        graph = build_graph([make_snapshot("p")])
        assert ic_noc(graph, coord("p")) == 0

    def test_direct_dependents_only(self):
        graph = build_graph(graph_snapshots({"q": ["p"], "r": ["p"], "s": ["q"], "p": []}))
        assert ic_noc(graph, coord("p")) == 2

    def test_multi_module_dependent_counts_once(self):
        manifests = (
            make_manifest("q", deps=["p"], submodules=["q2"]),
            make_manifest("q2", deps=["p"]),
        )
        graph = build_graph([make_snapshot("q", manifests=manifests), make_snapshot("p")])
        assert ic_noc(graph, coord("p")) == 1

    def test_stub_can_be_queried(self):
        graph = build_graph(graph_snapshots({"p": ["ext"], "q": ["ext"]}))
        assert ic_noc(graph, coord("ext")) == 2


class TestCbo:
    def test_acyclic_is_zero(self):
        graph = build_graph(graph_snapshots({"a": ["b"], "b": []}))
        assert ic_cbo(graph, coord("a")) == 0

    def test_two_cycle(self):
        graph = build_graph(graph_snapshots({"a": ["b"], "b": ["a"]}))
        assert ic_cbo(graph, coord("a")) == 1

    def test_three_cycle(self):
        graph = build_graph(graph_snapshots({"a": ["b"], "b": ["c"], "c": ["a"]}))
        assert ic_cbo(graph, coord("a")) == 2


class TestRfc:
    def test_empty_surface(self):
        assert ic_rfc(ApiSurface({})) == 0

    def test_union_of_methods_and_callees(self):
        surface = ApiSurface({"f": frozenset({"x", "y"}), "g": frozenset({"y", "z"})})
        assert ic_rfc(surface) == 5

    def test_self_call_absorbed(self):
        assert ic_rfc(ApiSurface({"f": frozenset({"f"})})) == 1

    @settings(max_examples=100, deadline=None)
    @given(
        st.dictionaries(st.text(min_size=1, max_size=6), st.frozensets(st.text(min_size=1, max_size=6), max_size=4), max_size=5),
        st.text(min_size=1, max_size=6),
        st.text(min_size=1, max_size=6),
    )
    def test_adding_a_callee_never_decreases(self, methods, method, callee):
        before = ic_rfc(ApiSurface(methods))
        grown = dict(methods)
        grown[method] = grown.get(method, frozenset()) | {callee}
        assert ic_rfc(ApiSurface(grown)) >= before


class TestLcom1:
    def test_all_referenced(self):
        deps = {coord("a"), coord("b")}
        assert ic_lcom1(deps, UsageRecord(frozenset(deps))) == 0

    def test_set_difference(self):
        deps = {coord("a"), coord("b"), coord("c")}
        assert ic_lcom1(deps, UsageRecord(frozenset({coord("a")}))) == 2

    def test_undeclared_reference_ignored(self):
        deps = {coord("a")}
        usage = UsageRecord(frozenset({coord("a"), coord("d")}))
        assert ic_lcom1(deps, usage) == 0

    @settings(max_examples=100, deadline=None)
    @given(
        st.frozensets(st.integers(0, 20), max_size=10),
        st.frozensets(st.integers(0, 20), max_size=10),
    )
    def test_bounded_by_declared_count(self, declared_ids, used_ids):
        declared = {coord(f"d{i}") for i in declared_ids}
        usage = UsageRecord(frozenset(coord(f"d{i}") for i in used_ids))
        value = ic_lcom1(declared, usage)
        assert 0 <= value <= len(declared)
        if not (usage.referenced_coordinates & declared):
            assert value == len(declared)


class TestComputeVector:
    def test_optionals_absent_without_inputs(self):
        graph = build_graph([make_snapshot("p")])
        vector = compute_vector(graph, make_snapshot("p"))
        assert (vector.wmc, vector.dit, vector.noc, vector.cbo) == (0, 0, 0, 0)
        assert vector.rfc is None
        assert vector.lcom1 is None
        assert vector.loc is None

    def test_full_snapshot_matches_individual_ops(self):
        surface = ApiSurface({"f": frozenset({"x", "y"}), "g": frozenset({"y", "z"})})
        usage = UsageRecord(frozenset({coord("b")}))
        snapshot = make_snapshot("a", deps=["b", "ext"], api_surface=surface, usage=usage, loc=123)
        graph = build_graph([snapshot, make_snapshot("b", deps=["a"])])
        vector = compute_vector(graph, snapshot)
        assert vector.wmc == ic_wmc(graph, coord("a")) == 2
        assert vector.dit == ic_dit(graph, coord("a")) == 2
        assert vector.noc == ic_noc(graph, coord("a")) == 1
        assert vector.cbo == ic_cbo(graph, coord("a")) == 1
        assert vector.rfc == 5
        assert vector.lcom1 == 1  # ext declared but unused
        assert vector.loc == 123

    def test_repeated_calls_identical(self):
        snapshot = make_snapshot("p", deps=["q"])
        graph = build_graph([snapshot, make_snapshot("q")])
        assert compute_vector(graph, snapshot) == compute_vector(graph, snapshot)


# --------------------------------------------------------------------------
# structural properties


def _random_edge_map(rng, acyclic=False):
    n = rng.randint(1, 10)
    names = [f"n{i}" for i in range(n)]
    density = rng.uniform(0.0, 0.5)
    if acyclic:
        return {
            names[i]: [names[j] for j in range(i + 1, n) if rng.random() < density]
            for i in range(n)
        }
    return {u: [v for v in names if v != u and rng.random() < density] for u in names}


def test_cbo_is_zero_on_every_random_dag():
    rng = random.Random(11)
    for _ in range(100):
        graph = build_graph(graph_snapshots(_random_edge_map(rng, acyclic=True)))
        for member in graph.corpus_members:
            assert ic_cbo(graph, member) == 0


def test_wmc_zero_iff_dit_zero():
    rng = random.Random(12)
    for _ in range(100):
        graph = build_graph(graph_snapshots(_random_edge_map(rng)))
        for member in graph.corpus_members:
            assert (ic_wmc(graph, member) == 0) == (ic_dit(graph, member) == 0)


def test_handshake_identity():
    rng = random.Random(13)
    for _ in range(100):
        edge_map = _random_edge_map(rng)
        edge_map["p"] = ["outside0", "outside1"]  # force some stubs
        graph = build_graph(graph_snapshots(edge_map))
        noc_total = sum(ic_noc(graph, member) for member in graph.corpus_members)
        stub_in_edges = sum(
            1 for _, target in graph.edges if target not in graph.corpus_members
        )
        assert noc_total + stub_in_edges == len(graph.edges)
