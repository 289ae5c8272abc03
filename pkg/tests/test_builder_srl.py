import pytest

from semqg import SemanticGraph, Span, build_srl_graph, parse_annotations, to_json
from semqg.errors import SemqgWarning
from semqg.graph import ARG_TO_VERB, SIMILAR, VERB_TO_MOD, NodeType, add_similarity_links

from conftest import DOCS, golden_bytes
from fixture_table import FIXTURE_NAMES
from oracles import oracle_srl_graph


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_golden_byte_match(name, fixture_docs):
    graph = build_srl_graph(fixture_docs[name])
    assert to_json(graph) == golden_bytes(f"{name}.srl.json")


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_oracle_agrees_with_golden(name, fixture_raw):
    assert oracle_srl_graph(fixture_raw[name]) == golden_bytes(f"{name}.srl.json")


def test_single_tuple_three_nodes_two_edges(fixture_docs):
    g = build_srl_graph(fixture_docs["f01_minimal_tuple"])
    assert len(g.nodes) == 3
    types = {e.type for e in g.edges}
    assert types == {ARG_TO_VERB, VERB_TO_MOD}
    assert len(g.edges) == 2


def test_tuple_without_modifier(fixture_docs):
    g = build_srl_graph(fixture_docs["f02_no_modifier"])
    assert len(g.nodes) == 2
    assert [e.type for e in g.edges] == [ARG_TO_VERB]


def test_shared_argument_links_both_directions(fixture_docs):
    g = build_srl_graph(fixture_docs["f04_shared_argument"])
    by_span = {(n.span.sentence_index, n.span.start, n.span.end): n.id for n in g.nodes}
    first = by_span[(0, 0, 2)]
    second = by_span[(1, 2, 4)]
    sim = {(e.src, e.dst) for e in g.edges if e.type == SIMILAR}
    assert (first, second) in sim and (second, first) in sim


def test_empty_srl_yields_empty_graph_with_warning(fixture_docs):
    doc = fixture_docs["f01_minimal_tuple"]
    import dataclasses

    empty = dataclasses.replace(doc, srl=((),))
    with pytest.warns(SemqgWarning):
        g = build_srl_graph(empty)
    assert g.nodes == () and g.edges == ()


def test_multi_argument_edge_fanout(fixture_docs):
    g = build_srl_graph(fixture_docs["f09_multi_arg"])
    a2v = [e for e in g.edges if e.type == ARG_TO_VERB]
    v2m = [e for e in g.edges if e.type == VERB_TO_MOD]
    assert len(a2v) == 3
    assert len(v2m) == 2


def test_node_count_bounded_by_tuple_elements(fixture_docs):
    for doc in fixture_docs.values():
        total_elements = sum(
            1 + len(t.arguments) + len(t.modifiers) for tuples in doc.srl for t in tuples
        )
        g = build_srl_graph(doc)
        assert len(g.nodes) <= total_elements
        emitted_pairs = sum(
            sum(1 for role, _ in (list(t.arguments) + list(t.modifiers)) if not role.startswith("ARGM"))
            for tuples in doc.srl
            for t in tuples
        )
        # deduplicated pairs can collapse, never grow
        assert len([e for e in g.edges if e.type == ARG_TO_VERB]) <= emitted_pairs


def test_deterministic_bytes(fixture_docs):
    for name, doc in fixture_docs.items():
        raw = (DOCS / f"{name}.json").read_bytes()
        assert to_json(build_srl_graph(parse_annotations(raw))) == to_json(build_srl_graph(doc))


def test_incremental_links_subset_of_closure(fixture_docs):
    for doc in fixture_docs.values():
        g = build_srl_graph(doc)
        incremental = {(e.src, e.dst) for e in g.edges if e.type == SIMILAR}
        closure_graph = add_similarity_links(g, family="srl")
        closure = {(e.src, e.dst) for e in closure_graph.edges if e.type == SIMILAR}
        assert incremental <= closure


def test_closure_strictly_larger_when_order_hides_pairs(fixture_docs):
    # intra-tuple elements are never linked incrementally: "pago pago" and
    # "pago pago international airport" belong to one tuple
    g = build_srl_graph(fixture_docs["f03_airports"])
    incremental = {(e.src, e.dst) for e in g.edges if e.type == SIMILAR}
    closure = {
        (e.src, e.dst)
        for e in add_similarity_links(g, family="srl").edges
        if e.type == SIMILAR
    }
    assert incremental == set()
    assert closure  # the all-pairs closure finds the containment pair


def test_intra_sentence_linking(fixture_docs):
    g = build_srl_graph(fixture_docs["f10_intra_sentence"])
    sim = {(e.src, e.dst) for e in g.edges if e.type == SIMILAR}
    by_span = {(n.span.start, n.span.end): n.id for n in g.nodes}
    town = by_span[(4, 7)]
    hall = by_span[(9, 13)]
    assert (town, hall) in sim and (hall, town) in sim


def test_exact_span_dedup(fixture_docs):
    # "the old mayor" is ARG0 of both tuples: one node, two ARG_TO_VERB edges
    g = build_srl_graph(fixture_docs["f10_intra_sentence"])
    mayors = [n for n in g.nodes if n.span.start == 0 and n.span.end == 3]
    assert len(mayors) == 1
    out = [e for e in g.edges if e.src == mayors[0].id and e.type == ARG_TO_VERB]
    assert len(out) == 2
