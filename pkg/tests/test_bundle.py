import pytest

from gkmlegs.bundle import (
    BundleError,
    CongruenceViolation,
    DegenerateFiber,
    GenerationFailed,
    InvalidMorphism,
    LegBundle,
    TransportInferenceError,
    TransportNotInverse,
    build_leg_bundle,
    fiber,
    infer_transport,
    is_face,
    projection_morphism,
    projectivize,
    pullback,
    random_leg_bundle,
    section_morphism,
    tautological,
)
from gkmlegs.corpus import (
    cp2_base,
    cp2_sheared,
    cp2_tangent,
    edge_rank3,
    square_base,
    triangle_rank2_twisted,
)
from gkmlegs.graph import GraphMorphism, identity_morphism
from gkmlegs.labeled import is_gkm, validate_connection, validate_labeled_morphism, validate_labels

TANGENT_FIBERS = {"p": [(1, 0), (0, 1)], "q": [(0, -1), (1, -1)], "r": [(-1, 0), (-1, 1)]}


def test_cp2_tangent_bundle():
    xi = cp2_tangent()
    assert xi.rank == 2
    g = xi.total.graph
    assert all(g.valence(p) == 4 for p in g.vertices)
    assert xi.total.labels[("q", "l:q:2")] == (1, -1)
    assert xi.transport[("p", "e2")] == (1, 0)
    # restricted labels and connection agree with the base
    for flag, lab in xi.base.labels.items():
        assert xi.total.labels[flag] == lab
    for flag, table in xi.base.connection.items():
        assert {e: xi.total.connection[flag][e] for e in table} == table


def test_transport_is_inferred_uniquely():
    assert infer_transport(cp2_base(), TANGENT_FIBERS) == dict(cp2_tangent().transport)


def test_ambiguous_transport_inference():
    fibers = {v: [(1, 0), (2, 0)] for v in "pqr"}
    with pytest.raises(TransportInferenceError):
        infer_transport(cp2_base(), fibers)


def test_product_bundle_has_zero_coefficients():
    fibers = {v: [(1, 2), (3, -1), (0, 5)] for v in "pqr"}
    transport = {flag: (0, 1, 2) for flag in cp2_base().graph.compact_flags()}
    xi = build_leg_bundle(cp2_base(), fibers, transport)
    legs = [(p, e, e2) for (p, e, e2) in xi.report.coefficients if e2.startswith("l:")]
    assert legs and all(xi.report.coefficients[k] == 0 for k in legs)


def test_identity_transport_along_e2_fails():
    transport = dict(cp2_tangent().transport)
    transport[("p", "e2")] = (0, 1)
    transport[("q", "e2")] = (0, 1)
    with pytest.raises(CongruenceViolation) as info:
        build_leg_bundle(cp2_base(), TANGENT_FIBERS, transport)
    assert info.value.flag[1] == "e2"
    assert not info.value.witness.is_zero()


def test_transport_not_inverse():
    transport = dict(cp2_tangent().transport)
    transport[("q", "e2")] = (0, 1)
    with pytest.raises(TransportNotInverse):
        build_leg_bundle(cp2_base(), TANGENT_FIBERS, transport)


def test_fiber_size_mismatch():
    fibers = dict(TANGENT_FIBERS, r=[(1, 0)])
    with pytest.raises(BundleError):
        build_leg_bundle(cp2_base(), fibers, cp2_tangent().transport)


def test_random_bundles_are_deterministic_and_valid():
    a = random_leg_bundle(cp2_base(), 2, 7)
    b = random_leg_bundle(cp2_base(), 2, 7)
    assert a == b
    assert validate_labels(a.total).ok
    line = random_leg_bundle(square_base(), 1, 3)
    assert line.rank == 1
    empty = random_leg_bundle(cp2_base(), 0, 1)
    assert empty.rank == 0 and empty.total == cp2_base()


def test_generation_failure_is_bounded():
    with pytest.raises(GenerationFailed):
        random_leg_bundle(cp2_base(), 5, 0, weight_bound=1, max_tries=3)


def test_projectivization_of_cp2_tangent():
    P = projectivize(cp2_tangent())
    g = P.total.graph
    assert len(g.vertices) == 6
    kinds = list(P.classification.values())
    assert kinds.count("vertical") == 3 and kinds.count("horizontal") == 6
    assert all(g.valence(v) == 3 for v in g.vertices)
    assert is_gkm(P.total)[0]
    assert P.total.labels[("l:p:1", "e:p:1:2")] == (1, -1)
    assert P.total.labels[("l:p:1", "e:e2:1:2")] == (0, 1)
    assert g.edges["e:e2:1:2"] == ("l:p:1", "l:q:2")


def test_vertical_connection_on_single_edge():
    P = projectivize(edge_rank3())
    table = P.total.connection[("l:p:1", "e:p:1:3")]
    assert table["e:p:1:2"] == "e:p:2:3"
    assert table["e:f:1:1"] == "e:f:3:3"
    assert is_gkm(P.total)[0]


def test_horizontal_connection_twisted_triangle():
    P = projectivize(triangle_rank2_twisted())
    table = P.total.connection[("l:p:1", "e:f:1:1")]
    assert table == {"e:p:1:2": "e:r:1:2", "e:f:1:1": "e:f:1:1", "e:g:1:2": "e:h:1:1"}


@pytest.mark.parametrize("make", [cp2_tangent, cp2_sheared, edge_rank3, triangle_rank2_twisted])
def test_projectivization_invariants(make):
    xi = make()
    P = projectivize(xi)
    m = xi.base.graph.valence(xi.base.graph.vertices[0])
    for v in xi.total.graph.vertices:
        assert xi.total.graph.valence(v) == m + xi.rank
    for v in P.total.graph.vertices:
        assert P.total.graph.valence(v) == m + xi.rank - 1
    assert validate_connection(P.total.graph, P.total.connection).ok
    assert validate_labels(P.total).ok
    assert validate_labeled_morphism(P.projection, P.total, xi.base).ok
    # horizontal edges pair legs through the leg transport in both directions
    for e, kind in P.classification.items():
        if kind == "horizontal":
            a, b = P.total.graph.edges[e]
            (p, i), (q, j) = P.vertex_fiber[a], P.vertex_fiber[b]
            f = P.projection.edge_map[e][1]
            assert xi.transport[(p, f)][i] == j and xi.transport[(q, f)][j] == i


def test_fibers_are_complete_faces():
    for xi in (cp2_tangent(), edge_rank3()):
        P = projectivize(xi)
        for p in xi.base.graph.vertices:
            F = fiber(P, p)
            n = xi.rank
            assert len(F.graph.vertices) == n
            assert len(F.graph.edges) == n * (n - 1) // 2
            assert is_face(P.total, F.graph)
    F = fiber(projectivize(cp2_tangent()), "p")
    assert F.labels[("l:p:1", "e:p:1:2")] == (1, -1)
    assert F.labels[("l:p:2", "e:p:1:2")] == (-1, 1)


def test_rank_one_projectivization_is_base():
    xi = random_leg_bundle(cp2_base(), 1, 4)
    P = projectivize(xi)
    assert P.total == cp2_base()
    F = fiber(P, "q")
    assert F.graph.vertices == ("q",) and not F.graph.edges


def test_repeated_leg_labels_rejected():
    fibers = {v: [(1, 0), (1, 0)] for v in "pqr"}
    transport = {flag: (0, 1) for flag in cp2_base().graph.compact_flags()}
    xi = build_leg_bundle(cp2_base(), fibers, transport)
    with pytest.raises(DegenerateFiber):
        projectivize(xi)


def test_tautological_labels():
    P = projectivize(cp2_tangent())
    gamma = tautological(P)
    expected = {
        "l:p:1": (1, 0),
        "l:p:2": (0, 1),
        "l:q:1": (0, -1),
        "l:q:2": (1, -1),
        "l:r:1": (-1, 0),
        "l:r:2": (-1, 1),
    }
    assert {v: gamma.fibers[v][0] for v in expected} == expected
    assert validate_labels(gamma.total).ok


def test_tautological_of_line_bundle_reproduces_labels():
    xi = random_leg_bundle(square_base(), 1, 9)
    gamma = tautological(projectivize(xi))
    assert dict(gamma.fibers) == dict(xi.fibers)


def test_pullback_to_projectivization():
    P = projectivize(cp2_tangent())
    pulled = pullback(cp2_sheared(), P)
    assert pulled.fibers["l:q:1"] == ((0, -2), (1, -1))
    assert pulled.fibers["l:q:2"] == ((0, -2), (1, -1))
    # vertical edges collapse: legs go across by the identity bijection
    assert pulled.transport[("l:q:1", "e:q:1:2")] == (0, 1)
    assert validate_labels(pulled.total).ok


def test_pullback_with_nontrivial_bijection():
    xi = cp2_tangent()
    P = projectivize(xi)
    psi = {"l:p:2": (1, 0)}
    pulled = pullback(xi, P, psi=psi)
    assert pulled.fibers["l:p:2"] == ((0, 1), (1, 0))
    # case of a collapsed edge: psi_u^-1 after psi_v
    assert pulled.transport[("l:p:1", "e:p:1:2")] == (1, 0)
    assert validate_labels(pulled.total).ok


def test_pullback_along_identity():
    xi = cp2_tangent()
    back = pullback(xi, identity_morphism(xi.base.graph), xi.base)
    assert back == xi


def test_pullback_rejects_bad_morphism():
    xi = cp2_tangent()
    base = xi.base
    f = GraphMorphism(
        base.graph,
        base.graph,
        {"p": "p", "q": "r", "r": "q"},
        {"e1": ("edge", "e2"), "e2": ("edge", "e1"), "e3": ("edge", "e3")},
    )
    with pytest.raises(InvalidMorphism):
        pullback(xi, f, base)
    with pytest.raises(InvalidMorphism):
        pullback(xi, identity_morphism(xi.total.graph), xi.total)


def test_projection_and_section_are_labeled_morphisms():
    xi = cp2_tangent()
    assert validate_labeled_morphism(projection_morphism(xi), xi.total, xi.base).ok
    assert validate_labeled_morphism(section_morphism(xi), xi.base, xi.total).ok


def test_bundle_json_round_trip_and_infer():
    xi = cp2_tangent()
    doc = xi.to_json()
    assert LegBundle.from_json(doc) == xi
    doc["transport"] = "infer"
    assert LegBundle.from_json(doc) == xi
