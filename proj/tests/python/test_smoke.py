"""Smoke tests for the python bindings; the heavy verification lives in the
C++ suites, this just proves the module round-trips real computations."""

import json
import os

import pytest

import cft3m

DATA_DIR = os.environ.get(
    "CFT3M_DATA_DIR",
    os.path.join(os.path.dirname(__file__), "..", "..", "data"),
)


def test_smith_normal_form():
    u, d, v = cft3m.smith_normal_form([[2, 0], [0, 3]])
    assert d == [[1, 0], [0, 6]]
    # unimodular transforms recoverable on the python side
    assert cft3m.lattice_contains([[1, 0], [0, 6]], [0, 6])


def test_group_from_relations_and_orders():
    group, _ = cft3m.group_from_relations(2, [[4, 0], [0, 6], [2, 3]])
    assert group.invariant_factors == [12]
    assert group.order() == 12

    zmod, proj = cft3m.abelian_group_from_moduli([4, 6])
    coords = [sum(row[j] * [2, 3][j] for j in range(2)) for row in proj]
    assert cft3m.element_order(zmod, coords) == 2
    assert cft3m.element_order(cft3m.FinGenAbGroup(1, []), [1]) is None


def test_big_integers_survive_the_boundary():
    n = 10**24
    u, d, v = cft3m.smith_normal_form([[n]])
    assert d == [[n]]
    assert cft3m.element_order(cft3m.FinGenAbGroup(0, [n]), [1]) == n


def test_local_invariants():
    assert len(cft3m.enumerate_subgroups(6)) == 12  # sigma(6)
    e, f = cft3m.local_invariants([[2, 0], [1, 1]])
    assert (e, f) == (2, 1)
    assert cft3m.unramified_cover_of_degree(3) == [[1, 0], [0, 3]]
    assert cft3m.deck_group([[1, 0], [0, 4]]).invariant_factors == [4]


def test_hopf_splitting():
    ctx = cft3m.LinkContext(
        ["K1", "K2", "K3"], [[0, 1, 1], [1, 0, 0], [1, 0, 0]]
    )
    assert cft3m.validate(ctx) is None
    spec = cft3m.standard_covering(ctx, ["K1", "K2"], [2, 2])
    assert spec.group.invariant_factors == [2, 2]

    s = cft3m.splitting_data(ctx, spec, "K3")
    assert (s["e"], s["f"], s["r"], s["n"]) == (1, 2, 2, 4)
    assert cft3m.splitting_degree_via_linking([1, 0], [2, 2]) == 2
    assert not cft3m.is_completely_decomposed(ctx, spec, "K3")
    assert cft3m.verify_efr(ctx, spec)["pass"]


def test_ideles_and_reciprocity():
    ctx = cft3m.LinkContext(["K1", "K2"], [[0, 1], [1, 0]])
    assert cft3m.is_principal(ctx, [(0, 1), (-1, 0)])
    unit, principal = cft3m.split_unit_principal(ctx, [(3, 1), (0, 0)])
    assert unit == [(3, 0), (1, 0)]
    assert principal == [(0, 1), (-1, 0)]
    assert cft3m.unit_principal_cokernel(ctx).is_trivial()

    spec = cft3m.standard_covering(ctx, ["K1", "K2"], [2, 2])
    assert cft3m.reciprocity(ctx, spec, [(1, 0), (0, 0)]) == [1, 0]
    report = cft3m.verify_reciprocity_iso(ctx, spec)
    assert report["pass"]
    assert report["lhs_factors"] == [2, 2]


def test_admissible_closure_saturates_entangled_images():
    ctx = cft3m.LinkContext(["K1", "K2"], [[0, 0], [0, 0]])
    spec = cft3m.covering_from_moduli(ctx, ["K1", "K2"], [2], [[1], [1]])
    assert not cft3m.verify_reciprocity_iso(ctx, spec)["pass"]
    closed = cft3m.admissible_closure(ctx, spec)
    assert len(closed) > 2
    assert cft3m.verify_reciprocity_iso(closed, spec)["pass"]


def test_link_file_loading():
    ctx, spec = cft3m.load_link_file(os.path.join(DATA_DIR, "hopf.json"))
    assert ctx.knots == ["K1", "K2", "K3"]
    assert spec is not None and spec.is_standard
    assert cft3m.branch_knots(ctx, spec) == ["K1", "K2"]
    assert cft3m.idele_class_quotient(ctx, spec).invariant_factors == [2, 2]

    with pytest.raises(cft3m.Error):
        cft3m.parse_link_json('{"knots": ["K1"], "linking": [[1]]}')


def test_selftest_stream():
    failures, stream = cft3m.selftest_json(seed=42, cases=5)
    assert failures == 0
    lines = [line for line in stream.splitlines() if line]
    assert len(lines) == 5
    for line in lines:
        assert json.loads(line)["pass"] is True
