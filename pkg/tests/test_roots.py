from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from k3lat import linalg
from k3lat.ambient import Configuration
from k3lat.forms import discriminant_group, group_structure
from k3lat.lattice import ade, direct_sum, hyperbolic_u, lattice_from_name
from k3lat.roots import (RootSystemError, classify_root_system, enumerate_roots, enumerate_roots_schur,
                         fundamental_weights, index_of_sum, invariant_sublattices, longest_element,
                         positive_root_count, reflection_matrix, simple_roots, standard_base, z2_independence)
from k3lat.casebook import load_configuration

CATALOG = [f"A{n}" for n in range(1, 9)] + [f"D{n}" for n in range(4, 9)] + ["E6", "E7", "E8"]


def _closed_form(kind, n):
    return {"A": n * (n + 1), "D": 2 * n * (n - 1), "E": {6: 72, 7: 126, 8: 240}.get(n)}[kind]


@pytest.mark.parametrize("name", CATALOG)
def test_root_counts_by_two_strategies(name):
    lat = ade(name)
    a, b = enumerate_roots(lat), enumerate_roots_schur(lat)
    assert a == b
    assert len(a) == _closed_form(name[0], int(name[1:])) == 2 * positive_root_count(name[0], int(name[1:]))
    assert all(lat.norm(r) == -2 for r in a)


def test_root_count_of_a_sum():
    lat = lattice_from_name("A3+A1^3")
    assert len(enumerate_roots(lat)) == 18
    assert sorted(simple_roots(lat).types) == ["A1", "A1", "A1", "A3"]


def test_roots_need_a_definite_lattice():
    with pytest.raises(RootSystemError):
        enumerate_roots(hyperbolic_u())


@pytest.mark.parametrize("name", ["A2", "D4", "E7", "D7", "E6"])
def test_classification_recovers_the_type(name):
    base = simple_roots(ade(name))
    assert base.types == [name]
    assert base.rank == ade(name).rank
    assert sorted(map(sorted, base.cartan)) == sorted(map(sorted, [[-x for x in r] for r in ade(name).gram]))


def test_a2_base_pairs_to_one():
    base = simple_roots(ade("A2"))
    assert base.lattice.pair(*base.simple_roots) == 1


def test_base_of_a_sum_has_two_components():
    base = simple_roots(direct_sum([ade("A3"), ade("A1")]))
    assert base.rank == 4 and len(base.components) == 2


@pytest.mark.parametrize("name", CATALOG)
def test_reflections_and_longest_element(name):
    lat = ade(name)
    base = simple_roots(lat)
    g = [list(r) for r in lat.gram]
    for r in base.simple_roots:
        s = reflection_matrix(lat, r)
        st_ = linalg.transpose(s)
        assert linalg.matmul(linalg.matmul(st_, g), s) == g
        assert linalg.matvec(s, r) == [-x for x in r]
        assert linalg.matmul(s, s) == linalg.identity(lat.rank)
    iota = longest_element(base)
    w0 = [[-x for x in row] for row in iota.matrix]
    images = {tuple(linalg.matvec(w0, r)) for r in base.simple_roots}
    assert images == {tuple(-x for x in r) for r in base.simple_roots}
    assert len(iota.word) == positive_root_count(name[0], int(name[1:]))
    assert linalg.matmul(iota.matrix, iota.matrix) == linalg.identity(lat.rank)


def test_involution_on_the_diagram():
    assert longest_element(standard_base(ade("A1"))).is_trivial
    assert longest_element(standard_base(ade("A3"))).permutation == (2, 1, 0)
    assert longest_element(standard_base(ade("E6"))).permutation == (5, 1, 4, 3, 2, 0)
    for name in ("D4", "D6", "E7", "E8"):
        assert longest_element(standard_base(ade(name))).is_trivial
    assert longest_element(standard_base(ade("D5"))).permutation == (0, 1, 2, 4, 3)


def test_fundamental_weights():
    a3 = fundamental_weights(standard_base(ade("A3")))
    assert a3[1] == (Fraction(-1, 2), Fraction(-1), Fraction(-1, 2))
    e7 = fundamental_weights(standard_base(ade("E7")))
    assert e7[6] == tuple(Fraction(-c, 2) for c in (2, 3, 4, 6, 5, 4, 3))


@pytest.mark.parametrize("name", CATALOG)
def test_fundamental_weights_are_dual_to_the_base(name):
    base = standard_base(ade(name))
    lat = base.lattice
    for i, lam in enumerate(fundamental_weights(base)):
        for j, r in enumerate(base.simple_roots):
            assert lat.pair(lam, r) == (1 if i == j else 0)


def _factors(lat):
    return list(group_structure(discriminant_group(lat).orders)) if lat.rank else []


def test_invariant_and_anti_invariant_parts():
    inv, anti = invariant_sublattices(ade("A3"), longest_element(standard_base(ade("A3"))))
    assert anti.rank == 1 and _factors(anti) == [4]
    inv, anti = invariant_sublattices(ade("E6"), longest_element(standard_base(ade("E6"))))
    # Z/3 x (Z/2)^2 in invariant-factor form
    assert anti.rank == 2 and _factors(anti) == [2, 6] == list(group_structure([3, 2, 2]))
    inv, anti = invariant_sublattices(ade("A4"), longest_element(standard_base(ade("A4"))))
    assert inv.rank == 2 and discriminant_group(inv).orders == (2, 2)


def test_index_of_the_sum_of_eigenlattices():
    assert index_of_sum(ade("A1"), longest_element(standard_base(ade("A1")))) == ()
    assert index_of_sum(ade("A2"), longest_element(standard_base(ade("A2")))) == (2,)
    assert index_of_sum(ade("E6"), longest_element(standard_base(ade("E6")))) == (2, 2)


@given(st.sampled_from(CATALOG))
def test_eigenlattices_are_orthogonal_and_span_finite_index(name):
    lat = ade(name)
    iota = longest_element(standard_base(lat))
    inv, anti = invariant_sublattices(lat, iota)
    assert inv.rank + anti.rank == lat.rank
    for a in inv.basis:
        assert iota.apply(a) == tuple(a)
        for b in anti.basis:
            assert lat.pair(a, b) == 0
    for b in anti.basis:
        assert iota.apply(b) == tuple(-x for x in b)
    assert index_of_sum(lat, iota) == (2,) * anti.rank


def test_z2_independence():
    assert z2_independence(load_configuration("quintic-5nodes"))
    assert z2_independence(load_configuration("quartic-bitangents"))
    assert z2_independence(load_configuration("nodal-4"))
    sextic = Configuration.from_json({"degree": 6, "components": [{"degree": 6, "incidences": []}],
                                      "singularities": []})
    assert z2_independence(sextic)


def test_classification_rejects_non_roots():
    lat = ade("A2")
    with pytest.raises(RootSystemError):
        classify_root_system(lat, [(1, 0)])
    with pytest.raises(RootSystemError):
        classify_root_system(lat, [(1, 1), (-1, -1), (2, 0)])
