from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings

from k3lat.ambient import even_overlattices, orthogonal_complement
from k3lat.forms import (CapExceeded, FiniteQuadraticForm, compare_discriminant_forms, discriminant_group,
                         form_isomorphism, isotropic_subgroups)
from k3lat.isometry import lattices_isomorphic
from k3lat.lattice import (DegenerateLatticeError, LatticeError, ade, direct_sum, divisibility, hyperbolic_u, k3,
                           lattice_from_json, lattice_from_name, make_lattice, rank_one, rescale, signature)
from conftest import even_gram


def test_small_lattices():
    assert make_lattice([[-2]], ["e"]).det == -2
    assert hyperbolic_u().det == -1
    assert make_lattice([[0, 2], [2, 0]]).det == -4
    assert rescale(hyperbolic_u(), 2).gram == ((0, 2), (2, 0))
    assert ade("A1").gram == ((-2,),)


def test_validation_errors():
    with pytest.raises(LatticeError):
        make_lattice([[2, 1], [0, 2]])
    with pytest.raises(LatticeError):
        make_lattice([[1]])
    with pytest.raises(DegenerateLatticeError):
        make_lattice([[0, 0], [0, -2]])
    with pytest.raises(LatticeError):
        make_lattice([[Fraction(1, 2)]])
    with pytest.raises(LatticeError):
        lattice_from_json({"labels": []})
    with pytest.raises(LatticeError):
        ade("E9")
    assert make_lattice([[1]], allow_odd=True).det == 1


def test_k3_lattice():
    lam = k3()
    assert lam.rank == 22 and lam.det == -1 and lam.is_even
    assert signature(lam) == (3, 19)


def test_direct_sum_signature():
    lat = direct_sum([rescale(hyperbolic_u(), 2), hyperbolic_u(), ade("D4"), ade("E8")])
    assert lat.rank == 16 and signature(lat) == (2, 14)


def test_signatures():
    assert signature(ade("A1")) == (0, 1)
    assert signature(hyperbolic_u()) == (1, 1)
    lam = k3()
    h = lam.vector(e1=1, f1=1)
    comp = orthogonal_complement(lam, [h])
    assert comp.rank == 21 and signature(comp) == (2, 19) and comp.det == -2


def test_names_parse_to_the_expected_sums():
    assert lattice_from_name("U(2)+D4").det == -16
    assert lattice_from_name("<-2>+U(3)^2+A2^2").det == -2 * 81 * 9
    assert signature(lattice_from_name("<-2>+U(3)^2+A2^2")) == (2, 7)
    assert lattice_from_name("E8(2)").det == 2 ** 8
    with pytest.raises(LatticeError):
        lattice_from_name("V+D4")


def test_divisibility():
    h_perp = lattice_from_name("<-2>+U^2+E8^2")
    assert divisibility(h_perp, [1] + [0] * 20) == 2
    assert divisibility(h_perp, [0] * 5 + [1] + [0] * 15) == 1
    assert divisibility(hyperbolic_u(), [1, 0]) == 1
    with pytest.raises(LatticeError):
        divisibility(hyperbolic_u(), [0, 0])


def _brute_dual_size(lat):
    """|L^v / L| by counting dual vectors with coordinates in [0, 1)."""
    inv = sympy.Matrix(lat.gram).inv()
    den = int(sympy.ilcm(*[x.q for x in inv]))
    count = 0
    for x in product(range(den), repeat=lat.rank):
        v = sympy.Matrix(x) / den
        if all((sympy.Matrix(lat.gram) * v)[i].is_integer for i in range(lat.rank)):
            count += 1
    return count


def test_discriminant_forms():
    a1 = discriminant_group(ade("A1"))
    assert a1.orders == (2,) and a1.matrix[0][0] == Fraction(3, 2)  # -1/2 mod 2
    assert discriminant_group(ade("E8")).orders == ()
    e6 = discriminant_group(ade("E6"))
    assert e6.orders == (3,)
    # negative definite E6: the generator has q = -4/3 = 2/3 mod 2
    assert sorted(e6.q((k,)) for k in (1, 2)) == [Fraction(2, 3), Fraction(2, 3)]
    for name in ("A3", "D5", "E7", "U(2)+A2"):
        lat = lattice_from_name(name)
        assert discriminant_group(lat).size == abs(lat.det) == _brute_dual_size(lat)


def test_form_isomorphism():
    a = discriminant_group(ade("A1"))
    b = discriminant_group(make_lattice([[-2]]))
    assert compare_discriminant_forms(a, b)
    m = discriminant_group(lattice_from_name("<-4>+U+D5"))
    explicit = FiniteQuadraticForm.diagonal([4, 4], [Fraction(3, 4), Fraction(7, 4)])
    assert compare_discriminant_forms(m, explicit)
    t1 = discriminant_group(lattice_from_name("<-2>+U(3)^2+A2^2"))
    t2 = discriminant_group(lattice_from_name("<-2>+U+U(3)+A2^2"))
    assert not compare_discriminant_forms(t1, t2)
    with pytest.raises(CapExceeded):
        form_isomorphism(t1, t1, cap=100)


def test_form_isomorphism_respects_q():
    q1 = FiniteQuadraticForm.diagonal([2], [Fraction(1, 2)])
    q2 = FiniteQuadraticForm.diagonal([2], [Fraction(3, 2)])
    assert not compare_discriminant_forms(q1, q2)


def test_isometry_verdicts():
    assert lattices_isomorphic(lattice_from_name("U+D4"), lattice_from_name("U+D4")) == "yes"
    assert lattices_isomorphic(hyperbolic_u(), rescale(hyperbolic_u(), 2)) == "no"
    # same determinant and signature, different discriminant forms
    assert lattices_isomorphic(ade("D4"), direct_sum([ade("A1"), ade("A1"), rank_one(-4)])) == "no"
    e8e8 = direct_sum([ade("E8"), ade("E8")])
    assert lattices_isomorphic(e8e8, e8e8) == "unknown"  # rank above the definite search cap


def test_definite_isometry_search_finds_relabelled_basis():
    a = ade("A3")
    b = make_lattice([[-2, 0, 1], [0, -2, 1], [1, 1, -2]])
    assert lattices_isomorphic(a, b) == "yes"
    c = direct_sum([ade("A1")] * 3)
    assert lattices_isomorphic(a, c) == "no"


def test_isotropic_subgroups_of_small_forms():
    assert [s.order for s in isotropic_subgroups(discriminant_group(ade("A1")))] == [1]
    # the only nonzero isotropic class of A1^4 is the sum of all four generators
    subs = isotropic_subgroups(discriminant_group(direct_sum([ade("A1")] * 4)))
    assert sorted(s.order for s in subs) == [1, 2]


@settings(max_examples=200)
@given(even_gram())
def test_glue_identity(lat):
    """|N/M|^2 |A_N| = |A_M| for every even overlattice N of M."""
    a_m = discriminant_group(lat).size
    assert a_m == abs(lat.det)
    for cand in even_overlattices(lat):
        n = cand.result
        assert n.is_even
        assert cand.glue_order ** 2 * discriminant_group(n).size == a_m
        assert abs(int(sympy.Matrix(n.gram).det())) * cand.glue_order ** 2 == a_m


@pytest.mark.parametrize("name", ["A1^4", "A1^6", "A3^2", "U(2)+D4", "<-4>+U+D5", "A2^3+<6>", "U(2)^2"])
def test_glue_identity_on_catalog_lattices(name):
    lat = lattice_from_name(name)
    cands = even_overlattices(lat)
    assert any(c.glue_order > 1 for c in cands)
    for cand in cands:
        assert cand.glue_order ** 2 * discriminant_group(cand.result).size == abs(lat.det)
