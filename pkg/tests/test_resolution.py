import pytest

from k3lat.lattice import LatticeError, ade
from k3lat.resolution import CurveGerm, ade_germ, blowup_step, initial_state, resolve, branch_curve_count
from k3lat.roots import longest_element, standard_base

TYPES = [("A", n) for n in range(1, 20)] + [("D", n) for n in range(4, 20)] + [("E", n) for n in (6, 7, 8)]


def test_normal_forms():
    assert str(ade_germ("A", 1)) in ("x^2 + y^2", "y^2 + x^2")
    assert ade_germ("D", 4).as_dict == ade_germ("D4").as_dict
    assert set(ade_germ("D", 4).as_dict) == {(2, 1), (0, 3)}  # y(x^2 + y^2)
    assert set(ade_germ("E", 8).as_dict) == {(3, 0), (0, 5)}
    with pytest.raises(LatticeError):
        ade_germ("E", 9)
    with pytest.raises(LatticeError):
        ade_germ("D", 3)


def test_double_point_blowup_leaves_exceptional_curve_out_of_branch_locus():
    st = initial_state(ade_germ("A", 1), 1)
    blowup_step(st)
    assert len(st.curves) == 1 and not st.curves[0].branch
    assert len(st.worklist) == 2  # the strict transform meets E in two points
    while st.worklist:
        blowup_step(st)
    assert len(st.curves) == 1 and st.curves[0].strict_contacts == [1, 1]


def test_triple_point_blowup_adds_exceptional_curve_to_branch_locus():
    st = initial_state(ade_germ("D", 4), 4)
    blowup_step(st)
    assert st.curves[0].branch


def test_smooth_germ_is_untouched():
    st = initial_state(CurveGerm((((1, 0), 1), ((0, 2), 1))), 1)
    blowup_step(st)
    assert not st.curves and not st.worklist and st.steps == 0


@pytest.mark.parametrize("kind,n", TYPES)
def test_resolution_graph_and_branch_count(kind, n):
    res = resolve(kind, n)
    assert res.cartan_matches
    assert len(res.dual_graph.self_ints) == n
    assert all(x == -2 for x in res.dual_graph.self_ints)
    assert res.m == branch_curve_count(kind, n)
    # the involution from the double cover agrees with -w0 computed from the root system
    if n <= 12:
        perm = longest_element(standard_base(ade(f"{kind}{n}"))).permutation
        assert res.iota_permutation == perm


def test_branch_counts_of_exceptional_types():
    assert [resolve("E", n).m for n in (6, 7, 8)] == [1, 3, 4]
    assert [resolve("D", n).m for n in (4, 5, 6, 7)] == [1, 1, 2, 2]
    assert resolve("E7").iota == "identity"
    assert resolve("A", 5).iota == "flip"
    assert resolve("A", 1).iota == "identity"


def test_output_formats():
    res = resolve("D", 7)
    data = res.to_json()
    assert data["m"] == 2 and data["iota"] == "flip"
    assert len(data["dual_graph"]["nodes"]) == 7 and len(data["dual_graph"]["edges"]) == 6
    dot = res.dual_graph.to_dot("D7")
    assert dot.startswith('graph "D7" {') and dot.count("--") == 6
