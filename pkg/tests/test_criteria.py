import pytest

from conftest import CORPUS, load
from tiltkit.criteria import (check_all_conditions, check_conditions, check_wd_conditions, corner_bimodule,
                              corner_delete, extremal_kind, findim_probe, is_weakly_directed, triangular_split)
from tiltkit.modules import min_resolution


@pytest.mark.parametrize("name", CORPUS)
def test_condition_forms_agree(name):
    for s in check_all_conditions(load(name)).simples:
        assert s.forms_agree


def test_single_line_witness():
    s = check_conditions(load("ex211"), "x")
    assert s.overall and s.witness_line is not None
    assert s.overall == (s.cond1 and s.cond2 and s.cond3_kernel_form and s.separate_witnesses is not None)


def test_hereditary_algebras_fail():
    # the socle of a projective over a hereditary algebra is reached from the sink
    assert not check_all_conditions(load("a2")).all_pass
    assert not check_all_conditions(load("kronecker")).all_pass
    assert check_all_conditions(load("local3")).all_pass


def test_weakly_directed_order():
    order = is_weakly_directed(load("ex47"))
    assert order.found and order.order == ["x", "y", "z"]
    assert [r.passes for r in check_wd_conditions(load("ex47"))] == [True, True, True]


def test_corner_deletion_keeps_conditions():
    A = load("ex47")
    assert extremal_kind(A, "x") == "minimal" and extremal_kind(A, "z") == "maximal"
    assert extremal_kind(A, "y") is None
    for v in ("x", "z"):
        B = corner_delete(A, v)
        assert B.n_vertices == 2 and v not in B.quiver.vertices
        assert check_all_conditions(B).all_pass


def test_triangular_split_and_corner_bimodule():
    A = load("ex211")
    splits = triangular_split(A)
    assert [(s.e_block, s.f_block) for s in splits] == [(["x"], ["y"])]
    assert triangular_split(load("local3")) == []
    M = corner_bimodule(A, ["x"], ["y"])
    assert M.dim == 1
    assert min_resolution(M, 12).status == "exceeds cutoff"


def test_findim_probe_is_seeded():
    A = load("ex211")
    a = findim_probe(A, dim_bound=3, random_samples=20, cutoff=6, seed=3).to_json()
    b = findim_probe(A, dim_bound=3, random_samples=20, cutoff=6, seed=3).to_json()
    assert a == b
    with pytest.raises(ValueError):
        findim_probe(A, cutoff=0)
