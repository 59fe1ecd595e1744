import pytest

from conftest import CORPUS, load
from tiltkit.modules import (dual_module, hom_modules, injective, min_resolution, projective, radical, simple, socle,
                             structural_parts, trace)


def test_projectives_of_ex211():
    A = load("ex211")
    assert list(projective(A, "x").dims) == [2, 1]
    assert list(projective(A, "y").dims) == [0, 2]


@pytest.mark.parametrize("name", CORPUS)
def test_hom_between_projectives_matches_pieces(name):
    A = load(name)
    for i in range(A.n_vertices):
        for j in range(A.n_vertices):
            assert len(hom_modules(projective(A, i), projective(A, j))) == len(A.pieces[(j, i)])


def test_radical_socle_top():
    A = load("ex211")
    Px = projective(A, "x")
    parts = structural_parts(Px)
    assert list(parts.top.dims) == [1, 0]
    assert list(radical(Px).dims) == [1, 1]
    assert list(socle(Px).dims) == [1, 1]
    assert socle(simple(A, "x")).dim == 1


def test_trace():
    A = load("ex211")
    Px, Py = projective(A, "x"), projective(A, "y")
    assert list(trace(Py, Px).dims) == [0, 1]
    assert trace(Px, Py).dim == 0
    assert trace(Px, Px).dim == Px.dim


@pytest.mark.parametrize("name", CORPUS)
def test_dual_of_projective_is_injective_dims(name):
    A = load(name)
    for v in range(A.n_vertices):
        assert list(dual_module(projective(A.opposite(), v)).dims) == list(injective(A, v).dims)


def test_resolutions():
    A = load("a2")
    r = min_resolution(simple(A, "x"))
    assert r.projective_dimension == 1 and r.terms == [(1, 0), (0, 1)]
    assert min_resolution(projective(A, "x")).projective_dimension == 0
    B = load("ex211")
    assert min_resolution(simple(B, "x"), 8).status == "exceeds cutoff"
    with pytest.raises(ValueError):
        min_resolution(simple(B, "x"), -1)
