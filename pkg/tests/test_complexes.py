import numpy as np
import pytest

from conftest import load
from tiltkit.complexes import (ComplexError, PerfectComplex, complex_direct_sum, cone, euler_pairing,
                               exceptional_witness, hom_dims, hom_K, homology_at, identity_map, is_exceptional,
                               is_indecomposable, iso_K, minimize, stalk, two_term, zero_complex)
from tiltkit.modules import socle


@pytest.fixture
def ex211():
    A = load("ex211")
    X = two_term(A, ["y"], ["x"], {(0, 0): "alpha"})
    return A, stalk(A, ["x"]), stalk(A, ["y"]), X


def test_differential_must_square_to_zero():
    A = load("local3")
    label = A.quiver.arrows[0].label
    D = A.field.zeros((1, 1, A.dim))
    D[0, 0] = A.element(label).coeffs
    with pytest.raises(ComplexError):
        PerfectComplex(A, 0, [[0], [0], [0]], [D, D])  # delta*delta != 0 in k[delta]/delta^3


def test_shift_convention(ex211):
    _, Px, _, X = ex211
    assert X.start == -1 and X.shift(2).start == -3
    assert X.shift(-1).start == 0


def test_two_term_invariants(ex211):
    A, Px, Py, X = ex211
    assert X.is_minimal()
    assert is_exceptional(X) and is_indecomposable(X)
    assert hom_dims(X, X) == {0: 3}
    assert X.appears_at(A.vertex("x")) == [0] and X.appears_at(A.vertex("y")) == [-1]
    assert list(homology_at(X, 0).dims) == [2, 0]
    assert list(homology_at(X, -1).dims) == [0, 1]
    assert socle(homology_at(X, 0)).dim >= 1


def test_hom_between_stalks(ex211):
    _, Px, Py, _ = ex211
    assert hom_K(Py, Px).dim == 1  # right multiplication by alpha
    assert hom_K(Px, Py).dim == 0  # no path y -> x
    assert hom_K(Px, Px).dim == 2


def test_not_exceptional():
    A = load("ex211")
    C = complex_direct_sum([stalk(A, ["x"]), stalk(A, ["y"], -1)])
    assert not is_exceptional(C) and exceptional_witness(C) is not None


def test_minimize_removes_contractible(ex211):
    A, _, Py, X = ex211
    contractible = two_term(A, ["y"], ["y"], {(0, 0): "e_y"})
    assert minimize(contractible)[0].is_zero()
    M, was_minimal = minimize(complex_direct_sum([X, contractible]))
    assert not was_minimal and iso_K(M, X)


def test_iso_and_cone(ex211):
    A, Px, Py, X = ex211
    assert iso_K(X, X) and not iso_K(X, Px)
    assert iso_K(zero_complex(A), minimize(two_term(A, ["x"], ["x"], {(0, 0): "e_x"}))[0])
    f = hom_K(Py, Px).representatives()[0]
    assert f.is_chain_map()
    C = cone(f)
    assert C.start == -1 and iso_K(C, X)


def test_identity_and_homotopy(ex211):
    _, _, _, X = ex211
    idX = identity_map(X)
    H = hom_K(X, X)
    assert idX.is_chain_map() and not H.is_null_homotopic(idX)
    composite = idX.then(idX)
    assert np.array_equal(H.coordinates(composite), H.coordinates(idX))


def test_euler_pairing(ex211):
    _, Px, Py, X = ex211
    for P in (Px, Py, X):
        for Q in (Px, Py, X):
            assert euler_pairing(P, Q) == sum((-1) ** (n % 2) * d for n, d in hom_dims(P, Q).items())


def test_json_round_trip(ex211):
    A, _, _, X = ex211
    Y = PerfectComplex.from_json(A, X.to_json())
    assert Y.to_json() == X.to_json() and iso_K(X, Y)
