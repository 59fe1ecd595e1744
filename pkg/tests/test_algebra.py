from fractions import Fraction

import numpy as np
import pytest

from conftest import load
from tiltkit import linalg
from tiltkit.algebra import (AdmissibilityError, NilpotencyCapError, PresentationError, TensorFamilySpec,
                             build_tensor_family, cartan_coxeter, parse_algebra, presentation_text)
from tiltkit.field import Field, FieldError

# -- field ------------------------------------------------------------------------------


@pytest.mark.parametrize("text, p", [("F:101", 101), ("F 7", 7), ("13", 13), ("Q", None)])
def test_field_parse(text, p):
    assert Field.parse(text).p == p


@pytest.mark.parametrize("bad", ["F:2", "F:9", "R", "F:"])
def test_field_rejects(bad):
    with pytest.raises(FieldError):
        Field.parse(bad)


def test_field_inverse_and_json():
    F = Field(7)
    assert all((F.inv(x) * x) % 7 == 1 for x in range(1, 7))
    Q = Field(None)
    assert Q.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert Q.from_json(Q.to_json(Fraction(-5, 4))) == Fraction(-5, 4)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


# -- linear algebra ---------------------------------------------------------------------

@pytest.mark.parametrize("F", [Field(101), Field(None)])
def test_rank_nullspace_solve(F):
    M = F.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert linalg.rank(M, F) == 2
    N = linalg.nullspace(M, F)
    assert N.shape == (3, 1)
    assert not np.any(F.matmul(M, N) != 0)
    b = F.matmul(M, F.array([[1], [1], [0]])).reshape(-1)
    x = linalg.solve(M, b, F)
    assert np.array_equal(F.matmul(M, x.reshape(-1, 1)).reshape(-1), b)
    assert linalg.solve(M, F.array([1, 0, 0]), F) is None


def test_subspace_operations():
    F = Field(101)
    U = F.array([[1, 0], [0, 1], [0, 0]])
    W = F.array([[0, 0], [1, 0], [0, 1]])
    assert linalg.intersect(U, W, F).shape[1] == 1
    assert linalg.complement(U, F).shape[1] == 1
    assert linalg.contains(U, U[:, :1], F) and not linalg.contains(U, W, F)
    M = F.array([[2, 1], [1, 1]])
    assert np.array_equal(F.matmul(M, linalg.inverse(M, F)), F.eye(2))


# -- presentations ----------------------------------------------------------------------

CORPUS_DIMS = {"ex211": 5, "ex45": 9, "ex47": 13, "kronecker": 4, "a2": 3, "local3": 3}


@pytest.mark.parametrize("name, dim", CORPUS_DIMS.items())
def test_corpus_dimensions(name, dim):
    A = load(name)
    assert A.dim == dim
    assert int(A.piece_dims().sum()) == dim
    assert A.opposite().dim == dim


def test_ex211_pieces():
    A = load("ex211")
    labels = A.to_json()["pieces"]
    assert labels["x->y"] == ["alpha"]
    assert labels["y->x"] == []
    assert sorted(labels["x->x"]) == ["delta", "e_x"]


def test_paths_compose_right_to_left():
    A = load("ex211")
    # alpha*delta is a relation: first delta, then alpha
    assert (A.element("alpha") * A.element("delta")).is_zero()
    assert A.element("alpha") * A.idempotent("x") == A.element("alpha")
    assert (A.idempotent("x") * A.element("alpha")).is_zero()
    assert A.idempotent("y") * A.element("alpha") == A.element("alpha")


def test_field_override_rational():
    A = parse_algebra(presentation_text(load("ex47")), field=Field(None))
    assert A.dim == 13 and A.field.is_rational


def test_one_vertex_no_arrows():
    A = parse_algebra("vertex v\n")
    assert A.dim == 1 and A.nilpotency_index == 1


@pytest.mark.parametrize("text, line", [
    ("vertex x\nvertex x\n", 2),
    ("vertex x\narrow a x y\n", 2),
    ("vertex x\nbogus\n", 2),
    ("vertex x\nvertex y\narrow a x y\nrel a +\n", 4),
    ("field F 4\nvertex x\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(PresentationError) as err:
        parse_algebra(text)
    assert err.value.line == line


def test_non_admissible_rejected():
    with pytest.raises(AdmissibilityError):
        parse_algebra("vertex x\nvertex y\narrow a x y\nrel a\n")
    with pytest.raises(NilpotencyCapError):
        parse_algebra("vertex x\narrow d x x\n", cap=50)


def test_presentation_round_trip():
    for name in CORPUS_DIMS:
        A = load(name)
        B = parse_algebra(presentation_text(A))
        assert B.dim == A.dim and B.relation_strings() == A.relation_strings()


def test_tensor_family_example():
    spec = TensorFamilySpec(["x", "y", "z"], [("alpha", "x", "y"), ("beta", "y", "z")],
                            {"x": 3, "y": 3, "z": 3}, {"alpha": 2, "beta": 2}, ["beta*alpha"],
                            {"x": "delta", "y": "rho", "z": "theta"})
    A = build_tensor_family(spec)
    assert A.dim == 13
    with pytest.raises(ValueError):
        build_tensor_family(TensorFamilySpec(["x", "y"], [("a", "x", "y"), ("b", "y", "x")],
                                             {"x": 2, "y": 2}, {"a": 1, "b": 1}))


def test_cartan_coxeter():
    c = cartan_coxeter(load("a2"))
    assert c.cartan == [[1, 0], [1, 1]]
    assert c.charpoly == [1, 1, 1]
    assert cartan_coxeter(load("kronecker")).charpoly_string() == "λ**2 - 2*λ + 1"
