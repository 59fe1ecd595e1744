import pytest

from conftest import load
from tiltkit.complexes import complex_direct_sum, is_exceptional, iso_K, stalk, two_term
from tiltkit.search import (SearchBounds, SearchError, conclusions_report, endo_algebra, enumerate_exceptional,
                            enumerate_tilting, generates, indecomposable_summands, is_gap_free, k0_class,
                            normalize_shift, presentations_match, resolution_complex, summand_components)


@pytest.mark.parametrize("kw", [dict(max_mult=0), dict(depth=0), dict(max_length=0), dict(max_summands=0),
                                dict(global_cap=0), dict(sweep=-1)])
def test_bounds_validation(kw):
    with pytest.raises(SearchError):
        SearchBounds(**kw)


def test_helpers():
    A = load("ex211")
    X = two_term(A, ["y"], ["x"], {(0, 0): "alpha"}, start=3)
    assert k0_class(X) == (1, -1)  # P_x in even degree 4, P_y in odd degree 3
    assert normalize_shift(X).end == 0
    T = complex_direct_sum([X, stalk(A, ["x"], 4)])
    assert sorted(len(C.terms) for C in summand_components(T)) == [1, 2]
    parts, all_indec = indecomposable_summands(T)
    assert len(parts) == 2 and all_indec
    assert is_gap_free(X)
    assert not is_gap_free(complex_direct_sum([stalk(A, ["x"]), stalk(A, ["y"], 2)]))


def test_resolution_complex():
    A = load("ex211")
    R = resolution_complex(A, "y", 3)
    assert R.describe() == "[-3] P_y -> [-2] P_y -> [-1] P_y -> [0] P_y"


def test_generation_tiers():
    A = load("ex211")
    assert generates(stalk(A, ["x", "y"])).generates
    v = generates(stalk(A, ["x"]))
    assert v.kind == "NotGenerating" and v.tier == "K0"
    X = two_term(A, ["y"], ["x"], {(0, 0): "alpha"})
    assert generates(complex_direct_sum([X, stalk(A, ["y"], -1)])).generates


def test_truncation_flag():
    ex = enumerate_exceptional(load("ex211"), SearchBounds(global_cap=3))
    assert ex.truncated
    full = enumerate_exceptional(load("ex211"))
    assert not full.truncated and len(full) == 3


def test_enumeration_is_deterministic():
    A = load("kronecker")
    a = [C.to_json() for C in enumerate_exceptional(A, SearchBounds(max_mult=3, seed=5))]
    b = [C.to_json() for C in enumerate_exceptional(A, SearchBounds(max_mult=3, seed=5))]
    assert a == b


def test_outputs_are_exceptional_and_normalized(searches):
    for C in searches.exceptional("ex211"):
        assert is_exceptional(C) and C.is_minimal()
        assert C.start == -(C.support_length() - 1)


def test_a2_tilting(searches):
    til = searches.tilting("a2")
    assert len(til) == 3 and all(v.generates for v in til.verdicts)
    for T in til:
        assert endo_algebra(T).dim == 3


def test_endo_of_regular_stalk_is_the_algebra():
    A = load("ex47")
    E = endo_algebra(stalk(A, ["x", "y", "z"]))
    assert E.dim == A.dim
    assert sorted(map(sorted, E.piece_dims())) == sorted(map(sorted, A.piece_dims().tolist()))


def test_presentations_match_opposites(searches):
    objs = list(searches.tilting("kronecker", max_mult=3))
    E = [endo_algebra(T) for T in objs]
    # every endomorphism algebra is a Kronecker algebra
    assert all(presentations_match(E[0], e) is not None or presentations_match(E[0], e, opposite=True) is not None
               for e in E)


def test_local_and_vacuous_conclusions():
    rep = conclusions_report(load("a2"))
    assert rep.to_json()["vacuous"] and rep.all_pass
    assert iso_K(normalize_shift(enumerate_tilting(load("local3"))[0]), stalk(load("local3"), ["x"]))


def test_endo_presents_the_opposite_of_end():
    # End(A)^op = A: on x -> y the presented quiver keeps the arrow's direction
    A = load("a2")
    E = endo_algebra(complex_direct_sum([stalk(A, ["x"]), stalk(A, ["y"])], ["x", "y"]))
    assert E.vertex_labels == ["x", "y"]
    assert [(a.source, a.target) for a in E.quiver.arrows] == [(0, 1)]
