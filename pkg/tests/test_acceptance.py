"""Acceptance checks, one group per criterion (1-10).

Each test is tagged ``criterion(n)``; the end of the pytest run prints one
PASS/FAIL line per criterion (a criterion passes when all of its checks do).
Run on its own with ``python3 tests/test_acceptance.py``.

The property-suite criterion (10) lives in ``test_properties.py``.
"""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

from conftest import load
from tiltkit import cli
from tiltkit.algebra import cartan_coxeter, opposite_algebra
from tiltkit.complexes import complex_direct_sum, iso_K, stalk, two_term
from tiltkit.criteria import check_all_conditions, check_wd_conditions, findim_probe
from tiltkit.modules import min_resolution, simple
from tiltkit.search import endo_algebra, normalize_shift, presentations_match

crit = pytest.mark.criterion


# -- the objects of the two-vertex example, built by hand ----------------------------

def ex211_objects():
    A = load("ex211")
    Px, Py = stalk(A, ["x"]), stalk(A, ["y"])
    X = two_term(A, ["y"], ["x"], {(0, 0): "alpha"}, start=0)  # P_y in degree 0, P_x in degree 1
    T1 = complex_direct_sum([Px, Py])
    T2 = complex_direct_sum([stalk(A, ["x"], 1), X])  # P_x[-1] + X
    T3 = complex_direct_sum([Py, X])
    return A, {"Px": Px, "Py": Py, "X": X, "T1": T1, "T2": T2, "T3": T3}


def match_up_to_shift(found, expected: dict) -> dict:
    """Bijection found[k] -> expected name via iso_K of shift-normalized minimal forms."""
    assignment = {}
    for k, C in enumerate(found):
        names = [n for n, E in expected.items() if iso_K(normalize_shift(C), normalize_shift(E))]
        assert len(names) == 1, f"{C.describe()} matches {names}"
        assignment[names[0]] = k
    return assignment


def tilting_by_name(searches):
    _, objs = ex211_objects()
    til = searches.tilting("ex211")
    expected = {n: objs[n] for n in ("T1", "T2", "T3")}
    return {n: til.objects[k] for n, k in match_up_to_shift(til.objects, expected).items()}


# -- criterion 1 ------------------------------------------------------------------------

@crit(1)
def test_ex211_exceptional_classification(searches):
    ex = searches.exceptional("ex211", max_length=3, max_mult=2)
    assert not ex.truncated
    assert len(ex) == 3
    _, objs = ex211_objects()
    assignment = match_up_to_shift(ex.objects, {n: objs[n] for n in ("Px", "Py", "X")})
    assert set(assignment) == {"Px", "Py", "X"}


# -- criterion 2 ------------------------------------------------------------------------

@crit(2)
def test_ex211_tilting_classification(searches):
    til = searches.tilting("ex211")
    assert not til.truncated
    assert len(til) == 3
    _, objs = ex211_objects()
    assignment = match_up_to_shift(til.objects, {n: objs[n] for n in ("T1", "T2", "T3")})
    assert set(assignment) == {"T1", "T2", "T3"}
    assert all(v.generates for v in til.verdicts)


@crit(2)
def test_cli_lists_three_tilting_complexes():
    code, report = cli.run(["enumerate-tilting", "--algebra", "ex211", "--out", "/dev/null"])
    assert code == 0
    assert report["result"]["count"] == 3


# -- criterion 3 ------------------------------------------------------------------------

def b_quiver_roles(E):
    """For a two-vertex quiver with one loop and a pair of opposite arrows, return
    arrow indices (delta, alpha, beta): the loop, the arrow into the loop vertex,
    and the arrow out of it.  ``None`` if the shape is different."""
    arrows = E.quiver.arrows
    loops = [k for k, a in enumerate(arrows) if a.source == a.target]
    if E.quiver.n_vertices != 2 or len(arrows) != 3 or len(loops) != 1:
        return None
    d = loops[0]
    y = arrows[d].source
    into = [k for k, a in enumerate(arrows) if a.source != y and a.target == y]
    out = [k for k, a in enumerate(arrows) if a.source == y and a.target != y]
    if len(into) != 1 or len(out) != 1:
        return None
    return d, into[0], out[0]


def words(roles, texts):
    """Translate products written in (delta, alpha, beta) letters into arrow-index words."""
    d, a, b = roles
    letter = {"d": d, "a": a, "b": b}
    return [[letter[c] for c in t] for t in texts]


# the relations of the example's algebra "B", read right to left
B_RELATIONS = ("bab", "dd", "da", "bd")
# the same with the length-three relation written the other way round
C_RELATIONS = ("aba", "dd", "da", "bd")


@crit(3)
def test_endo_of_projective_tilting_is_the_algebra(searches):
    A = load("ex211")
    E1 = endo_algebra(tilting_by_name(searches)["T1"])
    assert E1.dim == 5
    counts_A = [[0, 0], [0, 0]]
    for a in A.quiver.arrows:
        counts_A[a.source][a.target] += 1
    counts = E1.arrow_counts()
    assert any(all(counts[i][j] == counts_A[p[i]][p[j]] for i in range(2) for j in range(2))
               for p in ((0, 1), (1, 0)))


@crit(3)
def test_endo_T2_has_the_stated_relations(searches):
    """Literal check: End(T2) on the B-quiver with beta*alpha*beta, delta^2, delta*alpha,
    beta*delta all vanishing."""
    E2 = endo_algebra(tilting_by_name(searches)["T2"])
    roles = b_quiver_roles(E2)
    assert roles is not None, "B-quiver shape"
    assert E2.dim == 8
    lift = E2.find_vanishing_lift(words(roles, B_RELATIONS))
    assert lift is not None, "no choice of arrows kills beta*alpha*beta, delta^2, delta*alpha, beta*delta"


@crit(3)
def test_endo_T3_is_opposite_of_endo_T2(searches):
    T = tilting_by_name(searches)
    E2, E3 = endo_algebra(T["T2"]), endo_algebra(T["T3"])
    assert presentations_match(E3, E2, opposite=True) is not None
    # same comparison through the opposite algebra of the presented quotient
    op = opposite_algebra(E2.presentation.algebra)
    B3 = E3.presentation.algebra
    assert op.dim == B3.dim
    D_op, D3 = op.piece_dims().tolist(), B3.piece_dims().tolist()
    assert any(all(D_op[i][j] == D3[p[i]][p[j]] for i in range(2) for j in range(2)) for p in ((0, 1), (1, 0)))


def test_endo_relations_with_labels_exchanged(searches):
    """The two endomorphism algebras carry the stated relation sets with the
    roles of T2 and T3 exchanged: End(T3) kills beta*alpha*beta and End(T2)
    kills alpha*beta*alpha; neither kills the other cubic product."""
    T = tilting_by_name(searches)
    E2, E3 = endo_algebra(T["T2"]), endo_algebra(T["T3"])
    r2, r3 = b_quiver_roles(E2), b_quiver_roles(E3)
    assert r2 is not None and r3 is not None
    assert E3.find_vanishing_lift(words(r3, B_RELATIONS)) is not None
    assert E2.find_vanishing_lift(words(r2, C_RELATIONS)) is not None
    assert E2.find_vanishing_lift(words(r2, ("bab",))) is None
    assert E3.find_vanishing_lift(words(r3, ("aba",))) is None


# -- criterion 4 ------------------------------------------------------------------------

@crit(4)
def test_conditions_ex211():
    rep = check_all_conditions(load("ex211"))
    assert [s.overall for s in rep.simples] == [True, True]


@crit(4)
def test_conditions_ex45_fails_exactly_third():
    rep = check_all_conditions(load("ex45"))
    sx, sy = rep["x"], rep["y"]
    assert sx.overall
    assert sy.cond1 and sy.cond2
    assert not sy.cond3_kernel_form and not sy.cond3_dual_trace_form
    assert not sy.overall


@crit(4)
def test_conditions_ex47_agree_with_weakly_directed_form():
    A = load("ex47")
    rep = check_all_conditions(A)
    wd = {r.vertex: r.passes for r in check_wd_conditions(A)}
    assert set(wd) == {"x", "y", "z"}
    for s in rep.simples:
        assert s.overall
        assert wd[s.vertex] == s.overall


# -- criterion 5 ------------------------------------------------------------------------

@crit(5)
def test_local_algebra(searches):
    A = load("local3")
    ex, til = searches.exceptional("local3"), searches.tilting("local3")
    regular = stalk(A, ["x"])
    assert len(ex) == 1 and iso_K(normalize_shift(ex[0]), regular)
    assert len(til) == 1 and iso_K(normalize_shift(til[0]), regular)


# -- criterion 6 ------------------------------------------------------------------------

CONCLUSIONS = {
    "appears at no more than one degree",
    "socle of first homology contains the simple",
    "hom-orthogonal pairs have disjoint supports",
    "appears at exactly one degree of every tilting complex",
    "tilting complexes are gap-free",
}


@crit(6)
@pytest.mark.parametrize("name", ["ex211", "ex47"])
def test_conclusions(searches, name):
    rep = searches.conclusions(name)
    assert not rep.truncated
    assert rep.qualifying, "some projective qualifies"
    assert {a.name for a in rep.assertions} == CONCLUSIONS
    failed = [(a.name, a.vertex, a.counterexamples) for a in rep.assertions if not a.passed]
    assert not failed
    assert all(a.checked > 0 for a in rep.assertions if a.name != "hom-orthogonal pairs have disjoint supports")


@crit(6)
def test_conclusions_cli_exit_code():
    code, report = cli.run(["conclusions", "--algebra", "ex211", "--out", "/dev/null"])
    assert code == 0 and report["result"]["all_pass"]


# -- criterion 7 ------------------------------------------------------------------------

@crit(7)
def test_simple_has_periodic_resolution():
    A = load("ex211")
    r = min_resolution(simple(A, "y"), 20)
    assert r.status == "exceeds cutoff"
    assert all(t == (0, 1) for t in r.terms)


@crit(7)
def test_findim_probe_ex211_finds_nothing():
    rep = findim_probe(load("ex211"), dim_bound=4, cutoff=20)
    assert rep.samples > 0 and rep.witnesses == []


@crit(7)
def test_findim_probe_a2_finds_simple():
    rep = findim_probe(load("a2"), dim_bound=4, cutoff=20)
    simple_witnesses = [w for w in rep.witnesses if w["dims"] == [1, 0] and w["projective_dimension"] == 1]
    assert simple_witnesses


# -- criterion 8 ------------------------------------------------------------------------

@crit(8)
@pytest.mark.parametrize("name", ["ex211", "ex47", "local3"])
def test_no_recollement_witness(searches, name):
    w = searches.witnesses(name)
    assert not w.truncated
    found = [(p.X.describe(), p.Y.describe()) for p in w]
    assert found == [], f"pairs meeting the witness conditions: {found}"


@crit(8)
def test_recollement_witness_on_a2(searches):
    A = load("a2")
    w = searches.witnesses("a2")
    Px, Py = stalk(A, ["x"]), stalk(A, ["y"])
    assert any(iso_K(normalize_shift(p.X), Px) and iso_K(normalize_shift(p.Y), Py) for p in w)


# -- criterion 9 ------------------------------------------------------------------------

@crit(9)
def test_kronecker_exceptional_lengths(searches):
    ex = searches.exceptional("kronecker", max_length=3, max_mult=3)
    assert len(ex) > 0
    assert all(C.support_length() <= 2 for C in ex)


@crit(9)
def test_kronecker_many_tilting(searches):
    til = searches.tilting("kronecker", max_mult=3)
    assert len(til) >= 4
    objs = list(til.objects)
    for i in range(len(objs)):
        for j in range(i):
            assert not iso_K(normalize_shift(objs[i]), normalize_shift(objs[j]))


@crit(9)
def test_kronecker_coxeter_polynomial():
    assert cartan_coxeter(load("kronecker")).charpoly == [1, -2, 1]


if __name__ == "__main__":
    here = Path(__file__).parent
    sys.exit(pytest.main([str(here / "test_acceptance.py"), str(here / "test_properties.py"), "-q"]))
