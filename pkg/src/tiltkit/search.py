"""Bounded searches in the homotopy category of perfect complexes.

* :func:`enumerate_exceptional` lists minimal indecomposable exceptional
  complexes up to shift and isomorphism, within bounds on length and
  multiplicities.
* :func:`enumerate_tilting` assembles basic tilting complexes from them.
* :func:`generates` decides (or fails to decide) whether a complex generates
  the homotopy category, in three tiers.
* :func:`endo_algebra` computes the endomorphism algebra with a quiver
  presentation.
* :func:`recollement_witness_search` and :func:`conclusions_report` check the
  structural statements about exceptional and tilting objects.

Completeness is relative to the differential sweep: for each degree profile
the enumerator evaluates every candidate differential whose entries are
normal-form radical paths with ``{0, 1}`` coefficients (up to a per-profile
sweep size), plus seeded random candidates drawn from the solution set of
``d^2 = 0``. Every report states this.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import linalg
from .algebra import AlgebraBasis
from .complexes import (PerfectComplex, _left_op, _mask, _right_op, complex_direct_sum, cone, endomorphism_algebra,
                        hom_dims, hom_K, homology_at, is_exceptional, iso_K, minimize)
from .criteria import check_conditions, corner_bimodule
from .finalg import FDAlgebra, Presentation, present
from .modules import min_resolution, projective_cover, simple, socle

SWEEP_NOTE = ("complete relative to the sweep: {0,1}-coefficient radical differentials "
              "up to the per-profile sweep size, plus seeded random solutions of d^2 = 0")


class SearchError(ValueError):
    pass


@dataclass
class SearchBounds:
    """Bounds for the searches. ``max_length=None`` means the number of vertices."""

    max_length: int | None = None
    max_mult: int = 2
    max_summands: int | None = None  # per degree; None = no limit beyond max_mult
    depth: int = 3
    profile_cap: int = 100_000
    global_cap: int = 10_000_000
    sweep: int = 64  # {0,1} candidates per profile
    random_samples: int = 6  # random candidates per profile and strategy
    seed: int = 0

    def __post_init__(self):
        for name in ("max_mult", "depth", "profile_cap", "global_cap"):
            if getattr(self, name) <= 0:
                raise SearchError(f"{name} must be positive")
        if self.max_length is not None and self.max_length <= 0:
            raise SearchError("max_length must be positive")
        if self.max_summands is not None and self.max_summands <= 0:
            raise SearchError("max_summands must be positive")
        if self.sweep < 0 or self.random_samples < 0:
            raise SearchError("sweep sizes must be non-negative")

    def length(self, A: AlgebraBasis) -> int:
        return self.max_length if self.max_length is not None else A.n_vertices

    def to_json(self) -> dict:
        return {"max_length": self.max_length, "max_mult": self.max_mult, "max_summands": self.max_summands,
                "depth": self.depth, "profile_cap": self.profile_cap, "global_cap": self.global_cap,
                "sweep": self.sweep, "random_samples": self.random_samples, "seed": self.seed}


# -- small helpers --------------------------------------------------------------

def normalize_shift(C: PerfectComplex) -> PerfectComplex:
    """Minimal form shifted so that its last nonzero degree is 0."""
    M, _ = minimize(C)
    if M.is_zero():
        return M
    return M.shift(M.end)


def k0_class(C: PerfectComplex) -> tuple[int, ...]:
    """Class in ``K_0``: alternating sum of multiplicity vectors."""
    n = C.algebra.n_vertices
    out = [0] * n
    for i in C.degrees():
        for v, m in enumerate(C.multiplicities(i)):
            out[v] += (-1) ** (i % 2) * m
    return tuple(out)


def summand_components(C: PerfectComplex) -> list[PerfectComplex]:
    """Split ``C`` along connected components of its nonzero differential entries.

    Each component is a direct summand (not necessarily indecomposable).
    """
    if C.is_zero():
        return []
    nodes = [(i, k) for i in C.degrees() for k in range(len(C.term(i)))]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(C.start, C.end):
        D = C.diff(i)
        for a, b in zip(*np.nonzero(np.any(D != 0, axis=2))):
            ra, rb = find((i, int(a))), find((i + 1, int(b)))
            if ra != rb:
                parent[ra] = rb
    groups: dict = {}
    for x in nodes:
        groups.setdefault(find(x), []).append(x)
    out = []
    for members in sorted(groups.values()):
        out.append(_restrict(C, members))
    return out


def _restrict(C: PerfectComplex, members) -> PerfectComplex:
    keep = {i: sorted(k for d, k in members if d == i) for i in C.degrees()}
    terms = [[C.term(i)[k] for k in keep[i]] for i in C.degrees()]
    diffs = [C.diff(i)[np.ix_(keep[i], keep[i + 1])] if keep[i] and keep[i + 1]
             else C.field.zeros((len(keep[i]), len(keep[i + 1]), C.algebra.dim)) for i in range(C.start, C.end)]
    return PerfectComplex(C.algebra, C.start, terms, diffs, check=False)


def is_gap_free(C: PerfectComplex) -> bool:
    return all(C.term(i) for i in C.degrees())


def _radical_index(A: AlgebraBasis) -> np.ndarray:
    """Boolean mask of basis elements lying in the radical (all except the ``e_v``)."""
    r = np.ones(A.dim, dtype=bool)
    for v in range(A.n_vertices):
        r[A.trivial[v]] = False
    return r


def _has_radical_piece(A: AlgebraBasis) -> np.ndarray:
    rad = _radical_index(A)
    return np.any(A.piece_mask & rad, axis=2)


class _HomCache:
    """Memoized ``hom_dims`` for complexes identified by a key."""

    def __init__(self):
        self._d: dict = {}

    def dims(self, kx, X, ky, Y) -> dict[int, int]:
        key = (kx, ky)
        if key not in self._d:
            self._d[key] = hom_dims(X, Y)
        return self._d[key]


# -- exceptional enumeration -----------------------------------------------------------

@dataclass
class Enumeration:
    """Result of an enumeration: objects plus bookkeeping."""

    objects: list
    truncated: bool = False
    candidates: int = 0
    profiles: int = 0
    profiles_pruned: int = 0
    note: str = SWEEP_NOTE
    extra: dict = dc_field(default_factory=dict)

    def __len__(self):
        return len(self.objects)

    def __iter__(self):
        return iter(self.objects)

    def __getitem__(self, k):
        return self.objects[k]


def _multiplicity_vectors(n: int, m: int, max_summands: int | None):
    for vec in itertools.product(range(m + 1), repeat=n):
        s = sum(vec)
        if s == 0 or (max_summands is not None and s > max_summands):
            continue
        yield vec


def _terms_of(profile) -> list[list[int]]:
    return [[v for v, c in enumerate(vec) for _ in range(c)] for vec in profile]


def _profile_admissible(A: AlgebraBasis, profile, has_rad: np.ndarray, D: np.ndarray) -> bool:
    """Necessary conditions for a profile to carry a minimal indecomposable exceptional complex."""
    if len(profile) == 1:
        return sum(profile[0]) == 1
    first, last = profile[0], profile[-1]
    # a summand shared by the first and last degree gives a non-null-homotopic map X -> X[s - r]
    if any(a and b for a, b in zip(first, last)):
        return False
    terms = _terms_of(profile)
    # summand graph: an edge wherever a radical entry is possible; must be connected
    nodes = [(i, k) for i, t in enumerate(terms) for k in range(len(t))]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(terms) - 1):
        for a, u in enumerate(terms[i]):
            for b, w in enumerate(terms[i + 1]):
                if has_rad[u, w]:
                    ra, rb = find((i, a)), find((i + 1, b))
                    if ra != rb:
                        parent[ra] = rb
    if len({find(x) for x in nodes}) != 1:
        return False
    # Euler form: chi(X, X) = dim End(X) >= 1 for exceptional X
    chi = 0
    for i, a in enumerate(profile):
        for j, b in enumerate(profile):
            chi += (-1) ** ((j - i) % 2) * int(np.array(a) @ D @ np.array(b))
    return chi >= 1


def _profiles(A: AlgebraBasis, b: SearchBounds):
    n = A.n_vertices
    vecs = list(_multiplicity_vectors(n, b.max_mult, b.max_summands))
    for length in range(1, b.length(A) + 1):
        for prof in itertools.product(vecs, repeat=length):
            yield prof


class _ProfileSampler:
    """Candidate differentials for a fixed profile (all entries radical)."""

    def __init__(self, A: AlgebraBasis, terms: list[list[int]]):
        self.A = A
        self.terms = terms
        rad = _radical_index(A)
        self.shapes = [(len(terms[i]), len(terms[i + 1]), A.dim) for i in range(len(terms) - 1)]
        self.coords = []  # flat indices of free radical coordinates per differential
        for i in range(len(terms) - 1):
            m = _mask(A, terms[i], terms[i + 1]) & rad
            self.coords.append(np.flatnonzero(m.ravel()))

    @property
    def n_coords(self) -> int:
        return sum(c.size for c in self.coords)

    def assemble(self, flat: np.ndarray) -> list[np.ndarray]:
        F = self.A.field
        out, off = [], 0
        for shape, idx in zip(self.shapes, self.coords):
            D = F.zeros(int(np.prod(shape)))
            D[idx] = flat[off:off + idx.size]
            off += idx.size
            out.append(D.reshape(shape))
        return out

    def d2_zero(self, diffs) -> bool:
        A = self.A
        return all(not np.any(A.matmul(diffs[i], diffs[i + 1]) != 0) for i in range(len(diffs) - 1))

    def _random_in(self, i, rng, support=None):
        F = self.A.field
        vec = F.random(rng, self.coords[i].size)
        if support is not None:
            vec = F.normalize(vec * support)
        D = F.zeros(int(np.prod(self.shapes[i])))
        D[self.coords[i]] = vec
        return D.reshape(self.shapes[i])

    def _extend_forward(self, prev: np.ndarray, i: int, rng, support=None):
        """Random ``D_i`` (radical, optional support) with ``prev D_i = 0``."""
        A, F = self.A, self.A.field
        idx = self.coords[i] if support is None else self.coords[i][support != 0]
        if idx.size == 0:
            return F.zeros(self.shapes[i])
        op = _left_op(A, prev, self.shapes[i][1])[:, idx]
        N = linalg.nullspace(op, F)
        D = F.zeros(int(np.prod(self.shapes[i])))
        if N.shape[1]:
            D[idx] = F.matmul(N, F.random(rng, N.shape[1]).reshape(-1, 1)).reshape(-1)
        return D.reshape(self.shapes[i])

    def _extend_backward(self, nxt: np.ndarray, i: int, rng, support=None):
        """Random ``D_i`` with ``D_i nxt = 0``."""
        A, F = self.A, self.A.field
        idx = self.coords[i] if support is None else self.coords[i][support != 0]
        if idx.size == 0:
            return F.zeros(self.shapes[i])
        op = _right_op(A, nxt, self.shapes[i][0])[:, idx]
        N = linalg.nullspace(op, F)
        D = F.zeros(int(np.prod(self.shapes[i])))
        if N.shape[1]:
            D[idx] = F.matmul(N, F.random(rng, N.shape[1]).reshape(-1, 1)).reshape(-1)
        return D.reshape(self.shapes[i])

    def random_candidates(self, rng, count: int):
        """Forward, backward and middle-out solutions of ``d^2 = 0``, each also with random sparse supports."""
        k = len(self.shapes)
        F = self.A.field
        for t in range(count):
            for restricted in (False, True):
                supports = None
                if restricted:
                    supports = [(rng.random(c.size) < 0.5).astype(F.dtype) for c in self.coords]
                sup = (lambda i: None) if supports is None else (lambda i: supports[i])
                if k == 1:
                    yield [self._random_in(0, rng, sup(0))]
                    continue
                # forward
                ds = [self._random_in(0, rng, sup(0))]
                for i in range(1, k):
                    ds.append(self._extend_forward(ds[-1], i, rng, sup(i)))
                yield ds
                # backward
                ds = [self._random_in(k - 1, rng, sup(k - 1))]
                for i in range(k - 2, -1, -1):
                    ds.insert(0, self._extend_backward(ds[0], i, rng, sup(i)))
                yield ds
                # middle-out
                mid = k // 2
                ds = {mid: self._random_in(mid, rng, sup(mid))}
                for i in range(mid + 1, k):
                    ds[i] = self._extend_forward(ds[i - 1], i, rng, sup(i))
                for i in range(mid - 1, -1, -1):
                    ds[i] = self._extend_backward(ds[i + 1], i, rng, sup(i))
                yield [ds[i] for i in range(k)]

    def sweep_candidates(self, limit: int):
        """``{0,1}`` coordinate vectors by increasing support size, at most ``limit`` of them."""
        F = self.A.field
        n = self.n_coords
        produced = 0
        for size in range(1, n + 1):
            for support in itertools.combinations(range(n), size):
                if produced >= limit:
                    return
                flat = F.zeros(n)
                flat[list(support)] = F.scalar(1)
                produced += 1
                yield self.assemble(flat)


def _connected_entries(diffs, terms) -> bool:
    nodes = [(i, k) for i, t in enumerate(terms) for k in range(len(t))]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, D in enumerate(diffs):
        for a, b in zip(*np.nonzero(np.any(D != 0, axis=2))):
            ra, rb = find((i, int(a))), find((i + 1, int(b)))
            if ra != rb:
                parent[ra] = rb
    return len({find(x) for x in nodes}) == 1


def enumerate_exceptional(A: AlgebraBasis, b: SearchBounds | None = None) -> Enumeration:
    """Minimal indecomposable exceptional complexes up to shift and isomorphism.

    Output is shift-normalized (last degree 0) and sorted by the canonical
    profile order (length, then multiplicity vectors).
    """
    from .complexes import is_indecomposable

    b = b or SearchBounds()
    has_rad = _has_radical_piece(A)
    D = A.piece_dims()
    result = Enumeration([])
    found: dict = {}  # profile -> list of complexes
    total = 0
    for p_index, prof in enumerate(_profiles(A, b)):
        result.profiles += 1
        if not _profile_admissible(A, prof, has_rad, D):
            result.profiles_pruned += 1
            continue
        terms = _terms_of(prof)
        start = -(len(terms) - 1)
        if len(terms) == 1:
            C = PerfectComplex(A, 0, terms, check=False)
            total += 1
            if is_exceptional(C):
                found.setdefault(prof, []).append(C)
            continue
        sampler = _ProfileSampler(A, terms)
        rng = np.random.default_rng([b.seed, p_index])

        def candidates():
            yield from sampler.sweep_candidates(b.sweep)
            yield from sampler.random_candidates(rng, b.random_samples)

        per_profile = 0
        for diffs in candidates():
            if per_profile >= b.profile_cap or total >= b.global_cap:
                result.truncated = True
                break
            per_profile += 1
            total += 1
            if not _connected_entries(diffs, terms) or not sampler.d2_zero(diffs):
                continue
            C = PerfectComplex(A, start, terms, diffs, check=False)
            if C.start != start or C.support_length() != len(terms):
                continue
            if not is_exceptional(C):
                continue
            if any(iso_K(C, E, seed=b.seed) for E in found.get(prof, [])):
                continue
            if not is_indecomposable(C):
                continue
            found.setdefault(prof, []).append(C)
        if total >= b.global_cap:
            result.truncated = True
            break
    for prof in sorted(found, key=lambda p: (len(p), p)):
        result.objects.extend(found[prof])
    result.candidates = total
    return result


# -- generation ----------------------------------------------------------------------

@dataclass
class GenerationVerdict:
    """``kind`` is ``"Generates"``, ``"NotGenerating"`` or ``"Unknown"``; ``tier`` names the deciding test."""

    kind: str
    tier: str
    certificate: list = dc_field(default_factory=list)  # construction trace (Generates)
    witness: dict | None = None  # obstruction (NotGenerating)
    evidence: dict = dc_field(default_factory=dict)

    @property
    def generates(self) -> bool:
        return self.kind == "Generates"

    def to_json(self) -> dict:
        return {"kind": self.kind, "tier": self.tier, "certificate": self.certificate,
                "witness": self.witness, "evidence": self.evidence}


def indecomposable_summands(T: PerfectComplex) -> tuple[list[PerfectComplex], bool]:
    """Summands of ``T`` from its recorded blocks, else from entry components.

    Returns ``(summands, all_indecomposable)``; the flag says whether every
    summand was verified to have a local endomorphism algebra.
    """
    from .complexes import is_indecomposable

    parts: list[PerfectComplex] = []
    if T.blocks is not None:
        for _, members in T.blocks:
            if members:
                parts.append(_restrict(T, members))
    else:
        parts = summand_components(T)
    minimal = []
    for P in parts:
        M, _ = minimize(P)
        minimal.extend(summand_components(M))
    return minimal, all(is_indecomposable(P) for P in minimal)


def k0_matrix(summands: Sequence[PerfectComplex]) -> list[list[int]]:
    return [list(k0_class(S)) for S in summands]


def _lattice_is_full(rows: list[list[int]], n: int) -> tuple[bool, int]:
    """Whether integer ``rows`` span ``Z^n``: gcd of the maximal minors is 1. Returns ``(full, gcd)``."""
    import sympy

    if len(rows) < n:
        return False, 0
    g = 0
    for combo in itertools.combinations(range(len(rows)), n):
        d = int(sympy.Matrix([rows[k] for k in combo]).det())
        g = math.gcd(g, d)
        if g == 1:
            return True, 1
    return g == 1, g


def resolution_complex(A: AlgebraBasis, v, length: int) -> PerfectComplex:
    """Minimal projective resolution of the simple at ``v`` truncated to ``P^length -> ... -> P^0``,
    placed in degrees ``-length .. 0``."""
    F = A.field
    v = A.vertex(v)
    S = simple(A, v)
    terms: list[list[int]] = []
    diffs: list[np.ndarray] = []
    cur = S
    embed = None  # bases of the current module inside the previous projective, per vertex
    prev_terms = None
    for step in range(length + 1):
        cov = projective_cover(cur)
        t = [g[0] for g in cov.generators]
        if step > 0:
            # generator g of P^step maps to embed(g) in P^{step-1}
            D = F.zeros((len(t), len(prev_terms), A.dim))
            for a, (u, vec) in enumerate(cov.generators):
                amb = F.matmul(embed[u], vec.reshape(-1, 1)).reshape(-1)
                off = 0
                for bidx, w in enumerate(prev_terms):
                    piece = A.pieces[(w, u)]
                    D[a, bidx, piece] = amb[off:off + len(piece)]
                    off += len(piece)
            diffs.append(D)
        terms.append(t)
        K = cov.map.kernel()
        if K.dim == 0 or not t:
            break
        embed = K.bases
        prev_terms = t
        cur = K.module
    terms = terms[::-1]
    diffs = diffs[::-1]
    return PerfectComplex(A, -(len(terms) - 1), terms, diffs)


def _is_stalk_projective(C: PerfectComplex) -> int | None:
    M, _ = minimize(C)
    if M.support_length() == 1 and len(M.terms[0]) == 1:
        return M.terms[0][0]
    return None


def generates(T: PerfectComplex, depth: int = 3, max_objects: int = 64, seed: int = 0) -> GenerationVerdict:
    """Three-tier generation test for the homotopy category of perfect complexes."""
    A = T.algebra
    n = A.n_vertices
    V = A.quiver.vertices
    M, _ = minimize(T)
    if M.is_zero():
        return GenerationVerdict("NotGenerating", "K0", witness={"reason": "zero complex"})
    summands, exact = indecomposable_summands(T)
    evidence: dict = {"summands": len(summands), "summands_indecomposable": exact}
    # tier (i): K_0
    rows = k0_matrix(summands)
    full, g = _lattice_is_full(rows, n)
    evidence["k0_classes"] = rows
    if not full:
        import sympy
        rank = sympy.Matrix(rows).rank() if rows else 0
        if exact or rank < n:
            return GenerationVerdict("NotGenerating", "K0",
                                     witness={"reason": "K0 classes do not span", "rank": int(rank), "gcd": int(g)},
                                     evidence=evidence)
    # tier (ii): weak generation -- Hom(T, S_v[n]) is the multiplicity of P_v in T^{-n} for minimal T
    weak = {}
    for v in range(n):
        degs = M.appears_at(v)
        if not degs:
            return GenerationVerdict("NotGenerating", "weak",
                                     witness={"simple": V[v], "reason": "Hom(T, S[n]) = 0 for all n"},
                                     evidence=evidence)
        i = degs[0]
        R = resolution_complex(A, v, M.support_length() + 1)
        d = hom_K(M, R, -i).dim
        expected = M.multiplicities(i)[v]
        if d != expected:
            raise AssertionError(f"resolution cross-check failed at {V[v]}: {d} != {expected}")
        weak[V[v]] = {"degree": i, "hom_dim": d}
    evidence["weak"] = weak
    # tier (iii): saturation under shifts, cones of universal maps and summand extraction
    objects: list[PerfectComplex] = []
    labels: list[str] = []
    reached: dict[int, str] = {}
    trace: list[dict] = []

    def add(C: PerfectComplex, label: str, how: dict) -> bool:
        N = normalize_shift(C)
        if N.is_zero():
            return False
        for O in objects:
            if O.profile() == N.profile() and iso_K(O, N, seed=seed):
                return False
        objects.append(N)
        labels.append(label)
        trace.append(dict(how, result=label, complex=N.describe()))
        v = _is_stalk_projective(N)
        if v is not None and v not in reached:
            reached[v] = label
        return True

    for k, S in enumerate(summands):
        add(S, f"S{k + 1}", {"op": "summand"})
    if len(reached) == n:
        return GenerationVerdict("Generates", "thick closure", certificate=trace, evidence=evidence)
    count = 0
    for rnd in range(1, depth + 1):
        snapshot = list(range(len(objects)))
        new = False
        for a in snapshot:
            for b in snapshot:
                X, Y = objects[a], objects[b]
                for s, d in sorted(hom_dims(X, Y).items()):
                    H = hom_K(X, Y, s)
                    for kind, C in _universal_cones(X, Y, s, H):
                        for part in summand_components(minimize(C)[0]):
                            count += 1
                            label = f"C{count}"
                            how = {"op": kind, "round": rnd, "source": labels[a], "target": labels[b], "shift": s}
                            if add(part, label, how):
                                new = True
                            if len(reached) == n:
                                return GenerationVerdict("Generates", "thick closure", certificate=trace,
                                                         evidence=evidence)
                            if len(objects) >= max_objects:
                                return GenerationVerdict("Unknown", "thick closure", certificate=trace,
                                                         evidence=dict(evidence, stopped="object limit"))
        if not new:
            break
    return GenerationVerdict("Unknown", "thick closure", certificate=trace, evidence=dict(evidence, stopped="depth"))


def _universal_cones(X: PerfectComplex, Y: PerfectComplex, s: int, H):
    """Cones of the universal maps ``X -> Y[s]^d`` and ``X^d -> Y[s]`` built from a Hom basis."""
    A = X.algebra
    F = A.field
    reps = H.representatives()
    d = len(reps)
    if d == 0:
        return
    from .complexes import ChainMap
    Yd = complex_direct_sum([Y] * d)
    comps = {}
    for i in X.degrees():
        blocks = [f.component(i) for f in reps]
        comps[i] = np.concatenate(blocks, axis=1) if blocks[0].shape[1] else F.zeros((len(X.term(i)), 0, A.dim))
    yield "cone of left approximation", cone(ChainMap(X, Yd, s, comps))
    Xd = complex_direct_sum([X] * d)
    comps = {}
    for i in X.degrees():
        blocks = [f.component(i) for f in reps]
        comps[i] = np.concatenate(blocks, axis=0)
    yield "cone of right approximation", cone(ChainMap(Xd, Y, s, comps))


# -- tilting enumeration ------------------------------------------------------------------

def _relative_shifts(subset: Sequence[int], H: dict) -> dict[int, int] | None:
    """Shifts ``s_i`` making ``(+) E_i[s_i]`` exceptional, or ``None``.

    ``H[(i, j)]`` is the set of ``n`` with ``Hom(E_i, E_j[n]) != 0``; the sum is
    exceptional iff every such set is empty or equals ``{s_j - s_i}``.
    Hom-orthogonal groups are aligned later (each ends in degree 0).
    """
    constraints: dict[int, list[tuple[int, int]]] = {i: [] for i in subset}
    for i in subset:
        for j in subset:
            if i == j:
                continue
            hs = H[(i, j)]
            if len(hs) > 1:
                return None
            if hs:
                (h,) = hs
                constraints[i].append((j, h))    # s_j = s_i + h
                constraints[j].append((i, -h))
    shifts: dict[int, int] = {}
    comp: dict[int, int] = {}
    for root in subset:
        if root in shifts:
            continue
        shifts[root] = 0
        comp[root] = root
        stack = [root]
        while stack:
            i = stack.pop()
            for j, h in constraints[i]:
                if j not in shifts:
                    shifts[j] = shifts[i] + h
                    comp[j] = root
                    stack.append(j)
                elif shifts[j] != shifts[i] + h:
                    return None
    return {i: (shifts[i], comp[i]) for i in subset}


@dataclass
class TiltingEnumeration(Enumeration):
    unknown_excluded: int = 0
    not_generating: int = 0
    verdicts: list = dc_field(default_factory=list)  # per output complex


def enumerate_tilting(A: AlgebraBasis, b: SearchBounds | None = None,
                      exceptional: Enumeration | None = None) -> TiltingEnumeration:
    """Basic tilting complexes with ``n`` indecomposable summands, shift-normalized."""
    b = b or SearchBounds()
    ex = exceptional if exceptional is not None else enumerate_exceptional(A, b)
    E = list(ex.objects)
    n = A.n_vertices
    H = {}
    for i, X in enumerate(E):
        for j, Y in enumerate(E):
            if i != j:
                H[(i, j)] = set(hom_dims(X, Y))
    out = TiltingEnumeration([], truncated=ex.truncated, candidates=0)
    classes = [k0_class(X) for X in E]
    for subset in itertools.combinations(range(len(E)), n):
        out.candidates += 1
        shifts = _relative_shifts(subset, H)
        if shifts is None:
            continue
        full, _ = _lattice_is_full([list(classes[i]) for i in subset], n)
        if not full:
            continue
        parts = []
        for i in subset:
            s, _ = shifts[i]
            parts.append(E[i].shift(s))
        # align hom-orthogonal groups so each ends in degree 0
        groups: dict[int, list[int]] = {}
        for pos, i in enumerate(subset):
            groups.setdefault(shifts[i][1], []).append(pos)
        for members in groups.values():
            top = max(parts[p].end for p in members)
            for p in members:
                parts[p] = parts[p].shift(top)
        T = complex_direct_sum(parts, labels=[f"E{i + 1}" for i in subset])
        if not is_exceptional(T):
            raise AssertionError("relative-shift analysis produced a non-exceptional sum")
        verdict = generates(T, depth=b.depth, seed=b.seed)
        if verdict.kind == "Unknown":
            out.unknown_excluded += 1
            continue
        if verdict.kind != "Generates":
            out.not_generating += 1
            continue
        T = T.shift(T.end)
        if any(S.profile() == T.profile() and iso_K(S, T, seed=b.seed) for S in out.objects):
            continue
        out.objects.append(T)
        out.verdicts.append(verdict)
    out.extra = {"exceptional_objects": len(E)}
    return out


# -- endomorphism algebras ------------------------------------------------------------------

@dataclass
class EndoPresentation:
    """``End_K(T)`` in the "first ``x``, then ``y``" product, which is the opposite of
    the composition order; for a tilting complex this is the derived-equivalent algebra."""

    complex: PerfectComplex
    algebra: FDAlgebra
    hom_space: object
    idempotents: list
    vertex_labels: list[str]
    presentation: Presentation
    vanishing: dict = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def quiver(self):
        return self.presentation.quiver

    def arrow_counts(self) -> list[list[int]]:
        """``counts[i][j]``: number of arrows from vertex ``i`` to vertex ``j``."""
        n = len(self.idempotents)
        c = [[0] * n for _ in range(n)]
        for a in self.presentation.quiver.arrows:
            c[a.source][a.target] += 1
        return c

    def piece_dims(self) -> list[list[int]]:
        """``D[i][j] = dim e_i E e_j``."""
        E = self.algebra
        return [[E.corner(ei, ej).shape[1] for ej in self.idempotents] for ei in self.idempotents]

    def evaluate(self, word: Sequence[int], arrows: list[np.ndarray] | None = None) -> np.ndarray:
        """Product of arrow elements, written right to left like paths (last factor acts first)."""
        elems = arrows if arrows is not None else self.presentation.arrow_elements
        out = elems[word[0]]
        for k in word[1:]:
            out = self.algebra.mul(out, elems[k])
        return out

    def find_vanishing_lift(self, words: Sequence[Sequence[int]], budget: int = 4096):
        """Arrow lifts (arrow + combination of deeper radical terms in the same corner)
        for which every product in ``words`` vanishes; ``None`` if the search fails."""
        E = self.algebra
        F = E.field
        pows = E.radical_powers()
        R2 = pows[1] if len(pows) > 1 else F.zeros((E.dim, 0))
        base = self.presentation.arrow_elements
        arrows = self.presentation.quiver.arrows
        corrections = []
        for a, x in zip(arrows, base):
            C = E.corner(self.idempotents[a.target], self.idempotents[a.source], R2)
            corrections.append(C)
        coeffs = [F.scalar(c) for c in (0, 1, -1)]
        slots = [(ai, k) for ai, C in enumerate(corrections) for k in range(C.shape[1])]
        tried = 0
        for choice in itertools.product(range(3), repeat=len(slots)):
            if tried >= budget:
                return None
            tried += 1
            elems = [x.copy() for x in base]
            for (ai, k), c in zip(slots, choice):
                if c:
                    elems[ai] = F.normalize(elems[ai] + coeffs[c] * corrections[ai][:, k])
            if all(not np.any(self.evaluate(w, elems) != 0) for w in words):
                return elems
        return None

    def to_json(self) -> dict:
        P = self.presentation
        F = self.algebra.field
        return {
            "dimension": self.dim,
            "vertices": self.vertex_labels,
            "arrows": [[a.label, P.quiver.vertices[a.source], P.quiver.vertices[a.target]] for a in P.quiver.arrows],
            "relations": P.algebra.relation_strings(),
            "piece_dims": self.piece_dims(),
            "structure_constants": [[[F.to_json(x) for x in row] for row in M.tolist()]
                                    for M in self.algebra.struct],
            "vanishing": self.vanishing,
        }


def endo_algebra(T: PerfectComplex, seed: int = 0) -> EndoPresentation:
    """Endomorphism algebra of ``T`` with idempotents, quiver and relations."""
    if T.is_zero():
        raise SearchError("endomorphism algebra of the zero complex")
    from .complexes import ChainMap, identity_map

    E, H = endomorphism_algebra(T)
    F = E.field
    if F.p is not None and F.p <= E.dim:
        raise SearchError(f"field too small: characteristic {F.p} <= dim End = {E.dim}")
    idems: list[np.ndarray] = []
    labels: list[str] = []
    if T.blocks is not None and len(T.blocks) > 1:
        ident = identity_map(T)
        for lab, members in T.blocks:
            comps = {}
            for i in T.degrees():
                M = ident.component(i).copy()
                keep = {k for d, k in members if d == i}
                for k in range(M.shape[0]):
                    if k not in keep:
                        M[k] = 0
                comps[i] = M
            idems.append(H.coordinates(ChainMap(T, T, 0, comps)))
            labels.append(lab)
        if any(not _is_local_corner(E, e) for e in idems):
            idems, labels = [], []
    if not idems:
        idems = E.primitive_idempotents(np.random.default_rng(seed))
        labels = [f"v{k + 1}" for k in range(len(idems))]
    P = present(E, idems, names=labels)
    return EndoPresentation(T, E, H, idems, labels, P)


def _is_local_corner(E: FDAlgebra, e: np.ndarray) -> bool:
    C = E.corner(e, e)
    R = E.radical()
    CR = E.corner(e, e, R)
    return C.shape[1] - CR.shape[1] == 1


def opposite_arrow_counts(counts: list[list[int]]) -> list[list[int]]:
    return [list(r) for r in zip(*counts)]


def presentations_match(P: EndoPresentation, Q: EndoPresentation, opposite: bool = False) -> list[int] | None:
    """A vertex bijection under which the quivers (arrow counts) and the Cartan data
    ``dim e_i E e_j`` agree, with ``Q`` replaced by its opposite if requested."""
    cp, cq = P.arrow_counts(), Q.arrow_counts()
    dp, dq = P.piece_dims(), Q.piece_dims()
    if opposite:
        cq, dq = opposite_arrow_counts(cq), opposite_arrow_counts(dq)
    n = len(cp)
    if n != len(cq) or P.dim != Q.dim:
        return None
    for perm in itertools.permutations(range(n)):
        if all(cp[i][j] == cq[perm[i]][perm[j]] and dp[i][j] == dq[perm[i]][perm[j]]
               for i in range(n) for j in range(n)):
            return list(perm)
    return None


# -- recollement witnesses --------------------------------------------------------------------

@dataclass
class WitnessPair:
    """An ordered pair ``(X, Y)`` meeting the exceptional / orthogonal / generating conditions."""

    X: PerfectComplex
    Y: PerfectComplex
    labels: tuple[str, str]
    hom_window: tuple[int, int]
    x_exceptional: bool
    y_exceptional: bool
    verdict: GenerationVerdict
    vertex_partition: bool  # supports of X and Y are disjoint and cover all vertices
    projective_induced: bool  # X and Y are (shifts of) sums of stalk projectives
    corner_resolution: dict | None = None  # resolution of f A e when the supports split A triangularly

    def to_json(self) -> dict:
        return {
            "X": self.X.to_json(), "Y": self.Y.to_json(), "labels": list(self.labels),
            "X_describe": self.X.describe(), "Y_describe": self.Y.describe(),
            "hom_X_Y_zero_for_shifts": list(self.hom_window),
            "X_exceptional": self.x_exceptional, "Y_exceptional": self.y_exceptional,
            "generation": self.verdict.to_json(), "vertex_partition": self.vertex_partition,
            "projective_induced": self.projective_induced, "corner_resolution": self.corner_resolution,
        }


@dataclass
class WitnessSearch:
    pairs: list
    truncated: bool
    candidates: int
    note: str

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _support(C: PerfectComplex) -> set[int]:
    return {v for i in C.degrees() for v in C.term(i)}


def _is_projective_sum(C: PerfectComplex) -> bool:
    M, _ = minimize(C)
    return all(_is_stalk_projective(P) is not None for P in summand_components(M))


def recollement_witness_search(A: AlgebraBasis, b: SearchBounds | None = None,
                               exceptional: Enumeration | None = None,
                               tilting: TiltingEnumeration | None = None,
                               resolution_cutoff: int = 6) -> WitnessSearch:
    """Ordered pairs ``(X, Y)``, both exceptional, with ``Hom(X, Y[n]) = 0`` for all ``n``
    and ``X + Y`` generating.

    Candidates for ``X`` and ``Y`` are the enumerated indecomposable exceptional
    objects and the partial sums of the enumerated tilting complexes.
    """
    b = b or SearchBounds()
    ex = exceptional if exceptional is not None else enumerate_exceptional(A, b)
    til = tilting if tilting is not None else enumerate_tilting(A, b, exceptional=ex)
    cands: list[tuple[str, PerfectComplex]] = [(f"E{i + 1}", X) for i, X in enumerate(ex.objects)]
    for t, T in enumerate(til.objects):
        blocks = T.blocks or []
        for r in range(2, len(blocks)):
            for sub in itertools.combinations(range(len(blocks)), r):
                members = [m for k in sub for m in blocks[k][1]]
                label = f"T{t + 1}[" + ",".join(blocks[k][0] for k in sub) + "]"
                cands.append((label, normalize_shift(_restrict(T, members))))
    # drop duplicates up to shift and isomorphism
    uniq: list[tuple[str, PerfectComplex]] = []
    for lab, C in cands:
        if not any(D.profile() == C.profile() and iso_K(D, C, seed=b.seed) for _, D in uniq):
            uniq.append((lab, C))
    exc = {lab: is_exceptional(C) for lab, C in uniq}
    pairs = []
    count = 0
    n = A.n_vertices
    for (lx, X), (ly, Y) in itertools.product(uniq, repeat=2):
        if lx == ly or not (exc[lx] and exc[ly]):
            continue
        count += 1
        if hom_dims(X, Y):
            continue
        # generation is shift-invariant per summand, so align the pair at degree 0
        S = complex_direct_sum([X, Y], labels=[lx, ly])
        verdict = generates(S, depth=b.depth, seed=b.seed)
        if not verdict.generates:
            continue
        sx, sy = _support(X), _support(Y)
        partition = not (sx & sy) and (sx | sy) == set(range(n))
        corner = None
        if partition:
            V = A.quiver.vertices
            e_block = [V[v] for v in sorted(sx)]
            f_block = [V[v] for v in sorted(sy)]
            try:
                M = corner_bimodule(A, e_block, f_block)
                res = min_resolution(M, cutoff=resolution_cutoff)
                corner = {"e": e_block, "f": f_block, "dims": list(M.dims), **res.to_json()}
            except ValueError as err:
                corner = {"e": e_block, "f": f_block, "error": str(err)}
        pairs.append(WitnessPair(X, Y, (lx, ly), (Y.start - X.end, Y.end - X.start), exc[lx], exc[ly], verdict,
                                 partition, _is_projective_sum(X) and _is_projective_sum(Y), corner))
    note = "absence within bounds is not a proof of absence; " + SWEEP_NOTE
    return WitnessSearch(pairs, ex.truncated or til.truncated, count, note)


# -- theorem-conclusion report ---------------------------------------------------------------

@dataclass
class Assertion:
    name: str
    vertex: str | None
    passed: bool
    checked: int
    counterexamples: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "vertex": self.vertex, "passed": self.passed, "checked": self.checked,
                "counterexamples": self.counterexamples}


@dataclass
class ConclusionsReport:
    qualifying: list[str]
    excluded: list[str]
    assertions: list[Assertion]
    truncated: bool
    note: str = SWEEP_NOTE

    @property
    def all_pass(self) -> bool:
        return all(a.passed for a in self.assertions)

    def to_json(self) -> dict:
        return {"qualifying": self.qualifying, "excluded": self.excluded, "all_pass": self.all_pass,
                "vacuous": not self.qualifying, "assertions": [a.to_json() for a in self.assertions],
                "truncated": self.truncated, "note": self.note}


def conclusions_report(A: AlgebraBasis, b: SearchBounds | None = None,
                       exceptional: Enumeration | None = None,
                       tilting: TiltingEnumeration | None = None) -> ConclusionsReport:
    """Check the structural statements for every qualifying projective over the enumerated objects.

    A projective ``P_s`` qualifies when the simple at ``s`` passes the condition checker.
    """
    b = b or SearchBounds()
    ex = exceptional if exceptional is not None else enumerate_exceptional(A, b)
    til = tilting if tilting is not None else enumerate_tilting(A, b, exceptional=ex)
    V = A.quiver.vertices
    qualifying = [s for s in range(A.n_vertices) if check_conditions(A, s).overall]
    excluded = [V[s] for s in range(A.n_vertices) if s not in qualifying]
    E = list(ex.objects)
    orth = [(i, j) for i in range(len(E)) for j in range(len(E)) if i != j and not hom_dims(E[i], E[j])]
    out: list[Assertion] = []
    for s in qualifying:
        bad = [E[k].describe() for k in range(len(E)) if len(E[k].appears_at(s)) > 1]
        out.append(Assertion("appears at no more than one degree", V[s], not bad, len(E), bad))
        bad, checked = [], 0
        for C in E:
            degs = C.appears_at(s)
            if not degs:
                continue
            checked += 1
            H = homology_at(C, degs[0])
            if socle(H).dims[s] == 0:
                bad.append(C.describe())
        out.append(Assertion("socle of first homology contains the simple", V[s], not bad, checked, bad))
        bad = [[E[i].describe(), E[j].describe()] for i, j in orth
               if E[i].appears_at(s) and E[j].appears_at(s)]
        out.append(Assertion("hom-orthogonal pairs have disjoint supports", V[s], not bad, len(orth), bad))
        bad = [T.describe() for T in til.objects if len(T.appears_at(s)) != 1]
        out.append(Assertion("appears at exactly one degree of every tilting complex", V[s], not bad,
                             len(til.objects), bad))
    bad = [T.describe() for T in til.objects if not is_gap_free(minimize(T)[0])]
    out.append(Assertion("tilting complexes are gap-free", None, not bad, len(til.objects), bad))
    return ConclusionsReport([V[s] for s in qualifying], excluded, out, ex.truncated or til.truncated)
