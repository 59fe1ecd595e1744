"""Seeded generators for random algebras, complexes and modules used in the property suites."""

from __future__ import annotations

import numpy as np

from tiltkit.algebra import AlgebraBasis, TensorFamilySpec, build_tensor_family
from tiltkit.complexes import PerfectComplex, cone, hom_K


def random_tensor_spec(seed: int) -> TensorFamilySpec:
    """A connected acyclic base quiver on 2-3 vertices with truncated loops at every vertex."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    vertices = [f"v{k}" for k in range(n)]
    arrows = []
    # spanning tree along a random order keeps the quiver connected and acyclic
    order = list(rng.permutation(n))
    for k in range(1, n):
        j = order[int(rng.integers(0, k))]
        arrows.append((j, order[k]))
    # occasional extra arrow, oriented along the order so no cycle appears
    if rng.random() < 0.4:
        a, b = sorted(rng.choice(n, size=2, replace=False), key=order.index)
        arrows.append((a, b))
    orders = {v: int(rng.integers(2, 4)) for v in vertices}
    labelled = [(f"a{k}", vertices[s], vertices[t]) for k, (s, t) in enumerate(arrows)]
    lengths = {lab: int(rng.integers(1, min(orders[s], orders[t]))) for lab, s, t in labelled}
    extra = []
    composable = [(p, q) for p in labelled for q in labelled if p[2] == q[1]]
    if composable and rng.random() < 0.5:
        p, q = composable[int(rng.integers(0, len(composable)))]
        extra.append(f"{q[0]}*{p[0]}")
    return TensorFamilySpec(vertices, labelled, orders, lengths, extra)


def random_tensor_algebra(seed: int) -> AlgebraBasis:
    return build_tensor_family(random_tensor_spec(seed))


def random_element(A: AlgebraBasis, u: int, w: int, rng) -> np.ndarray:
    """A random element of ``e_u A e_w`` (the entry space of a map ``A e_u -> A e_w``)."""
    F = A.field
    x = F.zeros(A.dim)
    idx = np.flatnonzero(A.piece_mask[u, w])
    if idx.size:
        x[idx] = F.random(rng, (idx.size,))
    return x


def random_two_term(A: AlgebraBasis, rng, start: int = -1) -> PerfectComplex:
    nv = A.n_vertices
    U = [int(v) for v in rng.integers(0, nv, size=int(rng.integers(1, 3)))]
    W = [int(v) for v in rng.integers(0, nv, size=int(rng.integers(1, 3)))]
    D = A.field.zeros((len(U), len(W), A.dim))
    for a, u in enumerate(U):
        for b, w in enumerate(W):
            D[a, b] = random_element(A, u, w, rng)
    return PerfectComplex(A, start, [U, W], [D])


def random_stalk(A: AlgebraBasis, rng) -> PerfectComplex:
    nv = A.n_vertices
    U = [int(v) for v in rng.integers(0, nv, size=int(rng.integers(1, 3)))]
    return PerfectComplex(A, int(rng.integers(-1, 2)), [U])


def random_chain_map_cone(X: PerfectComplex, Y: PerfectComplex, n: int, rng) -> PerfectComplex:
    """Cone of a random chain map ``X -> Y[n]`` (any chain map, not only modulo homotopy)."""
    H = hom_K(X, Y, n)
    F = X.algebra.field
    if H.Z.shape[1] == 0:
        return cone(H.to_map(F.zeros(H.n_vars)))
    coeffs = F.random(rng, (H.Z.shape[1], 1))
    vec = F.matmul(H.Z, coeffs).reshape(-1)
    return cone(H.to_map(vec))


def random_complex(A: AlgebraBasis, rng) -> PerfectComplex:
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return random_stalk(A, rng)
    if kind == 1:
        return random_two_term(A, rng, start=int(rng.integers(-1, 1)))
    X = random_two_term(A, rng)
    Y = random_stalk(A, rng) if rng.random() < 0.5 else random_two_term(A, rng)
    return random_chain_map_cone(X, Y, int(rng.integers(-1, 2)), rng)
