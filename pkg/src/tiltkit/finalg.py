"""Finite-dimensional algebras given by structure constants.

Used for endomorphism algebras: radical, primitive idempotents, and a
quiver-with-relations presentation recovered from the multiplication table.
The radical is the radical of the trace form ``(x, y) -> tr(L_{xy})``, which
is the Jacobson radical in characteristic 0 and in characteristic ``p > dim``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import linalg
from .algebra import AlgebraBasis, Path, Quiver, compute_basis
from .field import Field


class FDAlgebra:
    """``struct[i, j]`` is the coordinate vector of ``b_i * b_j``."""

    def __init__(self, struct: np.ndarray, field: Field, one: np.ndarray | None = None):
        self.struct = struct
        self.field = field
        self.dim = struct.shape[0]
        self._one = one
        self._rad = None

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        F = self.field
        n = self.dim
        if n == 0:
            return F.zeros(0)
        t = F.matmul(a.reshape(1, -1), self.struct.reshape(n, n * n)).reshape(n, n)
        return F.matmul(b.reshape(1, -1), t).reshape(-1)

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        n = self.dim
        return np.ascontiguousarray(self.field.matmul(a.reshape(1, -1), self.struct.reshape(n, n * n)).reshape(n, n).T)

    def one(self) -> np.ndarray:
        if self._one is None:
            F = self.field
            n = self.dim
            # u * b_j = sum_i u_i struct[i, j]; solve u * b_j = b_j for every j
            A_ = np.concatenate([np.ascontiguousarray(self.struct[:, j, :].T) for j in range(n)], axis=0)
            b = np.concatenate([F.eye(n)[:, j] for j in range(n)])
            x = linalg.solve(A_, b, F)
            if x is None:
                raise ValueError("algebra has no unit")
            self._one = x
        return self._one

    def radical(self) -> np.ndarray:
        """Basis (columns) of the radical."""
        if self._rad is None:
            F = self.field
            n = self.dim
            if F.p is not None and F.p <= n:
                raise ValueError(f"trace-form radical needs characteristic > {n}; use a larger prime")
            G = F.zeros((n, n))
            for i in range(n):
                for j in range(n):
                    prod = self.struct[i, j]
                    L = F.matmul(prod.reshape(1, -1), self.struct.reshape(n, n * n)).reshape(n, n)
                    G[i, j] = F.normalize(np.trace(L)) if F.p is not None else sum(L[k, k] for k in range(n))
            self._rad = linalg.nullspace(G, F)
        return self._rad

    def products(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Span of ``{u * v}`` for columns ``u`` of ``U`` and ``v`` of ``V``."""
        F = self.field
        cols = [self.mul(U[:, a], V[:, b]) for a in range(U.shape[1]) for b in range(V.shape[1])]
        if not cols:
            return F.zeros((self.dim, 0))
        return linalg.span(np.column_stack(cols), F)

    def radical_powers(self) -> list[np.ndarray]:
        """``[rad^1, rad^2, ...]`` up to and including the first zero power."""
        R = self.radical()
        out = [R]
        while out[-1].shape[1]:
            out.append(self.products(out[-1], R))
        return out

    def is_local(self) -> bool:
        return self.dim - self.radical().shape[1] == 1

    def corner(self, e: np.ndarray, f: np.ndarray, V: np.ndarray | None = None) -> np.ndarray:
        """Basis of ``e V f`` (``V`` defaults to the whole algebra)."""
        F = self.field
        if V is None:
            V = F.eye(self.dim)
        cols = [self.mul(self.mul(e, V[:, k]), f) for k in range(V.shape[1])]
        if not cols:
            return F.zeros((self.dim, 0))
        return linalg.span(np.column_stack(cols), F)

    def power(self, x: np.ndarray, k: int) -> np.ndarray:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def lift_idempotent(self, e: np.ndarray, max_iter: int = 64) -> np.ndarray:
        F = self.field
        for _ in range(max_iter):
            e2 = self.mul(e, e)
            if np.all(e2 == e):
                return e
            e3 = self.mul(e2, e)
            e = F.normalize(F.scalar(3) * e2 - F.scalar(2) * e3)
        raise ValueError("idempotent lifting did not converge")

    def primitive_idempotents(self, rng: np.random.Generator | None = None, tries: int = 40) -> list[np.ndarray]:
        """A complete set of primitive orthogonal idempotents, assuming the
        algebra is split basic (``A / rad`` a product of copies of the field)."""
        F = self.field
        m = self.dim - self.radical().shape[1]
        rng = rng or np.random.default_rng(0)
        for _ in range(tries):
            x = F.random(rng, self.dim)
            roots = self._min_poly_roots(x)
            if roots is None or len(roots) != m:
                continue
            idem = []
            for i, lam in enumerate(roots):
                e = self.one().copy()
                for j, mu in enumerate(roots):
                    if j != i:
                        c = F.inv(F.scalar(lam - mu))
                        e = F.normalize(self.mul(e, F.normalize(x - F.scalar(mu) * self.one())) * c)
                idem.append(self.lift_idempotent(e))
            return idem
        raise ValueError("could not split the algebra into primitive idempotents (not split basic?)")

    def _min_poly_roots(self, x: np.ndarray):
        F = self.field
        powers = [self.one()]
        while True:
            nxt = self.mul(powers[-1], x)
            M = np.column_stack(powers)
            c = linalg.solve(M, nxt, F)
            if c is not None:
                break
            powers.append(nxt)
        coeffs = [F.normalize(-ci) if F.p is not None else -ci for ci in c] + [F.scalar(1)]  # low -> high
        if F.p is None:
            t = sympy.Symbol("t")
            poly = sympy.Poly(list(reversed([sympy.Rational(ci.numerator, ci.denominator) for ci in coeffs])), t)
            _, factors = sympy.factor_list(poly.as_expr(), t)
            if any(sympy.degree(f, t) != 1 for f, _ in factors):
                return None
            return sorted(_to_fraction(sympy.solve(f, t)[0]) for f, _ in factors)
        p = F.p
        grid = np.arange(p, dtype=np.int64)
        val = np.zeros(p, dtype=np.int64)
        for ci in reversed(coeffs):
            val = (val * grid + int(ci)) % p
        roots = [int(r) for r in np.flatnonzero(val == 0)]
        # all factors must be linear: check multiplicities add up
        total = 0
        for r in roots:
            total += _root_multiplicity([int(c) for c in coeffs], r, p)
        if total != len(coeffs) - 1:
            return None
        return roots


def _to_fraction(r):
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def _root_multiplicity(coeffs: list[int], r: int, p: int) -> int:
    """Multiplicity of ``r`` as a root of the polynomial with low-to-high ``coeffs`` over F_p."""
    mult = 0
    c = coeffs[:]
    while len(c) > 1:
        # synthetic division by (t - r)
        q = [0] * (len(c) - 1)
        acc = 0
        for i in range(len(c) - 1, 0, -1):
            acc = (acc * r + c[i]) % p
            q[i - 1] = acc
        rem = (acc * r + c[0]) % p
        if rem:
            break
        mult += 1
        c = q
    return mult


@dataclass
class Presentation:
    quiver: Quiver
    relations: list[dict]
    algebra: AlgebraBasis
    arrow_elements: list[np.ndarray]
    path_images: dict  # Path -> coordinate vector in the source algebra
    basis_map: np.ndarray  # columns: images of the presented algebra's basis paths


def present(alg: FDAlgebra, idempotents: list[np.ndarray], names: list[str] | None = None,
            arrow_prefix: str = "g") -> Presentation:
    """Quiver with relations for a split basic algebra with a given complete set of
    primitive orthogonal idempotents. Vertex ``i`` corresponds to ``idempotents[i]``;
    arrows ``i -> j`` are chosen in ``e_j rad e_i`` modulo ``e_j rad^2 e_i``."""
    F = alg.field
    n = len(idempotents)
    names = names or [f"v{i}" for i in range(n)]
    pows = alg.radical_powers()
    R = pows[0]
    R2 = pows[1] if len(pows) > 1 else F.zeros((alg.dim, 0))
    arrows: list[tuple[str, str, str]] = []
    elems: list[np.ndarray] = []
    for i in range(n):
        for j in range(n):
            top = alg.corner(idempotents[j], idempotents[i], R)
            low = alg.corner(idempotents[j], idempotents[i], R2)
            pick = linalg.extend_basis(low, top, F)
            for k in pick:
                arrows.append((f"{arrow_prefix}{len(arrows) + 1}", names[i], names[j]))
                elems.append(top[:, k])
    quiver = Quiver(names, arrows)
    L = len(pows)  # rad^L = 0 means paths of length >= L vanish
    images: dict[Path, np.ndarray] = {}
    frontier = []
    for v in range(n):
        p = Path(v, v)
        images[p] = idempotents[v]
        frontier.append(p)
    for _ in range(L):
        nxt = []
        for p in frontier:
            for ai, a in enumerate(quiver.arrows):
                if a.source == p.target:
                    q = Path(p.source, a.target, (ai,) + p.arrows)
                    images[q] = alg.mul(elems[ai], images[p])
                    nxt.append(q)
        frontier = nxt
    paths = sorted(images, key=Path.key)
    M = np.column_stack([images[p] for p in paths])
    K = linalg.nullspace(M, F)
    # keep relations only up to the ideal they generate, shortest first
    relations: list[dict] = []
    by_ends: dict[tuple[int, int], list[int]] = {}
    for idx, p in enumerate(paths):
        by_ends.setdefault((p.source, p.target), []).append(idx)
    pos = {p: i for i, p in enumerate(paths)}
    ideal = F.zeros((len(paths), 0))

    def closure(vecs):
        cols = list(vecs)
        out = []
        for v in cols:
            nz = np.flatnonzero(v != 0)
            for u in paths:
                for w in paths:
                    w_ = F.zeros(len(paths))
                    ok = False
                    for k in nz:
                        q = u.after(paths[k])
                        q = q.after(w) if q is not None else None
                        if q is not None and q in pos:
                            w_[pos[q]] = F.normalize(w_[pos[q]] + v[k])
                            ok = True
                    if ok and np.any(w_ != 0):
                        out.append(w_)
        return out

    Ksorted = sorted((K[:, c] for c in range(K.shape[1])),
                     key=lambda v: max(paths[k].length for k in np.flatnonzero(v != 0)))
    for v in Ksorted:
        if ideal.shape[1] and linalg.in_span(ideal, v, F):
            continue
        relations.append({paths[k]: v[k] for k in np.flatnonzero(v != 0)})
        new = closure([v])
        if new:
            ideal = linalg.span(np.column_stack([ideal] + [c.reshape(-1, 1) for c in new]), F)
    B = compute_basis(quiver, relations, F)
    if B.dim != alg.dim:
        raise ValueError(f"presentation has dimension {B.dim}, expected {alg.dim}")
    basis_map = np.column_stack([images[p] for p in B.basis])
    if linalg.rank(basis_map, F) != alg.dim:
        raise ValueError("presentation basis does not map onto the algebra")
    return Presentation(quiver, relations, B, elems, images, basis_map)
