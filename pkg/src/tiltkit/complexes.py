"""Bounded complexes of finitely generated projective modules.

The term in degree ``i`` is a direct sum of indecomposable projectives
``A e_u``, listed by vertex. The differential ``D_i`` from degree ``i`` to
``i + 1`` is an algebra-valued matrix of shape ``(len X^i, len X^{i+1}, dim A)``;
the entry for the component ``A e_u -> A e_w`` lies in ``e_u A e_w`` and acts
by right multiplication. Maps therefore compose left to right:
"first ``D_i``, then ``D_{i+1}``" is the matrix product ``D_i D_{i+1}``, and
``d^2 = 0`` reads ``D_i D_{i+1} = 0``.

Shifts are unsigned: ``X[k]`` has terms ``X[k]^i = X^{i+k}`` and the same
differentials. Signs never affect any dimension or isomorphism test here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .algebra import AlgebraBasis, parse_path
from .finalg import FDAlgebra
from .modules import Module, ModuleMap, Submodule, direct_sum, projective, quotient


class ComplexError(ValueError):
    pass


def _mask(A: AlgebraBasis, U: Sequence[int], W: Sequence[int]) -> np.ndarray:
    """``mask[a, b, k]``: basis element ``k`` lies in ``e_{U[a]} A e_{W[b]}``."""
    if len(U) == 0 or len(W) == 0:
        return np.zeros((len(U), len(W), A.dim), dtype=bool)
    return A.piece_mask[np.ix_(list(U), list(W))]


class PerfectComplex:
    """A bounded complex of projectives; immutable by convention.

    ``blocks`` optionally records a direct-sum decomposition: a list of
    ``(label, [(degree, index), ...])`` naming which summands belong to each
    block (used for endomorphism-algebra idempotents).
    """

    def __init__(self, algebra: AlgebraBasis, start: int, terms: Sequence[Sequence[int]],
                 diffs: Sequence[np.ndarray] | None = None, check: bool = True, blocks=None):
        self.algebra = A = algebra
        F = A.field
        terms = [tuple(int(v) for v in t) for t in terms]
        # trim empty ends
        lo, hi = 0, len(terms)
        while lo < hi and not terms[lo]:
            lo += 1
        while hi > lo and not terms[hi - 1]:
            hi -= 1
        if diffs is None:
            diffs = [F.zeros((len(terms[i]), len(terms[i + 1]), A.dim)) for i in range(len(terms) - 1)]
        diffs = list(diffs)
        if len(diffs) != max(len(terms) - 1, 0):
            raise ComplexError("need one differential between consecutive terms")
        self.start = start + lo if hi > lo else 0
        self.terms = terms[lo:hi]
        self.diffs = []
        for i in range(lo, hi - 1):
            D = np.asarray(diffs[i], dtype=F.dtype).reshape(len(terms[i]), len(terms[i + 1]), A.dim)
            self.diffs.append(F.normalize(D))
        self.blocks = blocks  # members use absolute degrees, so trimming leaves them valid
        if check:
            self.validate()

    # -- basic data -----------------------------------------------------
    @property
    def end(self) -> int:
        return self.start + len(self.terms) - 1

    @property
    def field(self):
        return self.algebra.field

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> range:
        return range(self.start, self.end + 1)

    def term(self, i: int) -> tuple[int, ...]:
        if self.is_zero() or i < self.start or i > self.end:
            return ()
        return self.terms[i - self.start]

    def diff(self, i: int) -> np.ndarray:
        """``D_i: X^i -> X^{i+1}`` (zero-shaped outside the support)."""
        if self.start <= i < self.end:
            return self.diffs[i - self.start]
        return self.field.zeros((len(self.term(i)), len(self.term(i + 1)), self.algebra.dim))

    def multiplicities(self, i: int) -> tuple[int, ...]:
        t = self.term(i)
        return tuple(t.count(v) for v in range(self.algebra.n_vertices))

    def profile(self) -> tuple:
        return (self.start, tuple(self.multiplicities(i) for i in self.degrees()))

    def appears_at(self, v: int) -> list[int]:
        """Degrees in which ``A e_v`` is a summand."""
        return [i for i in self.degrees() if v in self.term(i)]

    def support_length(self) -> int:
        return 0 if self.is_zero() else self.end - self.start + 1

    def validate(self):
        A = self.algebra
        for i in range(self.start, self.end):
            D = self.diff(i)
            m = _mask(A, self.term(i), self.term(i + 1))
            if np.any(D[~m] != 0):
                raise ComplexError(f"differential at degree {i} has entries outside the allowed hom-pieces")
        for i in range(self.start, self.end - 1):
            if np.any(A.matmul(self.diff(i), self.diff(i + 1)) != 0):
                raise ComplexError(f"d^2 != 0 at degree {i}")

    def shift(self, k: int) -> "PerfectComplex":
        """``X[k]``: the term in degree ``i`` is ``X^{i+k}``."""
        blocks = None
        if self.blocks is not None:
            blocks = [(lab, [(d - k, j) for d, j in members]) for lab, members in self.blocks]
        out = PerfectComplex(self.algebra, self.start - k, self.terms, self.diffs, check=False)
        out.blocks = blocks
        return out

    def is_minimal(self) -> bool:
        A = self.algebra
        for i in range(self.start, self.end):
            D = self.diff(i)
            for v in range(A.n_vertices):
                if np.any(D[:, :, A.trivial[v]] != 0):
                    return False
        return True

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        A = self.algebra
        F = self.field
        V = A.quiver.vertices
        diffs = []
        for i in range(self.start, self.end):
            D = self.diff(i)
            rows = []
            for a in range(D.shape[0]):
                row = []
                for b in range(D.shape[1]):
                    row.append([[A.path_label(int(k)), F.to_json(D[a, b, k])] for k in np.flatnonzero(D[a, b] != 0)])
                rows.append(row)
            diffs.append(rows)
        out = {"start": self.start, "terms": [[V[v] for v in t] for t in self.terms], "differentials": diffs}
        if self.blocks is not None:
            out["blocks"] = [{"label": lab, "summands": [[d, k] for d, k in members]} for lab, members in self.blocks]
        return out

    @classmethod
    def from_json(cls, A: AlgebraBasis, data: dict) -> "PerfectComplex":
        F = A.field
        terms = [[A.vertex(v) for v in t] for t in data["terms"]]
        diffs = []
        for i, rows in enumerate(data.get("differentials", [])):
            D = F.zeros((len(terms[i]), len(terms[i + 1]), A.dim))
            for a, row in enumerate(rows):
                for b, entry in enumerate(row):
                    for label, coef in entry:
                        D[a, b] = F.normalize(D[a, b] + F.from_json(coef) * A.reduce_path(parse_path(label, A.quiver)))
            diffs.append(D)
        blocks = None
        if "blocks" in data:
            blocks = [(b["label"], [tuple(m) for m in b["summands"]]) for b in data["blocks"]]
        return cls(A, int(data["start"]), terms, diffs, blocks=blocks)

    def describe(self) -> str:
        if self.is_zero():
            return "0"
        V = self.algebra.quiver.vertices
        parts = []
        for i in self.degrees():
            t = self.term(i)
            parts.append(f"[{i}] " + (" + ".join("P_" + V[v] for v in t) if t else "0"))
        return " -> ".join(parts)

    def __repr__(self):
        return f"PerfectComplex({self.describe()})"


def stalk(A: AlgebraBasis, vertices, degree: int = 0) -> PerfectComplex:
    return PerfectComplex(A, degree, [[A.vertex(v) for v in vertices]])


def zero_complex(A: AlgebraBasis) -> PerfectComplex:
    return PerfectComplex(A, 0, [])


def two_term(A: AlgebraBasis, U, W, entries: dict, start: int = -1) -> PerfectComplex:
    """``U -> W`` in degrees ``start, start+1``; ``entries[(a, b)]`` is a path label or element."""
    F = A.field
    U = [A.vertex(u) for u in U]
    W = [A.vertex(w) for w in W]
    D = F.zeros((len(U), len(W), A.dim))
    for (a, b), x in entries.items():
        D[a, b] = A.element(x).coeffs
    return PerfectComplex(A, start, [U, W], [D])


def complex_direct_sum(complexes: Sequence[PerfectComplex], labels: Sequence[str] | None = None) -> PerfectComplex:
    """Direct sum; the result records which summands came from which input."""
    A = complexes[0].algebra
    F = A.field
    nonzero = [C for C in complexes if not C.is_zero()]
    labels = list(labels) if labels is not None else [f"T{k + 1}" for k in range(len(complexes))]
    if not nonzero:
        return zero_complex(A)
    lo = min(C.start for C in nonzero)
    hi = max(C.end for C in nonzero)
    terms = []
    members = [[] for _ in complexes]
    for i in range(lo, hi + 1):
        t = []
        for c, C in enumerate(complexes):
            for k, v in enumerate(C.term(i)):
                members[c].append((i, len(t)))
                t.append(v)
        terms.append(t)
    diffs = []
    for i in range(lo, hi):
        D = F.zeros((len(terms[i - lo]), len(terms[i + 1 - lo]), A.dim))
        r = c = 0
        for C in complexes:
            Di = C.diff(i)
            D[r:r + Di.shape[0], c:c + Di.shape[1]] = Di
            r += Di.shape[0]
            c += Di.shape[1]
        diffs.append(D)
    return PerfectComplex(A, lo, terms, diffs, check=False, blocks=list(zip(labels, members)))


# -- algebra-valued matrix helpers --------------------------------------------

def _unit_inverse(A: AlgebraBasis, x: np.ndarray, u: int) -> np.ndarray:
    """Inverse of a unit ``x`` of the local algebra ``e_u A e_u``."""
    F = A.field
    lam = x[A.trivial[u]]
    e = A.idempotent(u).coeffs
    y = F.normalize(x * F.inv(lam))  # e_u + r with r nilpotent
    r = F.normalize(y - e)
    inv = e.copy()
    term = e.copy()
    for _ in range(A.nilpotency_index + 1):
        term = F.normalize(-A._mul_vec(term, r))
        if not np.any(term != 0):
            break
        inv = F.normalize(inv + term)
    return F.normalize(inv * F.inv(lam))


def minimize(C: PerfectComplex) -> tuple[PerfectComplex, bool]:
    """Strip contractible summands ``P --unit--> P`` by Gaussian elimination.

    Returns ``(minimal complex, was_already_minimal)``.
    """
    A = C.algebra
    F = A.field
    start = C.start
    terms = [list(t) for t in C.terms]
    diffs = [D.copy() for D in C.diffs]
    blocks = C.blocks
    was_minimal = True
    while True:
        found = None
        for i, D in enumerate(diffs):
            for a, u in enumerate(terms[i]):
                for b, w in enumerate(terms[i + 1]):
                    if u == w and D[a, b, A.trivial[u]] != 0:
                        found = (i, a, b, u)
                        break
                if found:
                    break
            if found:
                break
        if not found:
            break
        was_minimal = False
        i, a, b, u = found
        D = diffs[i]
        phi_inv = _unit_inverse(A, D[a, b], u)
        rows = [r for r in range(D.shape[0]) if r != a]
        cols = [c for c in range(D.shape[1]) if c != b]
        gamma = D[rows][:, [b]]          # X' -> P
        beta = D[[a]][:, cols]           # P -> Y'
        delta = D[rows][:, cols]
        corr = A.matmul(A.matmul(gamma, phi_inv.reshape(1, 1, -1)), beta)
        diffs[i] = F.normalize(delta - corr)
        if i > 0:
            diffs[i - 1] = diffs[i - 1][:, [c for c in range(diffs[i - 1].shape[1]) if c != a]]
        if i + 1 < len(diffs):
            diffs[i + 1] = diffs[i + 1][[r for r in range(diffs[i + 1].shape[0]) if r != b]]
        if blocks is not None:
            blocks = _drop_members(blocks, [(start + i, a), (start + i + 1, b)])
        del terms[i][a]
        del terms[i + 1][b]
    out = PerfectComplex(A, start, terms, diffs, check=False)
    if blocks is not None:
        out.blocks = blocks
    return out, was_minimal


def _drop_members(blocks, removed):
    """Update block membership after deleting summands ``(degree, index)``."""
    out = []
    for lab, members in blocks:
        new = []
        for d, k in members:
            if (d, k) in removed:
                continue
            k2 = k - sum(1 for (d2, k3) in removed if d2 == d and k3 < k)
            new.append((d, k2))
        out.append((lab, new))
    return out


def length_of(C: PerfectComplex) -> int:
    M, _ = minimize(C)
    return M.support_length()


# -- Hom in the homotopy category ---------------------------------------------

def _left_op(A: AlgebraBasis, D: np.ndarray, m: int) -> np.ndarray:
    """Matrix of ``X (q, m, n) -> D X (p, m, n)`` for fixed ``D (p, q, n)``, row-major flattening."""
    F = A.field
    p, q, n = D.shape
    T = F.normalize(np.einsum("abi,ijk->akbj", D, A.struct))  # [a, k, b, j]
    op = F.zeros((p, m, n, q, m, n))
    for c in range(m):
        op[:, c, :, :, c, :] = T
    return op.reshape(p * m * n, q * m * n)


def _right_op(A: AlgebraBasis, D: np.ndarray, p: int) -> np.ndarray:
    """Matrix of ``X (p, q, n) -> X D (p, m, n)`` for fixed ``D (q, m, n)``."""
    F = A.field
    q, m, n = D.shape
    S = F.normalize(np.einsum("bcj,ijk->ckbi", D, A.struct))  # [c, k, b, i]
    op = F.zeros((p, m, n, p, q, n))
    for a in range(p):
        op[a, :, :, a, :, :] = S
    return op.reshape(p * m * n, p * q * n)


@dataclass
class ChainMap:
    source: PerfectComplex
    target: PerfectComplex
    shift: int
    components: dict  # degree i -> (len X^i, len Y^{i+shift}, dim A)

    def component(self, i: int) -> np.ndarray:
        if i in self.components:
            return self.components[i]
        A = self.source.algebra
        return A.field.zeros((len(self.source.term(i)), len(self.target.term(i + self.shift)), A.dim))

    def is_chain_map(self) -> bool:
        A = self.source.algebra
        X, Y, n = self.source, self.target, self.shift
        for i in range(X.start - 1, X.end + 1):
            lhs = A.matmul(X.diff(i), self.component(i + 1))
            rhs = A.matmul(self.component(i), Y.diff(i + n))
            if np.any(lhs != rhs):
                return False
        return True

    def then(self, other: "ChainMap") -> "ChainMap":
        """Composite "first ``self``, then ``other``"."""
        A = self.source.algebra
        comps = {}
        for i in self.source.degrees():
            a = self.component(i)
            b = other.component(i + self.shift)
            if a.shape[1] != b.shape[0]:
                raise ValueError("chain maps are not composable")
            comps[i] = A.matmul(a, b)
        return ChainMap(self.source, other.target, self.shift + other.shift, comps)


class HomotopyHomSpace:
    """``Hom_K(X, Y[n])``: chain maps modulo null-homotopic maps."""

    def __init__(self, X: PerfectComplex, Y: PerfectComplex, n: int):
        self.X, self.Y, self.n = X, Y, n
        A = self.algebra = X.algebra
        F = A.field
        # unknown blocks F_i : X^i -> Y^{i+n}
        self.var_blocks = []
        off = 0
        for i in X.degrees():
            U, W = X.term(i), Y.term(i + n)
            if not U or not W:
                continue
            idx = np.flatnonzero(_mask(A, U, W).ravel())
            self.var_blocks.append((i, len(U), len(W), idx, off))
            off += idx.size
        self.n_vars = off
        blk = {i: (p, q, idx, o) for i, p, q, idx, o in self.var_blocks}
        self._blk = blk
        # chain condition: D^X_i F_{i+1} - F_i D^Y_{i+n} = 0
        eqs = []
        for i in range(X.start - 1, X.end + 1):
            U, W = X.term(i), Y.term(i + n + 1)
            if not U or not W:
                continue
            ridx = np.flatnonzero(_mask(A, U, W).ravel())
            if ridx.size == 0:
                continue
            row = F.zeros((ridx.size, self.n_vars))
            if i + 1 in blk and X.diff(i).size:
                p, q, idx, o = blk[i + 1]
                op = _left_op(A, X.diff(i), q)[ridx][:, idx]
                row[:, o:o + idx.size] = F.normalize(row[:, o:o + idx.size] + op)
            if i in blk and Y.diff(i + n).size:
                p, q, idx, o = blk[i]
                op = _right_op(A, Y.diff(i + n), p)[ridx][:, idx]
                row[:, o:o + idx.size] = F.normalize(row[:, o:o + idx.size] - op)
            eqs.append(row)
        if self.n_vars == 0:
            self.Z = F.zeros((0, 0))
        elif eqs:
            self.Z = linalg.nullspace(np.concatenate(eqs, axis=0), F)
        else:
            self.Z = F.eye(self.n_vars)
        # null-homotopic maps: F_i = D^X_i H_{i+1} + H_i D^Y_{i+n-1}
        hblocks = []
        hoff = 0
        for i in X.degrees():
            U, W = X.term(i), Y.term(i + n - 1)
            if not U or not W:
                continue
            idx = np.flatnonzero(_mask(A, U, W).ravel())
            hblocks.append((i, len(U), len(W), idx, hoff))
            hoff += idx.size
        hb = {i: (p, q, idx, o) for i, p, q, idx, o in hblocks}
        Bm = F.zeros((self.n_vars, hoff))
        for i, p, q, fidx, fo in self.var_blocks:
            if i + 1 in hb and X.diff(i).size:
                hp, hq, hidx, ho = hb[i + 1]
                op = _left_op(A, X.diff(i), q)[fidx][:, hidx]
                Bm[fo:fo + fidx.size, ho:ho + hidx.size] = F.normalize(Bm[fo:fo + fidx.size, ho:ho + hidx.size] + op)
            if i in hb and Y.diff(i + n - 1).size:
                hp, hq, hidx, ho = hb[i]
                op = _right_op(A, Y.diff(i + n - 1), p)[fidx][:, hidx]
                Bm[fo:fo + fidx.size, ho:ho + hidx.size] = F.normalize(Bm[fo:fo + fidx.size, ho:ho + hidx.size] + op)
        self.B = linalg.span(Bm, F) if Bm.size else F.zeros((self.n_vars, 0))
        self.chain_dim = self.Z.shape[1]
        self.null_dim = self.B.shape[1]
        self.dim = self.chain_dim - self.null_dim
        if self.dim < 0:
            raise AssertionError("null-homotopic space larger than chain-map space")
        pick = linalg.extend_basis(self.B, self.Z, F)
        self.reps = self.Z[:, pick] if pick else F.zeros((self.n_vars, 0))
        self._solver = None

    def to_map(self, vec: np.ndarray) -> ChainMap:
        A = self.algebra
        F = A.field
        comps = {}
        for i, p, q, idx, o in self.var_blocks:
            full = F.zeros(p * q * A.dim)
            full[idx] = vec[o:o + idx.size]
            comps[i] = full.reshape(p, q, A.dim)
        return ChainMap(self.X, self.Y, self.n, comps)

    def to_vector(self, f: ChainMap) -> np.ndarray:
        F = self.algebra.field
        vec = F.zeros(self.n_vars)
        for i, p, q, idx, o in self.var_blocks:
            vec[o:o + idx.size] = f.component(i).ravel()[idx]
        return vec

    def representatives(self) -> list[ChainMap]:
        return [self.to_map(self.reps[:, k]) for k in range(self.reps.shape[1])]

    def coordinates(self, f: ChainMap | np.ndarray) -> np.ndarray:
        """Coordinates of a chain map modulo homotopy in the representative basis."""
        F = self.algebra.field
        v = f if isinstance(f, np.ndarray) else self.to_vector(f)
        M = np.concatenate([self.reps, self.B], axis=1)
        x = linalg.solve(M, v, F)
        if x is None:
            raise ValueError("not a chain map")
        return x[: self.dim]

    def is_null_homotopic(self, f: ChainMap) -> bool:
        return not np.any(self.coordinates(f) != 0)

    def __repr__(self):
        return f"HomotopyHomSpace(dim={self.dim}, chain={self.chain_dim}, null={self.null_dim})"


def hom_K(X: PerfectComplex, Y: PerfectComplex, n: int = 0) -> HomotopyHomSpace:
    if X.algebra is not Y.algebra:
        raise ValueError("complexes over different algebras")
    return HomotopyHomSpace(X, Y, n)


def hom_dims(X: PerfectComplex, Y: PerfectComplex) -> dict[int, int]:
    """All nonzero ``dim Hom_K(X, Y[n])``; outside the listed window they vanish by degree support."""
    if X.is_zero() or Y.is_zero():
        return {}
    out = {}
    for n in range(Y.start - X.end, Y.end - X.start + 1):
        d = hom_K(X, Y, n).dim
        if d:
            out[n] = d
    return out


def euler_pairing(X: PerfectComplex, Y: PerfectComplex) -> int:
    """``sum_n (-1)^n dim Hom_K(X, Y[n])`` computed from multiplicities alone."""
    D = X.algebra.piece_dims()  # D[u, w] = dim e_u A e_w = dim Hom(A e_u, A e_w)
    total = 0
    for i in X.degrees():
        for j in Y.degrees():
            n = j - i
            mx = np.array(X.multiplicities(i))
            my = np.array(Y.multiplicities(j))
            total += (-1) ** (n % 2) * int(mx @ D @ my)
    return total


def is_exceptional(X: PerfectComplex) -> bool:
    return exceptional_witness(X) is None


def exceptional_witness(X: PerfectComplex) -> int | None:
    """A shift ``n != 0`` with ``Hom_K(X, X[n]) != 0``, or ``None``."""
    if X.is_zero():
        return None
    L = X.support_length()
    for n in sorted(range(-(L - 1), L), key=lambda k: (abs(k), -k)):
        if n and hom_K(X, X, n).dim:
            return n
    return None


# -- endomorphism algebras ------------------------------------------------------

def endomorphism_algebra(X: PerfectComplex, H: HomotopyHomSpace | None = None) -> tuple[FDAlgebra, HomotopyHomSpace]:
    """``End_K(X)`` with product ``x * y`` = "first ``x``, then ``y``".

    In the right-action convention this is the opposite of the usual
    composition, i.e. the algebra returned is ``End_K(X)^op``.
    """
    H = H or hom_K(X, X, 0)
    A = X.algebra
    F = A.field
    reps = H.representatives()
    m = len(reps)
    struct = F.zeros((m, m, m))
    for a in range(m):
        for b in range(m):
            struct[a, b] = H.coordinates(reps[a].then(reps[b]))
    ident = identity_map(X)
    one = H.coordinates(ident)
    return FDAlgebra(struct, F, one=one), H


def identity_map(X: PerfectComplex) -> ChainMap:
    A = X.algebra
    F = A.field
    comps = {}
    for i in X.degrees():
        t = X.term(i)
        M = F.zeros((len(t), len(t), A.dim))
        for k, v in enumerate(t):
            M[k, k, A.trivial[v]] = F.scalar(1)
        comps[i] = M
    return ChainMap(X, X, 0, comps)


def is_indecomposable(X: PerfectComplex) -> bool:
    if X.is_zero():
        raise ValueError("the zero complex is not indecomposable")
    E, _ = endomorphism_algebra(X)
    return E.is_local()


# -- isomorphism --------------------------------------------------------------

def _scalar_blocks_invertible(A: AlgebraBasis, f: ChainMap) -> bool:
    F = A.field
    X, Y = f.source, f.target
    for i in X.degrees():
        C = f.component(i)
        U, W = X.term(i), Y.term(i + f.shift)
        for v in range(A.n_vertices):
            rows = [a for a, u in enumerate(U) if u == v]
            cols = [b for b, w in enumerate(W) if w == v]
            if len(rows) != len(cols):
                return False
            if rows and linalg.rank(C[np.ix_(rows, cols)][:, :, A.trivial[v]], F) < len(rows):
                return False
    return True


def iso_K(X: PerfectComplex, Y: PerfectComplex, samples: int = 32, seed: int = 0) -> bool:
    """Isomorphism in the homotopy category, decided on minimal forms."""
    A = X.algebra
    F = A.field
    MX, _ = minimize(X)
    MY, _ = minimize(Y)
    if MX.is_zero() or MY.is_zero():
        return MX.is_zero() and MY.is_zero()
    if MX.profile() != MY.profile():
        return False
    H = hom_K(MX, MY, 0)
    Z = H.Z
    if Z.shape[1] == 0:
        return False
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        c = F.random(rng, Z.shape[1])
        if _scalar_blocks_invertible(A, H.to_map(F.matmul(Z, c.reshape(-1, 1)).reshape(-1))):
            return True
    # deterministic fallback: basis vectors, then sums with small coefficients
    k = Z.shape[1]
    for r in range(1, min(k, 3) + 1):
        for combo in itertools.combinations(range(k), r):
            for coefs in itertools.product(range(1, 4), repeat=r):
                c = F.zeros(k)
                for j, cj in zip(combo, coefs):
                    c[j] = F.scalar(cj)
                if _scalar_blocks_invertible(A, H.to_map(F.matmul(Z, c.reshape(-1, 1)).reshape(-1))):
                    return True
    return False


# -- cones and homology ----------------------------------------------------------

def cone(f: ChainMap) -> PerfectComplex:
    """Mapping cone of ``f: X -> Y[n]``: degree ``i`` is ``X^{i+1} + Y^{i+n}``."""
    X, n = f.source, f.shift
    Y = f.target.shift(n) if n else f.target
    A = X.algebra
    F = A.field
    if X.is_zero():
        return Y
    lo = min(X.start - 1, Y.start if not Y.is_zero() else X.start - 1)
    hi = max(X.end - 1, Y.end if not Y.is_zero() else X.end - 1)
    terms = [list(X.term(i + 1)) + list(Y.term(i)) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        px, py = len(X.term(i + 1)), len(Y.term(i))
        qx, qy = len(X.term(i + 2)), len(Y.term(i + 1))
        D = F.zeros((px + py, qx + qy, A.dim))
        D[:px, :qx] = F.normalize(-X.diff(i + 1))
        D[:px, qx:] = f.component(i + 1)
        D[px:, qx:] = Y.diff(i)
        diffs.append(D)
    return PerfectComplex(A, lo, terms, diffs)


def _projective_sum(A: AlgebraBasis, U: Sequence[int]) -> Module:
    if not U:
        return Module(A, [0] * A.n_vertices, [A.field.zeros((0, 0)) for _ in A.quiver.arrows], check=False)
    return direct_sum([projective(A, u) for u in U])


def differential_module_map(A: AlgebraBasis, U: Sequence[int], W: Sequence[int], D: np.ndarray) -> ModuleMap:
    """The module homomorphism ``(+) A e_u -> (+) A e_w`` given by right multiplication."""
    F = A.field
    S, T = _projective_sum(A, U), _projective_sum(A, W)
    blocks = []
    for v in range(A.n_vertices):
        rows_off = np.cumsum([0] + [len(A.pieces[(w, v)]) for w in W])
        cols = []
        for a, u in enumerate(U):
            for k in A.pieces[(u, v)]:
                col = F.zeros(int(rows_off[-1]))
                for b, w in enumerate(W):
                    x = D[a, b]
                    if not np.any(x != 0):
                        continue
                    prod = F.matmul(A.struct[k].T, x.reshape(-1, 1)).reshape(-1)  # basis_k * x
                    col[rows_off[b]:rows_off[b + 1]] = prod[A.pieces[(w, v)]]
                cols.append(col)
        blocks.append(np.column_stack(cols) if cols else F.zeros((int(rows_off[-1]), 0)))
    return ModuleMap(S, T, blocks)


def homology_at(C: PerfectComplex, i: int) -> Module:
    """``H^i(C) = ker D_i / im D_{i-1}`` as a module."""
    A = C.algebra
    F = A.field
    U = C.term(i)
    dout = differential_module_map(A, U, C.term(i + 1), C.diff(i))
    din = differential_module_map(A, C.term(i - 1), U, C.diff(i - 1))
    K = dout.kernel()
    I = din.image()
    sub = []
    for v in range(A.n_vertices):
        if I.bases[v].shape[1] == 0:
            sub.append(F.zeros((K.bases[v].shape[1], 0)))
        else:
            sub.append(linalg.solve(K.bases[v], I.bases[v], F))
    Q, _ = quotient(Submodule(K.module, sub))
    return Q
