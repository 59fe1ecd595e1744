"""Finite-dimensional left modules as quiver representations.

A module stores one vector space per vertex (by dimension) and one matrix per
arrow, of shape ``(dim target, dim source)``. Right modules are handled as
left modules over the opposite algebra (see :func:`dual_module`).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .algebra import AlgebraBasis, Path


class Module:
    def __init__(self, algebra: AlgebraBasis, dims, maps, check: bool = True):
        self.algebra = algebra
        F = algebra.field
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n_vertices:
            raise ValueError("one dimension per vertex expected")
        arrows = algebra.quiver.arrows
        self.maps = []
        for a, M in zip(arrows, maps):
            M = np.asarray(M, dtype=F.dtype).reshape(self.dims[a.target], self.dims[a.source])
            self.maps.append(M)
        if len(self.maps) != len(arrows):
            raise ValueError("one matrix per arrow expected")
        self.maps = tuple(self.maps)
        if check:
            for rel in algebra.relations:
                if np.any(self.relation_action(rel) != 0):
                    raise ValueError("module does not satisfy the relations of the algebra")

    @property
    def field(self):
        return self.algebra.field

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def dim_vector(self) -> tuple[int, ...]:
        return self.dims

    def offsets(self) -> list[int]:
        return list(np.cumsum((0,) + self.dims[:-1]))

    def path_action(self, p: Path) -> np.ndarray:
        """Matrix ``M_source -> M_target`` of a path."""
        F = self.field
        out = F.eye(self.dims[p.source])
        for a in reversed(p.arrows):
            out = F.matmul(self.maps[a], out)
        return out

    def relation_action(self, rel) -> np.ndarray:
        F = self.field
        out = None
        for p, c in rel.items():
            term = F.normalize(self.path_action(p) * F.scalar(c))
            out = term if out is None else F.normalize(out + term)
        return out

    def element_action(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``m -> x m`` on the total space (vertex blocks in order)."""
        A = self.algebra
        F = self.field
        off = self.offsets()
        out = F.zeros((self.dim, self.dim))
        for k in np.flatnonzero(x != 0):
            p = A.basis[k]
            s, t = p.source, p.target
            block = F.normalize(self.path_action(p) * x[k])
            out[off[t]:off[t] + self.dims[t], off[s]:off[s] + self.dims[s]] = F.normalize(
                out[off[t]:off[t] + self.dims[t], off[s]:off[s] + self.dims[s]] + block)
        return out

    def to_json(self) -> dict:
        A = self.algebra
        F = self.field
        return {
            "dims": {A.quiver.vertices[v]: d for v, d in enumerate(self.dims)},
            "arrows": {a.label: [[F.to_json(x) for x in row] for row in M.tolist()]
                       for a, M in zip(A.quiver.arrows, self.maps)},
        }

    def __repr__(self):
        return f"Module(dims={self.dims})"


@dataclass
class ModuleMap:
    source: Module
    target: Module
    blocks: list  # per vertex: (dim target_v, dim source_v)

    def check(self) -> bool:
        F = self.source.field
        for ai, a in enumerate(self.source.algebra.quiver.arrows):
            lhs = F.matmul(self.target.maps[ai], self.blocks[a.source])
            rhs = F.matmul(self.blocks[a.target], self.source.maps[ai])
            if np.any(lhs != rhs):
                return False
        return True

    def image(self) -> "Submodule":
        F = self.source.field
        return Submodule(self.target, [linalg.span(B, F) for B in self.blocks])

    def kernel(self) -> "Submodule":
        F = self.source.field
        return Submodule(self.source, [linalg.nullspace(B, F) for B in self.blocks])

    def is_zero(self) -> bool:
        return all(not np.any(B != 0) for B in self.blocks)


class Submodule:
    """A submodule given by per-vertex basis columns inside an ambient module."""

    def __init__(self, ambient: Module, bases):
        F = ambient.field
        self.ambient = ambient
        self.bases = []
        for v, B in enumerate(bases):
            B = np.asarray(B, dtype=F.dtype)
            if B.ndim != 2 or B.shape[0] != ambient.dims[v]:
                B = B.reshape(ambient.dims[v], -1) if B.size else F.zeros((ambient.dims[v], 0))
            self.bases.append(B)
        self._module = None

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(B.shape[1] for B in self.bases)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def is_submodule(self) -> bool:
        F = self.ambient.field
        for ai, a in enumerate(self.ambient.algebra.quiver.arrows):
            img = F.matmul(self.ambient.maps[ai], self.bases[a.source])
            if not linalg.contains(self.bases[a.target], img, F):
                return False
        return True

    @property
    def module(self) -> Module:
        """The submodule as a module in its own right."""
        if self._module is None:
            F = self.ambient.field
            maps = []
            for ai, a in enumerate(self.ambient.algebra.quiver.arrows):
                img = F.matmul(self.ambient.maps[ai], self.bases[a.source])
                if self.bases[a.target].shape[1] == 0 or img.shape[1] == 0:
                    maps.append(F.zeros((self.dims[a.target], self.dims[a.source])))
                else:
                    coords = linalg.solve(self.bases[a.target], img, F)
                    if coords is None:
                        raise ValueError("not a submodule")
                    maps.append(coords)
            self._module = Module(self.ambient.algebra, self.dims, maps, check=False)
        return self._module

    def inclusion(self) -> ModuleMap:
        return ModuleMap(self.module, self.ambient, list(self.bases))

    def __add__(self, other: "Submodule") -> "Submodule":
        F = self.ambient.field
        return Submodule(self.ambient, [linalg.span(np.concatenate([a, b], axis=1), F)
                                        for a, b in zip(self.bases, other.bases)])

    def intersect(self, other: "Submodule") -> "Submodule":
        F = self.ambient.field
        return Submodule(self.ambient, [linalg.intersect(a, b, F) for a, b in zip(self.bases, other.bases)])

    def contains(self, other: "Submodule") -> bool:
        F = self.ambient.field
        return all(linalg.contains(a, b, F) for a, b in zip(self.bases, other.bases))

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        return f"Submodule(dims={self.dims} in {self.ambient.dims})"


# -- constructions ---------------------------------------------------------------

def projective(A: AlgebraBasis, v) -> Module:
    """``A e_v``: the w-space is spanned by normal-form paths v -> w."""
    v = A.vertex(v)
    F = A.field
    dims = [len(A.pieces[(v, w)]) for w in range(A.n_vertices)]
    maps = []
    for ai, a in enumerate(A.quiver.arrows):
        src = A.pieces[(v, a.source)]
        tgt = A.pieces[(v, a.target)]
        k = A.index[Path(a.source, a.target, (ai,))]
        M = F.zeros((len(tgt), len(src)))
        for c, j in enumerate(src):
            M[:, c] = A.struct[k, j, tgt]
        maps.append(M)
    return Module(A, dims, maps, check=False)


def simple(A: AlgebraBasis, v) -> Module:
    v = A.vertex(v)
    dims = [1 if w == v else 0 for w in range(A.n_vertices)]
    maps = [A.field.zeros((dims[a.target], dims[a.source])) for a in A.quiver.arrows]
    return Module(A, dims, maps, check=False)


def direct_sum(modules: list[Module]) -> Module:
    A = modules[0].algebra
    F = A.field
    dims = [sum(M.dims[v] for M in modules) for v in range(A.n_vertices)]
    maps = []
    for ai, a in enumerate(A.quiver.arrows):
        out = F.zeros((dims[a.target], dims[a.source]))
        r = c = 0
        for M in modules:
            h, w = M.maps[ai].shape
            out[r:r + h, c:c + w] = M.maps[ai]
            r += h
            c += w
        maps.append(out)
    return Module(A, dims, maps, check=False)


def quotient(U: Submodule) -> tuple[Module, ModuleMap]:
    """``M / U`` with its projection; complements are chosen among standard basis vectors."""
    M = U.ambient
    F = M.field
    comps = [linalg.complement(B, F) for B in U.bases]
    # coordinates of m in the basis [U | comp]; keep the comp part
    proj = []
    for v in range(len(comps)):
        full = np.concatenate([U.bases[v], comps[v]], axis=1)
        if full.shape[1] == 0:
            proj.append(F.zeros((0, M.dims[v])))
            continue
        inv = linalg.inverse(full, F)
        proj.append(inv[U.bases[v].shape[1]:])
    maps = []
    for ai, a in enumerate(M.algebra.quiver.arrows):
        maps.append(F.matmul(proj[a.target], F.matmul(M.maps[ai], comps[a.source])))
    Q = Module(M.algebra, [c.shape[1] for c in comps], maps, check=False)
    return Q, ModuleMap(M, Q, proj)


def generated_submodule(M: Module, vectors: list[tuple[int, np.ndarray]]) -> Submodule:
    """Submodule generated by vectors ``(vertex, vector in M_vertex)``."""
    F = M.field
    n = M.algebra.n_vertices
    bases = [F.zeros((M.dims[v], 0)) for v in range(n)]
    queue = list(vectors)
    while queue:
        v, x = queue.pop()
        x = np.asarray(x, dtype=F.dtype).reshape(-1)
        if not np.any(x != 0) or linalg.in_span(bases[v], x, F):
            continue
        bases[v] = np.concatenate([bases[v], x.reshape(-1, 1)], axis=1)
        for ai, a in enumerate(M.algebra.quiver.arrows):
            if a.source == v:
                queue.append((a.target, F.matmul(M.maps[ai], x.reshape(-1, 1)).reshape(-1)))
    return Submodule(M, bases)


def whole(M: Module) -> Submodule:
    return Submodule(M, [M.field.eye(d) for d in M.dims])


def zero_submodule(M: Module) -> Submodule:
    return Submodule(M, [M.field.zeros((d, 0)) for d in M.dims])


@dataclass
class StructuralParts:
    radical: Submodule
    socle: Submodule
    top: Module
    top_projection: ModuleMap


def radical(M: Module) -> Submodule:
    F = M.field
    n = M.algebra.n_vertices
    cols = [[] for _ in range(n)]
    for ai, a in enumerate(M.algebra.quiver.arrows):
        cols[a.target].append(M.maps[ai])
    bases = []
    for v in range(n):
        if cols[v]:
            bases.append(linalg.span(np.concatenate(cols[v], axis=1), F))
        else:
            bases.append(F.zeros((M.dims[v], 0)))
    return Submodule(M, bases)


def socle(M: Module) -> Submodule:
    F = M.field
    n = M.algebra.n_vertices
    rows = [[] for _ in range(n)]
    for ai, a in enumerate(M.algebra.quiver.arrows):
        rows[a.source].append(M.maps[ai])
    bases = []
    for v in range(n):
        if rows[v]:
            bases.append(linalg.nullspace(np.concatenate(rows[v], axis=0), F))
        else:
            bases.append(F.eye(M.dims[v]))
    return Submodule(M, bases)


def structural_parts(M: Module) -> StructuralParts:
    R = radical(M)
    top, proj = quotient(R)
    return StructuralParts(R, socle(M), top, proj)


def hom_modules(M: Module, N: Module) -> list[ModuleMap]:
    """Basis of ``Hom_A(M, N)``: blocks ``f_v`` with ``N_a f_s = f_t M_a``."""
    F = M.field
    A = M.algebra
    n = A.n_vertices
    sizes = [N.dims[v] * M.dims[v] for v in range(n)]
    offs = np.cumsum([0] + sizes)
    total = int(offs[-1])
    rows = []
    for ai, a in enumerate(A.quiver.arrows):
        s, t = a.source, a.target
        h = N.dims[t] * M.dims[s]
        if h == 0:
            continue
        eq = F.zeros((h, total))
        # vec(N_a f_s) = (N_a kron I) vec(f_s); vec(f_t M_a) = (I kron M_a^T) vec(f_t)  (row-major)
        if sizes[s]:
            eq[:, offs[s]:offs[s + 1]] = np.kron(N.maps[ai], F.eye(M.dims[s]))
        if sizes[t]:
            eq[:, offs[t]:offs[t + 1]] = F.normalize(eq[:, offs[t]:offs[t + 1]] - np.kron(F.eye(N.dims[t]), M.maps[ai].T))
        rows.append(F.normalize(eq))
    K = linalg.nullspace(np.concatenate(rows, axis=0), F) if rows else F.eye(total)
    out = []
    for c in range(K.shape[1]):
        blocks = [K[offs[v]:offs[v + 1], c].reshape(N.dims[v], M.dims[v]) for v in range(n)]
        out.append(ModuleMap(M, N, blocks))
    return out


def trace(Q: Module, M: Module) -> Submodule:
    """Sum of the images of all homomorphisms ``Q -> M``."""
    F = M.field
    total = zero_submodule(M)
    for f in hom_modules(Q, M):
        total = total + f.image()
    return Submodule(M, [linalg.span(B, F) if B.shape[1] else B for B in total.bases])


def dual_module(M: Module) -> Module:
    """``D M = Hom_k(M, k)`` as a left module over the opposite algebra."""
    Aop = M.algebra.opposite()
    maps = [np.ascontiguousarray(Mat.T) for Mat in M.maps]
    return Module(Aop, M.dims, maps, check=False)


def injective(A: AlgebraBasis, v) -> Module:
    """``D(e_v A)``, the injective envelope of the simple at ``v``."""
    return dual_module(projective(A.opposite(), v))


def is_isomorphic_dims(M: Module, N: Module) -> bool:
    return M.dims == N.dims


# -- projective resolutions -------------------------------------------------------

@dataclass
class ProjectiveCover:
    generators: list[tuple[int, np.ndarray]]  # (vertex, vector in M_vertex)
    projective: Module
    map: ModuleMap
    multiplicities: tuple[int, ...]


def projective_cover(M: Module) -> ProjectiveCover:
    A = M.algebra
    F = M.field
    R = radical(M)
    gens = []
    for v in range(A.n_vertices):
        C = linalg.complement(R.bases[v], F)
        for c in range(C.shape[1]):
            gens.append((v, C[:, c]))
    mult = tuple(sum(1 for g in gens if g[0] == v) for v in range(A.n_vertices))
    if not gens:
        P = Module(A, [0] * A.n_vertices, [F.zeros((0, 0)) for _ in A.quiver.arrows], check=False)
        return ProjectiveCover([], P, ModuleMap(P, M, [F.zeros((M.dims[v], 0)) for v in range(A.n_vertices)]), mult)
    P = direct_sum([projective(A, g[0]) for g in gens])
    blocks = []
    for w in range(A.n_vertices):
        cols = []
        for v, x in gens:
            for k in A.pieces[(v, w)]:
                cols.append(F.matmul(M.path_action(A.basis[k]), x.reshape(-1, 1)))
        blocks.append(np.concatenate(cols, axis=1) if cols else F.zeros((M.dims[w], 0)))
    return ProjectiveCover(gens, P, ModuleMap(P, M, blocks), mult)


@dataclass
class ResolutionTrace:
    module: Module
    terms: list[tuple[int, ...]]  # multiplicity vectors of P^0, P^1, ...
    differentials: list[ModuleMap] = dc_field(default_factory=list)  # P^{i+1} -> P^i (i >= 0); first is P^0 -> M
    projective_dimension: int | None = None  # set when the resolution terminates within the cutoff

    @property
    def status(self) -> str:
        if self.projective_dimension is None:
            return "exceeds cutoff"
        return f"terminates at {self.projective_dimension}"

    def to_json(self) -> dict:
        return {"terms": [list(t) for t in self.terms], "status": self.status,
                "projective_dimension": self.projective_dimension}


def min_resolution(M: Module, cutoff: int = 20) -> ResolutionTrace:
    """Minimal projective resolution, computed up to ``P^cutoff``."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    trace_ = ResolutionTrace(M, [])
    if M.dim == 0:
        trace_.projective_dimension = -1  # usual convention for the zero module
        return trace_
    cur = M
    for step in range(cutoff + 1):
        cov = projective_cover(cur)
        trace_.terms.append(cov.multiplicities)
        trace_.differentials.append(cov.map)
        K = cov.map.kernel()
        if K.dim == 0:
            trace_.projective_dimension = step
            return trace_
        cur = K.module
    return trace_
