"""Checks of the socle/trace conditions on indecomposable projectives, the
weakly-directed structure, corner deletion, triangular splits and a
finitistic-dimension probe.

For a vertex ``s`` write ``P_S = A e_s`` and ``Q`` for the sum of the other
indecomposable projectives. The condition checker works with three subspaces
of ``e_s A e_s`` (the ``s``-component of ``P_S``):

* ``V``: the ``s``-component of the socle of ``P_S``;
* ``T = V ∩ trace(Q, P_S)``;
* ``K = V ∩ ⋂ ker β`` over all ``β: P_S -> A e_w``, ``w != s``, i.e. right
  multiplications by elements of ``e_s A e_w``.

Condition (1) is ``V != 0``, (2) is ``V ⊄ T``, the kernel form of (3) is
``K != 0``, and a single line satisfying all three exists iff ``K ⊄ T``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .algebra import AlgebraBasis, Path, compute_basis, Quiver
from .modules import (Module, Submodule, direct_sum, dual_module, generated_submodule, hom_modules,
                      min_resolution, projective, quotient, socle, trace)


class CriteriaError(ValueError):
    pass


def _vec_labels(A: AlgebraBasis, idx: list[int], v: np.ndarray) -> list:
    F = A.field
    return [[A.path_label(k), F.to_json(c)] for k, c in zip(idx, v) if c != 0]


@dataclass
class SimpleReport:
    vertex: str
    cond1: bool
    cond2: bool
    cond2_cokernel_form: bool
    cond3_kernel_form: bool
    cond3_dual_trace_form: bool
    overall: bool
    separate_witnesses: bool
    witness_line: list | None
    dims: dict

    @property
    def forms_agree(self) -> bool:
        return self.cond2 == self.cond2_cokernel_form and self.cond3_kernel_form == self.cond3_dual_trace_form

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "cond1": self.cond1,
            "cond2": self.cond2,
            "cond2_cokernel_form": self.cond2_cokernel_form,
            "cond3_kernel_form": self.cond3_kernel_form,
            "cond3_dual_trace_form": self.cond3_dual_trace_form,
            "overall": self.overall,
            "separate_witnesses": self.separate_witnesses,
            "witness_line": self.witness_line,
            "forms_agree": self.forms_agree,
            "subspace_dims": self.dims,
        }


@dataclass
class ConditionReport:
    simples: list[SimpleReport]

    @property
    def all_pass(self) -> bool:
        return all(s.overall for s in self.simples)

    def __getitem__(self, vertex: str) -> SimpleReport:
        for s in self.simples:
            if s.vertex == vertex:
                return s
        raise KeyError(vertex)

    def to_json(self) -> dict:
        return {"simples": [s.to_json() for s in self.simples], "all_pass": self.all_pass,
                "warnings": [f"condition forms disagree at {s.vertex}" for s in self.simples if not s.forms_agree]}


def check_conditions(A: AlgebraBasis, s) -> SimpleReport:
    """Evaluate the three conditions for the simple at vertex ``s``."""
    F = A.field
    s = A.vertex(s)
    n = A.n_vertices
    P = projective(A, s)
    idx = A.pieces[(s, s)]  # basis of the s-component of P_S = e_s A e_s
    d = len(idx)
    V = socle(P).bases[s]
    others = [w for w in range(n) if w != s]
    # trace of Q in P_S, s-component
    if others:
        Q = direct_sum([projective(A, w) for w in others])
        Tr = trace(Q, P).bases[s]
    else:
        Q = None
        Tr = F.zeros((d, 0))
    T = linalg.intersect(V, Tr, F)
    # cokernel form of (2): image of the universal map Q^(+dim Hom) -> P_S
    if Q is not None:
        homs = hom_modules(Q, P)
        cols = [f.blocks[s] for f in homs]
        Im = linalg.span(np.concatenate(cols, axis=1), F) if cols else F.zeros((d, 0))
    else:
        Im = F.zeros((d, 0))
    cond2_coker = V.shape[1] > 0 and not linalg.contains(Im, V, F)
    # kernel form of (3): v * x = 0 for all x in e_s A e_w, w != s
    K = V
    for w in others:
        for k in A.pieces[(w, s)]:
            # row j of R is b_idx[j] * b_k
            R = A.struct[np.ix_(idx, [k])][:, 0, :]
            K = linalg.intersect(K, linalg.nullspace(np.ascontiguousarray(R.T), F), F) if K.shape[1] else K
    # dual-trace form of (3): functionals on P_S in trace(DQ, DP_S) must vanish on the line
    if others:
        DP = dual_module(P)
        DQ = direct_sum([dual_module(projective(A, w)) for w in others])
        DT = trace(DQ, DP).bases[s]  # functionals on the s-component of P_S
        ann = linalg.nullspace(np.ascontiguousarray(DT.T), F) if DT.shape[1] else F.eye(d)
    else:
        ann = F.eye(d)
    Kd = linalg.intersect(V, ann, F)
    cond1 = V.shape[1] > 0
    cond2 = cond1 and not linalg.contains(T, V, F)
    cond3 = K.shape[1] > 0
    cond3_dual = Kd.shape[1] > 0
    overall = K.shape[1] > 0 and not linalg.contains(T, K, F)
    witness = None
    if overall:
        pick = linalg.extend_basis(T, K, F)
        witness = _vec_labels(A, idx, K[:, pick[0]])
    return SimpleReport(
        vertex=A.quiver.vertices[s], cond1=cond1, cond2=cond2, cond2_cokernel_form=cond2_coker,
        cond3_kernel_form=cond3, cond3_dual_trace_form=cond3_dual, overall=overall,
        separate_witnesses=cond2 and cond3, witness_line=witness,
        dims={"socle_part": V.shape[1], "in_trace": T.shape[1], "in_kernels": K.shape[1]},
    )


def check_all_conditions(A: AlgebraBasis) -> ConditionReport:
    return ConditionReport([check_conditions(A, v) for v in range(A.n_vertices)])


# -- weakly directed structure ------------------------------------------------------

@dataclass
class WeaklyDirectedOrder:
    order: list[str] | None
    cycle: list[str] | None

    @property
    def found(self) -> bool:
        return self.order is not None

    def to_json(self) -> dict:
        return {"weakly_directed": self.found, "order": self.order, "cycle": self.cycle}


def is_weakly_directed(A: AlgebraBasis) -> WeaklyDirectedOrder:
    """Topological order of vertices with ``i`` before ``j`` whenever ``e_j A e_i != 0``."""
    n = A.n_vertices
    V = A.quiver.vertices
    succ = {i: sorted(j for j in range(n) if j != i and A.pieces[(i, j)]) for i in range(n)}
    indeg = [0] * n
    for i in range(n):
        for j in succ[i]:
            indeg[j] += 1
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    order = []
    while ready:
        i = ready.pop(0)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
                ready.sort()
    if len(order) == n:
        return WeaklyDirectedOrder([V[i] for i in order], None)
    # find a cycle among the remaining vertices
    rest = [i for i in range(n) if i not in order]
    start = rest[0]
    path, seen = [start], {start: 0}
    cur = start
    while True:
        nxt = next(j for j in succ[cur] if j in rest)
        if nxt in seen:
            cyc = path[seen[nxt]:]
            return WeaklyDirectedOrder(None, [V[i] for i in cyc])
        seen[nxt] = len(path)
        path.append(nxt)
        cur = nxt


@dataclass
class VertexWDReport:
    vertex: str
    socle_generators: list
    complement_basis: list
    nonzero_products: list  # [v, x, v*x] with v*x != 0
    has_socle_line: bool
    passes: bool

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "socle_generators": self.socle_generators,
                "complement_basis": self.complement_basis, "nonzero_products": self.nonzero_products,
                "has_socle_line": self.has_socle_line, "passes": self.passes}


def check_wd_conditions(A: AlgebraBasis) -> list[VertexWDReport]:
    """Per vertex ``e``: a line of the socle of ``A e`` inside ``e A e`` killed by
    right multiplication with all of ``e A (1 - e)``; also lists the products
    ``v_j x_i`` of socle generators of the local algebra ``e A e`` with a basis of
    ``e A (1 - e)`` that are nonzero."""
    if not is_weakly_directed(A).found:
        raise CriteriaError("algebra is not weakly directed")
    F = A.field
    out = []
    for e in range(A.n_vertices):
        idx = A.pieces[(e, e)]
        d = len(idx)
        rad_idx = [k for k in idx if A.basis[k].length > 0]
        # left socle of eAe: v with r * v = 0 for all r in rad eAe
        if rad_idx:
            M = np.concatenate([A.struct[r][np.ix_(idx, idx)].T for r in rad_idx], axis=0)
            soc_local = linalg.nullspace(M, F)
        else:
            soc_local = F.eye(d)
        # module socle of A e at e: v killed by every arrow starting at e
        W = socle(projective(A, e)).bases[e]
        xs = [k for w in range(A.n_vertices) if w != e for k in A.pieces[(w, e)]]
        K = W
        for k in xs:
            R = np.ascontiguousarray(A.struct[np.ix_(idx, [k])][:, 0, :].T)
            K = linalg.intersect(K, linalg.nullspace(R, F), F) if K.shape[1] else K
        bad = []
        gens = [soc_local[:, c] for c in range(soc_local.shape[1])]
        for v in gens:
            full = F.zeros(A.dim)
            full[idx] = v
            for k in xs:
                prod = A._mul_vec(full, F.eye(A.dim)[k])
                if np.any(prod != 0):
                    bad.append([_vec_labels(A, idx, v), A.path_label(k), _vec_labels(A, list(range(A.dim)), prod)])
        out.append(VertexWDReport(
            vertex=A.quiver.vertices[e],
            socle_generators=[_vec_labels(A, idx, v) for v in gens],
            complement_basis=[A.path_label(k) for k in xs],
            nonzero_products=bad,
            has_socle_line=W.shape[1] > 0,
            passes=K.shape[1] > 0,
        ))
    return out


# -- corners and splits --------------------------------------------------------------

def extremal_kind(A: AlgebraBasis, v) -> str | None:
    """``"maximal"`` if no nonzero path leaves ``v`` towards another vertex,
    ``"minimal"`` if none arrives; ``None`` otherwise."""
    v = A.vertex(v)
    others = [w for w in range(A.n_vertices) if w != v]
    if all(not A.pieces[(v, w)] for w in others):
        return "maximal"
    if all(not A.pieces[(w, v)] for w in others):
        return "minimal"
    return None


def corner_delete(A: AlgebraBasis, v) -> AlgebraBasis:
    """The corner algebra ``(1 - e_v) A (1 - e_v)`` for an extremal vertex ``v``."""
    v = A.vertex(v)
    if A.n_vertices < 2:
        raise CriteriaError("cannot delete the only vertex")
    if extremal_kind(A, v) is None:
        raise CriteriaError(f"vertex {A.quiver.vertices[v]!r} is neither maximal nor minimal")
    Q = A.quiver
    keep = [w for w in range(A.n_vertices) if w != v]
    names = [Q.vertices[w] for w in keep]
    arrows = [(a.label, Q.vertices[a.source], Q.vertices[a.target]) for a in Q.arrows
              if a.source != v and a.target != v]
    Qc = Quiver(names, arrows)
    new_index = {a.label: i for i, a in enumerate(Qc.arrows)}
    rels = []
    for r in A.relations:
        p0 = next(iter(r))
        if p0.source == v or p0.target == v:
            continue
        rel = {}
        for p, c in r.items():
            labels = [Q.arrows[a].label for a in p.arrows]
            rel[Path(keep.index(p.source), keep.index(p.target), tuple(new_index[l] for l in labels))] = c
        rels.append(rel)
    B = compute_basis(Qc, rels, A.field, cap=A.cap, name=(A.name + f"-{Q.vertices[v]}") if A.name else "")
    expected = sum(len(A.pieces[(i, j)]) for i in keep for j in keep)
    if B.dim != expected:
        raise AssertionError(f"corner presentation has dimension {B.dim}, expected {expected}")
    return B


@dataclass
class IdempotentSplit:
    e_block: list[str]
    f_block: list[str]
    eAf_zero: bool
    dims: dict

    def to_json(self) -> dict:
        return {"e": self.e_block, "f": self.f_block, "eAf_zero": self.eAf_zero, "dims": self.dims}


def triangular_split(A: AlgebraBasis, max_vertices: int = 16) -> list[IdempotentSplit]:
    """All bipartitions ``(e, f)`` of the vertices with ``e A f = 0``."""
    n = A.n_vertices
    if n > max_vertices:
        raise CriteriaError(f"too many vertices ({n}) for exhaustive split enumeration")
    V = A.quiver.vertices
    out = []
    for r in range(1, n):
        for eb in itertools.combinations(range(n), r):
            fb = [w for w in range(n) if w not in eb]
            # e A f = sum of e_u A e_w (paths w -> u), u in e, w in f
            if any(A.pieces[(w, u)] for u in eb for w in fb):
                continue
            dims = {
                "eAe": sum(len(A.pieces[(i, j)]) for i in eb for j in eb),
                "fAf": sum(len(A.pieces[(i, j)]) for i in fb for j in fb),
                "fAe": sum(len(A.pieces[(i, j)]) for i in eb for j in fb),
            }
            out.append(IdempotentSplit([V[i] for i in eb], [V[i] for i in fb], True, dims))
    return out


def corner_bimodule(A: AlgebraBasis, e_block, f_block) -> Module:
    """``f A e`` as a left ``A``-module (requires ``e A f = 0``)."""
    eb = [A.vertex(v) for v in e_block]
    fb = set(A.vertex(v) for v in f_block)
    F = A.field
    parts = []
    for u in eb:
        P = projective(A, u)
        bases = [F.eye(P.dims[w]) if w in fb else F.zeros((P.dims[w], 0)) for w in range(A.n_vertices)]
        U = Submodule(P, bases)
        if not U.is_submodule():
            raise CriteriaError("f A e is not a submodule; is e A f = 0?")
        parts.append(U.module)
    return direct_sum(parts)


# -- finitistic dimension probe ---------------------------------------------------------

@dataclass
class ProbeReport:
    samples: int
    witnesses: list = dc_field(default_factory=list)
    cutoff: int = 20

    @property
    def verdict(self) -> str:
        if self.witnesses:
            return "witness found: findim > 0"
        return f"consistent with findim 0 at cutoff {self.cutoff}"

    def to_json(self) -> dict:
        return {"samples": self.samples, "cutoff": self.cutoff, "verdict": self.verdict, "witnesses": self.witnesses}


def findim_probe(A: AlgebraBasis, dim_bound: int = 6, random_samples: int = 200, cutoff: int = 20,
                 seed: int = 0) -> ProbeReport:
    """Resolve quotients ``P / U`` of projectives and report any nonprojective one
    whose minimal resolution terminates within ``cutoff``.

    ``U`` ranges over submodules generated by one or two basis paths (and the
    sum of two), with ``dim U <= dim_bound``, plus ``random_samples`` submodules
    of ``P_v`` or ``P_v + P_w`` generated by seeded random elements.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    F = A.field
    rng = np.random.default_rng(seed)
    report = ProbeReport(0, cutoff=cutoff)
    seen = set()

    def run(M: Module, gens, label):
        U = generated_submodule(M, gens)
        if U.dim == 0 or U.dim > dim_bound:
            return
        key = (label[0], tuple(str(linalg.rref(B.T, F)[0].tolist()) if B.shape[1] else "" for B in U.bases))
        if key in seen:
            return
        seen.add(key)
        Qm, _ = quotient(U)
        report.samples += 1
        res = min_resolution(Qm, cutoff)
        if res.projective_dimension is not None and res.projective_dimension > 0:
            report.witnesses.append({"module": label, "dims": list(Qm.dims), "projective_dimension":
                                     res.projective_dimension, "terms": [list(t) for t in res.terms]})

    V = A.quiver.vertices
    for v in range(A.n_vertices):
        P = projective(A, v)
        elems = []
        for w in range(A.n_vertices):
            for c in range(P.dims[w]):
                x = F.zeros(P.dims[w])
                x[c] = F.scalar(1)
                elems.append((w, x, A.path_label(A.pieces[(v, w)][c])))
        for w, x, lab in elems:
            run(P, [(w, x)], (f"P_{V[v]}", f"<{lab}>"))
        for (w1, x1, l1), (w2, x2, l2) in itertools.combinations(elems, 2):
            run(P, [(w1, x1), (w2, x2)], (f"P_{V[v]}", f"<{l1}, {l2}>"))
            if w1 == w2:
                run(P, [(w1, F.normalize(x1 + x2))], (f"P_{V[v]}", f"<{l1} + {l2}>"))
    for t in range(random_samples):
        vs = sorted(rng.choice(A.n_vertices, size=int(rng.integers(1, 3)), replace=True).tolist())
        M = direct_sum([projective(A, v) for v in vs])
        ngens = int(rng.integers(1, 3))
        gens = []
        for _ in range(ngens):
            w = int(rng.integers(0, A.n_vertices))
            if M.dims[w]:
                gens.append((w, F.random(rng, M.dims[w])))
        if gens:
            run(M, gens, ("+".join(f"P_{V[v]}" for v in vs), f"random#{t}"))
    return report
