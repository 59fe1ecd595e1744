"""Quiver algebras ``kQ/I`` with an explicit normal-form path basis.

Paths compose right to left: the path written ``r*a`` applies ``a`` first and
then ``r``. The piece ``e_j A e_i`` is spanned by the normal-form paths from
``i`` to ``j``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
import sympy

from . import linalg
from .field import Field

DEFAULT_CAP = 64
MAX_PATHS = 200_000


class PresentationError(ValueError):
    """Malformed presentation text; carries 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class AdmissibilityError(ValueError):
    pass


class NilpotencyCapError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int


class Quiver:
    def __init__(self, vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]] | Sequence[Arrow]):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex label")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        arrs = []
        for a in arrows:
            if isinstance(a, Arrow):
                arrs.append(a)
                continue
            label, s, t = a
            if s not in self.vertex_index or t not in self.vertex_index:
                raise ValueError(f"arrow {label}: unknown endpoint")
            arrs.append(Arrow(label, self.vertex_index[s], self.vertex_index[t]))
        self.arrows = tuple(arrs)
        labels = [a.label for a in self.arrows] + list(self.vertices)
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be unique across vertices and arrows")
        self.arrow_index = {a.label: i for i, a in enumerate(self.arrows)}

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.label, a.target, a.source) for a in self.arrows])

    def is_connected(self) -> bool:
        n = self.n_vertices
        if n == 0:
            return False
        adj = {i: set() for i in range(n)}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == n

    def __repr__(self):
        arrs = ", ".join(f"{a.label}:{self.vertices[a.source]}->{self.vertices[a.target]}" for a in self.arrows)
        return f"Quiver({list(self.vertices)}; {arrs})"


@dataclass(frozen=True)
class Path:
    """A path; ``arrows[0]`` is applied last (written order)."""

    source: int
    target: int
    arrows: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    def key(self):
        return (len(self.arrows), self.arrows, self.source)

    def after(self, other: "Path") -> "Path | None":
        """``self * other``: first ``other``, then ``self``."""
        if other.target != self.source:
            return None
        return Path(other.source, self.target, self.arrows + other.arrows)

    def reversed(self) -> "Path":
        return Path(self.target, self.source, tuple(reversed(self.arrows)))

    def label(self, quiver: Quiver) -> str:
        if not self.arrows:
            return "e_" + quiver.vertices[self.source]
        return "*".join(quiver.arrows[a].label for a in self.arrows)


def parse_path(text: str, quiver: Quiver) -> Path:
    text = text.strip()
    if text.startswith("e_") and text[2:] in quiver.vertex_index:
        v = quiver.vertex_index[text[2:]]
        return Path(v, v)
    idx = []
    for name in text.split("*"):
        name = name.strip()
        if name not in quiver.arrow_index:
            raise PresentationError(f"unknown arrow {name!r}")
        idx.append(quiver.arrow_index[name])
    for later, earlier in zip(idx, idx[1:]):
        if quiver.arrows[earlier].target != quiver.arrows[later].source:
            raise PresentationError(f"path {text!r} is not composable")
    return Path(quiver.arrows[idx[-1]].source, quiver.arrows[idx[0]].target, tuple(idx))


Relation = Mapping[Path, object]


def _enumerate_paths(quiver: Quiver, max_len: int, limit: int = MAX_PATHS) -> list[list[Path]]:
    levels = [[Path(v, v) for v in range(quiver.n_vertices)]]
    total = len(levels[0])
    for _ in range(max_len):
        nxt = []
        for p in levels[-1]:
            for ai, a in enumerate(quiver.arrows):
                if a.source == p.target:
                    nxt.append(Path(p.source, a.target, (ai,) + p.arrows))
        total += len(nxt)
        if total > limit:
            raise NilpotencyCapError(
                f"more than {limit} paths of length <= {len(levels)}; presentation looks infinite-dimensional")
        levels.append(nxt)
    return levels


class AlgebraBasis:
    """A finite-dimensional quotient ``kQ/I`` with normal-form basis and structure constants.

    Immutable after construction. ``struct[i, j]`` holds the coordinates of
    ``basis[i] * basis[j]`` (``basis[j]`` applied first).
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], field: Field = Field(),
                 cap: int = DEFAULT_CAP, name: str = ""):
        self.quiver = quiver
        self.field = field
        self.name = name
        self.cap = cap
        self.relations = [self._check_relation(r) for r in relations]
        self._compute()
        self._opposite: AlgebraBasis | None = None

    # -- construction ---------------------------------------------------
    def _check_relation(self, rel: Relation) -> dict[Path, object]:
        F = self.field
        clean = {p: F.scalar(c) for p, c in rel.items() if F.scalar(c) != 0}
        if not clean:
            raise AdmissibilityError("empty relation")
        ends = {(p.source, p.target) for p in clean}
        if len(ends) != 1:
            raise AdmissibilityError("relation terms are not parallel paths")
        if any(p.length < 2 for p in clean):
            raise AdmissibilityError("relation has a term of length < 2 (not inside the square of the arrow ideal)")
        return clean

    def _compute(self):
        F = self.field
        Q = self.quiver
        for N in range(1, self.cap + 1):
            levels = _enumerate_paths(Q, N)
            ok, data = self._try_truncation(levels, N)
            if ok:
                break
        else:
            raise NilpotencyCapError(f"no nilpotency index <= {self.cap}: presentation is not finite-dimensional "
                                     "or the cap is too small")
        paths_desc, pivot_rows, pivots = data
        pos = {p: i for i, p in enumerate(paths_desc)}
        pivot_set = set(pivots)
        basis = sorted((p for i, p in enumerate(paths_desc) if i not in pivot_set), key=Path.key)
        self.basis: list[Path] = basis
        self.index = {p: i for i, p in enumerate(basis)}
        n = len(basis)
        self._truncation = N
        # reduction table for every path of length <= N
        col_to_basis = np.full(len(paths_desc), -1)
        for i, p in enumerate(paths_desc):
            if p in self.index:
                col_to_basis[i] = self.index[p]
        self._reduced: dict[Path, np.ndarray] = {}
        nonpiv_cols = np.flatnonzero(col_to_basis >= 0)
        for r, pc in enumerate(pivots):
            vec = F.zeros(n)
            row = pivot_rows[r]
            vec[col_to_basis[nonpiv_cols]] = F.normalize(-row[nonpiv_cols])
            self._reduced[paths_desc[pc]] = vec
        self._path_pos = pos
        self.struct = F.zeros((n, n, n))
        for i, p in enumerate(basis):
            for j, q in enumerate(basis):
                pq = p.after(q)
                if pq is not None:
                    self.struct[i, j] = self.reduce_path(pq)
        nv = Q.n_vertices
        self.pieces: dict[tuple[int, int], list[int]] = {(i, j): [] for i in range(nv) for j in range(nv)}
        for k, p in enumerate(basis):
            self.pieces[(p.source, p.target)].append(k)
        # mask[u, w, k]: basis[k] lies in e_u A e_w (a path from w to u)
        self.piece_mask = np.zeros((nv, nv, n), dtype=bool)
        for k, p in enumerate(basis):
            self.piece_mask[p.target, p.source, k] = True
        self.trivial = [self.index[Path(v, v)] for v in range(nv)]
        self.nilpotency_index = self._nilpotency()

    def _try_truncation(self, levels, N):
        """Ideal closure inside kQ / J^(N+1); succeeds when every length-N path lies in it."""
        F = self.field
        paths = [p for lev in levels for p in lev]
        paths_desc = sorted(paths, key=Path.key, reverse=True)
        pos = {p: i for i, p in enumerate(paths_desc)}
        m = len(paths_desc)
        arrows = self.quiver.arrows
        left = np.full((len(arrows), m), -1)
        right = np.full((len(arrows), m), -1)
        ap = [Path(a.source, a.target, (i,)) for i, a in enumerate(arrows)]
        for p, i in pos.items():
            for ai in range(len(arrows)):
                lp = ap[ai].after(p)
                if lp is not None and lp in pos:
                    left[ai, i] = pos[lp]
                rp = p.after(ap[ai])
                if rp is not None and rp in pos:
                    right[ai, i] = pos[rp]
        rows: dict[int, np.ndarray] = {}

        def reduce(v):
            while True:
                nz = np.flatnonzero(v != 0)
                if nz.size == 0:
                    return None, v
                c = int(nz[0])
                if c in rows:
                    v = F.normalize(v - v[c] * rows[c])
                    continue
                return c, F.normalize(v * F.inv(v[c]))

        queue = []
        for rel in self.relations:
            v = F.zeros(m)
            for p, c in rel.items():
                if p in pos:
                    v[pos[p]] = F.normalize(v[pos[p]] + c)
            queue.append(v)
        while queue:
            c, v = reduce(queue.pop())
            if c is None:
                continue
            rows[c] = v
            nz = np.flatnonzero(v != 0)
            for ai in range(len(arrows)):
                for table in (left, right):
                    tgt = table[ai, nz]
                    keep = tgt >= 0
                    if not keep.any():
                        continue
                    w = F.zeros(m)
                    w[tgt[keep]] = v[nz[keep]]
                    queue.append(w)
        for p in levels[N]:
            v = F.zeros(m)
            v[pos[p]] = F.scalar(1)
            if reduce(v)[0] is not None:
                return False, None
        if rows:
            R, piv = linalg.rref(np.array([rows[c] for c in sorted(rows)]), F)
            R = R[: len(piv)]
        else:
            R, piv = F.zeros((0, m)), []
        return True, (paths_desc, R, piv)

    def _nilpotency(self) -> int:
        F = self.field
        n = self.dim
        rad = [k for k, p in enumerate(self.basis) if p.length > 0]
        if not rad:
            return 1
        cur = F.eye(n)[:, rad]
        k = 1
        while cur.shape[1]:
            prods = [self._mul_vec(cur[:, a], F.eye(n)[:, b]) for a in range(cur.shape[1]) for b in rad]
            nxt = np.column_stack(prods) if prods else F.zeros((n, 0))
            cur = linalg.span(nxt, F)
            k += 1
        return k

    # -- basic queries --------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n_vertices(self) -> int:
        return self.quiver.n_vertices

    def vertex(self, v) -> int:
        if isinstance(v, str):
            return self.quiver.vertex_index[v]
        return int(v)

    def reduce_path(self, p: Path) -> np.ndarray:
        F = self.field
        if p.length > self._truncation:
            return F.zeros(self.dim)
        if p in self.index:
            out = F.zeros(self.dim)
            out[self.index[p]] = F.scalar(1)
            return out
        return self._reduced[p].copy()

    def _mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        F = self.field
        t = F.matmul(a.reshape(1, -1), self.struct.reshape(self.dim, -1)).reshape(self.dim, self.dim)
        return F.matmul(b.reshape(1, -1), t).reshape(-1)

    def hom_piece(self, i, j) -> list[Path]:
        """Normal-form basis of ``e_j A e_i`` (paths from ``i`` to ``j``)."""
        i, j = self.vertex(i), self.vertex(j)
        return [self.basis[k] for k in self.pieces[(i, j)]]

    def piece_dims(self) -> np.ndarray:
        """``D[u, w] = dim e_u A e_w``."""
        return self.piece_mask.sum(axis=2)

    def element(self, spec) -> "AlgebraElement":
        """Element from a path, a label string like ``"r*a"``/``"e_x"``, or a coefficient vector."""
        if isinstance(spec, AlgebraElement):
            return spec
        if isinstance(spec, Path):
            return AlgebraElement(self, self.reduce_path(spec))
        if isinstance(spec, str):
            return AlgebraElement(self, self.reduce_path(parse_path(spec, self.quiver)))
        return AlgebraElement(self, self.field.array(spec))

    def idempotent(self, v) -> "AlgebraElement":
        v = self.vertex(v)
        return self.element(Path(v, v))

    def one(self) -> "AlgebraElement":
        out = self.field.zeros(self.dim)
        for k in self.trivial:
            out[k] = self.field.scalar(1)
        return AlgebraElement(self, out)

    def evaluate(self, rel: Relation) -> "AlgebraElement":
        F = self.field
        out = F.zeros(self.dim)
        for p, c in rel.items():
            out = F.normalize(out + F.scalar(c) * self.reduce_path(p))
        return AlgebraElement(self, out)

    def path_label(self, k: int) -> str:
        return self.basis[k].label(self.quiver)

    # -- algebra-valued matrices ----------------------------------------
    def matmul(self, M: np.ndarray, N: np.ndarray) -> np.ndarray:
        """Product of algebra-valued matrices, shapes ``(r, s, n)`` and ``(s, t, n)``.

        Entry ``(a, c)`` is ``sum_b M[a, b] * N[b, c]`` with ``N`` applied first in
        each product; in the right-multiplication convention for maps between
        projectives this is "first ``M``, then ``N``".
        """
        F = self.field
        r, s, n = M.shape
        t = N.shape[1]
        if r == 0 or t == 0 or s == 0:
            return F.zeros((r, t, n))
        # T[a,b,j,k] = sum_i M[a,b,i] c[i,j,k]; then contract (b, j) against N[b,c,j]
        T = F.matmul(M.reshape(r * s, n), self.struct.reshape(n, n * n)).reshape(r, s, n, n)
        T = T.transpose(0, 3, 1, 2).reshape(r * n, s * n)
        Nm = N.transpose(0, 2, 1).reshape(s * n, t)
        out = F.matmul(T, Nm).reshape(r, n, t).transpose(0, 2, 1)
        return np.ascontiguousarray(out)

    def right_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> y * x`` on coordinate columns."""
        return np.ascontiguousarray(self.field.matmul(x.reshape(1, -1), self.struct.transpose(1, 0, 2).reshape(self.dim, -1))
                                    .reshape(self.dim, self.dim).T)

    def left_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> x * y`` on coordinate columns."""
        return np.ascontiguousarray(self.field.matmul(x.reshape(1, -1), self.struct.reshape(self.dim, -1))
                                    .reshape(self.dim, self.dim).T)

    # -- derived structures ---------------------------------------------
    def opposite(self) -> "AlgebraBasis":
        if self._opposite is None:
            rels = [{p.reversed(): c for p, c in r.items()} for r in self.relations]
            op = AlgebraBasis(self.quiver.opposite(), rels, self.field, self.cap,
                              name=(self.name + "^op") if self.name else "")
            op._opposite = self
            self._opposite = op
        return self._opposite

    def with_field(self, field: Field) -> "AlgebraBasis":
        rels = []
        for r in self.relations:
            rels.append({p: (c if field.is_rational or not isinstance(c, Fraction) else c) for p, c in r.items()})
        return AlgebraBasis(self.quiver, rels, field, self.cap, self.name)

    def relation_strings(self) -> list[str]:
        out = []
        for r in self.relations:
            terms = []
            for p, c in sorted(r.items(), key=lambda pc: pc[0].key(), reverse=True):
                cj = self.field.to_json(c)
                if self.field.p is not None and cj > self.field.p // 2:
                    cj -= self.field.p
                terms.append(p.label(self.quiver) if str(cj) == "1" else f"{cj}*{p.label(self.quiver)}")
            out.append(" + ".join(terms))
        return out

    def to_json(self) -> dict:
        Q = self.quiver
        pieces = {}
        for (i, j), ks in self.pieces.items():
            pieces[f"{Q.vertices[i]}->{Q.vertices[j]}"] = [self.path_label(k) for k in ks]
        return {
            "field": str(self.field),
            "vertices": list(Q.vertices),
            "arrows": [{"label": a.label, "source": Q.vertices[a.source], "target": Q.vertices[a.target]}
                       for a in Q.arrows],
            "relations": self.relation_strings(),
            "pieces": pieces,
            "basis": [self.path_label(k) for k in range(self.dim)],
            "dimension": self.dim,
            "nilpotency_index": self.nilpotency_index,
        }

    def __repr__(self):
        return f"AlgebraBasis({self.name or 'A'}, dim={self.dim}, vertices={list(self.quiver.vertices)})"


class AlgebraElement:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: AlgebraBasis, coeffs: np.ndarray):
        if coeffs.shape != (algebra.dim,):
            raise ValueError("coefficient vector has the wrong length")
        self.algebra = algebra
        self.coeffs = coeffs

    def _same(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._same(other)
            return AlgebraElement(self.algebra, self.algebra._mul_vec(self.coeffs, other.coeffs))
        F = self.algebra.field
        return AlgebraElement(self.algebra, F.normalize(self.coeffs * F.scalar(other)))

    def __rmul__(self, scalar):
        return self * scalar

    def __add__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self.algebra.field.normalize(self.coeffs + other.coeffs))

    def __sub__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self.algebra.field.normalize(self.coeffs - other.coeffs))

    def __neg__(self):
        return AlgebraElement(self.algebra, self.algebra.field.normalize(-self.coeffs))

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return other.algebra is self.algebra and bool(np.all(self.coeffs == other.coeffs))
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.coeffs.tolist()))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs != 0)

    def __repr__(self):
        A = self.algebra
        terms = []
        for k in np.flatnonzero(self.coeffs != 0):
            c = A.field.to_json(self.coeffs[k])
            lab = A.path_label(int(k))
            terms.append(lab if str(c) == "1" else f"{c}*{lab}")
        return " + ".join(terms) if terms else "0"


# -- presentation text ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[^\W\d][\w']*)|(?P<op>[*+\-=]))", re.UNICODE)


def _parse_expression(text: str, quiver: Quiver, line: int, offset: int) -> dict[Path, Fraction]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationError(f"unexpected character {text[pos:].strip()[:1]!r}", line, offset + pos + 1)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), offset + start + 1))
        pos = m.end()
    result: dict[Path, Fraction] = {}
    side = 1
    i = 0
    expect_term = True
    sign = 1
    if not toks:
        raise PresentationError("empty relation", line, offset + 1)
    while i < len(toks):
        kind, val, col = toks[i]
        if expect_term:
            if kind == "op" and val in "+-":
                sign = sign * (-1 if val == "-" else 1)
                i += 1
                continue
            coef = Fraction(1)
            if kind == "num":
                coef = Fraction(val)
                i += 1
                if i < len(toks) and toks[i][:2] == ("op", "*"):
                    i += 1
                else:
                    raise PresentationError("a coefficient must be followed by '*' and a path", line, col)
                if i >= len(toks):
                    raise PresentationError("missing path after coefficient", line, col)
                kind, val, col = toks[i]
            if kind != "id":
                raise PresentationError(f"expected an arrow label, got {val!r}", line, col)
            names = [(val, col)]
            i += 1
            while i + 1 < len(toks) and toks[i][:2] == ("op", "*") and toks[i + 1][0] == "id":
                names.append((toks[i + 1][1], toks[i + 1][2]))
                i += 2
            for name, c in names:
                if name not in quiver.arrow_index:
                    if name in quiver.vertex_index:
                        raise PresentationError(f"{name!r} is a vertex, not an arrow", line, c)
                    raise PresentationError(f"unknown arrow {name!r}", line, c)
            idx = [quiver.arrow_index[n] for n, _ in names]
            for (later, earlier), (_, c) in zip(zip(idx, idx[1:]), names[1:]):
                if quiver.arrows[earlier].target != quiver.arrows[later].source:
                    raise PresentationError("arrows are not composable (terms compose right to left)", line, c)
            p = Path(quiver.arrows[idx[-1]].source, quiver.arrows[idx[0]].target, tuple(idx))
            result[p] = result.get(p, Fraction(0)) + side * sign * coef
            sign = 1
            expect_term = False
        else:
            if kind == "op" and val in "+-":
                sign = -1 if val == "-" else 1
                expect_term = True
                i += 1
            elif kind == "op" and val == "=":
                if side == -1:
                    raise PresentationError("more than one '='", line, col)
                side = -1
                expect_term = True
                i += 1
            else:
                raise PresentationError(f"unexpected token {val!r}", line, col)
    if expect_term:
        raise PresentationError("relation ends with an operator", line, toks[-1][2])
    ends = {(p.source, p.target) for p in result}
    if len(ends) > 1:
        raise PresentationError("relation mixes non-parallel paths", line, offset + 1)
    return {p: c for p, c in result.items() if c != 0}


def parse_presentation(text: str):
    """Parse presentation text into ``(field, quiver, relations)`` without computing the basis."""
    field = Field()
    vertices: list[str] = []
    arrows: list[tuple[str, str, str, int, int]] = []
    rel_lines: list[tuple[int, int, str]] = []
    seen_field = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        parts = line.split()
        kw = parts[0]
        if kw == "field":
            if seen_field:
                raise PresentationError("duplicate field line", ln, indent + 1)
            seen_field = True
            try:
                field = Field.parse(" ".join(parts[1:]))
            except ValueError as exc:
                raise PresentationError(str(exc), ln, indent + 7) from None
        elif kw == "vertex":
            if len(parts) != 2:
                raise PresentationError("expected 'vertex <label>'", ln, indent + 1)
            if parts[1] in vertices:
                raise PresentationError(f"duplicate vertex {parts[1]!r}", ln, line.index(parts[1], indent + 6) + 1)
            vertices.append(parts[1])
        elif kw == "arrow":
            if len(parts) != 4:
                raise PresentationError("expected 'arrow <label> <source> <target>'", ln, indent + 1)
            arrows.append((parts[1], parts[2], parts[3], ln, indent + 1))
        elif kw == "rel":
            start = line.index("rel", indent) + 3
            rel_lines.append((ln, start, line[start:]))
        else:
            raise PresentationError(f"unknown keyword {kw!r}", ln, indent + 1)
    if not vertices:
        raise PresentationError("no vertices declared", 1, 1)
    for label, s, t, ln, col in arrows:
        for end in (s, t):
            if end not in vertices:
                raise PresentationError(f"arrow {label!r}: unknown vertex {end!r}", ln, col)
    try:
        quiver = Quiver(vertices, [(a[0], a[1], a[2]) for a in arrows])
    except ValueError as exc:
        raise PresentationError(str(exc), arrows[0][3] if arrows else 1, 1) from None
    relations = [_parse_expression(body, quiver, ln, off) for ln, off, body in rel_lines]
    relations = [r for r in relations if r]
    return field, quiver, relations


def parse_algebra(text: str, field: Field | None = None, cap: int = DEFAULT_CAP, name: str = "") -> AlgebraBasis:
    """Parse a presentation and compute its normal-form basis.

    ``field`` overrides the ``field`` line of the text.
    """
    f, quiver, relations = parse_presentation(text)
    return compute_basis(quiver, relations, field or f, cap=cap, name=name)


def compute_basis(quiver: Quiver, relations: Sequence[Relation], field: Field = Field(),
                  cap: int = DEFAULT_CAP, name: str = "") -> AlgebraBasis:
    return AlgebraBasis(quiver, relations, field, cap=cap, name=name)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def opposite_algebra(A: AlgebraBasis) -> AlgebraBasis:
    return A.opposite()


# -- the tensor-algebra family -------------------------------------------------

@dataclass
class TensorFamilySpec:
    """Data for ``R_0[R_1] / I`` with ``R_v = k[t]/(t^n_v)`` and bimodules ``k[t]/(t^l)``.

    ``arrows`` are ``(label, source, target)``; ``extra`` are relation strings
    in the presentation syntax, each a combination of parallel paths through at
    least two arrows of the underlying quiver.
    """

    vertices: Sequence[str]
    arrows: Sequence[tuple[str, str, str]]
    orders: Mapping[str, int]
    lengths: Mapping[str, int]
    extra: Sequence[str] = ()
    loop_labels: Mapping[str, str] = dc_field(default_factory=dict)

    def loop(self, v: str) -> str:
        return self.loop_labels.get(v, f"t_{v}")

    def validate(self):
        base = Quiver(self.vertices, self.arrows)
        if not base.is_connected():
            raise ValueError("underlying quiver must be connected")
        for a in base.arrows:
            if a.source == a.target:
                raise ValueError(f"underlying quiver has a loop {a.label!r}")
        # acyclic: Kahn's algorithm
        indeg = [0] * base.n_vertices
        for a in base.arrows:
            indeg[a.target] += 1
        ready = [v for v in range(base.n_vertices) if indeg[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for a in base.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        ready.append(a.target)
        if seen != base.n_vertices:
            raise ValueError("underlying quiver has an oriented cycle")
        for v in self.vertices:
            if self.orders.get(v, 0) < 2:
                raise ValueError(f"truncation order at {v!r} must be >= 2")
        for label, s, t in self.arrows:
            l = self.lengths.get(label, 0)
            if not 0 < l < min(self.orders[s], self.orders[t]):
                raise ValueError(f"bimodule length for {label!r} must satisfy 0 < l < min(n_s, n_t)")
        return base


def build_tensor_family(spec: TensorFamilySpec, field: Field = Field(), cap: int = DEFAULT_CAP) -> AlgebraBasis:
    base = spec.validate()
    lines = [f"vertex {v}" for v in spec.vertices]
    for v in spec.vertices:
        lines.append(f"arrow {spec.loop(v)} {v} {v}")
    for label, s, t in spec.arrows:
        lines.append(f"arrow {label} {s} {t}")
    for v in spec.vertices:
        lines.append("rel " + "*".join([spec.loop(v)] * spec.orders[v]))
    for label, s, t in spec.arrows:
        lines.append(f"rel {spec.loop(t)}*{label} - {label}*{spec.loop(s)}")
        lines.append("rel " + "*".join([spec.loop(t)] * spec.lengths[label] + [label]))
    base_labels = {a.label for a in base.arrows}
    f_, quiver, rels = parse_presentation("\n".join(lines))
    extra_rels = []
    for text in spec.extra:
        rel = _parse_expression(text, quiver, 0, 0)
        for p in rel:
            if sum(quiver.arrows[a].label in base_labels for a in p.arrows) < 2:
                raise ValueError(f"extra generator {text!r} is not inside J^2")
        extra_rels.append(rel)
    return compute_basis(quiver, rels + extra_rels, field, cap=cap)


def presentation_text(A: AlgebraBasis) -> str:
    Q = A.quiver
    lines = [f"field {'Q' if A.field.is_rational else 'F ' + str(A.field.p)}"]
    lines += [f"vertex {v}" for v in Q.vertices]
    lines += [f"arrow {a.label} {Q.vertices[a.source]} {Q.vertices[a.target]}" for a in Q.arrows]
    lines += [f"rel {r}" for r in A.relation_strings()]
    return "\n".join(lines) + "\n"


# -- Cartan / Coxeter ------------------------------------------------------------

@dataclass
class CartanData:
    cartan: list[list[int]]
    coxeter: list[list[Fraction]] | None
    charpoly: list[int] | None  # coefficients, highest degree first

    def charpoly_string(self, var: str = "λ") -> str:
        if self.charpoly is None:
            return "undefined"
        lam = sympy.Symbol(var)
        return str(sympy.Poly(self.charpoly, lam).as_expr())


def cartan_coxeter(A: AlgebraBasis) -> CartanData:
    """Cartan matrix (column ``j`` = dimension vector of ``A e_j``), Coxeter matrix
    ``-C^{-T} C`` and its characteristic polynomial."""
    D = A.piece_dims()
    C = sympy.Matrix(D.tolist())
    cartan = [[int(x) for x in row] for row in D.tolist()]
    if C.det() == 0:
        return CartanData(cartan, None, None)
    Phi = -(C.inv().T) * C
    lam = sympy.Symbol("lambda")
    poly = Phi.charpoly(lam)
    coeffs = [c for c in poly.all_coeffs()]
    if any(not c.is_integer for c in coeffs):
        # Cartan matrix not unimodular: keep exact rational coefficients
        coeffs_out = [Fraction(int(c.p), int(c.q)) for c in coeffs]
    else:
        coeffs_out = [int(c) for c in coeffs]
    cox = [[Fraction(int(x.p), int(x.q)) for x in Phi.row(i)] for i in range(Phi.rows)]
    return CartanData(cartan, cox, coeffs_out)
