"""Graded quotients T_S V / <R>: Hilbert data, normal bases, Koszul duals.

The degree-d slice of the two-sided ideal is built by the recursion
I_d = V (x) I_(d-1) + R (x) V^(d-N), kept as a sparse row-echelon set pivoting
on the *largest* monomial (canonical path order).  The non-pivot monomials are
then exactly the greedy-from-smallest complement basis, and normal forms of
monomials follow by back-substitution with memoization.  No Groebner machinery:
everything is plain exact linear algebra degree by degree.

Presentations are immutable; the slice cache behaves as a pure memo.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .field import CycField, CycNum, Subspace
from .paths import Path, PathKey, Quiver, TensorElement, delta_image

SparseRow = dict  # PathKey -> CycNum, zero-free


class Presentation:
    """A graded presentation T_S V / <R> with homogeneous relations of one degree."""

    def __init__(self, quiver: Quiver, field: CycField, degree: int,
                 relations: "Subspace | Iterable[TensorElement]"):
        if degree < 1:
            raise ValueError("relation degree must be >= 1")
        self.quiver = quiver
        self.field = field
        self.degree = degree
        if isinstance(relations, Subspace):
            if relations.ambient_dim != len(quiver.paths(degree)):
                raise ValueError("relation subspace has wrong ambient dimension")
            self.relations = relations
        else:
            vecs = []
            for r in relations:
                if r.quiver is not quiver or r.degree != degree:
                    raise ValueError("relation of wrong quiver or degree")
                vecs.append(r.vector())
            self.relations = Subspace.from_vectors(
                field, len(quiver.paths(degree)), vecs)
        self._engine = _IdealSlices(self)

    # -- inspection -----------------------------------------------------------

    def relation_elements(self) -> list[TensorElement]:
        """The canonical (echelon) relation basis as tensor elements."""
        return [TensorElement.from_vector(self.quiver, self.field, self.degree,
                                          list(r)) for r in self.relations.rows]

    def __repr__(self) -> str:
        return (f"Presentation(deg {self.degree}, {self.relations.dim} relations "
                f"on {self.quiver!r})")

    # -- graded data ----------------------------------------------------------

    def ideal_rank(self, d: int) -> int:
        return len(self._engine.echelon(d))

    def graded_dim(self, d: int) -> int:
        return len(self.quiver.paths(d)) - self.ideal_rank(d)

    def normal_monomials(self, d: int) -> list[Path]:
        """Greedy complement basis of the degree-d slice (canonical order)."""
        ech = self._engine.echelon(d)
        return [p for p in self.quiver.paths(d) if p.key not in ech]

    def reduce_monomial(self, d: int, key) -> SparseRow:
        """Normal form of a single degree-d monomial (memoized)."""
        return self._engine.reduce_monomial(d, key)

    def normal_form(self, x: TensorElement) -> SparseRow:
        """Normal-form coordinates of x over normal_monomials(deg x)."""
        if x.quiver is not self.quiver:
            raise ValueError("element of a different quiver")
        out: SparseRow = {}
        for key, c in x.terms.items():
            for nk, nc in self._engine.reduce_monomial(x.degree, key).items():
                s = out.get(nk)
                s = c * nc if s is None else s + c * nc
                if s:
                    out[nk] = s
                elif nk in out:
                    del out[nk]
        return out

    def is_zero_in_quotient(self, x: TensorElement) -> bool:
        return not self.normal_form(x)


def derivation_quotient(omega: TensorElement, k: int) -> Presentation:
    """The derivation-quotient presentation: relations = all order-k derivatives."""
    n = omega.degree
    if not 0 < n - k:
        raise ValueError("need relation degree n - k >= 1")
    return Presentation(omega.quiver, omega.field, n - k, delta_image(omega, k))


# ---------------------------------------------------------------------------
# the sparse slice engine
# ---------------------------------------------------------------------------

class _IdealSlices:
    """Per-presentation cache of echelonized ideal slices and normal forms."""

    def __init__(self, pres: Presentation):
        self.pres = pres
        self._ech: dict[int, dict[PathKey, SparseRow]] = {}
        self._nf: dict[int, dict[PathKey, SparseRow]] = {}

    def echelon(self, d: int) -> dict[PathKey, SparseRow]:
        if d in self._ech:
            return self._ech[d]
        pres = self.pres
        N = pres.degree
        if d < N:
            self._ech[d] = {}
            return self._ech[d]
        quiver, field = pres.quiver, pres.field
        ech: dict[PathKey, SparseRow] = {}
        one = field.one
        if d == N:
            basis = quiver.paths(N)
            for rowvec in pres.relations.rows:
                row = {basis[j].key: c for j, c in enumerate(rowvec) if c}
                _insert(ech, row, one)
        else:
            prev = self.echelon(d - 1)
            arrows = quiver.arrows
            one_vertex = quiver.n_vertices == 1
            for a in range(quiver.n_arrows):
                t_a = arrows[a].tail
                for piv, row in prev.items():
                    if one_vertex:
                        ech[(a,) + piv] = {(a,) + k: c for k, c in row.items()}
                        continue
                    shifted = {(a,) + k: c for k, c in row.items()
                               if arrows[k[0]].head == t_a}
                    if shifted:
                        _insert(ech, shifted, one)
            rel_rows = []
            basis_n = quiver.paths(N)
            for rowvec in pres.relations.rows:
                rel_rows.append([(basis_n[j].key, c)
                                 for j, c in enumerate(rowvec) if c])
            for m in quiver.paths(d - N):
                mh = m.head
                for terms in rel_rows:
                    row = {k + m.word: c for k, c in terms
                           if arrows[k[-1]].tail == mh}
                    if row:
                        _insert(ech, row, one)
        self._ech[d] = ech
        return ech

    def reduce_monomial(self, d: int, key: PathKey) -> SparseRow:
        """Normal form of a degree-d monomial over the normal monomials."""
        ech = self.echelon(d)
        memo = self._nf.setdefault(d, {})
        got = memo.get(key)
        if got is not None:
            return got
        one = self.pres.field.one
        stack = [key]
        while stack:
            k = stack[-1]
            if k in memo:
                stack.pop()
                continue
            row = ech.get(k)
            if row is None:
                memo[k] = {k: one}
                stack.pop()
                continue
            pending = [t for t in row if t != k and t not in memo]
            if pending:
                stack.extend(pending)
                continue
            acc: SparseRow = {}
            for t, c in row.items():
                if t == k:
                    continue
                for nk, nc in memo[t].items():
                    s = acc.get(nk)
                    s = -c * nc if s is None else s - c * nc
                    if s:
                        acc[nk] = s
                    elif nk in acc:
                        del acc[nk]
            memo[k] = acc
            stack.pop()
        return memo[key]


def _insert(ech: dict, row: SparseRow, one: CycNum) -> None:
    """Eliminate against existing pivots (largest-monomial); store if independent."""
    while row:
        piv = max(row)
        existing = ech.get(piv)
        if existing is None:
            c = row[piv]
            if c != one:
                inv = c.inverse()
                row = {k: inv * v for k, v in row.items()}
            ech[piv] = row
            return
        c = row[piv]
        for k, v in existing.items():
            s = row.get(k)
            s = -c * v if s is None else s - c * v
            if s:
                row[k] = s
            elif k in row:
                del row[k]
    # row reduced to zero: dependent, nothing to store


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def ideal_degree_span(p: Presentation, d: int) -> Subspace:
    """The degree-d slice of <R> as a canonical Subspace (modest degrees)."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    paths = p.quiver.paths(d)
    idx = p.quiver.path_index(d)
    ech = p._engine.echelon(d)
    zero = p.field.zero
    vecs = []
    for row in ech.values():
        vec = [zero] * len(paths)
        for k, c in row.items():
            vec[idx[k]] = c
        vecs.append(vec)
    return Subspace.from_vectors(p.field, len(paths), vecs)


def graded_dims(p: Presentation, dmax: int) -> list[int]:
    """[dim A_0, ..., dim A_dmax] for A = T_S V / <R>."""
    if dmax < 0:
        raise ValueError("dmax must be >= 0")
    return [p.graded_dim(d) for d in range(dmax + 1)]


def normal_basis(p: Presentation, d: int) -> list[Path]:
    """Canonical monomial complement of the ideal in degree d."""
    return p.normal_monomials(d)


def koszul_dual(p: Presentation) -> Presentation:
    """T_S W* / <R-perp> for a quadratic presentation.

    Dual arrows reverse orientation; a dual word a*b* pairs with the primal
    word ba (the reversal makes composability match across the duality).  The
    resulting presentation is canonical up to the usual opposite-algebra
    convention; all graded data is convention-independent.
    """
    if p.degree != 2:
        raise ValueError("Koszul dual needs a quadratic presentation")
    q = p.quiver
    dq = Quiver(q.vertices,
                [(a.name + "'", q.vertices[a.head], q.vertices[a.tail])
                 for a in q.arrows])
    dual_paths = dq.paths(2)
    primal_idx = q.path_index(2)
    rows = []
    for rvec in p.relations.rows:
        row = []
        for dp in dual_paths:
            a, b = dp.word
            row.append(rvec[primal_idx[(b, a)]])
        rows.append(row)
    if rows:
        from .field import Matrix
        perp = Matrix(p.field, rows, ncols=len(dual_paths)).nullspace()
    else:
        perp = Subspace.full(p.field, len(dual_paths))
    return Presentation(dq, p.field, 2, perp)


def dual_coalgebra_slice(p: Presentation, k: int) -> Subspace:
    """(A^!_k)* inside degree-k tensor space: the meet of all V^l (x) R (x) V^(k-l-2).

    Computed by the equivalent recursion slice_k = (R (x) V^(k-2)) meet
    (V (x) slice_(k-1)) -- tensoring with V commutes with intersections.
    Degrees 0 and 1 give the full space.
    """
    if p.degree != 2:
        raise ValueError("dual coalgebra slices need a quadratic presentation")
    if k < 0:
        raise ValueError("k must be >= 0")
    return _slice(p, k)


def _slice(p: Presentation, k: int) -> Subspace:
    cache = getattr(p, "_slice_cache", None)
    if cache is None:
        cache = {}
        p._slice_cache = cache  # type: ignore[attr-defined]
    if k in cache:
        return cache[k]
    q, f = p.quiver, p.field
    if k <= 1:
        out = Subspace.full(f, len(q.paths(k)))
    else:
        idx = q.path_index(k)
        ambient = len(q.paths(k))
        zero = f.zero
        rel_elems = p.relation_elements()
        vecs = []
        for r in rel_elems:
            for m in q.paths(k - 2):
                prod = r * TensorElement.from_path(m, f) if not m.is_vertex \
                    else r * TensorElement.vertex_element(q, f, m.vertex)
                if prod.is_zero():
                    continue
                vec = [zero] * ambient
                for kk, c in prod.terms.items():
                    vec[idx[kk]] = c
                vecs.append(vec)
        r_head = Subspace.from_vectors(f, ambient, vecs)
        if k == 2:
            out = r_head
        else:
            prev = _slice(p, k - 1)
            arrows = q.arrows
            vecs = []
            for a in range(q.n_arrows):
                t_a = arrows[a].tail
                for row in prev.rows:
                    vec = [zero] * ambient
                    any_term = False
                    for j, pp in enumerate(q.paths(k - 1)):
                        c = row[j]
                        if c and (pp.is_vertex and pp.vertex == t_a
                                  or not pp.is_vertex and arrows[pp.word[0]].head == t_a):
                            vec[idx[(a,) + pp.word]] = c
                            any_term = True
                    if any_term:
                        vecs.append(vec)
            v_prev = Subspace.from_vectors(f, ambient, vecs)
            out = r_head.meet(v_prev)
    cache[k] = out
    return out
