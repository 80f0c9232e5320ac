"""McKay quivers, equivariant intertwiners, and group superpotentials.

A finite matrix group G < GL(V) over a cyclotomic field determines a quiver on
the irreducible representations (arrows i -> j counted by dim Hom(S_j, V* (x)
S_i)), a vertex permutation from tensoring with det V, and a degree-(dim V)
twisted superpotential whose coefficients are the Schur scalars comparing
composite intertwiners against fixed determinant isomorphisms.  The derivation
quotient of that superpotential presents the skew group algebra of G acting on
polynomial functions, which is what the Hilbert-series cross-check against
Molien multiplicities validates degree by degree.

Conventions (shared with :mod:`quiverpot.paths`):

* in a path word ``(a_1, ..., a_k)`` the rightmost arrow is traversed first,
  so ``tail(a_i) == head(a_(i+1))``;
* an arrow a: i -> j carries a primal intertwiner psi_a : S_j -> V* (x) S_i
  (matrix rows indexed ``k * dim_i + l`` for basis vector ``v*_k (x) s_l``)
  and a dual intertwiner psi_a* : S_i -> S_j (x) V (rows ``s * n + k`` for
  ``s_s (x) e_k``), normalized so the trace pairing satisfies
  ``<psi_a, psi_b*> = delta_ab``;
* the determinant isomorphisms u_j : S_(T(j)) -> S_j (x) det V are stored with
  the one-dimensional det factor dropped (basis ``e_1 ^ ... ^ e_n -> 1``); the
  default normalization makes the first nonzero entry 1, and fixtures may
  override them with explicit equivariant choices.
"""
from __future__ import annotations

import json
from collections import Counter, deque
from importlib import resources
from typing import Callable, Mapping, Sequence

from .field import CycField, CycNum, Matrix, Subspace, parse_cyc
from .paths import Path, Quiver, TensorElement, Twist, is_superpotential

__all__ = [
    "GroupData",
    "Irrep",
    "McKayData",
    "group_closure",
    "declare_irreps",
    "abelian_characters",
    "mckay_quiver",
    "intertwiner_space",
    "arrow_intertwiners",
    "dual_intertwiners",
    "path_scalar_cp",
    "mckay_potential",
    "molien_multiplicities",
    "matrix_from_strings",
    "group_from_json",
    "mckay_from_json",
    "fixture_names",
    "load_fixture",
]


# ---------------------------------------------------------------------------
# small exact helpers
# ---------------------------------------------------------------------------

def _trace(m: Matrix) -> CycNum:
    t = m.field.zero
    for i in range(min(m.nrows, m.ncols)):
        t = t + m[i, i]
    return t


def _det(m: Matrix) -> CycNum:
    """Cofactor determinant; the matrices here are at most 4 x 4."""
    n = m.nrows
    f = m.field
    if n != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return f.one
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    total = f.zero
    for j in range(n):
        if not m[0, j]:
            continue
        minor = Matrix(f, [[m[i, c] for c in range(n) if c != j]
                           for i in range(1, n)], ncols=n - 1)
        term = m[0, j] * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def _perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation listing 0..n-1 in the given order."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        while seq[i] != i:
            j = seq[i]
            seq[i], seq[j] = seq[j], seq[i]
            sign = -sign
    return sign


def _as_nonneg_int(x: CycNum, what: str) -> int:
    if not x.is_rational():
        raise ValueError(f"{what} is not a nonnegative integer: {x}")
    r = x.as_rational()
    n = int(r)
    if n != r or n < 0:
        raise ValueError(f"{what} is not a nonnegative integer: {x}")
    return n


def _unvec(f: CycField, vec: Sequence[CycNum], nrows: int, ncols: int) -> Matrix:
    return Matrix(f, [[vec[r * ncols + c] for c in range(ncols)]
                      for r in range(nrows)], ncols=ncols)


def _vec(m: Matrix) -> list[CycNum]:
    return [m[r, c] for r in range(m.nrows) for c in range(m.ncols)]


# ---------------------------------------------------------------------------
# group data
# ---------------------------------------------------------------------------

class Irrep:
    """An irreducible representation: one matrix per enumerated group element."""

    __slots__ = ("name", "dim", "matrices")

    def __init__(self, name: str, matrices: Sequence[Matrix]):
        self.name = name
        self.matrices = tuple(matrices)
        self.dim = self.matrices[0].nrows

    def character(self) -> tuple[CycNum, ...]:
        return tuple(_trace(m) for m in self.matrices)

    def __repr__(self) -> str:
        return f"Irrep({self.name}, dim {self.dim})"


class GroupData:
    """A finite matrix group: elements, multiplication table, and irreps.

    ``elements[0]`` is the identity; ``mul[i][j]`` indexes ``elements[i] @
    elements[j]``; ``words[e]`` is a generator word reaching element ``e``,
    used to extend representations given on the generators only.
    """

    def __init__(self, field: CycField, elements: Sequence[Matrix],
                 mul: Sequence[Sequence[int]], inv: Sequence[int],
                 generator_indices: Sequence[int],
                 words: Sequence[tuple[int, ...]]):
        self.field = field
        self.elements = tuple(elements)
        self.mul = tuple(tuple(r) for r in mul)
        self.inv = tuple(inv)
        self.generator_indices = tuple(generator_indices)
        self.words = tuple(tuple(w) for w in words)
        self.n = self.elements[0].nrows
        self.order = len(self.elements)
        self.det = tuple(_det(g) for g in self.elements)
        self.irreps: tuple[Irrep, ...] = ()

    @property
    def generators(self) -> tuple[Matrix, ...]:
        return tuple(self.elements[i] for i in self.generator_indices)

    def irrep_index(self, name: str) -> int:
        for i, r in enumerate(self.irreps):
            if r.name == name:
                return i
        raise KeyError(f"no irrep named {name!r}")

    def __repr__(self) -> str:
        return f"GroupData(order {self.order}, dim {self.n})"


def group_closure(field: CycField, generators: Sequence[Matrix],
                  cap: int = 4096) -> GroupData:
    """Enumerate the matrix group generated by the given invertible matrices.

    Breadth-first closure under right multiplication; raises once the element
    count would exceed ``cap``.  Returns the group with its multiplication
    table, inverses, and determinant character (no irreps declared yet).
    """
    if not generators:
        raise ValueError("need at least one generator")
    gens = [g if g.field is field else Matrix(field, g.rows) for g in generators]
    n = gens[0].nrows
    for g in gens:
        if g.nrows != n or g.ncols != n:
            raise ValueError("generators must be square matrices of equal size")
        try:
            g.inverse()
        except ValueError:
            raise ValueError("generators must be invertible")
    ident = Matrix.identity(field, n)
    elements: list[Matrix] = [ident]
    index: dict[Matrix, int] = {ident: 0}
    words: list[tuple[int, ...]] = [()]
    queue: deque[int] = deque([0])
    while queue:
        e = queue.popleft()
        for k, g in enumerate(gens):
            prod = elements[e] @ g
            if prod not in index:
                if len(elements) >= cap:
                    raise ValueError(f"group closure exceeded cap {cap}")
                index[prod] = len(elements)
                elements.append(prod)
                words.append(words[e] + (k,))
                queue.append(index[prod])
    order = len(elements)
    mul = [[0] * order for _ in range(order)]
    for i in range(order):
        for j in range(order):
            idx = index.get(elements[i] @ elements[j])
            if idx is None:
                raise ValueError("generators do not close into a group")
            mul[i][j] = idx
    inv = [row.index(0) for row in mul]
    return GroupData(field, elements, mul, inv,
                     [index[g] for g in gens], words)


def _char_inner(group: GroupData, alpha: Sequence[CycNum],
                beta: Sequence[CycNum]) -> CycNum:
    """Hermitian character inner product <alpha, beta> (conjugation = inverse)."""
    f = group.field
    total = f.zero
    for e in range(group.order):
        total = total + alpha[e] * beta[group.inv[e]]
    return total / f.from_rational(group.order)


def declare_irreps(group: GroupData,
                   named: Sequence[tuple[str, Sequence[Matrix]]]) -> None:
    """Attach the full list of irreducibles, given matrices on the generators.

    Each representation is extended to every element along the closure words
    and then validated: full multiplication-table homomorphism check,
    irreducibility (<chi, chi> = 1), pairwise-distinct characters, and
    sum of squared dimensions equal to the group order.
    """
    f = group.field
    irreps: list[Irrep] = []
    for name, gen_mats in named:
        mats_g = [m if m.field is f else Matrix(f, m.rows) for m in gen_mats]
        if len(mats_g) != len(group.generator_indices):
            raise ValueError(f"irrep {name}: need one matrix per generator")
        d = mats_g[0].nrows
        mats: list[Matrix] = []
        for e in range(group.order):
            m = Matrix.identity(f, d)
            for k in group.words[e]:
                m = m @ mats_g[k]
            mats.append(m)
        irreps.append(Irrep(name, mats))
    for rho in irreps:
        for i in range(group.order):
            row = rho.matrices[i]
            for j in range(group.order):
                if row @ rho.matrices[j] != rho.matrices[group.mul[i][j]]:
                    raise ValueError(f"irrep {rho.name} is not a homomorphism")
    chars = [r.character() for r in irreps]
    for r, chi in zip(irreps, chars):
        if _char_inner(group, chi, chi) != f.one:
            raise ValueError(f"character of {r.name} is not irreducible")
    for a in range(len(irreps)):
        for b in range(a + 1, len(irreps)):
            if chars[a] == chars[b]:
                raise ValueError(
                    f"duplicate characters: {irreps[a].name}, {irreps[b].name}")
    if sum(r.dim * r.dim for r in irreps) != group.order:
        raise ValueError("squared dimensions do not sum to the group order")
    group.irreps = tuple(irreps)


def abelian_characters(group: GroupData) -> None:
    """Derive all characters of an abelian group given by diagonal matrices.

    The coordinate characters g -> g[k, k] separate points of a faithful
    diagonal group, so their multiplicative closure is the whole dual group.
    Characters are named r0 (trivial), r1, ... in discovery order.
    """
    for g in group.generators:
        for i in range(g.nrows):
            for j in range(g.ncols):
                if i != j and g[i, j]:
                    raise ValueError(
                        "abelian fast path requires commuting diagonal generators")
    f = group.field
    coord = [tuple(e[k, k] for e in group.elements) for k in range(group.n)]
    trivial = tuple(f.one for _ in range(group.order))
    chars: list[tuple[CycNum, ...]] = [trivial]
    seen = {trivial}
    queue: deque[tuple[CycNum, ...]] = deque([trivial])
    while queue:
        base = queue.popleft()
        for c in coord:
            prod = tuple(x * y for x, y in zip(base, c))
            if prod not in seen:
                seen.add(prod)
                chars.append(prod)
                queue.append(prod)
    if len(chars) != group.order:
        raise ValueError("coordinate characters do not span the dual group")
    group.irreps = tuple(
        Irrep(f"r{i}", [Matrix(f, [[v]]) for v in chi])
        for i, chi in enumerate(chars))


# ---------------------------------------------------------------------------
# intertwiner spaces
# ---------------------------------------------------------------------------

def _dual_action(group: GroupData, e: int) -> Matrix:
    """The matrix of g acting on V* at element index e (inverse-transpose)."""
    return group.elements[group.inv[e]].transpose()


def _equivariance_nullspace(group: GroupData, left: Callable[[int], Matrix],
                            right: Callable[[int], Matrix]) -> Subspace:
    """Solutions M of M right(g) = left(g) M over the generators, vectorized
    row-major; returns the canonical echelon basis of the solution space."""
    f = group.field
    rows: list[Sequence[CycNum]] = []
    some_left = left(group.generator_indices[0])
    some_right = right(group.generator_indices[0])
    nl, nr = some_left.nrows, some_right.nrows
    for g in group.generator_indices:
        a = Matrix.identity(f, nl).kron(right(g).transpose())
        b = left(g).kron(Matrix.identity(f, nr))
        rows.extend((a - b).rows)
    return Matrix(f, rows, ncols=nl * nr).nullspace()


def intertwiner_space(group: GroupData, j: int | str, i: int | str) -> Subspace:
    """The space Hom_G(S_j, V* (x) S_i) of primal arrow intertwiners i -> j.

    Vectors are row-major vectorizations of (n * dim_i) x dim_j matrices; the
    basis is the canonical reduced echelon basis.  The dimension must agree
    with the character count <chi_j, chi_(V*) chi_i>.
    """
    if not group.irreps:
        raise ValueError("no irreps declared")
    ji = group.irrep_index(j) if isinstance(j, str) else j
    ii = group.irrep_index(i) if isinstance(i, str) else i
    ri, rj = group.irreps[ii], group.irreps[ji]
    space = _equivariance_nullspace(
        group,
        lambda g: _dual_action(group, g).kron(ri.matrices[g]),
        lambda g: rj.matrices[g])
    expected = _multiplicity(group, ii, ji)
    if space.dim != expected:
        raise ValueError(
            f"intertwiner space dimension mismatch for ({ri.name} -> {rj.name}):"
            f" got {space.dim}, character count {expected}")
    return space


def _dual_intertwiner_space(group: GroupData, i: int, j: int) -> Subspace:
    """The space Hom_G(S_i, S_j (x) V) holding the dual intertwiners."""
    ri, rj = group.irreps[i], group.irreps[j]
    return _equivariance_nullspace(
        group,
        lambda g: rj.matrices[g].kron(group.elements[g]),
        lambda g: ri.matrices[g])


def _multiplicity(group: GroupData, i: int, j: int) -> int:
    chi_i = group.irreps[i].character()
    chi_j = group.irreps[j].character()
    chi_v = tuple(_trace(e) for e in group.elements)
    f = group.field
    total = f.zero
    for e in range(group.order):
        total = total + chi_j[e] * chi_v[e] * chi_i[group.inv[e]]
    return _as_nonneg_int(total / f.from_rational(group.order),
                          "arrow multiplicity")


def _pair(primal: Matrix, dual: Matrix, n: int) -> CycNum:
    """Trace pairing of psi : S_j -> V* (x) S_i with sigma : S_i -> S_j (x) V."""
    f = primal.field
    d_j = primal.ncols
    d_i = dual.ncols
    total = f.zero
    for s in range(d_j):
        for k in range(n):
            for l in range(d_i):
                total = total + dual[s * n + k, l] * primal[k * d_i + l, s]
    return total


# ---------------------------------------------------------------------------
# the assembled McKay data
# ---------------------------------------------------------------------------

class McKayData:
    """McKay quiver of (G, V) together with its equivariant arrow data.

    Attributes:
        quiver:  vertices named by the irreps, arrows i -> j counted by
                 dim Hom(S_j, V* (x) S_i);
        mult:    that multiplicity matrix, indexed [tail][head];
        T:       vertex map with S_(T(j)) iso S_j (x) det V; ``Tinv`` is its
                 inverse, which is the vertex permutation of ``tau``;
        tau:     the twist: vertex j -> Tinv(j), arrow images obtained by
                 conjugating the primal intertwiners through the determinant
                 isomorphisms;
        arrow_intertwiners:  per-arrow primal maps psi_a;
        dual_intertwiners:   per-arrow dual maps psi_a* with
                             <psi_a, psi_b*> = delta;
        det_isos:  per-vertex u_j : S_(T(j)) -> S_j (det factor dropped).
    """

    def __init__(self, group: GroupData, quiver: Quiver,
                 mult: Sequence[Sequence[int]], T: Sequence[int],
                 det_isos: Sequence[Matrix],
                 arrow_primal: Sequence[Matrix], arrow_dual: Sequence[Matrix],
                 tau: Twist):
        self.group = group
        self.field = group.field
        self.n = group.n
        self.quiver = quiver
        self.names = tuple(quiver.vertices)
        self.dims = tuple(r.dim for r in group.irreps)
        self.mult = tuple(tuple(r) for r in mult)
        self.T = tuple(T)
        self.Tinv = tuple(self.T.index(j) for j in range(len(self.T)))
        self.det_isos = tuple(det_isos)
        self.arrow_intertwiners = tuple(arrow_primal)
        self.dual_intertwiners = tuple(arrow_dual)
        self.tau = tau
        self.arrow_tail = tuple(a.tail for a in quiver.arrows)
        self.arrow_head = tuple(a.head for a in quiver.arrows)

    def __repr__(self) -> str:
        return (f"McKayData({self.quiver.n_vertices} vertices, "
                f"{self.quiver.n_arrows} arrows, degree {self.n})")


def _det_iso_space(group: GroupData, j: int, T_j: int) -> Subspace:
    """Solutions U of U rho_(T(j))(g) = det(g) rho_j(g) U (a Schur line)."""
    f = group.field
    rj, rt = group.irreps[j], group.irreps[T_j]
    return _equivariance_nullspace(
        group,
        lambda g: rj.matrices[g].scale(group.det[g]),
        lambda g: rt.matrices[g])


def mckay_quiver(group: GroupData,
                 arrow_bases: Sequence[tuple[str, str, str, Matrix]] | None = None,
                 det_isos: Mapping[str, Matrix] | None = None) -> McKayData:
    """Assemble the McKay quiver with intertwiners, duals, and twist.

    ``arrow_bases`` optionally fixes the arrows as explicit equivariant dual
    intertwiners: entries (name, tail, head, matrix) where the matrix is
    psi_a* : S_tail -> S_head (x) V with rows indexed ``s * n + k``.  The
    primal basis is then the trace-pairing dual of the supplied family.
    Without it, arrows take the canonical echelon basis on the primal side
    and Gram-solved duals.  ``det_isos`` optionally replaces the default
    (first nonzero entry = 1) determinant isomorphisms, keyed by vertex name.
    """
    if not group.irreps:
        raise ValueError("declare irreps first "
                         "(declare_irreps or abelian_characters)")
    f = group.field
    irr = group.irreps
    k = len(irr)
    names = [r.name for r in irr]
    chars = [r.character() for r in irr]

    mult = [[_multiplicity(group, i, j) for j in range(k)] for i in range(k)]

    # vertex map from tensoring with the determinant character
    T: list[int] = []
    for j in range(k):
        twisted = tuple(group.det[e] * chars[j][e] for e in range(group.order))
        matches = [i for i in range(k) if chars[i] == twisted]
        if len(matches) != 1:
            raise ValueError(
                "irreducible characters are not closed under the determinant twist")
        T.append(matches[0])
    Tinv = [T.index(j) for j in range(k)]

    # the quiver
    if arrow_bases is not None:
        arrow_list = [(nm, t, h) for (nm, t, h, _m) in arrow_bases]
        cnt = Counter((t, h) for (_n, t, h) in arrow_list)
        for i in range(k):
            for j in range(k):
                if cnt.get((names[i], names[j]), 0) != mult[i][j]:
                    raise ValueError(
                        f"supplied arrows for ({names[i]} -> {names[j]}) do not"
                        f" match multiplicity {mult[i][j]}")
    else:
        arrow_list = []
        for i in range(k):
            for j in range(k):
                m = mult[i][j]
                for c in range(m):
                    nm = f"{names[i]}_{names[j]}" + (f"_{c}" if m > 1 else "")
                    arrow_list.append((nm, names[i], names[j]))
    quiver = Quiver(names, arrow_list)

    # determinant isomorphisms u_j : S_(T(j)) -> S_j
    u: list[Matrix] = []
    for j in range(k):
        space = _det_iso_space(group, j, T[j])
        if space.dim != 1:
            raise ValueError("determinant isomorphism is not unique up to scale")
        u.append(_unvec(f, space.rows[0], irr[j].dim, irr[T[j]].dim))
    if det_isos:
        for vname, mat in det_isos.items():
            j = group.irrep_index(vname)
            mat = mat if mat.field is f else Matrix(f, mat.rows)
            space = _det_iso_space(group, j, T[j])
            if not space.contains(_vec(mat)) or all(not x for x in _vec(mat)):
                raise ValueError(
                    f"supplied determinant isomorphism at {vname} is not a "
                    f"nonzero equivariant map")
            u[j] = mat

    # arrow intertwiners block by block
    primal: list[Matrix | None] = [None] * quiver.n_arrows
    dual: list[Matrix | None] = [None] * quiver.n_arrows
    primal_spaces: dict[tuple[int, int], Subspace] = {}
    by_block: dict[tuple[int, int], list[int]] = {}
    for a in range(quiver.n_arrows):
        by_block.setdefault(
            (quiver.arrows[a].tail, quiver.arrows[a].head), []).append(a)
    supplied = ({nm: m for (nm, _t, _h, m) in arrow_bases}
                if arrow_bases is not None else None)
    for (i, j), arrows_here in by_block.items():
        m = len(arrows_here)
        p_space = intertwiner_space(group, j, i)
        d_space = _dual_intertwiner_space(group, i, j)
        if d_space.dim != m:
            raise ValueError("intertwiner space dimension mismatch (dual side)")
        primal_spaces[i, j] = p_space
        d_i, d_j = irr[i].dim, irr[j].dim
        phis = [_unvec(f, v, group.n * d_i, d_j) for v in p_space.rows]
        if supplied is None:
            sigmas = [_unvec(f, v, d_j * group.n, d_i) for v in d_space.rows]
            gram = Matrix(f, [[_pair(phis[r], sigmas[s], group.n)
                               for s in range(m)] for r in range(m)])
            try:
                x = gram.transpose().inverse()
            except ValueError:
                raise ValueError("singular Gram matrix for the trace pairing")
            for c, a in enumerate(arrows_here):
                primal[a] = phis[c]
                acc = Matrix.zeros(f, d_j * group.n, d_i)
                for s in range(m):
                    acc = acc + sigmas[s].scale(x[c, s])
                dual[a] = acc
        else:
            sig_arr: list[Matrix] = []
            for a in arrows_here:
                mat = supplied[quiver.arrows[a].name]
                mat = mat if mat.field is f else Matrix(f, mat.rows)
                if not d_space.contains(_vec(mat)):
                    raise ValueError(
                        f"supplied basis for arrow {quiver.arrows[a].name} is "
                        f"not an equivariant map")
                sig_arr.append(mat)
            if Subspace.from_vectors(
                    f, d_j * group.n * d_i, [_vec(s) for s in sig_arr]).dim != m:
                raise ValueError("supplied arrow basis is linearly dependent")
            gram = Matrix(f, [[_pair(phis[r], sig_arr[s], group.n)
                               for s in range(m)] for r in range(m)])
            try:
                y = gram.inverse()
            except ValueError:
                raise ValueError("singular Gram matrix for the trace pairing")
            for s, a in enumerate(arrows_here):
                acc = Matrix.zeros(f, group.n * d_i, d_j)
                for r in range(m):
                    acc = acc + phis[r].scale(y[s, r])
                primal[a] = acc
                dual[a] = sig_arr[s]

    # the twist: conjugate each primal intertwiner through the det isos
    perm = Tinv
    images: list[TensorElement | None] = [None] * quiver.n_arrows
    u_inv = [uu.inverse() for uu in u]
    for a in range(quiver.n_arrows):
        t, h = quiver.arrows[a].tail, quiver.arrows[a].head
        tt, hh = Tinv[t], Tinv[h]
        moved = (Matrix.identity(f, group.n).kron(u[tt])
                 @ primal[a] @ u_inv[hh])
        targets = by_block.get((tt, hh), [])
        cols = [_vec(primal[b]) for b in targets]
        system = Matrix(f, [[col[r] for col in cols]
                            for r in range(len(cols[0]))],
                        ncols=len(cols)) if cols else None
        coords = system.solve(_vec(moved)) if system is not None else None
        if coords is None:
            raise ValueError("superpotential symmetry check fails "
                             "(arrow basis is not closed under the twist)")
        images[a] = TensorElement(quiver, f, 1, {
            (b,): c for b, c in zip(targets, coords) if c})
    tau = Twist(quiver, f, perm, images)

    data = McKayData(group, quiver, mult, T, u, primal, dual, tau)
    # biorthogonality sanity within every block
    for (i, j), arrows_here in by_block.items():
        for r, a in enumerate(arrows_here):
            for s, b in enumerate(arrows_here):
                want = f.one if r == s else f.zero
                if _pair(data.arrow_intertwiners[a],
                         data.dual_intertwiners[b], group.n) != want:
                    raise ValueError("trace pairing is not biorthogonal")
    return data


def arrow_intertwiners(data: McKayData) -> dict[str, Matrix]:
    """The primal intertwiners psi_a keyed by arrow name."""
    return {data.quiver.arrows[a].name: data.arrow_intertwiners[a]
            for a in range(data.quiver.n_arrows)}


def dual_intertwiners(data: McKayData) -> dict[str, Matrix]:
    """The dual intertwiners psi_a* keyed by arrow name."""
    return {data.quiver.arrows[a].name: data.dual_intertwiners[a]
            for a in range(data.quiver.n_arrows)}


# ---------------------------------------------------------------------------
# Schur scalars and the superpotential
# ---------------------------------------------------------------------------

def path_scalar_cp(data: McKayData, p: Path | Sequence[str]) -> CycNum:
    """The Schur scalar c_p of a degree-n path.

    Composes the dual intertwiners along the path (rightmost arrow first,
    collecting one V tensor factor per letter in word order), contracts the n
    V-factors with the antisymmetrizer, and expresses the result as a multiple
    of the determinant isomorphism at the head vertex.  Returns 0 when the
    endpoints miss the determinant twist (T(head) != tail), after checking the
    composite indeed vanishes.
    """
    if not isinstance(p, Path):
        p = data.quiver.path(*p)
    n = data.n
    if p.degree != n:
        raise ValueError(f"path degree must equal dim V = {n}")
    f = data.field
    letters = p.word
    mat = data.dual_intertwiners[letters[-1]]
    state: dict[int, dict[int, CycNum]] = {}
    for r in range(mat.nrows):
        cols = {c: mat[r, c] for c in range(mat.ncols) if mat[r, c]}
        if cols:
            state[r] = cols
    applied = 1
    for w in reversed(letters[:-1]):
        mat = data.dual_intertwiners[w]
        d_cur = mat.ncols
        stride = n ** applied
        col_entries: list[list[tuple[int, CycNum]]] = [
            [(r, mat[r, c]) for r in range(mat.nrows) if mat[r, c]]
            for c in range(d_cur)]
        new_state: dict[int, dict[int, CycNum]] = {}
        for row, cols in state.items():
            s_cur, rest = divmod(row, stride)
            for r_new, coeff in col_entries[s_cur]:
                bucket = new_state.setdefault(r_new * stride + rest, {})
                for c, v in cols.items():
                    val = bucket.get(c, f.zero) + coeff * v
                    if val:
                        bucket[c] = val
                    elif c in bucket:
                        del bucket[c]
        state = {r: cols for r, cols in new_state.items() if cols}
        applied += 1
    # contract V^(x n) against the alternating form (det basis coefficient)
    result: dict[tuple[int, int], CycNum] = {}
    stride_full = n ** n
    for row, cols in state.items():
        s, rest = divmod(row, stride_full)
        digits = []
        x = rest
        for _ in range(n):
            digits.append(x % n)
            x //= n
        if len(set(digits)) != n:
            continue
        sgn = _perm_sign(tuple(reversed(digits)))
        for c, v in cols.items():
            val = result.get((s, c), f.zero) + (v if sgn > 0 else -v)
            if val:
                result[s, c] = val
            elif (s, c) in result:
                del result[s, c]
    hvert = p.head
    tvert = p.tail
    if data.T[hvert] != tvert:
        if result:
            raise ValueError("nonzero composite outside the determinant-twist "
                             "block (equivariance violated)")
        return f.zero
    U = data.det_isos[hvert]
    ratio = None
    for r in range(U.nrows):
        for c in range(U.ncols):
            if U[r, c]:
                ratio = result.get((r, c), f.zero) / U[r, c]
                break
        if ratio is not None:
            break
    assert ratio is not None
    for r in range(U.nrows):
        for c in range(U.ncols):
            if result.get((r, c), f.zero) != ratio * U[r, c]:
                raise ValueError("path composite is not proportional to the "
                                 "determinant isomorphism")
    return ratio


def mckay_potential(data: McKayData,
                    normalize: bool = True) -> tuple[TensorElement, Twist]:
    """The degree-n superpotential sum of c_p dim(S_head(p)) p, with its twist.

    With ``normalize`` the result is rescaled so that the first path in
    canonical order carries coefficient 1.  The twisted supercyclic predicate
    is verified before returning and failure raises, since it would mean the
    arrow data and twist are inconsistent.
    """
    f, q, n = data.field, data.quiver, data.n
    terms: dict[tuple, CycNum] = {}
    for p in q.paths(n):
        if data.T[p.head] != p.tail:
            continue
        c = path_scalar_cp(data, p)
        if c:
            terms[p.key] = c * data.dims[p.head]
    omega = TensorElement(q, f, n, terms)
    if normalize and terms:
        for p in q.paths(n):
            c = omega.coefficient(p)
            if c:
                omega = omega.scale(c.inverse())
                break
    if not is_superpotential(omega, data.tau):
        raise ValueError("superpotential symmetry check fails "
                         "(arrow basis is not closed under the twist)")
    return omega, data.tau


# ---------------------------------------------------------------------------
# Molien multiplicities
# ---------------------------------------------------------------------------

def molien_multiplicities(group: GroupData, d: int) -> list[list[int]]:
    """Multiplicity matrix of degree-d polynomial blocks: M[i][j] is the
    dimension of the (tail i, head j) block, the character count
    <chi_j, chi_(Sym^d V*) chi_i>.

    The symmetric-power character comes from the Newton recursion on the
    power traces chi_(V*)(g^m), element by element.
    """
    if not group.irreps:
        raise ValueError("no irreps declared")
    if d < 0:
        raise ValueError("degree must be nonnegative")
    f = group.field
    order = group.order
    chi_v_dual = [_trace(_dual_action(group, e)) for e in range(order)]
    # power traces p_m(e) = chi_(V*)(e^m)
    p: list[list[CycNum]] = [[f.from_rational(group.n)] * order]
    pow_idx = [[0] * order]
    for m in range(1, d + 1):
        prev = pow_idx[m - 1]
        cur = [group.mul[prev[e]][e] for e in range(order)]
        pow_idx.append(cur)
        p.append([chi_v_dual[cur[e]] for e in range(order)])
    # complete homogeneous h_m(e) by Newton's identity
    h: list[list[CycNum]] = [[f.one] * order]
    for m in range(1, d + 1):
        row = []
        inv_m = f.from_rational(m).inverse()
        for e in range(order):
            acc = f.zero
            for t in range(1, m + 1):
                acc = acc + p[t][e] * h[m - t][e]
            row.append(acc * inv_m)
        h.append(row)
    hd = h[d]
    chars = [r.character() for r in group.irreps]
    k = len(chars)
    inv = group.inv
    out: list[list[int]] = []
    scale = f.from_rational(order).inverse()
    for i in range(k):
        row = []
        for j in range(k):
            total = f.zero
            for e in range(order):
                total = total + chars[j][e] * hd[inv[e]] * chars[i][inv[e]]
            row.append(_as_nonneg_int(total * scale, "Molien multiplicity"))
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# JSON input (fixtures and CLI)
# ---------------------------------------------------------------------------

def matrix_from_strings(f: CycField, rows: Sequence[Sequence[str]]) -> Matrix:
    """A matrix from exact scalar strings ('1/2', 'z^3 - 1', ...)."""
    return Matrix(f, [[parse_cyc(str(x), f) for x in row] for row in rows],
                  ncols=len(rows[0]) if rows else 0)


def group_from_json(obj: Mapping) -> GroupData:
    """Build a group from the JSON schema used by the fixture corpus.

    Keys: ``conductor`` (int), ``generators`` (matrices as nested lists of
    exact scalar strings), optional ``cap``, optional ``irreps`` (list of
    {name, matrices} with one matrix per generator), optional ``abelian``
    flag to derive characters from diagonal generators.
    """
    f = CycField(int(obj["conductor"]))
    gens = [matrix_from_strings(f, g) for g in obj["generators"]]
    group = group_closure(f, gens, cap=int(obj.get("cap", 4096)))
    if obj.get("irreps"):
        declare_irreps(group, [
            (r["name"], [matrix_from_strings(f, m) for m in r["matrices"]])
            for r in obj["irreps"]])
    elif obj.get("abelian"):
        abelian_characters(group)
    return group


def mckay_from_json(obj: Mapping) -> tuple[GroupData, McKayData]:
    """Group plus assembled McKay data from one fixture JSON object.

    Optional keys beyond :func:`group_from_json`: ``arrows`` (list of
    {name, tail, head, dual_map}) fixing explicit equivariant bases, and
    ``det_isos`` ({vertex: matrix}) fixing the determinant isomorphisms.
    """
    group = group_from_json(obj)
    f = group.field
    arrow_bases = None
    if obj.get("arrows"):
        arrow_bases = [
            (a["name"], a["tail"], a["head"],
             matrix_from_strings(f, a["dual_map"]))
            for a in obj["arrows"]]
    det_isos = None
    if obj.get("det_isos"):
        det_isos = {v: matrix_from_strings(f, m)
                    for v, m in obj["det_isos"].items()}
    return group, mckay_quiver(group, arrow_bases=arrow_bases,
                               det_isos=det_isos)


def fixture_names() -> list[str]:
    """Names of the packaged fixture JSON files."""
    root = resources.files("quiverpot") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir()
                  if p.name.endswith(".json"))


def load_fixture(name: str) -> dict:
    """Parsed JSON of a packaged fixture, by name (without extension)."""
    root = resources.files("quiverpot") / "fixtures"
    return json.loads((root / f"{name}.json").read_text())
