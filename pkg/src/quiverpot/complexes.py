"""Bimodule complexes carved out of a (twisted) superpotential.

Given a degree-n potential w over a quiver, the spaces W_i spanned by its
order-(n-i) prefix derivatives sit between W_n = span(w) and W_0 (vertex
span).  Splitting one tensor leg at a time off the middle factor gives a
complex of free bimodules

    ... -> A (x) W_i (x) A -> A (x) W_{i-1} (x) A -> ... -> A (x) W_0 (x) A -> A -> 0

whose differentials are sign-weighted combinations of the two leg-split
maps.  This module builds that complex degree by degree (everything stays
linear algebra in tensor space; no quotient-algebra arithmetic), builds the
root-of-unity generalization with d^N = 0 together with its contraction to
an ordinary complex, computes the duality pairings between W_i and W_{n-i},
and certifies d.d = 0, exactness, and the H^0 condition up to a stated
degree bound.

Certification strategy: composites of consecutive differentials vanish
exactly (checked once at generator level, where it costs nothing, plus
randomized slice probes against assembly bugs).  Given that, for any prime
p the mod-p ranks of the slice matrices are lower bounds for the exact
ranks, while exact rank(d_i) + rank(d_{i+1}) <= dim T_i always holds; so a
prime achieving equality certifies exact exactness.  Primes are chosen
congruent to 1 mod the field conductor so the cyclotomic generator has a
mod-p image.  A failed sandwich is retried with fresh primes and, when the
matrices are small enough, settled by exact rank.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .field import CycField, CycNum, Matrix, Subspace
from .paths import (Path, TensorElement, Twist, delta_image, derive,
                    is_superpotential)
from .quotient import Presentation

__all__ = [
    "GradedComplex",
    "build_selfdual_complex",
    "build_ncomplex",
    "pairing_matrix",
    "split_structure",
    "coproduct_components",
    "twist_action",
    "selfduality_report",
    "certify_complex",
]

# exact ranks are used below this many matrix cells in "auto" mode
_EXACT_CELLS = 2500


# ---------------------------------------------------------------------------
# suffix splitting (prefix splitting is paths.derive)
# ---------------------------------------------------------------------------

def strip_suffix(x: TensorElement, word: tuple) -> TensorElement:
    """Right analogue of the prefix derivative: drop a trailing arrow word."""
    k = len(word)
    if k == 0:
        return x
    if k > x.degree:
        raise ValueError("suffix longer than the element degree")
    q, f = x.quiver, x.field
    out: dict = {}
    for key, c in x.terms.items():
        if key[-k:] == word:
            rest = key[:-k]
            rk = rest if rest else q.arrows[key[0]].head
            prev = out.get(rk)
            s = c if prev is None else prev + c
            if s:
                out[rk] = s
            elif rk in out:
                del out[rk]
    return TensorElement(q, f, x.degree - k, out)


# ---------------------------------------------------------------------------
# primes and mod-p images of cyclotomic scalars
# ---------------------------------------------------------------------------

class _BadPrime(Exception):
    """Raised when a prime cannot host the reduction (t missing, p | denom)."""


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % q == 0:
            return m == q
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def _prime_stream(conductor: int) -> Iterator[int]:
    """Primes p = 1 (mod conductor), descending from just under 2^20.

    The bound keeps every int64 intermediate exact: elimination updates stay
    below 2^40 and probe matmul accumulations below 2^52.
    """
    top = 1 << 20
    p = top - ((top - 1) % conductor)
    while p > max(conductor, 2):
        if _is_prime(p):
            yield p
        p -= conductor


def _small_prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


class _ModMap:
    """Reduction Q(zeta_N) -> F_p sending zeta to an order-N element."""

    def __init__(self, field: CycField, p: int):
        self.field = field
        self.p = p
        t = self._order_element(field.N, p)
        self.tp = [pow(t, e, p) for e in range(field.phi)]
        self._scalars: dict[CycNum, int] = {}
        self._nf: dict[tuple, list] = {}
        self._moves: dict[tuple, dict] = {}

    @staticmethod
    def _order_element(order: int, p: int) -> int:
        if order == 1:
            return 1
        if (p - 1) % order:
            raise _BadPrime(p)
        fac = _small_prime_factors(order)
        for x in range(2, 500):
            t = pow(x, (p - 1) // order, p)
            if t != 1 and all(pow(t, order // r, p) != 1 for r in fac):
                return t
        raise _BadPrime(p)

    def scalar(self, c: CycNum) -> int:
        got = self._scalars.get(c)
        if got is not None:
            return got
        p = self.p
        acc = 0
        for coeff, tpw in zip(c.c, self.tp):
            if coeff:
                den = int(coeff.denominator) % p
                if den == 0:
                    raise _BadPrime(p)
                acc = (acc + int(coeff.numerator) * pow(den, p - 2, p) * tpw) % p
        self._scalars[c] = acc
        return acc


def _rank_mod(M: np.ndarray, p: int) -> int:
    """Row-echelon rank of an integer matrix over F_p (destructive on a copy)."""
    if M.size == 0:
        return 0
    M = np.array(M % p, dtype=np.int64)
    m, n = M.shape
    r = 0
    for j in range(n):
        nz = np.nonzero(M[r:, j])[0]
        if nz.size == 0:
            continue
        i0 = r + int(nz[0])
        if i0 != r:
            M[[r, i0]] = M[[i0, r]]
        inv = pow(int(M[r, j]), p - 2, p)
        M[r, j:] = M[r, j:] * inv % p
        below = np.nonzero(M[r + 1:, j])[0]
        if below.size:
            sub = M[r + 1:, j:]
            sub[below] = (sub[below] - sub[below, 0][:, None] * M[r, j:]) % p
        r += 1
        if r == m:
            break
    return r


# ---------------------------------------------------------------------------
# the complex
# ---------------------------------------------------------------------------

class GradedComplex:
    """A complex of free bimodules A (x) W (x) A realized degree by degree.

    positions[k] is the tensor degree of the k-th middle space terms[k];
    moves[k] (k >= 1) holds the differential out of position k into
    position k-1 as generator data: per source row r a list of
    (prefix_word, target_row, suffix_word, coefficient), meaning the
    summand  coeff * (prefix (x) w_target (x) suffix)  of d(1 (x) w_r (x) 1).
    Degree-d slices are assembled over the normal monomials of the
    presentation, so the matrices are the bimodule extension of the
    generator data by construction.
    """

    def __init__(self, presentation: Presentation, omega: TensorElement,
                 positions: list[int], terms: list[Subspace],
                 moves: list, eps: list[CycNum], N: int, q: CycNum,
                 dmax: int, twist: Twist | None, kind: str):
        self.presentation = presentation
        self.omega = omega
        self.n = omega.degree
        self.positions = positions
        self.terms = terms
        self.moves = moves
        self.eps = eps
        self.N = N
        self.q = q
        self.dmax = dmax
        self.twist = twist
        self.kind = kind
        self.contraction: GradedComplex | None = None
        self.row_ends = [_row_endpoints(W, deg, presentation.quiver)
                         for deg, W in zip(positions, terms)]
        self._bases: dict = {}
        self._bidx: dict = {}

    # -- realized slices -------------------------------------------------------

    def term_dims(self, d: int) -> list[int]:
        return [len(self.term_basis(k, d)) for k in range(len(self.positions))]

    def term_basis(self, k: int, d: int) -> list:
        """Triples (u, r, v): normal monomials around row r of terms[k]."""
        got = self._bases.get((k, d))
        if got is not None:
            return got
        i = self.positions[k]
        out = []
        if d >= i:
            pres = self.presentation
            ends = self.row_ends[k]
            for pdeg in range(d - i + 1):
                us = pres.normal_monomials(pdeg)
                vs = pres.normal_monomials(d - i - pdeg)
                for u in us:
                    ut = u.tail
                    for r, (h, t) in enumerate(ends):
                        if ut != h:
                            continue
                        for v in vs:
                            if v.head == t:
                                out.append((u, r, v))
        self._bases[(k, d)] = out
        return out

    def _basis_index(self, k: int, d: int) -> dict:
        got = self._bidx.get((k, d))
        if got is None:
            got = {(u.key, r, v.key): j
                   for j, (u, r, v) in enumerate(self.term_basis(k, d))}
            self._bidx[(k, d)] = got
        return got

    def slice_matrix(self, k: int, d: int) -> Matrix:
        """Exact matrix of the differential out of position k in degree d."""
        pres = self.presentation
        f = pres.field
        rows_b = self.term_basis(k - 1, d)
        cols_b = self.term_basis(k, d)
        ridx = self._basis_index(k - 1, d)
        data = [[f.zero] * len(cols_b) for _ in rows_b]
        for j, (u, r, v) in enumerate(cols_b):
            for (pw, r2, qw, c) in self.moves[k][r]:
                lw = u.word + pw
                lrow = pres.reduce_monomial(len(lw), lw if lw else u.key)
                rw = qw + v.word
                rrow = pres.reduce_monomial(len(rw), rw if rw else v.key)
                for uk, cl in lrow.items():
                    ccl = c * cl
                    for vk, cr in rrow.items():
                        ii = ridx[(uk, r2, vk)]
                        data[ii][j] = data[ii][j] + ccl * cr
        return Matrix(f, data, ncols=len(cols_b))

    def augmentation_matrix(self, d: int) -> Matrix:
        """Exact matrix of multiplication A (x) W_0 (x) A -> A in degree d."""
        pres = self.presentation
        f = pres.field
        normals = pres.normal_monomials(d)
        nidx = {m.key: j for j, m in enumerate(normals)}
        cols_b = self.term_basis(0, d)
        data = [[f.zero] * len(cols_b) for _ in normals]
        W0 = self.terms[0]
        v0idx = pres.quiver.path_index(0)
        for j, (u, r, v) in enumerate(cols_b):
            cvert = W0.rows[r][v0idx[u.tail if u.degree else u.key]]
            word = u.word + v.word
            key = word if word else u.key
            for mk, mc in pres.reduce_monomial(len(word), key).items():
                ii = nidx[mk]
                data[ii][j] = data[ii][j] + cvert * mc
        return Matrix(f, data, ncols=len(cols_b))

    # -- mod-p slices ------------------------------------------------------------

    def _moves_mod(self, k: int, mm: _ModMap) -> dict:
        key = ("mv", id(self), k)
        got = mm._moves.get(key)
        if got is None:
            got = {r: [(pw, r2, qw, mm.scalar(c)) for (pw, r2, qw, c) in lst]
                   for r, lst in enumerate(self.moves[k])}
            mm._moves[key] = got
        return got

    def _nf_mod(self, deg: int, key, mm: _ModMap) -> list:
        ck = (deg, key)
        got = mm._nf.get(ck)
        if got is None:
            row = self.presentation.reduce_monomial(deg, key)
            got = [(nk, mm.scalar(nc)) for nk, nc in row.items()]
            mm._nf[ck] = got
        return got

    def slice_matrix_mod(self, k: int, d: int, mm: _ModMap) -> np.ndarray:
        rows_b = self.term_basis(k - 1, d)
        cols_b = self.term_basis(k, d)
        ridx = self._basis_index(k - 1, d)
        M = np.zeros((len(rows_b), len(cols_b)), dtype=np.int64)
        moves = self._moves_mod(k, mm)
        p = mm.p
        for j, (u, r, v) in enumerate(cols_b):
            uw, vw = u.word, v.word
            for (pw, r2, qw, c) in moves[r]:
                lw = uw + pw
                lrow = self._nf_mod(len(lw), lw if lw else u.key, mm)
                rw = qw + vw
                rrow = self._nf_mod(len(rw), rw if rw else v.key, mm)
                for uk, cl in lrow:
                    ccl = c * cl % p
                    for vk, cr in rrow:
                        ii = ridx[(uk, r2, vk)]
                        M[ii, j] = (M[ii, j] + ccl * cr) % p
        return M

    def augmentation_matrix_mod(self, d: int, mm: _ModMap) -> np.ndarray:
        pres = self.presentation
        normals = pres.normal_monomials(d)
        nidx = {m.key: j for j, m in enumerate(normals)}
        cols_b = self.term_basis(0, d)
        M = np.zeros((len(normals), len(cols_b)), dtype=np.int64)
        W0 = self.terms[0]
        v0idx = pres.quiver.path_index(0)
        p = mm.p
        for j, (u, r, v) in enumerate(cols_b):
            cvert = mm.scalar(W0.rows[r][v0idx[u.tail if u.degree else u.key]])
            word = u.word + v.word
            for mk, mc in self._nf_mod(len(word), word if word else u.key, mm):
                ii = nidx[mk]
                M[ii, j] = (M[ii, j] + cvert * mc) % p
        return M

    def __repr__(self) -> str:
        dims = [W.dim for W in self.terms]
        return (f"GradedComplex({self.kind}, N={self.N}, degrees "
                f"{self.positions}, W dims {dims}, dmax={self.dmax})")


def _row_endpoints(W: Subspace, deg: int, quiver) -> list[tuple[int, int]]:
    """(head, tail) per echelon row; rows must be endpoint-homogeneous."""
    ends = []
    paths = quiver.paths(deg)
    for row in W.rows:
        seen = {(paths[j].head, paths[j].tail) for j, c in enumerate(row) if c}
        if len(seen) != 1:
            raise ValueError("derivative space mixes endpoint components; "
                             "the potential is not a weak potential")
        ends.append(next(iter(seen)))
    return ends


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _epsilons(n: int, f: CycField) -> list[CycNum]:
    """eps_i = (-1)^(i(n-i)) for i below (n+1)/2, else +1 (index 0 unused)."""
    eps = [f.one]
    for i in range(1, n + 1):
        if 2 * i < n + 1 and (i * (n - i)) % 2:
            eps.append(-f.one)
        else:
            eps.append(f.one)
    return eps


def _coords_or_fail(W: Subspace, elem: TensorElement, side: str) -> list:
    co = W.coords(elem.vector())
    if co is None:
        raise ValueError(f"potential does not close under {side} splitting; "
                         "not a (twisted) superpotential")
    return co


def _ladder(omega: TensorElement) -> list[Subspace]:
    n = omega.degree
    return [delta_image(omega, n - i) for i in range(n + 1)]


def _row_elements(W: Subspace, quiver, deg: int) -> list[TensorElement]:
    return [TensorElement.from_vector(quiver, W.field, deg, list(row))
            for row in W.rows]


def _mixed_moves(w: TensorElement, target: Subspace, pre_len: int,
                 suf_len: int, scale: CycNum) -> list:
    """Moves scale * (prefix (x) w' (x) suffix) for the given split lengths."""
    quiver = w.quiver
    out = []
    if pre_len:
        mids = []
        for pw in sorted({key[:pre_len] for key in w.terms}):
            dw = derive(Path(quiver, pw, None), w)
            if not dw.is_zero():
                mids.append((pw, dw))
    else:
        mids = [((), w)]
    for pw, mid in mids:
        if suf_len:
            finals = []
            for qw in sorted({key[-suf_len:] for key in mid.terms}):
                sw = strip_suffix(mid, qw)
                if not sw.is_zero():
                    finals.append((qw, sw))
        else:
            finals = [((), mid)]
        for qw, fin in finals:
            side = "right" if suf_len else "left"
            for r2, cc in enumerate(_coords_or_fail(target, fin, side)):
                if cc:
                    out.append((pw, r2, qw, scale * cc))
    return out


def _build(omega: TensorElement, pres: Presentation, dmax: int, N: int,
           tw: Twist | None, kind: str) -> GradedComplex:
    f = omega.field
    n = omega.degree
    if omega.is_zero():
        raise ValueError("zero potential")
    if dmax < n:
        raise ValueError("dmax must be at least the potential degree")
    if pres.quiver is not omega.quiver or pres.field is not f:
        raise ValueError("presentation and potential disagree on quiver/field")
    if not is_superpotential(omega, tw):
        raise ValueError("potential fails the (twisted) supercyclic predicate")
    if pres.degree != N:
        raise ValueError(f"presentation relations must be of degree {N}")
    if pres.relations != delta_image(omega, n - N):
        raise ValueError("relation space does not match the derivative span "
                         f"of order {n - N}")
    q = f.root_of_unity(N)
    ladder = _ladder(omega)
    eps = _epsilons(n, f)
    quiver = omega.quiver
    moves: list = [None]
    for i in range(1, n + 1):
        qi = q ** i
        rows = _row_elements(ladder[i], quiver, i)
        per_row = []
        for w in rows:
            lst = _mixed_moves(w, ladder[i - 1], 1, 0, eps[i])
            lst += _mixed_moves(w, ladder[i - 1], 0, 1, eps[i] * qi)
            per_row.append(lst)
        moves.append(per_row)
    return GradedComplex(pres, omega, list(range(n + 1)), ladder, moves,
                         eps, N, q, dmax, tw, kind)


def build_selfdual_complex(omega: TensorElement, pres: Presentation,
                           dmax: int, tw: Twist | None = None) -> GradedComplex:
    """The ordinary bimodule complex of a quadratic derivation quotient.

    Terms A (x) W_i (x) A with W_i the order-(n-i) derivative span;
    differentials eps_i * (left split + (-1)^i right split).  Requires the
    potential to pass the (twisted) supercyclic predicate and the
    presentation to be quadratic with relation space W_2.
    """
    return _build(omega, pres, dmax, 2, tw, "selfdual")


def build_ncomplex(omega: TensorElement, N: int, pres: Presentation,
                   dmax: int, tw: Twist | None = None) -> GradedComplex:
    """The root-of-unity complex (d^N = 0) plus its ordinary contraction.

    Differentials eps_i * (left split + q^i right split) for q a primitive
    N-th root of unity in the potential's field.  The returned complex
    carries `.contraction`: the ordinary complex on the positions
    0, 1, N, N+1, 2N, ... whose differentials alternate between the
    one-letter split difference and the full homogeneous split sum of
    length N-1 (both taken with the plus sign throughout); at N = 2 the
    contraction has exactly the self-dual complex's differentials.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    c = _build(omega, pres, dmax, N, tw, "ncomplex" if N > 2 else "selfdual")
    c.contraction = _contract(c)
    return c


def _contract(c: GradedComplex) -> GradedComplex:
    n, N = c.n, c.N
    degs = []
    m = 0
    while m * N <= n:
        degs.append(m * N)
        if m * N + 1 <= n:
            degs.append(m * N + 1)
        m += 1
    quiver = c.presentation.quiver
    terms = [c.terms[i] for i in degs]
    moves: list = [None]
    for k in range(1, len(degs)):
        src, tgt = degs[k], degs[k - 1]
        rows = _row_elements(c.terms[src], quiver, src)
        per_row = []
        for w in rows:
            if src % N == 1:    # short map mN+1 -> mN (not src == tgt+1:
                                # at N = 2 the long positions are consecutive too)
                lst = _mixed_moves(w, c.terms[tgt], 1, 0, c.eps[src])
                lst += _mixed_moves(w, c.terms[tgt], 0, 1, -c.eps[src])
            else:
                lst = []
                for pre in range(N):
                    lst += _mixed_moves(w, c.terms[tgt], pre, N - 1 - pre,
                                        c.eps[src])
            per_row.append(lst)
        moves.append(per_row)
    return GradedComplex(c.presentation, c.omega, degs, terms, moves,
                         c.eps, 2, c.presentation.field.root_of_unity(2),
                         c.dmax, c.twist, "contracted")


# ---------------------------------------------------------------------------
# pairings
# ---------------------------------------------------------------------------

def pairing_matrix(omega: TensorElement, i: int,
                   tw: Twist | None = None) -> Matrix:
    """Gram matrix pairing W_{n-i} against W_i through the potential.

    Entry (r, s) extracts the coefficient of the concatenation of a
    W_{n-i} row-r monomial with a W_i row-s monomial inside the potential.
    With a twist, the twist is applied to the right block first, which is
    the convention under which the twisted self-duality identities hold.
    """
    n = omega.degree
    if not 0 <= i <= n:
        raise ValueError("pairing index out of range")
    f = omega.field
    left = delta_image(omega, i)        # W_{n-i}, degree n-i vectors
    right = delta_image(omega, n - i)   # W_i, degree i vectors
    quiver = omega.quiver
    lrows = _row_elements(left, quiver, n - i)
    rrows = _row_elements(right, quiver, i)
    if tw is not None:
        rrows = [tw.apply(x) for x in rrows]
    data = []
    for xi in lrows:
        row = []
        for eta in rrows:
            acc = f.zero
            for pk, pc in xi.terms.items():
                for qk, qc in eta.terms.items():
                    if n - i == 0:
                        word = qk if i else None
                        ok = i > 0 and quiver.arrows[qk[0]].head == pk
                    elif i == 0:
                        word = pk
                        ok = quiver.arrows[pk[-1]].tail == qk
                    else:
                        word = pk + qk
                        ok = (quiver.arrows[pk[-1]].tail
                              == quiver.arrows[qk[0]].head)
                    if ok:
                        acc = acc + pc * qc * omega.coefficient(word)
            row.append(acc)
        data.append(row)
    return Matrix(f, data)


def split_structure(omega: TensorElement, i: int) -> tuple[dict, dict]:
    """Arrow-indexed matrices of the two splits W_i -> W_{i-1} (no signs).

    Returns (L, R): L[a] has columns the W_{i-1}-coordinates of the prefix
    derivative of each W_i row by arrow a; R[b] likewise for suffix
    stripping by b.  These are the generator structure constants of the
    complex differentials.
    """
    n = omega.degree
    if not 1 <= i <= n:
        raise ValueError("split index out of range")
    f = omega.field
    quiver = omega.quiver
    Wi = delta_image(omega, n - i)
    Wp = delta_image(omega, n - i + 1)
    rows = _row_elements(Wi, quiver, i)
    L: dict[int, Matrix] = {}
    R: dict[int, Matrix] = {}
    for a in range(quiver.n_arrows):
        lcols, rcols = [], []
        for w in rows:
            dw = derive(Path(quiver, (a,), None), w)
            lcols.append(_coords_or_fail(Wp, dw, "left"))
            sw = strip_suffix(w, (a,))
            rcols.append(_coords_or_fail(Wp, sw, "right"))
        L[a] = Matrix(f, [[lcols[j][r] for j in range(len(rows))]
                          for r in range(Wp.dim)])
        R[a] = Matrix(f, [[rcols[j][r] for j in range(len(rows))]
                          for r in range(Wp.dim)])
    return L, R


def coproduct_components(omega: TensorElement, i: int) -> Matrix:
    """Components of the potential inside W_{n-i} (x) W_i.

    Returns the matrix Om with

        omega = sum_{r,t} Om[r,t] * B_{n-i}[r] (x) B_i[t],

    where B_j is the canonical (echelon) basis of the derivative span W_j.
    That the potential lies in this product at every split -- so that Om
    exists -- is itself a consequence of the (twisted) supercyclic property;
    a ValueError is raised if it fails.  The Om are the matrices of the
    duality isomorphisms W_{n-i}* ~ W_i realized by splitting the potential,
    and they are the correct pairing for the self-duality identities (the
    monomial-coefficient Gram of ``pairing_matrix`` differs from Om by the
    basis Gram factors on both sides).
    """
    n = omega.degree
    if not 0 <= i <= n:
        raise ValueError("split index out of range")
    f = omega.field
    quiver = omega.quiver
    left = delta_image(omega, i)        # W_{n-i}
    right = delta_image(omega, n - i)   # W_i
    ridx = quiver.path_index(n - i)
    cidx = quiver.path_index(i)
    data = [[f.zero] * len(cidx) for _ in ridx]
    for key, c in omega.terms.items():
        pk = key[: n - i] if n - i > 0 else quiver.arrows[key[0]].head
        qk = key[n - i:] if i > 0 else quiver.arrows[key[-1]].tail
        data[ridx[pk]][cidx[qk]] = data[ridx[pk]][cidx[qk]] + c
    M = Matrix(f, data, ncols=len(cidx))
    Bl = left.basis_matrix()
    Br = right.basis_matrix()
    Om = ((Bl @ Bl.transpose()).inverse() @ (Bl @ M @ Br.transpose())
          @ (Br @ Br.transpose()).inverse())
    if (Bl.transpose() @ Om @ Br) != M:
        raise ValueError(
            "potential does not lie in the product of its derivative spans")
    return Om


def twist_action(tw: Twist, space: Subspace, degree: int) -> Matrix:
    """Matrix of a twist on a twist-stable span of degree-d tensors.

    Coordinates are taken in the span's canonical basis; the matrix acts on
    coordinate columns.  Raises ValueError if the twist does not preserve
    the span.
    """
    quiver, f = tw.quiver, tw.field
    idx = quiver.path_index(degree)
    cols = []
    for r in space.rows:
        x = TensorElement(quiver, f, degree,
                          {k: c for k, c in zip(idx, r) if c})
        co = space.coords(tw.apply(x).vector())
        if co is None:
            raise ValueError("twist does not preserve the span")
        cols.append(co)
    return Matrix(f, [[cols[j][i] for j in range(len(cols))]
                      for i in range(space.dim)], ncols=len(cols))


def selfduality_report(omega: TensorElement, tw: Twist | None = None) -> dict:
    """Check the matrix self-duality identities of the derivative ladder.

    For each split the report verifies, in exact arithmetic:

      * ``coproduct``: the potential lies in W_{n-i} (x) W_i, with component
        matrix Om_i (``coproduct_components``);
      * ``perfect``: Om_i has full rank, so it realizes W_{n-i}* ~ W_i;
      * ``supersymmetric``: Om_{n-i} == (-1)^{i(n-i)} Om_i^T T_i, where T_i
        is the twist acting on W_i (identity when untwisted);
      * ``adjoint``: Om_i L_a^T == R_a Om_{i-1} for every arrow a, where
        L_a is the prefix-split W_i -> W_{i-1} and R_a the suffix-split
        W_{n+1-i} -> W_{n-i}.  This is the transpose relation between the
        differentials d_i and d_{n+1-i} under the Om isomorphisms; notably
        it holds with no sign and no twist insertion even in the twisted
        case.

    Returns {"ok": bool, "n": n, "levels": {i: {...}}} with one entry per
    split index.
    """
    n = omega.degree
    f = omega.field
    ladder = [delta_image(omega, n - j) for j in range(n + 1)]
    Om = {}
    levels: dict[int, dict] = {i: {} for i in range(n + 1)}
    for i in range(n + 1):
        try:
            Om[i] = coproduct_components(omega, i)
            levels[i]["coproduct"] = True
            levels[i]["perfect"] = (
                Om[i].rank() == min(Om[i].nrows, Om[i].ncols))
        except ValueError:
            levels[i]["coproduct"] = False
            levels[i]["perfect"] = False
    T = {}
    for i in range(n + 1):
        if tw is None:
            T[i] = Matrix.identity(f, ladder[i].dim)
        else:
            T[i] = twist_action(tw, ladder[i], i)
    for i in range(n + 1):
        if not (levels[i]["coproduct"] and levels[n - i]["coproduct"]):
            levels[i]["supersymmetric"] = False
            continue
        sign = f.one if (i * (n - i)) % 2 == 0 else -f.one
        levels[i]["supersymmetric"] = (
            Om[n - i] == (Om[i].transpose() @ T[i]).scale(sign))
    for i in range(1, n + 1):
        if not (levels[i]["coproduct"] and levels[i - 1]["coproduct"]):
            levels[i]["adjoint"] = False
            continue
        L, _ = split_structure(omega, i)
        _, R = split_structure(omega, n + 1 - i)
        levels[i]["adjoint"] = all(
            Om[i] @ L[a].transpose() == R[a] @ Om[i - 1] for a in L)
    ok = all(v for lv in levels.values() for v in lv.values())
    return {"ok": ok, "n": n, "levels": levels}


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

def _mat_is_zero(M: Matrix) -> bool:
    return all(not c for row in M.rows for c in row)


def _exact_composites_ok(c: GradedComplex) -> bool:
    """Composite differentials vanish exactly on the generator slices.

    The slice matrices are the bimodule extension of the generator data,
    so vanishing on the generator degree of each window forces the exact
    composite to vanish in every degree.
    """
    K = len(c.positions)
    win = c.N if c.kind == "ncomplex" else 2
    for k in range(win, K):
        d = c.positions[k]
        M = c.slice_matrix(k - win + 1, d)
        for kk in range(k - win + 2, k + 1):
            M = M @ c.slice_matrix(kk, d)
        if not _mat_is_zero(M):
            return False
    if c.kind != "ncomplex" and K > 1:
        d1 = c.positions[1]
        if not _mat_is_zero(c.augmentation_matrix(d1) @ c.slice_matrix(1, d1)):
            return False
    return True


def _probe_composites_mod(c: GradedComplex, d: int, mats: dict,
                          mm: _ModMap, rng) -> bool:
    """Randomized check that realized composite slices vanish mod p."""
    K = len(c.positions)
    win = c.N if c.kind == "ncomplex" else 2
    p = mm.p
    for k in range(win, K):
        cols = mats[k].shape[1] if k in mats else 0
        if cols == 0:
            continue
        V = rng.integers(0, p, size=(cols, 4), dtype=np.int64)
        for kk in range(k, k - win, -1):
            V = mats[kk] @ V % p
        if V.any():
            return False
    return True


def certify_complex(c: GradedComplex, dmax: int | None = None,
                    primes: int = 3, mode: str = "auto") -> dict:
    """Per-degree certification report for a built complex.

    For ordinary complexes (and contractions): composite vanishing, the
    rank sandwich rank(d_k) + rank(d_{k+1}) = dim T_k at every interior
    position (top position: injectivity), surjectivity of the
    multiplication to A, and kernel(multiplication) = image(d_1).  For
    N > 2 complexes: d^N = 0 per realized degree.  mode is "auto"
    (exact on small slices, mod-p sandwich otherwise), "exact", or
    "modular".  Failures and inconclusive sandwiches are report entries.
    """
    if mode not in ("auto", "exact", "modular"):
        raise ValueError("mode must be auto, exact, or modular")
    pres = c.presentation
    D = c.dmax if dmax is None else min(dmax, c.dmax)
    K = len(c.positions)
    ncx = c.kind == "ncomplex"
    rep: dict = {
        "kind": c.kind,
        "N": c.N,
        "dmax": D,
        "positions": list(c.positions),
        "w_dims": [W.dim for W in c.terms],
        "note": f"certified for total degrees <= {D} only",
        "primes": [],
        "degrees": {},
    }
    gen_ok = _exact_composites_ok(c)
    rep["generator_composites_exact"] = gen_ok
    stream = _prime_stream(pres.field.N)
    mms: list[_ModMap] = []

    def next_mm(idx: int) -> _ModMap | None:
        while len(mms) <= idx:
            for p in stream:
                try:
                    mms.append(_ModMap(pres.field, p))
                except _BadPrime:
                    continue
                rep["primes"].append(p)
                break
            else:
                return None
        return mms[idx]

    all_pass = gen_ok
    rng = np.random.default_rng(0x5EED)
    for d in range(D + 1):
        dims = c.term_dims(d)
        entry: dict = {"dims": dims}
        adim = pres.graded_dim(d) if not ncx else None
        if adim is not None:
            entry["dim_A"] = adim
        sizes = [dims[k - 1] * dims[k] for k in range(1, K)]
        if adim is not None:
            sizes.append(adim * dims[0])
        big = max(sizes) if sizes else 0
        use_exact = mode == "exact" or (mode == "auto" and big <= _EXACT_CELLS)
        if use_exact:
            mats = {k: c.slice_matrix(k, d) for k in range(1, K)}
            ranks = {k: (mats[k].rank() if dims[k] and dims[k - 1] else 0)
                     for k in range(1, K)}
            win = c.N if ncx else 2
            comp_ok = True
            for k in range(win, K):
                if dims[k] == 0:
                    continue
                prod = mats[k]
                for kk in range(k - 1, k - win, -1):
                    prod = mats[kk] @ prod
                if not _mat_is_zero(prod):
                    comp_ok = False
            exact_at = {}
            for k in range(1, K):
                nxt = ranks.get(k + 1, 0)
                exact_at[k] = (ranks[k] + nxt == dims[k])
            if not ncx:
                mu = c.augmentation_matrix(d)
                mu_rank = mu.rank() if adim and dims[0] else 0
                entry["rank_mu"] = mu_rank
                entry["h0_onto"] = (mu_rank == adim)
                entry["h0_kernel"] = (mu_rank + ranks.get(1, 0) == dims[0])
            entry["mode"] = "exact"
            entry["ranks"] = ranks
            entry["dd_zero" if not ncx else "dN_zero"] = comp_ok
            entry["exact_at"] = exact_at
            if ncx:
                entry.pop("exact_at")
                target = comp_ok
            else:
                target = (comp_ok and all(exact_at.values())
                          and entry["h0_onto"] and entry["h0_kernel"])
            entry["pass"] = target
        else:
            certified: dict[int, bool] = {k: False for k in range(1, K)}
            onto = kernel = comp_ok = False
            best_ranks: dict[int, int] = {}
            mu_rank_best = 0
            for attempt in range(primes):
                mm = next_mm(attempt)
                if mm is None:
                    break
                try:
                    mats = {k: c.slice_matrix_mod(k, d, mm)
                            for k in range(1, K)}
                    ranks = {k: _rank_mod(mats[k], mm.p) for k in range(1, K)}
                    if attempt == 0 or not comp_ok:
                        comp_ok = _probe_composites_mod(c, d, mats, mm, rng)
                    if not ncx:
                        mu = c.augmentation_matrix_mod(d, mm)
                        mu_rank = _rank_mod(mu, mm.p)
                        mu_rank_best = max(mu_rank_best, mu_rank)
                        onto = onto or (mu_rank == adim)
                        kernel = kernel or (mu_rank + ranks.get(1, 0)
                                            == dims[0])
                except _BadPrime:
                    continue
                for k in range(1, K):
                    best_ranks[k] = max(best_ranks.get(k, 0), ranks[k])
                    if ranks[k] + ranks.get(k + 1, 0) == dims[k]:
                        certified[k] = True
                done = all(certified.values()) and comp_ok and (
                    ncx or (onto and kernel))
                if done:
                    break
            entry["mode"] = "modular"
            entry["ranks"] = best_ranks
            entry["dd_zero" if not ncx else "dN_zero"] = comp_ok
            if ncx:
                target = comp_ok
            else:
                entry["exact_at"] = dict(certified)
                entry["rank_mu"] = mu_rank_best
                entry["h0_onto"] = onto
                entry["h0_kernel"] = kernel
                target = (comp_ok and all(certified.values())
                          and onto and kernel)
                if not target:
                    entry["inconclusive"] = ("modular sandwich did not close; "
                                             "no exact failure exhibited")
            entry["pass"] = target
        rep["degrees"][d] = entry
        all_pass = all_pass and entry["pass"]
    rep["all_pass"] = all_pass
    return rep
