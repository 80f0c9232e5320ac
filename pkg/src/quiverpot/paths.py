"""Quivers, paths, homogeneous tensor elements, derivatives, and twists.

Composition convention: in a product ``p * q`` the path ``q`` is traversed
first, so composability requires tail(p) = head(q), and a stored arrow word
(a_1, ..., a_k) satisfies tail(a_i) = head(a_{i+1}).  Derivatives strip
*prefixes*: del_p(q) = r exactly when q = p r.

Degree-k elements are finite CycNum-combinations of length-k paths.  Degree-0
paths are the vertices; products with them implement the idempotent structure
(non-composable concatenations are zero).

Canonical order: arrows in declaration order; the length-k paths of a quiver
are ordered lexicographically on their arrow-index words (vertices in
declaration order in degree 0).  This fixes all matrix/vector indexing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .field import CycField, CycNum, Entry, Matrix, Subspace

PathKey = Union[int, tuple]  # vertex index in degree 0, arrow-index word else


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: int
    head: int


class Quiver:
    """A finite quiver with named vertices and arrows (declaration order matters)."""

    def __init__(self, vertices: Sequence[str],
                 arrows: Iterable[tuple[str, str, str]]):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        arr = []
        for name, tail, head in arrows:
            if tail not in self.vertex_index or head not in self.vertex_index:
                raise ValueError(f"arrow {name}: undeclared endpoint")
            arr.append(Arrow(name, self.vertex_index[tail], self.vertex_index[head]))
        self.arrows = tuple(arr)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        self.arrow_index = {a.name: i for i, a in enumerate(self.arrows)}
        self._paths_cache: dict[int, list["Path"]] = {}
        self._index_cache: dict[int, dict[PathKey, int]] = {}
        self._sep = "" if all(len(n) == 1 for n in names) else "*"

    @classmethod
    def single_vertex(cls, loop_names: Sequence[str], vertex: str = "o") -> "Quiver":
        return cls([vertex], [(n, vertex, vertex) for n in loop_names])

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def vertex_path(self, v: str | int) -> "Path":
        i = self.vertex_index[v] if isinstance(v, str) else v
        return Path(self, (), i)

    def path(self, *arrow_names: str) -> "Path":
        word = tuple(self.arrow_index[n] for n in arrow_names)
        p = Path(self, word, None)
        if not p.is_composable():
            raise ValueError(f"non-composable path {'.'.join(arrow_names)}")
        return p

    def paths(self, degree: int) -> list["Path"]:
        """All length-`degree` paths, canonically ordered. Cached."""
        if degree in self._paths_cache:
            return self._paths_cache[degree]
        if degree == 0:
            out = [Path(self, (), v) for v in range(self.n_vertices)]
        else:
            shorter = self.paths(degree - 1)
            out = []
            for a in range(self.n_arrows):
                head_needed = self.arrows[a].tail
                for p in shorter:
                    if p.degree == 0:
                        if p.vertex == head_needed:
                            out.append(Path(self, (a,), None))
                    elif self.arrows[p.word[0]].head == head_needed:
                        out.append(Path(self, (a,) + p.word, None))
        self._paths_cache[degree] = out
        return out

    def path_index(self, degree: int) -> dict[PathKey, int]:
        if degree not in self._index_cache:
            self._index_cache[degree] = {p.key: i
                                         for i, p in enumerate(self.paths(degree))}
        return self._index_cache[degree]

    def render_word(self, word: tuple) -> str:
        return self._sep.join(self.arrows[a].name for a in word)

    def __repr__(self) -> str:
        return f"Quiver({self.n_vertices} vertices, {self.n_arrows} arrows)"


class Path:
    """A path in a quiver: an arrow word, or a vertex (degree 0)."""

    __slots__ = ("quiver", "word", "vertex")

    def __init__(self, quiver: Quiver, word: tuple, vertex: int | None):
        self.quiver = quiver
        self.word = word
        self.vertex = vertex

    @property
    def degree(self) -> int:
        return len(self.word)

    @property
    def is_vertex(self) -> bool:
        return not self.word

    @property
    def head(self) -> int:
        return self.vertex if self.is_vertex else self.quiver.arrows[self.word[0]].head

    @property
    def tail(self) -> int:
        return self.vertex if self.is_vertex else self.quiver.arrows[self.word[-1]].tail

    @property
    def key(self) -> PathKey:
        return self.vertex if self.is_vertex else self.word

    def is_composable(self) -> bool:
        arr = self.quiver.arrows
        return all(arr[self.word[i]].tail == arr[self.word[i + 1]].head
                   for i in range(len(self.word) - 1))

    def __mul__(self, other: "Path") -> "Path | None":
        """Concatenation (other traversed first); None when not composable."""
        if self.quiver is not other.quiver:
            raise ValueError("paths from different quivers")
        if self.tail != other.head:
            return None
        if self.is_vertex:
            return other
        if other.is_vertex:
            return self
        return Path(self.quiver, self.word + other.word, None)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Path) and other.quiver is self.quiver
                and other.word == self.word and other.vertex == self.vertex)

    def __hash__(self) -> int:
        return hash((id(self.quiver), self.word, self.vertex))

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"e({self.quiver.vertices[self.vertex]})"
        return self.quiver.render_word(self.word)


class TensorElement:
    """A homogeneous CycNum-combination of equal-length paths of one quiver."""

    __slots__ = ("quiver", "field", "degree", "terms")

    def __init__(self, quiver: Quiver, field: CycField, degree: int,
                 terms: Mapping[PathKey, CycNum] | None = None):
        self.quiver = quiver
        self.field = field
        self.degree = degree
        self.terms: dict[PathKey, CycNum] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = c

    # -- constructors ---------------------------------------------------------

    @classmethod
    def monomial(cls, quiver: Quiver, field: CycField,
                 arrow_names: Sequence[str], coeff: Entry = 1) -> "TensorElement":
        p = quiver.path(*arrow_names)
        return cls(quiver, field, p.degree, {p.key: field.coerce(coeff)})

    @classmethod
    def from_path(cls, p: Path, field: CycField, coeff: Entry = 1) -> "TensorElement":
        return cls(p.quiver, field, p.degree, {p.key: field.coerce(coeff)})

    @classmethod
    def vertex_element(cls, quiver: Quiver, field: CycField,
                       vertex: str | int, coeff: Entry = 1) -> "TensorElement":
        i = quiver.vertex_index[vertex] if isinstance(vertex, str) else vertex
        return cls(quiver, field, 0, {i: field.coerce(coeff)})

    @classmethod
    def zero(cls, quiver: Quiver, field: CycField, degree: int) -> "TensorElement":
        return cls(quiver, field, degree)

    @classmethod
    def from_vector(cls, quiver: Quiver, field: CycField, degree: int,
                    vec: Sequence[Entry]) -> "TensorElement":
        basis = quiver.paths(degree)
        if len(vec) != len(basis):
            raise ValueError("vector length != number of paths")
        return cls(quiver, field, degree,
                   {p.key: field.coerce(c) for p, c in zip(basis, vec) if field.coerce(c)})

    # -- inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, p: "Path | PathKey") -> CycNum:
        key = p.key if isinstance(p, Path) else p
        return self.terms.get(key, self.field.zero)

    def support(self) -> list[Path]:
        """Support paths in canonical order."""
        keys = sorted(self.terms, key=_key_sort)
        if self.degree == 0:
            return [Path(self.quiver, (), k) for k in keys]
        return [Path(self.quiver, k, None) for k in keys]

    def vector(self) -> list[CycNum]:
        """Coordinates in the canonical path basis of this degree."""
        idx = self.quiver.path_index(self.degree)
        out = [self.field.zero] * len(idx)
        for k, c in self.terms.items():
            out[idx[k]] = c
        return out

    # -- linear structure -------------------------------------------------------

    def _check_match(self, other: "TensorElement") -> None:
        if other.quiver is not self.quiver or other.degree != self.degree:
            raise ValueError("mismatched quiver or degree")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check_match(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return TensorElement(self.quiver, self.field, self.degree, out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.quiver, self.field, self.degree,
                             {k: -c for k, c in self.terms.items()})

    def scale(self, s: Entry) -> "TensorElement":
        s = self.field.coerce(s)
        if not s:
            return TensorElement.zero(self.quiver, self.field, self.degree)
        return TensorElement(self.quiver, self.field, self.degree,
                             {k: s * c for k, c in self.terms.items()})

    def __rmul__(self, s):
        if isinstance(s, TensorElement):
            return NotImplemented
        return self.scale(s)

    # -- multiplication ---------------------------------------------------------

    def __mul__(self, other):
        """Concatenation product; drops non-composable term pairs."""
        if not isinstance(other, TensorElement):
            return self.scale(other)
        self._check_match_quiver(other)
        deg = self.degree + other.degree
        out: dict[PathKey, CycNum] = {}
        arrows = self.quiver.arrows
        for k1, c1 in self.terms.items():
            t1 = k1 if self.degree == 0 else arrows[k1[-1]].tail
            for k2, c2 in other.terms.items():
                h2 = k2 if other.degree == 0 else arrows[k2[0]].head
                if t1 != h2:
                    continue
                if self.degree == 0:
                    k = k2
                elif other.degree == 0:
                    k = k1
                else:
                    k = k1 + k2
                c = c1 * c2
                s = out.get(k)
                s = c if s is None else s + c
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        return TensorElement(self.quiver, self.field, deg, out)

    def _check_match_quiver(self, other: "TensorElement") -> None:
        if other.quiver is not self.quiver:
            raise ValueError("elements of different quivers")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (other.quiver is self.quiver and other.degree == self.degree
                and other.terms == self.terms)

    def __hash__(self) -> int:
        return hash((id(self.quiver), self.degree, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"TensorElement({self.render()})"

    def render(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for p in self.support():
            c = self.terms[p.key]
            ps = repr(p)
            if c == self.field.one:
                bits.append(("+", ps))
            elif c == -1:
                bits.append(("-", ps))
            else:
                cs = str(c)
                if cs.startswith("-") and ("+" not in cs and " - " not in cs):
                    sign, cs = "-", cs[1:]
                else:
                    sign = "+"
                if (" " in cs) or ("+" in cs):
                    cs = f"({cs})"
                bits.append((sign, f"{cs}*{ps}"))
        first_sign, first = bits[0]
        out = first if first_sign == "+" else f"-{first}"
        for sign, b in bits[1:]:
            out += f" {sign} {b}"
        return out


def _key_sort(k: PathKey):
    return (k,) if isinstance(k, int) else k


# ---------------------------------------------------------------------------
# twists (graded automorphisms sending arrows to degree-1 elements)
# ---------------------------------------------------------------------------

class Twist:
    """A graded automorphism: a vertex permutation plus degree-1 arrow images.

    Arrow images must be supported on arrows running sigma(tail) -> sigma(head)
    of the original arrow, so the map is automatically graded and respects the
    vertex idempotents.
    """

    def __init__(self, quiver: Quiver, field: CycField,
                 vertex_perm: Sequence[int],
                 arrow_images: Sequence[TensorElement]):
        self.quiver = quiver
        self.field = field
        self.vertex_perm = tuple(vertex_perm)
        if sorted(self.vertex_perm) != list(range(quiver.n_vertices)):
            raise ValueError("vertex_perm is not a permutation")
        if len(arrow_images) != quiver.n_arrows:
            raise ValueError("need one image per arrow")
        for a, img in enumerate(arrow_images):
            if img.degree != 1:
                raise ValueError("arrow images must have degree 1")
            want_t = self.vertex_perm[quiver.arrows[a].tail]
            want_h = self.vertex_perm[quiver.arrows[a].head]
            for key in img.terms:
                b = quiver.arrows[key[0]]
                if b.tail != want_t or b.head != want_h:
                    raise ValueError(
                        f"image of {quiver.arrows[a].name} leaves its vertex block")
        self.arrow_images = tuple(arrow_images)

    @classmethod
    def identity(cls, quiver: Quiver, field: CycField) -> "Twist":
        imgs = [TensorElement(quiver, field, 1, {(a,): field.one})
                for a in range(quiver.n_arrows)]
        return cls(quiver, field, range(quiver.n_vertices), imgs)

    @classmethod
    def from_matrix(cls, quiver: Quiver, field: CycField, m: Matrix,
                    vertex_perm: Sequence[int] | None = None) -> "Twist":
        """Twist with arrow images given by matrix columns: a_j -> sum_i m[i,j] a_i."""
        n = quiver.n_arrows
        if m.nrows != n or m.ncols != n:
            raise ValueError("matrix size must equal the number of arrows")
        perm = tuple(vertex_perm) if vertex_perm is not None \
            else tuple(range(quiver.n_vertices))
        imgs = []
        for j in range(n):
            terms = {(i,): m[i, j] for i in range(n) if m[i, j]}
            imgs.append(TensorElement(quiver, field, 1, terms))
        return cls(quiver, field, perm, imgs)

    @property
    def is_identity(self) -> bool:
        if self.vertex_perm != tuple(range(self.quiver.n_vertices)):
            return False
        for a, img in enumerate(self.arrow_images):
            if list(img.terms.items()) != [((a,), self.field.one)]:
                return False
        return True

    def arrow_image(self, a: int) -> TensorElement:
        return self.arrow_images[a]

    def apply(self, x: TensorElement) -> TensorElement:
        """The graded-algebra extension, applied to a homogeneous element."""
        if x.degree == 0:
            return TensorElement(x.quiver, x.field, 0,
                                 {self.vertex_perm[v]: c for v, c in x.terms.items()})
        out = TensorElement.zero(x.quiver, x.field, x.degree)
        for key, c in x.terms.items():
            piece: TensorElement | None = None
            for a in key:
                piece = self.arrow_images[a] if piece is None \
                    else piece * self.arrow_images[a]
            out = out + piece.scale(c)
        return out

    def __repr__(self) -> str:
        return f"Twist(identity)" if self.is_identity else \
            f"Twist(on {self.quiver!r})"


# ---------------------------------------------------------------------------
# derivatives, shifts, superpotential predicates
# ---------------------------------------------------------------------------

def derive(p: Path, x: TensorElement) -> TensorElement:
    """Left (prefix) derivative del_p x; degree drops by |p|."""
    if p.quiver is not x.quiver:
        raise ValueError("path and element from different quivers")
    k = p.degree
    if k > x.degree:
        raise ValueError("derivative order exceeds element degree")
    new_deg = x.degree - k
    out: dict[PathKey, CycNum] = {}
    if k == 0:
        v = p.vertex
        for key, c in x.terms.items():
            h = key if x.degree == 0 else x.quiver.arrows[key[0]].head
            if h == v:
                out[key] = c
        return TensorElement(x.quiver, x.field, x.degree, out)
    pre = p.word
    for key, c in x.terms.items():
        if key[:k] == pre:
            rest = key[k:]
            rk: PathKey = rest if rest else x.quiver.arrows[key[-1]].tail
            prev = out.get(rk)
            s = c if prev is None else prev + c
            if s:
                out[rk] = s
            elif rk in out:
                del out[rk]
    return TensorElement(x.quiver, x.field, new_deg, out)


def cyclic_shift(x: TensorElement, tw: Twist | None = None) -> TensorElement:
    """Twisted cyclic shift: a_1...a_n -> tw(a_n) a_1...a_(n-1), extended linearly."""
    if x.degree == 0:
        raise ValueError("cyclic shift of a degree-0 element")
    if tw is not None and tw.quiver is not x.quiver:
        raise ValueError("twist and element from different quivers")
    q, f = x.quiver, x.field
    out = TensorElement.zero(q, f, x.degree)
    identity = tw is None or tw.is_identity
    for key, c in x.terms.items():
        last, rest = key[-1], key[:-1]
        if identity:
            word = (last,) + rest
            if not rest or q.arrows[last].tail == q.arrows[rest[0]].head:
                out = out + TensorElement(q, f, x.degree, {word: c})
            continue
        head_elem = tw.arrow_image(last).scale(c)
        if rest:
            out = out + head_elem * TensorElement(q, f, x.degree - 1, {rest: f.one})
        else:
            out = out + head_elem
    return out


def is_superpotential(x: TensorElement, tw: Twist | None = None) -> bool:
    """Twisted-supercyclic test: shift(x) = (-1)^(n-1) x plus the endpoint condition.

    The endpoint (weak-potential) condition asks every support path p to run
    tail(p) -> sigma(tail(p)).  Degree 0: true iff the support sits on
    sigma-fixed vertices.
    """
    perm = tw.vertex_perm if tw is not None \
        else tuple(range(x.quiver.n_vertices))
    if x.degree == 0:
        return all(perm[v] == v for v in x.terms)
    arrows = x.quiver.arrows
    for key in x.terms:
        if arrows[key[0]].head != perm[arrows[key[-1]].tail]:
            return False
    shifted = cyclic_shift(x, tw)
    sign = 1 if (x.degree - 1) % 2 == 0 else -1
    return shifted == (x if sign == 1 else -x)


def delta_image(x: TensorElement, k: int) -> Subspace:
    """Span of all order-k derivatives of x, inside degree-(n-k) tensor space."""
    if k < 0 or k > x.degree:
        raise ValueError("derivative order out of range")
    q, f = x.quiver, x.field
    ambient = len(q.paths(x.degree - k))
    if x.is_zero():
        return Subspace.zero(f, ambient)
    if k == 0:
        vecs = []
        for v in range(q.n_vertices):
            dv = derive(q.vertex_path(v), x)
            if not dv.is_zero():
                vecs.append(dv.vector())
        return Subspace.from_vectors(f, ambient, vecs)
    prefixes = {key[:k] for key in x.terms}
    idx = q.path_index(x.degree - k)
    vecs = []
    for pre in sorted(prefixes):
        dv = derive(Path(q, pre, None), x)
        if not dv.is_zero():
            vec = [f.zero] * ambient
            for kk, c in dv.terms.items():
                vec[idx[kk]] = c
            vecs.append(vec)
    return Subspace.from_vectors(f, ambient, vecs)


def restrict_idempotent(x: TensorElement, verts: Iterable[str | int]) -> TensorElement:
    """e x e for the idempotent e = sum of the given vertices."""
    q = x.quiver
    vs = {q.vertex_index[v] if isinstance(v, str) else v for v in verts}
    out: dict[PathKey, CycNum] = {}
    for key, c in x.terms.items():
        if x.degree == 0:
            if key in vs:
                out[key] = c
        else:
            if q.arrows[key[0]].head in vs and q.arrows[key[-1]].tail in vs:
                out[key] = c
    return TensorElement(q, x.field, x.degree, out)


def apply_graded_map(g: Matrix, x: TensorElement) -> TensorElement:
    """Apply g^(tensor degree) to x, where g acts on the arrow span by columns.

    Expansion terms whose letters fail to compose are dropped (they are zero in
    the path algebra); for one-vertex quivers nothing is dropped.
    """
    n = x.quiver.n_arrows
    if g.nrows != n or g.ncols != n:
        raise ValueError("matrix size must equal the number of arrows")
    if x.degree == 0:
        return x
    q, f = x.quiver, x.field
    cols: list[list[tuple[int, CycNum]]] = [
        [(i, g[i, j]) for i in range(n) if g[i, j]] for j in range(n)]
    out: dict[PathKey, CycNum] = {}
    for key, c in x.terms.items():
        partial: list[tuple[tuple, CycNum]] = [((), c)]
        for letter in key:
            nxt: list[tuple[tuple, CycNum]] = []
            for word, coeff in partial:
                for i, gij in cols[letter]:
                    if word and q.arrows[word[-1]].tail != q.arrows[i].head:
                        continue
                    nxt.append((word + (i,), coeff * gij))
            partial = nxt
            if not partial:
                break
        for word, coeff in partial:
            prev = out.get(word)
            s = coeff if prev is None else prev + coeff
            if s:
                out[word] = s
            elif word in out:
                del out[word]
    return TensorElement(q, f, x.degree, out)
