"""Path algebra: derivatives, shifts, superpotential predicates, graded maps."""
from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverpot.field import CycField, Matrix
from quiverpot.paths import (
    Quiver,
    TensorElement,
    Twist,
    apply_graded_map,
    cyclic_shift,
    delta_image,
    derive,
    is_superpotential,
    restrict_idempotent,
)

F1 = CycField(1)
F4 = CycField(4)

Q4 = Quiver.single_vertex(["x0", "x1", "x2", "x3"])
Q3 = Quiver.single_vertex(["x", "y", "z"])
# 2-cycle quiver: a: u -> v, b: v -> u
QC = Quiver(["u", "v"], [("a", "u", "v"), ("b", "v", "u")])

mono = TensorElement.monomial


def _antisym(quiver: Quiver, field: CycField) -> TensorElement:
    names = [a.name for a in quiver.arrows]
    out = TensorElement.zero(quiver, field, len(names))
    for perm in itertools.permutations(range(len(names))):
        inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
                  if perm[i] > perm[j])
        out = out + mono(quiver, field, [names[i] for i in perm], (-1) ** inv)
    return out


def test_derive_examples():
    x = mono(Q4, F1, ["x0", "x1", "x2", "x3"])
    assert derive(Q4.path("x0", "x1"), x) == mono(Q4, F1, ["x2", "x3"])
    assert derive(Q4.path("x1"), mono(Q4, F1, ["x0", "x1"])).is_zero()
    assert derive(Q4.vertex_path("o"), x) == x
    with pytest.raises(ValueError):
        derive(Q4.path("x0", "x1"), mono(Q4, F1, ["x0"]))


def test_vertex_derivative_is_left_projection():
    w = mono(QC, F4, ["a", "b"]) + mono(QC, F4, ["b", "a"], 2)
    assert derive(QC.vertex_path("v"), w) == mono(QC, F4, ["a", "b"])
    assert derive(QC.vertex_path("u"), w) == mono(QC, F4, ["b", "a"], 2)


def test_cyclic_shift_examples():
    x = mono(Q4, F1, ["x0", "x1", "x2", "x3"])
    assert cyclic_shift(x) == mono(Q4, F1, ["x3", "x0", "x1", "x2"])
    y = x
    for _ in range(4):
        y = cyclic_shift(y)
    assert y == x
    assert cyclic_shift(mono(QC, F4, ["a", "b"])) == mono(QC, F4, ["b", "a"])
    with pytest.raises(ValueError):
        cyclic_shift(TensorElement.vertex_element(Q4, F1, "o"))


def test_shift_drops_noncyclic_words():
    # on the 2-cycle quiver, shifting the (non-closed) path a alone is zero:
    # the image word b (twist) fails to close up with the removed prefix
    tw = Twist(QC, F4, [1, 0], [mono(QC, F4, ["b"]), mono(QC, F4, ["a"])])
    assert cyclic_shift(mono(QC, F4, ["a", "b"]), tw).is_zero()


def test_is_superpotential():
    omega = _antisym(Q3, F1)
    assert is_superpotential(omega)
    assert not is_superpotential(mono(Q3, F1, ["x", "y"]))
    assert is_superpotential(mono(QC, F4, ["a", "b"]) - mono(QC, F4, ["b", "a"]))
    assert not is_superpotential(mono(QC, F4, ["a", "b"]))
    # n = 2 needs shift(x) = -x, so the symmetric combination fails
    assert not is_superpotential(mono(QC, F4, ["a", "b"]) + mono(QC, F4, ["b", "a"]))


def test_degree_zero_superpotential():
    e_u = TensorElement.vertex_element(QC, F4, "u")
    swap = Twist(QC, F4, [1, 0], [mono(QC, F4, ["b"]), mono(QC, F4, ["a"])])
    assert is_superpotential(e_u)
    assert not is_superpotential(e_u, swap)


def test_endpoint_condition_is_checked():
    # a + ab-type mixtures can satisfy the shift identity but break endpoints
    # here: on QC, element a*a is not even a path; use a*b with a twist whose
    # vertex permutation makes head(p) != sigma(tail(p))
    swap = Twist(QC, F4, [1, 0], [mono(QC, F4, ["b"]), mono(QC, F4, ["a"])])
    x = mono(QC, F4, ["a", "b"]) - mono(QC, F4, ["b", "a"])
    # per-vertex loops have head = tail, but sigma(tail) != tail under swap
    assert not is_superpotential(x, swap)


def test_delta_image_dims():
    omega = _antisym(Q3, F1)
    assert delta_image(omega, 0).dim == 1
    assert delta_image(omega, 1).dim == 3
    assert delta_image(omega, 2).dim == 3
    assert delta_image(omega, 3).dim == 1
    with pytest.raises(ValueError):
        delta_image(omega, 4)


def test_delta_image_is_span_of_derivatives():
    omega = _antisym(Q3, F1)
    w2 = delta_image(omega, 1)
    for a in Q3.paths(1):
        assert w2.contains(derive(a, omega).vector())


def test_restrict_idempotent():
    w = mono(QC, F4, ["a", "b"]) + mono(QC, F4, ["b", "a"], 2)
    assert restrict_idempotent(w, ["u", "v"]) == w
    assert restrict_idempotent(w, []).is_zero()
    assert restrict_idempotent(w, ["v"]) == mono(QC, F4, ["a", "b"])
    assert restrict_idempotent(w, ["u"]) == mono(QC, F4, ["b", "a"], 2)


def test_delta_commutes_with_idempotents():
    # For closed-path (weak, identity-twist) elements, restricting the element
    # to a vertex set and taking derivative spans equals tail-filtering the
    # original derivative span: a derivative suffix keeps the original tail,
    # while its head is an interior vertex that the restriction cannot see.
    w = mono(QC, F4, ["a", "b"]) + mono(QC, F4, ["b", "a"], 2)
    from quiverpot.field import Subspace

    def tail_filter(space, degree, verts):
        amb = len(QC.paths(degree))
        keep = {QC.vertex_index[v] for v in verts}
        rows = []
        for r in space.rows:
            vec = list(r)
            for j, p in enumerate(QC.paths(degree)):
                if p.tail not in keep:
                    vec[j] = F4.zero
            rows.append(vec)
        return Subspace.from_vectors(F4, amb, rows)

    for verts in (["v"], ["u"], ["u", "v"], []):
        for k in (0, 1, 2):
            lhs = delta_image(restrict_idempotent(w, verts), k)
            rhs = tail_filter(delta_image(w, k), 2 - k, verts)
            assert lhs == rhs, (verts, k)


def test_apply_graded_map():
    ab = mono(QC, F4, ["a", "b"])
    assert apply_graded_map(Matrix.identity(F4, 2), ab) == ab
    assert apply_graded_map(Matrix(F4, [[1, 0], [0, -1]]), ab) == -ab
    z = F4.zeta()
    scalar = Matrix(F4, [[z, 0], [0, z]])
    x = mono(QC, F4, ["a", "b", "a", "b"])
    assert apply_graded_map(scalar, x) == x  # z^4 = 1


def test_apply_graded_map_mixing():
    Q2 = Quiver.single_vertex(["a", "b"])
    g = Matrix(F4, [[0, 1], [1, 0]])  # a <-> b
    x = mono(Q2, F4, ["a", "a", "b"])
    assert apply_graded_map(g, x) == mono(Q2, F4, ["b", "b", "a"])


def test_canonical_path_order():
    ps = Q3.paths(2)
    labels = [repr(p) for p in ps]
    assert labels == ["xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz"]
    cps = QC.paths(2)
    assert [repr(p) for p in cps] == ["ab", "ba"]


def test_render():
    x = mono(Q3, F1, ["x", "y"]) - mono(Q3, F1, ["y", "x"])
    assert x.render() == "xy - yx"
    y = mono(QC, F4, ["a", "b"], F4.zeta())
    assert "z" in y.render()


# -- randomized identities ----------------------------------------------------

_paths3 = st.lists(st.integers(0, 2), min_size=0, max_size=2)


@settings(max_examples=60)
@given(_paths3, st.lists(st.tuples(st.lists(st.integers(0, 2), min_size=4,
                                            max_size=4),
                                   st.integers(-3, 3)), min_size=1, max_size=6))
def test_chain_rule(pre, terms):
    x = TensorElement.zero(Q3, F1, 4)
    names = ["x", "y", "z"]
    for word, c in terms:
        x = x + mono(Q3, F1, [names[i] for i in word], c)
    p = Q3.path(*[names[i] for i in pre]) if pre else Q3.vertex_path("o")
    for a in range(3):
        q = Q3.path(names[a])
        lhs = derive(q, derive(p, x))
        rhs = derive((p * q) if not p.is_vertex else q, x)
        assert lhs == rhs


@settings(max_examples=40)
@given(st.lists(st.tuples(st.lists(st.integers(0, 2), min_size=3, max_size=3),
                          st.integers(-3, 3)), min_size=1, max_size=6))
def test_shift_has_order_dividing_n(terms):
    x = TensorElement.zero(Q3, F1, 3)
    names = ["x", "y", "z"]
    for word, c in terms:
        x = x + mono(Q3, F1, [names[i] for i in word], c)
    y = x
    for _ in range(3):
        y = cyclic_shift(y)
    assert y == x


@settings(max_examples=40)
@given(st.lists(st.tuples(st.lists(st.integers(0, 2), min_size=3, max_size=3),
                          st.integers(-3, 3)), min_size=1, max_size=8))
def test_supercyclic_symmetrization_is_superpotential(terms):
    """Averaging over signed shifts always produces a superpotential (n = 3)."""
    x = TensorElement.zero(Q3, F1, 3)
    names = ["x", "y", "z"]
    for word, c in terms:
        x = x + mono(Q3, F1, [names[i] for i in word], c)
    sym = TensorElement.zero(Q3, F1, 3)
    cur = x
    for _ in range(3):
        sym = sym + cur
        cur = cyclic_shift(cur)  # n odd: sign (+1)^(n-1) = +1
    assert is_superpotential(sym) or sym.is_zero()
