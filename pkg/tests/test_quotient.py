"""Graded quotients: Hilbert data, normal bases, Koszul duals, coalgebra slices."""
from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverpot.field import CycField, Subspace
from quiverpot.paths import Quiver, TensorElement, delta_image, is_superpotential
from quiverpot.quotient import (
    Presentation,
    derivation_quotient,
    dual_coalgebra_slice,
    graded_dims,
    ideal_degree_span,
    koszul_dual,
    normal_basis,
)

F1 = CycField(1)
mono = TensorElement.monomial

Q3 = Quiver.single_vertex(["x", "y", "z"])
QC = Quiver(["u", "v"], [("a", "u", "v"), ("b", "v", "u")])


def _commutator_presentation(q: Quiver, field: CycField) -> Presentation:
    names = [a.name for a in q.arrows]
    rels = []
    for i, j in itertools.combinations(range(len(names)), 2):
        rels.append(mono(q, field, [names[i], names[j]])
                    - mono(q, field, [names[j], names[i]]))
    return Presentation(q, field, 2, rels)


def _antisym(q: Quiver, field: CycField) -> TensorElement:
    names = [a.name for a in q.arrows]
    out = TensorElement.zero(q, field, len(names))
    for perm in itertools.permutations(range(len(names))):
        inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
                  if perm[i] > perm[j])
        out = out + mono(q, field, [names[i] for i in perm], (-1) ** inv)
    return out


def test_ideal_degree_span_basics():
    p = _commutator_presentation(Q3, F1)
    assert ideal_degree_span(p, 2) == p.relations
    assert ideal_degree_span(p, 1).is_zero()
    assert ideal_degree_span(p, 0).is_zero()
    assert ideal_degree_span(p, 3).dim == 27 - 10


def test_graded_dims_polynomial_and_free():
    p = _commutator_presentation(Q3, F1)
    assert graded_dims(p, 5) == [math.comb(d + 2, 2) for d in range(6)]
    free = Presentation(Q3, F1, 2, [])
    assert graded_dims(free, 4) == [1, 3, 9, 27, 81]
    q4 = Quiver.single_vertex(["x0", "x1", "x2", "x3"])
    free4 = Presentation(q4, F1, 2, [])
    assert graded_dims(free4, 4) == [1, 4, 16, 64, 256]


def test_normal_basis():
    p = _commutator_presentation(Q3, F1)
    assert [repr(x) for x in normal_basis(p, 0)] == ["e(o)"]
    assert [repr(x) for x in normal_basis(p, 1)] == ["x", "y", "z"]
    assert [repr(x) for x in normal_basis(p, 2)] == ["xx", "xy", "xz", "yy", "yz", "zz"]
    for d in range(5):
        assert len(normal_basis(p, d)) == graded_dims(p, d)[d]


def test_normal_form():
    p = _commutator_presentation(Q3, F1)
    nf = p.normal_form(mono(Q3, F1, ["y", "x"]))
    assert nf == {Q3.path("x", "y").key: F1.one}
    assert p.is_zero_in_quotient(mono(Q3, F1, ["x", "y"]) - mono(Q3, F1, ["y", "x"]))
    zy_x = p.normal_form(mono(Q3, F1, ["z", "y", "x"]))
    assert zy_x == {Q3.path("x", "y", "z").key: F1.one}


def test_koszul_dual_polynomial_is_exterior():
    p = _commutator_presentation(Q3, F1)
    ext = koszul_dual(p)
    assert graded_dims(ext, 4) == [math.comb(3, d) for d in range(4)] + [0]
    assert koszul_dual(ext).relations == p.relations
    with pytest.raises(ValueError):
        koszul_dual(Presentation(Q3, F1, 3, [mono(Q3, F1, ["x", "y", "z"])]))


def test_dual_coalgebra_slice():
    p = _commutator_presentation(Q3, F1)
    assert dual_coalgebra_slice(p, 0).dim == 1
    assert dual_coalgebra_slice(p, 1).dim == 3
    assert dual_coalgebra_slice(p, 2) == p.relations
    for k in (3, 4):
        assert dual_coalgebra_slice(p, k).dim == math.comb(3, k)
    empty = Presentation(Q3, F1, 2, [])
    assert dual_coalgebra_slice(empty, 3).is_zero()


def test_slice_matches_direct_intersection():
    # recursion vs the defining meet of V^l (x) R (x) V^(k-l-2)
    p = _commutator_presentation(Q3, F1)
    k = 3
    idx = Q3.path_index(k)
    ambient = len(Q3.paths(k))
    spans = []
    for l in (0, 1):
        vecs = []
        for r in p.relation_elements():
            for m in Q3.paths(1):
                elem = (r * TensorElement.from_path(m, F1)) if l == 0 \
                    else (TensorElement.from_path(m, F1) * r)
                vec = [F1.zero] * ambient
                for kk, c in elem.terms.items():
                    vec[idx[kk]] = c
                vecs.append(vec)
        spans.append(Subspace.from_vectors(F1, ambient, vecs))
    direct = spans[0].meet(spans[1])
    assert dual_coalgebra_slice(p, 3) == direct


def test_delta_images_inside_slices():
    omega = _antisym(Q3, F1)
    assert is_superpotential(omega)
    p = derivation_quotient(omega, 1)
    assert p.degree == 2
    for k in range(4):
        w_k = delta_image(omega, 3 - k)
        assert dual_coalgebra_slice(p, k).contains_space(w_k), k


def test_multivertex_quotient():
    # T(QC)/<ab>: the loop ba survives once, (ba)^2 = b(ab)a dies
    p = Presentation(QC, CycField(4), 2, [mono(QC, CycField(4), ["a", "b"])])
    assert graded_dims(p, 4) == [2, 2, 1, 0, 0]
    assert [repr(x) for x in normal_basis(p, 2)] == ["ba"]


def test_degree_one_relations():
    q2 = Quiver.single_vertex(["x", "y"])
    p = Presentation(q2, F1, 1, [mono(q2, F1, ["x"])])
    assert graded_dims(p, 4) == [1, 1, 1, 1, 1]
    assert [repr(m) for m in normal_basis(p, 2)] == ["yy"]


def test_block_dimension_consistency():
    # endpoint blocks of the normal basis partition each graded slice
    f = CycField(4)
    p = Presentation(QC, f, 2, [mono(QC, f, ["a", "b"]) - mono(QC, f, ["b", "a"], 2)])
    for d in range(5):
        nb = normal_basis(p, d)
        blocks: dict[tuple[int, int], int] = {}
        for m in nb:
            key = (m.head, m.tail)
            blocks[key] = blocks.get(key, 0) + 1
        assert sum(blocks.values()) == graded_dims(p, d)[d]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=9, max_size=9),
                min_size=1, max_size=4))
def test_random_quadratic_engine_matches_dense_rank(rel_vecs):
    """Sparse engine ranks agree with dense canonical subspaces, degree <= 4."""
    rels = []
    for vec in rel_vecs:
        r = TensorElement.from_vector(Q3, F1, 2, [F1.from_rational(c) for c in vec])
        if not r.is_zero():
            rels.append(r)
    p = Presentation(Q3, F1, 2, rels)
    for d in range(5):
        span = ideal_degree_span(p, d)
        assert span.dim + graded_dims(p, d)[d] == len(Q3.paths(d))
        for m in normal_basis(p, d):
            vec = [F1.zero] * len(Q3.paths(d))
            vec[Q3.path_index(d)[m.key]] = F1.one
            assert not span.contains(vec)
