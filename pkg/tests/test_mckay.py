"""Group closure, McKay quivers, group superpotentials, invariant counts."""
from itertools import permutations
import math

import pytest

from quiverpot.field import CycField, Matrix, Subspace
from quiverpot.paths import TensorElement, cyclic_shift, derive, is_superpotential
from quiverpot.quotient import derivation_quotient, normal_basis
from quiverpot import mckay as mk


def block_dims(pres, d):
    k = pres.quiver.n_vertices
    out = [[0] * k for _ in range(k)]
    for p in normal_basis(pres, d):
        out[p.tail][p.head] += 1
    return out


@pytest.fixture(scope="module")
def dihedral8():
    group, data = mk.mckay_from_json(mk.load_fixture("dihedral8"))
    return group, data


@pytest.fixture(scope="module")
def ext3():
    group, data = mk.mckay_from_json(mk.load_fixture("cyclic7_124_ext3"))
    omega, tau = mk.mckay_potential(data)
    return group, data, omega, tau


# ---------------------------------------------------------------------------
# group closure and representation bookkeeping
# ---------------------------------------------------------------------------

def test_closure_order_and_tables(dihedral8):
    group, _ = dihedral8
    assert group.order == 8
    assert group.elements[0] == Matrix.identity(group.field, 2)
    for i in (0, 1, 3, 5, 7):
        for j in (0, 2, 4, 6):
            assert (group.elements[i] @ group.elements[j]
                    == group.elements[group.mul[i][j]])
        assert group.mul[i][group.inv[i]] == 0
    assert sorted(str(d) for d in set(group.det)) == ["-1", "1"]


def test_closure_cap_exceeded():
    f = CycField(4)
    g = Matrix(f, [[f.zeta(), 0], [0, -f.zeta()]])
    h = Matrix(f, [[0, 1], [1, 0]])
    with pytest.raises(ValueError, match="cap 4"):
        mk.group_closure(f, [g, h], cap=4)


def test_closure_trivial_group():
    f = CycField(4)
    group = mk.group_closure(f, [Matrix.identity(f, 3)], cap=4)
    assert group.order == 1
    mk.abelian_characters(group)
    assert len(group.irreps) == 1
    for d in range(5):
        assert mk.molien_multiplicities(group, d) == [[math.comb(2 + d, d)]]


def test_closure_rejects_bad_generators():
    f = CycField(4)
    with pytest.raises(ValueError, match="invertible"):
        mk.group_closure(f, [Matrix(f, [[1, 0], [1, 0]])], cap=64)
    # invertible but of infinite order: the cap fires
    with pytest.raises(ValueError, match="cap"):
        mk.group_closure(f, [Matrix(f, [[2, 0], [0, 1]])], cap=64)


def test_declare_irreps_rejects_bad_data():
    f = CycField(4)
    g = Matrix(f, [[f.zeta(), 0], [0, -f.zeta()]])
    h = Matrix(f, [[0, 1], [1, 0]])
    one, neg = Matrix(f, [[1]]), Matrix(f, [[-1]])
    group = mk.group_closure(f, [g, h], cap=16)
    with pytest.raises(ValueError, match="not a homomorphism"):
        mk.declare_irreps(group, [("bad", [one, Matrix(f, [[f.zeta()]])])])
    with pytest.raises(ValueError, match="sum to the group order"):
        mk.declare_irreps(group, [("V0", [one, one])])
    with pytest.raises(ValueError, match="duplicate characters"):
        mk.declare_irreps(group, [
            ("a", [one, one]), ("b", [one, one]), ("c", [neg, one]),
            ("d", [neg, neg]), ("V", [g, h])])


def test_abelian_characters_need_diagonal_generators():
    f = CycField(4)
    group = mk.group_closure(f, [Matrix(f, [[0, 1], [1, 0]])], cap=8)
    with pytest.raises(ValueError, match="diagonal"):
        mk.abelian_characters(group)


def test_intertwiner_space_dimensions(dihedral8):
    group, data = dihedral8
    v = data.names.index("V")
    for j in range(4):
        assert mk.intertwiner_space(group, v, j).dim == 1
        assert mk.intertwiner_space(group, j, v).dim == 1
        assert mk.intertwiner_space(group, j, j).dim == 0
    assert mk.intertwiner_space(group, v, v).dim == 0


# ---------------------------------------------------------------------------
# the dihedral worked example
# ---------------------------------------------------------------------------

def test_mckay_quiver_structure(dihedral8):
    group, data = dihedral8
    q = data.quiver
    assert data.names == ("V0", "V1", "V2", "V3", "V")
    assert data.dims == (1, 1, 1, 1, 2)
    assert q.n_vertices == 5 and q.n_arrows == 8
    v = data.names.index("V")
    for i in range(5):
        for j in range(5):
            want = 1 if (i == v) != (j == v) else 0
            assert data.mult[i][j] == want
    assert data.T == (1, 0, 3, 2, 4)


def test_arrow_bases_biorthogonal(dihedral8):
    group, data = dihedral8
    q = data.quiver
    prim = mk.arrow_intertwiners(data)
    du = mk.dual_intertwiners(data)
    assert set(prim) == set(du) == {a.name for a in q.arrows}
    for a in range(q.n_arrows):
        for b in range(q.n_arrows):
            if (q.arrows[a].tail, q.arrows[a].head) != \
                    (q.arrows[b].tail, q.arrows[b].head):
                continue
            want = group.field.one if a == b else group.field.zero
            assert mk._pair(data.arrow_intertwiners[a],
                            data.dual_intertwiners[b], group.n) == want


def test_path_scalar_values(dihedral8):
    group, data = dihedral8
    f = group.field
    assert mk.path_scalar_cp(data, ("A", "d")) == -2 * f.one
    # composable word landing outside the determinant-twist block
    assert mk.path_scalar_cp(data, ("A", "a")) == f.zero
    with pytest.raises(ValueError, match="degree must equal"):
        mk.path_scalar_cp(data, ("A",))


def test_potential_reconstructs_from_scalars(dihedral8):
    group, data = dihedral8
    q, f = data.quiver, group.field
    omega, _ = mk.mckay_potential(data, normalize=False)
    for p in q.paths(2):
        c = mk.path_scalar_cp(data, p)
        want = c * f.from_rational(data.dims[p.head])
        assert omega.coefficient(p) == want


def test_verbatim_potential_and_twist(dihedral8):
    group, data = dihedral8
    q, f = data.quiver, group.field
    omega, tau = mk.mckay_potential(data, normalize=False)
    target = {"Da": -1, "aA": 1, "Ad": -1, "dD": 1,
              "Cb": 1, "bB": -1, "Bc": 1, "cC": -1}
    want = TensorElement(q, f, 2, {
        q.path(w[0], w[1]).key: f.from_rational(c)
        for w, c in target.items()})
    assert omega.scale(f.from_rational("1/2")) == want
    assert is_superpotential(omega, tau)
    for x, y in [("a", "d"), ("A", "D"), ("b", "c"), ("B", "C")]:
        ix = next(i for i, ar in enumerate(q.arrows) if ar.name == x)
        img = tau.arrow_image(ix)
        assert img == TensorElement.monomial(q, f, (y,), f.one)


def test_relation_span_matches_printed_list(dihedral8):
    group, data = dihedral8
    q, f = data.quiver, group.field
    omega, _ = mk.mckay_potential(data)
    pres = derivation_quotient(omega, 0)
    assert pres.relations.dim == 5
    span = [
        TensorElement(q, f, 2, {q.path("D", "a").key: f.one}),
        TensorElement(q, f, 2, {q.path("A", "d").key: f.one}),
        TensorElement(q, f, 2, {q.path("C", "b").key: f.one}),
        TensorElement(q, f, 2, {q.path("B", "c").key: f.one}),
        TensorElement(q, f, 2, {q.path("a", "A").key: f.one,
                                q.path("d", "D").key: f.one,
                                q.path("b", "B").key: -f.one,
                                q.path("c", "C").key: -f.one}),
    ]
    assert pres.relations == Subspace.from_vectors(
        f, len(q.paths(2)), [t.vector() for t in span])


def test_default_route_is_coherent(dihedral8):
    group, _ = dihedral8
    data = mk.mckay_quiver(group)
    omega, tau = mk.mckay_potential(data)
    assert is_superpotential(omega, tau)
    pres = derivation_quotient(omega, 0)
    assert pres.relations.dim == 5
    for d in range(5):
        assert mk.molien_multiplicities(group, d) == block_dims(pres, d)


def test_molien_trivial_vertex_diagonal(dihedral8):
    group, data = dihedral8
    triv = data.names.index("V0")
    diag = [mk.molien_multiplicities(group, d)[triv][triv] for d in range(5)]
    assert diag == [1, 0, 1, 0, 2]


def test_supplied_det_iso_must_be_equivariant(dihedral8):
    group, _ = dihedral8
    f = group.field
    with pytest.raises(ValueError, match="not a nonzero equivariant"):
        mk.mckay_quiver(group, det_isos={"V": Matrix.identity(f, 2)})


def test_supplied_arrow_basis_must_be_equivariant():
    obj = mk.load_fixture("dihedral8")
    bad = dict(obj)
    bad["arrows"] = [dict(a) for a in obj["arrows"]]
    bad["arrows"][0] = dict(bad["arrows"][0], dual_map=[["1", "1"], ["0", "1"]])
    with pytest.raises(ValueError, match="not an equivariant map"):
        mk.mckay_from_json(bad)


# ---------------------------------------------------------------------------
# the abelian 1/7(1, 2, 4) example
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def cyclic7():
    group, data = mk.mckay_from_json(mk.load_fixture("cyclic7_124"))
    omega, tau = mk.mckay_potential(data)
    return group, data, omega, tau


def test_abelian_quiver_and_twist(cyclic7):
    group, data, omega, tau = cyclic7
    assert group.order == 7 and len(group.irreps) == 7
    assert data.quiver.n_vertices == 7 and data.quiver.n_arrows == 21
    assert data.T == tuple(range(7))
    assert tau.is_identity
    assert len(omega.terms) == 42


def test_abelian_alternating_sign_pattern(cyclic7):
    group, data, omega, _ = cyclic7
    q, f = data.quiver, group.field
    eps = f.zeta()
    weights = (1, 2, 4)
    wt = {}
    for i, r in enumerate(group.irreps):
        val = r.matrices[1][0, 0]
        wt[i] = next(w for w in range(7) if val == eps ** w)
    name_of = {}
    for a in q.arrows:
        k = next(kk for kk in range(3)
                 if (wt[a.tail] - weights[kk]) % 7 == wt[a.head])
        name_of[wt[a.tail], k] = a.name

    def sign(seq):
        seq, s = list(seq), 1
        for i in range(len(seq)):
            while seq[i] != i:
                j = seq[i]
                seq[i], seq[j] = seq[j], seq[i]
                s = -s
        return s

    terms = {}
    for s in range(7):
        for ks in permutations(range(3)):
            k1, k2, k3 = ks
            a3 = name_of[s, k3]
            s2 = (s - weights[k3]) % 7
            a2 = name_of[s2, k2]
            s1 = (s2 - weights[k2]) % 7
            a1 = name_of[s1, k1]
            terms[q.path(a1, a2, a3).key] = f.from_rational(sign(ks))
    expected = TensorElement(q, f, 3, terms)
    lead = next(expected.coefficient(p)
                for p in q.paths(3) if expected.coefficient(p))
    assert expected.scale(lead.inverse()) == omega


def test_abelian_repeated_coordinate_vanishes(cyclic7):
    group, data, _, _ = cyclic7
    q, f = data.quiver, group.field
    # a weight-respecting word whose coordinate letters repeat
    eps = f.zeta()
    wt = {i: next(w for w in range(7)
                  if group.irreps[i].matrices[1][0, 0] == eps ** w)
          for i in range(7)}
    name_of = {}
    for a in q.arrows:
        k = next(kk for kk in range(3)
                 if (wt[a.tail] - (1, 2, 4)[kk]) % 7 == wt[a.head])
        name_of[wt[a.tail], k] = a.name
    a3 = name_of[0, 0]
    a2 = name_of[(0 - 1) % 7, 0]
    a1 = name_of[(0 - 2) % 7, 1]
    assert mk.path_scalar_cp(data, (a1, a2, a3)) == f.zero


def test_abelian_relations_and_molien(cyclic7):
    group, _, omega, _ = cyclic7
    pres = derivation_quotient(omega, 1)
    assert pres.relations.dim == 21
    for d in range(5):
        assert mk.molien_multiplicities(group, d) == block_dims(pres, d)


# ---------------------------------------------------------------------------
# the semidirect extension of 1/7(1, 2, 4)
# ---------------------------------------------------------------------------

def test_extension_quiver_and_potential(ext3):
    group, data, omega, tau = ext3
    q, f = data.quiver, group.field
    assert group.order == 21 and len(group.irreps) == 5
    assert q.n_vertices == 5 and q.n_arrows == 11
    assert data.T == tuple(range(5))
    assert tau.is_identity
    rho = f.root_of_unity(3)
    spec = [
        ("axA", 1), ("xAa", 1), ("Aax", 1),
        ("ayA", -1), ("yAa", -1), ("Aay", -1),
        ("bxB", 1), ("xBb", 1), ("Bbx", 1),
        ("byB", -rho), ("yBb", -rho), ("Bby", -rho),
        ("cxC", 1), ("xCc", 1), ("Ccx", 1),
        ("cyC", -(rho ** 2)), ("yCc", -(rho ** 2)), ("Ccy", -(rho ** 2)),
        ("zux", -1), ("xzu", -1), ("uxz", -1),
        ("vzy", 1), ("yvz", 1), ("zyv", 1),
        ("uuu", 1), ("vvv", -1),
    ]
    expected = TensorElement(q, f, 3, {
        q.path(*tuple(w)).key: f.coerce(c) for w, c in spec})
    assert omega == expected


def test_extension_derived_relations(ext3):
    group, data, omega, _ = ext3
    q, f = data.quiver, group.field
    rho = f.root_of_unity(3)

    def el(termmap):
        return TensorElement(q, f, 2, {
            q.path(*tuple(w)).key: f.coerce(c) for w, c in termmap.items()})

    printed = {
        "A": el({"ax": 1, "ay": -1}),
        "B": el({"bx": 1, "by": -rho}),
        "C": el({"cx": 1, "cy": -(rho ** 2)}),
        "a": el({"xA": 1, "yA": -1}),
        "b": el({"xB": 1, "yB": -rho}),
        "c": el({"xC": 1, "yC": -(rho ** 2)}),
        "x": el({"Aa": 1, "Bb": 1, "Cc": 1, "zu": -1}),
        "y": el({"Aa": -1, "Bb": -rho, "Cc": -(rho ** 2), "vz": 1}),
        "u": el({"xz": -1, "uu": 1}),
        "v": el({"zy": 1, "vv": -1}),
    }
    for arrow, want in printed.items():
        assert derive(q.path(arrow), omega) == want
    # the eleventh derivative, one per arrow in total
    assert derive(q.path("z"), omega) == el({"ux": -1, "yv": 1})
    pres = derivation_quotient(omega, 1)
    assert pres.relations.dim == 11


def test_extension_molien(ext3):
    group, _, omega, _ = ext3
    pres = derivation_quotient(omega, 1)
    for d in range(5):
        assert mk.molien_multiplicities(group, d) == block_dims(pres, d)


# ---------------------------------------------------------------------------
# larger examples: nontrivial twist order and a doubled representation
# ---------------------------------------------------------------------------

def test_order24_group_has_order3_twist():
    group, data = mk.mckay_from_json(mk.load_fixture("gl2_order24"))
    q = data.quiver
    assert group.order == 24 and len(group.irreps) == 15
    assert q.n_vertices == 15 and q.n_arrows == 24
    T = data.T
    assert T == (1, 2, 0, 4, 5, 3, 7, 8, 6, 10, 11, 9, 14, 12, 13)
    T3 = tuple(T[T[T[j]]] for j in range(15))
    assert T != tuple(range(15)) and T3 == tuple(range(15))
    omega, tau = mk.mckay_potential(data)
    assert not tau.is_identity
    assert len(omega.terms) == 24
    assert is_superpotential(omega, tau)
    pres = derivation_quotient(omega, 0)
    assert pres.relations.dim == 15
    for d in range(5):
        assert mk.molien_multiplicities(group, d) == block_dims(pres, d)


def test_quaternion_group_preprojective_shape():
    group, data = mk.mckay_from_json(mk.load_fixture("quaternion8"))
    q = data.quiver
    assert data.T == tuple(range(5))  # inside SL_2
    assert all(str(d) == "1" for d in group.det)
    omega, tau = mk.mckay_potential(data)
    assert tau.is_identity
    assert len(omega.terms) == 8
    # two-way arrows in matched pairs
    for i in range(5):
        for j in range(5):
            assert data.mult[i][j] == data.mult[j][i]
    pres = derivation_quotient(omega, 0)
    assert pres.relations.dim == 5
    for d in range(5):
        assert mk.molien_multiplicities(group, d) == block_dims(pres, d)


def test_doubled_representation_degree4_potential():
    group, data = mk.mckay_from_json(mk.load_fixture("dihedral8_doubled"))
    assert data.n == 4 and data.quiver.n_arrows == 16
    assert data.T == tuple(range(5))
    omega, tau = mk.mckay_potential(data)
    assert tau.is_identity
    assert len(omega.terms) == 144
    assert is_superpotential(omega, tau)
    pres = derivation_quotient(omega, 2)
    assert pres.relations.dim == 30
    for d in range(5):
        mol = mk.molien_multiplicities(group, d)
        assert mol == block_dims(pres, d)
        if d == 4:
            assert [sum(r) for r in mol] == [35] * 5


def test_twisted_cyclic_shift_symmetry_all_group_fixtures():
    for name in ("dihedral8", "quaternion8", "cyclic7_124",
                 "cyclic7_124_ext3", "gl2_order24"):
        _, data = mk.mckay_from_json(mk.load_fixture(name))
        omega, tau = mk.mckay_potential(data)
        sign = data.n - 1
        shifted = cyclic_shift(omega, tau)
        want = omega if sign % 2 == 0 else omega.scale(-omega.field.one)
        assert shifted == want, name


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_fixture_corpus_names():
    assert mk.fixture_names() == [
        "cyclic7_124", "cyclic7_124_ext3", "dihedral8", "dihedral8_doubled",
        "gl2_order24", "heisenberg64", "quaternion8"]
    with pytest.raises(FileNotFoundError):
        mk.load_fixture("no_such_fixture")


def test_group_from_json_heisenberg_closure():
    group = mk.group_from_json(mk.load_fixture("heisenberg64"))
    assert group.order == 64
    assert group.irreps == ()


def test_molien_requires_irreps():
    group = mk.group_from_json(mk.load_fixture("heisenberg64"))
    with pytest.raises(ValueError, match="irreps"):
        mk.molien_multiplicities(group, 2)
