"""The four-generator Sklyanin family.

Everything here lives on the one-vertex quiver with loops x0..x3: the
quadratic relations of the family, the coefficient solver and the degree-4
potential, the modified variants (one relation swapped for a quadric, with a
diagonal twist), the finite symmetry generators built from a theta tuple,
recovery of the parameters from a potential, and the order-6 substitution
action on the parameter surface.
"""
from __future__ import annotations

import math
import random
from typing import Sequence

from .field import CycField, CycNum, Matrix, Subspace, rat
from .paths import (Quiver, TensorElement, Twist, apply_graded_map,
                    cyclic_shift, delta_image, derive, is_superpotential)
from .quotient import Presentation, ideal_degree_span

GENERATOR_NAMES = ("x0", "x1", "x2", "x3")

_QUIVER = Quiver(["o"], [(name, "o", "o") for name in GENERATOR_NAMES])


def generator_quiver() -> Quiver:
    """The shared one-vertex quiver whose loops are the four generators."""
    return _QUIVER


def generator_elements(field: CycField, quiver: Quiver | None = None
                       ) -> list[TensorElement]:
    """The generators as degree-1 elements over the given field."""
    q = _QUIVER if quiver is None else quiver
    return [TensorElement.monomial(q, field, (a.name,)) for a in q.arrows]


def _parameter_field(*values) -> CycField:
    n = 1
    for v in values:
        if isinstance(v, CycNum):
            n = math.lcm(n, v.field.N)
    return CycField(n)


class SklyaninParams:
    """A point (alpha, beta, gamma) with alpha + beta + gamma + alpha*beta*gamma = 0.

    Values are coerced into one cyclotomic field.  Two quality flags are
    recorded: ``nondegenerate`` (the triple avoids the three exceptional
    lines (*, -1, 1), (1, *, -1), (-1, 1, *)) and ``all_nonzero``.
    Degenerate triples still construct; the operations that need the flags
    check them explicitly.
    """

    __slots__ = ("field", "alpha", "beta", "gamma", "nondegenerate",
                 "all_nonzero")

    def __init__(self, alpha, beta, gamma):
        f = _parameter_field(alpha, beta, gamma)
        a, b, g = f.coerce(alpha), f.coerce(beta), f.coerce(gamma)
        if a + b + g + a * b * g:
            raise ValueError(
                "parameters must satisfy alpha + beta + gamma "
                "+ alpha*beta*gamma = 0")
        self.field = f
        self.alpha, self.beta, self.gamma = a, b, g
        one = f.one
        self.nondegenerate = not ((b == -one and g == one)
                                  or (a == one and g == -one)
                                  or (a == -one and b == one))
        self.all_nonzero = bool(a) and bool(b) and bool(g)

    def triple(self) -> tuple[CycNum, CycNum, CycNum]:
        return (self.alpha, self.beta, self.gamma)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SklyaninParams):
            return NotImplemented
        return self.triple() == other.triple()

    def __repr__(self) -> str:
        return f"SklyaninParams({self.alpha}, {self.beta}, {self.gamma})"


def solve_gamma(alpha, beta):
    """The third parameter determined by the first two on the surface."""
    f = _parameter_field(alpha, beta)
    a, b = f.coerce(alpha), f.coerce(beta)
    denom = f.one + a * b
    if not denom:
        raise ValueError("1 + alpha*beta = 0: gamma is not determined")
    return -(a + b) / denom


def sample_surface_points(count: int, seed: int = 0) -> list[SklyaninParams]:
    """Random rational surface points with all flags good (deterministic)."""
    rng = random.Random(seed)
    out: list[SklyaninParams] = []
    seen: set[tuple[str, str]] = set()
    while len(out) < count:
        a = rat(f"{rng.randint(-9, 9)}/{rng.randint(1, 9)}")
        b = rat(f"{rng.randint(-9, 9)}/{rng.randint(1, 9)}")
        if not a or not b or not 1 + a * b:
            continue
        g = -(a + b) / (1 + a * b)
        if not g:
            continue
        key = (str(a), str(b))
        if key in seen:
            continue
        p = SklyaninParams(a, b, g)
        if not (p.nondegenerate and p.all_nonzero):
            continue
        seen.add(key)
        out.append(p)
    return out


class ThetaTuple:
    """Four nonzero field elements parameterizing a surface point.

    The derived parameters are
    alpha = (t0*t1/(t2*t3))^2, beta = -(t0*t2/(t1*t3))^2,
    gamma = -(t0*t3/(t1*t2))^2; the constructor checks that they land on
    the surface (equivalently t0^4 + t1^4 = t2^4 + t3^4).
    """

    __slots__ = ("field", "thetas")

    def __init__(self, theta0, theta1, theta2, theta3):
        f = _parameter_field(theta0, theta1, theta2, theta3)
        ts = tuple(f.coerce(t) for t in (theta0, theta1, theta2, theta3))
        if not all(ts):
            raise ValueError("theta values must all be nonzero")
        self.field = f
        self.thetas = ts
        self.params()  # raises off the surface

    def params(self) -> SklyaninParams:
        t0, t1, t2, t3 = self.thetas
        alpha = (t0 * t1 / (t2 * t3)) ** 2
        beta = -((t0 * t2 / (t1 * t3)) ** 2)
        gamma = -((t0 * t3 / (t1 * t2)) ** 2)
        return SklyaninParams(alpha, beta, gamma)

    def __repr__(self) -> str:
        return f"ThetaTuple{self.thetas}"


# ---------------------------------------------------------------------------
# relations, kappa, potential
# ---------------------------------------------------------------------------

def sklyanin_relations(p: SklyaninParams, quiver: Quiver | None = None
                       ) -> dict[str, TensorElement]:
    """The six quadratic relations, keyed r1, s1, r2, s2, r3, s3."""
    f = p.field
    x = generator_elements(f, quiver)

    def comm(i: int, j: int) -> TensorElement:
        return x[i] * x[j] - x[j] * x[i]

    def anti(i: int, j: int) -> TensorElement:
        return x[i] * x[j] + x[j] * x[i]

    return {
        "r1": comm(0, 1) - anti(2, 3).scale(p.alpha),
        "s1": anti(0, 1) - comm(2, 3),
        "r2": comm(0, 2) - anti(3, 1).scale(p.beta),
        "s2": anti(0, 2) - comm(3, 1),
        "r3": comm(0, 3) - anti(1, 2).scale(p.gamma),
        "s3": anti(0, 3) - comm(1, 2),
    }


def sklyanin_presentation(p: SklyaninParams, quiver: Quiver | None = None
                          ) -> Presentation:
    """The quadratic presentation on the four loops."""
    q = _QUIVER if quiver is None else quiver
    return Presentation(q, p.field, 2, sklyanin_relations(p, q).values())


def sklyanin_kappa(p: SklyaninParams) -> tuple[CycNum, CycNum, CycNum]:
    """The potential coefficients, normalized to kappa1 = 1 when possible.

    Solves the homogeneous system
        kappa1 (1+alpha) = kappa3 (1-gamma)
        kappa1 (1-alpha) = kappa2 (1+beta)
        kappa2 (1-beta)  = kappa3 (1+gamma)
    whose solution space is one-dimensional for nondegenerate parameters.
    """
    if not p.nondegenerate:
        raise ValueError(
            "degenerate parameters (one of the exceptional lines): the "
            "potential coefficients are not defined")
    f = p.field
    one, zero = f.one, f.zero
    a, b, g = p.triple()
    m = Matrix(f, [[one + a, zero, -(one - g)],
                   [one - a, -(one + b), zero],
                   [zero, one - b, -(one + g)]])
    ns = m.nullspace()
    if ns.dim != 1:
        raise ValueError("coefficient system is not one-dimensional")
    k1, k2, k3 = ns.rows[0]
    if k1:
        inv = k1.inverse()
        return (one, k2 * inv, k3 * inv)
    return (k1, k2, k3)


def sklyanin_potential(p: SklyaninParams, quiver: Quiver | None = None
                       ) -> TensorElement:
    """The degree-4 potential sum_i kappa_i (r_i s_i + s_i r_i)."""
    k1, k2, k3 = sklyanin_kappa(p)
    r = sklyanin_relations(p, quiver)
    return ((r["r1"] * r["s1"] + r["s1"] * r["r1"]).scale(k1)
            + (r["r2"] * r["s2"] + r["s2"] * r["r2"]).scale(k2)
            + (r["r3"] * r["s3"] + r["s3"] * r["r3"]).scale(k3))


# ---------------------------------------------------------------------------
# modified variants
# ---------------------------------------------------------------------------

STAFF_VARIANTS = ("drop_r1", "drop_s1", "infinity")


def _check_staff_params(p: SklyaninParams) -> None:
    one = p.field.one
    if any(v == 0 or v == one or v == -one for v in p.triple()):
        raise ValueError(
            "modified variants need alpha, beta, gamma outside {0, 1, -1}")


def staff_quadrics(p: SklyaninParams, quiver: Quiver | None = None
                   ) -> tuple[TensorElement, TensorElement]:
    """The two central quadrics -x0^2+x1^2+x2^2+x3^2 and
    x1^2 + (1+alpha)/(1-beta) x2^2 + (1-alpha)/(1+gamma) x3^2."""
    _check_staff_params(p)
    f = p.field
    x = generator_elements(f, quiver)
    sq = [xi * xi for xi in x]
    one = f.one
    omega1 = -sq[0] + sq[1] + sq[2] + sq[3]
    omega2 = (sq[1] + sq[2].scale((one + p.alpha) / (one - p.beta))
              + sq[3].scale((one - p.alpha) / (one + p.gamma)))
    return omega1, omega2


def staff_twist(variant: str, field: CycField) -> Twist:
    """The diagonal twist of a modified variant.

    drop_r1 negates x0, x1; drop_s1 negates x2, x3; infinity negates all
    four.  (For each variant this is the unique diagonal twist admitting a
    twisted superpotential with the standard supercyclic sign; the two drop
    twists differ by the overall sign of the degree-1 action.)
    """
    if variant == "infinity":
        diag = (-1, -1, -1, -1)
    elif variant == "drop_s1":
        diag = (1, 1, -1, -1)
    else:
        diag = (-1, -1, 1, 1)
    m = Matrix(field, [[diag[i] if i == j else 0 for j in range(4)]
                       for i in range(4)])
    return Twist.from_matrix(_QUIVER, field, m)


def staff_lambda(variant: str, p: SklyaninParams, d1, d2
                 ) -> tuple[CycNum, CycNum, CycNum]:
    """Twisted-potential coefficients for a drop variant, lambda1 = 1.

    drop_r1 solves  d2 l1 = l2 (beta*gamma + 1),  d1 l1 = -l2 + l3;
    drop_s1 solves  alpha d1 l1 = l3 - l2,
                    alpha (d1 + d2) l1 = -(beta l2 + gamma l3),
    i.e. l2 = -alpha((1+gamma)d1 + d2)/(beta+gamma) and
    l3 = -alpha((1-beta)d1 + d2)/(beta+gamma).
    The (d1, d2) rays on which some coefficient vanishes are rejected.
    """
    _check_staff_params(p)
    f = p.field
    d1, d2 = f.coerce(d1), f.coerce(d2)
    if not d1 and not d2:
        raise ValueError("(d1, d2) = (0, 0): the sixth relation vanishes")
    one = f.one
    a, b, g = p.triple()
    if variant == "drop_r1":
        if not d2:
            raise ValueError("excluded ray: (d1, d2) proportional to (1, 0)")
        if d2 == -(one + b * g) * d1:
            raise ValueError(
                "excluded ray: (d1, d2) proportional to (1, -1 - beta*gamma)")
        lam2 = d2 / (b * g + one)
        return (one, lam2, d1 + lam2)
    if variant == "drop_s1":
        if d2 == (b - one) * d1:
            raise ValueError(
                "excluded ray: (d1, d2) proportional to (1, beta - 1)")
        if d2 == -(one + g) * d1:
            raise ValueError(
                "excluded ray: (d1, d2) proportional to (1, -1 - gamma)")
        lam2 = -a * ((one + g) * d1 + d2) / (b + g)
        lam3 = -a * ((one - b) * d1 + d2) / (b + g)
        return (one, lam2, lam3)
    raise ValueError(f"no coefficient system for variant {variant!r}")


def staff_presentation(variant: str, p: SklyaninParams, d1=1, d2=0
                       ) -> tuple[Presentation, Twist, TensorElement | None]:
    """A modified variant: presentation, twist, and twisted potential.

    drop_r1 keeps {q, r2, r3, s1, s2, s3} and drop_s1 keeps
    {q, r1, r2, r3, s2, s3}, where q = d1*Omega1 + d2*Omega2.  The
    infinity variant has relations (r2, s2, r3, s3, Omega1, Omega2),
    ignores (d1, d2), and returns no closed-form potential; its unique
    candidate is the one-dimensional twisted_superpotential_space for
    sigma = -identity, and that candidate is fixed by the plain cyclic
    shift.
    """
    if variant not in STAFF_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    _check_staff_params(p)
    f = p.field
    rel = sklyanin_relations(p)
    omega1, omega2 = staff_quadrics(p)
    sigma = staff_twist(variant, f)
    if variant == "infinity":
        pres = Presentation(_QUIVER, f, 2, [rel["r2"], rel["s2"], rel["r3"],
                                            rel["s3"], omega1, omega2])
        return pres, sigma, None
    lam1, lam2, lam3 = staff_lambda(variant, p, d1, d2)
    d1, d2 = f.coerce(d1), f.coerce(d2)
    q = omega1.scale(d1) + omega2.scale(d2)
    if variant == "drop_r1":
        kept = [q, rel["r2"], rel["r3"], rel["s1"], rel["s2"], rel["s3"]]
        omega = ((q * rel["s1"] + rel["s1"] * q).scale(lam1)
                 + (rel["r2"] * rel["r3"] - rel["r3"] * rel["r2"]).scale(lam2)
                 + (rel["s2"] * rel["s3"] - rel["s3"] * rel["s2"]).scale(lam3))
    else:
        kept = [q, rel["r1"], rel["r2"], rel["r3"], rel["s2"], rel["s3"]]
        omega = ((q * rel["r1"] + rel["r1"] * q).scale(lam1)
                 + (rel["r2"] * rel["s3"] - rel["s3"] * rel["r2"]).scale(lam2)
                 + (rel["s2"] * rel["r3"] - rel["r3"] * rel["s2"]).scale(lam3))
    return Presentation(_QUIVER, f, 2, kept), sigma, omega


def twisted_supercyclic_ideal_elements(pres: Presentation, tw: Twist,
                                       degree: int) -> Subspace:
    """Ideal elements of the given degree that the twisted cyclic shift
    fixes up to the sign (-1)^(degree-1)."""
    f, q = pres.field, pres.quiver
    basis = q.paths(degree)
    nb = len(basis)
    sign = f.one if degree % 2 == 1 else -f.one
    cols = [cyclic_shift(TensorElement.from_path(b, f), tw).vector()
            for b in basis]
    m = Matrix(f, [[cols[j][i] - (sign if i == j else f.zero)
                    for j in range(nb)] for i in range(nb)])
    return m.nullspace().meet(ideal_degree_span(pres, degree))


def twisted_superpotential_space(pres: Presentation, tw: Twist | None,
                                 degree: int) -> Subspace:
    """Candidate twisted superpotentials of the given degree for pres.

    The space of degree-`degree` elements that (a) pass is_superpotential
    for tw and (b) have every prefix derivative of order
    degree - pres.degree inside the relation span.  Dimension one certifies
    that a twisted superpotential presenting these relations is unique up
    to scale; dimension zero rules one out.  (Sharper than intersecting
    supercyclic elements with the relation ideal, which also admits
    elements whose derivatives fall outside the relations.)
    """
    f, q = pres.field, pres.quiver
    if degree < pres.degree:
        raise ValueError("potential degree below relation degree")
    basis = q.paths(degree)
    nb = len(basis)
    sign = f.one if degree % 2 == 1 else -f.one
    perm = tw.vertex_perm if tw is not None else tuple(range(q.n_vertices))
    rows: list[list[CycNum]] = []
    # endpoint condition: support paths must run tail -> perm(tail)
    for j, b in enumerate(basis):
        word = b.word
        if q.arrows[word[0]].head != perm[q.arrows[word[-1]].tail]:
            rows.append([f.one if k == j else f.zero for k in range(nb)])
    # twisted-supercyclic defect, one column of coordinates per basis path
    defect = [cyclic_shift(TensorElement.from_path(b, f), tw).vector()
              for b in basis]
    for i in range(nb):
        rows.append([defect[j][i] - (sign if i == j else f.zero)
                     for j in range(nb)])
    # order-(degree - pres.degree) derivatives must reduce to zero mod R
    rel = pres.relations
    order = degree - pres.degree
    for p in q.paths(order):
        residuals = [rel.reduce(derive(p, TensorElement.from_path(b, f))
                                .vector()) for b in basis]
        nr = len(residuals[0])
        for i in range(nr):
            row = [residuals[j][i] for j in range(nb)]
            if any(row):
                rows.append(row)
    if not rows:
        return Subspace.from_vectors(
            f, nb, [[f.one if k == j else f.zero for k in range(nb)]
                    for j in range(nb)])
    return Matrix(f, rows).nullspace()


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------

def heisenberg_generators(t: ThetaTuple) -> tuple[Matrix, Matrix]:
    """The two 4x4 symmetry generators attached to a theta tuple.

    Both are monomial matrices normalized so that X^4 = Y^4 = -identity,
    XY = i YX, the group they generate has order 64, and every element of
    that group fixes the theta-derived potential exactly.  (The unscaled
    monomial matrices have fourth power +identity and move the potential
    by -1; one factor of a primitive 8th root of unity on each generator
    repairs both at once.)
    """
    p = t.params()
    if not (p.nondegenerate and p.all_nonzero):
        raise ValueError("theta-derived parameters must be nondegenerate "
                         "with alpha, beta, gamma all nonzero")
    f = CycField(math.lcm(t.field.N, 8))
    i = f.root_of_unity(4)
    t0, t1, t2, t3 = (f.coerce(v) for v in t.thetas)
    z = f.zero
    x_mat = Matrix(f, [[z, z, z, i * t3 / t0],
                       [z, z, -(i * t2 / t1), z],
                       [z, i * t1 / t2, z, z],
                       [i * t0 / t3, z, z, z]])
    y_mat = Matrix(f, [[z, z, -(i * t2 / t0), z],
                       [z, z, z, -(t3 / t1)],
                       [i * t0 / t2, z, z, z],
                       [z, t1 / t3, z, z]])
    w = f.root_of_unity(8)
    return x_mat.scale(w), y_mat.scale(w)


def is_potential_automorphism(g: Matrix, omega: TensorElement,
                              up_to_scalar: bool = False) -> bool:
    """Whether g^(tensor degree) fixes omega (exactly, or up to a scalar)."""
    image = apply_graded_map(g, omega)
    if not up_to_scalar:
        return image == omega
    if omega.is_zero():
        return image.is_zero()
    key = next(iter(omega.terms))
    ratio = image.coefficient(key) / omega.coefficient(key)
    if not ratio:
        return False
    return image == omega.scale(ratio)


def maps_relation_span(g: Matrix, source: Presentation,
                       target: Presentation | None = None) -> bool:
    """Whether g^(tensor degree) carries the source relation span onto the
    target relation span (onto itself when no target is given)."""
    tgt = source if target is None else target
    if tgt.quiver is not source.quiver or tgt.degree != source.degree:
        raise ValueError("presentations live on different tensor spaces")
    f = CycField(math.lcm(g.field.N, source.field.N, tgt.field.N))
    ambient = len(source.quiver.paths(source.degree))
    image = Subspace.from_vectors(
        f, ambient,
        [apply_graded_map(g, r).vector() for r in source.relation_elements()])
    span = Subspace.from_vectors(
        f, ambient, [r.vector() for r in tgt.relation_elements()])
    return image == span


# ---------------------------------------------------------------------------
# parameter recovery and the substitution action
# ---------------------------------------------------------------------------

_RECOVERY_BLOCKS = ((0, 1, 2, 3), (0, 2, 3, 1), (0, 3, 1, 2))


def _block_coefficients(omega: TensorElement, i: int, j: int, k: int, l: int
                        ) -> tuple[CycNum, CycNum]:
    """Coefficients of [x_i,x_j][x_k,x_l] and {x_i,x_j}{x_k,x_l} in omega."""
    f = omega.field
    c1 = omega.coefficient((i, j, k, l))
    c2 = omega.coefficient((i, j, l, k))
    c3 = omega.coefficient((j, i, k, l))
    c4 = omega.coefficient((j, i, l, k))
    quarter = f.coerce(rat("1/4"))
    comm_comm = (c1 - c2 - c3 + c4) * quarter
    anti_anti = (c1 + c2 + c3 + c4) * quarter
    return comm_comm, anti_anti


def recover_parameters(omega: TensorElement) -> SklyaninParams:
    """Read (alpha, beta, gamma) off a nonzero scalar multiple of a family
    potential.

    Each parameter is the ratio of the anticommutator-product coefficient to
    the commutator-product coefficient in the matching index block:
    (0,1)(2,3) for alpha, (0,2)(3,1) for beta, (0,3)(1,2) for gamma.  The
    result is validated by an exact residual check against the rebuilt
    potential, so the ratios are scale-free.
    """
    q = omega.quiver
    if omega.degree != 4 or q.n_vertices != 1 or q.n_arrows != 4:
        raise ValueError(
            "expected a degree-4 element of the one-vertex four-loop quiver")
    values = []
    scale_denominator = None
    for (i, j, k, l) in _RECOVERY_BLOCKS:
        comm_comm, anti_anti = _block_coefficients(omega, i, j, k, l)
        if not comm_comm:
            raise ValueError(
                "commutator-product coefficient vanishes; not in the family")
        values.append(anti_anti / comm_comm)
        if scale_denominator is None:
            scale_denominator = comm_comm
    try:
        params = SklyaninParams(*values)
    except ValueError:
        raise ValueError("recovered ratios are off the parameter surface; "
                         "not in the family") from None
    kappa1 = sklyanin_kappa(params)[0]
    scale = -(scale_denominator / kappa1)
    if omega != sklyanin_potential(params, q).scale(scale):
        raise ValueError(
            "element is not a scalar multiple of a family potential")
    return params


S3_ELEMENTS = ("identity", "cyclic", "transposition")


def s3_transport(p: SklyaninParams, elem: str
                 ) -> tuple[Matrix, SklyaninParams]:
    """A generator of the substitution action and the parameter point it
    carries p to.

    "cyclic" is x0 -> x0, x1 -> x2 -> x3 -> x1 with target (gamma, alpha,
    beta); "transposition" is x1 -> x2, x2 -> -x1 with target
    (-beta, -alpha, -gamma).  The substitution is verified to carry the
    source relation span onto the target relation span.
    """
    f = p.field
    if elem == "identity":
        g = Matrix.identity(f, 4)
        target = p
    elif elem == "cyclic":
        g = Matrix(f, [[1, 0, 0, 0],
                       [0, 0, 0, 1],
                       [0, 1, 0, 0],
                       [0, 0, 1, 0]])
        target = SklyaninParams(p.gamma, p.alpha, p.beta)
    elif elem == "transposition":
        g = Matrix(f, [[1, 0, 0, 0],
                       [0, 0, -1, 0],
                       [0, 1, 0, 0],
                       [0, 0, 0, 1]])
        target = SklyaninParams(-p.beta, -p.alpha, -p.gamma)
    else:
        raise ValueError(f"unknown substitution {elem!r}; "
                         f"expected one of {S3_ELEMENTS}")
    if not maps_relation_span(g, sklyanin_presentation(p),
                              sklyanin_presentation(target)):
        raise RuntimeError(
            "substitution failed to carry the relation span (internal)")
    return g, target
