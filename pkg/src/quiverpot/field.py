"""Exact arithmetic in cyclotomic fields Q(zeta_N), plus dense exact linear algebra.

Scalars are elements of Q(zeta_N) stored in the power basis 1, z, ..., z^(phi(N)-1)
modulo the N-th cyclotomic polynomial, with arbitrary-precision rational
coordinates (gmpy2.mpq when available, fractions.Fraction otherwise).  There is
no floating point anywhere in this package.

Conventions fixed here and relied on everywhere else:

* one conductor per computation; a CycNum of conductor M interoperates with
  conductor N only when M | N (embedding z_M -> z_N^(N/M)) -- anything else
  raises;
* complex conjugation is the Galois map z -> z^(-1);
* ``Subspace`` values are *canonical*: the unique reduced row-echelon basis
  with ascending pivot columns and leading coefficient 1, so two subspaces are
  equal iff their Subspace values are equal.
"""
from __future__ import annotations

from typing import Iterable, Sequence, Union

try:
    from gmpy2 import mpq as _mpq

    Rat = _mpq
except ImportError:  # pragma: no cover - gmpy2 is installed in CI
    from fractions import Fraction as Rat  # type: ignore[assignment]

from fractions import Fraction

RatLike = Union[int, str, Fraction, "Rat"]

_RAT_ZERO = Rat(0)
_RAT_ONE = Rat(1)


def rat(x: RatLike) -> Rat:
    """Coerce an int / 'p/q' string / Fraction to the rational scalar type."""
    if isinstance(x, (int, str)):
        return Rat(x)
    if isinstance(x, Fraction):
        return Rat(x.numerator, x.denominator)
    return Rat(x)


# ---------------------------------------------------------------------------
# cyclotomic polynomials (integer coefficients, ascending exponents)
# ---------------------------------------------------------------------------

_CYCLO_CACHE: dict[int, tuple[int, ...]] = {1: (-1, 1)}


def _poly_divide_exact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coeffs); den is monic-led."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dd]
        if c % den[-1]:
            raise ArithmeticError("non-exact polynomial division")
        q = c // den[-1]
        out[k] = q
        if q:
            for j, d in enumerate(den):
                num[k + j] -= q * d
    if any(c != 0 for c in num):
        raise ArithmeticError("non-exact polynomial division (remainder)")
    return out


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n (ascending), via Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d."""
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    out = num
    for d in range(1, n):
        if n % d == 0:
            out = _poly_divide_exact(out, cyclotomic_polynomial(d))
    result = tuple(out)
    _CYCLO_CACHE[n] = result
    return result


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


# ---------------------------------------------------------------------------
# the field Q(zeta_N)
# ---------------------------------------------------------------------------

class CycField:
    """The cyclotomic field Q(zeta_N), with cached power-basis reduction tables.

    Instances are interned per conductor: ``CycField(4) is CycField(4)``.
    """

    _instances: dict[int, "CycField"] = {}

    def __new__(cls, conductor: int) -> "CycField":
        if conductor < 1:
            raise ValueError("conductor must be a positive integer")
        inst = cls._instances.get(conductor)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(conductor)
            cls._instances[conductor] = inst
        return inst

    def _init(self, conductor: int) -> None:
        self.N = conductor
        mod = cyclotomic_polynomial(conductor)
        self.phi = len(mod) - 1
        self._mod = tuple(rat(c) for c in mod)
        # reduced coordinates of z^e for all exponents used by mul/conj/embed
        table: list[tuple[Rat, ...]] = []
        cur = [_RAT_ZERO] * self.phi
        cur[0] = _RAT_ONE
        table.append(tuple(cur))
        top = max(2 * self.phi - 1, conductor)
        for _ in range(1, top):
            lead = cur[-1]
            nxt = [_RAT_ZERO] + cur[:-1] if self.phi > 1 else [_RAT_ZERO]
            if lead:
                for j in range(self.phi):
                    nxt[j] -= lead * self._mod[j]
            cur = nxt
            table.append(tuple(cur))
        self._pow = tuple(table)
        self.zero = CycNum(self, tuple([_RAT_ZERO] * self.phi))
        one = [_RAT_ZERO] * self.phi
        one[0] = _RAT_ONE
        self.one = CycNum(self, tuple(one))

    # -- constructors -------------------------------------------------------

    def from_rational(self, x: RatLike) -> "CycNum":
        c = [_RAT_ZERO] * self.phi
        c[0] = rat(x)
        return CycNum(self, tuple(c))

    def from_coeffs(self, coeffs: Iterable[RatLike]) -> "CycNum":
        c = [rat(x) for x in coeffs]
        if len(c) > self.phi:
            # reduce higher powers through the table
            acc = [_RAT_ZERO] * self.phi
            for e, x in enumerate(c):
                if x:
                    pe = self._power(e)
                    for j in range(self.phi):
                        acc[j] += x * pe[j]
            return CycNum(self, tuple(acc))
        c += [_RAT_ZERO] * (self.phi - len(c))
        return CycNum(self, tuple(c))

    def zeta(self, exponent: int = 1) -> "CycNum":
        """z_N^exponent (any integer exponent)."""
        return CycNum(self, self._power(exponent % self.N))

    def root_of_unity(self, order: int) -> "CycNum":
        """A primitive order-th root of unity in this field (order | N, or order in {1,2})."""
        if order == 1:
            return self.one
        if self.N % order == 0:
            return CycNum(self, self._power(self.N // order))
        if order == 2:
            return self.from_rational(-1)
        raise ValueError(f"Q(zeta_{self.N}) has no root of unity of order {order}")

    def coerce(self, x: "CycNum | RatLike") -> "CycNum":
        if isinstance(x, CycNum):
            if x.field is self:
                return x
            if self.N % x.field.N == 0:
                return self._embed(x)
            raise ValueError(
                f"cannot coerce conductor {x.field.N} into conductor {self.N}")
        return self.from_rational(x)

    def _embed(self, x: "CycNum") -> "CycNum":
        step = self.N // x.field.N
        acc = [_RAT_ZERO] * self.phi
        for e, c in enumerate(x.c):
            if c:
                pe = self._power(e * step)
                for j in range(self.phi):
                    acc[j] += c * pe[j]
        return CycNum(self, tuple(acc))

    def _power(self, e: int) -> tuple[Rat, ...]:
        # table covers 0 .. max(2*phi-2, N-1); z^N = 1 handles anything larger
        if e < len(self._pow):
            return self._pow[e]
        return self._pow[e % self.N]

    def __repr__(self) -> str:
        return f"CycField({self.N})"


def common_field(a: CycField, b: CycField) -> CycField:
    """The larger of two fields when one conductor divides the other."""
    if a is b:
        return a
    if a.N % b.N == 0:
        return a
    if b.N % a.N == 0:
        return b
    raise ValueError(f"incompatible conductors {a.N} and {b.N}")


class CycNum:
    """An element of Q(zeta_N) in reduced power-basis coordinates. Immutable."""

    __slots__ = ("field", "c")

    def __init__(self, field: CycField, coeffs: tuple[Rat, ...]):
        self.field = field
        self.c = coeffs

    # -- predicates ----------------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def as_rational(self) -> Rat:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other: "CycNum | RatLike") -> "tuple[CycNum, CycNum] | None":
        if isinstance(other, CycNum):
            if other.field is self.field:
                return self, other
            f = common_field(self.field, other.field)
            return f.coerce(self), f.coerce(other)
        if isinstance(other, (int, Fraction, Rat)):
            return self, self.field.from_rational(other)
        return None

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycNum(a.field, tuple(x + y for x, y in zip(a.c, b.c)))

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycNum(a.field, tuple(x - y for x, y in zip(a.c, b.c)))

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycNum(a.field, tuple(y - x for x, y in zip(a.c, b.c)))

    def __neg__(self):
        return CycNum(self.field, tuple(-x for x in self.c))

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        f = a.field
        phi = f.phi
        if phi == 1:
            return CycNum(f, (a.c[0] * b.c[0],))
        acc = [_RAT_ZERO] * phi
        pw = f._pow
        for i, x in enumerate(a.c):
            if not x:
                continue
            for j, y in enumerate(b.c):
                if not y:
                    continue
                e = i + j
                if e < phi:
                    acc[e] += x * y
                else:
                    xy = x * y
                    pe = pw[e]
                    for k in range(phi):
                        if pe[k]:
                            acc[k] += xy * pe[k]
        return CycNum(f, tuple(acc))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if not self:
            raise ZeroDivisionError("division by zero in cyclotomic field")
        f = self.field
        if f.phi == 1:
            return CycNum(f, (_RAT_ONE / self.c[0],))
        if self.is_rational():
            return f.from_rational(_RAT_ONE / self.c[0])
        # extended Euclid: s*a + t*Phi = gcd = const, so a^(-1) = s / const
        a = list(self.c)
        b = list(f._mod)
        s_a: list[Rat] = [_RAT_ONE]
        s_b: list[Rat] = []
        while True:
            while a and not a[-1]:
                a.pop()
            if len(a) == 1:
                inv = _RAT_ONE / a[0]
                return f.from_coeffs([x * inv for x in s_a])
            if not a:
                raise ArithmeticError("inverse failed (non-coprime input?)")
            # one full remainder step: b = b mod a, swap
            lead = a[-1]
            while len(b) >= len(a):
                q = b[-1] / lead
                shift = len(b) - len(a)
                if q:
                    for j in range(len(a)):
                        b[shift + j] -= q * a[j]
                    # s_b -= q * x^shift * s_a
                    need = shift + len(s_a)
                    if len(s_b) < need:
                        s_b += [_RAT_ZERO] * (need - len(s_b))
                    for j in range(len(s_a)):
                        s_b[shift + j] -= q * s_a[j]
                b.pop()
                while b and not b[-1]:
                    b.pop()
            a, b = b, a
            s_a, s_b = s_b, s_a

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if b.is_rational():
            q = b.c[0]
            if not q:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return CycNum(a.field, tuple(x / q for x in a.c))
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def conjugate(self) -> "CycNum":
        """Complex conjugation, i.e. the Galois map z -> z^(-1)."""
        f = self.field
        if f.phi == 1:
            return self
        acc = [_RAT_ZERO] * f.phi
        for e, x in enumerate(self.c):
            if x:
                pe = f._power((f.N - e) % f.N)
                for j in range(f.phi):
                    acc[j] += x * pe[j]
        return CycNum(f, tuple(acc))

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum) and other.field is self.field:
            return self.c == other.c
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.c == b.c

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.c[0])  # rationals hash alike across conductors
        return hash((self.field.N, self.c))

    # -- rendering -----------------------------------------------------------

    def __repr__(self) -> str:
        return f"CycNum({self.field.N}, {self})"

    def __str__(self) -> str:
        terms = []
        for e, x in enumerate(self.c):
            if not x:
                continue
            if e == 0:
                terms.append(str(x))
            else:
                z = "z" if e == 1 else f"z^{e}"
                if x == 1:
                    terms.append(z)
                elif x == -1:
                    terms.append(f"-{z}")
                else:
                    terms.append(f"{x}*{z}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def parse_cyc(text: str, field: CycField) -> CycNum:
    """Parse 'c0 + c1*z + c2*z^2 - ...' (also bare rationals) into a CycNum."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar string")
    # split into signed terms
    terms: list[str] = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-/*^":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    total = field.zero
    for t in terms:
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ValueError(f"bad scalar term in {text!r}")
        if "z" in t:
            coeff_part, _, z_part = t.partition("z")
            coeff_part = coeff_part.rstrip("*")
            coeff = rat(coeff_part) if coeff_part else _RAT_ONE
            if z_part.startswith("^"):
                exp = int(z_part[1:])
            elif not z_part:
                exp = 1
            else:
                raise ValueError(f"bad power in scalar term {t!r}")
            total = total + field.zeta(exp) * (sign * coeff)
        else:
            total = total + field.from_rational(sign * rat(t))
    return total


# ---------------------------------------------------------------------------
# dense exact matrices
# ---------------------------------------------------------------------------

Entry = Union[CycNum, int, str, Fraction]


class Matrix:
    """Dense matrix over a CycField. Immutable by convention."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: CycField, rows: Sequence[Sequence[Entry]],
                 ncols: int | None = None):
        self.field = field
        data = [tuple(field.coerce(x) for x in row) for row in rows]
        if data:
            ncols = len(data[0])
            if any(len(r) != ncols for r in data):
                raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("empty matrix needs explicit ncols")
        self.rows = tuple(data)
        self.nrows = len(data)
        self.ncols = ncols

    # -- constructors --------------------------------------------------------

    @classmethod
    def identity(cls, field: CycField, n: int) -> "Matrix":
        return cls(field, [[field.one if i == j else field.zero for j in range(n)]
                           for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, field: CycField, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [[field.zero] * ncols for _ in range(nrows)], ncols=ncols)

    def __getitem__(self, ij: tuple[int, int]) -> CycNum:
        return self.rows[ij[0]][ij[1]]

    def row(self, i: int) -> tuple[CycNum, ...]:
        return self.rows[i]

    def column(self, j: int) -> tuple[CycNum, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)) if self.rows else [],
                      ncols=self.nrows)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and other.field is self.field
                and other.rows == self.rows and other.ncols == self.ncols)

    def __hash__(self) -> int:
        return hash((self.field.N, self.ncols, self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")
        return Matrix(self.field,
                      [[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)], ncols=self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")
        return Matrix(self.field,
                      [[a - b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)], ncols=self.ncols)

    def scale(self, s: Entry) -> "Matrix":
        s = self.field.coerce(s)
        return Matrix(self.field, [[s * x for x in r] for r in self.rows],
                      ncols=self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matmul")
        ocols = list(zip(*other.rows)) if other.rows else []
        zero = self.field.zero
        out = []
        for r in self.rows:
            row = []
            for c in ocols:
                acc = zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            if not ocols:
                row = []
            out.append(row)
        return Matrix(self.field, out, ncols=other.ncols)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product (row-major block layout)."""
        out = []
        for ra in self.rows:
            for rb in other.rows:
                out.append([a * b for a in ra for b in rb])
        return Matrix(self.field, out, ncols=self.ncols * other.ncols)

    # -- elimination ---------------------------------------------------------

    def rank(self) -> int:
        """Rank over Q(zeta_N), fraction-free (Bareiss-style) elimination."""
        m = [list(r) for r in self.rows]
        nr, nc = self.nrows, self.ncols
        prev = self.field.one
        r = 0
        for col in range(nc):
            piv = None
            for i in range(r, nr):
                if m[i][col]:
                    piv = i
                    break
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            pval = m[r][col]
            for i in range(r + 1, nr):
                head = m[i][col]
                if head:
                    mi, mr = m[i], m[r]
                    for j in range(col + 1, nc):
                        mi[j] = (mi[j] * pval - head * mr[j]) / prev
                    mi[col] = self.field.zero
                else:
                    mi = m[i]
                    for j in range(col + 1, nc):
                        if mi[j]:
                            mi[j] = (mi[j] * pval) / prev
            prev = pval
            r += 1
            if r == nr:
                break
        return r

    def rref(self) -> tuple[list[list[CycNum]], list[int]]:
        """Reduced row echelon form (leading 1s, pivots ascending); returns (rows, pivots)."""
        return _rref([list(r) for r in self.rows], self.ncols, self.field)

    def nullspace(self) -> "Subspace":
        """Canonical basis of the right kernel {v : M v = 0}."""
        rows, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        vecs = []
        zero = self.field.zero
        for f in free:
            v = [zero] * self.ncols
            v[f] = self.field.one
            for i, p in enumerate(pivots):
                v[p] = -rows[i][f]
            vecs.append(v)
        return Subspace.from_vectors(self.field, self.ncols, vecs)

    def solve(self, rhs: Sequence[Entry]) -> "list[CycNum] | None":
        """One solution x of M x = rhs, or None if inconsistent."""
        b = [self.field.coerce(x) for x in rhs]
        if len(b) != self.nrows:
            raise ValueError("rhs length mismatch")
        aug = [list(r) + [b[i]] for i, r in enumerate(self.rows)]
        rows, pivots = _rref(aug, self.ncols + 1, self.field)
        if self.ncols in pivots:
            return None
        x = [self.field.zero] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = rows[i][self.ncols]
        return x

    def inverse(self) -> "Matrix":
        """Inverse of a square matrix; raises ValueError if singular."""
        if self.nrows != self.ncols:
            raise ValueError("only square matrices can be inverted")
        n = self.nrows
        one, zero = self.field.one, self.field.zero
        aug = [list(r) + [one if j == i else zero for j in range(n)]
               for i, r in enumerate(self.rows)]
        rows, pivots = _rref(aug, 2 * n, self.field)
        if pivots[:n] != list(range(n)):
            raise ValueError("matrix is singular")
        return Matrix(self.field, [rows[i][n:] for i in range(n)], ncols=n)

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols} over Q(zeta_{self.field.N}))"


def _rref(m: list[list[CycNum]], ncols: int,
          field: CycField) -> tuple[list[list[CycNum]], list[int]]:
    pivots: list[int] = []
    r = 0
    nr = len(m)
    for col in range(ncols):
        piv = None
        for i in range(r, nr):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][col]
        if lead != field.one:
            inv = lead.inverse()
            m[r] = [x * inv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][col]:
                c = m[i][col]
                m[i] = [a - c * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nr:
            break
    return m[:r], pivots


# ---------------------------------------------------------------------------
# canonical subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of F^n in canonical reduced row-echelon form.

    Equality of Subspace values is equality of subspaces.
    """

    __slots__ = ("field", "ambient_dim", "rows", "pivots")

    def __init__(self, field: CycField, ambient_dim: int,
                 rows: tuple[tuple[CycNum, ...], ...], pivots: tuple[int, ...]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.rows = rows
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, field: CycField, ambient_dim: int,
                     vectors: Iterable[Sequence[Entry]]) -> "Subspace":
        vecs = [[field.coerce(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("vector length != ambient dimension")
        rows, pivots = _rref(vecs, ambient_dim, field)
        return cls(field, ambient_dim,
                   tuple(tuple(r) for r in rows), tuple(pivots))

    @classmethod
    def zero(cls, field: CycField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field: CycField, ambient_dim: int) -> "Subspace":
        eye = Matrix.identity(field, ambient_dim)
        return cls(field, ambient_dim, eye.rows, tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def basis_matrix(self) -> Matrix:
        return Matrix(self.field, [list(r) for r in self.rows],
                      ncols=self.ambient_dim)

    def reduce(self, vector: Sequence[Entry]) -> list[CycNum]:
        """Residual of a vector after eliminating this subspace's pivots."""
        v = [self.field.coerce(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise ValueError("vector length != ambient dimension")
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def contains(self, vector: Sequence[Entry]) -> bool:
        return not any(self.reduce(vector))

    def contains_space(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains(r) for r in other.rows)

    def coords(self, vector: Sequence[Entry]) -> "list[CycNum] | None":
        """Coefficients of the vector in this subspace's canonical basis, or None."""
        v = [self.field.coerce(x) for x in vector]
        out = []
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            out.append(c)
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        if any(v):
            return None
        return out

    def add(self, other: "Subspace") -> "Subspace":
        """Sum of subspaces."""
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace.from_vectors(self.field, self.ambient_dim,
                                     list(self.rows) + list(other.rows))

    def meet(self, other: "Subspace") -> "Subspace":
        """Intersection of subspaces (canonical)."""
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.ambient_dim)
        if self.contains_space(other):
            return other
        if other.contains_space(self):
            return self
        # left kernel of stacked bases: x*A + y*B = 0  =>  x*A lies in both
        stacked = Matrix(self.field,
                         [list(r) for r in self.rows] + [list(r) for r in other.rows],
                         ncols=self.ambient_dim)
        lk = stacked.transpose().nullspace()
        na = len(self.rows)
        vecs = []
        zero = self.field.zero
        for k in lk.rows:
            v = [zero] * self.ambient_dim
            for i in range(na):
                c = k[i]
                if c:
                    row = self.rows[i]
                    v = [a + c * b for a, b in zip(v, row)]
            vecs.append(v)
        return Subspace.from_vectors(self.field, self.ambient_dim, vecs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and other.field is self.field
                and other.ambient_dim == self.ambient_dim
                and other.pivots == self.pivots and other.rows == self.rows)

    def __hash__(self) -> int:
        return hash((self.field.N, self.ambient_dim, self.pivots, self.rows))

    def __repr__(self) -> str:
        return (f"Subspace(dim {self.dim} of F^{self.ambient_dim} "
                f"over Q(zeta_{self.field.N}))")


# -- functional wrappers -----------------------------------------------------

def mat_rank(m: Matrix) -> int:
    return m.rank()


def mat_nullspace(m: Matrix) -> Subspace:
    return m.nullspace()


def subspace_meet(spaces: Sequence[Subspace]) -> Subspace:
    if not spaces:
        raise ValueError("meet of no subspaces")
    out = spaces[0]
    for s in spaces[1:]:
        out = out.meet(s)
    return out
