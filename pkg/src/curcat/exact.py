"""Exact scalars and dense exact linear algebra.

Three scalar kinds are used throughout the engine:

  - Rational: arbitrary-precision rationals (this is ``fractions.Fraction``,
    which already maintains the reduced-form invariants we need).
  - DeltaPoly: polynomials in the loop parameter delta with rational
    coefficients. Diagram coefficients live here generically.
  - CycloNumber: elements of Q[x]/(Phi_m(x)) for the m-th cyclotomic
    polynomial, used for character values of finite abelian groups.

Matrices are dense with one scalar kind per matrix. Row reduction, kernels and
affine solving work over the field kinds (Rational, CycloNumber) with
deterministic leftmost pivoting; DeltaPoly matrices refuse (specialize delta
first).
"""
from __future__ import annotations

import dataclasses
import functools
import re
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

Rational = Fraction


class UnsupportedRingError(TypeError):
    """Raised when a field operation is requested over a non-field scalar kind."""


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" into a Fraction.

    >>> parse_rational("-3/4")
    Fraction(-3, 4)
    """
    return Fraction(text.strip())


def format_rational(q: Fraction) -> str:
    """Render a Fraction as "p" or "p/q" (denominator 1 omitted)."""
    return str(q)


# ---------------------------------------------------------------------------
# polynomials in delta


class DeltaPoly:
    """A polynomial in the loop parameter, with Fraction coefficients.

    Stored as a sorted tuple of (degree, coefficient) pairs with no zero
    coefficients; instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[tuple[int, Fraction]] = ()):
        acc: dict[int, Fraction] = {}
        for deg, c in coeffs:
            if deg < 0:
                raise ValueError("negative degree")
            c = Fraction(c)
            if c:
                acc[deg] = acc.get(deg, Fraction(0)) + c
        object.__setattr__(
            self, "coeffs", tuple(sorted((d, c) for d, c in acc.items() if c))
        )

    def __setattr__(self, name, value):
        raise AttributeError("DeltaPoly is immutable")

    @classmethod
    def zero(cls) -> "DeltaPoly":
        return cls()

    @classmethod
    def one(cls) -> "DeltaPoly":
        return cls(((0, Fraction(1)),))

    @classmethod
    def constant(cls, q) -> "DeltaPoly":
        return cls(((0, Fraction(q)),))

    @classmethod
    def delta(cls, power: int = 1) -> "DeltaPoly":
        return cls(((power, Fraction(1)),))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return all(d == 0 for d, _ in self.coeffs)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self.coeffs[0][1] if self.coeffs else Fraction(0)

    @property
    def degree(self) -> int:
        """Degree of the leading term; the zero polynomial has degree -1."""
        return self.coeffs[-1][0] if self.coeffs else -1

    def _coerced(self, other) -> "DeltaPoly | None":
        if isinstance(other, DeltaPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return DeltaPoly.constant(other)
        return None

    def __add__(self, other) -> "DeltaPoly":
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return DeltaPoly(self.coeffs + o.coeffs)

    __radd__ = __add__

    def __neg__(self) -> "DeltaPoly":
        return DeltaPoly((d, -c) for d, c in self.coeffs)

    def __sub__(self, other) -> "DeltaPoly":
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "DeltaPoly":
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "DeltaPoly":
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return DeltaPoly(
            (d1 + d2, c1 * c2) for d1, c1 in self.coeffs for d2, c2 in o.coeffs
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "DeltaPoly":
        if n < 0:
            raise ValueError("negative power")
        acc = DeltaPoly.one()
        for _ in range(n):
            acc = acc * self
        return acc

    def evaluate(self, value) -> Fraction:
        value = Fraction(value)
        return sum((c * value**d for d, c in self.coeffs), Fraction(0))

    def __eq__(self, other) -> bool:
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash(("DeltaPoly", self.coeffs))

    def __str__(self) -> str:
        """Serialize as "c0 + c1*delta + c2*delta^2 + ..." (nonzero terms only).

        >>> str(DeltaPoly([(0, Fraction(1)), (1, Fraction(-1, 2))]))
        '1 - 1/2*delta'
        """
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for deg, c in self.coeffs:
            mag = abs(c)
            if deg == 0:
                body = str(mag)
            elif deg == 1:
                body = f"{mag}*delta"
            else:
                body = f"{mag}*delta^{deg}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"DeltaPoly('{self}')"

    _TERM_RE = re.compile(
        r"^\s*(?P<coef>[+-]?\d+(?:/\d+)?)"
        r"(?:\s*\*\s*delta(?:\^(?P<pow>\d+))?)?\s*$|"
        r"^\s*(?P<sign>[+-]?)\s*delta(?:\^(?P<pow2>\d+))?\s*$"
    )

    @classmethod
    def parse(cls, text: str) -> "DeltaPoly":
        """Parse the serialization produced by __str__ (also accepts bare "delta")."""
        text = text.strip()
        if not text:
            raise ValueError("empty polynomial string")
        # Split into signed terms while keeping the signs.
        chunks = re.split(r"(?<=[^eE*^+\-\s])\s*([+-])\s*", text)
        terms: list[str] = []
        current = chunks[0]
        for i in range(1, len(chunks), 2):
            terms.append(current)
            current = chunks[i] + chunks[i + 1]
        terms.append(current)
        pairs: list[tuple[int, Fraction]] = []
        for t in terms:
            m = cls._TERM_RE.match(t)
            if not m:
                raise ValueError(f"bad polynomial term: {t!r}")
            if m.group("coef") is not None:
                c = Fraction(m.group("coef"))
                p = int(m.group("pow")) if m.group("pow") else (1 if "delta" in t else 0)
            else:
                c = Fraction(-1 if m.group("sign") == "-" else 1)
                p = int(m.group("pow2")) if m.group("pow2") else 1
            pairs.append((p, c))
        return cls(pairs)


def specialize_delta(p: DeltaPoly, value) -> Fraction:
    """Evaluate a delta polynomial at a rational value of delta."""
    return p.evaluate(value)


# ---------------------------------------------------------------------------
# cyclotomic numbers


def _euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(
    n: Sequence[Fraction], d: Sequence[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    n = list(n)
    _poly_trim(n)
    d = list(d)
    _poly_trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(n) - len(d) + 1)
    r = n
    while r and len(r) >= len(d):
        f = r[-1] / d[-1]
        k = len(r) - len(d)
        q[k] = f
        for i, c in enumerate(d):
            r[k + i] -= f * c
        _poly_trim(r)
    return _poly_trim(q), r


def _poly_ext_gcd(
    a: Sequence[Fraction], b: Sequence[Fraction]
) -> tuple[list[Fraction], list[Fraction], list[Fraction]]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = _poly_trim(list(a)), _poly_trim(list(b))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([x - y for x, y in _zip_pad(s0, _poly_mul(q, s1))])
        t0, t1 = t1, _poly_trim([x - y for x, y in _zip_pad(t0, _poly_mul(q, t1))])
    if r0:
        lead = r0[-1]
        r0 = [c / lead for c in r0]
        s0 = [c / lead for c in s0]
        t0 = [c / lead for c in t0]
    return r0, s0, t0


def _zip_pad(a: Sequence[Fraction], b: Sequence[Fraction]):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else Fraction(0), b[i] if i < len(b) else Fraction(0))


@functools.lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple[Fraction, ...]:
    """Coefficients (ascending) of the m-th cyclotomic polynomial.

    Computed by exact division of x^m - 1 by the lower cyclotomic factors.
    """
    if m < 1:
        raise ValueError("conductor must be positive")
    num: list[Fraction] = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_coeffs(d)))
            if rem:
                raise AssertionError("cyclotomic division left a remainder")
    return tuple(num)


class CycloNumber:
    """An element of Q[x]/(Phi_m(x)), x mapping to a primitive m-th root of unity.

    The residue is stored with degree < phi(m); nonzero elements are invertible
    (extended gcd against the cyclotomic modulus, which is irreducible over Q).
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Iterable[Fraction] = ()):
        phi = _euler_phi(conductor)
        c = [Fraction(x) for x in coeffs]
        if len(c) >= phi + 1:
            _, c = _poly_divmod(c, list(cyclotomic_coeffs(conductor)))
        _poly_trim(c)
        if len(c) > phi:
            raise AssertionError("reduction failed")
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("CycloNumber is immutable")

    @classmethod
    def zero(cls, m: int) -> "CycloNumber":
        return cls(m)

    @classmethod
    def one(cls, m: int) -> "CycloNumber":
        return cls(m, (Fraction(1),))

    @classmethod
    def from_rational(cls, q, m: int) -> "CycloNumber":
        return cls(m, (Fraction(q),))

    @classmethod
    def zeta(cls, m: int, power: int = 1) -> "CycloNumber":
        """The primitive m-th root of unity, raised to the given power."""
        power %= m
        return cls(m, tuple(Fraction(0) for _ in range(power)) + (Fraction(1),))

    def _coerced(self, other) -> "CycloNumber | None":
        if isinstance(other, CycloNumber):
            if other.conductor != self.conductor:
                raise ValueError(
                    f"conductor mismatch: {self.conductor} vs {other.conductor}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNumber.from_rational(other, self.conductor)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return CycloNumber(self.conductor, (a + b for a, b in _zip_pad(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.conductor, (-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return CycloNumber(self.conductor, _poly_mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = _poly_ext_gcd(list(self.coeffs), list(cyclotomic_coeffs(self.conductor)))
        if len(g) != 1:
            raise AssertionError("modulus not coprime to nonzero residue")
        return CycloNumber(self.conductor, (c / g[0] for c in s))

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc = CycloNumber.one(self.conductor)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def as_rational(self) -> Fraction:
        """Convert to a Fraction; valid whenever the residue is constant.

        Conductors 1 and 2 always qualify (their cyclotomic fields are Q).
        """
        if not self.is_rational():
            raise ValueError(f"not a rational value: {self}")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.from_rational(other, self.conductor)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("CycloNumber", self.conductor, self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for deg, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            body = str(mag) if deg == 0 else (f"{mag}*z" if deg == 1 else f"{mag}*z^{deg}")
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self):
        return f"CycloNumber({self.conductor}, '{self}')"


# ---------------------------------------------------------------------------
# matrices


@dataclasses.dataclass(frozen=True)
class Ring:
    """Scalar-kind descriptor: sample zero/one, invertibility, field flag."""

    name: str
    zero: object
    one: object
    is_field: bool
    inv: Callable

    def __repr__(self):
        return f"Ring({self.name})"


RATIONAL_RING = Ring("rational", Fraction(0), Fraction(1), True, lambda x: 1 / x)
DELTA_RING = Ring("delta", DeltaPoly.zero(), DeltaPoly.one(), False, None)


@functools.lru_cache(maxsize=None)
def cyclo_ring(m: int) -> Ring:
    return Ring(
        f"cyclo({m})",
        CycloNumber.zero(m),
        CycloNumber.one(m),
        True,
        lambda x: x.inverse(),
    )


def ring_of(scalar) -> Ring:
    if isinstance(scalar, (Fraction, int)):
        return RATIONAL_RING
    if isinstance(scalar, DeltaPoly):
        return DELTA_RING
    if isinstance(scalar, CycloNumber):
        return cyclo_ring(scalar.conductor)
    raise TypeError(f"unknown scalar kind: {type(scalar).__name__}")


Scalar = Union[Fraction, DeltaPoly, CycloNumber]


class ExactMatrix:
    """A dense matrix with one exact scalar kind.

    Immutable. Rows are tuples; the ring descriptor travels with the matrix so
    empty shapes stay well-typed.
    """

    __slots__ = ("rows", "cols", "entries", "ring")

    def __init__(
        self,
        entries: Sequence[Sequence[Scalar]],
        ring: Ring | None = None,
        cols: int | None = None,
    ):
        rows = tuple(tuple(r) for r in entries)
        ncols = len(rows[0]) if rows else (cols or 0)
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        if ring is None:
            sample = next((x for r in rows for x in r), None)
            if sample is None:
                raise ValueError("cannot infer the scalar kind of an empty matrix")
            ring = ring_of(sample)
        if ring is RATIONAL_RING:
            rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: Ring = RATIONAL_RING) -> "ExactMatrix":
        return cls([[ring.zero] * cols for _ in range(rows)], ring, cols=cols)

    @classmethod
    def identity(cls, n: int, ring: Ring = RATIONAL_RING) -> "ExactMatrix":
        return cls(
            [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)],
            ring,
        )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], ring: Ring | None = None):
        return cls(rows, ring)

    @classmethod
    def column(cls, vec: Sequence[Scalar], ring: Ring | None = None) -> "ExactMatrix":
        return cls([[x] for x in vec], ring)

    # basic algebra ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.ring.name == other.ring.name
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring.name, self.entries))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._expect_same_shape(other)
        return ExactMatrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
            self.ring,
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._expect_same_shape(other)
        return ExactMatrix(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
            self.ring,
        )

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix(
            [[x * c for x in r] for r in self.entries], self.ring
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch: ({self.rows}x{self.cols}) @ ({other.rows}x{other.cols})"
            )
        zero = self.ring.zero
        ot = other.transpose()
        return ExactMatrix(
            [
                [
                    sum((a * b for a, b in zip(row, col) if a and b), zero)
                    for col in ot.entries
                ]
                for row in self.entries
            ],
            self.ring,
        )

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [
                [self.entries[i][j] for i in range(self.rows)]
                for j in range(self.cols)
            ],
            self.ring,
        )

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        """Kronecker product, leftmost factor most significant."""
        out = []
        for r1 in self.entries:
            for r2 in other.entries:
                out.append([a * b for a in r1 for b in r2])
        return ExactMatrix(out, self.ring)

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    def map_entries(self, fn: Callable, ring: Ring | None = None) -> "ExactMatrix":
        return ExactMatrix([[fn(x) for x in r] for r in self.entries], ring)

    def flatten(self) -> tuple:
        """Row-major vectorization."""
        return tuple(x for r in self.entries for x in r)

    def _expect_same_shape(self, other: "ExactMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, {self.ring.name})"

    def pretty(self) -> str:
        return "\n".join("[" + "  ".join(str(x) for x in r) + "]" for r in self.entries)


@dataclasses.dataclass(frozen=True)
class AffineSolutionSpace:
    """Solutions of A x = b: a particular solution plus a homogeneous basis.

    particular is None exactly when the system is inconsistent (then basis is
    empty). The affine dimension is the number of basis vectors.
    """

    particular: tuple | None
    basis: tuple[tuple, ...]

    @property
    def is_consistent(self) -> bool:
        return self.particular is not None

    @property
    def affine_dimension(self) -> int:
        if not self.is_consistent:
            raise ValueError("inconsistent system has no dimension")
        return len(self.basis)


def _require_field(m: ExactMatrix) -> None:
    if not m.ring.is_field:
        raise UnsupportedRingError(
            f"row reduction needs a field scalar kind, got {m.ring.name} "
            "(specialize delta first)"
        )


def rref(m: ExactMatrix) -> tuple[ExactMatrix, int, tuple[int, ...]]:
    """Reduced row-echelon form with deterministic leftmost pivoting.

    Returns (reduced matrix, rank, pivot column indices).
    """
    _require_field(m)
    rows = [list(r) for r in m.entries]
    nrows, ncols = m.rows, m.cols
    inv = m.ring.inv
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        scale = inv(rows[r][c])
        rows[r] = [x * scale for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return ExactMatrix(rows, m.ring), len(pivots), tuple(pivots)


def rank(m: ExactMatrix) -> int:
    return rref(m)[1]


def kernel_basis(m: ExactMatrix) -> list[tuple]:
    """Basis of the right null space, in reduced echelon convention.

    Each vector has entry one at its free column and the negated reduced
    entries at the pivot columns.
    """
    reduced, _, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    zero, one = m.ring.zero, m.ring.one
    basis = []
    for fc in free:
        vec = [zero] * m.cols
        vec[fc] = one
        for r_idx, pc in enumerate(pivots):
            vec[pc] = -reduced.entries[r_idx][fc]
        basis.append(tuple(vec))
    return basis


def solve_affine(a: ExactMatrix, b: Sequence) -> AffineSolutionSpace:
    """Solve A x = b exactly, returning the full affine solution space."""
    _require_field(a)
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {a.rows}")
    if a.rows == 0:
        # No constraints: everything solves.
        return AffineSolutionSpace(
            particular=tuple([a.ring.zero] * a.cols),
            basis=tuple(kernel_basis(ExactMatrix.zeros(1, a.cols, a.ring))),
        )
    aug = ExactMatrix(
        [list(row) + [rhs] for row, rhs in zip(a.entries, b)], a.ring
    )
    reduced, _, pivots = rref(aug)
    if a.cols in pivots:
        return AffineSolutionSpace(particular=None, basis=())
    zero = a.ring.zero
    particular = [zero] * a.cols
    for r_idx, pc in enumerate(pivots):
        particular[pc] = reduced.entries[r_idx][a.cols]
    return AffineSolutionSpace(
        particular=tuple(particular), basis=tuple(kernel_basis(a))
    )


def matrix_from_columns(columns: Sequence[Sequence[Scalar]], ring: Ring | None = None) -> ExactMatrix:
    """Assemble a matrix whose j-th column is columns[j]."""
    if not columns:
        raise ValueError("need at least one column")
    nrows = len(columns[0])
    return ExactMatrix(
        [[columns[j][i] for j in range(len(columns))] for i in range(nrows)], ring
    )
