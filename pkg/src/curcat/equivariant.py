"""Finite abelian symmetry over exact scalars, in plain vector spaces.

This is the concrete matrix backend for group-graded structures: finite
abelian groups and their characters, isotypic projectors, fixed-point
algebras of diagonal actions on a tensor product g (x) A, stabilizers of
maximal ideals, evaluation functionals, and the evaluation modules twisted
by a character grading. Scalars are rationals, or cyclotomic numbers whose
conductor is the group exponent when the group forces roots of unity.

Everything is validated eagerly: algebras for associativity, Lie algebras
for antisymmetry and the Jacobi identity, group actions for generator
orders and automorphism behaviour, ideals for closure and codimension one.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
from fractions import Fraction

from curcat.exact import (
    RATIONAL_RING,
    CycloNumber,
    ExactMatrix,
    Ring,
    UnsupportedRingError,
    cyclo_ring,
    matrix_from_columns,
    rank,
    rref,
    solve_affine,
)
from curcat.lie import AxiomError, report_passed

__all__ = [
    "FiniteAbelianGroup",
    "Character",
    "FDAlgebra",
    "FDLieAlgebra",
    "GroupActionOnSpace",
    "MaxIdeal",
    "EquivariantDataError",
    "all_characters",
    "characters_trivial_on",
    "fd_algebra",
    "fd_lie_algebra",
    "truncated_polynomial_algebra",
    "polynomial_quotient_algebra",
    "sl2",
    "group_action",
    "algebra_action",
    "lie_action",
    "isotypic_projector",
    "isotypic_basis",
    "isotypic_dimensions",
    "GradedPiece",
    "FixedPointAlgebra",
    "equivariant_map_algebra",
    "StabilizerResult",
    "ideal_stabilizer",
    "max_ideal",
    "twisted_evaluation_zero_check",
    "fixed_subalgebra_basis",
    "EvaluationModuleResult",
    "equivariant_evaluation_module",
    "sl2_z2_truncated_setup",
    "scalar_to_json",
    "scalar_from_json",
    "setup_from_json_dict",
]


class EquivariantDataError(ValueError):
    """Input data violates a structural precondition."""


# ---------------------------------------------------------------------------
# groups and characters


@dataclasses.dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups, given by one modulus per factor.

    >>> FiniteAbelianGroup((2, 4)).order
    8
    >>> FiniteAbelianGroup(()).exponent
    1
    """

    factors: tuple[int, ...]

    def __post_init__(self):
        for f in self.factors:
            if f < 2:
                raise EquivariantDataError("every cyclic factor needs modulus >= 2")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.factors) if self.factors else 1

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(f) for f in self.factors)))

    def add(self, g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((a + b) % f for a, b, f in zip(g, h, self.factors))

    def neg(self, g: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((-a) % f for a, f in zip(g, self.factors))

    def element_order(self, g: tuple[int, ...]) -> int:
        return math.lcm(*(f // math.gcd(a, f) for a, f in zip(g, self.factors))) if g else 1


@dataclasses.dataclass(frozen=True)
class Character:
    """A homomorphism to roots of unity, one exponent residue per factor.

    Values are rational (+1/-1) when the group exponent divides 2 and live
    in the cyclotomic field of the exponent otherwise.
    """

    group: FiniteAbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != len(self.group.factors):
            raise EquivariantDataError("one exponent per cyclic factor")
        object.__setattr__(
            self,
            "exponents",
            tuple(x % f for x, f in zip(self.exponents, self.group.factors)),
        )

    def value(self, g: tuple[int, ...]):
        e = self.group.exponent
        total = sum(
            a * x * (e // f)
            for a, x, f in zip(g, self.exponents, self.group.factors)
        ) % e
        if e <= 2:
            return Fraction(-1) ** total
        return CycloNumber.zeta(e, total)

    def inverse_value(self, g: tuple[int, ...]):
        return self.value(self.group.neg(g))

    def __mul__(self, other: "Character") -> "Character":
        if other.group != self.group:
            raise EquivariantDataError("characters of different groups")
        return Character(
            self.group,
            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
        )

    def inverse(self) -> "Character":
        return Character(self.group, tuple(-a for a in self.exponents))

    @property
    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.exponents)

    def is_trivial_on(self, elements) -> bool:
        one = Fraction(1) if self.group.exponent <= 2 else CycloNumber.one(
            self.group.exponent
        )
        return all(self.value(g) == one for g in elements)


def all_characters(group: FiniteAbelianGroup) -> list[Character]:
    """Every character, in lexicographic exponent order (trivial first)."""
    return [
        Character(group, exps)
        for exps in itertools.product(*(range(f) for f in group.factors))
    ]


def characters_trivial_on(group: FiniteAbelianGroup, elements) -> list[Character]:
    return [chi for chi in all_characters(group) if chi.is_trivial_on(elements)]


# ---------------------------------------------------------------------------
# scalar promotion


def _ring_of_scalars(values) -> Ring:
    ring = RATIONAL_RING
    for v in values:
        if isinstance(v, CycloNumber):
            other = cyclo_ring(v.conductor)
            if ring is RATIONAL_RING:
                ring = other
            elif ring != other:
                raise UnsupportedRingError(
                    f"mixed conductors: {ring.name} vs {other.name}"
                )
    return ring


def _join_rings(*rings: Ring) -> Ring:
    result = RATIONAL_RING
    for ring in rings:
        if ring is RATIONAL_RING:
            continue
        if result is RATIONAL_RING:
            result = ring
        elif result != ring:
            raise UnsupportedRingError(f"mixed scalars: {result.name} vs {ring.name}")
    return result


def _character_ring(group: FiniteAbelianGroup) -> Ring:
    return RATIONAL_RING if group.exponent <= 2 else cyclo_ring(group.exponent)


def _promote_scalar(x, ring: Ring):
    if ring is RATIONAL_RING:
        if isinstance(x, CycloNumber):
            return x.as_rational()
        return Fraction(x)
    if isinstance(x, CycloNumber):
        if cyclo_ring(x.conductor) != ring:
            raise UnsupportedRingError(
                f"cannot move {x!r} into {ring.name}"
            )
        return x
    return ring.one * Fraction(x)


def _promote_matrix(m: ExactMatrix, ring: Ring) -> ExactMatrix:
    if m.ring == ring:
        return m
    return m.map_entries(lambda x: _promote_scalar(x, ring), ring)


def _column_space_basis(m: ExactMatrix) -> list[tuple]:
    """Canonical spanning vectors for the column space (echelon rows of the
    transpose)."""
    reduced, rnk, _ = rref(m.transpose())
    return [reduced.entries[i] for i in range(rnk)]


def _vectors_matrix(vectors, dim: int, ring: Ring) -> ExactMatrix:
    if not vectors:
        return ExactMatrix.zeros(dim, 0, ring)
    return matrix_from_columns([list(v) for v in vectors], ring)


def _in_span(vectors_mat: ExactMatrix, target) -> bool:
    return solve_affine(vectors_mat, list(target)).is_consistent


def _kron_vector(x, a) -> tuple:
    return tuple(xi * aj for xi in x for aj in a)


# ---------------------------------------------------------------------------
# finite-dimensional algebras


@dataclasses.dataclass(frozen=True)
class FDAlgebra:
    """Structure constants for a product on a based vector space.

    structure[i][j] holds the coordinates of (basis i) * (basis j).
    """

    dim: int
    structure: tuple
    commutative: bool
    unit: tuple | None
    ring: Ring

    def multiply(self, u, v) -> tuple:
        out = [self.ring.zero] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, c in enumerate(self.structure[i][j]):
                    out[k] = out[k] + ui * vj * c
        return tuple(out)


def fd_algebra(structure, commutative: bool = True, unit=None) -> FDAlgebra:
    """Validate and freeze an associative product table."""
    dim = len(structure)
    flat = [c for row in structure for vec in row for c in vec]
    ring = _ring_of_scalars(flat)
    frozen = tuple(
        tuple(tuple(_promote_scalar(c, ring) for c in vec) for vec in row)
        for row in structure
    )
    if any(len(row) != dim or any(len(vec) != dim for vec in row) for row in frozen):
        raise EquivariantDataError("structure constants must be dim x dim x dim")
    alg = FDAlgebra(
        dim,
        frozen,
        commutative,
        tuple(_promote_scalar(c, ring) for c in unit) if unit is not None else None,
        ring,
    )
    basis = [
        tuple(ring.one if t == i else ring.zero for t in range(dim))
        for i in range(dim)
    ]
    if commutative:
        for i in range(dim):
            for j in range(i):
                if frozen[i][j] != frozen[j][i]:
                    raise AxiomError(f"product table is not commutative at ({i},{j})")
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                left = alg.multiply(alg.multiply(basis[i], basis[j]), basis[k])
                right = alg.multiply(basis[i], alg.multiply(basis[j], basis[k]))
                if left != right:
                    raise AxiomError(f"product is not associative at ({i},{j},{k})")
    if alg.unit is not None:
        for i in range(dim):
            if alg.multiply(alg.unit, basis[i]) != basis[i] or alg.multiply(
                basis[i], alg.unit
            ) != basis[i]:
                raise AxiomError(f"claimed unit fails on basis vector {i}")
    return alg


def truncated_polynomial_algebra(n: int, conductor: int = 1) -> FDAlgebra:
    """One variable modulo its n-th power, basis 1, t, ..., t^(n-1).

    >>> A = truncated_polynomial_algebra(4)
    >>> A.multiply((0, 1, 0, 0), (0, 0, 1, 0))[3]
    Fraction(1, 1)
    """
    ring = RATIONAL_RING if conductor <= 2 else cyclo_ring(conductor)
    structure = [
        [
            tuple(
                ring.one if (k == i + j and i + j < n) else ring.zero
                for k in range(n)
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    unit = tuple(ring.one if k == 0 else ring.zero for k in range(n))
    return fd_algebra(structure, commutative=True, unit=unit)


def polynomial_quotient_algebra(modulus) -> FDAlgebra:
    """One variable modulo a monic polynomial, given by its lower coefficients.

    modulus lists c_0, ..., c_(n-1) with t^n = -(c_0 + c_1 t + ...).

    >>> A = polynomial_quotient_algebra([-1, 0])  # square root of one
    >>> A.multiply((0, 1), (0, 1))
    (Fraction(1, 1), Fraction(0, 1))
    """
    low = [Fraction(c) for c in modulus]
    n = len(low)
    if n == 0:
        raise EquivariantDataError("the modulus needs positive degree")
    reduction = tuple(-c for c in low)

    def reduce_power(k: int) -> list[Fraction]:
        vec = [Fraction(0)] * n
        if k < n:
            vec[k] = Fraction(1)
            return vec
        prev = reduce_power(k - 1)
        shifted = [Fraction(0)] + prev[: n - 1]
        for t, c in enumerate(reduction):
            shifted[t] += prev[n - 1] * c
        return shifted

    structure = [
        [tuple(reduce_power(i + j)) for j in range(n)] for i in range(n)
    ]
    unit = tuple(Fraction(1 if k == 0 else 0) for k in range(n))
    return fd_algebra(structure, commutative=True, unit=unit)


@dataclasses.dataclass(frozen=True)
class FDLieAlgebra:
    """Bracket structure constants on a based vector space."""

    dim: int
    structure: tuple
    ring: Ring

    def bracket(self, u, v) -> tuple:
        out = [self.ring.zero] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, c in enumerate(self.structure[i][j]):
                    out[k] = out[k] + ui * vj * c
        return tuple(out)


def fd_lie_algebra(structure) -> FDLieAlgebra:
    """Validate antisymmetry and the Jacobi identity on basis triples."""
    dim = len(structure)
    flat = [c for row in structure for vec in row for c in vec]
    ring = _ring_of_scalars(flat)
    frozen = tuple(
        tuple(tuple(_promote_scalar(c, ring) for c in vec) for vec in row)
        for row in structure
    )
    lie = FDLieAlgebra(dim, frozen, ring)
    basis = [
        tuple(ring.one if t == i else ring.zero for t in range(dim))
        for i in range(dim)
    ]
    zero = tuple(ring.zero for _ in range(dim))

    def add(u, v):
        return tuple(a + b for a, b in zip(u, v))

    for i in range(dim):
        if lie.bracket(basis[i], basis[i]) != zero:
            raise AxiomError(f"bracket of basis vector {i} with itself is nonzero")
        for j in range(dim):
            plus = add(lie.bracket(basis[i], basis[j]), lie.bracket(basis[j], basis[i]))
            if plus != zero:
                raise AxiomError(f"bracket is not antisymmetric at ({i},{j})")
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                tot = add(
                    add(
                        lie.bracket(basis[i], lie.bracket(basis[j], basis[k])),
                        lie.bracket(basis[j], lie.bracket(basis[k], basis[i])),
                    ),
                    lie.bracket(basis[k], lie.bracket(basis[i], basis[j])),
                )
                if tot != zero:
                    raise AxiomError(f"Jacobi identity fails at ({i},{j},{k})")
    return lie


def sl2() -> FDLieAlgebra:
    """Traceless two-by-two matrices with basis e, h, f."""
    z, two = Fraction(0), Fraction(2)
    o = Fraction(1)
    rows = [[[z, z, z] for _ in range(3)] for _ in range(3)]
    rows[0][1] = [-two, z, z]  # [e, h] = -2e
    rows[1][0] = [two, z, z]
    rows[0][2] = [z, o, z]  # [e, f] = h
    rows[2][0] = [z, -o, z]
    rows[1][2] = [z, z, -two]  # [h, f] = -2f
    rows[2][1] = [z, z, two]
    return fd_lie_algebra(rows)


# ---------------------------------------------------------------------------
# group actions


@dataclasses.dataclass(frozen=True)
class GroupActionOnSpace:
    """One invertible matrix per cyclic factor, acting on a based space."""

    group: FiniteAbelianGroup
    dim: int
    generators: tuple[ExactMatrix, ...]
    ring: Ring

    def matrix_of(self, g: tuple[int, ...]) -> ExactMatrix:
        acc = ExactMatrix.identity(self.dim, self.ring)
        for gen, power in zip(self.generators, g):
            for _ in range(power):
                acc = gen @ acc
        return acc

    def transform(self, g, v) -> tuple:
        m = self.matrix_of(g)
        return tuple(
            sum((m.entries[i][j] * vj for j, vj in enumerate(v)), self.ring.zero)
            for i in range(self.dim)
        )


def group_action(
    group: FiniteAbelianGroup, generators, dim: int | None = None
) -> GroupActionOnSpace:
    """Validate generator orders and commutation, then freeze the action.

    dim names the space dimension when there are no generators (trivial
    group); with generators present it is read off the matrices.
    """
    gens = list(generators)
    if len(gens) != len(group.factors):
        raise EquivariantDataError("one generator matrix per cyclic factor")
    ring = _join_rings(*(m.ring for m in gens)) if gens else RATIONAL_RING
    ring = _join_rings(ring, _character_ring(group))
    gens = [_promote_matrix(m, ring) for m in gens]
    dim = gens[0].rows if gens else (dim or 0)
    for m, f in zip(gens, group.factors):
        if m.rows != dim or m.cols != dim:
            raise EquivariantDataError("generator matrices must be square, same size")
        acc = ExactMatrix.identity(dim, ring)
        for _ in range(f):
            acc = m @ acc
        if acc != ExactMatrix.identity(dim, ring):
            raise EquivariantDataError(
                f"generator does not have order {f}"
            )
    for a, b in itertools.combinations(gens, 2):
        if a @ b != b @ a:
            raise EquivariantDataError("generator matrices must commute")
    return GroupActionOnSpace(group, dim, tuple(gens), ring)


def algebra_action(
    group: FiniteAbelianGroup, algebra: FDAlgebra, generators
) -> GroupActionOnSpace:
    """A valid action whose generators also respect the product."""
    action = group_action(group, generators, dim=algebra.dim)
    if action.dim != algebra.dim:
        raise EquivariantDataError("action dimension differs from the algebra")
    ring = _join_rings(action.ring, algebra.ring)
    action = GroupActionOnSpace(
        group, action.dim, tuple(_promote_matrix(m, ring) for m in action.generators), ring
    )
    basis = _standard_basis(algebra.dim, ring)
    for gen_index in range(len(action.generators)):
        g = tuple(
            1 if t == gen_index else 0 for t in range(len(group.factors))
        )
        for i in range(algebra.dim):
            for j in range(algebra.dim):
                prod = tuple(_promote_scalar(c, ring) for c in algebra.multiply(basis[i], basis[j]))
                left = action.transform(g, prod)
                right = algebra.multiply(
                    action.transform(g, basis[i]),
                    action.transform(g, basis[j]),
                )
                right = tuple(_promote_scalar(c, ring) for c in right)
                if left != right:
                    raise EquivariantDataError(
                        f"generator {gen_index} does not respect the product at ({i},{j})"
                    )
    return action


def lie_action(
    group: FiniteAbelianGroup, lie: FDLieAlgebra, generators
) -> GroupActionOnSpace:
    """A valid action whose generators also respect the bracket."""
    action = group_action(group, generators, dim=lie.dim)
    if action.dim != lie.dim:
        raise EquivariantDataError("action dimension differs from the Lie algebra")
    ring = _join_rings(action.ring, lie.ring)
    action = GroupActionOnSpace(
        group, action.dim, tuple(_promote_matrix(m, ring) for m in action.generators), ring
    )
    basis = _standard_basis(lie.dim, ring)
    for gen_index in range(len(action.generators)):
        g = tuple(1 if t == gen_index else 0 for t in range(len(group.factors)))
        for i in range(lie.dim):
            for j in range(lie.dim):
                br = tuple(_promote_scalar(c, ring) for c in lie.bracket(basis[i], basis[j]))
                left = action.transform(g, br)
                right = lie.bracket(
                    action.transform(g, basis[i]),
                    action.transform(g, basis[j]),
                )
                right = tuple(_promote_scalar(c, ring) for c in right)
                if left != right:
                    raise EquivariantDataError(
                        f"generator {gen_index} does not respect the bracket at ({i},{j})"
                    )
    return action


def _standard_basis(dim: int, ring: Ring) -> list[tuple]:
    return [
        tuple(ring.one if t == i else ring.zero for t in range(dim))
        for i in range(dim)
    ]


# ---------------------------------------------------------------------------
# isotypic decomposition


def isotypic_projector(action: GroupActionOnSpace, chi: Character) -> ExactMatrix:
    """Average the action against the inverse character values."""
    group = action.group
    ring = _join_rings(action.ring, _character_ring(group))
    acc = ExactMatrix.zeros(action.dim, action.dim, ring)
    for g in group.elements():
        weight = _promote_scalar(chi.inverse_value(g), ring)
        acc = acc + _promote_matrix(action.matrix_of(g), ring).scale(weight)
    return acc.scale(Fraction(1, group.order))


def isotypic_basis(action: GroupActionOnSpace, chi: Character) -> list[tuple]:
    """Canonical basis of the piece the projector for chi cuts out."""
    return _column_space_basis(isotypic_projector(action, chi))


def isotypic_dimensions(action: GroupActionOnSpace) -> list[int]:
    """Projector ranks in character order (trivial character first)."""
    return [rank(isotypic_projector(action, chi)) for chi in all_characters(action.group)]


# ---------------------------------------------------------------------------
# fixed-point algebra of the diagonal action


@dataclasses.dataclass(frozen=True)
class GradedPiece:
    character: Character
    lie_basis: tuple
    algebra_basis: tuple


@dataclasses.dataclass(frozen=True)
class FixedPointAlgebra:
    """The diagonal fixed points of g (x) A, graded piece by character.

    basis lists simple tensors (character index, lie vector, algebra vector);
    bracket_table[i][j] expands the bracket of basis elements i and j over
    the same basis.
    """

    lie: FDLieAlgebra
    algebra: FDAlgebra
    group: FiniteAbelianGroup
    lie_act: GroupActionOnSpace
    algebra_act: GroupActionOnSpace
    pieces: tuple[GradedPiece, ...]
    basis: tuple
    bracket_table: tuple | None
    bracket_closed: bool
    fixed_point_rank: int
    ring: Ring

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def basis_vectors(self) -> list[tuple]:
        return [_kron_vector(x, a) for _, x, a in self.basis]

    def bracket_of_simple_tensors(self, x, a, y, b) -> tuple:
        return _kron_vector(self.lie.bracket(x, y), self.algebra.multiply(a, b))


def equivariant_map_algebra(
    lie: FDLieAlgebra,
    algebra: FDAlgebra,
    lie_act: GroupActionOnSpace,
    algebra_act: GroupActionOnSpace,
) -> FixedPointAlgebra:
    """Decompose the diagonal fixed points of g (x) A by character.

    Each graded piece pairs the character's slice of g with the inverse
    character's slice of A; the bracket of two basis tensors re-expands in
    the assembled basis, and the total dimension is cross-checked against
    the rank of the diagonal fixed-point projector.
    """
    if lie_act.group != algebra_act.group:
        raise EquivariantDataError("the two actions use different groups")
    group = lie_act.group
    ring = _join_rings(lie_act.ring, algebra_act.ring, _character_ring(group))
    pieces = []
    basis = []
    for chi in all_characters(group):
        lie_part = [
            tuple(_promote_scalar(c, ring) for c in v)
            for v in isotypic_basis(lie_act, chi)
        ]
        alg_part = [
            tuple(_promote_scalar(c, ring) for c in v)
            for v in isotypic_basis(algebra_act, chi.inverse())
        ]
        pieces.append(GradedPiece(chi, tuple(lie_part), tuple(alg_part)))
        for x in lie_part:
            for a in alg_part:
                basis.append((len(pieces) - 1, x, a))
    diag_gens = [
        _promote_matrix(gl, ring).kron(_promote_matrix(ga, ring))
        for gl, ga in zip(lie_act.generators, algebra_act.generators)
    ]
    trivial = Character(group, (0,) * len(group.factors))
    if group.factors:
        diag = group_action(group, diag_gens)
        fixed_rank = rank(isotypic_projector(diag, trivial))
    else:
        fixed_rank = lie.dim * algebra.dim
    span = _vectors_matrix([_kron_vector(x, a) for _, x, a in basis], lie.dim * algebra.dim, ring)
    table = []
    closed = True
    lie_p = FDLieAlgebra(
        lie.dim,
        tuple(
            tuple(tuple(_promote_scalar(c, ring) for c in vec) for vec in row)
            for row in lie.structure
        ),
        ring,
    )
    alg_p = FDAlgebra(
        algebra.dim,
        tuple(
            tuple(tuple(_promote_scalar(c, ring) for c in vec) for vec in row)
            for row in algebra.structure
        ),
        algebra.commutative,
        algebra.unit,
        ring,
    )
    for _, x, a in basis:
        row = []
        for _, y, b in basis:
            target = _kron_vector(lie_p.bracket(x, y), alg_p.multiply(a, b))
            sol = solve_affine(span, list(target))
            if not sol.is_consistent:
                closed = False
                row.append(None)
            else:
                row.append(tuple(sol.particular))
        table.append(tuple(row))
    return FixedPointAlgebra(
        lie_p,
        alg_p,
        group,
        lie_act,
        algebra_act,
        tuple(pieces),
        tuple(basis),
        tuple(table) if closed else None,
        closed,
        fixed_rank,
        ring,
    )


# ---------------------------------------------------------------------------
# maximal ideals and evaluation


@dataclasses.dataclass(frozen=True)
class MaxIdeal:
    """A codimension-one ideal with its evaluation functional.

    ev_row gives the unique multiplicative functional killing the ideal and
    sending the unit to one.
    """

    algebra: FDAlgebra
    basis: tuple
    ev_row: tuple

    def ev_value(self, vec):
        return sum(
            (c * v for c, v in zip(self.ev_row, vec)), self.algebra.ring.zero
        )


def max_ideal(algebra: FDAlgebra, basis) -> MaxIdeal:
    """Validate ideal closure and codimension one, and build evaluation."""
    if algebra.unit is None:
        raise EquivariantDataError("evaluation needs a unital algebra")
    ring = algebra.ring
    vecs = [tuple(_promote_scalar(c, ring) for c in v) for v in basis]
    if len(vecs) != algebra.dim - 1:
        raise EquivariantDataError("a maximal ideal here has dimension dim - 1")
    span = _vectors_matrix(vecs, algebra.dim, ring)
    if rank(span) != algebra.dim - 1:
        raise EquivariantDataError("ideal basis vectors are linearly dependent")
    std = _standard_basis(algebra.dim, ring)
    for i in range(algebra.dim):
        for v in vecs:
            if not _in_span(span, algebra.multiply(std[i], v)):
                raise EquivariantDataError(
                    f"not an ideal: basis vector {i} times a generator leaves the span"
                )
    if _in_span(span, algebra.unit):
        raise EquivariantDataError("the unit lies in the ideal")
    # decompose each standard vector over (ideal basis, unit); the unit
    # coefficient is the evaluation
    full = _vectors_matrix(vecs + [algebra.unit], algebra.dim, ring)
    ev = []
    for i in range(algebra.dim):
        sol = solve_affine(full, list(std[i]))
        ev.append(sol.particular[-1])
    m = MaxIdeal(algebra, tuple(vecs), tuple(ev))
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            prod = m.ev_value(algebra.multiply(std[i], std[j]))
            if prod != m.ev_value(std[i]) * m.ev_value(std[j]):
                raise EquivariantDataError(
                    f"evaluation is not multiplicative at ({i},{j})"
                )
    return m


@dataclasses.dataclass(frozen=True)
class StabilizerResult:
    """The subgroup preserving an ideal, listed element by element."""

    elements: tuple
    order: int
    exponent: int
    is_full: bool
    is_trivial: bool


def ideal_stabilizer(action: GroupActionOnSpace, m: MaxIdeal) -> StabilizerResult:
    """All group elements whose matrices map the ideal span onto itself."""
    ring = _join_rings(action.ring, m.algebra.ring)
    promoted = GroupActionOnSpace(
        action.group,
        action.dim,
        tuple(_promote_matrix(x, ring) for x in action.generators),
        ring,
    )
    vecs = [tuple(_promote_scalar(c, ring) for c in v) for v in m.basis]
    span = _vectors_matrix(vecs, m.algebra.dim, ring)
    kept = []
    for g in action.group.elements():
        moved = [promoted.transform(g, v) for v in vecs]
        if all(_in_span(span, w) for w in moved):
            kept.append(g)
    exponent = math.lcm(*(action.group.element_order(g) for g in kept)) if kept else 1
    return StabilizerResult(
        tuple(kept),
        len(kept),
        exponent,
        len(kept) == action.group.order,
        len(kept) == 1,
    )


def twisted_evaluation_zero_check(
    algebra: FDAlgebra,
    action: GroupActionOnSpace,
    m: MaxIdeal,
    f: Character,
) -> list[dict]:
    """Evaluation must vanish on the slice of a character that moves the ideal.

    Preconditions: f restricted to the ideal's stabilizer is nontrivial.
    Each report entry records the evaluation of one slice basis vector.
    """
    stab = ideal_stabilizer(action, m)
    if f.is_trivial_on(stab.elements):
        raise EquivariantDataError(
            "the character is trivial on the ideal stabilizer; nothing to check"
        )
    report = []
    for idx, v in enumerate(isotypic_basis(action, f)):
        value = m.ev_value(tuple(_promote_scalar(c, m.algebra.ring) for c in v))
        report.append(
            {
                "identity": f"evaluation-vanishes[{idx}]",
                "status": "pass" if not value else "fail",
                "value": str(value),
            }
        )
    if not report:
        report.append(
            {
                "identity": "evaluation-vanishes[empty-slice]",
                "status": "pass",
                "value": "0",
            }
        )
    return report


# ---------------------------------------------------------------------------
# evaluation modules twisted by the grading


def fixed_subalgebra_basis(
    lie_act: GroupActionOnSpace, stabilizer_elements
) -> list[tuple]:
    """Basis of the part of the Lie algebra fixed by the given elements,
    assembled from the slices of characters trivial on them."""
    chis = characters_trivial_on(lie_act.group, stabilizer_elements)
    basis: list[tuple] = []
    for chi in chis:
        basis.extend(tuple(v) for v in isotypic_basis(lie_act, chi))
    return basis


@dataclasses.dataclass(frozen=True)
class EvaluationModuleResult:
    """Action matrices for the fixed-point algebra through evaluation.

    matrices aligns with the fixed-point algebra's basis; compatibility
    holds when every bracket of basis tensors acts as the matrix commutator.
    """

    fixed_algebra: FixedPointAlgebra
    ideal: MaxIdeal
    module_dim: int
    subalgebra_basis: tuple
    rho: tuple[ExactMatrix, ...]
    matrices: tuple[ExactMatrix, ...]
    report: tuple

    @property
    def passed(self) -> bool:
        return report_passed(list(self.report))


def _express_in(vectors, dim: int, ring: Ring, target):
    span = _vectors_matrix(vectors, dim, ring)
    sol = solve_affine(span, [(c) for c in target])
    if not sol.is_consistent:
        raise EquivariantDataError("vector leaves the fixed subalgebra")
    return sol.particular


def equivariant_evaluation_module(
    ema: FixedPointAlgebra,
    m: MaxIdeal,
    rho,
    validate_module: bool = True,
) -> EvaluationModuleResult:
    """Act by evaluating the algebra slot at the ideal.

    A basis tensor whose character is trivial on the ideal's stabilizer acts
    by the evaluated scalar times the supplied matrix action of its Lie
    part; every other basis tensor acts by zero. rho lists one matrix per
    vector of the stabilizer-fixed subalgebra basis (see
    fixed_subalgebra_basis). The compatibility identity is checked on all
    pairs of basis tensors.
    """
    ring = ema.ring
    stab = ideal_stabilizer(ema.algebra_act, m)
    allowed = {
        chi.exponents for chi in characters_trivial_on(ema.group, stab.elements)
    }
    sub_basis = [
        tuple(_promote_scalar(c, ring) for c in v)
        for v in fixed_subalgebra_basis(ema.lie_act, stab.elements)
    ]
    rho = tuple(_promote_matrix(mat, ring) for mat in rho)
    if len(rho) != len(sub_basis):
        raise EquivariantDataError(
            f"need {len(sub_basis)} action matrices, got {len(rho)}"
        )
    if rho:
        module_dim = rho[0].rows
        if any(mat.rows != module_dim or mat.cols != module_dim for mat in rho):
            raise EquivariantDataError("action matrices must be square, same size")
    else:
        module_dim = 0

    def rho_of(x) -> ExactMatrix:
        coords = _express_in(sub_basis, ema.lie.dim, ring, x)
        acc = ExactMatrix.zeros(module_dim, module_dim, ring)
        for c, mat in zip(coords, rho):
            if c:
                acc = acc + mat.scale(c)
        return acc

    if validate_module:
        for i, x in enumerate(sub_basis):
            for j, y in enumerate(sub_basis):
                br = ema.lie.bracket(x, y)
                lhs = rho_of(br)
                rhs = rho[i] @ rho[j] - rho[j] @ rho[i]
                if lhs != rhs:
                    raise AxiomError(
                        f"the supplied action is not a module over the fixed "
                        f"subalgebra: bracket of basis vectors {i} and {j}"
                    )

    def action_of(piece_char: Character, x, a) -> ExactMatrix:
        if piece_char.exponents not in allowed:
            return ExactMatrix.zeros(module_dim, module_dim, ring)
        scalar = m.ev_value(a)
        if not scalar:
            return ExactMatrix.zeros(module_dim, module_dim, ring)
        return rho_of(x).scale(scalar)

    matrices = []
    for piece_idx, x, a in ema.basis:
        matrices.append(action_of(ema.pieces[piece_idx].character, x, a))
    report = []
    for p, (pi, x, a) in enumerate(ema.basis):
        for q, (qi, y, b) in enumerate(ema.basis):
            chi_p = ema.pieces[pi].character
            chi_q = ema.pieces[qi].character
            lhs = matrices[p] @ matrices[q] - matrices[q] @ matrices[p]
            rhs = action_of(
                chi_p * chi_q, ema.lie.bracket(x, y), ema.algebra.multiply(a, b)
            )
            name = f"COMPAT({p},{q})"
            if lhs == rhs:
                report.append({"identity": name, "status": "pass"})
            else:
                report.append(
                    {
                        "identity": name,
                        "status": "fail",
                        "residual": (lhs - rhs).pretty(),
                    }
                )
    return EvaluationModuleResult(
        ema,
        m,
        module_dim,
        tuple(sub_basis),
        rho,
        tuple(matrices),
        tuple(report),
    )


# ---------------------------------------------------------------------------
# the bundled worked example


def sl2_z2_truncated_setup() -> dict:
    """Traceless 2x2 matrices with the flip swapping the triangles, tensored
    with one variable truncated at degree four and negated; everything the
    demos, the verifier, and the tests need, in one dictionary."""
    group = FiniteAbelianGroup((2,))
    lie = sl2()
    flip = ExactMatrix.from_rows(
        [
            [Fraction(0), Fraction(0), Fraction(1)],
            [Fraction(0), Fraction(-1), Fraction(0)],
            [Fraction(1), Fraction(0), Fraction(0)],
        ]
    )
    l_act = lie_action(group, lie, [flip])
    algebra = truncated_polynomial_algebra(4)
    negate = ExactMatrix.from_rows(
        [
            [Fraction(1 if i == j else 0) * (Fraction(-1) ** j) for j in range(4)]
            for i in range(4)
        ]
    )
    a_act = algebra_action(group, algebra, [negate])
    ideal = max_ideal(
        algebra,
        [
            (Fraction(0), Fraction(1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(0), Fraction(1)),
        ],
    )
    ema = equivariant_map_algebra(lie, algebra, l_act, a_act)
    stab = ideal_stabilizer(a_act, ideal)
    sub = fixed_subalgebra_basis(l_act, stab.elements)
    rho = [ExactMatrix.from_rows([[Fraction(1)]]) for _ in sub]
    module = equivariant_evaluation_module(ema, ideal, rho)
    return {
        "group": group,
        "lie": lie,
        "lie_act": l_act,
        "algebra": algebra,
        "algebra_act": a_act,
        "ideal": ideal,
        "fixed_algebra": ema,
        "stabilizer": stab,
        "module": module,
    }


# ---------------------------------------------------------------------------
# JSON descriptions


def scalar_to_json(x):
    if isinstance(x, CycloNumber):
        return {"conductor": x.conductor, "coeffs": [str(c) for c in x.coeffs]}
    return str(Fraction(x))


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return CycloNumber(
            int(obj["conductor"]), [Fraction(c) for c in obj["coeffs"]]
        )
    return Fraction(obj)


def _matrix_from_json(rows) -> ExactMatrix:
    entries = [[scalar_from_json(c) for c in row] for row in rows]
    ring = _ring_of_scalars([c for row in entries for c in row])
    return ExactMatrix(
        [[_promote_scalar(c, ring) for c in row] for row in entries], ring
    )


def setup_from_json_dict(obj: dict) -> dict:
    """Assemble validated objects from a description file.

    Keys: group (factors), algebra (structure, unit), optional lie
    (structure), actions (algebra: matrices, lie: matrices), optional ideal
    (basis), optional module (matrices).
    """
    group = FiniteAbelianGroup(tuple(obj["group"]["factors"]))
    alg_desc = obj["algebra"]
    algebra = fd_algebra(
        [
            [[scalar_from_json(c) for c in vec] for vec in row]
            for row in alg_desc["structure"]
        ],
        commutative=alg_desc.get("commutative", True),
        unit=[scalar_from_json(c) for c in alg_desc["unit"]]
        if alg_desc.get("unit") is not None
        else None,
    )
    out: dict = {"group": group, "algebra": algebra}
    a_act = algebra_action(
        group, algebra, [_matrix_from_json(m) for m in obj["actions"]["algebra"]]
    )
    out["algebra_act"] = a_act
    if "lie" in obj:
        lie = fd_lie_algebra(
            [
                [[scalar_from_json(c) for c in vec] for vec in row]
                for row in obj["lie"]["structure"]
            ]
        )
        out["lie"] = lie
        l_act = lie_action(
            group, lie, [_matrix_from_json(m) for m in obj["actions"]["lie"]]
        )
        out["lie_act"] = l_act
    if "ideal" in obj:
        out["ideal"] = max_ideal(
            algebra,
            [[scalar_from_json(c) for c in v] for v in obj["ideal"]["basis"]],
        )
    if "lie" in obj:
        out["fixed_algebra"] = equivariant_map_algebra(
            out["lie"], algebra, out["lie_act"], a_act
        )
        if "ideal" in obj and "module" in obj:
            rho = [_matrix_from_json(m) for m in obj["module"]["matrices"]]
            out["module"] = equivariant_evaluation_module(
                out["fixed_algebra"], out["ideal"], rho
            )
    return out
