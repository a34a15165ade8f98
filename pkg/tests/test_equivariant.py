"""Tests for the finite-group-equivariant matrix backend."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from curcat.equivariant import (
    Character,
    EquivariantDataError,
    FiniteAbelianGroup,
    algebra_action,
    all_characters,
    characters_trivial_on,
    equivariant_evaluation_module,
    equivariant_map_algebra,
    fd_algebra,
    fd_lie_algebra,
    fixed_subalgebra_basis,
    group_action,
    ideal_stabilizer,
    isotypic_basis,
    isotypic_dimensions,
    isotypic_projector,
    lie_action,
    max_ideal,
    polynomial_quotient_algebra,
    scalar_from_json,
    scalar_to_json,
    setup_from_json_dict,
    sl2,
    sl2_z2_truncated_setup,
    truncated_polynomial_algebra,
    twisted_evaluation_zero_check,
)
from curcat.exact import CycloNumber, ExactMatrix
from curcat.lie import AxiomError

ORACLES = Path(__file__).parent / "oracles"

Z2 = FiniteAbelianGroup((2,))
Z4 = FiniteAbelianGroup((4,))


def frozen(name: str) -> dict:
    return json.loads((ORACLES / name).read_text())


@pytest.fixture(scope="module")
def oracle() -> dict:
    return frozen("frozen_equivariant.json")


@pytest.fixture(scope="module")
def bundle() -> dict:
    return sl2_z2_truncated_setup()


@pytest.fixture(scope="module")
def qt4_negation():
    """One truncated variable with the sign flip t -> -t."""
    algebra = truncated_polynomial_algebra(4)
    negate = ExactMatrix.from_rows(
        [[(-1) ** j if i == j else 0 for j in range(4)] for i in range(4)]
    )
    return algebra, algebra_action(Z2, algebra, [negate])


@pytest.fixture(scope="module")
def z4_rotation():
    """One truncated variable over the fourth cyclotomic field, t -> i*t."""
    algebra = truncated_polynomial_algebra(4, conductor=4)
    gen = ExactMatrix.from_rows(
        [
            [CycloNumber.zeta(4, i) if i == j else CycloNumber.zero(4) for j in range(4)]
            for i in range(4)
        ]
    )
    return algebra, algebra_action(Z4, algebra, [gen])


# ---------------------------------------------------------------------------
# groups and characters


def test_group_order_exponent_and_elements():
    g = FiniteAbelianGroup((2, 4))
    assert g.order == 8
    assert g.exponent == 4
    assert g.identity == (0, 0)
    elems = g.elements()
    assert len(elems) == 8
    assert elems[:5] == [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0)]


def test_group_arithmetic_and_element_orders():
    g = FiniteAbelianGroup((2, 4))
    assert g.add((1, 3), (1, 2)) == (0, 1)
    assert g.neg((1, 1)) == (1, 3)
    assert g.element_order((0, 0)) == 1
    assert g.element_order((1, 2)) == 2
    assert g.element_order((0, 1)) == 4


def test_trivial_group_facts():
    g = FiniteAbelianGroup(())
    assert g.order == 1
    assert g.exponent == 1
    assert g.elements() == [()]
    assert g.element_order(()) == 1


def test_cyclic_factor_below_two_rejected():
    with pytest.raises(EquivariantDataError, match="modulus >= 2"):
        FiniteAbelianGroup((1,))


def test_character_normalizes_exponents():
    assert Character(Z4, (5,)) == Character(Z4, (1,))
    assert Character(Z4, (-1,)).exponents == (3,)
    with pytest.raises(EquivariantDataError, match="one exponent per cyclic factor"):
        Character(Z4, (1, 2))


def test_character_values_are_rational_for_small_exponent():
    sign = Character(Z2, (1,))
    assert sign.value((0,)) == Fraction(1)
    assert sign.value((1,)) == Fraction(-1)
    assert isinstance(sign.value((1,)), Fraction)
    assert sign.is_trivial_on([(0,)])
    assert not sign.is_trivial_on(Z2.elements())


def test_character_values_on_z4_are_cyclotomic():
    chi = Character(Z4, (1,))
    assert chi.value((1,)) == CycloNumber.zeta(4, 1)
    assert chi.value((2,)) == CycloNumber.zeta(4, 2)
    assert chi.inverse_value((1,)) == CycloNumber.zeta(4, 3)


def test_character_product_and_inverse():
    chi = Character(Z4, (1,))
    assert (chi * Character(Z4, (3,))).is_trivial
    assert chi.inverse() == Character(Z4, (3,))
    with pytest.raises(EquivariantDataError, match="different groups"):
        chi * Character(Z2, (1,))


def test_all_characters_lists_trivial_first():
    chars = all_characters(Z4)
    assert [chi.exponents for chi in chars] == [(0,), (1,), (2,), (3,)]
    assert chars[0].is_trivial


def test_characters_trivial_on_subgroup():
    sub = [(0,), (2,)]
    kept = characters_trivial_on(Z4, sub)
    assert [chi.exponents for chi in kept] == [(0,), (2,)]


def test_character_orthogonality_z2():
    chars = all_characters(Z2)
    for a in chars:
        for b in chars:
            total = sum(a.value(g) * b.inverse_value(g) for g in Z2.elements())
            assert total == (Fraction(2) if a == b else Fraction(0))


def test_character_orthogonality_z4_cyclotomic():
    chars = all_characters(Z4)
    four = CycloNumber.from_rational(Fraction(4), 4)
    zero = CycloNumber.zero(4)
    for a in chars:
        for b in chars:
            total = zero
            for g in Z4.elements():
                total = total + a.value(g) * b.inverse_value(g)
            assert total == (four if a == b else zero)


# ---------------------------------------------------------------------------
# algebra and Lie algebra constructors


def test_truncated_polynomial_product_table():
    algebra = truncated_polynomial_algebra(4)
    t, t2, t3 = (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
    assert algebra.multiply(t, t2) == (0, 0, 0, 1)
    assert algebra.multiply(t2, t3) == (0, 0, 0, 0)
    assert algebra.unit == (1, 0, 0, 0)
    assert algebra.multiply(algebra.unit, t3) == t3


def test_polynomial_quotient_square_root_of_one():
    algebra = polynomial_quotient_algebra([-1, 0])
    t = (0, 1)
    assert algebra.multiply(t, t) == (1, 0)
    assert algebra.unit == (1, 0)
    with pytest.raises(EquivariantDataError, match="positive degree"):
        polynomial_quotient_algebra([])


def test_fd_algebra_rejects_ragged_structure():
    with pytest.raises(EquivariantDataError, match="dim x dim x dim"):
        fd_algebra([[(Fraction(1), Fraction(0))]])


def test_fd_algebra_rejects_noncommutative_table():
    z, o = Fraction(0), Fraction(1)
    structure = [[(z, z), (o, z)], [(z, o), (z, z)]]
    with pytest.raises(AxiomError, match=r"not commutative at \(1,0\)"):
        fd_algebra(structure, commutative=True)


def test_fd_algebra_rejects_nonassociative_product():
    z, o = Fraction(0), Fraction(1)
    structure = [[(z, o), (o, z)], [(z, z), (z, z)]]
    with pytest.raises(AxiomError, match=r"not associative at \(0,0,0\)"):
        fd_algebra(structure, commutative=False)


def test_fd_algebra_rejects_wrong_unit():
    structure = truncated_polynomial_algebra(2).structure
    with pytest.raises(AxiomError, match="claimed unit fails on basis vector 0"):
        fd_algebra(structure, unit=(Fraction(0), Fraction(1)))


def test_fd_lie_algebra_rejects_nonzero_self_bracket():
    with pytest.raises(AxiomError, match="with itself is nonzero"):
        fd_lie_algebra([[(Fraction(1),)]])


def test_fd_lie_algebra_rejects_asymmetric_bracket():
    z, o = Fraction(0), Fraction(1)
    structure = [[(z, z), (o, z)], [(o, z), (z, z)]]
    with pytest.raises(AxiomError, match=r"not antisymmetric at \(0,1\)"):
        fd_lie_algebra(structure)


def test_fd_lie_algebra_rejects_jacobi_failure():
    z, o = Fraction(0), Fraction(1)
    zero = (z, z, z)
    structure = [
        [zero, (z, z, o), (-o, z, z)],
        [(z, z, -o), zero, (o, z, z)],
        [(o, z, z), (-o, z, z), zero],
    ]
    with pytest.raises(AxiomError, match=r"Jacobi identity fails at \(0,1,2\)"):
        fd_lie_algebra(structure)


def test_sl2_bracket_table():
    lie = sl2()
    e, h, f = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert lie.bracket(e, f) == (0, 1, 0)
    assert lie.bracket(h, e) == (2, 0, 0)
    assert lie.bracket(h, f) == (0, 0, -2)


# ---------------------------------------------------------------------------
# group actions on based spaces


def test_group_action_requires_one_generator_per_factor():
    with pytest.raises(EquivariantDataError, match="one generator matrix per cyclic factor"):
        group_action(Z2, [])


def test_group_action_checks_generator_order():
    stretch = ExactMatrix.from_rows([[2]])
    with pytest.raises(EquivariantDataError, match="does not have order 2"):
        group_action(Z2, [stretch])


def test_group_action_checks_commutation():
    swap = ExactMatrix.from_rows([[0, 1], [1, 0]])
    flip = ExactMatrix.from_rows([[1, 0], [0, -1]])
    with pytest.raises(EquivariantDataError, match="must commute"):
        group_action(FiniteAbelianGroup((2, 2)), [swap, flip])


def test_group_action_matrix_of_and_transform(z4_rotation):
    _, action = z4_rotation
    expected = ExactMatrix.from_rows(
        [
            [CycloNumber.zeta(4, 2 * i) if i == j else CycloNumber.zero(4) for j in range(4)]
            for i in range(4)
        ]
    )
    assert action.matrix_of((2,)) == expected
    ones = tuple(CycloNumber.one(4) for _ in range(4))
    assert action.transform((1,), ones) == tuple(CycloNumber.zeta(4, i) for i in range(4))


def test_algebra_action_rejects_non_multiplicative_generator():
    algebra = truncated_polynomial_algebra(4)
    swap = ExactMatrix.from_rows(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    )
    with pytest.raises(EquivariantDataError, match="does not respect the product"):
        algebra_action(Z2, algebra, [swap])


def test_lie_action_rejects_non_bracket_generator():
    negate_h = ExactMatrix.from_rows([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    with pytest.raises(EquivariantDataError, match="does not respect the bracket"):
        lie_action(Z2, sl2(), [negate_h])


# ---------------------------------------------------------------------------
# isotypic decomposition


def test_projectors_idempotent_orthogonal_and_complete(qt4_negation):
    _, action = qt4_negation
    chars = all_characters(Z2)
    projectors = [isotypic_projector(action, chi) for chi in chars]
    total = projectors[0]
    for p in projectors[1:]:
        total = total + p
    assert total == ExactMatrix.identity(4, total.ring)
    for i, p in enumerate(projectors):
        assert p @ p == p
        for q in projectors[i + 1 :]:
            assert p @ q == ExactMatrix.zeros(4, 4, p.ring)


def test_projectors_complete_over_cyclotomic_scalars(z4_rotation):
    _, action = z4_rotation
    projectors = [isotypic_projector(action, chi) for chi in all_characters(Z4)]
    total = projectors[0]
    for p in projectors[1:]:
        total = total + p
        assert p @ p == p
    assert total == ExactMatrix.identity(4, total.ring)


def test_trivial_group_projector_is_identity():
    group = FiniteAbelianGroup(())
    action = group_action(group, [], dim=5)
    p = isotypic_projector(action, Character(group, ()))
    assert p == ExactMatrix.identity(5, p.ring)
    assert isotypic_dimensions(action) == [5]


def test_sign_flip_isotypic_dimensions_match_oracle(qt4_negation, oracle):
    _, action = qt4_negation
    assert isotypic_dimensions(action) == oracle["z2_qt4_isotypic_dims"]
    assert isotypic_basis(action, Character(Z2, (1,))) == [
        (0, 1, 0, 0),
        (0, 0, 0, 1),
    ]


def test_rotation_isotypic_dimensions_match_oracle(z4_rotation, oracle):
    _, action = z4_rotation
    assert isotypic_dimensions(action) == oracle["z4_isotypic_dims"]


def test_involution_fixed_and_sign_dimensions_match_oracle(oracle):
    flip = ExactMatrix.from_rows([[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    action = lie_action(Z2, sl2(), [flip])
    assert isotypic_dimensions(action) == oracle["sl2_chevalley_dims"]
    assert isotypic_basis(action, Character(Z2, (0,))) == [(1, 0, 1)]
    assert isotypic_basis(action, Character(Z2, (1,))) == [(1, 0, -1), (0, 1, 0)]


# ---------------------------------------------------------------------------
# the fixed-point algebra of the diagonal action


def test_fixed_point_algebra_dimension_and_closure(bundle, oracle):
    ema = bundle["fixed_algebra"]
    assert ema.dimension == oracle["fixed_point_algebra_dim"]
    assert ema.bracket_closed is oracle["fixed_point_bracket_closed"]
    assert ema.fixed_point_rank == ema.dimension
    assert [len(p.lie_basis) for p in ema.pieces] == [1, 2]
    assert [len(p.algebra_basis) for p in ema.pieces] == [2, 2]
    assert ema.pieces[0].character.is_trivial


def test_fixed_point_bracket_table_reconstructs_brackets(bundle):
    ema = bundle["fixed_algebra"]
    vecs = ema.basis_vectors()
    for i, (_, x, a) in enumerate(ema.basis):
        for j, (_, y, b) in enumerate(ema.basis):
            coeffs = ema.bracket_table[i][j]
            combo = [Fraction(0)] * len(vecs[0])
            for c, v in zip(coeffs, vecs):
                for t, entry in enumerate(v):
                    combo[t] += c * entry
            assert tuple(combo) == ema.bracket_of_simple_tensors(x, a, y, b)


def test_fixed_point_algebra_over_trivial_group():
    group = FiniteAbelianGroup(())
    lie = sl2()
    algebra = truncated_polynomial_algebra(2)
    ema = equivariant_map_algebra(
        lie, algebra, lie_action(group, lie, []), algebra_action(group, algebra, [])
    )
    assert ema.dimension == 6
    assert ema.fixed_point_rank == 6
    assert ema.bracket_closed


def test_fixed_point_algebra_rejects_mismatched_groups(qt4_negation):
    _, a_act = qt4_negation
    lie = sl2()
    l_act = lie_action(FiniteAbelianGroup(()), lie, [])
    with pytest.raises(EquivariantDataError, match="different groups"):
        equivariant_map_algebra(lie, truncated_polynomial_algebra(4), l_act, a_act)


# ---------------------------------------------------------------------------
# maximal ideals and evaluation


def test_max_ideal_requires_unital_algebra():
    bare = fd_algebra([[(Fraction(0),)]])
    with pytest.raises(EquivariantDataError, match="needs a unital algebra"):
        max_ideal(bare, [])


def test_max_ideal_requires_codimension_one():
    algebra = truncated_polynomial_algebra(4)
    with pytest.raises(EquivariantDataError, match="dimension dim - 1"):
        max_ideal(algebra, [(0, 1, 0, 0), (0, 0, 1, 0)])


def test_max_ideal_rejects_dependent_basis():
    algebra = truncated_polynomial_algebra(4)
    with pytest.raises(EquivariantDataError, match="linearly dependent"):
        max_ideal(algebra, [(0, 1, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1)])


def test_max_ideal_rejects_non_ideal_span():
    algebra = truncated_polynomial_algebra(4)
    with pytest.raises(EquivariantDataError, match="not an ideal"):
        max_ideal(algebra, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)])


def test_truncation_ideal_evaluates_constant_term():
    algebra = truncated_polynomial_algebra(4)
    ideal = max_ideal(algebra, [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    assert ideal.ev_value((3, 5, 0, 2)) == Fraction(3)
    assert ideal.ev_value(algebra.unit) == Fraction(1)


def test_shifted_ideal_evaluates_at_one():
    algebra = polynomial_quotient_algebra([-1, 0])
    ideal = max_ideal(algebra, [(-1, 1)])
    assert ideal.ev_value((1, 0)) == Fraction(1)
    assert ideal.ev_value((0, 1)) == Fraction(1)
    assert ideal.ev_value((-1, 1)) == Fraction(0)


# ---------------------------------------------------------------------------
# ideal stabilizers and twisted evaluation


def test_stabilizer_full_when_ideal_is_preserved(qt4_negation, oracle):
    algebra, action = qt4_negation
    ideal = max_ideal(algebra, [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    stab = ideal_stabilizer(action, ideal)
    assert stab.is_full is oracle["stab_qt4_ideal_t_preserved"]
    assert stab.order == 2
    assert stab.exponent == 2


def test_stabilizer_trivial_when_ideal_moves(oracle):
    algebra = polynomial_quotient_algebra([-1, 0])
    negate = ExactMatrix.from_rows([[1, 0], [0, -1]])
    action = algebra_action(Z2, algebra, [negate])
    ideal = max_ideal(algebra, [(-1, 1)])
    stab = ideal_stabilizer(action, ideal)
    assert stab.is_full is oracle["stab_qt2minus1_ideal_tminus1_preserved"]
    assert stab.is_trivial
    assert stab.elements == ((0,),)


def test_twisted_evaluation_kills_the_moving_slice(qt4_negation, oracle):
    algebra, action = qt4_negation
    ideal = max_ideal(algebra, [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    report = twisted_evaluation_zero_check(algebra, action, ideal, Character(Z2, (1,)))
    assert [entry["identity"] for entry in report] == [
        "evaluation-vanishes[0]",
        "evaluation-vanishes[1]",
    ]
    assert all(entry["status"] == "pass" for entry in report) is oracle["ev_kills_odd_part"]
    assert [entry["value"] for entry in report] == [
        str(v) for v in oracle["ev_values_odd"]
    ]


def test_twisted_evaluation_requires_a_moving_character():
    algebra = polynomial_quotient_algebra([-1, 0])
    negate = ExactMatrix.from_rows([[1, 0], [0, -1]])
    action = algebra_action(Z2, algebra, [negate])
    ideal = max_ideal(algebra, [(-1, 1)])
    with pytest.raises(EquivariantDataError, match="trivial on the ideal stabilizer"):
        twisted_evaluation_zero_check(algebra, action, ideal, Character(Z2, (1,)))


def test_twisted_evaluation_reports_empty_slice():
    algebra = truncated_polynomial_algebra(2)
    action = algebra_action(Z2, algebra, [ExactMatrix.identity(2)])
    ideal = max_ideal(algebra, [(0, 1)])
    report = twisted_evaluation_zero_check(algebra, action, ideal, Character(Z2, (1,)))
    assert report == [
        {"identity": "evaluation-vanishes[empty-slice]", "status": "pass", "value": "0"}
    ]


def test_twisted_evaluation_on_all_rotation_characters(z4_rotation, oracle):
    algebra, action = z4_rotation
    ideal = max_ideal(algebra, [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    assert ideal_stabilizer(action, ideal).is_full
    all_pass = True
    for a in (1, 2, 3):
        report = twisted_evaluation_zero_check(algebra, action, ideal, Character(Z4, (a,)))
        assert len(report) == 1
        all_pass = all_pass and report[0]["status"] == "pass"
    assert all_pass is oracle["z4_ev_kills_nontrivial_pieces"]


# ---------------------------------------------------------------------------
# evaluation modules for the fixed-point algebra


def test_fixed_subalgebra_basis_under_full_stabilizer(bundle):
    sub = fixed_subalgebra_basis(bundle["lie_act"], bundle["stabilizer"].elements)
    assert sub == [(1, 0, 1)]


def test_bundled_evaluation_module_passes(bundle):
    module = bundle["module"]
    assert module.passed
    assert module.module_dim == 1
    assert len(module.report) == 36
    assert all(entry["status"] == "pass" for entry in module.report)
    assert module.subalgebra_basis == ((Fraction(1), Fraction(0), Fraction(1)),)


def trivial_group_natural_setup():
    group = FiniteAbelianGroup(())
    lie = sl2()
    algebra = truncated_polynomial_algebra(2)
    ema = equivariant_map_algebra(
        lie, algebra, lie_action(group, lie, []), algebra_action(group, algebra, [])
    )
    ideal = max_ideal(algebra, [(0, 1)])
    e_m = ExactMatrix.from_rows([[0, 1], [0, 0]])
    h_m = ExactMatrix.from_rows([[1, 0], [0, -1]])
    f_m = ExactMatrix.from_rows([[0, 0], [1, 0]])
    return ema, ideal, [e_m, h_m, f_m]


def test_natural_module_over_the_trivial_group():
    ema, ideal, rho = trivial_group_natural_setup()
    module = equivariant_evaluation_module(ema, ideal, rho)
    assert module.passed
    assert module.module_dim == 2
    assert len(module.report) == 36
    assert module.subalgebra_basis == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert module.matrices[0] == rho[0]
    assert module.matrices[1] == ExactMatrix.zeros(2, 2, module.matrices[1].ring)


def test_non_module_action_is_rejected():
    ema, ideal, rho = trivial_group_natural_setup()
    rho[2] = rho[2].scale(Fraction(-1))
    with pytest.raises(AxiomError, match="not a module over the fixed subalgebra"):
        equivariant_evaluation_module(ema, ideal, rho)


def test_non_module_action_flagged_without_validation():
    ema, ideal, rho = trivial_group_natural_setup()
    rho[2] = rho[2].scale(Fraction(-1))
    module = equivariant_evaluation_module(ema, ideal, rho, validate_module=False)
    failures = [entry for entry in module.report if entry["status"] == "fail"]
    assert {entry["identity"] for entry in failures} == {"COMPAT(0,4)", "COMPAT(4,0)"}
    assert all("residual" in entry for entry in failures)


def test_module_matrix_count_is_checked():
    ema, ideal, rho = trivial_group_natural_setup()
    with pytest.raises(EquivariantDataError, match="need 3 action matrices, got 2"):
        equivariant_evaluation_module(ema, ideal, rho[:2])


# ---------------------------------------------------------------------------
# JSON descriptions


def test_scalar_json_round_trip():
    assert scalar_to_json(Fraction(3, 2)) == "3/2"
    assert scalar_from_json("3/2") == Fraction(3, 2)
    assert scalar_from_json("5") == Fraction(5)
    s = CycloNumber(4, [Fraction(1, 2), Fraction(-3)])
    assert scalar_from_json(scalar_to_json(s)) == s


def test_setup_from_json_rebuilds_the_bundle(bundle):
    def ser_structure(structure):
        return [[[scalar_to_json(c) for c in vec] for vec in row] for row in structure]

    def ser_matrix(m):
        return [[scalar_to_json(c) for c in row] for row in m.entries]

    obj = {
        "group": {"factors": [2]},
        "algebra": {
            "structure": ser_structure(bundle["algebra"].structure),
            "unit": [scalar_to_json(c) for c in bundle["algebra"].unit],
        },
        "lie": {"structure": ser_structure(bundle["lie"].structure)},
        "actions": {
            "algebra": [ser_matrix(m) for m in bundle["algebra_act"].generators],
            "lie": [ser_matrix(m) for m in bundle["lie_act"].generators],
        },
        "ideal": {
            "basis": [[scalar_to_json(c) for c in v] for v in bundle["ideal"].basis]
        },
        "module": {"matrices": [ser_matrix(m) for m in bundle["module"].rho]},
    }
    out = setup_from_json_dict(json.loads(json.dumps(obj, sort_keys=True)))
    assert out["fixed_algebra"].dimension == 6
    assert out["fixed_algebra"].bracket_closed
    assert out["module"].passed
    assert out["module"].module_dim == 1
