"""Linear maps, operator norms, preserver checks, and relation mining."""

import math

import pytest

from normortho import (
    AlphaBeta,
    DimensionMismatchError,
    LinearMap,
    Relation,
    SampleConfig,
    apply_map,
    eval_norm,
    is_orthogonal,
    mine_incomparability,
    operator_norm,
    parse_norm,
    preserver_check,
    relation_residual,
    rho_ab,
)

L1 = parse_norm("l1", 2)
L2 = parse_norm("l2", 2)
LINF = parse_norm("linf", 2)

AB = AlphaBeta(0.3, 0.3)


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return ((c, -s), (s, c))


class TestLinearMap:
    def test_matrix_coerced_to_floats(self):
        lin = LinearMap(((1, 2), (3, 4)), L2, L2)
        assert lin.matrix == ((1.0, 2.0), (3.0, 4.0))

    def test_shape_checked_against_norms(self):
        with pytest.raises(DimensionMismatchError):
            LinearMap(((1.0, 2.0),), L2, L2)
        with pytest.raises(DimensionMismatchError):
            LinearMap(((1.0, 2.0), (3.0, 4.0)), parse_norm("l2", 3), L2)

    def test_rectangular_map_allowed(self):
        lin = LinearMap(((1.0, 0.0, 1.0), (0.0, 1.0, -1.0)), parse_norm("l1", 3), L2)
        assert apply_map(lin, (1.0, 2.0, 3.0)) == (4.0, -1.0)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            LinearMap(((math.nan, 0.0), (0.0, 1.0)), L2, L2)

    def test_is_zero(self):
        assert LinearMap(((0.0, 0.0), (0.0, 0.0)), L2, L2).is_zero
        assert not LinearMap(((0.0, 1.0), (0.0, 0.0)), L2, L2).is_zero

    def test_apply_checks_dimension(self):
        lin = LinearMap(((1.0, 0.0), (0.0, 1.0)), L2, L2)
        with pytest.raises(DimensionMismatchError):
            apply_map(lin, (1.0, 2.0, 3.0))


class TestOperatorNorm:
    def test_identity(self):
        lin = LinearMap(((1.0, 0.0), (0.0, 1.0)), L2, L2)
        got = operator_norm(lin, SampleConfig(seed=1, count=40))
        assert got.grade == "fine"
        assert abs(got.value - 1.0) <= 1e-9

    def test_diagonal_stretch(self):
        lin = LinearMap(((2.0, 0.0), (0.0, 1.0)), L2, L2)
        got = operator_norm(lin, SampleConfig(seed=1, count=40))
        assert abs(got.value - 2.0) <= 1e-6
        # maximizing direction lines up with the stretched axis
        assert abs(abs(got.direction[0]) - 1.0) <= 1e-3

    def test_rotation_into_sup_norm(self):
        lin = LinearMap(_rotation(math.pi / 4), LINF, LINF)
        got = operator_norm(lin, SampleConfig(seed=1, count=40))
        assert abs(got.value - math.sqrt(2.0)) <= 1e-6

    def test_shear_golden_ratio(self):
        lin = LinearMap(((1.0, 1.0), (0.0, 1.0)), L2, L2)
        got = operator_norm(lin, SampleConfig(seed=1, count=40))
        want = (1.0 + math.sqrt(5.0)) / 2.0
        assert abs(got.value - want) <= 1e-6

    def test_scaling_multiplies_estimate(self):
        base = LinearMap(((1.0, 1.0), (0.0, 1.0)), L2, L2)
        scaled = LinearMap(((3.7, 3.7), (0.0, 3.7)), L2, L2)
        a = operator_norm(base, SampleConfig(seed=1, count=40))
        b = operator_norm(scaled, SampleConfig(seed=1, count=40))
        assert abs(b.value - 3.7 * a.value) <= 1e-9 * b.value

    def test_lower_estimate_from_witness(self):
        lin = LinearMap(((1.0, 0.4), (-0.3, 1.2)), L1, LINF)
        got = operator_norm(lin, SampleConfig(seed=2, count=40))
        x = got.direction
        ratio = eval_norm(LINF, apply_map(lin, x)) / eval_norm(L1, x)
        assert ratio <= got.value + 1e-12
        assert got.value <= ratio + 1e-9

    def test_dim3_coarse_grade(self):
        l2_3 = parse_norm("l2", 3)
        ident = LinearMap(
            ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)), l2_3, l2_3
        )
        got = operator_norm(ident, SampleConfig(seed=1, count=30))
        assert got.grade == "coarse"
        assert abs(got.value - 1.0) <= 1e-12
        stretch = LinearMap(
            ((2.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)), l2_3, l2_3
        )
        got = operator_norm(stretch, SampleConfig(seed=1, count=30))
        assert 1.9 <= got.value <= 2.0 + 1e-9

    def test_zero_map_rejected(self):
        lin = LinearMap(((0.0, 0.0), (0.0, 0.0)), L2, L2)
        with pytest.raises(ValueError):
            operator_norm(lin, SampleConfig(seed=1, count=10))


class TestPreserverCheck:
    def test_rotation_preserves_euclidean_structure(self):
        lin = LinearMap(_rotation(0.7), L2, L2)
        got = preserver_check(lin, AB, SampleConfig(seed=1, count=400))
        assert got.orthogonality.passed
        assert got.norm_multiple.passed
        assert got.rho_scaling.passed
        assert got.all_pass

    def test_uniform_scaling_passes(self):
        lin = LinearMap(((2.0, 0.0), (0.0, 2.0)), L2, L2)
        got = preserver_check(lin, AB, SampleConfig(seed=1, count=400))
        assert got.all_pass
        assert abs(got.operator_norm.value - 2.0) <= 1e-9

    def test_shear_fails_every_condition(self):
        lin = LinearMap(((1.0, 1.0), (0.0, 1.0)), L2, L2)
        got = preserver_check(lin, AB, SampleConfig(seed=1, count=400))
        assert not got.orthogonality.passed
        assert not got.norm_multiple.passed
        assert not got.rho_scaling.passed
        assert not got.all_pass
        opn = got.operator_norm.value

        # each reported witness replays outside the tolerance
        u, w = got.orthogonality.witness_u, got.orthogonality.witness_v
        assert abs(rho_ab(L2, u, w, AB)) <= 1e-9
        tu, tw = apply_map(lin, u), apply_map(lin, w)
        defect = abs(rho_ab(L2, tu, tw, AB)) / (
            eval_norm(L2, tu) * eval_norm(L2, tw)
        )
        assert defect > got.orthogonality.tol
        assert defect == pytest.approx(got.orthogonality.worst, rel=1e-12)

        x = got.norm_multiple.witness_u
        dev = abs(eval_norm(L2, apply_map(lin, x)) - opn) / opn
        assert dev > got.norm_multiple.tol

        u, v = got.rho_scaling.witness_u, got.rho_scaling.witness_v
        lhs = rho_ab(L2, apply_map(lin, u), apply_map(lin, v), AB)
        rhs = opn * opn * rho_ab(L2, u, v, AB)
        denom = AB.total * opn * opn * eval_norm(L2, u) * eval_norm(L2, v)
        assert abs(lhs - rhs) / denom > got.rho_scaling.tol

    def test_singular_map_fails_norm_multiple(self):
        lin = LinearMap(((1.0, 0.0), (0.0, 0.0)), L2, L2)
        got = preserver_check(lin, AB, SampleConfig(seed=1, count=400))
        assert not got.norm_multiple.passed
        # kernel direction collapses, giving a near-total deviation
        assert got.norm_multiple.worst > 0.5

    def test_deterministic(self):
        lin = LinearMap(_rotation(0.3), L2, L2)
        a = preserver_check(lin, AB, SampleConfig(seed=9, count=200))
        b = preserver_check(lin, AB, SampleConfig(seed=9, count=200))
        assert a == b


class TestMineIncomparability:
    def test_rho_minus_does_not_imply_rho_ab_on_l1(self):
        report = mine_incomparability(
            L1,
            Relation("rho_minus"),
            Relation("rho_ab", ab=AlphaBeta(0.3, 0.4)),
            SampleConfig(seed=1, count=400),
        )
        assert report.witness_ab is not None
        u, v = report.witness_ab
        assert is_orthogonal(Relation("rho_minus"), L1, u, v, tol=1e-7).holds
        resid = relation_residual(
            Relation("rho_ab", ab=AlphaBeta(0.3, 0.4)), L1, u, v
        )
        assert abs(resid) > 1e-5

    def test_rho_ab_splits_from_rho_at_sup_corners(self):
        report = mine_incomparability(
            LINF,
            Relation("rho_ab", ab=AlphaBeta(0.3, 0.4)),
            Relation("rho"),
            SampleConfig(seed=1, count=400),
        )
        assert report.witness_ab is not None or report.witness_ba is not None

    def test_euclidean_relations_coincide(self):
        report = mine_incomparability(
            L2,
            Relation("birkhoff"),
            Relation("rho_ab", ab=AB),
            SampleConfig(seed=1, count=300),
        )
        assert report.witness_ab is None
        assert report.witness_ba is None
        assert report.budget_used <= report.budget

    def test_witnesses_replay(self):
        rel_a = Relation("birkhoff")
        rel_b = Relation("rho_ab", ab=AlphaBeta(0.2, 0.5))
        report = mine_incomparability(LINF, rel_a, rel_b, SampleConfig(seed=4, count=400))
        for pair, hold_rel, fail_rel in (
            (report.witness_ab, rel_a, rel_b),
            (report.witness_ba, rel_b, rel_a),
        ):
            if pair is None:
                continue
            u, v = pair
            assert is_orthogonal(hold_rel, LINF, u, v, tol=1e-7).holds
            assert not is_orthogonal(fail_rel, LINF, u, v, tol=1e-7).holds

    def test_deterministic(self):
        args = (
            LINF,
            Relation("rho_ab", ab=AlphaBeta(0.3, 0.4)),
            Relation("rho"),
            SampleConfig(seed=12, count=300),
        )
        assert mine_incomparability(*args) == mine_incomparability(*args)

    def test_dim3_rejected(self):
        with pytest.raises(DimensionMismatchError):
            mine_incomparability(
                parse_norm("l2", 3),
                Relation("birkhoff"),
                Relation("rho"),
                SampleConfig(seed=1, count=10),
            )
