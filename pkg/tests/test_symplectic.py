"""Gate maps, displacement propagation, and the preprocessing stabilizer identity."""

import numpy as np
import pytest

from gkpsim import (
    SymplecticMap,
    compose,
    gate_bs50,
    gate_squeeze,
    gate_sum,
    gate_sum_inv,
    identity_map,
    p_steane_circuit,
    preprocessing_map,
    propagate_displacement,
    steane_circuit,
    symplectic_form,
    teleportation_circuit,
    verify_preprocessing_identity,
)

SQRT2 = np.sqrt(2.0)


def symplectic_defect(m: np.ndarray) -> float:
    omega = symplectic_form(m.shape[0] // 2)
    return float(np.max(np.abs(m @ omega @ m.T - omega)))


class TestGates:
    def test_squeeze_identity_at_r1(self):
        assert np.array_equal(gate_squeeze(0, 1.0).matrix, np.eye(2))

    def test_squeeze_displayed_transform(self):
        m = gate_squeeze(0, 2.0).matrix
        assert np.allclose(m, np.diag([0.5, 2.0]))

    def test_squeeze_inverse_pair(self):
        r = 1.7
        c = compose([gate_squeeze(0, r), gate_squeeze(0, 1.0 / r)])
        assert np.allclose(c.matrix, np.eye(2), atol=1e-15)

    def test_squeeze_rejects_nonpositive(self):
        for r in (0.0, -1.0, np.nan):
            with pytest.raises(ValueError):
                gate_squeeze(0, r)

    def test_sum_displayed_transforms(self):
        m = gate_sum(0, 1)
        assert np.allclose(
            propagate_displacement(m, [1.0, 0.0, 0.0, 0.0]), [1.0, 0.0, 1.0, 0.0]
        )
        assert np.allclose(
            propagate_displacement(m, [0.0, 0.0, 0.0, 1.0]), [0.0, -1.0, 0.0, 1.0]
        )

    def test_sum_inv_displayed_transforms(self):
        m = gate_sum_inv(0, 1)
        assert np.allclose(
            propagate_displacement(m, [1.0, 0.0, 0.0, 0.0]), [1.0, 0.0, -1.0, 0.0]
        )
        assert np.allclose(
            propagate_displacement(m, [0.0, 0.0, 0.0, 1.0]), [0.0, 1.0, 0.0, 1.0]
        )

    def test_sum_inverse_pair(self):
        c = compose([gate_sum(0, 1), gate_sum_inv(0, 1)])
        assert np.allclose(c.matrix, np.eye(4), atol=1e-15)

    def test_sum_rejects_equal_modes(self):
        with pytest.raises(ValueError):
            gate_sum(1, 1)
        with pytest.raises(ValueError):
            gate_sum_inv(2, 2)

    def test_bs50_displayed_transform(self):
        m = gate_bs50(0, 1)
        out = propagate_displacement(m, [1.0, 0.0, 0.0, 0.0])
        assert np.allclose(out, [1 / SQRT2, 0.0, 1 / SQRT2, 0.0])
        out2 = propagate_displacement(m, [1.0, 0.0, 1.0, 0.0])
        assert np.allclose(out2, [0.0, 0.0, SQRT2, 0.0])

    def test_bs50_twice_is_symplectic_rotation(self):
        twice = compose([gate_bs50(0, 1), gate_bs50(0, 1)])
        assert symplectic_defect(twice.matrix) < 1e-12
        assert not np.allclose(twice.matrix, np.eye(4))

    def test_bs50_rejects_equal_modes(self):
        with pytest.raises(ValueError):
            gate_bs50(3, 3)

    def test_all_constructors_symplectic(self):
        for m in [
            gate_squeeze(1, 0.3, n_modes=3),
            gate_sum(0, 2, n_modes=3),
            gate_sum_inv(2, 1, n_modes=3),
            gate_bs50(0, 1, n_modes=3),
            steane_circuit(),
            p_steane_circuit(0.8, 1.1),
            teleportation_circuit(),
            preprocessing_map(1.3, 0.4),
        ]:
            assert m.symplectic_defect() < 1e-12


class TestCompose:
    def test_empty_is_identity(self):
        assert np.array_equal(compose([], n_modes=2).matrix, np.eye(4))

    def test_empty_without_modes_rejected(self):
        with pytest.raises(ValueError):
            compose([])

    def test_single(self):
        m = gate_squeeze(0, 2.0)
        assert np.array_equal(compose([m]).matrix, m.matrix)

    def test_mode_count_mismatch(self):
        with pytest.raises(ValueError):
            compose([gate_squeeze(0, 2.0, n_modes=1), gate_squeeze(0, 2.0, n_modes=2)])

    def test_circuit_order(self):
        # squeeze then SUM differs from SUM then squeeze
        a = compose([gate_squeeze(0, 2.0, n_modes=2), gate_sum(0, 1)])
        b = compose([gate_sum(0, 1), gate_squeeze(0, 2.0, n_modes=2)])
        assert not np.allclose(a.matrix, b.matrix)
        # maps[0] applied first means rightmost factor
        expected = gate_sum(0, 1).matrix @ gate_squeeze(0, 2.0, n_modes=2).matrix
        assert np.allclose(a.matrix, expected)


class TestPropagation:
    def test_identity(self):
        s = np.array([0.3, -0.2, 0.1, 0.0, 0.7, -0.4])
        assert np.array_equal(propagate_displacement(identity_map(3), s), s)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            propagate_displacement(identity_map(2), [1.0, 2.0])

    def test_linearity(self):
        rng = np.random.default_rng(0)
        m = p_steane_circuit(0.9, 1.4)
        for _ in range(20):
            x, y = rng.normal(size=6), rng.normal(size=6)
            alpha, beta = rng.normal(), rng.normal()
            lhs = propagate_displacement(m, alpha * x + beta * y)
            rhs = alpha * propagate_displacement(m, x) + beta * propagate_displacement(m, y)
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_preprocessing_error_propagation(self):
        # mode-0 shifts (a(u2-u3), v2/a), mode-1 shifts (b u3, (v3+v2)/b)
        a, b = 0.7, 1.3
        u2, v2, u3, v3 = 0.11, -0.23, 0.05, 0.41
        out = propagate_displacement(preprocessing_map(a, b), [u2, v2, u3, v3])
        expected = [a * (u2 - u3), v2 / a, b * u3, (v3 + v2) / b]
        assert np.max(np.abs(out - np.array(expected))) < 1e-12


def u_coeffs(matrix: np.ndarray, row: int) -> np.ndarray:
    return matrix[row, 0::2]


def v_coeffs(matrix: np.ndarray, row: int) -> np.ndarray:
    return matrix[row, 1::2]


class TestSchemeCoefficientMatrices:
    """Circuit-derived coefficients equal the closed-form output expressions."""

    def test_steane_circuit_matrix(self):
        c = steane_circuit().matrix
        # data: q -> u1 + u3, p -> v1 - v2
        assert np.allclose(u_coeffs(c, 0), [1, 0, 1], atol=1e-12)
        assert np.allclose(v_coeffs(c, 1), [1, -1, 0], atol=1e-12)
        # measured q on mode 1: u1 + u2; measured p on mode 2: -(v1 - v2 - v3)
        assert np.allclose(u_coeffs(c, 2), [1, 1, 0], atol=1e-12)
        assert np.allclose(v_coeffs(c, 5), [-1, 1, 1], atol=1e-12)
        # no q/p mixing anywhere in the circuit
        assert np.allclose(c[0::2, 1::2], 0.0)
        assert np.allclose(c[1::2, 0::2], 0.0)

    @pytest.mark.parametrize("b,m", [(1.0, 2), (SQRT2, 1), (0.8, 3)])
    def test_p_steane_circuit_matches_output_forms(self, b, m):
        a = m * b / 2.0
        c = p_steane_circuit(a, b).matrix
        # xi_q = u1 + b u3
        assert np.allclose(u_coeffs(c, 0), [1, 0, b], atol=1e-12)
        # m_q = u1 + (b m / 2) u2 + ((2b - b m)/2) u3
        assert np.allclose(u_coeffs(c, 2), [1, b * m / 2, (2 * b - b * m) / 2], atol=1e-12)
        # xi_p = v1 - (2/(b m)) v2
        assert np.allclose(v_coeffs(c, 1), [1, -2 / (b * m), 0], atol=1e-12)
        # measured p on mode 2 = -m_p = -(v1 - (v2+v3)/b)
        assert np.allclose(v_coeffs(c, 5), [-1, 1 / b, 1 / b], atol=1e-12)

    def test_teleportation_circuit_matches_output_forms(self):
        c = teleportation_circuit().matrix
        # teleported data arrives on mode 2 with shifts ((u2+u3)/sqrt2, (v2+v3)/sqrt2)
        assert np.allclose(u_coeffs(c, 4), [0, 1 / SQRT2, 1 / SQRT2], atol=1e-12)
        assert np.allclose(v_coeffs(c, 5), [0, 1 / SQRT2, 1 / SQRT2], atol=1e-12)
        # scaled outcomes: sqrt2 q_0 = u1 - (u2-u3)/sqrt2, sqrt2 p_1 = v1 + (v2-v3)/sqrt2
        assert np.allclose(SQRT2 * u_coeffs(c, 0), [1, -1 / SQRT2, 1 / SQRT2], atol=1e-12)
        assert np.allclose(SQRT2 * v_coeffs(c, 3), [1, 1 / SQRT2, -1 / SQRT2], atol=1e-12)


class TestSymplecticMapValidation:
    def test_rejects_non_symplectic(self):
        with pytest.raises(ValueError):
            SymplecticMap(np.diag([2.0, 2.0]))

    def test_rejects_odd_dimension(self):
        with pytest.raises(ValueError):
            SymplecticMap(np.eye(3))

    def test_inverse(self):
        m = p_steane_circuit(0.6, 1.2)
        assert np.allclose((m.inverse().matrix @ m.matrix), np.eye(6), atol=1e-12)


class TestPreprocessingIdentity:
    def test_paper_points(self):
        assert verify_preprocessing_identity(1.0, 1.0).identical
        assert verify_preprocessing_identity(1 / SQRT2, SQRT2).identical
        assert not verify_preprocessing_identity(1.0, SQRT2).identical

    def test_transformed_generators_match_proof(self):
        a, b = 0.7, 0.4
        rep = verify_preprocessing_identity(a, b)
        t = a / b
        expected = np.array(
            [
                [0.0, -1.0, 0.0, 0.0],
                [2.0, 0.0, 2.0 * t, 0.0],
                [0.0, 2.0 * t, 0.0, -2.0],
                [0.0, 0.0, 1.0, 0.0],
            ]
        )
        assert np.max(np.abs(rep.transformed.generators - expected)) < 1e-12

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            verify_preprocessing_identity(0.0, 1.0)
        with pytest.raises(ValueError):
            verify_preprocessing_identity(1.0, -2.0)

    def test_identity_iff_integer_ratio_on_grid(self):
        # ~1000 (a, b) pairs mixing exact-integer, rational, irrational ratios
        count = 0
        for b in np.linspace(0.2, 2.6, 32):
            for a in np.linspace(0.1, 2.5, 32):
                rep = verify_preprocessing_identity(a, b)
                m = 2.0 * a / b
                assert rep.identical == (abs(m - round(m)) <= 1e-9), (a, b)
                count += 1
        for b in (0.3, 1.0, SQRT2, np.sqrt(3.0)):
            for m in (1, 2, 3, 4):
                rep = verify_preprocessing_identity(m * b / 2.0, b)
                assert rep.identical, (b, m)
                count += 1
        for a, b in [(1.0, SQRT2), (0.5, np.pi / 3), (np.e / 4, 1.0)]:
            assert not verify_preprocessing_identity(a, b).identical
            count += 3
        assert count >= 1000
