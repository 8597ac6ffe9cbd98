"""Constant-excitation subspaces, encoded generators, rates, synthesis."""

import math

import numpy as np
import pytest

from qalg.codes import (
    build_code,
    encoded_cphase,
    encoded_generator,
    physical_generator,
    rate,
    shannon_entropy,
    synthesize_su_d,
)
from qalg.pauli import realize


class TestCodewords:
    def test_three_choose_one_table(self):
        code = build_code(3, 1)
        assert code.codewords == (4, 2, 1)
        assert code.codeword_strings() == ("001", "010", "100")
        assert code.dense_indices == (3, 5, 6)

    def test_two_choose_one_table(self):
        code = build_code(2, 1)
        assert code.codeword_strings() == ("01", "10")
        assert code.dense_indices == (1, 2)

    def test_counts(self):
        assert len(build_code(4, 2).codewords) == 6
        assert len(build_code(5, 2).codewords) == 10

    def test_mode_zero_is_leftmost_character(self):
        # mask 4 on three modes means mode 2 is excited, printed last
        code = build_code(3, 1)
        assert code.codeword_strings()[0] == "001"

    def test_index_of(self):
        code = build_code(4, 2)
        for pos, word in enumerate(code.codewords):
            assert code.index_of(word) == pos
        with pytest.raises(ValueError):
            code.index_of(1)  # wrong excitation count

    def test_projector_shape_and_idempotence(self):
        code = build_code(4, 2)
        p = np.asarray(code.projector)
        assert p.shape == (16, 16)
        assert np.allclose(p @ p, p)
        assert int(round(np.trace(p).real)) == 6

    def test_excitations_beyond_modes_rejected(self):
        with pytest.raises(ValueError):
            build_code(3, 4)


class TestEncodedGenerators:
    def test_transposition_matrix(self):
        code = build_code(3, 1)
        g = encoded_generator(code, "x", (0, 1))
        assert g.support == (0, 1)
        assert np.array_equal(np.asarray(g.action),
                              np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]]))

    def test_difference_matrix(self):
        g = encoded_generator(build_code(3, 1), "z", (1, 2))
        assert np.array_equal(np.asarray(g.action), np.diag([1, -1, 0]))

    def test_action_is_projected_physical_operator(self):
        code = build_code(4, 2)
        for kind in ("x", "z"):
            g = encoded_generator(code, kind, (1, 3))
            phys = realize(physical_generator(kind, (1, 3), 4))
            idx = list(code.dense_indices)
            assert np.allclose(np.asarray(g.action), phys[np.ix_(idx, idx)])

    def test_bad_kind_and_pair(self):
        code = build_code(3, 1)
        with pytest.raises(ValueError):
            encoded_generator(code, "y", (0, 1))
        with pytest.raises(ValueError):
            encoded_generator(code, "x", (0, 0))
        with pytest.raises(ValueError):
            encoded_generator(code, "x", (0, 3))


class TestCphase:
    def test_interface_sign_tables(self):
        cp = encoded_cphase(build_code(3, 1), build_code(3, 1))
        assert cp.left_signs == (-1, 1, 1)
        assert cp.right_signs == (1, 1, -1)
        assert np.array_equal(
            np.asarray(cp.zz_action),
            np.kron(np.diag(cp.left_signs), np.diag(cp.right_signs)))

    def test_two_block_gate_diagonal(self):
        cp = encoded_cphase(build_code(2, 1), build_code(2, 1))
        assert np.array_equal(np.diag(np.asarray(cp.zz_action)),
                              np.array([-1, 1, 1, -1]))
        assert np.array_equal(np.diag(np.asarray(cp.action)),
                              np.array([1, -1, -1, 1]))

    def test_mixed_block_sizes(self):
        cp = encoded_cphase(build_code(3, 1), build_code(2, 1))
        assert np.asarray(cp.zz_action).shape == (6, 6)


class TestSynthesis:
    def test_small_code_succeeds_either_way(self):
        for pairs in ("all", "nearest"):
            r = synthesize_su_d(build_code(3, 1), pairs=pairs)
            assert r.success
            assert r.basis.dimension_traceless == 8

    def test_default_reaches_full_su6(self):
        r = synthesize_su_d(build_code(4, 2))
        assert r.success
        assert r.basis.dimension_traceless == 35

    def test_nearest_chain_sticks_at_quadratic_image(self):
        # adjacent hard-core hops equal their string-mapped quadratic
        # images, so the chain closure cannot exceed N*N directions no
        # matter how the subspace projects it
        r = synthesize_su_d(build_code(4, 2), pairs="nearest")
        assert not r.success
        assert r.basis.dimension_traceless == 15

    def test_counting_record(self):
        r = synthesize_su_d(build_code(4, 2), pairs="nearest")
        assert r.counting["pairs_per_link"] == math.comb(2, 1)
        assert r.counting["links"] == math.comb(4, 2)
        assert r.counting["dim"] == 6
        assert r.counting["interior_condition"]

    def test_pairs_argument_validated(self):
        with pytest.raises(ValueError):
            synthesize_su_d(build_code(3, 1), pairs="some")

    def test_dimension_limit(self):
        with pytest.raises(ValueError):
            synthesize_su_d(build_code(8, 4), d_limit=20)


class TestRates:
    def test_half_filling_rates_climb_toward_one(self):
        values = [rate(n, n // 2) for n in (4, 8, 12, 16)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert all(v < 1 for v in values)

    def test_three_mode_value(self):
        assert abs(rate(3, 1) - math.log2(3) / 3) < 1e-12

    def test_entropy_bound(self):
        # the rate at filling fraction p approaches the binary entropy
        assert shannon_entropy(0.5) == 1.0
        assert shannon_entropy(0.0) == 0.0
        assert abs(shannon_entropy(0.25) - shannon_entropy(0.75)) < 1e-15
        assert rate(16, 8) < shannon_entropy(0.5)

    def test_rate_of_trivial_codes(self):
        assert rate(4, 0) == 0.0
        assert rate(4, 4) == 0.0
