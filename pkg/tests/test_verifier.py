"""Identity checks: the registry, exact rotation helpers, and edge cases."""

import numpy as np
import pytest
import scipy.linalg

from qalg.pauli import OperatorSum, realize
from qalg.verifier import (
    CHECKS,
    check_bch_series,
    check_iontrap_xy,
    check_recoupling,
    conjugate_eighth,
    exact_exp,
    run_all,
)


class TestRegistry:
    def test_every_registered_check_passes(self):
        results = run_all()
        assert set(r.name for r in results) == set(CHECKS)
        for r in results:
            assert r.passed, (r.name, r.residual, r.details)
            assert r.residual <= r.tolerance or r.metric == "exact"

    def test_registry_size(self):
        assert len(CHECKS) == 13

    def test_exact_checks_report_zero(self):
        for name in ("axy-encoded", "axy-split", "boson-commutator", "car"):
            assert CHECKS[name]().residual == 0.0


class TestExactRotations:
    def test_exponential_matches_dense(self):
        z = OperatorSum.z(0, 1)
        for eighths in range(-4, 5):
            got = realize(exact_exp(z, eighths))
            want = scipy.linalg.expm(1j * eighths * np.pi / 4 * realize(z))
            assert np.allclose(got, want, atol=1e-15)

    def test_quarter_turn_takes_x_to_y(self):
        x, y, z = (OperatorSum.x(0, 1), OperatorSum.y(0, 1), OperatorSum.z(0, 1))
        assert conjugate_eighth(x, z, 1) == y

    def test_half_turn_flips(self):
        x, z = OperatorSum.x(0, 1), OperatorSum.z(0, 1)
        assert conjugate_eighth(x, z, 2) == x * -1

    def test_full_turn_is_identity_action(self):
        x, z = OperatorSum.x(0, 1), OperatorSum.z(0, 1)
        assert conjugate_eighth(x, z, 4) == x

    def test_cube_condition_enforced(self):
        from qalg.pauli import HALF
        # eigenvalues +-1/2 break gen**3 = gen, so the closed form is wrong
        with pytest.raises(ValueError):
            exact_exp(OperatorSum.z(0, 1) * HALF, 1)

    def test_two_mode_generator(self):
        # generators with eigenvalues in {-1, 0, 1} pass the cube test
        zz = OperatorSum.z(0, 2) * OperatorSum.z(1, 2)
        got = realize(exact_exp(zz, 2))
        want = scipy.linalg.expm(1j * np.pi / 2 * realize(zz))
        assert np.allclose(got, want, atol=1e-15)


class TestIndividualChecks:
    def test_recoupling_with_custom_operators(self):
        chk = check_recoupling(A=OperatorSum.x(0, 1), B=OperatorSum.z(0, 1))
        assert chk.passed

    def test_recoupling_rejects_commuting_pair(self):
        chk = check_recoupling(A=OperatorSum.z(0, 2), B=OperatorSum.z(1, 2))
        assert not chk.passed
        assert any("VIOLATED" in d for d in chk.details)

    def test_bch_halving_ratio_scales_with_order(self):
        c3 = check_bch_series(order=3)
        c4 = check_bch_series(order=4)
        r3 = float(next(d for d in c3.details if "halving ratio" in d).split()[2].rstrip(","))
        r4 = float(next(d for d in c4.details if "halving ratio" in d).split()[2].rstrip(","))
        assert abs(r3 - 16) < 3
        assert abs(r4 - 32) < 7

    def test_iontrap_truncation_reported(self):
        chk = check_iontrap_xy(cutoff=3)
        assert chk.passed
        assert any("truncation" in d for d in chk.details)
