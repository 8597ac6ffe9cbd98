"""Hard-core mode operators, their qubit images, and monomial bookkeeping."""

import random

import numpy as np
import pytest

from qalg.errors import SpeciesError
from qalg.parafermion import (
    GeneratorIndex,
    SecondQuantizedExpr,
    bilinear_su2,
    classify,
    enumerate_generators,
    lowering_op,
    number_operator,
    number_site,
    parity_operator,
    raising_op,
    to_pauli,
)
from qalg.pauli import HALF, I_UNIT, OperatorSum, commutator, realize

E = SecondQuantizedExpr


def pf(kind, mode, n):
    return getattr(E, kind)(mode, n, "parafermion")


class TestModeOperators:
    def test_raising_is_upper_triangular(self):
        # vacuum sits at dense label 1 for a single mode
        assert np.array_equal(realize(raising_op(0, 1)),
                              np.array([[0, 1], [0, 0]], dtype=complex))
        assert np.array_equal(realize(lowering_op(0, 1)),
                              np.array([[0, 0], [1, 0]], dtype=complex))

    def test_pauli_content(self):
        up = raising_op(0, 2)
        assert up.coefficient(1, 0) == HALF
        assert up.coefficient(1, 1) == HALF * I_UNIT
        assert lowering_op(0, 2) == up.adjoint()

    def test_number_site_projects_occupation(self):
        n0 = realize(number_site(0, 2))
        # dense bit = 1 - occupation, so even labels are occupied on mode 0
        assert np.array_equal(np.diag(n0).real, np.array([1, 0, 1, 0]))

    def test_number_operator_totals(self):
        total = realize(number_operator(3))
        diag = np.diag(total).real
        for label in range(8):
            assert diag[label] == 3 - bin(label).count("1")

    def test_parity_operator(self):
        p = realize(parity_operator(2))
        diag = np.diag(p).real
        for label in range(4):
            occ = 2 - bin(label).count("1")
            assert diag[label] == (-1) ** occ
        assert np.array_equal(p @ p, np.eye(4))

    def test_on_site_relations(self):
        up, down = raising_op(0, 1), lowering_op(0, 1)
        assert (up * up).is_zero
        assert (down * down).is_zero
        assert up * down + down * up == OperatorSum.identity(1)
        assert up * down == number_site(0, 1)

    def test_cross_site_operators_commute(self):
        # distinct sites carry no string, so they commute rather than
        # anticommute; this is what separates them from fermion modes
        for a in (raising_op(0, 2), lowering_op(0, 2)):
            for b in (raising_op(1, 2), lowering_op(1, 2)):
                assert commutator(a, b).is_zero


class TestExpressions:
    def test_to_pauli_matches_operator_route(self):
        rng = random.Random(2)
        for _ in range(20):
            n = rng.randrange(1, 4)
            create_mask = rng.randrange(1 << n)
            annihilate_mask = rng.randrange(1 << n)
            expr = E.constant(1, n, "parafermion")
            direct = OperatorSum.identity(n)
            for i in reversed(range(n)):
                if create_mask >> i & 1:
                    expr = expr * pf("create", i, n)
                    direct = direct * raising_op(i, n)
            for i in reversed(range(n)):
                if annihilate_mask >> i & 1:
                    expr = expr * pf("annihilate", i, n)
                    direct = direct * lowering_op(i, n)
            assert to_pauli(expr) == direct

    def test_number_expression(self):
        assert to_pauli(E.number(1, 2, "parafermion")) == number_site(1, 2)

    def test_adjoint_round_trip(self):
        expr = pf("create", 0, 2) * pf("annihilate", 1, 2) * 3
        assert to_pauli(expr.adjoint()) == to_pauli(expr).adjoint()

    def test_species_guard(self):
        with pytest.raises(SpeciesError):
            pf("create", 0, 2) * E.create(1, 2, "fermion")
        with pytest.raises(SpeciesError):
            to_pauli(E.create(0, 2, "fermion"))

    def test_arithmetic(self):
        a = pf("annihilate", 0, 2)
        combo = 2 * a - a
        assert to_pauli(combo) == lowering_op(0, 2)


class TestEnumeration:
    def test_counts(self):
        for n in (1, 2, 3):
            assert len(enumerate_generators(n)) == 4**n

    def test_filters_partition_consistently(self):
        full = enumerate_generators(3)
        parity = {(i.n_created, i.n_annihilated, str(i.monomial().terms))
                  for i in enumerate_generators(3, filter="parity")}
        number = {(i.n_created, i.n_annihilated, str(i.monomial().terms))
                  for i in enumerate_generators(3, filter="number")}
        assert number <= parity
        for idx in full:
            assert idx.conserves_number == (idx.n_created == idx.n_annihilated)
            assert idx.conserves_parity == ((idx.n_created - idx.n_annihilated) % 2 == 0)

    def test_limit_guard(self):
        with pytest.raises(ValueError):
            enumerate_generators(9)
        assert len(enumerate_generators(3, limit=3)) == 64
        with pytest.raises(ValueError):
            enumerate_generators(2, filter="bogus")

    def test_mask_guard(self):
        with pytest.raises(ValueError):
            GeneratorIndex(2, 4, 0)

    def test_monomial_factor_order(self):
        idx = GeneratorIndex(3, 5, 2)
        ((_, factors),) = idx.monomial().terms
        assert factors == (("+", 2), ("+", 0), ("-", 1))
        assert idx.n_created == 2 and idx.n_annihilated == 1


class TestClassify:
    def test_hopping_conserves_both(self):
        hop = pf("create", 0, 3) * pf("annihilate", 1, 3)
        verdict = classify(to_pauli(hop + hop.adjoint()))
        assert verdict.conserves_number and verdict.conserves_parity
        assert verdict.support == frozenset({0, 1})

    def test_pairing_conserves_parity_only(self):
        pair = pf("annihilate", 0, 2) * pf("annihilate", 1, 2)
        verdict = classify(to_pauli(pair + pair.adjoint()))
        assert not verdict.conserves_number
        assert verdict.conserves_parity

    def test_linear_conserves_neither(self):
        lin = pf("annihilate", 0, 2)
        verdict = classify(to_pauli(lin + lin.adjoint()))
        assert not verdict.conserves_number
        assert not verdict.conserves_parity

    def test_requires_hermitian(self):
        with pytest.raises(ValueError):
            classify(raising_op(0, 1))


class TestBilinearTrios:
    def test_hopping_trio_closes_as_su2(self):
        tx, ty, tz = bilinear_su2((0, 1), 2)
        four_i = I_UNIT + I_UNIT + I_UNIT + I_UNIT
        assert commutator(tx, ty) == tz * four_i
        assert commutator(tz, tx) == ty * I_UNIT
        assert commutator(ty, tz) == tx * four_i

    def test_pairing_trio_closes_as_su2(self):
        tx, ty, tz = bilinear_su2((0, 1), 2, family="pairing")
        four_i = I_UNIT + I_UNIT + I_UNIT + I_UNIT
        assert commutator(tx, ty) == tz * four_i
        assert commutator(tz, tx) == ty * I_UNIT
        assert commutator(ty, tz) == tx * four_i

    def test_trios_are_hermitian(self):
        for family in ("hopping", "pairing"):
            for op in bilinear_su2((0, 2), 3, family=family):
                assert op.is_hermitian

    def test_bad_family(self):
        with pytest.raises(ValueError):
            bilinear_su2((0, 1), 2, family="squeeze")
