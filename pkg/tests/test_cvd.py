"""Determinant criterion: witness values, antisymmetry, error estimates, and
the sign-change search."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neumann_widths import (DomainError, NeumannParams, NodeVectors, NotFound,
                            builtin_witnesses, cvd_witness, det_D,
                            neumann_evaluator, neumann_pair_evaluator)
from neumann_widths.cvd import _det_full_pivot, _det_full_pivot_dd
from neumann_widths.compensated import dd_from

# determinants at the built-in q = 0.21 witnesses, frozen from a 40-digit
# direct-summation evaluation
D_NEG_BETA0 = -2.7490707450445169e-10
D_POS_BETA0 = 1.09109869190109031e-6
D_NEG_BETA1 = -5.1709070375633059e-10
D_POS_BETA1 = 3.99375164827956107e-6


def kernels_for(beta):
    params = NeumannParams(0.21, beta)
    return neumann_evaluator(params), neumann_pair_evaluator(params)


class TestNodeVectors:
    def test_validation(self):
        with pytest.raises(DomainError):
            NodeVectors(x=(0.0, 1.0), y=(0.0, 1.0))  # even length
        with pytest.raises(DomainError):
            NodeVectors(x=(1.0, 0.5, 2.0), y=(0.1, 0.2, 0.3))  # not increasing
        with pytest.raises(DomainError):
            NodeVectors(x=(0.1, 0.2, 7.0), y=(0.1, 0.2, 0.3))  # out of range

    def test_builtin_json_roundtrip_is_exact(self):
        neg, pos = builtin_witnesses()
        for nodes in (neg, pos):
            back = NodeVectors.from_json_dict(nodes.to_json_dict())
            assert back.x == nodes.x and back.y == nodes.y

    def test_float_json_roundtrip_within_ulp(self):
        nodes = NodeVectors(x=(0.1, 1.7, 2.9), y=(0.4, 3.3, 5.1))
        back = NodeVectors.from_json_dict(nodes.to_json_dict())
        for a, b in zip(nodes.x + nodes.y, back.x + back.y):
            assert b == pytest.approx(a, rel=1e-15)


class TestDeterminants:
    def test_one_by_one(self):
        kernel, _ = kernels_for(0.0)
        nodes = NodeVectors(x=(1.0,), y=(2.0,))
        res = det_D(kernel, nodes, epsilon=1)
        assert res.value == pytest.approx(kernel(-1.0), abs=1e-15)

    @pytest.mark.parametrize("beta,expected_neg,expected_pos", [
        (0.0, D_NEG_BETA0, D_POS_BETA0),
        (1.0, D_NEG_BETA1, D_POS_BETA1),
    ])
    def test_witness_values(self, beta, expected_neg, expected_pos):
        kernel, pair = kernels_for(beta)
        neg, pos = builtin_witnesses()
        r_neg = det_D(kernel, neg, kernel_pair=pair, entry_tol=1e-16)
        r_pos = det_D(kernel, pos, kernel_pair=pair, entry_tol=1e-16)
        assert r_neg.value == pytest.approx(expected_neg, rel=1e-5)
        assert r_pos.value == pytest.approx(expected_pos, rel=1e-9)
        assert r_neg.significant and r_pos.significant

    @pytest.mark.parametrize("beta", [0.0, 1.0])
    def test_error_estimate_below_ten_percent(self, beta):
        kernel, pair = kernels_for(beta)
        for nodes in builtin_witnesses():
            res = det_D(kernel, nodes, kernel_pair=pair, entry_tol=1e-16)
            assert res.error_estimate < 0.1 * abs(res.value)

    def test_epsilon_antisymmetry(self):
        kernel, _ = kernels_for(0.0)
        neg, _ = builtin_witnesses()
        plus = det_D(kernel, neg, epsilon=1)
        minus = det_D(kernel, neg, epsilon=-1)
        scale = 6 * 0.25**3
        assert abs(plus.value + minus.value) <= 1e-16 * scale

    def test_row_swap_flips_sign(self):
        kernel, _ = kernels_for(0.0)
        neg, _ = builtin_witnesses()
        m = [[kernel(xi - yj) for yj in neg.y] for xi in neg.x]
        swapped = [m[1], m[0], m[2]]
        assert _det_full_pivot(swapped) == -_det_full_pivot(m)

    def test_dd_elimination_exact_on_integers(self):
        m = [[dd_from(v) for v in row]
             for row in ((2.0, 1.0, 1.0), (1.0, 3.0, 2.0), (1.0, 0.0, 0.0))]
        assert _det_full_pivot_dd(m) == -1.0  # cofactor expansion by hand

    def test_near_singular_triggers_extended(self):
        kernel = math.cos  # rank-2 kernel: every 3x3 determinant vanishes
        nodes = NodeVectors(x=(0.3, 1.1, 2.0), y=(0.5, 1.9, 4.0))
        res = det_D(kernel, nodes)
        assert res.used_extended
        assert not res.significant
        assert abs(res.value) <= 1e-13


class TestWitnessSearch:
    def test_seeded_with_builtin_is_immediate(self):
        kernel, _ = kernels_for(0.0)
        neg, pos = cvd_witness(kernel, 1, search_budget=10, seeds=builtin_witnesses())
        assert det_D(kernel, neg).value < 0.0 < det_D(kernel, pos).value

    def test_random_search_rediscovers_sign_change(self):
        kernel, _ = kernels_for(1.0)
        neg, pos = cvd_witness(kernel, 1, search_budget=100_000, rng_seed=0)
        r_neg, r_pos = det_D(kernel, neg), det_D(kernel, pos)
        assert r_neg.value < 0.0 < r_pos.value
        assert r_neg.significant and r_pos.significant

    def test_rank_deficient_kernel_not_found(self):
        with pytest.raises(NotFound):
            cvd_witness(math.cos, 1, search_budget=300, rng_seed=1)

    def test_search_is_deterministic(self):
        kernel, _ = kernels_for(0.0)
        a = cvd_witness(kernel, 1, search_budget=5_000, rng_seed=7)
        b = cvd_witness(kernel, 1, search_budget=5_000, rng_seed=7)
        assert a == b

    def test_seed_size_mismatch(self):
        kernel, _ = kernels_for(0.0)
        with pytest.raises(DomainError):
            cvd_witness(kernel, 2, search_budget=10, seeds=builtin_witnesses())


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=10, deadline=None)
def test_random_nodes_always_valid(seed):
    import random

    from neumann_widths.cvd import _random_nodes

    nodes = _random_nodes(random.Random(seed), 5)
    assert len(nodes.x) == 5
    assert all(a < b for a, b in zip(nodes.x, nodes.x[1:]))
    assert all(0.0 <= v < 2 * math.pi for v in nodes.x + nodes.y)
