"""Seeded instance generators and their advertised guarantees."""

import numpy as np
import pytest

from sepdec.bipartite import local_filter_B, partial_trace_A
from sepdec.decompose import (
    SEPARABLE,
    b_independent_form,
    marginal_rank_separability,
    ppt_check,
)
from sepdec.errors import InfeasibleRanksError, NotBIndependentError
from sepdec.generators import (
    generate_b_independent,
    generate_entangled_pure,
    generate_marginal_rank,
)
from sepdec.matcore import rank_tol


def assert_terms_close(cd, truth, atol):
    assert cd.p == truth.p
    for (a1, b1), (a2, b2) in zip(cd.terms, truth.terms):
        assert np.linalg.norm(a1 - a2) < atol
        assert np.linalg.norm(b1 - b2) < atol


class TestGenerateBIndependent:
    def test_decomposer_recovers_truth(self):
        t, truth = generate_b_independent(2, 3, 2, ranks=[2, 1], seed=7)
        cd = b_independent_form(t)
        assert_terms_close(cd, truth, atol=1e-7)

    def test_single_term_product(self):
        t, truth = generate_b_independent(3, 3, 1, ranks=[2], seed=1)
        assert truth.p == 1
        cd = b_independent_form(t)
        assert cd.p == 1

    def test_full_ranks_span_marginal_support(self):
        t, truth = generate_b_independent(2, 4, 2, ranks=[2, 2], seed=3)
        fp = local_filter_B(t)
        assert np.allclose(fp.p_b, np.eye(4), atol=1e-9)

    def test_unit_trace(self):
        t, _ = generate_b_independent(2, 3, 2, ranks=[1, 1], seed=5)
        assert np.trace(t.mat).real == pytest.approx(1.0, abs=1e-12)

    def test_a_ranks_respected(self):
        _, truth = generate_b_independent(
            3, 4, 2, ranks=[2, 1], seed=9, a_ranks=[1, 2]
        )
        got = sorted(rank_tol(a) for a, _ in truth.terms)
        assert got == [1, 2]

    def test_deterministic(self):
        t1, _ = generate_b_independent(2, 3, 2, ranks=[1, 2], seed=42)
        t2, _ = generate_b_independent(2, 3, 2, ranks=[1, 2], seed=42)
        assert np.array_equal(t1.mat, t2.mat)
        t3, _ = generate_b_independent(2, 3, 2, ranks=[1, 2], seed=43)
        assert not np.allclose(t1.mat, t3.mat)

    def test_infeasible_ranks(self):
        with pytest.raises(InfeasibleRanksError):
            generate_b_independent(2, 3, 2, ranks=[2, 2], seed=0)
        with pytest.raises(InfeasibleRanksError):
            generate_b_independent(2, 3, 1, ranks=[], seed=0)
        with pytest.raises(InfeasibleRanksError):
            generate_b_independent(2, 3, 2, ranks=[1, 1], seed=0, a_ranks=[3, 1])


class TestGenerateMarginalRank:
    def test_separable_with_rank_one_terms(self):
        t, truth = generate_marginal_rank(2, 2, 2, seed=11)
        verdict = marginal_rank_separability(t)
        assert verdict.status == SEPARABLE
        assert verdict.decomposition.p == 2
        for a, b in verdict.decomposition.terms:
            assert rank_tol(a) == 1
            assert rank_tol(b) == 1
        assert ppt_check(t)

    def test_rank_condition_holds(self):
        t, _ = generate_marginal_rank(3, 4, 3, seed=12)
        assert rank_tol(t.mat) == 3
        assert rank_tol(partial_trace_A(t)) == 3

    def test_full_marginal_when_p_equals_n(self):
        t, _ = generate_marginal_rank(2, 3, 3, seed=13)
        assert rank_tol(partial_trace_A(t)) == 3

    def test_convex_weights(self):
        t, truth = generate_marginal_rank(2, 3, 2, seed=14)
        assert np.trace(t.mat).real == pytest.approx(1.0, abs=1e-12)
        assert sum(np.trace(b).real for _, b in truth.terms) == pytest.approx(1.0, abs=1e-12)

    def test_recovery_matches_truth(self):
        t, truth = generate_marginal_rank(3, 3, 2, seed=15)
        cd = b_independent_form(t)
        assert_terms_close(cd, truth, atol=1e-7)

    def test_infeasible(self):
        with pytest.raises(InfeasibleRanksError):
            generate_marginal_rank(2, 2, 3, seed=0)


class TestGenerateEntangledPure:
    def test_bell_like_is_npt(self):
        t = generate_entangled_pure(2, 2, 2, seed=21)
        assert not ppt_check(t)
        pt = t.mat.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        assert np.linalg.eigvalsh(pt).min() <= -1e-3

    def test_not_marginal_rank(self):
        t = generate_entangled_pure(3, 3, 3, seed=22)
        assert rank_tol(t.mat) == 1
        assert rank_tol(partial_trace_A(t)) == 3
        assert marginal_rank_separability(t).status == "not_marginal_rank"

    def test_rejected_by_decomposer(self):
        t = generate_entangled_pure(2, 3, 2, seed=23)
        with pytest.raises(NotBIndependentError) as exc:
            b_independent_form(t)
        assert exc.value.diagnostics is not None

    def test_unit_trace_pure(self):
        t = generate_entangled_pure(2, 2, 2, seed=24)
        assert np.trace(t.mat).real == pytest.approx(1.0, abs=1e-12)
        assert rank_tol(t.mat) == 1

    def test_infeasible_rank(self):
        with pytest.raises(InfeasibleRanksError):
            generate_entangled_pure(2, 2, 3, seed=0)
        with pytest.raises(InfeasibleRanksError):
            generate_entangled_pure(2, 2, 1, seed=0)
