import random
from itertools import combinations

import numpy as np
import pytest

from mampcg import (
    CiThresholds,
    FamilyError,
    MixedGraph,
    QueryError,
    SemConfig,
    audit_faithfulness,
    component_conditionals,
    joint_covariance,
    partial_correlation,
    sample_parameters,
    separated,
)
from mampcg.gaussian import Covariance, SemParameters
from mampcg.randomgraphs import random_valid_graph

from .conftest import g


class TestSampleParameters:
    def test_single_node(self):
        params = sample_parameters(MixedGraph(nodes=("A",)), 3)
        assert params.beta == {"A": {}}
        (lam,) = params.lambdas
        assert lam.shape == (1, 1)
        assert 0.5 <= lam[0, 0] <= 1.5

    def test_beta_support_is_parent_set(self):
        rng = random.Random(21)
        for _ in range(10):
            graph = random_valid_graph(rng, "mamp", rng.choice((4, 5)))
            params = sample_parameters(graph, 11)
            for v, row in params.beta.items():
                assert set(row) == set(graph.parents((v,)))
                for value in row.values():
                    assert 0.1 <= abs(value) <= 1.0

    def test_square_zero_patterns(self, mamp_square):
        params = sample_parameters(mamp_square, 42)
        comp = next(c for c in params.component_nodes if "C" in c)
        lam = dict(zip(params.component_nodes, params.lambdas))[comp]
        pos = {v: i for i, v in enumerate(comp)}
        cde = [pos[v] for v in ("C", "D", "E")]
        precision = np.linalg.inv(lam[np.ix_(cde, cde)])
        # D -- E is absent inside the undirected block
        assert abs(precision[1, 2]) < 1e-12
        # C <-> F is absent across blocks
        assert abs(lam[pos["C"], pos["F"]]) < 1e-12
        # D <-> F and E <-> F are present
        assert abs(lam[pos["D"], pos["F"]]) > 1e-6
        assert abs(lam[pos["E"], pos["F"]]) > 1e-6

    def test_positive_definite_certified(self):
        rng = random.Random(6)
        for _ in range(15):
            graph = random_valid_graph(rng, "mamp", rng.choice((4, 5, 6)))
            params = sample_parameters(graph, 5)
            for lam in params.lambdas:
                assert np.min(np.linalg.eigvalsh(lam)) > 1e-9
            cov = joint_covariance(params)
            assert np.min(np.linalg.eigvalsh(cov.matrix)) > 1e-9

    def test_seed_determinism(self, mamp_square):
        a = sample_parameters(mamp_square, 42)
        b = sample_parameters(mamp_square, 42)
        assert a.beta == b.beta
        assert all(np.array_equal(x, y)
                   for x, y in zip(a.lambdas, b.lambdas))
        c = sample_parameters(mamp_square, 43)
        assert c.beta != a.beta

    def test_invalid_family(self, invalid_graph):
        with pytest.raises(FamilyError):
            sample_parameters(invalid_graph, 1)


class TestJointCovariance:
    def test_single_node(self):
        cov = joint_covariance(sample_parameters(MixedGraph(nodes=("A",)), 9))
        assert cov.matrix.shape == (1, 1)

    def test_hand_algebra_two_nodes(self):
        b = 0.7
        params = SemParameters(
            component_nodes=(("A",), ("B",)),
            beta={"A": {}, "B": {"A": b}},
            lambdas=(np.array([[1.0]]), np.array([[1.0]])),
            seed=0)
        cov = joint_covariance(params)
        expected = np.array([[1.0, b], [b, b * b + 1.0]])
        assert np.allclose(cov.matrix, expected, atol=1e-14)
        assert abs(partial_correlation(cov, "A", "B")
                   - b / np.sqrt(b * b + 1.0)) < 1e-12

    def test_round_trip_identities(self, mamp_square):
        params = sample_parameters(mamp_square, 7)
        cov = joint_covariance(params)
        for comp, lam in zip(params.component_nodes, params.lambdas):
            parents = sorted(mamp_square.parents(frozenset(comp)))
            beta_hat, lam_hat = component_conditionals(cov, comp, parents)
            assert np.max(np.abs(lam_hat - lam)) < 1e-10
            if parents:
                expected = np.array(
                    [[params.beta[v].get(p, 0.0) for p in parents]
                     for v in comp])
                assert np.max(np.abs(beta_hat - expected)) < 1e-10


class TestPartialCorrelation:
    def test_identity_covariance(self):
        cov = Covariance(("A", "B", "C"), np.eye(3))
        assert partial_correlation(cov, "A", "B") == 0.0
        assert partial_correlation(cov, "A", "B", ("C",)) == 0.0

    def test_chain_vanishes_given_middle(self):
        chain = g("A -> B", "B -> C")
        cov = joint_covariance(sample_parameters(chain, 1))
        assert abs(partial_correlation(cov, "A", "C", ("B",))) < 1e-12

    def test_bounds_and_errors(self):
        cov = Covariance(("A", "B"), np.array([[1.0, 0.5], [0.5, 1.0]]))
        rho = partial_correlation(cov, "A", "B")
        assert -1.0 <= rho <= 1.0
        with pytest.raises(QueryError):
            partial_correlation(cov, "A", "A")
        with pytest.raises(QueryError):
            partial_correlation(cov, "A", "B", ("B",))


class TestAudit:
    def test_thresholds_validate(self):
        with pytest.raises(QueryError):
            CiThresholds(zero_tol=1e-3, nonzero_floor=1e-5)

    def test_empty_graph_all_zero(self):
        bare = MixedGraph(nodes=("A", "B", "C"))
        report = audit_faithfulness(bare, seeds=(1, 2, 3))
        assert report.ok
        assert all(r.separated for r in report.records)
        assert report.worst_separated < 1e-7

    def test_kite_audit(self, kite):
        report = audit_faithfulness(kite)
        assert report.ok
        assert not report.markov_failures

    def test_square_audit(self, mamp_square):
        report = audit_faithfulness(mamp_square)
        assert report.ok
        assert not report.markov_failures and not report.unexcused

    def test_markov_soundness_every_seed(self):
        rng = random.Random(14)
        for _ in range(6):
            graph = random_valid_graph(rng, "mamp", rng.choice((4, 5)))
            cov = joint_covariance(sample_parameters(graph, 77))
            nodes = graph.node_list
            for a, b in combinations(nodes, 2):
                rest = [v for v in nodes if v not in (a, b)]
                for zmask in range(1 << len(rest)):
                    z = tuple(rest[i] for i in range(len(rest))
                              if zmask >> i & 1)
                    if separated(graph, a, b, z):
                        assert abs(partial_correlation(cov, a, b, z)) < 1e-7

    def test_report_summary_mentions_counts(self, kite):
        report = audit_faithfulness(kite, seeds=(5,))
        text = report.summary()
        assert "markov failures" in text and "seeds [5]" in text
