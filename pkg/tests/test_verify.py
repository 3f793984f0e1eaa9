"""Generators and suite plumbing behind the verification harness."""

import random

import pytest

from nodalcalc import (
    ALL_SUITES,
    DualGraph,
    VerifyConfig,
    classify,
    elliptic_bridge,
    interval_sum_range,
    modify,
    run_suite,
    run_verification,
    stable_model,
    theta_graph,
)
from nodalcalc.verify import (
    admissible_sequences,
    chain_twister_options,
    check_biss_instance,
    check_famchain2_instance,
    check_pushforward_instance,
    exhaustive_instances,
    expected_contraction,
    quasistable_models,
    random_admissible_multidegree,
    random_graph,
    random_modification,
    random_stable_graph,
)


class TestConfig:
    def test_defaults(self):
        cfg = VerifyConfig()
        assert cfg.suites == ALL_SUITES
        assert cfg.seed == 0
        assert cfg.instance_count == 50

    def test_unknown_suite(self):
        with pytest.raises(ValueError, match="unknown"):
            VerifyConfig(suites=("pushforward", "nope"))

    def test_suite_order_normalized(self):
        cfg = VerifyConfig(suites=("roundtrip", "pushforward", "roundtrip"))
        assert cfg.suites == ("pushforward", "roundtrip")

    def test_positive_bounds(self):
        with pytest.raises(ValueError, match="instance_count"):
            VerifyConfig(instance_count=0)
        with pytest.raises(ValueError, match="max_vertices"):
            VerifyConfig(max_vertices=-1)

    def test_json_round(self):
        cfg = VerifyConfig(seed=7, degree_window=3)
        data = cfg.to_json_dict()
        assert data["seed"] == 7
        assert data["degree_window"] == 3
        assert data["suites"] == list(ALL_SUITES)


class TestSequenceFamilies:
    def test_length_one(self):
        assert admissible_sequences(1) == ((-1,), (0,), (1,))

    def test_length_two_count(self):
        seqs = admissible_sequences(2)
        assert len(seqs) == 7
        assert (1, 1) not in seqs
        assert (-1, -1) not in seqs

    def test_all_interval_sums_bounded(self):
        for n in range(1, 5):
            for seq in admissible_sequences(n):
                lo, hi = interval_sum_range(seq)
                assert -1 <= lo and hi <= 1

    def test_twister_zero_always_present(self):
        for seq in admissible_sequences(2):
            options = chain_twister_options(seq)
            assert ((0, 0), seq) in options

    def test_twisted_sequences_admissible(self):
        for seq in admissible_sequences(3):
            for _, twisted in chain_twister_options(seq):
                lo, hi = interval_sum_range(twisted)
                assert -1 <= lo and hi <= 1

    def test_twister_nontrivial_option(self):
        # shifting (1, -1) one step along the chain stays admissible
        options = dict(chain_twister_options((1, -1)))
        assert options[(1, 0)] == (-1, 0)


class TestExhaustiveFamily:
    def test_bridge_count_small(self):
        pairs = list(exhaustive_instances(elliptic_bridge(), max_eta=1, plain_window=0))
        # one edge: untouched or one of three length-1 chain degrees
        assert len(pairs) == 4

    def test_bridge_count_window(self):
        pairs = list(exhaustive_instances(elliptic_bridge(), max_eta=2, plain_window=1))
        # (1 + 3 + 7) edge options, 3^2 plain assignments each
        assert len(pairs) == 99

    def test_instances_admissible(self):
        from nodalcalc import admissibility

        for mod, deg in exhaustive_instances(elliptic_bridge(), max_eta=2, plain_window=1):
            assert admissibility(mod, deg).admissible

    def test_deterministic_order(self):
        first = [
            (mod.lengths, deg.as_dict)
            for mod, deg in exhaustive_instances(theta_graph(), max_eta=1, plain_window=0)
        ]
        second = [
            (mod.lengths, deg.as_dict)
            for mod, deg in exhaustive_instances(theta_graph(), max_eta=1, plain_window=0)
        ]
        assert first == second


class TestRandomGenerators:
    def test_graph_bounds(self):
        rng = random.Random(11)
        for _ in range(200):
            g = random_graph(rng, max_vertices=5, max_genus=3)
            assert 1 <= len(g.vertex_ids) <= 5
            assert 0 <= g.genus <= 3

    def test_stable_graphs(self):
        rng = random.Random(12)
        for _ in range(100):
            g = random_stable_graph(rng, max_vertices=5, max_genus=3)
            assert classify(g) == "stable"
            assert g.genus >= 2

    def test_modification_lengths(self):
        rng = random.Random(13)
        for _ in range(50):
            mod = random_modification(rng, theta_graph(), chain_length_max=3)
            assert all(1 <= n <= 3 for n in mod.lengths.values())
            assert stable_model(mod.source) == expected_contraction(mod)

    def test_admissible_multidegree(self):
        rng = random.Random(14)
        for _ in range(50):
            mod = random_modification(rng, theta_graph(), chain_length_max=3)
            deg = random_admissible_multidegree(rng, mod, plain_window=2)
            for _, chain in mod.chain_registry:
                lo, hi = interval_sum_range(tuple(deg[v] for v in chain))
                assert -1 <= lo and hi <= 1


class TestInstanceChecks:
    def test_clean_instances_pass(self):
        for mod, deg in exhaustive_instances(elliptic_bridge(), max_eta=1, plain_window=1):
            assert check_pushforward_instance(mod, deg) == []
            assert check_famchain2_instance(mod, deg) == []

    def test_biss_instances_pass(self):
        # degree 1 on every chain vertex is the check's precondition
        for mod, deg in quasistable_models(theta_graph(), degree_bound=2, plain_window=2):
            assert check_biss_instance(mod, deg) == []

    def test_quasistable_family(self):
        models = list(quasistable_models(theta_graph(), degree_bound=2, plain_window=2))
        assert models
        for mod, deg in models:
            assert classify(mod.source) in ("stable", "quasistable")
            assert all(n == 1 for n in mod.lengths.values())
            assert all(deg[c] == 1 for c in mod.chain_vertices)
            assert abs(deg.total) <= 2

    def test_expected_contraction_matches(self):
        mod = modify(theta_graph(), {"e1": 2, "e3": 1})
        assert expected_contraction(mod) == stable_model(mod.source)


class TestSuiteRunner:
    SMALL = VerifyConfig(
        suites=("chain-cohomology", "roundtrip"),
        seed=5,
        instance_count=3,
        max_vertices=4,
        max_genus=3,
        degree_window=2,
        chain_length_max=2,
    )

    def test_run_suite_counts(self):
        result = run_suite("chain-cohomology", self.SMALL)
        # exhaustive: 7 + 49 sequences for lengths 1 and 2
        assert result.cases == 56
        assert result.failures == []

    def test_unknown_suite_name(self):
        with pytest.raises(KeyError):
            run_suite("nope", self.SMALL)

    def test_report_structure(self):
        report = run_verification(self.SMALL)
        assert report["ok"] is True
        assert report["config"] == self.SMALL.to_json_dict()
        assert set(report["suites"]) == {"chain-cohomology", "roundtrip"}
        for entry in report["suites"].values():
            assert entry["status"] == "pass"
            assert entry["cases"] > 0
            assert "failures" not in entry

    def test_report_deterministic(self):
        assert run_verification(self.SMALL) == run_verification(self.SMALL)
