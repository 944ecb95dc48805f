"""AP/mAP scoring against an exact-rational oracle, and scenario equality."""

from fractions import Fraction

import numpy as np
import pytest

from etcbir.codebook import ClusteringConfig
from etcbir.errors import ValidationError
from etcbir.evaluation import ScenarioConfig, average_precision, mean_ap, run_scenario
from etcbir.manifest import load_manifest

from conftest import make_group_corpus, write_corpus


def ap_oracle(ranking, relevant, group_size):
    """Independent evaluation of the AP sum in exact rational arithmetic."""
    total = Fraction(0)
    for n in range(1, len(ranking) + 1):
        if ranking[n - 1] in relevant:
            tp_at_n = sum(1 for r in ranking[:n] if r in relevant)
            total += Fraction(tp_at_n, n)
    return total / group_size


def test_perfect_ranking_scores_one():
    ranking = ["a", "b", "c", "d"]
    assert average_precision(ranking, {"a", "b"}, 2, 4) == 1.0


def test_hand_case_relevant_at_ranks_one_and_three():
    ranking = ["hit", "miss1", "hit2", "miss2"]
    relevant = {"hit", "hit2"}
    exact = ap_oracle(ranking, relevant, 2)
    assert exact == Fraction(5, 6)
    assert abs(average_precision(ranking, relevant, 2, 4) - float(exact)) < 1e-12


def test_single_relevant_at_last_rank_scores_one_over_n():
    n = 7
    ranking = [f"m{i}" for i in range(n - 1)] + ["hit"]
    assert average_precision(ranking, {"hit"}, 1, n) == 1.0 / n


def test_mismatched_lengths_rejected():
    with pytest.raises(ValidationError):
        average_precision(["a", "b"], {"a"}, 1, 3)
    with pytest.raises(ValidationError):
        average_precision(["a", "b"], {"a", "b", "c"}, 2, 2)


def test_ap_matches_oracle_on_random_rankings():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(1, 51))
        ids = [f"im{i}" for i in range(n)]
        order = rng.permutation(n)
        ranking = [ids[i] for i in order]
        g = int(rng.integers(1, n + 1))
        relevant = set(rng.choice(ids, size=g, replace=False).tolist())
        got = average_precision(ranking, relevant, g, n)
        assert abs(got - float(ap_oracle(ranking, relevant, g))) < 1e-12
        assert 0.0 <= got <= 1.0


def test_ap_is_one_iff_relevant_fill_top_ranks():
    ranking = ["a", "x", "b", "y"]
    assert average_precision(ranking, {"a", "b"}, 2, 4) < 1.0
    assert average_precision(["a", "b", "x", "y"], {"a", "b"}, 2, 4) == 1.0


def test_mean_ap_values_and_empty_error():
    assert mean_ap([1.0, 1.0]) == 1.0
    assert mean_ap([1.0, 0.5]) == 0.75
    with pytest.raises(ValidationError):
        mean_ap([])


def _scenario(stored, query, queries=None):
    return ScenarioConfig(
        stored_kind=stored,
        query_kind=query,
        clustering=ClusteringConfig(m=12, seed=21),
        store_key_seed=5150,
        query_key_seed=6160,
        query_ids=queries,
    )


def test_three_scenarios_score_identical_map(tmp_path):
    corpus = make_group_corpus(seed=17, groups=4, members=3, width=64, height=48)
    rows = load_manifest(write_corpus(tmp_path / "corpus", corpus))

    plain_plain = run_scenario(rows, _scenario("plain", "plain"))
    etc_etc = run_scenario(rows, _scenario("etc", "etc"))
    etc_query_plain_store = run_scenario(rows, _scenario("plain", "etc"))

    assert 0.0 < plain_plain.mean_average_precision <= 1.0
    assert (
        plain_plain.mean_average_precision
        == etc_etc.mean_average_precision
        == etc_query_plain_store.mean_average_precision
    )
    assert plain_plain.per_query == etc_etc.per_query == etc_query_plain_store.per_query


def test_scenario_query_subset_and_unknown_id(tmp_path):
    corpus = make_group_corpus(seed=18, groups=2, members=2, width=48, height=48)
    rows = load_manifest(write_corpus(tmp_path / "corpus", corpus))
    ids = tuple(row.image_id for row in rows[:2])
    report = run_scenario(rows, _scenario("plain", "plain", queries=ids))
    assert [q for q, _ in report.per_query] == list(ids)
    assert report.config["query_count"] == 2
    with pytest.raises(ValidationError):
        run_scenario(rows, _scenario("plain", "plain", queries=("nope",)))


def test_self_match_flag_changes_scoring(tmp_path):
    corpus = make_group_corpus(seed=19, groups=2, members=3, width=48, height=48)
    rows = load_manifest(write_corpus(tmp_path / "corpus", corpus))
    config = ScenarioConfig(
        stored_kind="plain",
        query_kind="plain",
        clustering=ClusteringConfig(m=8, seed=3),
        count_self_match=False,
    )
    report = run_scenario(rows, config)
    # without the self hit at rank 1, scores can only drop or hold
    with_self = run_scenario(
        rows,
        ScenarioConfig(
            stored_kind="plain",
            query_kind="plain",
            clustering=ClusteringConfig(m=8, seed=3),
            count_self_match=True,
        ),
    )
    assert report.mean_average_precision <= with_self.mean_average_precision


def test_scenario_config_validates_kinds():
    with pytest.raises(ValidationError):
        ScenarioConfig(
            stored_kind="plane",
            query_kind="plain",
            clustering=ClusteringConfig(m=2, seed=0),
        )
