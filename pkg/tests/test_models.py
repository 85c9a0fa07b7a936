"""Sampling models: spec validation, determinism, and edge densities."""

import math

import numpy as np
import pytest

from subgraph_sentinel.errors import InvalidSpecError
from subgraph_sentinel.models import (
    ModelSpec,
    effective_p0,
    index_from_pair,
    pair_count,
    pair_from_index,
    sample,
    sample_with_witness,
    stream_rng,
)


class TestSpecValidation:
    def test_null_round_trip(self):
        spec = ModelSpec.null(50, 0.2)
        assert ModelSpec.from_json(spec.to_json()) == spec

    def test_planted_round_trip(self):
        spec = ModelSpec.planted(50, 0.2, 0.7, 5, planted_set=range(5))
        back = ModelSpec.from_json(spec.to_json())
        assert back == spec
        assert back.planted_set == (0, 1, 2, 3, 4)

    def test_fixed_degree_round_trip(self):
        spec = ModelSpec.planted_fixed_degree(50, 0.2, 0.7, 5)
        assert ModelSpec.from_json(spec.to_json()) == spec

    @pytest.mark.parametrize(
        "bad",
        [
            dict(variant="nope", N=10, p0=0.5),
            dict(variant="null", N=0, p0=0.5),
            dict(variant="null", N=10),
            dict(variant="null", N=10, p0=0.0),
            dict(variant="null", N=10, p0=1.5),
            dict(variant="null", N=10, p0=0.5, n=3),
            dict(variant="planted", N=10, p0=0.5, p1=0.4, n=3),
            dict(variant="planted", N=10, p0=0.5, p1=0.9, n=11),
            dict(variant="planted", N=10, p0=0.5, p1=0.9, n=3, planted_set=(0, 1)),
            dict(variant="planted", N=10, p0=0.5, p1=0.9, n=3, p0_prime=0.5),
            dict(variant="planted_fixed_degree", N=10, p0_prime=0.5, p1=0.4, n=3),
            dict(variant="planted_fixed_degree", N=10, p0=0.5, p1=0.9, n=3),
        ],
    )
    def test_invalid_specs(self, bad):
        with pytest.raises(InvalidSpecError):
            ModelSpec(**bad)

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(InvalidSpecError):
            ModelSpec.from_dict({"variant": "null", "N": 10, "p0": 0.5, "zzz": 1})

    def test_from_json_rejects_non_object(self):
        with pytest.raises(InvalidSpecError):
            ModelSpec.from_json("[1, 2]")
        with pytest.raises(InvalidSpecError):
            ModelSpec.from_json("{not json")

    def test_planted_set_normalized_sorted(self):
        spec = ModelSpec.planted(10, 0.5, 0.9, 3, planted_set=(7, 2, 5))
        assert spec.planted_set == (2, 5, 7)

    def test_matched_null_planted(self):
        spec = ModelSpec.planted(10, 0.3, 0.9, 3)
        assert spec.matched_null() == ModelSpec.null(10, 0.3)

    def test_matched_null_fixed_degree(self):
        spec = ModelSpec.planted_fixed_degree(20, 0.1, 0.6, 5)
        null = spec.matched_null()
        assert null.p0 == pytest.approx(effective_p0(0.1, 0.6, 5, 20), rel=1e-15)


class TestEffectiveP0:
    def test_balances_expected_totals(self):
        for (N, n, pp, p1) in [(20, 5, 0.1, 0.6), (400, 80, 0.1, 0.5), (7, 2, 0.3, 0.9)]:
            p0 = effective_p0(pp, p1, n, N)
            lhs = pair_count(N) * p0
            rhs = (pair_count(N) - pair_count(n)) * pp + pair_count(n) * p1
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_degenerate_cases(self):
        assert effective_p0(0.1, 0.6, 1, 20) == pytest.approx(0.1)
        assert effective_p0(0.1, 0.6, 20, 20) == pytest.approx(0.6)


class TestPairIndexing:
    @pytest.mark.parametrize("N", [2, 3, 7, 64, 65, 100])
    def test_bijection(self, N):
        ks = np.arange(pair_count(N))
        i, j = pair_from_index(ks, N)
        assert np.all((0 <= i) & (i < j) & (j < N))
        assert np.array_equal(index_from_pair(i, j, N), ks)
        # every pair hit exactly once
        assert len({(a, b) for a, b in zip(i, j)}) == pair_count(N)

    def test_row_major_order(self):
        i, j = pair_from_index(np.arange(6), 4)
        assert list(zip(i, j)) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def test_large_N_no_float_drift(self):
        N = 100_000
        ks = np.array([0, 1, N - 2, N - 1, pair_count(N) - 1,
                       pair_count(N) // 2], dtype=np.int64)
        i, j = pair_from_index(ks, N)
        assert np.array_equal(index_from_pair(i, j, N), ks)


class TestSampling:
    def test_deterministic_per_stream(self):
        spec = ModelSpec.planted(40, 0.2, 0.8, 6)
        g1, w1 = sample_with_witness(spec, 123, 7)
        g2, w2 = sample_with_witness(spec, 123, 7)
        assert g1 == g2
        assert np.array_equal(w1, w2)

    def test_streams_differ(self):
        spec = ModelSpec.null(40, 0.2)
        assert sample(spec, 123, 0) != sample(spec, 123, 1)
        assert sample(spec, 123, 0) != sample(spec, 124, 0)

    def test_negative_stream_rejected(self):
        with pytest.raises(InvalidSpecError):
            stream_rng(5, -1)

    def test_fixed_witness_respected(self):
        spec = ModelSpec.planted(30, 0.1, 0.9, 5, planted_set=(3, 9, 11, 20, 29))
        for idx in range(5):
            _, w = sample_with_witness(spec, 99, idx)
            assert tuple(w) == (3, 9, 11, 20, 29)

    def test_random_witness_varies(self):
        spec = ModelSpec.planted(30, 0.1, 0.9, 5)
        seen = {tuple(sample_with_witness(spec, 99, idx)[1]) for idx in range(20)}
        assert len(seen) > 1

    def test_null_witness_is_none(self):
        _, w = sample_with_witness(ModelSpec.null(20, 0.3), 1, 0)
        assert w is None

    def test_null_density(self):
        # 200 reps of C(60,2)=1770 pairs at p0=.25: SE of mean density ~ .0007
        spec = ModelSpec.null(60, 0.25)
        dens = [sample(spec, 2024, i).total_edges() / pair_count(60) for i in range(200)]
        assert abs(np.mean(dens) - 0.25) < 4 * math.sqrt(0.25 * 0.75 / (200 * 1770))

    def test_planted_block_density(self):
        spec = ModelSpec.planted(50, 0.1, 0.8, 8, planted_set=tuple(range(8)))
        inside, outside = [], []
        for i in range(200):
            g = sample(spec, 77, i)
            w_in = g.subgraph_edges(range(8))
            inside.append(w_in / pair_count(8))
            outside.append((g.total_edges() - w_in) / (pair_count(50) - pair_count(8)))
        assert abs(np.mean(inside) - 0.8) < 4 * math.sqrt(0.8 * 0.2 / (200 * 28))
        assert abs(np.mean(outside) - 0.1) < 4 * math.sqrt(0.1 * 0.9 / (200 * 1197))

    def test_sparse_and_dense_paths_same_distribution(self):
        # p0=.04 uses geometric skips, p0=.06 thresholds uniforms; both must
        # hit their nominal density
        for p0 in (0.04, 0.06):
            spec = ModelSpec.null(80, p0)
            dens = [sample(spec, 31, i).total_edges() / pair_count(80)
                    for i in range(300)]
            se = math.sqrt(p0 * (1 - p0) / (300 * pair_count(80)))
            assert abs(np.mean(dens) - p0) < 4 * se

    def test_extreme_probabilities(self):
        g = sample(ModelSpec.planted(12, 1.0, 1.0, 3), 0, 0)
        assert g == __import__("subgraph_sentinel").Graph.complete(12)
        spec = ModelSpec.planted(12, 0.001, 1.0, 4, planted_set=(0, 1, 2, 3))
        g = sample(spec, 5, 0)
        assert g.subgraph_edges(range(4)) == 6

    def test_fixed_degree_total_matches_matched_null(self):
        # expected total edges under alt == under matched null, by construction
        spec = ModelSpec.planted_fixed_degree(60, 0.1, 0.7, 12,
                                              planted_set=tuple(range(12)))
        null = spec.matched_null()
        alt_tot = np.mean([sample(spec, 8, i).total_edges() for i in range(300)])
        null_tot = np.mean([sample(null, 9, i).total_edges() for i in range(300)])
        expected = pair_count(60) * null.p0
        se = math.sqrt(expected)  # generous: binomial sd < sqrt(mean) scale
        assert abs(alt_tot - expected) < 4 * se / math.sqrt(300) * 3
        assert abs(null_tot - expected) < 4 * se / math.sqrt(300) * 3
