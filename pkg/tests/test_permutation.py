"""Rank permutations and longest monotone subsequence lengths."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lisind.permutation import (
    EmptySampleError,
    LisResult,
    PairedSample,
    Permutation,
    TiePolicy,
    TiesPresentError,
    lis_lds,
    permutation_from_sample,
)

from oracles import double_rank_permutation, lds_dp, lis_dp

# Worked five-pair sample whose rank permutation is (4, 1, 5, 2, 3).
SAMPLE_PAIRS = [(4.16, 3.25), (1.15, 3.5), (2.51, 4.17), (3.61, 3.18), (1.81, 2.86)]


def _random_distinct_pairs(rng: np.random.Generator, n: int) -> PairedSample:
    return PairedSample.from_arrays(rng.random(n), rng.random(n))


class TestPairedSample:
    def test_basic_construction(self):
        sample = PairedSample(SAMPLE_PAIRS)
        assert sample.n == 5
        assert sample.pairs[0] == (4.16, 3.25)
        np.testing.assert_array_equal(sample.xs, [p[0] for p in SAMPLE_PAIRS])
        np.testing.assert_array_equal(sample.ys, [p[1] for p in SAMPLE_PAIRS])

    def test_from_arrays_matches_pairs(self):
        sample = PairedSample.from_arrays([1.0, 2.0], [3.0, 4.0])
        assert sample.pairs == ((1.0, 3.0), (2.0, 4.0))

    def test_empty_rejected(self):
        with pytest.raises(EmptySampleError):
            PairedSample([])

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(ValueError):
            PairedSample([(1.0, bad)])

    def test_mismatched_arrays_rejected(self):
        with pytest.raises(ValueError):
            PairedSample.from_arrays([1.0, 2.0], [3.0])

    def test_tie_detection(self):
        tied_x = PairedSample([(1.0, 1.0), (1.0, 2.0)])
        assert tied_x.has_tied_x() and not tied_x.has_tied_y()
        tied_y = PairedSample([(1.0, 2.0), (3.0, 2.0)])
        assert tied_y.has_tied_y() and not tied_y.has_tied_x()


class TestPermutationType:
    def test_valid_image(self):
        perm = Permutation([2, 3, 1])
        assert perm.n == 3
        assert perm.image == (2, 3, 1)

    @pytest.mark.parametrize("image", [[], [2], [1, 1], [1, 3], [0, 1]])
    def test_invalid_images_rejected(self, image):
        with pytest.raises(ValueError):
            Permutation(image)

    def test_inverse(self):
        perm = Permutation([3, 1, 4, 2])
        assert perm.inverse().image == (2, 4, 1, 3)
        assert perm.inverse().inverse().image == perm.image


class TestPermutationFromSample:
    def test_worked_five_pair_sample(self):
        perm = permutation_from_sample(PairedSample(SAMPLE_PAIRS))
        assert perm.image == (4, 1, 5, 2, 3)

    def test_comonotone_sample_gives_identity(self):
        perm = permutation_from_sample(PairedSample([(1, 10), (2, 20), (3, 30)]))
        assert perm.image == (1, 2, 3)

    def test_matches_double_rank_oracle_on_seeded_samples(self):
        rng = np.random.default_rng(20260814)
        for n in (1, 2, 3, 7, 50):
            sample = _random_distinct_pairs(rng, n)
            expected = double_rank_permutation(sample.xs.tolist(), sample.ys.tolist())
            assert permutation_from_sample(sample).image == expected

    def test_ties_rejected_by_default(self):
        with pytest.raises(TiesPresentError):
            permutation_from_sample(PairedSample([(1.0, 5.0), (1.0, 6.0)]))
        with pytest.raises(TiesPresentError):
            permutation_from_sample(PairedSample([(1.0, 5.0), (2.0, 5.0)]))

    def test_random_break_is_seeded_and_valid(self):
        sample = PairedSample([(1.0, 2.0), (1.0, 2.0), (1.0, 2.0), (4.0, 1.0)])
        first = permutation_from_sample(
            sample, tie_policy=TiePolicy.RANDOM_BREAK, seed=7
        )
        again = permutation_from_sample(
            sample, tie_policy=TiePolicy.RANDOM_BREAK, seed=7
        )
        assert first.image == again.image
        assert sorted(first.image) == [1, 2, 3, 4]
        images = {
            permutation_from_sample(
                sample, tie_policy=TiePolicy.RANDOM_BREAK, seed=s
            ).image
            for s in range(40)
        }
        assert len(images) > 1  # the shuffle actually varies with the seed

    def test_random_break_preserves_untied_sample(self):
        rng = np.random.default_rng(5)
        sample = _random_distinct_pairs(rng, 20)
        plain = permutation_from_sample(sample)
        jittered = permutation_from_sample(
            sample, tie_policy=TiePolicy.RANDOM_BREAK, seed=123
        )
        assert plain.image == jittered.image

    @given(
        st.lists(st.integers(0, 10**6), min_size=1, max_size=60, unique=True),
        st.lists(st.integers(0, 10**6), min_size=1, max_size=60, unique=True),
    )
    def test_rank_invariance_under_increasing_transforms(self, xs, ys):
        n = min(len(xs), len(ys))
        xs, ys = xs[:n], ys[:n]
        base = permutation_from_sample(PairedSample(zip(xs, ys)))
        transformed = PairedSample(
            zip(
                (math.exp(x * 1e-6) for x in xs),
                (2.5 * y + 7.0 for y in ys),
            )
        )
        assert permutation_from_sample(transformed).image == base.image


class TestLisLds:
    def test_worked_examples(self):
        assert lis_lds(Permutation([4, 1, 5, 2, 3])).lis_length == 3
        assert lis_lds(Permutation([3, 6, 1, 7, 4, 2, 5, 8])).lis_length == 4

    def test_identity_and_reversal(self):
        for n in (1, 2, 5, 40):
            identity = Permutation(range(1, n + 1))
            assert lis_lds(identity) == LisResult(lis_length=n, lds_length=1)
            reverse = Permutation(range(n, 0, -1))
            assert lis_lds(reverse) == LisResult(lis_length=1, lds_length=n)

    def test_exhaustive_small_n_against_dp_oracle(self):
        for n in range(1, 8):
            for image in itertools.permutations(range(1, n + 1)):
                result = lis_lds(Permutation(image))
                assert result.lis_length == lis_dp(image)
                assert result.lds_length == lds_dp(image)

    def test_sampled_n8_against_dp_oracle(self):
        rng = np.random.default_rng(88)
        for _ in range(300):
            image = rng.permutation(8) + 1
            result = lis_lds(Permutation(image))
            assert result.lis_length == lis_dp(image.tolist())
            assert result.lds_length == lds_dp(image.tolist())

    @given(st.permutations(list(range(1, 31))))
    def test_lds_is_lis_of_value_reversal(self, image):
        n = len(image)
        result = lis_lds(Permutation(image))
        reversed_values = [n + 1 - v for v in image]
        assert result.lds_length == lis_lds(Permutation(reversed_values)).lis_length

    @given(st.integers(1, 200), st.randoms(use_true_random=False))
    def test_erdos_szekeres_bound(self, n, rnd):
        image = list(range(1, n + 1))
        rnd.shuffle(image)
        result = lis_lds(Permutation(image))
        assert 1 <= result.lis_length <= n
        assert 1 <= result.lds_length <= n
        assert result.lis_length * result.lds_length >= n

    def test_lis_equal_for_inverse_permutation(self):
        rng = np.random.default_rng(17)
        for n in (2, 3, 10, 64):
            perm = Permutation(rng.permutation(n) + 1)
            assert lis_lds(perm).lis_length == lis_lds(perm.inverse()).lis_length

    @settings(max_examples=200)
    @given(st.permutations(list(range(1, 41))))
    def test_matches_dp_oracle_random_n40(self, image):
        result = lis_lds(Permutation(image))
        assert result.lis_length == lis_dp(image)
        assert result.lds_length == lds_dp(image)
