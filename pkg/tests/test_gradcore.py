import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from _oracles import gradient_magnitude_bruteforce, percentile_oracle
from gradword import (
    FrameSequence,
    GradientMagnitudes,
    UsageError,
    gradient_magnitude,
    percentile_threshold,
    pool_magnitudes,
    pseudo_labels,
)

finite = st.floats(min_value=-100, max_value=100, allow_nan=False, width=32)
# magnitudes bounded away from the float32 subnormal range, where a
# power-of-two downscale stops being exact
normal_range = finite.filter(lambda x: x == 0.0 or abs(x) > 1e-20)


def seqs(min_n=1, max_n=30, max_d=6, elements=finite):
    return st.tuples(st.integers(min_n, max_n), st.integers(1, max_d)).flatmap(
        lambda nd: arrays(np.float32, nd, elements=elements).map(
            lambda a: FrameSequence("u", a, 20.0)
        )
    )


class TestGradientMagnitude:
    def test_constant_sequence_is_zero(self):
        seq = FrameSequence("u", np.full((9, 4), 3.25, dtype=np.float32), 20.0)
        assert gradient_magnitude(seq).magnitudes.tolist() == [0.0] * 9

    def test_ramp_example(self):
        seq = FrameSequence("u", np.array([[0.0], [2.0], [4.0]]), 20.0)
        m = gradient_magnitude(seq).magnitudes
        # interior: ((4-0)/2)^2 = 4; edges one-sided unhalved: (2-0)^2 = 4
        assert m.tolist() == [4.0, 4.0, 4.0]

    def test_single_frame(self):
        seq = FrameSequence("u", np.array([[5.0, 1.0]]), 20.0)
        assert gradient_magnitude(seq).magnitudes.tolist() == [0.0]

    def test_two_frames(self):
        seq = FrameSequence("u", np.array([[0.0, 0.0], [3.0, 4.0]]), 20.0)
        assert gradient_magnitude(seq).magnitudes.tolist() == [25.0, 25.0]

    @given(seq=seqs())
    def test_matches_bruteforce(self, seq):
        got = gradient_magnitude(seq).magnitudes
        want = gradient_magnitude_bruteforce(seq.embeddings.astype(np.float64))
        np.testing.assert_allclose(got, want, rtol=1e-6, atol=1e-9)

    @given(seq=seqs(min_n=2), shift=st.floats(-50, 50, allow_nan=False, width=32))
    def test_shift_invariance(self, seq, shift):
        # the shifted frames are re-rounded to float32, which under
        # cancellation moves each squared difference by up to ~2 eps (2S)^2
        shifted = FrameSequence("u", seq.embeddings + np.float32(shift), 20.0)
        s = max(1.0, float(np.max(np.abs(seq.embeddings))) + abs(shift))
        np.testing.assert_allclose(
            gradient_magnitude(shifted).magnitudes,
            gradient_magnitude(seq).magnitudes,
            rtol=1e-6,
            atol=8 * seq.dim * 6e-8 * s * s,
        )

    @given(
        seq=seqs(min_n=2, elements=normal_range),
        alpha=st.sampled_from([0.25, 0.5, 2.0, 4.0]),
    )
    def test_scale_law_exact_for_power_of_two(self, seq, alpha):
        # power-of-two scaling only shifts float32 exponents (exact while the
        # values stay normal), so the alpha^2 law holds bitwise
        scaled = FrameSequence("u", seq.embeddings * np.float32(alpha), 20.0)
        got = gradient_magnitude(scaled).magnitudes
        assert got.tolist() == (alpha**2 * gradient_magnitude(seq).magnitudes).tolist()

    @given(seq=seqs(min_n=2), alpha=st.floats(0.25, 4.0, allow_nan=False, width=32))
    def test_scale_law_within_storage_rounding(self, seq, alpha):
        # generic alpha rounds each stored product to float32, which under
        # cancellation perturbs a squared difference by up to
        # ~2 eps |alpha d| (2 alpha S) per dim; allow that much and no more
        alpha = float(np.float32(alpha))
        scaled = FrameSequence("u", seq.embeddings * np.float32(alpha), 20.0)
        s = max(1.0, float(np.max(np.abs(seq.embeddings))))
        atol = 8 * seq.dim * 6e-8 * (alpha * s) ** 2
        np.testing.assert_allclose(
            gradient_magnitude(scaled).magnitudes,
            alpha**2 * gradient_magnitude(seq).magnitudes,
            rtol=1e-5,
            atol=atol,
        )

    def test_piecewise_constant_support_near_cuts(self):
        rng = np.random.default_rng(3)
        lens = [5, 7, 4, 6]
        cuts = np.cumsum(lens)[:-1]  # first frame of each following segment
        levels = rng.normal(size=(len(lens), 3))
        emb = np.repeat(levels, lens, axis=0).astype(np.float32)
        m = gradient_magnitude(FrameSequence("u", emb, 20.0)).magnitudes
        support = {int(t) for t in np.nonzero(m)[0]}
        windows = {t for c in cuts for t in (c - 1, c, c + 1)}
        assert support <= windows and all(m[c - 1] > 0 for c in cuts)


class TestPercentileThreshold:
    def test_one_to_ten_at_20(self):
        thr = percentile_threshold(np.arange(1.0, 11.0), 20.0)
        assert thr.theta == 2.0 and thr.percentile == 20.0

    def test_all_equal(self):
        for pct in (1.0, 20.0, 50.0, 99.0):
            assert percentile_threshold(np.full(17, 6.5), pct).theta == 6.5

    def test_singleton(self):
        assert percentile_threshold(np.array([5.0]), 20.0).theta == 5.0

    def test_empty_rejected(self):
        with pytest.raises(UsageError):
            percentile_threshold(np.array([]), 20.0)

    def test_bad_percentile_rejected(self):
        for pct in (0.0, 100.0, -1.0, 101.0):
            with pytest.raises(UsageError):
                percentile_threshold(np.arange(5.0), pct)

    @given(
        values=st.lists(st.floats(0, 1e6, allow_nan=False), min_size=1, max_size=200),
        pct=st.integers(1, 99),
    )
    def test_matches_sorted_oracle(self, values, pct):
        got = percentile_threshold(np.asarray(values), float(pct)).theta
        assert got == percentile_oracle(values, pct)

    def test_order_independent(self):
        rng = np.random.default_rng(0)
        values = rng.random(101)
        shuffled = values.copy()
        rng.shuffle(shuffled)
        assert (
            percentile_threshold(values, 37.0).theta
            == percentile_threshold(shuffled, 37.0).theta
        )


class TestPseudoLabels:
    def mags(self, values):
        return GradientMagnitudes("u", np.asarray(values, dtype=np.float64))

    def test_strictly_greater_than_theta(self):
        m = self.mags([0.5, 2.0, 2.5, 1.0])
        thr = percentile_threshold(m.magnitudes, 50.0)  # theta = 1.0
        assert pseudo_labels(m, thr).labels.tolist() == [0, 1, 1, 0]

    def test_theta_at_max_gives_all_zero(self):
        m = self.mags([1.0, 3.0, 2.0])
        thr = percentile_threshold(m.magnitudes, 99.0)
        assert pseudo_labels(m, thr).labels.tolist() == [0, 0, 0]

    def test_low_count_equals_rank(self):
        # distinct magnitudes: exactly ceil(p/100 * n) frames stay labeled 0
        rng = np.random.default_rng(1)
        values = rng.permutation(np.arange(1.0, 201.0))
        m = self.mags(values)
        thr = percentile_threshold(m.magnitudes, 20.0)
        labels = pseudo_labels(m, thr).labels
        assert int((labels == 0).sum()) == 40

    @given(
        values=st.lists(st.floats(0, 100, allow_nan=False), min_size=2, max_size=50),
        p_lo=st.integers(1, 49),
        p_hi=st.integers(50, 99),
    )
    def test_raising_theta_never_flips_up(self, values, p_lo, p_hi):
        m = self.mags(values)
        lo = pseudo_labels(m, percentile_threshold(m.magnitudes, float(p_lo))).labels
        hi = pseudo_labels(m, percentile_threshold(m.magnitudes, float(p_hi))).labels
        assert not np.any((hi == 1) & (lo == 0))


class TestPoolMagnitudes:
    def test_concatenates_in_order(self):
        a = gradient_magnitude(FrameSequence("a", np.array([[0.0], [1.0]]), 20.0))
        b = gradient_magnitude(FrameSequence("b", np.array([[0.0], [3.0]]), 20.0))
        np.testing.assert_array_equal(pool_magnitudes([a, b]), [1.0, 1.0, 9.0, 9.0])

    def test_empty_rejected(self):
        with pytest.raises(UsageError):
            pool_magnitudes([])
