"""Tests for the MatMul operator designs and the Amdahl fit."""

import numpy as np
import pytest

from parallelism_tuner import DimensionMismatchError, FitError, InputError, Pool, PoolShutdownError
from parallelism_tuner.oplab import (
    amdahl_speedup,
    blocked_kernel,
    check_matrix,
    design_bench,
    fit_amdahl,
    fit_amdahl_curve,
    matmul_design1,
    matmul_design2,
    prepare_operands,
    reference_matmul,
    scaling_bench,
)
from parallelism_tuner.threadpool import detect_physical_cores

X_2X2 = [[1.0, 2.0], [3.0, 4.0]]
W_2X2 = [[5.0, 6.0], [7.0, 8.0]]
PRODUCT_2X2 = np.array([[19.0, 22.0], [43.0, 50.0]], dtype=np.float32)


def random_pair(rng: np.random.Generator, max_dim: int = 256):
    m, k, n = rng.integers(1, max_dim + 1, size=3)
    x = rng.uniform(-1.0, 1.0, size=(m, k)).astype(np.float32)
    w = rng.uniform(-1.0, 1.0, size=(k, n)).astype(np.float32)
    return x, w


@pytest.fixture
def pools():
    with Pool(3, name="kernel") as kernel_pool, Pool(4, name="intra") as intra_pool:
        yield kernel_pool, intra_pool


class TestDesign1:
    """Test prepare-then-kernel MatMul."""

    def test_identity(self):
        """Test I4 times w is w."""
        w = np.arange(20, dtype=np.float32).reshape(4, 5)
        np.testing.assert_array_equal(matmul_design1(np.eye(4), w), w)

    def test_two_by_two(self):
        """Test the hand-checked 2x2 product."""
        np.testing.assert_array_equal(matmul_design1(X_2X2, W_2X2), PRODUCT_2X2)

    def test_kernel_pool(self, pools):
        """Test the kernel pool gives the same result as the calling thread."""
        kernel_pool, _ = pools
        rng = np.random.default_rng(1)
        x, w = random_pair(rng)
        np.testing.assert_array_equal(matmul_design1(x, w, kernel_pool), matmul_design1(x, w))

    def test_result_is_float32(self):
        """Test outputs are 32-bit."""
        assert matmul_design1(X_2X2, W_2X2).dtype == np.float32

    def test_dimension_mismatch(self):
        """Test x.cols must equal w.rows."""
        with pytest.raises(DimensionMismatchError):
            matmul_design1(np.ones((2, 3)), np.ones((2, 3)))

    def test_non_finite_rejected(self):
        """Test non-finite values are rejected."""
        with pytest.raises(InputError):
            matmul_design1([[1.0, np.nan]], [[1.0], [2.0]])

    def test_not_a_matrix(self):
        """Test operands must be two-dimensional."""
        with pytest.raises(InputError):
            check_matrix([1.0, 2.0])

    def test_prep_passes(self):
        """Test repeated preparation passes return copies of the operands."""
        x = np.ones((3, 2), dtype=np.float32)
        w = np.full((2, 2), 2.0, dtype=np.float32)
        xp, wp = prepare_operands(x, w, passes=3)
        np.testing.assert_array_equal(xp, x)
        np.testing.assert_array_equal(wp, w)
        assert xp is not x

    def test_blocked_kernel_tiles(self):
        """Test tile boundaries do not change the product."""
        rng = np.random.default_rng(2)
        x, w = random_pair(rng, 100)
        np.testing.assert_allclose(
            blocked_kernel(x, w, block=7), blocked_kernel(x, w, block=1000), rtol=1e-6, atol=1e-7
        )


class TestDesign2:
    """Test the row-split MatMul on the intra-op pool."""

    def test_two_by_two(self):
        """Test the 2x2 product with two intra-op threads."""
        with Pool(2) as intra_pool:
            np.testing.assert_array_equal(matmul_design2(X_2X2, W_2X2, intra_pool), PRODUCT_2X2)

    def test_single_thread_pool_matches_design1(self):
        """Test a one-thread intra-op pool reproduces design 1 exactly."""
        rng = np.random.default_rng(3)
        x, w = random_pair(rng)
        with Pool(1) as intra_pool:
            np.testing.assert_array_equal(matmul_design2(x, w, intra_pool), matmul_design1(x, w))

    def test_more_threads_than_rows(self):
        """Test empty row blocks are skipped."""
        with Pool(8) as intra_pool:
            np.testing.assert_array_equal(matmul_design2(X_2X2, W_2X2, intra_pool), PRODUCT_2X2)

    def test_shut_down_pool(self):
        """Test a shut-down intra-op pool is rejected."""
        intra_pool = Pool(2)
        intra_pool.shutdown()
        with pytest.raises(PoolShutdownError):
            matmul_design2(X_2X2, W_2X2, intra_pool)

    def test_dimension_mismatch(self):
        """Test x.cols must equal w.rows."""
        with Pool(2) as intra_pool, pytest.raises(DimensionMismatchError):
            matmul_design2(np.ones((4, 3)), np.ones((4, 3)), intra_pool)


class TestAgainstOracle:
    """Test both designs against the naive loop-nest oracle."""

    def test_reference_two_by_two(self):
        """Test the oracle itself on the hand-checked case."""
        np.testing.assert_array_equal(reference_matmul(X_2X2, W_2X2), PRODUCT_2X2.astype(np.float64))

    def test_random_pairs(self, pools):
        """Test 100 random pairs up to 256 x 256 within 1e-5 relative tolerance."""
        kernel_pool, intra_pool = pools
        rng = np.random.default_rng(0)
        for _ in range(100):
            x, w = random_pair(rng)
            expected = reference_matmul(x, w)
            np.testing.assert_allclose(matmul_design1(x, w), expected, rtol=1e-5, atol=1e-6)
            np.testing.assert_allclose(
                matmul_design2(x, w, intra_pool, kernel_pool), expected, rtol=1e-5, atol=1e-6
            )

    def test_large_product(self, pools):
        """Test a 512 x 512 product against the oracle."""
        kernel_pool, intra_pool = pools
        rng = np.random.default_rng(4)
        x = rng.uniform(-1.0, 1.0, size=(512, 512)).astype(np.float32)
        w = rng.uniform(-1.0, 1.0, size=(512, 512)).astype(np.float32)
        np.testing.assert_allclose(
            matmul_design2(x, w, intra_pool, kernel_pool), reference_matmul(x, w), rtol=1e-5, atol=1e-6
        )


class TestAmdahl:
    """Test the serial-fraction fit."""

    def test_sixteen_of_twenty_four(self):
        """Test 16x on 24 threads is a 2.17% serial fraction."""
        assert fit_amdahl(16.0, 24) == pytest.approx(0.0217391, abs=1e-6)

    @pytest.mark.parametrize("threads", [2, 8, 24])
    def test_perfect_and_serial(self, threads):
        """Test perfect scaling fits 0 and no scaling fits 1."""
        assert fit_amdahl(float(threads), threads) == 0.0
        assert fit_amdahl(1.0, threads) == 1.0

    @pytest.mark.parametrize("speedup,threads", [(0.9, 8), (9.0, 8), (1.0, 1)])
    def test_out_of_range(self, speedup, threads):
        """Test speedups outside [1, threads] and single-thread fits are rejected."""
        with pytest.raises(FitError):
            fit_amdahl(speedup, threads)

    @pytest.mark.parametrize("threads", [2, 16, 48])
    def test_round_trip(self, threads):
        """Test fitting a predicted speedup recovers the serial fraction."""
        for serial_fraction in np.linspace(0.01, 1.0, 100):
            speedup = amdahl_speedup(serial_fraction, threads)
            assert fit_amdahl(speedup, threads) == pytest.approx(serial_fraction, abs=1e-12)

    def test_curve_fit(self):
        """Test the least-squares fit over several thread counts."""
        threads = [1, 2, 4, 8, 16, 24]
        speedups = [amdahl_speedup(0.05, t) for t in threads]
        assert fit_amdahl_curve(threads, speedups) == pytest.approx(0.05, abs=1e-6)

    def test_curve_fit_needs_points(self):
        """Test empty or mismatched inputs are rejected."""
        with pytest.raises(FitError):
            fit_amdahl_curve([], [])
        with pytest.raises(FitError):
            fit_amdahl_curve([1, 2], [1.0])


class TestBenchmarks:
    """Test the benchmark drivers."""

    def test_scaling_rows(self):
        """Test one thread is the 1.0 baseline and rows carry both thread counts."""
        rows = scaling_bench([64], threads=2, trials=1)
        assert [(row.size, row.threads, row.design) for row in rows] == [
            (64, 1, "design1"),
            (64, 2, "design1"),
        ]
        assert rows[0].speedup == 1.0
        assert all(row.latency_us > 0 for row in rows)

    def test_single_thread_only(self):
        """Test threads=1 reports the baseline only."""
        rows = scaling_bench([64], threads=1, trials=1)
        assert len(rows) == 1

    @pytest.mark.parametrize("sizes", [[63], [64, 1], [128, 0]])
    def test_sizes_below_64_rejected(self, sizes):
        """Test every size must be at least 64 before anything runs."""
        with pytest.raises(InputError, match="at least 64"):
            scaling_bench(sizes, threads=1, trials=1)

    def test_design_rows(self):
        """Test the design comparison reports both designs."""
        rows = design_bench(64, threads=2, trials=1)
        assert [row.design for row in rows] == ["design1", "design2"]
        assert rows[0].speedup == 1.0

    @pytest.mark.bench
    def test_speedup_grows_with_size(self):
        """Test larger matrices amortize preparation, within 10% noise."""
        threads = detect_physical_cores()
        rows = [row for row in scaling_bench([256, 512, 1024, 2048], threads) if row.threads == threads]
        speedups = [row.speedup for row in rows]
        for smaller, larger in zip(speedups, speedups[1:]):
            assert larger >= 0.9 * smaller
        assert all(speedup <= threads * 1.1 for speedup in speedups)

    @pytest.mark.bench
    def test_design2_not_slower(self):
        """Test design 2 throughput matches or beats design 1, within 10% noise."""
        first, second = design_bench(512, detect_physical_cores(), trials=5)
        assert second.speedup >= 0.9
