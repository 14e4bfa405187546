"""Tests for guideline recommendations, presets and oversubscription checks."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parallelism_tuner import (
    all_presets,
    bundled_graph,
    is_oversubscribed,
    preset,
    recommend,
    width_report,
)
from parallelism_tuner.models import HardwareSpec, RecommendationBasis, ThreadConfig, WidthReport


def width(avg: int) -> WidthReport:
    return WidthReport(heavy_count=avg, heavy_depth=1 if avg else 0, max_width=avg, avg_width=avg)


hardware_specs = st.builds(
    HardwareSpec,
    sockets=st.integers(min_value=1, max_value=4),
    cores_per_socket=st.integers(min_value=1, max_value=64),
    smt_ways=st.integers(min_value=1, max_value=4),
    fma_rate=st.just(64.0),
    upi_bandwidth=st.just(100.0),
)


class TestRecommend:
    """Test the guideline recommendation."""

    def test_inception_on_four_cores(self, inception, four_core):
        """Test avg width 2 on 4 cores gives 2 pools of 2 threads."""
        rec = recommend(width_report(inception), four_core)
        assert rec.config == ThreadConfig(pools=2, intra_threads=2, kernel_threads=2)
        assert rec.basis == RecommendationBasis.GUIDELINE
        assert "avg_width 2" in rec.rationale

    @pytest.mark.parametrize(
        "name,expected",
        [
            ("widedeep-like", (3, 16, 16)),
            ("ncf-like", (4, 12, 12)),
            ("transformer-like", (4, 12, 12)),
            ("fig2-toy", (2, 24, 24)),
            ("resnet-like", (1, 48, 48)),
        ],
    )
    def test_bundled_on_two_sockets(self, two_socket, name, expected):
        """Test recommendations for bundled models on 2 x 24 cores."""
        config = recommend(width_report(bundled_graph(name)), two_socket).config
        assert (config.pools, config.intra_threads, config.kernel_threads) == expected

    def test_no_heavy_operators(self, four_core):
        """Test width 0 still yields one pool using every core."""
        assert recommend(width(0), four_core).config == ThreadConfig(
            pools=1, intra_threads=4, kernel_threads=4
        )

    def test_wider_than_machine(self, four_core):
        """Test pools are capped at the physical core count."""
        assert recommend(width(10), four_core).config == ThreadConfig(
            pools=4, intra_threads=1, kernel_threads=1
        )

    @given(st.integers(min_value=0, max_value=500), hardware_specs)
    def test_never_oversubscribes(self, avg, hw):
        """Test the guideline never over-threads the machine."""
        config = recommend(width(avg), hw).config
        assert not is_oversubscribed(config, hw)
        assert config.pools * config.intra_threads <= hw.physical_cores
        assert config.intra_threads == config.kernel_threads


class TestPresets:
    """Test framework and vendor presets."""

    def test_presets_on_two_sockets(self, two_socket):
        """Test the three presets on 2 x 24 cores with 2-way SMT."""
        configs = {rec.basis: rec.config for rec in all_presets(two_socket)}
        assert configs[RecommendationBasis.PRESET_TENSORFLOW] == ThreadConfig(
            pools=2, intra_threads=48, kernel_threads=48
        )
        assert configs[RecommendationBasis.PRESET_INTEL] == ThreadConfig(
            pools=2, intra_threads=24, kernel_threads=24
        )
        assert configs[RecommendationBasis.PRESET_DEFAULT] == ThreadConfig(
            pools=96, intra_threads=96, kernel_threads=96
        )

    def test_tf_alias(self, two_socket):
        """Test "tf" selects the tensorflow preset."""
        assert preset("tf", two_socket) == preset("tensorflow", two_socket)

    def test_unknown_preset(self, two_socket):
        """Test an unknown preset kind is rejected."""
        with pytest.raises(ValueError, match="Unknown preset"):
            preset("openmp", two_socket)

    def test_oversubscription_flags(self, two_socket):
        """Test tensorflow and default presets over-thread, intel does not."""
        assert is_oversubscribed(preset("tensorflow", two_socket).config, two_socket)
        assert is_oversubscribed(preset("default", two_socket).config, two_socket)
        assert not is_oversubscribed(preset("intel", two_socket).config, two_socket)


class TestIsOversubscribed:
    """Test the over-threading predicate."""

    def test_exactly_full(self, four_core):
        """Test 4 pools of 1+1 threads fill 8 slots without over-threading."""
        assert four_core.thread_slots == 8
        assert not is_oversubscribed(ThreadConfig(pools=4, intra_threads=1, kernel_threads=1), four_core)

    def test_too_many_threads(self, four_core):
        """Test 9 software threads exceed 8 slots."""
        assert is_oversubscribed(ThreadConfig(pools=1, intra_threads=5, kernel_threads=4), four_core)

    def test_more_pools_than_cores(self):
        """Test two pools on one core over-thread even within the slots."""
        hw = HardwareSpec(sockets=1, cores_per_socket=1, smt_ways=4, fma_rate=1.0, upi_bandwidth=1.0)
        assert hw.thread_slots == 4
        assert is_oversubscribed(ThreadConfig(pools=2, intra_threads=1, kernel_threads=1), hw)
        assert not is_oversubscribed(ThreadConfig(pools=1, intra_threads=2, kernel_threads=2), hw)
