"""Tests for data- and model-parallel execution across sockets."""

import pytest

from parallelism_tuner import bundled_graph, simulate, simulate_multisocket
from parallelism_tuner.graph import subgraph
from parallelism_tuner.models import Graph, Placement, ThreadConfig
from parallelism_tuner.sim import matmul_node, socket_speedup

SIZES = [256, 512, 1024, 2048, 4096, 8192, 16384]


def remote_traffic(size: int) -> float:
    """Interconnect bytes that grow faster than compute once matrices leave the cache."""
    return 6.7e-7 * size ** 4


class TestDataParallel:
    """Test operators split across sockets."""

    def test_speedup_curve_peaks(self, two_socket):
        """Test two-socket speedup stays below 2x, rises, then falls with size."""
        speedups = [socket_speedup(matmul_node(size, remote_traffic), two_socket) for size in SIZES]
        peak = speedups.index(max(speedups))
        assert all(1.0 < speedup < 2.0 for speedup in speedups)
        assert 0 < peak < len(SIZES) - 1
        assert speedups[: peak + 1] == sorted(speedups[: peak + 1])
        assert speedups[peak:] == sorted(speedups[peak:], reverse=True)

    def test_transfer_serialized(self, two_socket):
        """Test the transfer term adds to a spanning operator's time."""
        node = matmul_node(512)
        graph = Graph(name="mm", nodes=(node,))
        config = ThreadConfig(pools=1, intra_threads=48, kernel_threads=48)
        with_transfer = simulate_multisocket(graph, config, two_socket, Placement.DATA_PARALLEL)
        local = simulate(graph, config, two_socket)
        assert with_transfer.makespan == pytest.approx(local.makespan + node.bytes / two_socket.upi_bandwidth)

    def test_one_socket_is_plain_simulate(self, one_socket, inception):
        """Test both placements reduce to simulate on one socket."""
        config = ThreadConfig(pools=2, intra_threads=12, kernel_threads=12)
        expected = simulate(inception, config, one_socket)
        for placement in (Placement.DATA_PARALLEL, Placement.MODEL_PARALLEL):
            assert simulate_multisocket(inception, config, one_socket, placement) == expected

    def test_single_socket_placement_rejected(self, two_socket, inception):
        """Test the single-socket placement is not a multi-socket run."""
        config = ThreadConfig(pools=1, intra_threads=24, kernel_threads=24)
        with pytest.raises(ValueError):
            simulate_multisocket(inception, config, two_socket, Placement.SINGLE_SOCKET)

    def test_string_placement(self, two_socket, inception):
        """Test placements are accepted by value."""
        config = ThreadConfig(pools=2, intra_threads=24, kernel_threads=24)
        assert simulate_multisocket(inception, config, two_socket, "model_parallel") == \
            simulate_multisocket(inception, config, two_socket, Placement.MODEL_PARALLEL)


class TestModelParallel:
    """Test pools pinned to sockets."""

    def test_embeddings_balanced(self, two_socket):
        """Test four equal embedding lookups keep both sockets equally busy."""
        ncf = bundled_graph("ncf-like")
        embeddings = [node.id for node in ncf.nodes if node.id.endswith("_embedding")]
        graph = subgraph(ncf, embeddings, name="ncf-embeddings")
        config = ThreadConfig(pools=4, intra_threads=12, kernel_threads=12)
        result = simulate_multisocket(graph, config, two_socket, Placement.MODEL_PARALLEL)
        first, second = result.socket_busy(two_socket)
        assert first > 0
        assert first == pytest.approx(second)
        assert {event.socket_id for event in result.trace} == {0, 1}

    def test_pools_pinned_round_robin(self, two_socket, fig2_toy):
        """Test pool i runs on socket i mod 2."""
        config = ThreadConfig(pools=4, intra_threads=12, kernel_threads=12)
        result = simulate_multisocket(fig2_toy, config, two_socket, Placement.MODEL_PARALLEL)
        assert all(event.socket_id == event.pool_id % 2 for event in result.trace)

    def test_remote_edge_delays_consumer(self, two_socket, fig2_toy):
        """Test a consumer on the other socket waits for the producer's bytes."""
        graph = fig2_toy.model_copy(update={
            "nodes": tuple(node.model_copy(update={"bytes": 1000.0}) for node in fig2_toy.nodes),
        })
        config = ThreadConfig(pools=2, intra_threads=24, kernel_threads=24)
        result = simulate_multisocket(graph, config, two_socket, Placement.MODEL_PARALLEL)
        events = {event.node_id: event for event in result.trace}
        split = events["split"]
        remote = [e for e in result.trace if e.node_id.endswith("op1") and e.socket_id != split.socket_id]
        assert remote
        delay = 1000.0 / two_socket.upi_bandwidth
        assert all(e.start >= split.end + delay - 1e-9 for e in remote)
