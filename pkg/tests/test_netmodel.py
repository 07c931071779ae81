import numpy as np
import pytest

from multispread import (EdgeListError, generate_synthetic, neighbors_on_layer,
                         parse_multilayer_edgelist, serialize_multilayer_edgelist,
                         summarize_network, summary_csv)

from conftest import TWO_LAYER_TEXT


class TestParse:
    def test_basic_construction(self):
        net = parse_multilayer_edgelist("a b l1\nb c l1\na b l2", "l1")
        assert net.num_actors == 3
        assert net.num_layers == 2
        assert net.num_edges == 3
        assert net.layer_names[net.contact_layer] == "l1"

    def test_duplicate_and_reversed_edges_collapse(self):
        net = parse_multilayer_edgelist("a b l1\nb a l1", "l1")
        assert net.num_edges == 1

    def test_self_loop_rejected_with_line_number(self):
        with pytest.raises(EdgeListError, match="line 1"):
            parse_multilayer_edgelist("a a l1", "l1")
        with pytest.raises(EdgeListError, match="line 3"):
            parse_multilayer_edgelist("a b l1\nb c l1\nc c l1", "l1")

    def test_short_line_rejected_with_line_number(self):
        with pytest.raises(EdgeListError, match="line 2"):
            parse_multilayer_edgelist("a b l1\na b", "l1")

    def test_unknown_contact_layer(self):
        with pytest.raises(EdgeListError, match="nope"):
            parse_multilayer_edgelist("a b l1", "nope")

    def test_comments_and_blank_lines(self):
        text = "# header\n\na b l1  # trailing comment\n   \nb c l1\n"
        net = parse_multilayer_edgelist(text, "l1")
        assert net.num_edges == 2

    def test_accepts_file_like(self, tmp_path):
        path = tmp_path / "net.txt"
        path.write_text(TWO_LAYER_TEXT)
        with open(path) as fh:
            net = parse_multilayer_edgelist(fh, "l1")
        assert net.num_actors == 6

    def test_first_appearance_ids(self):
        net = parse_multilayer_edgelist("x y l1\nz x l1", "l1")
        assert net.actor_labels == ("x", "y", "z")

    def test_roundtrip_is_isomorphic(self, two_layer_net):
        def label_edges(net):
            out = set()
            for li, name in enumerate(net.layer_names):
                for a, b in net.edges(li):
                    lab = tuple(sorted((net.actor_labels[a], net.actor_labels[b])))
                    out.add((lab, name))
            return out

        reparsed = parse_multilayer_edgelist(
            serialize_multilayer_edgelist(two_layer_net), "l1")
        assert label_edges(reparsed) == label_edges(two_layer_net)


class TestTwoLayerExample:
    def test_counts(self, two_layer_net):
        s = summarize_network(two_layer_net)
        assert s.num_actors == 6
        assert s.num_layers == 2
        assert s.num_nodes == 10
        assert s.num_edges == 11

    def test_neighbors_of_hub(self, two_layer_net):
        net = two_layer_net
        n2 = net.actor_id("n2")
        got = {net.actor_labels[a] for a in neighbors_on_layer(net, n2, net.layer_id("l1"))}
        assert got == {"n1", "n3", "n4", "n5"}

    def test_absent_actor_has_no_neighbors(self, two_layer_net):
        net = two_layer_net
        n5 = net.actor_id("n5")
        assert len(neighbors_on_layer(net, n5, net.layer_id("l2"))) == 0

    def test_neighbors_sorted_ascending(self, two_layer_net):
        net = two_layer_net
        ids = neighbors_on_layer(net, net.actor_id("n2"), net.layer_id("l1"))
        assert list(ids) == sorted(ids)


class TestGenerateSynthetic:
    def test_p_one_is_complete(self):
        net = generate_synthetic(10, [("c", 1.0)], "c", seed=5)
        assert net.num_edges == 45

    def test_p_zero_is_empty(self):
        net = generate_synthetic(10, [("c", 0.0)], "c", seed=5)
        assert net.num_edges == 0
        assert len(net.presence(0)) == 10  # presence even without edges

    def test_deterministic_given_seed(self):
        a = generate_synthetic(500, [("c", 0.02), ("o", 0.02)], "c", seed=77)
        b = generate_synthetic(500, [("c", 0.02), ("o", 0.02)], "c", seed=77)
        for li in range(2):
            assert np.array_equal(a.edges(li), b.edges(li))

    def test_seed_changes_edges(self):
        a = generate_synthetic(100, [("c", 0.05)], "c", seed=1)
        b = generate_synthetic(100, [("c", 0.05)], "c", seed=2)
        assert not np.array_equal(a.edges(0), b.edges(0))

    def test_layers_are_independent(self):
        net = generate_synthetic(100, [("c", 0.05), ("o", 0.05)], "c", seed=9)
        assert not np.array_equal(net.edges(0), net.edges(1))

    def test_invalid_probability(self):
        with pytest.raises(ValueError):
            generate_synthetic(10, [("c", 1.5)], "c", seed=1)
        with pytest.raises(ValueError):
            generate_synthetic(1, [("c", 0.5)], "c", seed=1)


class TestSummary:
    def test_complete_graph_degree(self):
        net = generate_synthetic(5, [("c", 1.0)], "c", seed=0)
        assert summarize_network(net).avg_degree == pytest.approx(4.0)

    def test_empty_network_degree(self):
        net = generate_synthetic(10, [("c", 0.0)], "c", seed=0)
        assert summarize_network(net).avg_degree == 0.0

    def test_avg_degree_definition(self, two_layer_net):
        s = summarize_network(two_layer_net)
        assert s.avg_degree == pytest.approx(2 * 11 / 6)

    def test_per_layer_degrees(self, two_layer_net):
        s = summarize_network(two_layer_net)
        assert s.per_layer_avg_degree["l1"] == pytest.approx(2 * 6 / 5)
        assert s.per_layer_avg_degree["l2"] == pytest.approx(2 * 5 / 5)

    def test_csv_layout(self, two_layer_net):
        text = summary_csv("demo", summarize_network(two_layer_net))
        lines = text.strip().splitlines()
        assert lines[0] == "network,layers,actors,nodes,edges,avg_degree"
        assert lines[1].startswith("demo,2,6,10,11,")
        assert lines[2].startswith("demo/l1,1,5,5,6,")
        assert len(lines) == 4


class TestStructuralProperties:
    def test_degree_sum_is_twice_edges(self):
        net = generate_synthetic(80, [("c", 0.05), ("o", 0.08)], "c", seed=21)
        for li in range(net.num_layers):
            total = sum(len(neighbors_on_layer(net, a, li))
                        for a in range(net.num_actors))
            assert total == 2 * len(net.edges(li))

    def test_neighbor_symmetry(self):
        net = generate_synthetic(40, [("c", 0.1)], "c", seed=13)
        for a in range(net.num_actors):
            for b in neighbors_on_layer(net, a, 0):
                assert a in neighbors_on_layer(net, int(b), 0)

    def test_edges_intra_layer_and_canonical(self, two_layer_net):
        for li in range(two_layer_net.num_layers):
            e = two_layer_net.edges(li)
            assert np.all(e[:, 0] < e[:, 1])
            present = set(two_layer_net.presence(li).tolist())
            assert set(e.ravel().tolist()) <= present
