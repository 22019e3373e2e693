import json

import pytest

from conftest import ROOT, make_graph, random_dag
from src.common.errors import GraphValidationError, LayerSpecError, ProfileError
from src.graph.generate import build_workload, generate_network, load_workload
from src.graph.io import graph_from_dict, load_graph, load_stimulus, save_graph
from src.graph.stats import neighbor_stats
from src.graph.stimulus import Stimulus, make_stimulus


def _chain_dict(**extra):
    data = {
        "name": "abc",
        "neurons": [{"id": 0}, {"id": 1}, {"id": 2}],
        "synapses": [{"src": 0, "dst": 1, "weight": 1}, {"src": 1, "dst": 2, "weight": 1}],
    }
    data.update(extra)
    return data


def test_load_chain(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(_chain_dict()))
    g = load_graph(path)
    assert len(g.neurons) == 3
    assert len(g.synapses) == 2
    assert g.inputs() == [0]
    assert g.outputs() == [2]


def test_self_loop_rejected():
    data = _chain_dict(synapses=[{"src": 0, "dst": 0, "weight": 1}])
    with pytest.raises(GraphValidationError, match="self-loop"):
        graph_from_dict(data)


def test_cycle_rejected():
    data = _chain_dict(
        synapses=[
            {"src": 0, "dst": 1, "weight": 1},
            {"src": 1, "dst": 2, "weight": 1},
            {"src": 2, "dst": 0, "weight": 1},
        ]
    )
    with pytest.raises(GraphValidationError, match="cycle"):
        graph_from_dict(data)


def test_weight_out_of_range():
    data = _chain_dict(synapses=[{"src": 0, "dst": 1, "weight": 2}])
    with pytest.raises(GraphValidationError, match="weight out of range"):
        graph_from_dict(data)
    assert graph_from_dict(_chain_dict(weight_bits=3, synapses=data["synapses"]))


def test_dangling_and_duplicate():
    with pytest.raises(GraphValidationError, match="dangling"):
        graph_from_dict(_chain_dict(synapses=[{"src": 0, "dst": 9, "weight": 1}]))
    with pytest.raises(GraphValidationError, match="duplicate neuron"):
        graph_from_dict(_chain_dict(neurons=[{"id": 0}, {"id": 0}, {"id": 1}, {"id": 2}]))


def test_relay_not_accepted_from_file():
    data = _chain_dict(neurons=[{"id": 0}, {"id": 1, "kind": "relay"}, {"id": 2}])
    with pytest.raises(GraphValidationError, match="relay"):
        graph_from_dict(data)


def test_malformed_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text("{not json")
    with pytest.raises(GraphValidationError, match="malformed"):
        load_graph(path)


def test_generated_graph_reloads_equal(tmp_path):
    w = load_workload(ROOT / "configs" / "workloads" / "lenet.json")
    g = build_workload(w)
    first = save_graph(g, tmp_path / "a.json")
    again = load_graph(first)
    assert again == g
    second = save_graph(again, tmp_path / "b.json")
    assert first.read_bytes() == second.read_bytes()


def test_single_conv_layer():
    g = generate_network(
        [{"type": "input", "height": 4, "width": 4}, {"type": "conv", "kernel": 3}]
    )
    assert len(g.neurons) == 20
    assert len(g.inputs()) == 16
    assert len(g.synapses) == 36
    assert neighbor_stats(g).l1_max == 9


def test_prune_keeps_largest_half():
    spec = [{"type": "input", "height": 4, "width": 4}, {"type": "conv", "kernel": 3}]
    full = generate_network(spec, 0.0, seed=3)
    half = generate_network(spec, 0.5, seed=3)
    assert len(half.synapses) == len(full.synapses) // 2
    assert set(half.synapses) <= set(full.synapses)
    assert all(s.weight != 0 for s in half.synapses)


def test_generator_is_deterministic(tiny_layers):
    assert generate_network(tiny_layers, 0.3, seed=5) == generate_network(tiny_layers, 0.3, seed=5)
    assert generate_network(tiny_layers, 0.3, seed=5) != generate_network(tiny_layers, 0.3, seed=6)


def test_residual_and_concat_blocks():
    add = generate_network(
        [
            {"type": "input", "name": "in", "height": 3, "width": 3},
            {"type": "conv", "name": "c1", "kernel": 1},
            {"type": "add", "inputs": ["in", "c1"]},
        ]
    )
    assert len(add.neurons) == 27
    assert len(add.synapses) == 9 + 18

    cat = generate_network(
        [
            {"type": "input", "name": "in", "height": 2, "width": 2},
            {"type": "conv", "name": "b", "kernel": 1},
            {"type": "concat", "inputs": ["in", "b"]},
            {"type": "dense", "units": 1},
        ]
    )
    assert len(cat.neurons) == 9
    assert len(cat.synapses) == 4 + 8


@pytest.mark.parametrize(
    "spec",
    [
        [],
        [{"type": "conv", "kernel": 3}],
        [{"type": "input", "height": 2, "width": 2}, {"type": "conv", "kernel": 3}],
        [{"type": "input", "height": 2, "width": 2}, {"type": "add"}],
    ],
)
def test_bad_layer_specs(spec):
    with pytest.raises(LayerSpecError):
        generate_network(spec)


def test_neighbour_stats_chain_and_diamond(diamond):
    chain = make_graph([(0, 1), (1, 2)])
    stats = neighbor_stats(chain)
    assert stats.l1[2] == 1
    assert stats.l2[2] == 1
    assert stats.l1_max == 1

    stats = neighbor_stats(diamond)
    assert stats.l1[3] == 2
    assert stats.l2[3] == 1
    assert stats.l1_min == 1
    assert stats.l2_min == 0
    assert set(stats.summary()) == {
        "l1_min",
        "l1_max",
        "l1_avg",
        "l2_min",
        "l2_max",
        "l2_avg",
    }


def test_neighbour_stats_match_two_hop_enumeration(rng):
    for n in (6, 20, 45):
        g = random_dag(rng, n, p=0.25)
        pairs = [s.pair for s in g.synapses]
        stats = neighbor_stats(g)
        for nid in g.ids:
            first = {a for a, b in pairs if b == nid}
            second = {a for a, b in pairs for c, d in pairs if b == c and d == nid}
            assert stats.l1[nid] == len(first)
            assert stats.l2[nid] == len(second)
        fed = [nid for nid in g.ids if stats.l1[nid]] or g.ids
        assert stats.l1_max == max(stats.l1[x] for x in fed)
        assert stats.l2_min == min(stats.l2[x] for x in fed)
        assert stats.l2_avg == pytest.approx(sum(stats.l2[x] for x in fed) / len(fed))


def test_stimulus_is_seeded(tiny_layers):
    g = generate_network(tiny_layers)
    a = make_stimulus(g, 3, 2, 1000, seed=1)
    assert a == make_stimulus(g, 3, 2, 1000, seed=1)
    assert len(a) == 3
    assert set().union(*a.images) <= set(g.inputs())
    for image in a.images:
        for times in image.values():
            assert list(times) == sorted(set(times))


def test_stimulus_file_checks_inputs(tmp_path):
    g = make_graph([(0, 1)])
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"images": [{"0": [5, 1]}]}))
    assert load_stimulus(path, g) == Stimulus(images=({0: (1, 5)},))
    path.write_text(json.dumps({"images": [{"1": [0]}]}))
    with pytest.raises(ProfileError, match="unknown input"):
        load_stimulus(path, g)
