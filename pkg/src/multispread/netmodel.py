"""Multilayer network representation, edge-list ingestion, and summaries.

Actors and layers get dense integer ids in first-appearance order; the
original text labels are retained so a parsed network can be serialised
back to the same format.  A node is an (actor, layer) pair; edges are
undirected, deduplicated, and never cross layers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .randomness import Channel, event_base, pack_subject_arrays, uniforms_from_packed


class EdgeListError(ValueError):
    """Malformed edge-list input; the message carries the offending line."""


class MultilayerNetwork:
    """Actors, layers, per-layer presence sets and undirected edge sets.

    Immutable after construction; safe to share read-only across parallel
    simulation workers.
    """

    def __init__(self, actor_labels: Sequence[str], layer_names: Sequence[str],
                 contact_layer_name: str, edges_by_layer: Sequence,
                 presence_by_layer: Sequence | None = None):
        self.actor_labels = tuple(actor_labels)
        self.layer_names = tuple(layer_names)
        if len(set(self.actor_labels)) != len(self.actor_labels):
            raise ValueError("actor labels must be unique")
        if len(set(self.layer_names)) != len(self.layer_names):
            raise ValueError("layer names must be unique")
        if contact_layer_name not in self.layer_names:
            raise ValueError(f"unknown contact layer '{contact_layer_name}'")
        self.contact_layer = self.layer_names.index(contact_layer_name)

        n = len(self.actor_labels)
        self._edges: list[np.ndarray] = []
        self._presence: list[np.ndarray] = []
        for li in range(len(self.layer_names)):
            raw = edges_by_layer[li] if li < len(edges_by_layer) else ()
            canon = {(min(a, b), max(a, b)) for a, b in raw}
            for a, b in canon:
                if a == b:
                    raise ValueError(f"self-loop on actor id {a}")
                if not (0 <= a < n and 0 <= b < n):
                    raise ValueError(f"edge endpoint out of range: ({a},{b})")
            edges = np.array(sorted(canon), dtype=np.int32).reshape(-1, 2)
            endpoints = set(edges.ravel().tolist())
            if presence_by_layer is None:
                present = endpoints
            else:
                present = set(map(int, presence_by_layer[li]))
                if not endpoints <= present:
                    raise ValueError(f"layer '{self.layer_names[li]}' has edges "
                                     "between actors not present on it")
            self._edges.append(edges)
            self._presence.append(np.array(sorted(present), dtype=np.int32))
        self._engine_cache = None

    # pickling: drop the derived simulation arrays, rebuild lazily
    def __getstate__(self):
        state = self.__dict__.copy()
        state["_engine_cache"] = None
        return state

    @property
    def num_actors(self) -> int:
        return len(self.actor_labels)

    @property
    def num_layers(self) -> int:
        return len(self.layer_names)

    @property
    def num_nodes(self) -> int:
        return sum(len(p) for p in self._presence)

    @property
    def num_edges(self) -> int:
        return sum(len(e) for e in self._edges)

    def layer_id(self, name: str) -> int:
        try:
            return self.layer_names.index(name)
        except ValueError:
            raise ValueError(f"unknown layer '{name}'") from None

    def actor_id(self, label: str) -> int:
        try:
            return self.actor_labels.index(label)
        except ValueError:
            raise ValueError(f"unknown actor '{label}'") from None

    def presence(self, layer: int) -> np.ndarray:
        """Sorted ids of the actors present on a layer."""
        return self._presence[layer]

    def edges(self, layer: int) -> np.ndarray:
        """Canonical (a<b) undirected edges on a layer, shape (m, 2)."""
        return self._edges[layer]


def parse_multilayer_edgelist(text, contact_layer_name: str) -> MultilayerNetwork:
    """Parse `actor_a actor_b layer` lines into a MultilayerNetwork.

    `#` starts a comment, blank lines are skipped, duplicate undirected
    edges collapse silently.  Ids follow first appearance order.
    """
    if hasattr(text, "read"):
        text = text.read()
    actor_ids: dict[str, int] = {}
    layer_ids: dict[str, int] = {}
    edges: dict[int, set] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise EdgeListError(
                f"line {lineno}: expected 'actor_a actor_b layer_name', "
                f"got {len(tokens)} token(s)")
        a_lab, b_lab, l_lab = tokens
        if a_lab == b_lab:
            raise EdgeListError(f"line {lineno}: self-loop on actor '{a_lab}'")
        a = actor_ids.setdefault(a_lab, len(actor_ids))
        b = actor_ids.setdefault(b_lab, len(actor_ids))
        li = layer_ids.setdefault(l_lab, len(layer_ids))
        edges.setdefault(li, set()).add((min(a, b), max(a, b)))
    if contact_layer_name not in layer_ids:
        raise EdgeListError(f"unknown contact layer '{contact_layer_name}'")
    layer_names = list(layer_ids)
    return MultilayerNetwork(list(actor_ids), layer_names, contact_layer_name,
                             [edges.get(li, set()) for li in range(len(layer_names))])


def serialize_multilayer_edgelist(net: MultilayerNetwork) -> str:
    """Inverse of parse_multilayer_edgelist up to relabelling."""
    lines = []
    for li, name in enumerate(net.layer_names):
        for a, b in net.edges(li):
            lines.append(f"{net.actor_labels[a]} {net.actor_labels[b]} {name}")
    return "\n".join(lines) + ("\n" if lines else "")


def generate_synthetic(num_actors: int, layer_specs: Sequence[tuple[str, float]],
                       contact_layer_name: str, seed: int) -> MultilayerNetwork:
    """Independent Erdos-Renyi layers over a shared actor set.

    Edge draws are counter-based on (seed, layer, pair), so the same seed
    always yields the same network.  Every actor is present on every layer.
    Intended for desk-scale test networks (the candidate pair set is
    materialised in memory).
    """
    if num_actors < 2:
        raise ValueError("num_actors must be >= 2")
    for name, p in layer_specs:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"edge probability for layer '{name}' not in [0,1]: {p}")
    labels = [f"a{i}" for i in range(num_actors)]
    iu, ju = np.triu_indices(num_actors, k=1)
    all_actors = np.arange(num_actors, dtype=np.int32)
    edges_by_layer = []
    presence = []
    for li, (name, p) in enumerate(layer_specs):
        base = event_base(seed, 0, Channel.EDGE_GENERATION)
        u = uniforms_from_packed(base, pack_subject_arrays(iu, ju, li))
        mask = u < p
        edges_by_layer.append(list(zip(iu[mask].tolist(), ju[mask].tolist())))
        presence.append(all_actors)
    return MultilayerNetwork(labels, [name for name, _ in layer_specs],
                             contact_layer_name, edges_by_layer, presence)


def neighbors_on_layer(net: MultilayerNetwork, actor: int, layer: int) -> np.ndarray:
    """All actors adjacent to `actor` on `layer`, ascending; empty if absent."""
    edges = net.edges(layer)
    out = np.concatenate([edges[edges[:, 0] == actor, 1],
                          edges[edges[:, 1] == actor, 0]])
    out.sort()
    return out


@dataclass(frozen=True)
class LayerSummary:
    name: str
    num_actors: int
    num_edges: int
    avg_degree: float


@dataclass(frozen=True)
class NetworkSummary:
    num_layers: int
    num_actors: int
    num_nodes: int
    num_edges: int
    avg_degree: float
    layers: tuple[LayerSummary, ...]

    @property
    def per_layer_avg_degree(self) -> dict[str, float]:
        return {l.name: l.avg_degree for l in self.layers}


def summarize_network(net: MultilayerNetwork) -> NetworkSummary:
    """Counts and degree means; avg_degree = 2 * edges / actors."""
    layers = []
    for li, name in enumerate(net.layer_names):
        present = len(net.presence(li))
        m = len(net.edges(li))
        layers.append(LayerSummary(name, present, m,
                                   2.0 * m / present if present else 0.0))
    return NetworkSummary(
        num_layers=net.num_layers,
        num_actors=net.num_actors,
        num_nodes=net.num_nodes,
        num_edges=net.num_edges,
        avg_degree=2.0 * net.num_edges / net.num_actors if net.num_actors else 0.0,
        layers=tuple(layers),
    )


def summary_csv(name: str, summary: NetworkSummary) -> str:
    """One total row, then one row per layer (network column = name/layer)."""
    lines = ["network,layers,actors,nodes,edges,avg_degree"]
    lines.append(f"{name},{summary.num_layers},{summary.num_actors},"
                 f"{summary.num_nodes},{summary.num_edges},{summary.avg_degree:.4f}")
    for lay in summary.layers:
        lines.append(f"{name}/{lay.name},1,{lay.num_actors},{lay.num_actors},"
                     f"{lay.num_edges},{lay.avg_degree:.4f}")
    return "\n".join(lines) + "\n"
