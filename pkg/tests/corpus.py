"""Seeded random graph corpus: 20 graphs, rank <= 2, <= 6 vertices.

Rank-2 graphs come from constructions whose vertex matrices commute by
design (extra color of vertex loops, a parallel color over a cycle, or
a single vertex with a random square bijection); rank-1 graphs are
random functional graphs, so every vertex keeps an incoming edge.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from kgraphkms import Dynamics, KGraph, load_kgraph
from kgraphkms.harmonic import HarmonicComponentInfo, classify_components

import graphs as gb

CORPUS_SEED = 20250810


@dataclass(frozen=True)
class CorpusGraph:
    name: str
    text: str
    graph: KGraph


def _rand_k1(rng: random.Random, n: int) -> str:
    verts = [f"v{i}" for i in range(n)]
    edges = []
    eid = 0
    # one incoming edge per vertex (random source): no sources, and a
    # functional digraph always contains a cycle
    for v in verts:
        src = verts[rng.randrange(n)]
        edges.append((f"e{eid}", 1, src, v))
        eid += 1
    for _ in range(rng.randrange(0, 3)):
        src = verts[rng.randrange(n)]
        dst = verts[rng.randrange(n)]
        edges.append((f"e{eid}", 1, src, dst))
        eid += 1
    return gb.doc(1, verts, edges)


def _cycle_tail(rng: random.Random) -> str:
    length = rng.randrange(2, 5)
    base = json.loads(gb.cycle_doc(length))
    base["vertices"].append("tail")
    base["edges"].append({"id": "t", "color": 1, "src": "v1", "dst": "tail"})
    return json.dumps(base)


def _single_vertex_2graph(rng: random.Random) -> str:
    a = 2
    perm = list(range(1, a + 1))
    rng.shuffle(perm)
    edges = [(f"f{i}", 1, "v", "v") for i in range(1, a + 1)]
    edges += [("g", 2, "v", "v")]
    squares = [(f"f{i}", "g", "g", f"f{perm[i - 1]}") for i in range(1, a + 1)]
    return gb.doc(2, ["v"], edges, squares)


def _light_sink(rng: random.Random) -> str:
    return gb.doc(1, ["v", "u"], [
        ("a", 1, "v", "v"), ("c", 1, "v", "u"), ("d", 1, "u", "u")
    ])


def build_corpus(seed: int = CORPUS_SEED) -> list[CorpusGraph]:
    rng = random.Random(seed)
    makers = [
        ("rand_k1", lambda: _rand_k1(rng, rng.randrange(2, 6))),
        ("rand_k1", lambda: _rand_k1(rng, rng.randrange(2, 6))),
        ("cycle_tail", lambda: _cycle_tail(rng)),
        ("disjoint_loops", lambda: gb.disjoint_loops_doc(rng.randrange(2, 4))),
        ("single_vertex_k2", lambda: _single_vertex_2graph(rng)),
        ("loop_aug_cycle",
         lambda: gb.loop_augmented_doc(gb.cycle_doc(rng.randrange(2, 5)))),
        ("loop_aug_sink",
         lambda: gb.loop_augmented_doc(gb.sink_feeding_doc())),
        ("parallel_cycle",
         lambda: gb.parallel_doc(gb.cycle_doc(rng.randrange(2, 4)))),
        ("double_cycle", lambda: _double_cycle(rng)),
        ("rand_k1", lambda: _rand_k1(rng, rng.randrange(3, 7))),
        ("rand_k1", lambda: _rand_k1(rng, rng.randrange(2, 6))),
        ("rand_k1", lambda: _rand_k1(rng, rng.randrange(2, 6))),
        ("cycle_tail", lambda: _cycle_tail(rng)),
        ("disjoint_loops", lambda: gb.disjoint_loops_doc(rng.randrange(2, 4))),
        ("single_vertex_k2", lambda: _single_vertex_2graph(rng)),
        ("loop_aug_cycle",
         lambda: gb.loop_augmented_doc(gb.cycle_doc(rng.randrange(2, 5)))),
        ("loop_aug_light_sink", lambda: gb.loop_augmented_doc(_light_sink(rng))),
        ("parallel_cycle",
         lambda: gb.parallel_doc(gb.cycle_doc(rng.randrange(2, 4)))),
        ("double_cycle", lambda: _double_cycle(rng)),
        ("rand_k1", lambda: _rand_k1(rng, rng.randrange(3, 7))),
    ]
    docs = [
        (f"{name}_{i:02d}", make()) for i, (name, make) in enumerate(makers)
    ]
    return [CorpusGraph(name, text, load_kgraph(text)) for name, text in docs]


def _double_cycle(rng: random.Random) -> str:
    length = rng.randrange(2, 4)
    verts = [f"a{i}" for i in range(length)] + [f"b{i}" for i in range(length)]
    edges = [
        (f"ea{i}", 1, f"a{i}", f"a{(i + 1) % length}") for i in range(length)
    ] + [
        (f"eb{i}", 1, f"b{i}", f"b{(i + 1) % length}") for i in range(length)
    ]
    return gb.doc(1, verts, edges)


def matching_sessions(
    g: KGraph,
) -> list[tuple[Dynamics, list[HarmonicComponentInfo]]]:
    """Group the harmonic components by spectrum; each group gets the
    dynamics (beta = 1, r_i = ln rho_i) it matches."""
    groups: dict[tuple, list[HarmonicComponentInfo]] = {}
    exact_logs: dict[tuple, tuple[float, ...]] = {}
    for info in classify_components(g):
        if not info.harmonic:
            continue
        logs = tuple(math.log(rho) for rho in info.spectrum)
        key = tuple(round(x, 9) for x in logs)
        groups.setdefault(key, []).append(info)
        exact_logs.setdefault(key, logs)
    return [
        (Dynamics(exact_logs[key], 1.0), groups[key]) for key in sorted(groups)
    ]
