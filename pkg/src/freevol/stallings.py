"""Stallings subgroup graphs: folding, pruning, membership, rank, pullbacks.

A graph is a finite set of integer vertices with directed edges labeled by
positive generator indices.  A folded graph has at most one outgoing and one
incoming edge per (vertex, label), which makes the label-reading map to the
rose locally injective.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import TrivialSubgroup
from .words import Basis, Word

Edge = tuple[int, int, int]  # (source, target, label)


@dataclass(frozen=True)
class LabeledGraph:
    vertices: frozenset[int]
    edges: frozenset[Edge]
    basepoint: Optional[int] = None

    def __post_init__(self) -> None:
        for source, target, label in self.edges:
            if label <= 0:
                raise ValueError("edge labels are positive generator indices")
            if source not in self.vertices or target not in self.vertices:
                raise ValueError("edge endpoint outside vertex set")
        if self.basepoint is not None and self.basepoint not in self.vertices:
            raise ValueError("basepoint outside vertex set")

    def out_map(self) -> dict[tuple[int, int], int]:
        """(vertex, signed label) -> neighbor, for folded graphs."""
        table: dict[tuple[int, int], int] = {}
        for source, target, label in self.edges:
            table[(source, label)] = target
            table[(target, -label)] = source
        return table

    def degree(self, vertex: int) -> int:
        total = 0
        for source, target, _ in self.edges:
            total += (source == vertex) + (target == vertex)
        return total

    def is_folded(self) -> bool:
        seen: set[tuple[int, int]] = set()
        for source, target, label in self.edges:
            for key in ((source, label), (target, -label)):
                if key in seen:
                    return False
                seen.add(key)
        return True


@dataclass
class FoldTrace:
    """Replayable log of vertex merges and prunes performed while folding."""

    folds: list[tuple[int, int]] = field(default_factory=list)
    prunes: list[int] = field(default_factory=list)


def from_generators(basis: Basis, gens: Sequence[Word]) -> LabeledGraph:
    """Wedge of subdivided loops at basepoint 0, one loop per generator word."""
    if not gens or any(len(g) == 0 for g in gens):
        raise TrivialSubgroup("need nonempty generator words")
    vertices = {0}
    edges: set[Edge] = set()
    next_vertex = 1
    for gen in gens:
        current = 0
        for position, letter in enumerate(gen):
            is_last = position == len(gen) - 1
            target = 0 if is_last else next_vertex
            if not is_last:
                next_vertex += 1
            vertices.add(target)
            if letter > 0:
                edges.add((current, target, letter))
            else:
                edges.add((target, current, -letter))
            current = target
    return LabeledGraph(frozenset(vertices), frozenset(edges), basepoint=0)


def _prune(
    vertices: set[int],
    edges: set[Edge],
    keep: Optional[int],
    trace: FoldTrace,
) -> None:
    """Iteratively remove valence-<=1 vertices (except ``keep``)."""
    while True:
        degree: dict[int, int] = {v: 0 for v in vertices}
        for source, target, _ in edges:
            degree[source] += 1
            degree[target] += 1
        removable = sorted(
            v for v, d in degree.items() if d <= 1 and v != keep and len(vertices) > 1
        )
        if not removable:
            return
        for vertex in removable:
            if vertex not in vertices or len(vertices) == 1:
                continue
            incident = [e for e in edges if vertex in (e[0], e[1])]
            if len(incident) > 1:
                continue  # degree changed by an earlier removal in this sweep
            vertices.discard(vertex)
            for edge in incident:
                edges.discard(edge)
            trace.prunes.append(vertex)


def fold_and_core(graph: LabeledGraph, keep_basepoint: bool) -> tuple[LabeledGraph, FoldTrace]:
    """Fold to an immersion, then prune to a core graph.

    Fold scheduling is deterministic: among all fold candidates, merge the
    pair of vertices incident to the lowest (vertex id, label) conflict.
    """
    parent: dict[int, int] = {v: v for v in graph.vertices}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    edges = {(find(s), find(t), l) for s, t, l in graph.edges}
    trace = FoldTrace()
    while True:
        conflicts: dict[tuple[int, int, int], list[int]] = {}
        for source, target, label in edges:
            conflicts.setdefault((source, label, +1), []).append(target)
            conflicts.setdefault((target, label, -1), []).append(source)
        candidates = sorted(
            (vertex, label, direction, sorted(set(others)))
            for (vertex, label, direction), others in conflicts.items()
            if len(set(others)) > 1
        )
        if not candidates:
            # Also collapse duplicate edges (same source, target, label) --
            # already handled because ``edges`` is a set.
            break
        _, _, _, others = candidates[0]
        keep_vertex, merge_vertex = others[0], others[1]
        parent[find(merge_vertex)] = find(keep_vertex)
        trace.folds.append((keep_vertex, merge_vertex))
        edges = {(find(s), find(t), l) for s, t, l in edges}
    vertices = {find(v) for v in graph.vertices}
    basepoint = find(graph.basepoint) if graph.basepoint is not None else None
    edge_set = set(edges)
    _prune(vertices, edge_set, basepoint if keep_basepoint else None, trace)
    if not keep_basepoint:
        basepoint = None
    elif basepoint not in vertices:
        basepoint = None
    return (
        LabeledGraph(frozenset(vertices), frozenset(edge_set), basepoint=basepoint),
        trace,
    )


def subgroup_graph(basis: Basis, gens: Sequence[Word], keep_basepoint: bool = True) -> LabeledGraph:
    """Folded (core) graph of the subgroup generated by ``gens``."""
    gens = [g for g in gens if g]
    if not gens:
        raise TrivialSubgroup("all generators are trivial")
    folded, _ = fold_and_core(from_generators(basis, gens), keep_basepoint=keep_basepoint)
    return folded


def contains(graph: LabeledGraph, word: Word) -> bool:
    """Membership test: does ``word`` label a closed path at the basepoint?"""
    if graph.basepoint is None:
        raise ValueError("membership needs a basepointed graph")
    table = graph.out_map()
    current = graph.basepoint
    for letter in word:
        nxt = table.get((current, letter))
        if nxt is None:
            return False
        current = nxt
    return current == graph.basepoint


def rank(graph: LabeledGraph) -> int:
    """First Betti number E - V + 1 of a connected graph."""
    return len(graph.edges) - len(graph.vertices) + 1


def connected_components(graph: LabeledGraph) -> list[LabeledGraph]:
    adjacency: dict[int, set[int]] = {v: set() for v in graph.vertices}
    for source, target, _ in graph.edges:
        adjacency[source].add(target)
        adjacency[target].add(source)
    seen: set[int] = set()
    components: list[LabeledGraph] = []
    for start in sorted(graph.vertices):
        if start in seen:
            continue
        stack = [start]
        block = set()
        while stack:
            vertex = stack.pop()
            if vertex in block:
                continue
            block.add(vertex)
            stack.extend(adjacency[vertex] - block)
        seen |= block
        edges = frozenset(e for e in graph.edges if e[0] in block)
        basepoint = graph.basepoint if graph.basepoint in block else None
        components.append(LabeledGraph(frozenset(block), edges, basepoint=basepoint))
    return components


def pullback(graph1: LabeledGraph, graph2: LabeledGraph) -> list[LabeledGraph]:
    """Cores of all components of the fiber product over the rose.

    Vertex pairs are generated lazily from edge coincidences, so the full
    V1 x V2 product is never materialized.
    """
    table2: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for source, target, label in graph2.edges:
        table2.setdefault((label, +1), []).append((source, target))
    pair_ids: dict[tuple[int, int], int] = {}

    def pair_id(pair: tuple[int, int]) -> int:
        if pair not in pair_ids:
            pair_ids[pair] = len(pair_ids)
        return pair_ids[pair]

    edges: set[Edge] = set()
    for source1, target1, label in graph1.edges:
        for source2, target2 in table2.get((label, +1), []):
            edges.add((pair_id((source1, source2)), pair_id((target1, target2)), label))
    if not pair_ids:
        return []
    vertices = frozenset(pair_ids.values())
    product = LabeledGraph(vertices, frozenset(edges))
    cores: list[LabeledGraph] = []
    for component in connected_components(product):
        core, _ = fold_and_core(component, keep_basepoint=False)
        cores.append(core)
    return cores


def is_malnormal(graph: LabeledGraph) -> bool:
    """True iff every non-diagonal self-pullback component has rank 0.

    In a folded graph the diagonal of the self fiber product is a union of
    whole components, and each such component is detected by containing a
    pair with equal coordinates.
    """
    table: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for source, target, label in graph.edges:
        table.setdefault((label, +1), []).append((source, target))
    pair_ids: dict[tuple[int, int], int] = {}

    def pair_id(pair: tuple[int, int]) -> int:
        if pair not in pair_ids:
            pair_ids[pair] = len(pair_ids)
        return pair_ids[pair]

    edges: set[Edge] = set()
    for source1, target1, label in graph.edges:
        for source2, target2 in table.get((label, +1), []):
            edges.add((pair_id((source1, source2)), pair_id((target1, target2)), label))
    if not pair_ids:
        return True
    diagonal = {pair_id((v, v)) for v in graph.vertices if (v, v) in pair_ids}
    product = LabeledGraph(frozenset(pair_ids.values()), frozenset(edges))
    for component in connected_components(product):
        if component.vertices & diagonal:
            continue
        core, _ = fold_and_core(component, keep_basepoint=False)
        if rank(core) > 0:
            return False
    return True


def canonical_form(graph: LabeledGraph) -> tuple:
    """Canonical encoding of a folded graph up to label-preserving isomorphism.

    Breadth-first relabeling over (label, direction)-ordered edges; for
    graphs without a basepoint every vertex is tried as the start and the
    least encoding wins.
    """
    table = graph.out_map()
    labels = sorted({label for _, _, label in graph.edges})
    directions = [(label, sign) for label in labels for sign in (+1, -1)]

    def encode(start: int) -> tuple:
        order: dict[int, int] = {start: 0}
        queue = [start]
        encoding: list[tuple[int, int, int, int]] = []
        head = 0
        while head < len(queue):
            vertex = queue[head]
            head += 1
            for label, sign in directions:
                neighbor = table.get((vertex, label * sign))
                if neighbor is None:
                    continue
                if neighbor not in order:
                    order[neighbor] = len(order)
                    queue.append(neighbor)
                encoding.append((order[vertex], label, sign, order[neighbor]))
        if len(order) != len(graph.vertices):
            # Not connected from this start; encode remaining parts stably.
            encoding.append((-1, -1, -1, len(order)))
        return tuple(encoding)

    if graph.basepoint is not None:
        return ("based", encode(graph.basepoint))
    if not graph.vertices:
        return ("empty",)
    return ("free", min(encode(v) for v in sorted(graph.vertices)))


def isomorphic(graph1: LabeledGraph, graph2: LabeledGraph) -> bool:
    return canonical_form(graph1) == canonical_form(graph2)


def to_dot(graph: LabeledGraph, basis: Basis) -> str:
    """DOT export, one directed edge per graph edge, basepoint double-circled."""
    lines = ["digraph stallings {"]
    for vertex in sorted(graph.vertices):
        shape = "doublecircle" if vertex == graph.basepoint else "circle"
        lines.append(f'  v{vertex} [shape={shape}];')
    for source, target, label in sorted(graph.edges):
        name = basis.names[label - 1]
        lines.append(f'  v{source} -> v{target} [label="{name}"];')
    lines.append("}")
    return "\n".join(lines)
