"""Filling tests for a pair of cyclic splittings.

Two checks are implemented.  The free-action check verifies that no
nontrivial element is elliptic in both splittings by intersecting all
conjugates of their vertex groups through graph pullbacks.  The free-factor
check decides whether the two edge words can sit inside a common proper
free factor, using Whitehead minimization followed by the cut-vertex
criterion on the Whitehead graph of the minimized conjugacy classes.

The combined verdict is conservative: a failed free-factor check only
downgrades the answer to "unknown", because the pair may still separate
every free factor and cyclic subgroup by volume even when the edge words
lie in a common proper free factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from . import stallings
from . import volume as volume_mod
from .splittings import MarkedPair, require_valid, vertex_groups
from .words import (
    Automorphism,
    Basis,
    CyclicWord,
    Word,
    letter_sort_key,
    render_word,
)

WHITEHEAD_CRITERION = "whitehead-minimization + cut-vertex test"


@dataclass(frozen=True)
class WhiteheadGraph:
    """Adjacency structure of letter transitions in a set of cyclic words.

    Vertices are the ``2 * rank`` signed letters.  Each adjacent pair
    ``x . y`` inside a cyclic word (wrap-around included) contributes one
    edge joining ``x^-1`` and ``y``.
    """

    rank: int
    edges: tuple[tuple[int, int], ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        signed = [i for i in range(1, self.rank + 1)] + [
            -i for i in range(1, self.rank + 1)
        ]
        return tuple(sorted(signed, key=letter_sort_key))

    def _adjacency(self, removed: Optional[int] = None) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {
            v: set() for v in self.vertices if v != removed
        }
        for x, y in self.edges:
            if removed in (x, y):
                continue
            adj[x].add(y)
            adj[y].add(x)
        return adj

    def _is_connected(self, removed: Optional[int] = None) -> bool:
        adj = self._adjacency(removed)
        if not adj:
            return True
        seen = set()
        stack = [next(iter(sorted(adj, key=letter_sort_key)))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v] - seen)
        return len(seen) == len(adj)

    def is_connected(self) -> bool:
        return self._is_connected()

    def cut_vertex(self) -> Optional[int]:
        """A vertex whose removal disconnects the graph, if one exists."""
        if not self._is_connected():
            return None
        for v in self.vertices:
            if not self._is_connected(removed=v):
                return v
        return None


def whitehead_graph(classes: Sequence[CyclicWord], rank: int) -> WhiteheadGraph:
    edges: list[tuple[int, int]] = []
    for cyc in classes:
        letters = cyc.letters
        n = len(letters)
        for i in range(n):
            x = letters[i]
            y = letters[(i + 1) % n]
            pair = tuple(sorted((-x, y), key=letter_sort_key))
            edges.append(pair)  # type: ignore[arg-type]
    return WhiteheadGraph(rank=rank, edges=tuple(sorted(edges)))


@lru_cache(maxsize=16)
def _whitehead_moves(rank: int) -> tuple[tuple[int, tuple[int, ...], Automorphism], ...]:
    """All letter-multiplier moves: multiplier ``a`` plus a side set ``A``.

    The move sends ``x -> x a`` when ``x`` is in ``A`` (and ``x^-1`` is
    not), ``x -> a^-1 x`` when only ``x^-1`` is in ``A``, and conjugates
    by ``a`` when both are.  The multiplier itself is fixed.
    """
    basis = Basis.standard(rank)
    signed = sorted(
        [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)],
        key=letter_sort_key,
    )
    moves: list[tuple[int, tuple[int, ...], Automorphism]] = []
    for a in signed:
        others = [x for x in signed if abs(x) != abs(a)]
        for mask in range(1, 1 << len(others)):
            side = {a} | {others[i] for i in range(len(others)) if mask >> i & 1}
            images: list[Word] = []
            for g in range(1, rank + 1):
                if g == abs(a):
                    images.append((g,))
                    continue
                head = g in side
                tail = -g in side
                if head and tail:
                    images.append((-a, g, a))
                elif head:
                    images.append((g, a))
                elif tail:
                    images.append((-a, g))
                else:
                    images.append((g,))
            moves.append(
                (a, tuple(sorted(side, key=letter_sort_key)), Automorphism(basis, tuple(images)))
            )
    return tuple(moves)


def _total_length(classes: Sequence[CyclicWord]) -> int:
    return sum(len(c.letters) for c in classes)


def _apply_move(phi: Automorphism, classes: Sequence[CyclicWord]) -> tuple[CyclicWord, ...]:
    from .words import apply_cyclic

    return tuple(apply_cyclic(phi, c) for c in classes)


def whitehead_minimize(
    classes: Sequence[CyclicWord], rank: int
) -> tuple[tuple[CyclicWord, ...], int, list[dict]]:
    """Greedy descent to a simultaneous local length minimum.

    At each step every letter-multiplier move is tried on all classes at
    once; among the strictly improving moves the lexicographically least
    ``(multiplier, side set)`` is applied.  The returned move log replays
    the descent.
    """
    current = tuple(classes)
    total = _total_length(current)
    log: list[dict] = []
    moves = _whitehead_moves(rank)
    while True:
        best: Optional[tuple[int, tuple[int, ...], tuple[CyclicWord, ...], int]] = None
        for a, side, phi in moves:
            candidate = _apply_move(phi, current)
            length = _total_length(candidate)
            if length < total:
                key = (letter_sort_key(a), tuple(letter_sort_key(x) for x in side))
                if best is None or key < best_key:
                    best = (a, side, candidate, length)
                    best_key = key
        if best is None:
            return current, total, log
        a, side, current, total = best
        log.append(
            {"multiplier": a, "side": list(side), "total_length": total}
        )


def cut_vertex_check(
    classes: Sequence[CyclicWord], rank: int
) -> tuple[bool, dict]:
    """Minimize the classes and test the Whitehead graph for fillingness.

    Returns ``True`` when the minimized graph is connected and has no cut
    vertex (the classes cannot lie in a common proper free factor), along
    with replayable evidence.
    """
    basis = Basis.standard(rank)
    minimized, total, log = whitehead_minimize(classes, rank)
    graph = whitehead_graph(minimized, rank)
    connected = graph.is_connected()
    cut = graph.cut_vertex() if connected else None
    ok = connected and cut is None
    evidence = {
        "criterion": WHITEHEAD_CRITERION,
        "minimized_classes": [render_word(c.letters, basis) for c in minimized],
        "total_length": total,
        "move_log": log,
        "graph_edges": [
            [render_word((x,), basis), render_word((y,), basis)]
            for x, y in graph.edges
        ],
        "connected": connected,
        "cut_vertex": render_word((cut,), basis) if cut is not None else None,
    }
    return ok, evidence


def check_f2(pair: MarkedPair) -> tuple[bool, dict]:
    """True when no nontrivial element is elliptic in both splittings.

    Every conjugate of a vertex group of the first splitting must meet
    every conjugate of a vertex group of the second trivially; this is the
    statement that all pairwise pullbacks of the vertex-group core graphs
    have only rank-zero components.
    """
    require_valid(pair.first)
    require_valid(pair.second)
    basis = pair.ambient_basis
    groups1 = vertex_groups(pair.first)
    groups2 = vertex_groups(pair.second)
    entries: list[dict] = []
    ok = True
    for i, gens1 in enumerate(groups1):
        core1 = stallings.subgroup_graph(basis, gens1, keep_basepoint=False)
        for j, gens2 in enumerate(groups2):
            core2 = stallings.subgroup_graph(basis, gens2, keep_basepoint=False)
            components = stallings.pullback(core1, core2)
            ranks = sorted(stallings.rank(c) for c in components)
            if any(r > 0 for r in ranks):
                ok = False
            entries.append(
                {
                    "vertex_group_1": i,
                    "vertex_group_2": j,
                    "component_ranks": ranks,
                }
            )
    return ok, {"pullbacks": entries}


def check_f3(pair: MarkedPair) -> tuple[bool, dict]:
    """True when the two edge words cannot share a proper free factor."""
    require_valid(pair.first)
    require_valid(pair.second)
    c1 = CyclicWord.of(pair.first.edge_word_ambient())
    c2 = CyclicWord.of(pair.second.edge_word_ambient())
    return cut_vertex_check([c1, c2], pair.ambient_basis.rank)


@dataclass(frozen=True)
class FillingCertificate:
    """Outcome of the combined filling test with replayable evidence.

    ``fills`` is ``True`` when both checks pass, ``False`` when the
    free-action check fails (a definite obstruction), and ``None`` when
    only the free-factor check fails: the pair may still fill, but this
    tool cannot decide it.
    """

    f2: bool
    f2_evidence: dict
    f3: bool
    f3_evidence: dict
    fills: Optional[bool]
    verdict: str
    witness: Optional[tuple[str, ...]]

    def to_json(self) -> dict:
        return {
            "schema": "freevol/1",
            "f2": self.f2,
            "f2_evidence": self.f2_evidence,
            "f3": self.f3,
            "f3_evidence": self.f3_evidence,
            "fills": self.fills,
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def check_filling(pair: MarkedPair) -> FillingCertificate:
    f2_ok, f2_evidence = check_f2(pair)
    f3_ok, f3_evidence = check_f3(pair)
    if f2_ok and f3_ok:
        fills: Optional[bool] = True
        verdict = "fills"
        witness = None
    elif not f2_ok:
        fills = False
        verdict = "not_filling"
        witness = None
    else:
        fills = None
        verdict = "unknown"
        witness = tuple(f3_evidence["minimized_classes"])
    return FillingCertificate(
        f2=f2_ok,
        f2_evidence=f2_evidence,
        f3=f3_ok,
        f3_evidence=f3_evidence,
        fills=fills,
        verdict=verdict,
        witness=witness,
    )


def check_f1_for(pair: MarkedPair, gens: Sequence[Word]) -> tuple[bool, dict]:
    """Discharge one candidate subgroup: its two volumes must not both vanish."""
    vol1 = volume_mod.free_volume(pair.first, list(gens))
    vol2 = volume_mod.free_volume(pair.second, list(gens))
    return vol1 + vol2 > 0, {"vol_1": vol1, "vol_2": vol2}
