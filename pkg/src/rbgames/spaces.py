"""Enumeration and search over player strategy spaces."""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Mapping

from .errors import CapacityError, InputError
from .matroids import Matroid, enumerate_bases
from .model import ExplicitAntichain, GameInstance, Graph, NetworkTerminals, Player

PATH_CAP = 4096


def enumerate_strategies(instance: GameInstance, player: Player) -> list[frozenset[str]]:
    """All configurations of one player, in a canonical lexicographic order."""
    space = player.strategy_space
    if isinstance(space, ExplicitAntichain):
        return list(space.sets)
    if isinstance(space, Matroid):
        return enumerate_bases(space)
    assert isinstance(space, NetworkTerminals)
    return simple_paths(instance.graph, space.source, space.target)


def simple_paths(graph: Graph, source: str, target: str, cap: int = PATH_CAP) -> list[frozenset[str]]:
    """Arc-resource sets of all simple source->target paths."""
    order = graph.node_order
    if source not in order or target not in order:
        raise InputError(f"unknown terminal: {source!r} or {target!r}")
    paths: set[frozenset[str]] = set()

    def walk(node: str, visited: set[str], acc: list[str]) -> None:
        if node == target:
            paths.add(frozenset(acc))
            if len(paths) > cap:
                raise CapacityError(f"more than {cap} simple paths from {source} to {target}")
            return
        for arc in graph.out_arcs(node):
            if arc.head in visited:
                continue
            acc.append(arc.resource)
            walk(arc.head, visited | {arc.head}, acc)
            acc.pop()

    walk(source, {source}, [])
    return sorted(paths, key=sorted)


def lex_min_path(
    graph: Graph, source: str, target: str, weights: Mapping[str, Fraction]
) -> tuple[frozenset[str], Fraction]:
    """Cheapest source->target path under non-negative additive arc weights.

    Among minimum-weight paths, returns the one whose node sequence is
    lexicographically first in node declaration order (then resource order for
    parallel arcs). Non-negative weights make a cheapest walk a path, so no
    simple-path restriction is needed for optimality; the tie-breaking walk
    still avoids revisits to stay simple.
    """
    order = graph.node_order
    for arc in graph.arcs:
        if arc.resource not in weights:
            raise InputError(f"missing weight for arc resource {arc.resource}")
        if weights[arc.resource] < 0:
            raise InputError(f"negative arc weight on {arc.resource}")
    # Exact Dijkstra toward the target over reversed arcs.
    dist: dict[str, Fraction] = {}
    heap: list[tuple[Fraction, int, str]] = [(Fraction(0), order[target], target)]
    while heap:
        d, _, node = heapq.heappop(heap)
        if node in dist:
            continue
        dist[node] = d
        for arc in graph.in_arcs(node):
            if arc.tail not in dist:
                heapq.heappush(heap, (d + weights[arc.resource], order[arc.tail], arc.tail))
    if source not in dist:
        raise InputError(f"no route from {source} to {target}")

    def walk(node: str, visited: set[str], acc: list[str]):
        if node == target:
            return list(acc)
        tight = [
            arc
            for arc in graph.out_arcs(node)
            if arc.head in dist
            and arc.head not in visited
            and weights[arc.resource] + dist[arc.head] == dist[node]
        ]
        tight.sort(key=lambda a: (order[a.head], a.resource))
        for arc in tight:
            acc.append(arc.resource)
            found = walk(arc.head, visited | {arc.head}, acc)
            if found is not None:
                return found
            acc.pop()
        return None

    path = walk(source, {source}, [])
    if path is None:  # cannot happen: a tight simple path always exists
        raise InputError(f"no route from {source} to {target}")
    return frozenset(path), dist[source]
