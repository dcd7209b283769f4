"""Small exact digraph utilities: SCCs and reachability closures.

All functions work on adjacency lists over integer node ids 0..n-1.
"""

from __future__ import annotations


def tarjan_scc(adj: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, iterative Tarjan.

    Returns components in reverse topological order (successors first),
    each sorted by node id.
    """
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        # explicit DFS stack of (node, next-edge-position)
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                sccs.append(comp)
    return sccs


def reachable_sets(adj: list[list[int]], reflexive: bool) -> list[set[int]]:
    """reach[v] = nodes reachable from v (following edges forward).

    With reflexive=False the relation requires at least one edge, so
    v is in reach[v] only when v lies on a cycle.
    """
    n = len(adj)
    reach: list[set[int]] = []
    for v in range(n):
        seen: set[int] = set()
        frontier = list(adj[v])
        while frontier:
            w = frontier.pop()
            if w not in seen:
                seen.add(w)
                frontier.extend(adj[w])
        reach.append(seen)
    if reflexive:
        for v in range(n):
            reach[v].add(v)
    return reach


def reverse_adj(adj: list[list[int]]) -> list[list[int]]:
    rev: list[list[int]] = [[] for _ in adj]
    for v, outs in enumerate(adj):
        for w in outs:
            rev[w].append(v)
    return rev
