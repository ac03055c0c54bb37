"""Exact generating-graph computations.

Two vertices x, y of the generating graph (nonidentity elements of G) are
joined when they generate G. This module computes the class-wise vertex
degrees from double cosets of centralizers, and materializes the graph
explicitly for small groups so that a backtracking search can act as an
independent oracle.
"""

import math
from collections.abc import Sequence
from fractions import Fraction

import networkx as nx

from genhamilton.core.models.degrees import DegreeMatrix
from genhamilton.core.models.reports import CycleSearchResult
from genhamilton.core.services.permcore import (
    ClassTable,
    Images,
    NotInGroupError,
    NotTransitiveError,
    Permutation,
    PermGroup,
    PermGroupError,
    RightCosets,
    centralizer,
    element_closure,
    is_dihedral,
    is_normal,
)
from genhamilton.core.utils.logger import event_log, logger


class GraphError(Exception):
    """Raised when a generating-graph computation fails."""

    pass


class OracleCapExceededError(GraphError):
    """Raised when a group is too large for the explicit graph."""

    pass


class SearchPreconditionError(GraphError):
    """Raised when a graph is too small for a Hamiltonian cycle search."""

    pass


def _generates(group: PermGroup, generators: Sequence[Images]) -> bool:
    """Whether the generators (elements of a transitive group) generate it."""
    if group.order == 1:
        return True
    moved = [p - 1 for p in group.moved_points]
    orbit = {moved[0]}
    stack = [moved[0]]
    while stack:
        point = stack.pop()
        for g in generators:
            image = g[point]
            if image not in orbit:
                orbit.add(image)
                stack.append(image)
    if len(orbit) != len(moved):
        return False
    # A subgroup with more than half the elements is the whole group.
    half = group.order // 2
    return len(element_closure(group.degree, generators, stop_above=half)) > half


def is_generating_pair(group: PermGroup, x: Permutation, y: Permutation) -> bool:
    """Whether x and y generate ``group``.

    A transitivity pretest on the moved points of the group rejects most
    non-generating pairs before any subgroup is enumerated.

    Raises:
        NotTransitiveError: If the group is not transitive on its moved points
        NotInGroupError: If x or y is not an element of the group
    """
    if not group.transitive:
        raise NotTransitiveError("group must be transitive on its moved points")
    for element in (x, y):
        if element not in group:
            raise NotInGroupError(f"{element} is not an element of the group")
    return _generates(group, (x._images, y._images))


def _prime_residues(n: int) -> list[int]:
    return [d for d in range(2, n) if math.gcd(d, n) == 1]


def vertex_degree_matrix(
    group: PermGroup,
    classes: ClassTable,
    normal_subgroups: Sequence[PermGroup],
    reductions: bool = True,
) -> DegreeMatrix:
    """Exact class-wise vertex degrees of the generating graph.

    Entry [i][j] counts the elements of class j+1 that generate the group
    together with the representative of class i+1 (the identity class is
    left out). For each pair of classes the elements of class j+1 that
    pair with s_i correspond to the C(s_j)-C(s_i) double cosets; summing
    the sizes of the generating ones gives |C(s_j)| * entry[i][j] and
    |C(s_i)| * entry[j][i] at once.

    With ``reductions`` the following shortcuts apply:
        * classes of generators of the same cyclic subgroup share rows
          and columns,
        * two elements of a common listed normal subgroup never generate,
        * two involutions generate only dihedral groups.

    Args:
        group: A group, transitive on its moved points
        classes: Its class table
        normal_subgroups: Proper normal subgroups of the group
        reductions: Apply the shortcuts above

    Returns:
        The exact degree matrix

    Raises:
        NotTransitiveError: If the group is not transitive
        PermGroupError: If the class table or a normal subgroup does not fit
    """
    if not group.transitive:
        raise NotTransitiveError("group must be transitive on its moved points")
    if classes.group is not group and classes.group.element_set != group.element_set:
        raise PermGroupError("class table belongs to a different group")
    for sub in normal_subgroups:
        if sub.order >= group.order or not is_normal(group, sub):
            raise PermGroupError("normal subgroups must be proper and normal")

    reps = classes.reps[1:]
    orders = classes.orders[1:]
    n = len(reps)
    member_sets = [sub.element_set for sub in normal_subgroups]
    dihedral = is_dihedral(group) if reductions else False

    matrix: list[list[int]] = [[0] * n for _ in range(n)]
    cosets: list[RightCosets | None] = [None] * n
    cents: list[PermGroup | None] = [None] * n
    containing: list[frozenset[int]] = [frozenset()] * n
    powers: list[int | None] = [None] * n
    computed_cells = 0

    for i in range(n):
        source = powers[i]
        if reductions and source is not None:
            for j in range(i + 1):
                matrix[i][j] = matrix[source][j]
                matrix[j][i] = matrix[j][source]
            continue

        s_i = reps[i]
        containing[i] = frozenset(k for k, s in enumerate(member_sets) if s_i._images in s)
        cents[i] = centralizer(group, s_i)
        cosets[i] = RightCosets(group, cents[i])

        for j in range(i + 1):
            copied = powers[j]
            if reductions and copied is not None:
                matrix[i][j] = matrix[i][copied]
                matrix[j][i] = matrix[copied][i]
            elif reductions and (
                containing[i] & containing[j]
                or (orders[i] == 2 and orders[j] == 2 and not dihedral)
            ):
                matrix[i][j] = 0
                matrix[j][i] = 0
            else:
                s_j = reps[j]
                cent_i, cent_j, cosets_j = cents[i], cents[j], cosets[j]
                assert cent_i is not None and cent_j is not None and cosets_j is not None
                generating = 0
                for rep, size in cosets_j.double_cosets(cent_i):
                    if _generates(group, (s_i._images, s_j.conjugate(rep)._images)):
                        generating += size
                if generating % cent_j.order or generating % cent_i.order:
                    raise GraphError(
                        f"double coset sum {generating} not divisible by centralizer orders"
                    )
                matrix[i][j] = generating // cent_j.order
                matrix[j][i] = generating // cent_i.order
                computed_cells += 1

        if reductions:
            for d in _prime_residues(orders[i]):
                target = classes.class_index(s_i.power(d)) - 1
                if target > i and powers[target] is None:
                    powers[target] = i

    logger.debug(f"Computed {computed_cells} double coset sums for {n} classes")
    event_log(
        "matrix_computed",
        {"order": group.order, "classes": n + 1, "cells": computed_cells, "reductions": reductions},
    )
    return DegreeMatrix(
        class_lengths=classes.sizes,
        entries=tuple(tuple(row) for row in matrix),
        kind="exact",
    )


class ElementGraph:
    """The generating graph on explicit vertices.

    Vertex k stands for ``vertex_elements[k]``; the nonidentity elements are
    numbered in ascending element order.
    """

    def __init__(self, vertex_elements: Sequence[Permutation], graph: nx.Graph) -> None:
        self.vertex_elements: tuple[Permutation, ...] = tuple(vertex_elements)
        self.graph = graph
        self._index = {x: k for k, x in enumerate(self.vertex_elements)}

    def index_of(self, element: Permutation) -> int:
        try:
            return self._index[element]
        except KeyError as e:
            raise NotInGroupError(f"{element} is not a vertex of the graph") from e

    def is_adjacent(self, u: int, v: int) -> bool:
        return bool(self.graph.has_edge(u, v))

    def adjacency(self) -> list[list[bool]]:
        """Symmetric boolean adjacency matrix."""
        m = len(self.vertex_elements)
        return [[self.graph.has_edge(u, v) for v in range(m)] for u in range(m)]

    def __len__(self) -> int:
        return len(self.vertex_elements)


def adjacency_graph(group: PermGroup, oracle_cap: int = 360) -> ElementGraph:
    """Materialize the generating graph of a small group.

    Raises:
        OracleCapExceededError: If the group order exceeds ``oracle_cap``
        NotTransitiveError: If the group is not transitive
    """
    if group.order > oracle_cap:
        raise OracleCapExceededError(
            f"order cap exceeded: group order {group.order} is above the oracle cap {oracle_cap}"
        )
    if not group.transitive:
        raise NotTransitiveError("group must be transitive on its moved points")

    vertices = [x for x in group.elements if not x.is_identity]
    graph = nx.Graph()
    graph.add_nodes_from(range(len(vertices)))
    for u, x in enumerate(vertices):
        for v in range(u + 1, len(vertices)):
            if _generates(group, (x._images, vertices[v]._images)):
                graph.add_edge(u, v)
    logger.debug(
        f"Generating graph: {graph.number_of_nodes()} vertices, {graph.number_of_edges()} edges"
    )
    return ElementGraph(vertices, graph)


def degree_of_vertex(graph: ElementGraph, vertex: int | Permutation) -> int:
    """Number of neighbours of a vertex, given by index or element."""
    index = graph.index_of(vertex) if isinstance(vertex, Permutation) else vertex
    return int(graph.graph.degree[index])


def check_degree_consistency(
    graph: ElementGraph, classes: ClassTable, matrix: DegreeMatrix
) -> list[int]:
    """Classes whose representative's degree differs from the matrix row sum.

    Returns:
        Class positions (0-based, identity class at 0) that disagree
    """
    mismatches = []
    for i, row_sum in enumerate(matrix.row_sums(), start=1):
        if degree_of_vertex(graph, classes.reps[i]) != row_sum:
            mismatches.append(i)
    return mismatches


def verify_cycle(graph: ElementGraph, order: Sequence[int]) -> bool:
    """Whether ``order`` visits every vertex once along edges, closing up."""
    m = len(graph)
    if len(order) != m or sorted(order) != list(range(m)):
        return False
    return all(graph.is_adjacent(order[k], order[(k + 1) % m]) for k in range(m))


def _dead_end(
    adjacency: list[set[int]],
    free: list[int],
    on_path: list[bool],
    start: int,
    end: int,
) -> tuple[bool, int | None]:
    """Prune check after extending the path to ``end``.

    Every unvisited vertex still needs two cycle neighbours among the
    unvisited vertices, the path end and the start. A vertex that can only
    get them by coming next is forced.

    Returns:
        (dead, forced vertex or None)
    """
    forced = None
    closing = 0
    for u, visited in enumerate(on_path):
        if visited:
            continue
        touches_end = end in adjacency[u]
        touches_start = start in adjacency[u]
        if free[u] + touches_end + touches_start < 2:
            return True, None
        if touches_end and free[u] + touches_start < 2:
            if forced is not None:
                return True, None
            forced = u
        elif touches_start and free[u] + touches_end < 2:
            closing += 1
            if closing > 1:
                return True, None
    return False, forced


def hamiltonian_cycle_search(graph: ElementGraph, budget: int) -> CycleSearchResult:
    """Backtracking search for a Hamiltonian cycle.

    The search starts at a vertex of minimum degree and tries neighbours in
    ascending order of their remaining degree. A backtrack is counted each
    time a partial path is abandoned.

    Args:
        graph: The graph to search
        budget: Backtracks allowed before giving up

    Returns:
        A verified witness, a definitive "none", or "budget_exhausted"

    Raises:
        SearchPreconditionError: If the graph has fewer than 3 vertices
    """
    m = len(graph)
    if m < 3:
        raise SearchPreconditionError(f"Hamiltonian cycle search needs 3 vertices, got {m}")
    adjacency = [set(graph.graph.adj[u]) for u in range(m)]
    if any(len(neighbours) < 2 for neighbours in adjacency) or not nx.is_connected(graph.graph):
        return CycleSearchResult(status="none", backtracks=0)

    start = min(range(m), key=lambda u: (len(adjacency[u]), u))
    free = [len(neighbours) for neighbours in adjacency]
    on_path = [False] * m

    def enter(v: int) -> None:
        on_path[v] = True
        for w in adjacency[v]:
            free[w] -= 1

    def leave(v: int) -> None:
        on_path[v] = False
        for w in adjacency[v]:
            free[w] += 1

    def candidates(v: int, forced: int | None) -> list[int]:
        if forced is not None:
            return [forced]
        options = [w for w in adjacency[v] if not on_path[w]]
        # Popped from the end, so the best candidate goes last.
        options.sort(key=lambda w: (free[w], w), reverse=True)
        return options

    path = [start]
    enter(start)
    stack = [candidates(start, None)]
    backtracks = 0

    while stack:
        options = stack[-1]
        if options:
            v = options.pop()
            path.append(v)
            enter(v)
            if len(path) == m:
                if start in adjacency[v]:
                    if not verify_cycle(graph, path):
                        raise GraphError("search produced an invalid cycle")
                    return CycleSearchResult(
                        status="witness", cycle=tuple(path), backtracks=backtracks
                    )
                dead, forced = True, None
            else:
                dead, forced = _dead_end(adjacency, free, on_path, start, v)
            if not dead:
                stack.append(candidates(v, forced))
                continue
        else:
            stack.pop()

        leave(path.pop())
        if not path:
            break
        backtracks += 1
        if backtracks > budget:
            logger.info(f"Hamiltonian search gave up after {budget} backtracks")
            return CycleSearchResult(status="budget_exhausted", backtracks=backtracks)

    return CycleSearchResult(status="none", backtracks=backtracks)


def naive_criteria_check(
    class_lengths: Sequence[int], matrix: DegreeMatrix
) -> tuple[bool, bool]:
    """Check both degree criteria on the expanded per-vertex sequence.

    Each class contributes its row sum, rounded up, once per element.

    Returns:
        (posa, chvatal)
    """
    if len(class_lengths) != matrix.dimension + 1:
        raise GraphError(
            f"{len(class_lengths)} class lengths do not fit a {matrix.dimension}x{matrix.dimension} matrix"
        )
    degrees: list[int] = []
    for row_sum, length in zip(matrix.row_sums(), class_lengths[1:]):
        degrees.extend([math.ceil(Fraction(row_sum))] * length)
    degrees.sort()
    m = len(degrees)

    def d(k: int) -> int:
        return degrees[k - 1]

    indices = range(1, (m - 1) // 2 + 1)
    posa = all(d(k) >= k + 1 for k in indices)
    chvatal = all(d(k) >= k + 1 or d(m - k) >= m - k for k in indices)
    return posa, chvatal
