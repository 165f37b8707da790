"""
Bottleneck distance between persistence diagrams.

The optimum of a matching-threshold problem is one of the pairwise or
diagonal costs, so the distance is the smallest candidate cost at which
a perfect matching exists in the threshold graph (Hopcroft-Karp).
"""
import logging
import math

import networkx as nx
from django.conf import settings

logger = logging.getLogger(__name__)

DIAGONAL = 'diagonal'


def _pair(bar):
    """(birth, death) from a Bar or a plain pair."""
    if hasattr(bar, 'birth'):
        return bar.birth, bar.death
    birth, death = bar
    return float(birth), math.inf if death in ('inf', None) else float(death)


def pair_cost(a, b):
    """Sup-norm distance of two bars; essential bars only meet essential bars."""
    (b1, d1), (b2, d2) = _pair(a), _pair(b)
    if math.isinf(d1) or math.isinf(d2):
        return abs(b1 - b2) if math.isinf(d1) and math.isinf(d2) else math.inf
    return max(abs(b1 - b2), abs(d1 - d2))


def diagonal_cost(a):
    birth, death = _pair(a)
    return (death - birth) / 2


def _tolerance(tolerance):
    return getattr(settings, 'PCS_TOLERANCE', 1e-9) if tolerance is None else tolerance


def matching_at(xs, ys, epsilon, tolerance=None):
    """
    A perfect epsilon-matching of two diagrams as a list of
    (x index or DIAGONAL, y index or DIAGONAL), or None when none exists.
    """
    tolerance = _tolerance(tolerance)
    limit = epsilon + tolerance
    graph = nx.Graph()
    left = [('x', i) for i in range(len(xs))] + [('y*', j) for j in range(len(ys))]
    right = [('y', j) for j in range(len(ys))] + [('x*', i) for i in range(len(xs))]
    graph.add_nodes_from(left, bipartite=0)
    graph.add_nodes_from(right, bipartite=1)
    for i, a in enumerate(xs):
        for j, b in enumerate(ys):
            if pair_cost(a, b) <= limit:
                graph.add_edge(('x', i), ('y', j))
        if diagonal_cost(a) <= limit:
            graph.add_edge(('x', i), ('x*', i))
    for j, b in enumerate(ys):
        if diagonal_cost(b) <= limit:
            graph.add_edge(('y*', j), ('y', j))
        for i in range(len(xs)):
            graph.add_edge(('y*', j), ('x*', i))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    if sum(1 for node in left if node in matching) < len(left):
        return None
    pairs = []
    for i in range(len(xs)):
        kind, j = matching[('x', i)]
        pairs.append((i, j if kind == 'y' else DIAGONAL))
    for j in range(len(ys)):
        kind, _ = matching[('y', j)]
        if kind == 'y*':
            pairs.append((DIAGONAL, j))
    return pairs


def candidate_costs(xs, ys):
    costs = {0.0}
    for a in xs:
        costs.add(diagonal_cost(a))
        for b in ys:
            costs.add(pair_cost(a, b))
    for b in ys:
        costs.add(diagonal_cost(b))
    return sorted(c for c in costs if math.isfinite(c))


def bottleneck(xs, ys, tolerance=None):
    """
    Exact bottleneck distance between two single-degree diagrams given as
    Bars or (birth, death) pairs; inf when their essential counts differ.
    """
    essential_x = sum(1 for a in xs if math.isinf(_pair(a)[1]))
    essential_y = sum(1 for b in ys if math.isinf(_pair(b)[1]))
    if essential_x != essential_y:
        return math.inf
    costs = candidate_costs(xs, ys)
    low, high = 0, len(costs) - 1
    while low < high:
        middle = (low + high) // 2
        if matching_at(xs, ys, costs[middle], tolerance) is not None:
            high = middle
        else:
            low = middle + 1
    return costs[low]


def d_grvect(bx, by):
    """Graded vector space distance: the largest degree-wise bottleneck distance."""
    degrees = sorted(set(bx.degrees) | set(by.degrees))
    values = {k: bottleneck(bx.in_degree(k), by.in_degree(k)) for k in degrees}
    logger.debug('Degree-wise bottleneck distances: %s', values)
    return max(values.values(), default=0.0)
