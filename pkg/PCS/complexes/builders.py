import logging

import networkx as nx
import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from .clouds import Metric
from .filtration import FilteredComplex, validate_ffdata

logger = logging.getLogger(__name__)


def _check_parameters(max_dim, max_scale):
    if max_dim < 0:
        raise ValidationError('max_dim must be nonnegative.', code='dimension_cap')
    if max_scale < 0:
        raise ValidationError('max_scale must be nonnegative.', code='parse')


def _neighbourhood_graph(distances, threshold):
    n = distances.shape[0]
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    rows, cols = np.nonzero(np.triu(distances <= threshold, k=1))
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return graph


def _cliques(graph, max_dim):
    """
    Cliques with at most max_dim + 1 vertices, as sorted tuples, and
    whether a larger clique was cut off.
    """
    cliques = []
    for clique in nx.enumerate_all_cliques(graph):
        if len(clique) > max_dim + 1:
            return cliques, True
        cliques.append(tuple(sorted(clique)))
    return cliques, False


def build_rips(cloud, metric=None, max_dim=2, max_scale=np.inf):
    """
    Vietoris-Rips filtration: a simplex enters at the largest pairwise
    distance among its vertices (the diameter convention).
    """
    _check_parameters(max_dim, max_scale)
    metric = metric or Metric()
    distances = metric.distance_matrix(cloud)
    graph = _neighbourhood_graph(distances, max_scale)
    records = []
    cliques, truncated = _cliques(graph, max_dim)
    for clique in cliques:
        if len(clique) == 1:
            value = 0.0
        else:
            value = float(distances[np.ix_(clique, clique)].max())
        records.append((clique, value))
    cx = FilteredComplex.from_records(records, dimension_cap=max_dim, truncated=truncated)
    validate_ffdata(cx).raise_first()
    logger.info('Rips complex: %d points, %d simplices up to dimension %d, scale %s',
                len(cloud), len(cx), max_dim, max_scale)
    return cx


def _circumball(points):
    """Smallest ball with all given points on its boundary (affinely independent points)."""
    if len(points) == 0:
        return None, -1.0
    base = points[0]
    if len(points) == 1:
        return base, 0.0
    a = points[1:] - base
    b = np.einsum('ij,ij->i', a, a)
    lam, *_ = np.linalg.lstsq(2 * a @ a.T, b, rcond=None)
    center = base + a.T @ lam
    return center, float(np.linalg.norm(points - center, axis=1).max())


def _welzl(points, boundary, dim, tolerance):
    if len(points) == 0 or len(boundary) == dim + 1:
        return _circumball(np.array(boundary)) if boundary else (None, -1.0)
    head, last = points[:-1], points[-1]
    center, radius = _welzl(head, boundary, dim, tolerance)
    if center is not None and np.linalg.norm(last - center) <= radius + tolerance:
        return center, radius
    return _welzl(head, boundary + [last], dim, tolerance)


def minimum_enclosing_ball(points, tolerance=None):
    """Exact minimum enclosing ball (Welzl recursion) of a small point set."""
    tolerance = getattr(settings, 'PCS_TOLERANCE', 1e-9) if tolerance is None else tolerance
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        raise ValidationError('No points to enclose.', code='empty_input')
    center, radius = _welzl(points, [], points.shape[1], tolerance)
    return center, radius


def build_cech(cloud, max_dim=2, max_scale=np.inf, metric=None):
    """
    Intrinsic Cech filtration: a simplex enters at the radius of the
    minimum enclosing ball of its vertices.
    """
    _check_parameters(max_dim, max_scale)
    if metric is not None and not metric.is_euclidean:
        raise ValidationError('Cech complexes need the euclidean metric.', code='non_euclidean')
    cap = getattr(settings, 'PCS_CECH_MAX_DIMENSION', 8)
    if cloud.dimension > cap:
        raise ValidationError(
            'Cech construction is limited to dimension %(cap)s, got %(d)s.',
            code='dimension_cap', params={'cap': cap, 'd': cloud.dimension},
        )
    distances = Metric().distance_matrix(cloud)
    graph = _neighbourhood_graph(distances, 2 * max_scale)
    values = {}
    records = []
    cliques, truncated = _cliques(graph, max_dim)
    for clique in cliques:
        if len(clique) == 1:
            value = 0.0
        else:
            _, radius = minimum_enclosing_ball(cloud.points[list(clique)])
            faces = (clique[:k] + clique[k + 1:] for k in range(len(clique)))
            value = max([radius] + [values.get(f, np.inf) for f in faces])
        if value <= max_scale:
            values[clique] = value
            records.append((clique, float(value)))
    cx = FilteredComplex.from_records(records, dimension_cap=max_dim, truncated=truncated)
    validate_ffdata(cx).raise_first()
    logger.info('Cech complex: %d points, %d simplices up to dimension %d, radius %s',
                len(cloud), len(cx), max_dim, max_scale)
    return cx
