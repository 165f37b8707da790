import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError
from scipy.spatial.distance import pdist, squareform

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PointCloud:
    """
    Finite nonempty set of points in R^d.
    """
    points: np.ndarray
    labels: tuple = None

    def __post_init__(self):
        try:
            points = np.array(self.points, dtype=float)
        except ValueError as exc:
            raise ValidationError('Points have different dimensions.',
                                  code='dimension_mismatch') from exc
        if points.size == 0:
            raise ValidationError('Point cloud is empty.', code='empty_input')
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2:
            raise ValidationError('Points have different dimensions.', code='dimension_mismatch')
        if not np.all(np.isfinite(points)):
            raise ValidationError('Point coordinates must be finite.', code='parse')
        if self.labels is not None and len(self.labels) != len(points):
            raise ValidationError('One label per point is required.', code='dimension_mismatch')
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dimension(self):
        return self.points.shape[1]

    def translated(self, offset):
        return PointCloud(self.points + np.asarray(offset, dtype=float), self.labels)


class Metric:
    """Distance on a point cloud."""
    EUCLIDEAN = 'euclidean'
    CHEBYSHEV = 'chebyshev'
    EXPLICIT = 'explicit-matrix'

    KIND_CHOICES = [
        (EUCLIDEAN, 'Euclidean'),
        (CHEBYSHEV, 'Chebyshev (sup norm)'),
        (EXPLICIT, 'Explicit distance matrix'),
    ]

    def __init__(self, kind=EUCLIDEAN, matrix=None):
        if kind not in dict(self.KIND_CHOICES):
            raise ValidationError('Unknown metric %(kind)r.', code='parse', params={'kind': kind})
        self.kind = kind
        self.matrix = None
        if kind == self.EXPLICIT:
            if matrix is None:
                raise ValidationError('An explicit metric needs a matrix.', code='parse')
            matrix = np.asarray(matrix, dtype=float)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValidationError('Distance matrix must be square.', code='dimension_mismatch')
            if not np.array_equal(matrix, matrix.T):
                raise ValidationError('Distance matrix is not symmetric.', code='asymmetric_matrix')
            if np.any(np.diag(matrix) != 0) or np.any(matrix < 0):
                raise ValidationError('Distance matrix needs a zero diagonal and nonnegative entries.',
                                      code='asymmetric_matrix')
            self.matrix = matrix

    def __repr__(self):
        return f'Metric({self.kind!r})'

    @property
    def is_euclidean(self):
        return self.kind == self.EUCLIDEAN

    def distance_matrix(self, cloud):
        if self.kind == self.EXPLICIT:
            if self.matrix.shape[0] != len(cloud):
                raise ValidationError(
                    'Distance matrix has size %(m)s for %(n)s points.',
                    code='dimension_mismatch', params={'m': self.matrix.shape[0], 'n': len(cloud)},
                )
            return self.matrix
        if len(cloud) == 1:
            return np.zeros((1, 1))
        return squareform(pdist(cloud.points, metric=self.kind))


class Correspondence:
    """
    A relation between the points of X and Y whose projections are surjective.
    """

    def __init__(self, pairs):
        self.pairs = frozenset((int(a), int(b)) for a, b in pairs)

    @classmethod
    def identity(cls, n):
        return cls((k, k) for k in range(n))

    @classmethod
    def from_csv(cls, path):
        pairs = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            try:
                a, b = (int(x) for x in line.split(','))
            except ValueError as exc:
                raise ValidationError('Bad correspondence row at line %(line)s.', code='parse',
                                      params={'line': lineno}) from exc
            pairs.append((a, b))
        return cls(pairs)

    def transpose(self):
        return Correspondence((b, a) for a, b in self.pairs)

    def __eq__(self, other):
        return isinstance(other, Correspondence) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def validate(self, nx, ny):
        if {a for a, _ in self.pairs} != set(range(nx)) or {b for _, b in self.pairs} != set(range(ny)):
            raise ValidationError('Correspondence projections are not surjective.',
                                  code='not_surjective')


def distortion(corr, x, y, metric_x=None, metric_y=None):
    """sup over related pairs (a, b), (a', b') of |d_X(a, a') - d_Y(b, b')|."""
    corr.validate(len(x), len(y))
    dx = (metric_x or Metric()).distance_matrix(x)
    dy = (metric_y or Metric()).distance_matrix(y)
    pairs = np.array(sorted(corr.pairs))
    left, right = pairs[:, 0], pairs[:, 1]
    return float(np.max(np.abs(dx[np.ix_(left, left)] - dy[np.ix_(right, right)])))


def gromov_hausdorff_upper_bound(corr, x, y, metric_x=None, metric_y=None):
    return distortion(corr, x, y, metric_x, metric_y) / 2


def load_point_cloud(path):
    """CSV with one point per row, or a JSON array of arrays."""
    path = Path(path)
    text = path.read_text()
    if not text.strip():
        raise ValidationError('%(path)s is empty.', code='empty_input', params={'path': str(path)})
    if path.suffix.lower() == '.json':
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError('%(path)s: %(error)s', code='parse',
                                  params={'path': str(path), 'error': exc}) from exc
    else:
        rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            try:
                rows.append([float(x) for x in line.split(',')])
            except ValueError as exc:
                raise ValidationError('%(path)s line %(line)s: not a number.', code='parse',
                                      params={'path': str(path), 'line': lineno}) from exc
    if not rows:
        raise ValidationError('%(path)s holds no points.', code='empty_input',
                              params={'path': str(path)})
    if len({len(row) for row in rows}) != 1:
        raise ValidationError('Points have different dimensions.', code='dimension_mismatch')
    cloud = PointCloud(rows)
    logger.info('Loaded %d points in R^%d from %s', len(cloud), cloud.dimension, path)
    return cloud
