"""
Sparse exact linear algebra over a Field.

Vectors are plain dicts {label: coefficient} with no stored zeros.
Matrices are column-major: {column label: vector}, with the row and
column labels kept in an explicit order.
"""
import json
import logging

from django.core.exceptions import ValidationError

logger = logging.getLogger(__name__)


def axpy(field, target, vector, scalar=1):
    """target += scalar * vector, in place, dropping zeros."""
    if scalar == 0:
        return target
    for label, value in vector.items():
        new = field.add(target.get(label, field.zero), field.mul(scalar, value))
        if new == 0:
            target.pop(label, None)
        else:
            target[label] = new
    return target


def vector_add(field, u, v, scalar=1):
    return axpy(field, dict(u), v, scalar)


def vector_scale(field, u, scalar):
    if field.normalize(scalar) == 0:
        return {}
    return {label: field.mul(scalar, value) for label, value in u.items()}


def clean(field, vector):
    """Normalize coefficients and drop zeros."""
    out = {}
    for label, value in vector.items():
        value = field.normalize(value)
        if value != 0:
            out[label] = value
    return out


class SparseMatrix:
    """
    Column-major sparse matrix with labelled rows and columns.
    """

    def __init__(self, field, rows, cols, columns=None):
        self.field = field
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self._row_index = {label: k for k, label in enumerate(self.rows)}
        self._col_index = {label: k for k, label in enumerate(self.cols)}
        if len(self._row_index) != len(self.rows) or len(self._col_index) != len(self.cols):
            raise ValidationError('Repeated matrix labels.', code='basis_mismatch')
        self.columns = {}
        for col, vector in (columns or {}).items():
            if col not in self._col_index:
                raise ValidationError(
                    'Unknown column label %(label)r.', code='basis_mismatch',
                    params={'label': col},
                )
            vector = clean(field, vector)
            for row in vector:
                if row not in self._row_index:
                    raise ValidationError(
                        'Unknown row label %(label)r.', code='basis_mismatch',
                        params={'label': row},
                    )
            if vector:
                self.columns[col] = vector

    # Constructors

    @classmethod
    def identity(cls, field, labels):
        return cls(field, labels, labels, {label: {label: field.one} for label in labels})

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols)

    @classmethod
    def from_dense(cls, field, rows, cols, dense):
        """dense[i][j] is the entry at rows[i], cols[j]."""
        columns = {}
        for j, col in enumerate(cols):
            columns[col] = {rows[i]: dense[i][j] for i in range(len(rows)) if dense[i][j]}
        return cls(field, rows, cols, columns)

    # Access

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def column(self, col):
        return self.columns.get(col, {})

    def get(self, row, col):
        return self.columns.get(col, {}).get(row, self.field.zero)

    def row_order(self, row):
        return self._row_index[row]

    def nnz(self):
        return sum(len(v) for v in self.columns.values())

    def is_zero(self):
        return not self.columns

    def to_dense(self):
        dense = [[self.field.zero] * len(self.cols) for _ in self.rows]
        for col, vector in self.columns.items():
            j = self._col_index[col]
            for row, value in vector.items():
                dense[self._row_index[row]][j] = value
        return dense

    # Arithmetic

    def apply(self, vector):
        """Matrix times a sparse vector indexed by column labels."""
        out = {}
        for col, value in vector.items():
            if col not in self._col_index:
                raise ValidationError(
                    'Vector label %(label)r is not a column.', code='basis_mismatch',
                    params={'label': col},
                )
            axpy(self.field, out, self.columns.get(col, {}), value)
        return out

    def __matmul__(self, other):
        self._check_field(other)
        if set(self.cols) != set(other.rows):
            raise ValidationError('Inner bases differ.', code='basis_mismatch')
        columns = {col: self.apply(vector) for col, vector in other.columns.items()}
        return SparseMatrix(self.field, self.rows, other.cols, columns)

    def transpose(self):
        columns = {}
        for col, vector in self.columns.items():
            for row, value in vector.items():
                columns.setdefault(row, {})[col] = value
        return SparseMatrix(self.field, self.cols, self.rows, columns)

    @property
    def T(self):
        return self.transpose()

    def _combine(self, other, scalar):
        self._check_field(other)
        if set(self.rows) != set(other.rows) or set(self.cols) != set(other.cols):
            raise ValidationError('Matrix shapes differ.', code='basis_mismatch')
        columns = {col: dict(vector) for col, vector in self.columns.items()}
        for col, vector in other.columns.items():
            axpy(self.field, columns.setdefault(col, {}), vector, scalar)
        return SparseMatrix(self.field, self.rows, self.cols, columns)

    def __add__(self, other):
        return self._combine(other, self.field.one)

    def __sub__(self, other):
        return self._combine(other, self.field.neg(self.field.one))

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one))

    def scale(self, scalar):
        columns = {col: vector_scale(self.field, vector, scalar)
                   for col, vector in self.columns.items()}
        return SparseMatrix(self.field, self.rows, self.cols, columns)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and set(self.rows) == set(other.rows)
            and set(self.cols) == set(other.cols)
            and self.columns == other.columns
        )

    def __repr__(self):
        return f'SparseMatrix({len(self.rows)}x{len(self.cols)}, nnz={self.nnz()}, {self.field})'

    def restrict(self, rows=None, cols=None):
        """Submatrix on the given row and column labels."""
        rows = self.rows if rows is None else tuple(rows)
        cols = self.cols if cols is None else tuple(cols)
        keep = set(rows)
        columns = {}
        for col in cols:
            vector = {r: v for r, v in self.columns.get(col, {}).items() if r in keep}
            if vector:
                columns[col] = vector
        return SparseMatrix(self.field, rows, cols, columns)

    def _check_field(self, other):
        if self.field != other.field:
            raise ValidationError('Matrices live over different fields.', code='field_mismatch')

    # Elimination

    def reduce_columns(self):
        """
        Left-to-right column reduction keyed on the lowest nonzero row.
        Returns (reduced columns, pivots) where pivots maps a row label
        to the column whose lowest entry sits there.
        """
        field = self.field
        reduced = {}
        pivots = {}
        for col in self.cols:
            vector = dict(self.columns.get(col, {}))
            while vector:
                low = max(vector, key=self._row_index.__getitem__)
                other = pivots.get(low)
                if other is None:
                    pivots[low] = col
                    break
                factor = field.neg(field.div(vector[low], reduced[other][low]))
                axpy(field, vector, reduced[other], factor)
            reduced[col] = vector
        return reduced, pivots

    def rank(self):
        return len(self.reduce_columns()[1])

    def inverse(self):
        """Gauss-Jordan inverse of a square matrix."""
        field = self.field
        if len(self.rows) != len(self.cols):
            raise ValidationError('Only square matrices invert.', code='basis_mismatch')
        # Work on rows: row label -> {col: value}; augmented part maps rows to rows.
        work = {row: {} for row in self.rows}
        for col, vector in self.columns.items():
            for row, value in vector.items():
                work[row][col] = value
        aug = {row: {row: field.one} for row in self.rows}
        remaining = list(self.rows)
        pivot_of = {}
        for col in self.cols:
            pivot = next((r for r in remaining if work[r].get(col, 0) != 0), None)
            if pivot is None:
                raise ValidationError('Matrix is singular.', code='basis_mismatch')
            remaining.remove(pivot)
            inv = field.inverse(work[pivot][col])
            work[pivot] = vector_scale(field, work[pivot], inv)
            aug[pivot] = vector_scale(field, aug[pivot], inv)
            for row in self.rows:
                if row != pivot and work[row].get(col, 0) != 0:
                    factor = field.neg(work[row][col])
                    axpy(field, work[row], work[pivot], factor)
                    axpy(field, aug[row], aug[pivot], factor)
            pivot_of[col] = pivot
        # Row `pivot_of[c]` of the reduced system reads off row c of the inverse.
        columns = {}
        for col, pivot in pivot_of.items():
            for target, value in aug[pivot].items():
                columns.setdefault(target, {})[col] = value
        return SparseMatrix(field, self.cols, self.rows, columns)

    # Export

    def to_json(self, indent=None):
        """Debug dump with stable ordering."""
        def label(x):
            return x if isinstance(x, (int, str)) else list(x) if isinstance(x, tuple) else str(x)

        payload = {
            'field': self.field.characteristic,
            'rows': [label(r) for r in self.rows],
            'cols': [label(c) for c in self.cols],
            'entries': [
                [self._row_index[row], self._col_index[col], self.field.to_json(value)]
                for col in self.cols
                for row, value in sorted(self.columns.get(col, {}).items(),
                                         key=lambda item: self._row_index[item[0]])
            ],
        }
        return json.dumps(payload, indent=indent, sort_keys=True)
