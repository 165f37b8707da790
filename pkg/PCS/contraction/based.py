import math
from dataclasses import dataclass, field as dataclass_field

from django.core.exceptions import ValidationError

from chains.cochains import boundary_of
from chains.fields import Field
from chains.sparse import SparseMatrix, clean


@dataclass
class BasedComplex:
    """
    A complex with an ordered cell basis whose differential only reaches
    earlier cells. Simplicial chains (d lowers degree) and dg-algebra
    models (d raises degree) both fit.
    """
    field: Field
    cells: tuple
    degrees: dict
    differential: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        self.cells = tuple(self.cells)
        position = {c: k for k, c in enumerate(self.cells)}
        if len(position) != len(self.cells):
            raise ValidationError('Repeated cell labels.', code='duplicate_simplex')
        for cell, image in self.differential.items():
            image = clean(self.field, image)
            self.differential[cell] = image
            for other in image:
                if position.get(other, math.inf) >= position[cell]:
                    raise ValidationError(
                        'Differential of %(cell)r reaches %(other)r, which is not an earlier cell.',
                        code='monotonicity', params={'cell': cell, 'other': other},
                    )

    def __len__(self):
        return len(self.cells)

    def d(self, cell):
        return self.differential.get(cell, {})

    def prefix(self, n):
        """The subcomplex on the first n cells."""
        cells = self.cells[:n]
        return BasedComplex(
            self.field, cells, {c: self.degrees[c] for c in cells},
            {c: self.differential[c] for c in cells if c in self.differential},
        )

    def differential_matrix(self):
        return SparseMatrix(self.field, self.cells, self.cells,
                            {c: v for c, v in self.differential.items() if v})

    @classmethod
    def from_filtered_complex(cls, cx, field, stage=math.inf):
        """Simplicial chains of a filtration; cells are orderIndices."""
        alive = cx.stage(stage)
        index = {s.vertices: s.order_index for s in alive}
        differential = {}
        for s in alive:
            image = {index[f]: c for f, c in boundary_of(s.vertices, field).items()}
            if image:
                differential[s.order_index] = image
        return cls(field, [s.order_index for s in alive],
                   {s.order_index: s.dimension for s in alive}, differential)
