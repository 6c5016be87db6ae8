"""Exact integer matrices and their Smith normal form.

Relation matrices coming out of presentations and 2-complexes are sparse
and mostly made of unit entries, so the reduction runs in two phases:
unit pivots are eliminated on sparse rows first, and only the residual
block goes to sympy's invariant factors over ZZ.
"""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

logger = logging.getLogger(__name__)


@dataclass
class IntMatrix:
    """Sparse integer matrix; rows[r] maps column -> nonzero entry."""

    n_rows: int
    n_cols: int
    rows: List[Dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if len(self.rows) != self.n_rows:
            raise ValueError(f"expected {self.n_rows} rows, got {len(self.rows)}")
        self.rows = [{c: int(v) for c, v in row.items() if v} for row in self.rows]
        for row in self.rows:
            if any(not 0 <= c < self.n_cols for c in row):
                raise ValueError(f"column index outside 0..{self.n_cols - 1}")

    @classmethod
    def from_dense(cls, data) -> "IntMatrix":
        array = np.asarray(data, dtype=object)
        if array.ndim != 2:
            array = array.reshape(len(array), -1)
        n_rows, n_cols = array.shape
        rows = [{c: int(array[r, c]) for c in range(n_cols) if array[r, c]} for r in range(n_rows)]
        return cls(n_rows, n_cols, rows)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols), dtype=object)
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                dense[r, c] = v
        return dense

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> "IntMatrix":
        """Row r of the result is row row_order[r]; column c is column col_order[c]."""
        new_col = {old: new for new, old in enumerate(col_order)}
        rows = [{new_col[c]: v for c, v in self.rows[r].items()} for r in row_order]
        return IntMatrix(self.n_rows, self.n_cols, rows)


@dataclass(frozen=True)
class SmithForm:
    invariants: Tuple[int, ...]  # nonzero diagonal, each dividing the next
    rank: int


def smith_normal_form(matrix: IntMatrix) -> SmithForm:
    units, residual = _eliminate_unit_pivots(matrix)
    diagonal = _residual_invariants(residual) if residual.size else ()
    invariants = (1,) * units + tuple(diagonal)
    logger.debug(
        "SNF of %dx%d: %d unit pivots, residual %s, rank %d",
        matrix.n_rows, matrix.n_cols, units, residual.shape, len(invariants),
    )
    return SmithForm(invariants=invariants, rank=len(invariants))


def integer_rank(matrix: IntMatrix) -> int:
    return smith_normal_form(matrix).rank


def _eliminate_unit_pivots(matrix: IntMatrix) -> Tuple[int, np.ndarray]:
    """Clear every +-1 pivot by row operations and drop its row and column.

    Once column c is zero outside the pivot row, column operations clear
    the rest of that row without touching any other row, so each pivot
    contributes one invariant factor 1.
    """
    active: Dict[int, Dict[int, int]] = {r: dict(row) for r, row in enumerate(matrix.rows) if row}
    users: Dict[int, set] = defaultdict(set)
    for r, row in active.items():
        for c in row:
            users[c].add(r)

    units = 0
    progress = True
    while progress:
        progress = False
        for r in sorted(active):
            row = active.get(r)
            if row is None:
                continue
            pivot_col = next((c for c in sorted(row) if abs(row[c]) == 1), None)
            if pivot_col is None:
                continue
            pivot = row[pivot_col]
            for other in sorted(users[pivot_col] - {r}):
                target = active[other]
                factor = target[pivot_col] * pivot
                for c, v in row.items():
                    value = target.get(c, 0) - factor * v
                    if value:
                        target[c] = value
                        users[c].add(other)
                    elif c in target:
                        del target[c]
                        users[c].discard(other)
                if not target:
                    del active[other]
            for c in row:
                users[c].discard(r)
            del active[r]
            units += 1
            progress = True

    columns = sorted({c for row in active.values() for c in row})
    position = {c: i for i, c in enumerate(columns)}
    residual = np.zeros((len(active), len(columns)), dtype=object)
    for i, row in enumerate(active[r] for r in sorted(active)):
        for c, v in row.items():
            residual[i, position[c]] = v
    return units, residual


def _residual_invariants(residual: np.ndarray) -> Tuple[int, ...]:
    rows, cols = residual.shape
    dm = DomainMatrix([[ZZ(int(v)) for v in row] for row in residual.tolist()], (rows, cols), ZZ)
    factors = sorted(abs(int(f)) for f in invariant_factors(dm) if f)
    # the diagonal may not be a divisibility chain yet, e.g. (2, 3) -> (1, 6)
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            g = math.gcd(factors[i], factors[j])
            factors[i], factors[j] = g, factors[i] * factors[j] // g
    return tuple(factors)
