"""Exact sparse linear algebra over the rationals.

Deterministic by construction: columns are processed in ascending order and
the pivot of each independent column is its first nonzero row (the
first-nonzero, row-major pivot rule). Kernel vectors are normalized to
leading coefficient +1; particular solutions set all free variables to
zero. No floating point is involved anywhere.
"""

from .rat import Q, rational
from ._kernels import column_echelon, poly_add_scaled


class NoSolution:
    """Sentinel value returned by solve_particular for inconsistent systems."""

    __slots__ = ()

    def __repr__(self):
        return "NoSolution"

    def __bool__(self):
        return False


NO_SOLUTION = NoSolution()


class SparseMatrix:
    """Sparse exact matrix stored column-wise (list of dicts row -> value)."""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.columns = [dict() for _ in range(ncols)]
        if entries:
            items = entries.items() if hasattr(entries, "items") else entries
            for (r, c), v in items:
                self[r, c] = v

    def __setitem__(self, key, value):
        r, c = key
        if not (0 <= r < self.nrows and 0 <= c < self.ncols):
            raise IndexError(f"entry ({r},{c}) outside {self.nrows}x{self.ncols}")
        value = rational(value)
        if value:
            self.columns[c][r] = value
        else:
            self.columns[c].pop(r, None)

    def __getitem__(self, key):
        r, c = key
        return self.columns[c].get(r, Q(0))

    def set_column(self, c, col):
        """Install a whole column from a dict row -> value (zeros dropped)."""
        self.columns[c] = {r: v for r, v in col.items() if v}

    def entries(self):
        out = {}
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[(r, c)] = v
        return out

    @classmethod
    def from_rows(cls, rows, ncols=None):
        rows = [list(map(rational, row)) for row in rows]
        if ncols is None:
            ncols = max((len(r) for r in rows), default=0)
        m = cls(len(rows), ncols)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    m.columns[j][i] = v
        return m

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(len(c) for c in self.columns)})"


def _normalized_kernel_vector(expr):
    lead = min(expr)
    piv = expr[lead]
    if piv == 1:
        return dict(expr)
    inv = 1 / piv
    return {j: v * inv for j, v in expr.items()}


def rank_kernel_image(m: SparseMatrix):
    """Echelonize m; returns (rank, kernel_basis, pivot_columns).

    kernel_basis is a list of sparse vectors (dict col -> value), one per
    free column, each normalized to leading coefficient +1 and ordered by
    free column. pivot_columns is the ascending list of pivot columns.
    """
    pivot_rows, _, exprs = column_echelon(m.columns)
    pivots = []
    kernel = []
    for j, prow in enumerate(pivot_rows):
        if prow != -1:
            pivots.append(j)
        else:
            kernel.append(_normalized_kernel_vector(exprs[j]))
    return len(pivots), kernel, pivots


def solve_particular(m: SparseMatrix, b):
    """One exact solution of m x = b, or NO_SOLUTION.

    b is a dict row -> value (or a dense list). Under the fixed pivot rule
    the solution is deterministic: free variables are set to zero.
    """
    if not isinstance(b, dict):
        b = {i: rational(v) for i, v in enumerate(b) if v}
    else:
        b = {r: rational(v) for r, v in b.items() if v}
    cols = list(m.columns)
    cols.append(b)
    pivot_rows, reduced, exprs = column_echelon(cols)
    j = len(cols) - 1
    if pivot_rows[j] != -1:
        return NO_SOLUTION  # b independent of the columns
    # b reduced to zero: expr gives b = sum coeff_c * column_c.
    expr = exprs[j]
    return {c: -v for c, v in expr.items() if c != j and v}


def solution_affine_dim(m: SparseMatrix):
    """Dimension of the solution space of m x = 0 (number of free columns)."""
    rank, kernel, _ = rank_kernel_image(m)
    return len(kernel)


def vector_in_span(columns, target):
    """Exact membership test: is target a combination of the given columns?

    Returns the coefficient dict or NO_SOLUTION. columns is a list of sparse
    vectors (dict row -> value).
    """
    cols = list(columns)
    cols.append({r: v for r, v in target.items() if v})
    pivot_rows, _, exprs = column_echelon(cols)
    j = len(cols) - 1
    if pivot_rows[j] != -1:
        return NO_SOLUTION
    return {c: -v for c, v in exprs[j].items() if c != j and v}


def combine_columns(columns, coeffs):
    """Sum coeff_c * columns[c] as a sparse vector."""
    out = {}
    for c, v in coeffs.items():
        poly_add_scaled(out, columns[c], v)
    return out
