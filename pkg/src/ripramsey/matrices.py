"""Unit-norm column matrices and the plain-text dense interchange format."""

from __future__ import annotations

import numpy as np


class ColumnMatrix:
    """Real n x p matrix whose columns have (approximately) unit norm.

    Columns outside tol_norm of unit squared norm are rejected unless
    normalize=True, in which case they are rescaled exactly.
    """

    def __init__(self, data, tol_norm: float = 1e-9, normalize: bool = False):
        data = np.array(data, dtype=np.float64, copy=True, order="C")
        if data.ndim != 2:
            raise ValueError("expected a 2-D array of column vectors")
        n, p = data.shape
        if n < 1 or p < 2:
            raise ValueError(f"need n >= 1 rows and p >= 2 columns, got {n} x {p}")
        norms = np.linalg.norm(data, axis=0)
        if normalize:
            if np.any(norms == 0):
                raise ValueError("cannot normalize a zero column")
            data /= norms
        else:
            worst = float(np.max(np.abs(norms**2 - 1.0)))
            if worst > tol_norm:
                raise ValueError(
                    f"column squared norms deviate from 1 by {worst:.3e} "
                    f"(tol_norm={tol_norm:.1e}); pass normalize=True to rescale"
                )
        self.data = data
        self.n = n
        self.p = p
        self.tol_norm = tol_norm

    def gram(self) -> np.ndarray:
        """Pairwise column inner products (p x p, symmetric)."""
        return self.data.T @ self.data

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j]

    def permuted(self, perm) -> "ColumnMatrix":
        """Reorder columns: new column k is old column perm[k]."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.p)):
            raise ValueError("perm must be a permutation of range(p)")
        return ColumnMatrix(self.data[:, perm], tol_norm=self.tol_norm)


def save_dense(matrix: ColumnMatrix, path) -> None:
    """Write '<n> <p>' then n rows of p values at 17 significant digits."""
    with open(path, "w") as fh:
        fh.write(f"{matrix.n} {matrix.p}\n")
        for row in matrix.data:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def load_dense(path, tol_norm: float = 1e-9, normalize: bool = False) -> ColumnMatrix:
    """Read a file written by save_dense (17 digits round-trip float64 exactly)."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"malformed dense matrix header in {path}")
        n, p = int(header[0]), int(header[1])
        data = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if data.shape != (n, p):
        raise ValueError(
            f"dense matrix body is {data.shape}, header promised {(n, p)}"
        )
    return ColumnMatrix(data, tol_norm=tol_norm, normalize=normalize)
