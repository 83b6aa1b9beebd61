"""Threshold edge coloring of the complete graph on matrix columns.

Every pair of columns gets one of three colors from its inner product g
against the threshold tau = 1/(2*sqrt(n)): white when |g| <= tau, blue
when g > tau, red when g < -tau. Matrices with nonnegative entries never
produce red and admit a two-color palette. For DeVore matrices the rule
reduces to exact integers: g = m/z, tau = 1/(2z), so an edge is blue iff
2m > 1, i.e. iff m >= 1.
"""

from __future__ import annotations

import math

import numpy as np

from .devore import DeVoreParams, eval_table
from .errors import BudgetExceededError
from .matrices import ColumnMatrix

WHITE, BLUE, RED = 0, 1, 2
COLOR_LETTER = {WHITE: "W", BLUE: "B", RED: "R"}
LETTER_COLOR = {v: k for k, v in COLOR_LETTER.items()}
COLOR_NAME = {WHITE: "white", BLUE: "blue", RED: "red"}

DEFAULT_EDGE_BUDGET = 50_000_000
DEFAULT_EDGE_TOL = 1e-12


def threshold(n: int) -> float:
    """Coloring threshold tau = 1/(2*sqrt(n)) for an n-row matrix."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0 / (2.0 * math.sqrt(n))


def edge_count(p: int) -> int:
    return p * (p - 1) // 2


def edge_index(i: int, j: int, p: int) -> int:
    """Position of edge {i, j} in the packed upper-triangular layout."""
    if i > j:
        i, j = j, i
    if i == j or not 0 <= i < j < p:
        raise ValueError(f"invalid edge ({i}, {j}) for p={p}")
    return i * (2 * p - i - 1) // 2 + (j - i - 1)


def classify_inner_products(values, tau: float, tol_edge: float = DEFAULT_EDGE_TOL):
    """Label inner-product values against tau; white is the closed class.

    Values within tol_edge of the threshold are classified white (the <=
    side of the rule) and flagged boundary-ambiguous for auditability.
    Returns (colors uint8 array, boundary bool array).
    """
    values = np.asarray(values, dtype=np.float64)
    absv = np.abs(values)
    white = absv <= tau + tol_edge
    colors = np.where(white, WHITE, np.where(values > 0, BLUE, RED)).astype(np.uint8)
    boundary = np.abs(absv - tau) <= tol_edge
    return colors, boundary


class EdgeColoring:
    """Complete-graph edge coloring on p vertices, packed upper-triangular.

    colors[edge_index(i, j, p)] is the color of {i, j}; every edge is
    assigned, there are no self-loops, and a two-color palette forbids red.
    """

    def __init__(self, p: int, colors, palette: int = 3, boundary=None):
        if p < 2:
            raise ValueError("need at least two vertices")
        if palette not in (2, 3):
            raise ValueError("palette must be 2 or 3")
        colors = np.ascontiguousarray(colors, dtype=np.uint8)
        if colors.shape != (edge_count(p),):
            raise ValueError(
                f"expected {edge_count(p)} edge colors, got shape {colors.shape}"
            )
        if int(colors.max(initial=0)) > RED:
            raise ValueError("colors must be in {WHITE, BLUE, RED}")
        if palette == 2 and np.any(colors == RED):
            raise ValueError("red edge present in a two-color palette")
        if boundary is None:
            boundary = np.zeros(colors.shape, dtype=bool)
        else:
            boundary = np.ascontiguousarray(boundary, dtype=bool)
            if boundary.shape != colors.shape:
                raise ValueError("boundary flags must match the edge array")
        self.p = p
        self.colors = colors
        self.palette = palette
        self.boundary = boundary

    def color(self, i: int, j: int) -> int:
        return int(self.colors[edge_index(i, j, self.p)])

    def counts(self) -> dict[int, int]:
        return {c: int(np.sum(self.colors == c)) for c in (WHITE, BLUE, RED)}

    def boundary_count(self) -> int:
        return int(np.sum(self.boundary))

    def palette_colors(self) -> tuple[int, ...]:
        return (WHITE, BLUE) if self.palette == 2 else (WHITE, BLUE, RED)

    def class_adjacency(self, color: int) -> np.ndarray:
        """Boolean adjacency of the monochromatic subgraph in `color`."""
        adj = np.zeros((self.p, self.p), dtype=bool)
        iu, ju = np.triu_indices(self.p, k=1)
        mask = self.colors == color
        adj[iu[mask], ju[mask]] = True
        return adj | adj.T

    def relabeled(self, perm) -> "EdgeColoring":
        """Coloring after the column permutation new_k = old_perm[k]."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.p)):
            raise ValueError("perm must be a permutation of range(p)")
        iu, ju = np.triu_indices(self.p, k=1)
        a = perm[iu]
        b = perm[ju]
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        src = lo * (2 * self.p - lo - 1) // 2 + (hi - lo - 1)
        return EdgeColoring(
            self.p, self.colors[src], palette=self.palette, boundary=self.boundary[src]
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return (
            self.p == other.p
            and self.palette == other.palette
            and bool(np.array_equal(self.colors, other.colors))
        )


def color_edges(
    matrix: ColumnMatrix,
    palette: int = 3,
    tol_edge: float = DEFAULT_EDGE_TOL,
    max_edges: int = DEFAULT_EDGE_BUDGET,
) -> EdgeColoring:
    """Color every column pair by its floating-point inner product.

    Inner products are plain dot products accumulated in float64; no
    approximate schemes, since the values sit against a decision boundary.
    palette=2 asserts the matrix produces no red edge (nonnegative case).
    """
    p = matrix.p
    if edge_count(p) > max_edges:
        raise BudgetExceededError(
            f"{edge_count(p)} edges exceed budget {max_edges}"
        )
    gram = matrix.gram()
    iu, ju = np.triu_indices(p, k=1)
    values = gram[iu, ju]
    colors, boundary = classify_inner_products(values, threshold(matrix.n), tol_edge)
    if palette == 2 and np.any(colors == RED):
        raise ValueError(
            "matrix has inner products below -tau; two-color palette not applicable"
        )
    return EdgeColoring(p, colors, palette=palette, boundary=boundary)


def color_edges_exact_devore(
    params: DeVoreParams, max_edges: int = DEFAULT_EDGE_BUDGET
) -> EdgeColoring:
    """Two-color coloring of a DeVore matrix in exact integer arithmetic.

    Inner products are m/z against tau = 1/(2z); after clearing
    denominators an edge is blue iff 2m > 1, i.e. iff the two polynomials
    agree at at least one point. Entries are nonnegative, so red never
    occurs and the palette is two colors.
    """
    p = params.p
    total = edge_count(p)
    if total > max_edges:
        raise BudgetExceededError(f"{total} edges exceed budget {max_edges}")
    tbl = eval_table(params)
    colors = np.empty(total, dtype=np.uint8)
    pos = 0
    for i in range(p - 1):
        agree = (tbl[i + 1 :] == tbl[i]).any(axis=1)
        colors[pos : pos + agree.size] = np.where(agree, BLUE, WHITE)
        pos += agree.size
    return EdgeColoring(p, colors, palette=2)


def write_coloring(coloring: EdgeColoring, path) -> None:
    """Write the coloring file: header, then one 'i j <W|B|R>' line per edge.

    Edges appear in lexicographic order with i < j; identical colorings
    produce byte-identical files.
    """
    p = coloring.p
    lines = [f"coloring p={p} palette={coloring.palette}\n"]
    k = 0
    colors = coloring.colors
    for i in range(p - 1):
        for j in range(i + 1, p):
            lines.append(f"{i} {j} {COLOR_LETTER[int(colors[k])]}\n")
            k += 1
    with open(path, "w") as fh:
        fh.writelines(lines)


def read_coloring(path) -> EdgeColoring:
    """Read a coloring file, enforcing completeness and lexicographic order."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != "coloring":
            raise ValueError(f"not a coloring file: {path}")
        fields = dict(kv.split("=", 1) for kv in header[1:])
        p = int(fields["p"])
        palette = int(fields["palette"])
        colors = np.empty(edge_count(p), dtype=np.uint8)
        k = 0
        for i in range(p - 1):
            for j in range(i + 1, p):
                parts = fh.readline().split()
                if len(parts) != 3 or int(parts[0]) != i or int(parts[1]) != j:
                    raise ValueError(
                        f"coloring file out of order or incomplete at edge ({i}, {j})"
                    )
                colors[k] = LETTER_COLOR[parts[2]]
                k += 1
        if fh.readline().strip():
            raise ValueError("trailing content after the last edge")
    return EdgeColoring(p, colors, palette=palette)
