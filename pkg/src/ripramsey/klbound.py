"""Pair-coherence lower bound for 2n unit vectors in R^n, with audit tools.

Any 2n unit vectors in R^n contain a pair whose absolute inner product is
at least 1/sqrt(2(2n-1)), which is strictly larger than the coloring
threshold 1/(2*sqrt(n)). The proof is a trace argument: the Gram matrix U
has rank at most n, so U - I has eigenvalue -1 with multiplicity at least
n, forcing the off-diagonal square sum (the trace of (U - I)^2) up to at
least n. This module computes the quantities in that chain directly so
the inequality can be property-tested end to end.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .coloring import threshold

RANK_CUTOFF = 1e-10  # relative singular-value cutoff for numerical rank


@dataclass(frozen=True)
class VectorFamily:
    """count unit vectors in R^n, stored as rows; norms checked to 1e-12."""

    vectors: np.ndarray

    def __post_init__(self):
        vectors = np.ascontiguousarray(self.vectors, dtype=np.float64)
        if vectors.ndim != 2:
            raise ValueError("expected a 2-D array, one unit vector per row")
        norms2 = np.sum(vectors**2, axis=1)
        worst = float(np.max(np.abs(norms2 - 1.0), initial=0.0))
        if worst > 1e-12:
            raise ValueError(f"row squared norms deviate from 1 by {worst:.3e}")
        object.__setattr__(self, "vectors", vectors)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T


def random_unit_family(n: int, count: int, seed) -> VectorFamily:
    """Standard normal rows, normalized; `seed` may be an int or a Generator."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    raw = rng.standard_normal((count, n))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    return VectorFamily(raw)


def max_offdiag_coherence(family: VectorFamily) -> tuple[float, tuple[int, int]]:
    """Largest |inner product| over distinct pairs, with its witness pair."""
    if family.count < 2:
        raise ValueError("need at least two vectors")
    g = np.abs(family.gram())
    np.fill_diagonal(g, -1.0)
    i, j = np.unravel_index(int(np.argmax(g)), g.shape)
    pair = (int(min(i, j)), int(max(i, j)))
    return float(g[i, j]), pair


def kl_lower_bound(n: int) -> float:
    """The guaranteed pair coherence 1/sqrt(2(2n-1)) for 2n vectors in R^n.

    Strictly dominates the coloring threshold 1/(2*sqrt(n)) for every
    n >= 1, since 4n > 2(2n-1).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0 / math.sqrt(2.0 * (2.0 * n - 1.0))


@dataclass(frozen=True)
class TraceAudit:
    """Internals of the trace argument for one family of exactly 2n vectors."""

    count: int
    n: int
    gram_rank: int
    offdiag_square_sum: float
    lower_bound: float  # n
    consistent: bool


def trace_argument_audit(family: VectorFamily, tol_num: float = 1e-9) -> TraceAudit:
    """Check sum_{i != j} <u_i, u_j>^2 >= n and rank(Gram) <= n.

    The off-diagonal square sum is exactly the trace of (U - I)^2 for unit
    vectors, computed directly as a sum rather than spectrally (better
    conditioned, and the identity makes the eigendecomposition redundant).
    """
    n = family.n
    if family.count != 2 * n:
        raise ValueError(
            f"trace audit needs exactly 2n = {2 * n} vectors, got {family.count}"
        )
    g = family.gram()
    off = g - np.diag(np.diag(g))
    square_sum = float(np.sum(off**2))
    svals = np.linalg.svd(g, compute_uv=False)
    rank = int(np.sum(svals > RANK_CUTOFF * svals[0])) if svals[0] > 0 else 0
    consistent = square_sum >= n - tol_num and rank <= n
    return TraceAudit(
        count=family.count,
        n=n,
        gram_rank=rank,
        offdiag_square_sum=square_sum,
        lower_bound=float(n),
        consistent=consistent,
    )


def batch_trial_stats(n: int, trials: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized stats for `trials` random families of 2n unit vectors.

    Returns (max |off-diagonal| per trial, off-diagonal square sum per
    trial). Trial t uses the generator seeded (seed, n, t)-deterministically
    through one shared stream, so results are reproducible per (seed, n).
    """
    rng = np.random.default_rng([seed, n])
    raw = rng.standard_normal((trials, 2 * n, n))
    raw /= np.linalg.norm(raw, axis=2, keepdims=True)
    gram = raw @ raw.transpose(0, 2, 1)
    eye = np.eye(2 * n, dtype=bool)
    off = np.where(eye, 0.0, gram)
    max_abs = np.max(np.abs(np.where(eye, -1.0, gram)), axis=(1, 2))
    square_sum = np.sum(off**2, axis=(1, 2))
    return max_abs, square_sum


def run_property_trials(
    n_values,
    trials: int,
    seed: int = 0,
    tol: float = 1e-9,
    stream=None,
) -> dict:
    """Property harness: one line per trial, then a summary count.

    Line format: 'n=<n> max=<value> bound=<value> ok=<bool>' where ok means
    the trial's max coherence reaches the guaranteed bound and the trace
    audit sum reaches n, both within tol. Any failure falsifies a theorem
    and therefore indicates an implementation bug.
    """
    out = stream if stream is not None else sys.stdout
    total = 0
    failures = 0
    for n in n_values:
        bound = kl_lower_bound(n)
        max_abs, square_sum = batch_trial_stats(n, trials, seed)
        ok_flags = (max_abs >= bound - tol) & (square_sum >= n - tol)
        for t in range(trials):
            ok = bool(ok_flags[t])
            total += 1
            failures += not ok
            out.write(
                f"n={n} max={max_abs[t]:.12g} bound={bound:.12g} "
                f"ok={'true' if ok else 'false'}\n"
            )
    out.write(f"summary trials={total} failures={failures}\n")
    return {"trials": total, "failures": failures}


def threshold_dominated(n: int) -> bool:
    """True when the guaranteed bound strictly beats the coloring threshold."""
    return kl_lower_bound(n) > threshold(n)
