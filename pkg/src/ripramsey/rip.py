"""Restricted-isometry constants: certified, exhaustive, and sampled.

A matrix with unit-norm columns has restricted isometry constant delta at
sparsity s when every s-column Gram submatrix has eigenvalues in
[1-delta, 1+delta]. Exact certification is NP-hard in general, so three
routes are provided: an exhaustive scan over all supports (exact, tiny
scale), uniform sampling of supports (a lower bound), and the coherence
certificate delta <= s*mu (an upper bound, always cheap).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError
from .matrices import ColumnMatrix

DEFAULT_SUPPORT_BUDGET = 1_000_000
_CHUNK = 4096


@dataclass(frozen=True)
class RipCertificate:
    """Outcome of one verification route.

    method "exhaustive": delta is the true constant (eigen-solver accuracy).
    method "sampled":    delta is a lower bound on the true constant.
    method "coherence":  delta is an upper bound (sufficient certificate).
    valid means delta < 1, the range in which the isometry property holds.
    """

    s: int
    delta: float
    method: str
    valid: bool
    support_count: int = 0
    witness: tuple[int, ...] | None = None
    delta_exact: Fraction | None = None  # exact rational value when available
    delta_gershgorin: float | None = None  # sharper (s-1)*mu variant, informational
    seed: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "s": self.s,
            "delta": self.delta,
            "delta_exact": None
            if self.delta_exact is None
            else [self.delta_exact.numerator, self.delta_exact.denominator],
            "delta_gershgorin": self.delta_gershgorin,
            "valid": self.valid,
            "supports_checked": self.support_count,
            "witness_support": None if self.witness is None else list(self.witness),
            "seed": self.seed,
        }


def _colex_supports(p: int, s: int):
    """All s-subsets of range(p) in colexicographic order."""
    if s == 0:
        yield ()
        return
    for top in range(s - 1, p):
        for rest in _colex_supports(top, s - 1):
            yield rest + (top,)


def _batch_deltas(gram: np.ndarray, supports: np.ndarray) -> np.ndarray:
    """max(lambda_max - 1, 1 - lambda_min) for each support's Gram submatrix."""
    subs = gram[supports[:, :, None], supports[:, None, :]]
    w = np.linalg.eigvalsh(subs)
    return np.maximum(w[:, -1] - 1.0, 1.0 - w[:, 0])


def _scan_supports(gram: np.ndarray, support_iter):
    """Max delta over an iterable of supports; keeps the first maximizer."""
    best = -np.inf
    witness = None
    checked = 0
    batch: list[tuple[int, ...]] = []

    def flush():
        nonlocal best, witness, checked
        if not batch:
            return
        arr = np.array(batch, dtype=np.int64)
        deltas = _batch_deltas(gram, arr)
        k = int(np.argmax(deltas))
        if deltas[k] > best:
            best = float(deltas[k])
            witness = tuple(int(v) for v in arr[k])
        checked += len(batch)
        batch.clear()

    for sup in support_iter:
        batch.append(sup)
        if len(batch) >= _CHUNK:
            flush()
    flush()
    return best, witness, checked


def delta_exhaustive(
    matrix: ColumnMatrix, s: int, budget: int = DEFAULT_SUPPORT_BUDGET
) -> RipCertificate:
    """True restricted isometry constant by enumerating every s-support.

    Only supports of size exactly s need checking: smaller supports are
    nested inside larger ones and can only shrink the eigenvalue spread.
    Supports are scanned in colexicographic order; the witness is the
    first support attaining the maximum.
    """
    if not 1 <= s <= matrix.p:
        raise ValueError(f"sparsity s={s} outside [1, {matrix.p}]")
    total = math.comb(matrix.p, s)
    if total > budget:
        raise BudgetExceededError(
            f"{total} supports exceed budget {budget}; use delta_sampled"
        )
    gram = matrix.gram()
    best, witness, checked = _scan_supports(gram, _colex_supports(matrix.p, s))
    return RipCertificate(
        s=s,
        delta=best,
        method="exhaustive",
        valid=best < 1.0,
        support_count=checked,
        witness=witness,
    )


def delta_sampled(
    matrix: ColumnMatrix, s: int, trials: int, seed: int = 0
) -> RipCertificate:
    """Lower bound on the restricted isometry constant from sampled supports.

    Draws `trials` uniform s-supports; when trials covers every support the
    scan degenerates to the exhaustive enumeration (same result).
    """
    if not 1 <= s <= matrix.p:
        raise ValueError(f"sparsity s={s} outside [1, {matrix.p}]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    gram = matrix.gram()
    total = math.comb(matrix.p, s)
    if trials >= total:
        support_iter = _colex_supports(matrix.p, s)
    else:
        rng = np.random.default_rng(seed)
        support_iter = (
            tuple(sorted(int(v) for v in rng.choice(matrix.p, size=s, replace=False)))
            for _ in range(trials)
        )
    best, witness, checked = _scan_supports(gram, support_iter)
    return RipCertificate(
        s=s,
        delta=best,
        method="sampled",
        valid=best < 1.0,
        support_count=checked,
        witness=witness,
        seed=seed,
    )


def coherence_certificate(matrix: ColumnMatrix, s: int) -> RipCertificate:
    """Coherence-based sufficient certificate delta = s * mu.

    mu is the largest absolute off-diagonal Gram entry. The sharper
    Gershgorin value (s-1)*mu is attached as auxiliary data; the headline
    delta stays the conservative s*mu rule.
    """
    if s < 1:
        raise ValueError("sparsity s must be >= 1")
    gram = matrix.gram()
    off = np.abs(gram - np.diag(np.diag(gram)))
    mu = float(np.max(off))
    i, j = np.unravel_index(int(np.argmax(off)), off.shape)
    witness = (int(min(i, j)), int(max(i, j)))
    delta = s * mu
    return RipCertificate(
        s=s,
        delta=delta,
        method="coherence",
        valid=delta < 1.0,
        support_count=0,
        witness=witness,
        delta_gershgorin=(s - 1) * mu,
    )


def random_baseline(
    n: int, p: int, distribution: str = "gaussian", seed: int = 0
) -> ColumnMatrix:
    """Random matrix with i.i.d. sub-Gaussian entries and normalized columns.

    Such matrices are the standard probabilistic baseline: with high
    probability they are restricted isometries once n grows like
    s*log(p/s). Reproducible for a fixed seed.
    """
    if n < 1 or p < 2:
        raise ValueError(f"need n >= 1 and p >= 2, got n={n}, p={p}")
    rng = np.random.default_rng(seed)
    if distribution == "gaussian":
        raw = rng.standard_normal((n, p))
    elif distribution == "rademacher":
        raw = rng.integers(0, 2, size=(n, p)).astype(np.float64) * 2.0 - 1.0
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    return ColumnMatrix(raw, normalize=True)
