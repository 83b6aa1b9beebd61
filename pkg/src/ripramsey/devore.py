"""Deterministic low-coherence matrices from polynomial graphs over Z_z.

DeVore's construction: fix a prime z and a degree bound r with r < z.
Columns are indexed by the z^(r+1) polynomials of degree <= r with
coefficients in Z_z = {0, ..., z-1}; rows by the z^2 grid points (x, y),
stored at row x*z + y. The entry at ((x, y), P) is 1/sqrt(z) when
y = P(x) and 0 otherwise, so every column has exactly z nonzeros and
unit norm. The inner product of two distinct columns is m/z where m is
the number of x at which the two polynomials agree; since a nonzero
polynomial of degree <= r has at most r roots, m <= r and the coherence
is at most r/z. Keeping inner products as integer counts lets every
coherence and coloring threshold comparison run exactly, with no
floating-point boundary ambiguity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError
from .rip import RipCertificate

# p = z^(r+1) must stay indexable (numpy uses int64 indices).
INDEX_LIMIT = np.iinfo(np.int64).max

DEFAULT_PAIR_BUDGET = 10_000_000
DEFAULT_DENSE_BUDGET = 50_000_000
DEFAULT_TABLE_BUDGET = 100_000_000


def is_prime(z: int) -> bool:
    """Deterministic trial-division primality check (desk-scale moduli)."""
    if z < 2:
        return False
    if z < 4:
        return True
    if z % 2 == 0:
        return False
    f = 3
    while f * f <= z:
        if z % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class DeVoreParams:
    """Prime modulus z and degree bound r; fixes the z^2 x z^(r+1) matrix."""

    z: int
    r: int

    def __post_init__(self):
        if not is_prime(self.z):
            raise ValueError(f"z must be prime, got {self.z}")
        if not 1 <= self.r < self.z:
            raise ValueError(f"need 1 <= r < z, got r={self.r}, z={self.z}")
        if self.z ** (self.r + 1) > INDEX_LIMIT:
            raise ValueError(
                f"p = z^(r+1) with z={self.z}, r={self.r} exceeds the index type"
            )

    @property
    def n(self) -> int:
        return self.z * self.z

    @property
    def p(self) -> int:
        return self.z ** (self.r + 1)


@dataclass(frozen=True)
class PolyIndex:
    """A degree <= r polynomial over Z_z: column index plus base-z digits.

    coeffs[k] is the coefficient of x^k, so index = sum_k coeffs[k] * z^k
    (constant term is the least significant digit).
    """

    index: int
    coeffs: tuple[int, ...]


@dataclass(frozen=True)
class ExactInnerProduct:
    """Column inner product as the exact rational numerator/denominator.

    For two DeVore columns the numerator is the agreement count m and the
    denominator is z; a column with itself gives z/z = 1.
    """

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator < 1 or not 0 <= self.numerator <= self.denominator:
            raise ValueError(
                f"invalid inner product {self.numerator}/{self.denominator}"
            )

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


# Sorted row indices of a column's z nonzero entries (value 1/sqrt(z) each).
ColumnSupport = tuple[int, ...]


def poly_from_index(idx: int, params: DeVoreParams) -> PolyIndex:
    """Decode a column index into base-z coefficient digits (a_0 .. a_r)."""
    if not 0 <= idx < params.p:
        raise ValueError(f"index {idx} out of range [0, {params.p})")
    digits = []
    q = idx
    for _ in range(params.r + 1):
        q, a = divmod(q, params.z)
        digits.append(a)
    return PolyIndex(index=idx, coeffs=tuple(digits))


def poly_to_index(coeffs, params: DeVoreParams) -> PolyIndex:
    """Inverse of poly_from_index: encode coefficients back to an index."""
    coeffs = tuple(int(a) for a in coeffs)
    if len(coeffs) != params.r + 1:
        raise ValueError(f"expected {params.r + 1} coefficients, got {len(coeffs)}")
    if any(not 0 <= a < params.z for a in coeffs):
        raise ValueError("coefficients must lie in Z_z")
    idx = 0
    for a in reversed(coeffs):
        idx = idx * params.z + a
    return PolyIndex(index=idx, coeffs=coeffs)


def poly_eval(poly: PolyIndex, x: int, params: DeVoreParams) -> int:
    """Evaluate P(x) mod z by Horner's rule; all arithmetic stays modular."""
    if not 0 <= x < params.z:
        raise ValueError(f"x={x} outside Z_{params.z}")
    acc = 0
    for a in reversed(poly.coeffs):
        acc = (acc * x + a) % params.z
    return acc


def column_support(poly: PolyIndex, params: DeVoreParams) -> ColumnSupport:
    """Row indices {x*z + P(x)} of the column's nonzeros, sorted ascending."""
    z = params.z
    return tuple(x * z + poly_eval(poly, x, params) for x in range(z))


def inner_product_exact(
    i: PolyIndex, j: PolyIndex, params: DeVoreParams
) -> ExactInnerProduct:
    """Exact inner product m/z, m = #{x in Z_z : P(x) = Q(x)}."""
    m = sum(
        1
        for x in range(params.z)
        if poly_eval(i, x, params) == poly_eval(j, x, params)
    )
    return ExactInnerProduct(numerator=m, denominator=params.z)


def eval_table(
    params: DeVoreParams, max_entries: int = DEFAULT_TABLE_BUDGET
) -> np.ndarray:
    """Dense table of P(x) mod z for every column index (rows) and x (cols).

    Built digit by digit: appending coefficient a_k multiplies the index
    by nothing (block offset a_k * z^k) and adds a_k * x^k to the values,
    which reproduces index = sum a_k z^k exactly.
    """
    z, r, p = params.z, params.r, params.p
    if p * z > max_entries:
        raise BudgetExceededError(
            f"evaluation table needs {p * z} entries, budget is {max_entries}"
        )
    x = np.arange(z, dtype=np.int64)
    table = np.zeros((1, z), dtype=np.int64)
    powk = np.ones(z, dtype=np.int64)
    for k in range(r + 1):
        if k:
            powk = (powk * x) % z
        table = np.concatenate([(table + a * powk) % z for a in range(z)], axis=0)
    return table


def to_dense(
    params: DeVoreParams, max_entries: int = DEFAULT_DENSE_BUDGET
) -> np.ndarray:
    """Materialize the full n x p matrix (a guarded, secondary representation)."""
    n, p, z = params.n, params.p, params.z
    if n * p > max_entries:
        raise BudgetExceededError(
            f"dense matrix needs {n * p} entries, budget is {max_entries}"
        )
    tbl = eval_table(params)
    rows = np.arange(z, dtype=np.int64)[None, :] * z + tbl  # (p, z)
    mat = np.zeros((n, p))
    cols = np.repeat(np.arange(p), z)
    mat[rows.ravel(), cols] = 1.0 / math.sqrt(z)
    return mat


def coherence_exact(
    params: DeVoreParams, max_pairs: int = DEFAULT_PAIR_BUDGET
) -> tuple[ExactInnerProduct, tuple[int, int]]:
    """Exact coherence max_{i<j} m_ij / z over all column pairs, with witness.

    Scans pairs in lexicographic order and keeps the first maximizer, so the
    witness is the lexicographically smallest one. Raises BudgetExceededError
    when p(p-1)/2 exceeds max_pairs; callers then fall back to the certified
    bound r/z (which is an upper bound, not the exact value).
    """
    p = params.p
    total = p * (p - 1) // 2
    if total > max_pairs:
        raise BudgetExceededError(
            f"{total} column pairs exceed budget {max_pairs}; "
            f"use the r/z bound instead"
        )
    tbl = eval_table(params)
    best_m = -1
    witness = (0, 1)
    for i in range(p - 1):
        counts = (tbl[i + 1 :] == tbl[i]).sum(axis=1)
        j_rel = int(np.argmax(counts))
        m = int(counts[j_rel])
        if m > best_m:
            best_m = m
            witness = (i, i + 1 + j_rel)
            if best_m == params.r:  # cannot exceed the root-count bound
                break
    return ExactInnerProduct(numerator=best_m, denominator=params.z), witness


def rip_certificate_coherence(params: DeVoreParams, s: int) -> RipCertificate:
    """Sufficient sparsity certificate delta = s*r/z, exact and rational.

    Valid only when delta < 1. The slightly sharper Gershgorin variant
    (s-1)*r/z is reported alongside as informational data.
    """
    if s < 1:
        raise ValueError("sparsity s must be >= 1")
    exact = Fraction(s * params.r, params.z)
    sharper = Fraction((s - 1) * params.r, params.z)
    return RipCertificate(
        s=s,
        delta=float(exact),
        method="coherence",
        valid=exact < 1,
        support_count=0,
        witness=None,
        delta_exact=exact,
        delta_gershgorin=float(sharper),
    )


def certified_sparsity(params: DeVoreParams) -> int:
    """Largest s of the form floor((1/2) z/r); 0 means the regime is degenerate."""
    return params.z // (2 * params.r)


@dataclass(frozen=True)
class RegimeReport:
    """Derived quantities for the near-square-root sparsity regime r ~ z^epsilon."""

    z: int
    epsilon: float
    r: int
    n: int
    p: int  # exact, arbitrary precision
    log_p: float  # natural log
    s: int
    degenerate: bool  # s floored to 0, certificate meaningless at this scale
    polylog_ok: bool  # n <= (log p)^(2/epsilon), checked in the log domain
    log_n: float
    polylog_rhs_log: float  # (2/epsilon) * log log p


def regime_calculator(z: int, epsilon: float) -> RegimeReport:
    """Evaluate r = ceil(z^epsilon), n = z^2, p = z^(r+1), s = floor(z/(2r)).

    p overflows fixed-width types quickly, so it is returned as an exact
    Python integer and the polylog inequality n <= (log p)^(2/epsilon) is
    checked in the log domain.
    """
    if not is_prime(z):
        raise ValueError(f"z must be prime, got {z}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    r = math.ceil(z**epsilon)
    if r >= z:
        raise ValueError(
            f"r = ceil(z^epsilon) = {r} is not < z = {z}; epsilon too large"
        )
    n = z * z
    p = z ** (r + 1)
    log_p = (r + 1) * math.log(z)
    s = z // (2 * r)
    log_n = math.log(n)
    rhs_log = (2.0 / epsilon) * math.log(log_p)
    return RegimeReport(
        z=z,
        epsilon=epsilon,
        r=r,
        n=n,
        p=p,
        log_p=log_p,
        s=s,
        degenerate=(s == 0),
        polylog_ok=(log_n <= rhs_log),
        log_n=log_n,
        polylog_rhs_log=rhs_log,
    )


def save_structural(params: DeVoreParams, path) -> None:
    """Write the one-line structural file; the matrix is re-derived on load."""
    with open(path, "w") as fh:
        fh.write(f"devore z={params.z} r={params.r}\n")


def load_structural(path) -> DeVoreParams:
    """Read a structural file written by save_structural."""
    with open(path) as fh:
        line = fh.readline().strip()
    parts = line.split()
    if len(parts) != 3 or parts[0] != "devore":
        raise ValueError(f"not a structural matrix file: {line!r}")
    fields = dict(kv.split("=", 1) for kv in parts[1:])
    if set(fields) != {"z", "r"}:
        raise ValueError(f"malformed structural header: {line!r}")
    return DeVoreParams(z=int(fields["z"]), r=int(fields["r"]))
