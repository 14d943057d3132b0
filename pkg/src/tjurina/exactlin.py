"""Exact dense linear algebra over the rationals and word-size prime fields.

Three layers:

* Fraction-based reduced row echelon form -- simple, always correct, used
  directly for small matrices and as the fallback of last resort.
* Vectorised elimination modulo a word-size prime (numpy int64; the prime
  cap in :mod:`tjurina.fields` guarantees no overflow).
* Certified rational kernels: compute the kernel modulo one or more primes,
  CRT-combine, rationally reconstruct, then *verify* ``A v = 0`` in exact
  integer arithmetic.  A successful verification pins the rank from both
  sides (the pivot minor is invertible mod p, so rank >= r; the verified
  kernel vectors give nullity >= cols - r), so every returned answer is a
  proven statement about the rational matrix, never a probabilistic one.

Canonical form: kernel bases are derived from the RREF (free coordinate
carries 1, pivot coordinates carry the negated RREF entries) and then
rescaled so each vector's first nonzero coordinate is 1.  Identical inputs
always produce identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import DimensionMismatchError, FieldError, InternalError
from .fields import (
    RATIONALS,
    FieldSpec,
    crt_pair,
    prime_pool,
    rational_reconstruct,
)

# Below this many entries plain Fraction elimination beats the modular path.
_SMALL_ENTRIES = 1600

# Give up on reconstruction after this many primes and fall back to Fractions.
_MAX_CERT_PRIMES = 64


@dataclass(frozen=True)
class DenseMatrix:
    """Immutable dense matrix with row-major entries over a fixed field."""

    rows: int
    cols: int
    entries: tuple
    field: FieldSpec = RATIONALS

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows, field: FieldSpec = RATIONALS) -> "DenseMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatchError("ragged rows")
        flat = tuple(x for r in rows for x in r)
        return cls(len(rows), ncols, flat, field)

    @classmethod
    def from_cols(cls, cols, nrows: int, field: FieldSpec = RATIONALS) -> "DenseMatrix":
        cols = [list(c) for c in cols]
        for c in cols:
            if len(c) != nrows:
                raise DimensionMismatchError("column of wrong length")
        flat = tuple(cols[j][i] for i in range(nrows) for j in range(len(cols)))
        return cls(nrows, len(cols), flat, field)

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def row_lists(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]


# ---------------------------------------------------------------------------
# Fraction elimination
# ---------------------------------------------------------------------------


def fraction_rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place-on-copy reduced row echelon form; returns (rref, pivot cols).

    Pivot = first row with a nonzero entry in column order (no numerical
    pivoting; arithmetic is exact).
    """
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                mr = m[r]
                m[i] = [a - f * b for a, b in zip(m[i], mr)]
        pivots.append(c)
        r += 1
    return m, pivots


def _kernel_from_rref(rref, pivots, ncols, one, zero):
    """RREF-canonical kernel basis: one vector per free column."""
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for c in free:
        v = [zero] * ncols
        v[c] = one
        for i, pc in enumerate(pivots):
            x = rref[i][c]
            if x != zero:
                v[pc] = -x
        basis.append(v)
    return basis


def _leading_one(vectors, field: FieldSpec):
    out = []
    for v in vectors:
        lead = next((x for x in v if not field.is_zero(x)), None)
        if lead is None:
            raise InternalError("zero vector in kernel basis")
        inv = field.inv(lead)
        out.append(tuple(field.mul(inv, x) for x in v))
    return out


# ---------------------------------------------------------------------------
# Elimination modulo a word-size prime (numpy int64)
# ---------------------------------------------------------------------------


def echelon_mod_p(a: np.ndarray, p: int) -> tuple[int, list[int]]:
    """Row echelon (eliminate below only): returns (rank, pivot columns).

    ``a`` is consumed.  Entries must already lie in [0, p).
    """
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        block = a[r + 1 :, c]
        hot = np.nonzero(block)[0]
        if hot.size:
            rows = hot + r + 1
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        pivots.append(c)
        r += 1
    return len(pivots), pivots


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Full reduced row echelon form mod p.  ``a`` is consumed."""
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        colvals = a[:, c].copy()
        colvals[r] = 0
        hot = np.nonzero(colvals)[0]
        if hot.size:
            a[hot] = (a[hot] - np.outer(colvals[hot], a[r])) % p
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def kernel_mod_p(a: np.ndarray, p: int) -> tuple[list[int], np.ndarray]:
    """RREF-canonical right-kernel basis mod p.

    Returns (pivot columns, matrix whose *rows* are the kernel vectors,
    ordered by free column).
    """
    nrows, ncols = a.shape
    rref, pivots = rref_mod_p(a, p)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        if pivots:
            basis[k, pivots] = (-rref[:, c]) % p
    return pivots, basis


def reduce_int_matrix(rows: list[list[int]], p: int) -> np.ndarray:
    """Reduce a Python-int matrix mod p into an int64 array."""
    return np.array([[x % p for x in row] for row in rows], dtype=np.int64)


# ---------------------------------------------------------------------------
# Certified rational kernels
# ---------------------------------------------------------------------------


def _clear_row_denominators(rows) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(x * den) if den > 1 else int(x) for x in row])
    return out


def _verify_integer_kernel(int_rows: list[list[int]], vec: list[Fraction]) -> bool:
    den = 1
    for x in vec:
        den = lcm(den, x.denominator)
    w = [int(x * den) for x in vec]
    support = [j for j, x in enumerate(w) if x]
    for row in int_rows:
        if sum(row[j] * w[j] for j in support) != 0:
            return False
    return True


def certified_rational_kernel(
    rows: list[list], ncols: int
) -> tuple[list[int], list[tuple[Fraction, ...]]]:
    """Exact right kernel of a rational matrix, RREF-canonical.

    Returns (pivot columns, kernel vectors).  Small matrices use Fraction
    elimination directly; larger ones go through the modular lift described
    in the module docstring.  Either way the result is exact.
    """
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return [], _kernel_from_rref([], [], ncols, Fraction(1), Fraction(0))

    if nrows * ncols <= _SMALL_ENTRIES:
        rref, pivots = fraction_rref(rows)
        basis = _kernel_from_rref(rref, pivots, ncols, Fraction(1), Fraction(0))
        return pivots, [tuple(v) for v in basis]

    int_rows = _clear_row_denominators(rows)
    best_key = None
    combined: np.ndarray | None = None  # object-dtype residues
    modulus = 1
    pool = prime_pool()
    for _ in range(_MAX_CERT_PRIMES):
        p = next(pool)
        a = reduce_int_matrix(int_rows, p)
        pivots, basis_p = kernel_mod_p(a, p)
        key = (-len(pivots), tuple(pivots))
        if best_key is None or key < best_key:
            # Strictly better prime (higher rank, or earlier pivot pattern):
            # everything gathered so far came from bad primes.
            best_key = key
            combined = basis_p.astype(object)
            modulus = p
        elif key == best_key:
            combined = np.vectorize(crt_pair, otypes=[object])(
                combined, modulus, basis_p.astype(object), p
            )
            modulus *= p
        else:
            continue  # worse prime: skip it
        cand = _reconstruct_matrix(combined, modulus)
        if cand is None:
            continue
        if all(_verify_integer_kernel(int_rows, list(v)) for v in cand):
            return list(best_key[1]), [tuple(v) for v in cand]
    # Reconstruction kept failing; do it the slow, guaranteed way.
    rref, pivots = fraction_rref(rows)
    basis = _kernel_from_rref(rref, pivots, ncols, Fraction(1), Fraction(0))
    return pivots, [tuple(v) for v in basis]


def _reconstruct_matrix(residues: np.ndarray, modulus: int):
    out = []
    for row in residues:
        vec = []
        for u in row:
            q = rational_reconstruct(int(u), modulus)
            if q is None:
                return None
            vec.append(q)
        out.append(vec)
    return out


# ---------------------------------------------------------------------------
# Public operations on DenseMatrix
# ---------------------------------------------------------------------------


def _kernel_dense(m: DenseMatrix) -> tuple[list[int], list[tuple]]:
    if m.field.is_rationals:
        return certified_rational_kernel(m.row_lists(), m.cols)
    p = m.field.prime
    if m.rows == 0 or m.cols == 0:
        basis = [tuple(1 if j == c else 0 for j in range(m.cols)) for c in range(m.cols)]
        return [], basis if m.rows == 0 else []
    a = reduce_int_matrix(m.row_lists(), p)
    pivots, basis = kernel_mod_p(a, p)
    return pivots, [tuple(int(x) for x in v) for v in basis]


def rank(m: DenseMatrix) -> int:
    """Rank over the matrix's field; exact and deterministic."""
    pivots, _ = _kernel_dense(m)
    return len(pivots)


def nullspace_basis(m: DenseMatrix) -> list[tuple]:
    """Canonical right-kernel basis: cols - rank vectors, each rescaled so
    its first nonzero coordinate is 1."""
    _, basis = _kernel_dense(m)
    return _leading_one(basis, m.field)


def in_span(v, m: DenseMatrix) -> bool:
    """Is ``v`` in the column span of ``m``?"""
    if len(v) != m.rows:
        raise DimensionMismatchError(f"vector of length {len(v)} vs {m.rows} rows")
    aug = DenseMatrix.from_rows(
        [m.row(i) + [v[i]] for i in range(m.rows)], field=m.field
    )
    return rank(aug) == rank(m)


def solve_in_columns(m: DenseMatrix, v) -> tuple | None:
    """One x with ``m @ x = v``, or None.  Deterministic (canonical kernel)."""
    if len(v) != m.rows:
        raise DimensionMismatchError(f"vector of length {len(v)} vs {m.rows} rows")
    neg = [m.field.neg(x) for x in v]
    aug = DenseMatrix.from_rows(
        [m.row(i) + [neg[i]] for i in range(m.rows)], field=m.field
    )
    _, basis = _kernel_dense(aug)
    for vec in basis:
        t = vec[-1]
        if not m.field.is_zero(t):
            inv = m.field.inv(t)
            return tuple(m.field.mul(inv, x) for x in vec[:-1])
    return None
