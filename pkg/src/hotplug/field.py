"""Prime-field arithmetic and exact linear algebra over GF(q).

Matrices are plain ``numpy`` integer arrays with entries in ``[0, q)``; every
function takes the field explicitly.  Nothing here touches floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

DTYPE = np.int64


class FieldError(ValueError):
    """Raised on invalid field parameters or field-element operations."""


class FieldTooSmallError(FieldError):
    pass


class NoSolutionError(ArithmeticError):
    """The linear system is inconsistent."""


class UnderdeterminedError(ArithmeticError):
    """The linear system has more than one solution."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def smallest_prime_at_least(n: int) -> int:
    p = max(2, n)
    while not is_prime(p):
        p += 1
    return p


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise FieldError(f"q={self.q} is not prime")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return pow(int(a), self.q - 2, self.q)

    def array(self, x) -> np.ndarray:
        """Coerce ``x`` to an int64 array reduced mod q."""
        return np.asarray(x, dtype=DTYPE) % self.q

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros(shape, dtype=DTYPE)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=DTYPE)

    def matmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=DTYPE)
        b = np.asarray(b, dtype=DTYPE)
        if self.q <= 2**20:
            return (a @ b) % self.q
        # entry-wise products could overflow int64; fall back to Python ints
        return np.asarray((a.astype(object) @ b.astype(object)) % self.q, dtype=DTYPE)

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=DTYPE)

    def __str__(self):
        return f"GF({self.q})"


def rref(m, f: PrimeField) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``m`` over ``f``.

    Returns the reduced matrix (same shape) and the list of pivot columns;
    row ``i`` of the result has its leading 1 in column ``pivots[i]``.
    """
    a = f.array(m).copy()
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = a[r:, c] != 0
        if not nz.any():
            continue
        p = r + int(nz.argmax())
        if p != r:
            a[[r, p]] = a[[p, r]]
        if a[r, c] != 1:
            a[r] = (a[r] * f.inv(a[r, c])) % f.q
        col = a[:, c].copy()
        col[r] = 0
        a -= col[:, None] * a[r]
        a %= f.q
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, f: PrimeField) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, f)[1])


def solve(a, b, f: PrimeField) -> np.ndarray:
    """Solve ``a @ x = b`` over ``f``; ``b`` may be a vector or a matrix.

    Raises :class:`NoSolutionError` if inconsistent and
    :class:`UnderdeterminedError` if ``a`` lacks full column rank.
    """
    a = f.array(a)
    b = f.array(b)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: a {a.shape}, b {b.shape}")
    n = a.shape[1]
    red, piv = rref(np.hstack([a, b]), f)
    if any(p >= n for p in piv):
        raise NoSolutionError("inconsistent system")
    if len(piv) < n:
        raise UnderdeterminedError(f"rank {len(piv)} < {n} unknowns")
    x = red[:n, n:]
    return x[:, 0] if vector else x


def inverse(a, f: PrimeField) -> np.ndarray:
    a = f.array(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("inverse of a non-square matrix")
    try:
        return solve(a, f.eye(a.shape[0]), f)
    except (UnderdeterminedError, NoSolutionError):
        raise np.linalg.LinAlgError("singular matrix") from None


def span_values(rows, values, targets, f: PrimeField) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate linear forms that lie in the row space of ``rows``.

    ``rows`` (m x n) are known linear forms of an unknown vector ``x`` and
    ``values`` (length m) their realised values ``rows @ x``.  For each
    row ``t`` of ``targets`` this returns whether ``t`` is in the row space
    and, if so, ``t @ x``.  Entries of the value array are meaningless where
    the mask is False.
    """
    targets = f.array(targets)
    if targets.ndim == 1:
        targets = targets[None, :]
    rows = f.array(rows)
    n = targets.shape[1]
    if rows.size == 0:
        rows = f.zeros(0, n)
    if rows.shape[1] != n or len(values) != rows.shape[0]:
        raise ValueError("dimension mismatch between rows, values and targets")
    vals = f.array(values).reshape(-1, 1)
    red, piv = rref(np.hstack([rows, vals]), f)
    piv_a = [p for p in piv if p < n]
    k = len(piv_a)
    coeff = targets[:, piv_a]
    residual = (targets - f.matmul(coeff, red[:k, :n])) % f.q
    ok = ~residual.any(axis=1)
    out = f.matmul(coeff, red[:k, n])
    return ok, out


def vandermonde_mds(n: int, k: int, f: PrimeField) -> np.ndarray:
    """n x k Vandermonde matrix at points 0..n-1; any k rows are independent."""
    if not n >= k >= 1:
        raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")
    if f.q < n:
        raise FieldTooSmallError(f"{f} has fewer than {n} distinct points")
    pts = np.arange(n, dtype=DTYPE)
    g = f.zeros(n, k)
    g[:, 0] = 1
    for j in range(1, k):
        g[:, j] = (g[:, j - 1] * pts) % f.q
    return g


def systematic(g, f: PrimeField) -> np.ndarray:
    """Right-multiply so the top k x k block becomes the identity.

    Any-k-rows invertibility is preserved.
    """
    g = f.array(g)
    k = g.shape[1]
    return f.matmul(g, inverse(g[:k], f))


def parity_generator(k: int, f: PrimeField) -> np.ndarray:
    """(k+1) x k single-parity-check generator [I; 1 ... 1], MDS over any field."""
    return np.vstack([f.eye(k), np.ones((1, k), dtype=DTYPE)])


def block_mds_family(K: int, block_rows: int, cols: int, f: PrimeField) -> list[np.ndarray]:
    """K blocks of ``block_rows`` rows such that any ``cols // block_rows`` stack to full rank."""
    if block_rows < 1 or cols % block_rows:
        raise ValueError(f"cols={cols} not divisible by block_rows={block_rows}")
    if K * block_rows < cols:
        raise ValueError("not enough rows in total to reach full rank")
    v = vandermonde_mds(K * block_rows, cols, f)
    return [v[i * block_rows:(i + 1) * block_rows] for i in range(K)]


def any_k_rows_full_rank(g, k: int, f: PrimeField, *, max_exhaustive: int = 10**4,
                         samples: int = 10**4, seed: int = 0) -> bool:
    """Check that every choice of k rows of ``g`` has rank k.

    Exhaustive when C(n, k) <= ``max_exhaustive``, otherwise ``samples``
    random subsets are drawn.
    """
    return blocks_full_rank(list(f.array(g)[:, None, :]), k, f,
                            max_exhaustive=max_exhaustive, samples=samples, seed=seed)


def blocks_full_rank(blocks, k: int, f: PrimeField, *, max_exhaustive: int = 10**4,
                     samples: int = 10**4, seed: int = 0) -> bool:
    """Check that stacking any k of ``blocks`` gives a matrix of full column rank."""
    n = len(blocks)
    cols = blocks[0].shape[1]
    if math.comb(n, k) <= max_exhaustive:
        choices = itertools.combinations(range(n), k)
    else:
        rng = np.random.default_rng(seed)
        choices = (sorted(rng.choice(n, size=k, replace=False)) for _ in range(samples))
    for c in choices:
        if rank(np.vstack([blocks[i] for i in c]), f) != cols:
            return False
    return True
