"""Dense exact linear algebra over a field tower.

Matrices are plain lists of rows; a row is a list of scalar codes from one
:class:`~rankcodes.field.FieldTower`.  The column count travels alongside
the rows so zero-row matrices keep a shape.  The same routines serve both
the extension field and the base field (base-field matrices are simply
matrices whose entries are codes below p, and F_p is closed under all the
row operations used here).

Subspace enumeration yields each subspace exactly once as its unique
reduced row echelon basis, fenced by an explicit budget.
"""

from __future__ import annotations

import hashlib
import itertools
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .errors import BudgetError

Row = List[int]
Rows = List[Row]

DEFAULT_BUDGET = 10**7


def zeros(nrows: int, ncols: int) -> Rows:
    return [[0] * ncols for _ in range(nrows)]


def identity(n: int) -> Rows:
    return [[1 if j == i else 0 for j in range(n)] for i in range(n)]


def copy_rows(rows: Sequence[Sequence[int]]) -> Rows:
    return [list(r) for r in rows]


def transpose(rows: Sequence[Sequence[int]], ncols: int) -> Rows:
    return [[row[j] for row in rows] for j in range(ncols)]


def rref(rows: Sequence[Sequence[int]], ncols: int, tower) -> tuple[Rows, List[int]]:
    """Reduced row echelon form.

    Returns (R, pivot_columns).  Zero rows sink to the bottom; the result
    is the unique RREF of the row space, so two matrices generate the same
    space iff their nonzero RREF rows agree.
    """
    R = copy_rows(rows)
    mul, sub, inv = tower.mul, tower.sub, tower.inv
    pivots: List[int] = []
    r = 0
    nrows = len(R)
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if R[i][col]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        head = R[r]
        scale = inv(head[col])
        if scale != 1:
            R[r] = head = [mul(scale, x) for x in head]
        for i in range(nrows):
            if i != r and R[i][col]:
                f = R[i][col]
                row = R[i]
                R[i] = [sub(x, mul(f, h)) for x, h in zip(row, head)]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return R, pivots


def rref_nonzero(rows: Sequence[Sequence[int]], ncols: int, tower) -> Rows:
    R, piv = rref(rows, ncols, tower)
    return R[: len(piv)]


def rank(rows: Sequence[Sequence[int]], ncols: int, tower) -> int:
    if not rows:
        return 0
    _, piv = rref(rows, ncols, tower)
    return len(piv)


def kernel(rows: Sequence[Sequence[int]], ncols: int, tower) -> Rows:
    """RREF basis of the right null space {v : rows . v^T = 0}."""
    R, pivots = rref(rows, ncols, tower)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    neg = tower.neg
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = neg(R[i][f])
        basis.append(v)
    return rref_nonzero(basis, ncols, tower) if basis else []


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], tower) -> Rows:
    mul, add = tower.mul, tower.add
    ncols = len(B[0]) if B else 0
    out = []
    for arow in A:
        acc = [0] * ncols
        for a, brow in zip(arow, B):
            if a:
                acc = [add(x, mul(a, b)) for x, b in zip(acc, brow)]
        out.append(acc)
    return out


def vec_mat(x: Sequence[int], rows: Sequence[Sequence[int]], ncols: int, tower) -> Row:
    """Row vector times matrix."""
    mul, add = tower.mul, tower.add
    acc = [0] * ncols
    for xi, row in zip(x, rows):
        if xi:
            acc = [add(a, mul(xi, r)) for a, r in zip(acc, row)]
    return acc


def mat_vec(rows: Sequence[Sequence[int]], x: Sequence[int], tower) -> Row:
    mul, add = tower.mul, tower.add
    out = []
    for row in rows:
        acc = 0
        for r, xi in zip(row, x):
            if r and xi:
                acc = add(acc, mul(r, xi))
        out.append(acc)
    return out


def intersect_dim(U: Sequence[Sequence[int]], W: Sequence[Sequence[int]],
                  ncols: int, tower) -> int:
    """Dimension of rowspace(U) intersected with rowspace(W)."""
    for rows in (U, W):
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ambient dimension mismatch")
    ru = rank(U, ncols, tower)
    rw = rank(W, ncols, tower)
    rs = rank(list(U) + list(W), ncols, tower)
    return ru + rw - rs


def in_rowspace(v: Sequence[int], rows: Sequence[Sequence[int]], ncols: int, tower) -> bool:
    base = rank(rows, ncols, tower)
    return rank(list(rows) + [list(v)], ncols, tower) == base


def rowspace_equal(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]],
                   ncols: int, tower) -> bool:
    return rref_nonzero(A, ncols, tower) == rref_nonzero(B, ncols, tower)


def solve_right(M: Sequence[Sequence[int]], ncols: int, b: Sequence[int], tower) -> Optional[Row]:
    """One solution x of M x^T = b^T, or None when inconsistent."""
    if len(b) != len(M):
        raise ValueError("right hand side length mismatch")
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(aug, ncols + 1, tower)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for i, p in enumerate(pivots):
        x[p] = R[i][ncols]
    return x


def solve_affine(M: Sequence[Sequence[int]], ncols: int, b: Sequence[int], tower,
                 seed: int, label: str = "solve-affine") -> Row:
    """Uniformly random solution of M x^T = b^T, deterministic per seed."""
    x0 = solve_right(M, ncols, b, tower)
    if x0 is None:
        raise ValueError("inconsistent linear system")
    kern = kernel(M, ncols, tower)
    if not kern:
        return x0
    rng = rng_stream(seed, label)
    coeffs = [int(c) for c in rng.integers(0, tower.order, size=len(kern))]
    add = tower.add
    shift = vec_mat(coeffs, kern, ncols, tower)
    return [add(a, s) for a, s in zip(x0, shift)]


def rng_stream(seed: int, label: str = "") -> np.random.Generator:
    """Counter-based generator for the (seed, stream-label) pair.

    Philox streams keyed by a hash of the pair are independent and
    reproducible across platforms, so parallel workers can draw from
    disjoint labels without coordination.
    """
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    key = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def gaussian_binomial(n: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^n."""
    if d < 0 or d > n:
        return 0
    num = den = 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def subspace_count(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, d, q) for d in range(n + 1))


def subspace_bases(n: int, d: int, elements: Sequence[int],
                   budget: int = DEFAULT_BUDGET) -> Iterator[Rows]:
    """Yield every d-dim subspace of F^n once, as its canonical RREF basis.

    ``elements`` lists the scalar codes of the ground field (the extension
    field or its base field); no arithmetic is needed because an RREF
    matrix is determined by its pivot columns plus free entries.  Bases
    come out in a fixed lexicographic order.
    """
    q = len(elements)
    total = gaussian_binomial(n, d, q)
    if total > budget:
        raise BudgetError(total, budget,
                          f"enumerating {total} subspaces of dimension {d} in F_{q}^{n} "
                          f"exceeds the budget of {budget}")
    if d == 0:
        yield []
        return
    for pivots in itertools.combinations(range(n), d):
        pivset = set(pivots)
        template = [[0] * n for _ in range(d)]
        for i, p in enumerate(pivots):
            template[i][p] = 1
        free = [(i, j) for i, p in enumerate(pivots)
                for j in range(p + 1, n) if j not in pivset]
        if not free:
            yield copy_rows(template)
            continue
        for vals in itertools.product(elements, repeat=len(free)):
            basis = copy_rows(template)
            for (i, j), v in zip(free, vals):
                basis[i][j] = v
            yield basis
