"""Dense exact matrices stored as tuples of row tuples.

Shapes are never inferred from an empty tuple; callers that can meet zero
rows pass the column count explicitly.
"""

from __future__ import annotations

Matrix = tuple


def zeros(rows, cols):
    return tuple((0,) * cols for _ in range(rows))


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def shape(m, cols=None):
    if m:
        return len(m), len(m[0])
    return 0, cols or 0


def is_zero(m):
    return all(x == 0 for row in m for x in row)


def transpose(m, cols=None):
    rows, ncols = shape(m, cols)
    return tuple(tuple(m[i][j] for i in range(rows)) for j in range(ncols))


def matmul(a, b, ring, inner=None):
    """Product ``a @ b``; ``inner`` is needed only if ``b`` has no rows."""
    if not a:
        return ()
    if not b:
        # a is r x 0; the result has no columns we can know of here
        return tuple(() for _ in a)
    cols = list(zip(*b))
    norm = ring.fast
    out = []
    for row in a:
        nz = [(j, x) for j, x in enumerate(row) if x]
        if not nz:
            out.append((0,) * len(cols))
            continue
        out.append(tuple(norm(sum(x * col[j] for j, x in nz)) for col in cols))
    return tuple(out)


def add(a, b, ring):
    norm = ring.fast
    return tuple(tuple(norm(x + y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c, a, ring):
    return tuple(tuple(ring(c * x) for x in row) for row in a)


def kron(a, b, ring):
    """Kronecker product; row/column index (i, j) -> i * len(b) + j."""
    return tuple(tuple(ring(x * y) for x in ra for y in rb) for ra in a for rb in b)


def normalize(m, ring):
    norm = ring.fast
    return tuple(tuple(norm(x) for x in row) for row in m)


def rank(m, ring, cols=None):
    """Rank over the fraction field (Q for Z) or over Z/p."""
    rows, ncols = shape(m, cols)
    if ring.is_field:
        work = [[ring(x) for x in row] for row in m]
        inv = ring.inverse
        coerce = ring
    else:
        from fractions import Fraction

        work = [[Fraction(x) for x in row] for row in m]
        inv = lambda x: 1 / x  # noqa: E731
        coerce = lambda x: x  # noqa: E731
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        pinv = inv(work[r][c])
        for i in range(r + 1, rows):
            if work[i][c] != 0:
                factor = coerce(work[i][c] * pinv)
                work[i] = [coerce(x - factor * y) for x, y in zip(work[i], work[r])]
        r += 1
        if r == rows:
            break
    return r


def determinant(m):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    work = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if work[i][k] != 0), None)
            if swap is None:
                return 0
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = (work[i][j] * work[k][k] - work[i][k] * work[k][j]) // prev
        prev = work[k][k]
    return sign * work[n - 1][n - 1]
