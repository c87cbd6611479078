"""Linear algebra over GF(2) on bit-packed rows.

A row is a Python ``int``; bit ``j`` is column ``j``.  Python integers are
arbitrary precision, so a row operation is a single XOR regardless of width.
"""


def parity(v):
    return v.bit_count() & 1


def dot(u, v):
    return (u & v).bit_count() & 1


def echelon(rows, ncols):
    """Fully reduced row echelon form.

    Returns ``(reduced, pivots)`` where ``reduced[i]`` has its pivot at column
    ``pivots[i]`` and no other reduced row has that column set.  Zero rows are
    dropped.
    """
    rows = [r for r in rows if r]
    reduced = []
    pivots = []
    for col in range(ncols):
        bit = 1 << col
        for i, r in enumerate(rows):
            if r & bit:
                break
        else:
            continue
        pivot = rows.pop(i)
        rows = [r ^ pivot if r & bit else r for r in rows]
        reduced = [r ^ pivot if r & bit else r for r in reduced]
        reduced.append(pivot)
        pivots.append(col)
        rows = [r for r in rows if r]
    return reduced, pivots


def rank(rows, ncols):
    return len(echelon(rows, ncols)[0])


def solve(rows, rhs, ncols):
    """Return ``v`` with ``dot(rows[i], v) == rhs[i]`` for all ``i``, or ``None``.

    Free variables are set to zero, which makes the answer the numerically
    smallest solution compatible with the echelon pivots.
    """
    flag = 1 << ncols
    aug = [r | (flag if b else 0) for r, b in zip(rows, rhs)]
    reduced, pivots = echelon(aug, ncols + 1)
    v = 0
    for r, col in zip(reduced, pivots):
        if col == ncols:
            return None
        if r & flag:
            v |= 1 << col
    return v


def nullspace(rows, ncols):
    """Basis of ``{v : dot(r, v) == 0 for every r in rows}``."""
    reduced, pivots = echelon(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, col in zip(reduced, pivots):
            if (r >> free) & 1:
                v |= 1 << col
        basis.append(v)
    return basis


def left_kernel(rows, ncols):
    """Basis of index masks ``S`` with ``XOR(rows[i] for i in S) == 0``."""
    # Each row carries a tag recording which inputs were combined into it;
    # rows whose data part eliminates to zero are kernel elements.
    remaining = [r | (1 << (ncols + i)) for i, r in enumerate(rows)]
    for col in range(ncols):
        bit = 1 << col
        idx = next((i for i, r in enumerate(remaining) if r & bit), None)
        if idx is None:
            continue
        p = remaining.pop(idx)
        remaining = [r ^ p if r & bit else r for r in remaining]
    low = (1 << ncols) - 1
    return [r >> ncols for r in remaining if not r & low]


def span_contains(rows, v, ncols):
    reduced, pivots = echelon(rows, ncols)
    for r, col in zip(reduced, pivots):
        if (v >> col) & 1:
            v ^= r
    return v == 0
