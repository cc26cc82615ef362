"""Dense linear algebra over the prime field F_p (lists of ints)."""

from __future__ import annotations


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[x % p for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(matrix: list[list[int]], p: int) -> list[list[int]]:
    """Basis of ``{x : matrix @ x = 0}``; ``matrix`` given as rows."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    red, pivots = rref(matrix, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def solve(matrix: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution of ``matrix @ x = rhs`` or ``None``."""
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(r) + [b] for r, b in zip(matrix, rhs)]
    red, pivots = rref(aug, p)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def transpose(cols: list[list[int]]) -> list[list[int]]:
    return [list(r) for r in zip(*cols)] if cols else []


def rank(matrix: list[list[int]], p: int) -> int:
    return len(rref(matrix, p)[1]) if matrix else 0


def matmul(A: list[list[int]], B: list[list[int]], p: int) -> list[list[int]]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) % p for col in Bt] for row in A]
