"""Exact rational linear algebra on plain Python fractions.

Wall tests and reductive splittings must distinguish zero from small, so
every rank, kernel and signature decision on exact data is made here with
rational arithmetic.  Floating point enters the package only through the
explicitly numeric oracles (SVD based tests in the fatness and curvature
modules).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce ints, 'p/q' strings, floats (exactly) to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def vec(xs) -> Vec:
    return tuple(frac(x) for x in xs)


def mat(rows) -> Mat:
    return tuple(vec(r) for r in rows)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n: int) -> Mat:
    return tuple(unit_vec(n, i) for i in range(n))


def dot(x, y) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), ZERO)


def mat_vec(a, x) -> Vec:
    """A @ x with A given by rows."""
    return tuple(dot(row, x) for row in a)


def vec_mat(x, a) -> Vec:
    """Row vector times matrix: sum_i x_i * a[i]."""
    n = len(a[0]) if a else 0
    out = [ZERO] * n
    for xi, row in zip(x, a):
        if xi:
            for j, r in enumerate(row):
                if r:
                    out[j] += xi * r
    return tuple(out)


def mat_mul(a, b) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(a) -> Mat:
    return tuple(zip(*a)) if a else ()


def add_vec(x, y) -> Vec:
    return tuple(a + b for a, b in zip(x, y))


def sub_vec(x, y) -> Vec:
    return tuple(a - b for a, b in zip(x, y))


def scale_vec(c, x) -> Vec:
    c = frac(c)
    return tuple(c * a for a in x)


def is_zero_vec(x) -> bool:
    return all(a == 0 for a in x)


def primitive(x) -> Vec:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    x = vec(x)
    denom = 1
    for a in x:
        denom = denom * a.denominator // gcd(denom, a.denominator)
    ints = [int(a * denom) for a in x]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return x
    lead = next(v for v in ints if v)
    if lead < 0:
        g = -g
    return tuple(Fraction(v // g) for v in ints)


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [[frac(x) for x in row] for row in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m, pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def clear_denominators(rows) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (preserves rank and
    kernel)."""
    out = []
    for row in rows:
        row = [frac(x) for x in row]
        denom = 1
        for a in row:
            denom = denom * a.denominator // gcd(denom, a.denominator)
        out.append([int(a * denom) for a in row])
    return out


def rank_int(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    nr, nc = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        row_r = m[r]
        for i in range(r + 1, nr):
            row_i = m[i]
            mic = row_i[c]
            for j in range(c + 1, nc):
                row_i[j] = (p * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
        if r == nr:
            break
    return r


def rank_exact(rows) -> int:
    """Rank of a rational matrix (denominators cleared, then Bareiss)."""
    if not rows:
        return 0
    return rank_int(clear_denominators(rows))


def nullspace(rows) -> list[Vec]:
    """Basis of {x : A x = 0}, in primitive integer form."""
    if not rows:
        return []
    nc = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * nc
        x[f] = ONE
        for i, p in enumerate(pivots):
            x[p] = -red[i][f]
        basis.append(primitive(x))
    return basis


def solve(a_rows, b) -> Vec | None:
    """One solution of A x = b, or None if inconsistent.  Free variables
    are set to zero."""
    nc = len(a_rows[0]) if a_rows else 0
    aug = [list(row) + [bi] for row, bi in zip(a_rows, b)]
    red, pivots = rref(aug)
    if nc in pivots:
        return None
    x = [ZERO] * nc
    for i, p in enumerate(pivots):
        x[p] = red[i][nc]
    return tuple(x)


def inverse(a) -> Mat:
    n = len(a)
    aug = [list(row) + list(unit_vec(n, i)) for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(red[i][n:]) for i in range(n))


def det(a) -> Fraction:
    m = [[frac(x) for x in row] for row in a]
    n = len(m)
    sign = 1
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        result *= p
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result * sign


def inertia(a) -> tuple[int, int, int]:
    """Signature (n_pos, n_neg, n_zero) of an exact symmetric matrix,
    computed by congruence (symmetric Gaussian) elimination."""
    m = [[frac(x) for x in row] for row in a]
    n = len(m)
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if m[i][i] != 0), None)
        if piv is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n)
                        if m[i][j] != 0), None)
            if off is None:
                break
            i, j = off
            # e_i <- e_i + e_j turns the zero diagonal entry into 2 m_ij.
            for c in range(n):
                m[i][c] += m[j][c]
            for r in range(n):
                m[r][i] += m[r][j]
            piv = i
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            for r in range(n):
                m[r][k], m[r][piv] = m[r][piv], m[r][k]
        d = m[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if m[i][k]:
                f = m[i][k] / d
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
        for j in range(k + 1, n):
            if m[k][j]:
                f = m[k][j] / d
                for i in range(k, n):
                    m[i][j] -= f * m[i][k]
        k += 1
    return pos, neg, n - pos - neg


class CoordinateSolver:
    """Expresses vectors in a fixed linearly independent spanning set.

    Rows are the spanning vectors; ``coords(v)`` returns c with
    sum_i c_i rows_i == v, exactly, or None when v is outside the span.
    The pivot submatrix is inverted once so repeated solves are cheap,
    and sparse inputs (index -> value dicts) are handled without touching
    the zero entries.
    """

    def __init__(self, rows):
        self.rows: Mat = mat(rows)
        if not self.rows:
            self.ncols = 0
            self.pivots: list[int] = []
            self._inv: Mat = ()
            self._sparse_rows: list[dict[int, Fraction]] = []
            return
        self.ncols = len(self.rows[0])
        _, pivots = rref(self.rows)
        if len(pivots) != len(self.rows):
            raise ValueError("spanning set is linearly dependent")
        self.pivots = pivots
        pivot_block = tuple(tuple(row[p] for p in pivots) for row in self.rows)
        self._inv = inverse(pivot_block)
        self._sparse_rows = [
            {j: x for j, x in enumerate(row) if x} for row in self.rows
        ]

    def coords(self, v) -> Vec | None:
        """Coordinates of a dense vector or a sparse {index: value} dict."""
        if isinstance(v, dict):
            getter = lambda i: v.get(i, ZERO)
            support = set(v)
        else:
            getter = lambda i: frac(v[i])
            support = {i for i, x in enumerate(v) if x}
        k = len(self.rows)
        c = [ZERO] * k
        for r, p in enumerate(self.pivots):
            vp = getter(p)
            if vp:
                inv_row = self._inv[r]
                for j in range(k):
                    if inv_row[j]:
                        c[j] += vp * inv_row[j]
        # Verify membership in the span (sparse accumulation).
        recon: dict[int, Fraction] = {}
        for j, cj in enumerate(c):
            if cj:
                for idx, val in self._sparse_rows[j].items():
                    recon[idx] = recon.get(idx, ZERO) + cj * val
        recon = {i: x for i, x in recon.items() if x}
        if set(recon) != support:
            return None
        for i, x in recon.items():
            if getter(i) != x:
                return None
        return tuple(c)

    def contains(self, v) -> bool:
        return self.coords(v) is not None
