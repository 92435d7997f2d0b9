"""Exact-first matrix Lie algebra kernel.

Brackets and the Killing form are always evaluated through structure
constants; constructing an algebra from a matrix basis computes those
constants once, exactly for integer/rational bases and by least squares
(with explicit tolerances) for float bases.  The classical families
so(n), so(p,q), su(n) and u(n) inside so(2n) are built with unnormalized
integer bases so that downstream wall tests stay exact.
"""

from __future__ import annotations

import functools
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateRestriction,
    DimensionMismatch,
    NotCompact,
)
from .exact import (
    ZERO,
    CoordinateSolver,
    Mat,
    Vec,
    frac,
    inertia,
    mat,
    mat_vec,
    nullspace,
    primitive,
    rank_exact,
    solve,
    unit_vec,
    vec,
)

# Sparse n x n matrix: {(row, col): value}.
SparseMat = dict[tuple[int, int], Fraction]


def _sparse(m) -> SparseMat:
    return {(r, c): frac(x)
            for r, row in enumerate(m) for c, x in enumerate(row) if x}


def _dense(sp: SparseMat, n: int) -> Mat:
    rows = [[ZERO] * n for _ in range(n)]
    for (r, c), x in sp.items():
        rows[r][c] = x
    return mat(rows)


def _sparse_mul(a: SparseMat, b: SparseMat) -> SparseMat:
    by_row: dict[int, list[tuple[int, Fraction]]] = {}
    for (r, c), x in b.items():
        by_row.setdefault(r, []).append((c, x))
    out: SparseMat = {}
    for (r, c), x in a.items():
        for c2, y in by_row.get(c, ()):
            key = (r, c2)
            s = out.get(key, ZERO) + x * y
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _sparse_comm(a: SparseMat, b: SparseMat) -> SparseMat:
    out = _sparse_mul(a, b)
    for key, x in _sparse_mul(b, a).items():
        s = out.get(key, ZERO) - x
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def _flatten(sp: SparseMat, n: int) -> dict[int, Fraction]:
    return {r * n + c: x for (r, c), x in sp.items()}


class LieAlgebra:
    """A finite-dimensional real Lie algebra given by a matrix basis.

    All values are immutable after construction; every method is a pure
    function of the stored data.  Coordinates are with respect to the
    stored basis throughout.
    """

    def __init__(self, name: str, basis, *, exact: bool = True,
                 family: str | None = None, params: tuple | None = None,
                 tol: float = 1e-9):
        self.name = name
        self.basis: tuple[Mat, ...] = tuple(mat(b) for b in basis)
        if not self.basis:
            raise ValueError("empty basis")
        self.n = len(self.basis[0])
        self.dim = len(self.basis)
        self.exact = exact
        self.family = family
        self.params = params
        self.tol = tol
        self._sparse_basis = [_sparse(b) for b in self.basis]
        if exact:
            flat_rows = [
                [b[r][c] for r in range(self.n) for c in range(self.n)]
                for b in self.basis
            ]
            self._flat_solver = CoordinateSolver(flat_rows)
            self._structure = self._structure_exact()
        else:
            self._flat_solver = None
            self._structure = self._structure_float()
        # c^k_{aj} indexed as _ad_of[a][j] = {k: value}, both argument orders.
        ad_of: list[dict[int, dict[int, Fraction]]] = [dict() for _ in range(self.dim)]
        for (i, j), ck in self._structure.items():
            ad_of[i][j] = ck
            ad_of[j][i] = {k: -v for k, v in ck.items()}
        self._ad_of = ad_of
        self.killing: Mat = self._killing_gram()
        if exact:
            self.semisimple = rank_exact(self.killing) == self.dim
        else:
            kf = np.array([[float(x) for x in row] for row in self.killing])
            self.semisimple = np.linalg.matrix_rank(kf, tol=1e-9) == self.dim
        self._basis_array = None
        self._structure_array = None
        self._killing_inv = None

    # -- construction helpers -------------------------------------------

    def _structure_exact(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        structure = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                comm = _sparse_comm(self._sparse_basis[i], self._sparse_basis[j])
                coords = self._flat_solver.coords(_flatten(comm, self.n))
                if coords is None:
                    raise ValueError(
                        f"{self.name}: basis does not close under the "
                        f"commutator (elements {i}, {j})")
                ck = {k: x for k, x in enumerate(coords) if x}
                if ck:
                    structure[(i, j)] = ck
        return structure

    def _structure_float(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        flat = np.array([
            [float(b[r][c]) for r in range(self.n) for c in range(self.n)]
            for b in self.basis
        ])
        scale = np.abs(flat).max()
        structure = {}
        mats = [np.array([[float(x) for x in row] for row in b]) for b in self.basis]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                comm = mats[i] @ mats[j] - mats[j] @ mats[i]
                c, res, _, _ = np.linalg.lstsq(flat.T, comm.ravel(), rcond=None)
                recon = flat.T @ c
                if np.abs(recon - comm.ravel()).max() > self.tol * max(scale, 1.0):
                    raise ValueError(
                        f"{self.name}: basis does not close under the "
                        f"commutator within tolerance (elements {i}, {j})")
                ck = {k: Fraction(float(x)) for k, x in enumerate(c)
                      if abs(x) > self.tol}
                if ck:
                    structure[(i, j)] = ck
        return structure

    def _killing_gram(self) -> Mat:
        d = self.dim
        rows = [[ZERO] * d for _ in range(d)]
        for a in range(d):
            for b in range(a, d):
                s = ZERO
                for j, ck in self._ad_of[a].items():
                    row_b = self._ad_of[b]
                    for k, v1 in ck.items():
                        v2 = row_b.get(k)
                        if v2:
                            w = v2.get(j)
                            if w:
                                s += v1 * w
                rows[a][b] = s
                rows[b][a] = s
        return mat(rows)

    # -- basic operations ------------------------------------------------

    def check_vector(self, x) -> Vec:
        x = vec(x)
        if len(x) != self.dim:
            raise DimensionMismatch(
                f"expected coordinate vector of length {self.dim}, got {len(x)}")
        return x

    def bracket(self, x, y) -> Vec:
        """[x, y] in coordinates, via the structure constants."""
        x = self.check_vector(x)
        y = self.check_vector(y)
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self._ad_of[i]
            for j, ck in row.items():
                yj = y[j]
                if yj:
                    f = xi * yj
                    for k, v in ck.items():
                        out[k] += f * v
        return tuple(out)

    def ad_matrix(self, x) -> Mat:
        """Matrix of ad_x acting on coordinates (columns are [x, e_j])."""
        cols = [self.bracket(x, unit_vec(self.dim, j)) for j in range(self.dim)]
        return tuple(tuple(col[k] for col in cols) for k in range(self.dim))

    def killing_form(self, x, y) -> Fraction:
        """B(x, y) = Tr(ad_x ad_y), evaluated through the cached Gram."""
        x = self.check_vector(x)
        y = self.check_vector(y)
        return sum((xi * v for xi, v in zip(x, mat_vec(self.killing, y))), ZERO)

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return ZERO
        if i < j:
            return self._structure.get((i, j), {}).get(k, ZERO)
        return -self._structure.get((j, i), {}).get(k, ZERO)

    def realize(self, x) -> Mat:
        """The matrix sum_i x_i b_i."""
        x = self.check_vector(x)
        acc: SparseMat = {}
        for xi, sp in zip(x, self._sparse_basis):
            if xi:
                for key, v in sp.items():
                    acc[key] = acc.get(key, ZERO) + xi * v
        return _dense(acc, self.n)

    def coords_of_matrix(self, m) -> Vec | None:
        """Coordinates of an n x n matrix in the basis, or None."""
        if self._flat_solver is None:
            flat = np.array([
                [float(b[r][c]) for r in range(self.n) for c in range(self.n)]
                for b in self.basis
            ])
            target = np.array([float(frac(x)) for row in m for x in row])
            c, _, _, _ = np.linalg.lstsq(flat.T, target, rcond=None)
            if np.abs(flat.T @ c - target).max() > self.tol:
                return None
            return vec(Fraction(float(x)) for x in c)
        return self._flat_solver.coords(_flatten(_sparse(m), self.n))

    # -- float views (cached) ---------------------------------------------

    def basis_array(self) -> np.ndarray:
        if self._basis_array is None:
            arr = np.array([[[float(x) for x in row] for row in b]
                            for b in self.basis])
            arr.setflags(write=False)
            self._basis_array = arr
        return self._basis_array

    def structure_array(self) -> np.ndarray:
        """Dense c[i, j, k] as float64, for the numeric oracles."""
        if self._structure_array is None:
            d = self.dim
            c = np.zeros((d, d, d))
            for (i, j), ck in self._structure.items():
                for k, v in ck.items():
                    c[i, j, k] = float(v)
                    c[j, i, k] = -float(v)
            c.setflags(write=False)
            self._structure_array = c
        return self._structure_array

    def killing_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.killing])

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim})"


# -- module-level operation surface ---------------------------------------

def bracket(g: LieAlgebra, x, y) -> Vec:
    return g.bracket(x, y)


def killing_form(g: LieAlgebra, x, y) -> Fraction:
    return g.killing_form(x, y)


def killing_signature(g: LieAlgebra) -> tuple[int, int, int]:
    """(n_neg, n_pos, n_zero) of the Killing form."""
    pos, neg, zero = inertia(g.killing)
    return neg, pos, zero


def matrix_algebra(name: str, basis, *, exact: bool = True,
                   tol: float = 1e-9) -> LieAlgebra:
    """Build an algebra from a user-supplied matrix basis.

    With ``exact=False`` the structure constants are fitted by least squares
    and closure/Jacobi are only required up to ``tol``.
    """
    return LieAlgebra(name, basis, exact=exact, tol=tol)


def _E(n: int, r: int, c: int) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    m[r][c] = 1
    return m


def _antisym(n: int, r: int, c: int) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    m[r][c] = 1
    m[c][r] = -1
    return m


def _sym_pair(n: int, r: int, c: int) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    m[r][c] = 1
    m[c][r] = 1
    return m


def _so_basis(n: int) -> list[list[list[int]]]:
    return [_antisym(n, i, j) for i in range(n) for j in range(i + 1, n)]


def _so_pq_basis(p: int, q: int) -> list[list[list[int]]]:
    n = p + q
    out = [_antisym(n, i, j) for i in range(p) for j in range(i + 1, p)]
    out += [_antisym(n, p + a, p + b) for a in range(q) for b in range(a + 1, q)]
    out += [_sym_pair(n, i, p + a) for i in range(p) for a in range(q)]
    return out


def _u_in_so_basis(n: int) -> list[list[list[int]]]:
    """u(n) realized in so(2n): skew-Hermitian z = a + ib mapped to 2x2
    blocks [[a, -b], [b, a]]; these are exactly the elements of so(2n)
    commuting with the block complex structure."""
    N = 2 * n
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            re = [[0] * N for _ in range(N)]
            re[2 * j][2 * k] = 1
            re[2 * j + 1][2 * k + 1] = 1
            re[2 * k][2 * j] = -1
            re[2 * k + 1][2 * j + 1] = -1
            out.append(re)
            im = [[0] * N for _ in range(N)]
            im[2 * j][2 * k + 1] = -1
            im[2 * j + 1][2 * k] = 1
            im[2 * k][2 * j + 1] = -1
            im[2 * k + 1][2 * j] = 1
            out.append(im)
    for j in range(n):
        d = [[0] * N for _ in range(N)]
        d[2 * j][2 * j + 1] = -1
        d[2 * j + 1][2 * j] = 1
        out.append(d)
    return out


def _su_basis(n: int) -> list[list[list[int]]]:
    """su(n) realified inside so(2n): the u(n) basis with the diagonal
    replaced by traceless differences."""
    N = 2 * n
    base = _u_in_so_basis(n)
    off = base[: n * (n - 1)]
    diag = base[n * (n - 1):]
    out = list(off)
    for j in range(n - 1):
        m = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(diag[j], diag[j + 1])]
        out.append(m)
    return out


@functools.lru_cache(maxsize=None)
def _build_cached(family: str, params: tuple) -> LieAlgebra:
    if family == "so" and len(params) == 1:
        n = params[0]
        if n < 2:
            raise ValueError("so(n) needs n >= 2")
        return LieAlgebra(f"so({n})", _so_basis(n), family="so", params=params)
    if family == "so" and len(params) == 2:
        p, q = params
        if p < 1 or q < 1:
            raise ValueError("so(p,q) needs p, q >= 1")
        return LieAlgebra(f"so({p},{q})", _so_pq_basis(p, q),
                          family="so", params=params)
    if family == "su":
        (n,) = params
        if n < 2:
            raise ValueError("su(n) needs n >= 2")
        return LieAlgebra(f"su({n})", _su_basis(n), family="su", params=params)
    if family == "u-in-so":
        (n,) = params
        if n < 1:
            raise ValueError("u(n) in so(2n) needs n >= 1")
        return LieAlgebra(f"u({n})<so({2*n})", _u_in_so_basis(n),
                          family="u-in-so", params=params)
    raise ValueError(f"unsupported family {family!r} with params {params!r}")


def build_algebra(family: str, params) -> LieAlgebra:
    """Build a classical algebra: ``so`` with n or (p, q), ``su`` with n,
    or ``u-in-so`` with n (meaning u(n) inside so(2n))."""
    if isinstance(params, int):
        params = (params,)
    return _build_cached(family, tuple(int(p) for p in params))


def so(n: int) -> LieAlgebra:
    return build_algebra("so", n)


def so_pq(p: int, q: int) -> LieAlgebra:
    return build_algebra("so", (p, q))


def su(n: int) -> LieAlgebra:
    return build_algebra("su", n)


def u_in_so(n: int) -> LieAlgebra:
    return build_algebra("u-in-so", n)


# -- covectors -------------------------------------------------------------

class Covector:
    """A covector u = B(X_u, .) represented by X_u (musical isomorphism)."""

    def __init__(self, algebra: LieAlgebra, x_u):
        self.algebra = algebra
        self.x_u = algebra.check_vector(x_u)

    def __call__(self, y) -> Fraction:
        return self.algebra.killing_form(self.x_u, y)

    def dual_coords(self) -> Vec:
        return vector_to_covector(self.algebra, self.x_u)

    @classmethod
    def from_dual_coords(cls, algebra: LieAlgebra, u) -> "Covector":
        return cls(algebra, covector_to_vector(algebra, u))


def vector_to_covector(g: LieAlgebra, x) -> Vec:
    """Coordinates of B(x, .) in the dual basis, i.e. K x."""
    return mat_vec(g.killing, g.check_vector(x))


def covector_to_vector(g: LieAlgebra, u) -> Vec:
    """Inverse musical isomorphism; requires a nondegenerate Killing form."""
    u = g.check_vector(u)
    x = solve(g.killing, u)
    if x is None:
        raise DegenerateRestriction(
            f"Killing form of {g.name} is degenerate; no representative")
    return x


# -- reductive splittings ---------------------------------------------------

class SubalgebraEmbedding:
    """A subalgebra h of g with its Killing-orthogonal complement m.

    ``h_basis`` and ``m_basis`` are rows of coordinate vectors in g.
    ``torus_basis`` is an optional maximal abelian subalgebra of h,
    expected in the block convention when root tests are used.
    """

    def __init__(self, ambient: LieAlgebra, h_basis: Mat, m_basis: Mat,
                 torus_basis: Mat | None, compact: bool, name: str = ""):
        self.ambient = ambient
        self.h_basis = h_basis
        self.m_basis = m_basis
        self.torus_basis = torus_basis
        self.compact = compact
        self.name = name or f"h<{ambient.name}"
        self.dim_h = len(h_basis)
        self.dim_m = len(m_basis)
        if ambient.exact:
            self._full_solver = CoordinateSolver(list(h_basis) + list(m_basis))
            self._h_solver = CoordinateSolver(h_basis) if h_basis else None
        else:
            self._full_solver = None
            self._h_solver = None
        self._torus_solver = None
        self._cache: dict = {}

    def split_coords(self, x) -> tuple[Vec, Vec]:
        """Coefficients of x in the h-basis and the m-basis."""
        x = self.ambient.check_vector(x)
        if self._full_solver is not None:
            c = self._full_solver.coords(x)
            if c is None:
                raise DimensionMismatch("vector is not in h + m")
            return c[:self.dim_h], c[self.dim_h:]
        rows = np.array([[float(v) for v in row]
                         for row in list(self.h_basis) + list(self.m_basis)])
        c, _, _, _ = np.linalg.lstsq(rows.T, np.array([float(v) for v in x]),
                                     rcond=None)
        c = vec(Fraction(float(t)) for t in c)
        return c[:self.dim_h], c[self.dim_h:]

    def project(self, x) -> tuple[Vec, Vec]:
        """g-coordinate components (x_h, x_m) of the reductive splitting."""
        ch, cm = self.split_coords(x)
        d = self.ambient.dim
        xh = [ZERO] * d
        for ci, row in zip(ch, self.h_basis):
            if ci:
                for k, v in enumerate(row):
                    xh[k] += ci * v
        xm = [ZERO] * d
        for ci, row in zip(cm, self.m_basis):
            if ci:
                for k, v in enumerate(row):
                    xm[k] += ci * v
        return tuple(xh), tuple(xm)

    def h_coords(self, x) -> Vec | None:
        """Coefficients of x in the h-basis when x lies in h, else None."""
        if self._h_solver is not None:
            return self._h_solver.coords(self.ambient.check_vector(x))
        ch, cm = self.split_coords(x)
        if max((abs(float(t)) for t in cm), default=0.0) > self.ambient.tol:
            return None
        return ch

    def in_m(self, x) -> bool:
        ch, _ = self.split_coords(x)
        if self.ambient.exact:
            return all(c == 0 for c in ch)
        return max((abs(float(c)) for c in ch), default=0.0) <= self.ambient.tol

    def torus_coords(self, x) -> Vec | None:
        """Coordinates of x in the torus basis, or None if x is not in t."""
        if self.torus_basis is None:
            return None
        if self._torus_solver is None:
            self._torus_solver = CoordinateSolver(self.torus_basis)
        return self._torus_solver.coords(self.ambient.check_vector(x))

    def torus_vector(self, tau) -> Vec:
        """The element sum_i tau_i T_i of the torus, in g-coordinates."""
        if self.torus_basis is None:
            raise NotCompact("embedding carries no torus")
        tau = vec(tau)
        if len(tau) != len(self.torus_basis):
            raise DimensionMismatch("torus coordinate length mismatch")
        d = self.ambient.dim
        out = [ZERO] * d
        for ti, row in zip(tau, self.torus_basis):
            if ti:
                for k, v in enumerate(row):
                    out[k] += ti * v
        return tuple(out)

    def killing_h(self) -> Mat:
        """Gram matrix of the Killing form restricted to h."""
        key = "killing_h"
        if key not in self._cache:
            g = self.ambient
            rows = []
            for hi in self.h_basis:
                khi = mat_vec(g.killing, hi)
                rows.append(tuple(sum((a * b for a, b in zip(hj, khi)), ZERO)
                                  for hj in self.h_basis))
            self._cache[key] = tuple(rows)
        return self._cache[key]

    def __repr__(self):
        return (f"SubalgebraEmbedding({self.name!r}, dim_h={self.dim_h}, "
                f"dim_m={self.dim_m})")


def reductive_split(g: LieAlgebra, h_basis, *, torus_basis=None,
                    name: str = "", check: bool = True) -> SubalgebraEmbedding:
    """Split g = h + m with m the Killing-orthogonal complement of h.

    Raises DegenerateRestriction when B restricted to h is singular (no
    reductive complement exists in the Killing-orthogonal sense).
    """
    h_rows = mat(h_basis)
    for row in h_rows:
        g.check_vector(row)
    if g.exact:
        bh_rows = [mat_vec(g.killing, hi) for hi in h_rows]
        gram_h = tuple(tuple(sum((a * b for a, b in zip(hj, bhi)), ZERO)
                             for bhi in bh_rows) for hj in h_rows)
        if rank_exact(gram_h) != len(h_rows):
            raise DegenerateRestriction(
                f"Killing form of {g.name} is singular on the subalgebra")
        m_rows = tuple(nullspace(bh_rows)) if h_rows else mat(
            [unit_vec(g.dim, i) for i in range(g.dim)])
        pos, neg, zero = inertia(gram_h)
        compact = neg == len(h_rows) and pos == 0 and zero == 0
    else:
        kf = g.killing_array()
        h_arr = np.array([[float(x) for x in r] for r in h_rows])
        gram_h = h_arr @ kf @ h_arr.T
        sv = np.linalg.svd(gram_h, compute_uv=False) if len(h_rows) else np.array([])
        if len(h_rows) and sv.min() <= 1e-9 * max(sv.max(), 1.0):
            raise DegenerateRestriction(
                f"Killing form of {g.name} is numerically singular on h")
        from scipy.linalg import null_space
        ns = null_space(h_arr @ kf) if len(h_rows) else np.eye(g.dim)
        m_rows = mat(ns.T)
        compact = bool(len(h_rows)) and bool(np.all(np.linalg.eigvalsh(gram_h) < 0))
    emb = SubalgebraEmbedding(g, h_rows, m_rows, mat(torus_basis) if torus_basis else None,
                              compact, name=name)
    if check:
        _check_embedding(emb)
    return emb


def _check_embedding(emb: SubalgebraEmbedding) -> None:
    g = emb.ambient
    tol = g.tol
    # Closure [h, h] in h and ad-invariance [h, m] in m.
    for i, hi in enumerate(emb.h_basis):
        for hj in emb.h_basis[i + 1:]:
            br = g.bracket(hi, hj)
            if g.exact:
                if emb.h_coords(br) is None:
                    raise ValueError(f"{emb.name}: h is not closed under brackets")
            else:
                _, cm = emb.split_coords(br)
                if max((abs(float(c)) for c in cm), default=0.0) > tol:
                    raise ValueError(f"{emb.name}: h is not closed under brackets")
        for mj in emb.m_basis:
            br = g.bracket(hi, mj)
            if not emb.in_m(br):
                raise ValueError(f"{emb.name}: [h, m] leaves m")
    # B(h, m) = 0.
    for hi in emb.h_basis:
        khi = mat_vec(g.killing, hi)
        for mj in emb.m_basis:
            v = sum((a * b for a, b in zip(mj, khi)), ZERO)
            if g.exact:
                if v != 0:
                    raise ValueError(f"{emb.name}: B(h, m) != 0")
            elif abs(float(v)) > tol:
                raise ValueError(f"{emb.name}: B(h, m) not zero within tolerance")
    # Torus, when provided: abelian and inside h.
    if emb.torus_basis is not None:
        for ti in emb.torus_basis:
            if emb.h_coords(ti) is None:
                raise ValueError(f"{emb.name}: torus is not contained in h")
        for i, ti in enumerate(emb.torus_basis):
            for tj in emb.torus_basis[i + 1:]:
                br = g.bracket(ti, tj)
                if g.exact:
                    if any(br):
                        raise ValueError(f"{emb.name}: torus is not abelian")
                elif max(abs(float(c)) for c in br) > tol:
                    raise ValueError(f"{emb.name}: torus is not abelian")


def maximal_torus(emb: SubalgebraEmbedding) -> Mat:
    """A maximal abelian subalgebra of h (the stored one when present).

    For a compact h the centralizer in h of a generic element is such a
    torus; generic elements are searched deterministically.  Raises
    NotCompact when B restricted to h is not negative definite.
    """
    if emb.torus_basis is not None:
        return emb.torus_basis
    if not emb.compact:
        raise NotCompact(f"{emb.name}: Killing form not negative definite on h")
    g = emb.ambient
    if not g.exact:
        raise NotImplementedError("generic torus search needs an exact algebra")
    d = g.dim
    for base in (1, 2, 3, 5, 7, 11, 13):
        coeffs = [Fraction(base ** i % 1009) for i in range(emb.dim_h)]
        xi = [ZERO] * d
        for c, row in zip(coeffs, emb.h_basis):
            for k, v in enumerate(row):
                xi[k] += c * v
        # Kernel of ad_xi restricted to h, inside h-coordinates.
        cols = [g.bracket(xi, hj) for hj in emb.h_basis]
        rows = [[cols[j][k] for j in range(emb.dim_h)] for k in range(d)]
        kern = nullspace(rows)
        t_rows = []
        for kv in kern:
            t = [ZERO] * d
            for c, row in zip(kv, emb.h_basis):
                if c:
                    for k, v in enumerate(row):
                        t[k] += c * v
            t_rows.append(primitive(t))
        abelian = all(
            not any(g.bracket(t_rows[i], t_rows[j]))
            for i in range(len(t_rows)) for j in range(i + 1, len(t_rows)))
        if abelian and t_rows:
            return mat(t_rows)
    raise NotCompact(f"{emb.name}: no generic element found for a torus")


# -- block embeddings for the classical catalog -----------------------------

def _pair_index(n: int, i: int, j: int) -> int:
    """Index of the (i, j), i < j, antisymmetric generator of so(n)."""
    if not 0 <= i < j < n:
        raise ValueError("need 0 <= i < j < n")
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def block_torus(g: LieAlgebra, r: int) -> Mat:
    """Coordinates of the block torus T_i spanned by 2x2 rotation blocks
    [[0, -t_i], [t_i, 0]] on the diagonal, for i = 0..r-1."""
    rows = []
    for i in range(r):
        m = _antisym(g.n, 2 * i + 1, 2 * i)
        c = g.coords_of_matrix(m)
        if c is None:
            raise ValueError(f"{g.name}: block torus element {i} is not in g")
        rows.append(c)
    return mat(rows)


def so_block_embedding(g: LieAlgebra, k: int, *, name: str = "") -> SubalgebraEmbedding:
    """so(k) in the top-left block of g (g built from so(n) or so(p,q))."""
    h_rows = []
    for i in range(k):
        for j in range(i + 1, k):
            c = g.coords_of_matrix(_antisym(g.n, i, j))
            if c is None:
                raise ValueError(f"so({k}) block does not embed in {g.name}")
            h_rows.append(c)
    torus = block_torus(g, k // 2) if k >= 2 else None
    return reductive_split(g, h_rows, torus_basis=torus,
                           name=name or f"so({k})<{g.name}")


def u_block_embedding(g: LieAlgebra, n: int, *, name: str = "") -> SubalgebraEmbedding:
    """u(n), the commutant of the block complex structure inside the
    so(2n) top-left block of g."""
    h_rows = []
    for m in _u_in_so_basis(n):
        big = [[0] * g.n for _ in range(g.n)]
        for r in range(2 * n):
            for c in range(2 * n):
                big[r][c] = m[r][c]
        coords = g.coords_of_matrix(big)
        if coords is None:
            raise ValueError(f"u({n}) block does not embed in {g.name}")
        h_rows.append(coords)
    torus = block_torus(g, n)
    return reductive_split(g, h_rows, torus_basis=torus,
                           name=name or f"u({n})<{g.name}")


def jacobi_residual(g: LieAlgebra) -> Fraction | float:
    """Max residual of the Jacobi identity over all basis triples (exact
    zero for exact algebras)."""
    worst: Fraction = ZERO
    d = g.dim
    ad_of = g._ad_of

    def double(i: int, j: int, k: int) -> dict[int, Fraction]:
        # [[e_i, e_j], e_k] through the sparse constants.
        out: dict[int, Fraction] = {}
        for m, c in ad_of[i].get(j, {}).items():
            for l, c2 in ad_of[m].get(k, {}).items():
                s = out.get(l, ZERO) + c * c2
                if s:
                    out[l] = s
                else:
                    out.pop(l, None)
        return out

    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                total = double(i, j, k)
                for l, v in double(j, k, i).items():
                    total[l] = total.get(l, ZERO) + v
                for l, v in double(k, i, j).items():
                    total[l] = total.get(l, ZERO) + v
                m = max((abs(t) for t in total.values()), default=ZERO)
                if m > worst:
                    worst = m
    return worst if g.exact else float(worst)
