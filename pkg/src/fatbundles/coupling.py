"""Invariant coupling forms on homogeneous bundles H/V -> G/V -> G/H.

The form is realized at the identity coset as the orbit two-form
sigma_u(X, Y) = B(X_u, [X, Y]) on the Killing-orthogonal complement of the
isotropy algebra v = ker(ad_{X_u}); G-invariance carries it everywhere.
This realization is closed exactly (Jacobi), restricts to the fiber orbit
form on h, is orthogonal between the fiber and horizontal blocks, and is
nondegenerate exactly when the base covector is fat.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .errors import DegenerateRestriction, IsotropyMismatch, OddDimension
from .exact import (
    ZERO,
    CoordinateSolver,
    Mat,
    Vec,
    det,
    frac,
    mat,
    mat_vec,
    nullspace,
    rank_exact,
    vec,
)
from .fatness import fatness_gram, isotropy_algebra
from .liealg import LieAlgebra, SubalgebraEmbedding


@dataclass(frozen=True)
class InvariantTwoForm:
    """Gram matrix of an invariant two-form over a basis of the
    complement n of the isotropy algebra v (the form is extended by zero
    on v)."""

    algebra: LieAlgebra
    x_u: Vec
    v_basis: Mat
    n_basis: Mat
    gram: Mat
    scale: Fraction = Fraction(1)

    @property
    def dim(self) -> int:
        return len(self.n_basis)

    def scaled(self, r) -> "InvariantTwoForm":
        r = frac(r)
        return InvariantTwoForm(
            self.algebra, self.x_u, self.v_basis, self.n_basis,
            mat([[r * x for x in row] for row in self.gram]),
            self.scale * r)

    def gram_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])


@dataclass(frozen=True)
class HomogeneousBundleInstance:
    """Splitting data for H/V -> G/V -> G/H at a covector X_u: the
    isotropy v inside h, its complement n, and n = (h cap n) + m."""

    g: LieAlgebra
    emb: SubalgebraEmbedding
    x_u: Vec
    v_basis: Mat
    fiber_basis: Mat   # h cap n
    m_basis: Mat
    isotropy_in_h: bool

    @property
    def n_basis(self) -> Mat:
        return self.fiber_basis + self.m_basis


def _span_equal(a_rows, b_rows) -> bool:
    ra = rank_exact(a_rows) if a_rows else 0
    rb = rank_exact(b_rows) if b_rows else 0
    if ra != rb:
        return False
    stacked = list(a_rows) + list(b_rows)
    return (rank_exact(stacked) if stacked else 0) == ra


def _orbit_gram(g: LieAlgebra, x_u: Vec, rows: Mat) -> Mat:
    """Gram of B(x_u, [., .]) over the given rows, via the pairing matrix
    S_ab = B(x_u, [e_a, e_b])."""
    kx = mat_vec(g.killing, x_u)
    s_sparse: dict[tuple[int, int], Fraction] = {}
    for (a, b), ck in g._structure.items():
        val = sum((v * kx[k] for k, v in ck.items()), ZERO)
        if val:
            s_sparse[(a, b)] = val
    k = len(rows)
    gram = [[ZERO] * k for _ in range(k)]
    for i in range(k):
        ri = rows[i]
        for j in range(i + 1, k):
            rj = rows[j]
            s = ZERO
            for (a, b), val in s_sparse.items():
                p = ri[a] * rj[b] - ri[b] * rj[a]
                if p:
                    s += val * p
            gram[i][j] = s
            gram[j][i] = -s
    return mat(gram)


def _orthocomplement(g: LieAlgebra, rows: Mat) -> Mat:
    if not rows:
        return mat([tuple(r) for r in np.eye(g.dim, dtype=int).tolist()])
    bk = [mat_vec(g.killing, r) for r in rows]
    return mat(nullspace(bk))


def coupling_form(g: LieAlgebra, v_basis, x_u, *, n_basis=None) -> InvariantTwoForm:
    """The orbit realization of the coupling form at X_u.

    ``v_basis`` must span exactly ker(ad_{X_u}) (checked, raising
    IsotropyMismatch).  The Gram of B(X_u, [., .]) is returned over
    ``n_basis`` (default: the Killing-orthogonal complement of v).
    """
    x_u = g.check_vector(x_u)
    v_rows = mat(v_basis)
    kernel = isotropy_algebra(g, x_u)
    if not _span_equal(v_rows, kernel):
        raise IsotropyMismatch(
            f"v (dim {len(v_rows)}) is not ker(ad_X) (dim {len(kernel)})")
    n_rows = mat(n_basis) if n_basis is not None else _orthocomplement(g, v_rows)
    return InvariantTwoForm(g, x_u, v_rows, n_rows,
                            _orbit_gram(g, x_u, n_rows))


def fiber_isotropy(g: LieAlgebra, emb: SubalgebraEmbedding, x_u) -> Mat:
    """Basis of ker(ad_{X_u}) intersected with h (the fiber isotropy
    algebra); equals the full kernel exactly when X_u is fat."""
    x_u = g.check_vector(x_u)
    cols = [g.bracket(x_u, hj) for hj in emb.h_basis]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(g.dim)]
    coeffs = nullspace(rows)
    v_rows = []
    for c in coeffs:
        w = [ZERO] * g.dim
        for ci, hrow in zip(c, emb.h_basis):
            if ci:
                for k, val in enumerate(hrow):
                    w[k] += ci * val
        v_rows.append(tuple(w))
    return mat(v_rows)


def bundle_instance(g: LieAlgebra, emb: SubalgebraEmbedding, x_u) -> HomogeneousBundleInstance:
    """Build the splitting v, n = (h cap n) + m at X_u in h.

    Raises DegenerateRestriction when the Killing form is singular on the
    isotropy algebra (no invariant complement).
    """
    x_u = g.check_vector(x_u)
    v_rows = fiber_isotropy(g, emb, x_u)
    kernel = isotropy_algebra(g, x_u)
    in_h = len(kernel) == len(v_rows)
    if v_rows:
        kv = [mat_vec(g.killing, r) for r in v_rows]
        gram_v = [[sum((a * b for a, b in zip(r2, kvi)), ZERO) for kvi in kv]
                  for r2 in v_rows]
        if rank_exact(gram_v) != len(v_rows):
            raise DegenerateRestriction("Killing form singular on v")
        # h cap n: elements of h Killing-orthogonal to v.
        a_rows = [[sum((x * y for x, y in zip(kvi, hrow)), ZERO)
                   for hrow in emb.h_basis] for kvi in kv]
        fiber_coeffs = nullspace(a_rows)
    else:
        fiber_coeffs = [tuple(r) for r in np.eye(emb.dim_h, dtype=int).tolist()]
    fiber_rows = []
    for c in fiber_coeffs:
        w = [ZERO] * g.dim
        for ci, hrow in zip(c, emb.h_basis):
            if ci:
                for k, val in enumerate(hrow):
                    w[k] += ci * val
        fiber_rows.append(tuple(w))
    return HomogeneousBundleInstance(
        g=g, emb=emb, x_u=x_u, v_basis=v_rows, fiber_basis=mat(fiber_rows),
        m_basis=emb.m_basis, isotropy_in_h=in_h)


def instance_form(inst: HomogeneousBundleInstance) -> InvariantTwoForm:
    """The coupling form over the instance's ordered (fiber, m) basis."""
    if inst.isotropy_in_h:
        return coupling_form(inst.g, inst.v_basis, inst.x_u,
                             n_basis=inst.n_basis)
    # Degenerate case (X_u not fat): the fiber isotropy is only part of
    # the kernel and the form picks up a null direction on m.
    return InvariantTwoForm(inst.g, inst.x_u, inst.v_basis, inst.n_basis,
                            _orbit_gram(inst.g, inst.x_u, inst.n_basis))


def shifted_coupling(g: LieAlgebra, emb: SubalgebraEmbedding, tau, a) -> InvariantTwoForm:
    """Coupling form at the shifted torus vector X_tau + X_a.

    Used with the moment-polytope shift search: a shift keeping the moment
    image off every forbidden wall makes this form nondegenerate, a shift
    landing on a wall produces the matching degenerate form.
    """
    tau = vec(tau)
    a = vec(a)
    if len(tau) != len(a):
        raise ValueError("shift and base point live in the same torus")
    shifted = tuple(t + s for t, s in zip(tau, a))
    x = emb.torus_vector(shifted)
    return instance_form(bundle_instance(g, emb, x))


@dataclass(frozen=True)
class BlockReport:
    """Structure of the form over the splitting n = (h cap n) + m."""

    fiber_dim: int
    horizontal_dim: int
    cross_block_zero: bool
    cross_max_abs: float
    fiber_min_sv: float
    horizontal_min_sv: float
    horizontal_equals_fatness_gram: bool
    fiber_to_horizontal_norm_ratio: float | None


def verify_block_structure(inst: HomogeneousBundleInstance,
                           form: InvariantTwoForm) -> BlockReport:
    """Check the fiber/horizontal block structure of a coupling form:
    zero cross block, nondegenerate fiber block (the orbit form of the
    fiber H/V), and horizontal block equal to the fatness Gram."""
    if form.n_basis != inst.n_basis:
        raise ValueError("form is not expressed over the instance basis")
    f = len(inst.fiber_basis)
    k = form.dim
    gf = form.gram_float()
    cross = gf[:f, f:]
    cross_max = float(np.abs(cross).max()) if cross.size else 0.0
    cross_zero = all(
        form.gram[i][j] == 0 for i in range(f) for j in range(f, k))
    fiber_block = gf[:f, :f]
    horiz_block = gf[f:, f:]
    fiber_sv = (float(np.linalg.svd(fiber_block, compute_uv=False)[-1])
                if f else float("inf"))
    horiz_sv = (float(np.linalg.svd(horiz_block, compute_uv=False)[-1])
                if k > f else float("inf"))
    fat_gram = fatness_gram(inst.emb, inst.x_u)
    horiz_exact = tuple(tuple(form.gram[i][j] for j in range(f, k))
                        for i in range(f, k))
    equals = all(
        horiz_exact[i][j] == form.scale * fat_gram[i][j]
        for i in range(k - f) for j in range(k - f))
    fiber_norm = float(np.linalg.norm(fiber_block))
    horiz_norm = float(np.linalg.norm(horiz_block))
    ratio = (fiber_norm / horiz_norm) if horiz_norm else None
    return BlockReport(
        fiber_dim=f,
        horizontal_dim=k - f,
        cross_block_zero=cross_zero,
        cross_max_abs=cross_max,
        fiber_min_sv=fiber_sv,
        horizontal_min_sv=horiz_sv,
        horizontal_equals_fatness_gram=equals,
        fiber_to_horizontal_norm_ratio=ratio,
    )


def ce_closedness(g: LieAlgebra, form: InvariantTwoForm) -> Fraction:
    """Max residual of d sigma over all basis triples of g, with the form
    extended by zero on v:

        d sigma(X,Y,Z) = -sigma([X,Y],Z) - sigma([Y,Z],X) - sigma([Z,X],Y).

    For the orbit form B(X_u, [., .]) this cancels exactly by the Jacobi
    identity; corrupted normalizations show up as a nonzero residual.
    """
    solver = CoordinateSolver(list(form.v_basis) + list(form.n_basis))
    nv = len(form.v_basis)
    coords = []
    d = g.dim
    for a in range(d):
        c = solver.coords(tuple(Fraction(int(i == a)) for i in range(d)))
        if c is None:
            raise ValueError("v + n does not span g")
        coords.append(c[nv:])
    k = form.dim
    # sig[a][b] = sigma(e_a, e_b) with the zero extension on v.
    sig = [[ZERO] * d for _ in range(d)]
    for a in range(d):
        ca = coords[a]
        row = [sum((ca[i] * form.gram[i][j] for i in range(k) if ca[i]), ZERO)
               for j in range(k)]
        for b in range(a + 1, d):
            cb = coords[b]
            s = sum((row[j] * cb[j] for j in range(k) if cb[j]), ZERO)
            sig[a][b] = s
            sig[b][a] = -s

    def sigma_vec(x: Vec, b: int) -> Fraction:
        return sum((xa * sig[a][b] for a, xa in enumerate(x) if xa), ZERO)

    worst = ZERO
    from .exact import unit_vec
    units = [unit_vec(d, a) for a in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            bij = g.bracket(units[i], units[j])
            for kk in range(j + 1, d):
                r = -sigma_vec(bij, kk)
                r -= sigma_vec(g.bracket(units[j], units[kk]), i)
                r -= sigma_vec(g.bracket(units[kk], units[i]), j)
                if abs(r) > worst:
                    worst = abs(r)
    return worst


def nondegenerate_and_top_power(form: InvariantTwoForm,
                                half_dim: int) -> tuple[float, float]:
    """(min singular value, |Pfaffian|) of the Gram; a nonzero Pfaffian
    certifies that the top power of the form does not vanish pointwise."""
    if form.dim != 2 * half_dim:
        raise OddDimension(
            f"form dimension {form.dim} is not twice {half_dim}")
    if form.dim == 0:
        return float("inf"), 1.0
    gf = form.gram_float()
    min_sv = float(np.linalg.svd(gf, compute_uv=False)[-1])
    d = det(form.gram)
    if d < 0:
        raise ValueError("antisymmetric Gram has negative determinant")
    pf_abs = sqrt(float(d))
    return min_sv, pf_abs


def coupling_nondegenerate_float(g: LieAlgebra, emb: SubalgebraEmbedding,
                                 x_u, tol: float = 1e-9) -> tuple[bool, float]:
    """Fast numeric nondegeneracy verdict of the coupling form at X_u
    (float pipeline end to end, for batch sweeps)."""
    x = np.array([float(frac(t)) for t in x_u])
    c = g.structure_array()
    kf = g.killing_array()
    h_arr = np.array([[float(v) for v in r] for r in emb.h_basis])
    ad = np.einsum("ijk,i->kj", c, x)
    from scipy.linalg import null_space
    a_h = ad @ h_arr.T
    ns = null_space(a_h, rcond=1e-9) if h_arr.size else np.zeros((0, 0))
    v_rows = (h_arr.T @ ns).T if ns.size else np.zeros((0, g.dim))
    if v_rows.size:
        n_rows = null_space(v_rows @ kf, rcond=1e-9).T
    else:
        n_rows = np.eye(g.dim)
    s = np.einsum("ijk,k->ij", c, kf @ x)
    gram = n_rows @ s @ n_rows.T
    if gram.size == 0:
        return True, float("inf")
    sv = np.linalg.svd(gram, compute_uv=False)
    min_sv = float(sv[-1])
    if gram.shape[0] % 2 == 1:
        return False, min_sv
    return bool(sv[0] > 0 and min_sv > tol * sv[0]), min_sv
