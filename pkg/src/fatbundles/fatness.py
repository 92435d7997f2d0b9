"""Curvature-level fatness oracle and the triple cross-check.

For the canonical invariant connection on H -> G -> G/H the curvature at
the identity is -1/2 [X, Y]_h on the reductive complement m, so a covector
u = B(X_u, .) is fat exactly when the antisymmetric Gram
G_ij = B(X_u, [m_i, m_j]) is nondegenerate.  Three independent tests are
run and must agree: the exact forbidden-wall evaluation (root criterion),
a numeric smallest-singular-value test of the Gram (oracle), and the exact
check that ker(ad_{X_u}) meets m trivially (centralizer criterion).
Disagreement raises, it is never voted away.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CriteriaDisagree, DimensionMismatch
from .exact import (
    ZERO,
    Mat,
    Vec,
    clear_denominators,
    mat,
    mat_vec,
    nullspace,
    rank_int,
    vec,
)
from .liealg import LieAlgebra, SubalgebraEmbedding
from .rootdata import SubSystem, fat_by_roots
from .verdicts import FAT, NOT_APPLICABLE, NOT_FAT, Verdict


def canonical_curvature(emb: SubalgebraEmbedding, x, y) -> Vec:
    """Curvature of the canonical connection at the identity coset:
    the h-component of -1/2 [x, y], for x, y in m."""
    g = emb.ambient
    x = g.check_vector(x)
    y = g.check_vector(y)
    for v in (x, y):
        if not emb.in_m(v):
            raise DimensionMismatch("curvature arguments must lie in m")
    xh, _ = emb.project(g.bracket(x, y))
    return tuple(-c / 2 for c in xh)


def _pair_functionals(emb: SubalgebraEmbedding) -> list[list[Vec]]:
    """Cached vectors u_ij = K [m_i, m_j], so that the fatness Gram is
    G_ij(X) = X . u_ij."""
    key = "pair_functionals"
    if key not in emb._cache:
        g = emb.ambient
        k = emb.dim_m
        table: list[list[Vec]] = [[None] * k for _ in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                w = g.bracket(emb.m_basis[i], emb.m_basis[j])
                table[i][j] = mat_vec(g.killing, w)
        emb._cache[key] = table
    return emb._cache[key]


def fatness_gram(emb: SubalgebraEmbedding, x_u) -> Mat:
    """Antisymmetric Gram G_ij = B(X_u, [m_i, m_j]) over the m-basis.

    X_u must lie in h; then B(X_u, [X, Y]_h) = B(X_u, [X, Y]) by
    Killing-orthogonality of h and m, so this Gram carries the full
    curvature pairing.
    """
    g = emb.ambient
    x_u = g.check_vector(x_u)
    if emb.h_coords(x_u) is None:
        raise DimensionMismatch("X_u must lie in h")
    table = _pair_functionals(emb)
    k = emb.dim_m
    rows = [[ZERO] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            s = sum((a * b for a, b in zip(x_u, table[i][j]) if a), ZERO)
            rows[i][j] = s
            rows[j][i] = -s
    return mat(rows)


def fatness_gram_float(emb: SubalgebraEmbedding, x_float: np.ndarray) -> np.ndarray:
    """Float Gram for numeric sweeps (equivariance checks, batch runs)."""
    g = emb.ambient
    c = g.structure_array()
    kf = g.killing_array()
    m_arr = np.array([[float(v) for v in row] for row in emb.m_basis])
    kx = kf @ np.asarray(x_float, dtype=float)
    s = np.einsum("ijk,k->ij", c, kx)
    return m_arr @ s @ m_arr.T


def _gram_svd(gram_float: np.ndarray) -> tuple[float, float, np.ndarray]:
    if gram_float.size == 0:
        return float("inf"), float("inf"), np.zeros(0)
    u, s, vt = np.linalg.svd(gram_float)
    return float(s[-1]), float(s[0]), vt[-1]


def fat_by_oracle(emb: SubalgebraEmbedding, x_u, tol: float = 1e-9) -> Verdict:
    """Numeric nondegeneracy test of the fatness Gram.

    Fat iff the smallest singular value exceeds tol times the largest.
    Odd-dimensional m is unconditionally not fat (an antisymmetric matrix
    of odd size is singular); the verdict then still carries a numeric
    null vector.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    gram = fatness_gram(emb, x_u)
    gf = np.array([[float(x) for x in row] for row in gram])
    smin, smax, null = _gram_svd(gf)
    if emb.dim_m == 0:
        return Verdict(FAT, min_singular_value=smin, max_singular_value=smax,
                       note="trivial horizontal space")
    if emb.dim_m % 2 == 1:
        return Verdict(NOT_FAT, null_vector=tuple(null),
                       min_singular_value=smin, max_singular_value=smax,
                       note="odd dimension")
    if smax > 0 and smin > tol * smax:
        return Verdict(FAT, min_singular_value=smin, max_singular_value=smax)
    return Verdict(NOT_FAT, null_vector=tuple(null),
                   min_singular_value=smin, max_singular_value=smax)


def isotropy_algebra(g: LieAlgebra, x_u) -> tuple[Vec, ...]:
    """Basis of ker(ad_{X_u}) = {X : [X, X_u] = 0} in g-coordinates."""
    x_u = g.check_vector(x_u)
    ad_rows = g.ad_matrix(x_u)
    if g.exact:
        return tuple(nullspace(ad_rows))
    arr = np.array([[float(x) for x in row] for row in ad_rows])
    from scipy.linalg import null_space
    return mat(null_space(arr, rcond=1e-9).T)


def fat_by_centralizer(emb: SubalgebraEmbedding, x_u) -> Verdict:
    """Fat iff ker(ad_{X_u}) intersects m trivially, i.e. the isotropy
    algebra of the covector stays inside h."""
    g = emb.ambient
    x_u = g.check_vector(x_u)
    cols = [g.bracket(x_u, mj) for mj in emb.m_basis]
    if not cols:
        return Verdict(FAT, note="trivial horizontal space")
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(g.dim)]
    if g.exact:
        deficient = rank_int(clear_denominators(rows)) < emb.dim_m
    else:
        arr = np.array([[float(x) for x in row] for row in rows])
        sv = np.linalg.svd(arr, compute_uv=False)
        deficient = sv[emb.dim_m - 1] <= 1e-9 * max(sv[0], 1.0)
    if not deficient:
        return Verdict(FAT)
    if g.exact:
        kern = nullspace(rows)
        coeffs = kern[0]
        witness = [ZERO] * g.dim
        for c, row in zip(coeffs, emb.m_basis):
            if c:
                for k, v in enumerate(row):
                    witness[k] += c * v
        return Verdict(NOT_FAT, witness_vector=tuple(witness))
    return Verdict(NOT_FAT, note="numeric rank deficiency")


@dataclass(frozen=True)
class FatnessCertificate:
    """The triple verdict with witnesses and numeric margins."""

    instance: str
    x_u: Vec
    x_u_torus: Vec | None
    verdict_roots: str
    verdict_oracle: str
    verdict_centralizer: str
    min_singular_value: float | None
    max_singular_value: float | None
    witness_root: tuple | None
    null_vector: tuple | None
    centralizer_witness: Vec | None
    agreed: bool
    seed: int | None = None
    oracle_note: str = ""

    @property
    def fat(self) -> bool:
        if not self.agreed:
            raise CriteriaDisagree("certificate did not reach consensus", self)
        for v in (self.verdict_roots, self.verdict_oracle,
                  self.verdict_centralizer):
            if v != NOT_APPLICABLE:
                return v == FAT
        raise CriteriaDisagree("no applicable criterion", self)


def certify(g: LieAlgebra, emb: SubalgebraEmbedding, x_u, *,
            subsystem: SubSystem | None = None, tol: float = 1e-9,
            instance: str = "", seed: int | None = None) -> FatnessCertificate:
    """Run every applicable criterion on X_u and demand consensus.

    The root criterion participates only when a sub-root-system is given
    and X_u lies in the stored torus.  Disagreement raises
    CriteriaDisagree with the full certificate (all witnesses) attached.
    """
    x_u = g.check_vector(x_u)
    tau = emb.torus_coords(x_u) if emb.torus_basis is not None else None
    if subsystem is not None and tau is not None:
        roots_v = fat_by_roots(tau, subsystem)
    else:
        roots_v = Verdict(NOT_APPLICABLE)
    oracle_v = fat_by_oracle(emb, x_u, tol)
    central_v = fat_by_centralizer(emb, x_u)
    statuses = {v.status for v in (roots_v, oracle_v, central_v)
                if v.status != NOT_APPLICABLE}
    agreed = len(statuses) == 1
    cert = FatnessCertificate(
        instance=instance,
        x_u=x_u,
        x_u_torus=tau,
        verdict_roots=roots_v.status,
        verdict_oracle=oracle_v.status,
        verdict_centralizer=central_v.status,
        min_singular_value=oracle_v.min_singular_value,
        max_singular_value=oracle_v.max_singular_value,
        witness_root=roots_v.witness_root,
        null_vector=oracle_v.null_vector,
        centralizer_witness=central_v.witness_vector,
        agreed=agreed,
        seed=seed,
        oracle_note=oracle_v.note,
    )
    if not agreed:
        raise CriteriaDisagree(
            f"{instance or g.name}: criteria disagree on X_u={x_u}", cert)
    return cert


def certify_torus(g: LieAlgebra, emb: SubalgebraEmbedding, tau, *,
                  subsystem: SubSystem | None = None, tol: float = 1e-9,
                  instance: str = "", seed: int | None = None) -> FatnessCertificate:
    """certify() for a vector given in torus coordinates."""
    return certify(g, emb, emb.torus_vector(tau), subsystem=subsystem,
                   tol=tol, instance=instance, seed=seed)


def sample_rational_vectors(rank: int, count: int, seed: int) -> list[Vec]:
    """Deterministic exact-rational samples: numerators in [-9, 9],
    denominators in {1, 2, 3}."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        out.append(vec(Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))
                       for _ in range(rank)))
    return out
