"""Pinched-curvature fatness for orthonormal frame bundles.

Algebraic curvature tensors on a 2n-dimensional inner-product space, a
constructive generator of epsilon-pinched tensors, the Berger bound on
mixed entries, and the twistor two-form Tr(R(., .) J_u) whose
nondegeneracy certifies fat covectors of the frame bundle when the
pinching constant stays below 3/(2n+1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePlane, ScaleFailure

SYMMETRY_TOL = 1e-12


def standard_complex_structure(n: int) -> np.ndarray:
    """Block-diagonal J with 2x2 blocks [[0, -1], [1, 0]]."""
    j = np.zeros((2 * n, 2 * n))
    for i in range(n):
        j[2 * i, 2 * i + 1] = -1.0
        j[2 * i + 1, 2 * i] = 1.0
    return j


def symplectic_gram(n: int) -> np.ndarray:
    """Gram of the form (x, y) -> g(Jx, y), i.e. J transposed."""
    return standard_complex_structure(n).T


@dataclass(frozen=True)
class CurvatureTensor:
    """R[i, j, k, l] = g(R(e_i, e_j) e_k, e_l) in an orthonormal basis,
    with the declared pinching bracket of the generator."""

    n: int
    R: np.ndarray = field(repr=False)
    epsilon: float = 0.0
    sign: int = 1
    seed: int | None = None
    achieved_epsilon: float | None = None
    berger_max: float | None = None

    def __post_init__(self):
        self.R.setflags(write=False)

    @property
    def space_dim(self) -> int:
        return 2 * self.n

    def validate(self, tol: float = SYMMETRY_TOL) -> None:
        r = self.R
        residuals = (
            np.abs(r + r.transpose(1, 0, 2, 3)).max(),
            np.abs(r + r.transpose(0, 1, 3, 2)).max(),
            np.abs(r - r.transpose(2, 3, 0, 1)).max(),
            np.abs(r + r.transpose(1, 2, 0, 3)
                   + r.transpose(2, 0, 1, 3)).max(),
        )
        for residual in residuals:
            if residual > tol:
                raise ValueError(f"curvature symmetry residual {residual}")


def constant_curvature(n: int, kappa: float) -> CurvatureTensor:
    """R(X, Y)Z = kappa (g(Y, Z) X - g(X, Z) Y): every sectional
    curvature equals kappa."""
    N = 2 * n
    eye = np.eye(N)
    r = kappa * (np.einsum("jk,il->ijkl", eye, eye)
                 - np.einsum("ik,jl->ijkl", eye, eye))
    return CurvatureTensor(n=n, R=r, epsilon=0.0,
                           sign=1 if kappa >= 0 else -1)


def algebraic_projection(a: np.ndarray) -> np.ndarray:
    """Project a 4-tensor onto the space of algebraic curvature tensors:
    antisymmetrize both index pairs, symmetrize the pair swap, then remove
    the totally antisymmetric part so the first Bianchi identity holds."""
    a = 0.5 * (a - a.transpose(1, 0, 2, 3))
    a = 0.5 * (a - a.transpose(0, 1, 3, 2))
    a = 0.5 * (a + a.transpose(2, 3, 0, 1))
    cyc = a + a.transpose(1, 2, 0, 3) + a.transpose(2, 0, 1, 3)
    return a - cyc / 3.0


def sectional_curvature(r: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """K(x, y) = R(x, y, y, x) / (|x|^2 |y|^2 - g(x, y)^2)."""
    denom = float(x @ x) * float(y @ y) - float(x @ y) ** 2
    if denom < 1e-12:
        raise DegeneratePlane("sampled plane is numerically degenerate")
    num = float(np.einsum("ijkl,i,j,k,l->", r, x, y, y, x))
    return num / denom


def _mixed_mask(N: int) -> np.ndarray:
    key = N
    if key not in _mixed_mask_cache:
        mask = np.zeros((N,) * 4, dtype=bool)
        for idx in itertools.product(range(N), repeat=4):
            if len(set(idx)) >= 3:
                mask[idx] = True
        mask.setflags(write=False)
        _mixed_mask_cache[key] = mask
    return _mixed_mask_cache[key]


_mixed_mask_cache: dict[int, np.ndarray] = {}


def pinching_estimate(r, num_samples: int = 200, seed: int = 0
                      ) -> tuple[float, float, float]:
    """(K_min_abs, K_max_abs, eps_est) over all coordinate planes plus
    random planes; eps_est = 1 - K_min_abs / K_max_abs, i.e. the pinching
    after normalizing the largest absolute curvature to 1."""
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    arr = r.R if isinstance(r, CurvatureTensor) else np.asarray(r)
    N = arr.shape[0]
    rng = np.random.default_rng(seed)
    values = []
    for i in range(N):
        for j in range(i + 1, N):
            x = np.zeros(N)
            y = np.zeros(N)
            x[i] = 1.0
            y[j] = 1.0
            values.append(abs(sectional_curvature(arr, x, y)))
    drawn = 0
    while drawn < num_samples:
        x = rng.standard_normal(N)
        y = rng.standard_normal(N)
        try:
            values.append(abs(sectional_curvature(arr, x, y)))
        except DegeneratePlane:
            continue
        drawn += 1
    kmin = float(min(values))
    kmax = float(max(values))
    eps = 1.0 - kmin / kmax if kmax > 0 else 1.0
    return kmin, kmax, eps


def random_pinched(n: int, epsilon: float, sign, seed: int) -> CurvatureTensor:
    """A random algebraic curvature tensor with |K| in [1 - epsilon, 1].

    A constant-curvature base at 1 - epsilon/2 is perturbed by a random
    algebraic curvature tensor whose Frobenius norm is capped at
    0.45 * epsilon.  The cap bounds every frame contraction, so both the
    pinching bracket and the Berger mixed-entry bound 2/3 epsilon hold on
    the whole plane Grassmannian, not only on sampled planes; the sampled
    estimate is still verified post hoc and the perturbation is halved on
    failure (ScaleFailure after 50 halvings).
    """
    sign = -1 if sign in (-1, "-", "neg") else 1
    if not 0 <= epsilon < 1:
        raise ValueError("epsilon must be in [0, 1)")
    N = 2 * n
    kappa0 = 1.0 - epsilon / 2.0
    base = constant_curvature(n, kappa0).R
    rng = np.random.default_rng(seed)
    pert = algebraic_projection(rng.standard_normal((N,) * 4))
    norm = float(np.linalg.norm(pert))
    if norm > 0:
        pert = pert / norm
    mask = _mixed_mask(N)
    bound = 2.0 / 3.0 * epsilon
    scale = 0.45 * epsilon
    for _ in range(50):
        # Any sectional value of the unit-Frobenius perturbation lies in
        # [-1, 1] (Cauchy-Schwarz against the plane tensor), so dividing by
        # kappa0 + scale pins |K| <= 1 on the whole Grassmannian.
        cand = (base + scale * pert) / (kappa0 + scale)
        kmin, kmax, eps_est = pinching_estimate(cand, 200, seed=seed + 1)
        mixed = float(np.abs(cand[mask]).max()) if mask.any() else 0.0
        global_kmin = (kappa0 - scale) / (kappa0 + scale)
        if eps_est <= epsilon + 1e-12 and mixed <= bound + 1e-12 \
                and kmax <= 1.0 + 1e-12 and global_kmin >= 1.0 - epsilon - 1e-12:
            return CurvatureTensor(
                n=n, R=sign * cand, epsilon=float(epsilon), sign=sign,
                seed=seed, achieved_epsilon=float(eps_est),
                berger_max=mixed)
        scale /= 2.0
    raise ScaleFailure(
        f"could not fit the perturbation into the bracket for epsilon={epsilon}")


@dataclass(frozen=True)
class BergerReport:
    passed: bool
    bound: float
    max_mixed_abs: float
    worst_index: tuple[int, int, int, int] | None

    @property
    def violation(self) -> float:
        return max(0.0, self.max_mixed_abs - self.bound)


def berger_check(tensor, epsilon: float) -> BergerReport:
    """Check |R_ijkl| <= 2/3 epsilon for every quadruple with at least
    three distinct indices (the mixed entries of a pinched metric)."""
    arr = tensor.R if isinstance(tensor, CurvatureTensor) else np.asarray(tensor)
    N = arr.shape[0]
    mask = _mixed_mask(N)
    bound = 2.0 / 3.0 * epsilon
    if not mask.any():
        return BergerReport(True, bound, 0.0, None)
    vals = np.abs(arr) * mask
    worst_flat = int(vals.argmax())
    worst = tuple(int(t) for t in np.unravel_index(worst_flat, arr.shape))
    max_mixed = float(vals.max())
    return BergerReport(max_mixed <= bound + 1e-12, bound, max_mixed, worst)


@dataclass(frozen=True)
class Frame:
    """An orthonormal frame u; its columns are automatically adapted to
    the conjugated complex structure J_u = u J u^T, since u J e_{2i}
    equals the next column."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = self.matrix
        n2 = u.shape[0]
        if np.abs(u @ u.T - np.eye(n2)).max() > 1e-10:
            raise ValueError("frame is not orthonormal")
        self.matrix.setflags(write=False)

    def j_u(self) -> np.ndarray:
        j = standard_complex_structure(self.matrix.shape[0] // 2)
        return self.matrix @ j @ self.matrix.T


def identity_frame(n: int) -> Frame:
    return Frame(np.eye(2 * n))


def random_frames(n: int, count: int, seed: int) -> list[Frame]:
    """Haar-distributed orthonormal frames (QR with sign fixing)."""
    rng = np.random.default_rng(seed)
    out = []
    N = 2 * n
    for _ in range(count):
        q, r = np.linalg.qr(rng.standard_normal((N, N)))
        q = q * np.sign(np.diag(r))
        out.append(Frame(q))
    return out


def twistor_form(tensor, frame: Frame) -> np.ndarray:
    """Gram T_ab = Tr(R(u_a, u_b) J_u) over the frame columns, summed
    over the full adapted basis; antisymmetric."""
    arr = tensor.R if isinstance(tensor, CurvatureTensor) else np.asarray(tensor)
    u = frame.matrix
    ju = frame.j_u()
    return np.einsum("ijkl,ia,jb,kl->ab", arr, u, u, ju)


@dataclass(frozen=True)
class FrameMargin:
    diag_margin: float
    min_singular_value: float


@dataclass(frozen=True)
class TwistorReport:
    verdict: str
    bound: float
    min_diag_margin: float
    min_singular_value: float
    frames: tuple[FrameMargin, ...]
    seed: int

    @property
    def fat(self) -> bool:
        return self.verdict == "fat"


def twistor_fatness(tensor: CurvatureTensor, num_frames: int = 100,
                    seed: int = 0, tol: float = 1e-9) -> TwistorReport:
    """Sample frames and test the twistor form on each.

    A frame passes when every per-index diagonal margin
    |sum_j g(R(X_i, J_u X_i) J_u X_j, X_j)| (the n-term half trace, which
    the pinching bound controls) reaches 1 - (2n+1) epsilon / 3 and the
    full form is numerically nondegenerate.  The verdict is fat only if
    all frames pass.
    """
    n = tensor.n
    bound = 1.0 - (2 * n + 1) * tensor.epsilon / 3.0
    frames = random_frames(n, num_frames, seed)
    margins = []
    all_pass = True
    for fr in frames:
        t = twistor_form(tensor, fr)
        diag = min(abs(t[2 * i, 2 * i + 1]) / 2.0 for i in range(n))
        sv = np.linalg.svd(t, compute_uv=False)
        min_sv = float(sv[-1])
        margins.append(FrameMargin(diag_margin=float(diag),
                                   min_singular_value=min_sv))
        nondeg = sv[0] > 0 and min_sv > tol * float(sv[0])
        if diag < bound - 1e-12 or not nondeg:
            all_pass = False
    return TwistorReport(
        verdict="fat" if all_pass else "not_fat",
        bound=bound,
        min_diag_margin=min(m.diag_margin for m in margins),
        min_singular_value=min(m.min_singular_value for m in margins),
        frames=tuple(margins),
        seed=seed,
    )
