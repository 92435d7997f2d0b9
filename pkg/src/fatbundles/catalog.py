"""Instance catalog: named bundle configurations, instance resolution,
and the per-instance runners used by both the CLI and the test suite."""

from __future__ import annotations

import functools
from dataclasses import dataclass

from . import coupling as cp
from . import curvature as cv
from . import duality as du
from . import serialize as sz
from .errors import CriteriaDisagree, FatBundleError
from .exact import vec
from .fatness import certify, sample_rational_vectors
from .liealg import (
    LieAlgebra,
    SubalgebraEmbedding,
    block_torus,
    build_algebra,
    so_block_embedding,
    u_block_embedding,
)
from .rootdata import (
    RootSystem,
    SubSystem,
    build_root_system,
    detect_subsystem,
    find_fat_shift,
    root_system_for,
    subsystem_from_members,
    verify_shift,
)


RUN_KINDS = ("roots", "oracle", "centralizer", "coupling", "pinch",
             "dual", "shift")


@dataclass(frozen=True)
class InstanceSpec:
    """One catalog entry: which bundle, which covector, which checks."""

    id: str
    g_family: str | None = None
    g_params: tuple | None = None
    h_type: str | None = None
    h_params: tuple | None = None
    xu_torus: tuple | None = None
    run: tuple = ("roots", "oracle", "centralizer")
    expect: str | None = None
    seed: int = 0
    tol: float = 1e-9
    samples: int = 0
    pinch: dict | None = None
    shift: dict | None = None
    dual: dict | None = None

    def to_json(self) -> dict:
        out: dict = {"id": self.id, "run": list(self.run), "seed": self.seed,
                     "tol": self.tol}
        if self.g_family:
            out["g"] = {"family": self.g_family, "params": list(self.g_params)}
        if self.h_type:
            out["h"] = {"type": self.h_type, "params": list(self.h_params)}
        if self.xu_torus is not None:
            out["Xu"] = [sz.frac_str(x) for x in self.xu_torus]
        if self.expect is not None:
            out["expect"] = self.expect
        if self.samples:
            out["samples"] = self.samples
        for key, val in (("pinch", self.pinch), ("shift", self.shift),
                         ("dual", self.dual)):
            if val is not None:
                out[key] = val
        return out

    @classmethod
    def from_json(cls, d: dict) -> "InstanceSpec":
        g = d.get("g") or {}
        h = d.get("h") or {}
        xu = d.get("Xu")
        tol = float(d.get("tol", 1e-9))
        if tol <= 0:
            raise ValueError(f"instance {d.get('id')!r}: tol must be positive")
        run = tuple(d.get("run", ("roots", "oracle", "centralizer")))
        unknown = [r for r in run if r not in RUN_KINDS]
        if unknown:
            raise ValueError(
                f"instance {d.get('id')!r}: unknown run kinds {unknown}")
        return cls(
            id=d["id"],
            g_family=g.get("family"),
            g_params=tuple(g.get("params", ())) if g else None,
            h_type=h.get("type"),
            h_params=tuple(h.get("params", ())) if h else None,
            xu_torus=sz.parse_vec(xu) if xu is not None else None,
            run=run,
            expect=d.get("expect"),
            seed=int(d.get("seed", 0)),
            tol=tol,
            samples=int(d.get("samples", 0)),
            pinch=d.get("pinch"),
            shift=d.get("shift"),
            dual=d.get("dual"),
        )


@dataclass
class ResolvedInstance:
    spec: InstanceSpec
    g: LieAlgebra | None = None
    emb: SubalgebraEmbedding | None = None
    rs: RootSystem | None = None
    subsystem: SubSystem | None = None
    x_u: tuple | None = None


@functools.lru_cache(maxsize=None)
def make_pair(g_family: str, g_params: tuple, h_type: str, h_params: tuple
              ) -> tuple[LieAlgebra, SubalgebraEmbedding]:
    """Construct (and cache) an ambient algebra with an embedded h."""
    g = build_algebra(g_family, g_params)
    if h_type == "so":
        emb = so_block_embedding(g, h_params[0])
    elif h_type == "u":
        emb = u_block_embedding(g, h_params[0])
    elif h_type == "torus":
        rows = block_torus(g, h_params[0])
        from .liealg import reductive_split
        emb = reductive_split(g, rows, torus_basis=rows,
                              name=f"t{h_params[0]}<{g.name}")
    else:
        raise FatBundleError(f"unsupported subalgebra type {h_type!r}")
    return g, emb


@functools.lru_cache(maxsize=None)
def make_subsystem(g_family: str, g_params: tuple, h_type: str,
                   h_params: tuple) -> SubSystem:
    g, emb = make_pair(g_family, g_params, h_type, h_params)
    rs = root_system_for(g)
    return detect_subsystem(g, emb, rs)


def resolve(spec: InstanceSpec) -> ResolvedInstance:
    inst = ResolvedInstance(spec=spec)
    if spec.g_family:
        g, emb = make_pair(spec.g_family, tuple(spec.g_params),
                           spec.h_type, tuple(spec.h_params))
        inst.g, inst.emb = g, emb
        wants_roots = "roots" in spec.run or "dual" in spec.run
        torus_rank = len(emb.torus_basis) if emb.torus_basis is not None else 0
        if wants_roots and torus_rank:
            rs = root_system_for(g)
            if rs.rank == torus_rank:
                inst.rs = rs
                inst.subsystem = make_subsystem(
                    spec.g_family, tuple(spec.g_params), spec.h_type,
                    tuple(spec.h_params))
        if spec.xu_torus is not None:
            inst.x_u = emb.torus_vector(spec.xu_torus)
    return inst


def run_instance(spec: InstanceSpec) -> tuple[bool, dict]:
    """Execute one instance; returns (passed, certificate payload).

    Failures are captured in the payload, never raised, so a batch run
    can isolate a broken instance.
    """
    payload: dict = {"id": spec.id, "spec": spec.to_json()}
    try:
        inst = resolve(spec)
        passed = True
        if {"roots", "oracle", "centralizer"} & set(spec.run):
            passed &= _run_certification(spec, inst, payload)
        if "coupling" in spec.run:
            passed &= _run_coupling(spec, inst, payload)
        if "dual" in spec.run:
            passed &= _run_dual(spec, inst, payload)
        if "pinch" in spec.run:
            passed &= _run_pinch(spec, payload)
        if "shift" in spec.run:
            passed &= _run_shift(spec, payload)
        payload["passed"] = bool(passed)
        return bool(passed), payload
    except CriteriaDisagree as exc:
        payload["passed"] = False
        payload["error"] = f"criteria disagree: {exc}"
        if exc.certificate is not None:
            payload["certificate"] = sz.certificate_to_json(exc.certificate)
        return False, payload
    except (FatBundleError, ValueError) as exc:
        payload["passed"] = False
        payload["error"] = f"{type(exc).__name__}: {exc}"
        return False, payload


def _run_certification(spec, inst, payload) -> bool:
    if inst.x_u is None:
        raise FatBundleError(f"{spec.id}: certification needs an Xu")
    cert = certify(inst.g, inst.emb, inst.x_u, subsystem=inst.subsystem,
                   tol=spec.tol, instance=spec.id, seed=spec.seed)
    payload["certificate"] = sz.certificate_to_json(cert)
    ok = cert.agreed
    if spec.expect in ("fat", "not_fat"):
        ok = ok and (cert.fat == (spec.expect == "fat"))
    if spec.samples:
        rank = len(inst.emb.torus_basis)
        n_fat = 0
        for tau in sample_rational_vectors(rank, spec.samples, spec.seed):
            c = certify(inst.g, inst.emb, inst.emb.torus_vector(tau),
                        subsystem=inst.subsystem, tol=spec.tol,
                        instance=spec.id, seed=spec.seed)
            n_fat += c.fat
        payload["batch"] = {"samples": spec.samples, "fat": n_fat,
                            "not_fat": spec.samples - n_fat}
    return ok


def _run_coupling(spec, inst, payload) -> bool:
    bi = cp.bundle_instance(inst.g, inst.emb, inst.x_u)
    form = cp.instance_form(bi)
    rep = cp.verify_block_structure(bi, form)
    residual = cp.ce_closedness(inst.g, form)
    half = form.dim // 2
    info: dict = {
        "form": sz.form_to_json(form),
        "blocks": sz.block_report_to_json(rep),
        "closedness_residual": sz.frac_str(residual),
        "isotropy_in_h": bi.isotropy_in_h,
    }
    ok = rep.cross_block_zero and rep.horizontal_equals_fatness_gram
    ok = ok and residual == 0
    if form.dim % 2 == 0:
        min_sv, pf = cp.nondegenerate_and_top_power(form, half)
        info["min_sv"] = min_sv
        info["pfaffian_abs"] = pf
        if spec.expect == "fat":
            ok = ok and pf > 0
        elif spec.expect == "not_fat":
            ok = ok and min_sv <= spec.tol
    payload["coupling"] = info
    return ok


def _run_dual(spec, inst, payload) -> bool:
    params = spec.dual or {}
    samples = int(params.get("samples", 200))
    g = inst.g
    pair = du.dualize(g, du.standard_involution(g))
    emb_nc, emb_c = du.pair_embeddings(pair, inst.emb.h_basis,
                                       inst.emb.torus_basis)
    rep = du.compare_fat_sets(pair, emb_nc, emb_c, inst.rs, samples,
                              spec.seed, tol=spec.tol)
    payload["dual"] = sz.agreement_to_json(rep)
    return rep.agreement_fraction == 1.0


def _run_pinch(spec, payload) -> bool:
    params = spec.pinch or {}
    n = int(params.get("n", 2))
    eps = float(params.get("epsilon", 0.9 * 3 / (2 * n + 1)))
    sign = params.get("sign", "+")
    frames = int(params.get("frames", 100))
    tensor = cv.random_pinched(n, eps, sign, spec.seed)
    rep = cv.twistor_fatness(tensor, num_frames=frames, seed=spec.seed,
                             tol=spec.tol)
    berger = cv.berger_check(tensor, eps)
    payload["pinch"] = {
        "tensor": {"n": n, "epsilon": eps, "sign": 1 if sign == "+" else -1,
                   "seed": spec.seed,
                   "achieved_epsilon": tensor.achieved_epsilon,
                   "berger_max": tensor.berger_max},
        "berger_passed": berger.passed,
        "report": sz.twistor_report_to_json(rep),
    }
    expect = spec.expect or "fat"
    return berger.passed and rep.verdict == expect


def _run_shift(spec, payload) -> bool:
    params = spec.shift or {}
    rs = build_root_system(params.get("type", "B"), int(params.get("rank", 2)))
    members = [tuple(r) for r in params.get("member_roots", [])]
    sub = subsystem_from_members(rs, members)
    vertices = [sz.parse_vec(v) for v in params["vertices"]]
    shift = find_fat_shift(vertices, sub)
    info: dict = {
        "forbidden": [list(r) for r in sub.forbidden],
        "vertices": [sz.vec_to_json(v) for v in vertices],
    }
    if shift is None:
        info["shift"] = None
        info["verified"] = False
    else:
        from .rootdata import root_eval
        info["shift"] = sz.vec_to_json(shift)
        info["verified"] = verify_shift(vertices, sub, shift)
        info["evaluations"] = {
            ",".join(map(str, root)): [
                sz.frac_str(root_eval(root, tuple(x + s for x, s in
                                                  zip(v, shift))))
                for v in vertices
            ]
            for root in sub.forbidden
        }
    payload["shift_search"] = info
    expect_shift = bool(params.get("expect_shift", True))
    if expect_shift:
        return shift is not None and info["verified"]
    return shift is None


# -- builtin catalogs --------------------------------------------------------

def builtin_names() -> list[str]:
    return ["paper_examples", "triple_equivalence", "duality"]


def builtin_catalog(name: str) -> list[InstanceSpec]:
    if name == "paper_examples":
        return [
            InstanceSpec(
                id="so5_so4_J", g_family="so", g_params=(5,),
                h_type="so", h_params=(4,), xu_torus=vec((1, 1)),
                run=("roots", "oracle", "centralizer"), expect="fat"),
            InstanceSpec(
                id="so41_so4_J", g_family="so", g_params=(4, 1),
                h_type="so", h_params=(4,), xu_torus=vec((1, 1)),
                run=("roots", "oracle", "centralizer"), expect="fat"),
            InstanceSpec(
                id="so5_u2_J_coupling", g_family="so", g_params=(5,),
                h_type="u", h_params=(2,), xu_torus=vec((1, 1)),
                run=("roots", "oracle", "centralizer", "coupling"),
                expect="fat"),
            InstanceSpec(
                id="b2_shift_unit_square", run=("shift",),
                shift={"type": "B", "rank": 2, "member_roots": [],
                       "vertices": [["0", "0"], ["1", "0"], ["0", "1"],
                                    ["1", "1"]],
                       "expect_shift": True}),
            InstanceSpec(
                id="pinched_n2", run=("pinch",), seed=1,
                pinch={"n": 2, "epsilon": 0.54, "sign": "+", "frames": 100},
                expect="fat"),
        ]
    if name == "triple_equivalence":
        pairs = [
            ("so5_so4", (5,), "so", (4,)),
            ("so7_so6", (7,), "so", (6,)),
            ("so5_u2", (5,), "u", (2,)),
            ("so41_so4", (4, 1), "so", (4,)),
            ("so61_so6", (6, 1), "so", (6,)),
        ]
        return [
            InstanceSpec(id=pid, g_family="so", g_params=gp, h_type=ht,
                         h_params=hp, xu_torus=vec([1] * _rank(gp)),
                         run=("roots", "oracle", "centralizer"),
                         expect="fat", samples=200)
            for pid, gp, ht, hp in pairs
        ]
    if name == "duality":
        return [
            InstanceSpec(id=f"dual_so{2 * n}1", g_family="so",
                         g_params=(2 * n, 1), h_type="so", h_params=(2 * n,),
                         run=("dual",), dual={"samples": 200}, seed=n)
            for n in (2, 3)
        ]
    raise FatBundleError(f"unknown builtin catalog {name!r}")


def _rank(g_params: tuple) -> int:
    n = g_params[0] if len(g_params) == 1 else sum(g_params)
    return n // 2
