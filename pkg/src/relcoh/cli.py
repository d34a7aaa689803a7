"""Command line interface: run scenario files and print verification reports.

    relcoh run FILE [--bound N] [--mode alternating|full] [--report PATH] [--json]
    relcoh list-builtins
    relcoh verify-all

Exit status is 0 when every verdict passes, 1 when some verification fails
and 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import cech, cylinder, godement, oracle
from .errors import ParseError, RelcohError, ValidationError
from .finspace import Sheaf, kernel_sheaf, restriction_chain_map
from .homalg import ChainMap, co_mapping_cone, les_from_ses, transpose_duality_check
from .ratlin import Matrix, kernel
from .report import Check, VerificationReport, _plain
from .scenario import Scenario, builtin_names, builtin_path, load_path


@dataclass
class OpResult:
    op: str
    label: str
    dims: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    error: str | None = None
    seconds: float | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def as_dict(self, timing: bool = False) -> dict:
        d = {"op": self.op, "label": self.label, "passed": self.passed,
             "dims": {k: _plain(v) for k, v in self.dims.items()},
             "checks": [c.as_dict() for c in self.checks]}
        if self.error is not None:
            d["error"] = self.error
        if timing and self.seconds is not None:
            d["seconds"] = round(self.seconds, 4)
        return d


@dataclass
class Report:
    scenario: str
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def as_dict(self, timing: bool = False) -> dict:
        return {"scenario": self.scenario, "passed": self.passed,
                "operations": [r.as_dict(timing) for r in self.results]}

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.as_dict(timing), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_table(self, timing: bool = False) -> str:
        lines = [f"scenario {self.scenario}: {'PASS' if self.passed else 'FAIL'}"]
        for r in self.results:
            head = f"  [{'PASS' if r.passed else 'FAIL'}] {r.op}: {r.label}"
            if timing and r.seconds is not None:
                head += f"  ({r.seconds:.3f}s)"
            lines.append(head)
            for k, v in r.dims.items():
                lines.append(f"      {k}: {_fmt(v)}")
            for c in r.checks:
                mark = "ok  " if c.passed else "FAIL"
                lines.append(f"      {mark} {c.name}")
                if not c.passed and c.witness is not None:
                    lines.append(f"           witness: {json.dumps(_plain(c.witness), sort_keys=True)}")
            if r.error:
                lines.append(f"      error: {r.error}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(_plain(v))


# --- operations ----------------------------------------------------------------

class Ctx:
    def __init__(self, sc: Scenario, bound: int | None, mode: str):
        self.sc = sc
        self.bound = bound if bound is not None else sc.bound
        self.mode = mode
        self._godement = {}

    def space_for(self, name: str):
        sp_name = self.sc.space_of.get(name)
        if sp_name is None:
            raise ParseError(f"cannot tell which space {name!r} lives on")
        return self.sc.spaces[sp_name]

    def sheaf(self, op: dict, key: str = "sheaf"):
        name = _field(op, key)
        return name, self.sc.lookup("sheaves", name)

    def complex(self, op: dict):
        """A complex named by 'complex', or the canonical resolution of 'sheaf'."""
        if "complex" in op:
            name = op["complex"]
            return name, self.sc.lookup("complexes", name)
        name, s = self.sheaf(op)
        key = (name, self.bound)
        if key not in self._godement:
            self._godement[key] = godement.godement_resolve(s, self.bound).as_complex()
        return name, self._godement[key]

    def open(self, space, op: dict, key: str, default=None):
        return self.sc.open_set(space, op.get(key, default))


def _field(op: dict, key: str):
    if key not in op:
        raise ParseError(f"operation {op.get('op')!r} needs field {key!r}")
    return op[key]


def _merge(res: OpResult, rep: VerificationReport, prefix: str = "") -> None:
    for c in rep.checks:
        res.checks.append(Check(prefix + c.name, c.passed, c.witness))
    for k, v in rep.dims.items():
        res.dims[prefix + k] = v


def _op_cohomology(ctx: Ctx, op: dict, res: OpResult):
    name, s = ctx.sheaf(op)
    sp = s.space
    sub = ctx.open(sp, op, "sub")
    u = ctx.open(sp, op, "within", "whole")
    rc = godement.rel_cohomology(s, sub, ctx.bound, u=u)
    res.dims["H"] = rc.dims
    more = godement.rel_cohomology(s, sub, len(rc.dims) + 1, u=u)
    res.checks.append(Check("one more resolution step changes nothing", more.dims[:len(rc.dims)] == rc.dims))
    res.checks.append(Check("degree zero is the relative sections", rc.dims[0] == s.sections(u, sub).dim))
    return rc.dims


def _op_oracle(ctx: Ctx, op: dict, res: OpResult):
    sp = ctx.sc.lookup("spaces", _field(op, "space"))
    sub = ctx.open(sp, op, "sub")
    rc = godement.rel_cohomology(Sheaf.constant(sp), sub, ctx.bound)
    ref = oracle.space_betti(sp, sub, len(rc.dims) - 1)
    res.dims["sheaf"] = rc.dims
    res.dims["order complex"] = ref
    res.checks.append(Check("sheaf cohomology matches the order complex", rc.dims == ref,
                            None if rc.dims == ref else {"sheaf": rc.dims, "order complex": ref}))
    return rc.dims


def _op_flabby(ctx: Ctx, op: dict, res: OpResult):
    name, s = ctx.sheaf(op)
    v = godement.flabby_witness(s)
    res.dims["flabby"] = v is None
    if v is not None:
        res.dims["obstruction"] = s.space.names(v)
    res.dims["canonical first term flabby"] = godement.flabby_check(godement.product_sheaf(s)[0])
    res.checks.append(Check("first canonical term is flabby", res.dims["canonical first term flabby"]))
    return v is None


def _op_resolution(ctx: Ctx, op: dict, res: OpResult):
    name, s = ctx.sheaf(op)
    r = godement.godement_resolve(s, ctx.bound)
    bad = r.exactness_audit()
    res.dims["term dims"] = [list(t.dims) for t in r.terms]
    res.checks.append(Check("augmented resolution is exact", not bad, bad or None))
    res.checks.append(Check("every term is flabby", all(godement.flabby_check(t) for t in r.terms)))
    res.checks.append(Check("resolution stops within the bound", r.complete))
    return [sum(t.dims) for t in r.terms]


def _op_hypercohomology(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    sub = ctx.open(k.space, op, "sub")
    h = godement.hypercohomology(k, sub, ctx.bound)
    res.dims["H"] = h.dims
    degs = range(len(h.dims))
    if all(godement.flabby_check(t) for t in k.terms):
        res.checks.append(Check("flabby complex: sections embed quasi-isomorphically in the total complex",
                                all(_iso(h.phi_on(q)) for q in degs)))
    psi_ok = all(_iso(h.psi_on(q)) for q in degs)
    res.checks.append(Check("resolution of the kernel sheaf computes the same groups", psi_ok))
    if psi_ok:
        res.dims["chi is the identity"] = all(h.chi(q) == Matrix.identity(h.dims[q]) for q in degs)
    return h.dims


def _iso(m: Matrix) -> bool:
    return m.rows == m.cols and m.rank() == m.rows


def _op_embedding(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    sub = ctx.open(k.space, op, "sub")
    e = godement.open_embedding_complex(k, sub)
    les = les_from_ses(e.beta_star, e.alpha_star, labels=("K(X')[-1]", "K(i)", "K(X)"))
    res.checks.append(Check("sequence of the embedding is exact", les.les.is_exact, les.les.witness()))
    dims = e.complex.betti(0, k.top)
    res.dims["H(K(i))"] = dims
    return dims


def _op_flabby_pair(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    rep = godement.verify_casflasque(k, ctx.open(k.space, op, "sub"))
    _merge(res, rep)
    return rep.dims.get("K(i)")


def _op_comparison(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    rep = godement.verify_theorem_th(k, ctx.open(k.space, op, "sub"), ctx.bound)
    _merge(res, rep)
    return rep.dims.get("H(K(i))")


def _op_relative_properties(ctx: Ctx, op: dict, res: OpResult):
    name, s = ctx.sheaf(op)
    sp = s.space
    ses = None
    if "ses" in op:
        m1, m2 = (ctx.sc.lookup("morphisms", m) for m in op["ses"])
        ses = (m1, m2)
    rep = godement.verify_propfl(s, ctx.open(sp, op, "sub"), ctx.open(sp, op, "subsub"), ses, ctx.bound)
    _merge(res, rep)
    return rep.dims.get("H(X,X';S)")


def _cover(ctx: Ctx, op: dict):
    name = _field(op, "cover")
    return ctx.sc.lookup("covers", name)


def _op_cech(ctx: Ctx, op: dict, res: OpResult):
    pair = _cover(ctx, op)
    name, s = ctx.sheaf(op)
    mode = op.get("mode", ctx.mode)
    d = cech.cech_complex(pair, s, mode)
    dims = d.cohomology_dims()
    res.dims["H"] = dims
    if pair.size <= 3:
        other = cech.cech_complex(pair, s, cech.FULL if mode == cech.ALTERNATING else cech.ALTERNATING)
        n = min(len(dims), len(other.cohomology_dims()))
        res.checks.append(Check("alternating and ordered cochains agree",
                                dims[:n] == other.cohomology_dims()[:n]))
    for q in range(d.top):
        if not (d.total.d(q + 1) @ d.total.d(q)).is_zero():
            res.checks.append(Check(f"coboundary squares to zero (degree {q})", False))
    return dims


def _op_total(ctx: Ctx, op: dict, res: OpResult):
    pair = _cover(ctx, op)
    name, k = ctx.complex(op)
    mode = op.get("mode", ctx.mode)
    d = cech.total_complex(pair, k, mode)
    dims = d.cohomology_dims()
    res.dims["H"] = dims
    s0 = kernel_sheaf(k.d(0)) if k.top >= 1 else k.terms[0]
    res.checks.append(Check("degree zero is the relative sections of the kernel sheaf",
                            dims[0] == s0.sections(pair.base, pair.sub_space).dim))
    if pair.size <= 3:
        other = cech.total_complex(pair, k, cech.FULL if mode == cech.ALTERNATING else cech.ALTERNATING)
        od = other.cohomology_dims()
        n = min(len(dims), len(od))
        res.checks.append(Check("alternating and ordered cochains agree", dims[:n] == od[:n]))
    if pair.size == 2 and not pair.sub_index and mode == cech.ALTERNATING:
        bad = cech.special_case_two_check(d)
        res.checks.append(Check("two-set differential matches the explicit formula", not bad, bad or None))
    cmp = cech.cover_comparison(d)
    res.dims["phi invertible"] = cmp["phi is an isomorphism on cohomology"]
    res.dims["psi invertible"] = cmp["psi is an isomorphism on cohomology"]
    res.dims["sections"] = cmp.dims["sections"]
    return dims


def _op_relative(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    rep = cech.relative_sections_report(k, ctx.open(k.space, op, "sub"))
    _merge(res, rep)
    return rep.dims.get("H_D(X,X')")


def _op_excision(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    sp = k.space
    rep = cech.excision(k, ctx.sc.point_set(sp, op.get("closed", [])), ctx.open(sp, op, "open", "whole"))
    _merge(res, rep)
    return rep.dims.get("H_D(X, X-S)")


def _op_triple_sequence(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    sp = k.space
    tr = cech.triple_les(k, ctx.open(sp, op, "sub"), ctx.open(sp, op, "subsub"))
    res.checks.append(Check("triple sequence exact", tr.les.is_exact, tr.les.witness()))
    res.checks.append(Check("connecting map follows the explicit formula", tr.formula_agrees))
    res.dims["nodes"] = [n.dim for n in tr.les.nodes]
    return res.dims["nodes"]


def _op_two_set_uniqueness(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    sp = k.space
    rep = cech.verify_propuni(k, ctx.open(sp, op, "v1"), ctx.open(sp, op, "sub"))
    _merge(res, rep)
    return rep.dims.get("V")


def _op_leray(ctx: Ctx, op: dict, res: OpResult):
    pair = _cover(ctx, op)
    name, s = ctx.sheaf(op)
    rep = cech.verify_leray(pair, s, ctx.bound, op.get("mode", ctx.mode))
    _merge(res, rep)
    return rep.dims.get("Čech")


def _basis_vectors(m: Matrix):
    return kernel(m).vectors()


def _op_partition_of_unity(ctx: Ctx, op: dict, res: OpResult):
    pair = _cover(ctx, op)
    pou = ctx.sc.partitions[op["cover"]]
    name, s = ctx.sheaf(op)
    c0 = godement.product_sheaf(s)[0]
    d = cech.cech_complex(pair.absolute(), c0)
    pou_abs = cech.DiscretePartitionOfUnity(pair.absolute(), pou.assign)
    count = 0
    for q in range(1, d.top + 1):
        for v in _basis_vectors(d.total.d(q)):
            cech.pou_coboundary(d, pou_abs, q, v)
            count += 1
    res.dims["contracted cocycles"] = count
    res.checks.append(Check("every cocycle of the product sheaf is contracted", True))
    if pair.size == 2:
        k = godement.godement_resolve(s, ctx.bound).as_complex()
        t = cech.total_complex(pair.absolute(), k)
        phi = cech.phi_cover(t)
        ok = True
        for q in range(t.top + 1):
            h = t.total.cohomology(q)
            if not h.dim:
                continue
            glued = [cech.propinvtwo_inverse(t, pou_abs, q, v) for v in h.reps.columns()]
            m = h.projector @ phi[q] @ Matrix.from_columns(glued, phi.source.dim(q))
            ok = ok and m == Matrix.identity(h.dim)
        res.checks.append(Check("gluing then restricting is the identity on cohomology", ok))
        nb = 0
        for q in range(1, t.top + 1):
            for j in range(t.dim(q - 1)):
                e = tuple(1 if i == j else 0 for i in range(t.dim(q - 1)))
                xi = t.total.d(q - 1) @ e
                if any(xi):
                    cech.bq_simplify(t, pou_abs, q, xi)
                    nb += 1
        res.dims["simplified coboundaries"] = nb
    return count


def _op_complete_member_homotopy(ctx: Ctx, op: dict, res: OpResult):
    pair = _cover(ctx, op)
    name, k = ctx.complex(op)
    d = cech.total_complex(pair, k, op.get("mode", ctx.mode))
    count = 0
    for q in d.valid_degrees():
        for v in _basis_vectors(d.total.d(q)):
            cech.propsp_homotopy(d, q, v)
            count += 1
    res.dims["cocycles"] = count
    res.checks.append(Check("homotopy identity holds on a basis of cocycles", True))
    return count


def _op_cover_comparison(ctx: Ctx, op: dict, res: OpResult):
    pair = _cover(ctx, op)
    name, k = ctx.complex(op)
    m, rep = cech.theorem_32rel_map(k, pair, op.get("mode", ctx.mode))
    _merge(res, rep)
    return rep.dims.get("H(W,W')")


def _op_correspondence(ctx: Ctx, op: dict, res: OpResult):
    pair = _cover(ctx, op)
    name, k = ctx.complex(op)
    d = cech.total_complex(pair, k)
    phi = cech.phi_cover(d)
    ps = cech.psi_cover(d)
    found, lines_ok, rejected = 0, True, True
    from .ratlin import solve
    for q in range(min(k.top, d.top) + 1):
        hs = phi.source.cohomology(q)
        for s in hs.reps.columns():
            target = d.total.cohomology(q).projector @ (phi[q] @ s)
            hc = ps.cech.total.cohomology(q)
            img = d.total.cohomology(q).projector @ ps.map[q] @ hc.reps
            coeff = solve(img, target) if img.cols else None
            if coeff is None:
                continue
            sigma = hc.reps @ coeff
            c = cech.correspondence_chain(d, q, s, sigma)
            if c is None:
                lines_ok = False
                continue
            found += 1
            lines_ok = lines_ok and all(c.lines.values())
            if q >= 0 and hs.dim:
                wrong = cech.correspondence_chain(d, q, s, tuple(0 for _ in sigma))
                rejected = rejected and (wrong is None)
    res.dims["correspondences"] = found
    res.checks.append(Check("every correspondence satisfies its defining equations", lines_ok))
    res.checks.append(Check("non-cohomologous pairs are rejected", rejected))
    return found


def _triple(ctx: Ctx, op: dict):
    return ctx.sc.lookup("triples", _field(op, "triple"))


def _op_cylinder(ctx: Ctx, op: dict, res: OpResult):
    tr = _triple(ctx, op) if "triple" in op else None
    f = tr.f if tr else ctx.sc.lookup("maps", _field(op, "map"))
    cyl = tr.cylinder() if tr else cylinder.mapping_cylinder(f)
    z = cyl.z
    res.dims["points"] = list(z.labels)
    res.dims["opens"] = len(z.all_opens())
    res.dims["height"] = z.height
    res.checks.append(Check("construction audit: opens, closed X, open Y, subspace topology, p after nu is f", True))
    res.checks.append(Check("X is closed and Y is open", z.is_closed(cyl.x_part) and z.is_open(cyl.y_part)))
    return len(z.all_opens())


def _op_zstar(ctx: Ctx, op: dict, res: OpResult):
    tr = _triple(ctx, op)
    cyl = tr.cylinder()
    zs = cylinder.zstar_sheaf(cyl, tr.s, tr.t, tr.eta)
    res.dims["stalks"] = list(zs.sheaf.dims)
    res.checks.append(Check("construction audit: pushforward to X recovers S, restriction to Y recovers T", True))
    return list(zs.sheaf.dims)


def _op_morphism_cohomology(ctx: Ctx, op: dict, res: OpResult):
    tr = _triple(ctx, op)
    cyl = tr.cylinder()
    zs = cylinder.zstar_sheaf(cyl, tr.s, tr.t, tr.eta)
    mc = cylinder.cohom_of_morphism(cyl, zs, ctx.bound)
    _merge(res, mc.report)
    return mc.dims


def _op_cylinder_cone(ctx: Ctx, op: dict, res: OpResult):
    tr = _triple(ctx, op)
    g = tr.godement(ctx.bound)
    rep = cylinder.verify_propcmc(tr.cylinder(), g.k, g.l, g.phi)
    _merge(res, rep)
    return rep.dims.get("co-cone")


def _op_cocone(ctx: Ctx, op: dict, res: OpResult):
    tr = _triple(ctx, op)
    g = tr.godement(ctx.bound)
    sc = cylinder.sheaf_co_mapping_cone(g.k, g.l, g.phi, tr.f)
    _merge(res, sc.global_check)
    dims = sc.complex.sections_complex(tr.s.space.whole).complex.betti()
    res.dims["H(M*)"] = dims
    return dims


def _op_cylinder_comparison(ctx: Ctx, op: dict, res: OpResult):
    tr = _triple(ctx, op)
    g = tr.godement(ctx.bound)
    rep = cylinder.verify_th2(tr.cylinder(), tr.s, tr.t, tr.eta, g.k, g.l, g.phi, g.iota, g.jota, ctx.bound)
    _merge(res, rep)
    return rep.dims.get("H(f;eta)")


def _op_triple_identity(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    rep = cylinder.triple_identity(k, ctx.open(k.space, op, "sub"))
    _merge(res, rep)
    return rep.dims.get("H")


def _op_duality(ctx: Ctx, op: dict, res: OpResult):
    name, k = ctx.complex(op)
    sp = k.space
    sub = ctx.open(sp, op, "sub")
    r = restriction_chain_map(k, sp.whole, (), sub, ())
    res.checks.append(Check("co-cone is the transpose of the cone", transpose_duality_check(r)))
    ident = ChainMap.identity(r.source)
    res.checks.append(Check("co-cone of the identity is acyclic", co_mapping_cone(ident).m.is_acyclic()))
    return None


OPERATIONS: dict[str, Callable] = {
    "cohomology": _op_cohomology,
    "oracle": _op_oracle,
    "flabby": _op_flabby,
    "resolution": _op_resolution,
    "hypercohomology": _op_hypercohomology,
    "embedding": _op_embedding,
    "flabby-pair": _op_flabby_pair,
    "comparison": _op_comparison,
    "relative-properties": _op_relative_properties,
    "cech": _op_cech,
    "total": _op_total,
    "relative": _op_relative,
    "excision": _op_excision,
    "triple-sequence": _op_triple_sequence,
    "two-set-uniqueness": _op_two_set_uniqueness,
    "leray": _op_leray,
    "partition-of-unity": _op_partition_of_unity,
    "complete-member-homotopy": _op_complete_member_homotopy,
    "cover-comparison": _op_cover_comparison,
    "correspondence": _op_correspondence,
    "cylinder": _op_cylinder,
    "zstar": _op_zstar,
    "morphism-cohomology": _op_morphism_cohomology,
    "cylinder-cone": _op_cylinder_cone,
    "cocone": _op_cocone,
    "cylinder-comparison": _op_cylinder_comparison,
    "triple-identity": _op_triple_identity,
    "duality": _op_duality,
}


def _label(op: dict) -> str:
    parts = [f"{k}={v}" for k, v in op.items() if k not in ("op", "expect", "label")]
    return op.get("label") or (", ".join(parts) if parts else op["op"])


def run_scenario(sc: Scenario, bound: int | None = None, mode: str = cech.ALTERNATING) -> Report:
    ctx = Ctx(sc, bound, mode)
    report = Report(sc.name)
    for op in sc.operations:
        name = op["op"]
        fn = OPERATIONS.get(name)
        if fn is None:
            raise ParseError(f"unknown operation {name!r}")
        res = OpResult(name, _label(op))
        expect = op.get("expect", {})
        t0 = time.perf_counter()
        try:
            value = fn(ctx, op, res)
            if "error" in expect:
                res.checks.append(Check(f"raises {expect['error']}", False, {"returned": _plain(value)}))
            if "dims" in expect:
                want = tuple(expect["dims"])
                got = tuple(value)[:len(want)] if value is not None else None
                res.checks.append(Check("expected dimensions", got == want, {"expected": want, "got": got}))
            if "value" in expect:
                res.checks.append(Check("expected value", value == expect["value"],
                                        {"expected": expect["value"], "got": _plain(value)}))
        except ParseError:
            raise
        except RelcohError as e:
            kind = type(e).__name__
            if expect.get("error") == kind:
                w = getattr(e, "witness", None)
                res.checks.append(Check(f"raises {kind}", True))
                res.dims["reported"] = str(e)
                if w is not None:
                    res.dims["witness"] = w
            else:
                res.error = f"{kind}: {e}"
        res.seconds = time.perf_counter() - t0
        report.results.append(res)
    return report


def run(path, bound: int | None = None, mode: str = cech.ALTERNATING) -> Report:
    return run_scenario(load_path(path), bound, mode)


def list_builtins() -> list[tuple[str, str]]:
    out = []
    for name in builtin_names():
        sc = load_path(builtin_path(name))
        out.append((name, sc.description))
    return out


def _resolve(target: str):
    from pathlib import Path
    p = Path(target)
    if p.exists():
        return p
    if target in builtin_names():
        return builtin_path(target)
    raise ParseError(f"no such file or bundled scenario: {target}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="relcoh", description="Relative sheaf cohomology on finite spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario file or bundled scenario")
    p_run.add_argument("scenario")
    p_run.add_argument("--bound", type=int)
    p_run.add_argument("--mode", choices=[cech.ALTERNATING, cech.FULL], default=cech.ALTERNATING)
    p_run.add_argument("--report", help="write the JSON report to this path")
    p_run.add_argument("--json", action="store_true", help="print JSON instead of the table")
    p_run.add_argument("--timing", action="store_true", help="include timings (reports stop being reproducible)")
    sub.add_parser("list-builtins", help="list bundled scenarios")
    p_all = sub.add_parser("verify-all", help="run every bundled scenario")
    p_all.add_argument("--bound", type=int)
    p_all.add_argument("--mode", choices=[cech.ALTERNATING, cech.FULL], default=cech.ALTERNATING)
    p_all.add_argument("--jobs", type=int, default=4, help="scenarios to run at once")
    args = parser.parse_args(argv)
    try:
        if args.command == "list-builtins":
            for name, desc in list_builtins():
                print(f"{name:20s} {desc}")
            return 0
        if args.command == "run":
            rep = run(_resolve(args.scenario), args.bound, args.mode)
            sys.stdout.write(rep.to_json(args.timing) if args.json else rep.to_table(args.timing))
            if args.report:
                with open(args.report, "w") as fh:
                    fh.write(rep.to_json(args.timing))
            return 0 if rep.passed else 1
        names = builtin_names()
        # scenarios share no objects, so they can run side by side; output keeps catalog order
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(lambda n: run(builtin_path(n), args.bound, args.mode), names))
        ok = True
        for name, rep in zip(names, reports):
            ok = ok and rep.passed
            print(f"{'PASS' if rep.passed else 'FAIL'} {name}")
            if not rep.passed:
                sys.stdout.write(rep.to_table())
        return 0 if ok else 1
    except (ParseError, ValidationError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except RelcohError as e:
        print(f"input error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
