"""Mapping cylinders of maps of finite spaces and the sheaves they carry.

For f: Y -> X the cylinder Z(f) has points X ⊔ Y and basis opens
U ⊔ f^{-1}U (U open in X) together with the opens of Y.  X sits inside as
a closed subspace, Y as an open one.  A triple (S, T, η: S -> f_*T) glues
to one sheaf Z*(η) on Z(f), and the cohomology of f with coefficients in η
is the cohomology of Z*(η) relative to Y.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HypothesisFailed, NotMorphism, ValidationError
from .finspace import (ContinuousMap, FinSpace, PushforwardSheaf, Sheaf, SheafComplex, SheafComplexMap,
                       SheafMorphism, inverse_image, pushforward, pushforward_complex, pushforward_morphism,
                       restriction_chain_map, unit_complex_map)
from .godement import GodementResolution, godement_resolve, rel_cohomology, verify_theorem_th
from .homalg import ChainMap, CoCone, co_mapping_cone, les_from_ses
from .ratlin import Matrix, inverse, is_invertible, image, kernel
from .report import VerificationReport, first_difference


@dataclass
class CylinderSpace:
    f: ContinuousMap
    z: FinSpace
    mu: ContinuousMap       # X -> Z(f), closed
    nu: ContinuousMap       # Y -> Z(f), open
    p: ContinuousMap        # Z(f) -> X

    @property
    def x_part(self) -> frozenset:
        return frozenset(range(self.f.target.n))

    @property
    def y_part(self) -> frozenset:
        n = self.f.target.n
        return frozenset(range(n, n + self.f.source.n))

    def basis(self) -> list[frozenset]:
        x, y = self.f.target, self.f.source
        n = x.n
        out = [u | frozenset(n + b for b in self.f.preimage(u)) for u in x.all_opens()]
        out += [frozenset(n + b for b in v) for v in y.all_opens()]
        return out


def _labels(x: FinSpace, y: FinSpace) -> list[str]:
    taken = set(x.labels)
    out = []
    for l in y.labels:
        name = l + "'"
        while name in taken:
            name += "'"
        taken.add(name)
        out.append(name)
    return list(x.labels) + out


def mapping_cylinder(f: ContinuousMap) -> CylinderSpace:
    x, y = f.target, f.source
    n = x.n
    ups = []
    for a in range(n):
        ups.append(x.up[a] | frozenset(n + b for b in f.preimage(x.up[a])))
    for b in range(y.n):
        ups.append(frozenset(n + c for c in y.up[b]))
    labels = _labels(x, y)
    rel = [(labels[a], labels[c]) for a, u in enumerate(ups) for c in u if c != a]
    z = FinSpace(labels, rel)
    for a in range(z.n):
        if z.up[a] != ups[a]:
            raise ValidationError("cylinder order", f"minimal open of {labels[a]} is not a basis open")
    mu = ContinuousMap(x, z, list(range(n)))
    nu = ContinuousMap(y, z, [n + b for b in range(y.n)])
    p = ContinuousMap(z, x, list(range(n)) + [f(b) for b in range(y.n)])
    cyl = CylinderSpace(f, z, mu, nu, p)
    _audit(cyl)
    return cyl


def _audit(cyl: CylinderSpace) -> None:
    z = cyl.z
    basis = cyl.basis()
    unions = {frozenset()}
    for b in basis:
        unions |= {u | b for u in unions}
    if unions != set(z.all_opens()):
        raise ValidationError("cylinder opens are unions of basis opens")
    if not z.is_open(cyl.y_part) or not z.is_closed(cyl.x_part):
        raise ValidationError("Y is open and X closed in the cylinder")
    sub, _ = z.subspace(cyl.y_part)
    if sub.up != cyl.f.source.up:
        raise ValidationError("Y carries its own topology inside the cylinder")
    if cyl.p.compose(cyl.nu).image != cyl.f.image or cyl.p.compose(cyl.mu).image != tuple(range(cyl.f.target.n)):
        raise ValidationError("projection restricts to f on Y and to the identity on X")


# --- the glued sheaf ---------------------------------------------------------

@dataclass
class ZStarSheaf:
    cyl: CylinderSpace
    s: Sheaf
    t: Sheaf
    eta: SheafMorphism
    sheaf: Sheaf


def _cover_edges(cyl: CylinderSpace):
    n = cyl.f.target.n
    for (a, c) in cyl.z.covers:
        yield a, c, a < n, c < n


def zstar_sheaf(cyl: CylinderSpace, s: Sheaf, t: Sheaf, eta: SheafMorphism) -> ZStarSheaf:
    f = cyl.f
    n = f.target.n
    pushed = eta.target
    if not isinstance(pushed, PushforwardSheaf):
        if pushed != pushforward(f, t):
            raise NotMorphism("eta must map S to the pushforward of T")
        pushed = pushforward(f, t)
    if eta.source != s or pushed.base != t or pushed.f.image != f.image:
        raise NotMorphism("eta must map S to the pushforward of T")
    dims = [s.dim(a) for a in range(n)] + [t.dim(b) for b in range(f.source.n)]
    res = {}
    for a, c, a_in_x, c_in_x in _cover_edges(cyl):
        if a_in_x and c_in_x:
            res[(a, c)] = s.r(a, c)
        elif not a_in_x:
            res[(a, c)] = t.r(a - n, c - n)
        else:
            res[(a, c)] = pushed.evaluate(a, c - n) @ eta[a]
    sheaf = Sheaf(cyl.z, dims, res)
    zs = ZStarSheaf(cyl, s, t, eta, sheaf)
    # p_* Z*(η) is S through evaluation at x, and Z*(η) restricted to Y is T
    down = pushforward(cyl.p, sheaf)
    ev = [down.evaluate(a, a) for a in range(n)]
    if not all(is_invertible(m) for m in ev):
        raise ValidationError("sections over the basis open of x are the stalk of S")
    for (a, c) in f.target.covers:
        if ev[c] @ down.r(a, c) != s.r(a, c) @ ev[a]:
            raise ValidationError("pushforward to X recovers S")
    if inverse_image(cyl.nu, sheaf) != t:
        raise ValidationError("restriction to Y recovers T")
    return zs


@dataclass
class MorphismCohomology:
    dims: tuple
    les: object
    resolution: GodementResolution
    report: VerificationReport


def cohom_of_morphism(cyl: CylinderSpace, zs: ZStarSheaf, bound: int | None = None) -> MorphismCohomology:
    """H^q(f; η) with the exact sequence through H(X; S) and H(Y; T)."""
    z = cyl.z
    rc = rel_cohomology(zs.sheaf, cyl.y_part, bound)
    res = rc.resolution
    c = res.as_complex()
    inc = restriction_chain_map(c, z.whole, cyl.y_part, z.whole, ())
    rst = restriction_chain_map(c, z.whole, (), cyl.y_part, ())
    ses = les_from_ses(inc, rst, labels=("f;eta", "X;S", "Y;T"))
    rep = VerificationReport("cohomology of a sheaf morphism")
    rep.check("sequence exact", ses.les.is_exact, ses.les.witness())
    hx = rel_cohomology(zs.s, (), bound=max(res.bound, zs.s.space.height + 2)).dims[:res.bound]
    hy = rel_cohomology(zs.t, (), bound=max(res.bound, zs.t.space.height + 2)).dims[:res.bound] \
        if zs.t.space.n else (0,) * res.bound
    hz = tuple(inc.target.cohomology(q).dim for q in range(res.bound))
    hzy = tuple(rst.target.cohomology(q).dim for q in range(res.bound))
    pad = lambda h: tuple(h) + (0,) * (res.bound - len(h))
    rep.check("cylinder has the cohomology of X with coefficients S", hz == pad(hx), {"Z": hz, "X": hx})
    rep.check("Y part has the cohomology of T", hzy == pad(hy), {"Y": hzy, "T": hy})
    rep.dims["H(f;eta)"] = rc.dims
    rep.dims["H(X;S)"] = pad(hx)
    rep.dims["H(Y;T)"] = pad(hy)
    return MorphismCohomology(rc.dims, ses.les, res, rep)


# --- co-mapping cylinders and cones ----------------------------------------

def _check_phi(f: ContinuousMap, k: SheafComplex, l: SheafComplex, phi: SheafComplexMap):
    pl = phi.target
    if not isinstance(pl.terms[0], PushforwardSheaf) or pl.terms[0].f.image != f.image:
        raise NotMorphism("phi must land in the pushforward of L")
    if phi.source is not k and phi.source.terms != k.terms:
        raise NotMorphism("phi must start at K")
    return pl


@dataclass
class CoMappingCylinder:
    cyl: CylinderSpace
    k: SheafComplex
    l: SheafComplex
    phi: SheafComplexMap
    complex: SheafComplex
    pushed: SheafComplex


def co_mapping_cylinder(cyl: CylinderSpace, k: SheafComplex, l: SheafComplex,
                        phi: SheafComplexMap) -> CoMappingCylinder:
    """Z*(φ) = μ_*K ⊕ μ_*f_*L[-1] ⊕ ν_*L with d(k, l', l) = (dk, φk - dl' - l, dl)."""
    f = cyl.f
    n = f.target.n
    pl = _check_phi(f, k, l, phi)
    top = max(k.top, l.top + 1)
    kt = lambda q: k.term(q)
    lt = lambda q: l.term(q)
    plt = lambda q: pl.term(q)
    terms = []
    for q in range(top + 1):
        dims = [kt(q).dim(a) + plt(q - 1).dim(a) + plt(q).dim(a) for a in range(n)]
        dims += [lt(q).dim(b) for b in range(f.source.n)]
        res = {}
        for a, c, a_in_x, c_in_x in _cover_edges(cyl):
            if a_in_x and c_in_x:
                res[(a, c)] = Matrix.diag([kt(q).r(a, c), plt(q - 1).r(a, c), plt(q).r(a, c)])
            elif not a_in_x:
                res[(a, c)] = lt(q).r(a - n, c - n)
            else:
                ev = plt(q).evaluate(a, c - n) if q <= l.top else Matrix.zeros(0, 0)
                res[(a, c)] = Matrix.hstack([Matrix.zeros(lt(q).dim(c - n), kt(q).dim(a) + plt(q - 1).dim(a)), ev],
                                            rows=lt(q).dim(c - n))
        terms.append(Sheaf(cyl.z, dims, res, check=False))
    diffs = []
    for q in range(top):
        comps = []
        for a in range(n):
            rows = [kt(q + 1).dim(a), plt(q).dim(a), plt(q + 1).dim(a)]
            cols = [kt(q).dim(a), plt(q - 1).dim(a), plt(q).dim(a)]
            grid = [[k.d(q)[a], None, None],
                    [phi[q][a], -pl.d(q - 1)[a], -Matrix.identity(plt(q).dim(a))],
                    [None, None, pl.d(q)[a]]]
            comps.append(Matrix.block(grid, rows, cols))
        for b in range(f.source.n):
            comps.append(l.d(q)[b])
        diffs.append(SheafMorphism(terms[q], terms[q + 1], comps))
    return CoMappingCylinder(cyl, k, l, phi, SheafComplex(terms, diffs), pl)


@dataclass
class SheafCoCone:
    complex: SheafComplex
    pushed: SheafComplex
    global_check: VerificationReport


def sheaf_co_mapping_cone(k: SheafComplex, l: SheafComplex, phi: SheafComplexMap, f: ContinuousMap) -> SheafCoCone:
    """M*(φ) = K ⊕ f_*L[-1] on X, d(k, l') = (dk, φk - dl')."""
    pl = _check_phi(f, k, l, phi)
    sp = k.space
    top = max(k.top, l.top + 1)
    terms, diffs = [], []
    for q in range(top + 1):
        res = {e: Matrix.diag([k.term(q).r(*e), pl.term(q - 1).r(*e)]) for e in sp.covers}
        terms.append(Sheaf(sp, [k.term(q).dim(a) + pl.term(q - 1).dim(a) for a in range(sp.n)], res, check=False))
    for q in range(top):
        comps = []
        for a in range(sp.n):
            rows = [k.term(q + 1).dim(a), pl.term(q).dim(a)]
            cols = [k.term(q).dim(a), pl.term(q - 1).dim(a)]
            comps.append(Matrix.block([[k.d(q)[a], None], [phi[q][a], -pl.d(q - 1)[a]]], rows, cols))
        diffs.append(SheafMorphism(terms[q], terms[q + 1], comps))
    m = SheafComplex(terms, diffs)
    rep = VerificationReport("global sections of the sheaf co-mapping cone")
    glob = global_phi(k, l, phi, f)
    cone = co_mapping_cone(glob)
    theta = _cone_transport(m, k, l, pl, f, top)
    ok = all(theta[q].rows == theta[q].cols and is_invertible(theta[q]) for q in range(top + 1))
    rep.check("coordinate identification is invertible", ok)
    if ok:
        sc = m.sections_complex(sp.whole).complex
        for q in range(top):
            lhs = inverse(theta[q + 1]) @ sc.d(q) @ theta[q]
            rep.check(f"global differential equals the co-cone differential (degree {q})", lhs == cone.m.d(q),
                      first_difference(lhs, cone.m.d(q)))
    return SheafCoCone(m, pl, rep)


def global_phi(k: SheafComplex, l: SheafComplex, phi: SheafComplexMap, f: ContinuousMap) -> ChainMap:
    """φ on global sections as a map K(X) -> L(Y)."""
    sp = k.space
    pl = phi.target
    kx = k.sections_complex(sp.whole).complex
    ly = l.sections_complex(f.source.whole).complex
    comps = {}
    for q in range(max(k.top, l.top) + 1):
        gamma = _pushed_sections(pl.term(q), l.term(q), f)
        on = phi[q].on_sections(sp.whole)
        comps[q] = inverse(gamma) @ on if gamma.rows else Matrix.zeros(ly.dim(q), kx.dim(q))
    return ChainMap(kx, ly, comps)


def triple_identity(k: SheafComplex, x_prime) -> VerificationReport:
    """Compare three models of K(i) for the inclusion i of an open X'.

    The co-cone of restriction, the two-set relative complex of the cover
    {X', X} and the global sections of the sheaf co-cone of the unit
    K -> i_* i^{-1} K must agree.
    """
    from .cech import two_set_relative
    from .godement import open_embedding_complex
    sp = k.space
    x_prime = frozenset(x_prime)
    rep = VerificationReport("three models of the embedding complex")
    e = open_embedding_complex(k, x_prime)
    two = two_set_relative(k, sp.whole, x_prime)
    rep.check("co-cone of restriction equals the two-set relative complex", e.complex == two,
              None if e.complex == two else {"co-cone": e.complex.dims, "two-set": two.dims})
    sub, inc = sp.subspace(x_prime)
    pulled, pushed, unit = unit_complex_map(inc, k)
    glob = global_phi(k, pulled, unit, inc)
    rep.check("unit on global sections is restriction", glob == e.restriction)
    sc = sheaf_co_mapping_cone(k, pulled, unit, inc)
    for c in sc.global_check.checks:
        rep.check("sheaf co-cone: " + c.name, c.passed, c.witness)
    top = max(k.top, pulled.top + 1)
    h_e = e.complex.betti(0, top)
    h_two = two.betti(0, top)
    h_sc = sc.complex.sections_complex(sp.whole).complex.betti(0, top)
    rep.check("all three have the same cohomology", h_e == h_two == h_sc,
              {"co-cone": h_e, "two-set": h_two, "sheaf co-cone": h_sc})
    rep.dims["H"] = h_e
    return rep


def _pushed_sections(pushed, t: Sheaf, f: ContinuousMap) -> Matrix:
    """The identification T(Y) -> (f_*T)(X) in section coordinates."""
    x = f.target
    whole_y = f.source.whole
    src = t.sections(whole_y)
    tgt = pushed.sections(x.whole)
    if not tgt.dim and not src.dim:
        return Matrix.zeros(0, 0)
    blocks = [t.restriction(whole_y, pushed.preimages[a]) for a in tgt.points]
    amb = Matrix.vstack(blocks, cols=src.dim) if blocks else Matrix.zeros(0, src.dim)
    return tgt.coords(amb)


def _cone_transport(m: SheafComplex, k, l, pl, f, top) -> dict:
    """K(X) ⊕ L(Y)[-1] -> M*(φ)(X) in section coordinates."""
    sp = k.space
    theta = {}
    for q in range(top + 1):
        kx = k.term(q).sections(sp.whole)
        ly = l.term(q - 1).sections(f.source.whole)
        sec = m.terms[q].sections(sp.whole)
        cols = []
        for j in range(kx.dim + ly.dim):
            parts = {}
            for a in range(sp.n):
                if j < kx.dim:
                    kv = kx.stalk_part(kx.embedding, a).column(j)
                    lv = (0,) * pl.term(q - 1).dim(a)
                else:
                    kv = (0,) * k.term(q).dim(a)
                    e = [1 if i == j - kx.dim else 0 for i in range(ly.dim)]
                    lv = l.term(q - 1).restriction(f.source.whole, pl.term(q - 1).preimages[a]) @ tuple(e)
                parts[a] = tuple(kv) + tuple(lv)
            cols.append(m.terms[q].section_from_stalks(sp.whole, parts))
        amb = Matrix.from_columns(cols, sec.ambient_dim)
        theta[q] = sec.coords(amb) if sec.dim else Matrix.zeros(0, len(cols))
    return theta


def _zphi_transport(zc: CoMappingCylinder, glob: ChainMap, cone: CoCone) -> dict:
    """Θ(k, l') = (k, l'|, 0) on X and 0 on Y, into sections of Z*(φ) over Z vanishing on Y."""
    cyl, k, l, pl = zc.cyl, zc.k, zc.l, zc.pushed
    z = cyl.z
    n = cyl.f.target.n
    x = cyl.f.target
    theta = {}
    for q in range(zc.complex.top + 1):
        term = zc.complex.terms[q]
        kx = k.term(q).sections(x.whole)
        ly = l.term(q - 1).sections(cyl.f.source.whole)
        sec = term.sections(z.whole, cyl.y_part)
        cols = []
        for j in range(kx.dim + ly.dim):
            parts = {}
            for a in range(n):
                if j < kx.dim:
                    kv = kx.stalk_part(kx.embedding, a).column(j)
                    lv = (0,) * pl.term(q - 1).dim(a)
                else:
                    kv = (0,) * k.term(q).dim(a)
                    e = [1 if i == j - kx.dim else 0 for i in range(ly.dim)]
                    lv = l.term(q - 1).restriction(cyl.f.source.whole, pl.term(q - 1).preimages[a]) @ tuple(e)
                parts[a] = tuple(kv) + tuple(lv) + (0,) * pl.term(q).dim(a)
            cols.append(term.section_from_stalks(z.whole, parts))
        amb = Matrix.from_columns(cols, sec.ambient_dim)
        theta[q] = sec.coords(amb) if sec.dim else Matrix.zeros(0, len(cols))
    return theta


def verify_propcmc(cyl: CylinderSpace, k: SheafComplex, l: SheafComplex, phi: SheafComplexMap) -> VerificationReport:
    """Sections of Z*(φ) over Z vanishing on Y form the co-mapping cone of φ on global sections."""
    zc = co_mapping_cylinder(cyl, k, l, phi)
    glob = global_phi(k, l, phi, cyl.f)
    cone = co_mapping_cone(glob)
    rel = zc.complex.sections_complex(cyl.z.whole, cyl.y_part).complex
    theta = _zphi_transport(zc, glob, cone)
    rep = VerificationReport("relative sections of the co-mapping cylinder")
    top = zc.complex.top
    inv = all(theta[q].rows == theta[q].cols and is_invertible(theta[q]) for q in range(top + 1))
    rep.check("transport is invertible", inv)
    if inv:
        for q in range(top):
            lhs = inverse(theta[q + 1]) @ rel.d(q) @ theta[q]
            rep.check(f"transported differential equals the co-cone differential (degree {q})",
                      lhs == cone.m.d(q), first_difference(lhs, cone.m.d(q)))
    rep.dims["relative sections"] = rel.betti(0, top)
    rep.dims["co-cone"] = cone.m.betti(0, top)
    rep.data["theta"] = theta
    return rep


# --- the generalized comparison ---------------------------------------------

def _stalk_resolution_defect(s: Sheaf, iota: SheafMorphism, k: SheafComplex):
    for a in range(s.space.n):
        prev = iota[a]
        if prev.rank() != s.dim(a):
            return a, -1
        for q in range(k.top + 1):
            nxt = k.d(q)[a]
            if image(prev) != kernel(nxt):
                return a, q
            prev = nxt
    return None


def verify_th2(cyl: CylinderSpace, s: Sheaf, t: Sheaf, eta: SheafMorphism, k: SheafComplex, l: SheafComplex,
               phi: SheafComplexMap, iota: SheafMorphism, jota: SheafMorphism,
               bound: int | None = None) -> VerificationReport:
    """H(M*(φ)) against H(f; η) for a resolution (K, L, φ) of (S, T, η)."""
    f = cyl.f
    x, y = f.target, f.source
    pl = _check_phi(f, k, l, phi)
    pj = pushforward_morphism(f, jota, eta.target, pl.terms[0])
    lhs = phi[0].compose(iota)
    rhs = pj.compose(eta)
    if lhs.comps != rhs.comps:
        raise HypothesisFailed("the resolution square does not commute")
    for name, (sh, inc, cx) in {"K": (s, iota, k), "L": (t, jota, l)}.items():
        bad = _stalk_resolution_defect(sh, inc, cx)
        if bad is not None:
            a, q = bad
            raise HypothesisFailed(f"{name} is not a resolution at {sh.space.labels[a]} in degree {q}",
                                   witness={"complex": name, "point": sh.space.labels[a], "degree": q})
    for name, cx in (("K", k), ("L", l)):
        sp = cx.space
        for q1, term in enumerate(cx.terms):
            dims = rel_cohomology(term, (), None).dims
            for q2 in range(1, len(dims)):
                if dims[q2]:
                    raise HypothesisFailed(f"H^{q2} of {name}^{q1} is nonzero", witness={"q1": q1, "q2": q2})
    zs = zstar_sheaf(cyl, s, t, eta)
    zc = co_mapping_cylinder(cyl, k, l, phi)
    zphi = zc.complex
    z = cyl.z
    n = x.n
    # ζ: Z*(η) -> Z*(φ)^0
    comps = []
    for a in range(n):
        parts = [iota[a], Matrix.zeros(pl.term(-1).dim(a), s.dim(a)), pj[a] @ eta[a]]
        comps.append(Matrix.vstack(parts, cols=s.dim(a)))
    for b in range(y.n):
        comps.append(jota[b])
    zeta = SheafMorphism(zs.sheaf, zphi.terms[0], comps)
    rep = VerificationReport("comparison for a sheaf morphism")
    rep.check("zeta makes Z*(φ) a resolution of Z*(η)", _stalk_resolution_defect(zs.sheaf, zeta, zphi) is None)
    # top row (co-cone of φ on global sections) against the pair sequence of Z*(φ) on (Z, Y)
    glob = global_phi(k, l, phi, f)
    cone = co_mapping_cone(glob)
    theta = _zphi_transport(zc, glob, cone)
    rel_sc = zphi.sections_complex(z.whole, cyl.y_part).complex
    theta_map = ChainMap(cone.m, rel_sc, theta)
    rep.check("transport is a chain isomorphism",
              all(is_invertible(theta[q]) for q in range(zphi.top + 1) if theta[q].rows or theta[q].cols))
    inc = restriction_chain_map(zphi, z.whole, cyl.y_part, z.whole, ())
    rst = restriction_chain_map(zphi, z.whole, (), cyl.y_part, ())
    mid = les_from_ses(inc, rst, labels=("Z*(Z,Y)", "Z*(Z)", "Z*(Y)"))
    rep.check("middle row exact", mid.les.is_exact, mid.les.witness())
    top_les = les_from_ses(cone.beta_star, cone.alpha_star, labels=("L(Y)[-1]", "M*", "K(X)"))
    rep.check("top row exact", top_les.les.is_exact, top_les.les.witness())
    # j_X: K(X) -> Z*(φ)(Z), k -> (k, 0, φk)
    zc0 = zphi.sections_complex(z.whole).complex
    jx = {}
    for q in range(zphi.top + 1):
        kx = k.term(q).sections(x.whole)
        sec = zphi.terms[q].sections(z.whole)
        phik = phi[q].on_sections(x.whole) if q <= k.top else None
        cols = []
        for j in range(kx.dim):
            parts = {}
            pv = None
            if phik is not None and phik.rows:
                psec = pl.term(q).sections(x.whole)
                pv = psec.embedding @ phik.column(j)
            for a in range(n):
                kv = kx.stalk_part(kx.embedding, a).column(j)
                mv = (0,) * pl.term(q - 1).dim(a)
                if pv is not None:
                    psec = pl.term(q).sections(x.whole)
                    lv = pv[psec.offsets[a]:psec.offsets[a] + pl.term(q).dim(a)]
                else:
                    lv = (0,) * pl.term(q).dim(a)
                parts[a] = tuple(kv) + mv + tuple(lv)
                for b in range(y.n):
                    if n + b in z.up[a]:
                        parts[n + b] = tuple(pl.term(q).evaluate(a, b) @ tuple(lv)) if pl.term(q).dim(a) else ()
            cols.append(zphi.terms[q].section_from_stalks(z.whole, parts))
        jx[q] = sec.coords(Matrix.from_columns(cols, sec.ambient_dim)) if sec.dim else Matrix.zeros(0, kx.dim)
    kxc = k.sections_complex(x.whole).complex
    jx_map = ChainMap(kxc, zc0, jx)
    ly = l.sections_complex(y.whole).complex
    zy = rst.target
    ident = ChainMap(ly, zy, {q: Matrix.identity(ly.dim(q)) for q in range(l.top + 1)})
    for q in range(0, zphi.top + 1):
        left = theta_map.on_cohomology(q) @ cone.beta_star.on_cohomology(q)
        conn = mid.connecting.get(q, Matrix.zeros(rel_sc.cohomology(q).dim, zy.cohomology(q - 1).dim))
        right = conn @ ident.on_cohomology(q - 1)
        rep.check(f"left rectangle anti-commutes (degree {q})", left == -right, first_difference(left, -right))
        a1 = inc.on_cohomology(q) @ theta_map.on_cohomology(q)
        a2 = jx_map.on_cohomology(q) @ cone.alpha_star.on_cohomology(q)
        rep.check(f"middle rectangle commutes (degree {q})", a1 == a2, first_difference(a1, a2))
        b1 = rst.on_cohomology(q) @ jx_map.on_cohomology(q)
        b2 = ident.on_cohomology(q) @ glob.on_cohomology(q)
        rep.check(f"right rectangle commutes (degree {q})", b1 == b2, first_difference(b1, b2))
    sub = verify_theorem_th(zphi, cyl.y_part, bound)
    for c in sub.checks:
        rep.check("cylinder level: " + c.name, c.passed, c.witness)
    mc = cohom_of_morphism(cyl, zs, bound)
    h_m = cone.m.betti(0, len(mc.dims) - 1)
    rep.check("dimensions agree", h_m == mc.dims, {"M*": h_m, "f;eta": mc.dims})
    rep.dims["H(M*)"] = h_m
    rep.dims["H(f;eta)"] = mc.dims
    return rep


# --- lifting a morphism to resolutions ---------------------------------------

def lift_morphism(iota: SheafMorphism, k: SheafComplex, g: SheafMorphism, m: SheafComplex) -> SheafComplexMap:
    """φ: K -> M of complexes with φ^0 ι = g, found degree by degree by a linear solve.

    ι: S -> K^0 is a resolution and g: S -> M^0 has d_M g = 0.  A solution
    exists when the terms of M are injective (product-of-stalks sheaves and
    their pushforwards are); otherwise HypothesisFailed.
    """
    from .ratlin import solve
    sp = k.space
    prev_src, prev_map = iota, g          # φ^q ∘ prev_src = prev_map
    comps = {}
    for q in range(k.top + 1):
        src, tgt = k.terms[q], m.term(q)
        offs, n_unk = [], 0
        for a in range(sp.n):
            offs.append(n_unk)
            n_unk += tgt.dim(a) * src.dim(a)
        var = lambda a, i, j: offs[a] + i * src.dim(a) + j
        rows, rhs = [], []
        # φ_a ∘ prev_src_a = prev_map_a
        for a in range(sp.n):
            ps, pm = prev_src[a], prev_map[a]
            for i in range(tgt.dim(a)):
                for c in range(ps.cols):
                    row = {var(a, i, j): ps[j, c] for j in range(src.dim(a)) if ps[j, c]}
                    rows.append(row)
                    rhs.append(pm[i, c])
        # naturality: r^M φ_a = φ_b r^K along covers
        for (a, b) in sp.covers:
            rm, rk = tgt.r(a, b), src.r(a, b)
            for i in range(tgt.dim(b)):
                for j in range(src.dim(a)):
                    row = {}
                    for l in range(tgt.dim(a)):
                        if rm[i, l]:
                            row[var(a, l, j)] = row.get(var(a, l, j), 0) + rm[i, l]
                    for l in range(src.dim(b)):
                        if rk[l, j]:
                            row[var(b, i, l)] = row.get(var(b, i, l), 0) - rk[l, j]
                    rows.append(row)
                    rhs.append(0)
        mat = Matrix.from_sparse(len(rows), n_unk, {(r, c): v for r, row in enumerate(rows) for c, v in row.items() if v})
        sol = solve(mat, tuple(rhs)) if n_unk else (() if not any(rhs) else None)
        if sol is None:
            raise HypothesisFailed(f"no lift in degree {q}", witness={"degree": q})
        phi_q = []
        for a in range(sp.n):
            d_t, d_s = tgt.dim(a), src.dim(a)
            phi_q.append(Matrix([[sol[var(a, i, j)] for j in range(d_s)] for i in range(d_t)], cols=d_s))
        comps[q] = SheafMorphism(src, tgt, phi_q)
        prev_src = k.d(q)
        prev_map = m.d(q).compose(comps[q])
    return SheafComplexMap(k, m, comps)


@dataclass
class GodementTriple:
    k: SheafComplex
    l: SheafComplex
    phi: SheafComplexMap
    iota: SheafMorphism
    jota: SheafMorphism


def godement_triple(cyl: CylinderSpace, s: Sheaf, t: Sheaf, eta: SheafMorphism,
                    bound: int | None = None) -> GodementTriple:
    """Canonical resolutions of S and T with a lift of η between them."""
    f = cyl.f
    b = bound if bound is not None else max(f.target.height, f.source.height) + 2
    rs = godement_resolve(s, b)
    rt = godement_resolve(t, b)
    k, l = rs.as_complex(), rt.as_complex()
    pl = pushforward_complex(f, l)
    pj = pushforward_morphism(f, rt.aug, eta.target, pl.terms[0])
    phi = lift_morphism(rs.aug, k, pj.compose(eta), pl)
    return GodementTriple(k, l, phi, rs.aug, rt.aug)
