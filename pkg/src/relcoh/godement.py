"""Canonical flabby resolutions and relative sheaf cohomology.

C0(F) is the product-of-stalks sheaf: C0(F)(U) is the product of F_y over
y in U, so its stalk at x is the sum of F_y over y >= x and restrictions are
projections.  The resolution iterates C0 on cokernels.  On a finite poset
the cokernel after step q vanishes at every point whose chains upward have
length <= q, so the resolution stops after (height + 1) terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import BoundError, HypothesisFailed, NotExactError, NotFlabby, NotInvertible, ValidationError
from .finspace import (Sheaf, SheafComplex, SheafComplexMap, SheafMorphism, block_morphism,
                       cokernel_projection, direct_sum, kernel_inclusion, restriction_chain_map)
from .homalg import (ChainMap, Complex, LongExactSequence, check_short_exact, co_mapping_cone,
                     cone_functoriality, is_quasi_iso, les_from_ses)
from .ratlin import Matrix, image, inverse, is_invertible, kernel
from .report import VerificationReport, first_difference


def product_sheaf(f: Sheaf) -> tuple[Sheaf, SheafMorphism]:
    """C0(F) together with the embedding F -> C0(F)."""
    sp = f.space
    blocks = [sorted(sp.up[x]) for x in range(sp.n)]
    dims = [sum(f.dim(y) for y in b) for b in blocks]
    owners = [tuple(y for y in b for _ in range(f.dim(y))) for b in blocks]
    res = {}
    for (x, x2) in sp.covers:
        keep = []
        off = 0
        for y in blocks[x]:
            if y in sp.up[x2]:
                keep.extend(range(off, off + f.dim(y)))
            off += f.dim(y)
        res[(x, x2)] = Matrix.identity(dims[x]).select_rows(keep)
    c0 = Sheaf(sp, dims, res, owners=owners, check=False)
    emb = []
    for x in range(sp.n):
        parts = [f.r(x, y) for y in blocks[x]]
        emb.append(Matrix.vstack(parts, cols=f.dim(x)) if parts else Matrix.zeros(0, f.dim(x)))
    return c0, SheafMorphism(f, c0, emb, check=False)


def product_map(m: SheafMorphism, source: Sheaf, target: Sheaf) -> SheafMorphism:
    """C0(m): blockwise application of m."""
    sp = m.source.space
    return SheafMorphism(source, target,
                         [Matrix.diag([m.comps[y] for y in sorted(sp.up[x])]) if sp.up[x] else Matrix.zeros(0, 0)
                          for x in range(sp.n)], check=False)


@dataclass
class GodementResolution:
    base: Sheaf
    bound: int
    terms: list            # C^0 .. C^N
    aug: SheafMorphism     # S -> C^0
    diffs: list            # d^q: C^q -> C^{q+1}, q < N
    embeddings: list       # eps_q: Q_{q-1} -> C^q (Q_{-1} = S)
    quotients: list        # Q_q
    projections: list      # C^q -> Q_q
    reps: list             # per q: per point representatives of Q_q
    complete: bool
    _complex: SheafComplex | None = field(default=None, repr=False)

    def as_complex(self) -> SheafComplex:
        if self._complex is None:
            self._complex = SheafComplex(self.terms, self.diffs, check=False)
        return self._complex

    def exactness_audit(self) -> list[tuple[int, int]]:
        """(point, degree) pairs where 0 -> S -> C^0 -> ... -> C^N fails to be exact below N."""
        bad = []
        sp = self.base.space
        for x in range(sp.n):
            if self.aug.comps[x].rank() != self.base.dim(x):
                bad.append((x, -1))
            prev = self.aug.comps[x]
            for q in range(self.bound):
                nxt = self.diffs[q].comps[x] if q < len(self.diffs) else Matrix.zeros(0, self.terms[q].dim(x))
                if not (nxt @ prev).is_zero() or image(prev) != kernel(nxt):
                    bad.append((x, q))
                prev = nxt
        return bad


def godement_resolve(s: Sheaf, bound: int | None = None) -> GodementResolution:
    if bound is None:
        bound = s.space.height + 2
    if bound < 1:
        raise BoundError("bound must be at least 1")
    terms, diffs, embs, quos, projs, reps = [], [], [], [], [], []
    current = s
    aug = None
    for q in range(bound + 1):
        c, eps = product_sheaf(current)
        terms.append(c)
        embs.append(eps)
        if q == 0:
            aug = eps
        else:
            diffs.append(eps.compose(projs[-1]))
        qs, proj, rp = cokernel_projection(eps)
        quos.append(qs)
        projs.append(proj)
        reps.append(rp)
        current = qs
    # keep C^0..C^N; the extra step only tells whether the truncation lost anything
    complete = quos[bound - 1].is_zero()
    return GodementResolution(s, bound, terms[:bound + 1], aug, diffs[:bound], embs[:bound + 1],
                              quos[:bound + 1], projs[:bound + 1], reps[:bound + 1], complete)


def godement_map(rf: GodementResolution, rg: GodementResolution, m: SheafMorphism) -> SheafComplexMap:
    """The morphism C(m): C(F) -> C(G) of canonical resolutions."""
    if rf.bound != rg.bound:
        raise BoundError("resolutions are truncated at different bounds")
    comps = {}
    current = m
    sp = m.source.space
    for q in range(rf.bound + 1):
        comps[q] = product_map(current, rf.terms[q], rg.terms[q])
        induced = [rg.projections[q].comps[x] @ comps[q].comps[x] @ rf.reps[q][x] for x in range(sp.n)]
        current = SheafMorphism(rf.quotients[q], rg.quotients[q], induced, check=False)
    return SheafComplexMap(rf.as_complex(), rg.as_complex(), comps, check=False)


def flabby_check(g: Sheaf) -> bool:
    return flabby_witness(g) is None


def flabby_witness(g: Sheaf):
    """An open set over which global sections do not restrict onto, or None."""
    sp = g.space
    whole = sp.whole
    for v in sp.all_opens():
        target = g.sections(v)
        if target.dim and g.restriction(whole, v).rank() != target.dim:
            return v
    return None


# --- relative cohomology ---------------------------------------------------

@dataclass
class RelCohomology:
    dims: tuple
    complex: Complex
    resolution: GodementResolution
    u: frozenset
    vanish: frozenset

    def cohomology(self, q: int):
        return self.complex.cohomology(q)


def _check_bound(space, bound):
    if bound is None:
        return space.height + 2
    if bound < space.height + 2:
        raise BoundError(f"bound {bound} is below height + 2 = {space.height + 2}")
    return bound


def rel_cohomology(s: Sheaf, x_prime: Iterable[int] = (), bound: int | None = None,
                   u: Iterable[int] | None = None, resolution: GodementResolution | None = None) -> RelCohomology:
    """H^q(U, X'; S) for q < bound, U defaulting to the whole space."""
    sp = s.space
    bound = _check_bound(sp, bound)
    u = sp.whole if u is None else frozenset(u)
    x_prime = frozenset(x_prime)
    res = resolution if resolution is not None and resolution.bound == bound else godement_resolve(s, bound)
    sc = res.as_complex().sections_complex(u, x_prime)
    dims = tuple(sc.complex.cohomology(q).dim for q in range(bound))
    for q in range(sp.height + 1, bound):
        if dims[q]:
            raise ValidationError("cohomology vanishes above the height", f"degree {q}")
    return RelCohomology(dims, sc.complex, res, u, x_prime)


# --- hypercohomology ---------------------------------------------------------

class GodementTotal:
    """The sheaf complex C(K)^q = sum of C^{q1}(K^{q2}) with D = delta + (-1)^{q1} d."""

    def __init__(self, k: SheafComplex, bound: int | None = None):
        sp = k.space
        self.k = k
        self.bound = bound = _check_bound(sp, bound)
        self.res = [godement_resolve(t, bound) for t in k.terms]
        self.dmaps = [godement_map(self.res[q], self.res[q + 1], k.diffs[q]) for q in range(k.top)]
        top = bound + k.top
        self.blocks = [[(q1, q - q1) for q1 in range(0, bound + 1) if 0 <= q - q1 <= k.top]
                       for q in range(top + 1)]
        parts = [[self.res[q2].terms[q1] for (q1, q2) in bl] for bl in self.blocks]
        terms = [direct_sum(p) for p in parts]
        diffs = []
        for q in range(top):
            grid = {}
            for j, (q1, q2) in enumerate(self.blocks[q]):
                for i, (p1, p2) in enumerate(self.blocks[q + 1]):
                    if (p1, p2) == (q1 + 1, q2):
                        grid[(i, j)] = self.res[q2].diffs[q1]
                    elif (p1, p2) == (q1, q2 + 1):
                        m = self.dmaps[q2][q1]
                        grid[(i, j)] = m if q1 % 2 == 0 else -m
            diffs.append(block_morphism(terms[q], terms[q + 1], parts[q], parts[q + 1], grid))
        self.parts = parts
        self.complex = SheafComplex(terms, diffs)
        kappa = {}
        for q in range(k.top + 1):
            i = self.blocks[q].index((0, q))
            kappa[q] = block_morphism(k.terms[q], terms[q], [k.terms[q]], parts[q], {(i, 0): self.res[q].aug})
        self.kappa = SheafComplexMap(k, self.complex, kappa)
        self.s, self.iota = kernel_inclusion(k.d(0)) if k.top >= 1 else (k.terms[0], SheafMorphism.identity(k.terms[0]))
        self.res_s = godement_resolve(self.s, bound)
        c_iota = godement_map(self.res_s, self.res[0], self.iota)
        psi = {}
        for q in range(bound + 1):
            i = self.blocks[q].index((q, 0))
            psi[q] = block_morphism(self.res_s.terms[q], terms[q], [self.res_s.terms[q]], parts[q],
                                    {(i, 0): c_iota[q]})
        self.psi = SheafComplexMap(self.res_s.as_complex(), self.complex, psi)

    @property
    def complete(self) -> bool:
        return all(r.complete for r in self.res) and self.res_s.complete


@dataclass
class HyperCohomology:
    total: Complex
    phi: ChainMap
    psi: ChainMap
    dims: tuple
    godement: GodementTotal

    def phi_on(self, q: int) -> Matrix:
        return self.phi.on_cohomology(q)

    def psi_on(self, q: int) -> Matrix:
        return self.psi.on_cohomology(q)

    def chi(self, q: int) -> Matrix:
        p = self.psi_on(q)
        if not is_invertible(p):
            raise NotInvertible(f"psi is not invertible in degree {q}")
        return inverse(p) @ self.phi_on(q)


def hypercohomology(k: SheafComplex, x_prime: Iterable[int] = (), bound: int | None = None,
                    u: Iterable[int] | None = None, total: GodementTotal | None = None) -> HyperCohomology:
    g = total or GodementTotal(k, bound)
    sp = k.space
    u = sp.whole if u is None else frozenset(u)
    x_prime = frozenset(x_prime)
    tc = g.complex.sections_complex(u, x_prime).complex
    phi = g.kappa.on_sections(u, x_prime)
    psi = g.psi.on_sections(u, x_prime)
    dims = tuple(tc.cohomology(q).dim for q in range(g.bound))
    return HyperCohomology(tc, phi, psi, dims, g)


# --- the complex of an open embedding --------------------------------------

@dataclass
class EmbeddingComplex:
    complex: Complex
    alpha_star: ChainMap
    beta_star: ChainMap
    restriction: ChainMap      # K(X) -> K(X')
    whole: Complex             # K(X)
    sub: Complex               # K(X')


def open_embedding_complex(k: SheafComplex, x_prime: Iterable[int]) -> EmbeddingComplex:
    sp = k.space
    x_prime = frozenset(x_prime)
    if not sp.is_open(x_prime):
        raise ValidationError("open sets are up-sets", "X' is not open")
    r = restriction_chain_map(k, sp.whole, (), x_prime, ())
    cone = co_mapping_cone(r)
    check_short_exact(cone.beta_star, cone.alpha_star)
    return EmbeddingComplex(cone.m, cone.alpha_star, cone.beta_star, r, r.source, r.target)


def _embedding_les(e: EmbeddingComplex):
    return les_from_ses(e.beta_star, e.alpha_star, labels=("K(X')[-1]", "K(i)", "K(X)"))


def _pair_ses(k: SheafComplex, x_prime: frozenset):
    """0 -> K(X, X') -> K(X) -> K(X') -> 0 as chain maps."""
    sp = k.space
    j = restriction_chain_map(k, sp.whole, x_prime, sp.whole, ())
    i = restriction_chain_map(k, sp.whole, (), x_prime, ())
    return j, i


def _rho(k: SheafComplex, x_prime: frozenset, e: EmbeddingComplex) -> ChainMap:
    """rho: K(X, X') -> K(i), s -> (s, 0)."""
    j, _ = _pair_ses(k, x_prime)
    comps = {}
    for q in range(-1, k.top + 2):
        comps[q] = Matrix.vstack([j[q], Matrix.zeros(e.sub.dim(q - 1), j.source.dim(q))], cols=j.source.dim(q))
    return ChainMap(j.source, e.complex, comps)


def _degrees(*cs: Complex) -> range:
    return range(min(c.lo for c in cs), max(c.hi for c in cs) + 2)


def verify_casflasque(k: SheafComplex, x_prime: Iterable[int]) -> VerificationReport:
    x_prime = frozenset(x_prime)
    for q, t in enumerate(k.terms):
        v = flabby_witness(t)
        if v is not None:
            raise NotFlabby(f"term {q} does not restrict onto sections over {k.space.names(v)}")
    rep = VerificationReport("flabby comparison")
    e = open_embedding_complex(k, x_prime)
    rho = _rho(k, x_prime, e)
    rep.check("rho is a quasi-isomorphism", is_quasi_iso(rho))
    j, i = _pair_ses(k, x_prime)
    ses = les_from_ses(j, i, labels=("K(X,X')", "K(X)", "K(X')"))
    rep.check("pair sequence exact", ses.les.is_exact, ses.les.witness())
    for q in _degrees(e.complex):
        lhs = rho.on_cohomology(q) @ ses.connecting.get(q, Matrix.zeros(j.source.cohomology(q).dim,
                                                                        e.sub.cohomology(q - 1).dim))
        rhs = -e.beta_star.on_cohomology(q)
        rep.check(f"rho after delta equals -beta* (degree {q})", lhs == rhs, first_difference(lhs, rhs))
    rep.dims["K(X,X')"] = j.source.betti(0, k.top)
    rep.dims["K(i)"] = e.complex.betti(0, k.top)
    return rep


def _resolution_defect(k: SheafComplex):
    for x in range(k.space.n):
        stalk = k.stalk_complex(x)
        for q in range(1, k.top + 1):
            if stalk.cohomology(q).dim:
                return x, q
    return None


def _vanishing_defect(k: SheafComplex, opens: list[frozenset], bound: int):
    for q1, t in enumerate(k.terms):
        res = godement_resolve(t, bound)
        for u in opens:
            rc = rel_cohomology(t, (), bound, u=u, resolution=res)
            for q2 in range(1, bound):
                if rc.dims[q2]:
                    return q1, q2, u
    return None


def verify_theorem_th(k: SheafComplex, x_prime: Iterable[int], bound: int | None = None) -> VerificationReport:
    """Compare H(K(i)) with H(X, X'; S) along the ladder of long exact sequences."""
    sp = k.space
    x_prime = frozenset(x_prime)
    bound = _check_bound(sp, bound)
    bad = _resolution_defect(k)
    if bad is not None:
        x, q = bad
        raise HypothesisFailed(f"not a resolution: stalk complex at {sp.labels[x]} has cohomology in degree {q}",
                               witness={"point": sp.labels[x], "degree": q})
    bad = _vanishing_defect(k, [sp.whole, x_prime], bound)
    if bad is not None:
        q1, q2, u = bad
        raise HypothesisFailed(f"H^{q2} of term {q1} over {sp.names(u)} is nonzero",
                               witness={"q1": q1, "q2": q2, "open": sp.names(u)})
    rep = VerificationReport("resolution comparison for an open embedding")
    g = GodementTotal(k, bound)
    f = g.complex
    cs = g.res_s.as_complex()
    ek = open_embedding_complex(k, x_prime)
    ef = open_embedding_complex(f, x_prime)
    kap_x = g.kappa.on_sections(sp.whole)
    kap_xp = g.kappa.on_sections(x_prime)
    kap_i = cone_functoriality(kap_x, kap_xp, ek.restriction, ef.restriction)
    psi_x = g.psi.on_sections(sp.whole)
    psi_xp = g.psi.on_sections(x_prime)
    psi_rel = g.psi.on_sections(sp.whole, x_prime)
    rep.check("kappa on X is a qis", is_quasi_iso(kap_x))
    rep.check("kappa on X' is a qis", is_quasi_iso(kap_xp))
    rep.check("kappa(i) is a qis", is_quasi_iso(kap_i))
    rep.check("psi on X is a qis", is_quasi_iso(psi_x))
    rep.check("psi on X' is a qis", is_quasi_iso(psi_xp))
    rep.check("psi on (X, X') is a qis", is_quasi_iso(psi_rel))
    top_les = _embedding_les(ek)
    bottom_les = _embedding_les(ef)
    rep.check("top row exact", top_les.les.is_exact, top_les.les.witness())
    rep.check("bottom row exact", bottom_les.les.is_exact, bottom_les.les.witness())
    j_s, i_s = _pair_ses(cs, x_prime)
    mid = les_from_ses(j_s, i_s, labels=("C(S)(X,X')", "C(S)(X)", "C(S)(X')"))
    rep.check("middle row exact", mid.les.is_exact, mid.les.witness())
    rho_f = _rho(f, x_prime, ef)
    rep.check("rho for the flabby complex is a qis", is_quasi_iso(rho_f))
    # chain-level squares between the top and bottom rows
    rep.check("kappa(i) beta* = beta* kappa", kap_i @ ek.beta_star == ef.beta_star @ _shift_map(kap_xp, -1))
    rep.check("alpha* kappa(i) = kappa alpha*", ef.alpha_star @ kap_i == kap_x @ ek.alpha_star)
    j_f, i_f = _pair_ses(f, x_prime)
    for q in range(0, bound):
        delta = mid.connecting.get(q)
        hb = ef.beta_star.on_cohomology(q) @ psi_xp.on_cohomology(q - 1)
        if delta is None:
            delta = Matrix.zeros(cs.sections_complex(sp.whole, x_prime).complex.cohomology(q).dim, hb.cols)
        hd = rho_f.on_cohomology(q) @ psi_rel.on_cohomology(q) @ delta
        rep.check(f"left parallelogram anti-commutes (degree {q})", hb == -hd, first_difference(hb, -hd))
        lhs = ef.alpha_star.on_cohomology(q) @ rho_f.on_cohomology(q) @ psi_rel.on_cohomology(q)
        rhs = psi_x.on_cohomology(q) @ j_s.on_cohomology(q)
        rep.check(f"middle parallelogram commutes (degree {q})", lhs == rhs, first_difference(lhs, rhs))
        lhs = i_f.on_cohomology(q) @ psi_x.on_cohomology(q)
        rhs = psi_xp.on_cohomology(q) @ i_s.on_cohomology(q)
        rep.check(f"right parallelogram commutes (degree {q})", lhs == rhs, first_difference(lhs, rhs))
    h_i = ek.complex.betti(0, bound - 1)
    h_s = rel_cohomology(g.s, x_prime, bound, resolution=g.res_s).dims
    rep.check("dimensions agree", h_i == h_s, {"K(i)": h_i, "S": h_s})
    rep.dims["H(K(i))"] = h_i
    rep.dims["H(X,X';S)"] = h_s
    return rep


def _shift_map(phi: ChainMap, n: int) -> ChainMap:
    from .homalg import shift_map
    return shift_map(phi, n)


def verify_propfl(s: Sheaf, x_prime: Iterable[int], x_second: Iterable[int] = (),
                  ses: tuple[SheafMorphism, SheafMorphism] | None = None,
                  bound: int | None = None) -> VerificationReport:
    """Degree zero, flabby vanishing, triple sequence, excision and the sequence of a short exact sequence."""
    sp = s.space
    x_prime, x_second = frozenset(x_prime), frozenset(x_second)
    if not (x_second <= x_prime and sp.is_open(x_prime) and sp.is_open(x_second)):
        raise ValidationError("X'' is inside X', both open")
    bound = _check_bound(sp, bound)
    rep = VerificationReport("properties of relative cohomology")
    res = godement_resolve(s, bound)
    c = res.as_complex()
    h = rel_cohomology(s, x_prime, bound, resolution=res)
    rep.check("H^0 equals relative sections", h.dims[0] == s.sections(sp.whole, x_prime).dim)
    c0, _ = product_sheaf(s)
    h0 = rel_cohomology(c0, x_prime, bound)
    rep.check("flabby sheaves have no higher relative cohomology", not any(h0.dims[1:]), h0.dims)
    inc = restriction_chain_map(c, sp.whole, x_prime, sp.whole, x_second)
    res_map = restriction_chain_map(c, sp.whole, x_second, x_prime, x_second)
    tri = les_from_ses(inc, res_map, labels=("(X,X')", "(X,X'')", "(X',X'')"))
    rep.check("triple sequence exact", tri.les.is_exact, tri.les.witness())
    closed = sp.whole - x_prime
    for v in sp.all_opens():
        if closed <= v:
            r = restriction_chain_map(c, sp.whole, x_prime, v, v & x_prime)
            rep.check(f"excision onto {''.join(sp.names(v)) or '{}'}", is_quasi_iso(r))
    if ses is None:
        c0, eps = product_sheaf(s)
        q0, pi, _ = cokernel_projection(eps)
        ses = (eps, pi)
    m1, m2 = ses
    ok = (m1.is_injective() and m2.is_surjective()
          and all(image(m1.comps[x]) == kernel(m2.comps[x]) for x in range(sp.n)))
    rep.check("input sequence of sheaves is short exact", ok)
    if ok:
        r1 = godement_resolve(m1.source, bound)
        r2 = godement_resolve(m1.target, bound)
        r3 = godement_resolve(m2.target, bound)
        a = godement_map(r1, r2, m1).on_sections(sp.whole, x_prime)
        b = godement_map(r2, r3, m2).on_sections(sp.whole, x_prime)
        les = les_from_ses(a, b, labels=("S'", "S", "S''"))
        rep.check("sequence of sheaves gives an exact sequence", les.les.is_exact, les.les.witness())
    rep.dims["H(X,X';S)"] = h.dims
    rep.dims["triple"] = [n.dim for n in tri.les.nodes]
    return rep
