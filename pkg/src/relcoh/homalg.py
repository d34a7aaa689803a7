"""Bounded cochain complexes of finite-dimensional rational spaces.

Conventions: d^q maps degree q to degree q+1.  Shift: K[n]^q = K^{n+q} with
differential (-1)^n d.  The co-mapping cone of phi: K -> L lives in
K^q + L^{q-1} with d(x, y) = (dx, phi x - dy); the mapping cone lives in
K^{q+1} + L^q with d(x, y) = (-dx, phi x + dy).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import NotExactError, ShapeError, SquareError, ValidationError
from .ratlin import (Matrix, Quotient, Subspace, image, inverse, is_invertible,
                     kernel, quotient, scalar, solve, solve_matrix, vector)


class Complex:
    """Bounded complex; spaces outside [lo, hi] are zero."""

    def __init__(self, lo: int, dims: Iterable[int], diffs: Mapping[int, Matrix] | None = None,
                 check: bool = True):
        dims = tuple(dims)
        self.lo = lo
        self.hi = lo + len(dims) - 1
        self._dims = dims
        diffs = dict(diffs or {})
        self._diffs = {}
        for q in range(self.lo, self.hi):
            m = diffs.pop(q, None)
            if m is None:
                m = Matrix.zeros(self.dim(q + 1), self.dim(q))
            if m.shape != (self.dim(q + 1), self.dim(q)):
                raise ShapeError(f"d^{q} has shape {m.shape}, expected {(self.dim(q + 1), self.dim(q))}")
            self._diffs[q] = m
        for q, m in diffs.items():
            if not m.is_zero() or m.shape != (self.dim(q + 1), self.dim(q)):
                raise ShapeError(f"differential given outside the degree range at q={q}")
        if check:
            for q in range(self.lo, self.hi - 1):
                if not (self._diffs[q + 1] @ self._diffs[q]).is_zero():
                    raise ValidationError("d∘d = 0", f"fails at degree {q}")
        self._cohom = {}

    @property
    def degree_range(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, q: int) -> int:
        if self.lo <= q <= self.hi:
            return self._dims[q - self.lo]
        return 0

    @property
    def dims(self) -> dict[int, int]:
        return {q: self.dim(q) for q in self.degrees()}

    def d(self, q: int) -> Matrix:
        m = self._diffs.get(q)
        if m is None:
            return Matrix.zeros(self.dim(q + 1), self.dim(q))
        return m

    def cohomology(self, q: int) -> "Cohomology":
        if q not in self._cohom:
            self._cohom[q] = cohomology(self, q)
        return self._cohom[q]

    def betti(self, lo: int | None = None, hi: int | None = None) -> tuple[int, ...]:
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        return tuple(self.cohomology(q).dim for q in range(lo, hi + 1))

    def euler(self) -> int:
        return sum((-1) ** q * self.dim(q) for q in self.degrees())

    def is_acyclic(self) -> bool:
        return all(self.cohomology(q).dim == 0 for q in self.degrees())

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return all(self.dim(q) == other.dim(q) and self.d(q) == other.d(q) for q in range(lo, hi + 1))

    def __repr__(self):
        return f"Complex(lo={self.lo}, dims={list(self._dims)})"

    @classmethod
    def zero(cls) -> "Complex":
        return cls(0, [0])

    @classmethod
    def concentrated(cls, q: int, n: int) -> "Complex":
        return cls(q, [n])


@dataclass(frozen=True)
class Cohomology:
    degree: int
    dim: int
    cocycles: Subspace
    coboundaries: Subspace
    projector: Matrix
    reps: Matrix

    @property
    def representative_basis(self) -> Subspace:
        return Subspace.span(self.reps.columns(), self.cocycles.ambient_dim)

    def classes(self, m: Matrix) -> Matrix:
        """Classes of the cocycle columns of m."""
        return self.projector @ m


def cohomology(k: Complex, q: int) -> Cohomology:
    z = kernel(k.d(q))
    b = image(k.d(q - 1))
    quo = quotient(z, b)
    return Cohomology(q, quo.dim, z, b, quo.projector, quo.reps)


@dataclass(frozen=True)
class GradedVector:
    complex: Complex
    degree: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.complex.dim(self.degree):
            raise ShapeError("coordinate count does not match the degree's dimension")

    def d(self) -> "GradedVector":
        return GradedVector(self.complex, self.degree + 1, self.complex.d(self.degree) @ self.coords)

    def is_cocycle(self) -> bool:
        return not any(self.complex.d(self.degree) @ self.coords)


class ChainMap:
    def __init__(self, source: Complex, target: Complex, comps: Mapping[int, Matrix], check: bool = True):
        self.source = source
        self.target = target
        self._comps = {}
        for q, m in comps.items():
            if m.shape != (target.dim(q), source.dim(q)):
                raise ShapeError(f"component {q} has shape {m.shape}, expected {(target.dim(q), source.dim(q))}")
            self._comps[q] = m
        if check:
            for q in _span(source, target):
                if target.d(q) @ self[q] != self[q + 1] @ source.d(q):
                    raise ValidationError("chain map commutes with d", f"fails at degree {q}")

    def __getitem__(self, q: int) -> Matrix:
        m = self._comps.get(q)
        if m is None:
            return Matrix.zeros(self.target.dim(q), self.source.dim(q))
        return m

    def degrees(self) -> range:
        return _span(self.source, self.target)

    def on_cohomology(self, q: int) -> Matrix:
        hs = self.source.cohomology(q)
        ht = self.target.cohomology(q)
        return ht.projector @ self[q] @ hs.reps

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(other.source, self.target,
                        {q: self[q] @ other[q] for q in _span(other.source, self.target)}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {q: -m for q, m in self._comps.items()}, check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(self[q] == other[q] for q in _span(self.source, self.target)))

    @classmethod
    def identity(cls, k: Complex) -> "ChainMap":
        return cls(k, k, {q: Matrix.identity(k.dim(q)) for q in k.degrees()}, check=False)

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "ChainMap":
        return cls(source, target, {}, check=False)


def _span(a: Complex, b: Complex) -> range:
    return range(min(a.lo, b.lo) - 1, max(a.hi, b.hi) + 1)


def shift(k: Complex, n: int) -> Complex:
    sign = -1 if n % 2 else 1
    lo = k.lo - n
    return Complex(lo, [k.dim(q + n) for q in range(lo, k.hi - n + 1)],
                   {q: k.d(q + n).scale(sign) for q in range(lo, k.hi - n)}, check=False)


def shift_map(phi: ChainMap, n: int) -> ChainMap:
    return ChainMap(shift(phi.source, n), shift(phi.target, n),
                    {q - n: phi[q] for q in phi.degrees()}, check=False)


def is_quasi_iso(phi: ChainMap) -> bool:
    for q in _span(phi.source, phi.target):
        hs = phi.source.cohomology(q).dim
        ht = phi.target.cohomology(q).dim
        if hs != ht:
            return False
        if hs and phi.on_cohomology(q).rank() != hs:
            return False
    return True


@dataclass(frozen=True)
class CoCone:
    m: Complex
    alpha_star: ChainMap
    beta_star: ChainMap

    def __iter__(self):
        return iter((self.m, self.alpha_star, self.beta_star))


def _range_union(*cs: Complex) -> tuple[int, int]:
    return min(c.lo for c in cs), max(c.hi for c in cs)


def co_mapping_cone(phi: ChainMap) -> CoCone:
    k, l = phi.source, phi.target
    lo, hi = min(k.lo, l.lo + 1), max(k.hi, l.hi + 1)
    dims = [k.dim(q) + l.dim(q - 1) for q in range(lo, hi + 1)]
    diffs = {}
    for q in range(lo, hi):
        diffs[q] = Matrix.block(
            [[k.d(q), None], [phi[q], -l.d(q - 1)]],
            [k.dim(q + 1), l.dim(q)], [k.dim(q), l.dim(q - 1)])
    m = Complex(lo, dims, diffs)
    alpha = ChainMap(m, k, {q: Matrix.block([[Matrix.identity(k.dim(q)), None]],
                                            [k.dim(q)], [k.dim(q), l.dim(q - 1)])
                            for q in range(lo, hi + 1)})
    lm1 = shift(l, -1)
    beta = ChainMap(lm1, m, {q: Matrix.block([[None], [Matrix.identity(l.dim(q - 1))]],
                                             [k.dim(q), l.dim(q - 1)], [l.dim(q - 1)])
                             for q in range(lo, hi + 1)})
    return CoCone(m, alpha, beta)


@dataclass(frozen=True)
class Cone:
    m: Complex
    alpha: ChainMap
    beta: ChainMap

    def __iter__(self):
        return iter((self.m, self.alpha, self.beta))


def mapping_cone(phi: ChainMap) -> Cone:
    k, l = phi.source, phi.target
    lo, hi = min(k.lo - 1, l.lo), max(k.hi - 1, l.hi)
    dims = [k.dim(q + 1) + l.dim(q) for q in range(lo, hi + 1)]
    diffs = {}
    for q in range(lo, hi):
        diffs[q] = Matrix.block(
            [[-k.d(q + 1), None], [phi[q + 1], l.d(q)]],
            [k.dim(q + 2), l.dim(q + 1)], [k.dim(q + 1), l.dim(q)])
    m = Complex(lo, dims, diffs)
    alpha = ChainMap(l, m, {q: Matrix.block([[None], [Matrix.identity(l.dim(q))]],
                                            [k.dim(q + 1), l.dim(q)], [l.dim(q)])
                            for q in range(lo, hi + 1)})
    k1 = shift(k, 1)
    beta = ChainMap(m, k1, {q: Matrix.block([[Matrix.identity(k.dim(q + 1)), None]],
                                            [k.dim(q + 1)], [k.dim(q + 1), l.dim(q)])
                            for q in range(lo, hi + 1)})
    return Cone(m, alpha, beta)


def dual(k: Complex) -> Complex:
    """(K*)^q = (K^{-q})*, with d^q the transpose of d^{-q-1}."""
    lo, hi = -k.hi, -k.lo
    return Complex(lo, [k.dim(-q) for q in range(lo, hi + 1)],
                   {q: k.d(-q - 1).T for q in range(lo, hi)}, check=False)


def dual_map(phi: ChainMap) -> ChainMap:
    """phi: K -> L gives phi*: L* -> K* with (phi*)^q = (phi^{-q})^T."""
    return ChainMap(dual(phi.target), dual(phi.source),
                    {-q: phi[q].T for q in phi.degrees()})


def _swap_blocks(a: int, b: int) -> Matrix:
    """Permutation taking (u in Q^a, v in Q^b) to (v, u)."""
    return Matrix.block([[None, Matrix.identity(b)], [Matrix.identity(a), None]], [b, a], [a, b])


def transpose_duality_check(phi: ChainMap) -> bool:
    """Compare the co-mapping cone of the dual map with the dual of the mapping cone.

    With B = K (source) and A = L (target), the cone in homological degree q is
    A_q + B_{q-1}; the co-cone of phi* in degree q is (A_q)* + (B_{q-1})*.
    The cone stores the summands in the other order, hence the swaps.
    """
    k, l = phi.source, phi.target
    cone = mapping_cone(phi)
    cocone = co_mapping_cone(dual_map(phi))
    lo = min(cone.m.lo, -cocone.m.hi) - 1
    hi = max(cone.m.hi, -cocone.m.lo) + 1
    for q in range(-hi - 1, -lo + 2):
        # cocone degree q <-> cone degree -q, summands (L^{-q})*, (K^{-q+1})*
        a_q, b_q1 = l.dim(-q), k.dim(-q + 1)
        a_n, b_n = l.dim(-q - 1), k.dim(-q)
        if cocone.m.dim(q) != a_q + b_q1 or cone.m.dim(-q) != b_q1 + a_q:
            raise ShapeError("cone and co-cone dimensions disagree")
        swap_src = _swap_blocks(b_q1, a_q)      # cone order (K, L) -> cocone order (L, K)
        swap_tgt = _swap_blocks(b_n, a_n)
        expected = swap_tgt @ cone.m.d(-q - 1).T @ swap_src.T
        if cocone.m.d(q) != expected:
            return False
        # alpha* is the transpose of alpha, beta* the transpose of beta
        if cocone.alpha_star[q] != cone.alpha[-q].T @ swap_src.T:
            return False
        if cocone.beta_star[q] != swap_src @ cone.beta[-q].T:
            return False
    return True


# --- long exact sequences -------------------------------------------------

@dataclass
class LesNode:
    label: str
    degree: int
    dim: int


@dataclass
class LongExactSequence:
    """Nodes in order with the matrices between consecutive nodes."""
    nodes: list[LesNode]
    maps: list[Matrix]
    failures: list[tuple[int, str]] = field(default_factory=list)

    def __post_init__(self):
        self.failures = self._audit()

    def _audit(self) -> list[tuple[int, str]]:
        bad = []
        n = len(self.nodes)
        for i in range(n):
            dim = self.nodes[i].dim
            incoming = self.maps[i - 1] if i > 0 else Matrix.zeros(dim, 0)
            outgoing = self.maps[i] if i < n - 1 else Matrix.zeros(0, dim)
            if not (outgoing @ incoming).is_zero() or image(incoming) != kernel(outgoing):
                node = self.nodes[i]
                bad.append((i, f"{node.label}^{node.degree}"))
        return bad

    @property
    def is_exact(self) -> bool:
        return not self.failures

    def witness(self):
        """A (node, vector) pair in a kernel but outside the image, if any."""
        for i, _ in self.failures:
            dim = self.nodes[i].dim
            incoming = self.maps[i - 1] if i > 0 else Matrix.zeros(dim, 0)
            outgoing = self.maps[i] if i < len(self.nodes) - 1 else Matrix.zeros(0, dim)
            im = image(incoming)
            for v in kernel(outgoing).vectors():
                if not im.contains(v):
                    return self.nodes[i], v
            for v in im.vectors():
                return self.nodes[i], outgoing @ v
        return None

    def dims(self) -> list[tuple[str, int, int]]:
        return [(n.label, n.degree, n.dim) for n in self.nodes]


@dataclass
class SesLes:
    les: LongExactSequence
    connecting: dict[int, Matrix]   # delta: H^{q-1}(L) -> H^q(J), keyed by q


def check_short_exact(iota: ChainMap, phi: ChainMap) -> None:
    if iota.target is not phi.source and iota.target != phi.source:
        raise NotExactError("middle complexes differ")
    for q in _span(iota.source, phi.target):
        i, p = iota[q], phi[q]
        if i.rank() != i.cols:
            raise NotExactError(f"first map is not injective in degree {q}")
        if p.rank() != p.rows:
            raise NotExactError(f"second map is not surjective in degree {q}")
        if image(i) != kernel(p):
            raise NotExactError(f"image differs from kernel in degree {q}")


def connecting_map(iota: ChainMap, phi: ChainMap, q: int) -> Matrix:
    """delta: H^{q-1}(L) -> H^q(J) by lifting, differentiating and pulling back."""
    j, k, l = iota.source, iota.target, phi.target
    hl = l.cohomology(q - 1)
    hj = j.cohomology(q)
    if hl.dim == 0 or hj.dim == 0:
        return Matrix.zeros(hj.dim, hl.dim)
    lift = solve_matrix(phi[q - 1], hl.reps)
    if lift is None:
        raise NotExactError(f"cannot lift through the quotient in degree {q - 1}")
    z = solve_matrix(iota[q], k.d(q - 1) @ lift)
    if z is None:
        raise NotExactError(f"boundary of the lift is not in the subcomplex in degree {q}")
    return hj.projector @ z


def les_from_ses(iota: ChainMap, phi: ChainMap, labels=("J", "K", "L")) -> SesLes:
    check_short_exact(iota, phi)
    j, k, l = iota.source, iota.target, phi.target
    lo, hi = _range_union(j, k, l)
    nodes, maps, conn = [], [], {}
    for q in range(lo, hi + 1):
        if nodes:
            delta = connecting_map(iota, phi, q)
            conn[q] = delta
            maps.append(delta)
        nodes.append(LesNode(labels[0], q, j.cohomology(q).dim))
        maps.append(iota.on_cohomology(q))
        nodes.append(LesNode(labels[1], q, k.cohomology(q).dim))
        maps.append(phi.on_cohomology(q))
        nodes.append(LesNode(labels[2], q, l.cohomology(q).dim))
    return SesLes(LongExactSequence(nodes, maps), conn)


def les_from_maps(rows: list[tuple[str, int, int]], maps: list[Matrix]) -> LongExactSequence:
    return LongExactSequence([LesNode(*r) for r in rows], list(maps))


# --- homotopies, functoriality --------------------------------------------

def homotopy_to_zero(phi: ChainMap):
    """Solve phi^q = d_L h^q + h^{q+1} d_K for all q at once; None if impossible."""
    k, l = phi.source, phi.target
    degrees = list(range(min(k.lo, l.lo + 1), max(k.hi, l.hi + 1) + 1))
    # unknown h^q : K^q -> L^{q-1}, flattened row-major
    offsets, total = {}, 0
    for q in degrees:
        offsets[q] = total
        total += l.dim(q - 1) * k.dim(q)
    eq_rows, rhs = [], []
    for q in degrees:
        dl = l.d(q - 1)            # L^{q-1} -> L^q
        dk = k.d(q)                # K^q -> K^{q+1}
        target = phi[q]
        a, b = l.dim(q), k.dim(q)
        for r in range(a):
            for c in range(b):
                row = {}
                # (d_L h^q)[r, c] = sum_s dl[r, s] h^q[s, c]
                if q in offsets:
                    for s in range(l.dim(q - 1)):
                        v = dl[r, s]
                        if v:
                            key = offsets[q] + s * b + c
                            row[key] = row.get(key, 0) + v
                # (h^{q+1} d_K)[r, c] = sum_t h^{q+1}[r, t] dk[t, c]
                if q + 1 in offsets:
                    nb = k.dim(q + 1)
                    for t in range(nb):
                        v = dk[t, c]
                        if v:
                            key = offsets[q + 1] + r * nb + t
                            row[key] = row.get(key, 0) + v
                eq_rows.append(row)
                rhs.append(target[r, c])
    if not eq_rows:
        return {}
    system = Matrix.from_sparse(len(eq_rows), total,
                                {(i, j): v for i, row in enumerate(eq_rows) for j, v in row.items()})
    x = solve(system, rhs)
    if x is None:
        return None
    h = {}
    for q in degrees:
        rows_, cols_ = l.dim(q - 1), k.dim(q)
        base = offsets[q]
        h[q] = Matrix([[x[base + s * cols_ + c] for c in range(cols_)] for s in range(rows_)], cols_)
    return h


def check_homotopy(phi: ChainMap, h: Mapping[int, Matrix]) -> bool:
    k, l = phi.source, phi.target

    def hq(q):
        return h.get(q, Matrix.zeros(l.dim(q - 1), k.dim(q)))

    return all(phi[q] == l.d(q - 1) @ hq(q) + hq(q + 1) @ k.d(q) for q in phi.degrees())


def cone_functoriality(kappa: ChainMap, lam: ChainMap, phi: ChainMap, phi_prime: ChainMap) -> ChainMap:
    """mu: M*(phi) -> M*(phi'), (x, y) -> (kappa x, lambda y), for a commuting square."""
    for q in _span(phi.source, phi.target):
        if lam[q] @ phi[q] != phi_prime[q] @ kappa[q]:
            raise SquareError(f"square does not commute in degree {q}")
    src = co_mapping_cone(phi).m
    tgt = co_mapping_cone(phi_prime).m
    return ChainMap(src, tgt, {q: Matrix.diag([kappa[q], lam[q - 1]]) for q in _span(src, tgt)})


def propqis_rho(iota: ChainMap, phi: ChainMap) -> ChainMap:
    """rho: J -> M*(phi), z -> (iota z, 0); checks it is a qis over alpha*."""
    check_short_exact(iota, phi)
    cone = co_mapping_cone(phi)
    j, l = iota.source, phi.target
    rho = ChainMap(j, cone.m, {q: Matrix.vstack([iota[q], Matrix.zeros(l.dim(q - 1), j.dim(q))],
                                                 cols=j.dim(q))
                               for q in _span(j, cone.m)})
    if cone.alpha_star @ rho != iota:
        raise ValidationError("alpha* after rho equals iota")
    if not is_quasi_iso(rho):
        raise ValidationError("rho is a quasi-isomorphism")
    return rho


def cotriangle_h(iota: ChainMap, phi: ChainMap, q: int) -> Matrix:
    """h = H(beta*) H(rho)^{-1}: H^{q-1}(L) -> H^q(J)."""
    rho = propqis_rho(iota, phi)
    cone = co_mapping_cone(phi)
    return inverse(rho.on_cohomology(q)) @ cone.beta_star.on_cohomology(q)


def induced_iso(phi: ChainMap, q: int) -> Matrix:
    m = phi.on_cohomology(q)
    if not is_invertible(m):
        raise ValidationError("induced map is an isomorphism", f"degree {q}")
    return m


def from_data(lo: int, dims, diffs) -> Complex:
    return Complex(lo, dims, {lo + i: Matrix(m, cols=dims[i]) for i, m in enumerate(diffs)})


__all__ = [
    "Complex", "ChainMap", "GradedVector", "Cohomology", "CoCone", "Cone",
    "LongExactSequence", "LesNode", "SesLes", "shift", "shift_map", "cohomology",
    "co_mapping_cone", "mapping_cone", "dual", "dual_map", "transpose_duality_check",
    "les_from_ses", "les_from_maps", "connecting_map", "check_short_exact",
    "is_quasi_iso", "homotopy_to_zero", "check_homotopy", "cone_functoriality",
    "propqis_rho", "cotriangle_h", "induced_iso", "vector", "scalar",
]
