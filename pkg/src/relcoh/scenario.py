"""Scenario files: JSON descriptions of spaces, sheaves, maps, covers and requested operations.

Names declared in one section can be used by later sections.  Open sets may
be given by name, as a list of point labels, or as "whole".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cech import CoveringPair, DiscretePartitionOfUnity
from .cylinder import CylinderSpace, godement_triple, mapping_cylinder
from .errors import ParseError, RelcohError, ValidationError
from .finspace import ContinuousMap, FinSpace, Sheaf, SheafComplex, SheafMorphism, pushforward, unit_morphism
from .godement import godement_resolve
from .ratlin import Matrix


@dataclass
class Triple:
    """A map f: Y -> X with sheaves S on X, T on Y and η: S -> f_*T."""
    name: str
    f: ContinuousMap
    s: Sheaf
    t: Sheaf
    eta: SheafMorphism
    _cyl: CylinderSpace | None = None
    _godement: Any = None

    def cylinder(self) -> CylinderSpace:
        if self._cyl is None:
            self._cyl = mapping_cylinder(self.f)
        return self._cyl

    def godement(self, bound=None):
        if self._godement is None:
            self._godement = godement_triple(self.cylinder(), self.s, self.t, self.eta, bound)
        return self._godement


@dataclass
class Scenario:
    name: str
    description: str = ""
    bound: int | None = None
    spaces: dict = field(default_factory=dict)
    opens: dict = field(default_factory=dict)         # name -> (space name, frozenset)
    maps: dict = field(default_factory=dict)
    sheaves: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    covers: dict = field(default_factory=dict)
    partitions: dict = field(default_factory=dict)
    triples: dict = field(default_factory=dict)
    operations: list = field(default_factory=list)
    space_of: dict = field(default_factory=dict)      # object name -> space name

    def open_set(self, space: FinSpace, ref) -> frozenset:
        if ref is None or ref == "empty":
            return frozenset()
        if ref == "whole":
            return space.whole
        if isinstance(ref, str):
            if ref not in self.opens:
                raise ParseError(f"unknown open set {ref!r}")
            return self.opens[ref][1]
        pts = space.points(ref)
        if not space.is_open(pts):
            raise ValidationError("open sets are up-sets", f"{sorted(ref)} is not open")
        return pts

    def point_set(self, space: FinSpace, ref) -> frozenset:
        if isinstance(ref, str) and ref in self.opens:
            return self.opens[ref][1]
        if isinstance(ref, str):
            ref = [ref]
        return space.points(ref)

    def lookup(self, table: str, name: str):
        d = getattr(self, table)
        if name not in d:
            raise ParseError(f"unknown {table[:-1]} {name!r}")
        return d[name]


def _require(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"{where}: missing field {key!r}")
    return d[key]


def _matrix(entries, rows: int, cols: int, where: str) -> Matrix:
    if entries is None:
        return Matrix.zeros(rows, cols)
    try:
        m = Matrix(entries, cols=cols) if entries else Matrix.zeros(0, cols)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ParseError(f"{where}: bad matrix ({e})")
    if m.shape != (rows, cols):
        raise ValidationError("matrix shapes match stalks", f"{where}: shape {m.shape}, expected {(rows, cols)}")
    return m


def load_text(text: str, origin: str = "<scenario>") -> Scenario:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{origin}: {e.msg}", line=e.lineno, column=e.colno)
    if not isinstance(raw, dict):
        raise ParseError(f"{origin}: top level must be an object", line=1, column=1)
    return build(raw)


def load_path(path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")
    return load_text(text, str(path))


def build(raw: dict) -> Scenario:
    sc = Scenario(name=str(_require(raw, "name", "scenario")), description=raw.get("description", ""),
                  bound=raw.get("bound"))
    for name, d in raw.get("spaces", {}).items():
        if "subspace_of" in d:
            parent = sc.lookup("spaces", d["subspace_of"])
            sub, inc = parent.subspace(parent.points(_require(d, "points", f"space {name}")))
            sc.spaces[name] = sub
            sc.maps[f"{name}->{d['subspace_of']}"] = inc
        else:
            pts = _require(d, "points", f"space {name}")
            sc.spaces[name] = FinSpace(pts, [tuple(e) for e in d.get("hasse_edges", [])])
    for name, d in raw.get("opens", {}).items():
        sp_name = _require(d, "space", f"open {name}")
        sp = sc.lookup("spaces", sp_name)
        sc.opens[name] = (sp_name, sc.open_set(sp, _require(d, "points", f"open {name}")))
    for name, d in raw.get("maps", {}).items():
        src = sc.lookup("spaces", _require(d, "source", f"map {name}"))
        tgt = sc.lookup("spaces", _require(d, "target", f"map {name}"))
        sc.maps[name] = ContinuousMap(src, tgt, _require(d, "table", f"map {name}"))
    for name, d in raw.get("sheaves", {}).items():
        sc.sheaves[name] = _sheaf(sc, name, d)
    for name, d in raw.get("morphisms", {}).items():
        sc.morphisms[name] = _morphism(sc, name, d)
    for name, d in raw.get("complexes", {}).items():
        sc.complexes[name] = _complex(sc, name, d)
    for name, d in raw.get("covers", {}).items():
        sp_name = _require(d, "space", f"cover {name}")
        sp = sc.lookup("spaces", sp_name)
        members = [sc.open_set(sp, m) for m in _require(d, "members", f"cover {name}")]
        names = [m if isinstance(m, str) else "".join(m) for m in d["members"]]
        pair = CoveringPair(sp, members, d.get("sub_index", []), names=names)
        sc.covers[name] = pair
        sc.space_of[name] = sp_name
        assign = {p: int(i) for p, i in d.get("assign", {}).items()}
        sc.partitions[name] = DiscretePartitionOfUnity(pair, assign)
    for name, d in raw.get("triples", {}).items():
        sc.triples[name] = _triple(sc, name, d)
    ops = raw.get("operations", [])
    if not isinstance(ops, list):
        raise ParseError("operations must be a list")
    for i, op in enumerate(ops):
        _require(op, "op", f"operation {i}")
    sc.operations = ops
    return sc


def _sheaf(sc: Scenario, name: str, d: dict) -> Sheaf:
    sp_name = _require(d, "space", f"sheaf {name}")
    sp = sc.lookup("spaces", sp_name)
    sc.space_of[name] = sp_name
    if "constant" in d:
        return Sheaf.constant(sp, int(d["constant"]))
    if "skyscraper" in d:
        return Sheaf.skyscraper(sp, d["skyscraper"], int(d.get("rank", 1)))
    if "zero" in d:
        return Sheaf.zero(sp)
    if "pullback" in d:
        src = d["pullback"]
        f = sc.lookup("maps", _require(d, "along", f"sheaf {name}"))
        from .finspace import inverse_image
        return inverse_image(f, sc.lookup("sheaves", src))
    stalks = _require(d, "stalks", f"sheaf {name}")
    dims = [0] * sp.n
    for label, n in stalks.items():
        dims[sp._idx(label)] = int(n)
    res = {}
    for r in d.get("restrictions", []):
        a, b = sp._idx(_require(r, "from", f"sheaf {name}")), sp._idx(_require(r, "to", f"sheaf {name}"))
        res[(a, b)] = _matrix(r.get("matrix"), dims[b], dims[a], f"sheaf {name} {r['from']}->{r['to']}")
    return Sheaf(sp, dims, res)


def _morphism(sc: Scenario, name: str, d: dict) -> SheafMorphism:
    src = sc.lookup("sheaves", _require(d, "source", f"morphism {name}"))
    tgt = sc.lookup("sheaves", _require(d, "target", f"morphism {name}"))
    sp = src.space
    comps = [Matrix.zeros(tgt.dim(x), src.dim(x)) for x in range(sp.n)]
    for label, m in d.get("stalks", {}).items():
        x = sp._idx(label)
        comps[x] = _matrix(m, tgt.dim(x), src.dim(x), f"morphism {name} at {label}")
    sc.space_of[name] = sc.space_of.get(d["source"])
    return SheafMorphism(src, tgt, comps)


def _complex(sc: Scenario, name: str, d: dict) -> SheafComplex:
    if "godement_of" in d:
        s = sc.lookup("sheaves", d["godement_of"])
        sc.space_of[name] = sc.space_of.get(d["godement_of"])
        bound = d.get("bound", sc.bound)
        return godement_resolve(s, bound).as_complex()
    if "sheaf" in d:
        sc.space_of[name] = sc.space_of.get(d["sheaf"])
        return SheafComplex.single(sc.lookup("sheaves", d["sheaf"]))
    terms = [sc.lookup("sheaves", t) for t in _require(d, "terms", f"complex {name}")]
    diffs = [sc.lookup("morphisms", m) for m in d.get("differentials", [])]
    sc.space_of[name] = sc.space_of.get(d["terms"][0])
    return SheafComplex(terms, diffs)


def _triple(sc: Scenario, name: str, d: dict) -> Triple:
    f = sc.lookup("maps", _require(d, "map", f"triple {name}"))
    s = sc.lookup("sheaves", _require(d, "source_sheaf", f"triple {name}"))
    eta_decl = d.get("eta", "unit")
    if eta_decl == "unit":
        eta = unit_morphism(f, s)
        t = eta.target.base
        if "target_sheaf" in d and sc.lookup("sheaves", d["target_sheaf"]) != t:
            raise ValidationError("unit target", f"triple {name}: target sheaf is not the pullback of the source")
    else:
        t = sc.lookup("sheaves", _require(d, "target_sheaf", f"triple {name}"))
        pushed = pushforward(f, t)
        comps = [Matrix.zeros(pushed.dim(x), s.dim(x)) for x in range(s.space.n)]
        for label, m in _require(eta_decl, "stalks", f"triple {name} eta").items():
            x = s.space._idx(label)
            comps[x] = _matrix(m, pushed.dim(x), s.dim(x), f"triple {name} eta at {label}")
        eta = SheafMorphism(s, pushed, comps)
    return Triple(name, f, s, t, eta)


def builtin_dir() -> Path:
    return Path(__file__).parent / "scenarios"


def builtin_names() -> list[str]:
    return sorted(p.stem for p in builtin_dir().glob("*.json"))


def builtin_path(name: str) -> Path:
    p = builtin_dir() / f"{name}.json"
    if not p.exists():
        raise ParseError(f"no bundled scenario named {name!r}")
    return p
