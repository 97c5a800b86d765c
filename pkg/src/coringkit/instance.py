"""JSON instance files: parsing into a validated object table and writing
objects back out in explicit form.

Linear maps are dense row-major matrices (rows are target coordinates),
tensor coordinates are lexicographic with the left index major, and
coproducts and coactions are given as lifts into k-tensor products.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import (
    Algebra,
    AlgebraMorphism,
    Bimodule,
    ground_algebra,
    group_algebra,
    matrix_algebra,
    product_algebra,
    subalgebra,
    truncated_polynomial_algebra,
    upper_triangular_algebra,
    validate_algebra,
    validate_bimodule,
)
from .coalgebra import (
    Coalgebra,
    CoalgebraMorphism,
    CoalgebraComodule,
    dual_coalgebra,
    grouplike_coalgebra,
    validate_coalgebra,
)
from .coring import (
    Coring,
    CoringComodule,
    canonical_coring,
    coalgebra_as_coring,
    cofree_comodule,
    comodule_from_grouplike,
    regular_comodule,
    trivial_coring,
    validate_comodule,
    validate_coring,
)
from .cring import CRing, Character, cring_from_algebra, cring_from_entwining, cring_from_surjection, validate_character, validate_cring
from .entwining import (
    ComoduleAlgebra,
    Entwining,
    coring_from_entwining,
    coring_from_weak,
    coring_from_weak_via_precoring,
    validate_entwining,
    validate_weak_entwining,
)
from .errors import MalformedInputError, PreconditionError
from .linalg import GF, QQ, FieldSpec

CATEGORIES = (
    "algebras",
    "coalgebras",
    "algebra_morphisms",
    "coalgebra_morphisms",
    "bimodules",
    "entwinings",
    "comodule_algebras",
    "corings",
    "elements",
    "comodules",
    "maps",
    "crings",
    "characters",
)


class ParseError(MalformedInputError):
    """Malformed instance data; ``location`` is a JSON path or line/column."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class UnresolvedReference(MalformedInputError):
    def __init__(self, category: str, name: str, location: str = ""):
        super().__init__(f"{location}: unknown {category[:-1]} {name!r}")
        self.category = category
        self.name = name
        self.location = location


def to_json_array(F: FieldSpec, arr) -> list:
    arr = np.asarray(arr)
    if arr.size == 0:
        return arr.tolist()
    return np.vectorize(F.format, otypes=[object])(arr).tolist()


def field_from_json(spec, location="field") -> FieldSpec:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ParseError("field must be an object with a 'kind'", location)
    try:
        if spec["kind"] == "Q":
            return QQ
        if spec["kind"] == "Fp":
            return GF(int(spec["p"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(str(exc), location) from None
    except MalformedInputError as exc:
        raise ParseError(str(exc), location) from None
    raise ParseError(f"unknown field kind {spec['kind']!r}", location)


def field_to_json(F: FieldSpec) -> dict:
    return {"kind": "Q"} if F.kind == "Q" else {"kind": "Fp", "p": F.p}


def parse_field_override(text: str) -> FieldSpec:
    """'Q', 'F5', 'Fp:5' or 'GF(5)'."""
    t = text.strip().replace("GF(", "F").replace(")", "").replace("Fp:", "F")
    if t == "Q":
        return QQ
    if t.startswith("F") and t[1:].isdigit():
        return GF(int(t[1:]))
    raise MalformedInputError(f"cannot read field {text!r}")


@dataclass
class Instance:
    field: FieldSpec
    doc: dict
    digest: str
    objects: dict = field(default_factory=lambda: {c: {} for c in CATEGORIES})
    source: str = ""
    splittings: dict = field(default_factory=dict)  # comodule algebra name -> sigma
    element_owner: dict = field(default_factory=dict)  # element name -> coring name

    def get(self, category: str, name: str, location: str = ""):
        try:
            return self.objects[category][name]
        except KeyError:
            raise UnresolvedReference(category, str(name), location or category) from None

    def names(self) -> dict:
        return {c: sorted(self.objects[c]) for c in CATEGORIES if self.objects[c]}


def digest_of(doc: dict) -> str:
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canon.encode()).hexdigest()


class _Loader:
    def __init__(self, doc: dict, F: FieldSpec):
        self.doc = doc
        self.F = F
        self.inst = Instance(F, doc, digest_of(doc))

    # -- helpers --------------------------------------------------------------

    def arr(self, data, loc: str, shape=None) -> np.ndarray:
        F = self.F
        try:
            raw = np.asarray(data, dtype=object)
        except ValueError:
            raise ParseError("ragged array", loc) from None
        out = F.zeros(raw.shape)
        for idx, v in np.ndenumerate(raw):
            if isinstance(v, bool) or not isinstance(v, (int, str)):
                raise ParseError(f"scalar {v!r} must be an integer or a 'num/den' string", _at(loc, idx))
            try:
                out[idx] = F(v)
            except MalformedInputError as exc:
                raise ParseError(str(exc), _at(loc, idx)) from None
        if shape is not None and out.shape != tuple(shape):
            raise ParseError(f"expected shape {tuple(shape)}, got {out.shape}", loc)
        return out

    def key(self, spec: dict, name: str, loc: str):
        if name not in spec:
            raise ParseError(f"missing key {name!r}", loc)
        return spec[name]

    def ref(self, category: str, spec: dict, key: str, loc: str):
        return self.inst.get(category, self.key(spec, key, loc), f"{loc}.{key}")

    def validated(self, rep, loc):
        if not rep.ok:
            raise PreconditionError(f"{loc} fails axioms: {', '.join(rep.axioms_violated)}",
                                    axiom=rep.axioms_violated[0], report=rep)

    # -- categories -------------------------------------------------------------

    def algebra(self, name, spec, loc):
        F = self.F
        b = spec.get("builtin")
        if b is None:
            n = int(self.key(spec, "dim", loc))
            A = Algebra(F, self.arr(self.key(spec, "mult", loc), f"{loc}.mult", (n, n, n)),
                        self.arr(self.key(spec, "unit", loc), f"{loc}.unit", (n,)), name)
        else:
            makers = {
                "ground": lambda: ground_algebra(F),
                "truncated_polynomial": lambda: truncated_polynomial_algebra(F, int(spec["n"])),
                "matrix": lambda: matrix_algebra(F, int(spec["n"])),
                "product": lambda: product_algebra(F, int(spec["n"])),
                "upper_triangular": lambda: upper_triangular_algebra(F),
                "group": lambda: group_algebra(F, spec["table"]),
            }
            if b not in makers:
                raise ParseError(f"unknown builtin algebra {b!r}", f"{loc}.builtin")
            try:
                A = makers[b]()
            except KeyError as exc:
                raise ParseError(f"missing key {exc}", loc) from None
            A = Algebra(F, A.mult, A.unit, name)
        self.validated(validate_algebra(A), loc)
        return A

    def coalgebra(self, name, spec, loc):
        F = self.F
        b = spec.get("builtin")
        if b is None:
            n = int(self.key(spec, "dim", loc))
            C = Coalgebra(F, self.arr(self.key(spec, "comult", loc), f"{loc}.comult", (n, n, n)),
                          self.arr(self.key(spec, "counit", loc), f"{loc}.counit", (n,)), name)
        elif b == "grouplike":
            C = grouplike_coalgebra(F, int(self.key(spec, "n", loc)), name)
        elif b == "dual":
            C = dual_coalgebra(self.ref("algebras", spec, "algebra", loc), name)
        else:
            raise ParseError(f"unknown builtin coalgebra {b!r}", f"{loc}.builtin")
        self.validated(validate_coalgebra(C), loc)
        return C

    def algebra_morphism(self, name, spec, loc):
        kind = spec.get("kind", "explicit")
        if kind == "unit":
            A = self.ref("algebras", spec, "target", loc)
            k = ground_algebra(self.F)
            src_name = spec.get("source", "k")
            k = Algebra(self.F, k.mult, k.unit, src_name)
            self.inst.objects["algebras"].setdefault(src_name, k)
            k = self.inst.objects["algebras"][src_name]
            f = AlgebraMorphism(k, A, A.unit.reshape(-1, 1).copy())
        elif kind == "subalgebra":
            A = self.ref("algebras", spec, "target", loc)
            basis = self.arr(self.key(spec, "basis", loc), f"{loc}.basis")
            if basis.ndim != 2 or basis.shape[0] != A.dim:
                raise ParseError(f"basis columns must have length {A.dim}", f"{loc}.basis")
            src_name = self.key(spec, "source", loc)
            B, f = subalgebra(A, basis, src_name)
            self.inst.objects["algebras"][src_name] = B
        elif kind == "explicit":
            S = self.ref("algebras", spec, "source", loc)
            T = self.ref("algebras", spec, "target", loc)
            f = AlgebraMorphism(S, T, self.arr(self.key(spec, "matrix", loc), f"{loc}.matrix", (T.dim, S.dim)))
        else:
            raise ParseError(f"unknown morphism kind {kind!r}", f"{loc}.kind")
        self.validated(f.validate(), loc)
        return f

    def coalgebra_morphism(self, name, spec, loc):
        S = self.ref("coalgebras", spec, "source", loc)
        T = self.ref("coalgebras", spec, "target", loc)
        f = CoalgebraMorphism(S, T, self.arr(self.key(spec, "matrix", loc), f"{loc}.matrix", (T.dim, S.dim)))
        self.validated(f.validate(), loc)
        return f

    def _actions(self, spec, loc, n):
        la = ra = lact = ract = None
        if spec.get("left") is not None:
            la = self.ref("algebras", spec, "left", loc)
            lact = self.arr(self.key(spec, "left_action", loc), f"{loc}.left_action", (la.dim, n, n))
        if spec.get("right") is not None:
            ra = self.ref("algebras", spec, "right", loc)
            ract = self.arr(self.key(spec, "right_action", loc), f"{loc}.right_action", (ra.dim, n, n))
        return la, ra, lact, ract

    def bimodule(self, name, spec, loc):
        n = int(self.key(spec, "dim", loc))
        la, ra, lact, ract = self._actions(spec, loc, n)
        m = Bimodule(self.F, n, la, ra, lact, ract, name)
        self.validated(validate_bimodule(m), loc)
        return m

    def entwining(self, name, spec, loc):
        A = self.ref("algebras", spec, "algebra", loc)
        C = self.ref("coalgebras", spec, "coalgebra", loc)
        psi = self.arr(self.key(spec, "psi", loc), f"{loc}.psi", (A.dim * C.dim, C.dim * A.dim))
        e = Entwining(A, C, psi, name)
        weak = bool(spec.get("weak", False))
        self.validated(validate_weak_entwining(e) if weak else validate_entwining(e), loc)
        return e

    def comodule_algebra(self, name, spec, loc):
        A = self.ref("algebras", spec, "algebra", loc)
        C = self.ref("coalgebras", spec, "coalgebra", loc)
        rho = self.arr(self.key(spec, "rho", loc), f"{loc}.rho", (A.dim * C.dim, A.dim))
        ca = ComoduleAlgebra(A, C, rho)
        if "splitting" in spec:
            T = ca.tensor
            sigma = self.arr(spec["splitting"], f"{loc}.splitting", (T.quotient_dim, A.dim * C.dim))
            self.inst.splittings[name] = sigma
        return ca

    def coring(self, name, spec, loc):
        F = self.F
        kind = spec.get("kind", "explicit")
        if kind == "explicit":
            A = self.ref("algebras", spec, "algebra", loc)
            n = int(self.key(spec, "dim", loc))
            m = Bimodule(F, n, A, A,
                         self.arr(self.key(spec, "left_action", loc), f"{loc}.left_action", (A.dim, n, n)),
                         self.arr(self.key(spec, "right_action", loc), f"{loc}.right_action", (A.dim, n, n)),
                         name)
            self.validated(validate_bimodule(m), f"{loc} bimodule")
            ext = self.ref("algebra_morphisms", spec, "extension", loc) if spec.get("extension") else None
            c = Coring(m, self.arr(self.key(spec, "coproduct", loc), f"{loc}.coproduct", (n * n, n)),
                       self.arr(self.key(spec, "counit", loc), f"{loc}.counit", (A.dim, n)), name, (), ext)
        elif kind == "canonical":
            c = canonical_coring(self.ref("algebra_morphisms", spec, "extension", loc), name)
        elif kind == "from-entwining":
            c = coring_from_entwining(self.ref("entwinings", spec, "entwining", loc)).with_name(name)
        elif kind == "from-weak":
            c = coring_from_weak(self.ref("entwinings", spec, "entwining", loc), name).coring
        elif kind == "from-precoring":
            c = coring_from_weak_via_precoring(self.ref("entwinings", spec, "entwining", loc), name).coring
        elif kind == "coalgebra":
            c = coalgebra_as_coring(self.ref("coalgebras", spec, "coalgebra", loc), name)
        elif kind == "trivial":
            c = trivial_coring(self.ref("algebras", spec, "algebra", loc), name)
        elif kind == "schneider":
            from .galois import schneider_coring

            c = schneider_coring(self.ref("comodule_algebras", spec, "comodule_algebra", loc)).coring.with_name(name)
        else:
            raise ParseError(f"unknown coring kind {kind!r}", f"{loc}.kind")
        self.validated(validate_coring(c), loc)
        return c

    def element(self, name, spec, loc):
        c = self.ref("corings", spec, "coring", loc)
        self.inst.element_owner[name] = spec["coring"]
        return self.arr(self.key(spec, "coords", loc), f"{loc}.coords", (c.dim,))

    def comodule(self, name, spec, loc):
        F = self.F
        c = self.ref("corings", spec, "coring", loc)
        kind = spec.get("kind", "explicit")
        if kind == "regular":
            m = regular_comodule(c)
        elif kind == "grouplike":
            m = comodule_from_grouplike(c, self.ref("elements", spec, "grouplike", loc))
        elif kind == "cofree":
            m = cofree_comodule(self.ref("bimodules", spec, "module", loc), c, name)
        elif kind == "explicit":
            mod = self.ref("bimodules", spec, "module", loc)
            m = CoringComodule(mod.only_right(), self.arr(self.key(spec, "coaction", loc), f"{loc}.coaction",
                                                          (mod.dim * c.dim, mod.dim)), c, name)
        else:
            raise ParseError(f"unknown comodule kind {kind!r}", f"{loc}.kind")
        m = CoringComodule(m.module, m.coaction_lift, c, name)
        self.validated(validate_comodule(m), loc)
        return m

    def map(self, name, spec, loc):
        return self.arr(spec, loc)

    def cring(self, name, spec, loc):
        F = self.F
        kind = spec.get("kind", "explicit")
        if kind == "from-entwining":
            r = cring_from_entwining(self.ref("entwinings", spec, "entwining", loc), name).cring
        elif kind == "from-surjection":
            r = cring_from_surjection(self.ref("coalgebra_morphisms", spec, "morphism", loc), name)
        elif kind == "from-algebra":
            r = cring_from_algebra(self.ref("algebras", spec, "algebra", loc), name)
        elif kind == "explicit":
            C = self.ref("coalgebras", spec, "coalgebra", loc)
            n = int(self.key(spec, "dim", loc))
            m = CoalgebraComodule(C, n, self.arr(self.key(spec, "right", loc), f"{loc}.right", (n * C.dim, n)),
                                  self.arr(self.key(spec, "left", loc), f"{loc}.left", (C.dim * n, n)), name)
            r = CRing.from_full_product(m, self.arr(self.key(spec, "product", loc), f"{loc}.product", (n, n * n)),
                                        self.arr(self.key(spec, "unit", loc), f"{loc}.unit", (n, C.dim)), name)
        else:
            raise ParseError(f"unknown C-ring kind {kind!r}", f"{loc}.kind")
        self.validated(validate_cring(r), loc)
        return r

    def character(self, name, spec, loc):
        r = self.ref("crings", spec, "cring", loc)
        k = Character(r, self.arr(self.key(spec, "kappa", loc), f"{loc}.kappa", (r.dim,)))
        self.validated(validate_character(k), loc)
        return k

    def run(self) -> Instance:
        handlers = {
            "algebras": self.algebra,
            "coalgebras": self.coalgebra,
            "algebra_morphisms": self.algebra_morphism,
            "coalgebra_morphisms": self.coalgebra_morphism,
            "bimodules": self.bimodule,
            "entwinings": self.entwining,
            "comodule_algebras": self.comodule_algebra,
            "corings": self.coring,
            "elements": self.element,
            "comodules": self.comodule,
            "maps": self.map,
            "crings": self.cring,
            "characters": self.character,
        }
        unknown = [k for k in self.doc if k not in handlers and k not in ("field", "name", "description")]
        if unknown:
            raise ParseError(f"unknown section {unknown[0]!r}", unknown[0])
        for cat in CATEGORIES:
            section = self.doc.get(cat, {})
            if not isinstance(section, dict):
                raise ParseError("section must be an object", cat)
            for name, spec in section.items():
                loc = f"{cat}.{name}"
                if cat != "maps" and not isinstance(spec, dict):
                    raise ParseError("entry must be an object", loc)
                try:
                    obj = handlers[cat](name, spec, loc)
                except (KeyError, TypeError, ValueError) as exc:
                    if isinstance(exc, MalformedInputError):
                        raise
                    raise ParseError(f"bad entry ({exc})", loc) from None
                self.inst.objects[cat][name] = obj
                self._register_support(name, obj)
        return self.inst

    def _register_support(self, name, obj):
        """Constructors may create their own algebra or coalgebra; keep those in
        the table so that every object can be written back by reference."""
        O = self.inst.objects
        if isinstance(obj, Coring) and not any(v is obj.algebra for v in O["algebras"].values()):
            O["algebras"][f"{name}.base"] = obj.algebra
        if isinstance(obj, CRing) and not any(v is obj.coalgebra for v in O["coalgebras"].values()):
            O["coalgebras"][f"{name}.base"] = obj.coalgebra


def _at(loc, idx):
    return loc + "".join(f"[{i}]" for i in idx)


def load_json_text(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object", "line 1 column 1")
    return doc


def parse_document(doc: dict, field_override: FieldSpec | None = None, source: str = "") -> Instance:
    F = field_override or field_from_json(doc.get("field", {"kind": "Q"}))
    inst = _Loader(doc, F).run()
    inst.source = source
    return inst


def parse_instance(path, field_override: FieldSpec | None = None) -> Instance:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(load_json_text(text), field_override, p.name)


# -- writing ---------------------------------------------------------------------


def algebra_to_json(A: Algebra) -> dict:
    F = A.field
    return {"dim": A.dim, "mult": to_json_array(F, A.mult), "unit": to_json_array(F, A.unit)}


def coalgebra_to_json(C: Coalgebra) -> dict:
    F = C.field
    return {"dim": C.dim, "comult": to_json_array(F, C.comult), "counit": to_json_array(F, C.counit)}


def _name_of(table: dict, obj, what: str) -> str:
    for k, v in table.items():
        if v is obj:
            return k
    raise MalformedInputError(f"{what} is not in the object table")


def coring_to_json(c: Coring, inst: Instance) -> dict:
    F = c.field
    out = {
        "kind": "explicit",
        "algebra": _name_of(inst.objects["algebras"], c.algebra, "coring algebra"),
        "dim": c.dim,
        "left_action": to_json_array(F, c.bimodule.left),
        "right_action": to_json_array(F, c.bimodule.right),
        "coproduct": to_json_array(F, c.coproduct_lift),
        "counit": to_json_array(F, c.counit),
    }
    if c.extension is not None:
        try:
            out["extension"] = _name_of(inst.objects["algebra_morphisms"], c.extension, "extension")
        except MalformedInputError:
            pass
    return out


def cring_to_json(r: CRing, inst: Instance) -> dict:
    F = r.field
    return {
        "kind": "explicit",
        "coalgebra": _name_of(inst.objects["coalgebras"], r.coalgebra, "C-ring coalgebra"),
        "dim": r.dim,
        "left": to_json_array(F, r.bicomodule.left),
        "right": to_json_array(F, r.bicomodule.right),
        "product": to_json_array(F, r.product_ext),
        "unit": to_json_array(F, r.unit),
    }


def serialize(inst: Instance) -> dict:
    """Every object in explicit form; reparsing gives equal structure constants."""
    F = inst.field
    O = inst.objects
    doc = {"field": field_to_json(F)}

    def put(cat, name, val):
        doc.setdefault(cat, {})[name] = val

    for n, A in O["algebras"].items():
        put("algebras", n, algebra_to_json(A))
    for n, C in O["coalgebras"].items():
        put("coalgebras", n, coalgebra_to_json(C))
    for n, f in O["algebra_morphisms"].items():
        put("algebra_morphisms", n, {"kind": "explicit", "source": _name_of(O["algebras"], f.source, "source"),
                                     "target": _name_of(O["algebras"], f.target, "target"),
                                     "matrix": to_json_array(F, f.matrix)})
    for n, f in O["coalgebra_morphisms"].items():
        put("coalgebra_morphisms", n, {"source": _name_of(O["coalgebras"], f.source, "source"),
                                       "target": _name_of(O["coalgebras"], f.target, "target"),
                                       "matrix": to_json_array(F, f.matrix)})
    for n, m in O["bimodules"].items():
        spec = {"dim": m.dim}
        if m.left is not None:
            spec["left"] = _name_of(O["algebras"], m.left_algebra, "left algebra")
            spec["left_action"] = to_json_array(F, m.left)
        if m.right is not None:
            spec["right"] = _name_of(O["algebras"], m.right_algebra, "right algebra")
            spec["right_action"] = to_json_array(F, m.right)
        put("bimodules", n, spec)
    for n, e in O["entwinings"].items():
        put("entwinings", n, {"algebra": _name_of(O["algebras"], e.algebra, "algebra"),
                              "coalgebra": _name_of(O["coalgebras"], e.coalgebra, "coalgebra"),
                              "psi": to_json_array(F, e.psi), "weak": not validate_entwining(e).ok})
    for n, ca in O["comodule_algebras"].items():
        spec = {"algebra": _name_of(O["algebras"], ca.algebra, "algebra"),
                "coalgebra": _name_of(O["coalgebras"], ca.coalgebra, "coalgebra"),
                "rho": to_json_array(F, ca.rho)}
        sig = inst.splittings.get(n)
        if sig is not None:
            spec["splitting"] = to_json_array(F, sig)
        put("comodule_algebras", n, spec)
    for n, c in O["corings"].items():
        put("corings", n, coring_to_json(c, inst))
    for n, g in O["elements"].items():
        owner = inst.element_owner[n]
        put("elements", n, {"coring": owner, "coords": to_json_array(F, g)})
    for n, m in O["comodules"].items():
        # comodules reference a bimodule; write the module inline under a derived name
        mod_name = f"{n}__module"
        put("bimodules", mod_name, {"dim": m.dim,
                                    "right": _name_of(O["algebras"], m.coring.algebra, "algebra"),
                                    "right_action": to_json_array(F, m.module.right)})
        put("comodules", n, {"kind": "explicit", "coring": _name_of(O["corings"], m.coring, "coring"),
                             "module": mod_name, "coaction": to_json_array(F, m.coaction_lift)})
    for n, f in O["maps"].items():
        put("maps", n, to_json_array(F, f))
    for n, r in O["crings"].items():
        put("crings", n, cring_to_json(r, inst))
    for n, k in O["characters"].items():
        put("characters", n, {"cring": _name_of(O["crings"], k.cring, "C-ring"), "kappa": to_json_array(F, k.kappa)})
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
