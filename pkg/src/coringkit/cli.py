"""Command line front end.

Every command loads an instance file, delegates to one library call and
prints a report ``{"body": ..., "timing": ...}``.  The body depends only on
the file contents, the command line and the seed.

Exit codes: 0 decided (either way), 2 precondition failure, 3 result not
exhaustive or only probabilistic, 64 usage error, 70 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import fixtures
from .algebra import validate_algebra, validate_bimodule
from .coalgebra import validate_coalgebra
from .coring import (
    DEFAULT_BUDGET,
    canonical_coring,
    coinvariants,
    dual_ring,
    find_grouplikes,
    validate_comodule,
    validate_coring,
)
from .cring import (
    check_dual_forgetful_separable,
    check_dual_induction_separable,
    cring_from_algebra,
    cring_from_entwining,
    cring_from_surjection,
    find_characters,
    invariants_coideal,
    validate_character,
    validate_cring,
)
from .entwining import coring_from_entwining, coring_from_weak, coring_from_weak_via_precoring, validate_entwining, validate_weak_entwining
from .errors import InternalConsistencyError, MalformedInputError, PreconditionError
from .frobenius import DEFAULT_RETRIES, check_frobenius
from .galois import equivalence_check, galois_check, schneider_coring
from .instance import (
    Instance,
    ParseError,
    UnresolvedReference,
    coring_to_json,
    cring_to_json,
    dumps,
    parse_document,
    parse_field_override,
    load_json_text,
    serialize,
    to_json_array,
)
from .separability import (
    check_forgetful_separable,
    check_induction_separable,
    colinearity_residual,
    cosep_idempotent,
    maschke_split,
)
from .algebra import bimodule_invariants

EXIT_OK, EXIT_PRECONDITION, EXIT_UNDECIDED, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3, 64, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers -------------------------------------------------------------------


def _load(args) -> Instance:
    override = parse_field_override(args.field_override) if args.field_override else None
    p = Path(args.instance)
    if p.exists():
        try:
            text = p.read_text()
        except OSError as exc:
            raise MalformedInputError(f"cannot read {p}: {exc.strerror}") from None
        return parse_document(load_json_text(text), override, p.name)
    if args.instance in fixtures.NAMES:
        return fixtures.load(args.instance, override)
    raise UsageError(f"no such instance file or shipped fixture: {args.instance}")


def _need(args, attr):
    v = getattr(args, attr, None)
    if v is None:
        raise UsageError(f"--{attr.replace('_', '-')} is required for this command")
    return v


def _obj(inst, category, name):
    return inst.get(category, name, f"--{category[:-1]}")


def _grouplike(inst, args, coring_name):
    name = _need(args, "grouplike")
    g = _obj(inst, "elements", name)
    owner = inst.element_owner.get(name)
    if owner is not None and owner != coring_name:
        raise UsageError(f"element {name!r} belongs to coring {owner!r}, not {coring_name!r}")
    return g


def _arr(F, a):
    return None if a is None else to_json_array(F, a)


def _verdict_json(F, v, yes, no):
    out = {"verdict": yes if v.feasible else no}
    if v.feasible:
        out["witness"] = v.certificate.to_json() if hasattr(v.certificate, "to_json") else {}
        out["solution_dim"] = v.solution_dim
    else:
        out["infeasibility"] = {k: (bool(x) if isinstance(x, (bool, np.bool_)) else int(x)) for k, x in v.witness.items()}
    return out


# -- commands --------------------------------------------------------------------


def cmd_validate(inst, args):
    validators = {
        "algebras": validate_algebra,
        "coalgebras": validate_coalgebra,
        "bimodules": validate_bimodule,
        "corings": validate_coring,
        "comodules": validate_comodule,
        "crings": validate_cring,
        "characters": validate_character,
        "entwinings": lambda e: validate_entwining(e) if validate_entwining(e).ok else validate_weak_entwining(e),
    }
    objs = {}
    ok = True
    for cat, fn in validators.items():
        for name in sorted(inst.objects[cat]):
            rep = fn(inst.objects[cat][name])
            ok = ok and rep.ok
            objs.setdefault(cat, {})[name] = rep.to_json()
    return {"valid": ok, "objects": objs}, EXIT_OK


BUILDERS = ("canonical", "from-entwining", "from-weak", "from-precoring", "schneider",
            "cring-from-entwining", "cring-from-surjection", "cring-from-algebra")


def cmd_build(inst, args):
    kind = args.what
    F = inst.field
    name = args.name
    if kind == "canonical":
        ext = _obj(inst, "algebra_morphisms", _need(args, "ext"))
        obj, cat = canonical_coring(ext, name or "canonical"), "corings"
    elif kind in ("from-entwining", "from-weak", "from-precoring", "cring-from-entwining"):
        e = _obj(inst, "entwinings", _need(args, "entwining"))
        if kind == "from-entwining":
            obj, cat = coring_from_entwining(e).with_name(name or "AoC"), "corings"
        elif kind == "from-weak":
            obj, cat = coring_from_weak(e, name or "Im p").coring, "corings"
        elif kind == "from-precoring":
            obj, cat = coring_from_weak_via_precoring(e, name or "Im p").coring, "corings"
        else:
            obj, cat = cring_from_entwining(e, name or "CoA").cring, "crings"
    elif kind == "schneider":
        ca = _obj(inst, "comodule_algebras", _need(args, "comodule_algebra"))
        obj, cat = schneider_coring(ca).coring.with_name(name or "schneider"), "corings"
    elif kind == "cring-from-surjection":
        obj, cat = cring_from_surjection(_obj(inst, "coalgebra_morphisms", _need(args, "morphism")), name or "CoBC"), "crings"
    elif kind == "cring-from-algebra":
        obj, cat = cring_from_algebra(_obj(inst, "algebras", _need(args, "algebra")), name or "A"), "crings"
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown build target {kind}")
    name = name or {"corings": "C", "crings": "R"}[cat] + "_built"
    if name in inst.objects[cat]:
        raise UsageError(f"{cat[:-1]} {name!r} already exists")
    inst.objects[cat][name] = obj
    if cat == "corings" and not any(v is obj.algebra for v in inst.objects["algebras"].values()):
        inst.objects["algebras"][f"{name}.base"] = obj.algebra
    if cat == "crings" and not any(v is obj.coalgebra for v in inst.objects["coalgebras"].values()):
        inst.objects["coalgebras"][f"{name}.base"] = obj.coalgebra
    rep = validate_coring(obj) if cat == "corings" else validate_cring(obj)
    spec = coring_to_json(obj, inst) if cat == "corings" else cring_to_json(obj, inst)
    body = {"built": {"category": cat, "name": name, "dim": obj.dim, "valid": rep.ok, "object": spec}}
    if args.output:
        Path(args.output).write_text(dumps(serialize(inst)))
        body["written"] = Path(args.output).name
    return body, EXIT_OK


def cmd_check(inst, args):
    what = args.what
    F = inst.field
    if what in ("dual-separable-induction", "dual-separable-forgetful"):
        r = _obj(inst, "crings", _need(args, "cring"))
        if what == "dual-separable-induction":
            v = check_dual_induction_separable(r)
            body = _verdict_json(F, v, "separable", "not-separable")
            if v.feasible:
                body["witness"] = {"e": _arr(F, v.certificate.e.reshape(-1))}
        else:
            v = check_dual_forgetful_separable(r)
            body = _verdict_json(F, v, "separable", "not-separable")
            if v.feasible:
                body["witness"] = {"gamma": _arr(F, v.certificate.gamma)}
        return body, EXIT_OK
    cname = _need(args, "coring")
    c = _obj(inst, "corings", cname)
    if what == "separable-induction":
        return _verdict_json(F, check_induction_separable(c), "separable", "not-separable"), EXIT_OK
    if what == "coseparable":
        v = check_forgetful_separable(c)
        body = _verdict_json(F, v, "coseparable", "not-coseparable")
        if v.feasible:
            body["witness"]["pi"] = cosep_idempotent(v.certificate).to_json()["pi"]
        return body, EXIT_OK
    if what == "frobenius":
        v = check_frobenius(c, seed=args.seed, retries=args.retries, budget=args.budget, symbolic_det=args.symbolic)
        body = {
            "verdict": v.status,
            "method": v.method,
            "exhaustive": v.exhaustive,
            "probabilistic": v.probabilistic,
            "candidates_scanned": v.candidates_scanned,
            "candidates_total": v.candidates_total,
            "e": _arr(F, v.e),
            "phi": _arr(F, v.phi),
            "phi_inv": _arr(F, v.phi_inv),
            "notes": list(v.notes),
        }
        undecided = v.status == "NoBijectiveE" and (v.probabilistic or not v.exhaustive)
        return body, EXIT_UNDECIDED if undecided else EXIT_OK
    if what == "galois":
        gd = galois_check(c, _grouplike(inst, args, cname))
        return {
            "verdict": "galois" if gd.is_galois else "not-galois",
            "coinvariants_dim": gd.B.dim,
            "coinvariants_basis": _arr(F, gd.inclusion.matrix),
            "chi": _arr(F, gd.chi),
            "chi_inv": _arr(F, gd.chi_inv),
            "failures": list(gd.failures),
            "warnings": list(gd.warnings),
        }, EXIT_OK
    if what == "equivalence":
        rep = equivalence_check(c, _grouplike(inst, args, cname), n=args.family_size, seed=args.seed)
        body = rep.to_json()
        body["verdict"] = "equivalence-on-family" if rep.family_equivalence else "fails-on-family"
        return body, EXIT_OK
    raise UsageError(f"unknown check {what}")  # pragma: no cover


def cmd_find(inst, args):
    what = args.what
    F = inst.field
    if what == "coinvariants":
        m = _obj(inst, "comodules", _need(args, "comodule"))
        cname = next(k for k, v in inst.objects["corings"].items() if v is m.coring)
        basis = coinvariants(m, _grouplike(inst, args, cname))
        return {"dim": basis.shape[1], "basis": _arr(F, basis.T)}, EXIT_OK
    if what in ("characters", "coideal"):
        r = _obj(inst, "crings", _need(args, "cring"))
        if what == "characters":
            found, exhaustive = find_characters(r, budget=args.budget)
            body = {"characters": [_arr(F, k.kappa) for k in found], "exhaustive": exhaustive}
            return body, EXIT_OK if exhaustive else EXIT_UNDECIDED
        res = invariants_coideal(r, _obj(inst, "characters", _need(args, "character")))
        return {
            "action": _arr(F, res.action),
            "coideal_dim": res.ideal.shape[1],
            "coideal_basis": _arr(F, res.ideal.T),
            "quotient": {"dim": res.quotient.dim, "comult": _arr(F, res.quotient.comult),
                         "counit": _arr(F, res.quotient.counit)},
        }, EXIT_OK
    c = _obj(inst, "corings", _need(args, "coring"))
    if what == "grouplikes":
        res = find_grouplikes(c, budget=args.budget)
        return res.to_json(F), EXIT_OK if res.exhaustive else EXIT_UNDECIDED
    if what == "invariants":
        inv = bimodule_invariants(c.bimodule)
        return {"dim": inv.shape[1], "basis": _arr(F, inv.T)}, EXIT_OK
    if what == "dual-ring":
        R = dual_ring(c)
        return {"dim": R.dim, "mult": _arr(F, R.algebra.mult), "unit": _arr(F, R.algebra.unit),
                "basis": [_arr(F, b) for b in R.hom.basis]}, EXIT_OK
    raise UsageError(f"unknown find target {what}")  # pragma: no cover


def cmd_split_epi(inst, args):
    F = inst.field
    cname = _need(args, "coring")
    c = _obj(inst, "corings", cname)
    M = _obj(inst, "comodules", _need(args, "source"))
    N = _obj(inst, "comodules", _need(args, "target"))
    if M.coring is not c or N.coring is not c:
        raise UsageError("both comodules must be over the chosen coring")
    f = _obj(inst, "maps", _need(args, "map"))
    s = _obj(inst, "maps", _need(args, "section"))
    if f.shape != (N.dim, M.dim) or s.shape != (M.dim, N.dim):
        raise PreconditionError("map or section has the wrong shape", axiom="shape")
    v = check_forgetful_separable(c)
    if not v.feasible:
        raise PreconditionError("the coring is not coseparable; no cointegral to average with", axiom="coseparable")
    st = maschke_split(f, s, v.certificate, M, N)
    res = colinearity_residual(st, N, M)
    return {"verdict": "split", "section": _arr(F, st),
            "residual_zero": not np.any(res), "f_after_section_is_identity": bool(np.all(F.dot(f, st) == F.eye(N.dim)))}, EXIT_OK


def cmd_report(inst, args):
    F = inst.field
    cname = _need(args, "coring")
    c = _obj(inst, "corings", cname)
    code = EXIT_OK
    body = {"validation": validate_coring(c).to_json()}
    body["separable_induction"] = _verdict_json(F, check_induction_separable(c), "separable", "not-separable")
    body["coseparable"] = _verdict_json(F, check_forgetful_separable(c), "coseparable", "not-coseparable")
    fv = check_frobenius(c, seed=args.seed, retries=args.retries, budget=args.budget)
    body["frobenius"] = {"verdict": fv.status, "method": fv.method, "exhaustive": fv.exhaustive,
                         "probabilistic": fv.probabilistic, "e": _arr(F, fv.e)}
    if fv.status == "NoBijectiveE" and (fv.probabilistic or not fv.exhaustive):
        code = EXIT_UNDECIDED
    gs = find_grouplikes(c, budget=args.budget)
    body["grouplikes"] = gs.to_json(F)
    if not gs.exhaustive:
        code = EXIT_UNDECIDED
    gal = []
    for g in gs.grouplikes[:4]:
        gd = galois_check(c, g)
        gal.append({"grouplike": _arr(F, g), "galois": gd.is_galois, "coinvariants_dim": gd.B.dim,
                    "failures": list(gd.failures)})
    body["galois"] = gal
    return body, code


COMMANDS = {
    "validate": cmd_validate,
    "build": cmd_build,
    "check": cmd_check,
    "find": cmd_find,
    "split-epi": cmd_split_epi,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field-override", help="reread all scalars over another field (Q, F5, ...)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--retries", type=int, default=DEFAULT_RETRIES)
    common.add_argument("--output", help="report file (for build: the extended instance file)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", default="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    for opt in ("coring", "grouplike", "cring", "character", "comodule", "entwining", "ext", "morphism",
                "algebra", "comodule-algebra", "source", "target", "map", "section", "name"):
        common.add_argument(f"--{opt}")
    common.add_argument("--family-size", type=int, default=3)
    common.add_argument("--symbolic", action="store_true", help="exact symbolic determinant search over Q")

    p = _Parser(prog="coringkit", description="Exact decision procedures for corings and C-rings.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    targets = {
        "validate": None,
        "build": BUILDERS,
        "check": ("separable-induction", "coseparable", "frobenius", "galois", "equivalence",
                  "dual-separable-induction", "dual-separable-forgetful"),
        "find": ("grouplikes", "invariants", "coinvariants", "dual-ring", "characters", "coideal"),
        "split-epi": None,
        "report": None,
    }
    for cmd, choices in targets.items():
        sp = sub.add_parser(cmd, parents=[common])
        if choices:
            sp.add_argument("what", choices=choices)
        sp.add_argument("instance", help="instance JSON file or the name of a shipped fixture")
    return p


def _echo(args) -> dict:
    keep = {}
    for k, v in sorted(vars(args).items()):
        if k in ("output", "format", "instance", "command", "what") or v is None or v is False:
            continue
        keep[k] = v
    return keep


def _text(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    return lines


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, dict) for x in v)


def run(argv=None) -> tuple[dict, int]:
    """Parse and execute; returns (report, exit code) without printing."""
    start = time.perf_counter()
    args = None
    try:
        args = build_parser().parse_args(argv)
        inst = _load(args)
        body, code = COMMANDS[args.command](inst, args)
        head = {"command": " ".join(x for x in (args.command, getattr(args, "what", None)) if x),
                "arguments": _echo(args), "instance": {"name": inst.source, "digest": inst.digest},
                "seed": args.seed, "exit_code": code}
        body = {**head, "result": body}
    except UsageError as exc:
        code, body = EXIT_USAGE, {"error": {"kind": "usage", "message": str(exc)}}
    except UnresolvedReference as exc:
        code, body = EXIT_USAGE, {"error": {"kind": "unresolved-reference", "message": str(exc)}}
    except ParseError as exc:
        code, body = EXIT_USAGE, {"error": {"kind": "syntax", "message": str(exc), "location": exc.location}}
    except MalformedInputError as exc:
        code, body = EXIT_USAGE, {"error": {"kind": "malformed", "message": str(exc)}}
    except PreconditionError as exc:
        err = {"kind": "precondition", "message": str(exc), "axiom": exc.axiom}
        if exc.report is not None:
            err["report"] = exc.report.to_json()
        code, body = EXIT_PRECONDITION, {"error": err}
    except InternalConsistencyError as exc:
        code, body = EXIT_INTERNAL, {"error": {"kind": "internal", "message": str(exc)}}
    if "error" in body and args is not None:
        body["command"] = " ".join(x for x in (args.command, getattr(args, "what", None)) if x)
        body["exit_code"] = code
    report = {"body": body, "timing": {"seconds": round(time.perf_counter() - start, 6)}}
    return report, code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, code = run(argv)
    fmt = "text" if "--text" in argv else "json"
    out = None
    if "--output" in argv and not (len(argv) and argv[0] == "build"):
        out = argv[argv.index("--output") + 1] if argv.index("--output") + 1 < len(argv) else None
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    else:
        text = "\n".join(_text(report["body"]) + [f"timing: {report['timing']['seconds']}s"]) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
