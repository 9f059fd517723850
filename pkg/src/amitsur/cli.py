"""Command-line front end.

Exit codes: 0 success; 1 when a query posed as a test (``--expect-zero``)
finds a nonzero answer; 2 for invalid input or a failed verification
assertion.  Every command supports ``--format text|json``.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import amitsur as am
from .cohom import cohomology
from .fingroup import FinGroup, builtin
from .gmod import GModule, GTorus, dual, tensor, trivial, trivial_cyclic
from .intlat import FgAbGroup, format_invariants
from .resolve import FreeResolution, custom_resolution, extend_resolution


class InputError(Exception):
    pass


# ----------------------------------------------------------------------
# parsing helpers

def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError("cannot read %s: %s" % (path, e))


def _params(text):
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise InputError("bad parameter %r (expected key=value)" % part)
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_group(text: str) -> FinGroup:
    text = text[len("builtin:"):] if text.startswith("builtin:") else text
    name, _, rest = text.partition(":")
    if name in ("klein", "cyclic", "m16", "modular16"):
        try:
            return builtin(name, _params(rest))
        except ValueError as e:
            raise InputError(str(e))
    data = _load_json(text)
    try:
        return am.group_from_data(data)
    except (KeyError, ValueError) as e:
        raise InputError("invalid group file: %s" % e)


def parse_module(text: str, G: FinGroup) -> GModule:
    if text in ("trivialZ", "Z"):
        return trivial(G, 1, label="Z")
    if text.startswith("trivial:"):
        try:
            return trivial_cyclic(G, int(text.split(":", 1)[1]))
        except ValueError as e:
            raise InputError(str(e))
    data = _load_json(text)
    return module_from_data(data, G)


def module_from_data(data, G: FinGroup) -> GModule:
    """{"schema": "amitsur/module-v1", "generators": k, "relations": [[...]], "action": {gen: matrix}}."""
    if data.get("schema") != "amitsur/module-v1":
        raise InputError("not a module document (schema tag missing)")
    try:
        rank = int(data["generators"])
        rels = data.get("relations")
        U = FgAbGroup(rank, rels) if rels else FgAbGroup(rank)
        return GModule.from_generators(G, U, data["action"], label=data.get("label"))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("invalid module: %s" % e)


def parse_presentation(text: str) -> am.EquivariantPresentation:
    if text.startswith("example:"):
        name, _, rest = text[len("example:"):].partition(":")
        try:
            return am.builtin_presentation(name, _params(rest))
        except ValueError as e:
            raise InputError(str(e))
    data = _load_json(text)
    try:
        return am.EquivariantPresentation.from_data(data)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("invalid presentation: %s" % e)


def parse_model(text: str) -> am.UnitModel:
    if text == "divisible":
        return am.UnitModel.divisible()
    if text == "rational":
        return am.rational_model()
    if text.startswith("fg:"):
        rest = text[3:]
        head = rest.split(",")[0]
        if head.isdigit():
            parts = rest.split(",")
            return am.UnitModel.fg(int(parts[0]), [p for p in parts[1:] if p])
        data = _load_json(rest)
        if data.get("schema") not in (None, "amitsur/model-v1"):
            raise InputError("not a model document")
        return am.UnitModel.from_data(data)
    raise InputError("unknown model %r (use divisible, rational, fg:N[,gen...] or fg:FILE)" % text)


def parse_torus(text: str, p: am.EquivariantPresentation) -> GTorus:
    if text in ("Gm", "gm"):
        return GTorus.gm(p.group)
    if text in ("NS", "T_NS", "tns"):
        pic, _, free = p.pic()
        if not free:
            raise InputError("Pic has torsion; the Neron-Severi torus is undefined")
        return GTorus.neron_severi(pic)
    data = _load_json(text)
    if data.get("schema") != "amitsur/torus-v1":
        raise InputError("not a torus document (schema tag missing)")
    return GTorus(module_from_data(data["cochar"], p.group))


def parse_degrees(text: str):
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError("bad degree range %r" % text)


# ----------------------------------------------------------------------
# commands

def cmd_cohomology(args):
    G = parse_group(args.group)
    M = parse_module(args.module, G)
    n = args.degree
    if n < 0:
        raise InputError("degree must be non-negative")
    if args.resolution == "auto":
        P = am.standard_resolution(G, n + 1)
    else:
        data = _load_json(args.resolution)
        P = extend_resolution(custom_resolution(G, data), n + 1)
    H = cohomology(G, M, n, P)
    return 0, {"command": "cohomology", "group": G.label, "degree": n,
               "invariants": H.invariants, "text": format_invariants(H.invariants),
               "resolution": P.label}


def _amitsur_rows(p, torus, model, degrees):
    E = am.AlphaExtension(p, torus, model)
    rows = []
    for n in degrees:
        if n < 2:
            raise InputError("degrees must be at least 2")
        g = E.amitsur_group(n)
        rows.append({"degree": n, "invariants": g.invariants, "order": g.order(),
                     "text": format_invariants(g.invariants),
                     "shifted_to": n + 1 if model.is_divisible else None})
    return rows


def cmd_amitsur(args):
    p = parse_presentation(args.presentation)
    try:
        p.validate()
    except ValueError as e:
        raise InputError("presentation invalid: %s" % e)
    model = parse_model(args.model)
    torus = parse_torus(args.torus, p)
    try:
        rows = _amitsur_rows(p, torus, model, parse_degrees(args.degrees))
    except ValueError as e:
        raise InputError(str(e))
    code = 1 if args.expect_zero and any(r["invariants"] for r in rows) else 0
    return code, {"command": "amitsur", "presentation": p.label, "model": model.to_data(),
                  "torus": torus.label, "degrees": rows}


def cmd_beta(args):
    p = parse_presentation(args.presentation)
    try:
        p.validate()
    except ValueError as e:
        raise InputError("presentation invalid: %s" % e)
    model = parse_model(args.model)
    try:
        b = am.beta(p, model)
    except ValueError as e:
        raise InputError(str(e))
    code = 1 if args.expect_zero and b.nonzero else 0
    return code, {"command": "beta", "presentation": p.label, "model": model.to_data(),
               "nonzero": b.nonzero, "shifted": b.shifted,
               "class": list(b.cls.coords()), "group": b.cls.group.invariants,
               "cocycle": [str(x) for x in b.cls.cocycle],
               "text": "beta %s (class %s in %s)" % ("nonzero" if b.nonzero else "zero",
                                                     list(b.cls.coords()),
                                                     format_invariants(b.cls.group.invariants))}


def cmd_verify_resolution(args):
    if args.file in ("bundled:m16", "m16"):
        G = builtin("m16")
        data = am.bundled_data("m16_resolution.json")
    else:
        data = _load_json(args.file)
        if data.get("schema") != "amitsur/resolution-v1":
            raise InputError("not a resolution document (schema tag missing)")
        G = am.group_from_data(data.get("group", {"builtin": "m16"}))
    try:
        P = custom_resolution(G, data)
    except (KeyError, ValueError) as e:
        raise InputError("invalid resolution: %s" % e)
    rep = P.validate(raise_on_error=False)
    out = {"command": "verify-resolution", "label": P.label, "ranks": P.ranks, **rep}
    if args.extend:
        R = extend_resolution(P, args.extend)
        out["extended_ranks"] = R.ranks
        out["extended_exact_degrees"] = R.validate(raise_on_error=False)["exact_degrees"]
    return (0 if rep["valid"] else 2), out


def cmd_dp2_verify(args):
    if args.dataset in ("bundled", None):
        ds = am.DP2Dataset.bundled()
    else:
        try:
            ds = am.DP2Dataset(_load_json(args.dataset))
        except (KeyError, ValueError) as e:
            raise InputError("invalid dataset: %s" % e)
    rep = am.dp2_verify(ds)
    rep["command"] = "dp2-verify"
    return (0 if rep["pass"] else 2), rep


def cmd_bogomolov(args):
    G = parse_group(args.group)
    degrees = parse_degrees(args.degree)
    if args.coeff in ("trivialZ", "Z"):
        L, shift, note = trivial(G, 1), 0, None
    elif args.coeff == "tns":
        if G.order != 16:
            raise InputError("tns coefficients come from the bundled M16 dataset")
        ds = am.DP2Dataset.bundled()
        G = ds.G
        picd = dual(ds.pic())
        if args.model == "divisible":
            L, shift, note = picd, 1, "divisible model, shifted to integral Pic-dual coefficients"
        else:
            L, shift, note = tensor(ds.model.module(G), picd), 0, "finitely generated model"
    else:
        L, shift, note = parse_module(args.coeff, G), 0, None
    rows = []
    for n in degrees:
        if n < 1:
            raise InputError("degree must be positive")
        K = am.bogomolov_kernel(G, L, n + shift)
        rows.append({"degree": n, "invariants": K.invariants, "text": format_invariants(K.invariants)})
    return 0, {"command": "bogomolov-kernel", "group": G.label, "coeff": args.coeff,
               "degrees": rows, "note": note}


# ----------------------------------------------------------------------
# output

def render_text(out):
    cmd = out.get("command")
    lines = []
    if cmd == "amitsur":
        lines.append("presentation %s, torus %s, model %s" % (out["presentation"], out["torus"], out["model"]["mode"]))
        for r in out["degrees"]:
            extra = " (inside integral H^%d)" % r["shifted_to"] if r["shifted_to"] else ""
            lines.append("Am^%d = %s%s" % (r["degree"], r["text"], extra))
    elif cmd == "verify-resolution":
        lines.append("resolution %s ranks %s" % (out["label"], out["ranks"]))
        lines.append("d o d = 0: %s" % ("pass" if out["d_squared_zero"] else "FAIL"))
        lines.append("exact in degrees %s" % out["exact_degrees"])
        lines.append("H_0 = %s" % format_invariants(out["H0"] or []))
        for f in out["failures"]:
            lines.append("FAIL %s" % f)
        if "extended_ranks" in out:
            lines.append("extended ranks %s, exact in degrees %s" % (out["extended_ranks"], out["extended_exact_degrees"]))
        lines.append("PASS" if out["valid"] else "FAIL")
    elif cmd == "dp2-verify":
        for f in out["dataset_failures"]:
            lines.append("FAIL dataset: %s" % f)
        for mode, r in out["modes"].items():
            lines.append("[%s]" % mode)
            lines.append("  (i) 2-cocycle: %s" % _pf(r.get("cocycle")))
            if "order" in r:
                lines.append("  (ii) order %d: %s" % (r["order"], _pf(r["order"] == 2)))
                for k, v in r["restrictions_zero"].items():
                    lines.append("  (iii) restriction to %s is zero: %s" % (k, _pf(v)))
                lines.append("  (iv) restriction kernel = %s, contains the class: %s"
                             % (format_invariants(r["kernel"]), _pf(r["kernel_contains"])))
                lines.append("  (v) zero on every abelian subgroup: %s" % _pf(r["all_abelian_restrictions_zero"]))
        lines.append("PASS" if out["pass"] else "FAIL")
    elif cmd == "beta":
        lines.append(out["text"])
        lines.append("representative cocycle: [%s]" % ", ".join(out["cocycle"]))
    elif cmd == "bogomolov-kernel":
        for r in out["degrees"]:
            lines.append("B^%d = %s" % (r["degree"], r["text"]))
        if out.get("note"):
            lines.append("(%s)" % out["note"])
    elif "text" in out:
        lines.append(out["text"])
        if out.get("note"):
            lines.append("(%s)" % out["note"])
    else:
        lines.append(json.dumps(out))
    return "\n".join(lines)


def _pf(x):
    return "pass" if x else "FAIL"


def build_parser():
    ap = argparse.ArgumentParser(prog="amitsur", description="Group cohomology and Amitsur-group computations")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", help="H^n(G, M)")
    c.add_argument("--group", required=True)
    c.add_argument("--module", default="trivialZ")
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--resolution", default="auto")
    c.set_defaults(func=cmd_cohomology)

    a = sub.add_parser("amitsur", help="Am^n for a presentation")
    a.add_argument("--presentation", required=True)
    a.add_argument("--torus", default="Gm")
    a.add_argument("--model", default="divisible")
    a.add_argument("--degrees", default="2..6")
    a.add_argument("--expect-zero", action="store_true", help="exit 1 if any group is nonzero")
    a.set_defaults(func=cmd_amitsur)

    b = sub.add_parser("beta", help="the universal torsor obstruction")
    b.add_argument("--presentation", required=True)
    b.add_argument("--model", default="divisible")
    b.add_argument("--expect-zero", action="store_true", help="exit 1 if beta is nonzero")
    b.set_defaults(func=cmd_beta)

    v = sub.add_parser("verify-resolution", help="validate a resolution file")
    v.add_argument("--file", default="bundled:m16")
    v.add_argument("--extend", type=int, default=0)
    v.set_defaults(func=cmd_verify_resolution)

    d = sub.add_parser("dp2-verify", help="check the degree-2 del Pezzo dataset")
    d.add_argument("--dataset", default="bundled")
    d.set_defaults(func=cmd_dp2_verify)

    k = sub.add_parser("bogomolov-kernel", help="intersection of restriction kernels")
    k.add_argument("--group", default="builtin:m16")
    k.add_argument("--coeff", default="trivialZ")
    k.add_argument("--degree", required=True, help="a degree, a list 2,3 or a range 2..5")
    k.add_argument("--model", default="divisible")
    k.set_defaults(func=cmd_bogomolov)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        code, out = args.func(args)
    except (InputError, ValueError) as e:
        out = {"command": args.command, "error": str(e)}
        code = 2
    if args.format == "json":
        print(json.dumps(out, indent=1, sort_keys=True, default=str))
    elif "error" in out:
        print("error: %s" % out["error"], file=sys.stderr)
    else:
        print(render_text(out))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
