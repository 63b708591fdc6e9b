"""Command line entry point: ``relweyl {table,components,verify-sln,restrict}``.

Exit status 0 on success, 1 when a verification fails, 2 on bad input.
An optional ``--input`` JSON document supplies defaults::

    {"type": "B3" | {"cartan": [[2, -1], [-1, 2]]}, "levi": [1, 3],
     "p": 5, "q": 25, "twist": "s1"}

Flags given on the command line win over the document.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from itertools import permutations
from typing import Sequence

from .companion import (CompanionError, companion_equations, component_count, free_rank,
                        phi_base_sign)
from .frobenius import (FrobeniusAction, FrobeniusError, TwistDatum, restrict_via,
                        restriction_label)
from .lattice_core import LatticeError
from .phi import PhiError, table_generate
from .root_datum import (RootDatum, RootDatumError, build_simply_connected,
                         center_component_group)
from .sln_oracle import (GF, RATIONALS, OracleError, random_o_point, verify_class,
                         verify_det_identity, verify_multiplication_matrix)
from .weyl import WeylError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_INPUT_ERRORS = (RootDatumError, CompanionError, PhiError, FrobeniusError, WeylError,
                 LatticeError, OracleError, ValueError)


class InputError(ValueError):
    pass


# ------------------------------------------------------------ arguments

def _ints(text: str | None) -> tuple[int, ...]:
    if text is None or not text.strip():
        return ()
    try:
        return tuple(int(t) for t in re.split(r"[,\s]+", text.strip()) if t)
    except ValueError as exc:
        raise InputError(f"bad index list {text!r}") from exc


def _word(text) -> tuple[int, ...]:
    """Accepts "s1 s3", "s1s3", "1,3", a JSON list, or "" / "1" for the identity."""
    if text is None:
        return ()
    if isinstance(text, (list, tuple)):
        return tuple(int(t) for t in text)
    text = text.strip()
    if text in ("", "1", "e", "id"):
        return ()
    if "s" in text:
        parts = re.findall(r"s(\d+)", text)
        if re.sub(r"s\d+|[\s*.,]", "", text):
            raise InputError(f"bad twist word {text!r}")
        return tuple(int(t) for t in parts)
    return _ints(text)


def _load_document(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read input document: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    unknown = set(doc) - {"type", "levi", "p", "q", "twist", "via", "inner_twist"}
    if unknown:
        raise InputError(f"unknown keys in input document: {sorted(unknown)}")
    return doc


def _datum(args, doc: dict) -> tuple[RootDatum, str]:
    if args.type is not None:
        if args.rank is None and not re.search(r"\d", args.type):
            raise InputError("--rank is required with --type")
        label = args.type if args.rank is None else f"{args.type}{args.rank}"
        return build_simply_connected(label), label
    kind = doc.get("type")
    if isinstance(kind, str):
        return build_simply_connected(kind), kind
    if isinstance(kind, dict) and "cartan" in kind:
        rd = build_simply_connected(kind["cartan"])
        return rd, str(rd.cartan_type or rd.label)
    raise InputError("no root datum: give --type/--rank or an input document")


def _pick(flag, doc: dict, key: str, default=None):
    return flag if flag is not None else doc.get(key, default)


def _seed() -> int:
    raw = os.environ.get("RELWEYL_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"RELWEYL_SEED must be an integer, got {raw!r}") from exc


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


# ------------------------------------------------------------ rendering

def render_dynkin(rd: RootDatum, levi: Sequence[int]) -> str:
    """Nodes in order, '#' in the Levi and 'o' outside; extra bonds listed below."""
    a = rd.cartan
    marks = {i: ("#" if i in levi else "o") for i in rd.nodes()}
    line, extra = [], []
    for i in rd.nodes():
        line.append(f"{marks[i]}{i}")
        if i < rd.rank:
            m = a[i - 1][i] * a[i][i - 1]
            if m == 0:
                line.append("   ")
            else:
                bond = {1: "---", 2: "===", 3: "=3="}.get(m, "???")
                if m > 1:
                    bond = bond[:2] + ("<" if abs(a[i - 1][i]) < abs(a[i][i - 1]) else ">")
                line.append(bond)
    for i in rd.nodes():
        for j in range(i + 2, rd.rank + 1):
            if a[i - 1][j - 1]:
                extra.append(f"  {marks[i]}{i} --- {marks[j]}{j}")
    return "".join(line) + ("\n" + "\n".join(extra) if extra else "")


def _format_row(rd: RootDatum, row) -> str:
    vals = ", ".join(f"{v['node']}: {v['value_coords']} (order {v['value_order']})"
                     for v in row.generator_values())
    center = "x".join(f"Z/{n}" for n in row.center.invariant_factors) or "1"
    return (f"{row.group} L={list(row.levi)} W_G(L)={row.relative_type} Z(L)={center}\n"
            f"{render_dynkin(rd, row.levi)}\n  phi: {vals or '(no generators)'}")


# ------------------------------------------------------------- commands

def cmd_table(args, doc) -> int:
    rd, label = _datum(args, doc)
    p = _pick(args.p, doc, "p")
    rows = table_generate(rd, p)
    if args.json:
        _emit({"group": label, "p": p, "rows": [r.to_json() for r in rows]})
    else:
        print("\n\n".join(_format_row(rd, r) for r in rows) if rows else f"{label}: no rows")
    return EXIT_OK


def cmd_components(args, doc) -> int:
    rd, label = _datum(args, doc)
    levi = _ints(args.levi) if args.levi is not None else tuple(doc.get("levi", ()))
    p = _pick(args.p, doc, "p")
    if p is None:
        raise InputError("--p is required")
    sys_ = companion_equations(rd, levi)
    count = component_count(sys_, p)
    sign = phi_base_sign(rd, levi, p)
    _emit({"group": label, "levi": list(rd.check_levi(levi)),
           "component_count": count, "free_rank": free_rank(sys_),
           "n": center_component_group(rd, levi).order // count,
           "phi_sign": 1 if sign.is_zero else -1})
    return EXIT_OK


def cmd_verify_sln(args, doc) -> int:
    k, d, m = args.k, args.d, args.samples
    if k < 1 or d < 1 or m < 1:
        raise InputError("k, d and samples must be positive")
    if args.field == "rational":
        field = RATIONALS
    else:
        try:
            field = GF(int(args.field))
        except ValueError as exc:
            raise InputError(f"--field must be 'rational' or a prime, got {args.field!r}") from exc
        if (field.q - 1) % (2 * d) and d > 1:
            raise InputError(f"q = {field.q} must be 1 mod {2 * d} to hold the needed roots of unity")
    rng = random.Random(_seed())
    checks = failures = 0
    for _ in range(m):
        z = random_o_point(k, field, rng)
        for name, ok in (("det", verify_det_identity(z, d)),
                         ("companion", verify_multiplication_matrix(z, d))):
            checks += 1
            if not ok:
                failures += 1
                print(f"FAIL {name} at z={[str(t) for t in z]}", file=sys.stderr)
        for w in permutations(range(k)):
            checks += 1
            try:
                verify_class(w, z, d, field)
            except OracleError as exc:
                failures += 1
                print(f"FAIL class w={w}: {exc}", file=sys.stderr)
    _emit({"k": k, "d": d, "field": str(field), "samples": m, "seed": _seed(),
           "checks": checks, "failures": failures})
    return EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_restrict(args, doc) -> int:
    rd, label = _datum(args, doc)
    levi = _ints(args.levi) if args.levi is not None else tuple(doc.get("levi", ()))
    p, q = _pick(args.p, doc, "p"), _pick(args.q, doc, "q")
    if q is None:
        raise InputError("--q is required")
    frob = FrobeniusAction(rd, int(q))
    word = _word(_pick(args.twist, doc, "twist"))
    via = args.via if args.via is not None else doc.get("via")
    if via is None:
        label_ = restriction_label(TwistDatum.from_word(rd, levi, word), frob, p)
        _emit(label_.to_json())
        return EXIT_OK
    via = _ints(via) if isinstance(via, str) else tuple(via)
    inner = TwistDatum.from_word(rd, levi, _word(_pick(args.inner_twist, doc, "inner_twist")))
    outer = TwistDatum.from_word(rd, via, word)
    direct, composite = restrict_via(rd, levi, via, inner.w, outer.w, frob, p)
    same = direct.element == composite.element
    out = direct.to_json()
    out.update(via=list(via), composite_label_coords=list(composite.element.coords),
               transitive=same)
    _emit(out)
    return EXIT_OK if same else EXIT_FAIL


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relweyl", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, levi=True, prime=True):
        sp.add_argument("--input", help="JSON input document")
        sp.add_argument("--type", help="family letter (with --rank) or full label like B3")
        sp.add_argument("--rank", type=int)
        if levi:
            sp.add_argument("--levi", help="comma separated simple root indices")
        if prime:
            sp.add_argument("--p", type=int, help="characteristic")

    sp = sub.add_parser("table", help="phi values on every cuspidal Levi")
    common(sp, levi=False)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("components", help="components of the companion variety")
    common(sp)
    sp.set_defaults(func=cmd_components)

    sp = sub.add_parser("verify-sln", help="exact SL_n checks on random points")
    sp.add_argument("--input", help=argparse.SUPPRESS)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--field", default="rational", help="'rational' or a prime q")
    sp.add_argument("--samples", type=int, default=5)
    sp.set_defaults(func=cmd_verify_sln)

    sp = sub.add_parser("restrict", help="label of the restricted regular unipotent class")
    common(sp)
    sp.add_argument("--q", type=int)
    sp.add_argument("--twist", help="word in white nodes, e.g. 's2' or '2'")
    sp.add_argument("--via", help="intermediate Levi M' (checks transitivity)")
    sp.add_argument("--inner-twist", dest="inner_twist", help="twist of M inside M'")
    sp.set_defaults(func=cmd_restrict)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        doc = _load_document(getattr(args, "input", None))
        return args.func(args, doc)
    except (InputError, *_INPUT_ERRORS) as exc:
        print(f"relweyl: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
