"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 resource cap exceeded. Reports are canonical JSON (sorted keys) on stdout
or in the file given by --out.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import __version__
from .config import Caps, current_caps, parse_caps
from .errors import MilefError, ResourceCapError, VerificationError
from .exactgeom import HPolyhedron, VPolytope, from_json, parse_rational, to_json, vertices
from .exactgeom.serialize import dumps
from .formats import (
    bundle_from_json,
    bundle_to_json,
    gap_to_json,
    lef_report_to_json,
    load_milef_like,
    rdist_to_json,
    slice_certificate_to_json,
    verify_report_to_json,
    width_to_json,
)
from .lattice import lattice_width
from .metrics import lp_gap_max, lp_gap_min, rdist_certificate
from .milefcore import milef_to_lef, mixed_integer_hull, projected_hull, slice_family
from .zoo import GENERATORS, bimodular_system, bimodularity_check, generate, mutate_parity_coefficient, verify_bundle

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    inputs: List[str] = field(default_factory=list)
    out: Optional[str] = None
    delta: Optional[object] = None
    v_max: int = 5
    caps: Caps = field(default_factory=Caps)
    options: Dict[str, object] = field(default_factory=dict)


def _rational_arg(name):
    def parse(text):
        try:
            return parse_rational(text, name)
        except MilefError as e:
            raise argparse.ArgumentTypeError(str(e)) from None

    return parse


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def _as_vpolytope(doc, caps) -> VPolytope:
    obj = from_json(doc)
    if isinstance(obj, VPolytope):
        return obj
    if isinstance(obj, HPolyhedron):
        return vertices(obj, caps)
    raise UsageError("expected a VPolytope or HPolyhedron document")


def _as_hpolyhedron(doc) -> HPolyhedron:
    obj = from_json(doc)
    if isinstance(obj, HPolyhedron):
        return obj
    if isinstance(obj, VPolytope):
        from .exactgeom import hull

        return hull(obj.vertices, obj.rays)
    raise UsageError("expected an HPolyhedron or VPolytope document")


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report)


def cmd_gen(cfg: RunConfig):
    fam, n = cfg.options["family"], cfg.options["n"]
    b = generate(fam, n, cfg.caps)
    return EXIT_OK, bundle_to_json(b, fam)


def cmd_verify(cfg: RunConfig):
    b = bundle_from_json(_read_json(cfg.inputs[0]))
    rep = verify_bundle(b, cfg.caps)
    return (EXIT_OK if rep.passed else EXIT_FAIL), verify_report_to_json(rep)


def cmd_mihull(cfg: RunConfig):
    M = load_milef_like(_read_json(cfg.inputs[0]))
    V = projected_hull(M, cfg.caps) if cfg.options.get("projected") else mixed_integer_hull(M, cfg.caps)
    return EXIT_OK, {"type": "mihull", "projected": bool(cfg.options.get("projected")), "hull": to_json(V)}


def cmd_slice(cfg: RunConfig):
    M = load_milef_like(_read_json(cfg.inputs[0]))
    cert = slice_family(M.Q, M.sigma, cfg.delta, cfg.v_max, validate=True, caps=cfg.caps)
    ok = cert.fiber_cover_checked and cert.sandwich_checked and cert.rdist_achieved <= cfg.delta
    return (EXIT_OK if ok else EXIT_FAIL), slice_certificate_to_json(cert)


def cmd_lef(cfg: RunConfig):
    M = load_milef_like(_read_json(cfg.inputs[0]))
    eps = cfg.options.get("epsilon") or 0
    lef, proj, rep = milef_to_lef(
        M, cfg.delta, eps, cfg.v_max, verify_balas=cfg.options.get("verify_balas", False),
        count_irredundant=True, caps=cfg.caps,
    )
    ok = rep.contains_target and rep.rdist_achieved is not None and rep.rdist_achieved <= rep.epsilon_bound
    ok = ok and rep.irredundant_count <= rep.slice_count_bound and rep.balas_verified is not False
    report = {"type": "LefResult", "lef": to_json(lef), "proj": to_json(proj), "report": lef_report_to_json(rep)}
    return (EXIT_OK if ok else EXIT_FAIL), report


def cmd_rdist(cfg: RunConfig):
    A = _as_vpolytope(_read_json(cfg.inputs[0]), cfg.caps)
    B = _as_vpolytope(_read_json(cfg.inputs[1]), cfg.caps)
    return EXIT_OK, rdist_to_json(rdist_certificate(A, B))


def cmd_gap(cfg: RunConfig):
    A = _as_vpolytope(_read_json(cfg.inputs[0]), cfg.caps)
    B = _as_vpolytope(_read_json(cfg.inputs[1]), cfg.caps)
    kind = cfg.options["kind"]
    g = lp_gap_max(A, B) if kind == "max" else lp_gap_min(A, B)
    return EXIT_OK, gap_to_json(g, kind)


def cmd_width(cfg: RunConfig):
    B = _as_hpolyhedron(_read_json(cfg.inputs[0]))
    return EXIT_OK, width_to_json(lattice_width(B, cfg.v_max, cfg.caps))


def cmd_bimod(cfg: RunConfig):
    if cfg.inputs:
        doc = _read_json(cfg.inputs[0])
        rows = doc.get("rows") if isinstance(doc, dict) else doc
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise UsageError("matrix document must be a list of rows or {\"rows\": [...]}")
        M = [[_int_entry(x, f"rows[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
        source = cfg.inputs[0]
    else:
        n = cfg.options.get("n") or 4
        M, _ = bimodular_system(n)
        source = f"odd-cut conic system, n={n}"
    if cfg.options.get("mutate"):
        M = mutate_parity_coefficient(M)
        source += " (parity coefficient -2 replaced by -3)"
    rep = bimodularity_check(M, cfg.caps)
    report = {
        "type": "BimodularityReport",
        "source": source,
        "rows": len(M),
        "cols": len(M[0]),
        "max_abs_subdet": rep.max_abs_subdet,
        "is_bimodular": rep.is_bimodular,
        "witness": list(rep.witness),
        "subsets_checked": rep.subsets_checked,
    }
    return (EXIT_OK if rep.is_bimodular else EXIT_FAIL), report


def _int_entry(x, where: str) -> int:
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, str):
        v = parse_rational(x, where)
        if v.denominator == 1:
            return int(v)
    raise UsageError(f"{where}: matrix entries must be integers, got {x!r}")


COMMANDS = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "mihull": cmd_mihull,
    "slice": cmd_slice,
    "lef": cmd_lef,
    "rdist": cmd_rdist,
    "gap": cmd_gap,
    "width": cmd_width,
    "bimod": cmd_bimod,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="milef", description="Exact mixed-integer extended formulation toolkit.")
    p.add_argument("--version", action="version", version=f"milef {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, delta=False, v_max=False):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--caps", default="", help="cap overrides, e.g. max_dim=20,max_lattice_points=10000")
        if delta:
            sp.add_argument("--delta", required=True, type=_rational_arg("delta"), help="target accuracy p/q > 0")
        if v_max:
            sp.add_argument("--v-max", type=int, default=5, help="sup-norm radius of the direction search")

    sp = sub.add_parser("gen", help="generate a formulation bundle")
    sp.add_argument("--family", required=True, choices=sorted(GENERATORS))
    sp.add_argument("--n", required=True, type=int)
    common(sp)
    sp = sub.add_parser("verify", help="compare a bundle's projected hull with its oracle")
    sp.add_argument("bundle")
    common(sp)
    sp = sub.add_parser("mihull", help="mixed-integer hull of a MILEF")
    sp.add_argument("milef")
    sp.add_argument("--projected", action="store_true", help="map through pi before pruning")
    common(sp)
    sp = sub.add_parser("slice", help="slicing family with certificate")
    sp.add_argument("milef")
    common(sp, delta=True, v_max=True)
    sp = sub.add_parser("lef", help="approximate linear extended formulation")
    sp.add_argument("milef")
    sp.add_argument("--epsilon", type=_rational_arg("epsilon"), default=None,
                    help="known error of the input MILEF (default 0)")
    sp.add_argument("--verify-balas", action="store_true")
    common(sp, delta=True, v_max=True)
    sp = sub.add_parser("rdist", help="relative distance of nested polytopes")
    sp.add_argument("A")
    sp.add_argument("B")
    sp.add_argument("--plain", action="store_true", help="print only the value")
    common(sp)
    sp = sub.add_parser("gap", help="LP gap of nested polytopes")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--max", dest="kind", action="store_const", const="max")
    g.add_argument("--min", dest="kind", action="store_const", const="min")
    sp.add_argument("A")
    sp.add_argument("B")
    sp.add_argument("--plain", action="store_true", help="print only the value")
    common(sp)
    sp = sub.add_parser("width", help="lattice width with certificate")
    sp.add_argument("body")
    common(sp, v_max=True)
    sp = sub.add_parser("bimod", help="exhaustive maximal-minor sweep")
    sp.add_argument("matrix", nargs="?", help="JSON list of integer rows; default: the odd-cut conic system")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--mutate", action="store_true")
    common(sp)
    return p


def _config(ns) -> RunConfig:
    caps = parse_caps(ns.caps, current_caps())
    inputs = [getattr(ns, k) for k in ("bundle", "milef", "A", "B", "body", "matrix") if getattr(ns, k, None)]
    opts = {k: getattr(ns, k) for k in ("family", "n", "projected", "epsilon", "verify_balas", "kind", "mutate", "plain")
            if hasattr(ns, k)}
    return RunConfig(ns.command, inputs, ns.out, getattr(ns, "delta", None), getattr(ns, "v_max", 5), caps, opts)


def _emit(cfg: RunConfig, report) -> None:
    if cfg.options.get("plain") and "value" in report:
        text = f"{report['value']}\n"
    else:
        text = dumps(report)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if not ns.command:
            raise UsageError("a subcommand is required (see --help)")
        cfg = _config(ns)
        if cfg.delta is not None and cfg.delta <= 0:
            raise UsageError("delta: must be positive")
        if cfg.v_max < 1:
            raise UsageError("v-max: must be a positive integer")
        code, report = COMMANDS[cfg.command](cfg)
        _emit(cfg, report)
        return code
    except UsageError as e:
        print(f"milef: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as e:
        print(f"milef: resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except VerificationError as e:
        print(f"milef: verification failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except MilefError as e:
        print(f"milef: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"milef: I/O error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
