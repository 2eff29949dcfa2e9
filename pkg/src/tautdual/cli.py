"""Command-line interface: ``tautdual {build,bfun,dual,cycle,profile,lfd,selftest}``."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .cekoszul import (
    CEComplex,
    PreconditionError,
    cycle_check,
    parse_cochain,
    truncated_homology_profile,
    veronese_setup,
    veronese_zeta,
)
from .dualpar import (
    LFDWindow,
    MissingDataError,
    b_symmetry_check,
    choose_gamma,
    duality_report,
    finite_exception_set,
    gkz_dual,
    lfd_window_check,
)
from .exactpoly import DimensionError, ResourceError, format_fraction, order_by_name, to_fraction
from .instance import Instance, ValidationError, load_instance
from .repdata import Character, DataInconsistencyError, trace_ad
from .tautsys import DefectError, StabilityError, build_taut, check_g_stability, compute_bfunction, is_nonzero
from .weyl import ConfigurationError, ZeroModuleError

EXIT_OK, EXIT_VALIDATION, EXIT_PRECONDITION, EXIT_RESOURCE, EXIT_DEFECT = 0, 2, 3, 4, 5

ORBITS = "finitely many orbits assumed (not verified)"
TRUNCATION = "TRUNCATED: homology of a Bernstein-degree slice, not of the full complex"


def _characters(inst: Instance, selected: str | None, beta_e: str | None) -> list:
    if beta_e is not None:
        if inst.rep is None:
            raise ValidationError("--beta-e needs an instance with representation data")
        return [(f"beta_e={beta_e}", Character.scaling(inst.rep.lie, to_fraction(beta_e)))]
    if selected is not None:
        return [inst.character(selected)]
    if not inst.characters:
        return [("zero", Character.zero(inst.rep.lie))]
    return list(inst.characters.items())


def _need_rep(inst: Instance):
    if inst.rep is None or inst.orbit is None:
        raise ValidationError(f"instance {inst.name!r} has no representation data")


def _map(fn, items, parallel: bool):
    if parallel and len(items) > 1:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_build(inst: Instance, args) -> dict:
    _need_rep(inst)
    order = order_by_name(args.order)
    stab = check_g_stability(inst.rep, inst.orbit)
    if not stab.ok:
        j, g = stab.failures[0]
        raise StabilityError(f"ideal generator #{g} is not stable under basis element "
                             f"{inst.rep.lie.labels[j]!r} (index {j})")
    bfun = None
    if inst.rep.lie.scaling_element is not None and inst.gkz_A is None:
        try:
            res = compute_bfunction(inst.rep, inst.orbit, cap=args.cap)
            bfun = res.bfunction
        except ZeroModuleError:
            bfun = None

    def one(item):
        cname, beta = item
        T = build_taut(inst.rep, inst.orbit, beta, check=False)
        gb = T.weyl_ideal.groebner_basis(order)
        b_for = bfun if (bfun is not None and _zero_off_scaling(beta)) else None
        nonzero = is_nonzero(T, b_for)
        C = CEComplex.for_beta(inst.rep, inst.orbit, beta)
        C.h0_presentation(check_against=T)
        return {
            "character": cname,
            "beta": beta.to_json(),
            "beta_prime": T.beta_prime.to_json(),
            "generators": [str(g) for g in T.weyl_ideal.generators],
            "groebner_size": len(gb),
            "nonzero": nonzero,
            "root_cross_check": None if b_for is None else "agrees",
            "h0_matches_presentation": True,
        }

    results = _map(one, _characters(inst, args.character, args.beta_e), args.parallel)
    return {"stability": "pass", "order": order.name, "results": results, "caveats": [ORBITS]}


def _zero_off_scaling(beta: Character) -> bool:
    e = beta.lie.scaling_element
    return all(v == 0 for j, v in enumerate(beta.values) if j != e)


def cmd_bfun(inst: Instance, args) -> dict:
    _need_rep(inst)
    lie = inst.rep.lie
    if lie.scaling_element is None:
        raise PreconditionError("the b-function needs a flagged scaling element")
    _, beta = inst.character(args.character) if inst.characters else ("zero", Character.zero(lie))
    try:
        res = compute_bfunction(inst.rep, inst.orbit, beta, cap=args.cap)
    except ZeroModuleError as exc:
        return {"status": "zero-module", "message": str(exc), "caveats": [ORBITS]}
    if res.status == "cap-exhausted":
        raise ResourceError(f"no dependency among theta powers up to degree {args.cap}",
                            partial={"residues": [str(r) for r in res.residues]})
    b = res.bfunction
    out = {
        "status": "found",
        "theta": str(b.theta),
        "b": str(b),
        "coefficients": [format_fraction(c) for c in b.coefficients],
        "roots": [format_fraction(r) for r in b.roots()],
        "certificate": res.certificate_ok,
        "lower_powers_independent": res.independent_below,
        "divisor_witnesses": [{"removed_root": format_fraction(r), "quotient": q, "not_in_ideal": ok}
                              for r, q, ok in res.divisor_witnesses],
        "caveats": [ORBITS],
    }
    if not (res.certificate_ok and res.independent_below and all(ok for _, _, ok in res.divisor_witnesses)):
        raise DefectError("b-function certificate or minimality check failed")
    gamma, source = choose_gamma(inst.rep, inst.orbit)
    if gamma is not None:
        dual_beta = trace_ad(lie) + gamma - beta
        if dual_beta.values == beta.values or _same_off_scaling(dual_beta, beta):
            b_dual = b
        else:
            b_dual = compute_bfunction(inst.rep, inst.orbit, dual_beta, cap=args.cap).bfunction
        ge = gamma.at_scaling()
        out["symmetry"] = {"gamma_e": format_fraction(ge), "gamma_source": source,
                           "holds": b_dual is not None and b_symmetry_check(b, b_dual, ge)}
    else:
        out["symmetry"] = {"gamma_e": None, "gamma_source": "unknown", "holds": None}
    return out


def _same_off_scaling(a: Character, b: Character) -> bool:
    e = a.lie.scaling_element
    return all(x == y for j, (x, y) in enumerate(zip(a.values, b.values)) if j != e)


def cmd_dual(inst: Instance, args) -> dict:
    if inst.gkz_A is not None:
        items = _characters(inst, args.character, None)
        gamma = inst.orbit.gorenstein_gamma.values if inst.orbit.gorenstein_gamma else None
        return {"results": [dict(character=n, **gkz_dual(inst.gkz_A, b.values, gamma).to_json()) for n, b in items]}
    _need_rep(inst)
    items = _characters(inst, args.character, args.beta_e)
    return {"results": [dict(character=n, **duality_report(inst.rep, inst.orbit, b).to_json()) for n, b in items]}


def cmd_cycle(inst: Instance | None, args) -> dict:
    if args.veronese is not None:
        n, d = args.veronese
        C = veronese_setup(n, d)
        c = veronese_zeta(n, d, C)
        label = f"veronese n={n} d={d}"
    else:
        if inst is None or args.cochain is None:
            raise ValidationError("cycle needs --veronese N D, or an instance and --cochain FILE")
        _need_rep(inst)
        _, beta = _characters(inst, args.character, args.beta_e)[0]
        C = CEComplex.for_beta(inst.rep, inst.orbit, beta)
        c = C.canon_cochain(parse_cochain(Path(args.cochain).read_text(), inst.rep.N))
        label = str(args.cochain)
    res = cycle_check(c, C)
    return {"cochain": label, "degree": c.degree, "terms": len(c.terms), "passed": res.passed,
            "residual": res.residual.to_text()}


def cmd_profile(inst: Instance, args) -> dict:
    _need_rep(inst)
    _, beta = _characters(inst, args.character, args.beta_e)[0]
    C = CEComplex.for_beta(inst.rep, inst.orbit, beta)
    caps = [args.cap - 2, args.cap] if args.cap >= 2 else [args.cap]
    profiles = _map(lambda k: truncated_homology_profile(C, args.weight, k, args.max_columns), caps, args.parallel)
    current = profiles[-1]
    note = None
    if len(profiles) == 2:
        prev = profiles[0]
        same = [r.degree for r, q in zip(current.rows, prev.rows) if r.apparent_homology == q.apparent_homology]
        note = {"previous_cap": prev.bernstein_cap, "unchanged_degrees": same}
    return {"profile": current.to_json(), "stabilization": note,
            "dim_Y_minus_m": inst.orbit.dim_Y - inst.rep.lie.dim, "caveats": [TRUNCATION, ORBITS]}


def cmd_lfd(inst: Instance | None, args) -> dict:
    if args.roots is not None:
        n = args.n
        roots = [to_fraction(r) for r in args.roots.split(",")]
        betas = [to_fraction(b) for b in (args.beta_e.split(",") if args.beta_e else [])]
    elif inst is not None and inst.lfd is not None:
        n, roots, betas = inst.lfd["n"], inst.lfd["roots_bD"], inst.lfd["beta_e"]
        if args.beta_e:
            betas = [to_fraction(b) for b in args.beta_e.split(",")]
    else:
        raise ValidationError("lfd needs --roots and --n, or an instance with an lfd block")
    if n is None:
        raise ValidationError("--n is required with --roots")
    exc = sorted(finite_exception_set(roots, n))
    return {
        "n": n,
        "roots_bD": [format_fraction(r) for r in roots],
        "exception_set": [format_fraction(x) for x in exc],
        "classifications": [lfd_window_check(LFDWindow(n, tuple(roots), b)).to_json() for b in betas],
        "caveats": ["Hodge-module conclusions are quoted, not computed", ORBITS],
    }


def cmd_selftest(inst, args) -> dict:
    from .selftest import run_selftest

    checks = run_selftest()
    failed = [c for c in checks if not c["passed"]]
    if failed:
        raise DefectError("selftest failures: " + ", ".join(c["name"] for c in failed))
    return {"checks": checks}


COMMANDS = {
    "build": cmd_build, "bfun": cmd_bfun, "dual": cmd_dual, "cycle": cmd_cycle,
    "profile": cmd_profile, "lfd": cmd_lfd, "selftest": cmd_selftest,
}


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tautdual", description=__doc__)
    p.add_argument("--version", action="version", version=f"tautdual {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        needs_instance = name in ("build", "bfun", "dual", "profile")
        if needs_instance:
            sp.add_argument("instance", help="instance JSON path or bundled instance name")
        elif name in ("cycle", "lfd"):
            sp.add_argument("instance", nargs="?", default=None)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--parallel", action="store_true", help="run independent tasks concurrently")
        sp.add_argument("--character", default=None, help="name of a character in the instance")
        sp.add_argument("--beta-e", default=None, help="value of beta on the scaling element (lfd: comma list)")
        sp.add_argument("--cap", type=int, default=16 if name != "profile" else 6,
                        help="degree cap (b-function search or Bernstein degree)")
        sp.add_argument("--weight", type=int, default=0)
        sp.add_argument("--order", default="degrevlex")
        sp.add_argument("--max-columns", type=int, default=20000)
        if name == "cycle":
            sp.add_argument("--veronese", type=int, nargs=2, metavar=("N", "D"))
            sp.add_argument("--cochain", default=None)
        if name == "lfd":
            sp.add_argument("--roots", default=None, help="comma-separated roots of b_D")
            sp.add_argument("--n", type=int, default=None)
    return p


def _input_hash(inst: Instance | None, argv: list) -> str:
    h = hashlib.sha256()
    h.update((inst.input_hash if inst else "").encode())
    h.update(json.dumps([a for a in argv if a != "--json"]).encode())
    return h.hexdigest()


def run(argv: list | None = None) -> tuple:
    """Run the CLI; returns (exit code, report dict)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    report = {"tool": "tautdual", "version": __version__, "command": args.command}
    inst = None
    code = EXIT_OK
    try:
        if getattr(args, "instance", None) is not None:
            inst = load_instance(args.instance)
            report["instance"] = inst.name
            if inst.rep is not None:
                # outputs depend on the chosen bases, so every report names them
                report["basis"] = {"lie": list(inst.rep.lie.labels),
                                   "coordinates": [f"x{i + 1}" for i in range(inst.rep.N)]}
        if args.cap < 0:
            raise ValidationError("--cap must be non-negative")
        report["result"] = COMMANDS[args.command](inst, args)
        report["status"] = "ok"
    except (ValidationError, DataInconsistencyError, DimensionError, ConfigurationError, StabilityError) as exc:
        code, report["status"], report["error"] = EXIT_VALIDATION, "validation-error", str(exc)
    except (PreconditionError, MissingDataError) as exc:
        code, report["status"], report["error"] = EXIT_PRECONDITION, "precondition-error", str(exc)
    except ResourceError as exc:
        code, report["status"], report["error"] = EXIT_RESOURCE, "resource-limit", str(exc)
    except DefectError as exc:
        code, report["status"], report["error"] = EXIT_DEFECT, "internal-defect", str(exc)
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        code, report["status"], report["error"] = EXIT_VALIDATION, "validation-error", f"{type(exc).__name__}: {exc}"
    report["input_hash"] = _input_hash(inst, argv)
    report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    return code, report


def render_text(report: dict) -> str:
    lines = [f"tautdual {report['version']}  {report['command']}  status={report['status']}"]
    if "basis" in report:
        b = report["basis"]
        lines.append(f"basis: {', '.join(b['lie'])} on {b['coordinates'][0]}..{b['coordinates'][-1]}")
    if "error" in report:
        lines.append(f"error: {report['error']}")
    result = report.get("result")
    if result is not None:
        lines.extend(_render(result, 0))
    lines.append(f"input hash {report['input_hash'][:16]}  time {report['timing']['seconds']}s")
    return "\n".join(lines)


def _is_table(v) -> bool:
    return (isinstance(v, list) and len(v) > 1 and all(isinstance(x, dict) for x in v)
            and all(list(x) == list(v[0]) for x in v)
            and all(not isinstance(y, (dict, list)) for x in v for y in x.values()))


def _table(rows: list, pad: str) -> list:
    keys = list(rows[0])
    cells = [[_scalar(r[k]) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out = [pad + "  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    out.extend(pad + "  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)
    return out


def _render(obj, indent: int) -> list:
    pad = "  " * indent
    out = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k, v in obj.items():
            nested = isinstance(v, dict) and v or (isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v))
            if _is_table(v):
                out.append(f"{pad}{str(k):<{width}} :")
                out.extend(_table(v, pad + "  "))
            elif nested:
                out.append(f"{pad}{str(k):<{width}} :")
                out.extend(_render(v, indent + 1))
            elif isinstance(v, str) and "\n" in v:
                out.append(f"{pad}{str(k):<{width}} :")
                out.extend(pad + "  " + line for line in v.splitlines())
            else:
                out.append(f"{pad}{str(k):<{width}} : {_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                out.append(f"{pad}-")
                out.extend(_render(item, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(item)}")
    return out


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    if v is None:
        return "-"
    return str(v)


def main(argv: list | None = None) -> int:
    code, report = run(argv)
    args_json = "--json" in (sys.argv[1:] if argv is None else argv)
    if args_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
