"""Command line front end.

JSON in, JSON out.  Curves, modifications, multidegrees, sheaf models,
and polarizations all use the formats of their defining modules, and
reports print with sorted keys so the same inputs give byte-identical
output.  Exit status: 0 pass, 1 a check or verification failed, 2 bad
input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .correspondence import certify_bijection, phi, phi_inverse
from .graphs import (
    DualGraph,
    ExceptionalCycleError,
    classify,
    connected_subcurves,
    maximal_exceptional_chains,
)
from .modifications import Modification
from .modifications import stable_model as _stable_model
from .pushforward import (
    admissibility,
    pushforward_degree_oracle,
    pushforward_diagnostics,
    pushforward_model,
)
from .sheaves import (
    Multidegree,
    SheafModel,
    chain_h,
    interval_sum_range,
    omega_multidegree,
    sheaf_degree,
)
from .stability import (
    Polarization,
    balanced_report,
    canonical_polarization,
    enumerate_balanced,
    enumerate_semistable_models,
    sheaf_stability_report,
)
from .verify import ALL_SUITES, VerifyConfig, run_verification


class _InputError(Exception):
    """Bad file, bad JSON, or a malformed payload; reported with exit 2."""


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise _InputError(str(err)) from err
    except json.JSONDecodeError as err:
        raise _InputError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err


def _load_curve(path: str) -> DualGraph:
    return DualGraph.from_json_dict(_load_json(path))


def _load_modification(path: str) -> Modification:
    return Modification.from_json_dict(_load_json(path))


def _emit(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _number(x: int | Fraction):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


def _scan_payload(scan) -> dict:
    return {
        "equality_sites": [sorted(z) for z in scan.equality_sites],
        "failures": [
            {"subcurve": sorted(z), "margin": _number(m)} for z, m in scan.failures
        ],
    }


# -- commands ----------------------------------------------------------------


def cmd_classify(args) -> tuple[dict, int]:
    graph = _load_curve(args.curve)
    payload: dict = {
        "genus": graph.genus,
        "class": classify(graph),
        "omega": omega_multidegree(graph).to_json_dict(),
    }
    try:
        payload["chains"] = [list(c.vertices) for c in maximal_exceptional_chains(graph)]
    except ExceptionalCycleError:
        payload["chains"] = "cycle"
    except ValueError:
        payload["chains"] = None
    return payload, 0


def cmd_stable_model(args) -> tuple[dict, int]:
    mod = _stable_model(_load_curve(args.curve))
    return mod.to_json_dict(include_source=True), 0


def cmd_modify(args) -> tuple[dict, int]:
    mod = _load_modification(args.modification)
    return mod.to_json_dict(include_source=True), 0


def cmd_pushforward(args) -> tuple[dict, int]:
    mod = _load_modification(args.modification)
    deg = Multidegree.from_json_dict(mod.source, _load_json(args.multidegree))
    flags = admissibility(mod, deg)
    diag = pushforward_diagnostics(mod, deg)
    payload: dict = {
        "admissibility": {
            "admissible": flags.admissible,
            "negatively": flags.negatively,
            "positively": flags.positively,
            "invertible": flags.invertible,
        },
        "diagnostics": {
            "has_torsion": diag.has_torsion,
            "degree_drops": diag.degree_drops,
            "noninvertible_edges": sorted(diag.noninvertible_edges),
        },
        "model": None,
        "oracle_agrees": None,
    }
    if flags.admissible:
        model = pushforward_model(mod, deg)
        payload["model"] = model.to_json_dict()
        payload["oracle_agrees"] = all(
            sheaf_degree(model, w) == pushforward_degree_oracle(mod, deg, w)
            for w in connected_subcurves(mod.target)
        )
    return payload, 0


def cmd_chain_h(args) -> tuple[dict, int]:
    try:
        degrees = [int(tok) for tok in args.degrees.split(",")]
    except ValueError as err:
        raise _InputError("--degrees wants a comma-separated list of integers") from err
    result = chain_h(degrees, puncture_ends=args.punctured)
    lo, hi = interval_sum_range(degrees)
    payload = {
        "degrees": degrees,
        "punctured": args.punctured,
        "h0": result.h0,
        "h1": result.h1,
        "interval_min": lo,
        "interval_max": hi,
    }
    return payload, 0


def cmd_check_stability(args) -> tuple[dict, int]:
    graph = _load_curve(args.curve)
    model = SheafModel.from_json_dict(graph, _load_json(args.sheaf))
    if args.polarization:
        pol = Polarization.from_json_dict(graph, _load_json(args.polarization))
    else:
        pol = canonical_polarization(graph, model.degree)
    scan = sheaf_stability_report(model, pol)
    verdict = scan.verdict(args.mode, args.base_vertex)
    payload = {
        "mode": args.mode,
        "base_vertex": args.base_vertex,
        "degree": model.degree,
        "verdict": verdict,
        **_scan_payload(scan),
    }
    return payload, 0 if verdict else 1


def cmd_check_balanced(args) -> tuple[dict, int]:
    graph = _load_curve(args.curve)
    deg = Multidegree.from_json_dict(graph, _load_json(args.multidegree))
    report = balanced_report(deg)
    mode = args.mode.replace("-", "_")
    verdict = report.verdict(mode)
    payload = {
        "mode": args.mode,
        "verdict": verdict,
        "exceptional_violations": sorted(report.exceptional_violations),
        **_scan_payload(report.scan),
    }
    return payload, 0 if verdict else 1


def cmd_phi(args) -> tuple[dict, int]:
    mod = _load_modification(args.modification)
    deg = Multidegree.from_json_dict(mod.source, _load_json(args.multidegree))
    target, model = phi(mod, deg)
    return {"curve": target.to_json_dict(), "model": model.to_json_dict()}, 0


def cmd_phi_inv(args) -> tuple[dict, int]:
    graph = _load_curve(args.curve)
    model = SheafModel.from_json_dict(graph, _load_json(args.sheaf))
    mod, deg = phi_inverse(graph, model)
    payload = {
        "modification": mod.to_json_dict(include_source=True),
        "multidegree": deg.to_json_dict(),
    }
    return payload, 0


def cmd_enumerate(args) -> tuple[dict, int]:
    graph = _load_curve(args.curve)
    payload: dict = {"degree": args.degree, "mode": args.mode}
    if args.mode in ("balanced", "stably-balanced"):
        pairs = enumerate_balanced(graph, args.degree, args.mode.replace("-", "_"))
        payload["items"] = [
            {
                "modified_edges": sorted(mod.modified_edges),
                "multidegree": deg.to_json_dict(),
            }
            for mod, deg in pairs
        ]
    else:
        models = enumerate_semistable_models(graph, args.degree, args.mode)
        payload["items"] = [model.to_json_dict() for model in models]
    payload["count"] = len(payload["items"])
    return payload, 0


def cmd_certify(args) -> tuple[dict, int]:
    graph = _load_curve(args.curve)
    report = certify_bijection(graph, args.degree, args.mode.replace("-", "_"))
    return report.to_json_dict(), 0 if report.bijection else 1


def cmd_verify(args) -> tuple[dict, int]:
    cfg = VerifyConfig(
        suites=tuple(args.suite) if args.suite else ALL_SUITES,
        seed=args.seed,
        instance_count=args.instances,
        max_vertices=args.max_vertices,
        max_genus=args.max_genus,
        degree_window=args.degree_window,
        chain_length_max=args.chain_length_max,
    )
    report = run_verification(cfg)
    dumps: dict[str, str] = {}
    for name, entry in report["suites"].items():
        if entry["status"] == "fail":
            filename = f"counterexample-{name}.json"
            path = Path(args.dump_dir) / filename
            path.write_text(
                json.dumps(entry["failures"][0], indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
            dumps[name] = filename
    if dumps:
        report["reproduction_files"] = dumps
    return report, 0 if report["ok"] else 1


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodalcalc",
        description="Dual graphs of nodal curves: classification, chain "
        "modifications, pushforward normal forms, stability checks, and "
        "the balanced/semistable correspondence.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    def sub(name: str, fn, help_text: str):
        p = subs.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--output", help="write the JSON report here instead of stdout")
        return p

    p = sub("classify", cmd_classify, "genus, classification, chains, dualizing degree")
    p.add_argument("curve", help="curve JSON file")

    p = sub("stable-model", cmd_stable_model, "contract exceptional chains")
    p.add_argument("curve", help="curve JSON file")

    p = sub("modify", cmd_modify, "insert chains, materializing the new curve")
    p.add_argument("modification", help="modification JSON file")

    p = sub("pushforward", cmd_pushforward, "direct image normal form with diagnostics")
    p.add_argument("modification", help="modification JSON file")
    p.add_argument("multidegree", help="multidegree JSON file on the modified curve")

    p = sub("chain-h", cmd_chain_h, "cohomology of a multidegree on a rational chain")
    p.add_argument("--degrees", required=True, help="comma-separated integers")
    p.add_argument("--punctured", action="store_true",
                   help="impose vanishing at both free ends")

    p = sub("check-stability", cmd_check_stability, "scan a sheaf model against a polarization")
    p.add_argument("curve", help="curve JSON file")
    p.add_argument("sheaf", help="sheaf model JSON file")
    p.add_argument("--polarization", help="polarization JSON file (default: canonical)")
    p.add_argument("--mode", default="semistable",
                   choices=["semistable", "stable", "quasistable"])
    p.add_argument("--base-vertex", help="required for quasistable mode")

    p = sub("check-balanced", cmd_check_balanced, "balanced inequalities for a multidegree")
    p.add_argument("curve", help="curve JSON file (quasistable)")
    p.add_argument("multidegree", help="multidegree JSON file")
    p.add_argument("--mode", default="balanced", choices=["balanced", "stably-balanced"])

    p = sub("phi", cmd_phi, "direct image of a chain-degree-1 bundle")
    p.add_argument("modification", help="modification JSON file (all chains length 1)")
    p.add_argument("multidegree", help="multidegree JSON file, degree 1 on chains")

    p = sub("phi-inv", cmd_phi_inv, "bundle on a small modification from a sheaf model")
    p.add_argument("curve", help="curve JSON file")
    p.add_argument("sheaf", help="sheaf model JSON file")

    p = sub("enumerate", cmd_enumerate, "all balanced bundles or semistable models")
    p.add_argument("curve", help="stable curve JSON file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--mode", default="balanced",
                   choices=["balanced", "stably-balanced", "semistable", "stable"])

    p = sub("certify", cmd_certify, "certify the balanced/semistable bijection")
    p.add_argument("curve", help="stable curve JSON file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--mode", default="balanced", choices=["balanced", "stably-balanced"])

    p = sub("verify", cmd_verify, "run the verification suites")
    p.add_argument("--suite", action="append", choices=list(ALL_SUITES),
                   help="repeatable; default is every suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=50,
                   help="randomized cases per suite")
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--max-genus", type=int, default=4)
    p.add_argument("--degree-window", type=int, default=2)
    p.add_argument("--chain-length-max", type=int, default=4)
    p.add_argument("--dump-dir", default=".",
                   help="where failing suites write counterexample files")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        payload, code = args.fn(args)
    except _InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    _emit(payload, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
