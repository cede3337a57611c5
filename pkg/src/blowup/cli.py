"""Command line front end: ``blowup run`` and ``blowup family``.

Input files are line based::

    # comment
    ring x y z w                 (optional: char=32003 order=grevlex weights=1,1,1,1)
    x^2 - y*w                    one generator per line
    J: x^2 - y*w                 generators of an explicit reduction (optional)

Reports are JSON (``schema: 1``).  Everything except the ``timings`` block is
deterministic for a fixed job and seed; ``determinism_hash`` is the SHA-256 of
the canonical JSON of the report without timings and without the hash itself.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .blowup import (REDUCTION_CAP, BlowupError, check_Gs, classify_with_reduction, core_probe,
                     j_multiplicity)
from .harness import (Analysis, builtin_examples, check_depth_inequalities, construct_6_6,
                      example_by_name, verify_almost_goto, verify_FCM, verify_hilbert_series_prop,
                      verify_Theo1, CONSISTENT, NOT_MET, VIOLATION, ConstructionError)
from .ideal import Ideal
from .resolution import depth_report
from .ring import (DEFAULT_CHARACTERISTIC, DegreeBudgetError, ParseError, PolyRing, PrimeField,
                   RingError, default_degree_cap, map_poly, parse_polynomial)

SCHEMA_VERSION = 1
CHECKS = ("jmult", "classify", "gs", "depths", "fcm", "theo1", "hs", "almost-goto", "core",
          "examples", "family66")
NEEDS_IDEAL = set(CHECKS) - {"examples", "family66"}

EXIT_OK, EXIT_INPUT, EXIT_HYP, EXIT_VIOLATION = 0, 1, 2, 3

log = logging.getLogger("blowup")


class InputError(ValueError):
    pass


# --- input ----------------------------------------------------------------------------

def parse_job_text(text: str, degree_cap: int = None) -> tuple:
    """(ring, generators, reduction generators or None) from the line format."""
    ring = None
    gens, red = [], []
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("ring"):
            if ring is not None:
                raise InputError(f"line {lineno}: second ring declaration")
            ring = _parse_ring_line(line[4:], lineno, degree_cap)
            continue
        if ring is None:
            raise InputError(f"line {lineno}: generators before the ring declaration")
        target = gens
        body = line
        if line.startswith("J:"):
            target, body = red, line[2:]
        pending.append((target, body, lineno))
    if ring is None:
        raise InputError("no ring declaration")
    for target, body, lineno in pending:
        target.append(parse_polynomial(body, ring, line=lineno))
    if not gens:
        raise InputError("no generators")
    return ring, gens, (red or None)


def _parse_ring_line(rest: str, lineno: int, degree_cap: int = None) -> PolyRing:
    names = []
    opts = {}
    for tok in rest.replace(",", " ").split():
        if "=" in tok:
            k, v = tok.split("=", 1)
            opts[k] = v
        elif opts.get("weights") is not None and tok.isdigit():
            opts["weights"] += "," + tok
        else:
            names.append(tok)
    if not names:
        raise InputError(f"line {lineno}: ring needs variables")
    try:
        p = int(opts.pop("char", DEFAULT_CHARACTERISTIC))
        order = opts.pop("order", "grevlex")
        weights = opts.pop("weights", None)
        weights = tuple(int(w) for w in weights.split(",") if w) if weights else None
        if weights is not None and order == "grevlex":
            order = "wgrevlex"
        if opts:
            raise InputError(f"line {lineno}: unknown ring options {sorted(opts)}")
        cap = degree_cap if degree_cap is not None else default_degree_cap()
        return PolyRing(tuple(names), weights, order, 0, PrimeField(p), cap)
    except (RingError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"line {lineno}: {exc}") from None


def _with_cap(I: Ideal, cap: int) -> Ideal:
    if cap is None or I.ring.degree_cap == cap:
        return I
    R = I.ring
    ring = PolyRing(R.variables, R.weights, R.order, R.block, R.field, cap)
    return Ideal(ring, [map_poly(g, ring) for g in I.gens])


def _cap_from(args) -> int:
    env = os.environ.get("BLOWUP_DEGREE_CAP")
    if env:
        return int(env)
    return args.degree_cap


# --- checks -----------------------------------------------------------------------------

def _reduction_dict(A: Analysis) -> dict:
    return {"generators": [str(g) for g in A.reduction.gens], "r_J": A.r,
            "explicit": A._given_J is not None}


def run_checks(I: Ideal, J: Ideal, checks: list, seed: int, budgets: dict) -> tuple:
    results = {}
    timings = {}
    verdicts = []
    A = Analysis(I, seed, reduction=J) if I is not None else None
    for name in checks:
        t0 = time.perf_counter()
        if name == "jmult":
            seeds = tuple(seed + k for k in range(max(2, budgets["trials"])))
            results[name] = j_multiplicity(I, seeds, spread=A.s).to_dict()
        elif name == "classify":
            hyp = {"G_d": A.s == A.d and A.Gs, "AN": A.an.to_dict()}
            c = classify_with_reduction(I, Ideal(I.ring, A.reduction.gens), A.s, hyp,
                                        budgets["reduction_cap"])
            results[name] = dict(c.to_dict(), reduction=_reduction_dict(A))
        elif name == "gs":
            detail = {}
            ok = check_Gs(I, A.s, detail)
            results[name] = {"s": A.s, "holds": ok,
                             "detail": {str(k): v for k, v in detail.items()}}
        elif name == "depths":
            dq = depth_report(I, seed)
            summary = A.summary()
            results[name] = dict(summary, depth_R_over_I=dq.depth, dim_R_over_I=dq.dimension,
                                 R_CM=A.depth_R.cohen_macaulay, G_CM=A.depth_G.cohen_macaulay,
                                 F_CM=A.depth_F.cohen_macaulay,
                                 pair_check=check_depth_inequalities(
                                     {"F": summary["depth_F"], "G": summary["depth_G"]}))
        elif name in ("fcm", "theo1", "hs", "almost-goto"):
            fn = {"fcm": verify_FCM, "theo1": verify_Theo1,
                  "hs": verify_hilbert_series_prop, "almost-goto": verify_almost_goto}[name]
            rep = fn(A)
            verdicts.append(rep.verdict)
            results[name] = rep.to_dict()
        elif name == "core":
            results[name] = core_probe(I, budgets["trials"], seed, spread=A.s).to_dict()
        elif name == "examples":
            results[name] = {k: [str(g) for g in v.gens] for k, v in builtin_examples().items()}
        elif name == "family66":
            d, n = budgets["family"]
            results[name] = family_report(d, n, budgets["count"], seed)
            if not results[name]["all_agree"]:
                verdicts.append(VIOLATION)
        timings[name] = round(time.perf_counter() - t0, 4)
    return results, timings, verdicts


def family_report(d: int, n: int, count: int, seed: int, workers: int = 1,
                  with_cm: bool = False, samples: int = 2) -> dict:
    """Runs of construct_6_6 with seeds derived by counter, aggregated."""
    jobs = [(d, n, f"{seed}:{i}", samples, with_cm) for i in range(count)]
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(workers) as ex:
            runs = list(ex.map(_family_one, jobs))
    else:
        runs = [_family_one(j) for j in jobs]
    samples_all = [s for r in runs for s in r.get("samples", [])]
    goto = [s for s in samples_all if s["goto_minimal"]]
    return {
        "d": d, "n": n, "count": count, "seed": seed,
        "runs": runs,
        "iff_agreement": sum(1 for s in samples_all if s["inside_bound"] == s["goto_minimal"]),
        "samples": len(samples_all),
        "goto_minimal_samples": len(goto),
        "reduction_numbers_goto": sorted({s["r_K"] for s in goto}),
        "expected_dichotomy": [0, d - 1],
        "dichotomy_ok": all(r.get("dichotomy_ok", False) for r in runs),
        "socle_degree_ok": all(r.get("socle_degree_ok", False) for r in runs),
        "all_agree": all(r.get("iff_agree", False) for r in runs) and
        all(r.get("socle_degree_ok", False) for r in runs),
    }


def _family_one(job) -> dict:
    d, n, seed, samples, with_cm = job
    try:
        return construct_6_6(d, n, seed, samples, with_cm)
    except ConstructionError as exc:
        return {"d": d, "n": n, "seed": seed, "error": str(exc)}


# --- reports ------------------------------------------------------------------------------

def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def finish_report(report: dict) -> dict:
    body = {k: v for k, v in report.items() if k not in ("timings", "determinism_hash")}
    report["determinism_hash"] = hashlib.sha256(canonical(body).encode()).hexdigest()
    return report


def status_of(verdicts: list) -> tuple:
    if VIOLATION in verdicts:
        return VIOLATION, EXIT_VIOLATION
    if NOT_MET in verdicts:
        return NOT_MET, EXIT_HYP
    return CONSISTENT, EXIT_OK


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _summary_lines(report: dict) -> list:
    out = [f"status: {report.get('status')}"]
    for name, res in report.get("results", {}).items():
        if isinstance(res, dict) and "verdict" in res:
            out.append(f"{name}: {res['verdict']}")
        elif name == "jmult":
            out.append(f"jmult: j = {res['j']}, flags minimal={res['minimal_j']} "
                       f"almost={res['almost_minimal_j']} goto={res['goto_minimal_j']} "
                       f"almost-goto={res['almost_goto_minimal_j']}")
        elif name == "classify":
            out.append(f"classify: r_J = {res['r_J']}, goto_minimal = {res['goto_minimal']}, "
                       f"λ(Im/Jm) = {res['length_Im_over_Jm']}")
        elif name == "depths":
            out.append(f"depths: R {res['depth_R']}/{res['dim_R']}, G {res['depth_G']}/{res['dim_G']}, "
                       f"F {res['depth_F']}/{res['dim_F']}")
        elif name == "family66":
            out.append(f"family66: iff {res['iff_agreement']}/{res['samples']}")
    return out


# --- commands -------------------------------------------------------------------------------

def cmd_run(args) -> int:
    checks = [c.strip() for c in (args.checks or "").split(",") if c.strip()]
    if not checks:
        print("error: empty checks list", file=sys.stderr)
        return EXIT_INPUT
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        print(f"error: unknown checks {unknown}; choose from {', '.join(CHECKS)}", file=sys.stderr)
        return EXIT_INPUT
    cap = _cap_from(args)
    I = J = None
    source = None
    try:
        if args.example:
            I, J = example_by_name(args.example)
            I = _with_cap(I, cap)
            J = _with_cap(J, cap) if J is not None else None
            source = {"example": args.example}
        elif args.input:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
            ring, gens, red = parse_job_text(text, cap)
            I = Ideal(ring, gens)
            J = Ideal(ring, red) if red else None
            source = {"file": os.path.basename(args.input)}
        elif set(checks) & NEEDS_IDEAL:
            print("error: give an input file or --example", file=sys.stderr)
            return EXIT_INPUT
        if I is not None and not I.is_homogeneous():
            raise InputError("generators must be homogeneous")
    except (InputError, ParseError, RingError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    budgets = {"degree_cap": cap, "reduction_cap": args.reduction_cap, "trials": args.trials,
               "family": tuple(int(v) for v in args.family.split(",")), "count": args.count}
    echo = {"source": source, "checks": checks, "seed": args.seed,
            "budgets": {k: list(v) if isinstance(v, tuple) else v for k, v in budgets.items()}}
    if I is not None:
        R = I.ring
        echo["ring"] = {"variables": list(R.variables), "weights": list(R.weights),
                        "order": R.order, "characteristic": R.p}
        echo["generators"] = [str(g) for g in I.gens]
        echo["reduction"] = [str(g) for g in J.gens] if J is not None else None
    t0 = time.perf_counter()
    try:
        results, timings, verdicts = run_checks(I, J, checks, args.seed, budgets)
    except DegreeBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BlowupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    status, code = status_of(verdicts)
    timings["total"] = round(time.perf_counter() - t0, 4)
    report = {"schema": SCHEMA_VERSION, "input": echo, "results": results, "status": status,
              "exit_code": code, "timings": timings}
    finish_report(report)
    _emit(report, args)
    if args.summary:
        for line in _summary_lines(report):
            print(line, file=sys.stderr)
    return code


def cmd_family(args) -> int:
    if not (3 <= args.d < args.n):
        print("error: need 3 <= d < n", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.perf_counter()
    try:
        res = family_report(args.d, args.n, args.count, args.seed, args.workers,
                            args.with_cm, args.samples)
    except (BlowupError, DegreeBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code = EXIT_OK if res["all_agree"] or args.count == 0 else EXIT_VIOLATION
    report = {"schema": SCHEMA_VERSION,
              "input": {"d": args.d, "n": args.n, "count": args.count, "seed": args.seed,
                        "samples": args.samples, "with_cm": args.with_cm},
              "results": {"family66": res},
              "status": CONSISTENT if code == EXIT_OK else VIOLATION,
              "exit_code": code,
              "timings": {"total": round(time.perf_counter() - t0, 4)}}
    finish_report(report)
    _emit(report, args)
    if args.summary:
        print(f"family ({args.d},{args.n}): iff {res['iff_agreement']}/{res['samples']}, "
              f"socle degree ok: {res['socle_degree_ok']}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blowup", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="analyse one ideal")
    run.add_argument("input", nargs="?", help="input file (ring line, then generators)")
    run.add_argument("--example", help="ex61, ex61(d,n), ex62 or ex63")
    run.add_argument("--checks", default="jmult,classify,depths",
                     help="comma separated subset of: " + ", ".join(CHECKS))
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--degree-cap", type=int, default=None)
    run.add_argument("--reduction-cap", type=int, default=REDUCTION_CAP)
    run.add_argument("--trials", type=int, default=2, help="seeds for general elements, core trials")
    run.add_argument("--family", default="3,5", help="d,n for the family66 check")
    run.add_argument("--count", type=int, default=1, help="draws for the family66 check")
    run.add_argument("-o", "--output")
    run.add_argument("--summary", action="store_true", help="human readable lines on stderr")
    run.set_defaults(func=cmd_run)

    fam = sub.add_parser("family", help="batch of linearly presented height-two families")
    fam.add_argument("--d", type=int, required=True)
    fam.add_argument("--n", type=int, required=True)
    fam.add_argument("--count", type=int, default=20)
    fam.add_argument("--seed", type=int, default=0)
    fam.add_argument("--samples", type=int, default=2, help="ideals K per draw")
    fam.add_argument("--with-cm", action="store_true", help="also test R(K), G(K), F(K) CM")
    fam.add_argument("--workers", type=int, default=1)
    fam.add_argument("-o", "--output")
    fam.add_argument("--summary", action="store_true")
    fam.set_defaults(func=cmd_family)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
