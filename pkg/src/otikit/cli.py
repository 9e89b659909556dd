"""Command line front end: `otikit <command> ...` or `python3 -m otikit <command> ...`.

Every command writes one JSON certificate (stdout, or --out) whose "config"
block echoes the exact invocation, so re-running it reproduces the document
except for the "timing" block.  Exit codes: 0 all asserted checks passed,
1 a check was refuted, 2 every check was skipped by its hypothesis gate,
64 usage error.
"""

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from otikit import __version__, registry
from otikit.exactla import (
    Matrix, NonPrime, ReducibleModulus, field_create, parse_field_spec, random_invertible,
)
from otikit.modrep import specht_module, tabloid_module
from otikit.nilcyc import VARIANTS, NilOperator, cf_apply, jordan_type
from otikit.oti import (
    FAIL, PASS, SKIP, CatalogMissing, NotOrderP, Report, TooSmall, branching_check, cf_vanishing_check,
    commute_with_F_check, glauberman_run, gset_young_types, k0_residue_check, load_catalog,
    nongeneric_counterexample, oti_symmetric, theorem_A_agreement, verify_hom_equivalence,
    verify_perm_decomposition,
)
from otikit.partitions import Partition, parse_parts, partitions_of, stability
from otikit.permsets import (
    BadParameters, elem_abelian_transitive, first_block_embed, fixed_points, orbit_count, tabloids,
)
from otikit.registry import op
from otikit.verlinde import IndexOutOfRange, PartExceedsP, format_fusion, from_jordan, fuse

EXIT_OK, EXIT_REFUTED, EXIT_SKIPPED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


# errors raised by the library on bad parameters; reported as usage errors
DOMAIN_ERRORS = (IndexOutOfRange, PartExceedsP, TooSmall, NotOrderP, CatalogMissing, BadParameters,
                 NonPrime, ReducibleModulus)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


# -- argument helpers -----------------------------------------------------------

def _partition(text):
    try:
        parts = parse_parts(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated parts, got %r" % text)
    if any(x <= 0 for x in parts) or list(parts) != sorted(parts, reverse=True):
        raise argparse.ArgumentTypeError("%r is not a partition (parts must be positive and weakly decreasing)" % text)
    return Partition(parts)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers, got %r" % text)


def _default_seed():
    raw = os.environ.get("OTI_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError("OTI_SEED must be an integer, got %r" % raw)


def _module(lam, kind, field):
    return tabloid_module(lam, field) if kind == "M" else specht_module(lam, field)


def _lambdas(args):
    if args.lam is not None:
        if args.n is not None and args.lam.n != args.n:
            raise UsageError("--lambda %s is not a partition of --n %d" % (",".join(map(str, args.lam)), args.n))
        return [args.lam]
    if args.n is None:
        raise UsageError("give --lambda or --n")
    return list(partitions_of(args.n))


def _pr(args):
    if args.p < 2 or any(args.p % d == 0 for d in range(2, int(args.p ** 0.5) + 1)):
        raise UsageError("--p must be prime, got %d" % args.p)
    if getattr(args, "r", 1) < 1:
        raise UsageError("--r must be at least 1")


def _tuple(args, f):
    if getattr(args, "tuple", None) is None:
        return None
    if len(args.tuple) != args.r:
        raise UsageError("--tuple needs %d entries" % args.r)
    return tuple(f.element(c % f.q) for c in args.tuple)


def _field(args, k):
    if not args.field:
        return field_create(args.p, k)
    try:
        f = parse_field_spec(args.field)
    except (ValueError, NonPrime, ReducibleModulus) as e:
        raise UsageError("bad --field %r: %s" % (args.field, e))
    if f.p != args.p:
        raise UsageError("--field has characteristic %d but --p is %d" % (f.p, args.p))
    return f


def _pool_map(fn, cells, jobs):
    from otikit.acceptance import available_cpus
    jobs = min(jobs, available_cpus())
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, cells))
    return [fn(c) for c in cells]


# -- commands (each returns a list of Report) ------------------------------------

def cmd_fuse(args):
    _pr(args)
    out = fuse(args.i, args.j, args.p)
    text = format_fusion(out)
    print(text, file=sys.stderr if args.out is None and args.json else sys.stdout)
    return [Report("fuse", {"p": args.p, "i": args.i, "j": args.j}, PASS, {"fusion": text, "indices": out})]


def cmd_ss(args):
    _pr(args)
    if (args.jordan is None) == (args.lam is None):
        raise UsageError("give exactly one of --jordan or --lambda")
    f = _field(args, 1)
    if args.jordan is not None:
        sizes = args.jordan
        if any(s < 1 or s > args.p for s in sizes):
            raise UsageError("Jordan block sizes must lie in 1..p")
        base = NilOperator.from_jordan(f, args.p, sizes)
        rng = np.random.default_rng(args.seed)
        g = random_invertible(f, base.dim, rng) if base.dim else base.z
        nop = NilOperator(g @ base.z @ g.inverse(), args.p) if base.dim else base
        params = {"p": args.p, "jordan": sizes, "field": f.spec}
    else:
        m = _module(args.lam, args.module, f)
        cp = elem_abelian_transitive(args.p, 1, args.lam.n)
        g = m.matrix(cp.gens[0])
        nop = NilOperator(g - Matrix.identity(f, m.dim), args.p)
        params = {"p": args.p, "lambda": list(args.lam), "module": args.module, "field": f.spec}
    jt = jordan_type(nop)
    res = cf_apply(nop, args.variant)
    data = {"jordan_type": list(jt), "component_dims": {str(i): d for i, d in res.dims().items()},
            "ver_object": str(from_jordan(jt, args.p)), "variant": args.variant}
    return [Report("ss", params, PASS, data)]


def cmd_oti_perm(args):
    _pr(args)
    reports = []
    for lam in _lambdas(args):
        f = _field(args, args.r)
        try:
            res = oti_symmetric(tabloid_module(lam, f), args.p, args.r, args.variant, a=_tuple(args, f),
                                seed=args.seed)
        except TooSmall as e:
            raise UsageError("n = %d is smaller than p^r: %s" % (lam.n, e))
        data = res.as_json()
        data["young_types"] = {str(i): [list(t) for t in gset_young_types(c)] if c.is_perm and c.dim else []
                               for i, c in res.components.items()}
        reports.append(Report("oti-perm", {"lambda": list(lam), "p": args.p, "r": args.r}, PASS, data))
    return reports


def _perm_cell(cell):
    lam, p, r, variant = cell
    return verify_perm_decomposition(lam, p, r, variant)


def cmd_perm_decomp(args):
    _pr(args)
    cells = [(lam, args.p, args.r, args.variant) for lam in _lambdas(args)]
    if any(lam.n < args.p ** args.r for lam, *_ in cells):
        raise UsageError("n must be at least p^r = %d" % args.p ** args.r)
    return _pool_map(_perm_cell, cells, args.jobs)


def _hom_cell(cell):
    lam, mu, p, r, variant, seed = cell
    return verify_hom_equivalence(lam, mu, p, r, variant, seed=seed)


def cmd_hom_check(args):
    _pr(args)
    if args.lam is not None and args.mu is not None:
        pairs = [(args.lam, args.mu)]
    elif args.n is not None:
        stable = [lam for lam in partitions_of(args.n) if stability(lam, args.p, args.r).stable]
        pairs = [(a, b) for a in stable for b in stable]
    else:
        raise UsageError("give --lambda and --mu, or --n for all stable pairs")
    if args.variant not in ("Phi1", "Brauer", "SS"):
        raise UsageError("unknown variant %s" % args.variant)
    cells = [(a, b, args.p, args.r, args.variant, args.seed) for a, b in pairs]
    return _pool_map(_hom_cell, cells, args.jobs)


def cmd_quasistable(args):
    _pr(args)
    q = args.p ** args.r
    reports = []
    for lam in _lambdas(args):
        n = lam.n
        if n < q:
            raise UsageError("n must be at least p^r = %d" % q)
        resid = first_block_embed(n, n - q)
        fixed = fixed_points(elem_abelian_transitive(args.p, args.r, n), tabloids(n, lam), commuting=resid)
        count = orbit_count(resid, fixed) if fixed.size else 0
        quasi = stability(lam, args.p, args.r).quasistable
        reports.append(Report("quasistable-check", {"lambda": list(lam), "p": args.p, "r": args.r},
                              PASS if quasi == (count == 1) else FAIL,
                              {"quasistable": quasi, "fixed_points": int(fixed.size), "orbits": count}))
    return reports


def cmd_k0(args):
    _pr(args)
    return [k0_residue_check(lam, args.p) for lam in _lambdas(args)]


def cmd_branch(args):
    _pr(args)
    reports = []
    for lam in _lambdas(args):
        if lam.n < args.p ** args.r:
            raise UsageError("n must be at least p^r")
        m = _module(lam, args.module, field_create(args.p))
        in_hyp = stability(lam, args.p, args.r).stable
        reports.append(branching_check(m, args.p, args.r, args.tuples, in_hypothesis=in_hyp, seed=args.seed))
    return reports


def cmd_glauberman(args):
    names = sorted(load_catalog()) if args.example == "all" else [args.example]
    catalog = load_catalog()
    for name in names:
        if name not in catalog:
            raise UsageError("unknown example %r; the catalog has %s" % (name, ", ".join(sorted(catalog))))
    return [glauberman_run(name, catalog) for name in names]


def _commute_cell(cell):
    lam, kind, p, r, variant, seed = cell
    return commute_with_F_check(_module(lam, kind, field_create(p)), p, r, variant, seed=seed)


def cmd_commute_f(args):
    _pr(args)
    cells = [(lam, args.module, args.p, args.r, args.variant, args.seed) for lam in _lambdas(args)]
    return _pool_map(_commute_cell, cells, args.jobs)


def _theorem_a_cell(cell):
    lam, p, r, seed = cell
    return theorem_A_agreement(lam, p, r, seed=seed)


def cmd_theorem_a(args):
    _pr(args)
    cells = [(lam, args.p, args.r, args.seed) for lam in _lambdas(args)]
    return _pool_map(_theorem_a_cell, cells, args.jobs)


def cmd_cf_vanish(args):
    _pr(args)
    reports = [cf_vanishing_check(args.p, args.r, args.modules, args.transfers, seed=args.seed)]
    if args.nongeneric:
        reports.append(nongeneric_counterexample())
    return reports


def cmd_acceptance(args):
    from otikit import acceptance
    numbers = args.only or None
    if numbers and any(k not in acceptance.CRITERIA for k in numbers):
        raise UsageError("criteria are numbered 1..%d" % len(acceptance.CRITERIA))
    results = acceptance.run_suite(numbers, seed=args.seed, jobs=args.jobs)
    examples = acceptance.operation_examples()
    reports = []
    for res in results:
        print(res.line(), file=sys.stderr)
        reports.append(Report("criterion-%d" % res.number, {"title": res.title, "budget_seconds": res.budget},
                              res.verdict, {"summary": res.summary,
                                            "reports": [r.as_json() for r in res.reports]}))
        args._timing["criterion-%d" % res.number] = round(res.elapsed, 4)
    reports.append(Report("operation-examples", {}, PASS if all(examples.values()) else FAIL, examples))
    if numbers is None:
        missing = acceptance.coverage(results)
        reports.append(Report("op-coverage", {"registered": len(registry.REGISTERED)},
                              PASS if not missing else FAIL, {"untouched": missing}))
        print("op coverage: %d registered, %d untouched" % (len(registry.REGISTERED), len(missing)),
              file=sys.stderr)
    return reports


# -- parser ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="otikit", description="Exact checks for OTI functors on modular representations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_text, p=True, r=False, lam=False, variant=None, jobs=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=fn)
        if p:
            sp.add_argument("--p", type=int, required=True, help="the prime")
        if r:
            sp.add_argument("--r", type=int, default=1, help="A has order p^r (default 1)")
        if lam:
            sp.add_argument("--lambda", dest="lam", type=_partition, help="a partition, e.g. 6,2")
            sp.add_argument("--n", type=int, help="run every partition of n (or check --lambda has size n)")
        if variant:
            sp.add_argument("--variant", choices=VARIANTS, default=variant)
        if jobs:
            sp.add_argument("--jobs", type=int, default=1, help="worker processes for grid cells")
        sp.add_argument("--seed", type=int, default=None, help="random seed (default: $OTI_SEED or 0)")
        sp.add_argument("--out", help="write the JSON certificate here instead of stdout")
        sp.add_argument("--csv", help="also write one verdict row per check to this CSV file")
        sp.add_argument("--json", action="store_true", help="print the certificate even for commands with text output")
        return sp

    sp = add("fuse", cmd_fuse, "decompose L_i (x) L_j in Ver_p")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)

    sp = add("ss", cmd_ss, "semisimplify a nilpotent operator or the p-cycle action on M/S^lambda",
             lam=True, variant="SS")
    sp.add_argument("--jordan", type=_int_list, help="Jordan block sizes, e.g. 3,2,1")
    sp.add_argument("--module", choices=["M", "S"], default="M")
    sp.add_argument("--field", help="field spec, e.g. GF(9)")

    sp = add("oti-perm", cmd_oti_perm, "apply the OTI functor to M^lambda", r=True, lam=True, variant="SS")
    sp.add_argument("--tuple", type=_int_list, help="the tuple a as integer codes of GF(p^r) elements")
    sp.add_argument("--field", help="field spec, e.g. GF(4)")

    add("perm-decomp", cmd_perm_decomp, "fixed-tabloid decomposition of M^lambda", r=True, lam=True,
        variant="SS", jobs=True)

    sp = add("hom-check", cmd_hom_check, "periodic Hom equivalence between M^lambda and M^mu", r=True,
             variant="Phi1", jobs=True)
    sp.add_argument("--lambda", dest="lam", type=_partition)
    sp.add_argument("--mu", type=_partition)
    sp.add_argument("--n", type=int, help="check all pairs of stable partitions of n")

    add("quasistable-check", cmd_quasistable, "quasistability versus a single orbit of fixed tabloids",
        r=True, lam=True)
    add("k0-check", cmd_k0, "restriction versus total OTI class in K0 mod p", lam=True)

    sp = add("branch-check", cmd_branch, "Jordan types of z_a for several generic tuples", r=True, lam=True)
    sp.add_argument("--module", choices=["M", "S"], default="M")
    sp.add_argument("--tuples", type=int, default=5)

    sp = add("glauberman", cmd_glauberman, "run a Glauberman catalog example", p=False)
    sp.add_argument("--example", default="all", help="catalog key, or 'all'")

    sp = add("commute-f", cmd_commute_f, "OTI functor versus induction to S_{n+1}", r=True, lam=True,
             variant="SS", jobs=True)
    sp.add_argument("--module", choices=["M", "S"], default="M")

    add("theorem-a", cmd_theorem_a, "Phi1, Brauer and SS variants agree on stable modules", r=True, lam=True,
        jobs=True)

    sp = add("cf-vanish", cmd_cf_vanish, "CF functors kill induced modules and transfers", r=True)
    sp.add_argument("--modules", type=int, default=50)
    sp.add_argument("--transfers", type=int, default=20)
    sp.add_argument("--nongeneric", action="store_true", help="also run the non-generic counterexample")

    sp = add("acceptance", cmd_acceptance, "run the acceptance suite", p=False, jobs=True)
    sp.add_argument("--suite", choices=["primary"], default="primary")
    sp.add_argument("--only", type=_int_list, help="run only these criteria, e.g. 1,5")
    return parser


def _strip_output_flags(argv):
    """argv without --out/--csv/--json, which only say where the certificate goes."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        name = tok.split("=", 1)[0]
        if name in ("--out", "--csv"):
            skip = "=" not in tok
            continue
        if name == "--json":
            continue
        out.append(tok)
    return out


def _config(args, argv):
    skip = {"func", "_timing", "out", "csv", "json"}
    params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items()) if k not in skip}
    return {"argv": _strip_output_flags(argv), "command": args.command, "params": params, "version": __version__}


def _exit_code(reports):
    verdicts = [r.verdict for r in reports]
    if FAIL in verdicts:
        return EXIT_REFUTED
    if verdicts and all(v == SKIP for v in verdicts):
        return EXIT_SKIPPED
    return EXIT_OK


def _write_csv(path, reports):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["check", "params", "verdict"])
        for r in reports:
            w.writerow([r.check, json.dumps(r.params, sort_keys=True, ensure_ascii=False), r.verdict])


@op("cli.run")
def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command; try --help")
        if args.seed is None:
            args.seed = _default_seed()
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be positive")
        args._timing = {}
        t0 = time.perf_counter()
        reports = args.func(args)
    except UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except DOMAIN_ERRORS as e:
        print("usage error: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_USAGE
    args._timing["total_seconds"] = round(time.perf_counter() - t0, 4)
    code = _exit_code(reports)
    cert = {
        "config": _config(args, argv),
        "reports": [r.as_json() for r in reports],
        "summary": {v: sum(r.verdict == v for r in reports) for v in ("PASS", "FAIL", "SKIP", "XFAIL")},
        "exit_code": code,
        "timing": args._timing,
    }
    text = json.dumps(cert, sort_keys=True, ensure_ascii=False, indent=2, default=str)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    elif args.command != "fuse" or args.json:
        sys.stdout.write(text + "\n")
    if args.csv:
        _write_csv(args.csv, reports)
    return code


def main():
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    sys.exit(run())


if __name__ == "__main__":
    main()
