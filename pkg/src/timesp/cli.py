"""Command-line front end: ``timesp <subcommand> ...``.

Exit status is 0 on success, 1 on a validation error (bad flag, malformed
spec, violated precondition) and 2 on a computation error (budget or
horizon exceeded).  Errors are also written to stderr as one JSON object.
Set ``TIMESP_THREADS`` to fan per-(k, l) and per-j work out over threads;
output is identical for any thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import corpus
from .errors import ComputationError, InvalidArgumentError, SpecError, TimespError, ValidationError
from .expr import parse_int
from .folner import InitialSegments, densities, folner_defect
from .measure import (
    DEFAULT_K,
    DEFAULT_TOL,
    BigFrequency,
    check_base,
    fourier_coeff,
    fourier_coeff_at,
    invariance_defect,
    normalize,
    pushforward,
)
from .mixing import ClassifyParams, classify, orbit_values, stage_profile, target
from .rigidity import invariance_scan, rigidity_verdict
from .semigroup import (
    build_blocks,
    combinatorial_bound,
    enumerate_semigroup,
    generators_up_to,
    growth_bound,
    growth_exponent_series,
    verify_growth_bound,
)
from .specio import atomic_write, csv_text, load_spec, report_text

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION = 0, 1, 2


class UsageError(ValidationError):
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers


def _resolve(source, kind):
    """A spec path, inline JSON, or the name of a bundled object."""
    text = str(source)
    if text.lstrip().startswith("{") or os.path.exists(text):
        return load_spec(text, kind)
    table = corpus.KINDS[kind]
    name = os.path.splitext(os.path.basename(text))[0].replace("_", "-")
    if name in table:
        return table[name]
    raise SpecError(f"no such file, and no bundled {kind} named {name!r} (known: {', '.join(sorted(table))})", text)


def _int_list(text):
    try:
        return [parse_int(x) for x in str(text).split(",") if x.strip()]
    except SpecError as exc:
        raise UsageError(f"bad integer list {text!r}: {exc}") from None


def _big_int(text):
    try:
        return parse_int(text)
    except SpecError as exc:
        raise UsageError(str(exc)) from None


def _positive(name, v):
    if v is None or v < 1:
        raise InvalidArgumentError(f"--{name} must be a positive integer, got {v}")
    return v


def _emit(args, kind, header, rows, report_items):
    """Write CSV or report text to --out (stdout when absent)."""
    fmt = args.format or ("csv" if args.out and args.out.endswith(".csv") else "report-text")
    if fmt == "csv":
        # scalar settings go into the header so every CSV records how it was made
        params = [(k, v) for k, v in report_items if not isinstance(v, (list, tuple, dict))]
        text = csv_text(kind, header, rows, params)
    else:
        text = report_text(kind, report_items)
    atomic_write(args.out, text)


def _c(z):
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# subcommands


def cmd_fourier(args):
    mu = _resolve(args.measure, "measure")
    if args.big:
        k, p, j, l = _int_list(args.big)
        check_base(p)
        if j < 0:
            raise InvalidArgumentError("j must be >= 0")
        res = fourier_coeff_at(mu, BigFrequency(k, p, j, l), args.tol)
        freq = f"{k}*{p}^{j}+{l}"
    else:
        if args.k is None:
            raise UsageError("give -k or --big k,p,j,l")
        k = _big_int(args.k)
        res = fourier_coeff(mu, k, args.tol)
        freq = str(k)
    rows = [(freq, res.value.real, res.value.imag, res.err)]
    items = [("frequency", freq), ("value", _c(res.value)), ("err_bound", res.err), ("tol", args.tol)]
    _emit(args, "fourier", ("frequency", "re", "im", "err_bound"), rows, items)


def _measure_doc(mu):
    return {"type": "atomic", "atoms": [[str(x), str(w)] for x, w in mu.atoms]}


def cmd_pushforward(args):
    mu = _resolve(args.measure, "measure")
    image = pushforward(mu, args.q)
    doc = _measure_doc(image)
    rows = [(str(x), str(w)) for x, w in image.atoms]
    items = [("q", args.q), ("measure", doc), ("invariant", image == normalize(mu))]
    _emit(args, "pushforward", ("point", "weight"), rows, items)


def cmd_invariance(args):
    mu = _resolve(args.measure, "measure")
    _positive("K", args.K)
    d = invariance_defect(mu, args.q, args.K, args.tol)
    _emit(args, "invariance", ("q", "K", "defect"), [(args.q, args.K, d)], [("q", args.q), ("K", args.K), ("defect", d)])


def _sigma(text):
    return _resolve(text, "folner")


def cmd_density(args):
    A = _resolve(args.subset, "subset")
    sigma = _sigma(args.sigma)
    _positive("n", args.n)
    schedule = args.schedule
    if schedule == "auto":
        schedule = "dyadic" if isinstance(sigma, InitialSegments) else "linear"
    rep = densities(A, sigma, args.n, schedule=schedule, tol=args.conv_tol)
    rows = [(n, size, c, float(r), r) for n, size, c, r in rep.rows()]
    items = [
        ("schedule", schedule),
        ("stages", list(rep.stages)),
        ("final_ratio", float(rep.final)),
        ("final_ratio_exact", rep.final),
        ("liminf_estimate", rep.liminf_estimate),
        ("limsup_estimate", rep.limsup_estimate),
        ("oscillation", rep.oscillation),
        ("converged", rep.converged),
        ("window", list(rep.window)),
        ("convergence_tol", rep.tol),
        ("verdict", rep.verdict()),
    ]
    _emit(args, "density", ("n", "size", "count", "ratio", "ratio_exact"), rows, items)
    if args.out:
        print(rep.verdict())


def cmd_folner_defect(args):
    sigma = _sigma(args.sigma)
    _positive("m", args.m)
    _positive("n", args.n)
    d = folner_defect(sigma, args.m, args.n)
    _emit(args, "folner-defect", ("m", "n", "defect", "defect_exact"), [(args.m, args.n, float(d), d)],
          [("m", args.m), ("n", args.n), ("defect", float(d)), ("defect_exact", d)])


def cmd_mixing(args):
    mu = _resolve(args.measure, "measure")
    check_base(args.p)
    sigma = _sigma(args.sigma)
    _positive("n", args.n)
    j0, j1 = _int_list(args.j_window)
    if not 0 <= j0 <= j1:
        raise InvalidArgumentError("--j-window needs 0 <= from <= to")
    t = target(mu, args.k, args.l).value
    stages = range(1, args.n + 1) if args.all_stages else [args.n]
    prof = stage_profile(mu, args.p, args.k, args.l, sigma, stages)
    rows = []
    for s in prof:
        rows.append((args.k, args.l, "n", s.n, "ergodic", s.ergodic.value.real, s.ergodic.value.imag, t.real, t.imag, s.deviation))
    for s in prof:
        rows.append((args.k, args.l, "n", s.n, "weak-mixing", s.weak, 0.0, t.real, t.imag, s.weak))
    vals = orbit_values(mu, args.p, args.k, args.l, range(j0, j1 + 1))
    for j, v in zip(range(j0, j1 + 1), vals):
        rows.append((args.k, args.l, "j", j, "strong-mixing", v.value.real, v.value.imag, t.real, t.imag, abs(v.value - t)))
    last = prof[-1]
    items = [
        ("p", args.p), ("k", args.k), ("l", args.l), ("sigma", args.sigma), ("n", args.n),
        ("target", _c(t)),
        ("ergodic_average", _c(last.ergodic.value)),
        ("ergodic_err_bound", last.ergodic.err),
        ("ergodic_deviation", last.deviation),
        ("weak_mixing_average", last.weak),
        ("j_window", [j0, j1]),
        ("strong_mixing_tail", max(abs(v.value - t) for v in vals)),
    ]
    header = ("k", "l", "index_kind", "index", "statistic", "value_re", "value_im", "target_re", "target_im", "deviation")
    _emit(args, "mixing", header, rows, items)


def _classify_params(args):
    j0, j1 = _int_list(args.j_window)
    if not 0 <= j0 <= j1:
        raise InvalidArgumentError("--j-window needs 0 <= from <= to")
    for name in ("k_max", "l_max"):
        if getattr(args, name) < 0:
            raise InvalidArgumentError(f"--{name.replace('_', '-')} must be >= 0")
    _positive("n-stages", args.n_stages)
    _positive("K", args.K)
    return ClassifyParams(args.k_max, args.l_max, _sigma(args.classify_sigma), args.n_stages, (j0, j1), args.tol, args.K)


def _report_items(rep, params, sigma_name):
    return [
        ("p", rep.p),
        ("k_max", params.k_max), ("l_max", params.l_max), ("sigma", sigma_name),
        ("n_stages", params.n_stages), ("j_window", list(params.j_window)), ("K", params.K),
        ("tol", rep.tol),
        ("invariance_defect", rep.invariance_defect),
        ("invariant", rep.invariant),
        ("ergodic_consistent", rep.ergodic_consistent),
        ("weakly_mixing_consistent", rep.weakly_mixing_consistent),
        ("strongly_mixing_consistent", rep.strongly_mixing_consistent),
        ("max_ergodic_deviation", max((s.ergodic_deviation for s in rep.pairs), default=None)),
        ("max_weak_mixing_average", max((s.weak_mixing_average for s in rep.pairs), default=None)),
        ("max_strong_mixing_tail", max((s.strong_mixing_tail for s in rep.pairs), default=None)),
    ]


def cmd_classify(args):
    mu = _resolve(args.measure, "measure")
    check_base(args.p)
    params = _classify_params(args)
    rep = classify(mu, args.p, params)
    rows = [
        (s.k, s.l, s.target.real, s.target.imag, s.ergodic_average.real, s.ergodic_average.imag,
         s.ergodic_deviation, s.weak_mixing_average, s.strong_mixing_tail, s.err)
        for s in rep.pairs
    ]
    header = ("k", "l", "target_re", "target_im", "ergodic_re", "ergodic_im", "ergodic_deviation",
              "weak_mixing_average", "strong_mixing_tail", "err_bound")
    _emit(args, "classify", header, rows, _report_items(rep, params, args.classify_sigma))


def _scan(args, mu):
    _positive("K", args.K)
    if args.j_max < 0:
        raise InvalidArgumentError("--j-max must be >= 0")
    return invariance_scan(mu, args.p, args.l, args.j_max, args.K, args.eps)


def cmd_scan(args):
    mu = _resolve(args.measure, "measure")
    sc = _scan(args, mu)
    rows = [(j, q, d, inA) for j, q, d, inA in sc.rows()]
    items = [("p", sc.p), ("l", sc.l), ("j_max", sc.j_max), ("K", sc.K), ("eps", sc.eps),
             ("A", [list(iv) for iv in sc.A.intervals]), ("defects", list(sc.defects))]
    _emit(args, "scan", ("j", "q", "defect", "in_A"), rows, items)


def cmd_verdict(args):
    mu = _resolve(args.measure, "measure")
    check_base(args.p)
    sc = _scan(args, mu)
    params = _classify_params(args)
    rep = classify(mu, args.p, params)
    v = rigidity_verdict(mu, sc, _sigma(args.sigma), rep)
    dens = v.density
    items = [
        ("p", sc.p), ("l", sc.l), ("j_max", sc.j_max), ("K", sc.K), ("eps", sc.eps),
        ("A", [list(iv) for iv in sc.A.intervals]),
        ("sigma", args.sigma),
        ("density_stages", [dens.stages[0], dens.stages[-1]]),
        ("density_final", v.density_value),
        ("density_liminf_estimate", dens.liminf_estimate),
        ("density_limsup_estimate", dens.limsup_estimate),
    ] + [("mixing_" + k, val) for k, val in _report_items(rep, params, args.classify_sigma)] + [
        ("hypotheses_tested", {str(h): ok for h, ok in v.tested.items()}),
        ("hypotheses_met", list(v.hypotheses_met)),
        ("surrogates", {str(h): s for h, s in v.surrogates.items()}),
        ("dichotomy", v.dichotomy),
        ("atomic", v.atomic),
        ("conclusion", v.conclusion),
    ]
    rows = [(h, v.tested[h], v.surrogates[h]) for h in (1, 2, 3)]
    _emit(args, "verdict", ("hypothesis", "met", "surrogate"), rows, items)
    if args.out:
        print(v.conclusion)


def _semigroup(args):
    spec = _resolve(args.spec, "semigroup")
    if args.m_max is not None or (spec.exponents is None and spec.blocks is None):
        m = args.m_max if args.m_max is not None else spec.m_max
        if spec.exponents is None:
            if m is None:
                raise InvalidArgumentError("the semigroup document has no mMax; pass --m-max")
            spec = build_blocks(spec, m)
    return spec


def _blocks_items(spec):
    if spec.blocks is None:
        return [("p", spec.p), ("exponents", list(spec.exponents))]
    return [
        ("p", spec.p),
        ("tau", spec.tau.kind),
        ("l", spec.l.text),
        ("m_max", spec.m_max),
        ("blocks", [{"m": b.m, "f": b.f, "N_star": b.n_star, "F": [b.lo, b.hi]} for b in spec.blocks]),
        ("adjustments", [{"m": a.m, "found": a.found, "repaired": a.repaired} for a in spec.adjustments]),
    ]


def cmd_semigroup_build(args):
    spec = _semigroup(args)
    if spec.blocks is None:
        raise InvalidArgumentError("spec supplies exponents directly; nothing to build")
    rows = [(b.m, b.f, b.n_star, b.lo, b.hi, any(a.m == b.m for a in spec.adjustments)) for b in spec.blocks]
    _emit(args, "semigroup-blocks", ("m", "f", "N_star", "F_lo", "F_hi", "repaired"), rows, _blocks_items(spec))


def _generators(args, N):
    if args.gens:
        return _int_list(args.gens)
    if args.spec:
        return generators_up_to(_semigroup(args), N)
    raise UsageError("give --gens or --spec")


def cmd_semigroup_count(args):
    N = _big_int(args.N)
    gens = _generators(args, N)
    elems = enumerate_semigroup(gens, N, args.budget)
    if args.dump:
        atomic_write(args.dump, "".join(f"{x}\n" for x in elems))
    if args.out:
        _emit(args, "semigroup-count", ("N", "count"), [(N, len(elems))], [("N", N), ("generators", gens), ("count", len(elems))])
    print(len(elems))


def cmd_semigroup_verify(args):
    spec = _semigroup(args)
    N = _big_int(args.N)
    _positive("N", N)
    g = verify_growth_bound(spec, N, args.budget)
    cb = combinatorial_bound(spec, N)
    items = _blocks_items(spec) + [
        ("N", N), ("generators", list(g.generators)), ("count", g.count),
        ("tau_N", float(g.tau_value)), ("bound", float(g.bound)),
        ("exponent", g.exponent), ("pass", g.passed),
        ("combinatorial_bound", cb), ("combinatorial_pass", g.count <= cb),
    ]
    _emit(args, "semigroup-verify", ("N", "count", "bound", "exponent", "pass", "combinatorial_bound"),
          [(N, g.count, float(g.bound), g.exponent, g.passed, cb)], items)
    if not (g.passed and g.count <= cb):
        raise ComputationError(f"growth bound violated at N = {N}")


def cmd_growth_series(args):
    Ns = _int_list(args.Ns)
    if not Ns:
        raise UsageError("--Ns is empty")
    spec = _semigroup(args) if args.spec else None
    gens = _int_list(args.gens) if args.gens else (generators_up_to(spec, Ns[-1]) if spec else None)
    if gens is None:
        raise UsageError("give --gens or --spec")
    series = growth_exponent_series(gens, Ns, args.budget)
    rows = []
    for N, count, expo in series:
        if spec is not None and spec.tau is not None:
            bound = float(growth_bound(spec, N)[1])
            rows.append((N, count, bound, expo, count <= bound))
        else:
            rows.append((N, count, None, expo, None))
    items = [("generators", gens), ("Ns", Ns), ("counts", [c for _, c, _ in series]),
             ("exponents", [e for _, _, e in series])]
    _emit(args, "growth-series", ("N", "count", "bound", "exponent", "pass"), rows, items)


# ---------------------------------------------------------------------------
# parser


def _common_output(p):
    p.add_argument("-o", "--out", help="output path (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "report-text"), help="default: csv for *.csv paths, else report-text")


def _add_classify_flags(p):
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--l-max", type=int, default=8)
    p.add_argument("--classify-sigma", default="tail", help="Følner sequence for the averages (default tail: F_n = [n, 2n-1])")
    p.add_argument("--n-stages", type=int, default=256)
    p.add_argument("--j-window", default="32,64")
    p.add_argument("--tol", type=float, default=None, help="default 1e-6, or 1e-3 for digit-Bernoulli measures")
    p.add_argument("-K", type=int, default=DEFAULT_K)


def build_parser():
    parser = _Parser(prog="timesp", description="Fourier-analytic experiments with x p invariant measures.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("fourier", help="Fourier coefficient mu_hat(k)")
    p.add_argument("--measure", required=True)
    p.add_argument("-k", help="frequency; accepts expressions such as 3*2^40+1")
    p.add_argument("--big", help="k,p,j,l for the frequency k*p^j+l")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _common_output(p)
    p.set_defaults(fn=cmd_fourier)

    p = sub.add_parser("pushforward", help="image of an atomic measure under x -> q x")
    p.add_argument("--measure", required=True)
    p.add_argument("-q", type=int, required=True)
    _common_output(p)
    p.set_defaults(fn=cmd_pushforward)

    p = sub.add_parser("invariance", help="invariance defect under x -> q x up to frequency K")
    p.add_argument("--measure", required=True)
    p.add_argument("-q", type=_big_int, required=True)
    p.add_argument("-K", type=int, default=DEFAULT_K)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _common_output(p)
    p.set_defaults(fn=cmd_invariance)

    p = sub.add_parser("density", help="|A ∩ F_n| / |F_n| along a Følner sequence")
    p.add_argument("--subset", required=True)
    p.add_argument("--sigma", default="initial")
    p.add_argument("-n", "--n", type=int, default=20, help="number of stages")
    p.add_argument("--schedule", choices=("auto", "linear", "dyadic"), default="auto",
                   help="auto: dyadic stage indices 2^1..2^n for initial segments, else 1..n")
    p.add_argument("--conv-tol", type=float, default=1e-3)
    _common_output(p)
    p.set_defaults(fn=cmd_density)

    p = sub.add_parser("folner-defect", help="|(F_n + m) Δ F_n| / |F_n|")
    p.add_argument("--sigma", default="initial")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", "--n", type=int, required=True)
    _common_output(p)
    p.set_defaults(fn=cmd_folner_defect)

    p = sub.add_parser("mixing", help="ergodic, weak and strong mixing statistics for one (k, l)")
    p.add_argument("--measure", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-l", type=int, required=True)
    p.add_argument("--sigma", default="initial")
    p.add_argument("-n", "--n", type=int, default=256)
    p.add_argument("--j-window", default="32,64")
    p.add_argument("--all-stages", action=argparse.BooleanOptionalAction, default=True,
                   help="emit every stage 1..n (default) or only the final one")
    _common_output(p)
    p.set_defaults(fn=cmd_mixing)

    p = sub.add_parser("classify", help="mixing-hierarchy verdicts over all |k|, |l| <= k_max, l_max")
    p.add_argument("--measure", required=True)
    p.add_argument("-p", type=int, required=True)
    _add_classify_flags(p)
    _common_output(p)
    p.set_defaults(fn=cmd_classify)

    for name, fn, help_ in (
        ("scan", cmd_scan, "exponents j with x (p^j + l) invariance"),
        ("verdict", cmd_verdict, "rigidity verdict from a scan, a density and a mixing report"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--measure", required=True)
        p.add_argument("-p", type=int, required=True)
        p.add_argument("-l", type=int, required=True)
        p.add_argument("--j-max", type=int, default=32)
        p.add_argument("--eps", type=float, default=None, help="default 1e-9, or 1e-6 for Fourier tables")
        if name == "verdict":
            p.add_argument("--sigma", default="initial", help="Følner sequence for the density of A")
            _add_classify_flags(p)
        else:
            p.add_argument("-K", type=int, default=DEFAULT_K)
        _common_output(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("semigroup-build", help="exponent blocks F_m of the sparse semigroup")
    p.add_argument("--spec", required=True)
    p.add_argument("--m-max", type=int)
    _common_output(p)
    p.set_defaults(fn=cmd_semigroup_build)

    p = sub.add_parser("semigroup-count", help="|S ∩ [1, N]| for explicit generators or a spec")
    p.add_argument("--gens")
    p.add_argument("--spec")
    p.add_argument("--m-max", type=int)
    p.add_argument("-N", required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--dump", help="write the elements, one per line")
    _common_output(p)
    p.set_defaults(fn=cmd_semigroup_count)

    p = sub.add_parser("semigroup-verify", help="growth bound and block counting bound at N")
    p.add_argument("--spec", required=True)
    p.add_argument("--m-max", type=int)
    p.add_argument("-N", required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    _common_output(p)
    p.set_defaults(fn=cmd_semigroup_verify)

    p = sub.add_parser("growth-series", help="ln count / ln N over several N")
    p.add_argument("--gens")
    p.add_argument("--spec")
    p.add_argument("--m-max", type=int)
    p.add_argument("--Ns", required=True, help="comma separated, e.g. 1e3,1e4,1e5")
    p.add_argument("--budget", type=int, default=10_000_000)
    _common_output(p)
    p.set_defaults(fn=cmd_growth_series)
    return parser


def _fail(exc, code):
    payload = {"error": getattr(exc, "kind", "error"), "message": str(exc), "exit": code}
    if isinstance(exc, SpecError):
        payload["problems"] = exc.problems
        if exc.path:
            payload["path"] = exc.path
    partial = getattr(exc, "partial", None)
    if isinstance(partial, int):
        payload["partial_count"] = partial
    sys.stderr.write(json.dumps(payload, ensure_ascii=False) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("missing subcommand")
        args.fn(args)
    except UsageError as exc:
        return _fail(exc, EXIT_VALIDATION)
    except ValidationError as exc:
        return _fail(exc, EXIT_VALIDATION)
    except (ComputationError, RecursionError, MemoryError) as exc:
        return _fail(exc, EXIT_COMPUTATION)
    except TimespError as exc:
        return _fail(exc, EXIT_VALIDATION)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
