"""Command-line front end: ``diamond <subcommand>``.

Profile specs have the form ``name:key=value[,key=value]``:

  simple:K=4,M=20      r(x) = K x, N = 2 + K M^2
  elaborated:m=4       N = 82 m^2 + 2
  quasioptimal:m=2     N = 239 m^2 + 2

A path ending in ``.json`` is read as a profile document
``{"M": int, "knots": [...], "pieces": [[alpha, beta], ...]}``.

JSON results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import asymptotics as asy
from . import verify as verify_mod
from .energy import (
    expected_energy_general,
    expected_energy_single_sum,
    expected_energy_symmetric,
    log_energy,
    riesz_energy,
)
from .ensemble import (
    MalformedCsv,
    NonUnitPoint,
    layout_from_profile,
    points_to_csv,
    read_points_csv,
    sample,
    write_pointset,
)
from .kernels import BACKEND, DuplicatePoints
from .montecarlo import mc_expected_energy
from .profile import BadSpec, Profile, ProfileError, builtin_simple, parse_params, parse_spec

FAMILIES = ("simple", "elaborated", "quasioptimal")


class CliError(Exception):
    def __init__(self, msg: str, code: int = 1):
        super().__init__(msg)
        self.code = code


def load_profile(spec: str) -> Profile:
    if spec.endswith(".json"):
        try:
            text = Path(spec).read_text()
        except OSError as exc:
            raise CliError(f"cannot read {spec}: {exc}") from exc
        try:
            return Profile.from_json(text)
        except (ProfileError, json.JSONDecodeError) as exc:
            raise BadSpec(f"{spec}: {exc}") from exc
    return parse_spec(spec)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_generate(args) -> None:
    prof = load_profile(args.profile)
    ps = sample(layout_from_profile(prof), args.seed)
    if args.out is None:
        if args.format == "json":
            _emit({**ps.metadata(), "points": ps.points.tolist()})
        else:
            sys.stdout.write(points_to_csv(ps.points))
        print(f"N={len(ps)} p={ps.layout.p}", file=sys.stderr)
        return
    out = Path(args.out)
    try:
        if args.format == "json":
            out.write_text(json.dumps({**ps.metadata(), "points": ps.points.tolist()}, indent=2) + "\n")
        else:
            write_pointset(ps, out, out.with_suffix(".json"))
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}") from exc
    _emit({"N": len(ps), "p": ps.layout.p, "out": str(out)})


def cmd_energy(args) -> None:
    try:
        pts = read_points_csv(args.points)
    except OSError as exc:
        raise CliError(f"cannot read {args.points}: {exc}") from exc
    if args.s is None:
        _emit({"N": len(pts), "log_energy": log_energy(pts)})
    else:
        _emit({"N": len(pts), "s": args.s, "riesz_energy": riesz_energy(pts, args.s)})


def cmd_expect(args) -> None:
    lay = layout_from_profile(load_profile(args.profile))
    br = expected_energy_general(lay)
    single = expected_energy_single_sum(lay)
    out = {"breakdown": br.to_dict(), "single_sum": single, "difference_single": br.total - single}
    if lay.is_symmetric and lay.p % 2 == 1:
        sym = expected_energy_symmetric(lay)
        out["symmetric"] = sym
        out["difference_symmetric"] = br.total - sym
    _emit(out)


def _family_factory(family: str):
    name, _, rest = family.partition(":")
    if name == "simple":
        params = parse_params(rest) if rest else {"K": 4}
        if set(params) != {"K"}:
            raise BadSpec("simple family takes only K, e.g. simple:K=4")
        K = params["K"]
        return lambda M: builtin_simple(K, M)
    if name in ("elaborated", "quasioptimal") and not rest:
        return lambda m: parse_spec(f"{name}:m={m}")
    raise BadSpec(f"unknown family {family!r}; use simple[:K=k], elaborated or quasioptimal")


def _parse_m_list(text: str) -> list[int]:
    try:
        ms = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise BadSpec(f"bad m list {text!r}") from None
    if not ms:
        raise BadSpec("m list is empty")
    return ms


def cmd_asymptote(args) -> None:
    factory = _family_factory(args.family)
    ms = _parse_m_list(args.m)
    reports = [asy.asymptotic_report(factory(m)) for m in ms]
    _emit([r.to_dict() for r in reports])
    errs = [r.abs_error for r in reports]
    if errs and errs[0] is not None:
        mono = all(b < a for a, b in zip(errs, errs[1:]))
        verdict = "converging" if mono else "not monotone"
        print(f"convergence: {verdict} (|c_N - target| {errs[0]:.3e} -> {errs[-1]:.3e})", file=sys.stderr)


def cmd_verify(args) -> int:
    checks = verify_mod.run(args.suite)
    for name, ok, detail in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}", file=sys.stderr)
    passed = all(ok for _, ok, _ in checks)
    _emit({"suite": args.suite, "passed": passed, "checks": [{"name": n, "ok": o, "detail": d} for n, o, d in checks]})
    return 0 if passed else 1


def cmd_montecarlo(args) -> None:
    lay = layout_from_profile(load_profile(args.profile))
    _emit(mc_expected_energy(lay, args.trials, args.base_seed).to_dict())


def cmd_constants(args) -> None:
    _emit(asy.reference_constants())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diamond",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 (kernels: {BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a point set")
    p.add_argument("profile")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path; a .json sidecar is written next to CSV output")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("energy", help="log or Riesz energy of a points CSV")
    p.add_argument("points")
    p.add_argument("--s", type=float, default=None, help="Riesz exponent (default: logarithmic energy)")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("expect", help="closed-form expected log energy")
    p.add_argument("profile")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("asymptote", help="order-N constants over a family")
    p.add_argument("family", help="simple[:K=k] (m values are M), elaborated, quasioptimal")
    p.add_argument("--m", required=True, help="comma-separated sizes, e.g. 16,32,64")
    p.set_defaults(func=cmd_asymptote)

    p = sub.add_parser("montecarlo", help="sampled vs closed-form expected energy")
    p.add_argument("profile")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--base-seed", type=int, default=0)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("suite", choices=(*verify_mod.SUITES, "all"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("constants", help="print reference constants")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.func(args)
    except BadSpec as exc:
        print(f"diamond: bad spec: {exc}", file=sys.stderr)
        return 2
    except (CliError, MalformedCsv, NonUnitPoint, DuplicatePoints, ProfileError, asy.QuadratureFailure) as exc:
        print(f"diamond: {exc}", file=sys.stderr)
        return getattr(exc, "code", 1)
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
