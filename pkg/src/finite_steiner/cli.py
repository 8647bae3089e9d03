"""Command-line front end.

Field options may go before or after the subcommand::

    finite-steiner --p 5 verify --m5
    finite-steiner --p 7 mu --k 4
    finite-steiner --p 5 chain --b 4 --start 1 --format dot

Exit status: 0 on success or a true answer, 1 on a false or empty answer,
2 on usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from .errors import GeometryError, NoChain
from .gf import ExtField, ext_create, field_create
from .plane import (
    Plane,
    circle_to_json,
    format_circle,
    parse_circle,
    plane_counts,
)
from .steiner import (
    build_chain,
    capacitance,
    cap_to_radius,
    chain_to_dot,
    closed_form_mu,
    general_criterion,
    search_mu,
)
from .tangency import common_tangents
from . import verify as vf

log = logging.getLogger("finite_steiner")

FORMATS = ("text", "json", "dot")

# the worked M(5) example writes GF(25) with alpha^2 = 3
M5_X = 3


@dataclass
class CliConfig:
    p: int
    m: int = 1
    modulus: tuple | None = None
    x: int | None = None
    format: str = "text"
    seed: int = 0

    def ext(self) -> ExtField:
        F = field_create(self.p, self.m, self.modulus)
        return ext_create(F, None if self.x is None else F.parse(str(self.x)))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _modulus(text: str) -> tuple:
    return tuple(int(t) for t in text.replace(" ", "").split(","))


def _global_options(ap, top: bool):
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    ap.add_argument("--p", type=int, default=d(None), help="characteristic (prime)")
    ap.add_argument("--m", type=int, default=d(1), help="extension degree of the base field")
    ap.add_argument("--modulus", type=_modulus, default=d(None),
                    help="irreducible modulus coefficients, constant first, e.g. 2,2,1")
    ap.add_argument("--x", type=int, default=d(None),
                    help="non-square code with alpha^2 = x (default: smallest non-square)")
    ap.add_argument("--format", choices=FORMATS, default=d("text"))
    ap.add_argument("--seed", type=int, default=d(0), help="seed for sampled checks")
    ap.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="finite-steiner", description="Steiner chains in finite Moebius planes M(p^m).")
    _global_options(ap, top=True)
    # the same options are accepted after the subcommand as well
    common = _Parser(add_help=False)
    _global_options(common, top=False)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    add("field", help="field and extension parameters")
    add("plane", help="point and circle counts")

    t = add("tangents", help="common tangents of B_a and B_b")
    t.add_argument("--a", default="1")
    t.add_argument("--b", required=True)

    c = add("chain", help="a proper Steiner chain between B_1 and B_b")
    c.add_argument("--b", required=True)
    c.add_argument("--start", default="1", help="unit-norm start point")
    c.add_argument("--rotor", type=int, choices=(1, 2), default=2,
                   help="step with P1 or its inverse P2")
    c.add_argument("--mu", default=None, help="square root of b selecting the family")

    mu = add("mu", help="mu values giving chains of length k")
    mu.add_argument("--k", type=int, required=True)
    mu.add_argument("--search", action="store_true", help="scan the field instead of the radicals")

    cp = add("cap", help="capacitance of two circles")
    cp.add_argument("circle1")
    cp.add_argument("circle2")

    cr = add("criterion", help="do two disjoint circles carry a proper k-chain")
    cr.add_argument("circle1")
    cr.add_argument("circle2")
    cr.add_argument("--k", type=int, required=True)

    v = add("verify", help="brute-force checks")
    v.add_argument("--axioms", action="store_true")
    v.add_argument("--exhaustive", action="store_true", help="force exhaustive axiom checks")
    v.add_argument("--samples", type=int, default=10_000)
    v.add_argument("--counts", action="store_true")
    v.add_argument("--stabilizer", action="store_true")
    v.add_argument("--census", action="store_true")
    v.add_argument("--a", default="1", help="census inner radius parameter")
    v.add_argument("--b", default=None, help="census outer radius parameter (default: all)")
    v.add_argument("--m5", action="store_true", help="replay the worked M(5) example")
    return ap


# -- subcommands ---------------------------------------------------------------

def cmd_field(cfg: CliConfig, E: ExtField, args):
    F = E.F
    info = {
        **E.to_dict(),
        "q": F.q,
        "nonsquare": F.smallest_nonsquare.n,
        "unit_circle_size": len(E.unit_circle),
    }
    return 0, info, "\n".join(f"{k}: {v}" for k, v in info.items())


def cmd_plane(cfg: CliConfig, E: ExtField, args):
    counts = plane_counts(E)
    info = {"q": E.q, **counts}
    return 0, info, "\n".join(f"{k}: {v}" for k, v in info.items())


def cmd_tangents(cfg: CliConfig, E: ExtField, args):
    F = E.F
    a, b = F.parse(args.a), F.parse(args.b)
    circles = common_tangents(E, a, b)
    data = {"a": a.n, "b": b.n, "count": len(circles),
            "circles": [circle_to_json(B) for B in circles]}
    text = "\n".join(format_circle(B) for B in circles) or "no common tangents"
    return (0 if circles else 1), data, text


def cmd_chain(cfg: CliConfig, E: ExtField, args):
    F = E.F
    mu = None if args.mu is None else F.parse(args.mu)
    try:
        ch = build_chain(F.parse(args.b), E.parse(args.start), mu=mu, which=args.rotor)
    except NoChain as exc:
        return 1, {"error": str(exc), "order": exc.order}, f"no chain: {exc}"
    lines = [f"k={ch.length} b={ch.b} mu={ch.mu} rotor={ch.rotor} proper={ch.proper}"]
    for i, B in enumerate(ch.circles):
        lines.append(f"{format_circle(B)}  inner={ch.inner[i]} outer={ch.outer[i]} next={ch.mutual[i]}")
    return 0, ch.to_dict(), "\n".join(lines), chain_to_dot(ch)


def cmd_mu(cfg: CliConfig, E: ExtField, args):
    F = E.F
    if args.search:
        mus = search_mu(args.k, F)
    else:
        mus = closed_form_mu(args.k, F)
    codes = sorted(mu.n for mu in mus)
    data = {"k": args.k, "method": "search" if args.search else "closed_form", "mu": codes,
            "b": sorted({(mu * mu).n for mu in mus})}
    text = "{" + ", ".join(map(str, codes)) + "}"
    return (0 if codes else 1), data, text


def cmd_cap(cfg: CliConfig, E: ExtField, args):
    B, Bt = parse_circle(args.circle1, E), parse_circle(args.circle2, E)
    c = capacitance(B, Bt)
    return 0, {"cap": c.n}, str(c)


def cmd_criterion(cfg: CliConfig, E: ExtField, args):
    B, Bt = parse_circle(args.circle1, E), parse_circle(args.circle2, E)
    ok = general_criterion(B, Bt, args.k)
    b = cap_to_radius(capacitance(B, Bt))
    return (0 if ok else 1), {"k": args.k, "b": b.n, "chain": ok}, "true" if ok else "false"


def cmd_verify(cfg: CliConfig, E: ExtField, args):
    plane = Plane(E)
    data: dict = {"q": E.q, "seed": cfg.seed}
    lines = []
    ok = True
    selected = args.axioms or args.counts or args.stabilizer or args.census or args.m5
    if not selected:
        args.axioms = args.counts = True
    if args.axioms:
        rep = vf.check_axioms(plane, exhaustive=True if args.exhaustive else None,
                              samples=args.samples, seed=cfg.seed)
        data["axioms"] = rep.to_dict()
        mode = "exhaustive" if rep.exhaustive else f"sampled, seed={rep.seed}"
        lines.append(f"axioms ({mode}): M1={_pf(rep.m1)} M2={_pf(rep.m2)} M3={_pf(rep.m3)}")
        lines.extend(f"  {f}" for f in rep.failures)
        ok &= rep.passed
    if args.counts:
        rep = vf.count_report(plane)
        data["counts"] = rep.to_dict()
        lines.append(f"counts: points={rep.points} circles={rep.circles_total} "
                     f"tangent={rep.tangent} secant={rep.secant} disjoint={rep.disjoint} "
                     f"{_pf(not rep.anomalies)}")
        lines.extend(f"  {a}" for a in rep.anomalies)
        ok &= not rep.anomalies
    if args.stabilizer:
        maps = vf.unit_stabilizer(plane)
        orbits = vf.stabilizer_orbit_counts(plane)
        cover = sorted(set(orbits.values()))
        good = len(maps) == E.q ** 3 - E.q and cover == [2 * (E.q + 1)]
        data["stabilizer"] = {"size": len(maps), "orbit_cover": cover, "disjoint_hit": len(orbits)}
        lines.append(f"stabilizer: size={len(maps)} cover={cover} {_pf(good)}")
        ok &= good
    graphs = []
    if args.census:
        F = E.F
        a = F.parse(args.a)
        bs = [F.parse(args.b)] if args.b is not None else [
            b for b in F.nonzero if b != a and F.is_square(b / a)]
        data["census"] = []
        for b in bs:
            cen = vf.chain_census(plane, a, b)
            data["census"].append(cen.to_dict())
            graphs.append(cen.to_dot())
            lengths = sorted(cen.proper_lengths())
            lines.append(f"census a={a} b={b}: {len(cen.nodes)} tangents, "
                         f"{len(cen.cycles)} cycles, proper lengths {lengths}")
    if args.m5:
        try:
            vf.replay_m5(plane)
            data["fixture"] = "pass"
            lines.append("fixture: pass")
        except GeometryError as exc:
            data["fixture"] = f"fail: {exc}"
            lines.append(f"fixture: fail ({exc})")
            ok = False
    return (0 if ok else 1), data, "\n".join(lines), "".join(graphs)


def _pf(flag: bool) -> str:
    return "pass" if flag else "fail"


COMMANDS = {
    "field": cmd_field,
    "plane": cmd_plane,
    "tangents": cmd_tangents,
    "chain": cmd_chain,
    "mu": cmd_mu,
    "cap": cmd_cap,
    "criterion": cmd_criterion,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.p is None:
        print("finite-steiner: error: --p is required", file=sys.stderr)
        return 2
    x = args.x
    if x is None and args.command == "verify" and args.m5 and (args.p, args.m) == (5, 1):
        x = M5_X
    cfg = CliConfig(args.p, args.m, args.modulus, x, args.format, args.seed)
    try:
        E = cfg.ext()
        log.info("working in %r", E)
        status, data, text, *dot = COMMANDS[args.command](cfg, E, args)
    except (GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif cfg.format == "dot":
        if not dot:
            print(f"error: {args.command} has no DOT output", file=sys.stderr)
            return 2
        sys.stdout.write(dot[0])
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
