"""``cutrank`` command line.

Exit codes: 0 success (or closed rank bracket), 1 invalid certificate,
2 open rank bracket, 3 unreadable or inconsistent input, 4 size guard hit,
5 random generation failed, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import certificates as certs
from . import closures
from .config import Guards
from .constructions import (
    Graph, cropped_cube, edge_expansion, graph_from_json, graph_to_json, parse_dimacs, random_regular_graph,
    tseitin_polytope,
)
from .errors import (
    CertificateError, CutrankError, DimensionError, FormatError, GenerationError, GuardError, PreconditionError,
    UnboundedError,
)
from .exactgeom import (
    HPolytope, dd_convert_h_to_v, dd_convert_v_to_h, fmt_rational, hpolytope_from_json, hpolytope_to_json,
    vpolytope_to_json,
)

log = logging.getLogger("cutrank")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_OPEN = 2
EXIT_PARSE = 3
EXIT_GUARD = 4
EXIT_GENERATION = 5
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    mode: str = "split"
    t: int = 1
    coeff_bound: int = 1
    max_rounds: int = 10
    format: str = "text"
    guards: Guards = field(default_factory=Guards)

    @classmethod
    def load(cls, path: str | None) -> "ExperimentConfig":
        cfg = cls()
        if path:
            data = _read_json(path)
            fam = data.get("family", {})
            guards = replace(cfg.guards, **{k: int(v) for k, v in data.get("guards", {}).items()
                                            if k in Guards.__dataclass_fields__})
            cfg = replace(
                cfg,
                seed=int(data.get("seed", cfg.seed)),
                mode=fam.get("mode", cfg.mode),
                t=int(fam.get("t", cfg.t)),
                coeff_bound=int(fam.get("coeff_bound", cfg.coeff_bound)),
                max_rounds=int(data.get("max_rounds", cfg.max_rounds)),
                format=data.get("format", cfg.format),
                guards=guards,
            )
        return replace(cfg, guards=Guards.from_env(cfg.guards))

    def with_flags(self, args) -> "ExperimentConfig":
        cfg = self
        for name in ("seed", "mode", "t", "coeff_bound", "max_rounds", "format"):
            value = getattr(args, name, None)
            if value is not None:
                cfg = replace(cfg, **{name: value})
        return cfg


# ---------------------------------------------------------------------------
# file helpers

def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc


def _read_json(path: str) -> dict:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def read_graph(path: str) -> Graph:
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return parse_dimacs(text)
    return graph_from_json(data)


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _polytope_json(P: HPolytope) -> dict:
    V = dd_convert_h_to_v(P)
    return {"H": hpolytope_to_json(P), "V": vpolytope_to_json(V)}


@dataclass
class Instance:
    name: str
    P: HPolytope
    graph: Graph | None = None
    cropped: int | None = None


def load_instance(args) -> Instance:
    if getattr(args, "cropped_cube", None) is not None:
        n = args.cropped_cube
        return Instance(f"cropped cube n={n}", cropped_cube(n), cropped=n)
    if getattr(args, "tseitin", None):
        G = read_graph(args.tseitin)
        return Instance(f"Tseitin polytope of {args.tseitin}", tseitin_polytope(G), graph=G)
    if getattr(args, "graph", None):
        G = read_graph(args.graph)
        return Instance(f"Tseitin polytope of {args.graph}", tseitin_polytope(G), graph=G)
    if getattr(args, "polytope", None):
        return Instance(args.polytope, hpolytope_from_json(_read_json(args.polytope)))
    raise UsageError("no instance given (use --cropped-cube, --tseitin/--graph or --polytope)")


def _instance_flags(p: argparse.ArgumentParser, graph_name: str = "--tseitin"):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cropped-cube", type=int, metavar="N")
    g.add_argument(graph_name, metavar="GRAPH", help="graph file (JSON or DIMACS edge list)")
    g.add_argument("--polytope", metavar="FILE", help="H-polytope JSON")


def _family_flags(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=closures.MODES)
    p.add_argument("--t", type=int)
    p.add_argument("--coeff-bound", type=int)


# ---------------------------------------------------------------------------
# commands

def cmd_gen_graph(args, cfg: ExperimentConfig) -> int:
    if (args.n * args.d) % 2:
        raise UsageError(f"n * d = {args.n * args.d} is odd; no {args.d}-regular graph on {args.n} vertices")
    G = random_regular_graph(args.n, args.d, cfg.seed)
    _emit(_dump(graph_to_json(G)), args.out)
    return EXIT_OK


def cmd_tseitin(args, cfg) -> int:
    G = read_graph(args.graph)
    _emit(_dump(hpolytope_to_json(tseitin_polytope(G))), args.out)
    return EXIT_OK


def cmd_cropped_cube(args, cfg) -> int:
    _emit(_dump(hpolytope_to_json(cropped_cube(args.n))), args.out)
    return EXIT_OK


def cmd_expansion(args, cfg) -> int:
    G = read_graph(args.graph)
    rep = edge_expansion(G)
    lines = [f"c = {fmt_rational(rep.expansion)}", f"witness S = {list(rep.witness)}",
             f"subsets examined = {rep.examined}"]
    if args.t is not None:
        t = args.t
        bound = certs.expansion_bound(rep.expansion, G.n, t)
        lines.append(f"bound ceil((c - {t + 1}) * {G.n // 2} / {t}) = {bound}")
        if rep.expansion <= t + 1:
            log.warning("c = %s does not exceed t + 1 = %d; the bound carries no information",
                        fmt_rational(rep.expansion), t + 1)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _family(cfg: ExperimentConfig, dim: int) -> closures.FamilySpec:
    t = 1 if cfg.mode == "split" else cfg.t
    return closures.FamilySpec(cfg.mode, t, cfg.coeff_bound, dim)


def cmd_closure(args, cfg) -> int:
    inst = load_instance(args)
    F = _family(cfg, inst.P.dim)
    H, V = inst.P, dd_convert_h_to_v(inst.P)
    for k in range(args.rounds):
        H, V = closures.closure_step(H, F, V, cfg.guards)
        log.info("round %d: %d vertices", k + 1, len(V))
    data = {"V": vpolytope_to_json(V), "H": hpolytope_to_json(H)}
    if cfg.format == "json":
        _emit(_dump(data), args.out)
    else:
        verts = "\n".join("  (" + ", ".join(fmt_rational(v) for v in p) + ")" for p in V.vertices)
        _emit(f"{len(V)} vertices after {args.rounds} round(s)\n" + (verts + "\n" if verts else ""), args.out)
    return EXIT_OK


def _lower_certificate(inst: Instance, t: int, guards: Guards, path: str | None):
    if path:
        C = certs.CertDAG.from_json(_read_json(path))
        return C, certs.verify_certificate(C, inst.P, t)
    if inst.cropped is not None and t <= inst.cropped:
        C = certs.cropped_cube_certificate(inst.cropped, t, guards)
    elif inst.graph is not None and inst.graph.n % 2 == 1:
        C = certs.build_certificate(inst.graph, t, guards)
    else:
        return None, None
    return C, certs.verify_certificate(C)


def cmd_rank(args, cfg) -> int:
    inst = load_instance(args)
    F = _family(cfg, inst.P.dim)
    out = [f"instance: {inst.name}", f"family: {F.mode}, t = {F.t}, coefficient bound {F.coeff_bound}"]
    upper = None
    if args.upper in ("both", "balas"):
        b = closures.balas_sequence(inst.P, F.t, cfg.guards)
        out.append(f"unit-vector sequence (groups of {F.t}): {b} round(s)")
        upper = b
    if args.upper in ("both", "closure"):
        res = closures.rank_upper_bound(inst.P, F, cfg.max_rounds, cfg.guards)
        out.append("vertices per round: " + " ".join(str(h) for h in res.history))
        if res.exhausted:
            out.append(f"closure: exhausted after {cfg.max_rounds} round(s)")
        else:
            out.append(f"closure: integer hull after {res.rounds} round(s)")
            upper = res.rounds if upper is None else min(upper, res.rounds)
    out.append(f"upper {upper if upper is not None else 'none'}")
    lower = None
    C, report = _lower_certificate(inst, F.t, cfg.guards, args.certificate)
    if report is not None:
        if report.valid:
            lower = report.rank_lower_bound
            out.append(f"lower {lower} (certificate min red count {report.min_red_count})")
        else:
            nid, msg = report.failures[0]
            out.append(f"certificate invalid at node {nid}: {msg}")
    if lower is None:
        out.append("lower none")
    closed = lower is not None and upper is not None and lower == upper
    if closed:
        out.append(f"rank = {lower}")
    elif lower is not None and upper is not None and lower > upper:
        out.append("inconsistent bracket: lower bound exceeds upper bound")
    _emit("\n".join(out) + "\n", args.out)
    return EXIT_OK if closed else EXIT_OPEN


def cmd_certify(args, cfg) -> int:
    t = cfg.t
    if args.cropped_cube is not None:
        C = certs.cropped_cube_certificate(args.cropped_cube, t, cfg.guards)
    elif args.graph:
        C = certs.build_certificate(read_graph(args.graph), t, cfg.guards)
    else:
        raise UsageError("certify needs --graph or --cropped-cube")
    report = certs.verify_certificate(C)
    if not report.valid:  # pragma: no cover - construction bug guard
        raise CertificateError(f"built certificate fails: {report.failures[0]}")
    text = C.to_dot() if cfg.format == "dot" else _dump(C.to_json())
    if args.out:
        _emit(text, args.out)
    elif cfg.format in ("json", "dot"):
        sys.stdout.write(text)
    print(f"nodes {len(C)}")
    print(f"min_red_count {report.min_red_count}")
    print(f"rank lower bound {report.rank_lower_bound}")
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    data = _read_json(args.certificate)
    C = certs.CertDAG.from_json(data)
    P = None
    if any(getattr(args, k, None) is not None for k in ("cropped_cube", "graph", "polytope")):
        P = load_instance(args).P
    dim = (P or C.reference.polytope).dim
    for node in C.nodes:
        if len(node.label) != dim:
            raise DimensionError(f"node {node.id} has dimension {len(node.label)}, instance has {dim}")
    t = args.t if args.t is not None else C.t
    report = certs.verify_certificate(C, P, t)
    if report.valid:
        print("valid")
        print(f"min_red_count {report.min_red_count}")
        print(f"rank lower bound {report.rank_lower_bound}")
        return EXIT_OK
    print("invalid")
    nid, msg = report.failures[0]
    print(f"node {nid}: {msg}")
    print(f"failures {len(report.failures)}")
    return EXIT_INVALID


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON experiment config")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("json", "dot", "text"))
    common.add_argument("--seed", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="cutrank", description="Exact cutting-plane rank experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-graph", parents=[common], help="random regular graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_gen_graph)

    p = sub.add_parser("tseitin", parents=[common], help="Tseitin polytope of a graph")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_tseitin)

    p = sub.add_parser("cropped-cube", parents=[common], help="cropped cube polytope")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_cropped_cube)

    p = sub.add_parser("expansion", parents=[common], help="exact edge expansion")
    p.add_argument("--graph", required=True)
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("closure", parents=[common], help="restricted closure rounds")
    _instance_flags(p)
    _family_flags(p)
    p.add_argument("--rounds", type=int, default=1)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("rank", parents=[common], help="rank bracket")
    _instance_flags(p)
    _family_flags(p)
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--upper", choices=("both", "closure", "balas"), default="both")
    p.add_argument("--certificate", metavar="FILE")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("certify", parents=[common], help="build a certificate")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--graph")
    g.add_argument("--cropped-cube", type=int, metavar="N")
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="verify a certificate")
    p.add_argument("certificate")
    _instance_flags(p, "--graph")
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"cutrank: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = ExperimentConfig.load(args.config).with_flags(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"cutrank: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardError as exc:
        print(f"cutrank: guard exceeded ({exc.bottleneck or 'size'}): {exc}", file=sys.stderr)
        return EXIT_GUARD
    except GenerationError as exc:
        print(f"cutrank: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except (FormatError, DimensionError, UnboundedError, CertificateError) as exc:
        print(f"cutrank: bad input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"cutrank: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CutrankError as exc:  # pragma: no cover
        print(f"cutrank: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
