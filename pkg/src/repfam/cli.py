"""Command-line interface.

Exit codes: 0 when a solution is printed, 1 for a NO answer (or a rejected
witness under ``verify``), 2 for bad input or usage.
Vertex ids are 1-based on input and output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import sepcol
from .ffmat import BIG_FIELD, PrimeFieldMatrix
from .graphs import DecompositionError, ParseError, parse_graph, parse_td, solution_json
from .matroids import MatroidError, from_matrix, graphic_matroid, uniform_matroid
from .repfam import FamilyError, read_family, rep_linear_auto, write_family
from .solvers import (
    InputError,
    LinearUniformReducer,
    WitnessError,
    k_path,
    k_tree,
    long_directed_cycle,
    meg,
    min_scss,
    short_cheap_tour,
    steiner_tree,
    validate_cycle,
    validate_embedding,
    validate_equivalent,
    validate_path,
    validate_steiner,
    validate_strong,
)

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    P_conf: int = 40
    pipeline: str = "default"
    epsilon: Fraction = Fraction(1, 4)
    output: str = "text"
    reducer: str = "sepcol"

    def __post_init__(self):
        if self.P_conf < 1:
            raise UsageError("--confidence must be at least 1")
        if not 0 < self.epsilon <= 1:
            raise UsageError("--epsilon must lie in (0, 1]")
        if self.pipeline not in ("default", "full"):
            raise UsageError("--pipeline must be default or full")


def _config(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get("REPFAM_SEED")
        try:
            seed = int(env) if env not in (None, "") else 0
        except ValueError:
            raise UsageError(f"REPFAM_SEED={env!r} is not an integer") from None
    try:
        eps = Fraction(args.epsilon)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --epsilon {args.epsilon!r}") from None
    return RunConfig(seed, args.confidence, args.pipeline, eps, "json" if args.json else args.output,
                     args.reducer)


def _reducer(cfg: RunConfig):
    return LinearUniformReducer() if cfg.reducer == "linear" else None


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _graph(path: str, directed: bool | None = None):
    return parse_graph(_read(path), directed=directed)


def _one(vs):
    return [v + 1 for v in vs]


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.output == "json":
        print(solution_json(**payload))
    else:
        print(text)


def _prov(cfg: RunConfig, result_prov: dict) -> dict:
    out = {"seed": cfg.seed, "P_conf": cfg.P_conf, "pipeline": cfg.pipeline}
    out.update(result_prov)
    out.setdefault("monte_carlo", False)
    return out


# ---------------------------------------------------------------- subcommands

def _parse_matroid(spec: str, n_universe: int):
    kind, _, rest = spec.partition(":")
    if kind == "uniform":
        try:
            n, k = (int(x) for x in rest.split(":"))
        except ValueError:
            raise UsageError("--matroid uniform:N:K needs two integers") from None
        return uniform_matroid(n, k)
    if kind == "graphic":
        G = _graph(rest)
        return graphic_matroid(G)
    if kind == "matrix":
        rows = [[int(x) for x in line.split()] for line in _read(rest).decode().splitlines() if line.strip()]
        return from_matrix(PrimeFieldMatrix(rows, BIG_FIELD))
    raise UsageError(f"unknown matroid kind {kind!r}")


def cmd_repfam(args, cfg: RunConfig) -> int:
    try:
        S, q_file = read_family(_read(args.family).decode("utf-8", "replace"),
                                sense="min" if args.sense == "none" else args.sense)
    except FamilyError as exc:
        raise UsageError(str(exc)) from None
    q = q_file if args.q is None else args.q
    M = _parse_matroid(args.matroid, len(S.universe))
    if len(M) != len(S.universe):
        raise UsageError(f"matroid has {len(M)} elements, family universe has {len(S.universe)}")
    sense = None if args.sense == "none" else args.sense
    if args.method == "uniform":
        R = sepcol.UniformReducer(cfg.seed, cfg.P_conf, cfg.pipeline)
        out = R.reduce(S, q, sense)
        prov = {"method": "uniform", "monte_carlo": R.provenance()["monte_carlo"]}
    else:
        out = rep_linear_auto(M, S, q, sense, seed=cfg.seed, P_conf=cfg.P_conf)
        prov = {"method": "linear", "monte_carlo": M.rank > (S.set_size or 0) + q}
    payload = {
        "problem": "repfam", "status": "YES", "p": S.set_size or 0, "q": q,
        "sets": [sorted(s) for s in out.sets], "weights": out.weights,
        "provenance": _prov(cfg, prov),
    }
    _emit(cfg, payload, write_family(out, q).rstrip())
    return EXIT_OK


def cmd_sepcol(args, cfg: RunConfig) -> int:
    try:
        C = sepcol.build(args.n, args.p, args.q, cfg.seed, cfg.P_conf, cfg.pipeline,
                         verify=True if args.verify else None)
    except sepcol.CollectionError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        Path(args.out).write_bytes(C.to_bytes())
    prov = dict(C.provenance)
    info = {"problem": "sepcol", "status": "YES", "n": args.n, "p": args.p, "q": args.q,
            "size": len(C), "kind": type(C).__name__,
            "provenance": _prov(cfg, {"verified": bool(prov.get("verified")),
                                      "monte_carlo": not prov.get("verified")})}
    _emit(cfg, info, f"{type(C).__name__}: {len(C)} members, verified={bool(prov.get('verified'))}")
    return EXIT_OK


def _no(cfg: RunConfig, problem: str, prov: dict, **extra) -> int:
    _emit(cfg, {"problem": problem, "status": "NO", "provenance": _prov(cfg, prov), **extra}, "NO")
    return EXIT_NO


def cmd_kpath(args, cfg: RunConfig) -> int:
    G = _graph(args.graph)
    r = k_path(G, args.k, cfg.seed, cfg.P_conf, cfg.pipeline, _reducer(cfg), preprocess=not args.no_preprocess)
    if not r.found:
        return _no(cfg, "kpath", r.provenance, k=args.k)
    path = _one(r.witness)
    _emit(cfg, {"problem": "kpath", "status": "YES", "k": args.k, "path": path,
                "provenance": _prov(cfg, r.provenance)}, " ".join(map(str, path)))
    return EXIT_OK


def cmd_cheaptour(args, cfg: RunConfig) -> int:
    G = _graph(args.graph)
    r = short_cheap_tour(G, args.k, args.k_max, cfg.seed, cfg.P_conf, cfg.pipeline, _reducer(cfg))
    if not r.found:
        return _no(cfg, "cheaptour", r.provenance, k=args.k)
    path = _one(r.witness)
    _emit(cfg, {"problem": "cheaptour", "status": "YES", "k": args.k, "path": path, "weight": r.weight,
                "provenance": _prov(cfg, r.provenance)}, f"cost {r.weight}: " + " ".join(map(str, path)))
    return EXIT_OK


def cmd_cycle(args, cfg: RunConfig) -> int:
    D = _graph(args.graph, directed=True)
    r = long_directed_cycle(D, args.k, cfg.seed, cfg.P_conf, cfg.pipeline, _reducer(cfg))
    if not r.found:
        return _no(cfg, "cycle", r.provenance, k=args.k)
    cyc = _one(r.witness)
    _emit(cfg, {"problem": "cycle", "status": "YES", "k": args.k, "cycle": cyc,
                "provenance": _prov(cfg, r.provenance)}, " ".join(map(str, cyc)))
    return EXIT_OK


def _terminals(spec: str, n: int) -> list[int]:
    try:
        ts = [int(x) for x in spec.replace(",", " ").split()]
    except ValueError:
        raise UsageError("--terminals must be a comma-separated list of vertex ids") from None
    if not ts or any(not 1 <= t <= n for t in ts):
        raise UsageError(f"terminals must be vertex ids in 1..{n}")
    return sorted({t - 1 for t in ts})


def cmd_steiner(args, cfg: RunConfig) -> int:
    G = _graph(args.graph)
    if G.directed:
        raise UsageError("Steiner tree needs an undirected graph")
    T = _terminals(args.terminals, G.n)
    if args.td:
        td = parse_td(_read(args.td), n=G.n)
    elif G.n <= 12:
        from .oracle import exact_tree_decomposition
        td = exact_tree_decomposition(G)
    else:
        raise UsageError("--td is required for graphs with more than 12 vertices")
    r = steiner_tree(G, T, td)
    if not r.found:
        return _no(cfg, "steiner", r.provenance, terminals=_one(T))
    edges = [_one(e) for e in r.witness]
    _emit(cfg, {"problem": "steiner", "status": "YES", "terminals": _one(T), "edges": edges,
                "weight": r.weight, "provenance": _prov(cfg, r.provenance)},
          f"weight {r.weight}: " + " ".join(f"{a}-{b}" for a, b in edges))
    return EXIT_OK


def cmd_meg(args, cfg: RunConfig) -> int:
    D = _graph(args.graph, directed=True)
    if args.scss:
        r = min_scss(D, args.weighted)
        problem = "scss"
    else:
        r = meg(D, args.weighted)
        problem = "meg"
    arcs = [_one(a) for a in r.witness]
    _emit(cfg, {"problem": problem, "status": "YES", "arcs": arcs, "weight": r.weight,
                "weighted": bool(args.weighted), "provenance": _prov(cfg, r.provenance)},
          f"{'weight' if args.weighted else 'arcs'} {r.weight}: " + " ".join(f"{a}->{b}" for a, b in arcs))
    return EXIT_OK


def cmd_ktree(args, cfg: RunConfig) -> int:
    G = _graph(args.graph)
    T = _graph(args.pattern)
    if G.directed or T.directed:
        raise UsageError("k-tree needs undirected graphs")
    r = k_tree(G, T, cfg.epsilon, cfg.seed, cfg.P_conf, cfg.pipeline, _reducer(cfg))
    if not r.found:
        return _no(cfg, "ktree", r.provenance, k=T.n)
    emb = [r.witness[i] + 1 for i in range(T.n)]
    _emit(cfg, {"problem": "ktree", "status": "YES", "k": T.n, "embedding": emb,
                "provenance": _prov(cfg, r.provenance)},
          " ".join(f"{i + 1}->{h}" for i, h in enumerate(emb)))
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    try:
        sol = json.loads(_read(args.solution))
    except json.JSONDecodeError as exc:
        raise UsageError(f"solution is not JSON: {exc}") from None
    if not isinstance(sol, dict) or sol.get("status") != "YES":
        raise UsageError("solution must be a YES answer in schema 1 JSON")
    prob = sol.get("problem")
    zero = lambda xs: [int(x) - 1 for x in xs]  # noqa: E731
    try:
        if prob in ("kpath", "cheaptour"):
            G = _graph(args.graph)
            w = validate_path(G, zero(sol["path"]), int(sol["k"]))
            if prob == "cheaptour" and w != sol.get("weight"):
                raise WitnessError(f"path weighs {w}, reported {sol.get('weight')}")
        elif prob == "cycle":
            validate_cycle(_graph(args.graph, directed=True), zero(sol["cycle"]), int(sol["k"]))
        elif prob == "steiner":
            G = _graph(args.graph)
            validate_steiner(G, zero(sol["terminals"]), [zero(e) for e in sol["edges"]], sol.get("weight"))
        elif prob in ("meg", "scss"):
            D = _graph(args.graph, directed=True)
            arcs = [tuple(zero(a)) for a in sol["arcs"]]
            (validate_strong if prob == "scss" else validate_equivalent)(D, arcs)
        elif prob == "ktree":
            if not args.pattern:
                raise UsageError("verify of a ktree answer needs --pattern")
            G, T = _graph(args.graph), _graph(args.pattern)
            validate_embedding(G, T, dict(enumerate(zero(sol["embedding"]))))
        else:
            raise UsageError(f"cannot verify problem {prob!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (UsageError, ParseError)):
            raise
        raise UsageError(f"malformed solution: {exc}") from None
    except WitnessError as exc:
        _emit(cfg, {"problem": "verify", "status": "NO", "reason": str(exc)}, f"INVALID: {exc}")
        return EXIT_NO
    _emit(cfg, {"problem": "verify", "status": "YES", "checked": prob}, "VALID")
    return EXIT_OK


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="root seed (default: $REPFAM_SEED or 0)")
    common.add_argument("--confidence", type=int, default=40, help="Monte Carlo confidence P (error <= 2^-P)")
    common.add_argument("--pipeline", choices=("default", "full"), default="default")
    common.add_argument("--epsilon", default="1/4", help="k-tree trade-off parameter in (0, 1]")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--json", action="store_true", help="shorthand for --output json")
    common.add_argument("--reducer", choices=("sepcol", "linear"), default="sepcol",
                        help="uniform-matroid reduction for kpath, cheaptour, cycle and ktree")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")

    p = _Parser(prog="repfam", description="Representative families and the graph solvers built on them.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("repfam", parents=[common], help="compute a q-representative subfamily")
    s.add_argument("family", help="family file: header 'p q n t', then 'weight i1 ... ip' per set (0-based)")
    s.add_argument("--matroid", required=True, help="uniform:N:K, graphic:GRAPH or matrix:FILE")
    s.add_argument("--q", type=int, default=None)
    s.add_argument("--sense", choices=("min", "max", "none"), default="none")
    s.add_argument("--method", choices=("linear", "uniform"), default="linear")
    s.set_defaults(func=cmd_repfam)

    s = sub.add_parser("sepcol-build", parents=[common], help="build an n-p-q separating collection")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--verify", action="store_true", help="verify exhaustively (small parameters only)")
    s.add_argument("--out", help="write the binary collection here")
    s.set_defaults(func=cmd_sepcol)

    s = sub.add_parser("kpath", parents=[common], help="simple path with at least k edges")
    s.add_argument("graph")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--no-preprocess", action="store_true", help="skip the DFS shortcut")
    s.set_defaults(func=cmd_kpath)

    s = sub.add_parser("cheaptour", parents=[common], help="cheapest path with at least k edges")
    s.add_argument("graph")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--k-max", type=int, default=None)
    s.set_defaults(func=cmd_cheaptour)

    s = sub.add_parser("cycle", parents=[common], help="directed cycle of length at least k")
    s.add_argument("graph", help="edge lines are read as arcs u -> v")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_cycle)

    s = sub.add_parser("steiner", parents=[common], help="Steiner tree over a tree decomposition")
    s.add_argument("graph")
    s.add_argument("--terminals", required=True, help="comma-separated vertex ids")
    s.add_argument("--td", help="PACE .td file (optional for graphs up to 12 vertices)")
    s.set_defaults(func=cmd_steiner)

    s = sub.add_parser("meg", parents=[common], help="minimum equivalent graph")
    s.add_argument("graph", help="edge lines are read as arcs u -> v")
    s.add_argument("--weighted", action="store_true")
    s.add_argument("--scss", action="store_true", help="require a strong input and solve minimum SCSS")
    s.set_defaults(func=cmd_meg)

    s = sub.add_parser("ktree", parents=[common], help="embed a pattern tree as a subgraph")
    s.add_argument("graph")
    s.add_argument("--pattern", required=True, help="pattern tree in .gr format")
    s.set_defaults(func=cmd_ktree)

    s = sub.add_parser("verify", parents=[common], help="check a JSON solution against its instance")
    s.add_argument("graph")
    s.add_argument("solution")
    s.add_argument("--pattern", help="pattern tree for ktree answers")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.func(args, cfg)
    except (UsageError, ParseError, InputError, FamilyError, MatroidError, DecompositionError,
            sepcol.CollectionError) as exc:
        print(f"repfam {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
