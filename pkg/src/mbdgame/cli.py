"""Command-line front end.

Every command prints one JSON object (fixed key order) on stdout:
``command``, ``input_digest`` (sha256 of the inputs), ``seed``, ``limit``,
``payload`` and ``elapsed_ms``.  Vertices in payloads are reported by
label (the id itself when the input has no ``labels:`` line).

Exit codes: 0 success, 2 parse or grammar error, 3 capacity exceeded,
4 input outside the accepted class (e.g. a non-forest for a tree command).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from mbdgame import bench, generators as gen
from mbdgame.dominator_critical import (associated_hypergraph, enumerate_minimal_transversals,
                                        is_dominator_critical_tree, is_minimal_transversal)
from mbdgame.fixtures import fixture_path
from mbdgame.graph_core import (Graph, GraphFormatError, Hypergraph, InputClassError, PredominatedGraph,
                                bipartition, closed_neighborhood_hypergraph, is_tree, parse_graph,
                                parse_hypergraph, render_graph, render_hypergraph)
from mbdgame.hypergraph_game import (DEFAULT_LIMIT, CapacityError, Player, is_dominator_critical_game,
                                     maker_wins, solve, staller_wins)
from mbdgame.tree_structures import (ENUMERATION_LIMIT, Substructure, check_critical_tree, color_vertices,
                                     critical_witness, enumerate_substructures, is_atomic_mbd_critical_tree)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_INPUT_CLASS = 4


@dataclass
class CommandResult:
    command: str
    input_digest: str
    payload: dict
    elapsed_ms: float = 0.0
    seed: int | None = None
    limit: int | None = None

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "limit": self.limit,
            "payload": self.payload,
        }
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _digest(*parts: bytes | str) -> str:
    h = hashlib.sha256()
    for p in parts:
        data = p.encode("utf-8") if isinstance(p, str) else p
        h.update(len(data).to_bytes(8, "big"))
        h.update(data)
    return "sha256:" + h.hexdigest()


def _read(path: str) -> bytes:
    """File contents; ``fixture:<name>`` reads a shipped fixture, ``-`` reads stdin."""
    if path == "-":
        return sys.stdin.buffer.read()
    if path.startswith("fixture:"):
        try:
            return fixture_path(path[len("fixture:"):]).read_bytes()
        except FileNotFoundError as exc:
            raise CliError(EXIT_PARSE, str(exc)) from None
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _labels(g: Graph, vs) -> list[int]:
    return sorted(g.label(v) for v in vs)


def _ids(g: Graph, labels) -> list[int]:
    try:
        return [g.id_of(x) for x in labels]
    except KeyError as exc:
        raise CliError(EXIT_PARSE, f"unknown vertex label {exc.args[0]}") from None


def _is_atomic(pg: PredominatedGraph) -> bool:
    g, d = pg.graph, pg.predominated
    return all(g.adjacency[v] and not any(w in d for w in g.adjacency[v]) for v in d)


# --- commands -----------------------------------------------------------------

def cmd_solve(args) -> CommandResult:
    data = _read(args.path)
    if args.hypergraph:
        h = parse_hypergraph(data)
        v = solve(h, limit=args.limit)
        payload = {
            "winner": v.winner.value,
            "first_optimal_move": v.first_optimal_move,
            "nodes_expanded": v.nodes_expanded,
        }
    else:
        pg = parse_graph(data)
        v = solve(closed_neighborhood_hypergraph(pg), limit=args.limit)
        move = v.first_optimal_move
        payload = {
            "winner": "Staller" if v.winner is Player.MAKER else "Dominator",
            "first_optimal_move": None if move is None else pg.graph.label(move),
            "nodes_expanded": v.nodes_expanded,
        }
    return CommandResult("solve", _digest(data, str(args.hypergraph)), payload)


def _tree_fast(pg: PredominatedGraph) -> dict:
    g = pg.graph
    ok, reason = check_critical_tree(pg)
    w = critical_witness(pg) if ok else None
    return {
        "method": "tree-fast",
        "critical": ok,
        "atomic": ok and is_atomic_mbd_critical_tree(pg),
        "reason": reason,
        "witness": w.to_dict(g) if w is not None else None,
    }


def _oracle(pg: PredominatedGraph, limit: int) -> dict:
    g = pg.graph
    h = closed_neighborhood_hypergraph(pg)
    wins = maker_wins(h, limit=limit)
    failing = None
    if wins:
        for v in pg.free:
            if staller_wins(pg.with_predominated(pg.predominated | {v}), limit=limit):
                failing = g.label(v)
                break
    critical = wins and failing is None
    return {
        "method": "oracle",
        "critical": critical,
        "atomic": critical and _is_atomic(pg),
        "staller_wins": wins,
        "extension_staller_still_wins": failing,
    }


def _dominator(pg: PredominatedGraph, limit: int, oracle: bool = False) -> dict:
    g, d = pg.graph, pg.predominated
    if not d:
        raise CliError(EXIT_INPUT_CLASS, "Dominator-criticality requires a nonempty predominated set")
    if is_tree(g):
        ah = associated_hypergraph(g)
        verdict = is_dominator_critical_tree(g, d)
        private = {}
        for e in ah.base.edges.values():
            hit = e & d
            if len(hit) == 1:
                (v,) = hit
                private.setdefault(g.label(v), _labels(g, e))
        out = {
            "method": "dominator",
            "characterization": "minimal transversal",
            "dominator_critical": verdict,
            "associated_edges": sorted(_labels(g, e) for e in ah.base.edges.values()),
            "minimal_transversal": is_minimal_transversal(ah.base, d),
            "private_edges": {str(k): private[k] for k in sorted(private)},
        }
        if oracle:
            out["game"] = is_dominator_critical_game(pg, limit=limit)
        return out
    return {
        "method": "dominator",
        "characterization": "game",
        "dominator_critical": is_dominator_critical_game(pg, limit=limit),
    }


def cmd_check_critical(args) -> CommandResult:
    data = _read(args.path)
    pg = parse_graph(data)
    if args.tree_fast:
        payload = _tree_fast(pg)
    elif args.oracle:
        payload = _oracle(pg, args.limit)
    else:
        payload = _dominator(pg, args.limit)
    method = payload["method"]
    return CommandResult("check-critical", _digest(data, method), payload)


def cmd_color(args) -> CommandResult:
    data = _read(args.path)
    pg = parse_graph(data)
    g = pg.graph
    part = color_vertices(g)
    payload = part.to_dict(g)
    payload["substructure_count"] = len(enumerate_substructures(g)) if g.n <= ENUMERATION_LIMIT else None
    return CommandResult("color", _digest(data), payload)


def cmd_dominator_critical(args) -> CommandResult:
    data = _read(args.path)
    pg = parse_graph(data)
    payload = _dominator(pg, args.limit, oracle=args.oracle)
    if args.transversals:
        g = pg.graph
        if not is_tree(g):
            raise CliError(EXIT_INPUT_CLASS, "minimal transversals are listed for trees only")
        res = enumerate_minimal_transversals(associated_hypergraph(g).base, cap=args.cap)
        payload["minimal_transversals"] = [_labels(g, t.vertices) for t in res.transversals]
        payload["truncated"] = res.truncated
    return CommandResult("dominator-critical", _digest(data, str(args.transversals), str(args.cap)), payload)


# generate ---------------------------------------------------------------------

def _member_record(name: str, built: gen.Built, family: str, extra: dict) -> dict:
    pg = built.predominated_graph()
    g = pg.graph
    lab = g.label
    sidecar = {
        "family": family,
        "X": _labels(g, built.fixed_degree),
        "D": _labels(g, pg.predominated),
        **extra,
        "base": {
            "vertices": sorted(lab(v) for v in built.base.vertices),
            "edges": sorted(sorted((lab(u), lab(v))) for u, v in built.base.edges),
            "fixed_degree": sorted(lab(v) for v in built.base.fixed_degree),
        },
        "plan": [[lab(s.edge[0]), lab(s.edge[1]), list(s.lengths)] for s in built.plan.steps],
        "paths": [[[lab(v) for v in p] for p in step] for step in built.paths],
    }
    if family == "S":
        ok = gen.is_in_S(built.base)
    elif family == "C":
        ok = gen.find_cactus_substructure(g, pg.predominated) is not None
    else:
        ok = _replacement_shape_ok(built)
    return {"name": name, "text": render_graph(pg), "sidecar": sidecar, "family_check": ok}


def _replacement_shape_ok(built: gen.Built) -> bool:
    """Bipartite with X as one class, and D independent with no isolated vertex."""
    g = built.graph
    side = bipartition(g)
    if side is None:
        return False
    x = built.fixed_degree
    if {side[v] for v in x} != {side[min(x)]} or any(side[v] == side[min(x)] for v in range(g.n) if v not in x):
        return False
    return _is_atomic(built.predominated_graph())


def _l_record(name: str, h: Hypergraph, spec: gen.JoinSpec) -> dict:
    leaves = gen.joins_edges(spec)
    covered = set().union(*h.edges.values()) if h.edges else set()
    ok = covered == set(range(h.n)) and h.n == 2 * leaves - 1 and len(h.edges) == leaves
    return {
        "name": name,
        "text": render_hypergraph(h),
        "sidecar": {"family": "L", "spec": gen.render_join_spec(spec, "H1"), "keys": [str(k) for k in h.keys()]},
        "family_check": ok,
    }


def _rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


def cmd_generate(args) -> CommandResult:
    kind = args.kind
    seed = args.seed if args.seed is not None else 0
    parts: list[bytes | str] = [kind]
    records = []
    try:
        if kind in ("S", "L") and args.spec is not None:
            parts.append(args.spec)
            spec = gen.parse_join_spec(args.spec, "P1" if kind == "S" else "H1")
            if kind == "S":
                f = gen.build_S(spec)
                built = gen.built_from_S(f)
                records.append(_member_record(f"{kind}_000", built, "S",
                                              {"spec": gen.render_join_spec(spec, "P1")}))
            else:
                records.append(_l_record(f"{kind}_000", gen.build_L(spec), spec))
        elif kind in ("C", "A") and args.plan is not None:
            if args.base is None:
                raise CliError(EXIT_PARSE, "--plan needs --base")
            data = _read(args.base)
            parts += [data, args.plan]
            base = parse_graph(data)
            g = base.graph
            f = Substructure.make(range(g.n), g.edges(), set(range(g.n)) - base.predominated)
            if not gen.is_in_S(f):
                raise CliError(EXIT_INPUT_CLASS, "base is not a subdivided tree with X = V - D")
            plan = gen.parse_plan(args.plan)
            plan = gen.ReplacementPlan.of(
                [(*_ids(g, s.edge), s.lengths) for s in plan.steps])
            labels = [g.label(v) for v in range(g.n)]
            built = gen.apply_replacements(f, plan, kind, labels)
            records.append(_member_record(f"{kind}_000", built, kind, {}))
        elif args.spec is not None or args.plan is not None:
            raise CliError(EXIT_PARSE, f"kind {kind} takes {'--plan' if kind in 'CA' else '--spec'}")
        else:
            parts += [str(seed), str(args.count), str(args.max_vertices)]
            for i in range(args.count):
                rng = _rng(seed, i)
                name = f"{kind}_{i:03d}"
                if kind == "S":
                    spec = gen.random_join_spec(rng, rng.randint(0, 6), "S")
                    records.append(_member_record(name, gen.built_from_S(gen.build_S(spec)), "S",
                                                  {"spec": gen.render_join_spec(spec, "P1")}))
                elif kind == "L":
                    spec = gen.random_join_spec(rng, rng.randint(0, 6), "L")
                    records.append(_l_record(name, gen.build_L(spec), spec))
                else:
                    built = gen.random_replacement_member(rng, kind, args.max_vertices)
                    records.append(_member_record(name, built, kind, {}))
    except gen.SpecError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for r in records:
            (out / f"{r['name']}.txt").write_text(r["text"], encoding="utf-8")
            (out / f"{r['name']}.json").write_text(json.dumps(r["sidecar"], indent=2) + "\n", encoding="utf-8")
    payload = {"kind": kind, "count": len(records), "instances": records}
    return CommandResult("generate", _digest(*parts), payload, seed=seed)


def cmd_bench(args) -> CommandResult:
    sizes = list(bench.DEFAULT_SIZES) if args.sizes is None else args.sizes
    if sizes != sorted(sizes):
        raise CliError(EXIT_PARSE, "sizes must be ascending")
    rows = bench.recognizer_scaling(sizes, args.repetitions, seed=args.seed or 0)
    text = bench.scaling_csv(rows)
    ratios = [r.ratio for r in rows if r.ratio is not None]
    payload = {"csv": text, "max_ratio": round(max(ratios), 3) if ratios else None}
    if args.solver:
        payload["solver_csv"] = bench.solver_csv(bench.solver_comparison(args.repetitions))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return CommandResult("bench", _digest(json.dumps(sizes), str(args.repetitions)), payload,
                         seed=args.seed or 0)


def cmd_search_cactus_counterexample(args) -> CommandResult:
    try:
        report = gen.search_cactus_counterexample(args.max_n, args.budget, args.seed, args.limit)
    except ValueError as exc:
        raise CliError(EXIT_CAPACITY, str(exc)) from None
    return CommandResult("search-cactus-counterexample",
                         _digest(str(args.max_n), str(args.budget), str(args.seed)),
                         report.to_dict(), seed=args.seed)


# --- argument parsing ----------------------------------------------------------

def _human(result: CommandResult) -> str:
    lines = [f"{result.command}:"]
    for k, v in result.payload.items():
        if k in ("instances", "csv", "solver_csv"):
            continue
        lines.append(f"  {k}: {v}")
    if "csv" in result.payload:
        lines.append(result.payload["csv"].rstrip())
    if "instances" in result.payload:
        for r in result.payload["instances"]:
            lines.append(f"  {r['name']}: family check {'passed' if r['family_check'] else 'FAILED'}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (echoed in the output)")
    common.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                        help=f"solver vertex limit (default {DEFAULT_LIMIT}, at most 32)")
    common.add_argument("--human", action="store_true", help="also print a readable summary on stderr")
    common.add_argument("--out", default=None, help="output file (or directory for generate)")
    common.add_argument("--no-timing", action="store_true", help="omit elapsed_ms for byte-stable output")

    p = argparse.ArgumentParser(prog="mbdgame", description="Maker-Breaker domination game toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve the game on a graph or hypergraph file")
    s.add_argument("path")
    s.add_argument("--hypergraph", action="store_true", help="input is a hypergraph file")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check-critical", parents=[common], help="criticality verdict with evidence")
    s.add_argument("path")
    m = s.add_mutually_exclusive_group(required=True)
    m.add_argument("--tree-fast", action="store_true", help="linear-time test (forests only)")
    m.add_argument("--oracle", action="store_true", help="exhaustive game search")
    m.add_argument("--dominator", action="store_true", help="Dominator-criticality")
    s.set_defaults(func=cmd_check_critical)

    s = sub.add_parser("color", parents=[common], help="black/white/gray coloring of a forest")
    s.add_argument("path")
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("generate", parents=[common], help="generate family members")
    s.add_argument("kind", choices=["S", "C", "A", "L"])
    s.add_argument("--spec", help='join spec, e.g. \'["P1",0,"P1",0]\' or \'["H1",0,"H1",0]\'')
    s.add_argument("--plan", help="replacement plan in base labels, e.g. '[[1,2,[3,3]]]'")
    s.add_argument("--base", help="base tree file for --plan (X = V - D)")
    s.add_argument("--count", type=int, default=1, help="number of seeded instances")
    s.add_argument("--max-vertices", type=int, default=16, help="size cap for seeded C/A members")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("dominator-critical", parents=[common], help="Dominator-criticality of a tree")
    s.add_argument("path")
    s.add_argument("--transversals", action="store_true", help="list the minimal transversals")
    s.add_argument("--cap", type=int, default=1000, help="maximum number of transversals listed")
    s.add_argument("--oracle", action="store_true", help="also run the brute-force game check")
    s.set_defaults(func=cmd_dominator_critical)

    s = sub.add_parser("bench", parents=[common], help="recognizer scaling (and solver) benchmarks")
    s.add_argument("--sizes", type=int, nargs="*", default=None, help="ascending tree sizes")
    s.add_argument("--repetitions", type=int, default=5)
    s.add_argument("--solver", action="store_true", help="also compare compiled and Python solvers")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("search-cactus-counterexample", parents=[common],
                       help="search small predominated cacti for critical ones without a matched substructure")
    s.add_argument("--max-n", type=int, default=6)
    s.add_argument("--budget", type=int, default=100_000, help="maximum number of instances examined")
    s.set_defaults(func=cmd_search_cactus_counterexample)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.limit > 32 or args.limit < 0:
            raise CliError(EXIT_CAPACITY, "--limit must be between 0 and 32")
        t0 = time.perf_counter()
        result = args.func(args)
        result.elapsed_ms = (time.perf_counter() - t0) * 1000.0
        if result.seed is None:
            result.seed = args.seed
        result.limit = args.limit
    except CliError as exc:
        print(f"mbdgame: error: {exc}", file=sys.stderr)
        return exc.code
    except GraphFormatError as exc:
        print(f"mbdgame: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"mbdgame: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InputClassError as exc:
        print(f"mbdgame: input class: {exc}", file=sys.stderr)
        return EXIT_INPUT_CLASS
    text = result.to_json(timing=not args.no_timing)
    sys.stdout.write(text)
    if args.out and args.command not in ("generate", "bench"):
        Path(args.out).write_text(text, encoding="utf-8")
    if args.human:
        sys.stderr.write(_human(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
