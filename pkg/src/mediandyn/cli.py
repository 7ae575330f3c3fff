"""Command-line entry point: one subcommand per experiment kind.

A run is described by a flat JSON spec; command-line flags override its
fields. Every run writes ``<kind>.csv`` (a versioned comment header, then
one row per estimate) and ``<kind>.json`` (spec echo, seed, spec hash,
wall time, version, headline results).

Exit status: 0 when the run completes and its checks pass, 1 on
validation or I/O errors, 2 when a checked property fails.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, analytic
from . import experiments as ex
from .engine import OpinionConfig, init_uniform
from .graph import (Graph, build_complete, build_complete_bipartite, build_cycle,
                    build_path_with_frozen_boundary, build_torus, coordinate_grid,
                    parse_graph_name)
from .randomness import replica_seeds, sample_event_log
from .rules import RuleKind

CSV_VERSION = 1
KINDS = ("marginal", "coupling", "domination", "monotonicity", "unimodality", "fixation",
         "limit_histogram", "energy", "sequential_bipartite", "analytic_table", "snapshot")
FORMULAS = ("p_z", "mu_kn", "f_interval", "interval_prob", "lehner", "bipartite")
EXIT_OK, EXIT_INVALID, EXIT_PROPERTY = 0, 1, 2


class SpecError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass
class ExperimentSpec:
    kind: str
    graph: str | dict | None = None
    rule: str = "median"
    horizon: float = 1.0
    replicas: int = 1000
    seed: int = 0
    params: dict = field(default_factory=dict)
    out_dir: str = "results"

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        known = {f for f in cls.__dataclass_fields__}
        unknown = sorted(set(d) - known)
        if unknown:
            raise SpecError([f"unknown field {k!r}" for k in unknown])
        if "kind" not in d:
            raise SpecError(["missing field 'kind'"])
        return cls(**d)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out_dir")
        return d

    def spec_hash(self) -> str:
        return hashlib.sha256(json.dumps(self.echo(), sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class ResultFiles:
    csv: Path
    json: Path
    images: list[Path]
    summary: dict
    passed: bool


def build_graph(desc) -> Graph:
    """Graph from a short name (``"T10^2"``) or a dict ``{"type": ..., ...}``."""
    if isinstance(desc, str):
        return parse_graph_name(desc)
    if not isinstance(desc, dict) or "type" not in desc:
        raise ValueError("graph must be a name or a dict with a 'type' field")
    kind = desc["type"]
    if kind == "complete":
        return build_complete(int(desc["n"]))
    if kind == "bipartite":
        return build_complete_bipartite(int(desc["a"]), int(desc["b"]))
    if kind == "torus":
        return build_torus(int(desc["side"]), int(desc.get("dim", 2)))
    if kind == "cycle":
        return build_cycle(int(desc["n"]))
    if kind == "path":
        return build_path_with_frozen_boundary(int(desc["k"]), float(desc["left"]),
                                               float(desc["right"]))
    if kind == "json":
        return Graph.from_json(Path(desc["path"]).read_text())
    raise ValueError(f"unknown graph type {kind!r}")


def _vertex(g: Graph, v) -> int:
    if v is None:
        return 0
    if isinstance(v, (list, tuple)):
        return g.index_of(tuple(v))
    g._check_vertex(int(v))
    return int(v)


def _unit_grid(name, values, problems, hi=1.0):
    try:
        vals = [float(a) for a in np.atleast_1d(values)]
    except (TypeError, ValueError):
        problems.append(f"params.{name} must be numbers")
        return
    if any(not 0.0 <= a <= hi for a in vals):
        problems.append(f"params.{name} entries must lie in [0, {hi}]")


def validate(spec: ExperimentSpec) -> list[str]:
    """Every violated field, before any sampling happens."""
    problems = []
    P = spec.params if isinstance(spec.params, dict) else {}
    if not isinstance(spec.params, dict):
        problems.append("params must be an object")
    if spec.kind not in KINDS:
        problems.append(f"kind {spec.kind!r} not in {list(KINDS)}")
    try:
        rule = RuleKind.parse(spec.rule)
    except ValueError as e:
        problems.append(str(e))
        rule = None
    if not isinstance(spec.replicas, int) or spec.replicas < 1:
        problems.append("replicas must be a positive integer")
    if not isinstance(spec.seed, int) or not 0 <= spec.seed < 2**63:
        problems.append("seed must be a non-negative 64-bit integer")
    if not isinstance(spec.horizon, (int, float)) or spec.horizon < 0:
        problems.append("horizon must be >= 0")
    g = None
    if spec.kind not in ("analytic_table", "sequential_bipartite"):
        if spec.graph is None:
            problems.append("graph is required")
        else:
            try:
                g = build_graph(spec.graph)
            except (ValueError, KeyError, OSError) as e:
                problems.append(f"graph: {e}")
    if g is not None:
        try:
            _vertex(g, P.get("vertex"))
        except (IndexError, KeyError, ValueError) as e:
            problems.append(f"params.vertex: {e}")

    k = spec.kind
    if k == "marginal":
        _unit_grid("levels", P.get("levels", [0.5]), problems)
        if rule is not None and rule.binary and P.get("levels") is None:
            problems.append("params.levels (initial densities) required for binary rules")
    if k in ("coupling", "domination"):
        if rule is not None and rule is not RuleKind.MEDIAN:
            problems.append(f"{k} runs median dynamics; rule must be 'median'")
    if k == "coupling":
        _unit_grid("p_grid", P.get("p_grid", [0.5]), problems)
    if k == "domination":
        a, b = P.get("alpha"), P.get("beta")
        if a is None or b is None:
            problems.append("params.alpha and params.beta are required")
        else:
            try:
                ex._check_domination_params(float(a), float(b))
            except ValueError as e:
                problems.append(f"params: {e}")
    if k == "monotonicity":
        a = P.get("alpha")
        if a is None or not 0 <= float(a) <= 0.5:
            problems.append("params.alpha must lie in [0, 1/2]")
    if k == "unimodality":
        grid = P.get("p_grid")
        if grid is None or len(grid) < 3:
            problems.append("params.p_grid needs at least 3 points")
        else:
            _unit_grid("p_grid", grid, problems, hi=0.5)
        if rule is not None and rule.binary:
            problems.append("unimodality thresholds a real-valued rule")
    if k in ("fixation", "limit_histogram"):
        w = P.get("window")
        if w is not None and not 0 < float(w) <= spec.horizon:
            problems.append("params.window must lie in (0, horizon]")
    if k == "fixation" and rule is not None and rule.binary and P.get("p") is None:
        problems.append("params.p required for binary rules")
    if k == "limit_histogram" and g is not None:
        if g.labels is None or not all(isinstance(lab, tuple) and len(lab) == 2 for lab in g.labels):
            problems.append("limit_histogram needs a 2-dimensional lattice")
    if k == "energy":
        eps = P.get("eps_grid", [0.1, 0.2, 0.5])
        if any(float(e) <= 0 for e in eps):
            problems.append("params.eps_grid entries must be > 0")
        if g is not None and any(g.degree(v) % 2 for v in range(g.vertex_count)):
            problems.append("energy needs an even-degree graph")
        if rule is not None and rule.binary:
            problems.append("energy needs a real-valued rule")
    if k == "sequential_bipartite":
        m = P.get("m", 7)
        if not isinstance(m, int) or m < 1 or m % 2 == 0:
            problems.append("params.m must be an odd positive integer")
        _unit_grid("p", P.get("p", 0.4), problems)
    if k == "snapshot":
        if g is not None and g.labels is not None:
            try:
                coordinate_grid(g)
            except ValueError as e:
                problems.append(f"graph: {e}")
        elif g is not None:
            problems.append("snapshot needs a 2-dimensional lattice")
        times = P.get("times", [0.0, spec.horizon])
        if any(float(t) < 0 for t in times):
            problems.append("params.times must be >= 0")
    if k == "analytic_table":
        problems.extend(_validate_formula(P))
    return problems


def _validate_formula(P: dict) -> list[str]:
    f = P.get("formula")
    if f not in FORMULAS:
        return [f"params.formula must be one of {list(FORMULAS)}"]
    problems = []
    if f in ("f_interval", "interval_prob"):
        try:
            analytic._check_interval(int(P.get("i", 1)), int(P.get("j", 1)), int(P.get("k", 1)))
        except ValueError as e:
            problems.append(f"params: {e}")
    if f == "mu_kn" and int(P.get("size", 3)) < 1:
        problems.append("params.size must be >= 1")
    if f == "bipartite" and (int(P.get("m", 7)) % 2 == 0 or int(P.get("m", 7)) < 1):
        problems.append("params.m must be an odd positive integer")
    if f == "interval_prob":
        _unit_grid("x_grid", P.get("x_grid", [0.5]), problems)
        if any(float(a) in (0.0, 1.0) for a in np.atleast_1d(P.get("x_grid", [0.5]))):
            problems.append("interval_prob needs p strictly inside (0, 1)")
    elif f != "f_interval":
        _unit_grid("x_grid", P.get("x_grid", [0.5]), problems)
    if any(float(t) < 0 for t in P.get("t_grid", [0.0])):
        problems.append("params.t_grid entries must be >= 0")
    return problems


def emit_heatmap(g: Graph, config: OpinionConfig | np.ndarray, path) -> Path:
    """Write a binary PGM: one pixel per vertex, intensity ``round(255 * opinion)``, row-major."""
    rows, cols, order = coordinate_grid(g)
    vals = np.asarray(config.values if isinstance(config, OpinionConfig) else config, dtype=float)
    if vals.shape != (g.vertex_count,):
        raise ValueError("configuration size does not match the graph")
    pix = np.clip(np.rint(255 * vals[order]), 0, 255).astype(np.uint8)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode())
        fh.write(pix.tobytes())
    return path


def _write_csv(path: Path, spec: ExperimentSpec, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# mediandyn-csv v{CSV_VERSION} kind={spec.kind} seed={spec.seed} "
                 f"spec_hash={spec.spec_hash()}\n")
        if not rows:
            return
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"not JSON serialisable: {type(o)}")


def _analytic_rows(P: dict) -> list[dict]:
    f = P["formula"]
    t_grid = [float(t) for t in P.get("t_grid", [0.0, 0.5, 1.0, 2.0])]
    x_grid = [float(a) for a in P.get("x_grid", np.linspace(0, 1, 11).round(10).tolist())]
    rows = []
    if f == "p_z":
        for a in x_grid:
            rows.append({"p": a, **{f"t={t!r}": analytic.p_z(a, t) for t in t_grid}})
    elif f == "mu_kn":
        size = int(P.get("size", 3))
        for a in x_grid:
            rows.append({"alpha": a, **{f"t={t!r}": analytic.mu_kn(size, a, t) for t in t_grid}})
    elif f == "f_interval":
        i, j, k = int(P.get("i", 1)), int(P.get("j", 1)), int(P.get("k", 1))
        rows = [{"t": t, "value": analytic.f_interval(i, j, k, t)} for t in t_grid]
    elif f == "interval_prob":
        i, j, k = int(P.get("i", 1)), int(P.get("j", 1)), int(P.get("k", 1))
        rows = [{"p": a, "value": analytic.interval_prob(i, j, k, a)} for a in x_grid]
    elif f == "lehner":
        rows = [{"p": a, "closed_form": analytic.lehner_expectation(a),
                 "exhaustive": analytic.lehner_expectation_exhaustive(a)} for a in x_grid]
    elif f == "bipartite":
        m = int(P.get("m", 7))
        for a in x_grid:
            p0, p1, pf = analytic.bipartite_sequence(a, m)
            rows.append({"p": a, "p0": p0, "p1": p1, "p_final": pf})
    return rows


def run_spec(spec: ExperimentSpec) -> ResultFiles:
    problems = validate(spec)
    if problems:
        raise SpecError(problems)
    started = time.perf_counter()
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    P = spec.params
    rule = RuleKind.parse(spec.rule)
    g = build_graph(spec.graph) if spec.graph is not None else None
    x = _vertex(g, P.get("vertex")) if g is not None else None
    rows: list[dict] = []
    summary: dict = {}
    images: list[Path] = []
    passed = True
    k = spec.kind

    if k == "marginal":
        est = ex.estimate_marginals(g, rule, x, P.get("t_grid", [spec.horizon]),
                                    P.get("levels", [0.5]), spec.replicas, spec.seed)
        rows = [e.as_row() for e in est]
    elif k == "coupling":
        p_grid = P.get("p_grid", np.linspace(0, 1, 21).round(10).tolist())
        for s in replica_seeds(spec.seed, spec.replicas):
            log = sample_event_log(g, spec.horizon, int(s))
            rep = ex.check_coupling(g, log, init_uniform(g, int(s)), p_grid)
            rows.append({"seed": int(s), "pass": rep.passed, "checks": rep.checks,
                         "violation": json.dumps(rep.violation)})
            passed &= rep.passed
        summary = {"pass": passed, "runs": len(rows)}
    elif k == "domination":
        a, b = float(P["alpha"]), float(P["beta"])
        for s in replica_seeds(spec.seed, spec.replicas):
            log = sample_event_log(g, spec.horizon, int(s))
            rep = ex.check_domination(g, log, a, b, init_uniform(g, int(s)))
            rows.append({"seed": int(s), "pass": rep.passed, "checks": rep.checks,
                         "violation": json.dumps(rep.violation)})
            passed &= rep.passed
        summary = {"pass": passed, "runs": len(rows), "alpha": a, "beta": b}
    elif k == "monotonicity":
        res = ex.monotonicity_scan(g, x, float(P["alpha"]), P.get("t_grid", [0.5, 1.0, 2.0]),
                                   spec.replicas, spec.seed, rule)
        rows = [e.as_row() for e in res.estimates]
        summary = {"verdict": res.verdict, "increments": res.statistics, "pooled_se": res.errors}
    elif k == "unimodality":
        res = ex.unimodality_scan(g, x, float(P.get("t", spec.horizon)), P["p_grid"],
                                  spec.replicas, spec.seed, rule)
        rows = [e.as_row() for e in res.estimates]
        summary = {"verdict": res.verdict, "second_differences": res.statistics, "se": res.errors}
    elif k == "fixation":
        w = float(P.get("window", spec.horizon / 4))
        rep = ex.fixation_scan(g, rule, spec.horizon, w, spec.replicas, spec.seed, P.get("p"))
        counts, edges = rep.histogram
        rows = [{"bin_lo": float(lo), "bin_hi": float(hi), "last_flips": int(c)}
                for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
        summary = rep.summary()
    elif k == "limit_histogram":
        h = ex.limit_histogram(g, x, spec.replicas, spec.horizon, int(P.get("bins", 20)),
                               P.get("window"), spec.seed,
                               [tuple(iv) for iv in P.get("intervals", ex.DEFAULT_WINDOWS)])
        rows = [{"bin_lo": float(lo), "bin_hi": float(hi), "count": int(c)}
                for lo, hi, c in zip(h.edges[:-1], h.edges[1:], h.counts)]
        passed = h.passed
        summary = {"pass": passed, "kept": h.kept, "excluded": h.excluded, "side": h.side,
                   "checks": [asdict(c) for c in h.checks],
                   "tail_ratio": dict(zip(map(str, h.tail_alphas), h.tail_ratios.tolist()))}
    elif k == "energy":
        r = ex.energy_report(g, x, spec.replicas, spec.horizon, P.get("eps_grid", [0.1, 0.2, 0.5]),
                             spec.seed, rule)
        rows = [{"eps": float(e), "mean_n_eps": float(m), "se": float(s), "bound": float(b)}
                for e, m, s, b in zip(r.eps, r.mean_n_eps, r.se_n_eps, r.bound)]
        passed = bool(r.bound_ok.all() and r.energy_ok)
        summary = {"pass": passed, "max_own_dh": r.max_own_dh, "mean_flips": r.mean_flips,
                   "energy_slope": asdict(r.energy_slope),
                   "deviation_slope": asdict(r.deviation_slope)}
    elif k == "sequential_bipartite":
        m, p = int(P.get("m", 7)), float(P.get("p", 0.4))
        mc = ex.bipartite_sequence_mc(m, p, spec.replicas, spec.seed)
        p0, p1, pf = analytic.bipartite_sequence(p, m)
        exact = [p0] + [p1] * (m + 1) + [pf]
        rows = [{"step": i, "estimate": float(e), "se": float(s), "exact": exact[i]}
                for i, (e, s) in enumerate(zip(mc["estimates"], mc["se"]))]
        summary = {"exact": [p0, p1, pf], "verdict": ex.sequence_verdict([p0, p1, pf])}
    elif k == "analytic_table":
        rows = _analytic_rows(P)
    elif k == "snapshot":
        from . import _kernels
        times = sorted(float(t) for t in P.get("times", [0.0, spec.horizon]))
        pool, plen, active, fixed = ex._tables(g, rule)
        init = init_uniform(g, spec.seed).values.astype(float)
        if rule.binary:
            init = (init <= float(P.get("p", 0.5))).astype(float)
        snaps = _kernels.snapshots(pool, plen, active, init, np.array(times), spec.seed)
        for t, vals in zip(times, snaps):
            images.append(emit_heatmap(g, vals, out / f"snapshot_t{t:g}.pgm"))
            rows.append({"t": t, "mean": float(vals.mean()),
                         "mean_abs_dev": float(np.abs(vals - 0.5).mean()), "image": images[-1].name})

    csv_path = out / f"{k}.csv"
    _write_csv(csv_path, spec, rows)
    summary = {"kind": k, "spec": spec.echo(), "seed": spec.seed, "spec_hash": spec.spec_hash(),
               "version": __version__, "wall_time": time.perf_counter() - started,
               "pass": passed, **summary}
    json_path = out / f"{k}.json"
    json_path.write_text(json.dumps(summary, indent=2, default=_jsonable))
    return ResultFiles(csv_path, json_path, images, summary, passed)


def _parse_param(text: str):
    key, _, raw = text.partition("=")
    if not key or not _:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mediandyn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="kind", required=True)
    for k in KINDS:
        p = sub.add_parser(k)
        p.add_argument("--spec", type=Path, help="JSON experiment spec")
        p.add_argument("--seed", type=int)
        p.add_argument("--out-dir")
        p.add_argument("--replicas", type=int)
        p.add_argument("--graph")
        p.add_argument("--rule")
        p.add_argument("--horizon", type=float)
        p.add_argument("--param", "-p", action="append", type=_parse_param, default=[],
                       metavar="KEY=VALUE", help="set params[KEY]; VALUE is parsed as JSON")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        d = json.loads(args.spec.read_text()) if args.spec else {}
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: cannot read spec: {e}", file=sys.stderr)
        return EXIT_INVALID
    if d.get("kind", args.kind) != args.kind:
        print(f"error: spec kind {d['kind']!r} does not match subcommand {args.kind!r}",
              file=sys.stderr)
        return EXIT_INVALID
    d["kind"] = args.kind
    for name in ("seed", "out_dir", "replicas", "graph", "rule", "horizon"):
        v = getattr(args, name)
        if v is not None:
            d[name] = v
    if args.param:
        d["params"] = {**d.get("params", {}), **dict(args.param)}
    try:
        res = run_spec(ExperimentSpec.from_dict(d))
    except SpecError as e:
        for prob in e.problems:
            print(f"invalid spec: {prob}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    print(json.dumps({"csv": str(res.csv), "json": str(res.json), "pass": res.passed}))
    return EXIT_OK if res.passed else EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
