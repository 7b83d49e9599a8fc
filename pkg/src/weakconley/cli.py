"""Command line: ``weakconley {ingest,analyze,audit,figure}``.

Exit codes: 0 success, 1 failed audit, 2 configuration error, 3 isolation
failure, 4 pair-construction failure, 5 excision failure.  With several
neighbourhoods every one is analysed and the status of the first failing
one (in config order) is returned.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .audits import (
    audit_constructed_pair,
    corrupted_copy,
    audit_dmds,
    audit_excision,
    audit_isolation_chain,
    audit_map,
    audit_oracle,
    audit_pair_algebra,
    suite_pairs,
)
from .config import ConfigError, NeighbourhoodSpec, RunConfig, load_config
from .conley import AuditResult, NoStrictPairFound, analyze, audit_independence, audit_strong_consistency
from .dynamics import image, invariant_parts
from .dyadic import format_fraction
from .fields import parse_coeffs
from .figure import Overlays, UnsupportedDimension, render_figure, render_projection
from .grid import collar, cube_dim
from .isolation import check_isolation, grow_isolating_neighbourhood, max_value_diameter
from .literals import cube_to_json, format_set, parse_set, set_to_json
from .pairs import CubicalPair, NotWeakPair
from .random_systems import random_isolated_system, random_system
from .report import EXIT_AUDIT, EXIT_OK, dumps, envelope, error_object
from .sampling import MvMap, build_combo_map, build_mv_map, read_samples


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", metavar="PATH", default=d, help="run configuration (JSON)")
    p.add_argument("--seed", type=int, metavar="INT", default=d, help="seed for randomized checks")
    p.add_argument("--coeffs", metavar="q|zp:P", default=d, help="coefficient field (overrides the config)")
    p.add_argument("--out", metavar="PATH", default=d, help="output file (report or SVG)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakconley",
        description="Conley index of sampled dynamics via weak index pairs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "ingest": "read samples, build F and check the dmds axioms",
        "analyze": "isolation, weak index pair and Conley index per neighbourhood",
        "audit": "property suites and independence/consistency audits",
        "figure": "SVG picture of the graph of F (d = 1; projections otherwise)",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text, description=text)
        _global_flags(sp, suppress=True)
    return parser


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------

def _config(args) -> RunConfig:
    if not args.config:
        raise ConfigError("--config PATH is required")
    cfg = load_config(args.config)
    if args.coeffs is not None:
        try:
            k = parse_coeffs(args.coeffs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if isinstance(k, str):
            raise ConfigError("the index is reduced over a field: use q or zp:P")
        cfg = replace(cfg, coefficients=k)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _run_info(cfg: RunConfig) -> dict:
    return {
        "grid": cfg.grid.to_json(),
        "samples": cfg.samples_name,
        "coefficients": cfg.coefficients.spec,
        "seed": cfg.seed,
    }


def _load(cfg: RunConfig, allow_empty: bool = False):
    samples = read_samples(cfg.samples, cfg.samples_format, cfg.grid)
    if not samples.points and allow_empty:
        return samples, None
    f = build_mv_map(build_combo_map(samples, cfg.grid), cfg.grid)
    return samples, f


def _neighbourhood(f: MvMap, spec: NeighbourhoodSpec):
    """Parse (or grow) a configured neighbourhood; literal errors are config errors."""
    if spec.literal is not None:
        return parse_set(spec.literal, f.grid)
    seed = parse_set(spec.auto["seed"], f.grid)
    return grow_isolating_neighbourhood(f, seed, spec.auto["max_k"])


def _requested(spec: NeighbourhoodSpec) -> str:
    if spec.literal is not None:
        return spec.literal
    return f"auto: collar of {spec.auto['seed']}, max_k {spec.auto['max_k']}"


def _check_literals(cfg: RunConfig, f: MvMap) -> None:
    for spec in cfg.neighbourhoods:
        try:
            parse_set(spec.literal if spec.literal is not None else spec.auto["seed"], f.grid)
            if spec.w_target is not None:
                parse_set(spec.w_target, f.grid)
            if spec.pair is not None:
                parse_set(spec.pair["p1"], f.grid)
                parse_set(spec.pair["p2"], f.grid)
        except ValueError as exc:
            raise ConfigError(f"neighbourhood {spec.name!r}: {exc}") from exc


def _pair_json(p: CubicalPair) -> dict:
    out = p.to_json()
    g = p.p1.grid
    out["p1_cubes"] = [cube_to_json(g, c) for c in p.p1.maximal_cells()]
    out["p2_cubes"] = [cube_to_json(g, c) for c in p.p2.maximal_cells()]
    return out


def _write(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _finish(report: dict, path, code: int) -> int:
    report["exit_code"] = code
    _write(dumps(report), path)
    return code


def _report_path(args, cfg: RunConfig | None):
    if args.out is not None:
        return args.out
    return cfg.report if cfg is not None else None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    cfg = _config(args)
    samples, f = _load(cfg)
    trials = int(cfg.audit.get("trials", 100))
    domain = f.domain
    report = envelope(
        "ingest", EXIT_OK,
        run=_run_info(cfg),
        samples={"count": len(samples), "dimension": samples.dimension},
        combinatorial_map=f.combo.to_json(),
        map={
            "cubes": sum(1 for b in f.table.values() if b is not None),
            "top_cubes": sum(1 for c, b in f.table.items() if b is not None and cube_dim(c) == f.grid.dimension),
            "domain": format_set(domain),
            "max_value_diameter": format_fraction(max_value_diameter(f, domain)),
        },
        checks={
            "map_construction": audit_map(f, samples).details,
            "dmds_axioms": audit_dmds(f, trials, cfg.seed).details,
        },
    )
    return _finish(report, _report_path(args, cfg), EXIT_OK)


def _analyze_one(f: MvMap, spec: NeighbourhoodSpec, cfg: RunConfig) -> dict:
    n = _neighbourhood(f, spec)
    w = parse_set(spec.w_target, f.grid) if spec.w_target is not None else None
    pair = None
    if spec.pair is not None:
        pair = CubicalPair(parse_set(spec.pair["p1"], f.grid), parse_set(spec.pair["p2"], f.grid))
    a = analyze(f, n, cfg.coefficients, w_target=w, u_width=spec.u_width, a_width=spec.a_width, pair=pair)
    if not a.axioms.weak:
        raise NotWeakPair(f"the configured pair is not a weak index pair: {a.axioms.witnesses}")
    return {
        "name": spec.name,
        "requested": _requested(spec),
        "status": "ok",
        "neighbourhood": set_to_json(a.n),
        "refinement": a.refinement,
        "options": a.options,
        "isolation": a.verdict.to_json(),
        "pair": _pair_json(a.pair),
        "pair_axioms": a.axioms.to_json(),
        "index_map": a.bundle.summary(),
        "conley_index": a.report.to_json(),
    }


def cmd_analyze(args) -> int:
    cfg = _config(args)
    _, f = _load(cfg)
    _check_literals(cfg, f)
    if not cfg.neighbourhoods:
        raise ConfigError("no neighbourhoods configured")
    results = []
    code = EXIT_OK
    for spec in cfg.neighbourhoods:
        try:
            res = _analyze_one(f, spec, cfg)
        except Exception as exc:  # noqa: BLE001 - classified below, re-raised if unknown
            err = error_object(exc)
            res = {"name": spec.name, "requested": _requested(spec), "status": "error", "error": err}
            code = code or err["code"]
        results.append(res)
        _summary_line(res)
    report = envelope("analyze", code, run=_run_info(cfg), neighbourhoods=results)
    return _finish(report, _report_path(args, cfg), code)


def _summary_line(res: dict) -> None:
    if res["status"] != "ok":
        print(f"{res['name']}: {res['error']['type']} (exit {res['error']['code']})", file=sys.stderr)
        return
    parts = [f"H{d}: dim {v['dim']}, {v['charpoly']}" for d, v in res["conley_index"]["degrees"].items() if v["dim"]]
    print(f"{res['name']}: " + ("; ".join(parts) if parts else "trivial index"), file=sys.stderr)


def _audit_item(res: AuditResult, scope: str) -> dict:
    out = res.to_json()
    out["scope"] = scope
    return out


def cmd_audit(args) -> int:
    cfg = _config(args)
    opts = cfg.audit
    trials = int(opts.get("trials", 100))
    n_random = int(opts.get("random_systems", 10))
    samples, f = _load(cfg)
    _check_literals(cfg, f)
    k = cfg.coefficients
    fault = opts.get("inject_fault")
    if fault not in (None, "stale_preimage"):
        raise ConfigError(f"unknown fault {fault!r} (expected 'stale_preimage')")
    fd = corrupted_copy(f) if fault else f
    items = [_audit_item(audit_map(f, samples), "map"), _audit_item(audit_dmds(fd, trials, cfg.seed), "map")]

    hoods = []
    for spec in cfg.neighbourhoods:
        scope = f"neighbourhood:{spec.name}"
        try:
            n = _neighbourhood(f, spec)
        except Exception as exc:  # noqa: BLE001
            items.append(_audit_item(AuditResult("neighbourhood", False, error_object(exc)), scope))
            continue
        items.append(_audit_item(audit_oracle(f, n), scope))
        items.append(_audit_item(audit_isolation_chain(f, n), scope))
        verdict = check_isolation(f, n)
        if not verdict.weak:
            items.append(_audit_item(AuditResult("weakly_isolating", False, {"verdict": verdict.to_json()}), scope))
            continue
        hoods.append((spec.name, n, verdict))
        items.append(_audit_item(audit_constructed_pair(f, n), scope))
        fs, ns, pairs = suite_pairs(f, n)
        items.append(_audit_item(audit_pair_algebra(fs, ns, pairs), scope))
        items.append(_audit_item(audit_excision(f, n, k), scope))
        if opts.get("strong_consistency", True):
            items.append(_audit_item(_strong(f, n, k, verdict), scope))

    if opts.get("independence", True):
        groups = {}
        for name, n, verdict in hoods:
            groups.setdefault(verdict.inv.cells, []).append((name, n))
        for inv, members in groups.items():
            ns = [n for _, n in members]
            if opts.get("include_collars", True):
                # one-cell-larger neighbourhoods isolating the same invariant set
                for n in list(ns):
                    c = collar(n, 1)
                    v = check_isolation(f, c)
                    if v.weak and v.inv.cells == inv and all(c.cells != m.cells for m in ns):
                        ns.append(c)
            res = audit_independence(f, ns, k)
            scope = "independence:" + ",".join(name for name, _ in members)
            items.append(_audit_item(res, scope))

    for i in range(n_random):
        seed = cfg.seed * 1000 + i
        rs = random_system(seed)
        items.append(_audit_item(audit_oracle(rs.f, rs.n), f"random:{seed}"))
        items.append(_audit_item(audit_dmds(rs.f, min(trials, 20), seed), f"random:{seed}"))
        iso = random_isolated_system(seed, dim=2 if i % 5 == 4 else 1)
        fs, ns, pairs = suite_pairs(iso.f, iso.n)
        items.append(_audit_item(audit_pair_algebra(fs, ns, pairs), f"random-isolated:{seed}"))
        items.append(_audit_item(audit_excision(iso.f, iso.n, k), f"random-isolated:{seed}"))

    failed = [f"{it['scope']}/{it['name']}" for it in items if not it["passed"]]
    vacuous = trials <= 0 and not cfg.neighbourhoods and n_random <= 0
    code = EXIT_AUDIT if failed else EXIT_OK
    report = envelope("audit", code, run=_run_info(cfg), passed=not failed, results=items,
                      summary={"checks": len(items), "failed": failed, "vacuous": vacuous})
    for it in items:
        print(f"{'PASS' if it['passed'] else 'FAIL'} {it['scope']}/{it['name']}", file=sys.stderr)
    return _finish(report, _report_path(args, cfg), code)


def _strong(f, n, k, verdict) -> AuditResult:
    try:
        return audit_strong_consistency(f, n, k)
    except NoStrictPairFound as exc:
        # legitimate only when N is not strongly isolating
        ok = not verdict.strong_setwise
        return AuditResult("strong_consistency", ok, {
            "strongly_isolating_setwise": verdict.strong_setwise,
            "no_strict_pair": str(exc),
            "search": exc.witness,
        })


def _overlays(cfg: RunConfig, f: MvMap) -> Overlays:
    spec = cfg.figure
    ov = Overlays()
    try:
        if "neighbourhood" in spec:
            match = [h for h in cfg.neighbourhoods if h.name == spec["neighbourhood"]]
            if not match:
                raise ConfigError(f"figure: unknown neighbourhood {spec['neighbourhood']!r}")
            ov.n = _neighbourhood(f, match[0])
            ov.s = invariant_parts(f, ov.n).inv
            ov.fs = image(f, ov.s)
        lits = spec.get("overlays", {})
        if "N" in lits:
            ov.n = parse_set(lits["N"], f.grid)
        if "S" in lits:
            ov.s = parse_set(lits["S"], f.grid)
        if "F(S)" in lits:
            ov.fs = parse_set(lits["F(S)"], f.grid)
        elif "S" in lits:
            ov.fs = image(f, ov.s)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"figure: {exc}") from exc
    return ov


def cmd_figure(args) -> int:
    cfg = _config(args)
    samples, f = _load(cfg, allow_empty=True)
    spec = cfg.figure
    path = args.out if args.out is not None else spec.get("path")
    if path is not None and args.out is None:
        path = cfg.base_dir / path
    colors = spec.get("colors", {})
    ov = _overlays(cfg, f) if f is not None else Overlays()
    mode = "graph" if f is not None else "grid-only"
    try:
        svg = render_figure(cfg.grid, f, samples, ov, colors)
    except UnsupportedDimension as exc:
        if not spec.get("projection", True):
            raise
        print(f"note: {exc}; writing per-axis projections", file=sys.stderr)
        svg = render_projection(cfg.grid, f, samples, ov, colors)
        mode = "projection"
    _write(svg, path)
    if path is not None:
        report = envelope("figure", EXIT_OK, run=_run_info(cfg), path=str(path), mode=mode)
        sys.stdout.write(dumps(report))
    return EXIT_OK


COMMANDS = {"ingest": cmd_ingest, "analyze": cmd_analyze, "audit": cmd_audit, "figure": cmd_figure}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except Exception as exc:  # noqa: BLE001
        try:
            err = error_object(exc)
        except Exception:  # noqa: BLE001 - not a classified failure: a bug
            raise exc from None
        print(f"error: {err['type']}: {err['message']}", file=sys.stderr)
        out = args.out if args.command != "figure" else None
        _write(dumps(envelope("error", err["code"], error=err)), out)
        return err["code"]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
