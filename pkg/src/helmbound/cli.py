"""Command line entry point.

Subcommands: solve | sweep-basis | field | oracle | compare, each driven by
a JSON config (--config; defaults reproduce the reference setup).

Exit codes: 0 success, 1 invalid configuration, 2 iteration did not
converge, 3 operator resonance (the offending mode index is reported).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .assembly import Method, build_context
from .config import MODE_LABELS, ConfigError, RunConfig, mode_seeds, parse_mode_label
from .errors import NearDirichletResonance, NearNeumannResonance, NotConverged
from .oracle import Rectangle, richardson_eigen
from .reconstruct import GridSpec, export_grid, sample_field
from .solver import iterate_mode

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2
EXIT_RESONANCE = 3


def _load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig().validate()
    return RunConfig.from_json_file(path)


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _run_one(cfg: RunConfig, method: Method, parity: str, kappa0: float,
             n_max: int | None = None, m_max: int | None = None, context=None):
    spec = cfg.basis_spec(parity=parity, n_max=n_max, m_max=m_max)
    return iterate_mode(
        method,
        kappa0,
        spec,
        cfg.domain(),
        quad=cfg.quad(),
        n_modes=cfg.steklov_truncation,
        tol=cfg.tol,
        max_iter=cfg.max_iter,
        context=context,
    )


def cmd_solve(cfg: RunConfig, args) -> int:
    t0 = time.perf_counter()
    out = _outdir(cfg)
    parity = cfg.basis["parity"]
    doc = {
        "method": cfg.method,
        "parity": parity,
        "kappa0": cfg.kappa0,
        "basis_size": cfg.basis_spec().size,
    }
    path = out / f"solve_{cfg.method}_{parity}.json"
    try:
        estimate, trace = _run_one(cfg, cfg.method_enum(), parity, cfg.kappa0)
    except NotConverged as exc:
        doc.update(
            iterations=[round(k, 12) for k in exc.trace.estimates],
            converged=False,
            timings={"total_s": time.perf_counter() - t0},
        )
        _write_json(path, doc)
        print(f"not converged after {exc.trace.iterations} iterations", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    doc.update(
        iterations=[round(k, 12) for k in trace.estimates],
        converged=True,
        converged_k=round(estimate.k_estimate, 12),
        timings={"total_s": time.perf_counter() - t0},
    )
    _write_json(path, doc)
    print(f"{cfg.method} {parity}: k = {estimate.k_estimate:.4f} "
          f"({trace.iterations} iterations) -> {path}")
    return EXIT_OK


def _parse_sizes(text: str):
    sizes = []
    for part in text.split(","):
        part = part.strip().lower()
        n, _, m = part.partition("x")
        sizes.append((int(n), int(m)))
    return sizes


def cmd_sweep_basis(cfg: RunConfig, args) -> int:
    sizes = _parse_sizes(args.sizes)
    out = _outdir(cfg)
    seeds = mode_seeds(cfg.domain())
    methods = [Method.DTN, Method.NTD] if args.methods == "both" else [Method(args.methods)]
    rows = ["n_max,m_max,method,mode_label,converged_k,note"]
    for n_max, m_max in sizes:
        contexts = {}
        for parity in ("even", "odd"):
            contexts[parity] = build_context(
                cfg.basis_spec(parity=parity, n_max=n_max, m_max=m_max),
                cfg.domain(), cfg.quad(), cfg.steklov_truncation,
            )
        for method in methods:
            for label in MODE_LABELS:
                parity, _ = parse_mode_label(label)
                try:
                    estimate, _trace = _run_one(
                        cfg, method, parity, seeds[label],
                        n_max=n_max, m_max=m_max, context=contexts[parity],
                    )
                    rows.append(
                        f"{n_max},{m_max},{method.value},\"{label}\",{estimate.k_estimate:.6f},"
                    )
                except (NotConverged, NearDirichletResonance, NearNeumannResonance) as exc:
                    reason = type(exc).__name__
                    rows.append(f"{n_max},{m_max},{method.value},\"{label}\",NA,{reason}")
    path = out / "sweep.csv"
    path.write_text("\n".join(rows) + "\n")
    print(f"wrote {path} ({len(rows) - 1} cells)")
    return EXIT_OK


def cmd_field(cfg: RunConfig, args) -> int:
    out = _outdir(cfg)
    labels = args.mode if args.mode else list(MODE_LABELS)
    seeds = mode_seeds(cfg.domain())
    grid_spec = GridSpec(nx=cfg.grid["nx"], ny=cfg.grid["ny"])
    method = cfg.method_enum()
    for label in labels:
        parity, _ = parse_mode_label(label)
        estimate, _trace = _run_one(cfg, method, parity, seeds[label])
        # the converged estimate of k doubles as the sampling kappa
        grid = sample_field(estimate, estimate.k_estimate, cfg.domain(), grid_spec)
        stem = f"field_{cfg.method}_{label.replace(',', '_')}"
        export_grid(grid, "csv", out / f"{stem}.csv")
        export_grid(grid, "pgm", out / f"{stem}.pgm")
        print(f"{label}: k = {estimate.k_estimate:.4f} -> {stem}.csv/.pgm")
    return EXIT_OK


def _oracle_shape(cfg: RunConfig):
    if cfg.oracle.get("shape", "composite") == "bounding_rectangle":
        dom = cfg.domain()
        return Rectangle(2.0 * dom.a, dom.a + dom.b)
    return cfg.domain()


def cmd_oracle(cfg: RunConfig, args) -> int:
    t0 = time.perf_counter()
    out = _outdir(cfg)
    shape = _oracle_shape(cfg)
    results, raw = richardson_eigen(shape, cfg.oracle["h"], cfg.oracle["num_modes"])
    doc = {
        "shape": cfg.oracle.get("shape", "composite"),
        "h": cfg.oracle["h"],
        "modes": [
            {"k": round(k, 9), "parity": parity, "k_coarse": round(k1, 9), "k_fine": round(k2, 9)}
            for (k, parity), (k1, k2) in zip(results, raw)
        ],
        "timings": {"total_s": time.perf_counter() - t0},
    }
    path = out / "oracle.json"
    _write_json(path, doc)
    print(f"wrote {path}: k = " + ", ".join(f"{k:.5f}" for k, _ in results))
    return EXIT_OK


MUTUAL_TOL = 1e-4
ORACLE_TOL = 1e-2


def cmd_compare(cfg: RunConfig, args) -> int:
    out = _outdir(cfg)
    seeds = mode_seeds(cfg.domain())
    results, _raw = richardson_eigen(cfg.domain(), cfg.oracle["h"], cfg.oracle["num_modes"])
    by_parity = {"even": [], "odd": []}
    for k, parity in results:
        if parity in by_parity:
            by_parity[parity].append(k)
    report = {"modes": [], "mutual_tol": MUTUAL_TOL, "oracle_tol": ORACLE_TOL}
    all_pass = True
    for label in MODE_LABELS:
        parity, rank = parse_mode_label(label)
        est_d, _ = _run_one(cfg, Method.DTN, parity, seeds[label])
        est_n, _ = _run_one(cfg, Method.NTD, parity, seeds[label])
        k_fdm = by_parity[parity][rank - 1] if len(by_parity[parity]) >= rank else None
        mutual = abs(est_d.k_estimate - est_n.k_estimate)
        entry = {
            "mode": label,
            "k_dtn": round(est_d.k_estimate, 9),
            "k_ntd": round(est_n.k_estimate, 9),
            "k_fdm": round(k_fdm, 9) if k_fdm is not None else None,
            "dtn_vs_ntd": round(mutual, 12),
            "pass_mutual": bool(mutual < MUTUAL_TOL),
        }
        if k_fdm is None:
            entry["pass_oracle"] = False
        else:
            delta = abs(est_d.k_estimate - k_fdm)
            entry["embed_vs_fdm"] = round(delta, 12)
            entry["pass_oracle"] = bool(delta < ORACLE_TOL)
        all_pass &= entry["pass_mutual"] and entry["pass_oracle"]
        report["modes"].append(entry)
    report["all_pass"] = bool(all_pass)
    path = out / "compare.json"
    _write_json(path, report)
    for entry in report["modes"]:
        print(
            f"{entry['mode']}: dtn={entry['k_dtn']:.4f} ntd={entry['k_ntd']:.4f} "
            f"fdm={entry['k_fdm']} mutual={'ok' if entry['pass_mutual'] else 'FAIL'} "
            f"oracle={'ok' if entry['pass_oracle'] else 'FAIL'}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helmbound",
        description="Membrane bound states on a semicircle+rectangle domain "
        "via interface-operator embedding (DtN/NtD).",
    )
    parser.add_argument("--config", help="JSON config path (defaults reproduce the reference setup)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", help="iterate one mode to self-consistency")
    p_sweep = sub.add_parser("sweep-basis", help="converged k over a list of basis sizes")
    p_sweep.add_argument(
        "--sizes", default="3x3,5x5,15x15,25x25,30x30", help="comma list like 3x3,15x15"
    )
    p_sweep.add_argument("--methods", default="both", choices=["both", "dtn", "ntd"])
    p_field = sub.add_parser("field", help="sample and export |Psi|^2 grids")
    p_field.add_argument("--mode", action="append", help="mode label like 'even,1' (repeatable)")
    sub.add_parser("oracle", help="finite-difference reference eigenvalues")
    sub.add_parser("compare", help="DtN vs NtD vs finite-difference cross-check")
    return parser


COMMANDS = {
    "solve": cmd_solve,
    "sweep-basis": cmd_sweep_basis,
    "field": cmd_field,
    "oracle": cmd_oracle,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotConverged as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (NearDirichletResonance, NearNeumannResonance) as exc:
        print(f"resonance: {exc}", file=sys.stderr)
        return EXIT_RESONANCE


if __name__ == "__main__":
    sys.exit(main())
