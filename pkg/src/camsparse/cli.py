"""Command-line experiment harness.

Subcommands: info (matrix summary), run (simulate SpMSpV with an oracle
check per run), bench (per-matrix statistics plus literature baselines),
dse (bandwidth sweep with area columns), defaults (print every constant).

Outputs are plot-ready CSV (default) or JSON tables.  Every report embeds
the full effective configuration, so each number can be reproduced from
the report alone.  Exit codes: 0 success, 3 parse error, 4 dimension
error, 5 oracle mismatch, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from dataclasses import asdict
from importlib import resources

from . import dse as dse_mod
from .engine import AcceleratorConfig, EnergyConstants, kernel_backend, spmspv
from .errors import (
    CamSparseError,
    ConfigError,
    DimensionError,
    MatrixMarketError,
    OracleMismatchError,
    ValidationError,
)
from .mmio import read_matrix_market_file, vector_from_matrix_market
from .sparse import coo_to_csr, extract_row, gen_random_csr, oracle_spmspv
import numpy as np

EXIT_PARSE = 3
EXIT_DIMENSION = 4
EXIT_ORACLE = 5

RUN_COLUMNS = [
    "matrix", "rep", "seed", "vec_source", "n_rows", "n_cols", "nnz",
    "vec_nnz", "k", "h", "w", "passes", "cycles", "seconds", "gflops",
    "index_ops_per_s", "w_compare", "w_ram_read", "w_write", "w_multiply",
    "w_accumulate", "w_memory", "w_accelerator", "w_total", "gflops_per_w",
    "oracle_match",
]

DSE_COLUMNS = [
    "bandwidth_bytes_per_s", "k", "peak_flops_per_s", "peak_index_ops_per_s",
    "area_cmos_mm2", "area_resistive_mm2", "area_ratio",
]


def bundled_matrices() -> list[str]:
    """Paths of the bundled desk-scale corpus (vector fixture excluded)."""
    base = resources.files("camsparse").joinpath("data")
    return sorted(
        str(p) for p in base.iterdir()
        if p.name.endswith(".mtx") and p.name != "onerow32_vec.mtx"
    )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(rows, columns, config, fmt, out):
    stream = open(out, "w", encoding="utf-8") if out else sys.stdout
    try:
        if fmt == "json":
            json.dump({"config": config, "columns": columns, "rows": rows}, stream, indent=2)
            stream.write("\n")
        else:
            for key in sorted(config):
                stream.write(f"# {key}={_fmt(config[key])}\n")
            stream.write(",".join(columns) + "\n")
            for row in rows:
                stream.write(",".join(_fmt(row[c]) for c in columns) + "\n")
    finally:
        if out:
            stream.close()


def _effective_config(cfg: AcceleratorConfig, tech: dse_mod.TechParams, extra=None) -> dict:
    flat = {
        "k": cfg.modules,
        "h": cfg.array_height,
        "w": cfg.index_bits,
        "value_bits": cfg.value_bits,
        "clock_hz": cfg.clock_hz,
        "pipeline_depth": cfg.pipeline_depth,
        "memory_bw_bytes_per_s": cfg.memory_bw_bytes_per_s,
        "kernel_backend": kernel_backend(),
    }
    flat.update(asdict(cfg.energy))
    flat.update({name: getattr(tech, name) for name in (
        "feature_nm", "recam_layers", "cmos_cam_bit_area_f2",
        "cmos_ram_bit_area_f2", "fpu_area_mm2", "accumulator_area_mm2")})
    flat.update({f"baseline_{k}_gflops_per_w": v
                 for k, v in dse_mod.LITERATURE_BASELINES.items()})
    if extra:
        flat.update(extra)
    return flat


def _load_matrix(path):
    return coo_to_csr(read_matrix_market_file(path))


def _matrix_sources(args) -> list[tuple[str, object]]:
    sources: list[tuple[str, object]] = []
    for path in args.matrices:
        sources.append((path, ("file", path)))
    for spec in getattr(args, "gen", None) or []:
        try:
            n, density = spec.split(":")
            n = int(n)
            density = float(density)
        except ValueError:
            raise ConfigError(f"--gen expects N:DENSITY, got {spec!r}")
        sources.append((f"gen:{spec}", ("gen", n, density)))
    if not sources and getattr(args, "use_bundled", False):
        sources = [(p.rsplit("/", 1)[-1], ("file", p)) for p in bundled_matrices()]
    if not sources:
        raise ConfigError("no matrix sources: pass files, --gen, or --bundled")
    return sources


def _resolve_config(args, n_cols=None) -> tuple[AcceleratorConfig, dse_mod.TechParams]:
    if args.energy_config:
        energy, tech = dse_mod.load_constants(args.energy_config)
    else:
        energy, tech = EnergyConstants(), dse_mod.TechParams()
    w = args.w
    if w is None:
        if n_cols is None:
            w = 32
        else:
            from .engine import required_index_bits

            w = required_index_bits(n_cols)
    return (
        AcceleratorConfig(
            modules=args.k,
            array_height=getattr(args, "h", 512) or 512,
            index_bits=w,
            value_bits=args.value_bits,
            clock_hz=args.clock_hz,
            pipeline_depth=args.pipeline_depth,
            memory_bw_bytes_per_s=args.bandwidth,
            energy=energy,
        ),
        tech,
    )


def _one_run(name, A, vec, vec_label, cfg, rep, seed):
    C, metrics = spmspv(A, vec, cfg)
    expected = oracle_spmspv(A, vec)
    mismatch = _first_mismatch(C, expected)
    if mismatch is not None:
        j, got, want = mismatch
        raise OracleMismatchError(
            f"{name}: result disagrees with oracle at row {j}: got {got!r}, expected {want!r}"
        )
    seconds = metrics.wall_seconds(cfg.clock_hz)
    power = dse_mod.power_estimate(cfg, metrics)
    gflops = metrics.flops / seconds / 1e9 if seconds > 0 else 0.0
    row = {
        "matrix": name,
        "rep": rep,
        "seed": seed,
        "vec_source": vec_label,
        "n_rows": A.n_rows,
        "n_cols": A.n_cols,
        "nnz": A.nnz,
        "vec_nnz": vec.nnz,
        "k": cfg.modules,
        "h": cfg.array_height,
        "w": cfg.index_bits,
        "passes": metrics.passes,
        "cycles": metrics.cycles,
        "seconds": seconds,
        "gflops": gflops,
        "index_ops_per_s": metrics.index_match_ops / seconds if seconds > 0 else 0.0,
        "gflops_per_w": (gflops / power.accelerator_w) if power.accelerator_w > 0 else 0.0,
        "oracle_match": True,
    }
    row.update(power.as_dict())
    return row


def _first_mismatch(got, want):
    """Per-element comparison over the union of stored indices."""
    gd = dict(got.entries())
    wd = dict(want.entries())
    for j in sorted(set(gd) | set(wd)):
        g = gd.get(j, 0.0)
        w = wd.get(j, 0.0)
        if abs(g - w) > 1e-12 * (1.0 + abs(w)):
            return j, g, w
    return None


def cmd_info(args) -> int:
    coo = read_matrix_market_file(args.matrix)
    csr = coo_to_csr(coo)
    from .engine import required_index_bits

    counts = csr.row_nnz_counts()
    max_nzr = int(counts.max()) if len(counts) else 0
    mean_nzr = float(counts.mean()) if len(counts) else 0.0
    print(f"path: {args.matrix}")
    print(f"n_rows: {csr.n_rows}")
    print(f"n_cols: {csr.n_cols}")
    print(f"nnz: {csr.nnz}")
    print(f"max_nzr: {max_nzr}")
    print(f"mean_nzr: {mean_nzr:.4f}")
    print(f"required_w: {required_index_bits(csr.n_cols)}")
    return 0


def _run_rows(args, sources):
    rows = []
    cfg = None
    tech = None
    for name, src in sources:
        if src[0] == "file":
            A = _load_matrix(src[1])
        else:
            _, n, density = src
            A = gen_random_csr(n, n, density, seed=args.seed)
        cfg, tech = _resolve_config(args, n_cols=A.n_cols)
        for rep in range(args.reps):
            if args.vector:
                vec = vector_from_matrix_market(args.vector, expected_length=A.n_cols)
                vec_label = args.vector
            else:
                # random row of the matrix itself, reproducible from the seed
                rng = np.random.default_rng((args.seed, rep))
                j = int(rng.integers(0, max(A.n_rows, 1)))
                vec = extract_row(A, j)
                vec_label = f"row:{j}"
            rows.append(_one_run(name, A, vec, vec_label, cfg, rep, args.seed))
    return rows, cfg, tech


def cmd_run(args) -> int:
    sources = _matrix_sources(args)
    rows, cfg, tech = _run_rows(args, sources)
    config = _effective_config(cfg, tech, {"seed": args.seed, "reps": args.reps})
    _emit(rows, RUN_COLUMNS, config, args.format, args.out)
    return 0


def cmd_bench(args) -> int:
    sources = _matrix_sources(args)
    rows, cfg, tech = _run_rows(args, sources)
    per_matrix = list(rows)

    def summary(stat, func):
        base = {c: 0 for c in RUN_COLUMNS}
        base.update({
            "matrix": f"summary_{stat}",
            "rep": 0,
            "seed": args.seed,
            "vec_source": "-",
            "oracle_match": all(r["oracle_match"] for r in per_matrix),
        })
        for col in ("nnz", "vec_nnz", "cycles", "seconds", "gflops",
                    "index_ops_per_s", "w_accelerator", "w_total", "gflops_per_w"):
            base[col] = func([r[col] for r in per_matrix])
        for col in ("k", "h", "w", "passes", "n_rows", "n_cols"):
            base[col] = per_matrix[0][col] if per_matrix else 0
        return base

    if per_matrix:
        rows.append(summary("min", min))
        rows.append(summary("median", statistics.median))
        rows.append(summary("max", max))
    for label, gflops_per_w in dse_mod.LITERATURE_BASELINES.items():
        base = {c: 0 for c in RUN_COLUMNS}
        base.update({
            "matrix": f"baseline_{label}",
            "rep": 0,
            "seed": args.seed,
            "vec_source": "literature",
            "gflops_per_w": gflops_per_w,
            "oracle_match": True,
        })
        rows.append(base)
    config = _effective_config(cfg, tech, {"seed": args.seed, "reps": args.reps})
    _emit(rows, RUN_COLUMNS, config, args.format, args.out)
    return 0


def cmd_dse(args) -> int:
    if args.bw:
        bandwidths = [float(b) * 1e9 for b in args.bw.split(",") if b.strip()]
    else:
        if args.bw_step <= 0 or args.bw_max < args.bw_min:
            raise ConfigError("bad bandwidth range")
        bandwidths = []
        bw = args.bw_min
        while bw <= args.bw_max + 1e-9:
            bandwidths.append(bw * 1e9)
            bw += args.bw_step
    if not bandwidths:
        raise ConfigError("empty bandwidth range")
    cfg, tech = _resolve_config(args)  # cfg.modules is unused; k comes from the sweep
    points = dse_mod.bandwidth_sweep(bandwidths, cfg)
    rows = []
    for p in points:
        area_cmos = dse_mod.area_from_dims(
            p.modules, cfg.array_height, cfg.index_bits, cfg.value_bits, tech, dse_mod.CMOS)
        area_res = dse_mod.area_from_dims(
            p.modules, cfg.array_height, cfg.index_bits, cfg.value_bits, tech, dse_mod.RESISTIVE)
        rows.append({
            "bandwidth_bytes_per_s": p.bandwidth_bytes_per_s,
            "k": p.modules,
            "peak_flops_per_s": p.peak_flops_per_s,
            "peak_index_ops_per_s": p.peak_index_ops_per_s,
            "area_cmos_mm2": area_cmos,
            "area_resistive_mm2": area_res,
            "area_ratio": area_cmos / area_res if area_res > 0 else 0.0,
        })
    config = _effective_config(cfg, tech)
    _emit(rows, DSE_COLUMNS, config, args.format, args.out)
    return 0


def cmd_defaults(args) -> int:
    energy, tech = EnergyConstants(), dse_mod.TechParams()
    if args.energy_config:
        energy, tech = dse_mod.load_constants(args.energy_config)
    print(dse_mod.constants_text(energy, tech))
    for key, value in dse_mod.LITERATURE_BASELINES.items():
        print(f"# baseline {key} = {value} GFLOP/s per W (literature value)")
    print(f"# kernel_backend = {kernel_backend()}")
    return 0


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--k", type=int, default=15, help="acceleration module count")
    p.add_argument("--h", type=int, default=512, help="CAM/RAM array height")
    p.add_argument("--w", type=int, default=None,
                   help="index width in bits (default: derived from the matrix)")
    p.add_argument("--value-bits", type=int, default=32, dest="value_bits")
    p.add_argument("--clock-hz", type=float, default=2e9, dest="clock_hz")
    p.add_argument("--bandwidth", type=float, default=250e9,
                   help="memory bandwidth in bytes/s")
    p.add_argument("--pipeline-depth", type=int, default=6, dest="pipeline_depth")
    p.add_argument("--energy-config", default=None,
                   help="key=value file overriding energy/tech constants")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camsparse",
        description="Simulate a CAM-based sparse matrix multiply accelerator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="print a matrix summary")
    p_info.add_argument("matrix")
    p_info.set_defaults(func=cmd_info)

    p_run = sub.add_parser("run", help="simulate SpMSpV runs with oracle checks")
    p_run.add_argument("matrices", nargs="*", help="Matrix Market files ('-' = stdin)")
    p_run.add_argument("--gen", action="append", metavar="N:DENSITY",
                       help="generate a random square matrix instead of reading one")
    p_run.add_argument("--bundled", action="store_true", dest="use_bundled",
                       help="use the bundled desk-scale corpus")
    p_run.add_argument("--vector", default=None,
                       help="explicit vector file (1xN or Nx1 Matrix Market)")
    p_run.add_argument("--reps", type=int, default=1)
    _add_config_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_bench = sub.add_parser("bench", help="per-matrix statistics over a corpus")
    p_bench.add_argument("matrices", nargs="*")
    p_bench.add_argument("--gen", action="append", metavar="N:DENSITY")
    p_bench.add_argument("--bundled", action="store_true", dest="use_bundled")
    p_bench.add_argument("--vector", default=None)
    p_bench.add_argument("--reps", type=int, default=1)
    _add_config_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_dse = sub.add_parser("dse", help="bandwidth sweep with peak/area columns")
    p_dse.add_argument("--bw", default=None,
                       help="comma list of bandwidths in GB/s (overrides the range)")
    p_dse.add_argument("--bw-min", type=float, default=10.0, dest="bw_min")
    p_dse.add_argument("--bw-max", type=float, default=500.0, dest="bw_max")
    p_dse.add_argument("--bw-step", type=float, default=10.0, dest="bw_step")
    _add_config_flags(p_dse)
    p_dse.set_defaults(func=cmd_dse)

    p_def = sub.add_parser("defaults", help="print every model constant")
    p_def.add_argument("--energy-config", default=None)
    p_def.set_defaults(func=cmd_defaults)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MatrixMarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except OracleMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (ValidationError, ConfigError, CamSparseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
