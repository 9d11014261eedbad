"""Command-line pipeline: enumerate, build orbits, tables, stats, verify.

Exit codes: 0 success, 1 verification or consistency failure, 2 usage error.
The default worker count comes from LCORBITS_JOBS when set.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .atlas import (
    AtlasBuilder,
    are_lc_equivalent,
    connected_components,
    op_policy_fingerprint,
    sort_orbits,
)
from .enumeration import enumerate_weighted_connected, enumeration_census
from .gf import FieldError, check_prime
from .localops import neighbor_ranks_bulk
from .observables import SamplingPlan, compute_observables
from .schmidt import orbit_schmidt_bounds
from .statevec import verify_sweep
from .stats import (
    ES_MODES,
    correlation_table,
    observable_columns,
    summary_table,
)
from .store import read_store, write_store
from .wgraph import WeightedGraph, canonical_form, codes_of_ranks, to_dot

TABLE_COLUMNS = ("orbit", "n", "|V|", "|e|", "chi_OG", "ln(N_L+1)", "chi_i",
                 "D", "<d_OG>", "d_OG^max", "deg(g)_min", "deg(OG)_max", "E_S",
                 "N_L", "aspl_exact", "diameter_exact", "rep_code")


def default_jobs() -> int:
    env = os.environ.get("LCORBITS_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _ensure_edges(rec):
    """Recompute an orbit's internal OG edges when the store dropped them."""
    if rec.edges_local.size or rec.size == 1:
        return rec
    w = rec.member_weights()
    nb, _ = neighbor_ranks_bulk(w, rec.n, rec.d)
    vidx = np.searchsorted(rec.member_ranks, nb)
    uidx = np.repeat(np.arange(rec.size, dtype=np.int64), nb.shape[1]) \
        .reshape(nb.shape)
    mask = vidx != uidx
    a, b = uidx[mask], vidx[mask]
    keys = np.unique(np.minimum(a, b) * rec.size + np.maximum(a, b))
    rec.edges_local = np.stack([keys // rec.size, keys % rec.size], axis=1)
    return rec


def table_row(rec) -> dict:
    """One exported table row at the published precision."""
    obs = rec.observables
    sch = rec.schmidt
    es = str(sch.lower) if sch.exact else f"({sch.lower}, {sch.upper})"
    return {
        "orbit": rec.index,
        "n": rec.n,
        "|V|": rec.size,
        "|e|": rec.rep_edge_count,
        "chi_OG": obs["chi_og"],
        "ln(N_L+1)": f"{obs['ln_nl']:.2f}",
        "chi_i": obs["chi_i"],
        "D": f"{obs['density']:.5f}",
        "<d_OG>": f"{obs['aspl']:.2f}",
        "d_OG^max": obs["diameter"],
        "deg(g)_min": obs["deg_g_min"],
        "deg(OG)_max": obs["deg_og_max"],
        "E_S": es,
        "N_L": obs["n_loops"],
        "aspl_exact": obs["aspl_exact"],
        "diameter_exact": obs["diameter_exact"],
        "rep_code": str(codes_of_ranks([rec.rep_rank], rec.n, rec.d)[0]),
    }


def stats_rows_from_records(records, es_mode: str) -> dict:
    rows = []
    for rec in records:
        obs = rec.observables
        rows.append({
            "chi_OG": obs["chi_og"], "N_L": obs["n_loops"], "chi_i": obs["chi_i"],
            "D": obs["density"], "aspl": obs["aspl"], "diameter": obs["diameter"],
            "deg_g_min": obs["deg_g_min"], "deg_OG_max": obs["deg_og_max"],
            "E_S_lower": rec.schmidt.lower, "E_S_upper": rec.schmidt.upper,
        })
    return observable_columns(rows, es_mode=es_mode)


def _write_table(rows: list, fmt: str, out):
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=TABLE_COLUMNS)
        w.writeheader()
        for r in rows:
            w.writerow(r)
    else:
        json.dump({"columns": list(TABLE_COLUMNS), "rows": rows}, out, indent=1)
        out.write("\n")


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


# -- subcommands -------------------------------------------------------------

def cmd_enumerate(args) -> int:
    d = check_prime(args.d)
    ranks = enumerate_weighted_connected(args.n, d, jobs=args.jobs)
    census = enumeration_census(args.n, d)
    print(f"n={args.n} d={d}: {ranks.size} non-isomorphic connected classes "
          f"over {len(census)} simple supports")
    if args.out:
        payload = {
            "n": args.n,
            "d": d,
            "count": int(ranks.size),
            "census": {str(codes_of_ranks([k], args.n, 2)[0]): v
                       for k, v in sorted(census.items())},
            "codes": [str(c) for c in codes_of_ranks(ranks, args.n, d)],
        }
        with open(args.out, "w") as f:
            json.dump(payload, f, indent=1)
            f.write("\n")
    return 0


def cmd_orbits(args) -> int:
    d = check_prime(args.d)
    ckpt = args.store + ".ckpt"
    if os.path.exists(ckpt) and args.resume:
        builder = AtlasBuilder.load_checkpoint(ckpt, args.n, d, jobs=args.jobs)
        print(f"resuming from checkpoint at chunk {builder.cursor}/{builder.num_chunks}")
    else:
        ranks = enumerate_weighted_connected(args.n, d, jobs=args.jobs)
        builder = AtlasBuilder(ranks, args.n, d, chunk_size=args.chunk_size,
                               jobs=args.jobs)
    builder.run(checkpoint_path=ckpt if args.checkpoint_every else None,
                checkpoint_every=args.checkpoint_every)
    atlas = builder.result()
    orbits = sort_orbits(connected_components(atlas))
    write_store(args.store, args.n, d, orbits, with_edges=not args.no_edges)
    if os.path.exists(ckpt):
        os.unlink(ckpt)
    sizes = [o.size for o in orbits]
    print(f"n={args.n} d={d}: {len(orbits)} orbits over {atlas.num_vertices} "
          f"classes; sizes {sizes}")
    return 0


def cmd_table(args) -> int:
    header, stored = read_store(args.store)
    n, d = header["n"], header["d"]
    plan = SamplingPlan(exact_threshold=args.exact_threshold,
                        aspl_pairs=args.samples, aspl_rounds=args.rounds,
                        diameter_seeds=args.seeds, seed=args.seed)
    records = []
    for so in stored:
        rec = _ensure_edges(so.to_record())
        compute_observables(rec, plan)
        orbit_schmidt_bounds(rec, scan=args.es_scan)
        records.append(rec)
    records.sort(key=lambda r: r.index)
    rows = [table_row(r) for r in records]
    with _open_out(args.out) as out:
        _write_table(rows, args.format, out)
    write_store(args.store, n, d, records,
                with_edges=any(so.edges_local is not None for so in stored))
    return 0


def cmd_stats(args) -> int:
    header, stored = read_store(args.store)
    if not stored:
        print("empty store", file=sys.stderr)
        return 1
    if any(so.observables is None or so.schmidt is None for so in stored):
        print("store lacks observables; run the table command first",
              file=sys.stderr)
        return 1
    records = [so.to_record() for so in stored]
    try:
        cols = stats_rows_from_records(records, args.es_mode)
        summaries = summary_table(cols)
        correlations = correlation_table(cols)
    except Exception as exc:
        print(f"stats failed: {exc}", file=sys.stderr)
        return 1
    payload = {
        "es_mode": args.es_mode,
        "summary": summaries,
        "correlations": correlations,
    }
    with _open_out(args.out) as out:
        if args.format == "json":
            json.dump(payload, out, indent=1)
            out.write("\n")
        else:
            w = csv.writer(out)
            w.writerow(["observable", "mean", "std", "variance", "median",
                        "mode", "range", "iqr", "skewness", "kurtosis"])
            for name, s in summaries.items():
                w.writerow([name] + [f"{s[k]:.4f}" for k in
                           ("mean", "std", "variance", "median", "mode",
                            "range", "iqr", "skewness", "kurtosis")])
            w.writerow([])
            w.writerow(["x", "y", "pearson", "kendall", "strong"])
            for row in correlations:
                w.writerow([row["x"], row["y"], f"{row['pearson']:.2f}",
                            f"{row['kendall']:.2f}", row["strong"]])
    return 0


def cmd_verify(args) -> int:
    d = check_prime(args.d)
    report = verify_sweep(args.n_max, d, tol=args.tol)
    status = "PASS" if report.ok(args.tol) else "FAIL"
    print(f"{status}: {report.scaling_checks} scaling and "
          f"{report.complementation_checks} complementation checks at "
          f"d={d}, n<={args.n_max}; max deviation {report.max_deviation:.3e}")
    return 0 if report.ok(args.tol) else 1


def parse_graph_file(path: str, d: int, n: int | None = None) -> WeightedGraph:
    """Edge-list text: one 'u v w' triple per line, vertices 1-based."""
    edges = []
    top = 0
    with open(path) as f:
        for line_no, line in enumerate(f, 1):
            line = line.split("#")[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{line_no}: expected 'u v w'")
            u, v, w = (int(p) for p in parts)
            if u < 1 or v < 1:
                raise ValueError(f"{path}:{line_no}: vertices are 1-based")
            top = max(top, u, v)
            edges.append((u - 1, v - 1, w))
    size = n or top
    return WeightedGraph.from_edges(size, d, edges)


def cmd_equivalent(args) -> int:
    d = check_prime(args.d)
    g1 = parse_graph_file(args.g1, d, args.n)
    g2 = parse_graph_file(args.g2, d, args.n)
    if args.store:
        header, stored = read_store(args.store)
        if (header["n"], header["d"]) != (g1.n, d):
            print("store does not match the graphs' (n, d)", file=sys.stderr)
            return 2
        c1 = canonical_form(g1)[1].bits
        c2 = canonical_form(g2)[1].bits
        where = {}
        for so in stored:
            members = set(so.member_codes)
            if c1 in members:
                where[1] = so.index
            if c2 in members:
                where[2] = so.index
        same = where.get(1) is not None and where.get(1) == where.get(2)
        print("true" if same else "false")
        if same:
            print(f"orbit {where[1]}")
        return 0
    same = are_lc_equivalent(g1, g2)
    print("true" if same else "false")
    return 0


def cmd_export_reps(args) -> int:
    header, stored = read_store(args.store)
    os.makedirs(args.out_dir, exist_ok=True)
    count = 0
    for so in sorted(stored, key=lambda s: s.index):
        rec = so.to_record()
        path = os.path.join(args.out_dir, f"orbit_{so.index:03d}.dot")
        with open(path, "w") as f:
            f.write(to_dot(rec.rep, name=f"orbit_{so.index}"))
        count += 1
    print(f"wrote {count} DOT files to {args.out_dir}")
    return 0


# -- argument wiring ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lcorbits",
        description="local-Clifford orbit classification of qudit graph states")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count/list non-isomorphic classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out", help="write codes + census as JSON")
    p.add_argument("--jobs", type=int, default=default_jobs())
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("orbits", help="build the atlas and write the orbit store")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--jobs", type=int, default=default_jobs())
    p.add_argument("--chunk-size", type=int, default=8192)
    p.add_argument("--checkpoint-every", type=int, default=0,
                   help="checkpoint every K chunks (0 = off)")
    p.add_argument("--resume", action="store_true",
                   help="resume from an existing checkpoint")
    p.add_argument("--no-edges", action="store_true",
                   help="do not store per-orbit edge lists")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("table", help="compute observables and emit the orbit table")
    p.add_argument("--store", required=True)
    p.add_argument("--exact-threshold", type=int, default=20_000)
    p.add_argument("--seeds", type=int, default=1000,
                   help="diameter heuristic start vertices")
    p.add_argument("--samples", type=int, default=10_000,
                   help="ASPL sample pairs per round")
    p.add_argument("--rounds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--es-scan", choices=("all", "representative"), default="all")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("stats", help="summary statistics and correlations")
    p.add_argument("--store", required=True)
    p.add_argument("--es-mode", choices=ES_MODES, default="mid")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="unitary-vs-graphical exhaustive check")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equivalent", help="test LC equivalence of two graphs")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, help="vertex count override")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--store", help="orbit store for witness lookup")
    p.set_defaults(func=cmd_equivalent)

    p = sub.add_parser("export-reps", help="write representative DOT files")
    p.add_argument("--store", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_export_reps)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
