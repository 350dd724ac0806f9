"""Command-line driver: file formats and the end-to-end pipeline.

A code bundle is a directory holding ``manifest.json`` and sibling alist files.
Exit codes: 0 success, 2 invalid input, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .codes import (
    NAMED_CODES,
    ClassicalCode,
    bipartite_double_cover,
    complete_bipartite_graph,
    cycle_code,
    heawood_graph,
    named_code,
    qc_table_code,
    random_full_rank_ldpc,
    tutte_coxeter_graph,
)
from .coloring import CheckColoring, color_code, product_coloring
from .gf2 import BitMatrix
from .hgp import CssCode, QubitLayout, build_hgp
from .homomorphism import augmentation_instance, puncture_instance, verify_chain_map, verify_selection_relation
from .memsim import NoiseModel, run_memory
from .planner import CombinationSchedule, choose_schedule, fold_symmetric_schedule
from .reducer import apply_reduction, build_reduction, weight_report
from .sescheduler import CnotSchedule, code_hash, enumerate_hooks, line_count, random_schedule, split_schedule
from .verifier import certify_distance, default_cap, verify_all

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3


class InputError(Exception):
    pass


# alist ------------------------------------------------------------------------------


def write_alist(m: BitMatrix, path: str | Path) -> None:
    """Columns are bits, rows are checks; index lists are 1-based and zero-padded."""
    cols, rows = m.col_supports(), m.supports()
    max_c = max((len(s) for s in cols), default=0)
    max_r = max((len(s) for s in rows), default=0)

    def padded(support, width):
        return " ".join(str(x + 1) for x in support) + " 0" * (width - len(support))

    lines = [
        f"{m.cols} {m.rows}",
        f"{max_c} {max_r}",
        " ".join(str(len(s)) for s in cols),
        " ".join(str(len(s)) for s in rows),
    ]
    lines += [padded(s, max_c).strip() for s in cols]
    lines += [padded(s, max_r).strip() for s in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def read_alist(path: str | Path) -> BitMatrix:
    try:
        tokens = [int(t) for t in Path(path).read_text().split()]
    except ValueError as exc:
        raise InputError(f"{path}: non-integer token") from exc
    if len(tokens) < 4:
        raise InputError(f"{path}: truncated header")
    n, m, max_c, max_r = tokens[:4]
    pos = 4 + n + m
    col_w, row_w = tokens[4 : 4 + n], tokens[4 + n : pos]
    need = pos + n * max_c + m * max_r
    if len(tokens) != need:
        raise InputError(f"{path}: expected {need} integers, found {len(tokens)}")
    dense = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        entries = [e for e in tokens[pos + j * max_c : pos + (j + 1) * max_c] if e]
        if len(entries) != col_w[j] or any(not 1 <= e <= m for e in entries):
            raise InputError(f"{path}: column {j + 1} disagrees with its weight")
        dense[[e - 1 for e in entries], j] = 1
    pos += n * max_c
    for i in range(m):
        entries = [e for e in tokens[pos + i * max_r : pos + (i + 1) * max_r] if e]
        if sorted(e - 1 for e in entries) != list(np.flatnonzero(dense[i])) or len(entries) != row_w[i]:
            raise InputError(f"{path}: row {i + 1} disagrees with the column lists")
    return BitMatrix.from_dense(dense)


# bundles ----------------------------------------------------------------------------


def _dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _load_json(path: Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _dist(d):
    return None if d is None or not math.isfinite(d) else int(d)


def save_bundle(
    code: CssCode,
    out: Path,
    *,
    coloring: dict | None = None,
    schedule: dict | None = None,
    plan_hash: str | None = None,
    seed: int = 0,
    generator: str = "build-hgp",
) -> None:
    out.mkdir(parents=True, exist_ok=True)
    if code.inputs is not None:
        write_alist(code.inputs[0].h, out / "h1.alist")
        write_alist(code.inputs[1].h, out / "h2.alist")
    write_alist(code.hx, out / "hx.alist")
    write_alist(code.hz, out / "hz.alist")
    if code.logical_x is not None:
        write_alist(code.logical_x, out / "logical_x.alist")
        write_alist(code.logical_z, out / "logical_z.alist")
    lay = code.layout
    manifest = {
        "name": code.name,
        "n": code.n,
        "k": code.k,
        "d_x": _dist(code.d_x),
        "d_z": _dist(code.d_z),
        "layout": {
            "n1": lay.n1,
            "n2": lay.n2,
            "m1": lay.m1,
            "m2": lay.m2,
            "kept": [int(o) for o in lay.originals],
        },
        "coloring": coloring,
        "schedule": schedule,
        "plan_hash": plan_hash,
        "provenance": {"seed": seed, "generator": generator},
        "checks": {"x": [list(x) for x in code.x_labels], "z": [list(z) for z in code.z_labels]},
    }
    _dump(manifest, out / "manifest.json")


def load_bundle(path: str | Path) -> tuple[CssCode, dict]:
    root = Path(path)
    manifest = _load_json(root / "manifest.json")
    try:
        lay = manifest["layout"]
        layout = QubitLayout(lay["n1"], lay["n2"], lay["m1"], lay["m2"])
        if len(lay["kept"]) != layout.full_size:
            layout = layout.restrict(lay["kept"])
        hx, hz = read_alist(root / "hx.alist"), read_alist(root / "hz.alist")
        lx = lz = None
        if (root / "logical_x.alist").exists():
            lx, lz = read_alist(root / "logical_x.alist"), read_alist(root / "logical_z.alist")
        inputs = None
        if (root / "h1.alist").exists():
            inputs = (ClassicalCode(read_alist(root / "h1.alist"), "h1"), ClassicalCode(read_alist(root / "h2.alist"), "h2"))
        labels = manifest.get("checks") or {}
        d = {k: (math.inf if manifest.get(k) is None else manifest[k]) for k in ("d_x", "d_z")}
        code = CssCode(
            hx,
            hz,
            layout,
            lx,
            lz,
            name=manifest.get("name", ""),
            d_x=d["d_x"],
            d_z=d["d_z"],
            inputs=inputs,
            x_labels=tuple(tuple(x) for x in labels["x"]) if "x" in labels else None,
            z_labels=tuple(tuple(z) for z in labels["z"]) if "z" in labels else None,
        )
    except (KeyError, TypeError, OSError) as exc:
        raise InputError(f"malformed bundle {root}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"inconsistent bundle {root}: {exc}") from exc
    return code, manifest


def _colorings(code: CssCode, manifest: dict) -> tuple[CheckColoring, CheckColoring]:
    stored = manifest.get("coloring")
    if stored:
        return CheckColoring(tuple(stored["code1"])), CheckColoring(tuple(stored["code2"]))
    if code.inputs is None:
        raise InputError("bundle has no classical inputs to color")
    return color_code(code.inputs[0]), color_code(code.inputs[1])


def _coloring_json(col1: CheckColoring, col2: CheckColoring) -> dict:
    return {"code1": list(col1.color_of), "code2": list(col2.color_of)}


# commands ---------------------------------------------------------------------------


def cmd_gen_classical(args) -> int:
    if args.kind == "random":
        code = random_full_rank_ldpc(args.n, args.dv, args.dc, args.seed)
    elif args.kind == "qc":
        code = qc_table_code(args.lift)
    elif args.kind == "cycle":
        graphs = {
            "k33": lambda: complete_bipartite_graph(3, 3),
            "heawood": heawood_graph,
            "tutte-coxeter": tutte_coxeter_graph,
        }
        if args.graph not in graphs:
            raise InputError(f"unknown graph {args.graph!r}; choose from {sorted(graphs)}")
        g = graphs[args.graph]()
        code = cycle_code(g if g.is_bipartite() else bipartite_double_cover(g))
    else:
        if args.name not in NAMED_CODES:
            raise InputError(f"unknown code {args.name!r}; choose from {sorted(NAMED_CODES)}")
        code = named_code(args.name)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_alist(code.h, out / "h.alist")
    _dump(
        {
            "name": code.name,
            "n": code.n,
            "k": code.k,
            "m": code.m,
            "d": code.distance if code.k else None,
            "provenance": {"seed": args.seed, "generator": f"gen-classical {args.kind}"},
        },
        out / "manifest.json",
    )
    print(f"[{code.n},{code.k},{code.distance if code.k else '-'}] written to {out}")
    return EXIT_OK


def cmd_build_hgp(args) -> int:
    c1 = ClassicalCode(read_alist(args.h1), Path(args.h1).parent.name or "h1")
    c2 = ClassicalCode(read_alist(args.h2), Path(args.h2).parent.name or "h2")
    code = build_hgp(c1, c2, name=args.name or "")
    save_bundle(code, Path(args.out), seed=args.seed)
    print(f"[[{code.n},{code.k},{_dist(code.d)}]] written to {args.out}")
    return EXIT_OK


def cmd_color(args) -> int:
    code, manifest = load_bundle(args.code)
    if code.inputs is None:
        raise InputError("bundle has no classical inputs to color")
    order_seed = args.seed or None
    col1, col2 = color_code(code.inputs[0], order_seed), color_code(code.inputs[1], order_seed)
    product_coloring(col1, col2, code)
    manifest["coloring"] = _coloring_json(col1, col2)
    _dump(manifest, Path(args.code) / "manifest.json")
    print(f"colors: {col1.num_colors} x {col2.num_colors}")
    return EXIT_OK


def cmd_plan(args) -> int:
    code, manifest = load_bundle(args.code)
    col1, col2 = _colorings(code, manifest)
    pc = product_coloring(col1, col2, code)
    schedule = fold_symmetric_schedule(pc) if args.fold_symmetric else choose_schedule(pc)
    removed = schedule.removed(pc)
    plan = {
        "coloring": _coloring_json(col1, col2),
        "schedule": schedule.to_json(),
        "removed": removed,
        "code_hash": code_hash(code),
        "fold_symmetric": bool(args.fold_symmetric),
    }
    if args.out:
        _dump(plan, Path(args.out))
    print(f"removes {removed}")
    return EXIT_OK


def _distance_tag(code: CssCode) -> str:
    if code.d is None or not math.isfinite(code.d) or code.logical_x is None:
        return "unknown"
    d = int(code.d)
    sides = [certify_distance(code, d, min(d - 1, default_cap(code.n)), s) for s in ("X", "Z")]
    if any(r.details["status"] == "counterexample" for r in sides):
        return "refuted"
    if all(r.details["status"] == "confirmed-min" for r in sides):
        return "certified"
    return "certified-upper" if all(r.ok for r in sides) else "unverified"


def cmd_reduce(args) -> int:
    code, _ = load_bundle(args.code)
    plan_json = _load_json(Path(args.plan))
    try:
        col1 = CheckColoring(tuple(plan_json["coloring"]["code1"]))
        col2 = CheckColoring(tuple(plan_json["coloring"]["code2"]))
        schedule = CombinationSchedule.from_json(plan_json["schedule"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed plan: {exc}") from exc
    if plan_json.get("code_hash") not in (None, code_hash(code)):
        raise InputError("plan was made for a different code")
    pc = product_coloring(col1, col2, code)
    plan = build_reduction(code, pc, schedule)
    reduced = apply_reduction(code, plan)
    report = weight_report(code, reduced, check=False)
    out = Path(args.out)
    save_bundle(
        reduced,
        out,
        coloring=_coloring_json(col1, col2),
        schedule=schedule.to_json(),
        plan_hash=plan.digest(),
        seed=args.seed,
        generator="reduce",
    )
    _dump({k: v for k, v in zip(("w_q", "w_c", "reduced_w_q", "reduced_w_c", "n2q", "reduced_n2q"), report.as_tuple())}
          | {"within_bounds": report.within_bounds}, out / "weight_report.json")
    tag = _distance_tag(reduced)
    print(f"{code.n} → {reduced.n} qubits, {reduced.k} logicals, d={_dist(reduced.d)} ({tag})")
    return EXIT_OK if report.within_bounds and tag not in ("refuted", "unverified") else EXIT_VERIFY


def cmd_verify(args) -> int:
    before, _ = load_bundle(args.before)
    after, _ = load_bundle(args.after)
    reports = verify_all(before, after)
    doc = {"ok": all(r.ok for r in reports), "reports": [r.to_json() for r in reports]}
    if args.out:
        _dump(doc, Path(args.out))
    for r in reports:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.check}")
    return EXIT_OK if doc["ok"] else EXIT_VERIFY


def cmd_schedule(args) -> int:
    code, _ = load_bundle(args.code)
    schedule = random_schedule(code, args.seed) if args.random else split_schedule(code)
    if not schedule.is_valid_for(code):
        return EXIT_VERIFY
    _dump(schedule.to_json(code), Path(args.out))
    print(f"{len(schedule.x_rounds)} X rounds, {len(schedule.z_rounds)} Z rounds")
    return EXIT_OK


def cmd_hooks(args) -> int:
    code, _ = load_bundle(args.code)
    data = _load_json(Path(args.schedule))
    if data.get("code_hash") not in (None, code_hash(code)):
        raise InputError("schedule was made for a different code")
    schedule = CnotSchedule.from_json(data)
    if not schedule.is_valid_for(code):
        raise InputError("schedule does not match the code's checks")
    doc = {}
    for basis in ("X", "Z"):
        hooks = enumerate_hooks(code, schedule, basis)
        lines = [line_count(code, h.reduced, basis) for h in hooks]
        doc[basis] = {
            "faults": len(hooks),
            "max_lines": max(lines, default=0),
            "multi_line": [[h.check, h.cut] for h, n in zip(hooks, lines) if n > 1],
        }
    if args.out:
        _dump(doc, Path(args.out))
    print(f"max lines per hook: X {doc['X']['max_lines']}, Z {doc['Z']['max_lines']}")
    return EXIT_OK


def _parse_rows(text: str, n: int) -> np.ndarray:
    rows = []
    for chunk in text.split(";"):
        row = np.zeros(n, dtype=np.uint8)
        row[[int(x) for x in chunk.split(",")]] = 1
        rows.append(row)
    return np.array(rows)


def cmd_chainmap(args) -> int:
    c1 = ClassicalCode(read_alist(args.h1), "h1")
    c2 = ClassicalCode(read_alist(args.h2), "h2")
    col1, col2 = color_code(c1), color_code(c2)
    schedule = choose_schedule(product_coloring(col1, col2, build_hgp(c1, c2)))
    try:
        if args.kind == "augment":
            inst = augmentation_instance(c1, c2, _parse_rows(args.rows, c2.n), col1, col2, schedule)
        else:
            inst = puncture_instance(c1, c2, [int(b) for b in args.bits.split(",")], col1, col2, schedule, args.which)
    except IndexError as exc:
        raise InputError(f"index out of range: {exc}") from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cm = inst.reduced_chain_map
    for name in ("gamma_x", "gamma_q", "gamma_z"):
        write_alist(getattr(cm, name), out / f"{name}.alist")
    ok = {
        "unreduced_squares": verify_chain_map(inst.chain_map),
        "reduced_squares": verify_chain_map(cm),
        "selection_relation": verify_selection_relation(cm, inst.coordinates),
    }
    _dump(
        {
            "kind": args.kind,
            "source": {"n": cm.source.n, "k": cm.source.k},
            "target": {"n": cm.target.n, "k": cm.target.k},
            "logicals": {"original": inst.original.k, "modified": inst.modified.k},
            "checks": ok,
        },
        out / "manifest.json",
    )
    print(f"{inst.original.k} → {inst.modified.k} logicals; squares {'commute' if all(ok.values()) else 'FAIL'}")
    return EXIT_OK if all(ok.values()) else EXIT_VERIFY


def cmd_simulate(args) -> int:
    code, manifest = load_bundle(args.code)
    if code.logical_z is None:
        raise InputError("code has no logical basis")
    rounds = args.rounds or (int(code.d) + 1 if code.d and math.isfinite(code.d) else 3)
    rows = []
    for p in args.p:
        res = run_memory(code, NoiseModel.uniform(p, rounds), args.shots, args.seed)
        rows.append({"p": p, **res.as_row(), "code": code.name, "schedule": "phenomenological"})
        print(f"p={p:g}: BLER {res.bler:.4g} [{res.ci_low:.4g}, {res.ci_high:.4g}]")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fields = ["p", "shots", "failures", "bler", "ci_low", "ci_high", "code", "schedule"]
    with out.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    _dump({"rounds": rounds, "seed": args.seed, "results": rows}, out.with_suffix(".json"))
    return EXIT_OK


def cmd_export(args) -> int:
    code, manifest = load_bundle(args.code)
    out = Path(args.out)
    if args.format == "alist":
        out.mkdir(parents=True, exist_ok=True)
        write_alist(code.hx, out / "hx.alist")
        write_alist(code.hz, out / "hz.alist")
    else:
        doc = {
            "name": code.name,
            "hx": [list(s) for s in code.hx.supports()],
            "hz": [list(s) for s in code.hz.supports()],
            "n": code.n,
            "k": code.k,
        }
        _dump(doc, out)
    print(f"exported {code.name or 'code'} as {args.format}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hgpreduce", description="Reduce hypergraph-product codes.")
    parser.add_argument("--seed", type=int, default=0, help="master seed for all randomness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-classical")
    p.add_argument("kind", choices=["random", "qc", "cycle", "named"])
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--dv", type=int, default=3)
    p.add_argument("--dc", type=int, default=4)
    p.add_argument("--lift", type=int, default=5)
    p.add_argument("--graph", default="heawood")
    p.add_argument("--name", default="heawood")
    p.set_defaults(func=cmd_gen_classical)

    p = sub.add_parser("build-hgp")
    p.add_argument("--h1", required=True)
    p.add_argument("--h2", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--name")
    p.set_defaults(func=cmd_build_hgp)

    p = sub.add_parser("color")
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("plan")
    p.add_argument("--code", required=True)
    p.add_argument("--fold-symmetric", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("reduce")
    p.add_argument("--code", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify")
    p.add_argument("--before", required=True)
    p.add_argument("--after", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("schedule")
    p.add_argument("--code", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--split", action="store_true")
    mode.add_argument("--random", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("hooks")
    p.add_argument("--code", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hooks)

    p = sub.add_parser("chainmap")
    p.add_argument("kind", choices=["augment", "puncture"])
    p.add_argument("--h1", required=True)
    p.add_argument("--h2", required=True)
    p.add_argument("--rows", default="0,1", help="augment: new checks on code 2, e.g. '0,3;1,4'")
    p.add_argument("--bits", default="0", help="puncture: informational bits, e.g. '0,3'")
    p.add_argument("--which", type=int, choices=[1, 2], default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_chainmap)

    p = sub.add_parser("simulate")
    p.add_argument("--code", required=True)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--shots", type=int, default=10_000)
    p.add_argument("--rounds", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export")
    p.add_argument("--code", required=True)
    p.add_argument("--format", choices=["alist", "json"], required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
