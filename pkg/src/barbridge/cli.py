"""Command-line front end.

Exit codes: 0 success, 1 Dowker barcodes differ, 2 input error,
3 assumption violated, 4 enumeration truncated under --strict-complete.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import svg
from .analogous import AnalogousBarsResult, build_triple, feature_centric, similarity_centric
from .chains import Chain
from .complexes import clique_complex, jitter_ties
from .decompositions import DEFAULT_CAP
from .dowker import dowker_bar_correspondence, dowker_barcode_check
from .errors import AssumptionViolation, InputError, TruncatedEnumeration
from .extension import bar_to_bars, cycle_to_bar
from .generators import SCENARIOS, distances
from .linalg import FieldSpec
from .persistence import Bar, PersistenceResult, bars_by_rank, compute_persistence
from .report import bar_extension_doc, barcode_doc, cycle_doc, dumps, extension_doc, rep_doc, document

EXIT_OK, EXIT_UNEQUAL, EXIT_INPUT, EXIT_ASSUMPTION, EXIT_TRUNCATED = 0, 1, 2, 3, 4


def read_csv(path: str | Path) -> np.ndarray:
    """Numeric CSV with an optional header row."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise InputError(f"{path} is empty")

    def parse(row: list[str]) -> list[float]:
        return [float(c) for c in row]

    try:
        parse(rows[0])
    except ValueError:
        rows = rows[1:]
    if not rows:
        raise InputError(f"{path} has a header but no data")
    try:
        data = [parse(r) for r in rows]
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric entry ({exc})") from None
    if len({len(r) for r in data}) != 1:
        raise InputError(f"{path}: rows have different lengths")
    return np.array(data, dtype=float)


def _square(path: str, points: bool, tie_break: str) -> np.ndarray:
    M = read_csv(path)
    if points:
        M = distances(M)
    elif M.shape[0] != M.shape[1]:
        raise InputError(f"{path}: dissimilarity matrix must be square, got {M.shape}")
    elif not np.array_equal(M, M.T):
        raise InputError(f"{path}: dissimilarity matrix is not symmetric")
    return jitter_ties(M, symmetric=True) if tie_break == "jitter" else M


def _config(args: argparse.Namespace, **extra: Any) -> dict[str, Any]:
    cfg = {
        "k": args.k,
        "field": args.field,
        "max_dim": args.max_dim if args.max_dim is not None else args.k + 1,
        "tie_break": args.tie_break,
        "cap": args.cap,
        "strict_complete": args.strict_complete,
        "points": args.points,
    }
    cfg.update(extra)
    return cfg


def _max_dim(args: argparse.Namespace) -> int:
    md = args.k + 1 if args.max_dim is None else args.max_dim
    if md < args.k + 1:
        raise InputError("--max-dim must be at least k + 1")
    return md


def _select(result: PersistenceResult, rank: int, label: str) -> Bar:
    ranked = bars_by_rank(result)
    if not 0 <= rank < len(ranked):
        raise InputError(f"bar rank {rank} out of range for {label} ({len(ranked)} bars)")
    return ranked[rank]


def _panel(title: str, result: PersistenceResult, styles: dict[int, str]) -> svg.Panel:
    bars = []
    for b in result.barcode:
        birth, death = result.bar_values(b)
        bars.append(svg.PlotBar(birth, death, styles.get(b.id, "plain")))
    return svg.Panel(title, tuple(bars))


def _styles_from(ext, source_ids: Sequence[int] = ()) -> dict[int, str]:
    styles = {i: "source" for i in source_ids}
    if ext is None:
        return styles
    for g in ext.grades:
        for rep in g.offset_bars:
            for b in rep.bar_ids():
                styles.setdefault(b, "offset")
        if g.baseline_bars is not None:
            for b in g.baseline_bars.bar_ids():
                styles[b] = "baseline"
    return styles


def _write(doc: dict[str, Any], args: argparse.Namespace, panels: list[svg.Panel] | None) -> None:
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.svg and panels is not None:
        Path(args.svg).write_text(svg.render(panels))


def cmd_persistence(args: argparse.Namespace) -> int:
    field = FieldSpec(args.field)
    M = _square(args.input, args.points, args.tie_break)
    res = compute_persistence(clique_complex(M, _max_dim(args)), args.k, field)
    doc = document(
        "persistence",
        _config(args, inputs=[Path(args.input).name]),
        barcodes={"X": barcode_doc("X", res)},
        cycles={f"X:{b.id}": cycle_doc(res.representative(b)) for b in res.barcode},
    )
    _write(doc, args, [_panel(f"H{args.k} barcode", res, {})])
    return EXIT_OK


def _read_cycle(path: str, p: int) -> tuple[int | None, Chain]:
    try:
        raw = json.loads(Path(path).read_text())
        terms = {tuple(sorted(int(v) for v in s)): int(c) for s, c in raw["cycle"]}
        return raw.get("psi"), Chain(terms, p)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read cycle file {path}: {exc}") from None


def cmd_extend(args: argparse.Namespace) -> int:
    field = FieldSpec(args.field)
    md = _max_dim(args)
    MZ = _square(args.z_input, args.points, args.tie_break)
    MY = _square(args.y_input, args.points, args.tie_break)
    if MZ.shape != MY.shape:
        raise InputError(f"inputs disagree on vertex count: {MZ.shape[0]} vs {MY.shape[0]}")
    Z, Y = clique_complex(MZ, md), clique_complex(MY, md)
    rz, ry = compute_persistence(Z, args.k, field), compute_persistence(Y, args.k, field)
    cfg = _config(args, inputs=[Path(args.z_input).name, Path(args.y_input).name])
    source_ids: list[int] = []
    if args.cycle:
        psi, tau = _read_cycle(args.cycle, field.p)
        psi = args.psi_override if args.psi_override is not None else psi
        if psi is None:
            raise InputError("a cycle file needs a psi entry or --psi-override")
        ext = cycle_to_bar(Z, Y, int(psi), tau, args.k, field, y_result=ry)
        payload = {"cycle": extension_doc(ext, "Y")}
        first, truncated = ext, False
    else:
        bar = _select(rz, args.bar, "Z")
        source_ids = [bar.id]
        res = bar_to_bars(Z, Y, bar, args.k, field, mode=args.extension_mode, psi=args.psi_override,
                          z_result=rz, y_result=ry)
        payload = {"bar": bar_extension_doc(res, "Z", "Y")}
        first = res.baseline
        truncated = any(g.cycles.size() > args.cap for e in res.extensions for g in e.grades)
    diagnostics = {"ell0": first.ell0, "truncated": truncated}
    doc = document(
        "extend", cfg,
        barcodes={"Z": barcode_doc("Z", rz), "Y": barcode_doc("Y", ry)},
        extensions=payload, diagnostics=diagnostics,
    )
    panels = [_panel("Z source", rz, {i: "source" for i in source_ids}), _panel("Y extensions", ry, _styles_from(first))]
    _write(doc, args, panels)
    if truncated and args.strict_complete:
        raise TruncatedEnumeration("enumeration truncated")
    return EXIT_OK


def _triple_inputs(args: argparse.Namespace) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[str]]:
    if args.generate:
        if args.inputs:
            raise InputError("give either --generate or input files, not both")
        Q, P = SCENARIOS[args.generate](seed=args.seed)
        MQ, MP, MQP = distances(Q), distances(P), distances(Q, P)
        names = [f"generated:{args.generate}"]
    else:
        if len(args.inputs) != 3:
            raise InputError("analogous needs three inputs: Q P QP (or --generate)")
        q, p, qp = args.inputs
        if args.points:
            Q, P = read_csv(q), read_csv(p)
            if Q.shape[1] != P.shape[1]:
                raise InputError("point clouds live in different dimensions")
            MQ, MP, MQP = distances(Q), distances(P), distances(Q, P)
        else:
            MQ, MP, MQP = read_csv(q), read_csv(p), read_csv(qp)
        names = [Path(x).name for x in args.inputs]
    if MQP.shape != (MQ.shape[0], MP.shape[0]):
        raise InputError(f"cross matrix shape {MQP.shape} does not match ({MQ.shape[0]}, {MP.shape[0]})")
    if args.tie_break == "jitter":
        MQ, MP, MQP = jitter_ties(MQ, True), jitter_ties(MP, True), jitter_ties(MQP, False)
    return MQ, MP, MQP, names


def _analogous_doc(res: AnalogousBarsResult) -> dict[str, Any]:
    if res.mode == "feature":
        return {
            "source_bar": f"X_Q:{res.bar.id}",
            "into_witness": bar_extension_doc(res.source, "X_Q", "W_QP"),
            "legs": [
                {
                    "terminal_class": leg.terminal_index,
                    "grade": leg.grade,
                    "offsets_used": list(leg.offsets_used),
                    "dual_cycle": cycle_doc(leg.dowker.dual),
                    "certificate": cycle_doc(leg.dowker.certificate),
                    "dual_birth_grade": leg.birth,
                    "dual_death_grade": leg.death,
                    "psi": leg.psi,
                    "extension": extension_doc(leg.extension, "X_P"),
                }
                for leg in res.legs
            ],
        }
    return {
        "witness_bar": f"W_QP:{res.bar.id}",
        "partner_bar": f"W_PQ:{res.partner.id}",
        "q_side": bar_extension_doc(res.q_side, "W_QP", "X_Q"),
        "p_side": bar_extension_doc(res.p_side, "W_PQ", "X_P"),
    }


def cmd_analogous(args: argparse.Namespace) -> int:
    field = FieldSpec(args.field)
    MQ, MP, MQP, names = _triple_inputs(args)
    started = time.perf_counter()
    triple = build_triple(MQ, MP, MQP, args.k, field, _max_dim(args))
    r = triple.results
    if args.mode == "feature":
        bar = _select(r["X_Q"], args.bar, "X_Q")
        res = feature_centric(None, None, None, bar, args.k, field, cap=args.cap, mode=args.extension_mode, triple=triple)
        q_styles = {bar.id: "source"}
        w_styles = _styles_from(res.source.baseline) if res.source else {}
        p_styles = _styles_from(res.legs[0].extension) if res.legs else {}
    else:
        bar = _select(r["W_QP"], args.bar, "W_QP")
        res = similarity_centric(None, None, None, bar, args.k, field, cap=args.cap, mode=args.extension_mode, triple=triple)
        q_styles = _styles_from(res.q_side.baseline)
        w_styles = {bar.id: "source"}
        p_styles = _styles_from(res.p_side.baseline)
    pair = res.baseline_pair()
    diagnostics: dict[str, Any] = {
        "truncated": res.truncated,
        "empty": res.empty,
        "details": res.diagnostics,
        "baseline_pair": None if pair is None else {
            "X_Q": [f"X_Q:{i}" for i in sorted(pair[0])],
            "X_P": [f"X_P:{i}" for i in sorted(pair[1])],
        },
    }
    if args.timings:
        diagnostics["seconds"] = round(time.perf_counter() - started, 3)
    cfg = _config(args, inputs=names, mode=args.mode, seed=args.seed, bar_rank=args.bar, digests=triple.digest())
    doc = document(
        "analogous", cfg,
        barcodes={name: barcode_doc(name, r[name]) for name in ("X_Q", "W_QP", "W_PQ", "X_P")},
        extensions=_analogous_doc(res), diagnostics=diagnostics,
    )
    panels = [
        _panel("X_Q clique", r["X_Q"], q_styles),
        _panel("W_QP witness", r["W_QP"], w_styles),
        _panel("X_P clique", r["X_P"], p_styles),
    ]
    _write(doc, args, panels)
    if res.truncated and args.strict_complete:
        raise TruncatedEnumeration("enumeration truncated")
    return EXIT_OK


def cmd_dowker_check(args: argparse.Namespace) -> int:
    field = FieldSpec(args.field)
    B = read_csv(args.input)
    if args.tie_break == "jitter":
        B = jitter_ties(B, symmetric=False)
    chk = dowker_barcode_check(B, args.k, field, _max_dim(args))
    sections: dict[str, Any] = {
        "barcodes": {"landmark": barcode_doc("landmark", chk.landmark), "witness": barcode_doc("witness", chk.witness)},
        "equal": chk.equal,
    }
    if chk.equal:
        try:
            corr = dowker_bar_correspondence(chk.landmark, chk.witness)
            sections["correspondence"] = {f"landmark:{a}": f"witness:{b}" for a, b in corr.items()}
        except AssumptionViolation as exc:
            sections["diagnostics"] = {"correspondence": str(exc)}
    _write(document("dowker-check", _config(args, inputs=[Path(args.input).name]), **sections), args, None)
    return EXIT_OK if chk.equal else EXIT_UNEQUAL


def cmd_generate(args: argparse.Namespace) -> int:
    Q, P = SCENARIOS[args.name](seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, X in (("Q.csv", Q), ("P.csv", P)):
        np.savetxt(out / name, X, delimiter=",", fmt="%.17g")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=1, help="homology degree")
    common.add_argument("--field", type=int, default=2, help="prime field characteristic")
    common.add_argument("--max-dim", type=int, default=None, help="simplex dimension cap (default k+1)")
    common.add_argument("--tie-break", choices=("error", "jitter"), default="error")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    common.add_argument("--psi-override", type=int, default=None)
    common.add_argument("--strict-complete", action="store_true", help="exit 4 if an enumeration is truncated")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--out", default=None, help="JSON output path (default stdout)")
    common.add_argument("--svg", default=None, help="SVG output path")
    common.add_argument("--points", action="store_true", help="inputs are point clouds (Euclidean distance)")
    common.add_argument("--timings", action="store_true", help="record wall-clock time in diagnostics")

    parser = argparse.ArgumentParser(prog="barbridge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("persistence", parents=[common], help="barcode of a clique filtration")
    p.add_argument("input")
    p.set_defaults(func=cmd_persistence)

    p = sub.add_parser("extend", parents=[common], help="extend a bar or cycle of Z into Y")
    p.add_argument("z_input")
    p.add_argument("y_input")
    p.add_argument("--bar", type=int, default=0, help="rank of the source bar (0 = longest)")
    p.add_argument("--cycle", default=None, help="JSON file with 'psi' and 'cycle' entries")
    p.add_argument("--extension-mode", choices=("general", "f2_unique_deaths"), default="general")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("analogous", parents=[common], help="analogous bars across two point clouds")
    p.add_argument("inputs", nargs="*", help="Q P QP matrices, or Q P point clouds with --points")
    p.add_argument("--generate", choices=sorted(SCENARIOS), default=None)
    p.add_argument("--mode", choices=("feature", "similarity"), default="feature")
    p.add_argument("--bar", type=int, default=0, help="rank of the source bar (0 = longest)")
    p.add_argument("--extension-mode", choices=("general", "f2_unique_deaths"), default="general")
    p.set_defaults(func=cmd_analogous)

    p = sub.add_parser("dowker-check", parents=[common], help="compare the two witness barcodes of a matrix")
    p.add_argument("input")
    p.set_defaults(func=cmd_dowker_check)

    p = sub.add_parser("generate", help="write a built-in seeded scenario as CSV point clouds")
    p.add_argument("name", choices=sorted(SCENARIOS))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "k", 0) < 0 or getattr(args, "cap", 1) < 1:
            raise InputError("--k must be >= 0 and --cap >= 1")
        return args.func(args)
    except TruncatedEnumeration as exc:
        print(f"barbridge: {exc}", file=sys.stderr)
        return EXIT_TRUNCATED
    except AssumptionViolation as exc:
        print(f"barbridge: assumption violated: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except InputError as exc:
        print(f"barbridge: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
