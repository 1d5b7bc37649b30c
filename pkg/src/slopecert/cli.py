"""``slopecert`` command line: certificates as JSON, plus the table helpers.

Exit codes: 0 certified (or informational command succeeded), 2 failed or
not applicable, 1 bad input or internal error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from typing import Any, Sequence

from . import __version__
from .certify import CERTIFIED, FAILED, NOT_APPLICABLE, Certificate, certify_ptb, certify_twobridge
from .fpgroup import double_cosets_dihedral
from .ptbundle import Monodromy, cycle_table
from .twobridge import TwoBridgePair

SCHEMA_VERSION = 1


class InputError(ValueError):
    pass


# -- documents ----------------------------------------------------------------


def certificate_body(cert: Certificate) -> dict[str, Any]:
    return {
        "verdict": cert.verdict,
        "cover_index": cert.cover_index,
        "boundary_tori": [
            {"degree": t.degree, "orbit_size": t.orbit_size, "stabilizer": [list(r) for r in t.stabilizer]}
            for t in cert.tori
        ],
        "t_tilde": cert.t_tilde,
        "conditions": {
            "at_least_three_tori": cert.condition1,
            "degree_one_torus": cert.condition2,
            "projection_onto": cert.condition3,
        },
        "ranks": {
            "boundary_h1": cert.boundary_rank,
            "cover_h1": cert.cover_betti,
            "i_star": cert.i_star_rank,
            "kernel": cert.kernel_dim,
            "projected": cert.projected_rank,
        },
        "h1_cover": None if cert.h1_cover is None else
        {"betti": cert.h1_cover.betti, "torsion": list(cert.h1_cover.torsion)},
        "zero_filled_betti": cert.zero_filled_betti,
        "notes": list(cert.notes),
    }


def evidence_body(cert: Certificate) -> dict[str, Any] | None:
    ev = cert.evidence
    if ev is None:
        return None
    return {
        "relator_kernel": [list(v) for v in ev.relator_kernel],
        "peripheral_columns": ev.peripheral_columns.tolist(),
        "i_star": ev.i_star.tolist(),
        "kernel_basis": [list(v) for v in ev.kernel_basis],
        "projection": [list(v) for v in ev.projection],
    }


def document(command: str, cert: Certificate, evidence: bool = False, seconds: float | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "input": cert.input,
        "certificate": certificate_body(cert),
    }
    if evidence:
        doc["evidence"] = evidence_body(cert)
    if seconds is not None:
        doc["timing"] = {"seconds": round(seconds, 6)}
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def exit_code(verdict: str) -> int:
    return 0 if verdict == CERTIFIED else 2


def certificate_text(doc: dict) -> str:
    c = doc["certificate"]
    lines = [f"{doc['command']} {json.dumps(doc['input'], sort_keys=True)}", f"verdict: {c['verdict']}"]
    if c["boundary_tori"]:
        degs = ",".join(str(t["degree"]) for t in c["boundary_tori"])
        lines.append(f"cover index {c['cover_index']}; torus degrees {degs}; T~ = torus {c['t_tilde']}")
        for name, ok in c["conditions"].items():
            lines.append(f"  {name}: {'yes' if ok else 'no'}")
        r = c["ranks"]
        lines.append(f"  dim H1(bdry)={r['boundary_h1']} b1(cover)={r['cover_h1']} "
                     f"dim ker i*={r['kernel']} projected rank={r['projected']}")
        if c["zero_filled_betti"] is not None:
            lines.append(f"  b1 of 0-filled cover: {c['zero_filled_betti']}")
    lines += [f"note: {n}" for n in c["notes"]]
    return "\n".join(lines) + "\n"


# -- input parsing -------------------------------------------------------------


def parse_matrix(text: str) -> Monodromy:
    try:
        entries = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"matrix must be four comma-separated integers, got {text!r}") from None
    if len(entries) != 4:
        raise InputError(f"matrix must have four entries, got {len(entries)}")
    try:
        return Monodromy.from_entries(*entries)
    except ValueError as e:
        raise InputError(str(e)) from None


def parse_pair(alpha: int, beta: int) -> TwoBridgePair:
    try:
        return TwoBridgePair(alpha, beta)
    except ValueError as e:
        raise InputError(str(e)) from None


def run_ptb(M: Monodromy, evidence: bool = False, timing: bool = False) -> dict:
    t0 = time.perf_counter()
    cert = certify_ptb(M)
    return document("ptb", cert, evidence, time.perf_counter() - t0 if timing else None)


def run_tb(k: TwoBridgePair, evidence: bool = False, timing: bool = False) -> dict:
    t0 = time.perf_counter()
    cert = certify_twobridge(k)
    return document("tb", cert, evidence, time.perf_counter() - t0 if timing else None)


# -- tables ----------------------------------------------------------------------


def table_document() -> dict:
    rows = []
    for row in cycle_table():
        rows.append({
            "representatives": [[list(r) for r in M] for M in row.representatives],
            "cycles": list(row.cycles),
            "printed": row.printed,
            "note": row.note or None,
        })
    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": "table", "rows": rows}


def table_text(doc: dict) -> str:
    def fmt(M):
        return "(" + " ".join(map(str, M[0])) + "; " + " ".join(map(str, M[1])) + ")"

    lines = ["conjugacy class               cycle lengths on Z/3 x Z/3"]
    for row in doc["rows"]:
        reps = " ".join(fmt(M) for M in row["representatives"])
        line = f"{reps:<30}{','.join(map(str, row['cycles']))}"
        if row["note"]:
            line += f"   [{row['note']}]"
        lines.append(line)
    return "\n".join(lines) + "\n"


def doublecosets_document(n: int) -> dict:
    classes = double_cosets_dihedral(n)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": "doublecosets",
        "n": n,
        "count": len(classes),
        "classes": [
            {"elements": [[g.rotation, int(g.flip)] for g in c], "cosets": len(c) // 2}
            for c in classes
        ],
    }


def doublecosets_text(doc: dict) -> str:
    per = ",".join(str(c["cosets"]) for c in doc["classes"])
    return f"D_{2 * doc['n']}: {doc['count']} (A,A)-double cosets; right cosets of A per class: {per}\n"


# -- batch -------------------------------------------------------------------------

_BATCH_KEYS = {"ptb", "ptb_max_entry", "twobridge", "tb_alpha_range"}


def pseudo_anosov_matrices(max_entry: int) -> list[tuple[int, int, int, int]]:
    r = range(-max_entry, max_entry + 1)
    return [(a, b, c, d) for a, b, c, d in itertools.product(r, repeat=4) if a * d - b * c == 1 and abs(a + d) > 2]


def coprime_pairs(lo: int, hi: int) -> list[tuple[int, int]]:
    return [(al, be) for al in range(lo, hi + 1) if al % 2 == 1 and al >= 3
            for be in range(1, al) if gcd(al, be) == 1]


def expand_batch(spec: dict) -> list[tuple[str, tuple[int, ...]]]:
    """Turn a batch spec into an ordered list of ``(kind, args)`` items."""
    if not isinstance(spec, dict):
        raise InputError("batch spec must be a JSON object")
    unknown = set(spec) - _BATCH_KEYS
    if unknown:
        raise InputError(f"unknown batch keys: {sorted(unknown)}")
    items: list[tuple[str, tuple[int, ...]]] = []
    try:
        for m in spec.get("ptb", []):
            if len(m) != 4:
                raise InputError(f"ptb entry {m} must have four integers")
            items.append(("ptb", tuple(int(x) for x in m)))
        if "ptb_max_entry" in spec:
            items += [("ptb", m) for m in pseudo_anosov_matrices(int(spec["ptb_max_entry"]))]
        for p in spec.get("twobridge", []):
            if len(p) != 2:
                raise InputError(f"twobridge entry {p} must be [alpha, beta]")
            items.append(("tb", (int(p[0]), int(p[1]))))
        if "tb_alpha_range" in spec:
            lo, hi = spec["tb_alpha_range"]
            items += [("tb", p) for p in coprime_pairs(int(lo), int(hi))]
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"malformed batch spec: {e}") from None
    return items


def run_item(item: tuple[str, tuple[int, ...]], evidence: bool = False, timing: bool = False) -> dict:
    kind, args = item
    echo = {"matrix": [list(args[:2]), list(args[2:])]} if kind == "ptb" else {"alpha": args[0], "beta": args[1]}
    try:
        if kind == "ptb":
            return run_ptb(parse_matrix(",".join(map(str, args))), evidence, timing)
        return run_tb(parse_pair(*args), evidence, timing)
    except Exception as e:  # reported per input; the batch keeps going
        return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": kind,
                "input": echo, "error": f"{type(e).__name__}: {e}"}


def _run_item_star(args):
    return run_item(*args)


def batch_workers() -> int:
    raw = os.environ.get("SLOPECERT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InputError(f"SLOPECERT_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def run_batch(items: Sequence[tuple[str, tuple[int, ...]]], evidence: bool = False, timing: bool = False,
              workers: int = 1) -> dict:
    jobs = [(item, evidence, timing) for item in items]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            docs = list(pool.map(_run_item_star, jobs))
    else:
        docs = [run_item(*j) for j in jobs]
    summary = {"total": len(docs), CERTIFIED: 0, FAILED: 0, NOT_APPLICABLE: 0, "errors": 0}
    for d in docs:
        if "error" in d:
            summary["errors"] += 1
        else:
            summary[d["certificate"]["verdict"]] += 1
    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": "batch",
            "summary": summary, "documents": docs}


def batch_text(doc: dict) -> str:
    s = doc["summary"]
    lines = []
    for d in doc["documents"]:
        status = d.get("error") or d["certificate"]["verdict"]
        lines.append(f"{d['command']:<4} {json.dumps(d['input'], sort_keys=True)}  {status}")
    lines.append(f"total {s['total']}: {s[CERTIFIED]} certified, {s[FAILED]} failed, "
                 f"{s[NOT_APPLICABLE]} not applicable, {s['errors']} errors")
    return "\n".join(lines) + "\n"


# -- argument parsing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="text", action="store_false", help="emit JSON (default)")
    fmt.add_argument("--text", dest="text", action="store_true", help="emit a human-readable summary")
    common.set_defaults(text=False)
    common.add_argument("-o", "--output", help="write to this file instead of standard output")

    cert_opts = argparse.ArgumentParser(add_help=False)
    cert_opts.add_argument("--evidence", action="store_true", help="include the condition-3 matrices")
    cert_opts.add_argument("--timing", action="store_true", help="include wall-clock timing")

    parser = argparse.ArgumentParser(prog="slopecert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"slopecert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ptb", parents=[common, cert_opts], help="certify a punctured-torus bundle")
    p.add_argument("-m", "--matrix", required=True, help="monodromy a,b,c,d (row-major)")

    p = sub.add_parser("tb", parents=[common, cert_opts], help="certify a two-bridge knot b(alpha, beta)")
    p.add_argument("-a", "--alpha", type=int, required=True)
    p.add_argument("-b", "--beta", type=int, required=True)

    sub.add_parser("table", parents=[common], help="cycle lengths of the mod-3 action by conjugacy class")

    p = sub.add_parser("doublecosets", parents=[common], help="(A,A)-double cosets in D_2n")
    p.add_argument("n", type=int)

    p = sub.add_parser("batch", parents=[common, cert_opts], help="certify many inputs")
    p.add_argument("spec", nargs="?", help="JSON batch spec file")
    p.add_argument("--ptb-max-entry", type=int, help="all pseudo-Anosov matrices with |entries| <= N")
    p.add_argument("--tb-alpha", type=int, nargs=2, metavar=("MIN", "MAX"),
                   help="all b(alpha, beta) with MIN <= alpha <= MAX")
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ptb":
            doc = run_ptb(parse_matrix(args.matrix), args.evidence, args.timing)
            _emit(certificate_text(doc) if args.text else dumps(doc), args.output)
            return exit_code(doc["certificate"]["verdict"])
        if args.command == "tb":
            doc = run_tb(parse_pair(args.alpha, args.beta), args.evidence, args.timing)
            _emit(certificate_text(doc) if args.text else dumps(doc), args.output)
            return exit_code(doc["certificate"]["verdict"])
        if args.command == "table":
            doc = table_document()
            _emit(table_text(doc) if args.text else dumps(doc), args.output)
            return 0
        if args.command == "doublecosets":
            if args.n < 1 or args.n % 2 == 0:
                raise InputError(f"n = {args.n} must be odd and positive")
            doc = doublecosets_document(args.n)
            _emit(doublecosets_text(doc) if args.text else dumps(doc), args.output)
            return 0
        if args.command == "batch":
            spec: dict = {}
            if args.spec:
                try:
                    with open(args.spec) as fh:
                        spec = json.load(fh)
                except (OSError, json.JSONDecodeError) as e:
                    raise InputError(f"cannot read batch spec: {e}") from None
                if not isinstance(spec, dict):
                    raise InputError("batch spec must be a JSON object")
            if args.ptb_max_entry is not None:
                spec = {**spec, "ptb_max_entry": args.ptb_max_entry}
            if args.tb_alpha is not None:
                spec = {**spec, "tb_alpha_range": list(args.tb_alpha)}
            items = expand_batch(spec)
            doc = run_batch(items, args.evidence, args.timing, batch_workers())
            _emit(batch_text(doc) if args.text else dumps(doc), args.output)
            return 1 if doc["summary"]["errors"] else 0
    except InputError as e:
        print(f"slopecert: error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"slopecert: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
