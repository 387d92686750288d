"""Command-line frontend: sweeps, CSV/SVG artifacts, and JSON run manifests.

Each command writes its CSV rows incrementally (checkpoint after every
item, so interrupted sweeps resume with --resume), then a figure and a
manifest.json recording parameters, timestamps, per-item status, and the
artifact paths.  The default output directory is
$RESIDUEVC_OUT/<command> or ./out/<command>.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .field import ZeroConvention, character_table, log2, make_field
from .montecarlo import interface_scan
from .primes import primes_in_range
from .search import longest_shattered_ap, vc_sweep
from .svgplot import scatter_svg
from .weil import verify_equidistribution, verify_shattering_theorem, verify_weil


@dataclass
class RunManifest:
    command: str
    parameters: dict
    tool_version: str = __version__
    started_at: str = ""
    finished_at: str = ""
    items: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def save(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2) + "\n", encoding="utf-8")
        return path


def _now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())


def _out_dir(args, command: str) -> Path:
    base = args.out_dir or os.environ.get("RESIDUEVC_OUT") or "out"
    path = Path(base)
    if args.out_dir is None:
        path = path / command
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("range must look like LO:HI")
    try:
        a, b = int(lo), int(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from exc
    if a > b:
        raise argparse.ArgumentTypeError("range low end exceeds high end")
    return a, b


def _existing_column(path: Path, column: str) -> set[int]:
    if not path.exists():
        return set()
    with path.open(newline="", encoding="utf-8") as fh:
        return {int(row[column]) for row in csv.DictReader(fh)}


class _Csv:
    """Append-mode CSV writer that flushes after every row."""

    def __init__(self, path: Path, header: list[str], resume: bool):
        self.path = path
        fresh = not (resume and path.exists())
        self.fh = path.open("w" if fresh else "a", newline="", encoding="utf-8")
        self.writer = csv.writer(self.fh)
        if fresh:
            self.writer.writerow(header)
            self.fh.flush()

    def row(self, values) -> None:
        self.writer.writerow(values)
        self.fh.flush()

    def close(self) -> None:
        self.fh.close()


# ---------------------------------------------------------------------------
# vcdim
# ---------------------------------------------------------------------------

VCDIM_HEADER = ["q", "vcdim", "exact", "alpha_q", "witness", "convention",
                "elapsed_ms"]


def cmd_vcdim(args) -> int:
    out = _out_dir(args, "vcdim")
    conv = ZeroConvention.parse(args.convention)
    q_lo, q_hi = args.range
    manifest = RunManifest(
        command="vcdim",
        parameters={"range": list(args.range), "convention": conv.value,
                    "early_exit": args.early_exit, "jobs": args.jobs,
                    "resume": args.resume,
                    "deterministic": "no RNG used by this command"},
        started_at=_now())
    csv_path = out / "vcdim.csv"
    done = _existing_column(csv_path, "q") if args.resume else set()
    sheet = _Csv(csv_path, VCDIM_HEADER, args.resume)
    rows = []
    for q in sorted(done):
        manifest.items.append({"q": q, "status": "checkpointed"})

    def on_error(q, exc):
        manifest.items.append({"q": q, "status": "error", "detail": str(exc)})

    try:
        for r in vc_sweep(q_lo, q_hi, conv, early_exit=args.early_exit,
                          jobs=args.jobs, skip=frozenset(done),
                          on_error=on_error):
            sheet.row([r.q, r.vcdim, str(r.exact).lower(), f"{r.alpha_q:.6f}",
                       ";".join(str(y) for y in r.witness), r.convention.value,
                       f"{r.elapsed_ms:.1f}"])
            manifest.items.append({"q": r.q, "status": "ok", "vcdim": r.vcdim,
                                   "exact": r.exact})
            rows.append((r.q, r.vcdim))
    finally:
        sheet.close()
    with csv_path.open(newline="", encoding="utf-8") as fh:
        all_rows = [(int(row["q"]), int(row["vcdim"]))
                    for row in csv.DictReader(fh)]
    all_rows.sort()
    svg_path = out / "vcdim.svg"
    curve_qs = primes_in_range(max(q_lo, 5), q_hi) or [5, 7]
    scatter_svg(svg_path, all_rows,
                curves=[("log2 q", [(q, log2(q)) for q in curve_qs])],
                x_label="prime q", y_label="largest shattered size",
                title=f"VC dimension, convention {conv.value}")
    manifest.outputs = [str(csv_path), str(svg_path)]
    manifest.finished_at = _now()
    manifest.save(out)
    return 0


# ---------------------------------------------------------------------------
# ap
# ---------------------------------------------------------------------------

AP_HEADER = ["q", "longest", "log2_q", "ratio", "convention"]


def cmd_ap(args) -> int:
    out = _out_dir(args, "ap")
    conv = ZeroConvention.parse(args.convention)
    q_lo, q_hi = args.range
    manifest = RunManifest(
        command="ap",
        parameters={"range": list(args.range), "convention": conv.value,
                    "resume": args.resume,
                    "deterministic": "no RNG used by this command"},
        started_at=_now())
    csv_path = out / "ap.csv"
    done = _existing_column(csv_path, "q") if args.resume else set()
    sheet = _Csv(csv_path, AP_HEADER, args.resume)
    for q in sorted(done):
        manifest.items.append({"q": q, "status": "checkpointed"})
    try:
        for q in primes_in_range(max(q_lo, 5), q_hi):
            if q in done:
                continue
            try:
                r = longest_shattered_ap(q, conv)
            except Exception as exc:  # noqa: BLE001 - per-prime isolation
                manifest.items.append({"q": q, "status": "error",
                                       "detail": str(exc)})
                continue
            sheet.row([r.q, r.longest, f"{log2(q):.6f}", f"{r.ratio:.6f}",
                       conv.value])
            manifest.items.append({"q": q, "status": "ok",
                                   "longest": r.longest})
    finally:
        sheet.close()
    with csv_path.open(newline="", encoding="utf-8") as fh:
        pts = [(int(row["q"]), int(row["longest"]))
               for row in csv.DictReader(fh)]
    pts.sort()
    svg_path = out / "ap.svg"
    curve_qs = primes_in_range(max(q_lo, 5), q_hi) or [5, 7]
    scatter_svg(svg_path, pts,
                curves=[("log2 q", [(q, log2(q)) for q in curve_qs]),
                        ("log2 q / 2", [(q, log2(q) / 2) for q in curve_qs])],
                x_label="prime q (log scale)",
                y_label="longest shattered progression", log_x=True,
                title=f"Shattered initial segments, convention {conv.value}")
    manifest.outputs = [str(csv_path), str(svg_path)]
    manifest.finished_at = _now()
    manifest.save(out)
    return 0


# ---------------------------------------------------------------------------
# prob
# ---------------------------------------------------------------------------

PROB_HEADER = ["n", "q", "ratio", "trials", "hits", "p_hat", "seed",
               "convention"]


def cmd_prob(args) -> int:
    out = _out_dir(args, "prob")
    conv = ZeroConvention.parse(args.convention)
    n_lo, n_hi = args.n
    manifest = RunManifest(
        command="prob",
        parameters={"n": list(args.n), "trials": args.trials,
                    "density": args.density, "seed": args.seed,
                    "ratio_lo": args.ratio_lo, "ratio_hi": args.ratio_hi,
                    "convention": conv.value,
                    "rng": "numpy PCG64; per-point seeds derived from "
                           "(seed, n, q)"},
        started_at=_now())
    for n in range(n_lo, n_hi + 1):
        csv_path = out / f"prob_n{n}.csv"
        sheet = _Csv(csv_path, PROB_HEADER, resume=False)
        try:
            points = interface_scan(n, args.ratio_lo, args.ratio_hi,
                                    density=args.density, trials=args.trials,
                                    seed=args.seed, conv=conv)
            for p in points:
                sheet.row([p.n, p.q, f"{p.ratio:.6f}", p.trials, p.hits,
                           f"{p.p_hat:.6f}", p.seed, conv.value])
                manifest.items.append({"n": p.n, "q": p.q, "status": "ok",
                                       "p_hat": p.p_hat})
        finally:
            sheet.close()
        svg_path = out / f"prob_n{n}.svg"
        scatter_svg(svg_path, [(p.ratio, p.p_hat) for p in points],
                    x_label="n / log2 q", y_label="estimated probability",
                    x_range=(args.ratio_lo, args.ratio_hi), y_range=(0.0, 1.0),
                    title=f"Shattering probability, n = {n}")
        manifest.outputs += [str(csv_path), str(svg_path)]
    manifest.finished_at = _now()
    manifest.save(out)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

VERIFY_HEADER = ["check", "q", "r", "params", "instances", "violations",
                 "max_quantity", "bound_form", "status"]


def cmd_verify(args) -> int:
    out = _out_dir(args, "verify")
    r_set = [int(v) for v in args.r.split(",")]
    manifest = RunManifest(
        command="verify",
        parameters={"q_max": args.q_max, "r": r_set, "n_max": args.n_max,
                    "epsilon": args.epsilon, "samples": args.samples,
                    "seed": args.seed},
        started_at=_now())
    csv_path = out / "verify.csv"
    sheet = _Csv(csv_path, VERIFY_HEADER, resume=False)
    total_violations = 0
    try:
        for q in primes_in_range(5, args.q_max):
            F = make_field(q)
            for r in r_set:
                if (q - 1) % r != 0:
                    manifest.items.append({"q": q, "r": r, "status": "skipped",
                                           "detail": "r does not divide q-1"})
                    continue
                C = character_table(F, r)
                w = verify_weil(F, C, args.n_max, samples=args.samples,
                                seed=args.seed)
                sheet.row(["weil", q, r, f"n_max={args.n_max}", w.instances,
                           w.violations, f"{w.max_ratio:.6f}",
                           "(n-1)sqrt(q)", "ok" if w.violations == 0 else "FAIL"])
                e = verify_equidistribution(F, r, args.n_max,
                                            samples=args.samples,
                                            seed=args.seed)
                sheet.row(["equidistribution", q, r, f"n_max={args.n_max}",
                           e.instances, e.violations,
                           f"{e.max_normalized:.6f}", "n/sqrt(q)+n/q",
                           "ok" if e.violations == 0 else "FAIL"])
                t = verify_shattering_theorem(F, r, args.epsilon)
                sheet.row(["shattering", q, r,
                           f"epsilon={args.epsilon};n_star={t.n_star}",
                           t.checked, t.failures, "", "all subsets shattered",
                           "ok" if t.passed else "FAIL"])
                total_violations += w.violations + e.violations + t.failures
                manifest.items.append({"q": q, "r": r, "status": "ok"})
    finally:
        sheet.close()
    manifest.outputs = [str(csv_path)]
    manifest.parameters["violations"] = total_violations
    manifest.finished_at = _now()
    manifest.save(out)
    print(f"verify: {total_violations} violation(s)")
    return 0 if total_violations == 0 else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="residuevc",
        description="VC dimension of power-residue sets under translation: "
                    "sweeps, probability scans, and character-sum checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, default_conv: str):
        p.add_argument("--convention", default=default_conv,
                       choices=[c.value for c in ZeroConvention],
                       help="treatment of 0 and of translates hitting the "
                            f"subset (default: {default_conv})")
        p.add_argument("--out-dir", default=None,
                       help="output directory (default: $RESIDUEVC_OUT/<cmd> "
                            "or ./out/<cmd>)")

    p = sub.add_parser("vcdim", help="exact VC dimension per prime in a range",
                       epilog="vcdim.csv columns: " + ", ".join(VCDIM_HEADER))
    p.add_argument("--range", type=_parse_range, required=True,
                   metavar="LO:HI")
    p.add_argument("--early-exit", action="store_true",
                   help="stop each prime once a set of size "
                        "floor(log2 q) - 1 is found (result is a lower bound)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume", action="store_true",
                   help="keep existing CSV rows and compute only missing primes")
    add_common(p, ZeroConvention.ZERO_IN.value)
    p.set_defaults(func=cmd_vcdim)

    p = sub.add_parser("ap", help="longest shattered arithmetic progression "
                                  "per prime",
                       epilog="ap.csv columns: " + ", ".join(AP_HEADER))
    p.add_argument("--range", type=_parse_range, required=True,
                   metavar="LO:HI")
    p.add_argument("--resume", action="store_true")
    add_common(p, ZeroConvention.ZERO_IN.value)
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("prob", help="shattering probability scans per subset "
                                    "size",
                       epilog="prob_n<k>.csv columns: " + ", ".join(PROB_HEADER))
    p.add_argument("--n", type=_parse_range, required=True, metavar="LO:HI")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--density", type=float, default=100,
                   help="expected number of sampled primes per plot")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratio-lo", type=float, default=0.7)
    p.add_argument("--ratio-hi", type=float, default=0.85)
    add_common(p, ZeroConvention.ZERO_IN.value)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("verify", help="run the character-sum verification "
                                      "suite",
                       epilog="verify.csv columns: " + ", ".join(VERIFY_HEADER))
    p.add_argument("--q-max", type=int, default=101)
    p.add_argument("--r", default="2", help="comma-separated subgroup indices")
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"residuevc: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
