"""Command-line driver: ``compress``, ``reconstruct``, ``sweep`` and ``qubits``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, pipeline, qbackend
from .bixelize import load_decomposition, save_decomposition
from .errors import EXIT_CODES, HistEmbedError, ImageFileNotFound, ImageWriteFailure, InvalidParameter
from .histencode import BinnedHistogram, assign_bins
from .image_io import encode_png, load_image, save_image
from .metrics import METHODS, NEQR_DEFAULT_DEPTH, qubit_table
from .reconstruct import reconstruct_image

log = logging.getLogger("histembed")

SWEEP_HEADER = ["bins", "qubits", "mse", "psnr_db", "tvd", "embed_s", "recon_s"]
REPORT_FORMAT = "histembed-report/1"
DEFAULT_SWEEP_BINS = (8, 16, 32, 64, 128, 256)


@dataclass
class RunConfig:
    input: str
    bixel_h: int = 32
    bixel_w: int = 32
    bins: int = 32
    backend: str = "sampled"
    shots: int = qbackend.DEFAULT_SHOTS
    seed: int = 0
    bin_range: str = "data"
    recon: str = "paper"
    out: str | None = None
    report: str | None = None
    format: str = "json"
    sidecar: str | None = None
    timings: bool = False

    def echo(self) -> dict:
        return {
            "input": os.path.basename(self.input),
            "bixel": [self.bixel_h, self.bixel_w],
            "bins": self.bins,
            "backend": self.backend,
            "shots": self.shots if self.backend == "sampled" else None,
            "seed": self.seed,
            "bin_range": self.bin_range,
            "recon": self.recon,
        }


# -- formatting -------------------------------------------------------------


def _num(x):
    """JSON/CSV-safe number: infinities become the string ``"inf"``."""
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _csv_num(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _floats(arr) -> list:
    return [float(v) for v in np.asarray(arr, dtype=np.float64)]


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ImageWriteFailure(f"{path}: {exc}") from None


# -- compress ---------------------------------------------------------------


def build_report(cfg: RunConfig, result: pipeline.CompressionRun, sizes: dict) -> dict:
    img = result.result.image
    pad = result.decomp.pad
    hist = result.hist
    fid = result.fidelity
    paper_mode = cfg.recon == "paper"
    report = {
        "format": REPORT_FORMAT,
        "version": __version__,
        "config": cfg.echo(),
        "image": {
            "height": img.height,
            "width": img.width,
            "channels": img.channels,
            "padded_height": pad.padded_height,
            "padded_width": pad.padded_width,
            "grid": [result.decomp.grid_rows, result.decomp.grid_cols],
            "blocks": result.decomp.n_blocks,
            "block_length": result.decomp.block_length,
        },
        "histogram": {
            "bins": hist.bins,
            "qubits": result.qubits,
            "range_mode": cfg.bin_range,
            "range": list(hist.value_range),
            "edges": _floats(hist.edges),
            "counts": [int(c) for c in hist.counts],
        },
        "state": {
            "amplitudes": _floats(result.amplitudes.amplitudes),
            "ideal_probabilities": _floats(result.probabilities),
        },
        "backend": {
            "mode": cfg.backend,
            "noise_model": None,
            "generator": qbackend.GENERATOR_NAME if result.shots is not None else None,
            "seed": result.shots.seed if result.shots is not None else None,
            "shots": result.shots.shots if result.shots is not None else None,
            "shot_counts": [int(c) for c in result.shots.counts] if result.shots is not None else None,
            "estimated_counts": _floats(result.estimated_counts),
            "estimate_rounding": "fractional",
        },
        "reconstruction": {
            "mode": cfg.recon,
            "reconstructed_sums": _floats(result.result.reconstructed_sums),
            "clip_count": fid.clip_count,
        },
        "fidelity": {
            "mse": _num(fid.mse),
            "psnr_db": _num(fid.psnr_db),
            "tvd": _num(fid.tvd),
            "clip_count": fid.clip_count,
            "mse_bound": _num(result.mse_bound) if paper_mode else None,
            "mse_bound_pass": result.within_bound if paper_mode else None,
        },
        "files": sizes,
    }
    if cfg.timings:
        report["timings"] = {
            "embed_s": fid.timings["embed_s"],
            "recon_s": fid.timings["recon_s"],
            "scope": "local computation only",
        }
    return report


def _compress_csv(cfg: RunConfig, result: pipeline.CompressionRun, sizes: dict) -> str:
    fid = result.fidelity
    header = SWEEP_HEADER + ["clip_count", "mse_bound", "original_bytes", "reconstructed_bytes"]
    row = [
        str(result.bins),
        str(result.qubits),
        _csv_num(fid.mse),
        _csv_num(fid.psnr_db),
        _csv_num(fid.tvd),
        _csv_num(fid.timings["embed_s"]) if cfg.timings else "",
        _csv_num(fid.timings["recon_s"]) if cfg.timings else "",
        str(fid.clip_count),
        _csv_num(result.mse_bound) if cfg.recon == "paper" else "",
        str(sizes["original_bytes"]),
        str(sizes["reconstructed_bytes"]),
    ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerow(row)
    return buf.getvalue()


def cmd_compress(cfg: RunConfig) -> dict:
    img = load_image(cfg.input)
    decomp = pipeline.prepare(img, cfg.bixel_h, cfg.bixel_w)
    result = pipeline.run(
        img,
        decomp,
        cfg.bins,
        backend=cfg.backend,
        shots=cfg.shots,
        seed=cfg.seed,
        bin_range=cfg.bin_range,
        recon=cfg.recon,
    )
    recon_img = result.result.image
    if cfg.out:
        recon_bytes = save_image(recon_img, cfg.out)
    else:
        recon_bytes = len(encode_png(recon_img))
    original_bytes = os.path.getsize(cfg.input)
    sizes = {
        "original_bytes": original_bytes,
        "reconstructed_bytes": recon_bytes,
        "size_ratio": recon_bytes / original_bytes,
    }
    if cfg.sidecar:
        save_decomposition(decomp, cfg.sidecar)

    report = build_report(cfg, result, sizes)
    if cfg.format == "json":
        text = json.dumps(report, indent=2, allow_nan=False) + "\n"
    else:
        text = _compress_csv(cfg, result, sizes)
    if cfg.report:
        _write_text(cfg.report, text)

    fid = result.fidelity
    summary = sys.stderr if cfg.report == "-" else sys.stdout
    h, w, c = img.shape
    print(f"Loaded image of size {h}x{w}x{c}.", file=summary)
    print(f"Histogram bin count {cfg.bins}. Bixel size {cfg.bixel_h}x{cfg.bixel_w}.", file=summary)
    print(f"embed time: {fid.timings['embed_s']:.4f}s | qubits={result.qubits}", file=summary)
    print(f"recon time: {fid.timings['recon_s']:.4f}s | qubits={result.qubits}", file=summary)
    psnr_txt = "inf" if math.isinf(fid.psnr_db) else f"{fid.psnr_db:.2f}"
    print(f"MSE={fid.mse:.6e}, PSNR={psnr_txt} dB", file=summary)
    if fid.tvd is not None:
        print(f"TVD(measured, ideal)={fid.tvd:.6f} over {cfg.shots} shots", file=summary)
    print(f"Original: {original_bytes} bytes, reconstructed PNG: {recon_bytes} bytes", file=summary)
    return report


# -- reconstruct ------------------------------------------------------------


def cmd_reconstruct(sidecar: str, report_path: str, out: str | None) -> dict:
    """Rebuild an image from a block sidecar plus the histogram in a JSON report."""
    decomp = load_decomposition(sidecar)
    try:
        with open(report_path, encoding="utf-8") as fh:
            report = json.load(fh)
        h = report["histogram"]
        edges = np.array(h["edges"], dtype=np.float64)
        counts = np.array(h["counts"], dtype=np.int64)
        mode = report["reconstruction"]["mode"]
        estimated = report["backend"]["estimated_counts"]
    except FileNotFoundError:
        raise ImageFileNotFound(f"{report_path}: no such file") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameter(f"{report_path}: not a histembed report ({exc})") from None
    assignments = assign_bins(decomp.sums, edges)
    if not np.array_equal(np.bincount(assignments, minlength=len(counts)), counts):
        raise InvalidParameter("report histogram does not match the sidecar's block sums")
    hist = BinnedHistogram(bins=len(counts), edges=edges, counts=counts, assignments=assignments)
    result = reconstruct_image(decomp, hist, estimated if mode == "measured" else None)
    info = {"clip_count": result.clip_count}
    if out:
        info["reconstructed_bytes"] = save_image(result.image, out)
    print(
        f"Reconstructed {result.image.height}x{result.image.width}x{result.image.channels} "
        f"image from {decomp.n_blocks} blocks ({mode} mode)."
    )
    return info


# -- sweep ------------------------------------------------------------------


def sweep_rows(img, cfg: RunConfig, bins_list) -> list[dict]:
    """One row per bin count; the block decomposition is shared by all rows."""
    for b in bins_list:
        if b < 1:
            raise InvalidParameter(f"every bin count must be >= 1, got {b}")
    decomp = pipeline.prepare(img, cfg.bixel_h, cfg.bixel_w)
    rows = []
    for b in bins_list:
        res = pipeline.run(
            img,
            decomp,
            b,
            backend=cfg.backend,
            shots=cfg.shots,
            seed=cfg.seed ^ b,
            bin_range=cfg.bin_range,
            recon=cfg.recon,
        )
        fid = res.fidelity
        if cfg.recon == "paper" and not res.within_bound:
            log.warning("B=%d: mse %.6e exceeds bound %.6e", b, fid.mse, res.mse_bound)
        rows.append(
            {
                "bins": b,
                "qubits": res.qubits,
                "mse": fid.mse,
                "psnr_db": fid.psnr_db,
                "tvd": fid.tvd,
                "embed_s": fid.timings["embed_s"],
                "recon_s": fid.timings["recon_s"],
                "mse_bound": res.mse_bound,
            }
        )
    return rows


def format_sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in rows:
        writer.writerow(
            [
                str(r["bins"]),
                str(r["qubits"]),
                _csv_num(r["mse"]),
                _csv_num(r["psnr_db"]),
                _csv_num(r["tvd"]),
                _csv_num(r["embed_s"]),
                _csv_num(r["recon_s"]),
            ]
        )
    return buf.getvalue()


def cmd_sweep(cfg: RunConfig, bins_list) -> list[dict]:
    img = load_image(cfg.input)
    rows = sweep_rows(img, cfg, bins_list)
    _write_text(cfg.report, format_sweep_csv(rows))
    return rows


# -- qubits -----------------------------------------------------------------


def cmd_qubits(n_pixels: int, bins: int = 32, bit_depth: int = 8, fmt: str = "text") -> dict:
    table = qubit_table(n_pixels, bins=bins, bit_depth=bit_depth)
    if fmt == "json":
        payload = {"pixels": n_pixels, "bins": bins, "neqr_bit_depth": bit_depth, "qubits": table}
        print(json.dumps(payload, indent=2))
    else:
        print(f"pixels N = {n_pixels}, bins B = {bins}, NEQR bit depth l = {bit_depth}")
        print(f"{'method':<10}{'qubits':>7}  formula")
        formulas = {
            "FRQI": "ceil(log2 N) + 1",
            "NEQR": "ceil(log2 N) + l",
            "NCQI": "ceil(log2 N) + 2",
            "PROPOSED": "ceil(log2 B)",
        }
        for m in METHODS:
            print(f"{m:<10}{table[m]:>7}  {formulas[m]}")
    return table


# -- argument parsing -------------------------------------------------------


def _bixel(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if not m or int(m.group(1)) < 1 or int(m.group(2)) < 1:
        raise argparse.ArgumentTypeError(f"expected HxW with positive integers, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {v}")
    return v


def _bins_list(text: str) -> list[int]:
    return [_positive(t) for t in text.replace(" ", "").split(",") if t]


def _pixels(text: str) -> int:
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if m:
        return _positive(str(int(m.group(1)) * int(m.group(2))))
    return _positive(text)


def _exit_code_help() -> str:
    lines = ["exit codes:", "  0  success", "  2  invalid command-line usage"]
    lines += [f"  {code}  {name}" for name, code in sorted(EXIT_CODES.items(), key=lambda kv: kv[1])]
    return "\n".join(lines)


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="8-bit PNG or binary PPM/PGM image")
    p.add_argument("--bixel", type=_bixel, default=(32, 32), metavar="HxW", help="block size (default 32x32)")
    p.add_argument("--backend", choices=pipeline.BACKENDS, default="sampled")
    p.add_argument("--shots", type=_positive, default=qbackend.DEFAULT_SHOTS, help="measurement shots (default 4096)")
    p.add_argument("--seed", type=_u64, default=0, help="unsigned 64-bit sampler seed (default 0)")
    p.add_argument("--bin-range", choices=pipeline.BIN_RANGES, default="data",
                   help="histogram extent: observed block sums or the full [0, M] range")
    p.add_argument("--recon", choices=("paper", "measured"), default="paper",
                   help="'measured' rescales bin centers by estimated/original counts")
    p.add_argument("--report", metavar="PATH", help="report destination ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="histembed",
        description="Histogram-driven amplitude-embedding image compression on a simulated qubit backend.",
        epilog=_exit_code_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compress", help="compress and reconstruct one image",
                        epilog=_exit_code_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_run_options(pc)
    pc.add_argument("--bins", type=_positive, default=32, help="histogram bins B (default 32)")
    pc.add_argument("--out", metavar="PATH", help="write the reconstructed PNG here")
    pc.add_argument("--format", choices=("json", "csv"), default="json")
    pc.add_argument("--sidecar", metavar="PATH", help="also save block sums/weights (.npz)")
    pc.add_argument("--timings", action="store_true",
                    help="include wall-clock timings in the report (makes it run-dependent)")

    pr = sub.add_parser("reconstruct", help="rebuild an image from a sidecar and a JSON report",
                        epilog=_exit_code_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
    pr.add_argument("--sidecar", required=True, metavar="PATH")
    pr.add_argument("--report", required=True, metavar="PATH", help="JSON report written by compress")
    pr.add_argument("--out", metavar="PATH")

    ps = sub.add_parser("sweep", help="MSE/PSNR/runtime versus bin count (CSV)",
                        epilog=_exit_code_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_run_options(ps)
    ps.add_argument("--bins-list", type=_bins_list, default=list(DEFAULT_SWEEP_BINS), metavar="B1,B2,...",
                    help="bin counts to sweep (default 8,16,32,64,128,256)")

    pq = sub.add_parser("qubits", help="qubit counts of FRQI/NEQR/NCQI versus the histogram encoding",
                        epilog=_exit_code_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
    pq.add_argument("pixels", type=_pixels, help="pixel count N, or an image size HxW")
    pq.add_argument("--bins", type=_positive, default=32)
    pq.add_argument("--bit-depth", type=_positive, default=None,
                    help="NEQR value-register width l (default 8; use 24 for 8-bit RGB)")
    pq.add_argument("--rgb", action="store_true", help="default NEQR bit depth to 24")
    pq.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        input=args.input,
        bixel_h=args.bixel[0],
        bixel_w=args.bixel[1],
        bins=getattr(args, "bins", 32),
        backend=args.backend,
        shots=args.shots,
        seed=args.seed,
        bin_range=args.bin_range,
        recon=args.recon,
        out=getattr(args, "out", None),
        report=args.report,
        format=getattr(args, "format", "json"),
        sidecar=getattr(args, "sidecar", None),
        timings=getattr(args, "timings", False),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        if args.command == "compress":
            cmd_compress(_config(args))
        elif args.command == "reconstruct":
            cmd_reconstruct(args.sidecar, args.report, args.out)
        elif args.command == "sweep":
            cmd_sweep(_config(args), args.bins_list)
        else:
            depth = args.bit_depth or NEQR_DEFAULT_DEPTH[3 if args.rgb else 1]
            cmd_qubits(args.pixels, bins=args.bins, bit_depth=depth, fmt=args.format)
    except HistEmbedError as exc:
        print(f"histembed: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
