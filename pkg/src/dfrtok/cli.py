"""Command-line pipeline: features -> schedule -> downsample -> quantize -> pack.

Stages communicate only through files (FMAT matrices, scheme JSON, DFRT token
bytes), so each stage is independently scriptable. Exit codes: 0 success,
1 I/O or format error, 2 validation or infeasibility.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .core import (
    FeatureSequence,
    FormatError,
    Scheme,
    SchedulerParams,
    ValidationError,
    load_features,
    save_features,
)
from .downsample import downsample_fast
from .fsq import FsqSpec, fsq_quantize_seq
from .melt import MeltConfig, melt_sample
from .scheduler import schedule, schedule_vanilla, target_length
from .streaming import chunk_plan, stream_schedule
from .tokens import TokenStream, bitrate, content_bits, duration_bits, pack, unpack


def _env_seed(default: int = 0) -> int:
    try:
        return int(os.environ.get("DFRTOK_SEED", default))
    except ValueError:
        return default


def _read_levels(arg: str) -> FsqSpec:
    text = arg if arg.lstrip().startswith("[") else Path(arg).read_text()
    return FsqSpec(levels=tuple(json.loads(text)))


def _schedule_one(path: str, args, out_path: Path) -> str:
    h = load_features(path)
    params = SchedulerParams(ratio=args.rate, U=args.max_seg, objective=args.objective)
    if args.vanilla:
        if args.objective != "jh":
            raise ValidationError("--vanilla supports only the jh objective")
        scheme, score = schedule_vanilla(h, target_length(h.T, args.rate), args.max_seg)
    else:
        scheme, score = schedule(h, params)
    out_path.write_text(scheme.to_json())
    return f"{path}: T'={len(scheme)} score={score!r}"


def cmd_schedule(args) -> int:
    inputs = args.input
    if len(inputs) == 1:
        out = Path(args.out)
        if out.is_dir():
            out = out / (Path(inputs[0]).stem + ".scheme.json")
        print(_schedule_one(inputs[0], args, out))
        return 0
    out_dir = Path(args.out)
    if not out_dir.is_dir():
        raise ValidationError(f"--out must be a directory for multiple inputs: {out_dir}")
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        futures = [
            pool.submit(_schedule_one, p, args, out_dir / (Path(p).stem + ".scheme.json"))
            for p in inputs
        ]
        for fut in futures:
            print(fut.result())
    return 0


def cmd_downsample(args) -> int:
    h = load_features(args.input)
    scheme = Scheme.from_json(Path(args.scheme).read_text())
    out = downsample_fast(h, scheme, mode=args.mode)
    save_features(FeatureSequence(frames=out, base_rate_hz=h.base_rate_hz), args.out)
    print(f"{args.out}: {out.shape[0]}x{out.shape[1]} ({args.mode})")
    return 0


def cmd_quantize(args) -> int:
    h = load_features(args.input)
    spec = _read_levels(args.levels)
    if h.d != spec.d:
        raise ValidationError(
            f"feature width {h.d} does not match {spec.d} quantizer levels"
        )
    codes = fsq_quantize_seq(h.frames, spec)
    Path(args.out).write_text(
        json.dumps({"K": spec.K, "levels": list(spec.levels), "codes": codes.tolist()})
    )
    print(f"{args.out}: {codes.size} codes, K={spec.K}")
    return 0


def cmd_pack(args) -> int:
    try:
        obj = json.loads(Path(args.codes).read_text())
        codes = np.asarray(obj["codes"], dtype=np.int64)
        K = int(obj["K"])
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise FormatError(f"malformed codes JSON {args.codes}: {exc}") from exc
    scheme = Scheme.from_json(Path(args.scheme).read_text())
    if codes.size != len(scheme):
        raise ValidationError(
            f"{codes.size} codes vs {len(scheme)} segments; counts must match"
        )
    ts = TokenStream(
        codes=codes,
        durations=scheme.segments,
        K=K,
        U=scheme.U,
        base_rate_hz=args.base_rate,
    )
    Path(args.out).write_bytes(pack(ts))
    print(f"{args.out}: {len(ts)} tokens, {ts.total_frames} frames")
    return 0


def cmd_unpack(args) -> int:
    ts = unpack(Path(args.input).read_bytes())
    payload = {
        "K": ts.K,
        "U": ts.U,
        "base_rate_hz": ts.base_rate_hz,
        "codes": ts.codes.tolist(),
        "durations": ts.durations.tolist(),
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload))
        print(f"{args.out}: {len(ts)} tokens")
    else:
        print(json.dumps(payload))
    return 0


def cmd_bitrate(args) -> int:
    ts = unpack(Path(args.input).read_bytes())
    rep = bitrate(ts)
    print(f"tokens={len(ts)} frames={ts.total_frames} "
          f"mean_token_rate_hz={rep['mean_token_rate_hz']:.4f}")
    print(f"content: {rep['content_bps']:.2f} bps "
          f"({rep['content_bps'] / 1000.0:.2f} kbps, "
          f"packed {content_bits(ts.K)} bits/token)")
    print(f"duration: {rep['duration_bps']:.2f} bps "
          f"({rep['duration_bps'] / 1000.0:.2f} kbps, "
          f"packed {duration_bits(ts.U)} bits/token)")
    return 0


def cmd_melt_sample(args) -> int:
    cfg = MeltConfig.from_json(Path(args.config).read_text()) if args.config else MeltConfig()
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    rng = np.random.default_rng(cfg.seed)
    lines = []
    for _ in range(args.n):
        p = melt_sample(args.step, cfg, rng)
        lines.append(json.dumps({"step": args.step, "p": None if p is None else p.tolist()}))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_stream_schedule(args) -> int:
    h = load_features(args.input)
    params = SchedulerParams(ratio=args.rate, U=args.max_seg, objective=args.objective)
    plan = chunk_plan(h.T, h.base_rate_hz, args.chunk_ms, args.overlap_ms, args.context_ms)
    scheme = stream_schedule(h, params, plan)
    Path(args.out).write_text(scheme.to_json())
    print(f"{args.input}: chunks={len(plan.chunks)} T'={len(scheme)}")
    return 0


def cmd_convert(args) -> int:
    src_fmt = "csv" if args.input.endswith(".csv") else "binary"
    if args.from_format:
        src_fmt = args.from_format
    h = load_features(args.input, format=src_fmt, base_rate_hz=args.base_rate)
    save_features(h, args.out, format=args.to)
    print(f"{args.out}: {h.T}x{h.d} @ {h.base_rate_hz} Hz ({args.to})")
    return 0


def cmd_bench(args) -> int:
    if args.which == "dp":
        report = bench_mod.bench_dp(args.T, args.Tprime, args.U, args.d, args.trials, args.seed)
        print(bench_mod.format_report(report))
        print(f"state reduction: {report['state_reduction_pct']:.1f}%")
    elif args.which == "downsample":
        report = bench_mod.bench_downsample(args.T, args.d, args.U, args.trials, args.seed)
        print(bench_mod.format_report(report))
    else:
        report = bench_mod.bench_backends(args.T, args.Tprime, args.U, args.d, args.trials, args.seed)
        print(bench_mod.format_report(report))
    if args.json:
        Path(args.json).write_text(json.dumps(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfrtok",
        description="Dynamic frame-rate scheduling and tokenization pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schedule", help="compute an optimal downsample scheme")
    p.add_argument("--input", nargs="+", required=True, help="FMAT feature file(s)")
    p.add_argument("--rate", type=float, default=2.0, help="target downsampling ratio")
    p.add_argument("--max-seg", type=int, default=4, help="maximum segment length")
    p.add_argument("--objective", choices=("jh", "l2", "cosine"), default="jh")
    p.add_argument("--out", required=True, help="scheme JSON path (directory for many inputs)")
    p.add_argument("--vanilla", action="store_true", help="use the unpruned DP")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers across input files")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("downsample", help="apply a scheme's segment averaging")
    p.add_argument("--input", required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--mode", choices=("compact", "expanded"), default="compact")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_downsample)

    p = sub.add_parser("quantize", help="map feature rows to code indices")
    p.add_argument("--input", required=True, help="FMAT file of quantizer-width rows")
    p.add_argument("--levels", required=True, help="JSON list of levels, inline or a file")
    p.add_argument("--out", required=True, help="codes JSON path")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("pack", help="combine codes and a scheme into DFRT bytes")
    p.add_argument("--codes", required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--base-rate", type=float, default=80.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("unpack", help="decode DFRT bytes to JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_unpack)

    p = sub.add_parser("bitrate", help="report content/duration bitrates of a stream")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_bitrate)

    p = sub.add_parser("melt-sample", help="draw curriculum proportions as JSON lines")
    p.add_argument("--step", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=_env_seed())
    p.add_argument("--config", help="MeltConfig JSON file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_melt_sample)

    p = sub.add_parser("stream-schedule", help="chunked scheduling with overlap")
    p.add_argument("--input", required=True)
    p.add_argument("--rate", type=float, default=2.0)
    p.add_argument("--max-seg", type=int, default=4)
    p.add_argument("--objective", choices=("jh", "l2", "cosine"), default="jh")
    p.add_argument("--chunk-ms", type=float, default=500.0)
    p.add_argument("--overlap-ms", type=float, default=50.0)
    p.add_argument("--context-ms", type=float, default=3000.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stream_schedule)

    p = sub.add_parser("convert", help="convert features between FMAT and CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--from-format", choices=("binary", "csv"), dest="from_format")
    p.add_argument("--to", choices=("binary", "csv"), default="binary")
    p.add_argument("--base-rate", type=float, default=80.0, help="base rate for CSV input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("bench", help="benchmark DP variants, downsampling, backends")
    bsub = p.add_subparsers(dest="which", required=True)
    for which in ("dp", "downsample", "backends"):
        bp = bsub.add_parser(which)
        bp.add_argument("--T", type=int, default=1000)
        if which != "downsample":
            bp.add_argument("--Tprime", type=int, default=500)
        bp.add_argument("--U", type=int, default=4)
        bp.add_argument("--d", type=int, default=64)
        bp.add_argument("--trials", type=int, default=3)
        bp.add_argument("--seed", type=int, default=_env_seed())
        bp.add_argument("--json", help="also write the report as JSON here")
        bp.set_defaults(func=cmd_bench, which=which)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
