"""Command-line front end.

Every subcommand works on files: cf32 recordings with a JSON sidecar in,
cf32 or CSV out.  Randomness only ever comes from an explicit ``--seed``.

Exit codes: 0 ok, 1 usage/config error, 2 I/O or format error,
3 data error (non-finite samples, missing cyclic feature).
"""

from __future__ import annotations

import argparse
import re
import sys

from . import __version__
from .core import EstimatorConfig
from .errors import ConfigError, DataError, FormatError, UsageError
from .estimator import CyclicCorrelator, average_frames
from .impair import CfoSpec, add_noise_snr, apply_cfo, estimate_cfo_ccf
from .io import RecordingMeta, export_csv, read_cf32, read_meta, write_cf32, write_meta
from .reference import gmsk_mc_oracle
from .siggen import PULSE_KINDS, CpmParams, awgn, gmsk_record, tone

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DATA = 0, 1, 2, 3
DEFAULT_RATE = 400e3
CHUNK = 1 << 16
_LIST_FLAGS = ("--lags", "--alphas")
_NUMBER_LIST = re.compile(r"^-[\d.]+(e-?\d+)?(,[-\d.e]+)*$")


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageExit(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


class _Ordered(argparse.Action):
    """Record impairment flags in the order they appear on the command line."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        order = getattr(namespace, "order", None) or []
        order.append(self.dest)
        namespace.order = order


def _glue_negative_lists(argv):
    """``--lags -3,0,5`` -> ``--lags=-3,0,5`` so argparse does not read a flag."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in _LIST_FLAGS and i + 1 < len(argv) and _NUMBER_LIST.match(argv[i + 1]):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def _load(path):
    x = read_cf32(path)
    try:
        meta = read_meta(path)
    except FileNotFoundError:
        meta = RecordingMeta(DEFAULT_RATE, description="no sidecar found")
    return x, meta


def _save(path, x, meta: RecordingMeta):
    write_cf32(path, x)
    write_meta(path, meta)


def cmd_gen_cpm(args):
    params = CpmParams(h=args.h, alphabet_size=args.alphabet, pulse_len=args.pulse_len,
                       bt=args.bt, sps=args.sps, pulse_kind=args.pulse)
    x = gmsk_record(params, args.symbols, args.seed)
    meta = RecordingMeta(args.sample_rate, f"CPM h={args.h} M={args.alphabet} "
                         f"L={args.pulse_len} BT={args.bt} sps={args.sps} pulse={args.pulse}",
                         seed=args.seed,
                         extra={"generator": "gen-cpm", "h": args.h, "sps": args.sps})
    _save(args.out, x, meta)


def cmd_gen_tone(args):
    _save(args.out, tone(args.freq, args.phase, args.count),
          RecordingMeta(args.sample_rate, f"tone f0={args.freq} phi0={args.phase}"))


def cmd_gen_noise(args):
    _save(args.out, awgn(args.count, args.sigma, args.seed),
          RecordingMeta(args.sample_rate, f"white noise sigma={args.sigma}", seed=args.seed))


def cmd_impair(args):
    x, meta = _load(args.inp)
    if args.phi0 is not None and args.cfo is None:
        raise UsageError("--phi0 requires --cfo")
    if (args.snr_db is None) != (args.seed is None):
        raise UsageError("--snr-db and --seed must be given together")
    applied = []
    for step in dict.fromkeys(args.order or []):
        if step == "cfo":
            x = apply_cfo(x, CfoSpec(args.cfo, args.phi0 or 0.0))
            applied.append(f"cfo={args.cfo}")
        elif step == "snr_db":
            x = add_noise_snr(x, args.snr_db, args.seed)
            applied.append(f"snr_db={args.snr_db}")
    meta.extra["impairments"] = meta.extra.get("impairments", []) + applied
    _save(args.out, x, meta)


def _stream_frames(est: CyclicCorrelator, x):
    frames = []
    for start in range(0, x.size, CHUNK):
        frames.extend(est.push(x[start:start + CHUNK]))
    return frames


def cmd_estimate(args):
    if args.mode == "set":
        conflicts = [f for f, v in (("--lags", args.lags),) if v is not None]
        if conflicts:
            raise UsageError(f"--mode set conflicts with {', '.join(conflicts)} "
                             "(use --max-lag and --alphas)")
        if args.max_lag is None or args.alphas is None:
            raise UsageError("--mode set needs --max-lag and --alphas")
        cfg = EstimatorConfig.set_mode(args.win_len, args.max_lag, args.alphas, args.conj)
    else:
        conflicts = [f for f, v in (("--max-lag", args.max_lag), ("--alphas", args.alphas))
                     if v is not None]
        if conflicts:
            raise UsageError(f"--mode full conflicts with {', '.join(conflicts)} (use --lags)")
        if args.lags is None:
            raise UsageError("--mode full needs --lags")
        cfg = EstimatorConfig.full_mode(args.win_len, args.lags, args.conj)

    x, _ = _load(args.inp)
    frames = _stream_frames(CyclicCorrelator(cfg), x)
    if not frames:
        raise DataError(f"record of {x.size} samples is too short for one window")
    result = frames if args.avg == "none" else average_frames(frames, args.avg)
    export_csv(args.out, result, cfg)


def cmd_scan(args):
    cfg = EstimatorConfig.full_mode(args.win_len, args.lags, args.conj)
    x, _ = _load(args.inp)
    frames = _stream_frames(CyclicCorrelator(cfg), x)
    if len(frames) < args.frames:
        raise DataError(f"record yields {len(frames)} frames, {args.frames} requested")
    export_csv(args.out, average_frames(frames[:args.frames], "magnitude"), cfg)


def cmd_cfo_est(args):
    x, _ = _load(args.inp)
    eps = estimate_cfo_ccf(x, args.expected_beta, args.win_len, args.frames)
    print(format(eps, ".17g"))


def cmd_oracle_gmsk(args):
    if args.lags is not None and args.max_lag is not None:
        raise UsageError("--lags conflicts with --max-lag")
    if args.lags is not None:
        lags = args.lags
    else:
        m = 0 if args.max_lag is None else args.max_lag
        lags = list(range(-m, m + 1))
    params = CpmParams(h=args.h, alphabet_size=args.alphabet, pulse_len=args.pulse_len,
                       bt=args.bt, sps=args.sps, pulse_kind=args.pulse)
    record_len = args.record_len or 16 * args.win_len
    table = gmsk_mc_oracle(params, args.alphas, lags, args.trials, record_len, args.seed,
                           win_len=args.win_len, conj=args.conj)
    table.to_csv(args.out)


def _add_cpm_flags(p):
    p.add_argument("--h", type=float, default=0.5, help="modulation index")
    p.add_argument("--alphabet", type=int, default=2, help="alphabet size M (even)")
    p.add_argument("--pulse-len", type=int, default=4, help="pulse length L in symbols")
    p.add_argument("--bt", type=float, default=0.25, help="Gaussian pulse BT product")
    p.add_argument("--sps", type=int, default=8, help="samples per symbol")
    p.add_argument("--pulse", choices=PULSE_KINDS, default="gaussian")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclocorr", description="Cyclic correlation analysis toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gen-cpm", help="generate a CPM/GMSK recording")
    _add_cpm_flags(p)
    p.add_argument("--symbols", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sample-rate", type=float, default=DEFAULT_RATE)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_cpm)

    p = sub.add_parser("gen-tone", help="generate a complex tone")
    p.add_argument("--freq", type=float, required=True, help="cycles/sample")
    p.add_argument("--phase", type=float, default=0.0, help="radians")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--sample-rate", type=float, default=DEFAULT_RATE)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_tone)

    p = sub.add_parser("gen-noise", help="generate circular white Gaussian noise")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sample-rate", type=float, default=DEFAULT_RATE)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_noise)

    p = sub.add_parser("impair", help="apply CFO and/or noise, in flag order")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cfo", type=float, action=_Ordered, help="offset in cycles/sample")
    p.add_argument("--phi0", type=float, help="CFO initial phase, radians")
    p.add_argument("--snr-db", type=float, action=_Ordered)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_impair, order=None)

    p = sub.add_parser("estimate", help="cyclic correlation frames or frame average")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--mode", choices=("set", "full"), default="set")
    p.add_argument("--win-len", type=int, required=True)
    p.add_argument("--max-lag", type=int)
    p.add_argument("--alphas", type=_float_list)
    p.add_argument("--lags", type=_int_list)
    p.add_argument("--conj", action="store_true", help="conjugate correlation")
    p.add_argument("--avg", choices=("magnitude", "coherent", "none"), default="magnitude")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("scan", help="Full-mode sweep over all DFT cycle frequencies")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--win-len", type=int, required=True)
    p.add_argument("--lags", type=_int_list, required=True)
    p.add_argument("--conj", action="store_true")
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("cfo-est", help="estimate CFO from a conjugate cyclic feature")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--expected-beta", type=float, required=True)
    p.add_argument("--win-len", type=int, required=True)
    p.add_argument("--frames", type=int, required=True)
    p.set_defaults(func=cmd_cfo_est)

    p = sub.add_parser("oracle-gmsk", help="Monte-Carlo cyclic statistics of CPM to CSV")
    _add_cpm_flags(p)
    p.add_argument("--alphas", type=_float_list, required=True)
    p.add_argument("--max-lag", type=int)
    p.add_argument("--lags", type=_int_list)
    p.add_argument("--conj", action="store_true")
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--win-len", type=int, default=4096)
    p.add_argument("--record-len", type=int, help="samples per trial (default 16 windows)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle_gmsk)
    return parser


def _fail(code: int, kind: str, message) -> int:
    text = " ".join(str(message).split())
    print(f"cyclocorr: error[{kind}]: {text}", file=sys.stderr)
    return code


def run(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_lists(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except _UsageExit as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except (ConfigError, UsageError) as exc:
        return _fail(EXIT_USAGE, "config" if isinstance(exc, ConfigError) else "usage", exc)
    except FormatError as exc:
        return _fail(EXIT_IO, "format", exc)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)
    except DataError as exc:
        return _fail(EXIT_DATA, "data", exc)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
