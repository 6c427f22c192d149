"""Command-line experiment driver.

Every subcommand reads a JSON experiment config (see
``tandemnet.network.CONFIG_SCHEMA``) and writes deterministic text or
CSV output: the same config, seed, and options always produce
byte-identical files.  Floats are printed with 6 significant digits;
exact rationals as "p/q".
"""

from __future__ import annotations

import argparse
import csv
import sys
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from . import sequences
from .gf import field
from .network import (
    DiscoveryFailedError,
    NetworkError,
    activity_signal,
    discover_offset,
    identify_senders,
    load_config,
    simulate,
    simulate_subslot,
)
from .rates import (
    SCHEMES,
    achievable_point,
    aloha_region_point,
    max_symmetric_rate,
    outer_point,
    region_boundary,
)
from .sequences import expand_set, is_consecutively_3wise_shift_invariant


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _load(args):
    try:
        return load_config(args.config)
    except NetworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


@contextmanager
def _out(args):
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def cmd_construct(args):
    cfg = _load(args)
    sset = cfg.sequence_set()
    with _out(args) as fh:
        fh.write(sequences.dumps(sset))
    return 0


def cmd_verify_si(args):
    cfg = _load(args)
    sset = cfg.sequence_set()
    rng = np.random.default_rng(args.seed)
    report = is_consecutively_3wise_shift_invariant(
        sset, samples=args.samples, rng=rng
    )
    with _out(args) as fh:
        fh.write(f"# seed={args.seed}\n")
        mode = "exhaustive" if report.exhaustive else f"sampled({args.samples})"
        fh.write(f"shift_invariant={'yes' if report.invariant else 'no'} mode={mode}\n")
        if report.witness is not None:
            fh.write(f"witness={report.witness}\n")
    return 0 if report.invariant else 1


def cmd_simulate(args):
    cfg = _load(args)
    sset = cfg.sequence_set()
    periods = args.periods or cfg.periods
    result = simulate(
        cfg.spec, sset, cfg.offsets, cfg.rates,
        field(cfg.field_order()), periods, seed=args.seed,
    )
    if args.trace:
        result.trace.export_csv(args.trace)
    with _out(args) as fh:
        fh.write(f"# seed={args.seed} periods={periods} q={cfg.field_order()}\n")
        if not result.ok:
            fh.write(f"infeasible: {result.failure}\n")
            fh.write(f"offsets={','.join(map(str, result.trace.offsets))}\n")
            return 1
        fh.write(f"errors={result.error_count()}\n")
        for (j, dest), msgs in sorted(result.decoded.items()):
            for t in result.decodable_periods(j, dest):
                syms = " ".join(str(v) for v in msgs.get(t, ()))
                fh.write(f"source={j} dest={dest} period={t} symbols={syms}\n")
    return 0


def cmd_identify_sweep(args):
    """For every pair of neighbor offsets, check that the sender labels
    recovered from one period of channel activity are correct."""
    cfg = _load(args)
    sset = cfg.sequence_set()
    P = sset.period
    node = args.node
    q = field(cfg.field_order())
    failures = 0
    total = 0
    rng = np.random.default_rng(args.seed)
    pairs = _offset_pairs(P, args.samples, rng)
    with _out(args) as fh:
        fh.write(f"# seed={args.seed} node={node} pairs={len(pairs)}\n")
        for tl, tr in pairs:
            offsets = list(cfg.offsets)
            if node - 2 >= 1:
                offsets[node - 2] = tl
            if node <= len(offsets) - 1:
                offsets[node] = tr
            result = simulate(cfg.spec, sset, offsets, cfg.rates, q,
                              periods=3, seed=args.seed)
            start = result.trace.offsets[node - 1]
            signal = activity_signal(result.trace, node, start=start)
            labels = identify_senders(
                signal, sset[node], result.trace.offsets[node - 1],
                sset[node - 1] if node - 1 >= 1 and sset.in_range(node - 1) else None,
                sset[node + 1] if sset.in_range(node + 1) else None,
                start=start,
            )
            bad = _label_errors(labels, sset, offsets, node, start)
            total += 1
            if bad:
                failures += 1
                fh.write(f"tl={tl} tr={tr} wrong={bad}\n")
        fh.write(f"checked={total} failures={failures}\n")
    return 0 if failures == 0 else 1


def _offset_pairs(P, samples, rng):
    if samples and samples < P * P:
        seen = set()
        while len(seen) < samples:
            seen.add((int(rng.integers(P)), int(rng.integers(P))))
        return sorted(seen)
    return [(a, b) for a in range(P) for b in range(P)]


def _label_errors(labels, sset, offsets, node, start):
    """Slots whose recovered label disagrees with the true transmitter."""
    P = sset.period
    bad = []
    for k, side in labels.items():
        nb = node + side
        g = start + k
        if not sset.in_range(nb) or sset[nb].bits[(g - offsets[nb - 1]) % P] != 1:
            bad.append(int(k))
    return bad


def cmd_discover_offset(args):
    cfg = _load(args)
    sset = cfg.sequence_set()
    try:
        tau = discover_offset(
            sset, cfg.offsets, args.transmitter, args.receiver,
            extra_periods=args.extra_periods,
        )
    except DiscoveryFailedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    truth = cfg.offsets[args.transmitter - 1] % sset.period
    with _out(args) as fh:
        fh.write(f"recovered={tau} true={truth} match={'yes' if tau == truth else 'no'}\n")
    return 0 if tau == truth else 1


def cmd_regions(args):
    """Membership of the configured rate vector in each region."""
    cfg = _load(args)
    f = [d.value for d in cfg.duties]
    R = cfg.rates
    with _out(args) as fh:
        fh.write(f"achievable={'yes' if achievable_point(cfg.spec, f, R) else 'no'}\n")
        fh.write(f"outer={'yes' if outer_point(cfg.spec, f, R) else 'no'}\n")
    return 0


def cmd_symmetric_rates(args):
    cfg = _load(args)
    grid_step = Fraction(1, args.grid_steps)
    with _out(args) as fh:
        w = csv.writer(fh)
        w.writerow(["scheme", "rate", "witness_params"])
        for scheme in SCHEMES:
            if scheme == "outer" and not args.include_outer:
                continue
            res = max_symmetric_rate(
                cfg.spec, scheme, grid_step=grid_step, seed=args.seed,
            )
            rate = res.rate_exact if res.rate_exact is not None else res.rate
            w.writerow([scheme, _fmt(rate), res.witness_str()])
    return 0


def cmd_boundary(args):
    cfg = _load(args)
    grid_step = Fraction(1, args.grid_steps)
    with _out(args) as fh:
        w = csv.writer(fh)
        w.writerow(["R1", "R2", "scheme"])
        for scheme in args.schemes.split(","):
            pts = region_boundary(
                cfg.spec, scheme.strip(), resolution=args.resolution,
                grid_step=grid_step, seed=args.seed,
            )
            for r1, r2 in pts:
                w.writerow([f"{r1:.6g}", f"{r2:.6g}", scheme.strip()])
    return 0


def cmd_expansion_check(args):
    """Compare expanded-sequence sub-slot throughput against the ideal
    slot-synchronous throughput of the original set."""
    cfg = _load(args)
    sset = cfg.sequence_set()
    expanded = expand_set(sset, args.m or cfg.m)
    g = args.g or cfg.g
    rng = np.random.default_rng(args.seed)
    L = g * expanded.period
    with _out(args) as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "link", "count", "slots"])
        for trial in range(args.samples):
            offs = [int(rng.integers(L)) for _ in range(len(expanded))]
            counts = simulate_subslot(expanded, offs, g)
            for (i, j), c in sorted(counts.items()):
                w.writerow([trial, f"{i}->{j}", c, expanded.period])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tandemnet",
        description="Deterministic multiple-access experiments on tandem collision networks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="JSON experiment config")
        sp.add_argument("--out", default="-", help="output path (default stdout)")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("construct", help="build and print the sequence set")
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify-si", help="check consecutive 3-wise shift-invariance")
    common(sp)
    sp.add_argument("--samples", type=int, default=10000,
                    help="offset samples when exhaustive checking is too large")
    sp.set_defaults(func=cmd_verify_si)

    sp = sub.add_parser("simulate", help="run an end-to-end coded session")
    common(sp)
    sp.add_argument("--periods", type=int, default=0, help="override config periods")
    sp.add_argument("--trace", default=None, help="also write the slot trace CSV here")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("identify-sweep",
                        help="validate sender identification over neighbor offsets")
    common(sp)
    sp.add_argument("--node", type=int, required=True)
    sp.add_argument("--samples", type=int, default=0,
                    help="random offset pairs instead of the full sweep")
    sp.set_defaults(func=cmd_identify_sweep)

    sp = sub.add_parser("discover-offset", help="run the marker-frame handshake")
    common(sp)
    sp.add_argument("--transmitter", type=int, required=True)
    sp.add_argument("--receiver", type=int, required=True)
    sp.add_argument("--extra-periods", type=int, default=8)
    sp.set_defaults(func=cmd_discover_offset)

    sp = sub.add_parser("regions", help="membership of the configured rate vector")
    common(sp)
    sp.set_defaults(func=cmd_regions)

    sp = sub.add_parser("symmetric-rates", help="max common rate per scheme (CSV)")
    common(sp)
    sp.add_argument("--grid-steps", type=int, default=60,
                    help="duty grid resolution (step 1/steps)")
    sp.add_argument("--include-outer", action="store_true")
    sp.set_defaults(func=cmd_symmetric_rates)

    sp = sub.add_parser("boundary", help="two-source region boundaries (CSV)")
    common(sp)
    sp.add_argument("--schemes", default="capacity,slotted,nc-slotted,pure")
    sp.add_argument("--resolution", type=int, default=25)
    sp.add_argument("--grid-steps", type=int, default=60)
    sp.set_defaults(func=cmd_boundary)

    sp = sub.add_parser("expansion-check",
                        help="sub-slot throughput of the expanded set (CSV)")
    common(sp)
    sp.add_argument("--m", type=int, default=0, help="override config expansion factor")
    sp.add_argument("--g", type=int, default=0, help="override config sub-slots per slot")
    sp.add_argument("--samples", type=int, default=20, help="random offset trials")
    sp.set_defaults(func=cmd_expansion_check)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
