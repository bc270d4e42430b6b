"""Command-line entry point.

Two subcommands: `analyze` runs the verification suite for one weight
vector and window and writes the JSON report (optionally an SVG scene),
`slice` sweeps generic slice levels and reports the pairwise equality
matrix of the slice types.

The window is always given as the lattice-side interval ``lo..hi``: a
lattice point participates in the window skeleton iff its mu-value lies
in it.  Exit codes: 0 all checks pass, 1 some check failed, 2 invalid
input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .checks import DEFAULT_CHECKS, run_checks, wide_mu_range, window_encoding
from .emit import render_svg, report_exit_code, write_report
from .lattice import WeightAction, Window, normalize_action
from .skeleton import jump_covectors, slice_encoding


@dataclass
class RunConfig:
    weights: tuple[int, ...]
    window_lo: int
    window_hi: int
    mu_box: int = 6
    hom_cutoff: int = 4
    degree_box: int = 8
    svg_path: str | None = None
    report_path: str | None = None
    checks: tuple[str, ...] = field(default_factory=lambda: DEFAULT_CHECKS)

    def validate(self) -> tuple[WeightAction, Window]:
        action = normalize_action(self.weights)
        window = Window(self.window_lo, self.window_hi)
        if self.mu_box < 1 or self.hom_cutoff < 1 or self.degree_box < 1:
            raise ValueError("box and cutoff parameters must be >= 1")
        unknown = [c for c in self.checks if c not in DEFAULT_CHECKS]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
        return action, window


def _parse_weights(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse weights {text!r}")


def _parse_window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"window must look like lo..hi, got {text!r}")
    return int(lo), int(hi)


def _parse_t_list(text: str) -> list[Fraction]:
    return [Fraction(part) for part in text.split(",")]


def cmd_analyze(config: RunConfig) -> int:
    try:
        action, window = config.validate()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    results = run_checks(action, window, mu_box=config.mu_box,
                         hom_cutoff=config.hom_cutoff,
                         degree_box=config.degree_box,
                         selected=tuple(config.checks))
    report = write_report(results, action, window)
    if config.report_path:
        with open(config.report_path, "w", encoding="utf-8") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    if config.svg_path:
        enc = window_encoding(action, window, config.mu_box)
        jumps = jump_covectors(action, window,
                               max(config.mu_box, abs(window.lo), abs(window.hi)))
        with open(config.svg_path, "w", encoding="utf-8") as fh:
            fh.write(render_svg(enc, jumps))
    return report_exit_code(results)


def cmd_slice(config: RunConfig, t_list: list[Fraction]) -> int:
    try:
        action, window = config.validate()
        if not t_list:
            raise ValueError("need at least one slice level")
        for t in t_list:
            if t.denominator == 1:
                raise ValueError(f"slice level {t} is an integer; "
                                 "only generic levels are allowed")
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    enc = window_encoding(action, window, config.mu_box)
    slices = [slice_encoding(enc, t) for t in t_list]
    matrix = [[s1.same_class(s2) for s2 in slices] for s1 in slices]
    doc = {
        "action": action.to_json_obj(),
        "window": window.to_json_obj(),
        "slices": [
            {"t": str(t), "ray_families": s.ray_family_count()}
            for t, s in zip(t_list, slices)
        ],
        "equal": matrix,
    }
    text = json.dumps(doc, indent=2) + "\n"
    if config.report_path:
        with open(config.report_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--weights", required=True,
                        help="comma-separated nonzero integer weights, e.g. 3,-1")
    parser.add_argument("--window", required=True,
                        help="lattice-side window interval lo..hi, e.g. 0..2")
    parser.add_argument("--mu-box", type=int, default=6,
                        help="level box radius for sweeps (default 6)")
    parser.add_argument("--hom-cutoff", type=int, default=4,
                        help="translation cutoff for equivariant homs (default 4)")
    parser.add_argument("--degree-box", type=int, default=8,
                        help="exponent box radius for graded counts (default 8)")
    parser.add_argument("--report", default=None, metavar="PATH",
                        help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="windowskel",
        description="exact checks for rank-1 toric GIT window skeletons")
    sub = parser.add_subparsers(dest="command", required=True)
    p_an = sub.add_parser("analyze", help="run the verification suite")
    _add_common(p_an)
    p_an.add_argument("--svg", default=None, metavar="PATH",
                      help="also render the skeleton scene to this SVG file")
    p_an.add_argument("--checks", default=None,
                      help="comma-separated subset of checks to run "
                           f"(default: {','.join(DEFAULT_CHECKS)})")
    p_sl = sub.add_parser("slice", help="compare slices at generic levels")
    _add_common(p_sl)
    p_sl.add_argument("--t-list", required=True,
                      help="comma-separated non-integer levels, e.g. -0.5,0.5,3.5")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        weights = _parse_weights(args.weights)
        lo, hi = _parse_window(args.window)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    config = RunConfig(
        weights=weights, window_lo=lo, window_hi=hi, mu_box=args.mu_box,
        hom_cutoff=args.hom_cutoff, degree_box=args.degree_box,
        report_path=args.report,
    )
    if args.command == "analyze":
        config.svg_path = args.svg
        if args.checks:
            config.checks = tuple(args.checks.split(","))
        return cmd_analyze(config)
    try:
        t_list = _parse_t_list(args.t_list)
    except (ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return cmd_slice(config, t_list)


if __name__ == "__main__":
    sys.exit(main())
