"""Command line front end: ``pseudospectrum``, ``demo`` and ``check``.

Exit codes: 0 success, 2 configuration or input error, 3 computation error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .dynamics import parse_map
from .hyperspace import DEFAULT_HALF_WIDTH
from .koopman import Dictionary, min_level, run_tower

log = logging.getLogger("scitower")

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE = 0, 2, 3
FORMATS = ("csv", "json", "svg")


class ConfigError(ValueError):
    def __init__(self, fieldname: str, message: str):
        self.field = fieldname
        super().__init__(f"{fieldname}: {message}")


@dataclass
class RunConfig:
    command: str = "pseudospectrum"
    map: str = "rotation:1/4"
    eps: float = 0.3
    schedule: list = field(default_factory=lambda: [[4, None], [8, None], [16, None]])
    half_width: float = DEFAULT_HALF_WIDTH
    test_ratio: float = 2.0
    out: str = "scitower-out"
    seed: int = 0
    format: list = field(default_factory=lambda: ["csv", "json"])

    def validate(self) -> "RunConfig":
        try:
            self.eps = float(self.eps)
        except (TypeError, ValueError):
            raise ConfigError("eps", f"not a number: {self.eps!r}") from None
        if not self.eps > 0:
            raise ConfigError("eps", f"must be positive, got {self.eps}")
        if not float(self.half_width) > 0:
            raise ConfigError("half_width", f"must be positive, got {self.half_width}")
        self.half_width = float(self.half_width)
        if not float(self.test_ratio) >= 1:
            raise ConfigError("test_ratio", f"must be at least 1, got {self.test_ratio}")
        self.test_ratio = float(self.test_ratio)
        try:
            parse_map(self.map)
        except (ValueError, OSError) as exc:
            raise ConfigError("map", str(exc)) from None
        if isinstance(self.format, str):
            self.format = [f.strip() for f in self.format.split(",") if f.strip()]
        bad = [f for f in self.format if f not in FORMATS]
        if bad or not self.format:
            raise ConfigError("format", f"choose from {', '.join(FORMATS)}, got {self.format}")
        if isinstance(self.schedule, str):
            self.schedule = parse_schedule(self.schedule)
        resolved = []
        for item in self.schedule:
            n2, n1 = (list(item) + [None])[:2]
            if not isinstance(n2, int) or n2 < 1:
                raise ConfigError("schedule", f"grid index must be a positive integer, got {n2!r}")
            d = Dictionary.for_index(n2, self.test_ratio)
            if n1 is None:
                n1 = min_level(d)
            if not isinstance(n1, int) or not d.admits(n1):
                raise ConfigError("schedule", f"n1={n1} is not sub-Nyquist for n2={n2} "
                                              f"(need n1 >= {min_level(d)})")
            resolved.append([n2, n1])
        if not resolved:
            raise ConfigError("schedule", "must not be empty")
        for a, b in zip(resolved, resolved[1:]):
            if tuple(b) <= tuple(a):
                raise ConfigError("schedule", f"must increase, got {a} then {b}")
        self.schedule = resolved
        self.seed = int(self.seed)
        return self


def parse_schedule(text: str) -> list:
    """``4:5,8:6`` or ``4,8,16`` (quadrature level chosen automatically)."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        n2, _, n1 = tok.partition(":")
        try:
            out.append([int(n2), int(n1) if n1 and n1 != "auto" else None])
        except ValueError:
            raise ConfigError("schedule", f"cannot parse {tok!r}") from None
    return out


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


class _Artifacts:
    """Tracks written files so a failed run can remove them."""

    def __init__(self, root: Path):
        self.root = root
        self.created_root = not root.exists()
        self.paths: list[Path] = []

    def write(self, name: str, text: str) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.root / name
        p.write_text(text)
        self.paths.append(p)
        return p

    def path(self, name: str) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.root / name
        self.paths.append(p)
        return p

    def rollback(self) -> None:
        for p in self.paths:
            if p.exists():
                p.unlink()
        if self.created_root and self.root.exists() and not any(self.root.iterdir()):
            self.root.rmdir()


def cmd_pseudospectrum(cfg: RunConfig) -> int:
    from . import plotting

    arts = _Artifacts(Path(cfg.out))
    try:
        F = parse_map(cfg.map)
        run = run_tower(F, lambda n2: Dictionary.for_index(n2, cfg.test_ratio), cfg.eps,
                        [tuple(s) for s in cfg.schedule], half_width=cfg.half_width)
        arts.write("config.json", _dump(asdict(cfg)))
        if "csv" in cfg.format:
            for idx, ((n2, n1), stage) in enumerate(zip(run.schedule, run.stages)):
                name = f"stage_{idx:02d}_n2-{n2}_n1-{n1}.csv"
                if len(stage):
                    arts.write(name, stage.to_csv())
                else:
                    arts.write(name, "re,im\n")
        summary = run.summary()
        summary["half_width"] = cfg.half_width
        summary["test_ratio"] = cfg.test_ratio
        if "json" in cfg.format:
            arts.write("diagnostics.json", _dump(summary))
        if "svg" in cfg.format:
            n2, n1 = run.schedule[-1]
            plotting.plot_stage(run.final.points, cfg.half_width, arts.path("final_stage.svg"),
                                title=f"{run.map}, eps={cfg.eps}, (n2, n1)=({n2}, {n1})")
            plotting.plot_convergence(run.distances, arts.path("convergence.svg"))
    except Exception as exc:  # noqa: BLE001 - mapped to an exit code
        arts.rollback()
        print(f"error: computation failed: {exc}", file=sys.stderr)
        log.debug("pseudospectrum failure", exc_info=True)
        return EXIT_COMPUTE
    sys.stdout.write(_dump(summary))
    return EXIT_OK


def cmd_demo(name: str, cfg: RunConfig, args) -> int:
    from . import demos, plotting
    from .baire import trace_csv

    out = Path(cfg.out) if args.out else None
    arts = _Artifacts(out) if out else None
    try:
        if arts:
            arts.write("config.json", _dump({**asdict(cfg), "demo": name,
                                             "family": args.family, "coord": args.coord,
                                             "budget": args.budget, "value": args.value}))
        if name == "sgn-gap":
            summary = demos.sgn_gap_summary()
            print("k,witness,exact,fram_outcomes")
            for r in summary:
                print(f"{r['k']},{r['witness']},{r['exact']},{r['fram_outcomes']}")
            if arts:
                rows = demos.sgn_gap_rows()
                lines = ["k,input,in_band,exact,fram_outcomes"]
                lines += [f"{r['k']},{r['input']},{int(r['in_band'])},{r['exact']},"
                          f"{r['fram_outcomes']}" for r in rows]
                arts.write("sgn_gap.csv", "\n".join(lines) + "\n")
                arts.write("sgn_gap_witnesses.json", _dump(summary))
                plotting.plot_sgn_gap(rows, arts.path("sgn_gap.svg"))
        elif name == "weak-hansen":
            rows = demos.weak_hansen_report(seed=cfg.seed)
            print("n,candidate_sets,refuted,deep_levels,deep_levels_passing")
            for r in rows:
                print(f"{r['n']},{r['candidate_sets']},{r['refuted']},{r['deep_levels']},"
                      f"{r['deep_levels_passing']}")
            if arts:
                arts.write("weak_hansen.json", _dump(rows))
        elif name == "lim-stages":
            trace, verdict = demos.lim_stage_trace(args.family, args.coord, args.budget,
                                                   args.value)
            text = trace_csv(trace)
            sys.stdout.write(text)
            print(f"# verdict: {verdict}", file=sys.stderr)
            if arts:
                arts.write("lim_stages.csv", text)
                plotting.plot_trace(trace, arts.path("lim_stages.svg"),
                                    title=f"{args.family}, coordinate {args.coord}")
        else:
            print(f"error: unknown demo {name!r}", file=sys.stderr)
            return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        if arts:
            arts.rollback()
        print(f"error: demo failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


def check_document(doc: dict, queries: Optional[list] = None) -> dict:
    from .errors import FactorizationImpossible
    from .framework import (FiniteProblem, check_consistency, check_general_algorithm,
                            factorize, finite_query_factorization)

    P = FiniteProblem.from_dict(doc)
    report = {"inputs": len(P), "evaluations": len(P.lam),
              "consistency": check_consistency(P).to_dict()}
    try:
        report["factorize"] = {"status": "ok", **factorize(P).to_dict()}
    except FactorizationImpossible as exc:
        report["factorize"] = {"status": "impossible", "witness": list(exc.witness)}
    if queries is not None:
        try:
            alg = finite_query_factorization(P, queries)
            verdict = check_general_algorithm(alg.gamma, alg.policy, P)
            report["finite_query_factorization"] = {
                "status": "ok", "queries": list(alg.queries),
                "general_algorithm": verdict.to_dict(),
                "table": [{"row": [v.real if v.imag == 0 else [v.real, v.imag] for v in r],
                           "value": val} for r, val in alg.table.items()],
            }
        except FactorizationImpossible as exc:
            report["finite_query_factorization"] = {"status": "not-factorable",
                                                    "witness": list(exc.witness)}
    return report


def cmd_check(path: str, queries: Optional[str], out: Optional[str]) -> int:
    try:
        doc = json.loads(Path(path).read_text())
        q = None
        if queries is not None:
            q = [int(t) for t in queries.split(",") if t.strip()]
        report = check_document(doc, q)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        print(f"error: malformed problem file {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = _dump(report)
    sys.stdout.write(text)
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        resolved = {"command": "check", "problem": str(path), "queries": q}
        (Path(out) / "config.json").write_text(_dump(resolved))
        (Path(out) / "verdicts.json").write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with run configuration")
    common.add_argument("--map", help="rotation:<a>, doubling, identity, constant:<c>, "
                                      "piecewise:<csv>")
    common.add_argument("--eps", help="pseudospectrum radius")
    common.add_argument("--schedule", help="n2:n1,... (n1 may be omitted or 'auto')")
    common.add_argument("--half-width", dest="half_width", help="grid half-width R")
    common.add_argument("--test-ratio", dest="test_ratio", help="test range I/J")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", help="random seed")
    common.add_argument("--format", help="comma list of csv,json,svg")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="scitower", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("pseudospectrum", parents=[common],
                   help="run a Koopman pseudospectrum tower")
    d = sub.add_parser("demo", parents=[common], help="run a named scenario")
    d.add_argument("name", choices=["sgn-gap", "weak-hansen", "lim-stages"])
    d.add_argument("--family", default="step", help="lim-stages family")
    d.add_argument("--coord", type=int, default=5)
    d.add_argument("--budget", type=int, default=40)
    d.add_argument("--value", default="1/1024", help="rational for the sign family")
    c = sub.add_parser("check", parents=[common], help="check a finite problem JSON file")
    c.add_argument("problem")
    c.add_argument("--queries", help="comma list of evaluation indices to factor through")
    return p


def resolve_config(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError("config", str(exc)) from None
        known = set(RunConfig.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise ConfigError("config", f"unknown keys {sorted(unknown)}")
        for k, v in doc.items():
            setattr(cfg, k, v)
        cfg.command = args.command
    for key in ("map", "eps", "schedule", "half_width", "test_ratio", "out", "seed", "format"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    try:
        cfg.seed = int(cfg.seed)
    except (TypeError, ValueError):
        raise ConfigError("seed", f"not an integer: {cfg.seed!r}") from None
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "pseudospectrum":
            cfg.validate()
    except ConfigError as exc:
        print(f"error: invalid configuration field {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "pseudospectrum":
        return cmd_pseudospectrum(cfg)
    if args.command == "demo":
        return cmd_demo(args.name, cfg, args)
    return cmd_check(args.problem, args.queries, args.out)


if __name__ == "__main__":
    sys.exit(main())
