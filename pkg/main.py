# divkit - f-divergences, Csiszar index and copulas on finite supports
# Main entry point

import argparse
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from config.settings import DEFAULT_TRIALS, QUADRATURE_ORDER, default_seed
from core.errors import InputError, UsageError
from utils.error_translator import EXIT_OK, EXIT_VIOLATION, format_error, translate_error
from utils.file_handler import FileHandler, dumps_report
from utils.logger import get_logger, new_session

COMMANDS = ["div", "csiszar", "copula", "fgm", "renyi", "check", "examples"]
SEEDED_COMMANDS = ("check", "copula")
EXAMPLE_FILE = "bernoulli_example.json"


@dataclass
class RunConfig:
    command: str
    generators: List[str] = field(default_factory=list)
    p: Optional[str] = None
    q: Optional[str] = None
    joint: Optional[str] = None
    seed: int = 0
    tol: Optional[float] = None
    output_format: str = "json"
    pretty: bool = False
    # fgm
    theta: Optional[float] = None
    fit: Optional[List[float]] = None
    order: int = QUADRATURE_ORDER
    # renyi
    alpha: Optional[float] = None
    # copula
    grid_csv: Optional[str] = None
    sample: Optional[int] = None
    scheme: str = "shared"
    sample_csv: Optional[str] = None
    # check
    suites: List[str] = field(default_factory=list)
    trials: int = DEFAULT_TRIALS
    workers: Optional[int] = None
    replay: Optional[str] = None
    list_suites: bool = False
    # examples
    out: str = EXAMPLE_FILE


class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indented JSON")
    common.add_argument("--format", dest="output_format", choices=["json", "csv"], default="json")

    parser = _Parser(
        prog="divkit",
        description="f-divergences, Csiszar index and copulas on finite supports",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Usage:
  python main.py div --p a.json --q b.json --f tv
  python main.py csiszar --joint j.json --f pearson --f kl
  python main.py check --suite dpi --trials 1000 --seed 7
  python main.py examples --out bernoulli_example.json
        """,
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("div", parents=[common], help="D_f(P || Q)")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--f", action="append", required=True, dest="generators")

    p = sub.add_parser("csiszar", parents=[common],
                       help="S_f(X, Y) = D_f(P_X x P_Y || P_(X,Y)), product first, joint second")
    p.add_argument("--joint", required=True)
    p.add_argument("--f", action="append", required=True, dest="generators")

    p = sub.add_parser("copula", parents=[common], help="checkerboard copula of a joint")
    p.add_argument("--joint", required=True)
    p.add_argument("--f", action="append", required=True, dest="generators")
    p.add_argument("--grid-csv", dest="grid_csv")
    p.add_argument("--sample", type=int)
    p.add_argument("--scheme", choices=["shared", "independent", "antithetic"], default="shared")
    p.add_argument("--sample-csv", dest="sample_csv")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("fgm", parents=[common], help="D_f(Pi || C_theta) for the FGM copula")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--theta", type=float)
    group.add_argument("--fit", type=float, nargs=3, metavar=("P", "Q", "R"),
                       help="fit theta to a Bernoulli pair")
    p.add_argument("--f", action="append", required=True, dest="generators")
    p.add_argument("--order", type=int, default=QUADRATURE_ORDER)

    p = sub.add_parser("renyi", parents=[common], help="Renyi divergence R_alpha(P || Q)")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("check", parents=[common], help="run property suites")
    p.add_argument("--suite", action="append", dest="suites", default=[])
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--replay")
    p.add_argument("--list", action="store_true", dest="list_suites")

    p = sub.add_parser("examples", parents=[common], help="write the Bernoulli example joint")
    p.add_argument("--out", default=EXAMPLE_FILE)
    return parser


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    args = _build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    cfg = RunConfig(**values)
    if cfg.command in SEEDED_COMMANDS and getattr(args, "seed", None) is None:
        try:
            cfg.seed = default_seed()
        except ValueError:
            raise UsageError(f"DIVKIT_SEED must be an integer, got {os.getenv('DIVKIT_SEED')!r}")

    for path in (cfg.p, cfg.q, cfg.joint, cfg.replay):
        if path is not None and not os.path.exists(path):
            raise InputError(f"file not found: {path}")
    if cfg.sample is not None and cfg.sample_csv is None:
        raise UsageError("--sample needs --sample-csv for the samples")
    if cfg.command == "check" and cfg.trials < 1:
        raise UsageError("--trials must be >= 1")
    return cfg


# ===================
# Commands
# ===================

def _table(rows: List[Dict[str, Any]], extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """One generator gives a flat object; several give {"results": [...]}"""
    extra = extra or {}
    if len(rows) == 1:
        return {**rows[0], **extra}
    return {**extra, "results": rows}


def _cmd_div(cfg: RunConfig):
    from core.divergence import f_divergence, symmetric_decomposition
    from core.generators import from_cli_name

    P = FileHandler.load_distribution(cfg.p)
    Q = FileHandler.load_distribution(cfg.q)
    rows = []
    for name in cfg.generators:
        g = from_cli_name(name)
        d = f_divergence(P, Q, g)
        lower, upper = symmetric_decomposition(P, Q, g)
        rows.append({"f": g.label, "value": d.value, "singular_mass": d.singular_mass,
                     "absolutely_continuous_part": d.absolutely_continuous_part,
                     "lower": lower, "upper": upper})
    return rows, _table(rows)


def _cmd_csiszar(cfg: RunConfig):
    from core.csiszar import csiszar_index, mutual_information
    from core.generators import from_cli_name

    J = FileHandler.load_joint(cfg.joint)
    rows = []
    for name in cfg.generators:
        g = from_cli_name(name)
        r = csiszar_index(J, g)
        rows.append({"f": g.label, "value": r.value, "via_conditionals": r.via_conditionals})
    return rows, _table(rows, {"mutual_information": mutual_information(J)})


def _cmd_copula(cfg: RunConfig):
    from core.copulas import RandomizationScheme, checkerboard, grid_divergence
    from core.generators import from_cli_name
    from core.sampler import interpolating_sample

    J = FileHandler.load_joint(cfg.joint)
    C = checkerboard(J)
    rows = [{"f": from_cli_name(n).label, "value": grid_divergence(C, from_cli_name(n))}
            for n in cfg.generators]
    extra: Dict[str, Any] = {"cells": list(C.shape)}
    if cfg.grid_csv:
        FileHandler.write_csv(C.to_frame(), cfg.grid_csv)
        extra["grid_csv"] = cfg.grid_csv
    if cfg.sample is not None:
        samples = interpolating_sample(J, RandomizationScheme(cfg.scheme), cfg.sample, cfg.seed,
                                       workers=cfg.workers)
        FileHandler.write_csv(FileHandler.samples_frame(samples), cfg.sample_csv)
        extra.update({"samples": cfg.sample, "scheme": cfg.scheme, "seed": cfg.seed,
                      "sample_csv": cfg.sample_csv})
    return rows, _table(rows, extra)


def _cmd_fgm(cfg: RunConfig):
    from core.copulas import FgmCopula, fgm_divergence_quadrature, fgm_fit_bernoulli
    from core.generators import from_cli_name
    from core.special import fgm_pearson_closed_form

    C = fgm_fit_bernoulli(*cfg.fit) if cfg.fit else FgmCopula(cfg.theta)
    rows = []
    for name in cfg.generators:
        g = from_cli_name(name)
        r = fgm_divergence_quadrature(C, g, cfg.order)
        row = {"f": g.label, "value": r.value, "coarse_value": r.coarse_value,
               "difference": r.difference, "converged": r.converged}
        if g.name == "P":
            row["closed_form"] = fgm_pearson_closed_form(C.theta)
        rows.append(row)
    return rows, _table(rows, {"theta": C.theta, "order": cfg.order})


def _cmd_renyi(cfg: RunConfig):
    from core.divergence import renyi

    P = FileHandler.load_distribution(cfg.p)
    Q = FileHandler.load_distribution(cfg.q)
    row = {"alpha": cfg.alpha, "value": renyi(P, Q, cfg.alpha)}
    return [row], row


def _cmd_check(cfg: RunConfig):
    from checks.registry import get_registry
    from checks.runner import SuiteRunner, replay

    registry = get_registry()
    if cfg.list_suites:
        listing = registry.describe()
        return [{"suite": k, "description": v} for k, v in listing.items()], {"suites": listing}

    if cfg.replay:
        data = FileHandler.read_json(cfg.replay)
        entries = data["suites"] if "suites" in data else [data]
        failing = [e for e in entries if not e.get("passed", False)]
        if not failing:
            raise InputError(f"{cfg.replay} contains no failing case to replay")
        reports = [replay(e) for e in failing]
    else:
        names = cfg.suites or registry.list_suites()
        suites = [registry.get(n) for n in names]
        runner = SuiteRunner(workers=cfg.workers) if cfg.workers else SuiteRunner()
        reports = [runner.run(s, cfg.trials, cfg.seed, cfg.tol) for s in suites]

    rows = [r.to_dict() for r in reports]
    summary = rows[0] if len(rows) == 1 else {"passed": all(r.passed for r in reports), "suites": rows}
    return rows, summary


def _cmd_examples(cfg: RunConfig):
    from core.csiszar import bernoulli_joint
    from core.measures import joint_to_json

    J = bernoulli_joint(0.5, 0.5, 5.0 / 16.0)
    FileHandler.write_json(joint_to_json(J), cfg.out)
    row = {"written": cfg.out, "p": 0.5, "q": 0.5, "r": 5.0 / 16.0}
    return [row], row


_COMMANDS = {
    "div": _cmd_div,
    "csiszar": _cmd_csiszar,
    "copula": _cmd_copula,
    "fgm": _cmd_fgm,
    "renyi": _cmd_renyi,
    "check": _cmd_check,
    "examples": _cmd_examples,
}


def _violation(report: Dict[str, Any]) -> bool:
    return "passed" in report and report["passed"] is False


def run(cfg: RunConfig, out=None) -> int:
    """Run one command, print its report to out (stdout) and return the exit code"""
    out = out or sys.stdout
    rows, report = _COMMANDS[cfg.command](cfg)
    logger = get_logger()
    logger.log_result(cfg.command, report)

    if cfg.output_format == "csv" and cfg.command != "check":
        text = FileHandler.write_csv(pd.DataFrame(rows).map(_csv_cell))
        out.write(text)
    else:
        out.write(dumps_report(report, cfg.pretty) + "\n")
    return EXIT_VIOLATION if cfg.command == "check" and _violation(report) else EXIT_OK


def _csv_cell(x):
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    return x


def main(argv: Optional[List[str]] = None) -> int:
    start = time.time()
    logger = new_session()
    code = EXIT_OK
    error = None
    try:
        cfg = parse_args(argv)
        logger.set_command(cfg.command)
        code = run(cfg)
    except SystemExit as e:
        # --help
        code = e.code if isinstance(e.code, int) else EXIT_OK
    except Exception as e:
        info = translate_error(e)
        if info["exit_code"] is None:
            raise
        print(format_error(e), file=sys.stderr)
        code = info["exit_code"]
        error = str(e)
    logger.log_final(code, time.time() - start, error)
    return code


if __name__ == "__main__":
    sys.exit(main())
