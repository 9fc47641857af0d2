"""
Командная строка polcomp.

Подкоманды: plan, gen-mdp, estimate, verify-tv, verify-renyi, geometry, compress.
Коды выхода: 0 - успех, 2 - аудит не пройден, 1 - ошибка использования.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from polcomp import __version__
from polcomp.common.config import config
from polcomp.common.models import RngSeed
from polcomp.common.utils import BaseService, setup_logging, log_service_event
from polcomp.common.utils.base_service import EXIT_AUDIT_FAILURE, EXIT_OK, EXIT_USAGE
from polcomp.common.utils.io import load_cmp, load_policy, save_cmp, write_csv, write_json
from polcomp.compress import (
    candidate_set,
    enumerate_deterministic,
    greedy_cover,
    random_candidates,
    verify_cover,
)
from polcomp.geometry import OracleBudget, default_budget
from polcomp.mdp_core import induced_chain, spectral_gap, uniform_policy
from polcomp.planner import budget_rows, budget_table
from .experiments import records_frame, run_concentration_experiment, run_estimate, run_geometry_audit
from .generator import generate_random_mdp
from .models import ExperimentConfig


class UsageParser(argparse.ArgumentParser):
    """argparse с кодом 1 для ошибок использования"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", type=Path, help="JSON file with the experiment configuration")
    parent.add_argument("--seed", type=int, help="master seed")
    parent.add_argument("--out-dir", type=Path, help="directory for CSV/JSON outputs")
    parent.add_argument("--replicates", type=int, help="number of replicates")
    parent.add_argument("--jobs", type=int, default=config.jobs, help="parallel workers (joblib)")
    parent.add_argument("--log-level", default=None, help="loguru level")
    return parent


def _out_dir(args: argparse.Namespace) -> Path:
    return args.out_dir or Path(config.output_dir)


def _load_config(args: argparse.Namespace, metric: Optional[str] = None) -> ExperimentConfig:
    """Файл --config с переопределением флагами"""
    if args.config is None:
        raise ValueError("--config is required for this command")
    data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if metric is not None:
        data["metric"] = metric
    if args.seed is not None:
        data["master_seed"] = args.seed
    if args.replicates is not None:
        data["replicates"] = args.replicates
    if args.out_dir is not None:
        data["output_dir"] = str(args.out_dir)
    return ExperimentConfig.model_validate(data)


class PlanCommand(BaseService):
    def __init__(self):
        super().__init__("plan", description="sample-size table for every formula")

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--mdp", type=Path, help="MDP file; gamma0 and sizes are taken from it")
        parser.add_argument("--gamma0", type=float, help="spectral gap of the induced chain")
        parser.add_argument("--gamma", type=float, default=config.harness_config["gamma"])
        parser.add_argument("--states", type=int, default=config.harness_config["num_states"])
        parser.add_argument("--actions", type=int, default=config.harness_config["num_actions"])
        parser.add_argument("--sigma-tv", type=float, default=0.1)
        parser.add_argument("--sigma2", type=float, default=2.0)
        parser.add_argument("--delta", type=float, default=0.05)
        parser.add_argument("--k", type=int, default=1, help="number of representative policies")

    def run(self, args: argparse.Namespace) -> int:
        gamma, states, actions, gamma0 = args.gamma, args.states, args.actions, args.gamma0
        if args.mdp is not None:
            c = load_cmp(args.mdp)
            gamma, states, actions = c.gamma, c.num_states, c.num_actions
            if gamma0 is None:
                gamma0 = spectral_gap(induced_chain(c, uniform_policy(c))).gamma0
        if gamma0 is None:
            raise ValueError("either --gamma0 or --mdp must be given")

        table = budget_table(gamma0, gamma, args.sigma_tv, args.sigma2, args.delta, states, actions, args.k)
        frame = pd.DataFrame(budget_rows(table))
        print(frame[["formula_id", "n_real", "n_int", "flags"]].to_string(index=False))

        out = _out_dir(args)
        write_csv(frame, out / "plan.csv")
        write_json({"budgets": [budget.model_dump(mode="json") for budget in table]}, out / "plan.json")
        self.logger.info(f"Planned {len(table)} budgets into {out}")
        return EXIT_OK


class GenMdpCommand(BaseService):
    def __init__(self):
        super().__init__("gen-mdp", description="random Garnet or reversible MDP")

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--states", type=int, default=config.harness_config["num_states"])
        parser.add_argument("--actions", type=int, default=config.harness_config["num_actions"])
        parser.add_argument("--branching", type=int, default=config.harness_config["branching"])
        parser.add_argument("--gamma", type=float, default=config.harness_config["gamma"])
        parser.add_argument("--reversible", action="store_true")
        parser.add_argument("--output", type=Path, help="output file (default: <out-dir>/mdp.json)")

    def run(self, args: argparse.Namespace) -> int:
        seed = config.default_seed if args.seed is None else args.seed
        c = generate_random_mdp(args.states, args.actions, args.branching, seed, args.reversible, args.gamma)
        target = save_cmp(c, args.output or _out_dir(args) / "mdp.json")
        self.logger.info(f"MDP written to {target}")
        return EXIT_OK


class EstimateCommand(BaseService):
    def __init__(self):
        super().__init__("estimate", description="one estimate of the occupancy and its divergences")

    def run(self, args: argparse.Namespace) -> int:
        cfg = _load_config(args)
        report = run_estimate(cfg)
        write_json(report, Path(cfg.output_dir) / "estimate.json")
        print(json.dumps({k: v for k, v in report.model_dump(mode="json").items() if k not in ("estimate", "exact")},
                         indent=2, sort_keys=True))
        return EXIT_OK


class VerifyCommand(BaseService):
    """Аудит концентрации для одной метрики"""

    def __init__(self, metric: str):
        super().__init__(f"verify-{'tv' if metric == 'tv' else 'renyi'}", description=f"concentration audit ({metric})")
        self.metric = metric

    def run(self, args: argparse.Namespace) -> int:
        cfg = _load_config(args, metric=self.metric)
        report = run_concentration_experiment(cfg, jobs=args.jobs)

        out = Path(cfg.output_dir)
        write_csv(records_frame(report.records), out / f"{cfg.name}_records.csv")
        summary = self.create_summary(
            "passed" if report.passed else "failed",
            additional_stats={"violation_rate": report.violation_rate},
            flags=report.flags,
        )
        write_json(
            {"report": report.model_dump(mode="json", exclude={"records"}), "summary": summary.model_dump(mode="json")},
            out / f"{cfg.name}_summary.json",
        )
        if not report.passed:
            log_service_event(
                self.service_name, "audit_failed",
                f"violation rate {report.violation_rate:.4f} exceeds delta {cfg.delta}", level="WARNING"
            )
        return EXIT_OK if report.passed else EXIT_AUDIT_FAILURE


class GeometryCommand(BaseService):
    def __init__(self):
        super().__init__("geometry", description="closed-form and oracle certificates on the simplex")

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--n", type=int, nargs="*", default=[3, 4, 6])
        parser.add_argument("--sigma2", type=float, nargs="*", default=[1.5, 2.0])
        parser.add_argument("--restarts", type=int)
        parser.add_argument("--iterations", type=int)

    def run(self, args: argparse.Namespace) -> int:
        budget = default_budget()
        overrides: Dict[str, int] = {
            name: value for name, value in (("restarts", args.restarts), ("iterations", args.iterations))
            if value is not None
        }
        budget = OracleBudget(**{**budget.model_dump(), **overrides})
        seed = RngSeed(seed=config.default_seed if args.seed is None else args.seed)

        out = _out_dir(args)
        frame, certificates = run_geometry_audit(args.n, args.sigma2, seed, out / "geometry.csv", budget, args.jobs)
        write_json({"certificates": [cert.model_dump(mode="json") for cert in certificates]}, out / "certificates.json")

        failed = int(frame["failed"].sum()) if not frame.empty else 0
        return EXIT_OK if failed == 0 else EXIT_AUDIT_FAILURE


class CompressCommand(BaseService):
    def __init__(self):
        super().__init__("compress", description="greedy cover of a candidate policy set")

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--mdp", type=Path, required=True)
        parser.add_argument("--candidates", default="enumerate-deterministic",
                            help="'enumerate-deterministic' or a number of random policies")
        parser.add_argument("--metric", choices=["tv", "renyi2"], default="tv")
        parser.add_argument("--sigma", type=float, required=True)
        parser.add_argument("--policy", type=Path, action="append", default=[],
                            help="extra candidate policy file (repeatable)")

    def run(self, args: argparse.Namespace) -> int:
        c = load_cmp(args.mdp)
        seed = RngSeed(seed=config.default_seed if args.seed is None else args.seed)
        if args.candidates == "enumerate-deterministic":
            cs = enumerate_deterministic(c)
        else:
            cs = random_candidates(c, int(args.candidates), seed)
        if args.policy:
            cs = candidate_set(c, list(cs.policies) + [load_policy(path) for path in args.policy])

        result = greedy_cover(cs, args.sigma, args.metric, jobs=args.jobs)
        check = verify_cover(cs, result)
        write_json(
            {"result": result.model_dump(mode="json"), "verification": check.model_dump(mode="json")},
            _out_dir(args) / "compression.json",
        )
        print(f"K = {result.k}, radius = {result.achieved_radius:.6g} ({args.metric}, sigma = {args.sigma})")
        return EXIT_OK if check.ok else EXIT_AUDIT_FAILURE


def build_commands() -> List[BaseService]:
    return [
        PlanCommand(),
        GenMdpCommand(),
        EstimateCommand(),
        VerifyCommand("tv"),
        VerifyCommand("renyi2"),
        GeometryCommand(),
        CompressCommand(),
    ]


def build_parser(commands: List[BaseService]) -> UsageParser:
    parser = UsageParser(prog="polcomp", description="Sample-size statistics for policy space compression")
    parser.add_argument("--version", action="version", version=f"polcomp {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=UsageParser)
    parent = _common_flags()
    for command in commands:
        sub = subparsers.add_parser(command.service_name, parents=[parent], help=command.description)
        command.add_arguments(sub)
        sub.set_defaults(handler=command)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    commands = build_commands()
    args = build_parser(commands).parse_args(argv)
    setup_logging(args.command, args.log_level)
    return args.handler.execute(args)


if __name__ == "__main__":
    sys.exit(main())
