"""Command-line front end.

Exit codes: 0 solved and verified, 2 not solved, 3 verification failed,
64 usage error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .catalog import STATUSES, CatalogError, load_catalog, resolve_problem
from .geom import DEFAULT_TOL, Tolerance
from .kb import KnowledgeBase, ParseError, ValidationError, default_kb, load_kb
from .kb.check import numeric_check_kb
from .solver import DEFAULT_MAX_SECS, DEFAULT_MAX_STEPS, Budget, Failure, ProblemSpec, clean, solve, solve_corpus
from .verifier import verify

EXIT_OK = 0
EXIT_UNSOLVED = 2
EXIT_UNVERIFIED = 3
EXIT_USAGE = 64

FORMATS = ("text", "gclc", "svg", "all")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    kb_path: Optional[str] = None  # the shipped knowledge base
    rule_order: list[str] = field(default_factory=list)  # empty keeps the file's order
    seed: int = 0  # base seed for verification scenes and rendering
    instances: int = 100
    tol: float = DEFAULT_TOL.rel
    budget_steps: int = DEFAULT_MAX_STEPS
    budget_secs: float = DEFAULT_MAX_SECS
    out: Optional[str] = None  # no files written when unset
    jobs: int = 1
    format: str = "all"

    def echo(self) -> str:
        return "".join(f"{k}={_show(v)}\n" for k, v in asdict(self).items())

    def tolerance(self) -> Tolerance:
        return Tolerance(rel=self.tol)

    def budget(self) -> Budget:
        return Budget(self.budget_steps, self.budget_secs)

    def load_kb(self) -> KnowledgeBase:
        kb = default_kb() if self.kb_path is None else load_kb(Path(self.kb_path).read_text(encoding="utf-8"))
        try:
            return kb.with_rules(self.rule_order) if self.rule_order else kb
        except KeyError as e:
            raise UsageError(e.args[0]) from None


def _show(v) -> str:
    if isinstance(v, list):
        return ",".join(v)
    return "" if v is None else str(v)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--kb", dest="kb_path", metavar="PATH", help="knowledge base file")
    common.add_argument("--rule-order", default="", metavar="IDS", help="comma-separated rule ids tried first")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--instances", type=int, help="verification scenes per plan (100), or triangles for check-kb (1000)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL.rel, help="relative tolerance")
    common.add_argument("--budget-steps", type=int, default=DEFAULT_MAX_STEPS)
    common.add_argument("--budget-secs", type=float, default=DEFAULT_MAX_SECS)
    common.add_argument("--out", metavar="DIR", help="directory for artifacts")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch")
    common.add_argument("--format", choices=FORMATS, default="all")

    p = _Parser(prog="wernick", description="Triangle constructions from located points.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    ls = sub.add_parser("list", parents=[common], help="show catalog entries")
    ls.add_argument("problems", nargs="*", help="indices or triples")
    ls.add_argument("--status", choices=STATUSES)
    for name, text in (("solve", "solve, verify and write artifacts"), ("verify", "solve and print the verification report"),
                       ("render", "print a rendering of the clean plan")):
        c = sub.add_parser(name, parents=[common], help=text)
        c.add_argument("problem", help='index such as 7 or triple such as "A,B,H"')
    b = sub.add_parser("batch", parents=[common], help="solve and verify many problems")
    b.add_argument("--only", choices=STATUSES, help="restrict to one status")
    sub.add_parser("check-kb", parents=[common], help="check every KB fact on random triangles")
    return p


def config_from(args) -> RunConfig:
    cfg = RunConfig(
        kb_path=args.kb_path,
        rule_order=[r for r in args.rule_order.split(",") if r],
        seed=args.seed,
        instances=100 if args.instances is None else args.instances,
        tol=args.tol,
        budget_steps=args.budget_steps,
        budget_secs=args.budget_secs,
        out=args.out,
        jobs=args.jobs,
        format=args.format,
    )
    if cfg.instances < 0 or cfg.jobs < 1 or cfg.budget_steps < 0 or cfg.budget_secs <= 0:
        raise UsageError("counts must be non-negative, jobs and budget seconds positive")
    try:
        cfg.tolerance()
    except ValueError as e:
        raise UsageError(str(e)) from None
    return cfg


# -- commands ----------------------------------------------------------------------

def _write(cfg: RunConfig, name: str, text: str) -> None:
    if cfg.out:
        d = Path(cfg.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text, encoding="utf-8")


def cmd_list(args, cfg: RunConfig, out) -> int:
    entries = load_catalog()
    if args.problems:
        picked = []
        for ref in args.problems:
            p = resolve_problem(ref)
            picked += [e for e in entries if e.index == p.id]
        entries = picked
    if args.status:
        entries = [e for e in entries if e.status == args.status]
    for e in entries:
        out.write(e.pretty() + "\n")
    return EXIT_OK


def _solve(problem: ProblemSpec, cfg: RunConfig, kb: KnowledgeBase, out):
    res = solve(kb, problem, cfg.budget())
    if isinstance(res, Failure):
        out.write(f"problem {problem.label}: not solved\n{res.text()}")
        return None
    return clean(res)


def _renderings(plan, cfg: RunConfig, kb: KnowledgeBase) -> dict[str, str]:
    from .emit import to_gclc, to_svg, to_text
    from .verifier import sample_scene

    scene = sample_scene(plan.problem.given, cfg.seed)
    tol = cfg.tolerance()
    out = {}
    if cfg.format in ("text", "all"):
        out["steps.txt"] = to_text(plan, kb).text()
    if cfg.format in ("gclc", "all"):
        out["construction.gcl"] = to_gclc(plan, scene, tol).text()
    if cfg.format in ("svg", "all"):
        out["figure.svg"] = to_svg(plan, scene, tol=tol)
    return out


def cmd_solve(args, cfg: RunConfig, out) -> int:
    from .emit import NoCompleteTrace

    problem = resolve_problem(args.problem)
    kb = cfg.load_kb()
    plan = _solve(problem, cfg, kb, out)
    _write(cfg, "config.txt", cfg.echo())
    if plan is None:
        return EXIT_UNSOLVED
    report = verify(plan, problem, cfg.instances, cfg.seed, cfg.tolerance())
    out.write(f"problem {problem.label}: {len(plan)} steps\n{plan.text()}")
    _write(cfg, "plan.txt", plan.text())
    _write(cfg, "verification.txt", report.text())
    try:
        arts = _renderings(plan, cfg, kb)
    except NoCompleteTrace as e:
        arts = {}
        out.write(f"no rendering: {e}\n")
    if "steps.txt" in arts:
        out.write(arts["steps.txt"])
    for name, text in arts.items():
        _write(cfg, name, text)
    out.write(f"verification: {report.passed}/{report.tried} passed at tol {cfg.tol:g}\n")
    return EXIT_OK if report.ok else EXIT_UNVERIFIED


def cmd_verify(args, cfg: RunConfig, out) -> int:
    problem = resolve_problem(args.problem)
    plan = _solve(problem, cfg, cfg.load_kb(), out)
    if plan is None:
        return EXIT_UNSOLVED
    report = verify(plan, problem, cfg.instances, cfg.seed, cfg.tolerance())
    out.write(report.text())
    _write(cfg, "verification.txt", report.text())
    return EXIT_OK if report.ok else EXIT_UNVERIFIED


def cmd_render(args, cfg: RunConfig, out) -> int:
    from .emit import NoCompleteTrace

    problem = resolve_problem(args.problem)
    kb = cfg.load_kb()
    plan = _solve(problem, cfg, kb, out)
    if plan is None:
        return EXIT_UNSOLVED
    try:
        arts = _renderings(plan, cfg, kb)
    except NoCompleteTrace as e:
        out.write(f"{e}\n")
        return EXIT_UNVERIFIED
    for name, text in arts.items():
        if cfg.out:
            _write(cfg, name, text)
        else:
            out.write(text)
    return EXIT_OK


def summary_line(outcome, report) -> str:
    vp = f"{report.passed}/{report.tried}" if report is not None else "-"
    return f"{outcome.problem.id}|{'yes' if outcome.solved else 'no'}|{outcome.clean_len}|{vp}|{outcome.secs:.3f}"


def cmd_batch(args, cfg: RunConfig, out) -> int:
    entries = [e for e in load_catalog() if args.only is None or e.status == args.only]
    kb = cfg.load_kb()
    summary = solve_corpus(kb, [e.problem() for e in entries], cfg.jobs, cfg.budget())
    lines, plans, reports = [], [], []
    n_verified = 0
    for o in summary.outcomes:
        rep = verify(o.plan, o.problem, cfg.instances, cfg.seed, cfg.tolerance()) if o.solved else None
        n_verified += rep is not None and rep.ok
        line = summary_line(o, rep)
        if o.discrepancy:
            line += "|DISCREPANCY: solved although the catalog says U"
        lines.append(line)
        if o.solved:
            plans.append(f"# problem {o.problem.label}\n{o.plan.text()}")
            reports.append(rep.text())
    solved = summary.count(solved=True)
    totals = [
        f"# problems={len(summary.outcomes)} solved={solved} verified={n_verified} "
        f"max_clean_len={summary.max_clean_len()} discrepancies={len(summary.discrepancies)}",
    ]
    for st in STATUSES:
        n = summary.count(st)
        if n:
            totals.append(f"# status {st}: {summary.count(st, True)}/{n} solved")
    text = "".join(l + "\n" for l in lines + totals)
    out.write(text)
    _write(cfg, "config.txt", cfg.echo())
    _write(cfg, "summary.txt", text)
    _write(cfg, "plans.txt", "\n".join(plans))
    _write(cfg, "verification.txt", "".join(reports))
    return EXIT_OK if n_verified == solved and not summary.discrepancies else EXIT_UNVERIFIED


def cmd_check_kb(args, cfg: RunConfig, out) -> int:
    kb = cfg.load_kb()
    n = 1000 if args.instances is None else args.instances
    report = numeric_check_kb(kb, n, cfg.tolerance(), seed=cfg.seed)
    out.write(report.text() + "\n")
    _write(cfg, "kb-check.txt", report.text() + "\n")
    return EXIT_OK if report.ok else EXIT_UNVERIFIED


COMMANDS = {
    "list": cmd_list, "solve": cmd_solve, "verify": cmd_verify, "render": cmd_render,
    "batch": cmd_batch, "check-kb": cmd_check_kb,
}


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
        cfg = config_from(args)
        return COMMANDS[args.command](args, cfg, out)
    except (UsageError, CatalogError) as e:
        sys.stderr.write(f"wernick: {e}\n")
        return EXIT_USAGE
    except (OSError, ParseError, ValidationError) as e:
        sys.stderr.write(f"wernick: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
