"""Command-line front end.

Exit codes: 0 everything holds, 1 a bound is violated or an oracle
disagrees, 2 invalid input, 3 the dispatcher lacks declarations.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .blowup import BlowupPlan, apply_plan, validate_snc
from .bounds import (
    THEOREMS, BoundReport, UndecidableDispatch, applicable_theorem, star_degree_check,
    named_bound, n_of_d_check,
)
from .document import DocumentError, InputDocument, load_document
from .graphs import CNNSCase, build_river, build_rivers, classify_cnns, m_formula, theta
from .lattice import ModelError, PreconditionError, validate_surface
from .oracle import CORPUS, SEED_ENV, mutant_theta, oracle_m, run_corpus, seed_base

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_UNDECIDABLE = 0, 1, 2, 3


def _plain(value):
    return json.loads(json.dumps(value, default=str))


@dataclass
class Report:
    command: str
    records: list[dict] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def add(self, kind: str, **fields) -> None:
        self.records.append(_plain({"record": kind, **fields}))

    def fail(self, code: int) -> None:
        self.exit_code = max(self.exit_code, code)

    @property
    def verdict(self) -> str:
        return {EXIT_OK: "pass", EXIT_VIOLATION: "fail", EXIT_INVALID: "invalid-input",
                EXIT_UNDECIDABLE: "undecidable"}[self.exit_code]

    def machine(self) -> str:
        lines = [json.dumps(r, sort_keys=True) for r in self.records]
        lines.append(json.dumps({"record": "verdict", "command": self.command,
                                 "verdict": self.verdict, "exit_code": self.exit_code}, sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_machine(cls, text: str) -> "Report":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not rows or rows[-1].get("record") != "verdict":
            raise ValueError("machine report must end with a verdict record")
        last = rows.pop()
        return cls(last["command"], rows, last["exit_code"])

    def text(self) -> str:
        out = []
        for r in self.records:
            out.append(_render(r))
        out.append(f"{self.command}: {self.verdict} (exit {self.exit_code})")
        return "\n".join(out) + "\n"


def _render(r: dict) -> str:
    kind = r["record"]
    if kind == "bound":
        s = (f"[{r['theorem']}] {r['relation']}: {r['lhs']} vs {r['rhs']}, margin {r['margin']}"
             f" -> {'holds' if r['holds'] else 'VIOLATED'}")
        if r.get("conjectural"):
            s += " (conjectural)"
        for name, value, ok in r["trace"]:
            s += f"\n    {name}: {value}" + ("" if ok else "  (failed)")
        if r.get("equality"):
            s += f"\n    equality case: {r['equality']} {r.get('equality_details') or ''}".rstrip()
        return s
    if kind == "violation":
        return f"violation [{r['rule']}] {r['inequality']}: {r['lhs']} < {r['rhs']} on {r['subject']}"
    if kind == "error":
        return f"error: {r['message']}"
    if kind == "undecidable":
        return f"undecidable: missing {', '.join(r['missing'])}"
    if kind == "river_vertex":
        return (f"  {r['point']} ({r['vertex'][0]},{r['vertex'][1]}) event {r['event']}: "
                f"e={r['e']} u={r['u']} w={r['w']} theta={r['theta']}")
    if kind == "river":
        return (f"river over {r['point']}: M formula {r['m_formula']}, M oracle {r['m_oracle']}"
                f" -> {'agree' if r['agree'] else 'DISAGREE'}")
    if kind == "oracle":
        return (f"seed {r['seed']}: {r['operation']} formula {r['formula_value']} "
                f"oracle {r['oracle_value']} DISAGREE")
    if kind == "fuzz":
        seeds = ", ".join(map(str, r["failing_seeds"])) or "none"
        return (f"fuzz: {r['seeds']} plans from seed {r['start']} at depth {r['depth']}, "
                f"{r['checks']} checks, {r['disagreements']} disagreements; failing seeds: {seeds}")
    if kind == "configuration":
        return (f"configuration: {' + '.join(r['components'])}, cnns case {r['cnns']}, "
                f"{r['points']} point(s)")
    if kind == "plan":
        return f"plan: {r['events']} blow-up(s), simple normal crossing after: {r['snc']}"
    return " ".join(f"{k}={v}" for k, v in r.items() if k != "record")


def _bound_record(rep: Report, b: BoundReport) -> None:
    eq = b.equality_case
    rep.add(
        "bound", theorem=b.theorem, relation=b.relation, lhs=b.bound_lhs, rhs=b.bound_rhs,
        margin=b.margin, holds=b.holds, conjectural=b.conjectural,
        trace=[[p.name, p.value, p.ok] for p in b.hypothesis_trace],
        equality=eq.name if eq else None, equality_details=dict(eq.details) if eq else None,
        detail=dict(b.detail),
    )
    if not b.holds:
        rep.fail(EXIT_VIOLATION)


def _load(rep: Report, path: str) -> InputDocument | None:
    try:
        return load_document(path)
    except DocumentError as exc:
        rep.add("error", message=str(exc), line=exc.line)
        rep.fail(EXIT_INVALID)
        return None


def cmd_validate(path: str) -> Report:
    rep = Report("validate")
    doc = _load(rep, path)
    if doc is None:
        return rep
    for v in validate_surface(doc.surface):
        rep.add("violation", rule=v.rule, inequality=v.inequality, lhs=v.lhs, rhs=v.rhs, subject=v.subject)
        rep.fail(EXIT_VIOLATION)
    cfg = doc.configuration
    if cfg is not None:
        rep.add("configuration", components=list(cfg.ids), cnns=classify_cnns(cfg).value,
                points=len(cfg.point_clusters))
    if doc.plan is not None:
        try:
            state = apply_plan(doc.plan)
        except (ModelError, PreconditionError) as exc:
            rep.add("error", message=str(exc), line=None)
            rep.fail(EXIT_INVALID)
            return rep
        rep.add("plan", events=len(doc.plan.events), snc=validate_snc(state))
    return rep


def cmd_check(path: str, theorem: str = "auto") -> Report:
    rep = Report("check")
    doc = _load(rep, path)
    if doc is None:
        return rep
    X, target, decl = doc.surface, doc.target, doc.declarations
    if target is None:
        rep.add("error", message="document has neither a divisor nor a configuration", line=None)
        rep.fail(EXIT_INVALID)
        return rep
    try:
        if theorem != "auto":
            _bound_record(rep, named_bound(X, target, theorem, decl))
            return rep
        _bound_record(rep, applicable_theorem(X, target, decl))
        cfg = doc.configuration
        if cfg is not None and X.minimal and classify_cnns(cfg) is not CNNSCase.NOT_CNNS:
            _bound_record(rep, n_of_d_check(X, cfg))
        if cfg is not None:
            try:
                _bound_record(rep, star_degree_check(X, cfg))
            except PreconditionError:
                pass
    except UndecidableDispatch as exc:
        rep.add("undecidable", missing=exc.missing, message=str(exc))
        rep.fail(EXIT_UNDECIDABLE)
    except (PreconditionError, ModelError) as exc:
        rep.add("error", message=str(exc), line=None)
        rep.fail(EXIT_INVALID)
    return rep


def cmd_river(path: str, point: str | None = None) -> Report:
    rep = Report("river")
    doc = _load(rep, path)
    if doc is None:
        return rep
    if doc.plan is None:
        rep.add("error", message="document has no plan", line=None)
        rep.fail(EXIT_INVALID)
        return rep
    try:
        state = apply_plan(doc.plan)
        rivers = [build_river(state, point)] if point is not None else build_rivers(state)
    except (ModelError, PreconditionError) as exc:
        rep.add("error", message=str(exc), line=None)
        rep.fail(EXIT_INVALID)
        return rep
    for river in rivers:
        for row in river.dump():
            rep.add("river_vertex", point=river.point, **row)
        sub = BlowupPlan(doc.plan.base, tuple(ev for ev in doc.plan.events
                                              if state.tree_of[ev.id] == river.point))
        formula, direct = m_formula(river), oracle_m(sub)
        rep.add("river", point=river.point, m_formula=formula, m_oracle=direct, agree=formula == direct)
        if formula != direct:
            rep.fail(EXIT_VIOLATION)
    return rep


def cmd_fuzz(seeds: int = CORPUS.seeds, depth: int = CORPUS.depth, start: int | None = None,
             mutant: bool = False) -> Report:
    rep = Report("fuzz")
    if start is None:
        start = seed_base()
    checks, failing = 0, []
    for r in run_corpus(seeds, depth, mutant_theta if mutant else theta, start):
        checks += 1
        if not r.agree:
            rep.add("oracle", operation=r.operation, formula_value=r.formula_value,
                    oracle_value=r.oracle_value, seed=r.seed)
            if r.seed not in failing:
                failing.append(r.seed)
    rep.add("fuzz", seeds=seeds, depth=depth, start=start, checks=checks,
            disagreements=sum(1 for r in rep.records if r["record"] == "oracle"),
            failing_seeds=sorted(failing))
    if failing:
        rep.fail(EXIT_VIOLATION)
    return rep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpsurf", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "machine"), default="text")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", help="check lattice and configuration invariants")
    v.add_argument("file")
    c = sub.add_parser("check", help="run the applicable bounds")
    c.add_argument("file")
    c.add_argument("--theorem", default="auto", choices=("auto",) + THEOREMS)
    r = sub.add_parser("river", help="river graphs and the multiplicity identity")
    r.add_argument("file")
    r.add_argument("--point")
    f = sub.add_parser("fuzz", help="random plans against the oracle")
    f.add_argument("--seeds", type=int, default=CORPUS.seeds)
    f.add_argument("--depth", type=int, default=CORPUS.depth)
    f.add_argument("--start", type=int, help=f"first seed (default ${SEED_ENV} or 0)")
    f.add_argument("--mutant", action="store_true", help=argparse.SUPPRESS)
    for sp in (v, c, r, f):
        sp.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        rep = cmd_validate(args.file)
    elif args.command == "check":
        rep = cmd_check(args.file, args.theorem)
    elif args.command == "river":
        rep = cmd_river(args.file, args.point)
    else:
        rep = cmd_fuzz(args.seeds, args.depth, args.start, args.mutant)
    sys.stdout.write(rep.machine() if args.format == "machine" else rep.text())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
