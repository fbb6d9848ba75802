"""Report rendering: JSON-ready dicts (with inverses) and plain text."""

from __future__ import annotations

from typing import Any

from .solver import Aborted, Sat, SolveReport, SolveResult, SolverKind, SolveStats, Unsat
from .verifier import ComplianceReport, ViolationInterval, WindowReport


def _verdict(ok: bool) -> str:
    return "SATISFIED" if ok else "VIOLATED"


# -- compliance ---------------------------------------------------------------


def compliance_to_dict(r: ComplianceReport) -> dict[str, Any]:
    return {
        "sla_name": r.sla_name,
        "timestamp": r.timestamp,
        "verdicts": dict(r.verdicts),
        "overall": r.overall,
        "missing_indicators": list(r.missing_indicators),
    }


def compliance_from_dict(d: dict[str, Any]) -> ComplianceReport:
    return ComplianceReport(d["sla_name"], d["timestamp"], dict(d["verdicts"]), d["overall"], list(d["missing_indicators"]))


def compliance_to_text(r: ComplianceReport) -> str:
    width = max((len(cid) for cid in r.verdicts), default=0)
    lines = [f"SLA {r.sla_name} at t={r.timestamp}: {_verdict(r.overall)}"]
    lines += [f"  {cid.ljust(width)}  {'ok' if ok else 'VIOLATED'}" for cid, ok in r.verdicts.items()]
    return "\n".join(lines)


# -- window -------------------------------------------------------------------


def window_to_dict(r: WindowReport) -> dict[str, Any]:
    return {
        "sla_name": r.sla_name,
        "window": [r.t0, r.t1],
        "step": r.step,
        "intervals": {
            cid: [{"start": i.start, "end": i.end, "elapsed": i.elapsed} for i in runs]
            for cid, runs in r.intervals.items()
        },
        "penalties": dict(r.penalties),
        "total_penalty": r.total_penalty,
        "verdicts": [{"t": t, "overall": ok} for t, ok in r.verdicts],
    }


def window_from_dict(d: dict[str, Any]) -> WindowReport:
    t0, t1 = d["window"]
    return WindowReport(
        sla_name=d["sla_name"],
        t0=t0,
        t1=t1,
        step=d["step"],
        intervals={
            cid: [ViolationInterval(i["start"], i["end"], i["elapsed"]) for i in runs]
            for cid, runs in d["intervals"].items()
        },
        penalties=dict(d["penalties"]),
        total_penalty=d["total_penalty"],
        verdicts=[(v["t"], v["overall"]) for v in d["verdicts"]],
    )


def window_to_text(r: WindowReport) -> str:
    violated_steps = sum(1 for _, ok in r.verdicts if not ok)
    lines = [
        f"SLA {r.sla_name} over [{r.t0}, {r.t1}] step {r.step}: "
        f"{_verdict(r.compliant)} ({violated_steps}/{len(r.verdicts)} steps violated)"
    ]
    for cid, runs in r.intervals.items():
        lines.append(f"  {cid}: penalty {r.penalties[cid]}")
        for run in runs:
            lines.append(f"    violated {run.start}..{run.end} (elapsed {run.elapsed})")
    lines.append(f"  total penalty: {r.total_penalty}")
    return "\n".join(lines)


# -- solve --------------------------------------------------------------------


def _stats_to_dict(s: SolveStats) -> dict[str, int]:
    return {"decisions": s.decisions, "propagations": s.propagations, "scc_count": s.scc_count}


def result_to_dict(result: SolveResult) -> dict[str, Any]:
    if isinstance(result, Sat):
        return {"status": "SAT", "assignment": {str(v): b for v, b in sorted(result.assignment.items())}}
    if isinstance(result, Unsat):
        return {"status": "UNSAT"}
    return {"status": "ABORTED", "reason": result.reason}


def result_from_dict(d: dict[str, Any], stats: SolveStats) -> SolveResult:
    if d["status"] == "SAT":
        return Sat({int(v): b for v, b in d["assignment"].items()}, stats)
    if d["status"] == "UNSAT":
        return Unsat(stats)
    return Aborted(d["reason"], stats)


def solve_to_dict(r: SolveReport) -> dict[str, Any]:
    return {
        "result": result_to_dict(r.result),
        "solver_used": r.solver_used.value,
        "clause_requirements": dict(r.clause_requirements),
        "stats": _stats_to_dict(r.stats),
    }


def solve_from_dict(d: dict[str, Any]) -> SolveReport:
    stats = SolveStats(**d["stats"])
    return SolveReport(
        result_from_dict(d["result"], stats),
        SolverKind(d["solver_used"]),
        dict(d["clause_requirements"]),
        stats,
    )


def solve_to_text(r: SolveReport) -> str:
    if isinstance(r.result, Sat):
        head = "SAT"
    elif isinstance(r.result, Unsat):
        head = "UNSAT"
    else:
        head = f"ABORTED ({r.result.reason})"
    s = r.stats
    lines = [
        f"{head} via {r.solver_used.value}",
        f"  decisions={s.decisions} propagations={s.propagations} scc_count={s.scc_count}",
    ]
    if r.clause_requirements:
        width = max(len(cid) for cid in r.clause_requirements)
        lines.append("  clause requirements:")
        lines += [f"    {cid.ljust(width)}  {str(v).lower()}" for cid, v in r.clause_requirements.items()]
    return "\n".join(lines)
