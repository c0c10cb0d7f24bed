"""JSON form of a solve report.

Rationals are written as ``"num/den"`` strings (plain integers when
integral). The instance text is embedded so a saved report can be
re-certified on its own.
"""

from __future__ import annotations

from typing import Any

from .instance import Flow, Instance, parse_instance, serialize_instance
from .numerics import format_rational, parse_rational
from .solver import Certificate, SolveReport


def report_to_dict(report: SolveReport, inst: Instance | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "status": report.status,
        "objective": format_rational(report.objective),
        "flow": [{"edge": i, "value": format_rational(v)} for i, v in enumerate(report.flow.values)],
        "budget_used": format_rational(report.budget_used),
        "pivots": {
            "total": report.pivots_total,
            "degenerate": report.pivots_degenerate,
            "nondegenerate": report.pivots_nondegenerate,
            "max_consecutive_degenerate": report.max_consecutive_degenerate,
        },
    }
    cert = report.certificate
    if cert is not None:
        out["certificate"] = {
            "basis": cert.basis,
            "pi": list(cert.pi),
            "mu": list(cert.mu),
            "dhat": {str(i): format_rational(d) for i, d in cert.dhat.items()},
            "artificial_cost": cert.artificial_cost,
        }
    if inst is not None:
        out["instance"] = serialize_instance(inst)
    return out


def report_from_dict(data: dict[str, Any], inst: Instance | None = None) -> tuple[SolveReport, Instance]:
    """Rebuild a report; the instance comes from ``inst`` or the embedded text.

    Raises ``KeyError``/``ValueError`` on malformed input.
    """
    if inst is None:
        if "instance" not in data:
            raise ValueError("report carries no instance; supply one")
        inst = parse_instance(data["instance"])
    values = [parse_rational(entry["value"]) for entry in sorted(data["flow"], key=lambda e: e["edge"])]
    if [e["edge"] for e in sorted(data["flow"], key=lambda e: e["edge"])] != list(range(len(values))):
        raise ValueError("flow entries must cover edges 0..m-1 exactly once")
    flow = Flow.of(inst, values)
    pivots = data.get("pivots", {})
    cert = None
    if "certificate" in data:
        c = data["certificate"]
        basis = c["basis"]
        cert = Certificate(
            {k: basis[k] for k in ("L", "T", "U", "extra", "root")},
            tuple(c["pi"]),
            tuple(c["mu"]),
            {int(k): parse_rational(v) for k, v in c["dhat"].items()},
            int(c["artificial_cost"]),
        )
    status = data["status"]
    if status not in ("Optimal", "OptimalViaBudgetGate"):
        raise ValueError(f"unknown status {status!r}")
    report = SolveReport(
        status=status,
        objective=parse_rational(data["objective"]),
        flow=flow,
        budget_used=parse_rational(data["budget_used"]),
        pivots_total=pivots.get("total", 0),
        pivots_degenerate=pivots.get("degenerate", 0),
        pivots_nondegenerate=pivots.get("nondegenerate", 0),
        max_consecutive_degenerate=pivots.get("max_consecutive_degenerate", 0),
        certificate=cert,
    )
    return report, inst
