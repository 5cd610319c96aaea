"""Report assembly for the command-line tool: dicts for JSON, CSV text, tables."""

from __future__ import annotations

import csv
import io
import math
from typing import Optional

from . import approx, exact
from .config import JobConfig
from .model import BarrierSpec
from .oracle import Estimate, estimate_pfd, estimate_pfh
from .sil import DemandMode, classify_demand_mode, sil_from_pfd, sil_from_pfh, verdict

SIGMAS = 3.0


def fmt_prob(value: Optional[float]) -> str:
    """Probabilities print in scientific notation with 6 significant digits."""
    return "n/a" if value is None else f"{value:.5e}"


def fmt_hours(value: float) -> str:
    return f"{value:.6f}"


def relative_difference(approximate: Optional[float], exact_value: float) -> Optional[float]:
    if approximate is None or exact_value == 0.0:
        return None
    return (approximate - exact_value) / exact_value


def _pair(exact_value: float, approximate: Optional[float]) -> dict:
    return {
        "exact": exact_value,
        "approximate": approximate,
        "relative_difference": relative_difference(approximate, exact_value),
    }


def describe_spec(job: JobConfig, spec: Optional[BarrierSpec] = None) -> dict:
    spec = spec or job.spec
    return {
        "architecture": str(spec.architecture),
        "m": spec.m,
        "n_elements": spec.n,
        "failure_rate_per_hour": spec.failure_rate_per_hour,
        "t1_hours": spec.t1,
        "partial_tests": spec.test_policy.partial_test_count,
        "coverage": spec.test_policy.partial_coverage,
        "t0_hours": spec.t0,
        "lambda_t1": spec.lambda_t1,
    }


def evaluate_report(job: JobConfig) -> dict:
    spec = job.spec
    warnings: list[str] = []

    pfd_avg = exact.pfd_average(spec)
    pfd_avg_apx = approx.pfd_average_approx(spec)
    pfd_t1 = exact.pfd_instant(spec, spec.t1)
    pfd_t1_apx = approx.pfd_instant_approx(spec, spec.t1)
    pfh = exact.pfh_average(spec)
    warnings.extend(pfh.warnings)
    for ev in (pfd_avg_apx, pfd_t1_apx):
        for w in ev.warnings:
            if w not in warnings:
                warnings.append(w)

    pfh_apx = None
    from_pfd = None
    if spec.is_basic:
        pfh_apx = approx.pfh_average_approx(spec).value
        relation = approx.pfh_from_pfd_approx(spec)
        from_pfd = {
            "from_pfd_at_t1": relation.from_pfd_at_t1,
            "from_pfd_average": relation.from_pfd_average,
        }
    else:
        warnings.append("approximate PFH forms apply only without partial tests")

    low = sil_from_pfd(pfd_avg.value)
    high = sil_from_pfh(pfh.value)
    report = {
        "barrier": describe_spec(job),
        "pfd_average": _pair(pfd_avg.value, pfd_avg_apx.value),
        "pfd_at_t1": _pair(pfd_t1, pfd_t1_apx.value),
        "pfh_average": _pair(pfh.value, pfh_apx),
        "pfh_from_pfd": from_pfd,
        "approximation_valid": pfd_avg_apx.validity.within_domain,
        "sil": {
            "low_demand": {"basis": "pfd_average", "probability": low.probability, "level": low.level.value},
            "high_demand": {"basis": "pfh_average", "probability": high.probability, "level": high.level.value},
        },
        "demand_mode": None,
        "warnings": warnings,
    }
    if job.name:
        report["name"] = job.name
    if job.demand_rate_per_year is not None:
        mode = classify_demand_mode(job.demand_rate_per_year, spec.t1)
        report["demand_mode"] = mode.value
        report["demand_rate_per_year"] = job.demand_rate_per_year
    return report


def evaluate_text(report: dict) -> str:
    b = report["barrier"]
    lines = [
        f"barrier      {b['architecture']}  lambda={b['failure_rate_per_hour']:.6g}/h  "
        f"T1={b['t1_hours']:.6g} h  partial tests n={b['partial_tests']} E={b['coverage']:.6g}  "
        f"lambda*T1={b['lambda_t1']:.6g}",
        f"{'quantity':<14}{'exact':>14}{'approximate':>14}{'rel. diff':>12}",
    ]
    for key, label in (("pfd_average", "PFD avg"), ("pfd_at_t1", "PFD(T1-)"), ("pfh_average", "PFH avg")):
        row = report[key]
        rel = row["relative_difference"]
        rel_text = "n/a" if rel is None else f"{rel:+.3%}"
        lines.append(f"{label:<14}{fmt_prob(row['exact']):>14}{fmt_prob(row['approximate']):>14}{rel_text:>12}")
    if report["pfh_from_pfd"]:
        rel = report["pfh_from_pfd"]
        lines.append(
            f"PFH via PFD   {fmt_prob(rel['from_pfd_at_t1'])} (PFD(T1)/T1)  "
            f"{fmt_prob(rel['from_pfd_average'])} (PFD avg*(N-M+2)/T1)"
        )
    for mode in ("low_demand", "high_demand"):
        v = report["sil"][mode]
        lines.append(f"SIL {mode:<12}{v['level']:<12}(from {v['basis']} = {fmt_prob(v['probability'])})")
    if report["demand_mode"]:
        lines.append(f"demand mode   {report['demand_mode']} at {report['demand_rate_per_year']:.6g} demands/year")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def curve_csv(job: JobConfig, samples: int) -> str:
    """Basic trace, partial trace when configured, and two-point average rows."""
    spec = job.spec
    n_tests = spec.test_policy.partial_test_count
    basic = spec.with_changes(partial_tests=1, coverage=0.0)
    traces = [("basic", basic, (samples - 1) * n_tests + 1)]
    if spec.test_policy.has_partial_tests:
        traces.append(("partial", spec, samples))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trace", "t_hours", "pfd_exact", "pfd_approx"])
    for label, trace_spec, per_period in traces:
        points = exact.pfd_curve(trace_spec, per_period)
        for point in points:
            apx = approx.pfd_instant_approx(trace_spec, point.t_hours, left=point.left_limit).value
            writer.writerow([label, fmt_hours(point.t_hours), fmt_prob(point.value), fmt_prob(apx)])
    for label, trace_spec, _ in traces:
        avg = exact.pfd_average(trace_spec).value
        avg_apx = approx.pfd_average_approx(trace_spec).value
        for t in (0.0, trace_spec.t1):
            writer.writerow([f"{label}_average", fmt_hours(t), fmt_prob(avg), fmt_prob(avg_apx)])
    return buf.getvalue()


def sweep_rows(job: JobConfig) -> tuple[list[dict], dict]:
    sweep = job.sweep
    mode = DemandMode.LOW_DEMAND
    if job.demand_rate_per_year is not None:
        mode = classify_demand_mode(job.demand_rate_per_year, job.spec.t1)
    rows = []
    for value in sweep.values:
        spec = job.spec_for(sweep.parameter, value)
        pfd = exact.pfd_average(spec).value
        pfd_apx = approx.pfd_average_approx(spec)
        pfh = exact.pfh_average(spec).value
        basis = pfd if mode is DemandMode.LOW_DEMAND else pfh
        level = verdict(mode, basis).level
        rows.append({
            "value": value,
            "pfd_exact": pfd,
            "pfd_approx": pfd_apx.value,
            "pfh_exact": pfh,
            "sil_pfd": sil_from_pfd(pfd).level.value,
            "sil_pfh": sil_from_pfh(pfh).level.value,
            "approximation_valid": pfd_apx.validity.within_domain,
            "meets_target": None if job.target_sil is None else level.meets(job.target_sil),
        })
    summary = {"parameter": sweep.parameter, "mode": mode.value, "target_sil": job.target_sil, "best": None}
    if job.target_sil is not None:
        feasible = [r["value"] for r in rows if r["meets_target"]]
        if feasible:
            # longer intervals / worse hardware / fewer or weaker tests are the cheap direction
            pick = max if sweep.parameter in ("t1", "lambda") else min
            summary["best"] = pick(feasible)
            summary["message"] = f"{_best_label(sweep.parameter)} meeting SIL {job.target_sil}: {pick(feasible):.6g}"
        else:
            summary["message"] = f"no feasible value reaches SIL {job.target_sil}"
    return rows, summary


def _best_label(parameter: str) -> str:
    return {
        "t1": "largest T1",
        "lambda": "largest failure rate",
        "coverage": "smallest coverage",
        "partial_tests": "smallest partial test count",
    }[parameter]


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["value", "pfd_exact", "pfd_approx", "pfh_exact", "sil_pfd", "sil_pfh", "meets_target"])
    for r in rows:
        meets = "" if r["meets_target"] is None else str(r["meets_target"]).lower()
        writer.writerow([f"{r['value']:.6g}", fmt_prob(r["pfd_exact"]), fmt_prob(r["pfd_approx"]),
                         fmt_prob(r["pfh_exact"]), r["sil_pfd"], r["sil_pfh"], meets])
    return buf.getvalue()


def sweep_text(rows: list[dict], summary: dict) -> str:
    lines = [f"sweep over {summary['parameter']} ({summary['mode']})",
             f"{'value':>12}{'PFD exact':>14}{'PFD approx':>14}{'PFH exact':>14}{'SIL(PFD)':>12}{'SIL(PFH)':>12}"]
    for r in rows:
        flag = "" if r["meets_target"] is None else ("  ok" if r["meets_target"] else "  FAIL")
        lines.append(f"{r['value']:>12.6g}{fmt_prob(r['pfd_exact']):>14}{fmt_prob(r['pfd_approx']):>14}"
                     f"{fmt_prob(r['pfh_exact']):>14}{r['sil_pfd']:>12}{r['sil_pfh']:>12}{flag}")
    if "message" in summary:
        lines.append(summary["message"])
    return "\n".join(lines) + "\n"


def _check(name: str, analytic: float, est: Estimate, bernoulli: bool) -> dict:
    sigma = est.std_error
    if bernoulli:
        # a rare event can go unobserved; judge against the spread expected under the analytic value
        sigma = max(sigma, math.sqrt(analytic * (1.0 - analytic) / est.trials))
    diff = est.mean - analytic
    passed = abs(diff) <= SIGMAS * sigma if sigma > 0 else abs(diff) <= 1e-15
    return {
        "quantity": name,
        "analytic": analytic,
        "simulated": est.mean,
        "std_error": est.std_error,
        "z": diff / sigma if sigma > 0 else 0.0,
        "pass": passed,
    }


def validation_checks(job: JobConfig) -> list[dict]:
    """Analytic values against the Monte Carlo oracle, one row per quantity."""
    spec = job.spec
    config = job.simulation
    sim = estimate_pfd(spec, config)
    checks = [_check("pfd_average", exact.pfd_average(spec).value, sim.average, bernoulli=False)]
    for t, est in zip(sim.times, sim.curve):
        checks.append(_check(f"pfd(t={t:.6g}h)", exact.pfd_instant(spec, t), est, bernoulli=True))
    pfh_sim = estimate_pfh(spec, config)
    checks.append(_check("pfh_average", exact.pfh_average(spec).value, pfh_sim, bernoulli=False))
    return checks


def validation_text(checks: list[dict]) -> str:
    lines = [f"{'quantity':<20}{'analytic':>14}{'simulated':>14}{'std error':>14}{'z':>8}  result"]
    for c in checks:
        lines.append(f"{c['quantity']:<20}{fmt_prob(c['analytic']):>14}{fmt_prob(c['simulated']):>14}"
                     f"{fmt_prob(c['std_error']):>14}{c['z']:>8.2f}  {'pass' if c['pass'] else 'FAIL'}")
    failed = sum(not c["pass"] for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks within {SIGMAS:g} standard errors")
    return "\n".join(lines) + "\n"
