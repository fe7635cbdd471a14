"""Command-line front end: solve, zeros, norms, quotient, stoptime,
verify <suite>, report.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .expr import ExprError
from .ode import ContinuationError, make_basis
from .functionals import fp_norm, growth_norm
from .schwarzian import quotient_from_coefficient
from .stopping import (
    build_g0,
    dump_distribution_csv,
    dump_forest_jsonl,
    nontangential_max_inv,
    predicted_p,
    refine_generation,
    weak_lp_fit,
)
from .suites import SUITE_IDS, Scenario, ScenarioError, run_suite
from .zeros import ZeroLocationError, find_zeros


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class UsageError(Exception):
    pass


def _build_parser():
    parser = _Parser(prog="discde",
                     description="solvers and verifiers for f'' + A f = 0 "
                                 "in the unit disc")
    parser.add_argument("--config", help="flat key=value scenario file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--coefficient", help="coefficient expression A(z)")
        p.add_argument("--rmax", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--max-generation", type=int, dest="max_generation")
        p.add_argument("--c0", type=float)
        p.add_argument("--eps0", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", choices=("json", "csv"), dest="fmt")

    for name in ("solve", "zeros", "norms", "quotient", "stoptime", "report"):
        common(sub.add_parser(name))
    p_verify = sub.add_parser("verify")
    p_verify.add_argument("suite", choices=SUITE_IDS)
    common(p_verify)
    return parser


def _scenario_from_args(args):
    if args.config:
        scenario = Scenario.from_config(args.config)
    else:
        scenario = Scenario()
    overrides = {}
    for key in ("coefficient", "rmax", "tol", "max_generation",
                "c0", "eps0", "alpha", "out", "fmt"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if overrides:
        from dataclasses import replace
        scenario = replace(scenario, **overrides)
    return scenario


def _out_path(scenario, name):
    if scenario.out:
        directory = Path(scenario.out)
        directory.mkdir(parents=True, exist_ok=True)
        return directory / name
    return Path(name)


def _emit(scenario, stem, rows, header):
    """Write rows as CSV or JSON according to the scenario format."""
    if scenario.fmt == "csv":
        path = _out_path(scenario, stem + ".csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    else:
        path = _out_path(scenario, stem + ".json")
        payload = [dict(zip(header, row)) for row in rows]
        with open(path, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
    print(path)
    return path


def cmd_solve(scenario):
    basis = make_basis(scenario.coefficient, r_max=max(scenario.rmax, 0.97))
    rows = []
    for r in scenario.radii:
        for k in range(32):
            z = r * complex(math.cos(2 * math.pi * k / 32),
                            math.sin(2 * math.pi * k / 32))
            v1, d1 = basis.jet(1, z, 1)
            v2, d2 = basis.jet(2, z, 1)
            rows.append([z.real, z.imag, v1.real, v1.imag, d1.real, d1.imag,
                         v2.real, v2.imag, d2.real, d2.imag])
    _emit(scenario, "solution", rows,
          ["re_z", "im_z", "re_f1", "im_f1", "re_df1", "im_df1",
           "re_f2", "im_f2", "re_df2", "im_df2"])
    return 0


def cmd_zeros(scenario):
    basis = make_basis(scenario.coefficient, ics=((0.0, 1.0), (1.0, 0.0)),
                       r_max=max(scenario.rmax, 0.97))
    seq = find_zeros(lambda z: basis.jet(1, z, 1), scenario.rmax,
                     deflate_origin=True)
    rows = [[z.real, z.imag, abs(z), res]
            for z, res in zip(seq.zeros, seq.residuals)]
    _emit(scenario, "zeros", rows, ["re", "im", "modulus", "residual"])
    return 0


def cmd_norms(scenario):
    a_eval = scenario.coefficient_eval()
    gn = growth_norm(a_eval, scenario.alpha)
    f1 = fp_norm(a_eval, 1.0)
    rows = [[r, v] for r, v in gn.per_radius]
    _emit(scenario, "growth_profile", rows, ["radius", "max_on_circle"])
    print(json.dumps({
        "growth_norm": gn.value,
        "growth_alpha": scenario.alpha,
        "f1_norm": f1.value,
    }, sort_keys=True))
    return 0


def cmd_quotient(scenario):
    q = quotient_from_coefficient(scenario.coefficient, r_max=scenario.rmax)
    a_eval = scenario.coefficient_eval()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        z = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))
        if q.near_pole(z):
            continue
        worst = max(worst, abs(q.schwarzian_at(z) - 2 * a_eval(np.array([z]))[0]))
    print(json.dumps({
        "poles": [[p.real, p.imag] for p in q.poles],
        "schwarzian_identity_residual": worst,
    }, sort_keys=True))
    return 0 if worst <= 1e-7 else 1


def cmd_stoptime(scenario):
    r_need = max(0.996, 1.0 - 1.4 * 2.0 ** (-scenario.max_generation))
    q = quotient_from_coefficient(scenario.coefficient, r_max=r_need)

    def wprime_abs(z):
        f2 = q.basis.jet(2, z, 0)[0]
        return np.inf if f2 == 0 else 1.0 / abs(f2) ** 2

    forest = build_g0(wprime_abs, scenario.c0, scenario.eps0,
                      scenario.max_generation)
    for _ in range(3):
        refine_generation(forest)
    forest_path = _out_path(scenario, "forest.jsonl")
    dump_forest_jsonl(forest, forest_path)
    print(forest_path)
    _, samples = nontangential_max_inv(wprime_abs, alpha=scenario.alpha,
                                       n_theta=256, r_max=0.995, n_radii=16)
    dist_path = _out_path(scenario, "distribution.csv")
    dump_distribution_csv(samples, dist_path)
    print(dist_path)
    summary = {
        "g0_size": len(forest.generations[0]),
        "generation_sizes": [len(g) for g in forest.generations],
        "predicted_p": predicted_p(scenario.c0, scenario.eps0),
    }
    try:
        emp_p, emp_c, _ = weak_lp_fit(samples)
        summary["empirical_p"] = emp_p
        summary["empirical_constant"] = emp_c
    except ValueError as exc:
        summary["fit_skipped"] = str(exc)
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_verify(scenario, suite_id):
    report = run_suite(suite_id, scenario)
    path = _out_path(scenario, f"report_{suite_id}.json")
    with open(path, "w") as fh:
        fh.write(report.to_json() + "\n")
    for check in report.checks:
        status = ("PASS" if check.passed
                  else "DATA" if check.passed is None else "FAIL")
        print(f"{report.suite} {check.name}: {status}")
    print(path)
    return 0 if report.ok else 1


def cmd_report(scenario):
    combined = {}
    ok = True
    for suite_id in scenario.suites:
        report = run_suite(suite_id, scenario)
        combined[suite_id] = report.to_dict()
        ok = ok and report.ok
    path = _out_path(scenario, "report.json")
    with open(path, "w") as fh:
        json.dump(combined, fh, sort_keys=True, indent=1,
                  default=_default_json)
        fh.write("\n")
    print(path)
    return 0 if ok else 1


def _default_json(obj):
    from .suites import _json_default
    return _json_default(obj)


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        scenario = _scenario_from_args(args)
    except (UsageError, ScenarioError, ExprError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "solve":
            return cmd_solve(scenario)
        if args.command == "zeros":
            return cmd_zeros(scenario)
        if args.command == "norms":
            return cmd_norms(scenario)
        if args.command == "quotient":
            return cmd_quotient(scenario)
        if args.command == "stoptime":
            return cmd_stoptime(scenario)
        if args.command == "verify":
            return cmd_verify(scenario, args.suite)
        if args.command == "report":
            return cmd_report(scenario)
    except (ScenarioError, ExprError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ContinuationError, ZeroLocationError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
