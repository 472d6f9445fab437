"""Command line entry point ``cosserat-shell``.

Exit codes: 0 success, 2 configuration error, 3 inadmissible input,
4 solver or diagnostic failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fem
from .admissibility import assess
from .config import dump_config, parse_config
from .energy import identify_coeffs
from .errors import (AdmissibilityError, ConfigError, CosseratShellError, DiagnosticError,
                     SolverError)
from .geometry import evaluate_jet, fundamental_forms, kappa_sup, sample_grid
from .shell_tensors import build_tensors, verify_identities

EXIT_OK, EXIT_CONFIG, EXIT_INADMISSIBLE, EXIT_SOLVER = 0, 2, 3, 4
COMMANDS = ("solve", "check", "identities", "identify", "korn", "convergence")
IDENTITY_GRID = 100


class _Output:
    def __init__(self, out_dir):
        self.dir = Path(out_dir) if out_dir else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def write(self, name, text):
        if self.dir:
            (self.dir / name).write_text(text, encoding="utf-8")


def _report(cfg, chart):
    return assess(cfg.model.h, kappa_sup(chart, cfg.flags.kappa_grid), cfg.material,
                  cfg.model.order, strict=cfg.flags.strict_ratio)


def _require_admissible(cfg, chart):
    report = _report(cfg, chart)
    if not report.admissible and not cfg.flags.override_admissibility:
        raise AdmissibilityError("; ".join(report.to_lines()))
    return report


def _assemble(cfg, chart, mesh):
    return fem.assemble(
        mesh, chart, cfg.material, cfg.model.h, cfg.model.order,
        cfg.loads.build(chart.domain), cfg.flags.weak_form_factor,
        quad_degree=cfg.solver.quad_degree,
        weight_loads_by_det=cfg.flags.weight_loads_by_det,
        override=cfg.flags.override_admissibility, strict=cfg.flags.strict_ratio,
        kappa_grid=cfg.flags.kappa_grid,
    )


def solution_csv(mesh, field):
    rows = ["node_id,x1,x2,v1,v2,v3,t1,t2,t3"]
    for k, ((x1, x2), vals) in enumerate(zip(mesh.nodes, field.values)):
        rows.append(",".join([str(k), f"{x1:.17g}", f"{x2:.17g}"]
                             + [f"{v:.17g}" for v in vals]))
    return "\n".join(rows) + "\n"


def point_cloud_csv(points):
    return "y1,y2,y3\n" + "".join(f"{a:.17g},{b:.17g},{c:.17g}\n" for a, b, c in points)


def cmd_solve(cfg, out):
    chart = cfg.chart.build()
    _require_admissible(cfg, chart)
    mesh = fem.generate_mesh(chart.domain, cfg.mesh.nx, cfg.mesh.ny)
    system = _assemble(cfg, chart, mesh)
    field = fem.solve(system, tol=cfg.solver.tol, max_iter=cfg.solver.max_iter or None,
                      method=cfg.solver.method)
    energy = fem.energy(system, field)
    summary = (f"energy={energy:.17g}\nresidual={field.residual:.6e}\n"
               f"iterations={field.iterations}\nndofs={len(system.free)}\n")
    out.write("solution.csv", solution_csv(mesh, field))
    out.write("deformed.csv", point_cloud_csv(fem.deformed_points(mesh, chart, field)))
    out.write("mesh.txt", fem.dump_mesh(mesh))
    out.write("summary.txt", summary)
    print(summary, end="")
    return EXIT_OK


def cmd_check(cfg, out):
    report = _report(cfg, cfg.chart.build())
    text = "\n".join(report.to_lines()) + "\n"
    out.write("check.txt", text)
    print(text, end="")
    return EXIT_OK if report.admissible else EXIT_INADMISSIBLE


def cmd_identities(cfg, out):
    chart = cfg.chart.build()
    jet = evaluate_jet(chart, sample_grid(chart, IDENTITY_GRID))
    report = verify_identities(build_tensors(jet), fundamental_forms(jet))
    text = report.to_csv()
    out.write("identities.csv", text)
    print(text, end="")
    return EXIT_OK if report.passed else EXIT_SOLVER


def cmd_identify(cfg, out):
    chart = cfg.chart.build()
    (a, b), (c, d) = chart.domain
    Kg = float(fundamental_forms(evaluate_jet(chart, np.array([(a + b) / 2, (c + d) / 2]))).Kg)
    text = identify_coeffs(cfg.material, cfg.model.h, Kg).to_csv()
    out.write("identify.csv", text)
    print(text, end="")
    return EXIT_OK


def cmd_korn(cfg, out):
    chart = cfg.chart.build()
    mesh = fem.generate_mesh(chart.domain, cfg.mesh.nx, cfg.mesh.ny)
    res = fem.korn_constant(mesh, chart, quad_degree=cfg.solver.quad_degree)
    text = f"korn_constant={res.constant:.17g}\nndofs={res.ndof}\nmethod={res.method}\n"
    out.write("korn.txt", text)
    print(text, end="")
    return EXIT_OK


def cmd_convergence(cfg, out):
    chart = cfg.chart.build()
    _require_admissible(cfg, chart)
    rows = fem.convergence_study(
        chart, cfg.material, cfg.model.h, cfg.loads.build(chart.domain),
        levels=cfg.study.levels, base=cfg.study.base, order=cfg.model.order,
        weak_form_factor=cfg.flags.weak_form_factor, method=cfg.solver.method,
        tol=cfg.solver.tol, quad_degree=cfg.solver.quad_degree,
        override=cfg.flags.override_admissibility,
    )
    text = fem.convergence.CSV_HEADER + "\n" + "".join(r.to_csv() + "\n" for r in rows)
    out.write("convergence.csv", text)
    print(text, end="")
    return EXIT_OK


HANDLERS = {"solve": cmd_solve, "check": cmd_check, "identities": cmd_identities,
            "identify": cmd_identify, "korn": cmd_korn, "convergence": cmd_convergence}


def build_parser():
    p = argparse.ArgumentParser(prog="cosserat-shell",
                                description="Linear Cosserat shell solver and diagnostics")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="run configuration file")
    p.add_argument("--out", default=None, help="directory for output files")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        for lineno, msg in exc.errors:
            print(f"{args.config}:{lineno}: {msg}" if lineno else f"{args.config}: {msg}",
                  file=sys.stderr)
        return EXIT_CONFIG
    try:
        out = _Output(args.out)
        out.write("effective_config.txt", dump_config(cfg))
        return HANDLERS[args.command](cfg, out)
    except AdmissibilityError as exc:
        print(f"inadmissible: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except (SolverError, DiagnosticError) as exc:
        extra = f" (residual {exc.residual:.3e})" if getattr(exc, "residual", None) else ""
        print(f"solver failure: {exc}{extra}", file=sys.stderr)
        return EXIT_SOLVER
    except CosseratShellError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
