"""Command-line front end.

Exit codes: 0 success, 1 invariant failure, 2 usage or configuration error.

Every table starts with a ``# schema: <name>/<version>`` line followed by a
fixed CSV header; floats are written in shortest round-trip form.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .bell import OUTCOMES
from .channel import Disentangled, Entangled, PairAxis
from .config import COMMANDS, FORMATS, MODELS, ConfigError, RunConfig, build_config, load_config_file, parse_grid
from .ensemble import METHODS, PHASE_MODELS, EnsembleSpec, average_teleport, detection_rate
from .teleport import TeleportReport, run
from .verify import run_checks

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ENTRY_NAMES = ("00", "01", "10", "11")

TELEPORT_HEADER = (
    ["outcome", "correction", "probability", "fidelity"]
    + [f"bob_{e}_{part}" for e in ENTRY_NAMES for part in ("re", "im")]
    + [f"raw_{e}_{part}" for e in ENTRY_NAMES for part in ("re", "im")]
)
ENSEMBLE_HEADER = ["section", "key", "re", "im", "stderr_re", "stderr_im"]
COMPARE_HEADER = [
    "a_re", "a_im", "b_re", "b_im",
    "entangled", "disentangled_axis", "ensemble_matched", "ensemble_independent",
]
VERIFY_HEADER = ["check", "residual", "tol", "status"]


def fmt(x) -> str:
    """Shortest round-trip text for a real number."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return repr(x)


def _entries(m):
    m = np.asarray(m).reshape(-1)
    return [fmt(v) for z in m for v in (z.real, z.imag)]


def _cplx(z):
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def _matrix_json(m):
    return [[_cplx(z) for z in row] for row in np.asarray(m)]


# -- ensemble specs --------------------------------------------------------


def ensemble_spec(cfg: RunConfig, phase_model: str | None = None) -> EnsembleSpec:
    return EnsembleSpec(
        theta=cfg.ensemble_theta,
        phase_model=phase_model or cfg.phase_model,
        offset=cfg.offset,
        method=cfg.method,
        n_nodes=cfg.nodes,
        n_samples=cfg.samples,
        seed=cfg.seed,
        n_partitions=cfg.partitions,
    )


def channel_model(cfg: RunConfig):
    if cfg.model == "entangled":
        return Entangled()
    return Disentangled(PairAxis(cfg.theta, cfg.phi2, cfg.phi3))


# -- renderers -------------------------------------------------------------


def _csv(header, rows, schema) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {schema}/{SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj, schema) -> str:
    return json.dumps({"schema": f"{schema}/{SCHEMA_VERSION}", **obj}, indent=2) + "\n"


def _report_tree(rep: TeleportReport) -> dict:
    return {
        "input": {"a": _cplx(rep.input.a), "b": _cplx(rep.input.b), "norm_factor": rep.input.norm_factor},
        "channel": rep.channel,
        "branches": {
            k.value: {
                "correction": k.correction_name,
                "probability": b.probability,
                "fidelity": b.fidelity,
                "bob_raw": _matrix_json(b.bob_raw),
                "bob_corrected": _matrix_json(b.bob_corrected),
            }
            for k, b in rep.branches.items()
        },
    }


def render_teleport(rep: TeleportReport, fmt_name: str) -> str:
    if fmt_name == "json":
        return _json(_report_tree(rep), "teleport")
    rows = [
        [k.value, k.correction_name, fmt(b.probability), fmt(b.fidelity)]
        + _entries(b.bob_corrected)
        + _entries(b.bob_raw)
        for k, b in rep.branches.items()
    ]
    return _csv(TELEPORT_HEADER, rows, "teleport")


def render_ensemble(avg, rate, fmt_name: str) -> str:
    rep = avg.report
    if fmt_name == "json":
        tree = {
            "n_effective": avg.n_effective,
            "mean_pair_state": _matrix_json(avg.mean_pair_state),
            "stderr": None if avg.stderr is None else _matrix_json(avg.stderr),
            "detection_rate": rate,
            "report": _report_tree(rep),
        }
        return _json(tree, "ensemble")
    rows = []
    se = avg.stderr
    for r in range(4):
        for c in range(4):
            z = avg.mean_pair_state[r, c]
            err = ["", ""] if se is None else [fmt(se[r, c].real), fmt(se[r, c].imag)]
            rows.append(["pair", f"{r}{c}", fmt(z.real), fmt(z.imag)] + err)
    for k, b in rep.branches.items():
        rows.append(["branch", f"{k.value}:probability", fmt(b.probability), "0.0", "", ""])
        rows.append(["branch", f"{k.value}:fidelity", fmt(b.fidelity), "0.0", "", ""])
        for name, z in zip(ENTRY_NAMES, b.bob_corrected.reshape(-1)):
            rows.append(["branch", f"{k.value}:bob_{name}", fmt(z.real), fmt(z.imag), "", ""])
    rows.append(["meta", "n_effective", str(avg.n_effective), "0.0", "", ""])
    if rate is not None:
        rows.append(["meta", "detection_rate", fmt(rate), "0.0", "", ""])
    return _csv(ENSEMBLE_HEADER, rows, "ensemble")


def render_verify(results, fmt_name: str) -> str:
    if fmt_name == "json":
        tree = {"checks": [
            {"check": r.name, "residual": r.residual, "tol": r.tol, "passed": r.passed} for r in results
        ]}
        return _json(tree, "verify")
    rows = [[r.name, fmt(r.residual), fmt(r.tol), "pass" if r.passed else "FAIL"] for r in results]
    return _csv(VERIFY_HEADER, rows, "verify")


# -- commands --------------------------------------------------------------


def cmd_verify(cfg: RunConfig, perturb: bool = False) -> tuple[int, str]:
    results = run_checks(cfg.tol, perturb=perturb)
    status = EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    return status, render_verify(results, cfg.format)


def cmd_teleport(cfg: RunConfig) -> tuple[int, str]:
    return EXIT_OK, render_teleport(run(cfg.input_qubit, channel_model(cfg)), cfg.format)


def cmd_ensemble(cfg: RunConfig) -> tuple[int, str]:
    spec = ensemble_spec(cfg)
    avg = average_teleport(cfg.input_qubit, spec, workers=cfg.workers)
    rate = None
    if cfg.epsilon is not None:
        target = math.pi if cfg.crystal else 0.0
        rate = detection_rate(cfg.epsilon, spec, target_offset=target, workers=cfg.workers)
    return EXIT_OK, render_ensemble(avg, rate, cfg.format)


def compare_rows(cfg: RunConfig) -> list[dict]:
    grid = parse_grid(cfg.grid)
    axis = Disentangled(PairAxis(cfg.theta, cfg.phi2, cfg.phi3))
    matched, independent = ensemble_spec(cfg, "matched"), ensemble_spec(cfg, "independent")
    rows = []
    for q in grid:
        rows.append({
            "a_re": q.a.real, "a_im": q.a.imag, "b_re": q.b.real, "b_im": q.b.imag,
            "entangled": run(q, Entangled()).mean_fidelity,
            "disentangled_axis": run(q, axis).mean_fidelity,
            "ensemble_matched": average_teleport(q, matched, workers=cfg.workers).report.mean_fidelity,
            "ensemble_independent": average_teleport(q, independent, workers=cfg.workers).report.mean_fidelity,
        })
    return rows


def cmd_compare(cfg: RunConfig) -> tuple[int, str]:
    rows = compare_rows(cfg)
    if cfg.format == "json":
        return EXIT_OK, _json({"rows": rows}, "compare")
    return EXIT_OK, _csv(COMPARE_HEADER, [[fmt(r[h]) for h in COMPARE_HEADER] for r in rows], "compare")


COMMAND_FUNCS = {"teleport": cmd_teleport, "ensemble": cmd_ensemble, "compare": cmd_compare}


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ensemble-teleport",
        description="Teleportation through entangled and disentangled pair channels.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--input", help="a_re,a_im,b_re,b_im or real shorthand a,b")
    p.add_argument("--theta", help="polar parameter of the single-axis channel (radians, half the Bloch angle)")
    p.add_argument("--phi2")
    p.add_argument("--phi3")
    p.add_argument("--ensemble-theta", help="fixed polar parameter of the ensemble (default pi/4)")
    p.add_argument("--phase-model", choices=PHASE_MODELS)
    p.add_argument("--offset", help="phi3 - phi2 for the offset phase model")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--nodes", help="quadrature nodes per phase")
    p.add_argument("--samples", help="Monte Carlo sample count")
    p.add_argument("--seed")
    p.add_argument("--partitions", help="Monte Carlo partition count (fixes the random stream)")
    p.add_argument("--workers", help="threads; never changes results")
    p.add_argument("--epsilon", help="phase window for the detection rate (radians)")
    p.add_argument("--crystal", action="store_const", const="true", help="match phi3 against phi2 + pi")
    p.add_argument("--grid", help="input states for compare, separated by ';'")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out", help="output path, '-' for stdout")
    p.add_argument("--tol", help="override every verify tolerance")
    p.add_argument("--echo-config", action="store_true", help="print the merged config and exit")
    p.add_argument("--inject-perturbation", action="store_true", help=argparse.SUPPRESS)
    return p


_META = {"config", "echo_config", "inject_perturbation"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    overrides = {k: v for k, v in vars(args).items() if k not in _META}
    try:
        file_layer = load_config_file(args.config) if args.config else {}
        cfg = build_config(file_layer, overrides)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.echo_config:
        print(cfg.to_text(), end="")
        return EXIT_OK

    if cfg.command == "verify":
        status, text = cmd_verify(cfg, perturb=args.inject_perturbation)
    else:
        status, text = COMMAND_FUNCS[cfg.command](cfg)

    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
