"""Command-line front end.

Subcommands: ``force``, ``compare``, ``kk``, ``roughness``, ``synth`` and
``analyze``. Each reads a JSON config (``--config``) and writes CSV or JSON
to ``--out`` (stdout when omitted).

Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import defaultdict
from functools import partial
from pathlib import Path

import numpy as np

from .calibration import SweepRecord, analyze
from .config import RunConfig, grid
from .errors import CasimirError, ConfigError, ConvergenceError
from .lifshitz import LifshitzForceLaw, force_curve, ideal_metal_force
from .mtb_sim import MtbParams, SweepPlan, simulate_dataset, zero_force
from .roughness import (HeightMap, InterpolatedForce, RoughnessProfile, corrected_force,
                        histogram_from_heightmap)
from .svgplot import loglog_svg

DATASET_COLUMNS = ("sweep_id", "d_pz_m", "v_bias_V", "a_au")


def _fmt(x):
    return f"{x:.10e}"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# force ----------------------------------------------------------------------

def _profiles(cfg, rough, override, path):
    if override:
        parts = override.split(",")
        if len(parts) != 2:
            raise ConfigError("--roughness", "expected sphere.json,plate.json")
        files = {"sphere": parts[0], "plate": parts[1]}
        load = lambda p: Path(p)  # noqa: E731 - CLI paths are cwd-relative
    elif rough:
        files = {k: rough.get(k) for k in ("sphere", "plate")}
        load = cfg.resolve
    else:
        return None
    out = []
    for side in ("sphere", "plate"):
        name = files[side]
        if name is None:
            out.append(RoughnessProfile.flat())
            continue
        try:
            out.append(RoughnessProfile.load(load(name)))
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"{path}.roughness.{side}", f"cannot load profile {name!r}: {exc}") from exc
    return out


def compute_force(cfg, section, path, jobs=1, roughness=None):
    """Rows ``(d, F, |F| in pN, rel_err)`` for one force section."""
    setup = cfg.force_setup(section, path)
    seps = setup["separations"]
    args = (setup["sphere"], setup["plate"], setup["gap"], setup["radius"])
    profiles = _profiles(cfg, setup["roughness"], roughness, path)
    if profiles is None:
        pts = force_curve(*args, seps, setup["quad"], jobs=jobs, full_output=True)
        return [(d, r.force, abs(r.force) * 1e12, r.rel_err) for d, r in pts]

    sp, pl = profiles
    method = (setup["roughness"] or {}).get("method", "interpolate")
    inward = sp.delta.max() + pl.delta.max()
    outward = sp.delta.min() + pl.delta.min()
    if min(seps) - inward <= 0:
        # let corrected_force name the offending pair
        corrected_force(lambda d: d, sp, pl, min(seps))
    if method == "direct":
        base = LifshitzForceLaw(*args, setup["quad"])
        rel = 0.0
    elif method == "interpolate":
        lo, hi = min(seps) - inward, max(seps) - outward
        dense = np.geomspace(lo * 0.999, hi * 1.001, 48)
        pts = force_curve(*args, dense, setup["quad"], jobs=jobs, full_output=True)
        if all(r.force == 0.0 for _, r in pts):
            base = lambda d: np.zeros_like(np.asarray(d, dtype=float))  # noqa: E731
        else:
            base = InterpolatedForce(dense, [r.force for _, r in pts])
        rel = max(r.rel_err for _, r in pts)
    else:
        raise ConfigError(f"{path}.roughness.method", f"unknown method {method!r}")
    rows = []
    for d in seps:
        f = corrected_force(base, sp, pl, d)
        rows.append((d, f, abs(f) * 1e12, rel))
    return rows


def _write_svg(path, curves, **kw):
    if path:
        Path(path).write_text(loglog_svg(curves, **kw) + "\n")


def cmd_force(args):
    cfg = RunConfig.load(args.config)
    rows = compute_force(cfg, cfg.section("force"), "$.force", args.jobs, args.roughness)
    _emit(_csv_text(("d_m", "force_N", "abs_force_pN", "rel_err"), rows), args.out)
    _write_svg(args.svg, {"force": ([r[0] for r in rows], [abs(r[1]) for r in rows])})


def cmd_compare(args):
    configs = [RunConfig.load(p) for p in args.config]
    if len(configs) == 1:
        cfg = configs[0]
        cmp = cfg.section("compare")
        base = cfg.raw.get("force", {})
        sections = []
        for key in ("a", "b"):
            if key not in cmp or not isinstance(cmp[key], dict):
                raise ConfigError(f"$.compare.{key}", "missing force-section override")
            sections.append((cfg, {**base, **cmp[key]}, f"$.compare.{key}"))
    elif len(configs) == 2:
        sections = [(c, c.section("force"), "$.force") for c in configs]
    else:
        raise ConfigError("--config", "compare takes one or two config files")
    curves = [compute_force(c, s, p, args.jobs) for c, s, p in sections]
    da = [r[0] for r in curves[0]]
    db = [r[0] for r in curves[1]]
    if len(da) != len(db) or not np.allclose(da, db, rtol=1e-12, atol=0):
        raise ConfigError("separations_m", "the two curves must share one separation grid")
    rows = []
    for ra, rb in zip(*curves):
        ratio = ra[1] / rb[1] if rb[1] != 0 else float("nan")
        rows.append((ra[0], ra[1], rb[1], ratio))
    _emit(_csv_text(("d_m", "force_a_N", "force_b_N", "ratio"), rows), args.out)
    _write_svg(args.svg, {"a": (da, [abs(r[1]) for r in curves[0]]),
                          "b": (db, [abs(r[1]) for r in curves[1]])})


def cmd_kk(args):
    cfg = RunConfig.load(args.config)
    sec = cfg.section("kk")
    name = sec.get("material")
    model = cfg.material(name, "$.kk.material")
    xi = grid(sec.get("xi_rad_s"), "$.kk.xi_rad_s") if "xi_rad_s" in sec else None
    if xi is None:
        raise ConfigError("$.kk.xi_rad_s", "missing required key")
    try:
        eps = np.asarray(model.eps_imag(np.asarray(xi)), dtype=float)
    except CasimirError as exc:
        raise ConfigError("$.kk", str(exc)) from exc
    _emit(_csv_text(("xi_rad_s", "eps"), zip(map(float, xi), map(float, eps))), args.out)
    _write_svg(args.svg, {name: (xi, eps - 1.0)}, xlabel="xi (rad/s)", ylabel="eps(i xi) - 1")


def cmd_roughness(args):
    cfg = RunConfig.load(args.config)
    sec = cfg.section("roughness")
    path = cfg.resolve(sec.get("heightmap_csv", ""))
    width = sec.get("width")
    try:
        hmap = HeightMap.from_csv(path, width=width, pitch=float(sec.get("pitch_m", 1.0)))
    except (OSError, ValueError) as exc:
        raise ConfigError("$.roughness.heightmap_csv", str(exc)) from exc
    scale = float(sec.get("height_scale", 1.0))
    if scale != 1.0:
        hmap = HeightMap(hmap.heights * scale, hmap.pitch)
    profile = histogram_from_heightmap(hmap, int(sec.get("n_bins", 32)))
    _emit(json.dumps(profile.to_dict(), indent=2) + "\n", args.out)


def _force_law(cfg, sec, params, plan):
    law = sec.get("force_law", {"type": "ideal_metal"})
    kind = law.get("type") if isinstance(law, dict) else None
    if kind == "zero":
        return zero_force, (1e-9, 1e-5)
    if kind == "ideal_metal":
        return partial(ideal_metal_force, params.radius), (1e-9, 1e-5)
    if kind == "lifshitz":
        setup_sec = {**law, "radius_m": params.radius, "separations_m": [1.0]}
        setup = cfg.force_setup(setup_sec, "$.synth.force_law")
        d = params.d0_true - np.asarray(plan.d_pz_values)
        lo, hi = 0.5 * d.min(), 1.5 * d.max()
        dense = np.geomspace(lo, hi, 48)
        pts = force_curve(setup["sphere"], setup["plate"], setup["gap"], setup["radius"],
                          dense, setup["quad"])
        interp = InterpolatedForce(dense, [f for _, f in pts])
        return (lambda x: np.abs(interp(x))), (lo * 1.01, hi * 0.99)
    raise ConfigError("$.synth.force_law.type", f"unknown force law {kind!r}")


def cmd_synth(args):
    cfg = RunConfig.load(args.config)
    sec = cfg.section("synth")
    mtb = sec.get("mtb", {})
    try:
        params = MtbParams(**{k: float(v) for k, v in mtb.items()})
    except TypeError as exc:
        raise ConfigError("$.synth.mtb", str(exc)) from exc
    plan_sec = sec.get("plan", {})
    if "d_pz_m" not in plan_sec:
        raise ConfigError("$.synth.plan.d_pz_m", "missing required key")
    kw = {"d_pz_values": grid(plan_sec["d_pz_m"], "$.synth.plan.d_pz_m"),
          "seed": int(args.seed if args.seed is not None else plan_sec.get("seed", 0))}
    if "v_bias_V" in plan_sec:
        kw["v_bias_values"] = grid(plan_sec["v_bias_V"], "$.synth.plan.v_bias_V")
    plan = SweepPlan(**kw)
    law, jtc_range = _force_law(cfg, sec, params, plan)
    records = simulate_dataset(params, plan, law, rotation=bool(sec.get("rotation", False)),
                               jtc_range=jtc_range)
    rows = [(r.sweep_id, r.d_pz, float(v), float(a))
            for r in records for v, a in zip(r.v_bias, r.a)]
    _emit(_csv_text(DATASET_COLUMNS, rows), args.out)


def read_dataset(path):
    """Sweeps from a ``sweep_id, d_pz_m, v_bias_V, a_au`` CSV."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(DATASET_COLUMNS) - set(reader.fieldnames):
            raise ConfigError(str(path), f"dataset needs columns {', '.join(DATASET_COLUMNS)}")
        groups = defaultdict(list)
        for row in reader:
            groups[row["sweep_id"]].append(
                (float(row["d_pz_m"]), float(row["v_bias_V"]), float(row["a_au"])))
    sweeps = []
    for sid, pts in groups.items():
        d_pz = {p[0] for p in pts}
        if len(d_pz) != 1:
            raise ConfigError(str(path), f"sweep {sid} mixes piezo extensions")
        sweeps.append(SweepRecord(pts[0][0], [p[1] for p in pts], [p[2] for p in pts], sweep_id=sid))
    return sweeps


def cmd_analyze(args):
    cfg = RunConfig.load(args.config)
    sec = cfg.section("analyze")
    data = Path(args.data) if args.data else cfg.resolve(sec.get("data_csv", ""))
    if "radius_m" not in sec:
        raise ConfigError("$.analyze.radius_m", "missing required key")
    try:
        sweeps = read_dataset(data)
    except OSError as exc:
        raise ConfigError("$.analyze.data_csv", str(exc)) from exc
    result = analyze(sweeps, float(sec["radius_m"]))
    text = json.dumps(result.to_dict(), indent=2) + "\n"
    rows = list(zip(result.d.tolist(), result.f_c.tolist(), result.f_c_err.tolist()))
    curve = _csv_text(("d_m", "abs_force_N", "abs_force_err_N"), rows)
    if args.out is None:
        sys.stdout.write(text)
    else:
        out = Path(args.out)
        out.write_text(text)
        out.with_suffix(".csv").write_text(curve)
    _write_svg(args.svg, {"|F_C|": (result.d.tolist(), result.f_c.tolist())})


def build_parser():
    parser = argparse.ArgumentParser(prog="casimirlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, multi_config=False):
        p = sub.add_parser(name, help=help_text)
        if multi_config:
            p.add_argument("--config", action="append", required=True,
                           help="config file (give twice to compare two files)")
        else:
            p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--svg", help="optional log-log SVG plot")
        p.add_argument("--seed", type=int, help="random seed override")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for force curves")
        p.set_defaults(func=func)
        return p

    add("force", cmd_force, "Casimir force curve").add_argument(
        "--roughness", help="sphere.json,plate.json roughness profiles")
    add("compare", cmd_compare, "ratio of two force curves", multi_config=True)
    add("kk", cmd_kk, "permittivity on the imaginary axis")
    add("roughness", cmd_roughness, "height map -> displacement histogram")
    add("synth", cmd_synth, "synthetic torsional-balance dataset")
    add("analyze", cmd_analyze, "calibrate and extract the Casimir force").add_argument(
        "--data", help="dataset CSV (overrides $.analyze.data_csv)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if not hasattr(args, "roughness"):
        args.roughness = None
    try:
        args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CasimirError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
