"""Command-line front door: group-spec ingestion, pipeline orchestration,
and report emission.

Every subcommand prints a JSON report on stdout and optionally writes
artifacts under --out.  `--expect '<json>'` asserts a subset of the report:
the exit status is 0 iff every asserted key matches (numerics within --tol
relative).  Configuration errors exit with status 2 and a machine-readable
error JSON on stderr.
"""

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import admissibility as adm
from . import catalog as cat
from . import dual
from . import group as grp
from . import transform as tfm
from .wigner import equivalence_check as _equivalence_check
from .grid import GridFunction, frequency_bump, idft


def _np_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _dumps(payload, **kw):
    return json.dumps(payload, default=_np_default, **kw)


def _fail(message, **extra):
    payload = {"error": message}
    payload.update(extra)
    click.echo(_dumps(payload), err=True)
    sys.exit(2)


def _resolve_spec(group_path, catalog_id):
    if (group_path is None) == (catalog_id is None):
        _fail("provide exactly one of --group <spec.json> or --catalog <id>")
    try:
        if group_path is not None:
            return grp.spec_from_json(Path(group_path).read_text())
        return cat.get_entry(catalog_id).spec
    except (OSError, KeyError, ValueError, grp.GroupSpecError) as exc:
        _fail(f"cannot resolve group spec: {exc}")


def _parse_boxes(raw):
    """Parse repeated 'lo,hi,count' flags into ([[lo, hi], ...], [count, ...])."""
    boxes, counts = [], []
    for item in raw:
        parts = item.split(",")
        if len(parts) != 3:
            _fail(f"expected 'lo,hi,count', got {item!r}")
        boxes.append([float(parts[0]), float(parts[1])])
        counts.append(int(parts[2]))
    return boxes, counts


def _parse_grid(raw):
    try:
        n_str, l_str = raw.split(",")
        return int(n_str), float(l_str)
    except ValueError:
        _fail(f"--grid expects 'N,L', got {raw!r}")


def _parse_vec(raw):
    return np.array([float(p) for p in raw.split(",")])


def _match(report, expect, tol):
    """Subset comparison of expectation against the report dictionary."""
    mismatches = {}
    for key, want in expect.items():
        got = report.get(key, "<missing>")
        if isinstance(want, (int, float)) and not isinstance(want, bool) \
                and isinstance(got, (int, float)) and not isinstance(got, bool):
            ok = abs(got - want) <= tol * max(abs(want), 1.0)
        else:
            ok = got == want
        if not ok:
            mismatches[key] = {"expected": want, "actual": got}
    return mismatches


def _emit(report, expect_json, tol, out=None, name=None):
    """Print the report, write it if requested, and apply --expect."""
    if out is not None and name is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(_dumps(report, indent=2))
    click.echo(_dumps(report, indent=2))
    if expect_json:
        try:
            expect = json.loads(expect_json)
        except json.JSONDecodeError as exc:
            _fail(f"--expect is not valid JSON: {exc}")
        mismatches = _match(report, expect, tol)
        if mismatches:
            click.echo(_dumps({"expect_mismatches": mismatches}), err=True)
            sys.exit(1)
    sys.exit(0)


def _spec_options(fn):
    fn = click.option("--group", "group_path", type=click.Path(), default=None,
                      help="Path to a JSON group spec.")(fn)
    fn = click.option("--catalog", "catalog_id", default=None,
                      help="Catalog id, e.g. 'dim2_family:0,1'.")(fn)
    return fn


def _report_options(fn):
    fn = click.option("--expect", "expect_json", default=None,
                      help="JSON object asserted against the report.")(fn)
    fn = click.option("--tol", default=1e-6, show_default=True,
                      help="Relative tolerance for numeric --expect values.")(fn)
    fn = click.option("--out", default=None, type=click.Path(),
                      help="Directory for artifacts.")(fn)
    return fn


@click.group()
def main():
    """Admissibility analysis and generalized wavelet transforms for
    translation complete subgroups of the affine Weyl-Heisenberg group."""


# ---------------------------------------------------------------- group


@main.group("group")
def group_cmd():
    """Structural checks on a group spec."""


@group_cmd.command("check")
@_spec_options
@_report_options
def group_check(group_path, catalog_id, expect_json, tol, out):
    """Verify the spec defines a translation complete subgroup."""
    spec = _resolve_spec(group_path, catalog_id)
    complete = grp.check_translation_complete(spec)
    report = {
        "name": spec.name,
        "n": spec.n, "k": spec.k, "d": spec.d,
        "translation_complete": bool(complete),
    }
    if not complete:
        report["error"] = "not translation complete"
        click.echo(_dumps(report, indent=2))
        sys.exit(1)
    report["unimodular"] = grp.is_unimodular(spec)
    _emit(report, expect_json, tol, out, "group_check.json")


@main.command("modular")
@_spec_options
@click.option("--params", default=None, help="Dilation parameters t (comma-separated).")
@_report_options
def modular(group_path, catalog_id, params, expect_json, tol, out):
    """Haar density and modular functions at one parameter point."""
    spec = _resolve_spec(group_path, catalog_id)
    t = _parse_vec(params) if params else np.full(spec.d, 0.5)
    if t.size != spec.d:
        _fail(f"--params needs {spec.d} components")
    g = spec.element(1.0, np.zeros(spec.n), np.zeros(spec.k), t)
    hw = grp.modular_functions(spec, g)
    report = {
        "name": spec.name, "t": t.tolist(),
        "haar_density": hw.density,
        "delta_g_closed_form": hw.delta_g_closed_form,
        "delta_g_numeric": hw.delta_g_numeric,
        "delta_h": hw.delta_h,
        "delta_semidirect": hw.delta_semidirect,
        "numeric_reliable": hw.numeric_reliable,
        "unimodular": grp.is_unimodular(spec),
    }
    _emit(report, expect_json, tol, out, "modular.json")


# ---------------------------------------------------------------- orbits


@main.command("orbits")
@_spec_options
@_report_options
def orbits(group_path, catalog_id, expect_json, tol, out):
    """Classify open dual orbits; table on stderr, JSON report on stdout."""
    spec = _resolve_spec(group_path, catalog_id)
    rep = dual.orbit_report(spec)
    rows = ["orbit  representative                 open  free  stab_dim  compact"]
    for i, o in enumerate(rep.orbits):
        rows.append(f"{i:>5}  {np.array2string(np.asarray(o['representative']), precision=2):<30} "
                    f"{str(o['open']):<5} {str(o['free']):<5} "
                    f"{o['stabilizer_dim']:>8}  {o['compact_stabilizer']}")
    click.echo("\n".join(rows), err=True)
    _emit(rep.to_json_dict(), expect_json, tol, out, "orbits.json")


# ---------------------------------------------------------------- admissibility


def _load_or_seed_wavelet(wavelet, grid, center, width):
    if wavelet is not None:
        f = GridFunction.load(wavelet)
        return f if f.domain == "frequency" else None, f
    N, L = _parse_grid(grid)
    c = _parse_vec(center)
    return frequency_bump(len(c), N, L, center=c, width=width), None


def _quad_from_flags(spec, quad_xi, quad_t, center=None):
    if quad_xi or quad_t:
        u_boxes, u_counts = _parse_boxes(quad_xi)
        t_boxes, t_counts = _parse_boxes(quad_t)
        if len(u_boxes) != spec.k or len(t_boxes) != spec.d:
            _fail(f"need {spec.k} --quad-xi and {spec.d} --quad-t boxes")
        return adm.QuadratureScheme.build(
            u_boxes, t_boxes,
            n_u=u_counts[0] if u_counts else 32,
            n_t=t_counts[0] if t_counts else 48)
    band = None if center is None else np.asarray(center[: spec.k])
    return adm.default_quadrature(spec, band_center=band)


@main.command("admissibility")
@_spec_options
@click.option("--wavelet", type=click.Path(), default=None,
              help="GridFunction binary; omit to seed a frequency bump.")
@click.option("--grid", default="128,16", show_default=True, help="N,L for a seeded bump.")
@click.option("--center", default=None, help="Bump center (ambient frequency).")
@click.option("--width", default=0.7, show_default=True)
@click.option("--freq", "freqs", multiple=True,
              help="Test frequency (comma-separated); repeatable.")
@click.option("--quad-xi", multiple=True, help="Band box 'lo,hi,count' per V axis.")
@click.option("--quad-t", multiple=True, help="Parameter box 'lo,hi,count' per t axis.")
@_report_options
def admissibility(group_path, catalog_id, wavelet, grid, center, width, freqs,
                  quad_xi, quad_t, expect_json, tol, out):
    """Calderon-criterion verdict for a wavelet on the chosen group."""
    spec = _resolve_spec(group_path, catalog_id)
    if wavelet is None and center is None:
        _fail("provide --wavelet or a --center for a seeded bump")
    psihat, raw = _load_or_seed_wavelet(wavelet, grid, center, width)
    if psihat is None:
        from .grid import dft
        psihat = dft(raw)
    if psihat.n != spec.n:
        _fail(f"wavelet dimension {psihat.n} != group dimension {spec.n}")
    c = _parse_vec(center) if center else None
    quad = _quad_from_flags(spec, quad_xi, quad_t, center=c)
    if freqs:
        test = np.stack([_parse_vec(fstr) for fstr in freqs])
    elif c is not None:
        rng = np.random.default_rng(0)
        test = c[None, :] + 0.3 * rng.standard_normal((8, spec.n))
    else:
        _fail("provide --freq test frequencies or a --center")
    rep = adm.admissibility_report(spec, psihat, test, quad)
    _emit(rep.to_json_dict(), expect_json, tol, out, "admissibility.json")


@main.command("make-wavelet")
@_spec_options
@click.option("--grid", default="128,16", show_default=True, help="N,L of the grid.")
@click.option("--center", required=True, help="Seed bump center (ambient frequency).")
@click.option("--width", default=0.7, show_default=True)
@click.option("--quad-xi", multiple=True, help="Band box 'lo,hi,count' per V axis.")
@click.option("--quad-t", multiple=True, help="Parameter box 'lo,hi,count' per t axis.")
@_report_options
def make_wavelet(group_path, catalog_id, grid, center, width, quad_xi, quad_t,
                 expect_json, tol, out):
    """Normalize a seed bump into an admissible vector and write it out."""
    spec = _resolve_spec(group_path, catalog_id)
    N, L = _parse_grid(grid)
    c = _parse_vec(center)
    if c.size != spec.n:
        _fail(f"--center needs {spec.n} components")
    psihat0 = frequency_bump(spec.n, N, L, center=c, width=width)
    quad = _quad_from_flags(spec, quad_xi, quad_t, center=c)
    try:
        psihat = adm.normalize_admissible(spec, psihat0, quad)
    except ValueError as exc:
        _fail(str(exc))
    outdir = Path(out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "wavelet.bin"
    psihat.save(path)
    check = adm.phi_psi_many(
        spec, psihat, c[None, :] + 0.1 * np.eye(spec.n)[:1], quad)
    report = {"wavelet": str(path), "N": N, "L": L,
              "phi_at_center_offset": float(check[0]),
              "norm_sq": psihat.norm_sq()}
    _emit(report, expect_json, tol, out, "make_wavelet.json")


# ---------------------------------------------------------------- transform


def _group_grid_from_flags(spec, quad_xi, quad_t):
    if not quad_xi and spec.k:
        _fail(f"need {spec.k} --quad-xi boxes")
    if not quad_t and spec.d:
        _fail(f"need {spec.d} --quad-t boxes")
    xi_boxes, xi_counts = _parse_boxes(quad_xi)
    t_boxes, t_counts = _parse_boxes(quad_t)
    if len(xi_boxes) != spec.k or len(t_boxes) != spec.d:
        _fail(f"need {spec.k} --quad-xi and {spec.d} --quad-t boxes")
    return tfm.group_grid(spec, xi_boxes or np.zeros((0, 2)),
                          t_boxes or np.zeros((0, 2)),
                          n_xi=xi_counts[0] if xi_counts else 32,
                          n_t=t_counts[0] if t_counts else 48)


@main.command("transform")
@_spec_options
@click.option("--signal", required=True, type=click.Path(), help="GridFunction binary.")
@click.option("--wavelet", required=True, type=click.Path(), help="GridFunction binary.")
@click.option("--quad-xi", multiple=True, help="Modulation box 'lo,hi,count' per V axis.")
@click.option("--quad-t", multiple=True, help="Parameter box 'lo,hi,count' per t axis.")
@_report_options
def transform(group_path, catalog_id, signal, wavelet, quad_xi, quad_t,
              expect_json, tol, out):
    """Wavelet coefficients of a signal on a sampled group grid."""
    spec = _resolve_spec(group_path, catalog_id)
    try:
        f = GridFunction.load(signal)
        psi = GridFunction.load(wavelet)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot load grids: {exc}")
    nodes = _group_grid_from_flags(spec, quad_xi, quad_t)
    field = tfm.analyze(spec, f, psi, nodes)
    outdir = Path(out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "coefficients.bin"
    field.save(path)
    report = {
        "coefficients": str(path),
        "nodes_xi": len(field.xi_nodes), "nodes_t": len(field.t_nodes),
        "coefficient_norm_sq": tfm.coefficient_norm_sq(field),
        "signal_norm_sq": f.norm_sq(),
    }
    _emit(report, expect_json, tol, out, "transform.json")


@main.command("reconstruct")
@_spec_options
@click.option("--coeffs", required=True, type=click.Path(),
              help="CoefficientField binary from `transform`.")
@click.option("--wavelet", required=True, type=click.Path(), help="GridFunction binary.")
@click.option("--signal", type=click.Path(), default=None,
              help="Original signal for the residual report.")
@click.option("--cpsi", default=1.0, show_default=True,
              help="Admissibility constant dividing the synthesis sum.")
@_report_options
def reconstruct(group_path, catalog_id, coeffs, wavelet, signal, cpsi,
                expect_json, tol, out):
    """Invert a coefficient field back to a signal."""
    spec = _resolve_spec(group_path, catalog_id)
    try:
        field = tfm.CoefficientField.load(coeffs)
        psi = GridFunction.load(wavelet)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot load inputs: {exc}")
    rec = tfm.synthesize(spec, field, psi, C=cpsi)
    outdir = Path(out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "reconstruction.bin"
    rec.save(path)
    report = {"reconstruction": str(path), "norm_sq": rec.norm_sq()}
    if signal is not None:
        f = GridFunction.load(signal)
        fs = f if f.domain == "space" else idft(f)
        num = float(np.sum(np.abs(fs.data - rec.data) ** 2) * fs.cell())
        report["relative_residual"] = float(np.sqrt(num / max(fs.norm_sq(), 1e-300)))
    _emit(report, expect_json, tol, out, "reconstruct.json")


# ---------------------------------------------------------------- wigner


@main.command("wigner-compare")
@_spec_options
@click.option("--wavelet", required=True, type=click.Path(), help="GridFunction binary.")
@click.option("--point", "points", multiple=True, required=True,
              help="Phase-space point 'x1,..,xn,xi1,..,xin'; repeatable.")
@click.option("--quad-xi", multiple=True, help="Band box 'lo,hi,count' per V axis.")
@click.option("--quad-t", multiple=True, help="Parameter box 'lo,hi,count' per t axis.")
@_report_options
def wigner_compare(group_path, catalog_id, wavelet, points, quad_xi, quad_t,
                   expect_json, tol, out):
    """Phase-space admissibility integral vs the Calderon function."""
    spec = _resolve_spec(group_path, catalog_id)
    psi = GridFunction.load(wavelet)
    ps = psi if psi.domain == "space" else idft(psi)
    pts = []
    for raw in points:
        v = _parse_vec(raw)
        if v.size != 2 * spec.n:
            _fail(f"--point needs {2 * spec.n} components")
        pts.append((v[: spec.n], v[spec.n:]))
    quad = _quad_from_flags(spec, quad_xi, quad_t,
                            center=pts[0][1] if pts else None)
    kw = {}
    if quad_t:
        t_boxes, t_counts = _parse_boxes(quad_t)
        kw = {"t_box": t_boxes, "n_t": t_counts[0] | 1}
    rep = _equivalence_check(spec, ps, pts, quad, wigner_kwargs=kw)
    if out is not None:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        lines = ["x,xi,wigner_integral,calderon,rel_deviation"]
        for r in rep["points"]:
            lines.append(";".join(map(str, r["x"])) + ","
                         + ";".join(map(str, r["xi"])) + ","
                         + f"{r['wigner_integral']},{r['calderon']},{r['rel_deviation']}")
        (outdir / "wigner_compare.csv").write_text("\n".join(lines))
    _emit(rep, expect_json, tol, out, "wigner_compare.json")


# ---------------------------------------------------------------- catalog


@main.group("catalog")
def catalog_cmd():
    """The built-in library of concrete group families."""


@catalog_cmd.command("list")
def catalog_list():
    click.echo(_dumps(cat.entry_ids(), indent=2))


@catalog_cmd.command("emit")
@click.argument("entry_id")
@click.option("--params", default=None,
              help="Comma-separated factory parameters appended to the id.")
@_report_options
def catalog_emit(entry_id, params, expect_json, tol, out):
    """Emit the JSON group-spec document for a catalog entry."""
    full = entry_id if params is None else f"{entry_id}:{params}"
    try:
        entry = cat.get_entry(full)
    except KeyError as exc:
        _fail(str(exc))
    doc = entry.spec.to_json_dict()
    doc["expected"] = {k: v for k, v in entry.expected.items()
                      if isinstance(v, (bool, int, float, str, type(None)))}
    _emit(doc, expect_json, tol, out, "group_spec.json")


if __name__ == "__main__":
    main()
