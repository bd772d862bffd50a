"""Command-line entry point: ``relosc {verify,spectrum,density,spin-sweep,wavefront}``.

Every emitted file starts with ``#`` metadata lines that embed the resolved
:class:`RunConfig` as JSON, so any output can be regenerated from itself.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
import warnings
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy.integrate import trapezoid

from . import __version__
from .bispinor import GammaSet, build_bispinor, closed_form_norm, dirac_residual, factorization_check
from .core import ConfigError, OscillatorConfig, degeneracy, kinematics, rest_mass_sq
from .observables import (
    oam_closed_form,
    phase_surface,
    sam_closed_form,
    spin_composition_sweep,
    tam_expect,
)
from .operators import (
    first_moments_vanish,
    ground_state_couples,
    identity_P_dot_alpha,
    identity_product,
    ladder,
    normalized_max,
    probe_points,
    random_corpus,
)
from .polyfield import Envelope
from .scalar_field import (
    binding_energy,
    build_psi,
    constraint_residuals,
    kge_residual,
    norm,
    second_moment,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("verify", "spectrum", "density", "spin-sweep", "wavefront")

VERIFY_BETAS = (0.0, 0.5, 0.9)
VERIFY_STATES = ((0, 0, 0), (1, 0, 0), (0, 1, 1), (1, 1, 1), (0, 0, 3))
TOL_RESIDUAL = 1e-9
TOL_ANNIHILATION = 1e-12
TOL_IDENTITY = 1e-10
TOL_QUADRATURE = 1e-10
TOL_TAM = 1e-9


@dataclass(frozen=True)
class RunConfig:
    """Fully serialisable description of one CLI invocation."""

    command: str = "verify"
    m: float = 1.0
    Omega: float | None = None
    critical: bool = True
    beta: float = 0.0
    beta_grid: tuple[float, float, int] | None = None
    uvw: tuple[int, int, int] = (0, 0, 0)
    s: float = 0.5
    sign: str = "+"
    quad_order: int = 40
    out: str | None = None
    format: str = "csv"
    seed: int = 0
    n_max: int = 5
    grid_points: int = 25
    extent: float = 4.0
    marginal: bool = False
    radius: float = 1.0
    component: int | None = None

    @property
    def omega(self) -> float:
        """Resolved spring constant."""
        if self.critical or self.Omega is None:
            return 2.0 * self.m * self.m / 3.0
        return self.Omega

    def betas(self) -> np.ndarray:
        if self.beta_grid is None:
            return np.array([self.beta])
        a, b, n = self.beta_grid
        return np.linspace(a, b, int(n))

    def oscillator(self, **changes) -> OscillatorConfig:
        kw = dict(m=self.m, Omega=self.omega, beta=self.beta, qn=self.uvw, s=self.s)
        kw.update(changes)
        return OscillatorConfig(**kw)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        d = json.loads(text)
        for key in ("beta_grid", "uvw"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        if d.get("beta_grid") is not None:
            a, b, n = d["beta_grid"]
            d["beta_grid"] = (float(a), float(b), int(n))
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


# -- output


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


def render(rc: RunConfig, columns, rows, meta: dict | None = None) -> str:
    """Serialise a table with its metadata block in ``rc.format``."""
    meta = dict(meta or {})
    if rc.format == "json":
        doc = {
            "tool": f"relosc {__version__}",
            "config": json.loads(rc.to_json()),
            "meta": meta,
            "columns": list(columns),
            "rows": [[_jsonable(v) for v in r] for r in rows],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    lines = [f"# tool: relosc {__version__}", f"# config: {rc.to_json()}"]
    for k in sorted(meta):
        lines.append(f"# {k}: {json.dumps(meta[k], sort_keys=True)}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows([_fmt(v) for v in r] for r in rows)
    return "\n".join(lines) + "\n" + buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".relosc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(rc: RunConfig, text: str) -> None:
    if rc.out:
        write_atomic(rc.out, text)
    else:
        sys.stdout.write(text)


def read_config(path: str) -> RunConfig:
    """Recover the RunConfig embedded in an emitted file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return RunConfig.from_json(json.dumps(json.loads(text)["config"]))
    for line in text.splitlines():
        if line.startswith("# config: "):
            return RunConfig.from_json(line[len("# config: "):])
    raise ValueError(f"{path} carries no config metadata")


def read_meta(path: str) -> dict:
    """Metadata entries of an emitted file (excluding the config)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return json.loads(text)["meta"]
    out = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            break
        key, _, val = line[2:].partition(": ")
        if key not in ("tool", "config"):
            out[key] = json.loads(val)
    return out


# -- verify


@dataclass
class Check:
    name: str
    anchor: str
    measured: float
    tolerance: float
    status: str = ""
    reason: str = ""

    def __post_init__(self):
        if not self.status:
            ok = math.isfinite(self.measured) and self.measured <= self.tolerance
            self.status = "pass" if ok else "fail"

    def row(self):
        return (self.name, self.anchor, self.measured, self.tolerance, self.status, self.reason)


def _skip(name: str, anchor: str, tol: float, reason: str) -> Check:
    return Check(name, anchor, float("nan"), tol, "skip", reason)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def verify_checks(rc: RunConfig) -> list[Check]:
    """Run the invariant suite for ``rc.m`` and the resolved spring constant."""
    order = rc.quad_order
    m, Om = rc.m, rc.omega
    checks: list[Check] = []
    add = checks.append

    # spectrum
    worst = 0.0
    for n in range(6):
        cfg = OscillatorConfig(m=m, Omega=Om, qn=(0, 0, n))
        worst = max(worst, _rel(kinematics(cfg).M ** 2, Om * (1.5 + n) + m * m))
        if sum(1 for u in range(n + 1) for v in range(n + 1 - u)) != degeneracy(n):
            worst = float("inf")
    add(Check("mass formula and degeneracy n<=5", "rest mass squared", worst, 1e-15))
    if m > 0:
        small = OscillatorConfig(m=m, Omega=2e-3 * m * m)
        eo = small.Omega / (2 * m) * 1.5
        add(Check("non-relativistic limit", "binding energy", abs(binding_energy(small) - eo) / eo, 1e-3))

    # Klein-Gordon states
    for uvw in VERIFY_STATES:
        for b in VERIFY_BETAS:
            cfg = OscillatorConfig(m=m, Omega=Om, beta=b, qn=uvw, s=rc.s)
            psi = build_psi(cfg)
            tag = f"n={uvw} beta={b}"
            add(Check(f"KGE residual {tag}", "constraint Klein-Gordon equation", kge_residual(psi, cfg, seed=rc.seed), TOL_RESIDUAL))
            cr = constraint_residuals(psi, cfg, seed=rc.seed)
            add(Check(f"P.P = M^2 {tag}", "mass-shell constraint", cr["pp"], TOL_RESIDUAL))
            add(Check(f"P.Q = 0 {tag}", "relative-time constraint", cr["pq"], TOL_RESIDUAL))
            add(Check(f"norm {tag}", "instant-form normalisation", abs(norm(psi, order) - 1.0), TOL_QUADRATURE))
            if uvw[0] != uvw[2]:
                continue
            r1 = second_moment(psi, 1, order)
            r3 = second_moment(psi, 3, order)
            add(Check(f"Lorentz contraction {tag}", "contracted Gaussian", _rel(cfg.gamma**2 * r3, r1), TOL_QUADRATURE))

    # ladder algebra
    for b in VERIFY_BETAS:
        cfg = OscillatorConfig(m=m, Omega=Om, beta=b, s=rc.s)
        psi = build_psi(cfg)
        pts = probe_points(cfg.length_scale, rc.seed)
        worst = max(normalized_max(ladder(mu, "-", cfg)(psi), psi, pts, Om) for mu in range(4))
        add(Check(f"annihilation beta={b}", "lowering operators kill the ground state", worst, TOL_ANNIHILATION))
        gs = ground_state_couples(cfg, seed=rc.seed)
        dev = max(_rel(gs[k], gs["expected"][k]) if gs["expected"][k] else abs(gs[k]) for k in ("c0", "c1", "c2", "c3", "sum"))
        add(Check(f"raise-lower coefficients beta={b}", "ground-state ladder products", max(dev, gs["spread"]), TOL_IDENTITY))
        add(Check(f"first moments beta={b}", "vanishing ladder expectation", first_moments_vanish(cfg, order), TOL_IDENTITY))
        corpus = random_corpus(Envelope(Om, b), seed=12345 + rc.seed, momentum=kinematics(cfg).P)
        add(Check(f"P.alpha = 0 corpus beta={b}", "ladder transversality", max(identity_P_dot_alpha(cfg, f, seed=rc.seed) for f in corpus), TOL_IDENTITY))
        for sg in ("+", "-"):
            worst = max(identity_product(cfg, sg, f, seed=rc.seed) for f in corpus)
            add(Check(f"alpha{sg}.alpha corpus beta={b}", "ladder product identity", worst, TOL_IDENTITY))
            if sg == "+" and cfg.over_critical:
                continue
            fac = max(factorization_check(cfg, sg, f, seed=rc.seed) for f in corpus[:5])
            add(Check(f"factorisation {sg} beta={b}", "shifted-momentum factorisation", fac, TOL_IDENTITY))

    # bispinors
    add(Check("gamma anticommutators", "Clifford algebra", GammaSet.dirac().anticommutator_defect(), 1e-15))
    for sg in ("+", "-"):
        for b in VERIFY_BETAS:
            for s in (0.5, -0.5):
                tag = f"{sg} s={s:+.1f} beta={b}"
                cfg = OscillatorConfig(m=m, Omega=Om, beta=b, s=s)
                if sg == "+" and cfg.over_critical:
                    reason = "m_minus^2 < 0: raising branch has no real mass"
                    for name, anchor, tol in (
                        ("bispinor norm", "closed-form normalisation", TOL_QUADRATURE),
                        ("Dirac residual", "Dirac equation", TOL_RESIDUAL),
                        ("TAM", "total angular momentum", TOL_TAM),
                    ):
                        add(_skip(f"{name} {tag}", anchor, tol, reason))
                    continue
                bs = build_bispinor(cfg, sg, s, order)
                add(Check(f"bispinor norm {tag}", "closed-form normalisation", _rel(bs.norm, closed_form_norm(cfg, sg)), TOL_QUADRATURE))
                add(Check(f"Dirac residual {tag}", "Dirac equation", dirac_residual(bs, seed=rc.seed), TOL_RESIDUAL))
                tam = tam_expect(bs, order)
                add(Check(f"TAM {tag}", "total angular momentum", abs(tam - s), TOL_TAM))
                if sg == "+":
                    from .observables import oam_expect, sam_expect

                    add(Check(f"SAM closed form {tag}", "spin angular momentum", abs(sam_expect(bs, order) - sam_closed_form(cfg, sg, s)), TOL_TAM))
                    add(Check(f"OAM closed form {tag}", "orbital angular momentum", abs(oam_expect(bs, order) - oam_closed_form(cfg, sg, s)), TOL_TAM))
    return checks


def cmd_verify(rc: RunConfig) -> int:
    t0 = time.perf_counter()
    checks = verify_checks(rc)
    elapsed = time.perf_counter() - t0
    failed = [c for c in checks if c.status == "fail"]
    meta = {
        "n_checks": len(checks),
        "n_fail": len(failed),
        "n_skip": sum(c.status == "skip" for c in checks),
    }
    cols = ("name", "anchor", "measured", "tolerance", "status", "reason")
    emit(rc, render(rc, cols, [c.row() for c in checks], meta))
    for c in failed:
        print(f"FAIL {c.name}: {c.measured:.3e} > {c.tolerance:.1e}", file=sys.stderr)
    print(f"verify: {len(checks) - len(failed)}/{len(checks)} ok ({meta['n_skip']} skipped) in {elapsed:.1f} s", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# -- data commands


def cmd_spectrum(rc: RunConfig) -> int:
    if rc.n_max < 0:
        raise ConfigError("n-max must be non-negative")
    Om = rc.omega if rc.critical or rc.Omega is None else rc.Omega
    if Om < 0:
        raise ConfigError("Omega must be non-negative")
    if not 0 <= rc.beta < 1:
        raise ConfigError("beta must lie in [0, 1)")
    g = 1.0 / math.sqrt(1.0 - rc.beta**2)
    rows = []
    for n in range(rc.n_max + 1):
        M = math.sqrt(rest_mass_sq(rc.m, Om, n))
        eo = Om / (2.0 * rc.m) * (1.5 + n) if rc.m > 0 else float("nan")
        rows.append((n, degeneracy(n), M, g * M, eo))
    emit(rc, render(rc, ("n", "degeneracy", "M", "E", "E_O"), rows))
    return EXIT_OK


def cmd_density(rc: RunConfig) -> int:
    if rc.grid_points < 2 or rc.extent <= 0:
        raise ConfigError("density grid needs >= 2 points and a positive extent")
    cfg = rc.oscillator()
    psi = build_psi(cfg)
    x = np.linspace(-rc.extent, rc.extent, rc.grid_points) * cfg.length_scale
    R1, R2, R3 = np.meshgrid(x, x, x, indexing="ij")
    rho = np.abs(psi(0.0, R1, R2, R3)) ** 2
    integral = float(trapezoid(trapezoid(trapezoid(rho, x, axis=2), x, axis=1), x, axis=0))
    meta = {
        "integral_trapezoid": integral,
        "integral_tolerance": 1e-6,
        "gamma": cfg.gamma,
    }
    if rc.marginal:
        rows = []
        for axis, name in ((0, "r1"), (1, "r2"), (2, "r3")):
            others = tuple(a for a in range(3) if a != axis)
            marg = trapezoid(trapezoid(rho, x, axis=others[1]), x, axis=others[0])
            rows.extend((name, xi, mi) for xi, mi in zip(x, marg))
        emit(rc, render(rc, ("axis", "coordinate", "marginal"), rows, meta))
        return EXIT_OK
    rows = zip(R1.ravel(), R2.ravel(), R3.ravel(), rho.ravel())
    emit(rc, render(rc, ("r1", "r2", "r3", "density"), list(rows), meta))
    return EXIT_OK


def cmd_spin_sweep(rc: RunConfig) -> int:
    cfg = rc.oscillator(beta=0.0)
    if rc.sign == "+" and cfg.over_critical:
        raise ConfigError("spin sweep of the raising branch needs m_minus^2 >= 0")
    betas = np.linspace(0.0, 0.99, 101) if rc.beta_grid is None else rc.betas()
    Om = "critical" if rc.critical or rc.Omega is None else rc.Omega
    rows = spin_composition_sweep(rc.m, Om, betas, rc.s, rc.sign, rc.quad_order)
    cols = ("beta", "sam_over_s", "oam_over_s", "tam_over_s", "sam_closed", "oam_closed", "abs_err_sam", "abs_err_oam")
    data = [(r.beta, r.sam, r.oam, r.tam, r.sam_closed, r.oam_closed, r.abs_err_sam, r.abs_err_oam) for r in rows]
    emit(rc, render(rc, cols, data))
    return EXIT_OK


def cmd_wavefront(rc: RunConfig) -> int:
    if rc.sign != "+":
        raise ConfigError("wavefronts are defined for the raising branch (--sign +)")
    cfg = rc.oscillator(qn=(0, 0, 0))
    if cfg.over_critical:
        raise ConfigError("raising branch needs m_minus^2 >= 0")
    if rc.radius < 0:
        raise ConfigError("radius must be non-negative")
    bs = build_bispinor(cfg, "+", rc.s, rc.quad_order)
    radius = rc.radius * cfg.length_scale
    surf = phase_surface(bs, rc.component, R=radius)
    meta = {
        "component": surf.component,
        "kind": surf.kind,
        "winding": surf.winding,
        "longitudinal_axis": surf.longitudinal_axis,
        "wavelength": surf.wavelength,
    }
    rows = [(p[0], p[1], p[2], surf.kind) for p in surf.points]
    emit(rc, render(rc, ("x1", "x2", "x_long", "kind"), rows, meta))
    return EXIT_OK


HANDLERS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "density": cmd_density,
    "spin-sweep": cmd_spin_sweep,
    "wavefront": cmd_wavefront,
}


# -- argument parsing


def _pm(text: str) -> str:
    t = text.strip()
    if t in ("+", "+1/2", "1/2", "0.5", "+0.5", "up"):
        return "+"
    if t in ("-", "-1/2", "-0.5", "down"):
        return "-"
    raise argparse.ArgumentTypeError(f"expected + or -, got {text!r}")


def _uvw(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected u,v,w integers, got {text!r}") from None
    if len(parts) != 3 or min(parts) < 0:
        raise argparse.ArgumentTypeError(f"expected three non-negative integers, got {text!r}")
    return parts


def _grid(text: str) -> tuple[float, float, int]:
    try:
        a, b, n = text.split(":")
        out = (float(a), float(b), int(n))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}") from None
    if out[2] < 1:
        raise argparse.ArgumentTypeError("count must be positive")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=float, default=1.0, help="constituent mass")
    om = common.add_mutually_exclusive_group()
    om.add_argument("--omega", type=float, default=None, help="spring constant")
    om.add_argument("--critical-omega", action="store_true", help="use Omega = 2 m^2 / 3 (default)")
    bg = common.add_mutually_exclusive_group()
    bg.add_argument("--beta", type=float, default=None)
    bg.add_argument("--beta-grid", type=_grid, default=None, metavar="START:STOP:COUNT")
    common.add_argument("--uvw", type=_uvw, default=(0, 0, 0), metavar="U,V,W")
    common.add_argument("--s", type=_pm, default="+", help="spin projection sign")
    common.add_argument("--sign", type=_pm, default="+", help="ladder branch")
    common.add_argument("--quad-order", type=int, default=40)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (stdout if omitted)")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="relosc", description="Relativistic 3-D oscillator toolkit.")
    parser.add_argument("--version", action="version", version=f"relosc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p = sub.add_parser("spectrum", parents=[common], help="mass spectrum table")
    p.add_argument("--n-max", type=int, default=5)
    p = sub.add_parser("density", parents=[common], help="instant-form density on a grid")
    p.add_argument("--grid-points", type=int, default=25)
    p.add_argument("--extent", type=float, default=4.0, help="half-width in units of sqrt(2/Omega)")
    p.add_argument("--marginal", action="store_true", help="emit 1-D marginals instead of the grid")
    sub.add_parser("spin-sweep", parents=[common], help="SAM/OAM composition versus beta")
    p = sub.add_parser("wavefront", parents=[common], help="iso-phase sheet of one component")
    p.add_argument("--radius", type=float, default=1.0, help="radius in units of sqrt(2/Omega)")
    p.add_argument("--component", type=int, default=None, choices=range(4))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.quad_order < 1:
        raise ConfigError("quad-order must be positive")
    beta, grid = (0.0 if ns.beta is None else ns.beta), ns.beta_grid
    if ns.command == "spin-sweep" and ns.beta is not None:
        grid = (ns.beta, ns.beta, 1)
    return RunConfig(
        command=ns.command,
        m=ns.m,
        Omega=ns.omega,
        critical=ns.omega is None,
        beta=beta,
        beta_grid=grid,
        uvw=tuple(ns.uvw),
        s=0.5 if ns.s == "+" else -0.5,
        sign=ns.sign,
        quad_order=ns.quad_order,
        out=ns.out,
        format=ns.format,
        seed=ns.seed,
        n_max=getattr(ns, "n_max", 5),
        grid_points=getattr(ns, "grid_points", 25),
        extent=getattr(ns, "extent", 4.0),
        marginal=getattr(ns, "marginal", False),
        radius=getattr(ns, "radius", 1.0),
        component=getattr(ns, "component", None),
    )


def run(rc: RunConfig) -> int:
    """Execute a resolved configuration; returns the process exit code."""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return HANDLERS[rc.command](rc)
    except (ConfigError, ValueError) as exc:
        print(f"relosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        rc = config_from_args(ns)
    except ConfigError as exc:
        print(f"relosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(rc)


if __name__ == "__main__":
    sys.exit(main())
