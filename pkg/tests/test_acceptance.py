"""Acceptance criteria 1-10, one test each; every test records a PASS/FAIL line."""
import csv
import itertools
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from relosc.bispinor import build_bispinor, closed_form_norm, dirac_residual
from relosc.cli import main
from relosc.core import OscillatorConfig, degeneracy, kinematics
from relosc.observables import (
    critical_oam_fraction,
    critical_sam_fraction,
    default_beta_grid,
    oam_expect,
    sam_expect,
    spin_composition_sweep,
    tam_expect,
)
from relosc.operators import (
    identity_P_dot_alpha,
    identity_product,
    ladder,
    normalized_max,
    probe_points,
    random_corpus,
)
from relosc.polyfield import Envelope
from relosc.scalar_field import (
    binding_energy,
    build_psi,
    kge_residual,
    nonrelativistic_energy,
    second_moment,
)


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_rest_frame_split():
    t0 = time.perf_counter()
    bs = build_bispinor(OscillatorConfig.critical(1.0), "+", 0.5)
    L, S = oam_expect(bs) / 0.5, sam_expect(bs) / 0.5
    dt = time.perf_counter() - t0
    err = max(abs(L - 2 / 3), abs(S - 1 / 3))
    record(1, err <= 1e-9 and dt < 1.0, f"L3/s={L:.15f} S3/s={S:.15f} err={err:.1e} time={dt:.2f}s")


def test_criterion_02_spin_composition_curve():
    betas = default_beta_grid(101, 0.99)
    t0 = time.perf_counter()
    rows = spin_composition_sweep(beta_grid=betas)
    dt = time.perf_counter() - t0
    err_s = max(abs(r.sam - critical_sam_fraction(r.beta)) for r in rows)
    err_l = max(abs(r.oam - critical_oam_fraction(r.beta)) for r in rows)
    ok = len(rows) == 101 and max(err_s, err_l) <= 1e-8 and dt < 30.0
    record(2, ok, f"rows={len(rows)} max|dS|={err_s:.1e} max|dL|={err_l:.1e} time={dt:.1f}s")


def test_criterion_03_total_angular_momentum():
    worst = 0.0
    for sign, s, beta in itertools.product("+-", (0.5, -0.5), (0.0, 0.3, 0.6, 0.9)):
        bs = build_bispinor(OscillatorConfig.critical(beta=beta), sign, s)
        worst = max(worst, abs(tam_expect(bs) - s))
    record(3, worst <= 1e-9, f"max|J3 - s|={worst:.1e} over 16 states")


def test_criterion_04_annihilation():
    worst = 0.0
    for beta in (0.0, 0.6):
        cfg = OscillatorConfig.critical(beta=beta)
        psi = build_psi(cfg)
        pts = probe_points(cfg.length_scale)
        for mu in range(4):
            worst = max(worst, normalized_max(ladder(mu, "-", cfg)(psi), psi, pts, cfg.Omega))
    record(4, worst <= 1e-12, f"max normalised |alpha_mu^- Psi_0|={worst:.1e}")


def test_criterion_05_operator_identities():
    worst = 0.0
    for beta in (0.0, 0.5, 0.9):
        cfg = OscillatorConfig.critical(beta=beta)
        corpus = random_corpus(Envelope(cfg.Omega, beta), size=20, seed=12345, momentum=kinematics(cfg).P)
        for f in corpus:
            worst = max(worst, identity_P_dot_alpha(cfg, f), identity_product(cfg, "+", f), identity_product(cfg, "-", f))
    record(5, worst <= 1e-10, f"max normalised identity residual={worst:.1e} on 20 fields x 3 beta")


def test_criterion_06_field_equation_residuals():
    betas = (0.0, 0.5, 0.9)
    kge = 0.0
    for qn in itertools.product(range(4), repeat=3):
        if sum(qn) > 3:
            continue
        for beta in betas:
            cfg = OscillatorConfig.critical(beta=beta, qn=qn)
            kge = max(kge, kge_residual(build_psi(cfg), cfg))
    de = {}
    for sign, s, beta in itertools.product("+-", (0.5, -0.5), betas):
        bs = build_bispinor(OscillatorConfig.critical(beta=beta), sign, s)
        de[(sign, s, beta)] = dirac_residual(bs)
    bad = sorted({(k[0], k[2]) for k, v in de.items() if v > 1e-9})
    worst = max(de.values())
    ok = kge <= 1e-9 and not bad
    record(6, ok, f"KGE max={kge:.1e}; Dirac max={worst:.1e}; failing (sign, beta)={bad}")


def test_criterion_07_bispinor_norms():
    worst = 0.0
    for beta, sign in itertools.product((0.0, 0.6), "+-"):
        cfg = OscillatorConfig.critical(beta=beta)
        bs = build_bispinor(cfg, sign)
        worst = max(worst, abs(bs.norm / closed_form_norm(cfg, sign) - 1))
    rest = OscillatorConfig.critical()
    spot = max(abs(closed_form_norm(rest, "-") - 1 / math.sqrt(8)), abs(closed_form_norm(rest, "+") - 0.5))
    record(7, worst <= 1e-10 and spot <= 1e-15, f"max rel norm mismatch={worst:.1e} spot err={spot:.1e}")


def test_criterion_08_mass_formula_and_limit():
    m, Om = 1.0, 2 / 3
    exact = True
    for n in range(6):
        cfg = OscillatorConfig(m=m, Omega=Om, qn=(n, 0, 0))
        ref = Om * (1.5 + n) + m * m
        exact &= abs(kinematics(cfg).M ** 2 - ref) <= 4 * np.finfo(float).eps * ref
        exact &= degeneracy(n) == sum(1 for qn in itertools.product(range(n + 1), repeat=3) if sum(qn) == n)
    cfg = OscillatorConfig(m=1.0, Omega=2e-3)
    eo = nonrelativistic_energy(cfg)
    rel = abs(binding_energy(cfg) - eo) / eo
    record(8, bool(exact) and rel <= 1e-3, f"mass/degeneracy exact={bool(exact)} NR rel dev (n=0)={rel:.2e}")


def test_criterion_09_lorentz_contraction():
    worst = 0.0
    for beta in (0.0, 0.5, 0.9):
        cfg = OscillatorConfig.critical(beta=beta)
        psi = build_psi(cfg)
        r1, r3 = second_moment(psi, 1), second_moment(psi, 3)
        worst = max(worst, abs(cfg.gamma**2 * r3 / r1 - 1))
    record(9, worst <= 1e-9, f"max rel |gamma^2 <r3^2> / <r1^2> - 1|={worst:.1e}")


def test_criterion_10_verify_suite(tmp_path):
    out = tmp_path / "verify.csv"
    t0 = time.perf_counter()
    code = main(["verify", "--out", str(out)])
    dt = time.perf_counter() - t0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    failed = [r["name"] for r in csv.DictReader(lines) if r["status"] == "fail"]
    record(10, code == 0 and dt < 60.0, f"exit={code} time={dt:.1f}s failed checks={failed}")
