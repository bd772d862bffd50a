"""Ladder operators of the moving oscillator, checked on exact fields.

Fields are polynomials times the boosted Gaussian, so every derivative is
exact and residuals sit at round-off.
"""
from relosc import OscillatorConfig, build_psi, kge_residual, ladder
from relosc.core import kinematics
from relosc.operators import (
    commutator,
    identity_P_dot_alpha,
    identity_product,
    normalized_max,
    probe_points,
    random_corpus,
    scalar_op,
)
from relosc.polyfield import Envelope

cfg = OscillatorConfig.critical(beta=0.6)
psi = build_psi(cfg)
pts = probe_points(cfg.length_scale)

# %% lowering operators annihilate the ground state
for mu in range(4):
    r = normalized_max(ladder(mu, "-", cfg)(psi), psi, pts, cfg.Omega)
    print(f"alpha_{mu}^- Psi_0 : {r:.1e}")

# %% excited states solve the constraint Klein-Gordon equation
for qn in [(1, 0, 0), (0, 2, 1), (1, 1, 1)]:
    c = cfg.replace(qn=qn)
    print(f"KGE residual n={qn}: {kge_residual(build_psi(c), c):.1e}")

# %% identities on a random corpus
corpus = random_corpus(Envelope(cfg.Omega, cfg.beta), size=20, momentum=kinematics(cfg).P)
print("P.alpha = 0       :", f"{max(identity_P_dot_alpha(cfg, f) for f in corpus):.1e}")
print("alpha+.alpha- form:", f"{max(identity_product(cfg, '+', f) for f in corpus):.1e}")

# %% why the moving raising-branch bispinor is not an exact Dirac solution:
# the time and longitudinal ladders stop commuting once beta > 0
c03 = commutator(ladder(0, "-", cfg).as_op(), ladder(3, "+", cfg).as_op())
f = corpus[0]
print("[alpha_0^-, alpha_3^+] + Omega beta gamma^2 :",
      f"{normalized_max((c03 + scalar_op(cfg.Omega * cfg.beta * cfg.gamma**2))(f), f, pts, cfg.Omega):.1e}")
