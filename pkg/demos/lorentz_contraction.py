"""The oscillator's Gaussian ground state contracts along the boost axis.

In the instant form (relative time zero) the probability density stays
Gaussian; the longitudinal width shrinks by gamma.
"""
import numpy as np

from relosc import OscillatorConfig, build_psi, norm, second_moment

for beta in (0.0, 0.5, 0.8, 0.95):
    cfg = OscillatorConfig.critical(beta=beta)
    psi = build_psi(cfg)
    w1 = np.sqrt(second_moment(psi, 1))
    w3 = np.sqrt(second_moment(psi, 3))
    print(f"beta={beta:4.2f} gamma={cfg.gamma:6.3f} norm={norm(psi):.15f} "
          f"width ratio r1/r3={w1 / w3:.12f}")
