"""Regenerates centrifuge_strain_obs.csv: 20 axial strain readings for the
centrifuge pile (rigid tip, dT = 20 degC, k_s = 55 MPa/m) with 1 % multiplicative
Gaussian noise, seed 20210. Uses the end-bearing closed form directly."""
import numpy as np

L, D, E, alpha, ks, dT = 12.8, 1.22, 7.17e9, 7.5e-6, 55e6, 20.0
psi = np.sqrt((4.0 / D) * ks / E)
x = L * (np.arange(20) + 0.5) / 20
strain = alpha * dT * np.cosh(psi * x) / np.cosh(psi * L)
rng = np.random.default_rng(20210)
noisy = strain * (1.0 + 0.01 * rng.standard_normal(x.size))

with open("centrifuge_strain_obs.csv", "w") as f:
    f.write("kind,x_m,value_si,weight,case_tag\n")
    for xi, v in zip(x, noisy):
        f.write(f"strain,{float(xi)!r},{float(v)!r},1,dT20\n")
