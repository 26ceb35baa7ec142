"""Regenerates the QBM fixtures used by the Rust tests.

qbm_golden.json     Wigner coefficients at the benchmark point, 40-digit mpmath.
qbm_pde_oracle.json Moments of a finite-difference solution of the Wigner PDE.

Run from this directory: python3 generate_fixtures.py
"""

import json

import mpmath as mp
import numpy as np

mp.mp.dps = 40


def coeffs_mp(M, Omega, gamma0, T, r, a, t, hbar=1, kB=1):
    M, Omega, gamma0, T, r, a, t = map(mp.mpf, (M, Omega, gamma0, T, r, a, t))
    p = 4 * gamma0
    zeta = mp.sqrt(Omega**2 - p**2 / 4)
    K1 = mp.cosh(2 * r)
    K2 = mp.sinh(2 * r)
    env = mp.exp(-p * (t - a)) * mp.sin(zeta * t) * mp.sin(zeta * (t - 2 * a))
    dxx = 2 * kB * T * gamma0 / (hbar * M * zeta**2) * K2 * env
    dxp = 2 * kB * T * gamma0 / (hbar * zeta**2) * (zeta * mp.cot(zeta * t) - p / 2) * K2 * env
    bracket = (
        mp.cos(zeta * t) ** 2
        + p**2 / (4 * zeta**2) * mp.sin(zeta * t) ** 2
        - p / (2 * zeta) * mp.sin(2 * zeta * t)
        - 1
    )
    dpp = -2 * M * kB * T * gamma0 / hbar * (
        K1 - K2 * mp.exp(-p * (t - a)) * bracket * mp.sin(zeta * (t - 2 * a)) / mp.sin(zeta * t)
    )
    return {
        "omega_ren_sq": p**2 / 4 + zeta**2,
        "gamma": p / 2,
        "dxx": dxx,
        "dxp": dxp,
        "dpx": dxp,
        "dpp": dpp,
    }


def coeffs_np(M, Omega, gamma0, T, r, a, t):
    c = coeffs_mp(M, Omega, gamma0, T, r, a, t)
    return {k: float(v) for k, v in c.items()}


def golden():
    params = {"M": 1.0, "Omega": 1.0, "gamma0": 0.1, "T": 10.0, "r": 0.5, "a": 0.3, "hbar": 1.0, "kB": 1.0}
    t = 1.0
    c = coeffs_mp(params["M"], params["Omega"], params["gamma0"], params["T"], params["r"], params["a"], t)
    return {"params": params, "t": t, "coeffs": {k: mp.nstr(v, 25) for k, v in c.items()}}


def pde_moments(params, mean, cov, t0, t1, dt, half_width, dx, sample_every):
    """Explicit RK4 with centred differences for
    W_t = -(1/M)(pW)_x + M Ω²(xW)_p + 2Γ(pW)_p - ħD_pp W_pp - ħ(D_xp+D_px) W_xp - ħD_xx W_xx.
    """
    M = params["M"]
    x = np.arange(-half_width, half_width + dx / 2, dx)
    X, P = np.meshgrid(x, x, indexing="ij")
    d = np.array([[cov[0], cov[1]], [cov[1], cov[2]]])
    di = np.linalg.inv(d)
    dxv, dpv = X - mean[0], P - mean[1]
    W = np.exp(-0.5 * (di[0, 0] * dxv**2 + 2 * di[0, 1] * dxv * dpv + di[1, 1] * dpv**2))
    W /= W.sum() * dx * dx

    def dX(F):
        G = np.zeros_like(F)
        G[1:-1, :] = (F[2:, :] - F[:-2, :]) / (2 * dx)
        return G

    def dP(F):
        G = np.zeros_like(F)
        G[:, 1:-1] = (F[:, 2:] - F[:, :-2]) / (2 * dx)
        return G

    def dXX(F):
        G = np.zeros_like(F)
        G[1:-1, :] = (F[2:, :] - 2 * F[1:-1, :] + F[:-2, :]) / dx**2
        return G

    def dPP(F):
        G = np.zeros_like(F)
        G[:, 1:-1] = (F[:, 2:] - 2 * F[:, 1:-1] + F[:, :-2]) / dx**2
        return G

    def rhs(t, F):
        c = coeffs_np(params["M"], params["Omega"], params["gamma0"], params["T"], params["r"], params["a"], t)
        return (
            -dX(P * F) / M
            + M * c["omega_ren_sq"] * dP(X * F)
            + 2 * c["gamma"] * dP(P * F)
            - c["dpp"] * dPP(F)
            - (c["dxp"] + c["dpx"]) * dX(dP(F))
            - c["dxx"] * dXX(F)
        )

    def moments(t, F):
        w = F * dx * dx
        n = w.sum()
        mx, mp_ = (X * w).sum() / n, (P * w).sum() / n
        return {
            "t": t,
            "mean_x": mx,
            "mean_p": mp_,
            "cov_xx": ((X - mx) ** 2 * w).sum() / n,
            "cov_xp": ((X - mx) * (P - mp_) * w).sum() / n,
            "cov_pp": ((P - mp_) ** 2 * w).sum() / n,
        }

    steps = int(round((t1 - t0) / dt))
    out = [moments(t0, W)]
    t = t0
    for k in range(1, steps + 1):
        k1 = rhs(t, W)
        k2 = rhs(t + dt / 2, W + dt / 2 * k1)
        k3 = rhs(t + dt / 2, W + dt / 2 * k2)
        k4 = rhs(t + dt, W + dt * k3)
        W = W + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + k * dt
        if k % sample_every == 0:
            out.append(moments(t, W))
    return out


def pde_oracle():
    params = {"M": 1.0, "Omega": 0.5, "gamma0": 0.05, "T": 1.0, "r": 0.1, "a": 3.2, "hbar": 1.0, "kB": 1.0}
    initial = {"mean_x": 1.0, "mean_p": 0.0, "cov_xx": 1.0, "cov_xp": 0.0, "cov_pp": 1.0}
    fine = pde_moments(params, (1.0, 0.0), (1.0, 0.0, 1.0), 0.1, 5.0, 0.0025, 9.0, 0.05, 40)
    coarse = pde_moments(params, (1.0, 0.0), (1.0, 0.0, 1.0), 0.1, 5.0, 0.005, 9.0, 0.1, 20)
    keys = ["mean_x", "mean_p", "cov_xx", "cov_xp", "cov_pp"]
    spread = {k: max(abs(a[k] - b[k]) for a, b in zip(fine, coarse)) for k in keys}
    print("grid refinement spread:", spread)
    return {"params": params, "initial": initial, "t0": 0.1, "t1": 5.0, "grid": {"half_width": 9.0, "dx": 0.05, "dt": 0.0025}, "moments": fine}


if __name__ == "__main__":
    with open("qbm_golden.json", "w") as fh:
        json.dump(golden(), fh, indent=2)
    with open("qbm_pde_oracle.json", "w") as fh:
        json.dump(pde_oracle(), fh, indent=2)
