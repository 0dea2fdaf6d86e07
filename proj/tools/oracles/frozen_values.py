"""Arbitrary-precision reference values frozen into tests/unit.

Run: python3 tools/oracles/frozen_values.py
Every value is recomputed here from the closed-form definitions with mpmath/sympy,
independently of the C++ implementation.
"""

import json

import mpmath as mp
import sympy as sp

mp.mp.dps = 50


def perfect_gas(c_v, rho, theta):
    p = rho * theta
    e = c_v * theta
    s = c_v * mp.log(theta) - mp.log(rho)
    return p, e, s


def log_tail(pbar, q):
    w = mp.cbrt(q)
    P = q ** (mp.mpf(5) / 3) * (pbar + w ** -2 - 2 / w + 2 * mp.log(1 + 1 / w))
    S = 3 * mp.log(1 + 1 / w)
    return P, S


def main():
    out = {}

    # Ballistic energy rho (e - Theta s), perfect gas c_v = 3/2, (rho, theta) = (2, 1), Theta = 1.
    _, e, s = perfect_gas(mp.mpf(1.5), mp.mpf(2), mp.mpf(1))
    out["ballistic_pg_2_1"] = 2 * (e - 1 * s)

    # Relative energy of (2, 1, 0) against (1, 1, 0): H(rho) - H'(r)(rho - r) - H(r), H = rho(e - T s).
    def H(rho, theta=mp.mpf(1), T=mp.mpf(1)):
        _, e, s = perfect_gas(mp.mpf(1.5), rho, theta)
        return rho * (e - T * s)

    dH = mp.diff(lambda r: H(r), mp.mpf(1))
    out["rel_energy_pg_2_vs_1"] = H(mp.mpf(2)) - dH * (2 - 1) - H(mp.mpf(1))

    # d(rho e)/d rho at fixed S = rho s, perfect gas, rho = 1, S = 0.
    def E_of(rho, S):
        theta = mp.exp((S / rho + mp.log(rho)) / mp.mpf(1.5))
        return rho * mp.mpf(1.5) * theta

    out["dE_drho_pg_1_0"] = mp.diff(lambda r: E_of(r, mp.mpf(0)), mp.mpf(1))

    # Kappa primitive K(e) for kappa = 1: int_1^e 1/t dt.
    out["kappa_primitive_e"] = mp.quad(lambda t: 1 / t, [1, mp.e])

    # Log-tail kernel P, P', S, S' and (5/3) P/q - P' at a few q (pbar = 1).
    for q in ["1e-3", "1", "1e3", "1e9"]:
        qq = mp.mpf(q)
        P, S = log_tail(mp.mpf(1), qq)
        dP = mp.diff(lambda x: log_tail(mp.mpf(1), x)[0], qq)
        dS = mp.diff(lambda x: log_tail(mp.mpf(1), x)[1], qq)
        out[f"logtail_{q}"] = {"P": P, "dP": dP, "S": S, "dS": dS, "G_over_q": mp.mpf(5) / 3 * P / qq - dP}

    # Molecular-radiation EOS, log tail pbar = 1, a = 0.1, at (rho, theta) = (2, 0.5).
    a = mp.mpf("0.1")
    rho, theta = mp.mpf(2), mp.mpf("0.5")

    def mr(rho, theta):
        q = rho / theta ** mp.mpf(1.5)
        P, S = log_tail(mp.mpf(1), q)
        p = theta ** mp.mpf(2.5) * P + a * theta**2
        e = mp.mpf(1.5) * theta ** mp.mpf(2.5) * P / rho + a * theta**2 / rho
        s = S + 2 * a * theta / rho
        return p, e, s

    p, e, s = mr(rho, theta)
    out["mr_logtail_2_05"] = {
        "p": p,
        "e": e,
        "s": s,
        "p_rho": mp.diff(lambda r: mr(r, theta)[0], rho),
        "p_theta": mp.diff(lambda t: mr(rho, t)[0], theta),
        "e_theta": mp.diff(lambda t: mr(rho, t)[1], theta),
        "s_rho": mp.diff(lambda r: mr(r, theta)[2], rho),
    }

    # Symbolic Gibbs residuals: radiation only and the linear kernel vanish identically.
    r, t, A = sp.symbols("rho theta a", positive=True)
    e_R, s_R, p_R = A * t**2 / r, 2 * A * t / r, A * t**2
    out["gibbs_radiation_symbolic"] = [
        str(sp.simplify(t * sp.diff(s_R, t) - sp.diff(e_R, t))),
        str(sp.simplify(t * sp.diff(s_R, r) - sp.diff(e_R, r) + p_R / r**2)),
    ]
    q = r / t ** sp.Rational(3, 2)
    p_L = t ** sp.Rational(5, 2) * q
    e_L = sp.Rational(3, 2) * t ** sp.Rational(5, 2) * q / r
    s_L = -sp.log(q)
    out["gibbs_linear_kernel_symbolic"] = [
        str(sp.simplify(t * sp.diff(s_L, t) - sp.diff(e_L, t))),
        str(sp.simplify(t * sp.diff(s_L, r) - sp.diff(e_L, r) + p_L / r**2)),
    ]
    # Stability signs of the linear kernel: p_rho, e_theta > 0.
    out["linear_kernel_stability"] = [str(sp.simplify(sp.diff(p_L, r))), str(sp.simplify(sp.diff(e_L, t)))]

    # Defect study reference: (1/2) int rho env^2 * mean(sin^2), env = 0.5 sin(pi x), rho = 1.
    out["kinetic_defect_reference"] = mp.quad(lambda x: mp.mpf(0.5) * (mp.mpf(0.5) * mp.sin(mp.pi * x)) ** 2, [0, 1]) * mp.quad(
        lambda y: mp.sin(y) ** 2, [0, 2 * mp.pi]
    ) / (2 * mp.pi)

    def conv(v):
        if isinstance(v, dict):
            return {k: conv(x) for k, x in v.items()}
        if isinstance(v, list):
            return v
        return float(v)

    print(json.dumps({k: conv(v) for k, v in out.items()}, indent=2))


if __name__ == "__main__":
    main()
