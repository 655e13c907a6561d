#!/usr/bin/env python3
"""Independent reference values for the test suite.

Computed with sympy (exact algebra) and mpmath (30-digit ODE solves), sharing
no code with the C++ library. Writes tests/oracle_values.hpp.
"""
import pathlib
import sys

import mpmath as mp
import sympy as sp

mp.mp.dps = 30
values = {}


def put(name, value, note):
    values[name] = (mp.mpf(sp.N(value, 40)) if not isinstance(value, mp.mpf) else value, note)


# Relativistic mass flux at c0 = 1, U = 1.
u, c0 = sp.symbols("u c0", real=True)
C = c0 * u / sp.sqrt(c0**2 + u**2)
put("kRelFluxAtOne", C.subs({c0: 1, u: 1}), "C(1) with c0 = 1")


def jumps(rl, rr, ul, ur, F):
    a = rl * F(ul) - rr * F(ur)          # [rho F]
    b = rl - rr                          # [rho]
    c = rl * ul * F(ul) - rr * ur * F(ur)  # [rho N]
    d = rl * ul - rr * ur                # [rho u]
    return a, b, c, d


# Asymmetric standard-flux data.
x = sp.symbols("x")
a, b, c, d = jumps(sp.Integer(4), sp.Integer(1), sp.Integer(1), sp.Integer(-1), lambda v: v)
roots = sp.solve(b * x**2 - (a + d) * x + c, x)
admissible = [r for r in roots if -1 < r < 1]
assert len(admissible) == 1
ud = admissible[0]
put("kAsymSpeed", ud, "entropy root of 3u^2 - 10u + 3")
put("kAsymOtherRoot", [r for r in roots if r != ud][0], "rejected root")
put("kAsymMassDeficit", a - b * ud, "([rho u] - [rho] u_delta)")
put("kAsymMomentumDeficit", c - d * ud, "([rho u^2] - [rho u] u_delta)")

# Weighted-mean identity checked symbolically for generic data.
rl, rr, ul, ur = sp.symbols("rl rr ul ur", positive=True)
wm = (sp.sqrt(rl) * ul + sp.sqrt(rr) * ur) / (sp.sqrt(rl) + sp.sqrt(rr))
A, B, Cc, D = jumps(rl, rr, ul, ur, lambda v: v)
assert sp.simplify(B * wm**2 - (A + D) * wm + Cc) == 0

# Relativistic c0 = 1, same data: entropy root found by mpmath.
def rel_quadratic(s):
    F = lambda v: v / mp.sqrt(1 + v * v)
    a, b, c, d = jumps(mp.mpf(4), mp.mpf(1), mp.mpf(1), mp.mpf(-1), F)
    return b * s * s - (a + d) * s + c

a, b, c, d = jumps(mp.mpf(4), mp.mpf(1), mp.mpf(1), mp.mpf(-1), lambda v: v / mp.sqrt(1 + v * v))
disc = (a + d) ** 2 - 4 * b * c
rel_roots = [((a + d) - mp.sqrt(disc)) / (2 * b), ((a + d) + mp.sqrt(disc)) / (2 * b)]
rel_ok = [r for r in rel_roots if -1 < r < 1]
assert len(rel_ok) == 1
put("kRelSpeed", rel_ok[0], "relativistic entropy root, c0 = 1")
put("kRelMassRate", a - b * rel_ok[0], "relativistic e'(t), c0 = 1")

# Energy dissipation surface densities.
put("kDissipationSymmetric", sp.Rational(1, 2) * (1 + 1), "symmetric case")
put("kDissipationAsymmetric",
    sp.Rational(1, 2) * (4 * (1 - ud) ** 3 + 1 * (ud + 1) ** 3), "asymmetric case")

# Point mass e0 = 1 moving at 0.8 on the asymmetric data:
#   e = e0 + 5t - 3 phi,  e phi' = e0 u0 + 3t - 5 phi.
e0, u0 = mp.mpf(1), mp.mpf("0.8")
ode = mp.odefun(lambda t, y: (e0 * u0 + 3 * t - 5 * y) / (e0 + 5 * t - 3 * y), 0, 0)
for tt, tag in ((mp.mpf("0.5"), "Half"), (mp.mpf(1), "One")):
    phi = ode(tt)
    e = e0 + 5 * tt - 3 * phi
    put(f"kPointMassPhi{tag}", phi, f"front position at t = {tt}")
    put(f"kPointMassE{tag}", e, f"surface density at t = {tt}")
    put(f"kPointMassSpeed{tag}", (e0 * u0 + 3 * tt - 5 * phi) / e, f"front speed at t = {tt}")

# Steady converging n = 3 flow (rho = r^-2, u = -1 outside, vacuum inside),
# phi0 = 1, e0 = 0.01, u_delta0 = -0.5. With m = e phi^2 and Q = m phi':
#   m' = 1 + phi',  Q' = -(1 + phi')  =>  m (1 + phi') = m0 (1 + u0).
t = sp.symbols("t", nonnegative=True)
m0, uu0 = sp.Rational(1, 100), sp.Rational(-1, 2)
m = sp.sqrt(m0**2 + 2 * m0 * (1 + uu0) * t)
phi_t = 1 - t + (m - m0)
assert sp.simplify(sp.diff(m, t) - (1 + sp.diff(phi_t, t))) == 0
assert sp.simplify(m * (1 + sp.diff(phi_t, t)) - m0 * (1 + uu0)) == 0
for tt, tag in ((sp.Rational(1, 2), "Half"), (sp.Rational(9, 10), "End")):
    put(f"kConvergingPhi{tag}", phi_t.subs(t, tt), f"front radius at t = {tt}")
    put(f"kConvergingE{tag}", (m / phi_t**2).subs(t, tt), f"surface density at t = {tt}")
    put(f"kConvergingSpeed{tag}", sp.diff(phi_t, t).subs(t, tt), f"front speed at t = {tt}")

# Geometry closed forms.
put("kSphereX1Squared", 4 * sp.pi / 3, "integral of x1^2 over the unit 2-sphere")
put("kCircleLength2", 4 * sp.pi, "length of the circle of radius 2")
put("kShrinkingCircleRate", -2 * sp.pi, "d/dt of 2 pi (1 - t) at t = 0")
put("kGrowingBallRate", 4 * sp.pi, "d/dt of 4 pi (1 + t)^3 / 3 at t = 0")

# Tangential residual for 2-D data with a tangential jump:
# nu = (1, 0), rho- = 2, U- = (1, 0.5), rho+ = 1, U+ = (-1, -0.25), G = u_delta.
rm, rp = sp.Integer(2), sp.Integer(1)
um, up = sp.Integer(1), sp.Integer(-1)
vm, vp = sp.Rational(1, 2), sp.Rational(-1, 4)
a, b, c, d = jumps(rm, rp, um, up, lambda v: v)
rts = [r for r in sp.solve(b * x**2 - (a + d) * x + c, x) if up < r < um]
G = rts[0]
put("kTangentialSpeed", G, "normal speed for the tangential-jump data")
put("kTangentialResidual", (rm * vm * um - rp * vp * up) - (rm * vm - rp * vp) * G,
    "[rho U_tan (U.nu)] - [rho U_tan] G")

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "tests/oracle_values.hpp")
lines = ["#pragma once", "", "// Generated by tools/oracles/derive_oracles.py. Do not edit.", "",
         "namespace oracle {", ""]
for name, (v, note) in values.items():
    lines.append(f"// {note}")
    lines.append(f"constexpr double {name} = {mp.nstr(v, 20, min_fixed=0, max_fixed=0)};")
lines += ["", "}  // namespace oracle", ""]
out.write_text("\n".join(lines))
print(f"wrote {len(values)} values to {out}")
