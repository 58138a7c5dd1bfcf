#!/usr/bin/env python3
"""Regenerate erf / Faddeeva reference values with mpmath at 50 digits.

Output rows: kind re_z im_z re_value im_value
  kind = erf  -> erf(z)
  kind = w    -> exp(-z^2) erfc(-i z)
Points whose erf overflows a double are skipped for kind=erf.
"""
import random
import mpmath as mp

mp.mp.dps = 50


def emit(out, kind, z, v):
    out.write(f"{kind} {float(z.real)!r} {float(z.imag)!r} "
              f"{mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}\n")


def main():
    rng = random.Random(20201)
    pts = [mp.mpc(0, 0), mp.mpc(1, 0), mp.mpc(0, 1), mp.mpc(0.1, 0),
           mp.mpc(0.1, 0.5), mp.mpc(0.1, 50), mp.mpc(0.1, 5), mp.mpc(3, 3),
           mp.mpc(-2.5, 1.5), mp.mpc(6, 0.3), mp.mpc(1.3, 1.2), mp.mpc(30, 0),
           mp.mpc(20, 20), mp.mpc(1.2, 26)]
    for _ in range(400):
        r = 30 * rng.random() ** 1.5
        th = rng.uniform(-mp.pi, mp.pi)
        pts.append(mp.mpc(float(r * mp.cos(th)), float(r * mp.sin(th))))
    for _ in range(100):
        pts.append(mp.mpc(rng.uniform(-3, 3), rng.uniform(-3, 3)))
    with open("special_reference.txt", "w") as out:
        out.write("# kind re_z im_z re_value im_value  (mpmath, 50 digits)\n")
        for z in pts:
            z = mp.mpc(float(z.real), float(z.imag))
            e = mp.erf(z)
            # skip overflow region and neighbourhoods of the complex zeros
            if abs(e) < 1e300 and abs(e) > 1e-3 * max(1, abs(mp.exp(-z * z))):
                emit(out, "erf", z, e)
            if z.imag >= 0:
                emit(out, "w", z, mp.exp(-z * z) * mp.erfc(-1j * z))
        for x in [0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 6.0, 10.0, 25.0, 50.0]:
            for y in [0.0, 0.01, 0.1, 1.0]:
                z = mp.mpc(-x, y)
                emit(out, "w", z, mp.exp(-z * z) * mp.erfc(-1j * z))


if __name__ == "__main__":
    main()
