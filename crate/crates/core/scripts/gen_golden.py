#!/usr/bin/env python3
"""Generate the arbitrary-precision oracle tables shipped in data/golden/.

Every argument is a binary64 value, so the decimal printed with 20 significant
digits parses back to the exact double the oracle was evaluated at.

    python3 scripts/gen_golden.py data/golden
"""
import sys
from pathlib import Path

import mpmath as mp

# J + iY cancels like e^{2 Im z}; 120 digits keep |Im z| <= 64 exact to 20 digits.
mp.mp.dps = 120
DIGITS = 20


def fmt(x):
    return mp.nstr(mp.mpf(x), DIGITS, min_fixed=-1, max_fixed=-1, strip_zeros=False)


def arguments():
    zs = []
    # Real axis, spanning the series / asymptotic switch and the far envelope.
    for x in [0.0625, 0.5, 1.0, 2.0, 3.5, 5.0, 6.0, 7.25, 10.0, 12.0, 15.5,
              19.75, 20.25, 30.0, 64.0, 128.5, 700.0, 1000.0, 5000.0, 10000.0]:
        zs.append(complex(x, 0.0))
    # Off-axis grid covering k*r and (k+i)*r for the experiments.
    for a in [0.5, 3.0, 8.0, 17.0, 25.0, 60.0, 300.0, 2000.0]:
        for b in [0.25, 1.0, 4.0, 10.0, 30.0, 64.0]:
            if abs(complex(a, b)) <= 1e4:
                zs.append(complex(a, b))
    # (2+i) r for r in {0.1, 1, 5}
    for r in [0.1, 1.0, 5.0]:
        zs.append(complex(2.0 * r, 1.0 * r))
    return zs


def hankel1(order, z):
    # H1_nu(z) = (2/pi) i^(-nu-1) K_nu(-iz), checked against mpmath's own H1.
    via_k = 2 / mp.pi * mp.mpc(0, 1) ** (-order - 1) * mp.besselk(order, -1j * z)
    direct = mp.hankel1(order, z)
    assert abs(via_k - direct) <= mp.mpf(10) ** -40 * abs(via_k), (order, z)
    return via_k


def write_table(path, fn):
    with open(path, "w") as f:
        for order in (0, 1):
            for z in arguments():
                zz = mp.mpc(mp.mpf(z.real), mp.mpf(z.imag))
                v = fn(order, zz)
                f.write(f"{order} {fmt(z.real)} {fmt(z.imag)} {fmt(v.real)} {fmt(v.imag)}\n")


def circle_eigenvalues(path, k):
    # Unit circle, outward normal.  Density e^{imt}.
    k = mp.mpc(k)
    with open(path, "w") as f:
        for m in range(-10, 11):
            j = mp.besselj(m, k)
            h = mp.hankel1(m, k)
            jp = mp.diff(lambda z: mp.besselj(m, z), k)
            hp = mp.diff(lambda z: mp.hankel1(m, z), k)
            s = 1j * mp.pi / 2 * j * h
            dl = 1j * mp.pi * k / 2 * j * hp + mp.mpf(1) / 2
            adl = 1j * mp.pi * k / 2 * jp * h - mp.mpf(1) / 2
            hyp = 1j * mp.pi * k**2 / 2 * jp * hp
            ndiff = hyp + mp.mpf(abs(m)) / 2
            for name, v in [("S", s), ("K", dl), ("KT", adl), ("N", hyp), ("NDIFF0", ndiff)]:
                v = mp.mpc(v)
                f.write(f"{name} {m} {fmt(v.real)} {fmt(v.imag)}\n")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/golden")
    out.mkdir(parents=True, exist_ok=True)
    write_table(out / "besselj.txt", lambda n, z: mp.besselj(n, z))
    write_table(out / "bessely.txt", lambda n, z: mp.bessely(n, z))
    write_table(out / "hankel1.txt", hankel1)
    circle_eigenvalues(out / "circle_k2.txt", 2)
    circle_eigenvalues(out / "circle_k2p1i.txt", mp.mpc(2, 1))
    # Point-source value used by the right-hand-side example: (i/4) H0(2*sqrt(32)).
    with open(out / "point_source.txt", "w") as f:
        v = 1j / 4 * mp.hankel1(0, 2 * mp.sqrt(32))
        f.write(f"{fmt(v.real)} {fmt(v.imag)}\n")


if __name__ == "__main__":
    main()
