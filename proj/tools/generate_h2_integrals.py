# Copyright 2026 The heabench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes spin-orbital H2/STO-3G integrals in the heabench .int format.

Physicist convention: g[p,q,r,s] multiplies a+_p a+_q a_r a_s with a 1/2
prefactor, so g[p,q,r,s] = (ps|qr) in chemist notation. Spin orbitals are
interleaved: so = 2 * mo + spin.
"""

import argparse

import numpy as np
from pyscf import ao2mo, fci, gto, scf


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bond", type=float, default=0.735, help="H-H distance in angstrom")
    ap.add_argument("--out", default="data/integrals/h2_sto3g_0735.int")
    args = ap.parse_args()

    mol = gto.M(atom=f"H 0 0 0; H 0 0 {args.bond}", basis="sto-3g", unit="angstrom")
    mf = scf.RHF(mol).run(verbose=0)
    c = mf.mo_coeff
    nmo = c.shape[1]
    h_mo = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), nmo)
    e_fci = fci.FCI(mf).kernel()[0]

    n = 2 * nmo
    h = np.zeros((n, n))
    g = np.zeros((n, n, n, n))
    for p in range(n):
        for q in range(n):
            if p % 2 == q % 2:
                h[p, q] = h_mo[p // 2, q // 2]
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    if p % 2 == s % 2 and q % 2 == r % 2:
                        g[p, q, r, s] = eri[p // 2, s // 2, q // 2, r // 2]

    lines = [
        f"# H2 STO-3G at {args.bond} angstrom, spin orbitals interleaved (2*mo + spin)",
        f"# RHF energy {mf.e_tot:.12f}  FCI energy {e_fci:.12f}",
        f"norb {n}",
        "convention physicist",
        f"nuc {mol.energy_nuc():.17g}",
    ]
    for p in range(n):
        for q in range(n):
            if abs(h[p, q]) > 1e-12:
                lines.append(f"h {p} {q} {h[p, q]:.17g}")
    for idx in np.ndindex(g.shape):
        if abs(g[idx]) > 1e-12:
            lines.append("g {} {} {} {} {:.17g}".format(*idx, g[idx]))
    with open(args.out, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
