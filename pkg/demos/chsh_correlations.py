"""The CHSH functional: commuting sides cap at 2, entangled states reach 2*sqrt(2).

beta = Re Tr(omega (a1(b1+b2) + a2(b1-b2))) over norm-bounded observables
whose sides commute with each other.  When either side's own pair also
commutes, beta never exceeds 2 for any state; the rotated-basis fixture
on a maximally entangled state attains 2*sqrt(2).
"""

import math

import numpy as np

from ncprob import PureState, chsh_beta
from ncprob.hilbert import PAULI_X, PAULI_Z


def main():
    a1 = np.kron(PAULI_Z, np.eye(2))
    a2 = np.kron(PAULI_X, np.eye(2))
    b1 = np.kron(np.eye(2), (PAULI_Z + PAULI_X) / math.sqrt(2.0))
    b2 = np.kron(np.eye(2), (PAULI_Z - PAULI_X) / math.sqrt(2.0))
    bell = np.zeros(4)
    bell[0] = bell[3] = 1.0 / math.sqrt(2.0)
    omega = PureState(bell).density()

    beta = chsh_beta(a1, a2, b1, b2, omega)
    print(f"rotated-basis fixture on the entangled state:")
    print(f"  beta = {beta:.12f}   (2*sqrt(2) = {2 * math.sqrt(2):.12f})")

    rng = np.random.default_rng(12)
    print("\n1000 random configurations with one abelian side:")
    worst = 0.0
    for _ in range(1000):
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        v, _ = np.linalg.qr(z)
        c1 = np.kron(v @ np.diag(rng.uniform(-1, 1, 2)) @ v.conj().T, np.eye(2))
        c2 = np.kron(v @ np.diag(rng.uniform(-1, 1, 2)) @ v.conj().T, np.eye(2))
        ds = []
        for _ in range(2):
            m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            m = (m + m.conj().T) / 2
            m = m / max(1.0, float(np.linalg.norm(m, 2)))
            ds.append(np.kron(np.eye(2), m))
        w = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        w = w @ w.conj().T
        from ncprob import DensityOperator

        omega = DensityOperator(w / np.trace(w))
        worst = max(worst, chsh_beta(c1, c2, ds[0], ds[1], omega))
    print(f"  largest beta seen = {worst:.12f}  (classical cap: 2)")
    print("  sharing an eigenbasis on one side is enough to stay classical;")
    print("  beating 2 needs non-commuting observables on both sides.")


if __name__ == "__main__":
    main()
