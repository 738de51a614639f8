"""Rebuilding a Hilbert space from expectation values alone.

Starting from nothing but an algebra of observables and a single
expectation functional omega, the quotient of the algebra by omega's
null directions carries a left-multiplication representation with a
cyclic vector Psi reproducing omega exactly.  How much space survives
the quotient depends on the state: faithful states keep the whole
algebra, pure states collapse it to one copy of the underlying system.
"""

import numpy as np

from ncprob import DensityOperator, PureState, gns_construct


def full_matrix_units(d):
    units = []
    for i in range(d):
        for j in range(d):
            m = np.zeros((d, d), dtype=complex)
            m[i, j] = 1.0
            units.append(m)
    return units


def report(title, basis, rho):
    rep = gns_construct(basis, rho)
    psi = rep.cyclic_vector.vector
    worst = max(
        abs(complex(psi.conj() @ (img @ psi)) - complex(np.trace(rho.matrix @ m)))
        for img, m in zip(rep.images, basis)
    )
    print(f"{title}")
    print(f"  algebra basis size     : {len(basis)}")
    print(f"  representation dim     : {rep.rep_dim}")
    print(f"  worst |<Psi|pi(a)Psi> - omega(a)| : {worst:.2e}\n")
    return rep


def main():
    d = 2
    units = full_matrix_units(d)

    report("full 2x2 algebra, maximally mixed state (faithful):",
           units, DensityOperator(np.eye(2) / 2))

    report("full 2x2 algebra, pure state:",
           units, PureState([1.0, 0.0]).density())

    report("diagonal 3x3 algebra, faithful diagonal state:",
           [np.diag([1.0, 0, 0]), np.diag([0, 1.0, 0]), np.diag([0, 0, 1.0])],
           DensityOperator(np.diag([0.5, 0.3, 0.2])))

    rep = report("full 3x3 algebra, rank-2 state (partially degenerate):",
                 full_matrix_units(3),
                 DensityOperator(np.diag([0.6, 0.4, 0.0])))
    x = np.arange(9.0).reshape(3, 3)
    print("an arbitrary element acts through its basis expansion:")
    print(np.round(rep.represent(x)[:4, :4].real, 3))


if __name__ == "__main__":
    main()
