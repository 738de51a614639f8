"""Kernel diagnostics: when two conditional descriptions share one sample space.

Kernels derived from an actual joint law always satisfy the Bayes
identity alpha(x,y)nu(y) = alpha~(y,x)mu(x) and the total-probability
rule.  Born kernels of a unitary need not: the defect delta(x) is the
interference signature.  Conditioned families also forget the context
weights, so distinct base laws can become indistinguishable after
conditioning.
"""

import numpy as np

from ncprob import (
    Distribution,
    FiniteProbabilitySpace,
    RandomVariable,
    TransitionKernel,
    bayes_violation,
    contextual_family,
    interference_delta,
)
from ncprob.hilbert import hadamard_unitary


def main():
    rng = np.random.default_rng(4)
    joint = rng.dirichlet(np.ones(6)).reshape(2, 3)
    kernel = TransitionKernel.from_joint(joint)
    mu = Distribution((0.0, 1.0), joint.sum(axis=1))
    nu = Distribution((0.0, 1.0, 2.0), joint.sum(axis=0))
    print("kernels cut from one joint law:")
    print(f"  max |Bayes defect|        : {np.abs(bayes_violation(kernel, mu, nu)).max():.2e}")
    print(f"  max |total-prob defect|   : "
          f"{np.abs(interference_delta(mu, kernel.alpha, nu)).max():.2e}")

    print("\nBorn kernel of the two-level rotation (no joint law behind it):")
    born = TransitionKernel.from_unitary(hadamard_unitary())
    sure = Distribution((0.0, 1.0), (1.0, 0.0))
    balanced = Distribution.uniform([0.0, 1.0])
    delta = interference_delta(sure, born.alpha, balanced)
    print(f"  delta = {delta}   (sums to {delta.sum():+.1e})")
    point = Distribution((0.0, 1.0), (1.0, 0.0))
    print(f"  Bayes defect matrix:\n{bayes_violation(born, point, point)}")
    print("  the +/- 1/2 pattern cannot come from any single joint law.")

    print("\nconditioning forgets the context weights:")
    outcomes = (1, 2, 3, 4)
    parity = RandomVariable("parity", {o: float(o % 2) for o in outcomes})
    base1 = FiniteProbabilitySpace(outcomes, (0.25, 0.25, 0.25, 0.25))
    base2 = FiniteProbabilitySpace(outcomes, (0.30, 0.20, 0.30, 0.20))
    fam1 = contextual_family(base1, parity)
    fam2 = contextual_family(base2, parity)
    for name, fam in (("uniform base", fam1), ("tilted base ", fam2)):
        rows = ["  ".join(f"{w:.3f}" for w in sp.weights) for sp in fam.conditioned]
        print(f"  {name}: conditioned weights -> {rows}")
    print("  identical families, different bases: the dropped P(context) values")
    print("  are exactly the information conditioning cannot give back.")


if __name__ == "__main__":
    main()
