"""A die as a diagonal operator.

An eight-cell die whose faces print the values 1..6 (with 2 and 5 each
printed on two extra faces) defines, through its pushforward law, a
diagonal operator and a density matrix.  Classical expectations and
operator traces then agree to machine precision, and seeded sampling
shows the law of large numbers converging on an event's probability.
"""

import numpy as np

from ncprob import (
    Distribution,
    Event,
    FiniteProbabilitySpace,
    RandomVariable,
    apply_function,
    density_from_distribution,
    expectation,
    lln_frequency,
    observable_from_distribution,
    pushforward,
    shannon_entropy,
    trace_expectation,
)


def main():
    cells = FiniteProbabilitySpace(range(1, 9), [1 / 8] * 8)
    printed = RandomVariable("D", {1: 1, 2: 5, 3: 3, 4: 4, 5: 2, 6: 6, 7: 5, 8: 2})

    mu = pushforward(printed, cells)
    print("law of the printed value:")
    for v, p in zip(mu.support, mu.probs):
        print(f"  P(D = {v:g}) = {p:.4f}")
    print(f"mean  : {mu.mean():.4f}")
    print(f"entropy (nats): {shannon_entropy(mu):.6f}  "
          f"(a fair six-value die would give {shannon_entropy(Distribution.uniform(mu.support)):.6f})")

    op, pvm = observable_from_distribution(mu)
    rho = density_from_distribution(mu, pvm)
    f = lambda x: (x - 3.5) ** 2
    classical = expectation(f, mu)
    quantum = trace_expectation(rho, apply_function(f, op))
    print(f"\nvariance around 3.5, classically      : {classical:.12f}")
    print(f"variance around 3.5, as Tr(rho f(D))  : {quantum:.12f}")
    print(f"difference                            : {abs(classical - quantum):.2e}")

    even_faces = Event({2, 4, 6, 8})
    print("\nempirical frequency of an even cell (seeded draws):")
    for trials in (100, 10_000, 1_000_000):
        freq = lln_frequency(cells, even_faces, trials)
        print(f"  {trials:>9,} trials -> {freq:.5f}   (target {cells.prob(even_faces):.1f})")


if __name__ == "__main__":
    main()
