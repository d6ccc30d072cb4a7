"""Walk through the 4x4 sequence whose normal parts exceed the rank budget.

Prints, for a few indices, the normal-projection singular values, the rank of
the retraction-corrected remainder and the distance to the limit direction.
"""

import argparse

import numpy as np

from detvar import adapted_frame, membership, orthographic_retract, proj_normal, proj_tangent
from detvar.harness import counterexample_limit, counterexample_point, counterexample_term
from detvar.linalg_core import numerical_rank, singular_values


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--indices", type=int, nargs="+", default=[1, 2, 5, 10, 100, 1000])
    args = parser.parse_args()

    X, Z = counterexample_point(), counterexample_limit()
    frame = adapted_frame(X)
    print(f"{'i':>6} {'sigma(P_N X_i)':>26} {'rank P_N':>8} {'rank X_i-L_i':>12} {'|i(X_i-X)-Z|':>13}")
    for i in args.indices:
        Xi = counterexample_term(i)
        PN = proj_normal(frame, Xi)
        L = orthographic_retract(X, frame, proj_tangent(frame, Xi - X))
        s = singular_values(PN)[:2]
        dist = np.linalg.norm(i * (Xi - X) - Z)
        print(f"{i:>6} {s[0]:>12.3e} {s[1]:>12.3e} {numerical_rank(PN):>8} "
              f"{numerical_rank(Xi - L):>12} {dist:>13.3e}")
    rep = membership(X, Z, 3)
    print(f"limit direction: verdict={'member' if rep.is_member else 'non-member'}, "
          f"normal block singular values={rep.normal_block_singular_values}")


if __name__ == "__main__":
    main()
