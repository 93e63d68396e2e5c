"""Closed-form vs truncated-Fock discrepancy as the number of levels grows."""
import argparse

import numpy as np

from ecbell import fock
from ecbell.correlators import correlator2, correlator3
from ecbell.states import make_bipartite, make_tripartite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    draws = []
    for _ in range(args.draws):
        e, s, t = rng.uniform(0.1, 1.5, 3)
        a = rng.uniform(-0.7, 0.7, 6)
        draws.append((complex(a[0], a[1]), complex(a[2], a[3]), complex(a[4], a[5]), e, s, t))

    print(f"{'dim':>4} {'worst |d2|':>12} {'worst |d3|':>12}")
    for dim in (6, 8, 12, 16, 20, 24, 32):
        w2 = w3 = 0.0
        for z, w, c, e, s, t in draws:
            st2, st3 = make_bipartite(e, s), make_tripartite(e, s, t)
            w2 = max(w2, abs(fock.oracle_correlator((z, w), st2, dim, check=False) - correlator2(z, w, st2)))
            w3 = max(w3, abs(fock.oracle_correlator((z, w, c), st3, dim, check=False) - correlator3(z, w, c, st3)))
        print(f"{dim:>4} {w2:12.3e} {w3:12.3e}")


if __name__ == "__main__":
    main()
