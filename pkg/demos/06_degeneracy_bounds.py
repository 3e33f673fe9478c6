"""Counting bounds on eigenvalue degeneracy for state distinguishability.

To pin down all N^2 - 1 state coordinates from the joint weights of two
observables, the weights must carry enough independent real components:
2 N^2 - 1 <= (2 N_A - 1)(2 N_B - 1), with N_A, N_B the distinct
eigenvalue counts. The bound is necessary, not sufficient.
"""

import quasijoint as qj

print("Feasibility of (N_A, N_B) for N = 2..6 (x = infeasible):")
for n in range(2, 7):
    print(f"  N = {n}   lhs = {2 * n * n - 1}")
    header = "      N_B " + " ".join(f"{nb:3d}" for nb in range(1, n + 1))
    print(header)
    for n_a in range(1, n + 1):
        cells = []
        for n_b in range(1, n + 1):
            report = qj.degeneracy_feasible(n, n_a, n_b)
            cells.append(" ok" if report.feasible else "  x")
        print(f"    N_A={n_a:2d} " + " ".join(cells))
    eq = qj.equal_spectra_bound(n)
    nd = qj.nondegenerate_partner_bound(n)
    print(f"    thresholds: shared spectrum N' >= {eq:.4f}; "
          f"non-degenerate partner N' >= {nd:.4f}")
    print()

print("At N = 2 and N = 3 the partner threshold (5/3 and 11/5) already rules")
print("out any degeneracy. The bound is only necessary: see the reducible")
print("three-level pair in demos/03_state_tomography.py, which passes the")
print("bound yet stays rank deficient.")
