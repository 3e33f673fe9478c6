"""What complex weights buy: realness against distinguishability.

A scheme whose operator atoms are all Hermitian produces real weights for
every state, but for a two-level system that very property makes the two
z eigenstates indistinguishable. Complex weights are the price of full
state information. The realness of the ordered-product weights tracks the
z expectation exactly at two levels, and only one way at three.
"""

import numpy as np

import quasijoint as qj

spin = qj.spin_operators(1)
pair = (spin.j1, spin.j2)

print("Scheme-level realness and the two-level distinguishability probes:")
for spec in (
    qj.scheme_kirkwood(2),
    qj.scheme_s_alpha(0.5),
    qj.scheme_s_alpha(0.3),
    qj.scheme_margenau_hill(0.0),
    qj.scheme_margenau_hill(0.6),
):
    real = qj.scheme_is_real(spec, pair)
    blind = qj.diag_equality_check(spec, pair)
    rank = qj.reconstruction_map(*pair, spec).rank
    print(
        f"  {spec.label:20s} real weights: {str(real):5s}  "
        f"z-states blurred: {str(blind):5s}  rank {rank}/3"
    )
print("  (the three columns always agree: Hermitian atoms <=> blind <=> deficient)")

print()
print("Two levels: weights are real exactly on the equatorial plane.")
report = qj.realness_z_report(spin, 400)
print(
    f"  {report.n_checked} sampled states, {report.real_cases} real, "
    f"{report.disagreements} disagreements with the z-expectation test"
)

print()
print("Three levels: realness still forces <J3> = 0, but not conversely.")
spin1 = qj.spin_operators(2)
report3 = qj.realness_z_report(spin1, 400)
print(
    f"  {report3.n_checked} sampled states, {report3.real_cases} real, "
    f"{report3.disagreements} forward violations"
)
state = report3.counterexample
atoms = qj.build_atoms(qj.scheme_kirkwood(2), (spin1.j1, spin1.j2))
dist = qj.evaluate_distribution(atoms, state)
print(
    f"  converse fails: found a state with <J3> = "
    f"{qj.expectation(spin1.j3, state):+.1e} whose weights reach "
    f"|Im w| = {dist.max_imag():.3f}"
)
