"""Joint quasi-probability tables for a spin 1/2 under different schemes.

The same state gets a different joint distribution of (J1, J2) depending
on how the exponentials of the observables are mixed: the fully ordered
product gives complex weights that sit only on eigenvalue pairs, while
symmetric mixings stay real but can spill onto impossible values or blur
states together.
"""

import numpy as np

import quasijoint as qj

spin = qj.spin_operators(1)
pair = (spin.j1, spin.j2)

states = {
    "|z+>": qj.DensityState(np.diag([1.0, 0.0])),
    "|z->": qj.DensityState(np.diag([0.0, 1.0])),
    "|y+>": qj.DensityState.pure([1 / np.sqrt(2), 1j / np.sqrt(2)]),
    "I/2": qj.DensityState.maximally_mixed(2),
}

schemes = {
    "ordered product (Kirkwood-Dirac)": qj.scheme_kirkwood(2),
    "symmetric split": qj.scheme_s_alpha(0.5),
    "symmetric ordering mixture (Margenau-Hill)": qj.scheme_margenau_hill(0.0),
}

for scheme_name, spec in schemes.items():
    atoms = qj.build_atoms(spec, pair)
    print(f"=== {scheme_name} ===")
    for state_name, rho in states.items():
        dist = qj.evaluate_distribution(atoms, rho)
        entries = ", ".join(
            f"({p[0]:+.1f},{p[1]:+.1f}): {w.real:+.3f}{w.imag:+.3f}i"
            for p, w in zip(dist.points, dist.weights)
        )
        print(f"  {state_name:5s} -> {entries}")
    print()

print("Note how the ordered product separates |z+> from |z-> through its")
print("imaginary part, while the symmetric split assigns both the same table.")
