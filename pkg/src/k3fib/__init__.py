"""Exact-arithmetic toolkit for Jacobian elliptic fibrations on K3 surfaces
carrying a non-symplectic automorphism of order three.

Subpackage map:

* ``exact``       integer/rational linear algebra (Smith, Hermite, kernels)
* ``lattice``     even lattices, discriminant forms, complements, closures
* ``roots``       ADE symbols, root enumeration, root-type recognition
* ``niemeier``    the six Niemeier lattices relevant here, with verification
* ``embeddings``  primitive embeddings of A2/E6/E8 sums into root lattices
* ``fibrations``  the ten-surface sweep: frame lattices, Mordell-Weil data
* ``kodaira``     Kodaira fibre combinatorics and the type-1/2 classifier
* ``weierstrass`` rational Weierstrass models over Q(t), fibre analysis
* ``x3``          the special surface with a 3-torsion section: divisor audit
* ``cli``         command line front end (JSON / markdown reports)
"""

__version__ = "0.1.0"
