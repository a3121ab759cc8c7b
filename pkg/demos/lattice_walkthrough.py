"""Walk through the exact lattice layer.

Covers parsing lattice expressions, Smith normal form and discriminant
forms, orthogonal complements of root loads, the six rank-24 lattices
with their glue codes, and the brute-force complement catalogue.
"""

from k3fib.embeddings import brute_force_catalog, component_complement
from k3fib.exact import smith_normal_form
from k3fib.lattice import discriminant_lattice, parse_lattice_spec
from k3fib.niemeier import niemeier_by_root_type, supported_root_types, verify
from k3fib.roots import ADESymbol, parse_ade_type

# Lattices are written as sum expressions.  A2(-1) flips the sign,
# U(3) scales the hyperbolic plane.
for spec in ("A2", "U+U(3)", "E8", "A2^2+(-6)"):
    lat = parse_lattice_spec(spec)
    disc = discriminant_lattice(lat)
    print(f"{spec:12s} rank {lat.rank}  det {lat.det():6d}  "
          f"disc group {disc.invariant_factors}")

# Smith normal form is what sits underneath the discriminant group.
gram = [list(r) for r in parse_lattice_spec("A2").gram]
d, _, _ = smith_normal_form(gram)
print("\nA2 Smith normal form diagonal:", [d[i][i] for i in range(2)])

# Complements: embed a root load into a single ADE component and ask
# what is orthogonal to it.  A2 inside E8 leaves E6; one more A2 leaves
# only A2^2; inside E7 the complement picks up a rank-one (-6) summand.
print()
for ambient, load in (("E8", "A2"), ("E8", "A2^2"), ("E7", "A2^2")):
    sym = parse_ade_type(ambient).symbols[0]
    _, gram, comp, _ = component_complement(sym, parse_ade_type(load))
    print(f"{load:5s} in {ambient}: complement {comp} (rank {len(gram)})")

# The rank-24 table: six negative definite even unimodular lattices
# whose root parts contain only A2, and the checks each must pass.
print()
for root_type in supported_root_types():
    checks = verify(niemeier_by_root_type(root_type))
    flags = " ".join(k for k, v in checks.items() if v and k != "ok")
    print(f"{root_type:10s} ok={checks['ok']}  [{flags}]")

# Brute force over actual root vectors, no glue theory: enumerate every
# primitive copy of the load up to the ambient Weyl group and collect
# complement classes.  In E8 there is exactly one class for A2 and for
# A2^2, and none at all for A2^3.
print()
e8 = ADESymbol("E", 8)
for load in ("A2", "A2^2", "A2^3"):
    classes = brute_force_catalog(load, e8)
    shown = [f"rank {c.rank} det {c.det} {c.ade}" for c in classes]
    print(f"{load:5s} in E8 -> {len(classes)} class(es) {shown}")
