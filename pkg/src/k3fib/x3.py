"""Divisor bookkeeping for the order-3 case-study surface.

The surface carries a genus-1 pencil whose singular members are an
18-cycle of rational curves Theta0..Theta17 together with six
(-2)-sections Sigma0..Sigma5 and a smooth fibre Fa of the order-3
automorphism's pencil.  The automorphism fixes the six curves
Theta_{3i} pointwise plus nine isolated points: six on the cycle, one
between Theta_{3i+1} and Theta_{3i+2}, and three on Fa where Sigma_j
meets Sigma_{j+3}.  Blowing up the nine points and dividing by the
automorphism gives a rational surface; pushing a fibre class through
that roof and pairing with the canonical class decides how the induced
pencil behaves downstairs: -6 for a conic bundle times three (type 1),
0 for a splitting genus-1 pencil (type 2).

Two independent computations of that pairing are kept side by side.
The closed form -2 * sum(L . Theta_{3i}) follows from the projection
formula because the exceptional terms drop out; the long route pulls
back along the blow-up, pushes forward with the full curve dictionary
and pairs with the canonical divisor downstairs.  Every call runs both
and insists they agree.
"""

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "CurveConfig",
    "TABLE4",
    "x3_configuration",
    "sigma5_configuration",
    "intersect",
    "k_intersection",
    "pushforward_table",
    "pushforward_pairing",
    "classify_x3",
    "sigma5_type3_check",
]


def _key(a, b):
    return (a, b) if a <= b else (b, a)


def _bilinear(table, d1, d2):
    total = 0
    for a, ca in d1.items():
        for b, cb in d2.items():
            total += ca * cb * table.get(_key(a, b), 0)
    return total


@dataclass(frozen=True)
class CurveConfig:
    """Named curves with their symmetric integer intersection table.

    table maps sorted name pairs to products; the diagonal holds the
    self-intersections.  fixed_curves are the pointwise-fixed ones,
    blowup_points lists for each blown-up point the tuple of curves
    through it, and fibre_classes are divisors declared to be fibres
    (they must square to zero).
    """

    names: tuple
    table: dict
    fixed_curves: frozenset = frozenset()
    blowup_points: tuple = ()
    fibre_classes: tuple = ()

    def __post_init__(self):
        known = set(self.names)
        for a, b in self.table:
            if a not in known or b not in known:
                raise ValueError(f"table mentions undeclared curve {a!r}/{b!r}")
        for point in self.blowup_points:
            for name in point:
                if name not in known:
                    raise ValueError(f"blowup point on unknown curve {name!r}")
        for fibre in self.fibre_classes:
            if _bilinear(self.table, fibre, fibre) != 0:
                raise ValueError("declared fibre class does not square to 0")

    def pairing(self, a, b):
        for name in (a, b):
            if name not in set(self.names):
                raise ValueError(f"unknown curve {name!r}")
        return self.table.get(_key(a, b), 0)


def intersect(cfg, d1, d2):
    """Bilinear extension of the intersection table to divisors."""
    known = set(cfg.names)
    for div in (d1, d2):
        for name in div:
            if name not in known:
                raise ValueError(f"unknown curve {name!r}")
    return _bilinear(cfg.table, d1, d2)


def x3_configuration():
    """The shipped curve configuration of the case-study surface."""
    thetas = tuple(f"Theta{i}" for i in range(18))
    sigmas = tuple(f"Sigma{j}" for j in range(6))
    names = thetas + sigmas + ("Fa",)
    table = {}
    for i in range(18):
        table[_key(thetas[i], thetas[i])] = -2
        table[_key(thetas[i], thetas[(i + 1) % 18])] = 1
    for j in range(6):
        table[_key(sigmas[j], sigmas[j])] = -2
        table[_key(sigmas[j], thetas[3 * j])] = 1
        table[_key("Fa", sigmas[j])] = 1
    for j in range(3):
        table[_key(sigmas[j], sigmas[j + 3])] = 1
    table[_key("Fa", "Fa")] = 0
    fixed = frozenset(thetas[3 * i] for i in range(6))
    blowups = tuple((thetas[3 * i + 1], thetas[3 * i + 2]) for i in range(6))
    blowups += tuple((sigmas[j], sigmas[j + 3], "Fa") for j in range(3))
    fibres = ({name: 1 for name in thetas}, {"Fa": 1})
    return CurveConfig(names, table, fixed, blowups, fibres)


def _divisor(**coeffs):
    return {name: c for name, c in coeffs.items() if c}


# fibre class / section pairs inducing the six catalogued fibrations
TABLE4 = {
    1: (_divisor(Theta16=2, Theta17=4, Theta0=6, Sigma0=3, Theta1=5,
                 Theta2=4, Theta3=3, Theta4=2, Theta5=1),
        {"Theta6": 1}),
    2: ({**{f"Theta{i}": 2 for i in range(13)},
         "Theta17": 1, "Sigma0": 1, "Sigma4": 1, "Theta13": 1},
        {"Theta16": 1}),
    3: (_divisor(Theta15=1, Theta16=2, Theta17=3, Theta0=4, Sigma0=2,
                 Theta1=3, Theta2=2, Theta3=1),
        {"Theta4": 1}),
    4: ({f"Theta{i}": 1 for i in range(18)},
        {"Sigma0": 1}),
    5: (_divisor(Theta0=3, Theta1=2, Theta17=2, Sigma0=2, Theta2=1,
                 Theta16=1, Sigma3=1),
        {"Theta3": 1}),
    6: (_divisor(Theta17=1, Sigma0=1, Theta0=2, Theta1=2, Theta2=2,
                 Theta3=2, Sigma1=1, Theta4=1),
        {"Theta5": 1}),
}


# image curve and pushforward multiplier for every curve upstairs.
# Pointwise-fixed curves and exceptional curves map one to one; the
# other curves carry an order-3 action, so their pushforward is three
# times the image.
_IMAGE = {
    "Theta0": ("Et1", 1), "Theta6": ("Et2", 1), "Theta12": ("Et3", 1),
    "Theta3": ("lt3", 1), "Theta9": ("lt1", 1), "Theta15": ("lt2", 1),
    "Theta1": ("S1", 3), "Theta2": ("S2", 3), "Theta4": ("S3", 3),
    "Theta5": ("S4", 3), "Theta7": ("S5", 3), "Theta8": ("S6", 3),
    "Theta10": ("S7", 3), "Theta11": ("S8", 3), "Theta13": ("S9", 3),
    "Theta14": ("S10", 3), "Theta16": ("S11", 3), "Theta17": ("S12", 3),
    "Sigma0": ("Ht4", 3), "Sigma1": ("Ht3", 3), "Sigma2": ("Ht5", 3),
    "Sigma3": ("Ht1", 3), "Sigma4": ("Ht6", 3), "Sigma5": ("Ht2", 3),
    "Fa": ("EO", 3),
    "E1": ("R1", 1), "E2": ("R2", 1), "E3": ("R3", 1),
    "E4": ("R4", 1), "E5": ("R5", 1), "E6": ("R6", 1),
    "E7": ("rt1", 1), "E8": ("rt3", 1), "E9": ("rt2", 1),
}

# canonical divisor of the quotient surface in image-curve names
_K_DOWN = {**{f"R{i}": 1 for i in range(1, 7)},
           **{f"S{i}": 2 for i in range(1, 13)},
           **{f"rt{i}": -1 for i in range(1, 4)},
           "EO": -2}


def _require_x3_shape(cfg):
    if set(_IMAGE) - {f"E{k}" for k in range(1, 10)} != set(cfg.names) \
            or len(cfg.blowup_points) != 9:
        raise ValueError("pushforward dictionary only covers the shipped "
                         "configuration")


def _blown_up_table(cfg):
    """Intersection table after blowing up the marked points.

    Strict transforms keep their names; the exceptional curve over
    blowup point number k is called E{k}.  All marked points are
    transverse multiplicity-1 intersections of the named curves.
    """
    table = dict(cfg.table)
    for k, point in enumerate(cfg.blowup_points, start=1):
        exc = f"E{k}"
        table[_key(exc, exc)] = -1
        for name in point:
            table[_key(name, exc)] = 1
            table[_key(name, name)] -= 1
        for i, a in enumerate(point):
            for b in point[i + 1:]:
                table[_key(a, b)] -= 1
    return table


def _pullback(cfg, div):
    """Total transform: strict transforms plus point multiplicities."""
    up = dict(div)
    for k, point in enumerate(cfg.blowup_points, start=1):
        mult = sum(div.get(name, 0) for name in point)
        if mult:
            up[f"E{k}"] = mult
    return up


def _is_unit_multiplier(cfg, name):
    return name in cfg.fixed_curves or name.startswith("E")


def pushforward_pairing(cfg):
    """Intersection table of the image curves on the quotient surface.

    An image product is the upstairs product scaled by 3 when both
    curves lie in the branch locus (pointwise fixed or exceptional),
    by 1 when exactly one does, and by 1/3 when neither does.
    """
    _require_x3_shape(cfg)
    up = _blown_up_table(cfg)
    out = {}
    for (a, b), value in up.items():
        weight_a = _is_unit_multiplier(cfg, a)
        weight_b = _is_unit_multiplier(cfg, b)
        scale = Fraction(3) if weight_a and weight_b else \
            Fraction(1) if weight_a or weight_b else Fraction(1, 3)
        scaled = scale * value
        if scaled:
            assert scaled.denominator == 1, (a, b, scaled)
            out[_key(_IMAGE[a][0], _IMAGE[b][0])] = int(scaled)
    return out


def pushforward_table(cfg, div):
    """Pull back along the blow-up, then push down to the quotient."""
    _require_x3_shape(cfg)
    known = set(cfg.names)
    for name in div:
        if name not in known:
            raise ValueError(f"unknown curve {name!r}")
    out = {}
    for name, coeff in _pullback(cfg, div).items():
        image, mult = _IMAGE[name]
        if coeff:
            out[image] = out.get(image, 0) + mult * coeff
    return out


def k_intersection(cfg, fibre_class):
    """Canonical pairing of the pushed-down fibre class, both routes.

    The short route is -2 * sum of products with the six pointwise
    fixed curves; the long route pairs the full pushforward with the
    canonical divisor downstairs.  They must agree.
    """
    if intersect(cfg, fibre_class, fibre_class) != 0:
        raise ValueError("not a fibre class (self-intersection is nonzero)")
    short = -2 * sum(
        _bilinear(cfg.table, fibre_class, {name: 1})
        for name in sorted(cfg.fixed_curves))
    down = pushforward_table(cfg, fibre_class)
    long = _bilinear(pushforward_pairing(cfg), down, _K_DOWN)
    assert short == long, (short, long)
    return short


def classify_x3(i):
    """Fibration type of catalogue entry i, from the canonical pairing."""
    if i not in TABLE4:
        raise ValueError(f"no catalogued fibration {i!r}")
    cfg = x3_configuration()
    k = k_intersection(cfg, TABLE4[i][0])
    if k == -6:
        return "Type1"
    if k == 0:
        return "Type2"
    raise ValueError(f"canonical pairing {k} matches neither type")


def sigma5_configuration(zero_meets_torsion=0):
    """Three additive star fibres with a zero and a 3-torsion section.

    Each fibre over a_j (j = 1..3) is a central curve Theta6 with three
    length-2 arms Theta0-Theta3, Theta1-Theta4, Theta2-Theta5.  The
    zero section meets every Theta0, the torsion section every Theta1.
    zero_meets_torsion sets the product of the two sections (0 in the
    honest configuration; other values are for sensitivity checks).
    """
    names = ["sigma0", "Sigma1"]
    table = {_key("sigma0", "sigma0"): -2, _key("Sigma1", "Sigma1"): -2,
             _key("sigma0", "Sigma1"): zero_meets_torsion}
    arms = ((0, 3), (1, 4), (2, 5))
    fibres = []
    for j in (1, 2, 3):
        component = {i: f"Theta{i}_a{j}" for i in range(7)}
        names.extend(component.values())
        for curve in component.values():
            table[_key(curve, curve)] = -2
        for outer, inner in arms:
            table[_key(component[outer], component[inner])] = 1
            table[_key(component[inner], component[6])] = 1
        table[_key("sigma0", component[0])] = 1
        table[_key("Sigma1", component[1])] = 1
        fibres.append({component[i]: 1 for i in range(3)}
                      | {component[i]: 2 for i in range(3, 6)}
                      | {component[6]: 3})
    return CurveConfig(tuple(names), table, fibre_classes=tuple(fibres))


def sigma5_type3_check(cfg5):
    """Product of the example fibre class with its translate.

    The divisor is supported on the first fibre plus both sections; the
    induced automorphism carries it onto the second fibre.  A nonzero
    product against a genuinely square-zero class means the fibre class
    moves, which is the type 3 situation.
    """
    arm_coeffs = {"sigma0": 1, "Sigma1": 1, "Theta0": 2, "Theta3": 3,
                  "Theta6": 4, "Theta5": 2, "Theta4": 3, "Theta1": 2}

    def on_fibre(j):
        return {name if name in ("sigma0", "Sigma1") else f"{name}_a{j}": c
                for name, c in arm_coeffs.items()}

    ell = on_fibre(1)
    moved = on_fibre(2)
    square = intersect(cfg5, ell, ell)
    product = intersect(cfg5, ell, moved)
    if square == 0:
        assert product != 0, "fibre class did not move"
    return product
