import pytest
from fractions import Fraction

from k3fib.niemeier import (NiemeierLattice, as_lattice, contains,
                            glue_classes, niemeier_by_root_type,
                            supported_root_types, verify)
from k3fib.exact import det_bareiss


EXPECTED_ORDERS = {
    "E8^3": 1,
    "D16+E8": 2,
    "D10+E7^2": 4,
    "A17+E7": 6,
    "E6^4": 9,
    "A11+D7+E6": 12,
}


def test_supported_list():
    assert set(supported_root_types()) == set(EXPECTED_ORDERS)


@pytest.mark.parametrize("name", sorted(EXPECTED_ORDERS))
def test_verify_all(name):
    n = niemeier_by_root_type(name)
    assert n.order == EXPECTED_ORDERS[name]
    rep = verify(n)
    assert rep["ok"], rep


def test_unknown_root_type_message():
    with pytest.raises(ValueError) as exc:
        niemeier_by_root_type("D24")
    msg = str(exc.value)
    for name in EXPECTED_ORDERS:
        assert name in msg


def test_as_lattice_unimodular():
    lat = as_lattice(niemeier_by_root_type("A17+E7"))
    assert lat.rank == 24
    assert det_bareiss([list(r) for r in lat.gram]) == 1


def test_contains():
    n = niemeier_by_root_type("A17+E7")
    gen = n.glue_generators[0]
    assert contains(n, gen)
    assert contains(n, [x + 1 for x in gen])
    assert contains(n, [0] * 24)
    assert contains(n, [3, -1] + [0] * 22)
    assert not contains(n, [Fraction(1, 2) * x for x in gen])
    assert not contains(n, [Fraction(1, 3)] + [0] * 23)


def test_glue_group_size():
    for name, order in EXPECTED_ORDERS.items():
        assert len(glue_classes(niemeier_by_root_type(name))) == order


def test_verify_rejects_tampered_glue():
    good = niemeier_by_root_type("D16+E8")
    # no glue at all: the stated order and the determinant both give it away
    bare = NiemeierLattice(good.root_part, (), good.order)
    assert not verify(bare)["ok"]
    # gluing the integer-normed class of D16 instead of a spinor class
    # produces an odd lattice
    from k3fib.niemeier import _component_classes
    from k3fib.roots import parse_ade_type
    rt = parse_ade_type("D16+E8")
    vclass = _component_classes(rt.symbols[0])["v"]
    bad = NiemeierLattice(
        rt, (tuple(vclass) + tuple(Fraction(0) for _ in range(8)),), 2)
    rep = verify(bad)
    assert not rep["even"]
    assert not rep["ok"]
