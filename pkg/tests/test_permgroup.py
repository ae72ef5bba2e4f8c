import pytest

from provar import permgroup as pg
from provar.errors import CapExceededError
from provar.permgroup import PermGroup


# fixture groups
def s3():
    return PermGroup(3, [(1, 0, 2), (1, 2, 0)])


def s4():
    return PermGroup(4, [(1, 0, 2, 3), (1, 2, 3, 0)])


def a4():
    return PermGroup(4, [(1, 0, 3, 2), (1, 2, 0, 3)])


def d4():
    return PermGroup(4, [(1, 2, 3, 0), (2, 1, 0, 3)])  # 4-cycle and a reflection


def q8():
    # x = (0 1 2 3)(4 5 6 7), y = (0 4 2 6)(1 7 3 5): y x y^-1 = x^-1, y^2 = x^2
    x = (1, 2, 3, 0, 5, 6, 7, 4)
    y = (4, 7, 6, 5, 2, 1, 0, 3)
    return PermGroup(8, [x, y])


def c12():
    return PermGroup(12, [tuple((i + 1) % 12 for i in range(12))])


def c2xc4():
    return PermGroup(6, [(1, 0, 2, 3, 4, 5), (0, 1, 3, 4, 5, 2)])


def brute_commutator_subgroup(G):
    # oracle: subgroup generated by all commutators of all element pairs
    elems = G.elements()
    comms = {pg.commutator(a, b) for a in elems for b in elems}
    return PermGroup(G.degree, sorted(comms))


def brute_max_p_subgroup_order(G, p):
    # oracle: exhaustive extension through all subgroups, track p-power orders
    best = 1
    for sub in G.all_subgroups():
        order = sub.order
        n = order
        while n % p == 0:
            n //= p
        if n == 1 and order > best:
            best = order
    return best


def supersolvable_oracle(G):
    # a finite group is supersolvable iff every maximal subgroup has prime index
    subs = G.all_subgroups()
    proper = [s for s in subs if s.order < G.order]
    maximal = [
        s
        for s in proper
        if not any(
            s.order < t.order < G.order and s.element_set() <= t.element_set()
            for t in proper
        )
    ]
    return all(pg._is_small_prime(G.order // m.order) for m in maximal)


def test_compose_convention_left_regular_is_homomorphism():
    table = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    G = PermGroup.from_cayley_table(3, table)
    assert G.order == 3


def test_enumerate_examples():
    assert PermGroup(2, [(1, 0)]).order == 2
    assert s3().order == 6
    assert d4().order == 8
    assert q8().order == 8
    assert a4().order == 12
    assert s4().order == 24


def test_enumerate_cap():
    with pytest.raises(CapExceededError):
        PermGroup(5, [(1, 0, 2, 3, 4), (1, 2, 3, 4, 0)], cap=10).elements()


def test_lagrange_everywhere():
    for G in (s3(), s4(), a4(), d4(), q8(), c12()):
        for sub in G.all_subgroups():
            assert G.order % sub.order == 0


def test_derived_subgroup_examples():
    assert c12().derived_subgroup().order == 1
    assert c2xc4().derived_subgroup().order == 1

    d = s3().derived_subgroup()
    assert d.order == 3  # A3

    d = a4().derived_subgroup()
    assert d.order == 4  # V4
    assert d.structure().elementary_abelian


def test_derived_subgroup_against_brute_force():
    for G in (s3(), s4(), a4(), d4(), q8(), c12()):
        ours = G.derived_subgroup()
        brute = brute_commutator_subgroup(G)
        assert ours.element_set() == brute.element_set()
        assert ours.is_normal_in(G)
        assert G.quotient(ours).structure().abelian


def test_sylow_examples():
    assert s3().sylow(3).order == 3
    assert q8().sylow(2).order == 8
    assert s3().sylow(5).order == 1


def test_sylow_orders_match_p_part():
    for G in (s3(), s4(), a4(), d4(), q8(), c12()):
        n = G.order
        for p in (2, 3, 5):
            p_part = 1
            m = n
            while m % p == 0:
                p_part *= p
                m //= p
            syl = G.sylow(p)
            assert syl.order == p_part
            assert syl.is_subgroup_of(G)
            assert syl.order == brute_max_p_subgroup_order(G, p)


def test_quotient_examples():
    G = s3()
    trivial = PermGroup(3, [])
    assert G.quotient(trivial).order == 6
    assert G.quotient(G.derived_subgroup()).order == 2
    assert a4().quotient(a4().derived_subgroup()).order == 3


def test_quotient_rejects_non_normal():
    G = s3()
    twist = G.subgroup([(1, 0, 2)])
    with pytest.raises(ValueError):
        G.quotient(twist)


def test_supersolvable_examples():
    assert c12().is_supersolvable()
    assert c2xc4().is_supersolvable()
    assert s3().is_supersolvable()
    assert not a4().is_supersolvable()
    assert d4().is_supersolvable()
    assert q8().is_supersolvable()
    assert not s4().is_supersolvable()


def test_supersolvable_against_maximal_subgroup_oracle():
    for G in (s3(), a4(), d4(), q8(), c12(), c2xc4()):
        assert G.is_supersolvable() == supersolvable_oracle(G)


def test_supersolvable_no_backtracking_needed():
    # for supersolvable G, every prime-order normal cyclic subgroup leads to
    # a supersolvable quotient, so the first deterministic choice is safe
    for G in (s3(), d4(), q8(), c12(), c2xc4()):
        if not G.is_supersolvable():
            continue
        for x in G.elements():
            o = pg.perm_order(x)
            if not pg._is_small_prime(o):
                continue
            cyc = PermGroup(G.degree, [x])
            if cyc.is_normal_in(G):
                assert G.quotient(cyc).is_supersolvable()


def test_structure_examples():
    v4 = PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)])
    rep = v4.structure()
    assert rep.elementary_abelian and rep.exponent == 2 and rep.elementary_prime == 2

    c4 = PermGroup(4, [(1, 2, 3, 0)])
    rep = c4.structure()
    assert rep.abelian and not rep.elementary_abelian and rep.exponent == 4

    rep = a4().derived_subgroup().structure()
    assert rep.elementary_abelian and rep.elementary_prime == 2

    assert not q8().structure().abelian


def test_all_subgroups_counts():
    assert len(s3().all_subgroups()) == 6
    assert len(s4().all_subgroups()) == 30
    assert len(q8().all_subgroups()) == 6
    assert len(a4().all_subgroups()) == 10


def test_json_round_trip():
    G = s4()
    again = PermGroup.from_json_dict(G.to_json_dict())
    assert again.degree == 4 and again.element_set() == G.element_set()


def test_cayley_table_input():
    table = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    G = PermGroup.from_cayley_table(4, table)
    assert G.order == 4
    assert G.structure().exponent == 4
    with pytest.raises(ValueError):
        PermGroup.from_cayley_table(3, table)
