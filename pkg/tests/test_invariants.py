import numpy as np
import pytest

from centdet.fplinalg import intersect
from centdet.pgroup import PcPresentation, direct_product
from centdet.invariants import (
    Analyzer,
    GroupType,
    Workspace,
    e_of,
    h_of,
)

WS = Workspace()


def cyclic(p, k):
    rels = []
    for i in range(k):
        w = [0] * k
        if i + 1 < k:
            w[i + 1] = 1
        rels.append(tuple(w))
    return PcPresentation(p, k, rels, {})


def elem_abelian(p, n):
    return PcPresentation(p, n, [(0,) * n] * n, {})


Q8 = PcPresentation(2, 3, [(0, 0, 1), (0, 0, 1), (0, 0, 0)], {(1, 0): (0, 0, 1)})
D8 = PcPresentation(2, 3, [(0, 0, 0), (0, 0, 1), (0, 0, 0)], {(1, 0): (0, 0, 1)})
W32 = PcPresentation(
    2, 5,
    [(0, 0, 1, 0, 0), (0, 0, 0, 0, 1), (0,) * 5, (0,) * 5, (0,) * 5],
    {(1, 0): (0, 0, 0, 1, 0)},
)


def semidihedral(k):
    n = k
    pow_rels = [(0,) * n]
    for i in range(1, n):
        w = [0] * n
        if i + 1 < n:
            w[i + 1] = 1
        pow_rels.append(tuple(w))
    comm = {}
    w = [0] * n
    for t in range(2, n - 1):
        w[t] = 1
    comm[(1, 0)] = tuple(w)
    for i in range(2, n - 1):
        w = [0] * n
        for t in range(i + 1, n):
            w[t] = 1
        comm[(i, 0)] = tuple(w)
    return PcPresentation(2, n, pow_rels, comm)


# ---------------------------------------------------------------------------
# restriction image and type


def test_restriction_image_elementary_abelian():
    a = WS.analyzer(elem_abelian(2, 2), 5)
    assert a.restriction_image_dims().dims == tuple(a.res.betti[:6])


def test_restriction_image_z4():
    a = WS.analyzer(cyclic(2, 2), 8)
    assert a.restriction_image_dims().dims == (1, 0, 1, 0, 1, 0, 1, 0, 1)


def test_restriction_image_q8():
    a = WS.analyzer(Q8, 8)
    assert a.restriction_image_dims().dims == (1, 0, 0, 0, 1, 0, 0, 0, 1)


@pytest.mark.parametrize(
    "G,N,expected",
    [
        (Q8, 8, (4,)),
        (cyclic(2, 2), 6, (2,)),
        (cyclic(2, 4), 6, (2,)),
        (D8, 6, (2,)),
        (W32, 6, (2, 2, 2)),
        (elem_abelian(2, 3), 4, (1, 1, 1)),
        (cyclic(2, 1), 4, (1,)),
        (semidihedral(4), 8, (4,)),
    ],
)
def test_types_p2(G, N, expected):
    t = WS.analyzer(G, N).group_type()
    assert t.entries == expected
    assert t.certified


def test_types_odd_p():
    assert WS.analyzer(cyclic(3, 2), 8).group_type().entries == (2,)
    assert WS.analyzer(cyclic(3, 1), 6).group_type().entries == (1,)
    assert WS.analyzer(elem_abelian(3, 2), 6).group_type().entries == (1, 1)
    t = WS.analyzer(direct_product(cyclic(3, 1), cyclic(3, 2)), 8).group_type()
    assert t.entries == (2, 1)


def test_uncertified_type_at_tiny_bound():
    # Q8 needs degree 4 to see x^4; at N = 3 the flag cannot saturate
    a = Analyzer(Q8, 3, workspace=Workspace())
    t = a.group_type()
    assert not t.certified


def test_e_h_values():
    assert e_of(GroupType(2, (8, 8), True)) == 14
    assert h_of(GroupType(2, (8, 8), True)) == 4
    assert e_of(GroupType(2, (4, 2), True)) == 4
    assert h_of(GroupType(2, (4, 2), True)) == 2
    assert e_of(GroupType(2, (1, 1, 1), True)) == 0
    assert h_of(GroupType(2, (1, 1, 1), True)) == 0
    assert e_of(GroupType(2, (4, 4, 4), True)) == 9
    assert h_of(GroupType(2, (4, 4, 4), True)) == 2
    # odd p: a1 = 2p^k has h = 2p^(k-1); a1 = 2 has h = 1
    assert h_of(GroupType(3, (6, 2), True)) == 2
    assert h_of(GroupType(3, (2, 1), True)) == 1


# ---------------------------------------------------------------------------
# Duflot subalgebra


def test_duflot_w32():
    d = WS.analyzer(W32, 6).duflot()
    assert sorted(deg for deg, _ in d.generators) == [2, 2, 2]
    assert d.a_dims(6) == [1, 0, 3, 0, 6, 0, 10]


def test_duflot_elementary_abelian_is_everything():
    a = WS.analyzer(elem_abelian(2, 2), 6)
    d = a.duflot()
    assert d.a_dims(6) == a.res.betti[:7]


def test_duflot_z4():
    d = WS.analyzer(cyclic(2, 2), 6).duflot()
    assert [deg for deg, _ in d.generators] == [2]


def test_duflot_restrictions_are_targets():
    a = WS.analyzer(Q8, 8)
    d = a.duflot()
    rmap = a.restriction_to_C()
    for (deg, xi), (deg2, target) in zip(d.generators, d.targets):
        assert deg == deg2
        assert np.array_equal(rmap.apply(xi).vec, target)


def test_duflot_odd_p_split():
    # Z/3 x Z/9 has one split entry (a=1) and one polynomial entry (a=2)
    G = direct_product(cyclic(3, 1), cyclic(3, 2))
    a = WS.analyzer(G, 8)
    d = a.duflot()
    degs = sorted(deg for deg, _ in d.generators)
    assert degs == [1, 2, 2]  # x, its Bockstein partner, and y^(p^0)


# ---------------------------------------------------------------------------
# Q_A and P_C


def test_qa_w32():
    assert WS.analyzer(W32, 8).qa_dims().dims == (1, 2, 2, 1, 0, 0, 0, 0, 0)


def test_qa_pcentral_palindrome_top_e():
    for G, N in ((Q8, 8), (W32, 8), (cyclic(2, 2), 6), (direct_product(Q8, cyclic(2, 2)), 8)):
        a = WS.analyzer(G, N)
        assert a.p_central
        q = list(a.qa_dims().dims)
        e = a.e
        assert q[e] == 1
        assert all(d == 0 for d in q[e + 1:])
        assert q[: e + 1] == q[e::-1]


def test_pc_inside_qa():
    for G, N in ((Q8, 6), (D8, 6), (W32, 6), (semidihedral(4), 6)):
        a = WS.analyzer(G, N)
        p_dims = a.pc_dims().dims
        q_dims = a.qa_dims().dims
        for k in range(N + 1):
            assert p_dims[k] <= q_dims[k]
        # the composite P -> Q is monic: P meets the ideal span trivially
        for k in range(1, N + 1):
            span = a._cache.get(("qa_span", k))
            P = a.comodule().primitive_basis(k)
            assert intersect(P, span).dim == 0


def test_pc_top_for_p_central():
    for G, N in ((Q8, 8), (W32, 6)):
        a = WS.analyzer(G, N)
        e = a.e
        dims = a.pc_dims().dims
        assert dims[e] == 1
        assert all(d == 0 for d in dims[e + 1:])


def test_pc_w32_degreewise():
    # primitives: 1; x, y; nothing in degree 2; the top class
    assert WS.analyzer(W32, 6).pc_dims().dims[:4] == (1, 2, 0, 1)


# ---------------------------------------------------------------------------
# central essential classes


def test_cess_d8_vanishes():
    a = WS.analyzer(D8, 8)
    assert a.cess_dims().dims == (0,) * 9
    assert a.e_prime() == (-1, True)
    assert a.e_double_prime() == (-1, True)


def test_cess_sd16():
    a = WS.analyzer(semidihedral(4), 10)
    assert a.e_prime() == (2, True)
    assert a.e_double_prime() == (2, True)
    # r - c = 1 duality: Q_A Cess dims form a palindrome against degree e
    q = a.qa_cess_dims().dims
    e = a.e
    for k in range(e + 1):
        assert q[k] == q[e - k]
    # the central essential primitives inject into the indecomposables
    pc = a.pc_cess_dims().dims
    for k in range(11):
        assert pc[k] <= q[k]


def test_cess_p_central_convention():
    a = WS.analyzer(Q8, 6)
    assert a.cess_subspaces() is None
    assert a.cess_dims().dims == tuple(a.res.betti[:7])
    assert a.e_prime() == (3, True)


def test_e_dp_le_e_prime():
    for G, N in ((D8, 6), (semidihedral(4), 8), (semidihedral(5), 8)):
        a = WS.analyzer(G, N)
        ep, _ = a.e_prime()
        edp, _ = a.e_double_prime()
        assert edp <= ep


# ---------------------------------------------------------------------------
# detection numbers


def test_d0_d1_q8():
    assert WS.analyzer(Q8, 8).d0_d1_p_central() == (3, 5)


def test_d0_d1_elementary_abelian():
    assert WS.analyzer(elem_abelian(2, 3), 4).d0_d1_p_central() == (0, 0)


def test_d0_d1_not_defined_for_non_p_central():
    with pytest.raises(ValueError):
        WS.analyzer(D8, 6).d0_d1_p_central()


def test_d0_general_p_central_matches_e():
    for G, N in ((Q8, 8), (W32, 8)):
        a = WS.analyzer(G, N)
        val, cert = a.d0_general()
        assert (val, cert) == (a.e, True)


def test_d0_d8():
    assert WS.analyzer(D8, 8).d0_general() == (0, True)


def test_d0_product_law():
    # d0(Q8 x Z4) = d0(Q8) + d0(Z4) = 3 + 1
    P = direct_product(Q8, cyclic(2, 2))
    a = WS.analyzer(P, 8)
    assert a.d0_d1_p_central() == (4, 6)
    val, cert = a.d0_general()
    assert val == 4 and cert


def test_product_laws_type_e_h():
    P = direct_product(Q8, cyclic(2, 2))
    t = WS.analyzer(P, 8).group_type()
    assert t.entries == (4, 2)
    assert t.e == 4 and t.h == 2
    P2 = direct_product(cyclic(2, 2), cyclic(2, 2))
    t2 = WS.analyzer(P2, 6).group_type()
    assert t2.entries == (2, 2)
    assert t2.e == 2 and t2.h == 1
    a2 = WS.analyzer(P2, 6)
    assert a2.d0_d1_p_central() == (2, 3)


def test_eprime_product_with_p_central_factor():
    # Cess(G x H) = Cess(G) (x) Cess(H); with H = Z/2, e'(SD16 x Z2) = 2 + 0
    P = direct_product(semidihedral(4), cyclic(2, 1))
    a = WS.analyzer(P, 8)
    ep, cert = a.e_prime()
    assert ep == 2
    edp, _ = a.e_double_prime()
    assert edp == 2


# ---------------------------------------------------------------------------
# top primitive class


def test_top_class_q8_essential():
    a = WS.analyzer(Q8, 8)
    z = a.top_primitive_class()
    assert z.degree == 3
    assert a.is_essential(z)


def test_top_class_w32_essential():
    a = WS.analyzer(W32, 6)
    z = a.top_primitive_class()
    assert z.degree == 3
    assert a.is_essential(z)


def test_top_class_rejects_elementary_abelian():
    with pytest.raises(ValueError):
        WS.analyzer(elem_abelian(2, 2), 4).top_primitive_class()


# ---------------------------------------------------------------------------
# locally finite part and layers


def test_lf_equals_pc_for_p_central():
    for G, N in ((Q8, 6), (W32, 5), (cyclic(2, 2), 6)):
        a = WS.analyzer(G, N)
        assert a.lf_dims().dims == a.pc_dims().dims


def test_bar_rd_p_central_tensor_formula():
    for G, N in ((Q8, 6), (cyclic(2, 2), 5)):
        a = WS.analyzer(G, N)
        pdims = a.pc_dims().dims
        for d in range(N + 1):
            got = a.bar_rd_dims(d).dims
            expect = tuple(
                a.resC.betti[j] * pdims[d] for j in range(N - d + 1)
            )
            assert got == expect


def test_lf_d8_is_scalars():
    a = WS.analyzer(D8, 6)
    assert a.lf_dims().dims == (1, 0, 0, 0, 0, 0, 0)


def test_lf_sd16():
    # LF in positive degrees injects into central essential primitives
    a = WS.analyzer(semidihedral(4), 6)
    lf = a.lf_dims().dims
    assert lf[0] == 1
    pc_cess = a.pc_cess_dims().dims
    for k in range(1, 7):
        assert lf[k] <= pc_cess[k] + (1 if k == 0 else 0)


# ---------------------------------------------------------------------------
# reports


def test_report_q8():
    r = WS.analyzer(Q8, 8).report("Q8").to_json_dict()
    assert r["type"] == [4]
    assert (r["e"], r["h"], r["d0"], r["d1"]) == (3, 2, 3, 5)
    assert r["p_central"] is True
    assert r["certified"]["type"] is True


def test_report_d8():
    r = WS.analyzer(D8, 8).report("D8").to_json_dict()
    assert r["type"] == [2]
    assert r["e"] == 1
    assert r["e_prime"] == -1
    assert r["d0"] == 0
    assert r["d1"] is None
    assert r["p_central"] is False
    assert r["cess_nonzero"] is False


def test_report_trivial_group():
    triv = PcPresentation(2, 0, [], {})
    r = WS.analyzer(triv, 2).report("1").to_json_dict()
    assert r["type"] == []
    assert r["e"] == 0 and r["d0"] == 0 and r["d1"] == 0


def test_sylow_transfer():
    from centdet.invariants import d0_d1_via_sylow_transfer
    assert d0_d1_via_sylow_transfer(GroupType(2, (4, 4, 4), True)) == (9, 11)
    assert d0_d1_via_sylow_transfer(GroupType(2, (8, 8), True)) == (14, 18)
    t = WS.analyzer(Q8, 8).group_type()
    assert d0_d1_via_sylow_transfer(t) == (3, 5)
    with pytest.raises(ValueError):
        d0_d1_via_sylow_transfer(GroupType(2, (8, 8), False))


def test_inflation_image_is_degree_one_primitives():
    # H^1 of the central quotient inflates isomorphically onto P_C H^1
    from centdet.pgroup import quotient_by_central, center
    from centdet.resolution import induced_map
    from centdet.fplinalg import FpMatrix, image_basis
    for G in (Q8, W32):
        a = WS.analyzer(G, 4)
        Qpres, proj = quotient_by_central(G, center(G))
        resQ = WS.resolution(Qpres, 4)
        infl = induced_map(proj, a.res, resQ)
        M = infl.matrix(1)
        img = image_basis(FpMatrix(2, M))
        prim = a.comodule().primitive_basis(1)
        assert img == prim


def test_e_prime_at_most_e_on_corpus():
    for G, N in ((D8, 8), (semidihedral(4), 8), (semidihedral(5), 8)):
        a = WS.analyzer(G, N)
        ep, _ = a.e_prime()
        assert ep <= a.e


def test_universal_2central_group_odd_p():
    # order 3^5 universal example: both p-th powers and the commutator of
    # the two lifts generate the rank-3 socle; d0 = 3, d1 = 4
    W23 = PcPresentation(
        3, 5,
        [(0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0,) * 5, (0,) * 5, (0,) * 5],
        {(1, 0): (0, 0, 0, 0, 1)},
    )
    a = WS.analyzer(W23, 3, label="W(2,3)")
    t = a.group_type()
    assert t.entries == (2, 2, 2) and t.certified
    assert a.d0_d1_p_central() == (3, 4)
    assert sorted(deg for deg, _ in a.duflot().generators) == [2, 2, 2]


def test_extraspecial_27_exponent_3():
    # extraspecial of order 27 and exponent 3: restriction image is generated
    # by the degree-2p class, cohomology is detected without central
    # essential classes
    H27 = PcPresentation(3, 3, [(0, 0, 0)] * 3, {(1, 0): (0, 0, 1)})
    a = WS.analyzer(H27, 6, label="H27")
    t = a.group_type()
    assert t.entries == (6,) and t.certified
    assert t.e == 5
    assert a.e_prime() == (-1, True)
    assert a.d0_general() == (0, True)


def test_q8_squared_product_laws():
    P = direct_product(Q8, Q8)
    a = WS.analyzer(P, 8, label="Q8xQ8")
    assert a.group_type().entries == (4, 4)
    assert a.d0_d1_p_central() == (6, 8)


def test_report_degrades_on_budget():
    a = Analyzer(W32, 8, workspace=Workspace(budget=64))
    r = a.report("tight").to_json_dict()
    assert r["certified"].get("budget_exceeded") is True
    assert r["d0"] is None and r["type"] is None
    assert r["order"] == 32  # fingerprint data survives
