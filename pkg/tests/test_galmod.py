import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from galois_euler.abelian import FinAbHom, FiniteAbelianPGroup
from galois_euler.errors import InvalidGroupError, MissingCyclotomicCharacterError
from galois_euler.fingroup import builtin_group, from_permutations
from galois_euler.galmod import (
    COMPLEX,
    AdjointModule,
    adjoint_of,
    archimedean_h0,
    archimedean_tate_h0,
    cartier_dual,
    centralizer_dim,
    fixed_points,
    full_centralizer_dim,
    module_from_generators,
    trivial_module,
)


def brute_fixed(M, H):
    count = 0
    for x in M.module.elements():
        if all(np.array_equal(M.act(h, x), x) for h in H):
            count += 1
    return count


def permutation_action(perm, p, e):
    k = len(perm)
    m = np.zeros((k, k), dtype=np.int64)
    for i, j in enumerate(perm):
        m[j, i] = 1
    return m


@st.composite
def cyclic_permutation_modules(draw):
    k = draw(st.integers(1, 3))
    perm = draw(st.permutations(list(range(k))))
    p = draw(st.sampled_from([2, 3]))
    e = draw(st.integers(1, 2))
    sign = draw(st.sampled_from([1, -1]))
    # order of the generator on the module
    A = sign * permutation_action(perm, p, e)
    n, P = 1, A.copy()
    q = p**e
    while not np.array_equal(P % q, np.eye(k, dtype=np.int64)):
        P = P @ A
        n += 1
    G = builtin_group(f"C{n}")
    images = {g: A for g in G.generators}
    return module_from_generators(G, p, (e,) * k, images)


@given(cyclic_permutation_modules())
def test_fixed_points_match_enumeration(M):
    H = range(M.group.order)
    assert int(fixed_points(M, H).to_fraction()) == brute_fixed(M, H)


@given(cyclic_permutation_modules())
def test_kernel_and_image_orders_match_enumeration(M):
    g = M.group.generators[0] if M.group.generators else 0
    f = FinAbHom(M.module, M.module, M.action[g] - np.eye(M.module.rank, dtype=np.int64))
    images = {tuple(M.module.reduce(f.matrix @ x)) for x in M.module.elements()}
    kernel = sum(1 for x in M.module.elements() if not M.module.reduce(f.matrix @ x).any())
    assert int(f.image_order().to_fraction()) == len(images)
    assert int(f.kernel_order().to_fraction()) == kernel


@given(cyclic_permutation_modules(), st.data())
def test_double_cartier_dual_is_the_module(M, data):
    q = M.p ** M.module.max_exponent
    G = M.group
    units = [u for u in range(1, q) if u % M.p and pow(u, G.order, q) == 1]
    u = data.draw(st.sampled_from(units))
    chi = {g: u for g in G.generators}
    M = module_from_generators(G, M.p, M.module.exponents, {g: M.action[g] for g in G.generators}, chi)
    dd = cartier_dual(cartier_dual(M))
    assert np.array_equal(dd.action, M.action)


def test_dual_of_roots_of_unity_is_trivial():
    G = builtin_group("C2")
    mu3 = module_from_generators(G, 3, (1,), {1: [[2]]}, {1: 2})
    assert cartier_dual(mu3).is_trivial()
    F3 = trivial_module(G, 3, (1,), cyclo_char=(1, 2))
    assert cartier_dual(F3).action[1, 0, 0] == 2
    with pytest.raises(MissingCyclotomicCharacterError):
        cartier_dual(trivial_module(G, 3))


def test_invalid_data_is_rejected():
    G = builtin_group("C3")
    with pytest.raises(InvalidGroupError):
        module_from_generators(G, 2, (1,), {1: [[1]]}, None, places=(1,))  # order 3 is no involution
    with pytest.raises(InvalidGroupError):
        module_from_generators(G, 5, (1,), {1: [[2]]})  # 2^3 != 1 mod 5
    with pytest.raises(InvalidGroupError):
        trivial_module(G, 7, (1,), cyclo_char=(1, 3, 2))  # not a character
    with pytest.raises(InvalidGroupError):
        # multiplication by 1 from Z/2 into the Z/4 summand is not well defined
        module_from_generators(builtin_group("C2"), 2, (2, 1), {1: [[1, 1], [0, 1]]})


def test_archimedean_local_terms():
    G = builtin_group("C2")
    for p, expect in ((2, 2), (3, 1)):
        M = trivial_module(G, p)
        assert int(archimedean_tate_h0(M, 0).to_fraction()) == expect
    sign3 = module_from_generators(G, 3, (1,), {1: [[2]]})
    assert archimedean_h0(sign3, 1).is_one()
    assert archimedean_h0(sign3, COMPLEX).exponents == {3: 1}
    assert archimedean_tate_h0(sign3, COMPLEX).is_one()
    # Z/4 with -1: fixed points {0, 2}, norms 1 + c = 0, so Hhat^0 = Z/2
    z4 = module_from_generators(G, 2, (2,), {1: [[3]]})
    assert archimedean_tate_h0(z4, 1).exponents == {2: 1}


def test_adjoint_centralizers():
    G = builtin_group("C2")
    rep = AdjointModule.from_generators(G, 5, 2, {1: [[1, 0], [0, 4]]})
    assert centralizer_dim(rep, 1) == 2
    assert fixed_points(adjoint_of(rep), [1]).exponents == {5: 2}
    S3 = builtin_group("S3")
    refl = AdjointModule.from_generators(
        S3, 5, 2, {S3.index("(1 2)"): [[4, 1], [0, 1]], S3.index("(1 2 3)"): [[0, 4], [1, 4]]}
    )
    assert full_centralizer_dim(refl) == 1
    assert centralizer_dim(refl, S3.index("(1 2)")) == 2
    assert centralizer_dim(refl, S3.index("(1 2 3)")) == 2
    # the adjoint's fixed points agree with the commutant dimension
    assert fixed_points(adjoint_of(refl), range(6)).exponents == {5: 1}


def test_restriction_to_a_subgroup():
    S3 = from_permutations(["(1 2)", "(1 2 3)"])
    perms = {S3.index("(1 2)"): permutation_action((1, 0, 2), 2, 1), S3.index("(1 2 3)"): permutation_action((1, 2, 0), 2, 1)}
    M = module_from_generators(S3, 2, (1, 1, 1), perms)
    H = M.restrict([S3.index("(1 2)")])
    assert H.group.order == 2
    assert fixed_points(H, range(2)).exponents == {2: 2}


def test_elements_enumeration_size():
    A = FiniteAbelianPGroup(3, (2, 1))
    assert sum(1 for _ in A.elements()) == 27
    assert list(itertools.islice(A.elements(), 1))[0].tolist() == [0, 0]
