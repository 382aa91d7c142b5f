"""End-to-end smoke test for the Python bindings.

Runnable directly (``python3 tests/python/test_smoke.py``) or under pytest.
Bounds mirror the library defaults: closed-form identities at 1e-10,
randomized pipelines at 1e-9.
"""

import math

import numpy as np

import covkit as ck

CLOSED = 1e-10
RANDOM = 1e-9


def test_groups_and_spaces():
    g = ck.symmetric_group(3)
    assert g.order == 6 and len(g) == 6
    e = g.identity
    for a in range(g.order):
        assert g.mult(a, g.inv(a)) == e
    assert g.element_by_label(g.label(4)) == 4

    space = ck.product_action_space(g, 2)
    assert space.num_points == 9 and space.num_orbits() == 2
    # Orbit base points are fixed by their stabilizers.
    for o, x in enumerate(space.base_point):
        for h in space.stabilizer[o]:
            assert space.act(h, x) == x

    c2 = ck.cyclic_group(2)
    prod = ck.direct_product(c2, c2)
    assert prod.order == 4

    tbl = [0, 1, 1, 0]
    z2 = ck.group_from_table(tbl, ["e", "s"])
    assert z2.label(1) == "s"


def test_system_and_symfam():
    g = ck.symmetric_group(3)
    space = ck.product_action_space(g, 2)
    sys = ck.make_system(space, ck.permutation_rep(g))
    assert sys.dim == 3 and sys.num_points == 9 and sys.num_orbits == 2
    assert sys.stabilizer_order(0) == 2 and sys.stabilizer_order(1) == 1

    a0 = ck.symfam_alpha0()
    assert abs(a0 - 1.0 / math.sqrt(2.0 + math.sqrt(2.0))) < 1e-15

    fam = ck.generate(ck.SymFamilySpec(3, a0), sys)
    assert fam.k_defect <= CLOSED
    assert fam.normalizer_defect <= CLOSED
    assert fam.effect_defect <= RANDOM
    assert fam.povm.normalization_defect() <= CLOSED
    assert fam.povm.covariance_defect() <= CLOSED

    report = ck.classify(fam.povm)
    assert report.is_rank1
    assert report.is_informationally_complete
    assert report.is_extreme_global
    assert not report.is_pvm

    # Every effect is the projection onto the published unit vector.
    for m in range(3):
        for n in range(3):
            v = ck.symfam_alpha0_vector(3, m, n)
            eff = fam.povm.effects[m * 3 + n]
            assert np.linalg.norm(eff - np.outer(v, v.conj())) <= RANDOM

    # The alpha = 0 member is a commutative PVM on the diagonal orbit.
    pvm = ck.generate(ck.SymFamilySpec(3, 0.0), sys)
    rep0 = ck.classify(pvm.povm)
    assert rep0.is_pvm and not rep0.is_informationally_complete


def test_seeds_normalize_classify():
    g = ck.symmetric_group(3)
    sys = ck.make_system(ck.product_action_space(g, 2), ck.permutation_rep(g))

    # Stabilizer of the diagonal base point swaps the two off-diagonal
    # labels; this seed commutes with that restriction.
    k0 = np.zeros((3, 3), complex)
    k0[0, 0] = 0.4
    k0[1, 1] = k0[2, 2] = 0.1
    k1 = 0.05 * np.eye(3, dtype=complex)
    raw = ck.build_from_seeds(sys, [ck.Seed(0, k0), ck.Seed(1, k1)])

    norm = ck.normalize(raw)
    assert norm.full_rank and norm.defect <= CLOSED
    assert norm.povm.normalization_defect() <= CLOSED

    report = ck.classify(norm.povm)
    assert report.normalization_defect <= CLOSED
    assert report.covariance_defect <= CLOSED
    assert not report.is_rank1

    # Effects round-trip through povm_from_effects.
    again = ck.povm_from_effects(sys, norm.povm.effects)
    assert again.covariance_defect() <= CLOSED

    vf = ck.recover_vector_form(norm.povm)
    assert vf.reconstruction_defect <= RANDOM

    mg = ck.margins(norm.povm)
    assert len(mg.row) == 3 and len(mg.col) == 3
    assert mg.covariance_defect <= CLOSED

    with_zero = ck.build_from_seeds(
        sys, [ck.Seed(0, k0), ck.Seed(1, np.zeros((3, 3), complex))]
    )
    dropped = ck.drop_zero_orbits(with_zero)
    assert dropped.system.num_points == 3


def test_solver_dimensions():
    g = ck.symmetric_group(3)
    sys = ck.make_system(ck.product_action_space(g, 2), ck.permutation_rep(g))
    sr = ck.solve_covariant(sys)
    assert sr.linear_dim == 14
    assert sr.affine_dim == 12
    assert len(sr.affine_basis) == 12

    fam = ck.generate(ck.SymFamilySpec(3, 0.3), sys)
    assert ck.affine_membership_defect(sr, fam.povm.effects) <= RANDOM

    coords = sr.encode(fam.povm.effects)
    back = sr.decode(coords)
    assert max(
        np.linalg.norm(a - b) for a, b in zip(back, fam.povm.effects)
    ) <= RANDOM


def test_naimark_dilation():
    g = ck.symmetric_group(3)
    sys = ck.make_system(ck.product_action_space(g, 2), ck.permutation_rep(g))
    fam = ck.generate(ck.SymFamilySpec(3, ck.symfam_alpha0()), sys)

    refined = ck.refine(fam.povm)
    assert refined.coset_defect <= RANDOM
    assert refined.post_processing_defect <= RANDOM

    bundle = ck.dilate(refined)
    assert bundle.dim == sys.num_orbits * g.order == 12
    assert bundle.minimal
    assert bundle.isometry_defect <= CLOSED
    assert bundle.reproduction_defect <= RANDOM
    assert bundle.intertwining_defect <= RANDOM
    assert not bundle.v.projective()

    emb = ck.embed_in_sym(bundle)
    assert emb.num_orbits == 2
    assert emb.law_defect <= RANDOM


def test_instruments_and_channels():
    g = ck.symmetric_group(3)
    sys = ck.make_system(ck.product_action_space(g, 2), ck.permutation_rep(g))
    v = ck.permutation_rep(g)

    basis = ck.intertwiner_solution_basis(sys, v, 0, 0)
    assert len(basis) >= 1
    block = ck.IntertwinerBlock(0, 0, [basis[0]])
    s = ck.IntertwinerSet(sys, v, [block])

    ren = ck.renormalize_intertwiners(s)
    minimal = ck.reduce_to_minimal(ren.set)
    rep = ck.validate_intertwiners(minimal)
    assert rep.minimal and rep.normalized
    assert rep.intertwining_defect <= RANDOM
    assert rep.normalization_defect <= RANDOM

    instr = ck.build_instrument(minimal)
    assert instr.covariance_defect() <= RANDOM
    rho = np.eye(3, dtype=complex) / 3.0
    total = sum(np.trace(instr.apply(x, rho)).real for x in range(9))
    assert abs(total - 1.0) <= RANDOM

    ext = ck.extreme_in_covariance_structure(minimal)
    assert isinstance(ext.extreme, bool)
    if not ext.extreme:
        split = ck.split_by_witness(minimal, ext.witness)
        assert split.average_defect <= RANDOM

    dil = ck.minimal_dilation(minimal)
    assert dil.minimal
    assert dil.stinespring_defect <= RANDOM

    # Identity channel: one Kraus operator = Id, trivially extreme.
    csys = ck.channel_system(v)
    ident = [[np.eye(3, dtype=complex)]]
    # Class 0 of the full dual is the trivial class; identity sits in the
    # block of the class carrying the identity intertwiner.
    chosen = None
    for cls in range(len(csys.dual(0))):
        b = ck.intertwiner_solution_basis(csys, v, 0, cls)
        for tup in b:
            if len(tup) == 1 and np.linalg.norm(
                tup[0] - tup[0][0, 0] * np.eye(3)
            ) <= 1e-8:
                chosen = cls
        if chosen is not None:
            break
    assert chosen is not None
    cs = ck.IntertwinerSet(csys, v, [ck.IntertwinerBlock(0, chosen, [ident[0]])])
    creport = ck.channel_extreme(cs)
    assert creport.validation.normalized
    assert creport.extremality.extreme
    assert creport.commutation_defect <= RANDOM


def test_multiplier_machinery():
    c2xc2 = ck.direct_product(ck.cyclic_group(2), ck.cyclic_group(2))
    x = np.array([[0, 1], [1, 0]], complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    mats = [np.eye(2, dtype=complex), x, z, x @ z]
    u = ck.matrix_rep(c2xc2, mats, ck.infer_multiplier(c2xc2, mats))
    assert u.projective()

    ma = ck.multiplier_order(u)
    assert ma.p == 2 and ma.snap_defect <= 1e-12

    ext = ck.central_extension(c2xc2, ma)
    assert ext.extended.order == 8
    lifted = ck.lift_rep(ext, u, ma)
    assert not lifted.projective()
    rr = ck.validate_representation(lifted)
    assert rr.passes(1e-10)


def test_error_mapping():
    g = ck.symmetric_group(3)
    sys = ck.make_system(ck.product_action_space(g, 2), ck.permutation_rep(g))
    bad = np.zeros((2, 2), complex)  # wrong shape for a 3-dim system
    try:
        ck.build_from_seeds(sys, [ck.Seed(0, bad)])
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError from a malformed seed")

    try:
        ck.symmetric_group(0)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError from symmetric_group(0)")


def main():
    tests = [(k, v) for k, v in sorted(globals().items()) if k.startswith("test_")]
    for name, fn in tests:
        fn()
        print(f"[ok] {name}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
