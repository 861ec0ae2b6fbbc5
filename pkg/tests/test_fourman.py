import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conjquot.domains import (
    Orientability,
    Side,
    SurfaceDescriptor,
    TrackedScheme,
    real_part_X,
)
from conjquot.fourman import (
    CP2,
    S4,
    AmbientInvariants,
    BranchClassData,
    FormError,
    FourManifoldWord,
    WordError,
    branch_cover_word,
    decomposition,
    double_plane_invariants,
    general_cover_invariants,
    k3_classify,
    parse_word,
    predict_standard_form,
    word,
)
from conjquot.schemes import parse_viro


def tracked(code, outer=False, degree=6):
    return TrackedScheme(parse_viro(code), degree, outer)


def sphere(genus=0):
    return SurfaceDescriptor(2 - 2 * genus, Orientability.ORIENTABLE)


# ------------------------------------------------------------ word algebra


def test_word_serialization_round_trip():
    w = word(cp2=1, cp2bar=9, s1xs3=2, named=("E(1)_0",))
    assert str(w) == "CP2 # CP2bar^9 # (S1xS3)^2 # Named[E(1)_0]"
    assert parse_word(str(w)) == word(cp2=1, cp2bar=9, s1xs3=2, named=("E(1)_0",))
    assert str(S4) == "S4"
    assert parse_word("S4").is_sphere


def test_sphere_summands_absorbed():
    assert (S4 + CP2 + S4) == FourManifoldWord(
        cp2=1, simply_connected=True, spin=False
    )


def test_word_betti_bookkeeping():
    w = word(cp2=2, cp2bar=3, s2xs2=1, s1xs3=2)
    assert (w.b2plus, w.b2minus, w.b1, w.sigma) == (3, 4, 2, -1)
    assert w.chi == 2 + 2 + 3 + 2 - 4


def test_named_blocks_are_opaque():
    w = word(named=("E(2)",))
    with pytest.raises(WordError):
        _ = w.b2plus


# --------------------------------------------------------- double planes


def test_sextic_lattice_values():
    # any sextic branch locus: the cover has the (3, 19) lattice
    for code in ["<1>", "<10>_2", "<1 u 1<9>>_1"]:
        inv = double_plane_invariants(tracked(code))
        assert (inv.chi_X, inv.sigma_X) == (24, -16)
        assert (inv.b2plus_X, inv.b2minus_X) == (3, 19)


def test_nine_ovals_quotient():
    inv = double_plane_invariants(tracked("<9>_1"))
    assert inv.chi_XR == -16
    assert (inv.b2plus_Y, inv.b2minus_Y) == (1, 1)


def test_ten_ovals_quotient_is_projective_plane():
    inv = double_plane_invariants(tracked("<10>_2"))
    assert inv.chi_XR == -18
    assert (inv.b2plus_Y, inv.b2minus_Y) == (1, 0)
    # cross-check through the blow-up count form
    assert 9 + inv.chi_XR // 2 == 0


def test_quartic_and_conic_covers():
    conic = double_plane_invariants(tracked("<1>", degree=2))
    assert (conic.b2plus_Y, conic.b2minus_Y) == (0, 0)
    quartic = double_plane_invariants(tracked("<4>", degree=4))
    assert quartic.b2plus_Y == 0  # rational cover, zero geometric genus
    assert quartic.pg == quartic.b2plus_Y


def test_betti_euler_identity_on_catalog(catalog):
    from conjquot.domains import arnold_descriptor

    for e in catalog:
        for outer in (False, True):
            t = TrackedScheme(e.scheme, 6, outer)
            inv = double_plane_invariants(t)
            chi_a = arnold_descriptor(t).euler
            assert inv.b2plus_Y + inv.b2minus_Y == 2 - chi_a


# ------------------------------------------------------ general ambients


def test_general_cover_plane_cubic():
    plane = AmbientInvariants(1, 0, 1, 3)
    assert general_cover_invariants(plane, BranchClassData(9, -9), -16) == (1, 1)


def test_general_cover_plane_line():
    plane = AmbientInvariants(1, 0, 1, 3)
    assert general_cover_invariants(plane, BranchClassData(1, -3), 0) == (0, 0)


def test_general_cover_quadric_bidegree22():
    quadric = AmbientInvariants(1, 1, 0, 4)
    assert general_cover_invariants(quadric, BranchClassData(8, -8), 16) == (1, 17)


def test_general_cover_parity_error():
    plane = AmbientInvariants(1, 0, 1, 3)
    with pytest.raises(WordError):
        general_cover_invariants(plane, BranchClassData(2, -3), 0)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(0, 20),
    st.integers(0, 40),
    st.integers(0, 6),
    st.integers(-20, 20),
    st.integers(-20, 20),
)
def test_general_cover_two_forms_agree(b2p, b2m, g, d, chi_half):
    # adjunction-consistent branch data: chi(B) = 2 - 2g, K.B = -d - chi(B)
    chi_b = 2 - 2 * g
    kb = -d - chi_b
    ambient = AmbientInvariants(b2p, b2m, b2p - b2m, 2 + b2p + b2m)
    out = general_cover_invariants(ambient, BranchClassData(d, kb), 2 * chi_half)
    assert out[0] == b2p - chi_b // 2


# ------------------------------------------------------- standard forms


def test_standard_form_projective_plane():
    (form,) = predict_standard_form(1, 1, 0)
    assert not form.orientable and (form.rp2, form.rp2bar) == (1, 0)
    assert str(branch_cover_word(form, S4)) == "CP2"


def test_standard_form_torus():
    (form,) = predict_standard_form(0, 1, 1, Orientability.ORIENTABLE)
    assert form.orientable and form.tori == 1
    assert branch_cover_word(form, S4) == word(s2xs2=1)


def test_standard_form_eighteen_crosscaps():
    (form,) = predict_standard_form(-16, 1, 17)
    assert (form.rp2, form.rp2bar) == (1, 17)
    assert form.rp2 + form.rp2bar == 2 - (-16)


def test_standard_form_ambiguous_flags_both():
    forms = predict_standard_form(0, 1, 1)
    assert len(forms) == 2
    assert {f.orientable for f in forms} == {True, False}
    assert all(f.note == "parity undetermined" for f in forms)


def test_standard_form_inconsistent_raises():
    with pytest.raises(FormError):
        predict_standard_form(0, 2, 5)


def test_branch_cover_dictionary():
    assert branch_cover_word(
        predict_standard_form(2, 0, 0, Orientability.ORIENTABLE)[0], S4
    ) == S4  # an unknotted sphere covers to the sphere
    rp2bar = predict_standard_form(1, 0, 1)[0]
    assert branch_cover_word(rp2bar, S4) == word(cp2bar=1)
    two_comp = predict_standard_form(1, 1, 0)[0]
    form = type(two_comp)(False, rp2=1, components=2)
    assert branch_cover_word(form, S4).s1xs3 == 1


def test_branch_cover_doubles_ambient():
    form = predict_standard_form(0, 1, 1, Orientability.ORIENTABLE)[0]
    out = branch_cover_word(form, CP2)
    assert out.cp2 == 2 and out.s2xs2 == 1


def test_decomposition():
    assert decomposition(1, 0, False) == (CP2,)
    assert decomposition(0, 0, None) == (S4,)
    assert decomposition(1, 1, True) == (word(s2xs2=1),)
    assert len(decomposition(2, 2, None)) == 2
    with pytest.raises(WordError):
        decomposition(1, 2, True)


# ---------------------------------------------------------------- K3


def test_k3_spin_cases():
    assert k3_classify([sphere(10), sphere()], False) == word(s2xs2=1)
    assert k3_classify([sphere(9)], True) == word(s2xs2=1)
    assert k3_classify([sphere(9)], False) == word(cp2=1, cp2bar=1)


def test_k3_eight_spheres():
    assert k3_classify([sphere()] * 8, True) == word(cp2=1, cp2bar=17)


def test_k3_two_tori():
    assert k3_classify([sphere(1), sphere(1)], False) == word(cp2=1, cp2bar=9)


def test_k3_ten_ovals_case():
    t = tracked("<10>_2")
    xr = real_part_X(t, Side.NONTRACKED)
    assert k3_classify(xr, False) == CP2


def test_k3_rejects_illegal_real_parts():
    with pytest.raises(WordError):
        k3_classify([], False)
    with pytest.raises(WordError):
        k3_classify([sphere(2), sphere(3)], False)
    with pytest.raises(WordError):
        k3_classify([sphere(11), sphere()], False)
    with pytest.raises(WordError):
        k3_classify(
            [SurfaceDescriptor(0, Orientability.NON_ORIENTABLE)], False
        )


def test_k3_quotients_over_catalog(catalog):
    # every catalog scheme, both sides: b2+(Y) = 1, b2-(Y) = 9 + chi/2
    for e in catalog:
        for outer in (False, True):
            t = TrackedScheme(e.scheme, 6, outer)
            inv = double_plane_invariants(t)
            assert inv.b2plus_Y == 1
            assert inv.b2minus_Y == 9 + inv.chi_XR // 2
