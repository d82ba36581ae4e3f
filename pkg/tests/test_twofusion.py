from fractions import Fraction

import pytest

from spunnormal.cones import extreme_rays, relative_kernel
from spunnormal.criteria import boundary_class, essential_surface_check
from spunnormal.gluing import qmatching_matrix
from spunnormal.linalg import hermite_rows, kernel_basis, rank
from spunnormal.twofusion import (
    ALL_ZERO,
    S1,
    S2,
    S3,
    FamilySlopes,
    TwoFusionParams,
    family_slopes,
    family_surface,
    knot_basis_change,
    two_fusion_fixture,
    verify_family,
)

# expected boundary classes of the three kernel generators, one row per
# surface, one (coefficient of mu, coefficient of lambda) entry per cusp;
# None marks empty boundary.  Classes are only determined up to overall
# sign per cusp.
EXPECTED_CLASSES = {
    S1: ((2, 1), None, (1, 0)),
    S2: ((4, 2), (-2, 2), None),
    S3: ((-1, 0), (0, 1), (0, -1)),
}


@pytest.fixture(scope="module")
def fixture():
    return two_fusion_fixture()


class TestFixture:
    def test_shape(self, fixture):
        assert fixture.n == 8
        assert len(fixture.edge_rows) == 8
        assert fixture.num_cusps == 3

    def test_rank_five(self, fixture):
        assert rank(qmatching_matrix(fixture, ALL_ZERO)) == 5

    def test_kernel_lattice_is_spanned_by_s1_s2_s3(self, fixture):
        kb = kernel_basis(qmatching_matrix(fixture, ALL_ZERO))
        assert hermite_rows(kb, 8) == hermite_rows([S1, S2, S3], 8)

    def test_extreme_rays_are_the_three_generators(self, fixture):
        rays = extreme_rays(fixture, ALL_ZERO)
        assert {s.weights for s in rays} == {S1, S2, S3}

    def test_generators_fail_the_vertex_certificate_alone(self, fixture):
        # each has zero weights somewhere and the kernel is 3-dimensional
        from spunnormal.cones import SurfaceVector

        rep = essential_surface_check(fixture, SurfaceVector(ALL_ZERO, S1))
        assert not rep.satisfied
        assert rep.evidence["kernel_dimension"] == 3
        assert any("zero quad weight" in f for f in rep.failures)


class TestSlopeTable:
    def test_boundary_classes_match_up_to_sign(self, fixture):
        from spunnormal.cones import SurfaceVector

        for weights, expected in EXPECTED_CLASSES.items():
            classes = boundary_class(fixture, SurfaceVector(ALL_ZERO, weights))
            for (cls, slope), want in zip(classes, expected):
                got = (-cls.l, cls.m)
                if want is None:
                    assert got == (0, 0)
                    assert slope is None
                else:
                    assert got == want or got == (-want[0], -want[1])


class TestFamily:
    def test_params_validated(self):
        with pytest.raises(ValueError):
            TwoFusionParams(1, 1)
        with pytest.raises(ValueError):
            TwoFusionParams(2, 0)

    def test_surface_at_2_1(self):
        s = family_surface(TwoFusionParams(2, 1))
        assert s.weights == (2, 4, 2, 2, 2, 1, 2, 2)
        assert s.quad_type == ALL_ZERO

    def test_closed_forms_at_2_1(self):
        fs = family_slopes(TwoFusionParams(2, 1))
        assert fs == FamilySlopes(
            gamma0=Fraction(3, 2),
            gamma1=Fraction(-1, 2),
            gamma2=Fraction(-1, 1),
            gamma0_rebased=Fraction(37, 2),
        )

    def test_basis_change_is_unimodular(self):
        (a, b), (c, d) = knot_basis_change(TwoFusionParams(2, 1))
        assert a * d - b * c == 1
        assert c == -17

    def test_relative_kernel_at_2_1(self, fixture):
        params = TwoFusionParams(2, 1)
        basis, rank_total = relative_kernel(fixture, ALL_ZERO, list(params.fillings))
        assert rank_total == 7
        assert basis == [family_surface(params).weights]

    def test_verify_family_2_1(self):
        report = verify_family(TwoFusionParams(2, 1))
        assert report.satisfied
        assert str(report.evidence["gamma0"]) == "3/2"
        assert report.evidence["gamma0_rebased"] == "37/2"

    def test_verify_family_3_2(self):
        report = verify_family(TwoFusionParams(3, 2))
        assert report.satisfied
        assert report.evidence["closed_forms"]["gamma0_rebased"] == "31"

    @pytest.mark.parametrize("m1,m2", [(2, 2), (4, 1), (5, 3)])
    def test_verify_family_spot_checks(self, m1, m2):
        report = verify_family(TwoFusionParams(m1, m2))
        assert report.satisfied

    def test_rebased_identity_holds(self):
        # gamma0 + 4 m1 + 9 m2 == 3(1 + m1) + 9 m2 + (m1 - 1)^2/(m1 + m2 - 1)
        for m1 in range(2, 7):
            for m2 in range(1, 7):
                fs = family_slopes(TwoFusionParams(m1, m2))
                rhs = 3 * (1 + m1) + 9 * m2 + Fraction((m1 - 1) ** 2, m1 + m2 - 1)
                assert fs.gamma0_rebased == rhs
