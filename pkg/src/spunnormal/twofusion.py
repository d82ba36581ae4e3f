"""The 2-fusion link fixture and its family of detected boundary slopes.

The 2-fusion link is the three-component link obtained by chaining two
fusion bands; Dehn filling its last two cusps with slopes -1/m1 and -1/m2
produces a two-parameter family of knot manifolds (m1 = 2, m2 = 1 gives
the (-2, 3, 7) pretzel knot filling on the standard census triangulation).
The repository ships an eight-tetrahedron gluing system for the link
complement as JSON data.

Caveat on the data file: the z-exponent vectors (the "a" arrays) and cusp
rows are the authoritative content, checked at load time against the
reference matrices below.  The (1-z)-exponents and signs of this fixture
are not recorded and are stored as zero / +1 placeholders, so first-order
degeneration systems built from its rows are meaningless.  Every slope,
kernel, and certificate computation in this module touches only the
z-exponent data.

The all-zero quad type carries a rank-5 matching matrix whose kernel
lattice is spanned by three vertex solutions S1, S2, S3.  The surfaces

    S(m1, m2) = 2*(m1 - 1)*S1 + m2*S2 + 2*(m1 - 1)*m2*S3

satisfy the relative certificate for the fillings above, and their cusp-0
slopes admit the closed forms returned by family_slopes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .cones import RelativeConstraint, SurfaceVector
from .criteria import CriterionReport, boundary_class, filling_slope_check, rebase_slope
from .gluing import GluingSystem, cusp_matrix, parse_gluing_json, qmatching_matrix

ALL_ZERO = (0,) * 8

S1 = (0, 1, 0, 1, 1, 0, 0, 0)
S2 = (0, 2, 0, 0, 0, 1, 0, 2)
S3 = (1, 0, 1, 0, 0, 0, 1, 0)

REFERENCE_QMATCHING = (
    (1, 0, -1, 0, 0, 0, 0, 0),
    (0, -1, 0, 1, 0, 0, 0, 1),
    (-1, 1, 1, -1, 0, -2, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, -1, 0, 0, 2, 1, -1),
    (0, 0, 0, 1, -1, 0, 0, 0),
    (0, 0, 1, -1, 1, 0, -1, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
)

REFERENCE_CUSP = (
    (0, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, -1, -1),
    (0, 0, 0, 0, 0, 0, 0, -1),
    (0, 0, 1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0, 0, -1),
)


def two_fusion_fixture() -> GluingSystem:
    """Load the embedded gluing system, verifying it against the reference
    matrices.  A mismatch (say after an accidental edit of the data file)
    fails loudly rather than silently shifting every downstream slope."""
    text = resources.files("spunnormal.data").joinpath("two_fusion.json").read_text()
    sys_ = parse_gluing_json(text)
    if qmatching_matrix(sys_, ALL_ZERO).entries != REFERENCE_QMATCHING:
        raise AssertionError("two-fusion fixture: edge exponents disagree with reference")
    if cusp_matrix(sys_, ALL_ZERO).entries != REFERENCE_CUSP:
        raise AssertionError("two-fusion fixture: cusp exponents disagree with reference")
    return sys_


@dataclass(frozen=True)
class TwoFusionParams:
    """Filling parameters: cusp 1 gets -1/m1, cusp 2 gets -1/m2."""

    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 < 2:
            raise ValueError("m1 must be at least 2")
        if self.m2 < 1:
            raise ValueError("m2 must be at least 1")

    @property
    def fillings(self) -> tuple[RelativeConstraint, RelativeConstraint]:
        return (
            RelativeConstraint(1, (-1, self.m1)),
            RelativeConstraint(2, (-1, self.m2)),
        )


def family_surface(params: TwoFusionParams) -> SurfaceVector:
    """The combination 2(m1-1) S1 + m2 S2 + 2(m1-1) m2 S3 at quad type 0."""
    c1 = 2 * (params.m1 - 1)
    c2 = params.m2
    c3 = 2 * (params.m1 - 1) * params.m2
    weights = tuple(
        c1 * a + c2 * b + c3 * c for a, b, c in zip(S1, S2, S3)
    )
    return SurfaceVector(ALL_ZERO, weights)


@dataclass(frozen=True)
class FamilySlopes:
    """Exact detected slopes of the family surface on the three cusps."""

    gamma0: Fraction
    gamma1: Fraction
    gamma2: Fraction
    gamma0_rebased: Fraction


def family_slopes(params: TwoFusionParams) -> FamilySlopes:
    m1, m2 = params.m1, params.m2
    gamma0 = Fraction(-((m1 - 3) * m2 - 2 * m1 + 2), m1 + m2 - 1)
    return FamilySlopes(
        gamma0=gamma0,
        gamma1=Fraction(-1, m1),
        gamma2=Fraction(-1, m2),
        gamma0_rebased=4 * m1 + 9 * m2 + gamma0,
    )


def knot_basis_change(params: TwoFusionParams) -> tuple[tuple[int, int], tuple[int, int]]:
    """Peripheral basis change on cusp 0 from the link basis to the knot
    basis of the filled manifold: the longitude picks up -(4 m1 + 9 m2)
    meridians so that it becomes null-homologous after filling."""
    c = 4 * params.m1 + 9 * params.m2
    return ((1, 0), (-c, 1))


def verify_family(params: TwoFusionParams) -> CriterionReport:
    """Run the relative certificate on the family surface and cross-check
    every detected slope against the closed forms, exactly."""
    sys_ = two_fusion_fixture()
    s = family_surface(params)
    report = filling_slope_check(sys_, s, params.fillings)
    expected = family_slopes(params)
    classes = boundary_class(sys_, s)
    got = [sl.as_fraction() if sl is not None else None for _, sl in classes]
    want = [expected.gamma0, expected.gamma1, expected.gamma2]
    failures = list(report.failures)
    if got != want:
        failures.append("detected slopes %s differ from closed forms %s" % (got, want))
    rebased = rebase_slope(classes[0][1], knot_basis_change(params))
    if rebased is None or rebased.as_fraction() != expected.gamma0_rebased:
        failures.append(
            "rebased cusp-0 slope %s differs from closed form %s"
            % (rebased, expected.gamma0_rebased)
        )
    evidence = dict(report.evidence)
    evidence["gamma0_rebased"] = str(rebased) if rebased is not None else None
    evidence["closed_forms"] = {
        "gamma0": str(expected.gamma0),
        "gamma1": str(expected.gamma1),
        "gamma2": str(expected.gamma2),
        "gamma0_rebased": str(expected.gamma0_rebased),
    }
    return CriterionReport(not failures, tuple(failures), evidence)
