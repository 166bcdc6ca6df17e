"""Exact polynomial identity suite: everything here runs over Gaussian
rationals, so PASS means equality on the nose, and a FAIL must name the
offending monomial."""

import time

from nldirac.clifford import Matrix4C, gamma, gammas
from nldirac.exact import gq
from nldirac.identities import (
    MatPoly,
    SIGMA,
    format_monomial,
    run_all,
    verify_clifford,
    verify_generalized_kgf,
    verify_kgf,
)

EXPECTED_ORDER = [
    "clifford_relations",
    "kgf_factorization",
    "generalized_kgf_factorization",
    "n_isomorphism",
    "su22_membership",
    "pseudoscalar_relations",
    "adjoint_hermiticity",
    "bilinear_reality",
    "z_parity_conjugation",
]


def test_default_build_passes_and_is_fast():
    start = time.perf_counter()
    report = run_all()
    elapsed = time.perf_counter() - start
    assert report.all_passed
    assert [e.name for e in report.entries] == EXPECTED_ORDER
    for line in report.lines():
        assert line.endswith("PASS"), line
    assert elapsed < 1.0, f"identity suite took {elapsed:.2f}s"


def test_output_is_deterministic():
    assert run_all().text() == run_all().text()


def flipped_gammas(entry):
    """A gamma set with one entry of gamma^2 negated."""
    mats = [g for g in gammas(exact=True)]
    rows = [[mats[2][i, k] for k in range(4)] for i in range(4)]
    i, k = entry
    rows[i][k] = -rows[i][k]
    mats[2] = Matrix4C(rows, exact=True)
    return tuple(mats)


def test_fault_injection_names_the_monomial():
    bad = flipped_gammas((0, 3))  # a nonzero entry of gamma^2
    rep = verify_kgf(bad)
    assert not rep.passed
    assert "remainder at" in rep.detail
    assert "xi" in rep.detail
    rep2 = verify_generalized_kgf(bad)
    assert not rep2.passed


def test_wrong_algebra_fails_clifford():
    mats = list(gammas(exact=True))
    mats[1] = mats[2]  # two equal gammas cannot anticommute to zero
    rep = verify_clifford(tuple(mats))
    assert not rep.passed


def test_global_sign_flip_is_invisible_to_quadratic_identities():
    mats = list(gammas(exact=True))
    mats[1] = mats[1].scaled(-1)
    assert verify_clifford(tuple(mats)).passed
    assert verify_kgf(tuple(mats)).passed


def test_suite_text_has_one_line_per_identity():
    text = run_all().text()
    lines = text.strip().split("\n")
    assert len(lines) == len(EXPECTED_ORDER)


class TestMatPoly:
    def one(self):
        return Matrix4C.identity(exact=True)

    def test_product_collects_exponents(self):
        x = MatPoly.term(self.one(), 0)        # xi0
        y = MatPoly.term(self.one(), SIGMA)    # sigma
        prod = x * y
        assert prod.monomials() == [(1, 0, 0, 0, 1, 0, 0)]
        assert prod.total_degree() == 2

    def test_cancellation_prunes_terms(self):
        x = MatPoly.term(self.one(), 1)
        diff = x - x
        assert diff.is_zero()
        assert diff.monomials() == []

    def test_distributes_over_sum(self):
        a = MatPoly.term(gamma(0), 0)
        b = MatPoly.term(gamma(1), 1)
        c = MatPoly.term(gamma(2), 2)
        lhs = (a + b) * c
        rhs = a * c + b * c
        assert lhs == rhs

    def test_constant_of_zero_matrix_is_zero(self):
        z = MatPoly.constant(Matrix4C.zero(exact=True))
        assert z.is_zero()

    def test_noncommutativity_is_respected(self):
        a = MatPoly.constant(gamma(0))
        b = MatPoly.constant(gamma(1))
        assert a * b != b * a


def test_format_monomial():
    assert format_monomial((0, 0, 0, 0, 0, 0, 0)) == "1"
    assert format_monomial((2, 0, 0, 1, 0, 0, 0)) == "xi0^2*xi3"
    assert format_monomial((0, 0, 0, 0, 0, 0, 2)) == "m^2"


def test_scaled_gamma_breaks_factorization_with_named_remainder():
    mats = list(gammas(exact=True))
    mats[3] = mats[3].scaled(gq(2))  # breaks (gamma^3)^2 = -1
    rep = verify_kgf(tuple(mats))
    assert not rep.passed
    assert "xi3" in rep.detail
