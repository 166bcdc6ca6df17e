"""Zero-tolerance verification of the algebraic identities.

The operator identities are checked as polynomial identities: derivatives
become commuting symbols xi_mu, the nonlinearity components become symbols
sigma and rho, and the mass becomes the symbol m.  Coefficients are exact
4x4 matrices over Gaussian rationals, so equality means equality.
"""

from __future__ import annotations

from fractions import Fraction

from .clifford import ETA, Matrix4C, as_exact_spinor, gammas, su22_member
from .exact import gq
from .nalgebra import NElement, compute_Z, n_add, n_conj, n_mul, to_matrix

SYMBOLS = ("xi0", "xi1", "xi2", "xi3", "sigma", "rho", "m")
_NSYM = len(SYMBOLS)
_ZERO_EXP = (0,) * _NSYM
SIGMA, RHO, MASS = 4, 5, 6


def _exp(index, power=1):
    e = [0] * _NSYM
    e[index] = power
    return tuple(e)


def format_monomial(exp) -> str:
    if exp == _ZERO_EXP:
        return "1"
    parts = []
    for name, p in zip(SYMBOLS, exp):
        if p == 1:
            parts.append(name)
        elif p > 1:
            parts.append(f"{name}^{p}")
    return "*".join(parts)


class MatPoly:
    """Polynomial in the commuting symbols with exact matrix coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for exp, coeff in terms.items():
                if not coeff.is_zero():
                    self.terms[tuple(exp)] = coeff

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, M: Matrix4C):
        return cls({_ZERO_EXP: M})

    @classmethod
    def term(cls, M: Matrix4C, sym_index, power=1):
        return cls({_exp(sym_index, power): M})

    def __add__(self, other):
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = out.get(exp)
            acc = coeff if acc is None else acc + coeff
            if acc.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = acc
        wrapped = MatPoly.__new__(MatPoly)
        wrapped.terms = out
        return wrapped

    def __neg__(self):
        wrapped = MatPoly.__new__(MatPoly)
        wrapped.terms = {exp: -c for exp, c in self.terms.items()}
        return wrapped

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 @ c2
                acc = out.get(exp)
                acc = prod if acc is None else acc + prod
                if acc.is_zero():
                    out.pop(exp, None)
                else:
                    out[exp] = acc
        wrapped = MatPoly.__new__(MatPoly)
        wrapped.terms = out
        return wrapped

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def monomials(self):
        """Nonzero monomials in canonical (lexicographic) order."""
        return sorted(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MatPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "MatPoly(0)"
        return "MatPoly(" + " + ".join(
            f"[{format_monomial(e)}]" for e in self.monomials()
        ) + ")"


class IdentityReport:
    """One verified identity: a name, a PASS/FAIL flag, and a detail."""

    __slots__ = ("name", "passed", "detail")

    def __init__(self, name, passed, detail=""):
        self.name = name
        self.passed = bool(passed)
        self.detail = detail

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name} {status}" + (f" {self.detail}" if self.detail else "")

    def __repr__(self):
        return f"IdentityReport({self.line()!r})"


class SuiteReport:
    """Ordered collection of IdentityReports."""

    def __init__(self, entries):
        self.entries = list(entries)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def lines(self):
        return [e.line() for e in self.entries]

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _canonical(gams):
    return gammas(exact=True) if gams is None else tuple(gams)


def _pseudo_of(gams):
    return gams[0] @ gams[1] @ gams[2] @ gams[3]


def verify_clifford(gams=None) -> IdentityReport:
    """gamma^mu gamma^nu + gamma^nu gamma^mu = 2 eta^munu, all 16 pairs."""
    gams = _canonical(gams)
    one = Matrix4C.identity(True)
    for mu in range(4):
        for nu in range(4):
            anti = gams[mu] @ gams[nu] + gams[nu] @ gams[mu]
            expect = one.scaled(2 * ETA[mu]) if mu == nu else Matrix4C.zero(True)
            if anti != expect:
                return IdentityReport(
                    "clifford_relations", False,
                    f"anticommutator ({mu},{nu}) violates the relation",
                )
    return IdentityReport("clifford_relations", True)


def _first_remainder(diff: MatPoly) -> str:
    mono = diff.monomials()[0]
    return f"remainder at {format_monomial(mono)}"


def _slash(gams) -> MatPoly:
    """Sum over mu of i gamma^mu xi_mu (lowered symbols)."""
    i_unit = gq(0, 1)
    acc = MatPoly.zero()
    for mu in range(4):
        acc = acc + MatPoly.term(gams[mu].scaled(i_unit), mu)
    return acc


def _wave_operator() -> MatPoly:
    """-(xi_mu xi^mu) times the identity, with explicit metric raising."""
    one = Matrix4C.identity(True)
    acc = MatPoly.zero()
    for mu in range(4):
        acc = acc + MatPoly({_exp(mu, 2): one.scaled(-ETA[mu])})
    return acc


def verify_kgf(gams=None) -> IdentityReport:
    """(i gamma^mu xi_mu - m)(i gamma^nu xi_nu + m) = -(xi_mu xi^mu + m^2)."""
    gams = _canonical(gams)
    one = Matrix4C.identity(True)
    slash = _slash(gams)
    mass = MatPoly.term(one, MASS)
    prod = (slash - mass) * (slash + mass)
    if prod.total_degree() > 2:
        return IdentityReport(
            "kgf_factorization", False,
            "degree self-check failed: product exceeds degree 2",
        )
    expected = _wave_operator() + MatPoly({_exp(MASS, 2): one.scaled(-1)})
    diff = prod - expected
    if diff.is_zero():
        return IdentityReport("kgf_factorization", True)
    return IdentityReport("kgf_factorization", False, _first_remainder(diff))


def verify_generalized_kgf(gams=None) -> IdentityReport:
    """(i gamma^mu xi_mu - F)(i gamma^nu xi_nu + Fbar) = -(xi_mu xi^mu
    + sigma^2 + rho^2) with F = sigma 1 + rho I."""
    gams = _canonical(gams)
    one = Matrix4C.identity(True)
    pseudo = _pseudo_of(gams)
    slash = _slash(gams)
    F = MatPoly.term(one, SIGMA) + MatPoly.term(pseudo, RHO)
    F_bar = MatPoly.term(one, SIGMA) - MatPoly.term(pseudo, RHO)
    prod = (slash - F) * (slash + F_bar)
    if prod.total_degree() > 2:
        return IdentityReport(
            "generalized_kgf_factorization", False,
            "degree self-check failed: product exceeds degree 2",
        )
    expected = _wave_operator() + MatPoly(
        {_exp(SIGMA, 2): one.scaled(-1), _exp(RHO, 2): one.scaled(-1)}
    )
    diff = prod - expected
    if diff.is_zero():
        return IdentityReport("generalized_kgf_factorization", True)
    return IdentityReport(
        "generalized_kgf_factorization", False, _first_remainder(diff)
    )


_SWEEP = [Fraction(v) for v in (-2, -1, 0, 1, 2)]


def verify_n_iso(gams=None) -> IdentityReport:
    """to_matrix respects sums and products over a rational sweep."""
    gams = _canonical(gams)
    pseudo = _pseudo_of(gams)
    one = Matrix4C.identity(True)

    def lift(Z):
        return one.scaled(Z.alpha) + pseudo.scaled(Z.beta)

    pairs = [NElement(a, b) for a in _SWEEP for b in _SWEEP]
    for z1 in pairs:
        m1 = lift(z1)
        for z2 in pairs:
            m2 = lift(z2)
            if m1 @ m2 != lift(n_mul(z1, z2)):
                return IdentityReport(
                    "n_isomorphism", False,
                    f"product law fails at ({z1.alpha},{z1.beta})x({z2.alpha},{z2.beta})",
                )
            if m1 + m2 != lift(n_add(z1, z2)):
                return IdentityReport(
                    "n_isomorphism", False,
                    f"sum law fails at ({z1.alpha},{z1.beta})+({z2.alpha},{z2.beta})",
                )
    return IdentityReport("n_isomorphism", True)


def verify_su22_membership(gams=None) -> IdentityReport:
    """i gamma^mu lies in su(2,2) for every mu."""
    gams = _canonical(gams)
    i_unit = gq(0, 1)
    for mu in range(4):
        if not su22_member(gams[mu].scaled(i_unit)):
            return IdentityReport(
                "su22_membership", False, f"i*gamma^{mu} fails the form condition"
            )
    return IdentityReport("su22_membership", True)


def verify_pseudoscalar(gams=None) -> IdentityReport:
    """I^2 = -1, I^dagger = -I, and I anticommutes with every gamma^mu."""
    gams = _canonical(gams)
    pseudo = _pseudo_of(gams)
    one = Matrix4C.identity(True)
    if pseudo @ pseudo != one.scaled(-1):
        return IdentityReport("pseudoscalar_relations", False, "I^2 != -1")
    if pseudo.dagger() != -pseudo:
        return IdentityReport("pseudoscalar_relations", False, "I^dagger != -I")
    for mu in range(4):
        if not (pseudo @ gams[mu] + gams[mu] @ pseudo).is_zero():
            return IdentityReport(
                "pseudoscalar_relations", False,
                f"I does not anticommute with gamma^{mu}",
            )
    return IdentityReport("pseudoscalar_relations", True)


def verify_adjoint_hermiticity(gams=None) -> IdentityReport:
    """(gamma^mu)^dagger = gamma^0 gamma^mu gamma^0 (drives charge
    conservation)."""
    gams = _canonical(gams)
    for mu in range(4):
        if gams[mu].dagger() != gams[0] @ gams[mu] @ gams[0]:
            return IdentityReport(
                "adjoint_hermiticity", False,
                f"(gamma^{mu})^dagger != gamma^0 gamma^{mu} gamma^0",
            )
    return IdentityReport("adjoint_hermiticity", True)


# deterministic spinor sweep with mixed real/imaginary rational entries
_SPINOR_SWEEP = [
    as_exact_spinor(entries)
    for entries in (
        [1, 0, 0, 0],
        [(1, 0), (0, 1), (0, 0), (0, 0)],
        [(1, 0), (0, 0), (0, 1), (0, 0)],
        [(2, -3), (Fraction(1, 2), 1), (0, -1), (1, 1)],
        [(-1, 2), (3, 0), (Fraction(-2, 3), Fraction(1, 5)), (0, 7)],
        [(0, 0), (Fraction(5, 7), -2), (1, -1), (-3, Fraction(1, 3))],
        [(1, 1), (1, -1), (-1, 1), (-1, -1)],
        [(Fraction(3, 4), 0), (0, Fraction(3, 4)), (2, 2), (0, 0)],
    )
]


def verify_bilinear_reality(gams=None) -> IdentityReport:
    """psibar psi, psibar I psi, psibar gamma^mu psi are real and
    psibar gamma^mu I psi is purely imaginary, exactly."""
    from .clifford import axial_current, bilinear_invariants, current
    from .errors import BilinearRealityError

    for k, psi in enumerate(_SPINOR_SWEEP):
        try:
            bilinear_invariants(psi)
            current(psi)
            axial_current(psi)
        except BilinearRealityError as err:
            return IdentityReport(
                "bilinear_reality", False, f"spinor #{k}: {err}"
            )
    return IdentityReport("bilinear_reality", True)


def verify_z_parity(gams=None) -> IdentityReport:
    """compute_Z(gamma^0 psi) = n_conj(compute_Z(psi)), exactly."""
    gams = _canonical(gams)
    for k, psi in enumerate(_SPINOR_SWEEP):
        flipped = gams[0].a @ psi
        if compute_Z(flipped) != n_conj(compute_Z(psi)):
            return IdentityReport(
                "z_parity_conjugation", False, f"law fails at spinor #{k}"
            )
    return IdentityReport("z_parity_conjugation", True)


_ALL_CHECKS = (
    verify_clifford,
    verify_kgf,
    verify_generalized_kgf,
    verify_n_iso,
    verify_su22_membership,
    verify_pseudoscalar,
    verify_adjoint_hermiticity,
    verify_bilinear_reality,
    verify_z_parity,
)


def run_all(gams=None) -> SuiteReport:
    """Run every exact check; the report is byte-stable across runs.

    ``gams`` overrides the gamma matrices (a test hook for fault
    injection); None means the canonical Dirac representation.
    """
    return SuiteReport(check(gams) for check in _ALL_CHECKS)
