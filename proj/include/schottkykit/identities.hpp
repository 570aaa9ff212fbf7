#pragma once
// Quartic theta identities and their numerical evaluation:
//   - Riemann's quartic relation (the 2^g-weighted product vs. the signed
//     sum over all of K_g),
//   - the eigenvector form: X a -2^(g-1) eigenvector of M+ gives
//       sum_X x_[e;d] (-1)^(d.(alpha+sigma)) th[e;d] th[e+a;d+b] th[e+s;d+m] th[e+a+s;d+b+m] = 0,
//   - the explicit relations R_jk (three sign-pattern families summed over a
//     top (g-3)-characteristic, columns permuted), and
//   - the doubling transport appending last columns [0;0] and [1;0].
// Residuals are reported relative to the largest single monomial magnitude.

#include "schottkykit/theta.hpp"
#include "schottkykit/weilmat.hpp"

#include <array>

namespace skt::identities {

using charalg::Characteristic;
using theta::EvalOptions;
using theta::PeriodMatrix;
using weilmat::QuarticRelation;

struct QuarticTerm {
    long long coeff = 0;
    std::array<Characteristic, 4> chars;
};

struct QuarticMonomialList {
    int genus = 0;
    std::vector<QuarticTerm> terms;
};

// expanded form of a relation; monomials containing an odd characteristic are
// dropped (their theta constants vanish identically)
QuarticMonomialList expand(const QuarticRelation& r);

// expansion with terms of equal unordered characteristic multiset merged
// (several coefficients can carry the same monomial: the four members of a
// shift orbit produce one product). Cancelled monomials are removed.
QuarticMonomialList merged_monomials(const QuarticRelation& r);

// usable negative control: the quartic sum attached to r is generically
// nonzero iff the component of X in the 2^g eigenspace of M+ produces a
// formally nonzero polynomial (an invalid X can still generate a functional
// zero when that component's merged expansion cancels)
bool is_generically_nonvanishing(const QuarticRelation& r);

struct IdentityValue {
    HPComplex value;
    HPReal max_monomial;

    // |value| / max monomial magnitude; 0 when every monomial vanished
    double relative() const;
};

IdentityValue evaluate_monomials(const QuarticMonomialList& l, const PeriodMatrix& tau, int digits,
                                 const EvalOptions& opts = {});

// LHS - RHS of Riemann's quartic relation for the triple (m1, m2, m3)
IdentityValue riemann_relation_residual(const Characteristic& m1, const Characteristic& m2,
                                        const Characteristic& m3, const PeriodMatrix& tau, int digits,
                                        const EvalOptions& opts = {});

// the signed quartic sum attached to a coefficient vector (validity not
// required; random non-eigenvectors serve as negative controls)
IdentityValue eigenvector_quartic_value(const QuarticRelation& r, const PeriodMatrix& tau, int digits,
                                        const EvalOptions& opts = {});

struct RJK {
    QuarticRelation relation;
    QuarticMonomialList monomials;  // family-major order; term 0 is the epsilon = 0 term of family one
};

// R_jk at genus h >= 3 for 3 <= j < k <= h+1: built as R_34 (3 * 2^(h-3)
// monomials), then columns 2 <-> j-1 and 3 <-> k-1 swapped in every
// characteristic. The coefficient vector is checked exactly to be a
// -2^(h-1) eigenvector.
RJK build_R(int h, int j, int k);

// genus h -> h+1: every monomial is doubled with last columns [0;0] and
// [1;0]; the input must be valid, the output is revalidated exactly
QuarticRelation doubling_transport(const QuarticRelation& r);

}  // namespace skt::identities
