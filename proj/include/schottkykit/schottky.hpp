#pragma once
// The Schottky-Jung forms S_jk.
//
// The characteristic map attached to the two-torsion point
// eta_g = [0...0; 1...1] sends a genus g-1 characteristic [e; d] to the pair
//
//   [sum(e), e_1..e_{g-1}; 0, d_1..d_{g-1}]  and the same + eta_g,
//
// so a quartic monomial of four Prym theta constants becomes a square root of
// a product of eight Jacobian theta constants. The form SJ(P) multiplies the
// substituted expression over every choice of the square-root signs, with one
// slot pinned to +1; for P = R_jk that product has 2^(3*2^(g-4)-1) factors of
// theta-degree 4, total degree 2^(3*2^(g-4)+1).
//
// Evaluation computes every eight-theta monomial once, draws one square-root
// branch per monomial from a seed, and accumulates the factor product in log
// representation; the result is branch-invariant because flipping any root
// permutes (or globally negates, an even number of times) the factor set.

#include "schottkykit/identities.hpp"

#include <cstdint>

namespace skt::schottky {

using charalg::Characteristic;
using theta::EvalOptions;
using theta::PeriodMatrix;

struct SJMonomial {
    std::array<Characteristic, 8> chars;  // SJ pairs in place: (0,1), (2,3), (4,5), (6,7)
};

struct SJIdentity {
    int source_genus = 0;
    int target_genus = 0;
    std::vector<SJMonomial> terms;         // term i owns abstract sign slot i
    int fixed_slot = 0;                    // slot whose sign is pinned to +1
    std::vector<std::string> slot_labels;  // "a[eps]", "b[eps]", "c[eps]" when known
};

// the two genus-g characteristics proportional to the square of a genus g-1
// Prym theta constant; second = first + eta_g
std::pair<Characteristic, Characteristic> sj_char_pair(const Characteristic& m);

// substitute the proportionalities into an expanded relation; slot order is
// the monomial order of the input, slot 0 pinned
SJIdentity build_SJ(const identities::RJK& r);
SJIdentity build_SJ(const weilmat::QuarticRelation& r);  // canonical expansion order

// the main-theorem transcription of S_jk (three families over a top
// (g-4)-characteristic, columns 3<->j and 4<->k swapped); hard-fails unless
// structurally equal to build_SJ(build_R(g-1, j, k))
SJIdentity build_S(int g, int j, int k);

// multiset equality of monomials (each as an unordered 8-set) plus equality
// of the pinned monomial
bool structurally_equal(const SJIdentity& a, const SJIdentity& b);

struct SJValue {
    LogComplex value;
    bool exact_zero = false;
    bool zero_anomaly = false;        // some monomial exactly zero off the diagonal locus
    std::vector<int> zero_monomials;
    int distinct_thetas = 0;          // number of distinct theta evaluations performed
};

SJValue evaluate_SJ(const SJIdentity& s, const PeriodMatrix& tau, int digits, std::uint64_t branch_seed,
                    const EvalOptions& opts = {});

// genus 4: the polynomial R1^2+R2^2+R3^2-2R1R2-2R1R3-2R2R3 in the three
// eight-theta products of S_34, cross-checked against the factor-product
// evaluation (throws on mismatch)
HPComplex genus4_symmetrized_value(const PeriodMatrix& tau, int digits, const EvalOptions& opts = {});

}  // namespace skt::schottky
