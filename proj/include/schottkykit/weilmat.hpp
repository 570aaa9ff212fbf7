#pragma once
// Exact construction and certification of the Weil pairing matrices
//
//      M(g) = [ M+(g)   N(g)  ]        (characteristics in canonical order,
//             [ N(g)^t  M-(g) ]         evens first)
//
// and of the -2^(g-1) eigenvectors of M+(g) that parameterize all quartic
// theta identities. Everything in this module is integer arithmetic; no
// floating point is involved in any certificate.
//
// Eigenstructure facts being certified (all exact):
//   (M - 2^g)(M + 2^g) = 0,   (M+ - 2^g)(M+ + 2^(g-1)) = 0,
//   (M- + 2^g)(M- - 2^(g-1)) = 0,
//   multiplicities from traces, eigenspace ranks, and the four kernel
//   characterizations of the eigenspaces.

#include "schottkykit/charalg.hpp"
#include "schottkykit/intmat.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace skt::weilmat {

using charalg::CharOrder;
using charalg::Characteristic;

enum class PairingKind { Full, EvenEven, OddOdd, EvenOdd };

struct PairingMatrix {
    int genus = 0;
    PairingKind kind = PairingKind::Full;
    IntMat m;
};

// entries are Weil pairings of characteristics in canonical order.
// Full is capped at genus 8 (4^g rows).
PairingMatrix build_pairing_matrix(int genus, PairingKind kind);

struct EigenCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct EigenReport {
    int genus = 0;
    std::vector<EigenCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const EigenCheck* failed() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
};

// Runs the full battery of exact eigenstructure checks at this genus.
// Ranks of small matrices use Bareiss elimination; the kernel-dimension
// certificates combine exact matrix identities with mod-p rank lower bounds.
EigenReport verify_eigenstructure(int genus);

// columns of N(g), each certified (exactly) to be a -2^(g-1) eigenvector of
// M+(g); their span is certified to have rank (4^g - 1)/3. genus <= 6.
std::vector<std::vector<long long>> neg_eigenspace_basis(int genus);

// One quartic identity: coefficient vector X over K_g^+ plus the two shift
// characteristics [alpha;beta], [sigma;mu] of the Riemann form.
struct QuarticRelation {
    int genus = 0;
    std::vector<long long> coeffs;  // indexed by CharOrder::even_list
    Characteristic shift_a;         // [alpha; beta]
    Characteristic shift_s;         // [sigma; mu]

    std::map<Characteristic, long long> coeff_map() const;
};

// VALID  <=>  M+(g) X = -2^(g-1) X exactly. Computed by on-the-fly pairings
// against the support of X, so no matrix is materialized (genus <= 8).
bool is_valid_relation(const QuarticRelation& r);

// same check for an arbitrary coefficient vector
bool is_neg_eigenvector(int genus, const std::vector<long long>& x);

enum class LiftVariant { U1, U2, U3, U4 };

// Lift a coefficient vector from genus g-1 to genus g in the canonical block
// layout (last column [0;0] | [0;1] | [1;0] | [1;1] odds):
//   U1: (X, X, 0, 0)    X a -2^(g-2) eigenvector of M+(g-1)
//   U2: (X, 0, X, 0)    X a -2^(g-2) eigenvector of M+(g-1)
//   U3: (X, 0, 0, Y)    (X, Y) a -2^(g-1) eigenvector of M(g-1)
//   U4: (X, -X, -X, 0)  X a +2^(g-1) eigenvector of M+(g-1)
// Preconditions are checked exactly; the lifted vector is checked exactly.
std::vector<long long> doubling_lift(int target_genus, const std::vector<long long>& x, LiftVariant variant,
                                     const std::optional<std::vector<long long>>& companion = std::nullopt);

}  // namespace skt::weilmat
