#pragma once
// Period matrices: symmetric g x g complex matrices with positive definite
// imaginary part, stored at arbitrary precision. Validation certifies
// positive definiteness by a pivoted LDL^T factorization and produces a
// rigorous lower bound on the smallest eigenvalue of Im(tau) via
// lambda_min >= 1 / ||Im(tau)^{-1}||_inf.

#include "schottkykit/hp.hpp"

#include <string>
#include <vector>

namespace skt::theta {

struct PeriodMatrix {
    int genus = 0;
    std::vector<HPComplex> entries;  // row-major, symmetric as stored

    PeriodMatrix() = default;
    PeriodMatrix(int g, mpfr_prec_t prec) : genus(g), entries(static_cast<size_t>(g) * g, HPComplex(prec)) {}

    HPComplex& at(int i, int j) { return entries[static_cast<size_t>(i) * genus + j]; }
    const HPComplex& at(int i, int j) const { return entries[static_cast<size_t>(i) * genus + j]; }

    // sets both (i,j) and (j,i)
    void set_sym(int i, int j, const HPComplex& v) {
        at(i, j) = v;
        if (i != j) at(j, i) = v;
    }

    bool is_symmetric_exact() const;
    bool is_diagonal_exact() const;

    std::vector<HPComplex> diagonal() const;
};

struct PdCertificate {
    bool ok = false;
    double lambda_min_lb = 0.0;  // rigorous-margin lower bound on lambda_min(Im tau)
    double min_pivot = 0.0;      // smallest LDL pivot of Im tau (the PD margin)
    std::string message;
};

// validates symmetry + positive definiteness; never throws
PdCertificate validate_period_matrix(const PeriodMatrix& tau);

// tau = B + i (A A^t + g I), A uniform dyadic in [-1,1), B symmetric uniform
// dyadic in [-off_scale, off_scale). Bitwise deterministic in the seed.
PeriodMatrix random_period_matrix(int genus, std::uint64_t seed, double off_scale, int digits);

// purely diagonal tau = diag(t_1..t_g)
PeriodMatrix diagonal_period_matrix(const std::vector<HPComplex>& t);

// tau = diag(t) + eps * T  (T symmetric with zero diagonal)
PeriodMatrix diagonal_plus(const std::vector<HPComplex>& t, const std::vector<HPComplex>& T_rowmajor,
                           const HPReal& eps);

}  // namespace skt::theta
