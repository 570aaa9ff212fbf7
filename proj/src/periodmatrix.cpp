#include "schottkykit/periodmatrix.hpp"

#include "schottkykit/rng.hpp"

#include <cmath>

namespace skt::theta {

bool PeriodMatrix::is_symmetric_exact() const {
    for (int i = 0; i < genus; ++i)
        for (int j = i + 1; j < genus; ++j)
            if (!(at(i, j).re == at(j, i).re) || !(at(i, j).im == at(j, i).im)) return false;
    return true;
}

bool PeriodMatrix::is_diagonal_exact() const {
    for (int i = 0; i < genus; ++i)
        for (int j = 0; j < genus; ++j)
            if (i != j && !at(i, j).is_exact_zero()) return false;
    return true;
}

std::vector<HPComplex> PeriodMatrix::diagonal() const {
    std::vector<HPComplex> d;
    d.reserve(genus);
    for (int i = 0; i < genus; ++i) d.push_back(at(i, i));
    return d;
}

PdCertificate validate_period_matrix(const PeriodMatrix& tau) {
    PdCertificate cert;
    int g = tau.genus;
    if (g < 1) {
        cert.message = "empty matrix";
        return cert;
    }
    if (!tau.is_symmetric_exact()) {
        cert.message = "matrix is not symmetric as stored";
        return cert;
    }

    mpfr_prec_t p = tau.at(0, 0).prec();
    // LDL^T of Y = Im tau; all pivots must be positive
    std::vector<HPReal> Y(static_cast<size_t>(g) * g, HPReal(p));
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) Y[static_cast<size_t>(i) * g + j] = tau.at(i, j).im;

    std::vector<HPReal> L(static_cast<size_t>(g) * g, HPReal(p)), D(g, HPReal(p));
    double min_pivot = 0.0;
    for (int j = 0; j < g; ++j) {
        HPReal d = Y[static_cast<size_t>(j) * g + j];
        for (int k = 0; k < j; ++k) d = d - L[static_cast<size_t>(j) * g + k] * L[static_cast<size_t>(j) * g + k] * D[k];
        if (!(d.sgn() > 0)) {
            cert.message = "Im(tau) is not positive definite (nonpositive LDL pivot)";
            return cert;
        }
        D[j] = d;
        min_pivot = (j == 0) ? d.to_double() : std::min(min_pivot, d.to_double());
        L[static_cast<size_t>(j) * g + j] = HPReal(1.0, p);
        for (int i = j + 1; i < g; ++i) {
            HPReal s = Y[static_cast<size_t>(i) * g + j];
            for (int k = 0; k < j; ++k)
                s = s - L[static_cast<size_t>(i) * g + k] * L[static_cast<size_t>(j) * g + k] * D[k];
            L[static_cast<size_t>(i) * g + j] = s / d;
        }
    }

    // Y^{-1} by forward/back substitution, then lambda_min >= 1/||Y^{-1}||_inf
    // (for symmetric matrices ||.||_2 <= ||.||_inf).
    double norm_inf = 0.0;
    for (int col = 0; col < g; ++col) {
        std::vector<HPReal> x(g, HPReal(p));
        x[col] = HPReal(1.0, p);
        for (int i = 0; i < g; ++i)  // L z = e
            for (int k = 0; k < i; ++k) x[i] = x[i] - L[static_cast<size_t>(i) * g + k] * x[k];
        for (int i = 0; i < g; ++i) x[i] = x[i] / D[i];
        for (int i = g - 1; i >= 0; --i)  // L^t w = z
            for (int k = i + 1; k < g; ++k) x[i] = x[i] - L[static_cast<size_t>(k) * g + i] * x[k];
        double rowsum = 0.0;
        for (int i = 0; i < g; ++i) rowsum += std::fabs(x[i].to_double());
        norm_inf = std::max(norm_inf, rowsum);
    }
    cert.ok = true;
    cert.min_pivot = min_pivot;
    cert.lambda_min_lb = (1.0 / norm_inf) * 0.999;  // margin for the double conversions
    return cert;
}

PeriodMatrix random_period_matrix(int genus, std::uint64_t seed, double off_scale, int digits) {
    if (genus < 1) throw std::invalid_argument("random_period_matrix: genus must be >= 1");
    if (off_scale < 0) throw std::invalid_argument("random_period_matrix: off_scale must be >= 0");
    mpfr_prec_t p = bits_for_digits(digits);
    Rng rng(seed);

    std::vector<double> A(static_cast<size_t>(genus) * genus);
    for (auto& v : A) v = rng.uniform_pm1();
    std::vector<double> B(static_cast<size_t>(genus) * genus, 0.0);
    for (int i = 0; i < genus; ++i)
        for (int j = i; j < genus; ++j) B[static_cast<size_t>(i) * genus + j] = B[static_cast<size_t>(j) * genus + i] =
            off_scale * rng.uniform_pm1();

    PeriodMatrix tau(genus, p);
    for (int i = 0; i < genus; ++i) {
        for (int j = i; j < genus; ++j) {
            // dyadic doubles combine exactly at this precision
            HPReal im(0.0, p);
            for (int k = 0; k < genus; ++k)
                im = im + HPReal(A[static_cast<size_t>(i) * genus + k], p) * HPReal(A[static_cast<size_t>(j) * genus + k], p);
            if (i == j) im = im + HPReal(static_cast<long>(genus), p);
            tau.set_sym(i, j, HPComplex(HPReal(B[static_cast<size_t>(i) * genus + j], p), im));
        }
    }
    return tau;
}

PeriodMatrix diagonal_period_matrix(const std::vector<HPComplex>& t) {
    int g = static_cast<int>(t.size());
    mpfr_prec_t p = t.at(0).prec();
    PeriodMatrix tau(g, p);
    for (int i = 0; i < g; ++i) tau.at(i, i) = t[i];
    return tau;
}

PeriodMatrix diagonal_plus(const std::vector<HPComplex>& t, const std::vector<HPComplex>& T_rowmajor,
                           const HPReal& eps) {
    int g = static_cast<int>(t.size());
    if (T_rowmajor.size() != static_cast<size_t>(g) * g)
        throw std::invalid_argument("diagonal_plus: direction matrix has wrong shape");
    mpfr_prec_t p = std::max(t.at(0).prec(), eps.prec());
    PeriodMatrix tau(g, p);
    for (int i = 0; i < g; ++i) {
        tau.at(i, i) = t[i];
        for (int j = i + 1; j < g; ++j) {
            const HPComplex& Tij = T_rowmajor[static_cast<size_t>(i) * g + j];
            tau.set_sym(i, j, HPComplex(Tij.re * eps, Tij.im * eps));
        }
    }
    return tau;
}

}  // namespace skt::theta
