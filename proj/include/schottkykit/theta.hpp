#pragma once
// High-precision theta constants with characteristics:
//
//   theta[eps;delta](tau) = sum_{n in Z^g} exp(pi i (n+eps/2)^t (tau (n+eps/2) + delta))
//
// The lattice sum is truncated to a box with per-axis radii derived from the
// diagonal of Im(tau)^{-1}; inside the box, points are pruned against an
// ellipsoid threshold using the LDL^T (Fincke-Pohst) partial sums. Both the
// outside-box mass and the pruned inside mass are bounded by Gaussian tail
// estimates against lambda_min(Im tau), so that the total truncation error is
// certified below 10^(-P-G) relative to the largest lattice term.
//
// The fast kernel walks the innermost axis with the quadratic-exponential
// recurrence (two complex multiplies per lattice point) and parallelizes over
// outermost-axis slices; partial sums are combined in a fixed order, so
// results are bit-identical for any thread count. A naive serial reference
// path (fresh complex exponential per point, plain box, lexicographic
// accumulation) is kept for testing and benchmarks.

#include "schottkykit/charalg.hpp"
#include "schottkykit/hp.hpp"
#include "schottkykit/periodmatrix.hpp"

#include <map>
#include <vector>

namespace skt::theta {

using charalg::Characteristic;

enum class EvalMode { Fast, Reference };

struct EvalOptions {
    int guard_digits = 10;
    EvalMode mode = EvalMode::Fast;
    int radius_cap = 4000;        // reject pathological truncation radii
    double radius_boost = 0.0;    // extra x-radius on every axis (oracle/spot checks)
    bool force_lattice = false;   // skip the exact-diagonal product shortcut
};

// Odd characteristics return exact zero without summation. Exactly diagonal
// tau evaluates as the product of genus-1 constants (exact zero when some
// column is [1;1]) unless force_lattice is set.
HPComplex theta_constant(const Characteristic& m, const PeriodMatrix& tau, int digits,
                         const EvalOptions& opts = {});

// one-dimensional constant theta[e;d](t), Im t > 0
HPComplex theta_genus1(int eps_bit, int delta_bit, const HPComplex& t, int digits,
                       const EvalOptions& opts = {});

// product formula theta[m](diag t) = prod_i theta[m_i](t_i); exact zero as
// soon as some column equals [1;1]
HPComplex theta_on_diagonal(const Characteristic& m, const std::vector<HPComplex>& t, int digits,
                            const EvalOptions& opts = {});

// d/dz theta[1;1](t, z) at z = 0, evaluated by the differentiated series and
// cross-checked against -pi * theta[0;0] theta[0;1] theta[1;0] (the triple
// product); throws if the two paths disagree beyond 10^(-P+G).
HPComplex theta11_z_derivative(const HPComplex& t, int digits, const EvalOptions& opts = {});

struct HeatResidual {
    HPReal residual;    // |FD - analytic linear-term prediction|
    HPReal scale;       // local magnitude scale for relative comparison
    HPComplex fd;       // the central finite difference in tau_jk
    HPComplex predicted;
};

// central finite difference of theta in tau_jk at the diagonal point diag(t)
// against the analytic prediction of the near-diagonal expansion
HeatResidual heat_equation_residual(const Characteristic& m, const std::vector<HPComplex>& t, int j, int k,
                                    double h, int digits, const EvalOptions& opts = {});

// Batch evaluation of many characteristics at one tau: deduplicates, runs the
// distinct evaluations in parallel, and counts them (the monomial-cache
// contract of the S_jk evaluator is tested against this counter).
class ThetaBatch {
  public:
    ThetaBatch(const PeriodMatrix& tau, int digits, EvalOptions opts = {});

    void request(const Characteristic& m);
    void run();
    const HPComplex& value(const Characteristic& m) const;
    int distinct_evaluations() const { return distinct_; }

  private:
    const PeriodMatrix& tau_;
    int digits_;
    EvalOptions opts_;
    std::map<Characteristic, HPComplex> values_;
    int distinct_ = 0;
    bool ran_ = false;
};

}  // namespace skt::theta
