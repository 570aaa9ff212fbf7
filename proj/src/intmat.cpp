#include "schottkykit/intmat.hpp"

#include <omp.h>

namespace skt {

IntMat IntMat::transposed() const {
    IntMat t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

long long IntMat::trace() const {
    long long s = 0;
    for (int i = 0; i < rows && i < cols; ++i) s += at(i, i);
    return s;
}

IntMat add(const IntMat& A, const IntMat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("IntMat add: shape mismatch");
    IntMat C(A.rows, A.cols);
    for (size_t k = 0; k < A.a.size(); ++k) C.a[k] = A.a[k] + B.a[k];
    return C;
}

IntMat sub(const IntMat& A, const IntMat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("IntMat sub: shape mismatch");
    IntMat C(A.rows, A.cols);
    for (size_t k = 0; k < A.a.size(); ++k) C.a[k] = A.a[k] - B.a[k];
    return C;
}

IntMat scale(const IntMat& A, long long s) {
    IntMat C(A.rows, A.cols);
    for (size_t k = 0; k < A.a.size(); ++k) C.a[k] = s * A.a[k];
    return C;
}

namespace {
inline void mul_row(const IntMat& A, const IntMat& B, IntMat& C, int i) {
    const long long* arow = &A.a[static_cast<size_t>(i) * A.cols];
    long long* crow = &C.a[static_cast<size_t>(i) * B.cols];
    for (int k = 0; k < A.cols; ++k) {
        long long av = arow[k];
        if (av == 0) continue;
        const long long* brow = &B.a[static_cast<size_t>(k) * B.cols];
        for (int j = 0; j < B.cols; ++j) crow[j] += av * brow[j];
    }
}
}  // namespace

IntMat mul(const IntMat& A, const IntMat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("IntMat mul: shape mismatch");
    IntMat C(A.rows, B.cols);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < A.rows; ++i) mul_row(A, B, C, i);
    return C;
}

IntMat mul_serial(const IntMat& A, const IntMat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("IntMat mul: shape mismatch");
    IntMat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) mul_row(A, B, C, i);
    return C;
}

std::vector<long long> mul_vec(const IntMat& A, const std::vector<long long>& x) {
    if (static_cast<size_t>(A.cols) != x.size()) throw std::invalid_argument("IntMat mul_vec: shape mismatch");
    std::vector<long long> y(A.rows, 0);
    for (int i = 0; i < A.rows; ++i) {
        long long s = 0;
        const long long* arow = &A.a[static_cast<size_t>(i) * A.cols];
        for (int j = 0; j < A.cols; ++j) s += arow[j] * x[j];
        y[i] = s;
    }
    return y;
}

int rank_bareiss(const IntMat& A) {
    int n = A.rows, m = A.cols;
    std::vector<std::vector<BigInt>> w(n, std::vector<BigInt>(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) w[i][j] = A.at(i, j);

    BigInt prev = 1;
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (w[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(w[piv], w[r]);
        for (int i = r + 1; i < n; ++i) {
            for (int j = c + 1; j < m; ++j) {
                BigInt t = w[r][c] * w[i][j] - w[i][c] * w[r][j];
                w[i][j] = t / prev;  // exact by the Bareiss identity
            }
            w[i][c] = 0;
        }
        prev = w[r][c];
        ++r;
    }
    return r;
}

namespace {
constexpr std::uint64_t kP = (1ULL << 31) - 1;

inline std::uint64_t modp(long long v) {
    long long r = v % static_cast<long long>(kP);
    if (r < 0) r += kP;
    return static_cast<std::uint64_t>(r);
}

std::uint64_t inv_mod_p(std::uint64_t a) {
    // Fermat: a^(p-2) mod p
    std::uint64_t e = kP - 2, b = a % kP, acc = 1;
    while (e) {
        if (e & 1) acc = acc * b % kP;
        b = b * b % kP;
        e >>= 1;
    }
    return acc;
}

// returns pivot columns; fills rank
std::vector<int> eliminate_mod_p(const IntMat& A, int& rank_out) {
    int n = A.rows, m = A.cols;
    std::vector<std::vector<std::uint64_t>> w(n, std::vector<std::uint64_t>(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) w[i][j] = modp(A.at(i, j));

    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (w[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(w[piv], w[r]);
        std::uint64_t inv = inv_mod_p(w[r][c]);
        for (int j = c; j < m; ++j) w[r][j] = w[r][j] * inv % kP;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            if (i == r || w[i][c] == 0) continue;
            std::uint64_t f = kP - w[i][c];
            for (int j = c; j < m; ++j) w[i][j] = (w[i][j] + f * w[r][j]) % kP;
        }
        pivots.push_back(c);
        ++r;
    }
    rank_out = r;
    return pivots;
}
}  // namespace

int rank_mod_p(const IntMat& A) {
    int r;
    eliminate_mod_p(A, r);
    return r;
}

std::vector<int> pivot_columns_mod_p(const IntMat& A) {
    int r;
    return eliminate_mod_p(A, r);
}

}  // namespace skt
