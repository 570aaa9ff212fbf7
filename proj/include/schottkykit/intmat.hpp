#pragma once
// Dense exact integer matrices and the three rank engines used by the
// eigenstructure certificates:
//   - int64 arithmetic for matrix products (entries here stay far below 2^63),
//   - fraction-free Bareiss elimination over big integers for exact ranks of
//     small matrices,
//   - elimination mod p = 2^31 - 1, which certifies rank lower bounds for the
//     large matrices (a nonzero minor mod p is nonzero over Z).
// Matrix products have an OpenMP row-parallel kernel and a serial reference.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace skt {

using BigInt = boost::multiprecision::cpp_int;

struct IntMat {
    int rows = 0, cols = 0;
    std::vector<long long> a;  // row-major

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    long long& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    long long at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IntMat identity(int n, long long s = 1) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = s;
        return m;
    }

    bool is_zero() const {
        for (long long v : a)
            if (v != 0) return false;
        return true;
    }
    bool operator==(const IntMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    IntMat transposed() const;
    long long trace() const;
};

IntMat add(const IntMat& A, const IntMat& B);
IntMat sub(const IntMat& A, const IntMat& B);
IntMat scale(const IntMat& A, long long s);

// row-parallel product (OpenMP)
IntMat mul(const IntMat& A, const IntMat& B);
// single-threaded reference kept for kernel testing and benchmarks
IntMat mul_serial(const IntMat& A, const IntMat& B);

std::vector<long long> mul_vec(const IntMat& A, const std::vector<long long>& x);

// exact rank over Q by fraction-free Gaussian elimination (Bareiss)
int rank_bareiss(const IntMat& A);

// rank of A mod p (p = 2^31 - 1); always <= rank over Q
int rank_mod_p(const IntMat& A);

// positions of pivot columns of A mod p (a maximal independent column set)
std::vector<int> pivot_columns_mod_p(const IntMat& A);

}  // namespace skt
