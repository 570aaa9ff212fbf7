#pragma once
// Theta characteristics over (Z/2Z)^{2g}: a pair of length-g bit rows
// [eps; delta], packed one bit per column. All combinatorics here is exact.
//
// Conventions:
//   parity(m)        = eps . delta mod 2             (0 = even, 1 = odd)
//   e(m, n)          = (-1)^(eps1.delta2 - eps2.delta1)   (Weil pairing)
//   (m1, m2, m3)     = (-1)^(sum eps_i beta_i mu_i + delta_i alpha_i mu_i
//                                + delta_i beta_i sigma_i)
// The canonical order of K_g^+/K_g^- appends last columns recursively:
//   even(g) = even(g-1)+[0;0] ++ even(g-1)+[0;1] ++ even(g-1)+[1;0] ++ odd(g-1)+[1;1]
//   odd(g)  = odd(g-1)+[0;0]  ++ odd(g-1)+[0;1]  ++ odd(g-1)+[1;0]  ++ even(g-1)+[1;1]
// with base even(1) = ([0;0],[0;1],[1;0]), odd(1) = ([1;1]). This is the order
// that makes the block layout of the even pairing matrix literal.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace skt::charalg {

enum class Parity { Even, Odd };
enum class TwoTorsionKind { Eta0, EtaG };

struct Characteristic {
    int genus = 0;
    std::uint32_t eps = 0;    // bit i = column i+1 of the top row
    std::uint32_t delta = 0;  // bit i = column i+1 of the bottom row

    static constexpr int kMaxGenus = 16;

    Characteristic() = default;
    Characteristic(int g, std::uint32_t e, std::uint32_t d) : genus(g), eps(e), delta(d) {
        if (g < 1 || g > kMaxGenus) throw std::invalid_argument("characteristic genus out of range");
        std::uint32_t mask = (g == 32) ? ~0u : ((1u << g) - 1u);
        eps &= mask;
        delta &= mask;
    }

    // from row strings, e.g. Characteristic::of("0110", "1000")
    static Characteristic of(const std::string& top, const std::string& bottom);

    bool operator==(const Characteristic& o) const {
        return genus == o.genus && eps == o.eps && delta == o.delta;
    }
    bool operator<(const Characteristic& o) const {
        if (genus != o.genus) return genus < o.genus;
        if (eps != o.eps) return eps < o.eps;
        return delta < o.delta;
    }

    int eps_bit(int col) const { return (eps >> (col - 1)) & 1; }      // 1-based
    int delta_bit(int col) const { return (delta >> (col - 1)) & 1; }  // 1-based

    std::string str() const;  // "[0110;1000]"
};

// componentwise addition mod 2 (an involution)
Characteristic operator+(const Characteristic& a, const Characteristic& b);

Parity parity(const Characteristic& m);
bool is_even(const Characteristic& m);

// +1 or -1; symmetric, e(m,m) = +1
int weil_pairing(const Characteristic& m, const Characteristic& n);

// +1 or -1
int tricharacter(const Characteristic& m1, const Characteristic& m2, const Characteristic& m3);

// 1-based column indices; an involution, preserves parity
Characteristic swap_columns(const Characteristic& m, int i, int j);

// grow/shrink by one column at the end; split_last(append_column(m, c)) == (m, c)
Characteristic append_column(const Characteristic& m, int eps_bit, int delta_bit);
std::pair<Characteristic, std::pair<int, int>> split_last(const Characteristic& m);

// Eta0 -> [0...0; 10...0], EtaG -> [0...0; 1...1]
Characteristic special_two_torsion(TwoTorsionKind kind, int genus);

inline long long k_plus(int g) { return (1LL << (g - 1)) * ((1LL << g) + 1); }
inline long long k_minus(int g) { return (1LL << (g - 1)) * ((1LL << g) - 1); }

// canonical ordering of K_g^+ and K_g^- (see header comment)
struct CharOrder {
    int genus;
    std::vector<Characteristic> even_list;
    std::vector<Characteristic> odd_list;

    explicit CharOrder(int g);

    static constexpr int kMaxOrderGenus = 8;  // materializes 4^g characteristics

    // position of m in even_list / odd_list; throws if parity does not match
    int even_index(const Characteristic& m) const;
    int odd_index(const Characteristic& m) const;

  private:
    std::vector<int> even_pos_, odd_pos_;  // indexed by eps | (delta << g)
};

}  // namespace skt::charalg
