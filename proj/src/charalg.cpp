#include "schottkykit/charalg.hpp"

#include <bit>

namespace skt::charalg {

namespace {
void require_same_genus(const Characteristic& a, const Characteristic& b) {
    if (a.genus != b.genus) throw std::invalid_argument("characteristic genus mismatch");
}
}  // namespace

Characteristic Characteristic::of(const std::string& top, const std::string& bottom) {
    if (top.size() != bottom.size() || top.empty())
        throw std::invalid_argument("characteristic rows must be nonempty and equal length");
    std::uint32_t e = 0, d = 0;
    for (size_t i = 0; i < top.size(); ++i) {
        if ((top[i] != '0' && top[i] != '1') || (bottom[i] != '0' && bottom[i] != '1'))
            throw std::invalid_argument("characteristic rows must be 0/1 strings");
        if (top[i] == '1') e |= 1u << i;
        if (bottom[i] == '1') d |= 1u << i;
    }
    return Characteristic(static_cast<int>(top.size()), e, d);
}

std::string Characteristic::str() const {
    std::string t(genus, '0'), b(genus, '0');
    for (int i = 0; i < genus; ++i) {
        if ((eps >> i) & 1) t[i] = '1';
        if ((delta >> i) & 1) b[i] = '1';
    }
    return "[" + t + ";" + b + "]";
}

Characteristic operator+(const Characteristic& a, const Characteristic& b) {
    require_same_genus(a, b);
    return Characteristic(a.genus, a.eps ^ b.eps, a.delta ^ b.delta);
}

Parity parity(const Characteristic& m) {
    return (std::popcount(m.eps & m.delta) & 1) ? Parity::Odd : Parity::Even;
}
bool is_even(const Characteristic& m) { return parity(m) == Parity::Even; }

int weil_pairing(const Characteristic& m, const Characteristic& n) {
    require_same_genus(m, n);
    int e = std::popcount(m.eps & n.delta) + std::popcount(n.eps & m.delta);
    return (e & 1) ? -1 : 1;
}

int tricharacter(const Characteristic& m1, const Characteristic& m2, const Characteristic& m3) {
    require_same_genus(m1, m2);
    require_same_genus(m1, m3);
    // exponent = sum_i eps_i beta_i mu_i + delta_i alpha_i mu_i + delta_i beta_i sigma_i
    int e = std::popcount(m1.eps & m2.delta & m3.delta) + std::popcount(m1.delta & m2.eps & m3.delta) +
            std::popcount(m1.delta & m2.delta & m3.eps);
    return (e & 1) ? -1 : 1;
}

Characteristic swap_columns(const Characteristic& m, int i, int j) {
    if (i < 1 || j < 1 || i > m.genus || j > m.genus)
        throw std::out_of_range("swap_columns: column index out of range");
    if (i == j) return m;
    auto swap_bits = [&](std::uint32_t v) {
        std::uint32_t bi = (v >> (i - 1)) & 1u, bj = (v >> (j - 1)) & 1u;
        v &= ~((1u << (i - 1)) | (1u << (j - 1)));
        v |= bi << (j - 1);
        v |= bj << (i - 1);
        return v;
    };
    return Characteristic(m.genus, swap_bits(m.eps), swap_bits(m.delta));
}

Characteristic append_column(const Characteristic& m, int eps_bit, int delta_bit) {
    if ((eps_bit | delta_bit) & ~1) throw std::invalid_argument("append_column: bits must be 0/1");
    return Characteristic(m.genus + 1, m.eps | (static_cast<std::uint32_t>(eps_bit) << m.genus),
                          m.delta | (static_cast<std::uint32_t>(delta_bit) << m.genus));
}

std::pair<Characteristic, std::pair<int, int>> split_last(const Characteristic& m) {
    if (m.genus < 2) throw std::invalid_argument("split_last: genus must be >= 2");
    int g = m.genus;
    int eb = (m.eps >> (g - 1)) & 1, db = (m.delta >> (g - 1)) & 1;
    std::uint32_t mask = (1u << (g - 1)) - 1u;
    return {Characteristic(g - 1, m.eps & mask, m.delta & mask), {eb, db}};
}

Characteristic special_two_torsion(TwoTorsionKind kind, int genus) {
    if (genus < 1 || genus > Characteristic::kMaxGenus)
        throw std::invalid_argument("special_two_torsion: genus out of range");
    if (kind == TwoTorsionKind::Eta0) return Characteristic(genus, 0, 1);
    return Characteristic(genus, 0, (genus == 32) ? ~0u : ((1u << genus) - 1u));
}

CharOrder::CharOrder(int g) : genus(g) {
    if (g < 1 || g > kMaxOrderGenus) throw std::invalid_argument("CharOrder: genus out of range");
    even_list = {Characteristic(1, 0, 0), Characteristic(1, 0, 1), Characteristic(1, 1, 0)};
    odd_list = {Characteristic(1, 1, 1)};
    for (int gg = 2; gg <= g; ++gg) {
        std::vector<Characteristic> ev, od;
        ev.reserve(even_list.size() * 3 + odd_list.size());
        od.reserve(odd_list.size() * 3 + even_list.size());
        for (auto [e, d] : {std::pair{0, 0}, {0, 1}, {1, 0}}) {
            for (const auto& m : even_list) ev.push_back(append_column(m, e, d));
            for (const auto& m : odd_list) od.push_back(append_column(m, e, d));
        }
        for (const auto& m : odd_list) ev.push_back(append_column(m, 1, 1));
        for (const auto& m : even_list) od.push_back(append_column(m, 1, 1));
        even_list = std::move(ev);
        odd_list = std::move(od);
    }
    even_pos_.assign(1u << (2 * g), -1);
    odd_pos_.assign(1u << (2 * g), -1);
    for (size_t i = 0; i < even_list.size(); ++i)
        even_pos_[even_list[i].eps | (even_list[i].delta << g)] = static_cast<int>(i);
    for (size_t i = 0; i < odd_list.size(); ++i)
        odd_pos_[odd_list[i].eps | (odd_list[i].delta << g)] = static_cast<int>(i);
}

int CharOrder::even_index(const Characteristic& m) const {
    if (m.genus != genus) throw std::invalid_argument("CharOrder: genus mismatch");
    int p = even_pos_[m.eps | (m.delta << genus)];
    if (p < 0) throw std::invalid_argument("CharOrder: characteristic is odd, not in even_list");
    return p;
}

int CharOrder::odd_index(const Characteristic& m) const {
    if (m.genus != genus) throw std::invalid_argument("CharOrder: genus mismatch");
    int p = odd_pos_[m.eps | (m.delta << genus)];
    if (p < 0) throw std::invalid_argument("CharOrder: characteristic is even, not in odd_list");
    return p;
}

}  // namespace skt::charalg
