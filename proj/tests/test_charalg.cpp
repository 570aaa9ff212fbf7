#include "schottkykit/charalg.hpp"

#include "schottkykit/rng.hpp"

#include <doctest.h>

using namespace skt;
using namespace skt::charalg;

TEST_CASE("parity basics") {
    CHECK(parity(Characteristic::of("0000", "0000")) == Parity::Even);
    CHECK(parity(Characteristic::of("1", "1")) == Parity::Odd);

    // count of even characteristics at genus 2 is k_2^+ = 10
    int even_count = 0;
    for (std::uint32_t e = 0; e < 4; ++e)
        for (std::uint32_t d = 0; d < 4; ++d)
            if (is_even(Characteristic(2, e, d))) ++even_count;
    CHECK(even_count == 10);
}

TEST_CASE("weil pairing values and symmetry") {
    CHECK(weil_pairing(Characteristic::of("1", "0"), Characteristic::of("0", "1")) == -1);
    for (std::uint32_t e = 0; e < 4; ++e)
        for (std::uint32_t d = 0; d < 4; ++d) {
            Characteristic m(2, e, d);
            CHECK(weil_pairing(m, m) == 1);
            CHECK(weil_pairing(Characteristic(2, 0, 0), m) == 1);
        }
    CHECK_THROWS(weil_pairing(Characteristic(2, 0, 0), Characteristic(3, 0, 0)));
}

TEST_CASE("weil pairing symmetry and bilinearity, genus 1..5") {
    for (int g = 1; g <= 5; ++g) {
        Rng rng(77 + g);
        for (int it = 0; it < 400; ++it) {
            auto pick = [&] {
                return Characteristic(g, static_cast<std::uint32_t>(rng.next_below(1u << g)),
                                      static_cast<std::uint32_t>(rng.next_below(1u << g)));
            };
            Characteristic m = pick(), n = pick(), p = pick();
            CHECK(weil_pairing(m, n) == weil_pairing(n, m));
            CHECK(weil_pairing(m + n, p) == weil_pairing(m, p) * weil_pairing(n, p));
        }
    }
}

TEST_CASE("tricharacter examples") {
    Characteristic z3 = Characteristic::of("000", "000");
    CHECK(tricharacter(Characteristic::of("011", "100"), z3, z3) == 1);
    Characteristic o1 = Characteristic::of("1", "1");
    CHECK(tricharacter(o1, o1, o1) == -1);
    CHECK(tricharacter(z3, Characteristic::of("011", "100"), Characteristic::of("100", "001")) == 1);
}

TEST_CASE("column operations") {
    Characteristic m = Characteristic::of("0110", "1000");
    CHECK(swap_columns(m, 1, 3) == Characteristic::of("1100", "0010"));
    CHECK(swap_columns(m, 2, 2) == m);
    CHECK(swap_columns(swap_columns(m, 1, 4), 1, 4) == m);
    CHECK_THROWS(swap_columns(m, 0, 2));
    CHECK_THROWS(swap_columns(m, 1, 5));

    Rng rng(123);
    for (int it = 0; it < 1000; ++it) {
        int g = 2 + static_cast<int>(rng.next_below(5));
        Characteristic c(g, static_cast<std::uint32_t>(rng.next_below(1u << g)),
                         static_cast<std::uint32_t>(rng.next_below(1u << g)));
        int i = 1 + static_cast<int>(rng.next_below(g)), j = 1 + static_cast<int>(rng.next_below(g));
        CHECK(parity(swap_columns(c, i, j)) == parity(c));
    }
}

TEST_CASE("append and split") {
    Characteristic m = Characteristic::of("0", "1");
    Characteristic a = append_column(m, 1, 0);
    CHECK(a == Characteristic::of("01", "10"));
    auto [back, col] = split_last(a);
    CHECK(back == m);
    CHECK(col == std::pair<int, int>{1, 0});
    CHECK_THROWS(split_last(m));

    // appending [1;1] flips parity
    Rng rng(5);
    for (int it = 0; it < 200; ++it) {
        int g = 1 + static_cast<int>(rng.next_below(6));
        Characteristic c(g, static_cast<std::uint32_t>(rng.next_below(1u << g)),
                         static_cast<std::uint32_t>(rng.next_below(1u << g)));
        CHECK(parity(append_column(c, 1, 1)) != parity(c));
        CHECK(parity(append_column(c, 0, 1)) == parity(c));
    }
}

TEST_CASE("special two-torsion points") {
    CHECK(special_two_torsion(TwoTorsionKind::EtaG, 4) == Characteristic::of("0000", "1111"));
    CHECK(special_two_torsion(TwoTorsionKind::Eta0, 4) == Characteristic::of("0000", "1000"));
    Characteristic etag = special_two_torsion(TwoTorsionKind::EtaG, 5);
    for (int i = 1; i <= 5; ++i)
        for (int j = i + 1; j <= 5; ++j) CHECK(swap_columns(etag, i, j) == etag);
}

TEST_CASE("orthogonality count of eta_g") {
    for (int g = 1; g <= 6; ++g) {
        Characteristic eta = special_two_torsion(TwoTorsionKind::EtaG, g);
        long long count = 0;
        for (std::uint32_t e = 0; e < (1u << g); ++e)
            for (std::uint32_t d = 0; d < (1u << g); ++d)
                if (weil_pairing(eta, Characteristic(g, e, d)) == 1) ++count;
        CHECK(count == (1LL << (2 * g - 1)));
    }
}

TEST_CASE("canonical order structure") {
    for (int g = 1; g <= 5; ++g) {
        CharOrder ord(g);
        CHECK(static_cast<long long>(ord.even_list.size()) == k_plus(g));
        CHECK(static_cast<long long>(ord.odd_list.size()) == k_minus(g));
        for (const auto& m : ord.even_list) CHECK(is_even(m));
        for (const auto& m : ord.odd_list) CHECK(!is_even(m));
        // no repeats, exhausts K_g
        std::vector<bool> seen(1u << (2 * g), false);
        for (const auto& m : ord.even_list) seen[m.eps | (m.delta << g)] = true;
        for (const auto& m : ord.odd_list) {
            CHECK(!seen[m.eps | (m.delta << g)]);
            seen[m.eps | (m.delta << g)] = true;
        }
        for (bool b : seen) CHECK(b);
        // index lookups invert the listing
        for (size_t i = 0; i < ord.even_list.size(); ++i)
            CHECK(ord.even_index(ord.even_list[i]) == static_cast<int>(i));
    }

    // base case and the recursive step at genus 2
    CharOrder o1(1);
    CHECK(o1.even_list == std::vector<Characteristic>{Characteristic::of("0", "0"), Characteristic::of("0", "1"),
                                                      Characteristic::of("1", "0")});
    CHECK(o1.odd_list == std::vector<Characteristic>{Characteristic::of("1", "1")});
    CharOrder o2(2);
    CHECK(o2.even_list[0] == Characteristic::of("00", "00"));
    CHECK(o2.even_list[1] == Characteristic::of("00", "10"));
    CHECK(o2.even_list[2] == Characteristic::of("10", "00"));
    CHECK(o2.even_list[9] == Characteristic::of("11", "11"));
}
