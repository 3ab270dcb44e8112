#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "znec/bounds.hpp"

using namespace znec;

namespace {

NetworkParams tuple(int n, int m, int a, int b, int c, int z, std::uint32_t q = 257) {
    NetworkParams p;
    p.n = n;
    p.m = m;
    p.a = a;
    p.b = b;
    p.c = c;
    p.z = z;
    p.q = q;
    return p;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(tuple(3, 4, 2, 1, 2, 2).validate(), std::invalid_argument);  // a <= c
    CHECK_THROWS_AS(tuple(3, 4, 4, 4, 2, 2).validate(), std::invalid_argument);  // a <= b
    CHECK_THROWS_AS(tuple(1, 4, 4, 2, 2, 2).validate(), std::invalid_argument);  // z > n
    CHECK_THROWS_AS(tuple(3, 4, 4, 2, 2, 2, 256).validate(), std::invalid_argument);
    CHECK_NOTHROW(tuple(3, 4, 4, 2, 2, 2).validate());
}

TEST_CASE("achievable rate for the reference tuples") {
    // (n-z)a + (m-z)c + b in both cases
    CHECK(upper_bound(tuple(3, 4, 4, 2, 2, 2)) == 10);
    CHECK(upper_bound(tuple(4, 6, 3, 1, 2, 3)) == 10);
    CHECK(upper_bound(tuple(2, 2, 3, 1, 1, 1)) == 5);
    CHECK(upper_bound(tuple(3, 4, 4, 1, 1, 2)) == 7);
    CHECK(upper_bound(tuple(4, 6, 3, 2, 2, 3)) == 11);
}

TEST_CASE("full bound report for the first reference tuple") {
    BoundReport rep = bound_report(tuple(3, 4, 4, 2, 2, 2));
    CHECK(rep.ub == 10);
    CHECK(rep.category == 1);
    CHECK(rep.tight);
    CHECK(rep.sb.at("SB1") == 12);
    CHECK(rep.sb.at("SB2") == 12);
    CHECK(rep.sb.at("SB3") == 12);
    CHECK(rep.sb.at("SB4") == 10);
    CHECK(rep.margin_at_2 == 2);
}

TEST_CASE("full bound report for the second reference tuple") {
    BoundReport rep = bound_report(tuple(4, 6, 3, 1, 2, 3));
    CHECK(rep.ub == 10);
    CHECK(rep.category == 1);
    CHECK(rep.tight);
    CHECK(rep.sb.at("SB1") == 12);
    CHECK(rep.sb.at("SB2") == 12);
    CHECK(rep.sb.at("SB3") == 12);
    CHECK(rep.sb.at("SB4") == 10);
    CHECK(rep.margin_at_2 == 2);
}

TEST_CASE("category classification covers all four regimes") {
    CHECK(bound_report(tuple(3, 4, 4, 2, 2, 2)).category == 1);   // wide both ways
    CHECK(bound_report(tuple(3, 6, 4, 1, 1, 3)).category == 2);   // narrow upstream
    CHECK(bound_report(tuple(4, 3, 3, 1, 1, 2)).category == 3);   // narrow downstream
    CHECK(bound_report(tuple(3, 4, 4, 1, 2, 3)).category == 4);   // narrow both ways
}

TEST_CASE("tightness thresholds per category") {
    // category 1: b < min(z(a-c), zc - (z-2)a)
    CHECK(tight_condition(tuple(3, 4, 4, 2, 2, 2)));       // 2 < min(4, 4)
    CHECK_FALSE(tight_condition(tuple(2, 2, 3, 2, 1, 1))); // 2 !< min(2, 4)
    // category 3: b < min(zc - (z-2)a, (m-z)(a-c))
    CHECK(tight_condition(tuple(4, 3, 3, 1, 1, 2)));       // 1 < min(2, 2)
    CHECK_FALSE(tight_condition(tuple(4, 3, 3, 2, 1, 2))); // 2 !< 2
    // tight always forces b < z(a-c) and m > z
    for (int b = 1; b < 4; ++b) {
        NetworkParams p = tuple(4, 4, 4, b, 2, 2);
        if (tight_condition(p)) {
            CHECK(b < p.z * (p.a - p.c));
            CHECK(p.m > p.z);
        }
    }
}

TEST_CASE("margin grows with the identified link count") {
    NetworkParams p = tuple(3, 4, 4, 2, 2, 2);
    CHECK(identified_margin(p, 2) == 2);   // 2a - z(a-c) - b = 8 - 4 - 2
    CHECK(identified_margin(p, 1) < identified_margin(p, 2));
}

TEST_CASE("cut-based confusion bound matches the achievable rate when tight") {
    NetworkParams p = tuple(3, 4, 4, 2, 2, 2);
    CutSpec cut = four_node_cut(p);
    CHECK(cut.forward.size() == 7);
    CHECK(cut.feedback.size() == 1);
    std::vector<int> z1{0, 1};       // first z upstream links
    std::vector<int> z2{3, 4};       // first z downstream links
    CHECK(confusion_bound(cut, z1, z2, p.z) == 10);
    CHECK(min_confusion_bound(cut, p.z) == 10);

    NetworkParams tiny = tuple(2, 2, 3, 1, 1, 1, 5);
    CHECK(min_confusion_bound(four_node_cut(tiny), 1) == 5);
}

TEST_CASE("tiny network codebook is deterministic and collision free") {
    NetworkParams p = tuple(2, 2, 2, 1, 1, 1, 2);
    TinyNetwork net1 = make_tiny_network(p, 7);
    TinyNetwork net2 = make_tiny_network(p, 7);
    CHECK(net1.feedback_map == net2.feedback_map);

    std::vector<TinyCodeword> book = tiny_codebook(net1, 17);
    REQUIRE(book.size() == 17);
    for (std::size_t i = 0; i < book.size(); ++i) {
        for (std::size_t j = i + 1; j < book.size(); ++j) {
            CHECK_FALSE((book[i].upstream == book[j].upstream &&
                         book[i].downstream == book[j].downstream));
        }
    }
    // first entry is the all-zero word of the enumeration
    for (Symbol v : book[0].upstream.data()) CHECK(v == 0);
}

TEST_CASE("confusion search needs a pigeonhole-sized codebook") {
    NetworkParams p = tuple(2, 2, 2, 1, 1, 1, 2);
    TinyNetwork net = make_tiny_network(p, 1);
    std::vector<TinyCodeword> small = tiny_codebook(net, 4);
    CHECK_THROWS_AS((void)confusion_attack(net, small, {0}, {2}), std::invalid_argument);
}
