#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubres/thresholds.hpp"

using namespace cubres;

TEST_CASE("table shape") {
    const auto& rows = threshold_table();
    CHECK(rows.size() == 66);
    CHECK(rows.front().q1 == 2);
    CHECK(rows.back().q1 == 317);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        CHECK(rows[i].q1 < rows[i + 1].q1);
        CHECK(rows[i].f0_double() <= rows[i + 1].f0_double());
    }
    for (const auto& r : rows) CHECK(is_prime_u128(r.q1));
    CHECK(threshold_row(2)->f0_u128() == parse_u128("1e14"));
    CHECK(threshold_row(127)->f0_u128() == parse_u128("3.18e18"));
    CHECK(threshold_row(317)->f0_u128() == parse_u128("1.83e20"));
    CHECK(threshold_row(331) == nullptr);
}

TEST_CASE("anchor rows certify at their table values") {
    for (u32 q1 : {2u, 11u, 127u, 317u}) {
        const ThresholdRow* row = threshold_row(q1);
        auto cert = certify_threshold_at(q1, row->f0_double());
        CHECK(cert.ok);
        CHECK(cert.worst_lhs.hi < 1.0);
    }
}

TEST_CASE("solver reproduces anchor rows within 5%") {
    for (u32 q1 : {2u, 11u, 127u, 317u}) {
        const ThresholdRow* row = threshold_row(q1);
        auto s = solve_threshold_f0(q1);
        CHECK(s.f0 > 0);
        CHECK(std::abs(s.f0 - row->f0_double()) <= 0.05 * row->f0_double());
    }
    // the small-q1 rows sit at the search floor
    CHECK(solve_threshold_f0(2).f0 == 1e14);
    CHECK(solve_threshold_f0(2).clamped);
    CHECK(solve_threshold_f0(7).f0 == 1e14);
}

TEST_CASE("condition decays along f above a certified row") {
    u32 q1 = 127;
    double prev = 2.0;
    for (double f : {3.18e18, 1e19, 1e20, 1e22, 1e26, 1e30}) {
        auto c = certify_threshold_at(q1, f);
        CHECK(c.ok);
        CHECK(c.worst_lhs.hi < prev);
        prev = c.worst_lhs.hi;
    }
}

TEST_CASE("threshold extension beyond the table") {
    auto s = solve_threshold_f0(331);
    CHECK(s.f0 > threshold_row(317)->f0_double());
    // the solver's return value is itself certified; well above it the
    // feasibility window is wide open
    CHECK(certify_threshold_at(331, s.f0).ok);
    CHECK(certify_threshold_at(331, s.f0 * 1.25).ok);
}
