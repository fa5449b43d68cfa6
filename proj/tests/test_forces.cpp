#include <doctest.h>

#include <sstream>

#include "gsf/errors.hpp"
#include "gsf/forces.hpp"
#include "gsf/rng.hpp"

using namespace gsf;

namespace {

Solution at(double a, double b, bool feasible = true) {
    return Solution({a, b}, {a, b}, feasible, feasible ? 0.0 : 1.0);
}

bool conserved(const ForceHistogram& h) {
    std::size_t sum = 0;
    for (auto c : h.bins()) {
        sum += c;
    }
    return sum + h.unfeasible_excluded() + h.zero_modulus_excluded() == h.total_offered() &&
           sum == h.binned();
}

}  // namespace

TEST_CASE("force examples") {
    ForceHistogram h;
    record_force(h, at(1, 1), at(0, 1));
    CHECK(h.bins()[ForceHistogram::bin_of(180.0)] == 1);
    CHECK(ForceHistogram::bin_of(180.0) == 18);

    record_force(h, at(1, 1), at(1, 1));
    CHECK(h.zero_modulus_excluded() == 1);
    record_force(h, at(1, 1), at(0, 0, false));
    CHECK(h.unfeasible_excluded() == 1);
    CHECK(h.binned() == 1);
    CHECK(h.total_offered() == 3);

    record_force(h, at(1, 1), at(1, 0));
    CHECK(h.bins()[27] == 1);  // 270 deg: only f2 improves

    const Solution three({0}, {1, 2, 3}, true);
    CHECK_THROWS_AS(h.record(three, three), UnsupportedDimensionError);
}

TEST_CASE("bins wrap around the circle") {
    CHECK(ForceHistogram::bin_of(0.0) == 0);
    CHECK(ForceHistogram::bin_of(9.999) == 0);
    CHECK(ForceHistogram::bin_of(10.0) == 1);
    CHECK(ForceHistogram::bin_of(359.9) == 35);
    CHECK(ForceHistogram::bin_of(360.0) == 0);
    CHECK(ForceHistogram::bin_of(-90.0) == 27);
}

TEST_CASE("conservation after every recorded force") {
    RngStream r(21, 0);
    ForceHistogram h;
    for (int i = 0; i < 20000; ++i) {
        const double a = static_cast<double>(r.uniform_index(3));
        const double b = static_cast<double>(r.uniform_index(3));
        record_force(h, at(1, 1), at(a, b, r.uniform() > 0.1));
        REQUIRE(conserved(h));
    }
    ForceHistogram other;
    other.record_angle(45.0);
    h.merge(other);
    CHECK(conserved(h));
}

TEST_CASE("rotating every force shifts the histogram") {
    RngStream r(22, 0);
    ForceHistogram a;
    ForceHistogram b;
    for (int i = 0; i < 5000; ++i) {
        // bin centres keep the shift exact
        const double deg = 10.0 * static_cast<double>(r.uniform_index(36)) + 5.0;
        a.record_angle(deg);
        b.record_angle(deg + 90.0);
    }
    for (std::size_t k = 0; k < ForceHistogram::kBins; ++k) {
        REQUIRE(a.bins()[k] == b.bins()[(k + 9) % ForceHistogram::kBins]);
    }
    for (std::size_t q = 0; q < 4; ++q) {
        CHECK(a.quadrant_share(q) == b.quadrant_share((q + 1) % 4));
    }
}

TEST_CASE("exclusion report") {
    std::array<std::size_t, ForceHistogram::kBins> bins{};
    bins[3] = 70;
    const auto h = ForceHistogram::from_counts(bins, 10, 20);
    CHECK(h.total_offered() == 100);
    const auto rep = exclusion_report(h);
    CHECK(rep.unfeasible_percent == 10.0);
    CHECK(rep.zero_modulus_percent == 20.0);
    CHECK_THROWS_AS(exclusion_report(ForceHistogram{}), StateError);
    CHECK(ForceHistogram{}.quadrant_share(0) == 0.0);
    CHECK(h.quadrant_share(0) == 1.0);

    std::ostringstream os;
    h.write(os);
    CHECK(os.str().find("# offered 100 unfeasible 10 zero_modulus 20") != std::string::npos);
}
