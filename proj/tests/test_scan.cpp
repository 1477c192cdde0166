#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "inloop/scan.hpp"
#include "inloop/table.hpp"
#include "support.hpp"

using namespace inloop;

namespace {

SystemParams fig2_base(double kappa2_over_kappa) {
    return support::reference_params(kappa2_over_kappa, 1.0, 0.0, 0.0, 0.6);
}

int count_sub_sql(const RegionMap& map) {
    int n = 0;
    for (const auto& c : map.cells) n += c.sub_sql ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("region map basics") {
    const AxisSpec coop{"cooperativity", 0.01, 4.0, 40};
    const AxisSpec zf{"zeta_over_kappa", 0.0, 1.0, 40};

    SUBCASE("amplification threshold cell") {
        const RegionMap map = region_map(fig2_base(0.5), AxisSpec{"cooperativity", 0.5, 0.5, 1},
                                         AxisSpec{"zeta_over_kappa", 0.25, 0.25, 1});
        REQUIRE(map.cells.size() == 1);
        const RegionCell& cell = map.cells[0];
        REQUIRE(cell.r_m0.has_value());
        CHECK(*cell.r_m0 == doctest::Approx(1.0).epsilon(1e-9));
        CHECK_FALSE(cell.unstable);
    }
    SUBCASE("flags recompute from stored values") {
        const RegionMap map = region_map(fig2_base(0.9), coop, zf);
        for (const auto& cell : map.cells) {
            if (cell.unstable) {
                CHECK_FALSE(cell.r_m0.has_value());
                CHECK_FALSE(cell.n_add0.has_value());
                CHECK_FALSE(cell.amplifying);
                CHECK_FALSE(cell.sub_sql);
            } else if (cell.r_m0) {
                CHECK(cell.amplifying == (*cell.r_m0 > 1.0));
                CHECK(cell.sub_sql == (*cell.n_add0 < 0.5));
            }
        }
    }
    SUBCASE("sub-SQL area grows with the detection-side decay fraction") {
        CHECK(count_sub_sql(region_map(fig2_base(0.9), coop, zf)) >
              count_sub_sql(region_map(fig2_base(0.5), coop, zf)));
    }
    SUBCASE("a grid entirely beyond the boundary is fully unstable") {
        const RegionMap map = region_map(
            fig2_base(0.5), coop, AxisSpec{"zeta_over_kappa", 0.55, 0.95, 8});
        for (const auto& cell : map.cells) CHECK(cell.unstable);
    }
    SUBCASE("exact route agrees with the closed forms") {
        const AxisSpec small_c{"cooperativity", 0.2, 2.0, 6};
        const AxisSpec small_z{"zeta_over_kappa", 0.0, 0.45, 6};
        const RegionMap fast = region_map(fig2_base(0.75), small_c, small_z, false);
        const RegionMap exact = region_map(fig2_base(0.75), small_c, small_z, true);
        for (std::size_t i = 0; i < fast.cells.size(); ++i) {
            REQUIRE(fast.cells[i].r_m0.has_value() == exact.cells[i].r_m0.has_value());
            if (fast.cells[i].r_m0) {
                CHECK(*exact.cells[i].r_m0 ==
                      doctest::Approx(*fast.cells[i].r_m0).epsilon(1e-8));
                CHECK(*exact.cells[i].n_add0 ==
                      doctest::Approx(*fast.cells[i].n_add0).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("region map is deterministic across worker counts") {
    const AxisSpec coop{"cooperativity", 0.01, 4.0, 30};
    const AxisSpec zf{"zeta_over_kappa", 0.0, 1.0, 30};
    setenv("SENSOR_THREADS", "1", 1);
    const std::string one = emit_csv(to_table(region_map(fig2_base(0.75), coop, zf), {}));
    setenv("SENSOR_THREADS", "7", 1);
    const std::string seven = emit_csv(to_table(region_map(fig2_base(0.75), coop, zf), {}));
    unsetenv("SENSOR_THREADS");
    CHECK(one == seven);
}

TEST_CASE("cooperativity sweep peaks at C = 1 with value kappa2/kappa") {
    SweepRequest req;
    req.axis = SweepAxis::cooperativity;
    req.grid = AxisSpec{"", 0.25, 4.0, 16};  // includes C = 1.0
    req.columns = {"r_m"};
    const SweepTable table = sweep(support::reference_params(0.8, 1.0, 0.0, 0.0, 1.0), req);
    REQUIRE(table.rows.size() == 16);
    double best = -1.0;
    double best_axis = 0.0;
    for (const auto& row : table.rows) {
        REQUIRE_FALSE(row.error.has_value());
        if (row.values[0] > best) {
            best = row.values[0];
            best_axis = row.axis_value;
        }
    }
    CHECK(best_axis == doctest::Approx(1.0));
    CHECK(best == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("feedback widens the amplification band") {
    // the band is a small fraction of kappa, so sample densely around zero
    SweepRequest req;
    req.axis = SweepAxis::omega_over_kappa;
    req.grid = AxisSpec{"", -0.01, 0.01, 2001};
    req.columns = {"r_m"};
    const SystemParams open = support::reference_params(0.95, 1.0, 0.0, 0.0, 0.6);
    const SystemParams fb = support::reference_params(0.95, 1.0, 0.49, 0.0, 0.6);
    const auto half_count = [&](const SystemParams& p) {
        const SweepTable t = sweep(p, req);
        const double r0 = t.rows[1000].values[0];  // omega = 0 row
        int n = 0;
        for (const auto& row : t.rows) n += row.values[0] > 0.5 * r0 ? 1 : 0;
        return n;
    };
    CHECK(half_count(fb) > 10 * half_count(open));
}

TEST_CASE("per-row errors are recorded, not fatal") {
    SweepRequest req;
    req.axis = SweepAxis::zeta_over_kappa;
    req.grid = AxisSpec{"", 0.9, 1.3, 5};  // crosses overdrive at 1.0
    req.columns = {"r_m", "n_add"};
    const SweepTable table = sweep(support::reference_params(0.5, 1.0, 0.0, 0.0, 0.6), req);
    REQUIRE(table.rows.size() == 5);
    CHECK_FALSE(table.rows[0].error.has_value());  // zeta = 0.9 kappa builds fine
    for (std::size_t i = 1; i < 5; ++i) {
        CHECK(table.rows[i].error.has_value());
        CHECK(std::isnan(table.rows[i].values[0]));
    }
}

TEST_CASE("empty output selection gives a metadata-only table") {
    SweepRequest req;
    req.axis = SweepAxis::cooperativity;
    req.grid = AxisSpec{"", 0.0, 4.0, 100};
    const SweepTable table = sweep(support::reference_params(0.5, 1.0, 0.2), req);
    CHECK(table.rows.empty());
    CHECK(table.columns.empty());
    CHECK_FALSE(table.metadata.empty());
}

TEST_CASE("sweep rows are ordered and reproducible across worker counts") {
    SweepRequest req;
    req.axis = SweepAxis::eta;
    req.grid = AxisSpec{"", 0.2, 1.0, 17};
    req.columns = {"r_m", "n_add", "sensitivity_N_per_sqrtHz", "stable"};
    const SystemParams base = support::reference_params(0.95, 1.0, 0.3, 0.0, 0.6, 77.0);
    setenv("SENSOR_THREADS", "1", 1);
    const Table one = to_table(sweep(base, req));
    setenv("SENSOR_THREADS", "5", 1);
    const Table five = to_table(sweep(base, req));
    unsetenv("SENSOR_THREADS");
    CHECK(emit_csv(one) == emit_csv(five));
    for (std::size_t i = 1; i < one.rows.size(); ++i) {
        CHECK(one.rows[i][0] > one.rows[i - 1][0]);
    }
}

TEST_CASE("eta and kappa2 sweeps hold zeta/kappa fixed") {
    // the gain g is re-derived per row so that zeta/kappa stays at the base
    // value, matching how the curves are parameterized
    SweepRequest req;
    req.axis = SweepAxis::kappa2_over_kappa;
    req.grid = AxisSpec{"", 0.5, 0.95, 4};
    req.columns = {"r_m"};
    const SystemParams base = support::reference_params(0.6, 1.0, 0.49, 0.0, 0.6);
    const SweepTable t = sweep(base, req);
    for (const auto& row : t.rows) {
        REQUIRE_FALSE(row.error.has_value());
        // R_m[0] = 4 C kappa kappa2/((C+1) kappa - 2 zeta)^2 with zeta = 0.49 kappa
        const double expected = 4.0 * row.axis_value / std::pow(2.0 - 0.98, 2);
        CHECK(row.values[0] == doctest::Approx(expected).epsilon(1e-10));
    }
}
