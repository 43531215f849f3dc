#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "shear/sweep.hpp"

using namespace shear;

namespace {

constexpr double kPi = kTwoPi / 2;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("shear_test_" + name);
}

double circular_gap(double a, double b) {
    const double d = std::abs(wrap_2pi(a) - wrap_2pi(b));
    return std::min(d, kTwoPi - d);
}

}  // namespace

TEST(ParseReal, Forms) {
    EXPECT_DOUBLE_EQ(parse_real("0.25"), 0.25);
    EXPECT_DOUBLE_EQ(parse_real("-1e-3"), -1e-3);
    EXPECT_DOUBLE_EQ(parse_real("1/4"), 0.25);
    EXPECT_DOUBLE_EQ(parse_real("pi"), kPi);
    EXPECT_DOUBLE_EQ(parse_real("1pi"), kPi);
    EXPECT_DOUBLE_EQ(parse_real("-pi"), -kPi);
    EXPECT_DOUBLE_EQ(parse_real("0.5pi"), kPi / 2);
    EXPECT_DOUBLE_EQ(parse_real("2/3pi"), 2 * kPi / 3);
    EXPECT_DOUBLE_EQ(parse_real("2pi/15"), kTwoPi / 15);
    for (const char* bad : {"", "abc", "1/0", "pi/", "1/2pi/3", "3pix", "nan", "1..2"})
        EXPECT_THROW(parse_real(bad), std::invalid_argument) << bad;
}

TEST(SweepConfig, ParseAndValidate) {
    const auto cfg = parse_sweep_config(
        "# tongue scan\n"
        "k_min = 0\n k_max=0.5\nomega_min=0\nomega_max = 2pi\n"
        "nk=10\nnomega=20  # comment\nmax_period=3\ngrid_n=3\ntol=1e-11\n"
        "periods = 2:1, 1/3\n");
    EXPECT_DOUBLE_EQ(cfg.omega_max, kTwoPi);
    EXPECT_EQ(cfg.nomega, 20);
    EXPECT_DOUBLE_EQ(cfg.tol, 1e-11);
    ASSERT_EQ(cfg.periods.size(), 2u);
    EXPECT_EQ(cfg.periods[0], (TargetClass{2, 1}));
    EXPECT_EQ(cfg.periods[1], (TargetClass{3, 1}));
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_THROW(parse_sweep_config("nk = 3x\n"), std::invalid_argument);
    EXPECT_THROW(parse_sweep_config("colour = red\n"), std::invalid_argument);
    EXPECT_THROW(parse_sweep_config("nk\n"), std::invalid_argument);
}

TEST(SweepConfig, Guards) {
    auto bad = [](auto mutate) {
        SweepConfig c;
        mutate(c);
        return c;
    };
    EXPECT_NO_THROW(SweepConfig{}.validate());
    EXPECT_THROW(bad([](SweepConfig& c) { c.k_max = c.k_min; }).validate(), std::domain_error);
    EXPECT_THROW(bad([](SweepConfig& c) { c.omega_min = 7.0; }).validate(), std::domain_error);
    EXPECT_THROW(bad([](SweepConfig& c) { c.nk = 0; }).validate(), std::domain_error);
    EXPECT_THROW(bad([](SweepConfig& c) { c.max_period = 17; }).validate(), std::domain_error);
    EXPECT_THROW(bad([](SweepConfig& c) { c.tol = 0.0; }).validate(), std::domain_error);
    EXPECT_THROW(bad([](SweepConfig& c) { c.periods = {{2, 2}}; }).validate(), std::domain_error);
    EXPECT_THROW(bad([](SweepConfig& c) { c.periods = {{4, 2}}; }).validate(), std::domain_error);
    EXPECT_THROW(run_sweep(bad([](SweepConfig& c) { c.nomega = -1; })), std::domain_error);
}

TEST(SweepConfig, DefaultTargets) {
    SweepConfig c;
    c.max_period = 5;
    const auto t = c.targets();
    EXPECT_EQ(t.size(), 10u);
    EXPECT_EQ(t.front(), (TargetClass{1, 0}));
    EXPECT_EQ(t.back(), (TargetClass{5, 4}));
    EXPECT_DOUBLE_EQ(c.k_at(0), 0.0025);
}

TEST(ProbeCell, Examples) {
    EXPECT_TRUE(probe_cell(MapParams(0.2, 0.1), {1, 0}, 4, 1e-10).found);
    const auto miss = probe_cell(MapParams(0.05, 0.1), {1, 0}, 4, 1e-10);
    EXPECT_FALSE(miss.found);
    EXPECT_FALSE(miss.stability || miss.alpha || miss.residual);

    const auto fig = probe_cell(MapParams(kTwoPi / 15, kPi), {2, 1}, 4, 1e-10);
    ASSERT_TRUE(fig.found);
    EXPECT_EQ(fig.stability, Stability::Elliptic);
    EXPECT_EQ(*fig.alpha, 0.0);
    EXPECT_LE(*fig.residual, 1e-10);
}

TEST(ProbeCell, WrapsAroundOmega) {
    // Near omega = 2 pi the (1, 0) class is realised by the lift w_J = 1.
    const auto r = probe_cell(MapParams(0.2, kTwoPi - 0.1), {1, 0}, 4, 1e-10);
    ASSERT_TRUE(r.found);
    EXPECT_NEAR(*r.alpha, 0.1, 1e-12);
}

TEST(ProbeCell, PruningLosesNothing) {
    // The mean-kick bound is only a shortcut: unpruned grid searches over the
    // relevant lifts find orbits in exactly the same cells.
    for (double k : {0.05, 0.2, 0.45})
        for (double omega = 0.05; omega < kTwoPi; omega += 0.37)
            for (TargetClass t : {TargetClass{1, 0}, TargetClass{2, 1}, TargetClass{3, 2}}) {
                bool brute = false;
                for (std::int64_t n = -1; n <= 1 && !brute; ++n)
                    brute = !orbit_search_grid(MapParams(k, omega), t.p, t.q + n * t.p, 3, {1e-10, 50}).empty();
                ASSERT_EQ(probe_cell(MapParams(k, omega), t, 3, 1e-10).found, brute) << k << " " << omega;
            }
}

TEST(Sweep, FixedPointTongueMatchesAnalyticOracle) {
    SweepConfig c;
    c.k_min = 0.0;
    c.k_max = 1.0;
    c.omega_min = -1.0;
    c.omega_max = 1.0;
    c.nk = 100;
    c.nomega = 100;
    c.periods = {{1, 0}};
    c.grid_n = 3;
    const auto recs = run_sweep(c, 1);
    ASSERT_EQ(recs.size(), 10000u);
    const double diag = std::hypot(0.01, 0.02);
    int boundary = 0;
    for (const auto& r : recs) {
        const bool expected = oracle::fixed_point_exists(r.k, r.omega);
        const double dist = std::abs(r.k - std::abs(r.omega)) / std::sqrt(2.0);
        if (dist <= diag) {
            ++boundary;
            continue;
        }
        ASSERT_EQ(r.found, expected) << r.k << " " << r.omega;
    }
    // Two bands of half-width one cell diagonal around |omega| = k.
    EXPECT_LT(boundary, 800);

    // Monotone in k at fixed omega.
    for (int j = 0; j < c.nomega; ++j) {
        bool seen = false;
        for (int i = 0; i < c.nk; ++i) {
            const auto& r = recs[static_cast<std::size_t>(i * c.nomega + j)];
            ASSERT_EQ(r.omega, c.omega_at(j));
            if (seen) ASSERT_TRUE(r.found) << r.k << " " << r.omega;
            seen = seen || r.found;
        }
    }
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
    SweepConfig c;
    c.k_max = 0.6;
    c.nk = 6;
    c.nomega = 12;
    c.max_period = 3;
    c.grid_n = 3;
    const auto one = format_csv(run_sweep(c, 1));
    const auto three = format_csv(run_sweep(c, 3));
    const auto again = format_csv(run_sweep(c, 1));
    EXPECT_EQ(one, three);
    EXPECT_EQ(one, again);
}

TEST(Sweep, TipsOfLowPeriodTongues) {
    SweepConfig c;
    c.k_max = 0.5;
    c.nk = 25;
    c.nomega = 60;
    c.max_period = 3;
    c.grid_n = 3;
    const auto tips = tip_locations(run_sweep(c, 0));
    ASSERT_EQ(tips.size(), 4u);
    const double cell = kTwoPi / c.nomega;
    for (const auto& t : tips)
        EXPECT_LE(circular_gap(t.omega, kTwoPi * static_cast<double>(t.q) / t.p), cell) << t.q << "/" << t.p;
}

TEST(Sweep, AccelerationChangesSignAcrossTongueCentre) {
    const double k = 0.3;
    for (double d : {0.01, 0.05, 0.1, 0.2}) {
        const auto below = probe_cell(MapParams(k, kPi - d), {2, 1}, 4, 1e-10);
        const auto above = probe_cell(MapParams(k, kPi + d), {2, 1}, 4, 1e-10);
        ASSERT_TRUE(below.found && above.found) << d;
        EXPECT_GT(*below.alpha, 0.0);
        EXPECT_LT(*above.alpha, 0.0);
    }
    EXPECT_EQ(*probe_cell(MapParams(k, kPi), {2, 1}, 4, 1e-10).alpha, 0.0);
}

TEST(TipLocations, TieBreaks) {
    std::vector<TongueRecord> recs(3);
    recs[0] = {0.1, 3.0, 2, 1, true, Stability::Elliptic, kPi - 3.0, 1e-13};
    recs[1] = {0.1, 3.1, 2, 1, true, Stability::Elliptic, kPi - 3.1, 1e-13};
    recs[2] = {0.05, 2.0, 2, 1, false, std::nullopt, std::nullopt, std::nullopt};
    const auto tips = tip_locations(recs);
    ASSERT_EQ(tips.size(), 1u);
    EXPECT_DOUBLE_EQ(tips[0].omega, 3.1);
    EXPECT_TRUE(tip_locations({}).empty());
}

TEST(Csv, Format) {
    EXPECT_EQ(format_csv({}), "k,omega,p,w_J,found,stability,alpha,residual\n");
    const TongueRecord r{0.5, 0.25, 1, 0, true, Stability::Hyperbolic, -0.25, 1e-13};
    EXPECT_EQ(format_csv({r}),
              "k,omega,p,w_J,found,stability,alpha,residual\n"
              "0.5,0.25,1,0,true,hyperbolic,-0.25,1e-13\n");
    const TongueRecord miss{0.1, 0.2, 2, 1, false, std::nullopt, std::nullopt, std::nullopt};
    const auto csv = format_csv({r, miss});
    EXPECT_NE(csv.find("0.10000000000000001,0.20000000000000001,2,1,false,,,\n"), std::string::npos);
    EXPECT_LT(csv.find("false"), csv.find("true"));
}

TEST(Csv, FilesAreByteIdentical) {
    SweepConfig c;
    c.k_max = 0.4;
    c.nk = 4;
    c.nomega = 8;
    c.max_period = 2;
    c.grid_n = 2;
    const auto a = temp_path("a.csv"), b = temp_path("b.csv");
    emit_csv(run_sweep(c, 2), a);
    emit_csv(run_sweep(c, 1), b);
    const auto text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 4 * 8 * 2);
    EXPECT_THROW(emit_csv({}, "/nonexistent-dir/x.csv"), std::runtime_error);
}

TEST(Svg, EmptyAndPopulated) {
    const auto empty = format_svg({});
    EXPECT_NE(empty.find("<svg"), std::string::npos);
    EXPECT_NE(empty.find("id=\"axes\""), std::string::npos);
    EXPECT_EQ(empty.find("<rect x=\"0.000"), std::string::npos);

    std::vector<TongueRecord> recs;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            TongueRecord r{0.1 * i + 0.05, -0.3 + 0.2 * j, 1, 0, false, {}, {}, {}};
            if (r.k >= std::abs(r.omega)) r = {r.k, r.omega, 1, 0, true, Stability::Elliptic, -r.omega, 0.0};
            recs.push_back(r);
        }
    const auto svg = format_svg(recs);
    EXPECT_NE(svg.find("p = 1"), std::string::npos);
    const auto cells_begin = svg.find("<g id=\"cells\"");
    const auto cells_end = svg.find("</g>", cells_begin);
    const std::string cells = svg.substr(cells_begin, cells_end - cells_begin);
    std::size_t n = 0;
    for (auto pos = cells.find("<rect"); pos != std::string::npos; pos = cells.find("<rect", pos + 1)) ++n;
    std::size_t found = 0;
    for (const auto& r : recs) found += r.found;
    EXPECT_EQ(n, found);
    EXPECT_THROW(emit_svg({}, "/nonexistent-dir/x.svg"), std::runtime_error);
}
