#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hyperradon/config.hpp"
#include "hyperradon/report.hpp"

using namespace hyperradon;

TEST(Config, DefaultsResolve)
{
    const RunConfig c = resolve(ConfigMap{});
    EXPECT_EQ(c.space, SpaceParams(FieldKind::real, 0, 4));
    EXPECT_EQ(c.probe.name, "gaussian");
    EXPECT_EQ(c.grid.h, 0.05);
    EXPECT_EQ(c.quad.target_rel_tol, 1e-12);
    EXPECT_EQ(c.direct.nodes_per_dim, 4);
    EXPECT_GE(c.quad.threads, 1);
    EXPECT_FALSE(c.verify.decay_order.has_value());
    EXPECT_EQ(c.sweep_spaces.size(), 5u);
    ASSERT_TRUE(c.operator_d().has_value());
    EXPECT_EQ(c.operator_d()->image_poly, build_D(c.space).image_poly);
}

TEST(Config, IniWithComments)
{
    ConfigMap m;
    m.merge_ini_text("; leading comment\n"
                     "[space]\n"
                     "field = C   ; complex\n"
                     "q = 2 # two\n"
                     "[grid]\n"
                     "operator = 2,1\n"
                     "[sweep]\n"
                     "spaces = R,0,2; C,0,2\n");
    EXPECT_EQ(m.get("space.field"), "C");
    EXPECT_EQ(m.get("space.q"), "2");
    // ';' without a preceding space is data, not a comment.
    EXPECT_EQ(m.get("sweep.spaces"), "R,0,2; C,0,2");
    const RunConfig c = resolve(m);
    EXPECT_EQ(c.space, SpaceParams(FieldKind::complex, 0, 2));
    EXPECT_EQ(c.operator_d()->lambdas, (std::vector<double>{2, 1}));
    ASSERT_EQ(c.sweep_spaces.size(), 2u);
    EXPECT_EQ(c.sweep_spaces[1], SpaceParams(FieldKind::complex, 0, 2));
}

TEST(Config, Precedence)
{
    ConfigMap m;
    m.merge_ini_text("[grid]\nh = 0.1\ns_max = 5\n");
    m.merge_ini_text("[grid]\nh = 0.2\n");
    m.set("grid.s_min", "-1");
    const RunConfig c = resolve(m);
    EXPECT_EQ(c.grid.h, 0.2);
    EXPECT_EQ(c.grid.s_max, 5.0);
    EXPECT_EQ(c.grid.s_min, -1.0);
}

TEST(Config, Rejections)
{
    ConfigMap m;
    EXPECT_THROW(m.set("grid.nope", "1"), Error);
    EXPECT_THROW(m.merge_ini_text("[space]\ncolour = red\n"), Error);
    EXPECT_THROW(m.merge_ini_text("top = 1\n"), Error);
    auto bad = [](const std::string& key, const std::string& value) {
        ConfigMap x;
        x.set(key, value);
        try {
            resolve(x);
        } catch (const Error& e) {
            return e.code() == errc::invalid_argument;
        }
        return false;
    };
    EXPECT_TRUE(bad("space.field", "O"));
    EXPECT_TRUE(bad("space.p", "1.5"));
    EXPECT_TRUE(bad("grid.h", "-1"));
    EXPECT_TRUE(bad("grid.operator", "1,-2"));
    EXPECT_TRUE(bad("grid.method", "magic"));
    EXPECT_TRUE(bad("quadrature.doubling_rounds", "0"));
    EXPECT_TRUE(bad("verify.suite", "everything"));
    EXPECT_TRUE(bad("sweep.suites", "support,bogus"));
    EXPECT_TRUE(bad("output.gnuplot", "maybe"));
    ConfigMap cplx;
    cplx.set("space.field", "C");
    cplx.set("space.variant", "nonprojective");
    EXPECT_THROW(resolve(cplx), Error); // nonprojective needs REAL
    ConfigMap ok;
    ok.set("space.variant", "nonprojective");
    ok.set("space.q", "6");
    EXPECT_NO_THROW(resolve(ok));
}

TEST(Config, ParseSpace)
{
    EXPECT_EQ(parse_space(" R, 0 ,6, nonprojective "), SpaceParams(FieldKind::real, 0, 6, Variant::real_nonprojective));
    EXPECT_EQ(parse_space("H,1,2"), SpaceParams(FieldKind::quaternion, 1, 2));
    EXPECT_THROW(parse_space("R,0"), Error);
    EXPECT_THROW(parse_space("R,a,2"), Error);
}

TEST(Config, OperatorNone)
{
    ConfigMap m;
    m.set("grid.operator", "none");
    EXPECT_FALSE(resolve(m).operator_d().has_value());
    m.set("grid.operator", "auto");
    m.set("space.q", "1");
    EXPECT_FALSE(resolve(m).operator_d().has_value());
}

TEST(Report, ShortestRoundTrip)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::exp(u(rng)) * (i % 2 ? 1 : -1);
        EXPECT_EQ(std::stod(shortest(x)), x);
    }
    EXPECT_EQ(shortest(0.1), "0.1");
    EXPECT_EQ(shortest(-2.0), "-2");
    EXPECT_EQ(shortest(std::nan("")), "nan");
}

TEST(Report, GridCsv)
{
    TransformGrid g;
    g.s = {0.0, 0.5};
    g.rf = {1.0, 0.25};
    g.af = {1.0, 0.3};
    g.point_err = {1e-16, 0.0};
    g.adf = {std::nullopt, 2.0};
    EXPECT_EQ(grid_csv(g), "s,Rf,Af,ADf,err\n0,1,1,,1e-16\n0.5,0.25,0.3,2,0\n");
    EXPECT_EQ(grid_csv(g, true).substr(0, 2), "# ");
}

TEST(Report, JsonSchema)
{
    ConfigMap m;
    m.set("probe.name", "bump");
    VerificationReport r{"support", SpaceParams(FieldKind::real, 1, 1), "bump", {}};
    r.checks.push_back({"a", 0.5, 1.0, true, 1e-12});
    r.checks.push_back({"b", std::numeric_limits<double>::infinity(), 1.0, false, 0.0});
    const auto j = report_json(r, m);
    EXPECT_EQ(j["suite"], "support");
    EXPECT_EQ(j["space"], SpaceParams(FieldKind::real, 1, 1).label());
    EXPECT_EQ(j["config"]["probe"]["name"], "bump");
    EXPECT_EQ(j["config"]["grid"]["h"], "0.05");
    ASSERT_EQ(j["checks"].size(), 2u);
    EXPECT_EQ(j["checks"][0]["measured"], 0.5);
    EXPECT_TRUE(j["checks"][1]["measured"].is_null());
    EXPECT_EQ(j["pass"], false);
    EXPECT_EQ(j["version"], version);
    const auto back = nlohmann::json::parse(j.dump());
    EXPECT_EQ(back["checks"][0]["name"], "a");
}

TEST(Report, AtomicWrite)
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("hyperradon_test_" + std::to_string(::getpid()));
    const fs::path p = dir / "sub" / "out.csv";
    write_atomic(p, "first\n");
    write_atomic(p, "second\n");
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "second\n");
    EXPECT_FALSE(fs::exists(fs::path(p.string() + ".tmp")));
    fs::remove_all(dir);
}
