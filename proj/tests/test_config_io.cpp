#include "spdelab/config.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/report_io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

using namespace spdelab;
namespace fs = std::filesystem;

namespace {

const char* kPam = R"(generator:
  type: brownian
  kappa: 1.0
sigma:
  type: linear
  lambda: 1.0
u0:
  eta: 1.0
grid:
  L: 64
  N: 512
  dt: 0.01
  T: 40
  M: 2000
p_list: [2, 4]
seed: 7
)";

std::string error_of(const std::string& text, const std::vector<std::string>& sets = {}) {
    try {
        parse_config(text, "cfg.yaml", sets);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("spdelab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("parses the documented layout") {
    const auto cfg = parse_config(kPam, "cfg.yaml");
    CHECK(cfg.model.sigma.lambda() == 1.0);
    CHECK(cfg.model.u0.eta() == 1.0);
    CHECK(cfg.grid.N == 512);
    CHECK(cfg.grid.dt == 0.01);
    CHECK(cfg.p_list == std::vector<int>{2, 4});
    REQUIRE(cfg.seed);
    CHECK(*cfg.seed == 7);
    CHECK(cfg.output.csv);
    CHECK(cfg.output.json);

    const auto st = parse_config(R"(generator: {type: sum_stable, terms: [{kappa: 1, alpha: 0.5}, {kappa: 2, alpha: 1.5}]}
sigma: {type: clamp, slope: 2, cap: 0.5}
u0: {profile: cosine, eta: 0.5, upper: 1.5}
output: {dir: somewhere, formats: [json]}
)", "inline");
    CHECK(re_psi(st.model.sym, 1.0) == doctest::Approx(3.0));
    CHECK(st.model.sigma(10.0) == 0.5);
    CHECK(st.model.u0.upper == 1.5);
    CHECK_FALSE(st.output.csv);
    CHECK(st.output.dir == "somewhere");
}

TEST_CASE("missing lambda names the field and the table line") {
    const std::string text = "generator: {type: brownian, kappa: 1}\nu0: {eta: 1}\nsigma:\n  type: linear\n";
    const auto msg = error_of(text);
    CHECK(msg.find("sigma.lambda") != std::string::npos);
    CHECK(msg.find("cfg.yaml:") == 0);
    CHECK(msg.find(":4:") != std::string::npos);
}

TEST_CASE("type and range errors") {
    std::string bad = kPam;
    bad.replace(bad.find("dt: 0.01"), 8, "dt: fast");
    const auto msg = error_of(bad);
    CHECK(msg.find("grid.dt") != std::string::npos);
    CHECK(msg.find("expected a number") != std::string::npos);

    CHECK(error_of(std::string(kPam) + "bogus: 1\n").find("bogus: unknown field") != std::string::npos);
    std::string n100 = kPam;
    n100.replace(n100.find("N: 512"), 6, "N: 100");
    CHECK(error_of(n100).find("power of 2") != std::string::npos);
    CHECK(error_of("generator: [unclosed\n").find("cfg.yaml") == 0);
    CHECK_THROWS_AS(load_config("/nonexistent/spdelab.yaml"), ConfigError);
}

TEST_CASE("overrides") {
    const auto cfg = parse_config(kPam, "cfg.yaml", {"sigma.lambda=0.5", "grid.M=10", "p_list=[2, 4, 6]", "simulate.fit_from=5"});
    CHECK(cfg.model.sigma.lambda() == 0.5);
    CHECK(cfg.grid.M == 10);
    CHECK(cfg.p_list.size() == 3);
    REQUIRE(cfg.simulate.fit_from);
    CHECK(*cfg.simulate.fit_from == 5.0);

    CHECK(error_of(kPam, {"sigma.lambda=abc"}) == "cfg.yaml: --set sigma.lambda: expected a number, got 'abc'");
    CHECK_FALSE(error_of(kPam, {"novalue"}).empty());
}

TEST_CASE("numbers and non-finite values in JSON") {
    CHECK(number_to_json(1.5) == Json(1.5));
    CHECK(number_to_json(std::numeric_limits<double>::infinity()) == Json("inf"));
    CHECK(std::isinf(number_from_json(Json("inf"))));
    CHECK(number_from_json(Json("-inf")) < 0);
    CHECK(std::isnan(number_from_json(Json("nan"))));
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.123, -2.5e17}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(0.125) == "0.125");
}

TEST_CASE("moment curve JSON round trip") {
    MomentCurve c;
    c.p = 4;
    c.times = {0.0, 0.5, 1.0};
    c.moments = {1.0, 1.0 / 3.0, 2.75};
    c.std_error = {0.0, 0.01, 0.2};
    c.n_paths = 17;
    c.fitted_gamma = GammaFit{0.12, 0.01, 0.5, 1.0};
    c.tail_fraction = 0.3;
    c.meta = "meta, with \"quotes\"";
    const auto back = moment_curve_from_json(Json::parse(to_json(c).dump()));
    CHECK(back.p == c.p);
    CHECK(back.times == c.times);
    CHECK(back.moments == c.moments);
    CHECK(back.std_error == c.std_error);
    CHECK(back.n_paths == c.n_paths);
    REQUIRE(back.fitted_gamma);
    CHECK(back.fitted_gamma->slope == 0.12);
    CHECK(back.tail_fraction == c.tail_fraction);
    CHECK(back.meta == c.meta);

    c.fitted_gamma.reset();
    c.fit_note = "fit refused";
    const auto refused = moment_curve_from_json(Json::parse(to_json(c).dump()));
    CHECK_FALSE(refused.fitted_gamma);
    CHECK(refused.fit_note == "fit refused");
}

TEST_CASE("bounds report JSON round trip") {
    const ModelSpec m{LevySymbol::sum_stable({{1.0, 0.5}, {1.0, 1.5}}), LinearSigma{0.5}, InitialData::constant(1.0)};
    const auto rep = full_report(m, {2, 4});
    const auto j = to_json(rep);
    CHECK(j.at("schema_version") == kSchemaVersion);
    const auto back = bounds_report_from_json(Json::parse(j.dump()));
    CHECK(back.model == rep.model);
    CHECK(back.upsilon_samples == rep.upsilon_samples);
    CHECK(back.upsilon_sup == rep.upsilon_sup);
    CHECK(back.gamma_p_upper == rep.gamma_p_upper);
    CHECK(back.hermite_zeros == rep.hermite_zeros);
    CHECK(back.gamma2_lower.value == rep.gamma2_lower.value);
    CHECK(back.gamma2_lower.applicable == rep.gamma2_lower.applicable);
    CHECK(back.weakly_intermittent.verdict == rep.weakly_intermittent.verdict);
    CHECK(back.recurrence == rep.recurrence);
    CHECK(back.local_times == rep.local_times);
    CHECK(back.delta_p == rep.delta_p);
    CHECK(back.holder_exponents.has_value() == rep.holder_exponents.has_value());
    CHECK(back.field_errors == rep.field_errors);
    CHECK(to_json(back).dump() == j.dump());

    const ModelSpec rec{LevySymbol::brownian(1.0), LinearSigma{1.0}, InitialData::constant(1.0)};
    const auto r2 = full_report(rec, {2});
    CHECK(to_json(bounds_report_from_json(Json::parse(to_json(r2).dump()))).dump() == to_json(r2).dump());
    CHECK(to_json(r2).at("upsilon_sup") == "inf");
}

TEST_CASE("CSV round trip") {
    MomentCurve a, b;
    a.p = 2;
    b.p = 4;
    a.times = b.times = {0.0, 0.5};
    a.moments = {1.0, 1.1};
    b.moments = {1.0, 1.7};
    a.std_error = {0.0, 0.05};
    b.std_error = {0.0, 0.3};
    a.n_paths = b.n_paths = 10;
    const auto text = moments_csv({a, b});
    CHECK(text.rfind("t,p,moment,stderr,n_paths\n", 0) == 0);
    const auto back = parse_moments_csv(text);
    REQUIRE(back.size() == 2);
    CHECK(back[1].p == 4);
    CHECK(back[1].moments == b.moments);
    CHECK(back[0].std_error == a.std_error);
    CHECK(back[0].n_paths == 10);

    a.meta = "renewal, step=0.02";
    const auto ren = renewal_csv(a);
    CHECK(ren.rfind("t,moment,stderr,meta\n", 0) == 0);
    CHECK(ren.find("\"renewal, step=0.02\"") != std::string::npos);
}

TEST_CASE("atomic writes and snapshots") {
    const auto dir = scratch("io");
    write_atomic(dir / "nested" / "a.txt", "first");
    write_atomic(dir / "nested" / "a.txt", "second");
    std::ifstream in(dir / "nested" / "a.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "second");
    for (const auto& e : fs::directory_iterator(dir / "nested")) CHECK(e.path().filename() == "a.txt");

    GridSpec g;
    g.N = 4;
    g.L = 2.0;
    g.seed = 11;
    Field f{{1.0, -2.0, 0.5, 3.25}, 1.5};
    write_snapshot(dir, "snap", f, g);
    std::ifstream bin(dir / "snap.bin", std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)), {});
    REQUIRE(bytes.size() == 32);
    for (std::size_t i = 0; i < 4; ++i) {
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[8 * i + b];
        double v;
        std::memcpy(&v, &bits, 8);
        CHECK(v == f.values[i]);
    }
    std::ifstream side(dir / "snap.json");
    const auto j = Json::parse(side);
    CHECK(j.at("N") == 4);
    CHECK(j.at("L") == 2.0);
    CHECK(j.at("t") == 1.5);
    CHECK(j.at("seed") == 11);
    fs::remove_all(dir);
}
