#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "machclock/config.hpp"
#include "machclock/errors.hpp"
#include "machclock/experiments.hpp"
#include "machclock/output.hpp"

using namespace machclock;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string error_of(const std::string& text) {
    try {
        Config::parse(text, "cfg");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("config sections, comments and typed reads") {
    const Config c = Config::parse("experiment = two-level # trailing\n; full comment\n[model]\ngamma = 2.5\nnbar=1\n"
                                   "[initial]\nx3 = -0.5\nflag = yes\n");
    CHECK(c.get_string("experiment") == "two-level");
    CHECK(c.get_double("model.gamma") == 2.5);
    CHECK(c.get_int("model.nbar") == 1);
    CHECK(c.get_double("initial.x3", 0.0) == -0.5);
    CHECK(c.get_bool("initial.flag", false));
    CHECK(c.get_double("missing", 7.0) == 7.0);
}

TEST_CASE("config diagnostics name the line and key") {
    CHECK(error_of("a = 1\nb\n").find("cfg:2") != std::string::npos);
    CHECK(error_of("a = 1\na = 2\n").find("duplicate key 'a'") != std::string::npos);
    CHECK(error_of("[s]\nx =\n").find("cfg:2") != std::string::npos);
    CHECK(error_of("bad key = 1\n").find("invalid key") != std::string::npos);
    CHECK(error_of("[open\n").find("cfg:1") != std::string::npos);

    const Config c = Config::parse("n = abc\n", "cfg");
    CHECK_THROWS_AS(c.get_double("n"), Error);
    CHECK_THROWS_AS(c.get_int("n"), Error);
}

TEST_CASE("unused keys are rejected and flags override") {
    Config c = Config::parse("x = 1\ny = 2\n", "cfg");
    c.set("x", "3");
    CHECK(c.get_double("x") == 3.0);
    CHECK_THROWS_AS(c.reject_unused(), Error);
    c.get_double("y");
    CHECK_NOTHROW(c.reject_unused());
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 123456789.123456789}) CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("CSV layout and quoting") {
    const auto dir = std::filesystem::temp_directory_path() / "machclock_test_csv";
    std::filesystem::create_directories(dir);
    write_csv(dir / "a.csv", {{"seed", "3"}}, {{"t", {0.0, 0.5}}, {"a,b", {1.0, 2.0}}});
    CHECK(slurp(dir / "a.csv") == "# seed=3\nt,\"a,b\"\n0,1\n0.5,2\n");
    CHECK_THROWS_AS(write_csv(dir / "b.csv", {}, {{"t", {0.0}}, {"x", {1.0, 2.0}}}), Error);
}

TEST_CASE("experiment runs are reproducible and validated") {
    const auto dir = std::filesystem::temp_directory_path() / "machclock_test_runs";
    std::filesystem::remove_all(dir);
    auto run = [&](const std::string& sub, const std::string& extra) {
        Config c = Config::parse("experiment = swap-clock\nn_traj = 4\nt_final = 1e-4\n" + extra, "cfg");
        c.set("output_dir", (dir / sub).string());
        return run_experiment(c);
    };
    const RunOutcome a = run("a", "workers = 1\n");
    const RunOutcome b = run("b", "workers = 3\n");
    CHECK(slurp(dir / "a" / "series.csv") == slurp(dir / "b" / "series.csv"));
    CHECK(slurp(dir / "a" / "records_z1.csv") == slurp(dir / "b" / "records_z1.csv"));
    CHECK(a.summary_json == b.summary_json);
    CHECK(slurp(dir / "a" / "series.csv").find("# master_seed=1\n") != std::string::npos);

    CHECK_THROWS_AS(run("c", "bogus = 1\n"), Error);
    CHECK_THROWS_AS(run("d", "[model]\ngamma = -1\n"), Error);
    CHECK_THROWS_AS(run("e", "output_dt = 3e-6\ndt = 2e-6\n"), Error);
    Config c;
    c.set("output_dir", (dir / "f").string());
    CHECK_THROWS_AS(run_experiment(c, "no-such-experiment"), Error);
    CHECK(experiment_names().size() == 8);
}
