#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cayley/commands.hpp"
#include "cayley/config.hpp"

using namespace cayley;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("cayley_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

fs::path write_config(const TempDir& dir, const json& j, const std::string& name = "config.json") {
    const fs::path p = dir.path() / name;
    std::ofstream(p) << j.dump();
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs the built executable and returns its exit status.
int run_cli(const std::string& args) {
    const std::string cmd = std::string(CAYLEY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json constant_kernel(double c = 2.0) { return {{"type", "constant"}, {"c", c}}; }

json poly_kernel(double c11) { return {{"type", "polynomial_k1"}, {"a", 1.0}, {"terms", {{1, 1, c11}}}}; }

struct Captured {
    int code;
    std::string out;
    std::string err;
};

Captured run(const std::string& cmd, const fs::path& config, const fs::path& out_dir,
             std::optional<std::uint64_t> seed = std::nullopt) {
    std::ostringstream out, err;
    const int code = run_command(cmd, config, CommandContext{out_dir, &out, &err}, seed);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("config parsing") {
    const json j = {{"kernel", poly_kernel(0.1)},
                    {"k", 3},
                    {"grid", {{"points_per_panel", 6}, {"panels", 4}}},
                    {"solver", {{"tol", 1e-10}, {"max_iter", 50}, {"damping", 0.5}, {"init", {{"random", 4}}}}},
                    {"probe", {{"n_starts", 5}, {"seed", 9}}},
                    {"compare", {{"depth", 2}, {"n_mc", 1000}, {"exponent_override", 2.0}}},
                    {"eigen", {{"target_lambda", 3.0}}}};
    const RunConfig cfg = parse_config(j);
    CHECK(cfg.kernel.name() == std::string("polynomial_k1"));
    CHECK(cfg.k == 3);
    CHECK(cfg.grid.size() == 24);
    CHECK(cfg.solver.tol == 1e-10);
    CHECK(cfg.solver.max_iter == 50);
    CHECK(cfg.solver.damping == 0.5);
    CHECK(std::get<InitRandom>(cfg.solver.init).seed == 4);
    CHECK(cfg.probe.n_starts == 5);
    CHECK(cfg.probe.seed == 9);
    CHECK(cfg.compare.depth == 2);
    CHECK(cfg.compare.n_mc == 1000);
    CHECK(*cfg.compare.exponent_override == 2.0);
    CHECK(*cfg.eigen.target_lambda == 3.0);

    const RunConfig d = parse_config(json{{"kernel", constant_kernel()}});
    CHECK(d.k == 2);
    CHECK(d.grid.size() == 96);
    CHECK(d.solver.tol == 1e-12);
    CHECK(d.solver.max_iter == 10000);
    CHECK(d.probe.n_starts == 20);
    CHECK(d.compare.n_mc == 100000);
    CHECK(d.compare.bins == 20);

    CHECK_THROWS_AS(parse_config(json{{"k", 2}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"kernel", {{"type", "bogus"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"kernel", constant_kernel(-1.0)}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"kernel", constant_kernel()}, {"k", 0}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"kernel", constant_kernel()}, {"k", "two"}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"kernel", constant_kernel()}, {"solver", {{"damping", 2.0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"kernel", {{"type", "polynomial_k1"}, {"a", 1.0}, {"terms", {{1, 1}}}}}}),
                    ConfigError);

    RunConfig o = parse_config(json{{"kernel", constant_kernel()}});
    override_seeds(o, 123);
    CHECK(o.probe.seed == 123);
    CHECK(o.sample.seed == 123);
    CHECK(o.compare.seed == 123);
}

TEST_CASE("certify exit codes") {
    TempDir dir;
    CHECK(run("certify", write_config(dir, {{"kernel", constant_kernel()}, {"k", 2}}), dir.path() / "a").code == 0);
    CHECK(run("certify", write_config(dir, {{"kernel", poly_kernel(5.0)}, {"k", 2}}), dir.path() / "b").code == 3);
    CHECK(run("certify", write_config(dir, {{"k", 2}}), dir.path() / "c").code == 2);
    CHECK(run("certify", write_config(dir, {{"kernel", constant_kernel()}, {"k", 1}}), dir.path() / "d").code == 2);

    const auto r = run("certify", write_config(dir, {{"kernel", poly_kernel(0.1)}, {"k", 2}}), dir.path() / "e");
    CHECK(r.code == 0);
    const json report = json::parse(slurp(dir.path() / "e" / "report.json"));
    CHECK(report["certificate"]["pass"] == true);
    CHECK(json::parse(r.out) == report);
}

TEST_CASE("solve writes a report and a solution") {
    TempDir dir;
    const auto cfg = write_config(dir, {{"kernel", poly_kernel(0.1)}, {"k", 2}});
    CHECK(run("solve", cfg, dir.path() / "out").code == 0);
    const json report = json::parse(slurp(dir.path() / "out" / "report.json"));
    CHECK(report["solve"]["converged"] == true);
    CHECK(report["solve"]["residual"].get<double>() <= 1e-12);
    const std::string csv = slurp(dir.path() / "out" / "solution.csv");
    CHECK(csv.rfind("t,f\n0,1\n", 0) == 0);

    const auto bad = write_config(dir, {{"kernel", poly_kernel(5.0)}, {"k", 2}, {"solver", {{"max_iter", 3}}}}, "b.json");
    CHECK(run("solve", bad, dir.path() / "b").code == 4);

    // a given initial guess is read relative to the config file
    const auto given = write_config(
        dir, {{"kernel", poly_kernel(0.1)}, {"k", 2}, {"solver", {{"init", {{"given", "out/solution.csv"}}}}}}, "g.json");
    CHECK(run("solve", given, dir.path() / "g").code == 0);
    const json again = json::parse(slurp(dir.path() / "g" / "report.json"));
    CHECK(again["solve"]["iterations"].get<int>() <= 1);

    const auto k1 = write_config(dir, {{"kernel", poly_kernel(0.3)}, {"k", 1}}, "k1.json");
    CHECK(run("solve", k1, dir.path() / "k1").code == 0);
}

TEST_CASE("eigen") {
    TempDir dir;
    const auto cfg =
        write_config(dir, {{"kernel", constant_kernel(2.0)}, {"k", 2}, {"eigen", {{"target_lambda", 8.0}}}});
    CHECK(run("eigen", cfg, dir.path() / "out").code == 0);
    const json report = json::parse(slurp(dir.path() / "out" / "report.json"));
    CHECK(report["eigenpair"]["lambda"].get<double>() == 8.0);
    CHECK(report["eigen_residual"].get<double>() < 1e-12);
    CHECK(slurp(dir.path() / "out" / "solution.csv").rfind("t,h\n", 0) == 0);

    const auto k1 = write_config(dir, {{"kernel", constant_kernel(2.0)}, {"k", 1}}, "k1.json");
    CHECK(run("eigen", k1, dir.path() / "k1").code == 2);
}

TEST_CASE("probe exit codes") {
    TempDir dir;
    const auto ok = write_config(dir, {{"kernel", poly_kernel(0.1)}, {"k", 2}, {"probe", {{"n_starts", 6}}}});
    CHECK(run("probe", ok, dir.path() / "a").code == 0);
    const json report = json::parse(slurp(dir.path() / "a" / "report.json"));
    CHECK(report["probe"]["unique_within_tol"] == true);
    CHECK(report["probe"]["per_start"].size() == 6);

    const auto one = write_config(dir, {{"kernel", poly_kernel(0.1)}, {"k", 2}, {"probe", {{"n_starts", 1}}}}, "1.json");
    CHECK(run("probe", one, dir.path() / "b").code == 2);

    const auto stuck = write_config(
        dir, {{"kernel", poly_kernel(5.0)}, {"k", 2}, {"solver", {{"max_iter", 2}}}, {"probe", {{"n_starts", 3}}}},
        "s.json");
    CHECK(run("probe", stuck, dir.path() / "c").code == 4);
}

TEST_CASE("sample") {
    TempDir dir;
    const auto cfg = write_config(
        dir, {{"kernel", poly_kernel(0.1)}, {"k", 2}, {"sample", {{"depth", 1}, {"n_samples", 3}, {"seed", 5}}}});
    CHECK(run("sample", cfg, dir.path() / "out").code == 0);
    const std::string csv = slurp(dir.path() / "out" / "samples.csv");
    CHECK(csv.rfind("sample,vertex,spin\n0,0,", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 1 + 3 * 4);
    const json h = json::parse(slurp(dir.path() / "out" / "histogram.json"));
    CHECK(h["edges"].size() == 21);
}

TEST_CASE("compare exit codes") {
    TempDir dir;
    const auto constant =
        write_config(dir, {{"kernel", constant_kernel(1.5)}, {"k", 2}, {"compare", {{"n_mc", 20000}}}}, "c.json");
    CHECK(run("compare", constant, dir.path() / "c").code == 0);

    const auto good = write_config(dir, {{"kernel", poly_kernel(0.1)}, {"k", 2}, {"compare", {{"seed", 1}}}}, "g.json");
    const auto r = run("compare", good, dir.path() / "g");
    CHECK(r.code == 0);
    const json report = json::parse(slurp(dir.path() / "g" / "report.json"));
    CHECK(report["compare"]["comparison"]["sup_abs_z"].get<double>() <= 4.0);

    // negative control: (k+2)/k in place of (k+1)/k
    const auto wrong = write_config(
        dir,
        {{"kernel", poly_kernel(0.1)}, {"k", 2}, {"compare", {{"seed", 1}, {"n_mc", 1000000}, {"exponent_override", 2.0}}}},
        "w.json");
    CHECK(run("compare", wrong, dir.path() / "w").code == 6);

    const auto tiny = write_config(dir, {{"kernel", poly_kernel(0.1)}, {"k", 2}, {"compare", {{"n_mc", 30}}}}, "t.json");
    const auto t = run("compare", tiny, dir.path() / "t");
    CHECK(t.err.find("effective sample size") != std::string::npos);
}

TEST_CASE("reports are reproducible") {
    TempDir dir;
    const auto cfg = write_config(dir, {{"kernel", poly_kernel(0.1)},
                                        {"k", 2},
                                        {"probe", {{"n_starts", 4}, {"seed", 3}}},
                                        {"compare", {{"n_mc", 20000}, {"seed", 3}}}});
    for (const char* cmd : {"solve", "probe", "compare"}) {
        run(cmd, cfg, dir.path() / "a");
        run(cmd, cfg, dir.path() / "b");
        CHECK(slurp(dir.path() / "a" / "report.json") == slurp(dir.path() / "b" / "report.json"));
    }
    run("compare", cfg, dir.path() / "s1", 99);
    run("compare", cfg, dir.path() / "s2", 99);
    CHECK(slurp(dir.path() / "s1" / "report.json") == slurp(dir.path() / "s2" / "report.json"));
    CHECK(slurp(dir.path() / "s1" / "report.json") != slurp(dir.path() / "a" / "report.json"));
}

TEST_CASE("executable") {
    TempDir dir;
    const auto cfg = write_config(dir, {{"kernel", constant_kernel()}, {"k", 2}});
    const std::string out = " --out " + (dir.path() / "out").string();
    CHECK(run_cli("certify --config " + cfg.string() + out) == 0);
    CHECK(run_cli("certify --config " + cfg.string() + out + " --seed 4") == 0);
    CHECK(fs::exists(dir.path() / "out" / "report.json"));
    CHECK(run_cli("") == 2);
    CHECK(run_cli("bogus --config " + cfg.string()) == 2);
    CHECK(run_cli("certify") == 2);
    CHECK(run_cli("certify --config " + (dir.path() / "missing.json").string()) == 2);
    CHECK(run_cli("--help") == 0);

    const auto fail = write_config(dir, {{"kernel", poly_kernel(5.0)}, {"k", 2}}, "f.json");
    CHECK(run_cli("certify --config " + fail.string() + out) == 3);
    const std::string junk = (dir.path() / "junk.json").string();
    std::ofstream(junk) << "{ not json";
    CHECK(run_cli("solve --config " + junk + out) == 2);
}
