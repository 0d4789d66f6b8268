// End-to-end checks of the command-line tool: exit codes, file outputs,
// and byte-identical reruns.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dms/field_io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(DMS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream os(p);
    os << body;
}

const char* kKerrConfig = R"({
  "grid": {"n": 512, "extent": 40.0},
  "potential": {"terms": [{"c": 1.0, "s": 4.0}], "gamma0": 4.0, "kappa0": 4.0},
  "measure": {"kind": "uniform01", "nodes": 64},
  "dav": 1.0,
  "lambda": 1.0,
  "optimizer": {"max_iters": 2000, "sigma0_init": [1.0, 2.0]}
})";

}  // namespace

TEST_CASE("minimize: converged Kerr run writes result + field, exit 0") {
    TempDir tmp("dms_cli_min");
    write_file(tmp.path / "cfg.json", kKerrConfig);
    const int rc = run("minimize --config " + (tmp.path / "cfg.json").string() + " --out " +
                       tmp.path.string());
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.path / "result.json"));
    CHECK(fs::exists(tmp.path / "out.dmsf"));
    const std::string body = slurp(tmp.path / "result.json");
    CHECK(body.find("\"converged\": true") != std::string::npos);
    const dms::Field f = dms::read_dmsf((tmp.path / "out.dmsf").string());
    CHECK(f.grid.n == 512);
}

TEST_CASE("minimize: byte-identical outputs for identical config and seed") {
    TempDir a("dms_cli_det_a"), b("dms_cli_det_b");
    write_file(a.path / "cfg.json", kKerrConfig);
    write_file(b.path / "cfg.json", kKerrConfig);
    CHECK(run("minimize --seed 3 --threads 1 --config " + (a.path / "cfg.json").string() +
              " --out " + a.path.string()) == 0);
    CHECK(run("minimize --seed 3 --threads 4 --config " + (b.path / "cfg.json").string() +
              " --out " + b.path.string()) == 0);
    CHECK(slurp(a.path / "result.json") == slurp(b.path / "result.json"));
    CHECK(slurp(a.path / "out.dmsf") == slurp(b.path / "out.dmsf"));
}

TEST_CASE("minimize: exhausted iteration budget exits 2") {
    TempDir tmp("dms_cli_noconv");
    write_file(tmp.path / "cfg.json", R"({
      "grid": {"n": 512, "extent": 40.0},
      "potential": {"terms": [{"c": 1.0, "s": 4.0}]},
      "measure": {"kind": "uniform01", "nodes": 32},
      "dav": 1.0, "lambda": 1.0,
      "optimizer": {"max_iters": 3, "sigma0_init": [2.0]}
    })");
    CHECK(run("minimize --config " + (tmp.path / "cfg.json").string() + " --out " +
              tmp.path.string()) == 2);
}

TEST_CASE("minimize: supercritical pure power exits 3") {
    TempDir tmp("dms_cli_unb");
    write_file(tmp.path / "cfg.json", R"({
      "grid": {"n": 256, "extent": 40.0},
      "potential": {"terms": [{"c": 1.0, "s": 12.0}]},
      "measure": {"kind": "uniform01", "nodes": 32},
      "dav": 1.0, "lambda": 1.0
    })");
    CHECK(run("minimize --config " + (tmp.path / "cfg.json").string() + " --out " +
              tmp.path.string()) == 3);
}

TEST_CASE("malformed config exits 1") {
    TempDir tmp("dms_cli_bad");
    write_file(tmp.path / "cfg.json", "{ not json");
    CHECK(run("minimize --config " + (tmp.path / "cfg.json").string()) == 1);
    CHECK(run("minimize --config /nonexistent/cfg.json") == 1);
    write_file(tmp.path / "cfg2.json", R"({"lambda": 1.0})");  // no potential
    CHECK(run("minimize --config " + (tmp.path / "cfg2.json").string()) == 1);
    CHECK(run("bogus-subcommand") == 1);
}

TEST_CASE("density: model profile yields psi = 1 on (0,1)") {
    TempDir tmp("dms_cli_den");
    write_file(tmp.path / "cfg.json", R"({
      "measure": {"kind": "profile", "profile": "model"},
      "density": {"samples": 41}
    })");
    CHECK(run("density --config " + (tmp.path / "cfg.json").string() + " --out " +
              tmp.path.string()) == 0);
    std::ifstream is(tmp.path / "density.csv");
    std::string line;
    std::getline(is, line);
    CHECK(line == "r,psi");
    int rows = 0;
    while (std::getline(is, line)) {
        const auto comma = line.find(',');
        const double r = std::stod(line.substr(0, comma));
        const double psi = std::stod(line.substr(comma + 1));
        CHECK(r > 0.0);
        CHECK(r < 1.0);
        CHECK(psi == doctest::Approx(1.0));
        ++rows;
    }
    CHECK(rows == 41);
}

TEST_CASE("gaussian: table carries the lambda/sigma0 column") {
    TempDir tmp("dms_cli_gau");
    CHECK(run("gaussian --out " + tmp.path.string()) == 0);
    std::ifstream is(tmp.path / "gaussian.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header == "sigma0,r,l2_sq,grad_sq,abs_at_0,l4_norm_4");
    std::string line;
    std::getline(is, line);  // sigma0 = 1, r = 0
    std::stringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ',');
    CHECK(std::stod(tok) == 1.0);
    std::getline(ss, tok, ',');
    std::getline(ss, tok, ',');
    std::getline(ss, tok, ',');
    CHECK(std::stod(tok) == doctest::Approx(1.0));  // lambda / sigma0
}

TEST_CASE("probe: gamma = 8, dav = 0 produces a monotone diverging H column") {
    TempDir tmp("dms_cli_probe");
    write_file(tmp.path / "cfg.json", R"({
      "potential": {"terms": [{"c": 1.0, "s": 8.0}]},
      "measure": {"kind": "uniform01", "nodes": 64},
      "dav": 0.0, "lambda": 1.0,
      "probe": {"sigma0_hi": 1.0, "sigma0_lo": 1e-6, "points": 25}
    })");
    CHECK(run("probe --config " + (tmp.path / "cfg.json").string() + " --out " +
              tmp.path.string()) == 0);
    std::ifstream is(tmp.path / "probe.csv");
    std::string line;
    std::getline(is, line);
    double prev_h = 1e300;
    int rows = 0;
    while (std::getline(is, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double h = std::stod(line.substr(c2 + 1));
        CHECK(h < prev_h);
        prev_h = h;
        ++rows;
    }
    CHECK(rows == 25);
}

TEST_CASE("DMS_QUAD_NODES rejects junk values") {
    TempDir tmp("dms_cli_env");
    write_file(tmp.path / "cfg.json", R"({
      "potential": {"terms": [{"c": 1.0, "s": 8.0}]},
      "dav": 0.0, "lambda": 1.0
    })");
    const std::string cmd = std::string("DMS_QUAD_NODES=1 ") + DMS_CLI_PATH + " probe --config " +
                            (tmp.path / "cfg.json").string() + " --out " + tmp.path.string() +
                            " > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 1);
}

TEST_CASE("verify: quick level passes on a fresh build") {
    CHECK(run("verify --level quick") == 0);
}
