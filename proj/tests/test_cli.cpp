#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hcme/cli.hpp"

using namespace hcme;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_args(std::vector<std::string> args) {
    std::vector<const char*> argv{"hcme"};
    for (auto& a : args) argv.push_back(a.c_str());
    return run_cli(int(argv.size()), argv.data());
}

int run_binary(const std::string& tail) {
    const char* bin = std::getenv("HCME_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string(bin) + " " + tail + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

struct TempDir {
    fs::path path;
    TempDir(const char* name) : path(fs::path("cli_tmp") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
};

} // namespace

TEST_CASE("complex parsing and formatting round trip") {
    for (const char* txt : {"1.5", "-2", "0.9i", "-0.25i", "1+0.5i", "-1.25e-3-0.5i"}) {
        Complex z = parse_complex(txt);
        Complex back = parse_complex(format_complex(z));
        CHECK(std::abs(z - back) < 1e-15);
    }
    CHECK_THROWS_AS(parse_complex("abc"), config_error);
    CHECK_THROWS_AS(parse_complex("1+2"), config_error);
}

TEST_CASE("config files parse with comments and later-wins overrides") {
    TempDir dir("config");
    fs::path cfg_path = dir.path / "run.cfg";
    {
        std::ofstream out(cfg_path);
        out << "# comment\n\n  s = 0.9i \nt=0.0,0.7\ntol=1e-10\n";
    }
    std::string cfg_str = cfg_path.string();
    const char* argv[] = {"hcme", "spherical", "--config", cfg_str.c_str(), "tol=2e-10"};
    RunConfig cfg = parse_command_line(5, argv);
    CHECK(cfg.command == "spherical");
    CHECK(cfg.get_string("s", "") == "0.9i");
    CHECK(cfg.get_real("tol", 0) == 2e-10);
    CHECK(cfg.get_real_list("t", "").size() == 2);
}

TEST_CASE("spherical command: trivial rows and oracle agreement") {
    TempDir dir("spherical");
    fs::path out = dir.path / "table.csv";
    int rc = run_args({"spherical", "s=0.9i", "t=0.0,0.7", "out=" + out.string()});
    CHECK(rc == 0);
    std::string text = slurp(out);
    CHECK(text.find("s,t,psi_quadrature,psi_oracle,abs_delta") == 0);
    CHECK(text.find("# result = PASS") != std::string::npos);
    // t = 0 row: quadrature exactly 1
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line); // header
    std::getline(lines, line);
    CHECK(line.find("1.0000000000000000e+00+0.0000000000000000e+00i") != std::string::npos);
}

TEST_CASE("spherical command: empty t list emits only the header") {
    TempDir dir("empty");
    fs::path out = dir.path / "table.csv";
    int rc = run_args({"spherical", "s=0.9i", "t=", "out=" + out.string()});
    CHECK(rc == 0);
    std::string text = slurp(out);
    CHECK(text.find("s,t,psi_quadrature") == 0);
    CHECK(text.find("# rows = 0") != std::string::npos);
}

TEST_CASE("unknown keys are rejected with the config exit code") {
    CHECK(run_binary("spherical s=0.9i t=0.5 bogus_key=1") == 1);
    CHECK(run_binary("definitely-not-a-command") == 1);
}

TEST_CASE("tolerance breaches exit with code 2") {
    TempDir dir("tol");
    fs::path out = dir.path / "t.csv";
    int rc = run_args({"spherical", "s=0.9i", "t=0.7", "tol=1e-30", "out=" + out.string()});
    CHECK(rc == 2);
}

TEST_CASE("fit with an even dictionary against an odd target exits rank-deficient") {
    CHECK(run_binary("fit s0=0.3+0.9i m=1 n=1 parity=odd ell=0 n_fit=40 n_holdout=20") == 4);
}

TEST_CASE("limit command passes at a generic center") {
    TempDir dir("limit");
    fs::path out = dir.path / "limit.csv";
    int rc = run_args({"limit", "s0=0.35+0.8i", "pairs=0,2", "n_g=2", "out=" + out.string()});
    CHECK(rc == 0);
    std::string text = slurp(out);
    CHECK(text.find("# result = PASS") != std::string::npos);
}

TEST_CASE("verify-a outputs are byte-identical across repeated runs") {
    TempDir dir("determinism");
    fs::path out1 = dir.path / "a.csv", out2 = dir.path / "b.csv";
    std::vector<std::string> base{"verify-a", "n_s=2", "mn_max=2", "n_g=2", "seed=7",
                                  "out=" + out1.string()};
    CHECK(run_args(base) == 0);
    base.back() = "out=" + out2.string();
    CHECK(run_args(base) == 0);
    CHECK(slurp(out1) == slurp(out2));

    // and through the binary with a thread pool
    fs::path out3 = dir.path / "c.csv", out4 = dir.path / "d.csv";
    CHECK(run_binary("verify-a n_s=2 mn_max=2 n_g=2 seed=7 threads=4 out=" + out3.string()) == 0);
    CHECK(run_binary("verify-a n_s=2 mn_max=2 n_g=2 seed=7 threads=2 out=" + out4.string()) == 0);
    CHECK(slurp(out3) == slurp(out1));
    CHECK(slurp(out4) == slurp(out1));
}

TEST_CASE("fit certificates are deterministic and carry the schema") {
    TempDir dir("cert");
    fs::path out1 = dir.path / "c1.txt", out2 = dir.path / "c2.txt";
    std::vector<std::string> args{"fit",  "s0=0.3+0.9i", "m=1", "n=1", "n_fit=60",
                                  "n_holdout=30", "seed=11", "out=" + out1.string()};
    CHECK(run_args(args) == 0);
    args.back() = "out=" + out2.string();
    CHECK(run_args(args) == 0);
    std::string text = slurp(out1);
    CHECK(text == slurp(out2));
    CHECK(text.rfind("hcme-certificate v1", 0) == 0);
    for (const char* section : {"[target]", "[dictionary]", "[fit]", "[terms]",
                                "[samples.fit]", "[samples.holdout]", "[result]"})
        CHECK(text.find(section) != std::string::npos);
    CHECK(text.find("result = PASS") != std::string::npos);
}

TEST_CASE("HCME_THREADS overrides the pool size without changing bytes") {
    TempDir dir("env_threads");
    fs::path out1 = dir.path / "a.csv", out2 = dir.path / "b.csv";
    CHECK(run_args({"verify-a", "n_s=1", "mn_max=2", "n_g=2", "seed=9", "out=" + out1.string()}) ==
          0);
    setenv("HCME_THREADS", "3", 1);
    CHECK(run_args({"verify-a", "n_s=1", "mn_max=2", "n_g=2", "seed=9", "out=" + out2.string()}) ==
          0);
    unsetenv("HCME_THREADS");
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("fit and holdout sample sets are disjoint") {
    DecompositionCertificate cert =
        fit_decomposition({0.3, 0.9}, Parity::odd, 1, 1, DictionarySpec{}, 40, 20, 31337);
    for (auto& gf : cert.fit_samples)
        for (auto& gh : cert.holdout_samples) CHECK(max_abs_diff(gf.mat(), gh.mat()) > 1e-6);
}

TEST_CASE("selftest passes") { CHECK(run_args({"selftest"}) == 0); }
