#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "nft/csv_io.hpp"
#include "nft/discrete_search.hpp"
#include "nft/oracles.hpp"
#include "pulse_args.hpp"

using namespace nft;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nft_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<cplx> read_lambdas(const fs::path& p) {
    std::ifstream in(p);
    std::vector<cplx> out;
    for (const auto& e : read_discrete_csv(in)) out.push_back(e.lambda);
    return out;
}

const std::vector<std::string> kSy27{"--pulse", "sech", "--amp", "2.7", "--t1", "-16", "--t2", "16", "--n", "1024"};

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_CASE("complex literals", "[cli]") {
    CHECK(cli::parse_complex("2") == cplx{2, 0});
    CHECK(cli::parse_complex("2.2j") == cplx{0, 2.2});
    CHECK(cli::parse_complex("j") == cplx{0, 1});
    CHECK(cli::parse_complex("-j") == cplx{0, -1});
    CHECK(cli::parse_complex("1+2j") == cplx{1, 2});
    CHECK(cli::parse_complex("3e-2-4.5j") == cplx{0.03, -4.5});
    CHECK(cli::parse_complex("1+2i") == cplx{1, 2});
    for (const char* bad : {"", "abc", "1+", "2jj", "1+2k"}) {
        INFO(bad);
        CHECK_THROWS_AS(cli::parse_complex(bad), std::invalid_argument);
    }
    const auto t = cli::parse_train("2:-0.5,1+1j:0.5");
    REQUIRE(t.size() == 2);
    CHECK(t[1].amplitude == cplx{1, 1});
    CHECK(t[1].delay == 0.5);
    CHECK_THROWS_AS(cli::parse_train("2"), std::invalid_argument);
}

TEST_CASE("usage errors exit with 2", "[cli]") {
    CHECK(run_cli({}).code == cli::kExitUsage);
    CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run_cli({"gen", "--pulse", "lorentzian"}).code == cli::kExitUsage);
    CHECK(run_cli({"gen", "--amp", "x"}).code == cli::kExitUsage);
    CHECK(run_cli({"gen", "--n", "1"}).code == cli::kExitUsage);
    CHECK(run_cli({"eig", "--matrix", "qr"}).code == cli::kExitUsage);
    CHECK(run_cli({"nft", "--in", "/nonexistent/q.csv"}).code == cli::kExitUsage);
    CHECK(run_cli({"sweep", "--param", "amp", "--from", "1"}).code == cli::kExitUsage);
    CHECK(run_cli({"bench", "--methods", "rk4", "--n", "64,128"}).code == cli::kExitUsage);
    CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("gen writes a signal CSV that round-trips", "[cli]") {
    const auto r = run_cli({"gen", "--pulse", "rect", "--amp", "2", "--t1", "-1", "--t2", "1", "--n", "8"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const Signal s = read_signal_csv(in);
    CHECK(s.size() == 9);
    CHECK(s[4] == cplx{2, 0});
}

TEST_CASE("nft end to end on SY A = 2.7", "[cli]") {
    const fs::path dir = scratch("nft");
    const auto r = run_cli(cat({"nft"}, cat(kSy27, {"--discrete", "--deterministic", "--out", dir.string()})));
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(dir / "spectrum.csv"));
    const auto eigs = read_lambdas(dir / "discrete.csv");
    REQUIRE(eigs.size() == 3);
    for (cplx l : sy_discrete(2.7)) {
        bool hit = false;
        for (cplx e : eigs) hit = hit || std::abs(e - l) < 1e-2;
        CHECK(hit);
    }
    const auto report = nlohmann::ordered_json::parse(slurp(dir / "report.json"));
    std::vector<std::string> keys;
    for (const auto& [k, v] : report.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"command", "config", "residuals", "eigenvalues", "timing_ms", "seed"});
    CHECK(report["command"] == "nft");
    CHECK(report["timing_ms"] == 0.0);
    CHECK(report["eigenvalues"].size() >= 3);
}

TEST_CASE("deterministic runs are byte-identical", "[cli]") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    for (const fs::path& d : {a, b}) {
        REQUIRE(run_cli(cat({"nft"}, cat(kSy27, {"--discrete", "--deterministic", "--seed", "9", "--out", d.string()}))).code == 0);
    }
    for (const char* f : {"spectrum.csv", "discrete.csv", "report.json"}) {
        INFO(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("nft and eig agree", "[cli]") {
    const fs::path dir = scratch("agree");
    REQUIRE(run_cli(cat({"nft"}, cat(kSy27, {"--discrete", "--out", (dir / "nft").string()}))).code == 0);
    const auto e = run_cli(cat({"eig"}, cat(kSy27, {"--out", (dir / "eig.csv").string()})));
    REQUIRE(e.code == 0);
    CHECK(fs::exists(dir / "eig.csv.json"));
    const auto from_search = read_lambdas(dir / "nft" / "discrete.csv");
    const auto from_matrix = read_lambdas(dir / "eig.csv");
    REQUIRE(from_search.size() == from_matrix.size());
    for (cplx m : from_matrix) {
        double best = 1e9;
        for (cplx s : from_search) best = std::min(best, std::abs(s - m));
        CHECK(best < 1e-2);
    }
}

TEST_CASE("eig writes a matrix dump", "[cli]") {
    const fs::path dir = scratch("dump");
    const auto r = run_cli({"eig", "--pulse", "rect", "--amp", "2", "--t1", "-1", "--t2", "1", "--n", "32",
                            "--matrix", "cd", "--dump-matrix", (dir / "m.txt").string(), "--out", (dir / "e.csv").string()});
    REQUIRE(r.code == 0);
    std::ifstream in(dir / "m.txt");
    long long order = 0;
    in >> order;
    CHECK(order == 66);
}

TEST_CASE("bench writes one row per method and n", "[cli]") {
    const auto r = run_cli({"bench", "--pulse", "sech", "--amp", "1", "--window", "30", "--methods", "rk4,layer-peeling",
                            "--n", "128,256,512", "--lambda", "0.3", "--deterministic"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    std::getline(in, line);
    CHECK(line == "method,n,error");
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 6);
}

TEST_CASE("sweep emits the locus", "[cli]") {
    const auto r = run_cli({"sweep", "--pulse", "sech", "--param", "amp", "--from", "0.4", "--to", "1.4", "--steps", "3",
                            "--t1", "-16", "--t2", "16", "--n", "512", "--deterministic"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "param,re_lambda,im_lambda,complete");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    // A = 0.4: none (NaN row); A = 0.9: 0.4j; A = 1.4: 0.9j.
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].find("nan") != std::string::npos);
}

TEST_CASE("trace subcommand closes on the SY spectrum", "[cli]") {
    const auto r = run_cli(cat({"trace"}, kSy27));
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("residuals"));
}

TEST_CASE("propagate round trip", "[cli]") {
    const fs::path dir = scratch("prop");
    const auto r = run_cli({"propagate", "--pulse", "sech", "--amp", "1", "--window", "15", "--n", "512", "--z", "0.5",
                            "--steps", "200", "--out", (dir / "q.csv").string(), "--t0-ps", "10"});
    REQUIRE(r.code == 0);
    const Signal s = read_signal_csv((dir / "q.csv").string());
    CHECK(std::abs(std::abs(s[256]) - 1.0) < 1e-5);
    const auto report = nlohmann::json::parse(slurp(dir / "q.csv.json"));
    CHECK(report["config"].contains("fiber"));
}

TEST_CASE("an exhausted search exits with 1", "[cli]") {
    const auto r = run_cli(cat({"nft"}, cat(kSy27, {"--discrete", "--budget", "1", "--mesh-seeds", "0"})));
    CHECK(r.code == cli::kExitFailure);
    CHECK_FALSE(r.err.empty());
}
