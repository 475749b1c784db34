#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "twdp");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = twdp::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("twdp_cli_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("convert") {
    CHECK(run({"convert", "--gamma", "0.5"}).out == "delta=0.8\n");
    CHECK(run({"convert", "--delta", "0.8"}).out == "gamma=0.5\n");
    CHECK(run({"convert", "--k-rice", "4", "--gamma", "0.5"}).out == "k=5\n");
    CHECK(run({"convert", "--physical", "v1=1 v2=0 sigma2=0.5"}).out == "k=1 gamma=0 omega=2\n");
    const Run phys = run({"convert", "--params", "k=5 gamma=0.5 omega=1"});
    CHECK(phys.code == 0);
    CHECK(phys.out.find("sigma2=0.08333333333333333") != std::string::npos);
    CHECK(run({"convert"}).code == 1);
    CHECK(run({"convert", "--gamma", "2"}).code == 1);
}

TEST_CASE("moments") {
    const Run r = run({"moments", "--k", "0", "--gamma", "0.5", "--omega", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "quantity,value\nmu2,2\nmu4,8\nmu6,48\nr4,2\nr6,6\n");
}

TEST_CASE("sample then estimate") {
    const std::string path = temp_path("samples.csv");
    CHECK(run({"--seed", "5", "sample", "--k", "0", "--gamma", "0", "--n", "20000", "--out", path}).code == 0);
    const Run est = run({"estimate", "--in", path});
    CHECK(est.code == 0);
    std::istringstream lines(est.out);
    std::string header;
    std::string row;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header == "k_hat,gamma_hat,delta_hat,raw_delta_hat,status");
    CHECK(std::stod(row.substr(0, row.find(','))) < 0.5);
    std::filesystem::remove(path);
    CHECK(run({"estimate", "--in", path}).code == 1);
}

TEST_CASE("seed from environment") {
    setenv("TWDP_SEED", "123", 1);
    const Run a = run({"sample", "--k", "2", "--gamma", "0.5", "--n", "5"});
    unsetenv("TWDP_SEED");
    const Run b = run({"--seed", "123", "sample", "--k", "2", "--gamma", "0.5", "--n", "5"});
    CHECK(a.out == b.out);
    CHECK(a.out.find("seed=123") != std::string::npos);
}

TEST_CASE("seeded sweep is byte-reproducible") {
    const std::vector<std::string> args{"--seed", "7", "sweep", "--k", "2,5", "--gamma", "0.5",
                                        "--n", "1000", "--reps", "10"};
    const Run a = run(args);
    const Run b = run(args);
    std::vector<std::string> parallel = args;
    parallel.insert(parallel.begin(), {"--jobs", "3"});
    const Run c = run(parallel);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.rfind("k,gamma,k_hat_mean", 0) == 0);

    const std::string raw = temp_path("raw.csv");
    std::vector<std::string> dump = args;
    dump.insert(dump.end(), {"--dump-raw", raw});
    CHECK(run(dump).out == a.out);
    CHECK(slurp(raw).rfind("point,realization,k,gamma,k_hat", 0) == 0);
    std::filesystem::remove(raw);
}

TEST_CASE("grid commands") {
    const Run a = run({"asv", "--k", "5", "--gamma", "0.5"});
    CHECK(a.code == 0);
    CHECK(a.out.rfind("k,gamma,asv_k,asv_gamma,asv_delta\n5,0.5,", 0) == 0);
    const Run c = run({"crb", "--k", "5", "--gamma", "0.5", "--known-omega"});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("k,gamma,crb_k,crb_gamma\n", 0) == 0);
    const Run p = run({"perf", "--k", "3,5", "--gamma", "0.3", "--jobs", "2"});
    CHECK(p.code == 0);
    CHECK(std::count(p.out.begin(), p.out.end(), '\n') == 3);
}

TEST_CASE("figure") {
    const Run f = run({"figure", "--which", "fig5", "--k", "5", "--gamma", "0.1,0.5"});
    CHECK(f.code == 0);
    CHECK(f.out.rfind("k,v2_over_v1,err_gamma,err_delta_norm\n5,0.1,", 0) == 0);
    CHECK(run({"figure", "--which", "fig7"}).code == 1);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"--format", "json", "convert", "--gamma", "0.5"}).code == 1);
    CHECK(run({"moments", "--k", "abc", "--gamma", "0.5"}).code == 1);
    CHECK(run({"--help"}).code == 0);
    const Run boundary = run({"asv", "--k", "0", "--gamma", "0.5"});
    CHECK(boundary.code == 2);
    CHECK_FALSE(boundary.err.empty());
}

}
