#include "doctest.h"

#include "sectoriga/experiment.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace siga;

namespace {

std::string bin() {
    const char* b = std::getenv("SECTORIGA_BIN");
    return b ? b : "./sectoriga";
}

int run(const std::string& args) {
    const std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
}

}  // namespace

TEST_CASE("angle parsing") {
    CHECK(parse_angle("2pi") == doctest::Approx(2 * kPi).epsilon(1e-15));
    CHECK(parse_angle("pi/2") == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(parse_angle("3pi/2") == doctest::Approx(1.5 * kPi).epsilon(1e-15));
    CHECK(parse_angle("1.25") == 1.25);
    CHECK_THROWS_AS(parse_angle("pie"), ConfigError);
    CHECK_THROWS_AS(parse_angle(""), ConfigError);
}

TEST_CASE("config validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.mu = "1.5";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.schedule = {4, 4, 8};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.k = 2;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.omega = "3pi";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.mesh = "hierarchical";
    c.schedule = {4, 8, 12};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.schedule = {4, 8, 16};
    CHECK_NOTHROW(c.validate());
    c = ExperimentConfig{};
    c.mode = "1;1";
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config text round trip") {
    ExperimentConfig a;
    a.omega = "3pi/2";
    a.p = 3;
    a.k = 1;
    a.schedule = {2, 4, 8, 16};
    a.mu = "0.15";
    a.mesh = "hierarchical";
    a.hier_j1 = 2;
    a.q = 7;
    a.nev = 14;
    a.mode = "2,3";
    a.rate_l2 = 3.5;
    a.rate_tol = 0.2;
    a.output = "out.csv";
    a.dump_matrix = "mats/run";
    const ExperimentConfig b = parse_config_text(a.to_text());
    CHECK(b == a);
    CHECK(b.to_text() == a.to_text());
    CHECK(std::isnan(b.rate_h1));
    const ExperimentConfig d = parse_config_text(ExperimentConfig{}.to_text());
    CHECK(d == ExperimentConfig{});
    CHECK_THROWS_AS(parse_config_text("nonsense_key = 3\n"), ConfigError);
}

TEST_CASE("exit codes") {
    CHECK(run("--help") == 0);
    CHECK(run("exact-spectrum") == 0);
    CHECK(run("") == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("exact-spectrum --n 0") == 2);
    CHECK(run("--mu 1.5 solve") == 2);
    CHECK(run("--omega 7 exact-spectrum") == 2);
    CHECK(run("--schedule 8,4 convergence") == 2);
    CHECK(run("--mode spectrum convergence") == 2);
    CHECK(run("--config /nonexistent/file.cfg exact-spectrum") == 2);
    CHECK(run("--output /nonexistent/dir/x.csv exact-spectrum") == 2);
    // rate target far from anything attainable
    CHECK(run("--mode 2,1 --mu 1 --schedule 2,4,8 --rate_h1 9 convergence") == 4);
    CHECK(run("--mode 2,1 --mu 1 --schedule 2,4,8 convergence") == 0);
}

TEST_CASE("exact-spectrum CSV") {
    const std::string out = "test_cli_exact.csv";
    REQUIRE(run("exact-spectrum --n 22 --output " + out) == 0);
    const std::string text = slurp(out);
    const auto lines = data_lines(text);
    REQUIRE(lines.size() == 23u);
    CHECK(lines[0] == "index,value,nu,k,m,lambda,regularity,s_star");
    const auto r2 = split(lines[2]);
    CHECK(r2[0] == "2");
    CHECK(std::stod(r2[1]) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(r2[2] == "0.5");
    CHECK(r2[6] == "H^1");
    const auto r22 = split(lines[22]);
    CHECK(std::abs(std::stod(r22[1]) - 9.94) < 0.005);
    CHECK(r22[6] == "smooth");
    // the header carries the resolved configuration
    CHECK(text.find("# omega = ") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("runs are byte-for-byte reproducible") {
    // same config, output path included
    const std::string a = "test_cli_a.csv";
    REQUIRE(run("--p 3 --mu 0.3 --nev 8 solve --J1 6 --output " + a) == 0);
    const std::string ta = slurp(a);
    REQUIRE(run("--p 3 --mu 0.3 --nev 8 solve --J1 6 --output " + a) == 0);
    const std::string tb = slurp(a);
    CHECK(!ta.empty());
    CHECK(ta == tb);
    const auto lines = data_lines(ta);
    REQUIRE(lines.size() == 9u);
    CHECK(lines[0] == "index,lambda_h,lambda,rel_err,residual,nu,k,m");
    std::remove(a.c_str());
}

TEST_CASE("config file with flag overrides") {
    const std::string cfg = "test_cli.cfg", out = "test_cli_cfg.csv";
    {
        std::ofstream os(cfg);
        os << "omega = \"pi/2\"\np = 2\nnev = 4\n";
    }
    REQUIRE(run("--config " + cfg + " --nev 3 solve --J1 4 --output " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("nev = 3") != std::string::npos);
    CHECK(data_lines(text).size() == 4u);
    // omega = pi/2: the smallest eigenvalue is j_{0,1}^2
    const auto r1 = split(data_lines(text)[1]);
    CHECK(std::stod(r1[2]) == doctest::Approx(2.404825557695773 * 2.404825557695773).epsilon(1e-12));
    std::remove(cfg.c_str());
    std::remove(out.c_str());
}

TEST_CASE("suggest-mu and dump-geometry") {
    const std::string out = "test_cli_mu.csv";
    REQUIRE(run("--p 2 suggest-mu --output " + out) == 0);
    const auto l = data_lines(slurp(out));
    REQUIRE(l.size() == 2u);
    CHECK(std::stod(split(l[1])[3]) == doctest::Approx(0.225));
    REQUIRE(run("dump-geometry --output " + out) == 0);
    const auto g = data_lines(slurp(out));
    CHECK(g[0] == "i1,i2,x,y,w,wx,wy");
    CHECK(g.size() == 19u);
    std::remove(out.c_str());
}
