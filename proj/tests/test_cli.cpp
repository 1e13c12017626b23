#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "oracles.hpp"
#include "qfc/channel_json.hpp"
#include "qfc/channels.hpp"
#include "qfc/cli.hpp"
#include "qfc/error.hpp"

using namespace qfc;
using qfc::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> result;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t comma = line.find(',', begin);
    result.push_back(line.substr(begin, comma == std::string::npos ? comma : comma - begin));
    if (comma == std::string::npos) return result;
    begin = comma + 1;
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qfc_test_cli_" + name);
}

}  // namespace

TEST_SUITE("helpers") {
  TEST_CASE("format_number is shortest round trip") {
    CHECK(cli::format_number(0.0) == "0");
    CHECK(cli::format_number(0.25) == "0.25");
    CHECK(cli::format_number(1.0) == "1");
    CHECK(std::stod(cli::format_number(0.1 + 0.2)) == 0.1 + 0.2);
  }

  TEST_CASE("parse_param_range") {
    auto g = cli::parse_param_range("0:1:0.1");
    REQUIRE(g.size() == 11);
    CHECK(g[3] == 0.3);
    CHECK(g.back() == 1.0);
    CHECK(cli::parse_param_range("0.5:0.5:0.1").size() == 1);
    CHECK(cli::parse_param_range("0:1:0.3").size() == 4);
    CHECK_THROWS_AS(cli::parse_param_range("1:0:0.1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_param_range("0:1:0"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_param_range("0:1:-1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_param_range("0:1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_param_range("a:1:0.1"), InvalidArgument);
  }
}

TEST_SUITE("capacity command") {
  TEST_CASE("half erasure") {
    auto r = run({"capacity", "--channel", "erasure", "--param", "0.5"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["C_E"].get<double>() - 1.0) <= 1e-6);
    CHECK(std::abs(j["Q_E"].get<double>() - 0.5) <= 1e-6);
    CHECK(j["param"].get<double>() == 0.5);
    CHECK(j["converged"].get<bool>());
    for (const char* key : {"channel", "coherent_info_max", "iterations", "stationarity_gap", "multistart_spread"}) {
      CHECK(j.contains(key));
    }
  }

  TEST_CASE("identity qubit") {
    auto r = run({"capacity", "--channel", "identity", "--dim", "2"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(nlohmann::json::parse(r.out)["C_E"].get<double>() - 2.0) <= 1e-6);
  }

  TEST_CASE("csv output") {
    auto r = run({"capacity", "--channel", "erasure", "--param", "0.25", "--format", "csv"});
    REQUIRE(r.code == 0);
    auto l = lines(r.out);
    REQUIRE(l.size() == 2);
    CHECK(fields(l[0])[1] == "C_E");
    CHECK(std::abs(std::stod(fields(l[1])[1]) - 1.5) <= 1e-6);
  }

  TEST_CASE("channel file with dephasing") {
    const double p = 0.2;
    const auto path = temp_path("dephasing.json");
    {
      std::ofstream f(path);
      f << channel_to_json(dephasing(p)).dump();
    }
    auto r = run({"capacity", "--channel-file", path.string()});
    std::filesystem::remove(path);
    REQUIRE(r.code == 0);
    const double c_e = nlohmann::json::parse(r.out)["C_E"].get<double>();
    CHECK(c_e >= 1.0);
    CHECK(c_e <= 2.0);
    CHECK(std::abs(c_e - (2.0 - oracle::h2(p))) <= 1e-6);
    double scan = 0.0;
    for (int k = 1; k < 400; ++k) {
      const double q = k / 400.0;
      scan = std::max(scan, 2.0 * oracle::h2(q) - oracle::h2(p));
    }
    CHECK(c_e >= scan - 1e-9);
  }

  TEST_CASE("output file matches stdout") {
    const auto path = temp_path("capacity.json");
    auto a = run({"capacity", "--channel", "depolarizing", "--param", "0.6"});
    auto b = run({"capacity", "--channel", "depolarizing", "--param", "0.6", "--output", path.string()});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(b.out.empty());
    CHECK(read_file(path) == a.out);
    std::filesystem::remove(path);
  }

  TEST_CASE("invalid input exits 2") {
    CHECK(run({"capacity", "--channel", "nonsense", "--param", "0.1"}).code == 2);
    CHECK(run({"capacity", "--channel", "erasure"}).code == 2);
    CHECK(run({"capacity", "--channel", "erasure", "--param", "1.5"}).code == 2);
    CHECK(run({"capacity"}).code == 2);
    CHECK(run({"capacity", "--channel-file", "/nonexistent/channel.json"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
  }

  TEST_CASE("channel file rejects non trace preserving maps") {
    const auto path = temp_path("bad.json");
    {
      std::ofstream f(path);
      f << R"({"name":"bad","d_in":2,"d_out":2,"kraus":[[[[1,0],[0,0]],[[0,0],[0.5,0]]]]})";
    }
    auto r = run({"capacity", "--channel-file", path.string()});
    std::filesystem::remove(path);
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("non-convergence exits 3") {
    auto r = run({"capacity", "--channel", "amplitude-damping", "--param", "0.3", "--max-iterations", "1",
                  "--gap-tolerance", "1e-15"});
    CHECK(r.code == 3);
    CHECK_FALSE(r.err.empty());
  }
}

TEST_SUITE("sweep command") {
  TEST_CASE("header matches the golden file") {
    auto r = run({"sweep", "--channel", "erasure", "--param-range", "0:1:0.5"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out)[0] == lines(read_file(QFC_GOLDEN_DIR "/sweep_header.csv"))[0]);
  }

  TEST_CASE("erasure rows") {
    auto r = run({"sweep", "--channel", "erasure", "--param-range", "0:1:0.25"});
    REQUIRE(r.code == 0);
    auto l = lines(r.out);
    REQUIRE(l.size() == 6);
    for (std::size_t i = 1; i < l.size(); ++i) {
      auto f = fields(l[i]);
      REQUIRE(f.size() == 6);
      const double eps = std::stod(f[0]);
      CHECK(eps == doctest::Approx(0.25 * static_cast<double>(i - 1)));
      CHECK(std::abs(std::stod(f[1]) - 2.0 * (1.0 - eps)) <= 1e-6);
      CHECK(std::abs(std::stod(f[2]) - (1.0 - eps)) <= 1e-6);
      CHECK(std::abs(std::stod(f[3]) - std::max(1.0 - 2.0 * eps, 0.0)) <= 1e-4);
      CHECK(std::abs(std::stod(f[4]) - (1.0 - eps) * (1.0 - eps)) <= 1e-12);
      CHECK(f[5] == "true");
    }
  }

  TEST_CASE("depolarizing endpoints and blank feedback column") {
    auto r = run({"sweep", "--channel", "depolarizing", "--param-range", "0.25:1:0.75"});
    REQUIRE(r.code == 0);
    auto l = lines(r.out);
    REQUIRE(l.size() == 3);
    CHECK(std::abs(std::stod(fields(l[1])[1])) <= 1e-6);
    CHECK(std::abs(std::stod(fields(l[2])[1]) - 2.0) <= 1e-6);
    CHECK(fields(l[1])[4].empty());
  }

  TEST_CASE("single point range") {
    auto r = run({"sweep", "--channel", "erasure", "--param-range", "0.3:0.3:0.1"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out).size() == 2);
  }

  TEST_CASE("json format") {
    auto r = run({"sweep", "--channel", "erasure", "--param-range", "0:0.5:0.5", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 2);
    CHECK(j[1]["Q_FB_star"].get<double>() == 0.25);
  }

  TEST_CASE("invalid ranges exit 2") {
    CHECK(run({"sweep", "--channel", "erasure", "--param-range", "1:0:0.1"}).code == 2);
    CHECK(run({"sweep", "--channel", "erasure", "--param-range", "0:1:0"}).code == 2);
    CHECK(run({"sweep", "--channel", "erasure", "--param-range", "0:2:0.5"}).code == 2);
    CHECK(run({"sweep", "--channel", "erasure"}).code == 2);
  }
}

TEST_SUITE("verify command") {
  TEST_CASE("entropic suite") {
    auto r = run({"verify", "--suite", "entropic", "--trials", "500", "--seed", "42"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["failures"].empty());
    CHECK(j["trials"].get<int>() == 500);
  }

  TEST_CASE("feedback suite reports the converse slack") {
    auto r = run({"verify", "--suite", "feedback", "--trials", "100", "--seed", "1"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.contains("worst_converse_slack"));
    CHECK(j["worst_converse_slack"].get<double>() <= 1e-7);
  }

  TEST_CASE("zero trials pass vacuously with a warning") {
    auto r = run({"verify", "--suite", "all", "--trials", "0"});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
  }

  TEST_CASE("unknown suite exits 2") {
    CHECK(run({"verify", "--suite", "bogus"}).code == 2);
  }
}

TEST_SUITE("simulate-feedback command") {
  TEST_CASE("two rounds over erasure") {
    auto r = run({"simulate-feedback", "--channel", "erasure", "--param", "0.25", "--rounds", "2", "--seed", "7"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["lemma1_bound_holds"].get<bool>());
    CHECK(j["rounds"].get<int>() == 2);
    CHECK(j["mi_per_round"].size() == 2);
    CHECK(j["conditional_terms"].size() == 2);
    for (const auto& s : j["bound_slack"]) CHECK(s.get<double>() >= -1e-9);
    for (const auto& s : j["monotonicity_slack"]) CHECK(s.get<double>() >= -1e-9);
    double sum = 0.0;
    for (const auto& t : j["conditional_terms"]) sum += t.get<double>();
    CHECK(sum >= j["total_mi"].get<double>() - 1e-9);
  }

  TEST_CASE("zero rounds") {
    auto r = run({"simulate-feedback", "--channel", "erasure", "--param", "0.25", "--rounds", "0"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["mi_per_round"].empty());
    CHECK(j["total_mi"].get<double>() == 0.0);
  }

  TEST_CASE("dimension budget") {
    auto r = run({"simulate-feedback", "--channel", "erasure", "--param", "0.25", "--rounds", "4"});
    CHECK(r.code == 2);
    CHECK(r.err.find("65536") != std::string::npos);
  }
}

TEST_CASE("repeated runs are byte identical") {
  const std::vector<std::vector<std::string>> commands = {
      {"capacity", "--channel", "amplitude-damping", "--param", "0.3", "--seed", "5"},
      {"sweep", "--channel", "dephasing", "--param-range", "0:0.5:0.25"},
      {"verify", "--suite", "capacity", "--trials", "5", "--seed", "9"},
      {"simulate-feedback", "--channel", "depolarizing", "--param", "0.6", "--seed", "3"},
  };
  for (const auto& args : commands) {
    auto a = run(args);
    auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("installed binary agrees with the library entry point") {
  const auto path = temp_path("binary.json");
  const std::string cmd = std::string("\"") + QFC_BINARY +
                          "\" capacity --channel erasure --param 0.25 --output \"" + path.string() + "\"";
  REQUIRE(std::system(cmd.c_str()) == 0);
  auto r = run({"capacity", "--channel", "erasure", "--param", "0.25"});
  CHECK(read_file(path) == r.out);
  std::filesystem::remove(path);

  const std::string bad = std::string("\"") + QFC_BINARY + "\" sweep --channel erasure --param-range 1:0:1 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
