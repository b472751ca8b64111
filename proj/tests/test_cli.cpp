#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "oracle.hpp"
#include "tropweight/cli.hpp"
#include "tropweight/json_io.hpp"

using namespace tropweight;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "tropweight");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tropweight_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_parabola_spec(const fs::path& dir) {
  json terms = json::array();
  for (std::int64_t k = 0; k <= 400; ++k)
    terms.push_back({{"slope", k}, {"intercept", static_cast<double>(-k * k)}});
  json j{{"family", "tropical"}, {"terms", std::move(terms)}};
  const fs::path p = dir / "parabola.json";
  std::ofstream(p) << j.dump();
  return p;
}

}  // namespace

TEST_CASE("weight argument parsing") {
  const WeightSpec a = parse_weight_argument("log_power:alpha=2.5");
  CHECK(std::get<LogPowerFamily>(a.family).alpha == 2.5);
  const WeightSpec b = parse_weight_argument("monomial:m=3");
  CHECK(std::get<MonomialFamily>(b.family).m == 3);
  const WeightSpec c = parse_weight_argument("exp_power:beta=0.5");
  CHECK(std::get<ExpPowerFamily>(c.family).beta == 0.5);
  CHECK_THROWS_AS(parse_weight_argument("gamma:x=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_weight_argument("log_power:alpha=two"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_weight_argument("missing_file.json"),
                  std::invalid_argument);
}

TEST_CASE("weight spec JSON round trip") {
  for (const char* arg :
       {"log_power:alpha=2.5", "monomial:m=3", "exp_power:beta=1"}) {
    const WeightSpec spec = parse_weight_argument(arg);
    const WeightSpec back = weight_spec_from_json(weight_spec_to_json(spec));
    CHECK(weight_spec_to_json(back) == weight_spec_to_json(spec));
  }
  std::vector<TropicalTerm> terms{{0, 0.0}, {2, -3.0}};
  WeightSpec spec{TropicalFamily{essential_filter(terms)}};
  const json j = weight_spec_to_json(spec);
  const WeightSpec back = weight_spec_from_json(j);
  CHECK(weight_spec_to_json(back) == j);
}

TEST_CASE("classify exit codes follow the verdict") {
  CHECK(run({"classify", "--weight", "log_power:alpha=2.5"}).code == 0);
  CHECK(run({"classify", "--weight", "log_power:alpha=1.5"}).code == 0);
  CHECK(run({"classify", "--weight", "monomial:m=3"}).code == 0);
  // slow gap growth defeats both decision rules: inconclusive
  CHECK(run({"classify", "--weight", "log_power:alpha=1.75"}).code == 2);

  const CliResult r = run({"classify", "--weight", "log_power:alpha=2.5"});
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "tropical_evidence");
  CHECK(json::parse(run({"classify", "--weight", "monomial:m=3"}).out)["verdict"] ==
        "non_rapid_polynomial");
  CHECK(json::parse(run({"classify", "--weight", "log_power:alpha=1.5"})
                        .out)["verdict"] == "non_tropical_evidence");
}

TEST_CASE("classify accepts a tropical weight from a spec file") {
  const fs::path dir = fresh_dir("classify_file");
  const fs::path spec = write_parabola_spec(dir);
  const CliResult r = run({"classify", "--weight", spec.string()});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["verdict"] == "tropical_evidence");
}

TEST_CASE("invalid input exits 1 with a diagnostic and no files") {
  const fs::path dir = fresh_dir("invalid");
  const fs::path out = dir / "out";
  SUBCASE("h below 4") {
    const CliResult r = run({"build", "--weight", "log_power:alpha=2.5", "--h",
                             "3", "--out", out.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("h must be >= 4") != std::string::npos);
    CHECK_FALSE(fs::exists(out));
  }
  SUBCASE("bad weight parameters") {
    const CliResult r = run({"build", "--weight", "log_power:alpha=0.5",
                             "--out", out.string()});
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(out));
  }
  SUBCASE("bad grid") {
    const CliResult r = run({"classify", "--weight", "log_power:alpha=2.5",
                             "--grid", "5:1:100"});
    CHECK(r.code == 1);
  }
}

TEST_CASE("build writes the construction artifacts and certifies them") {
  const fs::path dir = fresh_dir("build");
  const fs::path spec = write_parabola_spec(dir);
  const fs::path out = dir / "artifacts";
  const CliResult r = run({"build", "--weight", spec.string(), "--kmax", "16",
                           "--out", out.string()});
  CHECK(r.code == 0);
  for (const char* f :
       {"chain.json", "g1.json", "g2.json", "g3.json", "certificate.json"})
    CHECK(fs::exists(out / f));

  const json chain = json::parse(slurp(out / "chain.json"));
  CHECK(chain["h"] == 4.0);
  CHECK(chain["terms"][0]["slope"] == 0);
  CHECK(chain["terms"][1]["slope"] == 3);
  CHECK(chain["terms"][2]["slope"] == 6);

  const json cert = json::parse(slurp(out / "certificate.json"));
  CHECK(cert["passed"] == true);
  CHECK(cert["c_low"].get<double>() >= std::log(0.5) - 4.0 - 1e-9);
  CHECK(cert["c_high"].get<double>() <= std::log(6.0) + 1e-9);
  CHECK(cert["grid"]["seed"] == 12345);
  CHECK(cert["chain_checks"]["separation"]["passed"] == true);
  CHECK(cert["chain_checks"]["chain_bounds"]["passed"] == true);
}

TEST_CASE("build certifies a smooth rapid weight") {
  const fs::path dir = fresh_dir("build_smooth");
  const fs::path out = dir / "artifacts";
  const CliResult r = run({"build", "--weight", "log_power:alpha=2.5",
                           "--kmax", "24", "--out", out.string()});
  CHECK(r.code == 0);
  const json cert = json::parse(slurp(out / "certificate.json"));
  CHECK(cert["passed"] == true);
  CHECK(cert["c_low"].get<double>() >= std::log(0.5) - 4.0 - 1e-9);
  CHECK(cert["c_high"].get<double>() <= std::log(6.0) + 1e-9);
}

TEST_CASE("build output is byte-identical across reruns") {
  const fs::path dir = fresh_dir("determinism");
  const fs::path a = dir / "a";
  const fs::path b = dir / "b";
  for (const auto& out : {a, b}) {
    const CliResult r = run({"build", "--weight", "exp_power:beta=1", "--kmax",
                             "12", "--seed", "4242", "--out", out.string()});
    CHECK(r.code == 0);
  }
  for (const char* f : {"chain.json", "g1.json", "g2.json", "g3.json",
                        "certificate.json", "equivalence.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("export-plotdata emits the four documented columns") {
  SUBCASE("log_power(2): phi column is the square of x") {
    const CliResult r =
        run({"export-plotdata", "--weight", "log_power:alpha=2", "--grid",
             "1:10:1000", "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "x,phi,minorant,chain_envelope");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
      ++rows;
      double x, phi;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &x, &phi) == 2);
      CHECK(phi == doctest::Approx(x * x).epsilon(1e-15));
    }
    CHECK(rows == 1000);
  }
  SUBCASE("tropical weight: phi and minorant columns coincide") {
    const fs::path dir = fresh_dir("plot");
    const fs::path spec = write_parabola_spec(dir);
    const CliResult r = run({"export-plotdata", "--weight", spec.string(),
                             "--grid", "0:40:200", "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
      std::stringstream row(line);
      std::string x, phi, minorant, env;
      std::getline(row, x, ',');
      std::getline(row, phi, ',');
      std::getline(row, minorant, ',');
      std::getline(row, env, ',');
      CHECK(phi == minorant);
    }
  }
  SUBCASE("default grid keeps the chain within [phi - h, phi]") {
    const CliResult r = run({"export-plotdata", "--weight",
                             "log_power:alpha=2.5", "--kmax", "16", "--format",
                             "csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
      double x, phi, minorant, env;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &phi, &minorant,
                          &env) == 4);
      CHECK(env <= phi + 1e-12);
      CHECK(env >= phi - 4.0 - 1e-9);
    }
  }
}
