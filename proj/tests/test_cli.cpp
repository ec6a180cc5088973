#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "qepi/report.hpp"
#include "qepi/rng.hpp"
#include "qepi/state_spec.hpp"
#include "qepi/suites.hpp"

using namespace qepi;
using namespace qepi::test;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qepi-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("rng determinism and stream separation") {
  Rng a(123, 7), b(123, 7), c(123, 8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next_u64();
    all_equal = all_equal && (va == b.next_u64());
    any_diff = any_diff || (va != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);

  Rng parent(5);
  Rng child1 = parent.child(1);
  Rng child2 = parent.child(2);
  CHECK(child1.next_u64() != child2.next_u64());

  Rng u(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const std::int64_t k = u.uniform_int(-3, 3);
    CHECK(k >= -3);
    CHECK(k <= 3);
  }
}

TEST_CASE("state spec parsing") {
  const StateSpec spec = parse_state_spec("thermal(1) * fock(2)*vacuum");
  REQUIRE(spec.terms.size() == 3);
  CHECK(spec.terms[0].name == "thermal");
  CHECK(spec.terms[0].args == std::vector<double>{1.0});
  CHECK(spec.terms[1].name == "fock");
  CHECK(spec.terms[2].name == "vacuum");
  CHECK(canonical_spec(spec) == "thermal(1) * fock(2) * vacuum");

  CHECK_NOTHROW(parse_state_spec("coherent(0.5,-0.25)"));
  CHECK_NOTHROW(parse_state_spec("cat(1.5, 3.14159)"));
  CHECK_NOTHROW(parse_state_spec("random(42, 3)"));

  CHECK_THROWS_AS(parse_state_spec(""), ParseError);
  CHECK_THROWS_AS(parse_state_spec("thermal("), ParseError);
  CHECK_THROWS_AS(parse_state_spec("squeezed(1)"), ParseError);
  CHECK_THROWS_AS(parse_state_spec("thermal(-1)"), ParseError);
  CHECK_THROWS_AS(parse_state_spec("vacuum(1)"), ParseError);
  CHECK_THROWS_AS(parse_state_spec("thermal(1) fock(2)"), ParseError);

  // Errors carry the offending position.
  try {
    parse_state_spec("vacuum * bogus(3)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("state spec realization on both backends") {
  const StateSpec spec = parse_state_spec("thermal(1)");
  const DensityMatrix rho = build_state(spec, 40);
  CHECK(von_neumann_entropy(rho) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-8));

  const auto gauss = build_gaussian(spec);
  REQUIRE(gauss.has_value());
  CHECK(max_abs(Mat(gauss->gamma - 3.0 * Mat::Identity(2, 2))) < 1e-12);

  const auto coh = build_gaussian(parse_state_spec("coherent(0.5,0.25)"));
  REQUIRE(coh.has_value());
  CHECK(coh->d(0) == doctest::Approx(std::sqrt(2.0) * 0.5));
  CHECK(coh->d(1) == doctest::Approx(std::sqrt(2.0) * 0.25));

  CHECK(!build_gaussian(parse_state_spec("fock(2)")).has_value());

  // Tensor specs produce multimode states.
  const DensityMatrix pair = build_state(parse_state_spec("fock(1) * vacuum"),
                                         10);
  CHECK(pair.space->modes() == 2);
  CHECK(std::abs(pair.mat.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("describe_state summaries") {
  const std::string th = describe_state("thermal(1)");
  CHECK(th.find("1.386294") != std::string::npos);  // entropy 2 ln 2
  CHECK(th.find("3") != std::string::npos);         // nu = 3

  const std::string vac = describe_state("vacuum");
  CHECK(vac.find("entropy") != std::string::npos);

  const std::string fock2 = describe_state("fock(2)");
  CHECK(fock2.find("5") != std::string::npos);  // gaussified nu = 5

  // Determinism.
  CHECK(describe_state("cat(1.2)") == describe_state("cat(1.2)"));
  CHECK_THROWS_AS(describe_state("nope"), ParseError);
}

TEST_CASE("format_double is a shortest round-trip rendering") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-17, -0.0, 1e300, 0.3}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("csv and jsonl report serialization") {
  ReportRow row;
  row.suite = "demo";
  row.check = "inequality";
  row.seed = 42;
  row.trial = 3;
  row.margin = 0.25;
  row.tolerance = 1e-6;
  row.passed = true;
  row.inputs = "thermal(1) \"quoted\"";
  row.diagnostics = {{"value", 1.5}};

  std::ostringstream csv;
  write_csv(csv, {{"tool", "qepi"}}, {row});
  const std::string text = csv.str();
  CHECK(text.find("# tool=qepi") != std::string::npos);
  CHECK(text.find("suite,check,seed,trial,margin,tolerance,passed,"
                  "diagnostics") != std::string::npos);
  const bool has_row =
      text.find("demo,inequality,42,3,0.25,") != std::string::npos;
  CHECK(has_row);
  // Inputs live inside the diagnostics JSON: embedded quotes are first
  // JSON-escaped (\") and then doubled per CSV quoting rules.
  CHECK(text.find("\\\"\"quoted\\\"\"") != std::string::npos);
  CHECK(text.find("\"{\"\"inputs\"\":") != std::string::npos);

  std::ostringstream jsonl;
  write_jsonl(jsonl, {{"tool", "qepi"}}, {row});
  const std::string jtext = jsonl.str();
  CHECK(jtext.find("\"header\"") != std::string::npos);
  CHECK(jtext.find("\"value\":1.5") != std::string::npos);
}

TEST_CASE("config parsing and validation") {
  TempDir tmp;
  const fs::path good = tmp.path / "good.cfg";
  {
    std::ofstream out(good);
    out << "# comment\n"
        << "suite=gaussian-epi\n"
        << "seed=99\n"
        << "trials=5\n"
        << "cutoff=12\n"
        << "lambda_grid=0.25,0.75\n"
        << "tol.qepi_prime=1e-5\n";
  }
  const RunConfig cfg = parse_config_file(good.string());
  CHECK(cfg.suite == "gaussian-epi");
  CHECK(cfg.seed == 99);
  CHECK(cfg.trials == 5);
  CHECK(cfg.lambda_grid == std::vector<double>{0.25, 0.75});
  CHECK(cfg.tolerances.at("qepi_prime") == 1e-5);
  CHECK_NOTHROW(validate_config(cfg));

  const fs::path bad = tmp.path / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "suite=all\nwhatever=1\n";
  }
  CHECK_THROWS_AS(parse_config_file(bad.string()), ConfigError);

  RunConfig invalid;
  invalid.lambda_grid = {1.0};
  CHECK_THROWS_AS(validate_config(invalid), ConfigError);
  invalid = RunConfig{};
  invalid.trials = 0;
  CHECK_THROWS_AS(validate_config(invalid), ConfigError);
  invalid = RunConfig{};
  invalid.cutoff = 4;
  CHECK_THROWS_AS(validate_config(invalid), ConfigError);
  invalid = RunConfig{};
  invalid.format = "xml";
  CHECK_THROWS_AS(validate_config(invalid), ConfigError);
  invalid = RunConfig{};
  invalid.suite = "unheard-of";
  CHECK_THROWS_AS(validate_config(invalid), ConfigError);
}

TEST_CASE("run_suite: exit status, report shape, determinism") {
  TempDir tmp;
  RunConfig cfg;
  cfg.suite = "gaussian-epi";
  cfg.seed = 42;
  cfg.trials = 50;
  cfg.out = (tmp.path / "a.csv").string();
  CHECK(run_suite(cfg) == 0);

  const std::string first = slurp(cfg.out);
  CHECK(first.find("splitmix64-counter") != std::string::npos);
  CHECK(first.find("suite,check,seed,trial,margin,tolerance,passed") !=
        std::string::npos);

  cfg.out = (tmp.path / "b.csv").string();
  CHECK(run_suite(cfg) == 0);
  CHECK(slurp(cfg.out) == first);  // byte-identical reports

  // Impossible tolerance override forces a normative failure: exit 1.
  cfg.tolerances["gaussian_qepi_prime"] = -100.0;
  cfg.out = (tmp.path / "c.csv").string();
  CHECK(run_suite(cfg) == 1);

  // conjecture-fuzz rows never affect the exit status.
  RunConfig fuzz;
  fuzz.suite = "conjecture-fuzz";
  fuzz.seed = 1;
  fuzz.trials = 10;
  fuzz.out = (tmp.path / "fuzz.csv").string();
  fuzz.tolerances["epi_general_lambda_power"] = -100.0;
  CHECK(run_suite(fuzz) == 0);
  CHECK(slurp(fuzz.out).find("false") != std::string::npos);
}
