#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "pmult/cli.hpp"
#include "pmult/constructor_small.hpp"
#include "pmult/sequence_io.hpp"
#include "pmult/vendor_json.hpp"

using namespace pmult;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run pmult_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pmult");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("pmult_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(pmult_cli({"construct", "--primes", "2", "--n", "0"}).code == 2);
  CHECK(pmult_cli({"construct", "--primes", "4", "--n", "10"}).code == 2);
  CHECK(pmult_cli({"bogus"}).code == 2);
  CHECK(pmult_cli({"verify", "--in", "/nonexistent/file.csv", "--primes", "2,3"}).code == 2);
  const Run j = pmult_cli({"--error-json", "construct", "--primes", "2", "--n", "0"});
  CHECK(j.code == 2);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["error"] == "UsageError");
  CHECK(parsed["exit_code"] == 2);
}

TEST_CASE("construct then verify") {
  TempDir dir;
  const std::string seq = dir / "seq.csv";
  const Run c = pmult_cli({"construct", "--primes", "2,3", "--n", "60000", "--out", seq});
  REQUIRE(c.code == 0);
  const auto summary = nlohmann::json::parse(c.out);
  CHECK(summary["sup_abs"] == 2);
  CHECK(summary["final_sum"] == 0);

  const Run v = pmult_cli({"verify", "--in", seq, "--primes", "2,3", "--bound", "2", "--period", "6"});
  CHECK(v.code == 0);
  const auto rep = nlohmann::json::parse(v.out);
  for (const auto& check : rep) CHECK(check["status"] == "pass");

  // Round trip: the file holds exactly the in-memory construction.
  const SignSequence mem = construct_p23(60000);
  const SignSequence disk = load_sequence(seq, PrimeSet{2, 3}, SequenceFormat::Csv);
  REQUIRE(disk.horizon() == mem.horizon());
  bool same = true;
  for (u64 n = 1; n <= mem.horizon(); ++n) same = same && disk.at(n) == mem.at(n);
  CHECK(same);

  const Run strict = pmult_cli({"verify", "--in", seq, "--primes", "2,3", "--bound", "1"});
  CHECK(strict.code == 1);
}

TEST_CASE("binary output and general construction") {
  TempDir dir;
  const std::string bin = dir / "g.bin";
  const std::string levels = dir / "levels.csv";
  const Run c = pmult_cli(
      {"construct", "--primes", "2,3,5", "--n", "384000", "--method", "general", "--out", bin, "--dump-levels", levels});
  REQUIRE(c.code == 0);
  CHECK(slurp(levels).rfind("level,b,a,block,free_count,relation_count\n", 0) == 0);
  const Run v = pmult_cli({"verify", "--in", bin, "--primes", "2,3,5", "--construction", "general", "--trials", "10"});
  CHECK(v.code == 0);
}

TEST_CASE("invariant violations exit with 3") {
  const Run r = pmult_cli({"construct", "--primes", "2,3,5", "--n", "3840", "--printed-j-list"});
  CHECK(r.code == 3);
  CHECK(r.err.find("RelationConflict") != std::string::npos);
}

TEST_CASE("search") {
  const Run unsat = pmult_cli({"search", "--primes", "2", "--bound", "0", "--n", "1"});
  CHECK(unsat.code == 1);
  CHECK(nlohmann::json::parse(unsat.out)["status"] == "UNSAT");
  const Run sat = pmult_cli({"search", "--primes", "2,3", "--bound", "2", "--n", "500"});
  CHECK(sat.code == 0);
  CHECK(nlohmann::json::parse(sat.out)["status"] == "SAT");
  const Run scan = pmult_cli({"search", "--primes", "2,3", "--bound", "1", "--n", "30", "--scan"});
  CHECK(nlohmann::json::parse(scan.out)["max_sat"] == 9);
}

TEST_CASE("charlike growth csv") {
  TempDir dir;
  const std::string csv = dir / "growth.csv";
  const Run r = pmult_cli({"charlike", "--modulus", "3", "--override", "3=1", "--x", "100000", "--emit", csv});
  REQUIRE(r.code == 0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,running_max_abs,log_x,ratio,upper_bound");
  double prev = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const double m = std::stod(line.substr(a + 1));
    CHECK(m > prev);
    prev = m;
    ++rows;
  }
  CHECK(rows == 5);
  CHECK(pmult_cli({"charlike", "--x", "100"}).code == 2);
  CHECK(pmult_cli({"charlike", "--modulus", "3", "--override", "5=1"}).code == 2);
  CHECK(pmult_cli({"charlike", "--modulus", "3", "--x", "100"}).code == 0);
}

TEST_CASE("identical runs give identical bytes") {
  TempDir dir;
  const std::vector<std::vector<std::string>> cmds = {
      {"construct", "--primes", "2,3,5", "--n", "20000", "--method", "general", "--free", "random"},
      {"charlike", "--modulus", "3", "--override", "3=1", "--x", "50000", "--mobius", "50"},
      {"search", "--primes", "2,3", "--bound", "2", "--n", "300"},
  };
  for (const auto& cmd : cmds) {
    std::vector<std::string> one = {"--threads", "1"}, eight = {"--threads", "8"};
    one.insert(one.end(), cmd.begin(), cmd.end());
    eight.insert(eight.end(), cmd.begin(), cmd.end());
    const Run a = pmult_cli(one), b = pmult_cli(one), c = pmult_cli(eight);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }
}
