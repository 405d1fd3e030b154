#include "doctest.h"

#include "sgb/commands.hpp"
#include "sgb/config.hpp"
#include "sgb/error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sgb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sgb_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Full config file minus the keys in `drop`.
fs::path write_config(const fs::path& dir, const std::vector<std::string>& drop) {
  const fs::path p = dir / "run.ini";
  std::ofstream o(p);
  o << "[lattice]\n";
  const KeyValues d = default_values();
  for (const char* k : {"dimension", "cutoff"}) o << k << " = " << d.at(k) << '\n';
  o << "[model]\n";
  for (const char* k : {"lambda0", "delta", "sigma", "theta"}) {
    if (std::find(drop.begin(), drop.end(), k) == drop.end()) o << k << " = " << d.at(k) << '\n';
  }
  o << "[run]\nt_final = 0.5\nsteps = 50\nsamples = 200\nseed = 3\noutput_dir = " << (dir / "out").string() << '\n';
  return p;
}

}  // namespace

TEST_CASE("missing delta exits 2 and names the key") {
  const fs::path dir = scratch("missing");
  const Run r = cli({"simulate", "--config", write_config(dir, {"delta"}).string()});
  CHECK(r.code == kExitConfigError);
  CHECK(r.err.find("missing parameter: delta") != std::string::npos);
}

TEST_CASE("a required key can come from the command line") {
  const fs::path dir = scratch("override_required");
  const Run r = cli({"simulate", "--config", write_config(dir, {"delta"}).string(), "--delta", "1"});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(dir / "out" / "simulate.jsonl"));
}

TEST_CASE("bismut twice with samples 1000 and seed 7 is byte-identical") {
  const fs::path dir = scratch("bismut");
  std::string first;
  for (const char* run : {"a", "b"}) {
    const fs::path out = dir / run;
    const Run r = cli({"bismut", "--samples", "1000", "--seed", "7", "--output_dir", out.string()});
    REQUIRE(r.code == kExitOk);
    const std::string json = slurp(out / "bismut.jsonl");
    CHECK(!json.empty());
    if (first.empty()) {
      first = json;
    } else {
      CHECK(json == first);
    }
  }
  CHECK(first.find("\"elapsed\":null") != std::string::npos);
}

TEST_CASE("worker count does not change the reports") {
  const fs::path dir = scratch("workers");
  std::vector<std::string> bodies;
  for (const char* w : {"1", "4"}) {
    const fs::path out = dir / w;
    REQUIRE(cli({"coupling", "--samples", "300", "--steps", "40", "--workers", w, "--output_dir", out.string()}).code ==
            kExitOk);
    bodies.push_back(slurp(out / "coupling.jsonl") + slurp(out / "coupling.csv"));
  }
  CHECK(bodies[0] == bodies[1]);
}

TEST_CASE("csv summary has the fixed column order") {
  const fs::path dir = scratch("csv");
  REQUIRE(cli({"simulate", "--samples", "50", "--steps", "20", "--output_dir", dir.string()}).code == kExitOk);
  std::istringstream csv(slurp(dir / "simulate.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "check,variant,d,N,t,samples,seed,lhs,stderr,rhs,pass");
}

TEST_CASE("timing flag fills elapsed") {
  const fs::path dir = scratch("timing");
  REQUIRE(cli({"simulate", "--samples", "20", "--steps", "20", "--timing", "--output_dir", dir.string()}).code ==
          kExitOk);
  CHECK(slurp(dir / "simulate.jsonl").find("\"elapsed\":null") == std::string::npos);
}

TEST_CASE("bad arguments and parameters exit 2") {
  const fs::path dir = scratch("bad");
  CHECK(cli({}).code == kExitConfigError);
  CHECK(cli({"no-such-command"}).code == kExitConfigError);
  CHECK(cli({"simulate", "--bogus", "1"}).code == kExitConfigError);
  CHECK(cli({"simulate", "--steps", "ten", "--output_dir", dir.string()}).code == kExitConfigError);
  const Run sigma = cli({"simulate", "--sigma", "0.1", "--output_dir", dir.string()});
  CHECK(sigma.code == kExitConfigError);
  CHECK(!sigma.err.empty());
  CHECK(cli({"simulate", "--config", (dir / "absent.ini").string()}).code == kExitConfigError);
  CHECK(cli({"bismut", "--functional", "linear mode=1", "--samples", "10", "--output_dir", dir.string()}).code ==
        kExitConfigError);
}

TEST_CASE("a failed check exits 1 and names the check and its report") {
  const fs::path dir = scratch("fail");
  // A central difference of width 4 is far off the derivative of tanh.
  const Run r = cli({"bismut", "--epsilon_fd", "2", "--samples", "4000", "--output_dir", dir.string()});
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.err.find("bismut_vs_fd") != std::string::npos);
  CHECK(r.err.find("bismut.csv") != std::string::npos);
}

TEST_CASE("dump-path writes the trajectory") {
  const fs::path dir = scratch("dump");
  REQUIRE(cli({"simulate", "--samples", "4", "--steps", "10", "--dump-path", "--output_dir", dir.string()}).code ==
          kExitOk);
  CHECK(fs::file_size(dir / "path_0.csv") > 0);
}
