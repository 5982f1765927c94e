#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SVLIFT_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("svlift_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string log;
};

Result run(const std::string& args, const fs::path& log_dir) {
  const fs::path log = log_dir / "stderr.txt";
  const std::string cmd = std::string("\"") + SVLIFT_BINARY + "\" " + args + " 2> \"" + log.string() + "\" > /dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

std::string run_args(const std::string& sub, const fs::path& config, const fs::path& out, const std::string& extra = "") {
  return sub + " --config \"" + config.string() + "\" --out \"" + out.string() + "\" " + extra;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name, std::ios::binary) << text;
  return dir / name;
}

}  // namespace

TEST_CASE("version and usage errors") {
  const auto dir = scratch("usage");
  CHECK(run("--version", dir).code == 0);
  CHECK(run("", dir).code == 2);
  CHECK(run("teleport --config x.toml", dir).code == 2);
}

TEST_CASE("every sample config runs and passes its own check") {
  const std::pair<const char*, const char*> cases[] = {
      {"kernel-info", "kernel_info.toml"}, {"discretize", "discretize.toml"}, {"decay-fit", "decay_fit.toml"},
      {"simulate", "simulate.toml"},       {"compare", "compare.toml"},       {"ito-check", "ito_check.toml"},
      {"lyapunov", "lyapunov.toml"},       {"invariant", "invariant.toml"}};
  const char* expected_files[][3] = {{"kernel.csv", "measure.csv", nullptr},
                                     {"atoms.csv", "error.csv", nullptr},
                                     {"decay.csv", "summary.csv", nullptr},
                                     {"paths.csv", nullptr, nullptr},
                                     {"summary.csv", "compare.csv", nullptr},
                                     {"residuals.csv", "summary.csv", nullptr},
                                     {"lyapunov.csv", nullptr, nullptr},
                                     {"moments.csv", "ks.csv", "samples.csv"}};
  for (std::size_t k = 0; k < std::size(cases); ++k) {
    const auto out = scratch(cases[k].first);
    const auto r = run(run_args(cases[k].first, kConfigs / cases[k].second, out, "--assert"), out);
    INFO(std::string(cases[k].first), ": ", r.log);
    CHECK(r.code == 0);
    CHECK(fs::exists(out / "manifest.txt"));
    CHECK(slurp(out / "config.toml") == slurp(kConfigs / cases[k].second));
    for (const char* f : expected_files[k])
      if (f) CHECK(fs::exists(out / f));
  }
}

TEST_CASE("reruns are byte-identical") {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  REQUIRE(run(run_args("simulate", kConfigs / "simulate.toml", a), a).code == 0);
  REQUIRE(run(run_args("simulate", kConfigs / "simulate.toml", b), b).code == 0);
  CHECK(slurp(a / "paths.csv") == slurp(b / "paths.csv"));
  CHECK(slurp(a / "manifest.txt") == slurp(b / "manifest.txt"));
  const auto c = scratch("rerun_c");
  REQUIRE(run(run_args("simulate", kConfigs / "simulate.toml", c, "--threads 3"), c).code == 0);
  CHECK(slurp(a / "paths.csv") == slurp(c / "paths.csv"));
}

TEST_CASE("csv output uses LF and round-trip precision") {
  const auto out = scratch("csv");
  REQUIRE(run(run_args("discretize", kConfigs / "discretize.toml", out), out).code == 0);
  const std::string atoms = slurp(out / "atoms.csv");
  CHECK(atoms.find('\r') == std::string::npos);
  CHECK(atoms.rfind("x_i,c_i\n", 0) == 0);
}

TEST_CASE("manifest records seed and hash") {
  const auto out = scratch("manifest");
  REQUIRE(run(run_args("kernel-info", kConfigs / "kernel_info.toml", out, "--seed 99"), out).code == 0);
  const std::string m = slurp(out / "manifest.txt");
  CHECK(m.find("seed=99\n") != std::string::npos);
  CHECK(m.find("config_hash_fnv1a64=") != std::string::npos);
  CHECK(m.find("subcommand=kernel-info\n") != std::string::npos);
}

TEST_CASE("a missing seed is a configuration error") {
  const auto dir = scratch("noseed");
  const auto cfg = write(dir, "c.toml", "kernel = { variant = \"fractional\", alpha = 0.7 }\n");
  const auto r = run(run_args("kernel-info", cfg, dir / "out"), dir);
  CHECK(r.code == 2);
  CHECK(r.log.find("seed") != std::string::npos);
  CHECK(run(run_args("kernel-info", cfg, dir / "out", "--seed 4"), dir).code == 0);
}

TEST_CASE("malformed configs report their line") {
  const auto dir = scratch("badline");
  const auto cfg = write(dir, "c.toml", "seed = 1\nkernel = { variant = \"fractional\", alpha = 0.7 }\nbroken line\n");
  const auto r = run(run_args("kernel-info", cfg, dir / "out"), dir);
  CHECK(r.code == 2);
  CHECK(r.log.find("line 3") != std::string::npos);
  const auto cfg2 = write(dir, "d.toml", "seed = 1\nkernel = { variant = \"fractional\", alpha = 1.5 }\n");
  CHECK(run(run_args("kernel-info", cfg2, dir / "out2"), dir).code == 2);
}

TEST_CASE("compare sweeps must halve the step") {
  const auto dir = scratch("sweep");
  std::string text = slurp(kConfigs / "compare.toml");
  text.replace(text.find("[250, 500, 1000]"), 16, "[300, 500, 1000]");
  const auto r = run(run_args("compare", write(dir, "c.toml", text), dir / "out"), dir);
  CHECK(r.code == 2);
  CHECK(r.log.find("powers of two") != std::string::npos);
}

TEST_CASE("exploding paths exit with status 3 and a report") {
  const auto dir = scratch("explode");
  const auto cfg = write(dir, "c.toml", R"(seed = 1
kernel_b = { variant = "exp_sum", weights = [1], rates = [0] }
kernel_sigma = { variant = "exp_sum", weights = [1], rates = [0] }
[grid]
T = 1
N = 1000
[ensemble]
paths = 2
[drift]
name = "linear"
a = 50
[diffusion]
name = "const"
value = 0
)");
  const auto r = run(run_args("simulate", cfg, dir / "out"), dir);
  CHECK(r.code == 3);
  CHECK(fs::exists(dir / "out" / "explosion.csv"));
}

TEST_CASE("failed checks exit with status 4 only under --assert") {
  const auto dir = scratch("assert");
  CHECK(run(run_args("lyapunov", kConfigs / "lyapunov_cubic.toml", dir / "a", "--assert"), dir).code == 4);
  CHECK(run(run_args("lyapunov", kConfigs / "lyapunov_cubic.toml", dir / "b"), dir).code == 0);
  CHECK(slurp(dir / "b" / "lyapunov.csv").find("fail") != std::string::npos);
}
