#include "cli.hpp"
#include "exo/config.hpp"
#include "exo/log_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace exo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "exosim");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("EXO_TEST_TMP");
  const fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("empty text is the nominal preset") {
    CHECK(parse_config("") == make_preset("nominal"));
    CHECK(parse_config("# only a comment\n\n") == make_preset("nominal"));
  }

  SUBCASE("a single key overrides the preset") {
    const Scenario s = parse_config("sync.beta = 30\n");
    CHECK(s.sync.beta == 30.0);
    Scenario expected = make_preset("nominal");
    expected.sync.beta = 30.0;
    CHECK(s == expected);
  }

  SUBCASE("preset selection") {
    CHECK(parse_config("scenario.preset = paper_v\n") == make_preset("paper_v"));
  }

  SUBCASE("a typo names the key") {
    try {
      parse_config("sink.k2 = 0.5\n");
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("sink.k2") != std::string::npos);
    }
  }

  SUBCASE("bad values and repeated keys") {
    CHECK_THROWS_AS(parse_config("sync.k2 = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sync.k2 = 1\nsync.k2 = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("init.xi = 1, 2, 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("monitor.guub = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("just some words\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario.preset = walking\n"), ConfigError);
  }

  SUBCASE("dump and reload is the identity") {
    for (const std::string& name : preset_names()) {
      Scenario s = make_preset(name);
      s.sync.k3 = 0.1 + 1.0 / 3.0;
      s.init.xi = Vec4(1e-17, -0.3, 2.0 / 7.0, 0.0);
      s.motors[5].disturbance.amplitude = 0.0031;
      CHECK(parse_config(dump_config(s)) == s);
    }
  }

  SUBCASE("overrides") {
    Scenario s = make_preset("paper_v");
    apply_overrides(s, {"sync.k3=0.5", "joint.epsilon = 3"});
    CHECK(s.sync.k3 == 0.5);
    CHECK(s.joint.epsilon == 3.0);
    CHECK_THROWS_AS(apply_overrides(s, {"scenario.preset=nominal"}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(s, {"sync.k3"}), ConfigError);
  }

  SUBCASE("every dumped key is a known key") {
    const std::vector<std::string> keys = config_keys();
    std::istringstream in(dump_config(make_preset("nominal")));
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const std::string key = line.substr(0, line.find(" ="));
      CHECK(std::find(keys.begin(), keys.end(), key) != keys.end());
      ++count;
    }
    CHECK(count == keys.size());
  }
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, 6.02214076e23, 0.1 + 0.2}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("exit codes") {
  SUBCASE("no arguments is a usage error") {
    const Outcome o = invoke({});
    CHECK(o.code == cli::kUsage);
    CHECK(o.err.find("Usage") != std::string::npos);
  }

  SUBCASE("unknown flag") {
    CHECK(invoke({"run", "--bogus"}).code == cli::kUsage);
  }

  SUBCASE("unknown preset") {
    CHECK(invoke({"check-gains", "--preset", "walking"}).code == cli::kUsage);
  }

  SUBCASE("help") {
    CHECK(invoke({"--help"}).code == 0);
  }

  SUBCASE("presets") {
    const Outcome o = invoke({"presets"});
    CHECK(o.code == cli::kOk);
    CHECK(o.out.find("paper_v") != std::string::npos);
  }

  SUBCASE("check-gains") {
    const Outcome ok = invoke({"check-gains", "--preset", "nominal"});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.out.find("gain_conditions: pass") != std::string::npos);

    const Outcome low = invoke({"check-gains", "--preset", "nominal", "--set", "sync.k3=0.001"});
    CHECK(low.code == cli::kViolation);
    CHECK(low.out.find("k3: 0.001 fail") != std::string::npos);
    CHECK(low.out.find("gain_conditions: fail") != std::string::npos);
  }

  SUBCASE("config file with a typo") {
    const fs::path dir = scratch("typo");
    const fs::path cfg = write_text(dir / "bad.cfg", "sink.k2 = 1\n");
    const Outcome o = invoke({"run", "--config", cfg.string(), "--out", (dir / "out").string()});
    CHECK(o.code == cli::kUsage);
    CHECK(o.err.find("sink.k2") != std::string::npos);
  }

  SUBCASE("conflicting preset and config") {
    const fs::path dir = scratch("conflict");
    const fs::path cfg = write_text(dir / "v.cfg", "scenario.preset = paper_v\n");
    CHECK(invoke({"dump-config", "--config", cfg.string(), "--preset", "nominal"}).code == cli::kUsage);
    CHECK(invoke({"dump-config", "--config", cfg.string(), "--preset", "paper_v"}).code == cli::kOk);
  }

  SUBCASE("run paper_v writes outputs and succeeds") {
    const fs::path dir = scratch("paper_v");
    const Outcome o = invoke({"run", "--preset", "paper_v", "--out", dir.string()});
    CHECK(o.code == cli::kOk);
    CHECK(fs::exists(dir / "log.csv"));
    CHECK(fs::exists(dir / "switches.csv"));
    CHECK(fs::exists(dir / "scenario.cfg"));
    const std::string report = read_text(dir / "report.txt");
    CHECK(report.find("status: completed") != std::string::npos);
    CHECK(report.find("guub.verdict: pass") != std::string::npos);

    // The emitted scenario reproduces the run's configuration.
    CHECK(load_config((dir / "scenario.cfg").string()) == make_preset("paper_v"));

    SUBCASE("certify the emitted log") {
      const Outcome c = invoke({"certify", "--preset", "paper_v", "--log", (dir / "log.csv").string()});
      CHECK(c.code == cli::kOk);
      CHECK(c.out.find("guub.verdict: pass") != std::string::npos);
    }

    SUBCASE("certify against a tighter scenario reports a violation") {
      const Outcome c = invoke({"certify", "--preset", "paper_v", "--set", "joint.epsilon=0.01", "--set",
                                "joint.rho_auto=false", "--set", "joint.rho1=1000", "--log",
                                (dir / "log.csv").string()});
      CHECK(c.code == cli::kViolation);
      CHECK(c.out.find("guub.verdict: fail") != std::string::npos);
    }
  }

  SUBCASE("certify without a log") {
    CHECK(invoke({"certify", "--preset", "nominal"}).code == cli::kUsage);
    CHECK(invoke({"certify", "--log", "/nonexistent/log.csv"}).code == cli::kUsage);
  }

  SUBCASE("diverging run") {
    const fs::path dir = scratch("diverge");
    const Outcome o = invoke({"run", "--preset", "nominal", "--set", "joint.epsilon=2", "--set",
                              "scenario.duration=2", "--out", dir.string()});
    CHECK(o.code == cli::kDiverged);
    CHECK(read_text(dir / "report.txt").find("status: diverged") != std::string::npos);
    CHECK(fs::file_size(dir / "log.csv") > 0);
  }
}
