#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hybridsec/config.hpp"
#include "hybridsec/csv.hpp"
#include "hybridsec/errors.hpp"
#include "hybridsec/scenario_io.hpp"

using namespace hybridsec;
namespace fs = std::filesystem;

TEST_SUITE("config") {

TEST_CASE("empty file gives the default parameter table") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  CHECK(c.env.num_ues == 10);
  CHECK(c.env.slots == 10);
  CHECK(c.env.v_max == 20.0);
  CHECK(c.env.epsilon == 0.1);
  CHECK(c.env.off_map_penalty == 0.2);
  CHECK(c.env.layout.map_side == 200.0);
  CHECK(c.env.layout.coverage_radius == 45.0);
  CHECK(c.env.power.p_ue == 0.1);
  CHECK(c.env.power.p_jam == 0.08);
  CHECK(c.env.power.p_relay == 0.012);
  CHECK(c.env.power.noise_power == doctest::Approx(1e-13));
  CHECK(c.env.energy.ue_budget == 0.025);
  CHECK(c.env.energy.legit_budget == 24.0);
  CHECK(c.env.energy.helper_budget == 3900.0);
  CHECK(c.env.energy.mass == 9.65);
  CHECK(c.agent.gamma == 0.95);
  CHECK(c.agent.tau == 0.005);
  CHECK(c.agent.batch_size == 70);
  CHECK(c.agent.buffer_capacity == 8000);
  CHECK(c.agent.noise_variance == 0.6);
  CHECK(c.agent.noise_decay == 0.999);
  CHECK(c.agent.adam.learning_rate == 1e-4);
  CHECK(c.agent.hidden == std::vector<int>{300, 100, 100});
}

TEST_CASE("range errors name the key") {
  try {
    parse_config("v_max = -1\n", "run.cfg");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "v_max");
    CHECK(std::string(e.what()).find("v_max") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry the line") {
  try {
    parse_config("# comment\nslots = 10\nslots = 20\n", "run.cfg");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.cfg:3") != std::string::npos);
    CHECK(e.key() == "slots");
  }
  CHECK_THROWS_AS(parse_config("no_such_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("slots\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("slots = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scheme = greedy\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("horizons = 10 15\nslot = 2\n"), ConfigError);
}

TEST_CASE("decibel aliases") {
  const RunConfig c = parse_config("k_g2a_db = 12\nk_a2a_db = 20\nnoise_dbm = -100\n");
  CHECK(c.env.channel.k_g2a == doctest::Approx(15.848931924611133).epsilon(1e-12));
  CHECK(c.env.channel.k_a2a == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(c.env.power.noise_power == doctest::Approx(1e-13).epsilon(1e-12));
  CHECK(c.env.channel.noise_power == c.env.power.noise_power);
}

TEST_CASE("dump and reparse round trip") {
  const RunConfig a = parse_config(
      "layout = two-cluster\nnum_ues = 6\nslots = 20\nv_max = 17.5\nepsilon = 0.05\n"
      "hidden = 64 32\nseeds = 1 2 3\nscheme = Ja-OT\nlearning_rate = 3e-4\n"
      "output = results/x\nhorizons = 10 20 30\njobs = 2\n");
  const std::string text = dump_config(a);
  const RunConfig b = parse_config(text);
  CHECK(b == a);
  CHECK(dump_config(b) == text);
  for (const auto& key : config_keys()) CHECK(text.find(key + " =") != std::string::npos);
}

TEST_CASE("relative scenario files resolve against the config") {
  const fs::path dir = fs::temp_directory_path() / "hybridsec_cfg_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "run.cfg") << "scenario_file = layout.scn\n";
  }
  const RunConfig c = load_config(dir / "run.cfg");
  CHECK(c.scenario_file == dir / "layout.scn");
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);
}

TEST_CASE("scenario text round trip") {
  ScenarioLayout l;
  l.kind = LayoutKind::TwoCluster;
  l.ues = {{-31.5, 22.1}, {0.1, 1.0 / 3.0}};
  const std::string text = dump_scenario(l);
  const ScenarioLayout back = parse_scenario(text);
  CHECK(back == l);
  CHECK(dump_scenario(back) == text);
  CHECK_THROWS_AS(parse_scenario("layout = triangle\nue = 0 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("legit = 0 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("ue = 0\n"), ConfigError);
}

TEST_CASE("csv number formatting is shortest round trip") {
  CHECK(format_real(0.0) == "0");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(0.1) == "0.1");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv read back") {
  const fs::path p = fs::temp_directory_path() / "hybridsec_csv_test.csv";
  {
    CsvWriter w(p, "a,b");
    w.field(1).field(2.5);
    w.end_row();
    w.close();
  }
  const CsvTable t = read_csv(p);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.column("b") == 1);
  CHECK(t.column("z") == -1);
  CHECK(t.rows.at(0).at(1) == "2.5");
  CHECK_THROWS_AS(read_csv(p.string() + ".absent"), IoError);
}

}

TEST_SUITE("config") {

TEST_CASE("shipped configs and scenarios load") {
  const fs::path root = HYBRIDSEC_SOURCE_DIR;
  const RunConfig defaults = load_config(root / "configs" / "defaults.cfg");
  RunConfig expected;
  expected.agent.episodes = 1000;
  expected.seeds = {1, 2, 3};
  expected.output = "results";
  CHECK(defaults == expected);
  for (const char* name : {"single_cluster", "two_cluster"}) {
    const RunConfig c = load_config(root / "configs" / (std::string(name) + ".cfg"));
    const ScenarioLayout l = load_scenario(c.scenario_file);
    CHECK(l.ues.size() == 10);
    CHECK(dump_scenario(l) == [&] {
      std::ifstream in(c.scenario_file);
      return std::string(std::istreambuf_iterator<char>(in), {});
    }());
  }
  CHECK(load_scenario(root / "scenarios" / "two_cluster.scn").kind == LayoutKind::TwoCluster);
}

}
