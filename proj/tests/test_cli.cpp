#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " CYCLEVOL_BINARY " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cyclevol_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("constants") {
  const Run r = run("constants --n 4 --k 2");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["epsilon"] == "1/4");
  CHECK(j["tau"] == "1/4");
  CHECK(run("constants --n 3 --k 0").code == 2);
  const json table = json::parse(run("constants --table 5").out);
  REQUIRE(table.is_array());
  CHECK(table.size() == 15);
  CHECK(table[1]["epsilon"].is_null());
}

TEST_CASE("volhat both formulations") {
  const Run r = run("volhat --formulation both --variety 1,1 --alpha 1,1 --codim 1");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["sup"]["value"].get<double>() == doctest::Approx(2));
  CHECK(j["inf"]["value"].get<double>() == doctest::Approx(2));
  CHECK(j["sup"]["exact"]["exact"] == "2");
}

TEST_CASE("exit codes") {
  CHECK(run("volhat --variety 1,1 --alpha 1,-1 --codim 1").code == 4);
  CHECK(run("bounds --formula precise_2 --variety 3 --alpha 1 --codim 2 --A 1 --s 2").code == 3);
  CHECK(run("bounds --formula precise_1 --variety 3 --alpha 1 --codim 2 --A 1 --s 2").code == 0);
  CHECK(run("volhat --variety 1,1 --alpha 1,1,1 --codim 1").code == 2);
  CHECK(run("--input /nonexistent/file.json volhat").code == 2);
  CHECK(run("bounds --formula no_such_formula --variety 3 --alpha 1 --codim 2 --A 1").code == 2);
}

TEST_CASE("json input and output files") {
  const auto dir = scratch("files");
  const auto in = dir / "jobs.json";
  const auto out = dir / "out.json";
  std::ofstream(in) << R"([{"variety":[1,1],"alpha":{"codim":1,"dense":[1,1]}},
                            {"variety":[2],"alpha":{"codim":1,"dense":["3"]}}])";
  const Run r = run("--input " + in.string() + " --output " + out.string() + " --jobs 2 volhat");
  CHECK(r.code == 0);
  std::ifstream f(out);
  const json j = json::parse(f);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["result"]["value"].get<double>() == doctest::Approx(2));
  CHECK(j[1]["result"]["value"].get<double>() == doctest::Approx(9));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache reuse") {
  const auto dir = scratch("cache");
  const std::string env = "CYCLEVOL_CACHE_DIR=" + dir.string();
  const std::string args = "volhat --variety 1,2 --alpha 2,3 --codim 1";
  const Run first = run(args, env);
  CHECK(first.code == 0);
  std::filesystem::path entry;
  int entries = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    entry = e.path();
    ++entries;
  }
  REQUIRE(entries == 1);
  // mark the stored document; a second run must return it unchanged
  json stored = json::parse(std::ifstream(entry));
  stored["doc"]["note"] = "from cache";
  std::ofstream(entry) << stored.dump();
  const Run second = run(args, env);
  CHECK(second.code == 0);
  CHECK(json::parse(second.out)["note"] == "from cache");
  CHECK(json::parse(run(args).out).value("note", "") != "from cache");
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps") {
  const Run r = run("seshadri --variety 2 --A 1 --sweep 4:6");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.size() == 3);
  CHECK(j[0]["collapsed"] == true);
  CHECK(j[1]["t"] == "3");
  const json w = json::parse(run("wmob --variety 3 --A 1 --k 1 --sweep 2:5").out);
  CHECK(w.size() == 4);
}

TEST_CASE("verify") {
  CHECK(run("verify --only 2").code == 0);
}
