#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "flatblock/cli.h"

using namespace flatblock;
using Json = cli::Json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary and returns its exit status.
int run_exe(const std::string& args) {
  std::string cmd = std::string(FLATBLOCK_EXE) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

size_t count(const std::string& text, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::filesystem::path temp_path(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("segments text and structured forms agree") {
  auto text = run({"segments", "--builtin", "torus", "--point", "0:(0,0)", "--point", "0:(1/2,1/2)", "--budget-len-sq", "4"});
  REQUIRE(text.code == 0);
  CHECK(count(text.out, "\n") == 12);
  auto structured = run({"segments", "--builtin", "torus", "--point", "0:(0,0)", "--point", "0:(1/2,1/2)",
                         "--budget-len-sq", "4", "--format", "structured"});
  REQUIRE(structured.code == 0);
  Json j = Json::parse(structured.out);
  CHECK(j["count"] == 12);
  std::istringstream lines(text.out);
  std::string line;
  Surface m = make_torus();
  for (const auto& s : j["segments"]) {
    std::getline(lines, line);
    CHECK(s["record"] == line);
    Segment seg = cli::segment_from_json(m, s);
    CHECK(seg.str() == line);
    CHECK(cli::to_json(seg) == s);
  }
}

TEST_CASE("structured output is reproducible") {
  std::vector<std::string> base{"segments", "--builtin", "octagon", "--point", "0:(1/3,1/7)", "--point",
                                "0:(1/2,3/4)", "--budget-len-sq", "16", "--format", "structured"};
  auto a = run(base), b = run(base);
  auto w = base;
  w.insert(w.end(), {"--workers", "4"});
  auto c = run(w);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("exit codes") {
  CHECK(run({"validate", "--builtin", "staircase"}).code == 0);
  CHECK(run({"validate", "--builtin", "nonsense"}).code == 1);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"segments", "--builtin", "torus", "--point", "0:(0,0)"}).code == 2);
  CHECK(run({"segments", "--builtin", "octagon", "--point", "0:(1/3,1/7)", "--point", "0:(1/2,3/4)",
             "--budget-len-sq", "400", "--max-nodes", "100"})
            .code == 3);
  CHECK(run({"block-verify", "--builtin", "torus", "--point", "0:(1/3,1/3)", "--point", "0:(1/2,1/2)",
             "--budget-len-sq", "4", "--blocker", "0:(1/2,1/2)"})
            .code == 1);
  CHECK(run_exe("validate --builtin torus") == 0);
  CHECK(run_exe("validate --surface /nonexistent/file.json") == 1);
  CHECK(run_exe("--bogus") == 2);
}

TEST_CASE("block reports") {
  auto r = run({"block-report", "--builtin", "torus", "--point", "0:(1/5,2/7)", "--point", "0:(3/4,1/3)",
                "--budget-len-sq", "16", "--format", "structured"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["lower"] == 4);
  CHECK(j["upper"] == 4);
  CHECK(j["upper_set"].size() == 4);

  auto v = run({"block-verify", "--builtin", "torus", "--point", "0:(1/5,2/7)", "--point", "0:(3/4,1/3)",
                "--budget-len-sq", "16", "--format", "structured", "--blocker", "0:(19/40,13/42)", "--blocker",
                "0:(19/40,17/21)", "--blocker", "0:(39/40,13/42)", "--blocker", "0:(39/40,17/21)"});
  REQUIRE(v.code == 0);
  CHECK(Json::parse(v.out)["blocked"] == true);
}

TEST_CASE("surface files round trip through the cli") {
  auto path = temp_path("flatblock_cli_l.json");
  auto dump = run({"info", "--builtin", "l_shaped:1,1", "--dump"});
  REQUIRE(dump.code == 0);
  {
    std::ofstream f(path);
    f << dump.out;
  }
  auto a = run({"info", "--surface", path.string(), "--format", "structured"});
  auto b = run({"info", "--builtin", "l_shaped:1,1", "--format", "structured"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::filesystem::remove(path);
}

TEST_CASE("torus cover and cylinders") {
  auto c = run({"torus-cover", "--builtin", "staircase", "--format", "structured"});
  REQUIRE(c.code == 0);
  Json j = Json::parse(c.out);
  CHECK(j["torus_cover"] == "yes");
  CHECK(j["degree"] == "3");
  auto g = run({"torus-cover", "--builtin", "golden_l", "--format", "structured"});
  CHECK(Json::parse(g.out)["torus_cover"] == "no");
  auto p = run({"pure-periodic", "--builtin", "golden_l", "--dir", "(1,0)"});
  CHECK(p.code == 0);
  CHECK(p.out.find("no") != std::string::npos);
}

TEST_CASE("unfolding and examples") {
  auto u = run({"unfold", "--vertices", "(0,0);(1,0);(0,1)", "--angles", "1/2,1/4,1/4", "--format", "structured"});
  REQUIRE(u.code == 0);
  Json j = Json::parse(u.out);
  CHECK(j["genus"] == 1);
  CHECK(j["group_order"] == 8);
  auto e = run({"examples"});
  CHECK(e.code == 0);
  CHECK(e.out.find("staircase") != std::string::npos);
}

TEST_CASE("render draws every overlay") {
  auto path = temp_path("flatblock_render.svg");
  auto r = run({"render", "--builtin", "torus", "--point", "0:(1/5,2/7)", "--point", "0:(3/4,1/3)", "--budget-len-sq",
                "4", "--blocker", "0:(19/40,13/42)", "--out", path.string()});
  REQUIRE(r.code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string svg = ss.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(count(svg, "<polygon class=\"face\"") == 1);
  CHECK(count(svg, "<g class=\"segment\"") == 12);
  CHECK(count(svg, "<circle") == 1);
  std::filesystem::remove(path);
}

TEST_CASE("worked cli instances") {
  auto r = run({"block-report", "--builtin", "torus", "--point", "0:(0,0)", "--point", "0:(1/4,0)", "--budget-len-sq",
                "16", "--format", "structured"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["lower"] == 4);
  CHECK(j["upper"] == 4);
  auto g = run({"torus-cover", "--builtin", "golden_l"});
  CHECK(g.code == 0);
  CHECK(g.out.find("torus_cover: no") != std::string::npos);
  CHECK(run({"segments", "--builtin", "torus", "--point", "0:(0,0)", "--point", "0:(1/2,1/2)", "--budget-len-sq",
             "0.5"})
            .code != 0);
}

TEST_CASE("render markers and deck colouring") {
  auto path = temp_path("flatblock_render_l.svg");
  auto read = [&] {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  REQUIRE(run({"render", "--builtin", "l_shaped:1,1", "--weierstrass", "--out", path.string()}).code == 0);
  std::string first = read();
  CHECK(count(first, "<circle") == 5);
  REQUIRE(run({"render", "--builtin", "l_shaped:1,1", "--weierstrass", "--out", path.string()}).code == 0);
  CHECK(read() == first);

  REQUIRE(run({"render", "--builtin", "staircase", "--deck-orbits", "--out", path.string()}).code == 0);
  std::string svg = read();
  CHECK(count(svg, "<polygon class=\"face\"") == 6);
  std::set<std::string> fills;
  for (size_t pos = svg.find("<polygon class=\"face\""); pos != std::string::npos;
       pos = svg.find("<polygon class=\"face\"", pos + 1)) {
    size_t at = svg.find("fill=\"", pos) + 6;
    fills.insert(svg.substr(at, svg.find('"', at) - at));
  }
  CHECK(fills.size() == 2);
  std::filesystem::remove(path);
}
