#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "octfake/cli.hpp"
#include "octfake/octagon.hpp"

using namespace octfake;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run(args, in, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("octfake_test_" + name);
}

}  // namespace

TEST_CASE("iterate reports the first fake") {
  const Result r = call({"iterate", "1", "--json"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"n\":1,\"P\":\"2\",\"Pp\":\"1\",\"oracle_match\":true}\n");
  const Result neg = call({"iterate", "-4", "--json"});
  CHECK(neg.code == 0);
  CHECK(json_of(neg)["oracle_match"] == true);
}

TEST_CASE("iterate writes surgery traces") {
  const auto path = temp_file("trace.json");
  const Result r = call({"iterate", "2", "--trace-out", path.string()});
  CHECK(r.code == 0);
  std::ifstream f(path);
  const nlohmann::json j = nlohmann::json::parse(f);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["surgery"] == "left");
  CHECK(j[0]["twin"]["sq_length_text"] == "1");
  std::filesystem::remove(path);
}

TEST_CASE("systole of Oct_2") {
  const Result r = call({"systole", "2", "--json"});
  CHECK(r.code == 0);
  const nlohmann::json j = json_of(r);
  CHECK(j["family"] == 2);
  CHECK(j["count"] == 2);
  CHECK(j["sq_len"] == "2-√2");
  CHECK(j["geometric_match"] == true);
  const Result text = call({"systole", "2"});
  CHECK(text.out.find("family: 2") != std::string::npos);
}

TEST_CASE("gen output verifies") {
  const Result g0 = call({"gen", "0"});
  REQUIRE(g0.code == 0);
  const Result v0 = call({"verify", "-", "--json"}, g0.out);
  CHECK(v0.code == 0);
  CHECK(json_of(v0)["is_fake"] == false);
  CHECK(json_of(v0)["invariants_pass"] == true);
  for (long n : {-9L, -1L, 1L, 2L, 13L}) {
    const Result g = call({"gen", std::to_string(n)});
    const Result v = call({"verify", "-", "--json"}, g.out);
    CAPTURE(n);
    CHECK(v.code == 0);
    CHECK(json_of(v)["is_fake"] == true);
  }
}

TEST_CASE("systole of a surface file") {
  const Result g = call({"gen", "1"});
  const Result s = call({"systole", "-", "--json"}, g.out);
  CHECK(s.code == 0);
  CHECK(json_of(s)["sq_len"] == "2-√2");
  CHECK(json_of(s)["count"] == 1);
}

TEST_CASE("table, partners and approx") {
  const Result t = call({"table", "1", "3", "--json"});
  CHECK(t.code == 0);
  CHECK(json_of(t).size() == 3);
  CHECK(json_of(t)[1]["family"] == 2);
  CHECK(call({"table", "-2", "2"}).out.find("family") != std::string::npos);

  const Result p = call({"partners", "1", "--json"});
  CHECK(p.code == 0);
  CHECK(json_of(p)["match"] == true);
  CHECK(json_of(p)["predicted"] == nlohmann::json({-3, -2, -1, 1, 2, 3}));

  const Result a = call({"approx", "0", "0.01", "100000", "--json"});
  CHECK(a.code == 0);
  CHECK(json_of(a)["reached"] == true);
  CHECK(json_of(a)["density_relation"] == true);
  const Result b = call({"approx", "5", "--eps", "0.05", "--max-n", "300", "--json"});
  CHECK(b.code == 0);
  CHECK(json_of(b)["reached"] == true);
}

TEST_CASE("render writes an svg") {
  const auto path = temp_file("oct.svg");
  CHECK(call({"render", "3", "-o", path.string()}).code == 0);
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str().rfind("<svg", 0) == 0);
  std::filesystem::remove(path);
  const Result g = call({"gen", "0"});
  CHECK(call({"render", "-"}, g.out).out.rfind("<svg", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"gen"}).code == 2);
  CHECK(call({"gen", "x"}).code == 2);
  CHECK(call({"gen", "5", "--max-n", "3"}).code == 2);
  CHECK(call({"approx", "0", "-1"}).code == 2);
  CHECK(call({"table", "3", "1"}).code == 2);
  CHECK(call({"partners", "0"}).code == 2);
  CHECK(call({"--help"}).code == 0);

  const Result bad = call({"verify", "-", "--json"}, "{\"faces\": [");
  CHECK(bad.code == 1);
  CHECK(json_of(bad)["error"] == "parse");

  nlohmann::json broken = save_surface(octagon0());
  broken["gluings"].erase(0);
  const Result invalid = call({"verify", "-", "--json"}, broken.dump());
  CHECK(invalid.code == 1);
  CHECK(json_of(invalid)["error"] == "invalid_complex");

  CHECK(call({"verify", "/nonexistent/surface.json"}).code == 1);
}

TEST_CASE("json output is deterministic") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"gen", "4", "--json"}, {"systole", "7", "--json"}, {"table", "-3", "3", "--json"},
        {"iterate", "3", "--json"}}) {
    CHECK(call(args).out == call(args).out);
  }
}
