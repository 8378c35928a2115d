#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "lrlc/cache.hpp"
#include "lrlc/config.hpp"
#include "lrlc/report.hpp"

using namespace lrlc;

TEST_CASE("config parses typed keys and rejects unknown ones") {
  RunConfig cfg = RunConfig::from_string(
      "# a comment\n"
      "d = 3\n"
      "alpha = 1.5\n"
      "torus = true\n"
      "p_grid = 0, 0.5, 0.9\n"
      "name = demo # trailing comment\n");
  CHECK(cfg.geti("d", 0) == 3);
  CHECK(cfg.getd("alpha", 0) == 1.5);
  CHECK(cfg.getb("torus", false));
  CHECK(cfg.get_list("p_grid", {}) == std::vector<double>{0.0, 0.5, 0.9});
  CHECK_THROWS_AS(cfg.finish(), std::invalid_argument); // 'name' unused
  CHECK(cfg.gets("name", "") == "demo");
  CHECK_NOTHROW(cfg.finish());
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(RunConfig::from_string("novalue\n"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_string("a = 1\na = 2\n"), std::invalid_argument);
  RunConfig cfg = RunConfig::from_string("x = abc\n");
  CHECK_THROWS_AS(cfg.geti("x", 0), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_string("x = 1\n").require("missing"),
                  std::invalid_argument);
}

TEST_CASE("config canonical form and hash are stable") {
  RunConfig a = RunConfig::from_string("b = 2\na = 1\n");
  RunConfig b = RunConfig::from_string("a = 1\nb = 2\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());
  RunConfig c = RunConfig::from_string("a = 1\nb = 3\n");
  CHECK(a.hash() != c.hash());
}

TEST_CASE("cache round-trips bit-exactly and rejects corruption") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "lrlc_cache_test.bin").string();
  CacheEntry e;
  e.kind = CacheKind::Kernel;
  e.d = 4;
  e.M = 7;
  e.content_hash = cache_content_hash("d=4;alpha=2;L=5", "kernel");
  e.payload = {0.0, 1.0, -3.25, 1e-300, 0.1};
  cache_write_atomic(path, e);

  auto r = cache_read(path);
  REQUIRE(r.has_value());
  CHECK(r->d == 4);
  CHECK(r->M == 7);
  CHECK(r->content_hash == e.content_hash);
  REQUIRE(r->payload.size() == e.payload.size());
  for (std::size_t i = 0; i < e.payload.size(); ++i)
    CHECK(r->payload[i] == e.payload[i]); // bit-exact

  // corrupt one byte in the middle
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(2);
    f.put('X');
  }
  CHECK_FALSE(cache_read(path).has_value());
  std::remove(path.c_str());
  CHECK_FALSE(cache_read(path).has_value()); // missing file
}

TEST_CASE("csv writer emits metadata, header, shortest-round-trip numbers") {
  CsvWriter w;
  w.meta("config_hash", "12345");
  w.header({"x", "value"});
  w.row({1.0, 0.1});
  w.row({2.0, 1.0 / 3.0});
  CHECK(w.buffer == "# config_hash=12345\nx,value\n1,0.1\n2,0.3333333333333333\n");
}

TEST_CASE("stamped json reports embed the resolved config") {
  RunConfig cfg = RunConfig::from_string("d = 2\nalpha = 2\n");
  json j = stamped_report(cfg, json{{"answer", 42}});
  CHECK(j["config"]["d"] == "2");
  CHECK(j["report"]["answer"] == 42);
  CHECK(j["config_hash"] == cfg.hash());
}
