#include <cstdio>
#include <filesystem>
#include <fstream>

#include "catch2/catch_amalgamated.hpp"
#include "sgweno/io.hpp"
#include "sgweno/runner.hpp"

using namespace sgweno;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("sgweno_test_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("table formatting") {
  SECTION("single row with absent orders") {
    ErrorReport r;
    r.grid = 80;
    r.l1 = 3.1556e-07;
    r.linf = 4.9572e-07;
    r.wall_seconds = 0.998;
    const std::string csv = emit_table({r});
    CHECK(csv ==
          "grid,l1,l1_order,linf,linf_order,wall_seconds\n"
          "80,3.1556e-07,,4.9572e-07,,9.98000e-01\n");
  }
  SECTION("empty input emits the header only") {
    CHECK(emit_table({}) == "grid,l1,l1_order,linf,linf_order,wall_seconds\n");
  }
  SECTION("exact 32x halving prints order 5.000") {
    ErrorReport a, b;
    a.grid = 80;
    a.l1 = 1.0;
    a.linf = 2.0;
    a.wall_seconds = 1.0;
    b.grid = 160;
    b.l1 = 1.0 / 32.0;
    b.linf = 2.0 / 32.0;
    b.order_l1 = 5.0;
    b.order_linf = 5.0;
    b.wall_seconds = 2.0;
    const std::string csv = emit_table({a, b});
    CHECK(csv.find("160,3.1250e-02,5.000,6.2500e-02,5.000") != std::string::npos);
  }
}

TEST_CASE("field dumps round-trip") {
  const auto g = GridGeometry::make(DomainBox::cube(0.0, 1.0, 2), LevelIndex{{1, 0}}, {4, 4},
                                    {BoundaryKind::periodic, BoundaryKind::zero});
  GridField f = GridField::zeros(g);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::sin(0.1 * i) * 1e-3;
  const auto dir = temp_dir("dump");
  const std::string path = (dir / "field.sgw5").string();
  write_field_dump(path, f);
  const FieldDump d = read_field_dump(path);
  CHECK(d.dim == 2);
  CHECK(d.extents == std::vector<int>{8, 5});
  CHECK(d.spacing[0] == g.spacing[0]);
  CHECK(d.values == f.values);
  CHECK(std::filesystem::file_size(path) == 64 + f.values.size() * sizeof(double));
}

TEST_CASE("config validation") {
  RunConfig cfg = default_run_config(ExampleId::ex1);
  cfg.root_cells = {10};
  SECTION("valid config passes") { CHECK_NOTHROW(validate(cfg)); }
  SECTION("root grid too small") {
    cfg.root_cells = {4};
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
  }
  SECTION("sparse level bound") {
    RunConfig c3 = default_run_config(ExampleId::ex2);
    c3.finest_level = 1;
    c3.grid_mode = GridMode::sparse;
    CHECK_THROWS_AS(validate(c3), InvalidConfig);
  }
  SECTION("bad epsilon and cfl") {
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
    cfg.epsilon = 1e-6;
    cfg.cfl = 1.5;
    CHECK_THROWS_AS(validate(cfg), InvalidConfig);
  }
  SECTION("the invalid field is named") {
    cfg.root_cells = {4};
    try {
      validate(cfg);
      FAIL("expected InvalidConfig");
    } catch (const InvalidConfig& e) {
      CHECK(e.field == "nr");
    }
  }
}

TEST_CASE("runs at T = 0 reproduce the restriction") {
  RunConfig cfg = default_run_config(ExampleId::ex1);
  cfg.grid_mode = GridMode::single;
  cfg.root_cells = {10};
  cfg.finest_level = 3;
  cfg.tfinal = 0.0;
  const auto result = run(cfg);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].grid == 80);
  CHECK(result.rows[0].l1 == 0.0);
  CHECK(result.rows[0].linf == 0.0);
}

TEST_CASE("single and sparse runs share the finest geometry") {
  RunConfig cfg = default_run_config(ExampleId::ex1);
  cfg.root_cells = {8};
  cfg.finest_level = 2;
  cfg.tfinal = 0.0;
  cfg.grid_mode = GridMode::single;
  const auto a = run(cfg);
  cfg.grid_mode = GridMode::sparse;
  const auto b = run(cfg);
  REQUIRE(a.fields.size() == 1);
  REQUIRE(b.fields.size() == 1);
  CHECK(a.fields[0].second.geom.points == b.fields[0].second.geom.points);
  CHECK(a.fields[0].second.geom.spacing == b.fields[0].second.geom.spacing);
}

TEST_CASE("deterministic rerun of a small experiment") {
  RunConfig cfg = default_run_config(ExampleId::ex1);
  cfg.root_cells = {8};
  cfg.finest_level = 2;
  cfg.tfinal = 0.05;
  cfg.threads = 1;
  const auto a = run(cfg);
  const auto b = run(cfg);
  REQUIRE(a.rows.size() == 1);
  CHECK(a.rows[0].l1 == b.rows[0].l1);      // bitwise
  CHECK(a.rows[0].linf == b.rows[0].linf);  // bitwise
}

TEST_CASE("comparison of run directories") {
  const auto dir_a = temp_dir("cmp_a");
  const auto dir_b = temp_dir("cmp_b");
  RunConfig cfg = default_run_config(ExampleId::ex5a);
  cfg.grid_mode = GridMode::single;
  cfg.root_cells = {8};
  cfg.finest_level = 1;
  cfg.tfinal = 0.02;
  cfg.snapshots = {0.02};
  cfg.out_dir = dir_a.string();
  run(cfg);
  cfg.out_dir = dir_b.string();
  run(cfg);

  SECTION("identical runs have zero difference and unit wall ratio") {
    const auto c = compare_runs(dir_a.string(), dir_b.string());
    REQUIRE(!c.rows.empty());
    for (const auto& row : c.rows) {
      CHECK(row.l1 == 0.0);
      CHECK(row.linf == 0.0);
    }
    CHECK(c.wall_ratio > 0.0);
    const std::string csv = compare_csv(c);
    CHECK(csv.find("snapshot,l1_diff,linf_diff\n") == 0);
    CHECK(csv.find("wall_ratio,") != std::string::npos);
  }
  SECTION("incompatible runs are rejected") {
    const auto dir_c = temp_dir("cmp_c");
    RunConfig other = default_run_config(ExampleId::ex5a);
    other.grid_mode = GridMode::single;
    other.root_cells = {10};
    other.finest_level = 1;
    other.tfinal = 0.02;
    other.snapshots = {0.02};
    other.out_dir = dir_c.string();
    run(other);
    CHECK_THROWS(compare_runs(dir_a.string(), dir_c.string()));
  }
}

TEST_CASE("kinetic runs produce a time series with entropies") {
  RunConfig cfg = default_run_config(ExampleId::ex5a);
  cfg.grid_mode = GridMode::single;
  cfg.root_cells = {10};
  cfg.finest_level = 1;
  cfg.tfinal = 0.05;
  cfg.snapshots = {0.0, 0.025, 0.05};
  const auto result = run(cfg);
  REQUIRE(result.series.size() == 3);
  CHECK(result.series[0].t == 0.0);
  CHECK(result.series[2].t == Catch::Approx(0.05).margin(1e-12));
  for (const auto& row : result.series) {
    CHECK(row.h2.has_value());
    CHECK(std::isfinite(*row.h2));
    CHECK(row.mass == Catch::Approx(1.0).margin(1e-2));
  }
}

TEST_CASE("scale factor shrinks the experiment") {
  RunConfig cfg = default_run_config(ExampleId::ex5a);
  cfg.grid_mode = GridMode::single;
  cfg.root_cells = {20};
  cfg.finest_level = 1;
  cfg.tfinal = 0.1;
  cfg.snapshots = {0.1};
  cfg.scale = 0.5;
  const auto result = run(cfg);
  CHECK(result.finest_nh == 20);  // 20 * 0.5 = 10 root cells, level 1
  REQUIRE(!result.series.empty());
  CHECK(result.series.back().t == Catch::Approx(0.05).margin(1e-12));
}
