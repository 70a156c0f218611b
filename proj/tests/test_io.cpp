#include "doctest.h"

#include "hdgpod/config.hpp"
#include "hdgpod/expression.hpp"
#include "hdgpod/snapshot_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hdgpod;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hdgpod_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("expressions") {
  CHECK(Expression("1 + 2 * 3")(0, 0, 0, 0) == 7.0);
  CHECK(Expression("2^3^2")(0, 0, 0, 0) == 512.0);
  CHECK(Expression("-2^2")(0, 0, 0, 0) == -4.0);
  CHECK(Expression("(1+2)*3 - 4/2")(0, 0, 0, 0) == 7.0);
  CHECK(Expression("sin(pi*x)*cos(y)")(0.5, 0.0, 0, 0) == doctest::Approx(1.0));
  CHECK(Expression("exp(-t)*z + sqrt(abs(-4)) + log(e)")(0, 0, 2, 0) == doctest::Approx(5.0));
  CHECK(Expression("1.5e-3*x")(2, 0, 0, 0) == doctest::Approx(3e-3));
  CHECK(Expression("2/c", {{"c", 4.0}})(0, 0, 0, 0) == 0.5);
  CHECK(Expression("exp(-t)").time_dependent());
  CHECK_FALSE(Expression("tan(x)").time_dependent());
  CHECK(Expression("x").source() == "x");
  for (const char* bad : {"", "1 +", "sin(x", "foo(x)", "2 * w", "1 2", ")"})
    CHECK_THROWS_AS(Expression{std::string(bad)}, ExpressionError);
}

TEST_CASE("presets and validation") {
  for (const std::string& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
  CHECK_THROWS_AS(preset("nope"), ConfigError);
  const RunConfig p2 = preset("square");
  CHECK(p2.n == 32);
  CHECK(p2.dt == 0.001);
  CHECK(p2.r_list == std::vector<int>{7, 10, 13, 16, 20});
  const RunConfig p3 = preset("cube");
  CHECK(p3.dim == 3);
  CHECK(p3.n == 16);
  CHECK(p3.r_list == std::vector<int>{3, 6, 9, 12, 15});
  CHECK_FALSE(preset("manufactured").zero_source());
  CHECK_FALSE(preset("manufactured").exact_solution().empty());

  RunConfig c = p2;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = p2;
  c.T = 0.0105;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = p2;
  c.u0 = "sin(";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = p2;
  c.r_list = {0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("settings and config text") {
  RunConfig c;
  apply_setting(c, "n", "8");
  apply_setting(c, "diffusivity", "0.25");
  apply_setting(c, "r-list", "1, 2,3");
  CHECK(c.n == 8);
  CHECK(c.c == doctest::Approx(4.0));
  CHECK(c.r_list == std::vector<int>{1, 2, 3});
  CHECK_THROWS_AS(apply_setting(c, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "n", "eight"), ConfigError);
  CHECK_THROWS(parse_int_list("1,,x"));

  std::istringstream in("# comment\npreset = cube\nn=4 # trailing\n\ndt=0.01\n");
  RunConfig d;
  apply_config_text(d, in);
  CHECK(d.dim == 3);
  CHECK(d.n == 4);
  CHECK(d.dt == 0.01);
}

TEST_CASE("manifest round trip") {
  const RunConfig c = preset("manufactured");
  std::stringstream ss;
  write_manifest(ss, c, {{"mesh_h", "0.125"}});
  ss << "payload\n";
  const auto m = read_manifest(ss);
  CHECK(m.at("mesh_h") == "0.125");
  RunConfig back;
  for (const auto& [k, v] : m)
    if (k != "mesh_h") apply_setting(back, k, v);
  CHECK(back.entries() == c.entries());
}

TEST_CASE("problem construction") {
  RunConfig c = preset("manufactured");
  c.n = 2;
  const Problem p = build_problem(c);
  CHECK(p.disc->mesh.num_elements() == 16);
  CHECK(p.beta0.size() == p.disc->layout.n2());
  CHECK(static_cast<bool>(p.load));
  c.f = "0";
  CHECK_FALSE(static_cast<bool>(build_problem(c).load));
}

TEST_CASE("binary matrices") {
  const fs::path dir = scratch("matrix");
  const std::string stem = (dir / "a").string();
  Eigen::MatrixXd A(3, 4);
  A << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12.5;
  MatrixHeader h;
  h.mesh_hash = 99;
  h.times = {0.1, 0.2, 0.3, 0.4};
  h.manifest["problem"] = "x";
  write_matrix(stem, A, h);
  MatrixHeader back;
  CHECK(read_matrix(stem, &back) == A);
  CHECK(back.rows == 3);
  CHECK(back.cols == 4);
  CHECK(back.mesh_hash == 99);
  CHECK(back.times == h.times);
  CHECK(back.manifest.at("problem") == "x");

  MatrixReader r(stem);
  Eigen::VectorXd col;
  int n = 0;
  while (r.next(col)) CHECK(col == A.col(n++));
  CHECK(n == 4);

  fs::resize_file(stem + ".bin", 40);
  CHECK_THROWS_AS(read_matrix(stem), IoError);
  CHECK_THROWS_AS(read_matrix((dir / "missing").string()), IoError);
  CHECK_THROWS_AS(write_matrix((dir / "none" / "x").string(), A, {}), IoError);
  fs::remove_all(dir);
}

TEST_CASE("basis files") {
  const fs::path dir = scratch("basis");
  PodBasis b;
  b.variable = "u";
  b.rank = 3;
  b.singular_values = Eigen::Vector4d(3, 2, 1, 1e-20);
  b.modes = Eigen::MatrixXd::Random(5, 2);
  write_basis((dir / "u").string(), b, {});
  const PodBasis r = read_basis((dir / "u").string(), "u");
  CHECK(r.rank == 3);
  CHECK(r.singular_values == b.singular_values);
  CHECK(r.modes == b.modes);
  fs::remove_all(dir);
}

TEST_CASE("csv tables") {
  CHECK(csv_number(1.0) == "1.00000000e+00");
  PodBasis q, u, uh;
  q.singular_values = Eigen::Vector3d(3, 2, 1);
  u.singular_values = Eigen::Vector2d(5, 4);
  uh.singular_values = Eigen::Vector3d(9, 8, 7);
  std::ostringstream sv;
  write_singular_values_csv(sv, q, u, uh);
  CHECK(sv.str() ==
        "index,sigma_q,sigma_u,sigma_uhat\n"
        "1,3.00000000e+00,5.00000000e+00,9.00000000e+00\n"
        "2,2.00000000e+00,4.00000000e+00,8.00000000e+00\n"
        "3,1.00000000e+00,,7.00000000e+00\n");

  std::vector<ErrorRow> rows(2);
  rows[0].r = 2;
  rows[0].report.q_error = 0.5;
  rows[1].r = 40;
  rows[1].skipped = true;
  rows[1].reason = "r exceeds rank";
  std::ostringstream et;
  write_error_table_csv(et, rows);
  const std::string s = et.str();
  CHECK(s.rfind("r,q_error,u_error,lambda_tail_q,lambda_tail_u,lambda_tail_uhat,lambda_u,lambda_q,status\n", 0) == 0);
  CHECK(s.find("2,5.00000000e-01,") != std::string::npos);
  CHECK(s.find(",ok\n") != std::string::npos);
  CHECK(s.find("skipped: r exceeds rank") != std::string::npos);
}
