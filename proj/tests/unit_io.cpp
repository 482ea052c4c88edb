// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "ddef/io.hpp"
#include "support.hpp"

using namespace ddef;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ddef_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};
} // namespace

TEST_CASE("problem json round trip") {
  PeriodicDDE dde = testing::random_2d_problem(77);
  DistributedDelay dist;
  dist.theta_lo = 0.2;
  dist.theta_hi = 0.6;
  dist.kernel = {FourierMatrix::constant(Eigen::MatrixXd::Identity(2, 2)),
                 FourierMatrix::constant(0.5 * Eigen::MatrixXd::Ones(2, 2))};
  dist.quadrature_order = 4;
  dde.delays.emplace_back(dist);

  const nlohmann::json j = problem_to_json(dde);
  const PeriodicDDE back = problem_from_json(j);
  CHECK(back.n == dde.n);
  CHECK(back.m == dde.m);
  REQUIRE(back.delays.size() == dde.delays.size());
  for (double t : {0.0, 0.31, 0.77})
    CHECK((back.drift.eval(t) - dde.drift.eval(t)).cwiseAbs().maxCoeff() <= 1e-15);
  const auto &d0 = std::get<DiscreteDelay>(back.delays[0]);
  CHECK(d0.tau == doctest::Approx(0.5));
  const auto &d1 = std::get<DistributedDelay>(back.delays[1]);
  CHECK(d1.quadrature_order == 4);
  CHECK(d1.kernel.size() == 2);
}

TEST_CASE("problem file errors name the field") {
  TempDir tmp;
  const auto p = tmp.path / "bad.json";
  {
    std::ofstream out(p);
    out << R"({"m": 1})";
  }
  try {
    load_problem(p.string());
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument &e) {
    CHECK(std::string(e.what()).find("'n'") != std::string::npos);
  }
  {
    std::ofstream out(p);
    out << R"({"n": 1, "m": 1, "delays": [{"tau": 0.5}]})";
  }
  try {
    load_problem(p.string());
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument &e) {
    CHECK(std::string(e.what()).find("'coeff'") != std::string::npos);
  }
}

TEST_CASE("csv writers are deterministic") {
  TempDir tmp;
  MultiplierRecord r;
  r.mu_star = Complex(0.4948, 0.0);
  r.lambda = 1.0 / r.mu_star;
  r.alg_mult = 1;
  r.geom_mult = 1;
  r.residual = 1.25e-11;
  const auto p1 = tmp.path / "a.csv";
  const auto p2 = tmp.path / "b.csv";
  write_multiplier_csv(p1.string(), {r});
  write_multiplier_csv(p2.string(), {r});
  std::ifstream f1(p1), f2(p2);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  CHECK(s1.find("re_lambda,im_lambda,abs_lambda,re_mu,im_mu,alg_mult,geom_mult,max_chain_len,"
                "residual") == 0);
}

TEST_CASE("operator dump has a parsable header and the advertised layout") {
  TempDir tmp;
  auto ops = testing::make_ops(testing::zero_problem(), 2, 4);
  const auto p = tmp.path / "ops.bin";
  dump_operators(p.string(), ops);

  std::ifstream in(p, std::ios::binary);
  std::string header_line;
  std::getline(in, header_line);
  const nlohmann::json h = nlohmann::json::parse(header_line);
  CHECK(h.at("matrices").size() == 6);
  const auto &m0 = h.at("matrices")[0];
  CHECK(m0.at("name") == "S");
  // payload size matches the header offsets
  std::size_t expect = 0;
  for (const auto &e : h.at("matrices"))
    expect += e.at("rows").get<std::size_t>() * e.at("cols").get<std::size_t>() * 16;
  std::vector<char> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(payload.size() == expect);
}
