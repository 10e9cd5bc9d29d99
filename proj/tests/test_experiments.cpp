#include <doctest.h>

#include <sstream>

#include "qmix/experiments.hpp"
#include "support.hpp"

using namespace qmix;

namespace {

cplx at(const json& z, std::size_t k) { return {z[k][0].get<double>(), z[k][1].get<double>()}; }

json bloch(double x, double y, double z) { return {{"bloch", {x, y, z}}}; }

}  // namespace

TEST_CASE("synth: identity blocks give the identity element") {
  const json out = run_synth(json::parse(R"({"group": "s3", "blocks": [[[1]], [[1]], [[1, 0], [0, 1]]]})"));
  CHECK(out["format"] == "qmix/1");
  CHECK(out["labels"][0] == "Q1");
  for (std::size_t g = 0; g < 6; ++g) CHECK(std::abs(at(out["z"], g) - cplx(g == 0 ? 1.0 : 0.0)) < 1e-14);
  CHECK(out["verification"]["unitarity_residual"].get<double>() < 1e-14);
}

TEST_CASE("synth: opposite phases give real and imaginary halves") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-qtest::kPi, qtest::kPi);
  for (int k = 0; k < 50; ++k) {
    const double phi = u(rng), t = u(rng) / 2;
    const double ar = std::cos(t) * std::cos(u(rng)), cr = std::sin(t);
    const double ai = std::sqrt(std::max(0.0, 1 - ar * ar - cr * cr));
    const json cfg = {{"group", "s3"}, {"phi1", phi}, {"phi2", -phi}, {"a", {ar, ai}}, {"c", cr}};
    const json out = run_synth(cfg);
    for (std::size_t g = 0; g < 3; ++g) CHECK(std::abs(at(out["z"], g).imag()) < 1e-12);
    for (std::size_t g = 3; g < 6; ++g) CHECK(std::abs(at(out["z"], g).real()) < 1e-12);
  }
}

TEST_CASE("synth: cyclic group") {
  const json a = run_synth({{"group", "z_n"}, {"n", 2}, {"phases", {0.0, qtest::kPi}}});
  CHECK(a["labels"] == json({"I", "X"}));
  CHECK(std::abs(at(a["z"], 0)) < 1e-15);
  CHECK(std::abs(at(a["z"], 1) - cplx(1)) < 1e-15);
  // e^{i pi/4} X up to global phase
  const json b = run_synth({{"group", "z_n"}, {"n", 2}, {"phases", {1.5 * qtest::kPi, 0.5 * qtest::kPi}}});
  CHECK(std::abs(at(b["z"], 0)) < 1e-15);
  CHECK(std::abs(std::abs(at(b["z"], 1)) - 1) < 1e-15);
  CHECK_THROWS_AS(run_synth({{"group", "z_n"}, {"n", 2}, {"phases", {0.0}}}), InvalidArgument);
  CHECK_THROWS_AS(run_synth({{"group", "d4"}}), InvalidArgument);
  CHECK_THROWS_AS(run_synth(json::parse(R"({"group": "s3", "blocks": [[[2]], [[1]], [[1, 0], [0, 1]]]})")),
                  NonUnitaryBlock);
}

TEST_CASE("combine: two states agree across modes") {
  const json base = {{"states", {bloch(0.3, 0, 0.2), bloch(0, 0.5, -0.1)}}, {"lambda", 0.3}, {"sign", -1}};
  json closed = base, brute = base;
  brute["mode"] = "brute";
  const json a = run_combine(closed, true), b = run_combine(brute, false);
  CHECK(a["verify"]["max_diff"].get<double>() < 1e-12);
  for (std::size_t k = 0; k < 3; ++k) CHECK(a["bloch"][k].get<double>() == doctest::Approx(b["bloch"][k].get<double>()));
  json bad = base;
  bad["lambda"] = 1.5;
  CHECK_THROWS(run_combine(bad, false));
}

TEST_CASE("combine: three-state parametrizations") {
  const auto s = mub_states();
  json states = json::array();
  for (const auto& r : s) states.push_back(to_json(r.matrix()));
  std::mt19937_64 rng(22);
  for (int k = 0; k < 20; ++k) {
    const QTriple q = sample_q(rng);
    for (const char* mode : {"closed", "magic", "brute"}) {
      const json out = run_combine({{"states", states}, {"mode", mode}, {"q", to_json(q)["q"]}}, true);
      CHECK(out["verify"]["max_diff"].get<double>() < 1e-10);
    }
  }
  // Bloch formula for the MUB states at uniform weights
  const auto loop = orbit_trace(LinkageSpec::from_weights({1.0 / 3, 1.0 / 3, 1.0 / 3}), 60);
  for (std::size_t k = 0; k < loop[0].configs.size(); k += 7) {
    const QTriple q = loop[0].configs[k].to_qtriple();
    for (const char* mode : {"closed", "brute"}) {
      const json out = run_combine({{"states", states}, {"mode", mode}, {"q", to_json(q)["q"]}}, true);
      const PDelta pd = pdelta_from_q(q);
      CHECK(out["bloch"][0].get<double>() == doctest::Approx((1 - std::sin(pd.delta[1])) / 3).epsilon(1e-10));
      CHECK(out["bloch"][1].get<double>() == doctest::Approx((1 - std::sin(pd.delta[2])) / 3).epsilon(1e-10));
      CHECK(out["bloch"][2].get<double>() == doctest::Approx((1 - std::sin(pd.delta[0])) / 3).epsilon(1e-10));
    }
  }
  const json nested = run_combine(
      {{"states", states}, {"nested", {{"ordering", 2}, {"a", 0.3}, {"a_prime", 0.6}, {"s", 1}, {"s_prime", 0}}}}, true);
  CHECK(nested["verify"]["nested_vs_brute"].get<double>() < 1e-10);
  const json pd = run_combine({{"states", states}, {"pdelta", to_json(pdelta_from_q(sample_q(rng)))}}, true);
  CHECK(pd["verify"]["closed_vs_brute"].get<double>() < 1e-10);

  // a flat z outside the real/imaginary gauge is handled by magic but not closed
  const auto flats = flat_unitary_search(irreps_s3(), {200, 3, 1e-8});
  REQUIRE_FALSE(flats.empty());
  json z = to_json(flats.front());
  const json m = run_combine({{"states", states}, {"mode", "magic"}, {"z", z}}, true);
  CHECK(m["verify"]["magic_vs_brute"].get<double>() < 1e-10);
  CHECK_THROWS_AS(run_combine({{"states", states}, {"mode", "closed"}, {"z", z}}, false), GaugeViolation);
  CHECK_THROWS_AS(run_combine({{"states", states}}, false), InvalidArgument);
  CHECK_THROWS_AS(run_combine({{"states", states}, {"mode", "fast"}, {"q", to_json(sample_q(rng))["q"]}}, false),
                  InvalidArgument);
}

TEST_CASE("orbit driver and table") {
  const OrbitRun run = run_orbit({{"weights", {1.0 / 3, 1.0 / 3, 1.0 / 3}}}, 120);
  CHECK(run.summary["orbits"] == 1);
  CHECK(run.summary["nested"] == 12);
  std::ostringstream os;
  write_orbit_table(os, run.orbits, true);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# format=qmix/1");
  std::getline(in, line);
  CHECK(line == "step,orbit,re_q1,im_q1,re_q2,im_q2,re_q3,im_q3,delta12,delta23,delta31,nested,bloch_x,bloch_y,bloch_z");
  int rows = 0, flagged = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 15);
    flagged += static_cast<int>(v[11]);
    CHECK(v[12] == doctest::Approx((1 - std::sin(v[9])) / 3).epsilon(1e-10));
    CHECK(v[13] == doctest::Approx((1 - std::sin(v[10])) / 3).epsilon(1e-10));
    CHECK(v[14] == doctest::Approx((1 - std::sin(v[8])) / 3).epsilon(1e-10));
  }
  CHECK(rows == static_cast<int>(run.orbits[0].configs.size()));
  CHECK(flagged == 12);
  const OrbitRun two = run_orbit({{"spec", {{"a", 0.1}, {"b", 0.6}, {"c", std::sqrt(1 - 0.01 - 0.36)}}}}, 60);
  CHECK(two.summary["orbits"] == 2);
  CHECK(two.summary["orbit_count"] == 2);
  CHECK_THROWS_AS(run_orbit(json::object(), 60), InvalidArgument);
}

TEST_CASE("EPI scan, two states") {
  ScanOptions o;
  o.samples = 2000;
  o.threads = 3;
  for (int d : {2, 3})
    for (const char* f : {"von_neumann", "renyi_2"}) {
      o.d = d;
      o.functional = f;
      const ScanReport r = epi_scan(o);
      CHECK(r.min_gap >= -1e-9);
      CHECK(r.reproducible);
      CHECK(epi_sample(o, r.argmin.index).gap == r.min_gap);
    }
  // commuting inputs reduce to classical concavity
  o.diagonal_states = true;
  o.d = 3;
  o.functional = "von_neumann";
  CHECK(epi_scan(o).min_gap >= -1e-12);
  // Renyi-2 is not concave on three levels, so the scan only reports
  o.functional = "renyi_2";
  const ScanReport r = epi_scan(o);
  CHECK(r.min_gap < 0);
  CHECK(to_json(r)["report"]["asserted"] == false);
}

TEST_CASE("EPI scan output is independent of the thread count") {
  ScanOptions o;
  o.n = 3;
  o.samples = 600;
  o.seed = 99;
  o.threads = 1;
  json a = to_json(epi_scan(o));
  o.threads = 4;
  json b = to_json(epi_scan(o));
  CHECK(a["report"]["asserted"] == false);
  CHECK(a["report"]["reproducible"] == true);
  a.erase("timing");
  b.erase("timing");
  CHECK(a.dump() == b.dump());
  o.seed = 100;
  json c = to_json(epi_scan(o));
  c.erase("timing");
  CHECK(a.dump() != c.dump());
}

TEST_CASE("EPI scan, three commuting states") {
  ScanOptions o;
  o.n = 3;
  o.samples = 2000;
  o.diagonal_states = true;
  const ScanReport r = epi_scan(o);
  CHECK(r.min_gap >= -1e-12);
  CHECK(r.counterexamples.empty());
}

TEST_CASE("EPI scan rejects bad options") {
  ScanOptions o;
  o.n = 4;
  CHECK_THROWS_AS(epi_scan(o), InvalidArgument);
  o.n = 2;
  o.d = 5;
  CHECK_THROWS_AS(epi_scan(o), InvalidArgument);
  o.d = 2;
  o.functional = "shannon";
  CHECK_THROWS_AS(epi_scan(o), InvalidArgument);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(InvariantViolation("x")) == 4);
  CHECK(exit_code_for(ConstraintViolation("x")) == 3);
  CHECK(exit_code_for(GaugeViolation("x")) == 3);
  CHECK(exit_code_for(InvalidArgument("x")) == 2);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
  try {
    const json broken = json::parse("{");
    CHECK(broken.is_null());
  } catch (const json::exception& e) {
    CHECK(exit_code_for(e) == 2);
  }
}

TEST_CASE("flat search report") {
  const json out = run_flat_search(100, 5);
  CHECK(out["format"] == "qmix/1");
  CHECK(out["count"].get<std::size_t>() == out["solutions"].size());
  for (const auto& s : out["solutions"]) {
    CHECK(s["flatness_error"].get<double>() < 1e-8);
    CHECK(s["unitarity_residual"].get<double>() < 1e-10);
  }
  CHECK_THROWS_AS(run_flat_search(0, 1), InvalidArgument);
}
