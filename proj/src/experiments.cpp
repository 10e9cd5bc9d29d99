#include "qmix/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <thread>

namespace qmix {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvariantViolation*>(&e)) return 4;
  if (dynamic_cast<const ConstraintViolation*>(&e)) return 3;
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const json::exception*>(&e)) return 2;
  return 1;
}

// --- synth --------------------------------------------------------------------

namespace {

IrrepSet irreps_for(const json& config, FiniteGroup& group) {
  const std::string name = config.at("group").get<std::string>();
  if (name == "s3") {
    group = symmetric_group(3);
    return irreps_s3();
  }
  if (name == "z_n") {
    const int n = config.at("n").get<int>();
    if (n < 1 || n > 64) throw InvalidArgument("synth: n must lie in 1..64");
    group = cyclic_group(n);
    return irreps_cyclic(n);
  }
  throw InvalidArgument("synth: unknown group '" + name + "' (expected s3 or z_n)");
}

BlockUnitaries blocks_for(const json& config, const IrrepSet& irreps) {
  BlockUnitaries b;
  if (config.contains("blocks")) {
    for (const auto& m : config.at("blocks")) b.blocks.push_back(matrix_from_json(m));
  } else if (config.contains("phases")) {
    for (const auto& v : config.at("phases")) b.blocks.push_back(CMatrix::Constant(1, 1, std::polar(1.0, v.get<double>())));
  } else if (config.contains("phi1")) {
    const cplx a = complex_from_json(config.at("a"));
    const cplx c = complex_from_json(config.at("c"));
    CMatrix u3(2, 2);
    u3 << a, c, -std::conj(c), std::conj(a);
    b.blocks = {CMatrix::Constant(1, 1, std::polar(1.0, config.at("phi1").get<double>())),
                CMatrix::Constant(1, 1, std::polar(1.0, config.at("phi2").get<double>())), u3};
  } else {
    throw InvalidArgument("synth: config needs blocks, phases, or phi1/phi2/a/c");
  }
  if (b.blocks.size() != irreps.size())
    throw InvalidArgument("synth: expected " + std::to_string(irreps.size()) + " blocks");
  for (std::size_t k = 0; k < b.blocks.size(); ++k)
    if (b.blocks[k].rows() != irreps[k].dim || b.blocks[k].cols() != irreps[k].dim)
      throw InvalidArgument("synth: block " + std::to_string(k) + " has the wrong size");
  return b;
}

}  // namespace

json run_synth(const json& config) {
  FiniteGroup group = cyclic_group(1);
  const IrrepSet irreps = irreps_for(config, group);
  const BlockUnitaries blocks = blocks_for(config, irreps);
  const CoeffVector z = synthesize_coeffs(blocks, irreps);
  const BlockUnitaries back = extract_blocks(z, irreps);
  double roundtrip = 0.0;
  for (std::size_t k = 0; k < blocks.blocks.size(); ++k)
    roundtrip = std::max(roundtrip, max_abs(back.blocks[k] - blocks.blocks[k]));
  json labels = json::array();
  for (int g = 0; g < group.order(); ++g) labels.push_back(group.label(g));
  return {{"format", kFormat},
          {"group", config.at("group")},
          {"order", group.order()},
          {"labels", labels},
          {"z", to_json(z)},
          {"verification",
           {{"unitarity_residual", unitarity_residual(regular_lincomb(z))}, {"roundtrip_error", roundtrip}}}};
}

// --- combine ------------------------------------------------------------------

namespace {

constexpr double kVerifyTol = 1e-10;

struct TernaryParams {
  S3Coeffs z;
  std::optional<QTriple> q;
  std::optional<NestedSpec> nested;
};

TernaryParams ternary_params(const json& config) {
  TernaryParams t;
  if (config.contains("q")) {
    t.q = qtriple_from_json(config.at("q"));
  } else if (config.contains("pdelta")) {
    t.q = q_from_pdelta(pdelta_from_json(config.at("pdelta")));
  } else if (config.contains("nested")) {
    t.nested = nested_from_json(config.at("nested"));
    t.q = q_from_pdelta(delta_from_nested(*t.nested));
  } else if (config.contains("z")) {
    const json& zj = config.at("z");
    if (!zj.is_array() || zj.size() != 6) throw InvalidArgument("combine: z needs six entries");
    for (std::size_t k = 0; k < 6; ++k) t.z.z[k] = complex_from_json(zj[k]);
    if (!t.z.is_unitary()) throw NonUnitaryCoefficients("combine: z does not give a unitary");
    try {
      t.q = q_from_z(t.z);
    } catch (const GaugeViolation&) {
    }
    return t;
  } else {
    throw InvalidArgument("combine: three states need one of q, pdelta, nested, z");
  }
  t.z = z_from_q(*t.q);
  return t;
}

}  // namespace

json run_combine(const json& config, bool verify) {
  std::vector<DensityMatrix> states;
  for (const auto& s : config.at("states")) states.push_back(density_from_json(s));
  const std::string mode = config.value("mode", "closed");
  if (mode != "closed" && mode != "magic" && mode != "brute")
    throw InvalidArgument("combine: mode must be closed, magic or brute");
  for (const auto& s : states)
    if (s.dim() != states.front().dim()) throw InvalidArgument("combine: states have different dimensions");

  json out = {{"format", kFormat}, {"mode", mode}};
  CMatrix result;
  json checks = json::object();
  if (states.size() == 2) {
    const double lambda = config.at("lambda").get<double>();
    const int sign = config.value("sign", 1);
    const DensityMatrix closed = combine2(states[0], states[1], lambda, sign);
    result = mode == "brute" ? combine2_bruteforce(states[0], states[1], lambda, sign).matrix() : closed.matrix();
    if (verify) checks["closed_vs_brute"] = max_abs(closed.matrix() - combine2_bruteforce(states[0], states[1], lambda, sign).matrix());
  } else if (states.size() == 3) {
    if (states[0].dim() > 8 && (mode == "brute" || verify))
      throw InvalidArgument("combine: brute force needs local dimension <= 8");
    const TernaryParams t = ternary_params(config);
    if (mode == "closed") {
      if (!t.q) throw GaugeViolation("combine: z is not in the real/imaginary gauge; use magic or brute");
      result = combine3_closed(states[0], states[1], states[2], *t.q).matrix();
    } else if (mode == "magic") {
      result = combine3_magic(states[0], states[1], states[2], t.z);
    } else {
      result = combine3_bruteforce(states[0], states[1], states[2], t.z).matrix();
    }
    if (verify) {
      const CMatrix magic = combine3_magic(states[0], states[1], states[2], t.z);
      const CMatrix brute = combine3_bruteforce(states[0], states[1], states[2], t.z).matrix();
      checks["magic_vs_brute"] = max_abs(magic - brute);
      if (t.q) checks["closed_vs_brute"] = max_abs(combine3_closed(states[0], states[1], states[2], *t.q).matrix() - brute);
      if (t.nested) checks["nested_vs_brute"] = max_abs(nested_expand(*t.nested, states[0], states[1], states[2]).matrix() - brute);
    }
    if (t.q) out["q"] = to_json(*t.q)["q"];
  } else {
    throw InvalidArgument("combine: expected two or three states");
  }

  out["state"] = to_json(result);
  out["diagnostics"] = diagnostics_json(result);
  if (result.rows() == 2) out["bloch"] = bloch_vector(result);
  if (verify) {
    double worst = 0.0;
    for (const auto& [k, v] : checks.items()) worst = std::max(worst, v.get<double>());
    checks["max_diff"] = worst;
    out["verify"] = checks;
    if (worst > kVerifyTol) throw InvariantViolation("combine: evaluators disagree by " + std::to_string(worst));
  }
  if (!DensityMatrix::is_valid(result)) throw InvariantViolation("combine: output is not a valid state");
  return out;
}

// --- orbit --------------------------------------------------------------------

std::array<DensityMatrix, 3> mub_states() {
  return {DensityMatrix(bloch_state(1, 0, 0)), DensityMatrix(bloch_state(0, 1, 0)), DensityMatrix(bloch_state(0, 0, 1))};
}

OrbitRun run_orbit(const json& config, int steps) {
  steps = config.value("steps", steps);
  std::array<double, 3> lengths{};
  if (config.contains("weights")) {
    const auto p = config.at("weights").get<std::vector<double>>();
    if (p.size() != 3) throw InvalidArgument("orbit: weights need three entries");
    lengths = slot_lengths({p[0], p[1], p[2]});
  } else if (config.contains("spec")) {
    const json& s = config.at("spec");
    lengths = LinkageSpec(s.at("a").get<double>(), s.at("b").get<double>(), s.at("c").get<double>()).assign();
  } else {
    throw InvalidArgument("orbit: config needs weights or spec");
  }
  OrbitRun run;
  run.orbits = orbit_trace(lengths, steps);
  std::array<double, 3> sorted = lengths;
  std::sort(sorted.begin(), sorted.end());
  json sizes = json::array();
  int nested = 0;
  for (const auto& o : run.orbits) {
    sizes.push_back(o.configs.size());
    for (const auto& c : o.configs) nested += c.is_nested(1e-9) ? 1 : 0;
  }
  run.summary = {{"format", kFormat},
                 {"lengths", lengths},
                 {"steps", steps},
                 {"orbits", run.orbits.size()},
                 {"orbit_count", orbit_count(LinkageSpec(sorted[0], sorted[1], sorted[2]))},
                 {"points", sizes},
                 {"nested", nested}};
  return run;
}

void write_orbit_table(std::ostream& os, const std::vector<Orbit>& orbits, bool mub) {
  os << "# format=" << kFormat << "\n";
  os << "step,orbit,re_q1,im_q1,re_q2,im_q2,re_q3,im_q3,delta12,delta23,delta31,nested";
  if (mub) os << ",bloch_x,bloch_y,bloch_z";
  os << "\n";
  const auto old = os.precision(17);
  const auto states = mub_states();
  for (std::size_t o = 0; o < orbits.size(); ++o) {
    const auto& cfgs = orbits[o].configs;
    for (std::size_t s = 0; s < cfgs.size(); ++s) {
      const auto& c = cfgs[s];
      os << s << ',' << o;
      for (const auto& v : c.q) os << ',' << v.real() << ',' << v.imag();
      for (double v : c.deltas()) os << ',' << v;
      os << ',' << (c.is_nested(1e-9) ? 1 : 0);
      if (mub) {
        const auto b = bloch_vector(combine3_closed(states[0], states[1], states[2], c.to_qtriple()));
        os << ',' << b[0] << ',' << b[1] << ',' << b[2];
      }
      os << '\n';
    }
  }
  os.precision(old);
}

// --- EPI scan -----------------------------------------------------------------

namespace {

std::mt19937_64 sample_rng(std::uint64_t seed, std::int64_t index, int n, int d) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(d)};
  return std::mt19937_64(seq);
}

DensityMatrix draw_state(std::mt19937_64& rng, int d, bool diagonal) {
  if (diagonal) {
    std::exponential_distribution<double> e(1.0);
    CMatrix m = CMatrix::Zero(d, d);
    double sum = 0.0;
    for (int i = 0; i < d; ++i) sum += (m(i, i) = e(rng)).real();
    return DensityMatrix(m / sum);
  }
  std::uniform_int_distribution<int> rank(1, d);
  return random_density(d, rank(rng), rng);
}

void check_options(const ScanOptions& o) {
  if (o.n != 2 && o.n != 3) throw InvalidArgument("epi-scan: n must be 2 or 3");
  if (o.d < 2 || o.d > 4) throw InvalidArgument("epi-scan: d must lie in 2..4");
  if (o.samples < 1) throw InvalidArgument("epi-scan: samples must be positive");
  (void)entropy_by_name(o.functional);
}

ScanSample evaluate(const ScanOptions& o, const EntropyFunctional& f, std::int64_t index, bool with_params) {
  std::mt19937_64 rng = sample_rng(o.seed, index, o.n, o.d);
  ScanSample s;
  s.index = index;
  if (o.n == 2) {
    const DensityMatrix rho = draw_state(rng, o.d, o.diagonal_states);
    const DensityMatrix sigma = draw_state(rng, o.d, o.diagonal_states);
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const int sign = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
    const DensityMatrix out = combine2(rho, sigma, lambda, sign);
    s.gap = entropy(f, out) - lambda * entropy(f, rho) - (1.0 - lambda) * entropy(f, sigma);
    if (with_params)
      s.params = {{"lambda", lambda}, {"sign", sign}, {"states", json::array({to_json(rho.matrix()), to_json(sigma.matrix())})}};
  } else {
    const QTriple q = sample_q(rng);
    const DensityMatrix r1 = draw_state(rng, o.d, o.diagonal_states);
    const DensityMatrix r2 = draw_state(rng, o.d, o.diagonal_states);
    const DensityMatrix r3 = draw_state(rng, o.d, o.diagonal_states);
    const auto p = q.weights();
    const DensityMatrix out = combine3_closed(r1, r2, r3, q);
    s.gap = entropy(f, out) - p[0] * entropy(f, r1) - p[1] * entropy(f, r2) - p[2] * entropy(f, r3);
    if (with_params)
      s.params = {{"q", to_json(q)["q"]},
                  {"states", json::array({to_json(r1.matrix()), to_json(r2.matrix()), to_json(r3.matrix())})}};
  }
  return s;
}

bool asserted(const ScanOptions& o) { return o.n == 2 && entropy_by_name(o.functional).concave_at(o.d); }

bool better(const ScanSample& a, const ScanSample& b) {
  return a.gap < b.gap || (a.gap == b.gap && a.index < b.index);
}

}  // namespace

ScanSample epi_sample(const ScanOptions& opts, std::int64_t index, bool with_params) {
  check_options(opts);
  return evaluate(opts, entropy_by_name(opts.functional), index, with_params);
}

ScanReport epi_scan(const ScanOptions& opts) {
  check_options(opts);
  const auto start = std::chrono::steady_clock::now();
  const EntropyFunctional f = entropy_by_name(opts.functional);
  int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::int64_t>(threads, opts.samples));

  std::vector<ScanSample> best(static_cast<std::size_t>(threads));
  std::vector<std::vector<std::int64_t>> bad(static_cast<std::size_t>(threads));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  auto work = [&](int w) {
    try {
      ScanSample local;
      local.gap = std::numeric_limits<double>::infinity();
      for (std::int64_t i = w; i < opts.samples; i += threads) {
        ScanSample s = evaluate(opts, f, i, false);
        if (!std::isfinite(s.gap)) throw InvariantViolation("epi-scan: non-finite gap at sample " + std::to_string(i));
        if (opts.n == 3 && s.gap < opts.dump_threshold) bad[static_cast<std::size_t>(w)].push_back(i);
        if (better(s, local)) local = std::move(s);
      }
      best[static_cast<std::size_t>(w)] = std::move(local);
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ScanReport r;
  r.options = opts;
  r.samples = opts.samples;
  r.argmin = best.front();
  for (const auto& b : best)
    if (better(b, r.argmin)) r.argmin = b;
  r.min_gap = r.argmin.gap;

  // Recompute from the seed; the pool must not change any sample.
  const ScanSample again = evaluate(opts, f, r.argmin.index, true);
  const ScanSample first = evaluate(opts, f, 0, false);
  r.reproducible = again.gap == r.argmin.gap && (r.argmin.index != 0 || first.gap == r.argmin.gap);
  if (!r.reproducible) throw InvariantViolation("epi-scan: minimizing sample is not reproducible from its seed");
  r.argmin = again;

  std::vector<std::int64_t> all_bad;
  for (const auto& v : bad) all_bad.insert(all_bad.end(), v.begin(), v.end());
  std::sort(all_bad.begin(), all_bad.end());
  for (std::size_t k = 0; k < all_bad.size() && k < opts.max_dump; ++k)
    r.counterexamples.push_back(evaluate(opts, f, all_bad[k], true));
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (asserted(opts) && r.min_gap < -1e-9)
    throw InvariantViolation("epi-scan: two-state inequality fails at sample " + std::to_string(r.argmin.index) +
                             " (gap " + std::to_string(r.min_gap) + ")");
  return r;
}

json to_json(const ScanReport& r) {
  json ce = json::array();
  for (const auto& s : r.counterexamples) ce.push_back({{"index", s.index}, {"gap", s.gap}, {"params", s.params}});
  const auto& o = r.options;
  json report = {{"n", o.n},
                 {"functional", o.functional},
                 {"d", o.d},
                 {"seed", o.seed},
                 {"samples", r.samples},
                 {"diagonal_states", o.diagonal_states},
                 {"asserted", asserted(o)},
                 {"min_gap", r.min_gap},
                 {"argmin", {{"index", r.argmin.index}, {"gap", r.argmin.gap}, {"params", r.argmin.params}}},
                 {"reproducible", r.reproducible},
                 {"counterexample_threshold", o.dump_threshold},
                 {"counterexamples", ce}};
  return {{"format", kFormat}, {"report", report}, {"timing", {{"elapsed_seconds", r.elapsed_seconds}}}};
}

// --- flat search --------------------------------------------------------------

json run_flat_search(int attempts, std::uint64_t seed) {
  if (attempts < 1) throw InvalidArgument("flat-search: attempts must be positive");
  FlatSearchOptions opts;
  opts.attempts = attempts;
  opts.seed = seed;
  const auto found = flat_unitary_search(irreps_s3(), opts);
  json list = json::array();
  for (const auto& z : found) {
    double flat = 0.0;
    for (int g = 0; g < z.group.order(); ++g) flat = std::max(flat, std::abs(std::norm(z[g]) - 1.0 / 6.0));
    list.push_back({{"z", to_json(z)},
                    {"flatness_error", flat},
                    {"unitarity_residual", unitarity_residual(regular_lincomb(z))}});
  }
  return {{"format", kFormat}, {"attempts", attempts}, {"seed", seed}, {"count", found.size()}, {"solutions", list}};
}

}  // namespace qmix
