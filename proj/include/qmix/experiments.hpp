// Drivers behind the command-line tool. Each takes a parsed JSON config and
// returns a JSON document; errors surface as the library exceptions plus
// InvariantViolation, which signals an internal inconsistency.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qmix/io.hpp"
#include "qmix/linkage.hpp"

namespace qmix {

/// A result that contradicts a proven identity; always a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Process exit status for an exception: 2 usage/config, 3 domain
/// constraint, 4 invariant violation, 1 anything else.
int exit_code_for(const std::exception& e);

// --- synth --------------------------------------------------------------------

/// {"group": "s3", "blocks": [...]} or {"group": "s3", "phi1", "phi2", "a", "c"}
/// or {"group": "z_n", "n": n, "phases": [...]}.
json run_synth(const json& config);

// --- combine ------------------------------------------------------------------

/// {"states": [...], "mode": "closed" | "magic" | "brute", plus "lambda"/"sign"
/// for two states or one of "q", "pdelta", "z", "nested" for three}. With
/// verify, all three evaluators run and must agree within 1e-10
/// (InvariantViolation otherwise).
json run_combine(const json& config, bool verify);

// --- orbit --------------------------------------------------------------------

/// MUB qubit states along +x, +y, +z.
std::array<DensityMatrix, 3> mub_states();

struct OrbitRun {
  std::vector<Orbit> orbits;
  json summary;
};

/// {"weights": [p1, p2, p3]} or {"spec": {"a", "b", "c"}}; "steps" overrides
/// the argument.
OrbitRun run_orbit(const json& config, int steps);

/// Orbit CSV plus nested flag (|cos delta| < 1e-9) and, with mub, the Bloch
/// vector of the combined MUB states.
void write_orbit_table(std::ostream& os, const std::vector<Orbit>& orbits, bool mub);

// --- EPI scan -----------------------------------------------------------------

struct ScanOptions {
  int n = 2;                        // number of combined states, 2 or 3
  std::string functional = "von_neumann";
  std::int64_t samples = 10000;
  int d = 2;                        // 2..4
  std::uint64_t seed = 1;
  int threads = 0;                  // 0: hardware concurrency
  bool diagonal_states = false;     // draw mutually commuting states
  double dump_threshold = -1e-6;    // n = 3 samples below this are kept
  std::size_t max_dump = 100;
};

struct ScanSample {
  std::int64_t index = -1;
  double gap = 0.0;
  json params;
};

struct ScanReport {
  ScanOptions options;
  std::int64_t samples = 0;
  double min_gap = 0.0;
  ScanSample argmin;
  bool reproducible = false;
  std::vector<ScanSample> counterexamples;
  double elapsed_seconds = 0.0;
};

/// Evaluates one sample from its own (seed, index) stream.
ScanSample epi_sample(const ScanOptions& opts, std::int64_t index, bool with_params = false);

/// Runs the scan. For n = 2 with a functional concave at dimension d, a gap
/// below -1e-9 throws InvariantViolation. The
/// minimizing sample is recomputed from its seed and must match bit for bit.
ScanReport epi_scan(const ScanOptions& opts);

/// Deterministic part under "report"; wall-clock time under "timing".
json to_json(const ScanReport& r);

// --- flat search --------------------------------------------------------------

json run_flat_search(int attempts, std::uint64_t seed);

}  // namespace qmix
