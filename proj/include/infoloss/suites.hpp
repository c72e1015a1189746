#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "infoloss/loss.hpp"
#include "infoloss/markov_source.hpp"
#include "infoloss/random_instances.hpp"
#include "infoloss/system.hpp"

namespace infoloss {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t instances = 100;
  /// Longest block used by rate brackets.
  std::size_t max_n = 12;
  AnalysisCaps caps{kDefaultStateCap, std::uint64_t{1} << 20};
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct SuiteCase {
  std::size_t index = 0;
  bool passed = false;
  /// Short description of the generated instance.
  std::string instance;
  /// Measured quantities; on failure also the full instance dump.
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<SuiteCase> cases;  // ordered by index

  std::size_t passed() const;
  bool all_passed() const { return passed() == cases.size(); }
};

/// dpi, thm1-identity, thm2-bound, thm3-additivity, thm4-finite,
/// cor2-lossless, zoo-all.
const std::vector<std::string>& suite_names();

/// Throws ValidationError for an unknown name. Individual instances that
/// throw are reported as failures carrying the exception message.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

/// Calls fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

struct RandomInstance {
  MarkovSource source;
  SystemSpec system;
};

/// Instance `index` of the general generator: |X|, |Y| in [2, 3], N, M in
/// [0, 2], a Dirichlet Markov source; one in four systems is partially
/// invertible by construction.
RandomInstance general_instance(std::uint64_t seed, std::size_t index);
/// Same sizes, always partially invertible (|Y| >= |X|).
RandomInstance invertible_instance(std::uint64_t seed, std::size_t index);

std::string describe(const SystemSpec& system);
/// Transition matrix and update table at full precision.
std::string dump(const MarkovSource& source, const SystemSpec& system);

}  // namespace infoloss
