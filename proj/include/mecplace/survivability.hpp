#pragma once

#include <span>
#include <string>
#include <vector>

#include "mecplace/model.hpp"

namespace mecplace {

// A single fault: one whole server, or one pooled VNF instance entry.
struct FailureScenario {
  enum class Kind { VnfInstance, Server };

  Kind kind = Kind::Server;
  int site = 0;
  int server = 0;
  SlotKey instance;  // valid when kind == VnfInstance
  std::vector<int> affected_requests;  // requests whose primary or backup is hit

  std::string describe() const;
};

// One scenario per active server plus one per instance entry.
std::vector<FailureScenario> enumerate_single_failures(const Solution& s);

struct SurvivalVerdict {
  int request = 0;
  bool survives = true;
  std::string reason;  // set when the request does not survive
};

// Verdict per affected request: a primary-hit request survives iff its backup
// is untouched and the backup slot alone still meets the delay bound and its
// pooled throughput reservation. Backup-only hits keep running on the
// primary. Throws when the scenario's target is absent from the solution.
std::vector<SurvivalVerdict> survives(const Solution& s, const FailureScenario& f,
                                      const PlacementInstance& inst);

// Same, with several simultaneous faults (used to show double failures are
// not covered by 1+1 protection).
std::vector<SurvivalVerdict> survives(const Solution& s, std::span<const FailureScenario> faults,
                                      const PlacementInstance& inst);

}  // namespace mecplace
