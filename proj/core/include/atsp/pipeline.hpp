#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atsp/check.hpp"
#include "atsp/graph.hpp"
#include "atsp/io.hpp"
#include "atsp/rational.hpp"

namespace atsp {

struct TourVerdict {
  bool ok = false;
  std::string reason;               // empty when ok
  std::vector<EdgeId> walk;         // closed walk when ok
  std::vector<VertexId> vertices;   // walk as a vertex sequence, start repeated at the end
};

// Eulerian, connected and spanning (every vertex has an edge unless n = 1).
TourVerdict verify_tour(const Digraph& g, const EdgeMultiset& F);

struct PipelineOptions {
  Rational epsilon = 1;
  bool oracle = false;      // also compute the Held-Karp optimum
  bool check_all = true;    // evaluate every guarantee check
};

struct RunReport {
  std::string name;
  int n = 0;
  int m = 0;
  Rational epsilon;
  Rational lp_value;
  Rational tour_cost;
  Rational ratio;
  std::optional<Rational> held_karp_opt;
  bool verified = false;
  std::vector<VertexId> tour;
  int family_size = 0;
  int reduction_calls = 0;
  int lp_rounds = 0;
  int lp_cuts = 0;
  std::map<std::string, double> seconds;
  CheckCounters counters;
};

// Solves, verifies and optionally runs the exact oracle. Guarantee failures
// surface as InternalError with the stage label of the failing check.
RunReport run_pipeline(const NamedInstance& inst, const PipelineOptions& options);

// Keys sorted; identical inputs give identical text apart from "seconds".
std::string report_to_json(const RunReport& report, bool with_timings = true);

}  // namespace atsp
