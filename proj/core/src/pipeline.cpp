#include "atsp/pipeline.hpp"

#include <chrono>

#include <json.hpp>

#include "atsp/errors.hpp"
#include "atsp/held_karp.hpp"
#include "atsp/vertebrate.hpp"

namespace atsp {

namespace {

// Restores the global bound-check switch on scope exit.
class BoundCheckScope {
 public:
  explicit BoundCheckScope(bool on) : saved_(bound_checks_enabled()) { set_bound_checks_enabled(on); }
  ~BoundCheckScope() { set_bound_checks_enabled(saved_); }
  BoundCheckScope(const BoundCheckScope&) = delete;
  BoundCheckScope& operator=(const BoundCheckScope&) = delete;

 private:
  bool saved_;
};

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TourVerdict verify_tour(const Digraph& g, const EdgeMultiset& F) {
  TourVerdict v;
  const int n = g.num_vertices();
  if (F.universe() != g.num_edges()) {
    v.reason = "edge multiset does not match the graph";
    return v;
  }
  EulerianCheck chk = is_eulerian_connected(g, F);
  if (!chk.eulerian) {
    v.reason = "not Eulerian";
    return v;
  }
  if (n == 1) {
    v.ok = F.empty();
    if (!v.ok) v.reason = "single vertex with edges";
    v.vertices = {0};
    return v;
  }
  std::vector<char> touched(n, 0);
  for (EdgeId e : F.support()) touched[g.edge(e).tail] = touched[g.edge(e).head] = 1;
  for (VertexId u = 0; u < n; ++u) {
    if (!touched[u]) {
      v.reason = "vertex " + std::to_string(u) + " is not visited";
      return v;
    }
  }
  if (!chk.connected()) {
    v.reason = "not connected";
    return v;
  }
  v.walk = euler_walk(g, F, 0);
  v.vertices.push_back(0);
  for (EdgeId e : v.walk) v.vertices.push_back(g.edge(e).head);
  v.ok = true;
  return v;
}

RunReport run_pipeline(const NamedInstance& inst, const PipelineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  BoundCheckScope scope(options.check_all);
  reset_check_counters();
  const Digraph& g = inst.graph;
  RunReport r;
  r.name = inst.name;
  r.n = g.num_vertices();
  r.m = g.num_edges();
  r.epsilon = options.epsilon;

  SolveStats st;
  TourCertificate cert = solve_atsp(g, options.epsilon, &st);
  r.lp_value = cert.lp_value;
  r.tour_cost = cert.cost;
  r.ratio = cert.ratio;
  r.family_size = st.family_size;
  r.reduction_calls = st.reduction.calls;
  r.lp_rounds = st.lp.rounds;
  r.lp_cuts = st.lp.cuts;
  r.seconds["lp"] = st.seconds_lp;
  r.seconds["reduction"] = st.seconds_reduction;

  auto t = std::chrono::steady_clock::now();
  TourVerdict verdict = verify_tour(g, cert.tour);
  ATSP_CHECK("verify", verdict.ok, "returned tour is invalid: " + verdict.reason);
  r.verified = true;
  r.tour = verdict.vertices;
  r.seconds["verify"] = since(t);

  if (options.oracle) {
    t = std::chrono::steady_clock::now();
    Rational opt = held_karp_opt(g);
    r.seconds["oracle"] = since(t);
    ATSP_CHECK("oracle", r.lp_value <= opt, "LP value above the optimum");
    ATSP_CHECK("oracle", opt <= r.tour_cost, "tour cheaper than the optimum");
    r.held_karp_opt = opt;
  }
  r.seconds["total"] = since(start);
  r.counters = check_counters();
  return r;
}

std::string report_to_json(const RunReport& r, bool with_timings) {
  nlohmann::json j;
  j["name"] = r.name;
  j["n"] = r.n;
  j["m"] = r.m;
  j["epsilon"] = to_string(r.epsilon);
  j["lp_value"] = to_string(r.lp_value);
  j["tour_cost"] = to_string(r.tour_cost);
  j["ratio"] = to_string(r.ratio);
  j["ratio_approx"] = r.ratio.get_d();
  j["held_karp_opt"] = r.held_karp_opt ? nlohmann::json(to_string(*r.held_karp_opt)) : nlohmann::json(nullptr);
  j["verified"] = r.verified;
  j["tour"] = r.tour;
  j["family_size"] = r.family_size;
  j["reduction_calls"] = r.reduction_calls;
  j["lp_rounds"] = r.lp_rounds;
  j["lp_cuts"] = r.lp_cuts;
  j["checks"] = r.counters;
  if (with_timings) j["seconds"] = r.seconds;
  return j.dump(2) + "\n";
}

}  // namespace atsp
