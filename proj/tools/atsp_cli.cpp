// atsp: solve, verify, generate and check ATSP instances.
//
//   atsp solve inst.json [more.json ...] [--epsilon 1] [--oracle] [--jobs 4]
//   atsp verify inst.json report.json
//   atsp gen --model two-cluster --n 6 --seed 0 [--format tsplib]
//   atsp oracle inst.json
//
// Exit codes: 0 ok, 1 invalid input (or an invalid tour for verify),
// 2 internal check failure.

#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "atsp/errors.hpp"
#include "atsp/generators.hpp"
#include "atsp/held_karp.hpp"
#include "atsp/io.hpp"
#include "atsp/lp.hpp"
#include "atsp/pipeline.hpp"

namespace {

using namespace atsp;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

std::string slurp(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

NamedInstance load(const std::string& path, const std::string& format) {
  std::string text = slurp(path);
  NamedInstance inst;
  if (format == "json") {
    inst = parse_instance(text, InstanceFormat::kJson);
  } else if (format == "tsplib") {
    inst = parse_instance(text, InstanceFormat::kTsplib);
  } else {
    inst = parse_instance(text);
  }
  if (inst.name == "instance" && path != "-") inst.name = path;
  return inst;
}

// Runs f and maps exceptions to exit codes with a message on stderr.
template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const InternalError& e) {
    std::cerr << "internal check failed " << e.what() << "\n";
    return kExitInternal;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

struct SolveArgs {
  std::vector<std::string> files;
  std::string epsilon = "1";
  std::string format = "auto";
  bool oracle = false;
  bool check_all = true;
  bool timings = true;
  int jobs = 1;
};

int run_solve(const SolveArgs& a) {
  PipelineOptions opt;
  opt.epsilon = parse_rational(a.epsilon);
  if (sgn(opt.epsilon) <= 0) throw InputError("--epsilon must be positive");
  opt.oracle = a.oracle;
  opt.check_all = a.check_all;

  struct Outcome {
    int code = kExitOk;
    std::string text;
  };
  auto one = [&](const std::string& path) {
    Outcome out;
    out.code = guarded([&] {
      NamedInstance inst = load(path, a.format);
      out.text = report_to_json(run_pipeline(inst, opt), a.timings);
      return kExitOk;
    });
    return out;
  };

  std::vector<Outcome> results(a.files.size());
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, a.jobs));
  for (std::size_t base = 0; base < a.files.size(); base += jobs) {
    std::vector<std::future<Outcome>> running;
    for (std::size_t i = base; i < std::min(a.files.size(), base + jobs); ++i) {
      running.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, one, a.files[i]));
    }
    for (std::size_t k = 0; k < running.size(); ++k) results[base + k] = running[k].get();
  }
  int code = kExitOk;
  for (const Outcome& r : results) {
    std::cout << r.text;
    code = std::max(code, r.code);
  }
  return code;
}

int run_verify(const std::string& inst_path, const std::string& tour_path, const std::string& format) {
  NamedInstance inst = load(inst_path, format);
  const Digraph& g = inst.graph;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(slurp(tour_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("tour file is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tour") || !doc["tour"].is_array()) {
    throw InputError("tour file needs a \"tour\" array of vertices");
  }
  std::vector<VertexId> seq;
  for (const auto& v : doc["tour"]) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() >= g.num_vertices()) {
      throw InputError("tour vertex out of range");
    }
    seq.push_back(static_cast<VertexId>(v.get<long long>()));
  }
  // Consecutive vertices use the cheapest parallel arc.
  std::map<std::pair<VertexId, VertexId>, EdgeId> cheapest;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    auto key = std::make_pair(g.edge(e).tail, g.edge(e).head);
    auto it = cheapest.find(key);
    if (it == cheapest.end() || g.edge(e).cost < g.edge(it->second).cost) cheapest[key] = e;
  }
  EdgeMultiset F(g.num_edges());
  std::string problem;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    auto it = cheapest.find({seq[i], seq[i + 1]});
    if (it == cheapest.end()) {
      problem = "no arc " + std::to_string(seq[i]) + " -> " + std::to_string(seq[i + 1]);
      break;
    }
    F.add(it->second);
  }
  if (problem.empty() && !seq.empty() && seq.front() != seq.back()) problem = "walk is not closed";
  TourVerdict v;
  if (problem.empty()) {
    v = verify_tour(g, F);
    problem = v.reason;
  }
  nlohmann::json out;
  out["name"] = inst.name;
  out["valid"] = problem.empty();
  out["reason"] = problem;
  out["cost"] = to_string(F.cost(g));
  std::cout << out.dump(2) << "\n";
  return problem.empty() ? kExitOk : kExitInput;
}

int run_gen(const std::string& model, int n, std::uint64_t seed, const std::string& format) {
  NamedInstance inst;
  inst.name = model + "-" + std::to_string(n) + "-" + std::to_string(seed);
  inst.graph = gen_instance(parse_model(model), n, seed);
  std::cout << (format == "tsplib" ? write_tsplib(inst) : write_json(inst));
  return kExitOk;
}

int run_oracle(const std::string& path, const std::string& format) {
  NamedInstance inst = load(path, format);
  nlohmann::json out;
  out["name"] = inst.name;
  out["held_karp_opt"] = to_string(held_karp_opt(inst.graph));
  out["lp_value"] = inst.graph.num_vertices() > 1 ? to_string(solve_atsp_lp(inst.graph).first.objective) : "0";
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ATSP approximation with exact certificates"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "solve instances and print JSON run reports");
  s->add_option("files", solve.files, "instance files (JSON or TSPLIB), '-' for stdin")->required();
  s->add_option("--epsilon", solve.epsilon, "epsilon > 0 as a decimal or p/q")->capture_default_str();
  s->add_option("--format", solve.format, "input format")->check(CLI::IsMember({"auto", "json", "tsplib"}));
  s->add_flag("--oracle", solve.oracle, "also compute the Held-Karp optimum (n <= 18)");
  s->add_flag("--check-all,!--no-check-all", solve.check_all, "evaluate every guarantee check (default on)");
  s->add_flag("!--no-timings", solve.timings, "omit timings so reports are byte-identical across runs");
  s->add_option("--jobs", solve.jobs, "instances solved in parallel")->check(CLI::PositiveNumber);

  std::string v_inst, v_tour, v_format = "auto";
  auto* v = app.add_subcommand("verify", "check a closed walk against an instance");
  v->add_option("instance", v_inst)->required();
  v->add_option("tour", v_tour, "JSON with a \"tour\" vertex array, e.g. a solve report")->required();
  v->add_option("--format", v_format)->check(CLI::IsMember({"auto", "json", "tsplib"}));

  std::string g_model = "random-strong", g_format = "json";
  int g_n = 8;
  std::uint64_t g_seed = 0;
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--model", g_model)->check(CLI::IsMember({"cycle", "random-strong", "two-cluster", "unit-digraph"}));
  gen->add_option("--n", g_n)->check(CLI::PositiveNumber);
  gen->add_option("--seed", g_seed);
  gen->add_option("--format", g_format)->check(CLI::IsMember({"json", "tsplib"}));

  std::string o_inst, o_format = "auto";
  auto* o = app.add_subcommand("oracle", "exact optimum by Held-Karp and the LP value");
  o->add_option("instance", o_inst)->required();
  o->add_option("--format", o_format)->check(CLI::IsMember({"auto", "json", "tsplib"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  if (*s) return guarded([&] { return run_solve(solve); });
  if (*v) return guarded([&] { return run_verify(v_inst, v_tour, v_format); });
  if (*gen) return guarded([&] { return run_gen(g_model, g_n, g_seed, g_format); });
  if (*o) return guarded([&] { return run_oracle(o_inst, o_format); });
  return kExitInput;
}
