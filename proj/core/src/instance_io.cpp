#include "atsp/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "atsp/errors.hpp"

namespace atsp {

namespace {

using nlohmann::json;

void require_strong(const NamedInstance& inst) {
  if (inst.graph.num_vertices() == 0) throw InputError("instance has no vertices");
  if (!is_strongly_connected(inst.graph)) throw InfeasibleInstance("graph is not strongly connected");
}

Rational json_cost(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number_unsigned()) return Rational(std::to_string(v.get<unsigned long long>()));
  if (v.is_number_float()) return parse_rational(v.dump());
  throw InputError("edge cost must be a number or a string");
}

NamedInstance parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("JSON instance must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) throw InputError("missing integer field 'n'");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw InputError("missing array field 'edges'");
  const long long n = doc["n"].get<long long>();
  if (n < 1 || n > 100000) throw InputError("'n' out of range");
  NamedInstance out;
  out.name = doc.value("name", std::string("instance"));
  out.graph = Digraph(static_cast<int>(n));
  for (const json& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw InputError("edge must be [tail, head, cost] with integer endpoints");
    }
    const long long t = e[0].get<long long>(), h = e[1].get<long long>();
    if (t < 0 || t >= n || h < 0 || h >= n) throw InputError("edge endpoint out of range");
    out.graph.add_edge(static_cast<VertexId>(t), static_cast<VertexId>(h), json_cost(e[2]));
  }
  require_strong(out);
  return out;
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

NamedInstance parse_tsplib(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  NamedInstance out;
  out.name = "instance";
  long long n = -1;
  std::string type, wtype, wformat;
  bool section = false;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (upper(t).rfind("EDGE_WEIGHT_SECTION", 0) == 0) {
      section = true;
      break;
    }
    auto colon = t.find(':');
    if (colon == std::string::npos) throw InputError("malformed TSPLIB header line '" + t + "'");
    std::string key = upper(trim(t.substr(0, colon)));
    std::string value = trim(t.substr(colon + 1));
    if (key == "NAME") {
      out.name = value;
    } else if (key == "TYPE") {
      type = upper(value);
    } else if (key == "DIMENSION") {
      try {
        n = std::stoll(value);
      } catch (const std::exception&) {
        throw InputError("bad DIMENSION '" + value + "'");
      }
    } else if (key == "EDGE_WEIGHT_TYPE") {
      wtype = upper(value);
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      wformat = upper(value);
    }
  }
  if (!section) throw InputError("missing EDGE_WEIGHT_SECTION");
  if (type != "ATSP") throw InputError("only TYPE: ATSP is supported");
  if (!wtype.empty() && wtype != "EXPLICIT") throw InputError("only EDGE_WEIGHT_TYPE: EXPLICIT is supported");
  if (wformat != "FULL_MATRIX") throw InputError("only EDGE_WEIGHT_FORMAT: FULL_MATRIX is supported");
  if (n < 1 || n > 100000) throw InputError("missing or invalid DIMENSION");
  out.graph = Digraph(static_cast<int>(n));
  std::string tok;
  for (long long k = 0; k < n * n; ++k) {
    if (!(in >> tok) || upper(tok) == "EOF") throw InputError("matrix has fewer than DIMENSION^2 entries");
    Rational c = parse_rational(tok);
    const long long i = k / n, j = k % n;
    if (i != j) out.graph.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j), c);
  }
  if (in >> tok && upper(tok) != "EOF") throw InputError("unexpected data after the matrix: '" + tok + "'");
  require_strong(out);
  return out;
}

}  // namespace

NamedInstance parse_instance(std::string_view text) {
  auto it = std::find_if(text.begin(), text.end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
  if (it == text.end()) throw InputError("empty instance");
  return parse_instance(text, *it == '{' ? InstanceFormat::kJson : InstanceFormat::kTsplib);
}

NamedInstance parse_instance(std::string_view text, InstanceFormat format) {
  return format == InstanceFormat::kJson ? parse_json(text) : parse_tsplib(text);
}

NamedInstance read_instance_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_instance(buf.str());
}

std::string write_json(const NamedInstance& inst) {
  json doc;
  doc["name"] = inst.name;
  doc["n"] = inst.graph.num_vertices();
  json edges = json::array();
  for (const Edge& e : inst.graph.edges()) edges.push_back({e.tail, e.head, to_string(e.cost)});
  doc["edges"] = std::move(edges);
  return doc.dump(1) + "\n";
}

std::string write_tsplib(const NamedInstance& inst) {
  const Digraph& g = inst.graph;
  const int n = g.num_vertices();
  // Shortest-path closure fills the arcs the graph lacks; tours and the LP
  // value are the same on the closure.
  std::vector<std::vector<std::optional<Rational>>> d(n, std::vector<std::optional<Rational>>(n));
  for (const Edge& e : g.edges()) {
    if (!d[e.tail][e.head] || e.cost < *d[e.tail][e.head]) d[e.tail][e.head] = e.cost;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (i == k || !d[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (j == k || j == i || !d[k][j]) continue;
        Rational via = *d[i][k] + *d[k][j];
        if (!d[i][j] || via < *d[i][j]) d[i][j] = std::move(via);
      }
    }
  }
  std::ostringstream out;
  out << "NAME: " << inst.name << "\nTYPE: ATSP\nDIMENSION: " << n
      << "\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ' ';
      if (i == j) {
        out << 0;
        continue;
      }
      if (!d[i][j]) throw InfeasibleInstance("graph is not strongly connected");
      out << to_string(*d[i][j]);
    }
    out << "\n";
  }
  out << "EOF\n";
  return out.str();
}

}  // namespace atsp
