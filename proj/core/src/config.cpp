// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fermiflow/errors.hpp"
#include "fermiflow/fock.hpp"

namespace fermiflow {

namespace {

using json = nlohmann::json;

struct Path {
  std::vector<std::string> keys;  // "[i]" for array positions

  Path operator/(const std::string& k) const {
    Path p = *this;
    p.keys.push_back(k);
    return p;
  }
  Path operator/(std::size_t i) const {
    Path p = *this;
    p.keys.push_back("[" + std::to_string(i) + "]");
    return p;
  }
  std::string str() const {
    std::string s;
    for (const auto& k : keys) s += (k.front() == '[' ? "" : "/") + k;
    return s.empty() ? "/" : s;
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  int line_at(std::size_t byte) const {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text_.size(); ++i)
      if (text_[i] == '\n') ++line;
    return line;
  }

  // Walks the raw text along the path; good enough to point at the offending entry.
  int line_of(const Path& path) const {
    std::size_t pos = 0;
    for (const auto& k : path.keys) {
      if (k.front() == '[') {
        const std::size_t n = std::stoul(k.substr(1));
        const std::size_t open = text_.find('[', pos);
        if (open == std::string::npos) break;
        pos = open + 1;
        int depth = 0;
        std::size_t seen = 0;
        for (std::size_t i = pos; i < text_.size(); ++i) {
          const char c = text_[i];
          if ((c == '{' || c == '[') && depth++ == 0 && seen++ == n) {
            pos = i;
            break;
          }
          if (c == '}' || c == ']') --depth;
        }
      } else {
        const std::size_t at = text_.find("\"" + k + "\"", pos);
        if (at == std::string::npos) break;
        pos = at;
      }
    }
    return line_at(pos);
  }

  [[noreturn]] void fail(const Path& path, const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_of(path)) + ": " + path.str() + ": " + what);
  }

  void only(const json& obj, const Path& path, std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail(path / key, "unknown key");
    }
  }

  double number(const json& v, const Path& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  int integer(const json& v, const Path& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
  }

  std::string string(const json& v, const Path& path, std::initializer_list<const char*> choices) const {
    if (!v.is_string()) fail(path, "expected a string");
    const std::string s = v.get<std::string>();
    std::string list;
    for (const char* c : choices) {
      if (s == c) return s;
      list += std::string(list.empty() ? "" : ", ") + c;
    }
    fail(path, "'" + s + "' is not one of " + list);
  }

  bool boolean(const json& v, const Path& path) const {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
  }

 private:
  const std::string& text_;
};

ExperimentKind kind_from(const std::string& s) {
  if (s == "convergence") return ExperimentKind::kConvergence;
  if (s == "tree-truncation") return ExperimentKind::kTreeTruncation;
  if (s == "egorov") return ExperimentKind::kEgorov;
  if (s == "conservation") return ExperimentKind::kConservation;
  return ExperimentKind::kGraphCount;
}

json normalized(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  json sys = {{"h", c.system.h}, {"tau", c.system.tau}, {"w", c.system.w}, {"g", c.system.g}};
  if (c.system.d) sys["d"] = *c.system.d;
  if (c.system.h == "molecule") sys["depth"] = c.system.depth;
  j["system"] = sys;
  json sweep = json::array();
  for (const auto& s : c.sweep) {
    if (c.experiment == ExperimentKind::kGraphCount) {
      json e = {{"p", s.p}, {"k", s.k}};
      if (s.l) e["l"] = *s.l;
      sweep.push_back(e);
    } else {
      sweep.push_back({{"N", s.N}, {"t", s.t}});
    }
  }
  j["sweep"] = sweep;
  j["p"] = c.p;
  j["initial"] = c.initial;
  j["observable"] = c.observable;
  j["integrator"] = {{"dt", c.integrator.dt}, {"record_every", c.integrator.record_every}};
  j["quadrature"] = {{"nodes_per_level", c.quadrature.nodes_per_level}, {"K_max", c.quadrature.K_max}};
  j["seed"] = c.seed;
  j["override_time_guard"] = c.override_time_guard;
  return j;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kConvergence: return "convergence";
    case ExperimentKind::kTreeTruncation: return "tree-truncation";
    case ExperimentKind::kEgorov: return "egorov";
    case ExperimentKind::kConservation: return "conservation";
    case ExperimentKind::kGraphCount: return "graph-count";
  }
  return "unknown";
}

ModeSystem SystemSpec::build(int N) const {
  const int n = modes(N);
  const Matrix hm = h == "molecule" ? molecule_chain(n, tau, depth) : hopping_chain(n, tau);
  if (w == "none") return ModeSystem(hm, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  return ModeSystem(hm, soft_coulomb(g));
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Parser p(text);
    throw ConfigError("line " + std::to_string(p.line_at(e.byte)) + ": malformed JSON");
  }
  const Parser ps(text);
  const Path root;
  ps.only(doc, root,
          {"experiment", "system", "sweep", "p", "initial", "observable", "integrator", "quadrature", "seed",
           "override_time_guard", "output"});

  ExperimentConfig c;
  if (!doc.contains("experiment")) ps.fail(root, "missing key 'experiment'");
  c.experiment = kind_from(ps.string(doc["experiment"], root / "experiment",
                                     {"convergence", "tree-truncation", "egorov", "conservation", "graph-count"}));
  const bool counts = c.experiment == ExperimentKind::kGraphCount;

  if (doc.contains("system")) {
    const json& s = doc["system"];
    const Path sp = root / "system";
    ps.only(s, sp, {"d", "h", "tau", "depth", "w", "g"});
    if (s.contains("d")) {
      c.system.d = ps.integer(s["d"], sp / "d");
      if (*c.system.d < 1 || *c.system.d > kMaxModes) ps.fail(sp / "d", "must lie in [1, 30]");
    }
    if (s.contains("h")) c.system.h = ps.string(s["h"], sp / "h", {"hopping", "molecule"});
    if (s.contains("tau")) c.system.tau = ps.number(s["tau"], sp / "tau");
    if (s.contains("depth")) c.system.depth = ps.number(s["depth"], sp / "depth");
    if (s.contains("w")) c.system.w = ps.string(s["w"], sp / "w", {"soft-coulomb", "none"});
    if (s.contains("g")) c.system.g = ps.number(s["g"], sp / "g");
  }
  if (doc.contains("p")) c.p = ps.integer(doc["p"], root / "p");
  if (doc.contains("initial")) c.initial = ps.string(doc["initial"], root / "initial", {"fermi-sea", "random"});
  if (doc.contains("observable"))
    c.observable = ps.string(doc["observable"], root / "observable", {"fermi-sea-projector", "random"});
  if (doc.contains("integrator")) {
    const json& s = doc["integrator"];
    const Path sp = root / "integrator";
    ps.only(s, sp, {"dt", "record_every"});
    if (s.contains("dt")) c.integrator.dt = ps.number(s["dt"], sp / "dt");
    if (s.contains("record_every")) c.integrator.record_every = ps.integer(s["record_every"], sp / "record_every");
    if (!(c.integrator.dt > 0.0)) ps.fail(sp / "dt", "must be positive");
    if (c.integrator.record_every < 1) ps.fail(sp / "record_every", "must be at least 1");
  }
  if (doc.contains("quadrature")) {
    const json& s = doc["quadrature"];
    const Path sp = root / "quadrature";
    ps.only(s, sp, {"nodes_per_level", "K_max"});
    if (s.contains("nodes_per_level"))
      c.quadrature.nodes_per_level = ps.integer(s["nodes_per_level"], sp / "nodes_per_level");
    if (s.contains("K_max")) c.quadrature.K_max = ps.integer(s["K_max"], sp / "K_max");
    if (c.quadrature.nodes_per_level < 2 || c.quadrature.nodes_per_level > 64)
      ps.fail(sp / "nodes_per_level", "must lie in [2, 64]");
    if (c.quadrature.K_max < 0 || c.quadrature.K_max > 8) ps.fail(sp / "K_max", "must lie in [0, 8]");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) ps.fail(root / "seed", "expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("override_time_guard"))
    c.override_time_guard = ps.boolean(doc["override_time_guard"], root / "override_time_guard");
  if (doc.contains("output")) {
    const json& s = doc["output"];
    const Path sp = root / "output";
    ps.only(s, sp, {"path", "format"});
    if (s.contains("path")) {
      if (!s["path"].is_string()) ps.fail(sp / "path", "expected a string");
      c.output.path = s["path"].get<std::string>();
    }
    if (s.contains("format")) c.output.format = ps.string(s["format"], sp / "format", {"csv", "json"});
  }

  if (!doc.contains("sweep")) ps.fail(root, "missing key 'sweep'");
  const json& sw = doc["sweep"];
  if (!sw.is_array() || sw.empty()) ps.fail(root / "sweep", "expected a non-empty array");
  for (std::size_t i = 0; i < sw.size(); ++i) {
    const Path ep = root / "sweep" / i;
    const json& e = sw[i];
    SweepPoint pt;
    if (counts) {
      ps.only(e, ep, {"p", "k", "l"});
      if (!e.contains("p") || !e.contains("k")) ps.fail(ep, "graph-count entries need 'p' and 'k'");
      pt.p = ps.integer(e["p"], ep / "p");
      pt.k = ps.integer(e["k"], ep / "k");
      if (pt.p < 0 || pt.p > 3) ps.fail(ep / "p", "must lie in [0, 3]");
      if (pt.k < 0 || pt.k > 5) ps.fail(ep / "k", "must lie in [0, 5]");
      if (e.contains("l")) {
        pt.l = ps.integer(e["l"], ep / "l");
        if (*pt.l < 0 || *pt.l > pt.k) ps.fail(ep / "l", "must lie in [0, k]");
      }
    } else {
      ps.only(e, ep, {"N", "t"});
      if (!e.contains("N") || !e.contains("t")) ps.fail(ep, "entries need 'N' and 't'");
      pt.N = ps.integer(e["N"], ep / "N");
      pt.t = ps.number(e["t"], ep / "t");
      const int d = c.system.modes(pt.N);
      if (pt.N < 1) ps.fail(ep / "N", "must be positive");
      if (pt.N > d) ps.fail(ep / "N", "exceeds the mode count d = " + std::to_string(d));
      if (d > kMaxModes) ps.fail(ep / "N", "mode count beyond 30");
      if (!(pt.t >= 0.0)) ps.fail(ep / "t", "must be non-negative");
      if (c.experiment == ExperimentKind::kConvergence && (c.p < 1 || c.p > pt.N))
        ps.fail(root / "p", "must lie in [1, N] for every sweep entry");
      if (c.experiment == ExperimentKind::kTreeTruncation && pt.t > 0.5) ps.fail(ep / "t", "must not exceed 0.5");
      if (c.experiment == ExperimentKind::kTreeTruncation && (c.p < 1 || c.p > pt.N))
        ps.fail(root / "p", "must lie in [1, N] for every sweep entry");
      if (c.experiment == ExperimentKind::kEgorov) {
        if (d > kMaxFockModes) ps.fail(ep / "N", "Egorov checks are limited to d <= 14");
        if (c.p < 1 || c.p > pt.N) ps.fail(root / "p", "must lie in [1, N] for every sweep entry");
      }
    }
    c.sweep.push_back(pt);
  }

  c.canonical = normalized(c).dump();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(c.canonical)));
  c.hash = buf;
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

}  // namespace fermiflow
