#include "gridrisk/scenario.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "gridrisk/error.hpp"
#include "gridrisk/numfmt.hpp"

namespace gridrisk {
namespace {

namespace fs = std::filesystem;

// Error messages name the file, the section and the field.
class Reader {
 public:
  explicit Reader(fs::path file) : file_(std::move(file)) {}

  [[noreturn]] void fail(std::string_view section, std::string_view field, const std::string& msg) const {
    std::string where = file_.string() + ": [" + std::string(section) + "]";
    if (!field.empty()) where += " " + std::string(field);
    throw ValidationError(where + ": " + msg);
  }

  void only_keys(const toml::table& t, std::string_view section, std::set<std::string_view> allowed) const {
    for (const auto& [k, v] : t) {
      if (!allowed.contains(k.str())) fail(section, k.str(), "unknown key");
    }
  }

  const toml::table* table(const toml::table& t, std::string_view key, std::string_view section) const {
    const auto* node = t.get(key);
    if (node == nullptr) return nullptr;
    if (!node->is_table()) fail(section, key, "expected a table");
    return node->as_table();
  }

  std::optional<double> number(const toml::table& t, std::string_view key, std::string_view section) const {
    const auto* node = t.get(key);
    if (node == nullptr) return std::nullopt;
    if (auto v = node->value<double>(); v && (node->is_floating_point() || node->is_integer())) return *v;
    fail(section, key, "expected a number");
  }

  std::optional<std::int64_t> integer(const toml::table& t, std::string_view key, std::string_view section) const {
    const auto* node = t.get(key);
    if (node == nullptr) return std::nullopt;
    if (!node->is_integer()) fail(section, key, "expected an integer");
    return node->value<std::int64_t>();
  }

  std::optional<std::size_t> count(const toml::table& t, std::string_view key, std::string_view section) const {
    auto v = integer(t, key, section);
    if (!v) return std::nullopt;
    if (*v < 0) fail(section, key, "must be non-negative");
    return static_cast<std::size_t>(*v);
  }

  std::optional<std::string> string(const toml::table& t, std::string_view key, std::string_view section) const {
    const auto* node = t.get(key);
    if (node == nullptr) return std::nullopt;
    if (!node->is_string()) fail(section, key, "expected a string");
    return node->value<std::string>();
  }

  std::optional<bool> boolean(const toml::table& t, std::string_view key, std::string_view section) const {
    const auto* node = t.get(key);
    if (node == nullptr) return std::nullopt;
    if (!node->is_boolean()) fail(section, key, "expected true or false");
    return node->value<bool>();
  }

  template <class T>
  T required(std::optional<T> v, std::string_view section, std::string_view key) const {
    if (!v) fail(section, key, "missing");
    return *v;
  }

  // Module errors are re-raised with the file and section attached.
  template <class F>
  auto wrap(std::string_view section, F&& f) const {
    try {
      return f();
    } catch (const ParseError& e) {
      throw ParseError(file_.string() + ": [" + std::string(section) + "]: " + e.what());
    } catch (const InputError& e) {
      fail(section, "", e.what());
    }
  }

  fs::path resolve(const std::string& p) const {
    fs::path path(p);
    return path.is_absolute() ? path : file_.parent_path() / path;
  }

 private:
  fs::path file_;
};

Fleet read_fleet(const Reader& r, const toml::table* t) {
  if (t == nullptr) r.fail("fleet", "", "missing section");
  r.only_keys(*t, "fleet", {"path", "unit"});
  auto path = r.string(*t, "path", "fleet");
  const auto* units = t->get("unit");
  if (path && units) r.fail("fleet", "unit", "give either path or inline units, not both");
  if (path) {
    auto file = r.resolve(*path);
    if (!fs::exists(file)) r.fail("fleet", "path", "fleet file not found: " + file.string());
    return r.wrap("fleet", [&] { return load_fleet_file(file); });
  }
  if (units == nullptr || !units->is_array_of_tables()) r.fail("fleet", "path", "missing (or give [[fleet.unit]] entries)");
  std::vector<GeneratorUnit> out;
  for (const auto& node : *units->as_array()) {
    const auto& u = *node.as_table();
    r.only_keys(u, "fleet.unit", {"id", "capacity_mw", "forced_outage_rate", "cyber_exposed"});
    out.push_back({r.required(r.string(u, "id", "fleet.unit"), "fleet.unit", "id"),
                   r.required(r.number(u, "capacity_mw", "fleet.unit"), "fleet.unit", "capacity_mw"),
                   r.required(r.number(u, "forced_outage_rate", "fleet.unit"), "fleet.unit", "forced_outage_rate"),
                   r.boolean(u, "cyber_exposed", "fleet.unit").value_or(false)});
  }
  return r.wrap("fleet", [&] { return Fleet(std::move(out)); });
}

std::pair<LoadSource, LoadProfile> read_load(const Reader& r, const toml::table* t) {
  if (t == nullptr) r.fail("load", "", "missing section");
  r.only_keys(*t, "load", {"path", "annual_peak_mw", "base_fraction", "peak_hour"});
  if (auto path = r.string(*t, "path", "load")) {
    if (t->size() != 1) r.fail("load", "path", "a load file excludes synthetic profile parameters");
    auto file = r.resolve(*path);
    if (!fs::exists(file)) r.fail("load", "path", "load file not found: " + file.string());
    auto profile = r.wrap("load", [&] { return load_profile_file(file); });
    return {LoadFromFile{file}, std::move(profile)};
  }
  SynthProfileParams p;
  p.annual_peak_mw = r.required(r.number(*t, "annual_peak_mw", "load"), "load", "annual_peak_mw");
  p.base_fraction = r.required(r.number(*t, "base_fraction", "load"), "load", "base_fraction");
  p.peak_hour = r.count(*t, "peak_hour", "load").value_or(4380);
  auto profile = r.wrap("load", [&] { return synth_profile(p); });
  return {p, std::move(profile)};
}

std::pair<AttackGraph, std::string> read_attack(const Reader& r, const toml::table* t) {
  if (t == nullptr) return {default_av2g_chain(), kDefaultAttackTarget};
  r.only_keys(*t, "attack", {"target", "node", "edge"});
  auto target = r.string(*t, "target", "attack");
  const auto* nodes = t->get("node");
  if (nodes == nullptr) {
    if (t->get("edge") != nullptr) r.fail("attack", "edge", "edges given without [[attack.node]] entries");
    auto g = default_av2g_chain();
    std::string tgt = target.value_or(kDefaultAttackTarget);
    if (!g.contains(tgt)) r.fail("attack", "target", "unknown node '" + tgt + "'");
    return {std::move(g), tgt};
  }
  if (!nodes->is_array_of_tables()) r.fail("attack", "node", "expected [[attack.node]] entries");
  std::vector<AttackNode> ns;
  for (const auto& node : *nodes->as_array()) {
    const auto& n = *node.as_table();
    r.only_keys(n, "attack.node", {"id", "label", "prior"});
    auto id = r.required(r.string(n, "id", "attack.node"), "attack.node", "id");
    ns.push_back({id, r.string(n, "label", "attack.node").value_or(id), r.number(n, "prior", "attack.node").value_or(0.0)});
  }
  std::vector<AttackEdge> es;
  if (const auto* edges = t->get("edge")) {
    if (!edges->is_array_of_tables()) r.fail("attack", "edge", "expected [[attack.edge]] entries");
    for (const auto& node : *edges->as_array()) {
      const auto& e = *node.as_table();
      r.only_keys(e, "attack.edge", {"parent", "child", "cond_prob"});
      es.push_back({r.required(r.string(e, "parent", "attack.edge"), "attack.edge", "parent"),
                    r.required(r.string(e, "child", "attack.edge"), "attack.edge", "child"),
                    r.required(r.number(e, "cond_prob", "attack.edge"), "attack.edge", "cond_prob")});
    }
  }
  auto graph = r.wrap("attack", [&] { return AttackGraph::build(std::move(ns), std::move(es)); });
  if (!target) r.fail("attack", "target", "missing (required with custom nodes)");
  if (!graph.contains(*target)) r.fail("attack", "target", "unknown node '" + *target + "'");
  return {std::move(graph), *target};
}

CyberScenario read_cyber(const Reader& r, const toml::table* t) {
  if (t == nullptr) return CyberScenario::none();
  r.only_keys(*t, "cyber",
              {"active", "delta", "window_start", "window_hours", "degraded_availability", "nominal_availability"});
  CyberScenario c;
  c.active = r.boolean(*t, "active", "cyber").value_or(c.active);
  c.delta = r.number(*t, "delta", "cyber").value_or(c.delta);
  c.window_start = r.count(*t, "window_start", "cyber").value_or(c.window_start);
  c.window_hours = r.count(*t, "window_hours", "cyber").value_or(c.window_hours);
  c.degraded_availability = r.number(*t, "degraded_availability", "cyber").value_or(c.degraded_availability);
  c.nominal_availability = r.number(*t, "nominal_availability", "cyber");
  r.wrap("cyber", [&] { c.validate(); });
  return c;
}

McConfig read_mc(const Reader& r, const toml::table* t) {
  McConfig m;
  if (t == nullptr) return m;
  r.only_keys(*t, "mc", {"replications", "seed", "workers", "lole_sample", "histogram_bin_days"});
  m.replications = r.count(*t, "replications", "mc").value_or(m.replications);
  if (const auto* seed = t->get("seed")) {
    if (seed->is_integer()) {
      auto v = *seed->value<std::int64_t>();
      if (v < 0) r.fail("mc", "seed", "must be non-negative (use a string for values above 2^63)");
      m.seed = static_cast<std::uint64_t>(v);
    } else if (seed->is_string()) {
      auto v = parse_u64(*seed->value<std::string>());
      if (!v) r.fail("mc", "seed", "not an unsigned 64-bit integer");
      m.seed = *v;
    } else {
      r.fail("mc", "seed", "expected an integer");
    }
  }
  m.workers = r.count(*t, "workers", "mc").value_or(m.workers);
  if (auto s = r.string(*t, "lole_sample", "mc")) {
    auto v = parse_lole_sample(*s);
    if (!v) r.fail("mc", "lole_sample", "expected any_hour, daily_peak or hours_over_24");
    m.lole_sample = *v;
  }
  m.histogram_bin_days = r.number(*t, "histogram_bin_days", "mc").value_or(m.histogram_bin_days);
  r.wrap("mc", [&] { m.validate(); });
  return m;
}

CoptOptions read_copt(const Reader& r, const toml::table* t) {
  CoptOptions o;
  if (t == nullptr) return o;
  r.only_keys(*t, "copt", {"rounding_mw"});
  o.rounding_mw = r.number(*t, "rounding_mw", "copt");
  if (o.rounding_mw && !(*o.rounding_mw > 0.0)) r.fail("copt", "rounding_mw", "must be positive");
  return o;
}

std::string toml_string(const std::string& s) {
  std::ostringstream os;
  os << toml::value<std::string>(s);
  return os.str();
}

// TOML floats need a decimal point or exponent; format_double may print "100".
std::string toml_float(double v) {
  auto s = format_double(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

}  // namespace

Scenario parse_scenario(std::string_view text, const fs::path& source) {
  const Reader r(source);
  toml::table doc;
  try {
    doc = toml::parse(text, source.string());
  } catch (const toml::parse_error& e) {
    throw ParseError(source.string() + ":" + std::to_string(e.source().begin.line) + ": " + std::string(e.description()));
  }
  r.only_keys(doc, "", {"label", "output", "fleet", "load", "attack", "cyber", "mc", "copt"});

  auto label = r.string(doc, "label", "").value_or(source.stem().string());
  if (label.empty()) r.fail("", "label", "must not be empty");
  fs::path output;
  if (auto out = r.string(doc, "output", "")) output = r.resolve(*out);

  auto fleet = read_fleet(r, r.table(doc, "fleet", ""));
  auto [load_source, profile] = read_load(r, r.table(doc, "load", ""));
  auto [graph, target] = read_attack(r, r.table(doc, "attack", ""));
  auto cyber = read_cyber(r, r.table(doc, "cyber", ""));
  auto mc = read_mc(r, r.table(doc, "mc", ""));
  auto copt = read_copt(r, r.table(doc, "copt", ""));

  return Scenario{std::move(label), source,        std::move(output), std::move(fleet), std::move(load_source),
                  std::move(profile), std::move(graph), std::move(target), cyber,           mc,
                  copt};
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string resolved_toml(const Scenario& s, const std::string& load_file_name) {
  std::ostringstream os;
  os << "# resolved scenario: every default filled in, inputs inline\n";
  os << "label = " << toml_string(s.label) << "\n\n";
  for (const auto& u : s.fleet.units()) {
    os << "[[fleet.unit]]\nid = " << toml_string(u.id) << "\ncapacity_mw = " << toml_float(u.capacity_mw)
       << "\nforced_outage_rate = " << toml_float(u.forced_outage_rate)
       << "\ncyber_exposed = " << (u.cyber_exposed ? "true" : "false") << "\n\n";
  }
  os << "[load]\n";
  if (const auto* p = std::get_if<SynthProfileParams>(&s.load_source)) {
    os << "annual_peak_mw = " << toml_float(p->annual_peak_mw) << "\nbase_fraction = " << toml_float(p->base_fraction)
       << "\npeak_hour = " << p->peak_hour << "\n\n";
  } else {
    os << "path = " << toml_string(load_file_name) << "\n\n";
  }
  os << "[attack]\ntarget = " << toml_string(s.attack_target) << "\n\n";
  for (const auto& n : s.attack.nodes()) {
    os << "[[attack.node]]\nid = " << toml_string(n.id) << "\nlabel = " << toml_string(n.label)
       << "\nprior = " << toml_float(n.prior) << "\n\n";
  }
  for (const auto& e : s.attack.edges()) {
    os << "[[attack.edge]]\nparent = " << toml_string(e.parent) << "\nchild = " << toml_string(e.child)
       << "\ncond_prob = " << toml_float(e.cond_prob) << "\n\n";
  }
  const auto& c = s.cyber;
  os << "[cyber]\nactive = " << (c.active ? "true" : "false") << "\ndelta = " << toml_float(c.delta)
     << "\nwindow_start = " << c.window_start << "\nwindow_hours = " << c.window_hours
     << "\ndegraded_availability = " << toml_float(c.degraded_availability) << "\n";
  if (c.nominal_availability) os << "nominal_availability = " << toml_float(*c.nominal_availability) << "\n";
  // workers is left out: it changes how a run executes, never what it produces
  os << "\n[mc]\nreplications = " << s.mc.replications << "\nseed = \"" << s.mc.seed
     << "\"\nlole_sample = \"" << to_string(s.mc.lole_sample) << "\"\nhistogram_bin_days = "
     << toml_float(s.mc.histogram_bin_days) << "\n";
  if (s.copt.rounding_mw) os << "\n[copt]\nrounding_mw = " << toml_float(*s.copt.rounding_mw) << "\n";
  return os.str();
}

std::string scenario_hash(const Scenario& s) {
  using nlohmann::json;
  json j;
  j["label"] = s.label;
  for (const auto& u : s.fleet.units()) {
    j["fleet"].push_back({{"id", u.id},
                          {"capacity_mw", format_double(u.capacity_mw)},
                          {"forced_outage_rate", format_double(u.forced_outage_rate)},
                          {"cyber_exposed", u.cyber_exposed}});
  }
  std::ostringstream load;
  write_profile(load, s.profile);
  j["load_sha256"] = sha256_hex(load.str());
  j["attack"]["target"] = s.attack_target;
  for (const auto& n : s.attack.nodes())
    j["attack"]["nodes"].push_back({{"id", n.id}, {"label", n.label}, {"prior", format_double(n.prior)}});
  for (const auto& e : s.attack.edges())
    j["attack"]["edges"].push_back(
        {{"parent", e.parent}, {"child", e.child}, {"cond_prob", format_double(e.cond_prob)}});
  const auto& c = s.cyber;
  j["cyber"] = {{"active", c.active},
                {"delta", format_double(c.delta)},
                {"window_start", c.window_start},
                {"window_hours", c.window_hours},
                {"degraded_availability", format_double(c.degraded_availability)},
                {"nominal_availability", c.nominal_availability ? format_double(*c.nominal_availability) : "none"}};
  j["mc"] = {{"replications", s.mc.replications},
             {"seed", std::to_string(s.mc.seed)},
             {"lole_sample", to_string(s.mc.lole_sample)},
             {"histogram_bin_days", format_double(s.mc.histogram_bin_days)}};
  j["copt"]["rounding_mw"] = s.copt.rounding_mw ? format_double(*s.copt.rounding_mw) : "exact";
  return sha256_hex(j.dump());
}

}  // namespace gridrisk
