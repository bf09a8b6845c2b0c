// Serialization plumbing shared by the experiment harness and the CLI:
// compact string descriptors for Young functions, sequence norms, and
// weights; JSON codecs for generator specs; a regression-constant store;
// and CSV table emission for plot data.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "luxor/grid.hpp"
#include "luxor/seqnorm.hpp"
#include "luxor/young.hpp"

namespace luxor {

using Json = nlohmann::json;

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      break;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

inline double parse_number(const std::string& s, const char* who) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(who) + ": bad number '" + s + "'");
  }
  if (used != s.size())
    throw std::invalid_argument(std::string(who) + ": bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// Young function descriptors: "power:r[,scale]", "power_log:r,beta[,form]",
// "exp_power:gamma[,offset]", "linear".  form is "shifted" for t(1+log+ t)^b
// or "log1p" for t log(1+t)^b.
// ---------------------------------------------------------------------------

inline YoungFunction parse_young(const std::string& desc) {
  auto head = detail::split(desc, ':');
  const std::string& kind = head.front();
  std::vector<std::string> args;
  if (head.size() == 2) args = detail::split(head[1], ',');
  else if (head.size() > 2)
    throw std::invalid_argument("young descriptor: too many ':' in '" + desc + "'");

  if (kind == "linear") {
    if (!args.empty()) throw std::invalid_argument("young descriptor: linear takes no arguments");
    return YoungFunction::linear();
  }
  if (kind == "power") {
    if (args.empty() || args.size() > 2)
      throw std::invalid_argument("young descriptor: power needs r[,scale]");
    double r = detail::parse_number(args[0], "young power");
    double scale = args.size() == 2 ? detail::parse_number(args[1], "young power") : 1.0;
    return YoungFunction::power(r, scale);
  }
  if (kind == "power_log") {
    if (args.size() < 2 || args.size() > 3)
      throw std::invalid_argument("young descriptor: power_log needs r,beta[,form]");
    double r = detail::parse_number(args[0], "young power_log");
    double beta = detail::parse_number(args[1], "young power_log");
    LogForm form = LogForm::one_plus_log_plus;
    if (args.size() == 3) {
      if (args[2] == "shifted") form = LogForm::one_plus_log_plus;
      else if (args[2] == "log1p") form = LogForm::log_one_plus;
      else
        throw std::invalid_argument("young descriptor: form must be 'shifted' or 'log1p'");
    }
    return YoungFunction::power_log(r, beta, form);
  }
  if (kind == "exp_power") {
    if (args.empty() || args.size() > 2)
      throw std::invalid_argument("young descriptor: exp_power needs gamma[,offset]");
    double gamma = detail::parse_number(args[0], "young exp_power");
    double offset = args.size() == 2 ? detail::parse_number(args[1], "young exp_power") : 1.0;
    return YoungFunction::exp_power(gamma, offset);
  }
  throw std::invalid_argument("young descriptor: unknown kind '" + kind + "'");
}

inline std::string young_descriptor(const YoungFunction& phi) {
  std::ostringstream out;
  switch (phi.kind()) {
    case YoungFunction::Kind::linear:
      out << "linear";
      break;
    case YoungFunction::Kind::power:
      out << "power:" << phi.param_r();
      if (phi.param_scale() != 1.0) out << ',' << phi.param_scale();
      break;
    case YoungFunction::Kind::power_log:
      out << "power_log:" << phi.param_r() << ',' << phi.param_beta();
      if (phi.log_form() == LogForm::log_one_plus) out << ",log1p";
      break;
    case YoungFunction::Kind::exp_power:
      out << "exp_power:" << phi.param_gamma();
      if (phi.param_offset() != 1.0) out << ',' << phi.param_offset();
      break;
    default:
      throw std::invalid_argument("young descriptor: kind has no descriptor form");
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Sequence norm descriptors: "l1", "l2", "linf", "lp:p",
// "orlicz:<young descriptor>".
// ---------------------------------------------------------------------------

inline SeqNorm parse_seq_norm(const std::string& desc) {
  if (desc == "l1") return SeqNorm::lp(1.0);
  if (desc == "l2") return SeqNorm::lp(2.0);
  if (desc == "linf") return SeqNorm::lp(std::numeric_limits<double>::infinity());
  if (desc.rfind("lp:", 0) == 0)
    return SeqNorm::lp(detail::parse_number(desc.substr(3), "seq norm"));
  if (desc.rfind("orlicz:", 0) == 0) return SeqNorm::orlicz(parse_young(desc.substr(7)));
  throw std::invalid_argument("seq norm descriptor: unknown '" + desc + "'");
}

inline std::string seq_norm_descriptor(const SeqNorm& X) {
  switch (X.kind()) {
    case SeqNorm::Kind::lp: {
      double p = X.p();
      if (p == 1.0) return "l1";
      if (p == 2.0) return "l2";
      if (std::isinf(p)) return "linf";
      return "lp:" + detail::format_double(p);
    }
    case SeqNorm::Kind::orlicz:
      return "orlicz:" + young_descriptor(X.young());
    default:
      throw std::invalid_argument("seq norm descriptor: kind has no descriptor form");
  }
}

// ---------------------------------------------------------------------------
// Weights: "one", "power:a" for |x|^a, "oscillating" for 1.5 + sin x.
// ---------------------------------------------------------------------------

struct WeightSpec {
  std::string kind = "one";  // "one" | "power" | "oscillating"
  double a = 0.0;            // exponent for "power"
};

inline WeightSpec parse_weight(const std::string& desc) {
  if (desc == "one") return {"one", 0.0};
  if (desc == "oscillating") return {"oscillating", 0.0};
  if (desc.rfind("power:", 0) == 0)
    return {"power", detail::parse_number(desc.substr(6), "weight")};
  throw std::invalid_argument("weight descriptor: unknown '" + desc + "'");
}

inline std::string weight_label(const WeightSpec& w) {
  if (w.kind == "power") return "power:" + detail::format_double(w.a);
  return w.kind;
}

inline double weight_value(const WeightSpec& w, double x) {
  if (w.kind == "one") return 1.0;
  if (w.kind == "oscillating") return 1.5 + std::sin(x);
  if (w.kind == "power") return std::pow(std::abs(x), w.a);
  throw std::invalid_argument("weight: unknown kind '" + w.kind + "'");
}

// Samples w(x - shift) at cell centers; cell centers never sit on the origin,
// so negative exponents stay finite as long as shift is a whole-cell offset.
inline GridFunction make_weight(const WeightSpec& w, double half_length, std::size_t n,
                                double shift = 0.0) {
  std::vector<double> v(n);
  GridFunction probe = GridFunction::zeros(half_length, n);
  for (std::size_t i = 0; i < n; ++i) v[i] = weight_value(w, probe.x_at(i) - shift);
  return GridFunction(half_length, std::move(v));
}

// ---------------------------------------------------------------------------
// GeneratorSpec JSON codec and labels.
// ---------------------------------------------------------------------------

inline Json generator_to_json(const GeneratorSpec& g) {
  Json j;
  j["kind"] = g.kind;
  j["center"] = g.center;
  j["width"] = g.width;
  j["height"] = g.height;
  j["a"] = g.a;
  j["b"] = g.b;
  j["doublings"] = g.doublings;
  return j;
}

inline GeneratorSpec generator_from_json(const Json& j) {
  GeneratorSpec g;
  g.kind = j.at("kind").get<std::string>();
  g.center = j.value("center", 0.0);
  g.width = j.value("width", 1.0);
  g.height = j.value("height", 1.0);
  g.a = j.value("a", 0.0);
  g.b = j.value("b", 1.0);
  g.doublings = j.value("doublings", 4);
  return g;
}

inline std::string generator_label(const GeneratorSpec& g) {
  std::ostringstream out;
  if (g.kind == "bump")
    out << "bump(c=" << g.center << ",w=" << g.width << ",h=" << g.height << ')';
  else if (g.kind == "step")
    out << "step[" << g.a << ',' << g.b << "]h=" << g.height;
  else if (g.kind == "dyadic-chirp")
    out << "chirp(d=" << g.doublings << ')';
  else
    out << g.kind;
  return out.str();
}

// ---------------------------------------------------------------------------
// Regression store: named constants recorded on the first run and locked
// within a relative band afterwards.  Keys should embed the config hash so
// different experiments never collide.
// ---------------------------------------------------------------------------

class RegressionStore {
 public:
  enum class Status { recorded, locked_pass, locked_fail };

  RegressionStore() = default;
  explicit RegressionStore(std::string path) : path_(std::move(path)) {}

  static RegressionStore load(const std::string& path) {
    RegressionStore store(path);
    std::ifstream in(path);
    if (!in) return store;  // first run: nothing stored yet
    Json j = Json::parse(in, nullptr, true);
    for (auto& [key, value] : j.at("constants").items())
      store.entries_[key] = value.get<double>();
    return store;
  }

  Status check(const std::string& key, double value, double tol = 0.10) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      entries_[key] = value;
      dirty_ = true;
      return Status::recorded;
    }
    const double ref = it->second;
    return std::abs(value - ref) <= tol * std::abs(ref) + 1e-12 ? Status::locked_pass
                                                                : Status::locked_fail;
  }

  double stored(const std::string& key) const { return entries_.at(key); }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  bool dirty() const { return dirty_; }
  const std::map<std::string, double>& entries() const { return entries_; }
  const std::string& path() const { return path_; }

  void save() const {
    if (path_.empty()) throw std::logic_error("regression store: no path to save to");
    Json j;
    j["constants"] = Json::object();
    for (const auto& [key, value] : entries_) j["constants"][key] = value;
    std::filesystem::path p(path_);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path_);
    if (!out) throw std::runtime_error("regression store: cannot write " + path_);
    out << j.dump(2) << '\n';
  }

 private:
  std::string path_;
  std::map<std::string, double> entries_;
  bool dirty_ = false;
};

// ---------------------------------------------------------------------------
// CSV table for plot data: header plus string rows, numbers preformatted.
// ---------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header.size())
      throw std::invalid_argument("csv table: row width does not match header");
    rows.push_back(std::move(cells));
  }

  void save(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv table: cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
      out << header[i] << (i + 1 == header.size() ? '\n' : ',');
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        out << row[i] << (i + 1 == row.size() ? '\n' : ',');
  }
};

}  // namespace luxor
