#pragma once

// Sampled 1-D functions on a uniform cell-centered grid over [-L, L].
// A GridFunction is the piecewise-constant function that takes the sample
// value on each cell; all integrals below are exact for that representation,
// including fractional end cells.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace luxor {

struct Interval {
  double center = 0.0;
  double radius = 1.0;

  Interval() = default;
  Interval(double c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(c) || !std::isfinite(r))
      throw std::invalid_argument("Interval: radius must be positive and finite");
  }

  static Interval from_endpoints(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("Interval: endpoints must satisfy a < b");
    return Interval(0.5 * (a + b), 0.5 * (b - a));
  }

  double lo() const { return center - radius; }
  double hi() const { return center + radius; }
  double length() const { return 2.0 * radius; }

  // c-fold dilate about the center: |cB| = c|B|.
  Interval dilated(double c) const { return Interval(center, c * radius); }
  bool contains(double x) const { return x >= lo() && x <= hi(); }
  bool contains(const Interval& other) const {
    return other.lo() >= lo() && other.hi() <= hi();
  }
};

namespace detail {
inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace detail

class GridFunction {
 public:
  GridFunction(double half_length, std::vector<double> samples)
      : L_(half_length), samples_(std::move(samples)) {
    if (!(L_ > 0.0) || !std::isfinite(L_))
      throw std::invalid_argument("GridFunction: half-length must be positive");
    if (!detail::is_pow2(samples_.size()))
      throw std::invalid_argument("GridFunction: sample count must be a power of two");
    for (double v : samples_)
      if (!std::isfinite(v))
        throw std::invalid_argument("GridFunction: samples must be finite");
    h_ = 2.0 * L_ / static_cast<double>(samples_.size());
    build_prefixes();
  }

  static GridFunction zeros(double half_length, std::size_t n) {
    return GridFunction(half_length, std::vector<double>(n, 0.0));
  }

  double half_length() const { return L_; }
  double step() const { return h_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<double>& samples() const { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  // Center of cell i; cell i covers [-L + i*h, -L + (i+1)*h).
  double x_at(std::size_t i) const { return -L_ + (static_cast<double>(i) + 0.5) * h_; }

  std::size_t cell_of(double x) const {
    double t = (x + L_) / h_;
    auto i = static_cast<long long>(std::floor(t));
    i = std::max(0ll, std::min(i, static_cast<long long>(samples_.size()) - 1));
    return static_cast<std::size_t>(i);
  }

  double value_at(double x) const {
    if (x < -L_ || x > L_) return 0.0;
    return samples_[cell_of(x)];
  }

  // Antiderivative F(x) = int_{-L}^{x} f, zero-extended outside the domain.
  double primitive(double x) const { return primitive_of(prefix_, samples_, x); }
  double primitive_abs(double x) const { return primitive_of(abs_prefix_, abs_samples_, x); }

  // Exact integral of the piecewise-constant representation over [a, b].
  double integral(double a, double b) const {
    if (!(a <= b)) throw std::invalid_argument("integral: need a <= b");
    return primitive(b) - primitive(a);
  }
  double integral_abs(double a, double b) const {
    if (!(a <= b)) throw std::invalid_argument("integral_abs: need a <= b");
    return primitive_abs(b) - primitive_abs(a);
  }
  double total_integral() const { return prefix_.back() * h_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
  }

  // Largest |sample| among cells meeting (a, b) on a set of positive measure.
  double ess_sup_abs(double a, double b) const {
    a = std::max(a, -L_);
    b = std::min(b, L_);
    if (!(a < b)) return 0.0;
    auto i0 = static_cast<std::size_t>(std::floor((a + L_) / h_));
    auto i1 = static_cast<std::size_t>(std::ceil((b + L_) / h_));
    i1 = std::min(i1, samples_.size());
    double m = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
      double lo = -L_ + static_cast<double>(i) * h_;
      double hi = lo + h_;
      if (std::min(hi, b) - std::max(lo, a) > 0.0) m = std::max(m, std::abs(samples_[i]));
    }
    return m;
  }

  template <class F>
  GridFunction map(F&& fn) const {
    std::vector<double> out(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) out[i] = fn(samples_[i]);
    return GridFunction(L_, std::move(out));
  }

  GridFunction scaled(double c) const {
    return map([c](double v) { return c * v; });
  }

 private:
  void build_prefixes() {
    const std::size_t n = samples_.size();
    prefix_.assign(n + 1, 0.0);
    abs_prefix_.assign(n + 1, 0.0);
    abs_samples_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      abs_samples_[i] = std::abs(samples_[i]);
      prefix_[i + 1] = prefix_[i] + samples_[i];
      abs_prefix_[i + 1] = abs_prefix_[i] + abs_samples_[i];
    }
  }

  double primitive_of(const std::vector<double>& pre, const std::vector<double>& vals,
                      double x) const {
    if (x <= -L_) return 0.0;
    if (x >= L_) return pre.back() * h_;
    double t = (x + L_) / h_;
    auto k = static_cast<std::size_t>(std::floor(t));
    if (k >= vals.size()) k = vals.size() - 1;
    double frac = t - static_cast<double>(k);
    return (pre[k] + vals[k] * frac) * h_;
  }

  double L_;
  double h_;
  std::vector<double> samples_;
  std::vector<double> abs_samples_;
  std::vector<double> prefix_;
  std::vector<double> abs_prefix_;
};

inline double integrate(const GridFunction& f, const Interval& I) {
  if (I.lo() < -f.half_length() - 1e-12 || I.hi() > f.half_length() + 1e-12)
    throw std::domain_error("integrate: interval leaves the grid domain");
  return f.integral(std::max(I.lo(), -f.half_length()), std::min(I.hi(), f.half_length()));
}

// Mean of f over the window (x - halfwidth, x + halfwidth), zero extension
// outside the domain. Windows narrower than one cell are not meaningful on
// this grid.
inline GridFunction sliding_window_average(const GridFunction& f, double halfwidth) {
  if (!(halfwidth >= 0.5 * f.step()))
    throw std::invalid_argument("sliding_window_average: halfwidth below grid scale");
  const std::size_t n = f.size();
  std::vector<double> out(n);
  const double inv = 1.0 / (2.0 * halfwidth);
  for (std::size_t i = 0; i < n; ++i) {
    double x = f.x_at(i);
    out[i] = (f.primitive(x + halfwidth) - f.primitive(x - halfwidth)) * inv;
  }
  return GridFunction(f.half_length(), std::move(out));
}

// ---------------------------------------------------------------------------
// Deterministic sample families.

struct GeneratorSpec {
  std::string kind;        // "bump" | "step" | "dyadic-chirp" | "power" | "log-abs"
  double center = 0.0;     // bump
  double width = 1.0;      // bump
  double height = 1.0;     // bump, step
  double a = 0.0;          // step endpoints, power exponent
  double b = 1.0;          // step right endpoint
  int doublings = 4;       // dyadic-chirp frequency doublings across [0, 1]
};

inline double generator_value(const GeneratorSpec& g, double x) {
  if (g.kind == "bump") {
    double u = (x - g.center) / g.width;
    if (std::abs(u) >= 1.0) return 0.0;
    return g.height * std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  if (g.kind == "step") return (x >= g.a && x < g.b) ? g.height : 0.0;
  if (g.kind == "dyadic-chirp") {
    if (x < 0.0 || x >= 1.0) return 0.0;
    return g.height * std::sin(2.0 * M_PI * std::exp2(g.doublings * x));
  }
  if (g.kind == "power") return std::pow(std::abs(x), g.a);
  if (g.kind == "log-abs") return std::log(std::abs(x));
  throw std::invalid_argument("generator_value: unknown kind '" + g.kind + "'");
}

inline GridFunction generate(const GeneratorSpec& g, double half_length, std::size_t n) {
  std::vector<double> s(n);
  double h = 2.0 * half_length / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = generator_value(g, -half_length + (static_cast<double>(i) + 0.5) * h);
  return GridFunction(half_length, std::move(s));
}

// ---------------------------------------------------------------------------
// CSV formats. Scalar files carry an "x,value" header; vector files carry
// "x,level_{lmin},...,level_{lmax}".

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("csv parse error at line " + std::to_string(line_no) +
                             ": bad number '" + tok + "'");
  }
}

}  // namespace detail

inline void save_csv(const GridFunction& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_csv: cannot open '" + path + "'");
  os << "x,value\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    os << detail::format_double(f.x_at(i)) << ',' << detail::format_double(f[i]) << '\n';
}

inline GridFunction load_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("load_csv: '" + path + "' is empty");
  {
    auto header = detail::split_csv_line(line);
    if (header.size() != 2 || header[0] != "x" || header[1] != "value")
      throw std::runtime_error("load_csv: expected header 'x,value' in '" + path + "'");
  }
  std::vector<double> xs, vs;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto toks = detail::split_csv_line(line);
    if (toks.size() != 2)
      throw std::runtime_error("csv parse error at line " + std::to_string(line_no) +
                               ": expected 2 columns");
    xs.push_back(detail::parse_double(toks[0], line_no));
    vs.push_back(detail::parse_double(toks[1], line_no));
  }
  if (xs.size() < 2 || !detail::is_pow2(xs.size()))
    throw std::runtime_error("load_csv: sample count must be a power of two >= 2");
  double h = xs[1] - xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::abs(xs[i] - xs[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw std::runtime_error("load_csv: grid spacing is not uniform near line " +
                               std::to_string(i + 2));
  double L = -(xs[0] - 0.5 * h);
  if (std::abs((xs.back() + 0.5 * h) - L) > 1e-9 * std::max(1.0, L))
    throw std::runtime_error("load_csv: grid is not centered on the origin");
  return GridFunction(L, std::move(vs));
}

// One function per kernel level, all sharing a grid.
struct VectorGridFunction {
  int l_min = 0;
  std::vector<GridFunction> levels;

  int l_max() const { return l_min + static_cast<int>(levels.size()) - 1; }
  const GridFunction& level(int l) const {
    if (l < l_min || l > l_max()) throw std::out_of_range("VectorGridFunction::level");
    return levels[static_cast<std::size_t>(l - l_min)];
  }
};

inline void save_csv(const VectorGridFunction& F, const std::string& path) {
  if (F.levels.empty()) throw std::invalid_argument("save_csv: no levels");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_csv: cannot open '" + path + "'");
  os << "x";
  for (int l = F.l_min; l <= F.l_max(); ++l) os << ",level_" << l;
  os << '\n';
  const auto& g0 = F.levels.front();
  for (std::size_t i = 0; i < g0.size(); ++i) {
    os << detail::format_double(g0.x_at(i));
    for (const auto& g : F.levels) os << ',' << detail::format_double(g[i]);
    os << '\n';
  }
}

inline VectorGridFunction load_vector_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_vector_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("load_vector_csv: '" + path + "' is empty");
  auto header = detail::split_csv_line(line);
  if (header.size() < 2 || header[0] != "x")
    throw std::runtime_error("load_vector_csv: expected header 'x,level_<l>,...'");
  int l_min = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name.rfind("level_", 0) != 0)
      throw std::runtime_error("load_vector_csv: bad column name '" + name + "'");
    int l = std::stoi(name.substr(6));
    if (c == 1)
      l_min = l;
    else if (l != l_min + static_cast<int>(c) - 1)
      throw std::runtime_error("load_vector_csv: level columns must be consecutive");
  }
  std::vector<double> xs;
  std::vector<std::vector<double>> cols(header.size() - 1);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto toks = detail::split_csv_line(line);
    if (toks.size() != header.size())
      throw std::runtime_error("csv parse error at line " + std::to_string(line_no) +
                               ": wrong column count");
    xs.push_back(detail::parse_double(toks[0], line_no));
    for (std::size_t c = 1; c < toks.size(); ++c)
      cols[c - 1].push_back(detail::parse_double(toks[c], line_no));
  }
  if (xs.size() < 2 || !detail::is_pow2(xs.size()))
    throw std::runtime_error("load_vector_csv: sample count must be a power of two >= 2");
  double h = xs[1] - xs[0];
  double L = -(xs[0] - 0.5 * h);
  VectorGridFunction out;
  out.l_min = l_min;
  out.levels.reserve(cols.size());
  for (auto& c : cols) out.levels.emplace_back(L, std::move(c));
  return out;
}

}  // namespace luxor
