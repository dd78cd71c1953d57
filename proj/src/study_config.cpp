#include "resdep/study_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "resdep/error.hpp"
#include "resdep/text.hpp"

namespace resdep {

std::string_view to_string(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::Raw ? "raw" : "reduced";
}

std::size_t KStarRule::resolve(std::size_t n, std::size_t k) const {
  const auto sqrt_k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(k))));
  switch (kind) {
    case Kind::PowN: {
      const auto pow_n = static_cast<std::size_t>(
          std::floor(std::pow(static_cast<double>(n), exponent)));
      return std::min(std::max(pow_n, minimum), sqrt_k);
    }
    case Kind::SqrtK:
      return sqrt_k;
    case Kind::Fixed:
      return fixed;
  }
  return sqrt_k;
}

std::string KStarRule::describe() const {
  switch (kind) {
    case Kind::PowN: {
      std::string s = "pow" + format_double(exponent);
      if (minimum > 0) s += "/" + std::to_string(minimum);
      return s;
    }
    case Kind::SqrtK:
      return "sqrtk";
    case Kind::Fixed:
      return std::to_string(fixed);
  }
  return "";
}

KStarRule parse_kstar_rule(std::string_view text) {
  const std::string t = trim(text);
  KStarRule rule;
  if (t == "sqrtk") {
    rule.kind = KStarRule::Kind::SqrtK;
    return rule;
  }
  if (t.rfind("pow", 0) == 0) {
    rule.kind = KStarRule::Kind::PowN;
    rule.minimum = 0;
    std::string rest = t.substr(3);
    const auto slash = rest.find('/');
    if (slash != std::string::npos) {
      rule.minimum = parse_size(rest.substr(slash + 1), "kstar floor");
      rest = rest.substr(0, slash);
    }
    rule.exponent = parse_double(rest, "kstar exponent");
    if (!(rule.exponent > 0.0 && rule.exponent < 1.0)) {
      throw UsageError("kstar exponent must lie in (0, 1)");
    }
    return rule;
  }
  rule.kind = KStarRule::Kind::Fixed;
  rule.fixed = parse_size(t, "kstar");
  if (rule.fixed == 0) throw UsageError("fixed k* must be positive");
  return rule;
}

std::vector<double> default_q_grid() {
  std::vector<double> q;
  for (int i = 1; i <= 19; ++i) q.push_back(i / 10.0);
  return q;
}

std::vector<std::size_t> default_k_grid(std::size_t n) {
  std::vector<std::size_t> k;
  const auto top = static_cast<std::size_t>(std::floor(0.3 * static_cast<double>(n)));
  for (std::size_t i = 1; i <= top && i < n; ++i) k.push_back(i);
  return k;
}

std::vector<double> parse_q_grid(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_double(parts[0], "q"));
    } else if (parts.size() == 3) {
      const double start = parse_double(parts[0], "q range start");
      const double stop = parse_double(parts[1], "q range stop");
      const double step = parse_double(parts[2], "q range step");
      if (!(step > 0.0)) throw UsageError("q range step must be positive");
      const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
      for (long i = 0; i <= count; ++i) {
        // Snap to 12 decimals so 0.1 * 3 reads back as 0.3.
        out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
      }
    } else {
      throw UsageError("malformed q grid entry '" + item + "'");
    }
  }
  for (double q : out) {
    if (!(q > 0.0)) throw UsageError("q grid values must be positive");
  }
  return out;
}

namespace {

/// floor(n f), tolerant of binary representation error (0.29 * 100 is 29).
std::size_t floor_fraction(std::size_t n, double f) {
  const double x = static_cast<double>(n) * f;
  return static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

std::size_t k_from_token(const std::string& token, std::size_t n) {
  if (token.find('.') != std::string::npos) {
    const double f = parse_double(token, "k fraction");
    return floor_fraction(n, f);
  }
  return parse_size(token, "k");
}

}  // namespace

std::vector<std::size_t> parse_k_grid(std::string_view text, std::size_t n) {
  const std::string t = trim(text);
  if (t == "all") return default_k_grid(n);
  std::vector<std::size_t> out;
  if (t.empty()) return out;
  for (const auto& item : split(t, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(k_from_token(parts[0], n));
      continue;
    }
    if (parts.size() != 2 && parts.size() != 3) {
      throw UsageError("malformed k grid entry '" + item + "'");
    }
    const bool fractional = item.find('.') != std::string::npos;
    if (fractional) {
      const double a = parse_double(parts[0], "k fraction");
      const double b = parse_double(parts[1], "k fraction");
      const double step = parts.size() == 3 ? parse_double(parts[2], "k step") : 1.0 / static_cast<double>(n);
      if (!(step > 0.0)) throw UsageError("k range step must be positive");
      const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
      for (long i = 0; i <= count; ++i) {
        const double f = a + static_cast<double>(i) * step;
        out.push_back(floor_fraction(n, f));
      }
    } else {
      const std::size_t a = parse_size(parts[0], "k");
      const std::size_t b = parse_size(parts[1], "k");
      const std::size_t step = parts.size() == 3 ? parse_size(parts[2], "k step") : 1;
      if (step == 0) throw UsageError("k range step must be positive");
      for (std::size_t k = a; k <= b; k += step) out.push_back(k);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void StudyConfig::validate() const {
  if (n < 2) throw ParameterError("study: n must be at least 2");
  if (N < 1) throw ParameterError("study: N must be at least 1");
  for (double q : q_grid) {
    if (!(q > 0.0) || !std::isfinite(q)) throw ParameterError("study: q values must be positive");
  }
  for (std::size_t k : k_grid) {
    if (k < 1 || k >= n) {
      throw ParameterError("study: every k must satisfy 1 <= k < n (got " +
                           std::to_string(k) + ")");
    }
  }
  if (margins.empty()) throw ParameterError("study: no margins selected");
  if (estimators.empty()) throw ParameterError("study: no estimators selected");
  if (const auto* o = std::get_if<second_order::Oracle>(&second_order)) {
    if (!o->tau && !model.truth()) {
      throw ParameterError("study: oracle second order needs a tau for " + model.describe());
    }
  }
}

Parametrization StudyConfig::parametrization_for(double q) const {
  if (parametrization == ParamFamily::MeanOfOrderP) return MeanOfOrderP{q};
  return ConjugateQ{q};
}

std::string StudyConfig::canonical() const {
  std::ostringstream out;
  out << "model=" << to_string(model.family()) << ":" << format_double(model.theta())
      << ";n=" << n << ";N=" << N << ";q_grid=";
  for (std::size_t i = 0; i < q_grid.size(); ++i) out << (i ? "," : "") << format_double(q_grid[i]);
  out << ";k_grid=";
  for (std::size_t i = 0; i < k_grid.size(); ++i) out << (i ? "," : "") << k_grid[i];
  out << ";margins=";
  for (std::size_t i = 0; i < margins.size(); ++i) out << (i ? "," : "") << to_string(margins[i]);
  out << ";estimators=";
  for (std::size_t i = 0; i < estimators.size(); ++i) out << (i ? "," : "") << to_string(estimators[i]);
  out << ";parametrization="
      << (parametrization == ParamFamily::ConjugateQ ? "conjugate_q" : "mean_of_order_p")
      << ";kstar_rule=" << kstar_rule.describe() << ";master_seed=" << master_seed
      << ";second_order=";
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, second_order::PerReplicate>) {
          out << "per_replicate:" << m.k0;
        } else if constexpr (std::is_same_v<T, second_order::Oracle>) {
          out << "oracle:" << (m.tau ? format_double(*m.tau) : std::string("truth")) << ","
              << format_double(m.beta);
        } else {
          out << "user:" << format_double(m.tau) << "," << format_double(m.beta);
        }
      },
      second_order);
  return out.str();
}

std::uint64_t StudyConfig::hash() const {
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

SecondOrderMode parse_second_order(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = trim(text.substr(0, colon));
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "per_replicate") {
    second_order::PerReplicate m;
    if (!tail.empty()) m.k0 = parse_size(tail, "k0");
    return m;
  }
  const auto values = split(tail, ',');
  if (head == "oracle") {
    second_order::Oracle m;
    if (values.size() == 1) {
      m.beta = parse_double(values[0], "oracle beta");
    } else if (values.size() == 2) {
      m.tau = parse_double(values[0], "oracle tau");
      m.beta = parse_double(values[1], "oracle beta");
    } else if (!tail.empty()) {
      throw UsageError("second_order oracle expects [tau,]beta");
    }
    return m;
  }
  if (head == "user") {
    if (values.size() != 2) throw UsageError("second_order user expects tau,beta");
    return second_order::UserSupplied{parse_double(values[0], "tau"),
                                      parse_double(values[1], "beta")};
  }
  throw UsageError("unknown second_order mode '" + head + "'");
}

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (entries.count(key)) {
      throw UsageError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    entries[key] = trim(t.substr(eq + 1));
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    std::string v = it->second;
    entries.erase(it);
    return v;
  };

  StudyConfig cfg;
  if (auto v = take("model")) {
    const auto parts = split(*v, ':');
    if (parts.size() != 2) throw UsageError("model must be <family>:<theta>");
    cfg.model = CopulaModel(parse_copula_family(parts[0]), parse_double(parts[1], "theta"));
  }
  if (auto v = take("n")) cfg.n = parse_size(*v, "n");
  if (auto v = take("N")) cfg.N = parse_size(*v, "N");
  cfg.q_grid = default_q_grid();
  if (auto v = take("q_grid")) cfg.q_grid = parse_q_grid(*v);
  cfg.k_grid = default_k_grid(cfg.n);
  if (auto v = take("k_grid")) cfg.k_grid = parse_k_grid(*v, cfg.n);
  if (auto v = take("margins")) {
    cfg.margins.clear();
    for (const auto& m : split(*v, ',')) cfg.margins.push_back(parse_margin(m));
  }
  if (auto v = take("estimators")) {
    cfg.estimators.clear();
    for (const auto& e : split(*v, ',')) {
      if (e == "raw") cfg.estimators.push_back(EstimatorKind::Raw);
      else if (e == "reduced") cfg.estimators.push_back(EstimatorKind::Reduced);
      else throw UsageError("unknown estimator '" + e + "'");
    }
  }
  if (auto v = take("parametrization")) {
    if (*v == "conjugate_q") cfg.parametrization = ParamFamily::ConjugateQ;
    else if (*v == "mean_of_order_p") cfg.parametrization = ParamFamily::MeanOfOrderP;
    else throw UsageError("unknown parametrization '" + *v + "'");
  }
  if (auto v = take("kstar_rule")) cfg.kstar_rule = parse_kstar_rule(*v);
  if (auto v = take("master_seed")) cfg.master_seed = parse_u64(*v, "master_seed");
  if (auto v = take("second_order")) cfg.second_order = parse_second_order(*v);
  if (auto v = take("threads")) cfg.threads = parse_size(*v, "threads");
  if (!entries.empty()) {
    throw UsageError("unknown config key '" + entries.begin()->first + "'");
  }
  cfg.validate();
  return cfg;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_study_config(in);
}

}  // namespace resdep
