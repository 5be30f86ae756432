#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ugae/csv.hpp"
#include "ugae/schedule.hpp"

namespace ugae {

/// Textual schedule description:
///
///   kind(param=value,...)[|trunc=T][|horizon=H]
///
/// with kinds exp(gamma), beta(mu,eta), hyper(mu) or hyper(k), none(), fixed(tmax).
/// Kind names are case-insensitive.
struct ScheduleDescriptor {
  enum class Kind { Exponential, Beta, Hyperbolic, None, Fixed };

  Kind kind = Kind::None;
  std::map<std::string, double> params;
  std::optional<std::size_t> trunc;
  std::optional<std::size_t> horizon;

  bool operator==(const ScheduleDescriptor&) const = default;
};

class DescriptorError : public std::invalid_argument {
 public:
  DescriptorError(std::size_t column, const std::string& what, const std::string& remedy)
      : std::invalid_argument("descriptor column " + std::to_string(column + 1) + ": " + what +
                              (remedy.empty() ? "" : " (" + remedy + ")")),
        column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

namespace detail {

struct KindInfo {
  std::string_view name;
  ScheduleDescriptor::Kind kind;
  std::string_view usage;
};

inline constexpr KindInfo kKinds[] = {
    {"exp", ScheduleDescriptor::Kind::Exponential, "exp(gamma=G)"},
    {"beta", ScheduleDescriptor::Kind::Beta, "beta(mu=M,eta=E)"},
    {"hyper", ScheduleDescriptor::Kind::Hyperbolic, "hyper(mu=M) or hyper(k=K)"},
    {"none", ScheduleDescriptor::Kind::None, "none()"},
    {"fixed", ScheduleDescriptor::Kind::Fixed, "fixed(tmax=T)"},
};

inline const KindInfo& info(ScheduleDescriptor::Kind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i;
  throw std::logic_error("unhandled descriptor kind");
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::size_t positive_integer(double v, std::size_t column, std::string_view key) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e15)
    throw DescriptorError(column, std::string(key) + " must be a positive integer", "");
  return static_cast<std::size_t>(v);
}

inline DiscountSchedule build_untruncated(const ScheduleDescriptor& d, std::size_t horizon) {
  using K = ScheduleDescriptor::Kind;
  switch (d.kind) {
    case K::Exponential: return exponential_schedule(d.params.at("gamma"), horizon);
    case K::Beta: return beta_schedule(MuEta(d.params.at("mu"), d.params.at("eta")), horizon);
    case K::Hyperbolic:
      if (d.params.contains("k")) return hyperbolic_schedule_k(d.params.at("k"), horizon);
      return hyperbolic_schedule(d.params.at("mu"), horizon);
    case K::None: return no_discount_schedule(horizon);
    case K::Fixed: return fixed_horizon_schedule(static_cast<std::size_t>(d.params.at("tmax")), horizon);
  }
  throw std::logic_error("unhandled descriptor kind");
}

}  // namespace detail

/// Materializes the descriptor; its own horizon override wins over `default_horizon`.
inline DiscountSchedule build_schedule(const ScheduleDescriptor& d, std::size_t default_horizon) {
  const std::size_t h = d.horizon.value_or(default_horizon);
  DiscountSchedule s = detail::build_untruncated(d, h);
  if (d.trunc) return truncate(s, *d.trunc);
  return s;
}

inline ScheduleDescriptor parse_descriptor(std::string_view text) {
  using K = ScheduleDescriptor::Kind;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_ident = [&] {
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return std::string(text.substr(start, pos - start));
  };
  auto read_value = [&](std::size_t& start) {
    skip_ws();
    start = pos;
    while (pos < text.size() && text[pos] != ',' && text[pos] != ')' && text[pos] != '|') ++pos;
    try {
      return csv::parse_double(text.substr(start, pos - start));
    } catch (const std::invalid_argument&) {
      throw DescriptorError(start, "expected a number, got '" +
                                       csv::trim(text.substr(start, pos - start)) + "'",
                            "write values like 0.99 or 100");
    }
  };

  ScheduleDescriptor d;
  skip_ws();
  const std::size_t kind_col = pos;
  const std::string name = detail::lower(read_ident());
  const auto it = std::find_if(std::begin(detail::kKinds), std::end(detail::kKinds),
                               [&](const auto& k) { return k.name == name; });
  if (it == std::end(detail::kKinds))
    throw DescriptorError(kind_col, "unknown schedule kind '" + name + "'",
                          "use one of exp, beta, hyper, none, fixed");
  d.kind = it->kind;

  skip_ws();
  std::map<std::string, std::size_t> columns;
  if (pos < text.size() && text[pos] == '(') {
    ++pos;
    skip_ws();
    if (pos < text.size() && text[pos] == ')') {
      ++pos;
    } else {
      while (true) {
        skip_ws();
        const std::size_t key_col = pos;
        const std::string key = detail::lower(read_ident());
        if (key.empty()) throw DescriptorError(key_col, "expected a parameter name", it->usage.data());
        skip_ws();
        if (pos >= text.size() || text[pos] != '=')
          throw DescriptorError(pos, "expected '=' after '" + key + "'", it->usage.data());
        ++pos;
        std::size_t value_col = 0;
        const double value = read_value(value_col);
        if (d.params.contains(key))
          throw DescriptorError(key_col, "duplicate parameter '" + key + "'", "give each parameter once");
        d.params[key] = value;
        columns[key] = key_col;
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          break;
        }
        throw DescriptorError(pos, "expected ',' or ')'", it->usage.data());
      }
    }
  } else if (d.kind != K::None) {
    throw DescriptorError(pos, "expected '(' after kind", std::string("write ") + it->usage.data());
  }

  std::vector<std::string> allowed;
  switch (d.kind) {
    case K::Exponential: allowed = {"gamma"}; break;
    case K::Beta: allowed = {"mu", "eta"}; break;
    case K::Hyperbolic: allowed = d.params.contains("k") ? std::vector<std::string>{"k"}
                                                         : std::vector<std::string>{"mu"}; break;
    case K::None: break;
    case K::Fixed: allowed = {"tmax"}; break;
  }
  for (const auto& [key, col] : columns)
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw DescriptorError(col, "unexpected parameter '" + key + "' for " + name,
                            std::string("write ") + it->usage.data());
  for (const auto& key : allowed)
    if (!d.params.contains(key))
      throw DescriptorError(kind_col, "missing parameter '" + key + "'",
                            std::string("write ") + it->usage.data());
  if (d.kind == K::Fixed) detail::positive_integer(d.params["tmax"], columns["tmax"], "tmax");

  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] != '|')
      throw DescriptorError(pos, "unexpected trailing text", "suffixes look like |trunc=100");
    ++pos;
    skip_ws();
    const std::size_t key_col = pos;
    const std::string key = detail::lower(read_ident());
    skip_ws();
    if (pos >= text.size() || text[pos] != '=')
      throw DescriptorError(pos, "expected '=' after '" + key + "'", "suffixes look like |trunc=100");
    ++pos;
    std::size_t value_col = 0;
    const double value = read_value(value_col);
    if (key != "trunc" && key != "horizon")
      throw DescriptorError(key_col, "unknown suffix '" + key + "'", "use |trunc=T or |horizon=H");
    auto& slot = key == "trunc" ? d.trunc : d.horizon;
    if (slot) throw DescriptorError(key_col, "duplicate suffix '" + key + "'", "");
    slot = detail::positive_integer(value, value_col, key);
  }

  // Range checks live in the schedule constructors.
  try {
    (void)detail::build_untruncated(d, 1);
  } catch (const DescriptorError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw DescriptorError(kind_col, ex.what(), "");
  }
  return d;
}

inline std::string format_descriptor(const ScheduleDescriptor& d) {
  std::string out(detail::info(d.kind).name);
  out += '(';
  bool first = true;
  for (const auto& [key, value] : d.params) {
    if (!first) out += ',';
    first = false;
    out += key + '=' + csv::shortest(value);
  }
  out += ')';
  if (d.trunc) out += "|trunc=" + std::to_string(*d.trunc);
  if (d.horizon) out += "|horizon=" + std::to_string(*d.horizon);
  return out;
}

/// Display label, e.g. "Truncated Beta-weighted mu=0.99 eta=0.5 T_max=100".
inline std::string descriptor_label(const ScheduleDescriptor& d) {
  using K = ScheduleDescriptor::Kind;
  auto num = [&](const char* key) { return csv::shortest(d.params.at(key)); };
  std::string base;
  switch (d.kind) {
    case K::Exponential: base = "Exponential gamma=" + num("gamma"); break;
    case K::Beta: base = "Beta-weighted mu=" + num("mu") + " eta=" + num("eta"); break;
    case K::Hyperbolic:
      base = d.params.contains("k") ? "Hyperbolic k=" + num("k") : "Hyperbolic mu=" + num("mu");
      break;
    case K::None: base = "No discounting"; break;
    case K::Fixed: base = "Fixed-horizon T_max=" + num("tmax"); break;
  }
  if (d.trunc) return "Truncated " + base + " T_max=" + std::to_string(*d.trunc);
  return base;
}

/// One descriptor per line; blank lines and '#' comments are skipped.
/// Errors carry the 1-based line number.
inline std::vector<ScheduleDescriptor> parse_descriptor_list(std::string_view text) {
  std::vector<ScheduleDescriptor> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!csv::trim(line).empty()) {
      try {
        out.push_back(parse_descriptor(line));
      } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + ex.what());
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace ugae
