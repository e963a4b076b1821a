#include "cuspbc/cli/pair_preset.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>

#include <fmt/format.h>

#include "cuspbc/cli/report.hpp"
#include "cuspbc/errors.hpp"

namespace cuspbc::cli {

namespace {

struct Token {
  std::string text;
  int column;
};

double parse_number(const Token& t, const std::string& value, int value_col) {
  if (value == "inf") return kInfiniteMass;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v)) {
    throw ParseError(fmt::format("pair: '{}' is not a number", t.text), 1, value_col);
  }
  return v;
}

int parse_int(const Token& t, const std::string& value, int value_col) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw ParseError(fmt::format("pair: '{}' needs an integer", t.text), 1, value_col);
  }
  return static_cast<int>(v);
}

}  // namespace

CoalescencePair parse_pair_preset(const std::vector<std::string>& tokens, bool fixed_nucleus) {
  std::vector<Token> toks;
  int col = 1;
  for (const auto& s : tokens) {
    toks.push_back({s, col});
    col += static_cast<int>(s.size()) + 1;
  }
  if (toks.empty()) throw ParseError("pair: empty", 1, 1);
  const std::string& preset = toks[0].text;

  if (preset == "e-e") {
    if (toks.size() > 2) throw ParseError("pair: unexpected token", 1, toks[2].column);
    if (toks.size() == 1) return electron_electron();
    if (toks[1].text == "singlet") return electron_electron(SpinChannel::singlet);
    if (toks[1].text == "triplet") return electron_electron(SpinChannel::triplet);
    throw ParseError("pair: spin channel must be 'singlet' or 'triplet'", 1, toks[1].column);
  }

  std::optional<double> z, q1, q2, m1, m2;
  std::optional<int> a;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const Token& t = toks[i];
    const auto eq = t.text.find('=');
    if (eq == std::string::npos) throw ParseError("pair: expected key=value", 1, t.column);
    const std::string key = t.text.substr(0, eq);
    const std::string val = t.text.substr(eq + 1);
    const int vcol = t.column + static_cast<int>(eq) + 1;
    if (preset == "e-nucleus" && key == "Z") {
      z = parse_number(t, val, vcol);
    } else if (preset == "e-nucleus" && key == "A") {
      a = parse_int(t, val, vcol);
    } else if (preset == "custom" && key == "q1") {
      q1 = parse_number(t, val, vcol);
    } else if (preset == "custom" && key == "q2") {
      q2 = parse_number(t, val, vcol);
    } else if (preset == "custom" && key == "m1") {
      m1 = parse_number(t, val, vcol);
    } else if (preset == "custom" && key == "m2") {
      m2 = parse_number(t, val, vcol);
    } else {
      throw ParseError(fmt::format("pair: unknown key '{}' for '{}'", key, preset), 1, t.column);
    }
  }

  if (preset == "e-nucleus") {
    if (!z) throw ParseError("pair: e-nucleus needs Z=<charge>", 1, col);
    if (fixed_nucleus) a.reset();
    try {
      return electron_nucleus(*z, a);
    } catch (const DomainError& e) {
      throw ParseError(std::string("pair: ") + e.what(), 1, toks[0].column);
    }
  }
  if (preset == "custom") {
    if (!q1 || !q2 || !m1 || !m2) throw ParseError("pair: custom needs q1, q2, m1 and m2", 1, col);
    CoalescencePair p{*q1, *q2, *m1, *m2, std::nullopt};
    if (fixed_nucleus) p.m2 = kInfiniteMass;
    try {
      p.validate();
    } catch (const DomainError& e) {
      throw ParseError(std::string("pair: ") + e.what(), 1, toks[0].column);
    }
    return p;
  }
  throw ParseError("pair: preset must be 'e-nucleus', 'e-e' or 'custom'", 1, 1);
}

std::string describe_pair(const CoalescencePair& p) {
  std::string s = fmt::format("q1={} q2={} m1={} m2={}", format_double(p.q1), format_double(p.q2),
                              format_double(p.m1), format_double(p.m2));
  if (p.spin_channel) s += *p.spin_channel == SpinChannel::singlet ? " singlet" : " triplet";
  return s;
}

}  // namespace cuspbc::cli
