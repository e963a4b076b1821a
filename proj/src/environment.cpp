#include "cuspbc/environment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <numbers>

#include <json.hpp>

#include "cuspbc/errors.hpp"
#include "cuspbc/numeric.hpp"
#include "cuspbc/special_functions.hpp"

namespace cuspbc {

namespace {

constexpr double kGuard = 0.999;
constexpr double kSingularDistance = 1e-12;

using Vec3 = std::array<double, 3>;

Vec3 direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

double cos_gamma(double theta, double phi, const PointCharge& c) {
  const double v = std::cos(theta) * std::cos(c.theta) +
                   std::sin(theta) * std::sin(c.theta) * std::cos(phi - c.phi);
  return std::clamp(v, -1.0, 1.0);
}

void check_inside(const Environment& env, double r) {
  if (r < 0.0) throw DomainError("environment: r must be non-negative");
  if (!(r < kGuard * env.convergence_radius())) {
    throw DomainError("environment: r outside the multipole convergence radius");
  }
}

}  // namespace

void Environment::validate() const {
  if (charges.empty()) throw DomainError("environment: at least one charge required");
  for (const auto& c : charges) {
    if (!(c.r > 0.0) || !std::isfinite(c.r)) {
      throw DomainError("environment: charge distances must be positive");
    }
    if (!std::isfinite(c.q) || !std::isfinite(c.theta) || !std::isfinite(c.phi)) {
      throw DomainError("environment: non-finite charge data");
    }
  }
}

double Environment::convergence_radius() const {
  validate();
  double rmin = charges.front().r;
  for (const auto& c : charges) rmin = std::min(rmin, c.r);
  return rmin;
}

double w0(const Environment& env, const CoalescencePair& pair) {
  env.validate();
  CompensatedSum s;
  for (const auto& c : env.charges) s += c.q / c.r;
  return (pair.q1 + pair.q2) * s.value();
}

double w_exact(const Environment& env, const CoalescencePair& pair, double r,
               double theta, double phi) {
  env.validate();
  pair.validate();
  if (r < 0.0) throw DomainError("w_exact: r must be non-negative");
  const Vec3 e = direction(theta, phi);
  const double f1 = pair.position_factor1() * r;
  const double f2 = -pair.position_factor2() * r;
  const Vec3 r1{f1 * e[0], f1 * e[1], f1 * e[2]};
  const Vec3 r2{f2 * e[0], f2 * e[1], f2 * e[2]};
  CompensatedSum s;
  for (const auto& c : env.charges) {
    const Vec3 ri = direction(c.theta, c.phi);
    const Vec3 pos{c.r * ri[0], c.r * ri[1], c.r * ri[2]};
    const double d1 = distance(r1, pos);
    const double d2 = distance(r2, pos);
    if (d1 < kSingularDistance || d2 < kSingularDistance) {
      throw SingularityError("w_exact: coalescing particle coincides with a charge");
    }
    s += c.q * pair.q1 / d1;
    s += c.q * pair.q2 / d2;
  }
  return s.value();
}

double multipole_pair_factor(const CoalescencePair& pair, int lambda) {
  if (lambda < 0) throw DomainError("multipole degree must be non-negative");
  const double t1 = pair.q1 * std::pow(pair.position_factor1(), lambda);
  const double t2 = pair.q2 * std::pow(pair.position_factor2(), lambda);
  return lambda % 2 == 0 ? t1 + t2 : t1 - t2;
}

double w_multipole_term(const Environment& env, const CoalescencePair& pair,
                        double r, double theta, double phi, int lambda) {
  env.validate();
  pair.validate();
  check_inside(env, r);
  const double factor = multipole_pair_factor(pair, lambda);
  if (factor == 0.0) return 0.0;
  CompensatedSum s;
  for (const auto& c : env.charges) {
    s += c.q / std::pow(c.r, lambda + 1) * legendre_p(lambda, cos_gamma(theta, phi, c));
  }
  return factor * std::pow(r, lambda) * s.value();
}

double w_multipole(const Environment& env, const CoalescencePair& pair, double r,
                   double theta, double phi, int lambda_max) {
  if (lambda_max < 0) throw DomainError("w_multipole: lambda_max must be non-negative");
  CompensatedSum s;
  for (int lambda = 0; lambda <= lambda_max; ++lambda) {
    s += w_multipole_term(env, pair, r, theta, phi, lambda);
  }
  return s.value();
}

double spherical_average_w(const Environment& env, const CoalescencePair& pair,
                           double r, int n_theta, int n_phi) {
  env.validate();
  check_inside(env, r);
  if (n_theta < 1 || n_phi < 1) throw DomainError("spherical average: bad quadrature size");
  const QuadratureRule gl = gauss_legendre(n_theta);
  CompensatedSum s;
  for (int it = 0; it < n_theta; ++it) {
    const double theta = std::acos(gl.nodes[it]);
    CompensatedSum ring;
    for (int ip = 0; ip < n_phi; ++ip) {
      ring += w_exact(env, pair, r, theta, 2.0 * std::numbers::pi * ip / n_phi);
    }
    s += gl.weights[it] * ring.value();
  }
  return s.value() / (2.0 * n_phi);
}

Environment parse_environment_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    int column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("environment JSON: malformed document", line, column);
  }
  if (!doc.is_object() || !doc.contains("charges") || !doc["charges"].is_array()) {
    throw ParseError("environment JSON: expected an object with a 'charges' array", 1, 1);
  }
  Environment env;
  for (const auto& item : doc["charges"]) {
    PointCharge c;
    try {
      c.q = item.at("q").get<double>();
      c.r = item.at("r").get<double>();
      c.theta = item.value("theta", 0.0);
      c.phi = item.value("phi", 0.0);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("environment JSON: ") + e.what(), 1, 1);
    }
    env.charges.push_back(c);
  }
  env.validate();
  return env;
}

Environment read_environment_json(std::istream& is) {
  const std::string text(std::istreambuf_iterator<char>(is), {});
  return parse_environment_json(text);
}

std::string environment_to_json(const Environment& env) {
  nlohmann::json doc;
  doc["charges"] = nlohmann::json::array();
  for (const auto& c : env.charges) {
    doc["charges"].push_back({{"q", c.q}, {"r", c.r}, {"theta", c.theta}, {"phi", c.phi}});
  }
  return doc.dump(2);
}

}  // namespace cuspbc
